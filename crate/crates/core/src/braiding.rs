//! The objectwise braiding `(D ⊗ E)(L) -> (E ⊗ D)(L)` of G-spaces.
//!
//! On maps, a `ψ: L -> ℓ₁ + ℓ₂` splits uniquely as `ψ₁ ⊗ ψ₂` and the braid is
//! `ψ₂ ⊗ ψ₁`. On classes this swaps the two halves of the segment normal
//! form. The braid is a bijection at every length but it does not commute
//! with restriction, and the naive swap `(ψ, x₁, x₂) ↦ (ψ, x₂, x₁)` is not
//! even well defined; both failures are exhibited here.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gmaps::{compose, decompose_map, identity, mu, tensor_map, PLMap};
use crate::pspaces::{CellId, Element, Label, PSpace};
use crate::rational::{int, ratio, Length, Rational};
use crate::tensorcalc::{canonicalize, restrict_class, RawTriple, Slot, TensorClass};

/// `B₂` on `G(2, L')`: split at `t = 1` and swap the halves.
pub fn braid2(phi: &PLMap) -> Result<PLMap> {
    if phi.dom().value() != &int(2) {
        return Err(Error::Braid(format!(
            "braid2 needs a map out of [0,2], got domain {}",
            phi.dom()
        )));
    }
    let first = phi.slice(&int(0), &int(1))?;
    let second = phi.slice(&int(1), &int(2))?;
    Ok(tensor_map(&second, &first))
}

/// `B_L^{ℓ₁,ℓ₂}`: with `ψ = ψ₁ ⊗ ψ₂` split over `(ℓ₁, ℓ₂)`, returns `ψ₂ ⊗ ψ₁`.
pub fn braid_map(psi: &PLMap, l1: &Length, l2: &Length) -> Result<PLMap> {
    let (p1, p2) = decompose_map(psi, l1, l2).map_err(|e| Error::Braid(e.to_string()))?;
    Ok(tensor_map(&p2, &p1))
}

/// The same braid computed through `B₂`:
/// `B₂(ψ(μ_s⁻¹ ⊗ μ_{L-s}⁻¹))(μ_{L-s} ⊗ μ_s)` with `s = ψ⁻¹(ℓ₁)`.
pub fn braid_map_via_mu(psi: &PLMap, l1: &Length, l2: &Length) -> Result<PLMap> {
    if psi.cod() != &(l1 + l2) {
        return Err(Error::Braid(format!(
            "ψ lands in {}, not {} + {}",
            psi.cod(),
            l1,
            l2
        )));
    }
    let s = Length::new(psi.eval_inverse(l1.value())?).expect("ψ⁻¹(ℓ₁) > 0");
    let rest = psi.dom().checked_sub(&s).expect("ψ⁻¹(ℓ₁) < L");
    let unscale = tensor_map(&mu(&s).inverse(), &mu(&rest).inverse());
    let rescale = tensor_map(&mu(&rest), &mu(&s));
    let on_two = compose(&unscale, psi)?;
    compose(&rescale, &braid2(&on_two)?)
}

/// The braid on a binary class: the second factor's content moves to the
/// front, the first factor's content follows.
pub fn braid_class(c: &TensorClass) -> Result<TensorClass> {
    let [first, second] = c.slots() else {
        return Err(Error::Braid(format!(
            "braid_class needs a binary class, got {} slots",
            c.arity()
        )));
    };
    // extent of the first factor's content
    let cut = match (first, second) {
        (Slot::Free { end, .. }, _) => end.clone(),
        (_, Slot::Free { start, .. }) => start.clone(),
        _ => Rational::zero(),
    };
    let tail = c.length().value() - &cut;
    let slots = vec![second.translated(&-&cut), first.translated(&tail)];
    TensorClass::new(c.length().clone(), slots)
}

/// Both sides of the naturality square for the braid at one class and one
/// restriction map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub x: TensorClass,
    pub omega: PLMap,
    /// `B(x).ω`
    pub lhs: TensorClass,
    /// `B(x.ω)`
    pub rhs: TensorClass,
    pub equal: bool,
}

pub fn naturality_square(x: &TensorClass, omega: &PLMap) -> Result<WitnessReport> {
    let lhs = restrict_class(&braid_class(x)?, omega)?;
    let rhs = braid_class(&restrict_class(x, omega)?)?;
    Ok(WitnessReport {
        x: x.clone(),
        omega: omega.clone(),
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

fn generator_point(space: &PSpace) -> Result<Element> {
    let cell = space
        .cells()
        .iter()
        .find(|c| c.is_free())
        .unwrap_or(&space.cells()[0]);
    space.generator_element(cell.id(), &cell.labels()[0])
}

/// Searches for a failure of naturality at the generator class of `D ⊗ E`
/// (preferring free cells) over a fixed family of one-kink maps `L -> L`.
/// Returns the first unequal square, or the last one tried when every
/// square commutes.
pub fn naturality_witness(d: &PSpace, e: &PSpace) -> Result<WitnessReport> {
    let (x1, x2) = (generator_point(d)?, generator_point(e)?);
    let total = &x1.length + &x2.length;
    let x = canonicalize(&RawTriple::new(identity(&total), vec![x1.clone(), x2])?)?;
    let (a, len) = (x1.length.value().clone(), total.value().clone());
    let half = ratio(1, 2);
    let quarter = ratio(1, 4);
    let kinks = [
        (&a * &half, a.clone()),
        (&a + (&len - &a) * &half, a.clone()),
        (&len * &quarter, &len * &half),
        (&len * &half, &len * &quarter),
        (&len * ratio(3, 4), &len * &half),
        (&len * &half, &len * ratio(3, 4)),
    ];
    let mut last = None;
    for (t, v) in kinks {
        if t == v {
            continue;
        }
        let omega = PLMap::from_breaks(vec![(int(0), int(0)), (t, v), (len.clone(), len.clone())])?;
        let report = naturality_square(&x, &omega)?;
        if !report.equal {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("at least one kink differs from the diagonal"))
}

/// The shipped witness: `D = E = 𝔽₁{u}`, `L = 2`, `ω` through `(1/2, 1)`.
pub fn non_naturality_fixture() -> WitnessReport {
    let d = PSpace::free("d", Length::of(1, 1), &["u"]).expect("valid fixture");
    naturality_witness(&d, &d).expect("valid fixture")
}

/// Outcome of swapping the points of two equivalent representatives without
/// touching `ψ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaiveSwapReport {
    pub r: RawTriple,
    pub rewritten: RawTriple,
    /// class of `(ψ, x₂, x₁)` for `r`
    pub canon1: TensorClass,
    /// class of `(ψ', x₂', x₁')` for the rewrite
    pub canon2: TensorClass,
    pub welldefined: bool,
    /// whether the real braid sends both representatives to the same class
    pub braid_agrees: bool,
}

/// Rewrites `r = (ψ, y₁, y₂)` along `φ₁, φ₂` to `((φ₁ ⊗ φ₂)ψ, x₁, x₂)` with
/// `xᵢφᵢ = yᵢ`, then compares the naive swaps of the two representatives.
pub fn naive_swap_check(r: &RawTriple, phi1: &PLMap, phi2: &PLMap) -> Result<NaiveSwapReport> {
    if r.parts.len() != 2 {
        return Err(Error::Braid(
            "naive swap needs a binary representative".into(),
        ));
    }
    let rewritten = r.push_all(&[phi1.clone(), phi2.clone()])?;
    let swap =
        |t: &RawTriple| RawTriple::new(t.psi.clone(), vec![t.parts[1].clone(), t.parts[0].clone()]);
    let canon1 = canonicalize(&swap(r)?)?;
    let canon2 = canonicalize(&swap(&rewritten)?)?;
    let braid_agrees = braid_class(&canonicalize(r)?)? == braid_class(&canonicalize(&rewritten)?)?;
    Ok(NaiveSwapReport {
        r: r.clone(),
        rewritten,
        welldefined: canon1 == canon2,
        canon1,
        canon2,
        braid_agrees,
    })
}

/// The shipped instance: `ψ = id₂`, `φ₁ = id₁`, `φ₂` bent through `(1/3, 2/3)`.
pub fn naive_swap_fixture() -> NaiveSwapReport {
    let one = Length::of(1, 1);
    let point = Element::free(CellId::new("d"), identity(&one), Label::new("u"));
    let r = RawTriple::new(identity(&Length::of(2, 1)), vec![point.clone(), point])
        .expect("valid fixture");
    let bent = PLMap::from_breaks(vec![
        (int(0), int(0)),
        (ratio(1, 3), ratio(2, 3)),
        (int(1), int(1)),
    ])
    .expect("valid fixture");
    naive_swap_check(&r, &identity(&one), &bent).expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmaps::split_codomain;

    fn bent(points: &[(i64, i64, i64, i64)]) -> PLMap {
        PLMap::from_breaks(
            points
                .iter()
                .map(|&(a, b, c, d)| (ratio(a, b), ratio(c, d)))
                .collect(),
        )
        .unwrap()
    }

    fn l(p: i64, q: i64) -> Length {
        Length::of(p, q)
    }

    #[test]
    fn braid2_examples() {
        let two = l(2, 1);
        assert_eq!(braid2(&identity(&two)).unwrap(), identity(&two));
        let phi = bent(&[(0, 1, 0, 1), (1, 1, 2, 1), (2, 1, 3, 1)]);
        assert_eq!(
            braid2(&phi).unwrap(),
            bent(&[(0, 1, 0, 1), (1, 1, 1, 1), (2, 1, 3, 1)])
        );
        assert_eq!(braid2(&braid2(&phi).unwrap()).unwrap(), phi);
        assert!(matches!(braid2(&identity(&l(3, 1))), Err(Error::Braid(_))));
    }

    #[test]
    fn braid_map_examples() {
        let (a, b) = (l(2, 3), l(5, 4));
        let id = identity(&(&a + &b));
        assert_eq!(braid_map(&id, &a, &b).unwrap(), id);

        let one = l(1, 1);
        let f1 = bent(&[(0, 1, 0, 1), (1, 4, 3, 4), (1, 1, 1, 1)]);
        let psi = tensor_map(&f1, &identity(&one));
        assert_eq!(
            braid_map(&psi, &one, &one).unwrap(),
            tensor_map(&identity(&one), &f1)
        );
        assert!(matches!(
            braid_map(&psi, &one, &l(2, 1)),
            Err(Error::Braid(_))
        ));
    }

    #[test]
    fn mu_formula_agrees() {
        let psi = bent(&[(0, 1, 0, 1), (1, 2, 2, 1), (2, 1, 5, 2), (3, 1, 4, 1)]);
        let (l1, l2) = (l(3, 2), l(5, 2));
        let direct = braid_map(&psi, &l1, &l2).unwrap();
        assert_eq!(braid_map_via_mu(&psi, &l1, &l2).unwrap(), direct);
        assert_eq!(braid_map(&direct, &l2, &l1).unwrap(), psi);
    }

    #[test]
    fn symmetric_class_is_fixed_up_to_labels() {
        let one = l(1, 1);
        let u = Element::free(CellId::new("d"), identity(&one), Label::new("u"));
        let v = Element::free(CellId::new("d"), identity(&one), Label::new("v"));
        let c =
            canonicalize(&RawTriple::new(identity(&l(2, 1)), vec![u.clone(), v.clone()]).unwrap())
                .unwrap();
        let swapped =
            canonicalize(&RawTriple::new(identity(&l(2, 1)), vec![v, u]).unwrap()).unwrap();
        assert_eq!(braid_class(&c).unwrap(), swapped);
        assert_eq!(braid_class(&braid_class(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn braid_class_matches_braided_representative() {
        let psi = bent(&[(0, 1, 0, 1), (1, 1, 2, 1), (5, 2, 3, 1)]);
        let x1 = Element::free(
            CellId::new("d"),
            bent(&[(0, 1, 0, 1), (1, 1, 1, 2), (2, 1, 1, 1)]),
            Label::new("u"),
        );
        let x2 = Element::constant(CellId::new("k"), l(1, 1), Label::new("c"));
        let r = RawTriple::new(psi.clone(), vec![x1.clone(), x2.clone()]).unwrap();
        let braided = braid_map(&psi, &x1.length, &x2.length).unwrap();
        let expected = canonicalize(&RawTriple::new(braided, vec![x2, x1]).unwrap()).unwrap();
        assert_eq!(braid_class(&canonicalize(&r).unwrap()).unwrap(), expected);
    }

    #[test]
    fn fixture_is_not_natural() {
        let w = non_naturality_fixture();
        assert!(!w.equal);
        assert_eq!(w.omega, bent(&[(0, 1, 0, 1), (1, 2, 1, 1), (2, 1, 2, 1)]));
        let one = l(1, 1);
        let pieces = split_codomain(&w.omega, &[one.clone(), one]).unwrap();
        let (w1, w2) = (&pieces[0].map, &pieces[1].map);
        assert_eq!(w.lhs.joined_map().unwrap(), tensor_map(w1, w2));
        assert_eq!(w.rhs.joined_map().unwrap(), tensor_map(w2, w1));
    }

    #[test]
    fn identity_square_commutes() {
        let w = non_naturality_fixture();
        let sq = naturality_square(&w.x, &identity(w.x.length())).unwrap();
        assert!(sq.equal);
    }

    #[test]
    fn const_pair_has_no_witness() {
        let k = PSpace::constant("k", &["a"]).unwrap();
        let m = PSpace::constant("m", &["b"]).unwrap();
        assert!(naturality_witness(&k, &m).unwrap().equal);
    }

    #[test]
    fn naive_swap_fixture_disagrees() {
        let rep = naive_swap_fixture();
        assert!(!rep.welldefined);
        assert!(rep.braid_agrees);
    }

    #[test]
    fn naive_swap_is_consistent_for_trivial_rewrite() {
        let one = l(1, 1);
        let point = Element::free(CellId::new("d"), identity(&one), Label::new("u"));
        let r = RawTriple::new(identity(&l(2, 1)), vec![point.clone(), point]).unwrap();
        let rep = naive_swap_check(&r, &identity(&one), &identity(&one)).unwrap();
        assert!(rep.welldefined);
        assert!(rep.braid_agrees);
    }
}
