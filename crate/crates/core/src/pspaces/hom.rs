//! Morphisms out of a binary tensor and their transposes along the two
//! internal homs.
//!
//! A point of `{E,F}_L(a)` is a natural map `E -> F∘s^L_a`, i.e. a family
//! `E(ℓ) -> F(a+ℓ)`; `{D,F}_R(b)` is the same with `s^R_b` and `F(ℓ+b)`.
//! Those levels are infinite, so the hom-objects are never materialized;
//! only the transposes of generator data are.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gmaps::{shift_left, shift_right};
use crate::rational::Length;
use crate::tensorcalc::{tensor_space, TensorClass, TensorSpace};

use super::{check_image, restrict, CellKind, Element, ElementData, Generator, Image, PSpace};

/// A generator of `D ⊗ E`: one generator from each factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorGenerator {
    pub left: Generator,
    pub right: Generator,
}

/// A natural map `D ⊗ E -> F`, given on the generators of the tensor.
///
/// Free⊗free generators go to points of `F` at length `a+b`. Every other
/// generator goes to a constant label: there is no natural family out of a
/// free⊗constant cell into a free cell, since it would have to be fixed by
/// every automorphism of the constant side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorMorphism {
    space: TensorSpace,
    target: PSpace,
    assignment: BTreeMap<TensorGenerator, Image>,
}

fn pair_arity(d: &PSpace, e: &PSpace, g: &TensorGenerator) -> Option<Length> {
    let a = d.cell(&g.left.0)?.arity()?;
    let b = e.cell(&g.right.0)?.arity()?;
    Some(a + b)
}

impl TensorMorphism {
    pub fn new(
        space: TensorSpace,
        target: PSpace,
        assignment: BTreeMap<TensorGenerator, Image>,
    ) -> Result<Self> {
        let (d, e) = (space.left(), space.right());
        let mut count = 0;
        for (dc, u) in d.generators() {
            for (ec, v) in e.generators() {
                let g = TensorGenerator {
                    left: (dc.id().clone(), u.clone()),
                    right: (ec.id().clone(), v.clone()),
                };
                let image = assignment.get(&g).ok_or_else(|| {
                    Error::Morphism(format!(
                        "no image for generator {}/{} ⊗ {}/{}",
                        dc.id(),
                        u,
                        ec.id(),
                        v
                    ))
                })?;
                match pair_arity(d, e, &g) {
                    Some(len) => check_image(&target, true, &len, image)?,
                    None => check_image(&target, false, &Length::of(1, 1), image)?,
                }
                count += 1;
            }
        }
        if assignment.len() != count {
            return Err(Error::Morphism(
                "assignment names generators outside the tensor".into(),
            ));
        }
        Ok(TensorMorphism {
            space,
            target,
            assignment,
        })
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn target(&self) -> &PSpace {
        &self.target
    }

    pub fn assignment(&self) -> &BTreeMap<TensorGenerator, Image> {
        &self.assignment
    }

    /// Evaluates at a class of `(D ⊗ E)(L)`.
    pub fn apply(&self, c: &TensorClass) -> Result<Element> {
        if c.arity() != 2 {
            return Err(Error::Morphism("expected a binary class".into()));
        }
        c.check_factors(&[self.space.left(), self.space.right()])
            .map_err(|e| Error::Morphism(e.to_string()))?;
        let gens = c.generators();
        let g = TensorGenerator {
            left: gens[0].clone(),
            right: gens[1].clone(),
        };
        match (&self.assignment[&g], c.joined_map()) {
            (Image::At(y), Some(joined)) => restrict(y, &joined),
            (Image::Const { cell, label }, _) => Ok(Element::constant(
                cell.clone(),
                c.length().clone(),
                label.clone(),
            )),
            (Image::At(_), None) => unreachable!("validated: point images only on free pairs"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftSide {
    Left,
    Right,
}

/// A natural map `source -> target∘s_shift`, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedMorphism {
    side: ShiftSide,
    shift: Length,
    source: PSpace,
    target: PSpace,
    assignment: BTreeMap<Generator, Image>,
}

impl ShiftedMorphism {
    pub fn new(
        side: ShiftSide,
        shift: Length,
        source: PSpace,
        target: PSpace,
        assignment: BTreeMap<Generator, Image>,
    ) -> Result<Self> {
        let mut count = 0;
        for (cell, label) in source.generators() {
            let image = assignment
                .get(&(cell.id().clone(), label.clone()))
                .ok_or_else(|| {
                    Error::Morphism(format!("no image for generator {}/{label}", cell.id()))
                })?;
            match cell.kind() {
                CellKind::Free { arity } => check_image(&target, true, &(&shift + arity), image)?,
                CellKind::Const => check_image(&target, false, &shift, image)?,
            }
            count += 1;
        }
        if assignment.len() != count {
            return Err(Error::Morphism(
                "assignment names generators outside the source".into(),
            ));
        }
        Ok(ShiftedMorphism {
            side,
            shift,
            source,
            target,
            assignment,
        })
    }

    pub fn side(&self) -> ShiftSide {
        self.side
    }

    pub fn shift(&self) -> &Length {
        &self.shift
    }

    pub fn source(&self) -> &PSpace {
        &self.source
    }

    pub fn target(&self) -> &PSpace {
        &self.target
    }

    pub fn assignment(&self) -> &BTreeMap<Generator, Image> {
        &self.assignment
    }

    /// `y ∈ E(ℓ)` goes to a point of `F(a+ℓ)` (left) or `F(ℓ+a)` (right).
    pub fn apply(&self, y: &Element) -> Result<Element> {
        self.source
            .check_element(y)
            .map_err(|e| Error::Morphism(e.to_string()))?;
        match (&self.assignment[&y.generator()], &y.data) {
            (Image::At(img), ElementData::Free { map, .. }) => {
                let along = match self.side {
                    ShiftSide::Left => shift_left(&self.shift, map),
                    ShiftSide::Right => shift_right(&self.shift, map),
                };
                restrict(img, &along)
            }
            (Image::Const { cell, label }, _) => Ok(Element::constant(
                cell.clone(),
                &self.shift + &y.length,
                label.clone(),
            )),
            (Image::At(_), ElementData::Const { .. }) => {
                unreachable!("validated: constant generators")
            }
        }
    }
}

/// Transposed data: one shifted morphism per free generator of the factor
/// being curried away.
pub type Transpose = BTreeMap<Generator, ShiftedMorphism>;

fn free_generators(space: &PSpace, side: &str) -> Result<Vec<(Generator, Length)>> {
    space
        .generators()
        .map(|(c, l)| match c.kind() {
            CellKind::Free { arity } => Ok(((c.id().clone(), l.clone()), arity.clone())),
            CellKind::Const => Err(Error::UnsupportedTranspose(format!(
                "{side} factor has constant generator {}/{l}",
                c.id()
            ))),
        })
        .collect()
}

/// `[D⊗E, F] -> [D, {E,F}_L]`: each free generator `(a, u)` of `D` goes to
/// `E -> F∘s^L_a`, `v ↦ m(u ⊗ v)`.
pub fn curry_left(m: &TensorMorphism) -> Result<Transpose> {
    let (d, e) = (m.space.left(), m.space.right());
    free_generators(d, "left")?
        .into_iter()
        .map(|(gd, a)| {
            let assignment = e
                .generators()
                .map(|(ec, v)| {
                    let ge = (ec.id().clone(), v.clone());
                    let image = m.assignment[&TensorGenerator {
                        left: gd.clone(),
                        right: ge.clone(),
                    }]
                        .clone();
                    (ge, image)
                })
                .collect();
            let sm =
                ShiftedMorphism::new(ShiftSide::Left, a, e.clone(), m.target.clone(), assignment)?;
            Ok((gd, sm))
        })
        .collect()
}

/// Inverse of [`curry_left`].
pub fn uncurry_left(d: &PSpace, e: &PSpace, f: &PSpace, t: &Transpose) -> Result<TensorMorphism> {
    let gens = free_generators(d, "left")?;
    if t.len() != gens.len() {
        return Err(Error::Morphism(
            "transpose names generators outside the left factor".into(),
        ));
    }
    let mut assignment = BTreeMap::new();
    for (gd, a) in gens {
        let sm = t
            .get(&gd)
            .ok_or_else(|| Error::Morphism(format!("no transpose for {}/{}", gd.0, gd.1)))?;
        if sm.side != ShiftSide::Left || sm.shift != a || &sm.source != e || &sm.target != f {
            return Err(Error::Morphism(format!(
                "transpose for {}/{} has the wrong shape",
                gd.0, gd.1
            )));
        }
        for (ge, image) in &sm.assignment {
            assignment.insert(
                TensorGenerator {
                    left: gd.clone(),
                    right: ge.clone(),
                },
                image.clone(),
            );
        }
    }
    TensorMorphism::new(tensor_space(d, e), f.clone(), assignment)
}

/// `[D⊗E, F] -> [E, {D,F}_R]`: each free generator `(b, v)` of `E` goes to
/// `D -> F∘s^R_b`, `u ↦ m(u ⊗ v)`.
pub fn curry_right(m: &TensorMorphism) -> Result<Transpose> {
    let (d, e) = (m.space.left(), m.space.right());
    free_generators(e, "right")?
        .into_iter()
        .map(|(ge, b)| {
            let assignment = d
                .generators()
                .map(|(dc, u)| {
                    let gd = (dc.id().clone(), u.clone());
                    let image = m.assignment[&TensorGenerator {
                        left: gd.clone(),
                        right: ge.clone(),
                    }]
                        .clone();
                    (gd, image)
                })
                .collect();
            let sm =
                ShiftedMorphism::new(ShiftSide::Right, b, d.clone(), m.target.clone(), assignment)?;
            Ok((ge, sm))
        })
        .collect()
}

/// Inverse of [`curry_right`].
pub fn uncurry_right(d: &PSpace, e: &PSpace, f: &PSpace, t: &Transpose) -> Result<TensorMorphism> {
    let gens = free_generators(e, "right")?;
    if t.len() != gens.len() {
        return Err(Error::Morphism(
            "transpose names generators outside the right factor".into(),
        ));
    }
    let mut assignment = BTreeMap::new();
    for (ge, b) in gens {
        let sm = t
            .get(&ge)
            .ok_or_else(|| Error::Morphism(format!("no transpose for {}/{}", ge.0, ge.1)))?;
        if sm.side != ShiftSide::Right || sm.shift != b || &sm.source != d || &sm.target != f {
            return Err(Error::Morphism(format!(
                "transpose for {}/{} has the wrong shape",
                ge.0, ge.1
            )));
        }
        for (gd, image) in &sm.assignment {
            assignment.insert(
                TensorGenerator {
                    left: gd.clone(),
                    right: ge.clone(),
                },
                image.clone(),
            );
        }
    }
    TensorMorphism::new(tensor_space(d, e), f.clone(), assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmaps::{identity, mu, tensor_map, PLMap};
    use crate::pspaces::{CellId, Label};
    use crate::rational::ratio;
    use crate::tensorcalc::{canonicalize, RawTriple};

    fn l(p: i64, q: i64) -> Length {
        Length::of(p, q)
    }

    /// The canonical iso `𝔽_a{u} ⊗ 𝔽_b{v} -> 𝔽_{a+b}{w}`.
    fn canonical_iso() -> TensorMorphism {
        let (a, b) = (l(1, 1), l(2, 1));
        let d = PSpace::free("d", a.clone(), &["u"]).unwrap();
        let e = PSpace::free("e", b.clone(), &["v"]).unwrap();
        let f = PSpace::free("f", &a + &b, &["w"]).unwrap();
        let mut assignment = BTreeMap::new();
        assignment.insert(
            TensorGenerator {
                left: (CellId::new("d"), Label::new("u")),
                right: (CellId::new("e"), Label::new("v")),
            },
            Image::At(Element::free(
                CellId::new("f"),
                identity(&(&a + &b)),
                Label::new("w"),
            )),
        );
        TensorMorphism::new(tensor_space(&d, &e), f, assignment).unwrap()
    }

    #[test]
    fn curry_left_of_canonical_iso() {
        let m = canonical_iso();
        let t = curry_left(&m).unwrap();
        let sm = &t[&(CellId::new("d"), Label::new("u"))];
        assert_eq!(sm.shift(), &l(1, 1));
        assert_eq!(
            sm.assignment()[&(CellId::new("e"), Label::new("v"))],
            Image::At(Element::free(
                CellId::new("f"),
                identity(&l(3, 1)),
                Label::new("w")
            ))
        );
        let back = uncurry_left(m.space().left(), m.space().right(), m.target(), &t).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn curry_right_round_trip() {
        let m = canonical_iso();
        let t = curry_right(&m).unwrap();
        let back = uncurry_right(m.space().left(), m.space().right(), m.target(), &t).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn transpose_formula_matches_evaluation() {
        let m = canonical_iso();
        let f = PLMap::from_breaks(vec![
            (ratio(0, 1), ratio(0, 1)),
            (ratio(1, 2), ratio(2, 3)),
            (ratio(2, 1), ratio(1, 1)),
        ])
        .unwrap();
        let g = mu(&l(2, 1)).inverse();
        let x = Element::free(CellId::new("d"), f.clone(), Label::new("u"));
        let y = Element::free(CellId::new("e"), g.clone(), Label::new("v"));
        let class = canonicalize(
            &RawTriple::new(
                identity(&(&x.length + &y.length)),
                vec![x.clone(), y.clone()],
            )
            .unwrap(),
        )
        .unwrap();
        let direct = m.apply(&class).unwrap();

        let left = curry_left(&m).unwrap();
        let via_left = left[&x.generator()].apply(&y).unwrap();
        let via_left = restrict(&via_left, &tensor_map(&f, &identity(&y.length))).unwrap();
        assert_eq!(via_left, direct);

        let right = curry_right(&m).unwrap();
        let via_right = right[&y.generator()].apply(&x).unwrap();
        let via_right = restrict(&via_right, &tensor_map(&identity(&x.length), &g)).unwrap();
        assert_eq!(via_right, direct);
    }

    #[test]
    fn const_generators_cannot_be_curried_away() {
        let d = PSpace::constant("k", &["c"]).unwrap();
        let e = PSpace::free("e", l(1, 1), &["v"]).unwrap();
        let f = PSpace::constant("z", &["w"]).unwrap();
        let mut assignment = BTreeMap::new();
        assignment.insert(
            TensorGenerator {
                left: (CellId::new("k"), Label::new("c")),
                right: (CellId::new("e"), Label::new("v")),
            },
            Image::Const {
                cell: CellId::new("z"),
                label: Label::new("w"),
            },
        );
        let m = TensorMorphism::new(tensor_space(&d, &e), f.clone(), assignment).unwrap();
        assert!(matches!(
            curry_left(&m),
            Err(Error::UnsupportedTranspose(_))
        ));
        let t = curry_right(&m).unwrap();
        assert_eq!(uncurry_right(&d, &e, &f, &t).unwrap(), m);
    }

    #[test]
    fn mixed_generators_need_constant_images() {
        let d = PSpace::free("d", l(1, 1), &["u"]).unwrap();
        let e = PSpace::constant("k", &["c"]).unwrap();
        let f = PSpace::free("f", l(1, 1), &["w"]).unwrap();
        let mut assignment = BTreeMap::new();
        assignment.insert(
            TensorGenerator {
                left: (CellId::new("d"), Label::new("u")),
                right: (CellId::new("k"), Label::new("c")),
            },
            Image::At(Element::free(
                CellId::new("f"),
                identity(&l(1, 1)),
                Label::new("w"),
            )),
        );
        assert!(matches!(
            TensorMorphism::new(tensor_space(&d, &e), f, assignment),
            Err(Error::Morphism(_))
        ));
    }
}
