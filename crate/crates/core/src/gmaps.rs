//! Morphisms of the reparametrization category: monotone piecewise-linear
//! bijections `[0, dom] -> [0, cod]` with rational breakpoints.
//!
//! A [`PLMap`] is stored as its minimal breakpoint list. Collinear interior
//! points are merged on construction, so two maps are equal as functions
//! exactly when their break lists are equal, and `==` is functional equality.
//!
//! Composition is written in diagrammatic order: `compose(f, g)` applies `f`
//! first and returns `g ∘ f`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_rational, Length, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PLMapRepr", into = "PLMapRepr")]
pub struct PLMap {
    dom: Length,
    cod: Length,
    breaks: Vec<(Rational, Rational)>,
}

/// A piece of a map cut out along a domain window, remembering where it sat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub start: Rational,
    pub end: Rational,
    pub map: PLMap,
}

fn collinear(a: &(Rational, Rational), b: &(Rational, Rational), c: &(Rational, Rational)) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

impl PLMap {
    /// Validates and canonicalizes a breakpoint list.
    pub fn from_breaks(breaks: Vec<(Rational, Rational)>) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::InvalidMap(
                "at least two breakpoints are required".into(),
            ));
        }
        if !breaks[0].0.is_zero() || !breaks[0].1.is_zero() {
            return Err(Error::InvalidMap("first breakpoint must be (0,0)".into()));
        }
        for w in breaks.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidMap(format!(
                    "breakpoint inputs must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
            if w[1].1 <= w[0].1 {
                return Err(Error::InvalidMap(format!(
                    "breakpoint values must be strictly increasing ({} then {})",
                    w[0].1, w[1].1
                )));
            }
        }
        Ok(Self::from_monotone_points(breaks))
    }

    /// Builds from points already known to start at the origin and increase
    /// strictly in both coordinates.
    fn from_monotone_points(points: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
        for p in points {
            if out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
                out.pop();
            }
            out.push(p);
        }
        let (dom, cod) = out.last().cloned().expect("nonempty");
        PLMap {
            dom: Length::new(dom).expect("monotone from origin"),
            cod: Length::new(cod).expect("monotone from origin"),
            breaks: out,
        }
    }

    pub fn dom(&self) -> &Length {
        &self.dom
    }

    pub fn cod(&self) -> &Length {
        &self.cod
    }

    pub fn breaks(&self) -> &[(Rational, Rational)] {
        &self.breaks
    }

    pub fn is_linear(&self) -> bool {
        self.breaks.len() == 2
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if t.is_negative() || t > self.dom.value() {
            return Err(Error::Domain {
                t: t.to_string(),
                dom: self.dom.to_string(),
            });
        }
        Ok(interpolate(&self.breaks, t, false))
    }

    /// Evaluates the inverse bijection at `v`.
    pub fn eval_inverse(&self, v: &Rational) -> Result<Rational> {
        if v.is_negative() || v > self.cod.value() {
            return Err(Error::Domain {
                t: v.to_string(),
                dom: self.cod.to_string(),
            });
        }
        Ok(interpolate(&self.breaks, v, true))
    }

    pub fn inverse(&self) -> PLMap {
        PLMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            breaks: self
                .breaks
                .iter()
                .map(|(t, v)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    /// The restriction to the domain window `[a, b]`, translated so that it
    /// becomes a map `[0, b-a] -> [0, f(b)-f(a)]`.
    pub fn slice(&self, a: &Rational, b: &Rational) -> Result<PLMap> {
        if a >= b {
            return Err(Error::Split(format!("empty window [{a}, {b}]")));
        }
        let fa = self.eval(a)?;
        let fb = self.eval(b)?;
        let mut points = vec![(Rational::zero(), Rational::zero())];
        points.extend(
            self.breaks
                .iter()
                .filter(|(t, _)| t > a && t < b)
                .map(|(t, v)| (t - a, v - &fa)),
        );
        points.push((b - a, fb - &fa));
        Ok(Self::from_monotone_points(points))
    }
}

/// Linear interpolation along `points`, reading each point as (input, output),
/// or as (output, input) when `inverse` is set.
fn interpolate(points: &[(Rational, Rational)], x: &Rational, inverse: bool) -> Rational {
    let coords = |p: &(Rational, Rational)| {
        if inverse {
            (p.1.clone(), p.0.clone())
        } else {
            p.clone()
        }
    };
    let idx = points.partition_point(|p| if inverse { &p.1 < x } else { &p.0 < x });
    let (x1, y1) = coords(&points[idx]);
    if &x1 == x {
        return y1;
    }
    let (x0, y0) = coords(&points[idx - 1]);
    &y0 + (y1 - &y0) * (x - &x0) / (x1 - x0)
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (t, v)) in self.breaks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({t},{v})")?;
        }
        write!(f, "]")
    }
}

pub fn identity(l: &Length) -> PLMap {
    linear(l, l)
}

/// The unique linear map `[0, dom] -> [0, cod]`.
pub fn linear(dom: &Length, cod: &Length) -> PLMap {
    PLMap {
        dom: dom.clone(),
        cod: cod.clone(),
        breaks: vec![
            (Rational::zero(), Rational::zero()),
            (dom.value().clone(), cod.value().clone()),
        ],
    }
}

/// The normalization `t ↦ t/ℓ`, a map `ℓ -> 1`.
pub fn mu(l: &Length) -> PLMap {
    linear(l, &Length::of(1, 1))
}

/// `g ∘ f`: apply `f`, then `g`.
pub fn compose(f: &PLMap, g: &PLMap) -> Result<PLMap> {
    if f.cod != g.dom {
        return Err(Error::Composition {
            cod: f.cod.to_string(),
            dom: g.dom.to_string(),
        });
    }
    // Breakpoints of g∘f sit at f's break inputs and at the f-preimages of g's.
    let mut grid: Vec<Rational> = Vec::with_capacity(f.breaks.len() + g.breaks.len());
    let (mut i, mut j) = (0, 0);
    while i < f.breaks.len() || j < g.breaks.len() {
        let next = match (f.breaks.get(i), g.breaks.get(j)) {
            (Some((ft, fv)), Some((gt, _))) => {
                if fv < gt {
                    i += 1;
                    ft.clone()
                } else if fv == gt {
                    i += 1;
                    j += 1;
                    ft.clone()
                } else {
                    j += 1;
                    f.eval_inverse(gt)?
                }
            }
            (Some((ft, _)), None) => {
                i += 1;
                ft.clone()
            }
            (None, Some((gt, _))) => {
                j += 1;
                f.eval_inverse(gt)?
            }
            (None, None) => unreachable!(),
        };
        grid.push(next);
    }
    let points = grid
        .into_iter()
        .map(|t| {
            let v = g.eval(&f.eval(&t)?)?;
            Ok((t, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PLMap::from_monotone_points(points))
}

/// Concatenation: `f1` on `[0, f1.dom]`, then `t ↦ f2(t - f1.dom) + f1.cod`.
pub fn tensor_map(f1: &PLMap, f2: &PLMap) -> PLMap {
    let (dt, dv) = (f1.dom.value(), f1.cod.value());
    let mut points = f1.breaks.clone();
    points.extend(f2.breaks.iter().skip(1).map(|(t, v)| (t + dt, v + dv)));
    PLMap::from_monotone_points(points)
}

/// Left-to-right concatenation of a non-empty list of maps.
pub fn tensor_all<'a, I>(maps: I) -> Option<PLMap>
where
    I: IntoIterator<Item = &'a PLMap>,
{
    let mut it = maps.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, m| tensor_map(&acc, m)))
}

/// Cuts `f` along the codomain partition given by `parts`.
///
/// Returns one piece per part: the piece over the `k`-th part is a map into
/// `parts[k]` whose domain window is the preimage of that part. In `G` the
/// pieces are unique, so this is the inverse of [`tensor_all`].
pub fn split_codomain(f: &PLMap, parts: &[Length]) -> Result<Vec<Piece>> {
    if parts.is_empty() {
        return Err(Error::Split("no parts given".into()));
    }
    let mut sum = Rational::zero();
    let mut cuts = vec![Rational::zero()];
    for p in parts {
        sum += p.value();
        cuts.push(sum.clone());
    }
    if &sum != f.cod.value() {
        return Err(Error::Split(format!(
            "parts sum to {sum} but the codomain is {}",
            f.cod
        )));
    }
    let bounds = cuts
        .iter()
        .map(|c| f.eval_inverse(c))
        .collect::<Result<Vec<_>>>()?;
    bounds
        .windows(2)
        .map(|w| {
            Ok(Piece {
                start: w[0].clone(),
                end: w[1].clone(),
                map: f.slice(&w[0], &w[1])?,
            })
        })
        .collect()
}

/// Writes `f = f1 ⊗ f2` with `f1: ℓ1 -> c1`, `f2: ℓ2 -> c2`, where
/// `ℓ1 = f⁻¹(c1)`.
pub fn decompose_map(f: &PLMap, c1: &Length, c2: &Length) -> Result<(PLMap, PLMap)> {
    let mut pieces = split_codomain(f, &[c1.clone(), c2.clone()])?.into_iter();
    let p1 = pieces.next().expect("two pieces");
    let p2 = pieces.next().expect("two pieces");
    Ok((p1.map, p2.map))
}

/// Left shift functor on morphisms: `id_ℓ ⊗ f`.
pub fn shift_left(l: &Length, f: &PLMap) -> PLMap {
    tensor_map(&identity(l), f)
}

/// Right shift functor on morphisms: `f ⊗ id_ℓ`.
pub fn shift_right(l: &Length, f: &PLMap) -> PLMap {
    tensor_map(f, &identity(l))
}

#[derive(Serialize, Deserialize)]
struct PLMapRepr {
    #[serde(with = "serde_rational")]
    dom: Rational,
    #[serde(with = "serde_rational")]
    cod: Rational,
    breaks: Vec<(RatStr, RatStr)>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RatStr(#[serde(with = "serde_rational")] Rational);

impl TryFrom<PLMapRepr> for PLMap {
    type Error = Error;
    fn try_from(r: PLMapRepr) -> Result<Self> {
        let map = PLMap::from_breaks(r.breaks.into_iter().map(|(t, v)| (t.0, v.0)).collect())?;
        if map.dom.value() != &r.dom || map.cod.value() != &r.cod {
            return Err(Error::InvalidMap(format!(
                "last breakpoint ({},{}) disagrees with dom {} / cod {}",
                map.dom, map.cod, r.dom, r.cod
            )));
        }
        Ok(map)
    }
}

impl From<PLMap> for PLMapRepr {
    fn from(m: PLMap) -> Self {
        PLMapRepr {
            dom: m.dom.into_inner(),
            cod: m.cod.into_inner(),
            breaks: m
                .breaks
                .into_iter()
                .map(|(t, v)| (RatStr(t), RatStr(v)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    pub(crate) fn map(points: &[(i64, i64, i64, i64)]) -> PLMap {
        PLMap::from_breaks(
            points
                .iter()
                .map(|&(a, b, c, d)| (ratio(a, b), ratio(c, d)))
                .collect(),
        )
        .unwrap()
    }

    fn pts(f: &PLMap) -> Vec<(String, String)> {
        f.breaks()
            .iter()
            .map(|(t, v)| (t.to_string(), v.to_string()))
            .collect()
    }

    fn s(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn identity_breaks() {
        assert_eq!(
            pts(&identity(&Length::of(1, 1))),
            vec![s("0", "0"), s("1", "1")]
        );
        let id = identity(&Length::of(3, 1));
        assert_eq!(id.eval(&ratio(7, 5)).unwrap(), ratio(7, 5));
    }

    #[test]
    fn eval_examples() {
        let mu2 = mu(&Length::of(2, 1));
        assert_eq!(mu2.eval(&int(1)).unwrap(), ratio(1, 2));
        let f = map(&[(0, 1, 0, 1), (1, 1, 2, 1), (3, 1, 3, 1)]);
        assert_eq!(f.eval(&int(2)).unwrap(), ratio(5, 2));
        assert_eq!(mu(&Length::of(3, 1)).eval(&int(2)).unwrap(), ratio(2, 3));
    }

    #[test]
    fn eval_out_of_domain() {
        let f = identity(&Length::of(1, 1));
        assert!(matches!(f.eval(&int(2)), Err(Error::Domain { .. })));
        assert!(matches!(f.eval(&ratio(-1, 2)), Err(Error::Domain { .. })));
    }

    #[test]
    fn inverse_examples() {
        let mu2 = mu(&Length::of(2, 1));
        assert_eq!(pts(&mu2.inverse()), vec![s("0", "0"), s("1", "2")]);
        let f = map(&[(0, 1, 0, 1), (1, 1, 2, 1), (3, 1, 3, 1)]);
        assert_eq!(
            pts(&f.inverse()),
            vec![s("0", "0"), s("2", "1"), s("3", "3")]
        );
        assert_eq!(compose(&f, &f.inverse()).unwrap(), identity(f.dom()));
        assert_eq!(compose(&f.inverse(), &f).unwrap(), identity(f.cod()));
    }

    #[test]
    fn compose_example() {
        let f = mu(&Length::of(2, 1));
        let g = map(&[(0, 1, 0, 1), (1, 2, 3, 2), (1, 1, 2, 1)]);
        let h = compose(&f, &g).unwrap();
        assert_eq!(pts(&h), vec![s("0", "0"), s("1", "3/2"), s("2", "2")]);
        // pointwise oracle on the union grid
        for t in [int(0), ratio(1, 3), int(1), ratio(3, 2), int(2)] {
            assert_eq!(h.eval(&t).unwrap(), g.eval(&f.eval(&t).unwrap()).unwrap());
        }
        assert!(matches!(compose(&g, &g), Err(Error::Composition { .. })));
    }

    #[test]
    fn compose_units() {
        let f = map(&[(0, 1, 0, 1), (1, 1, 2, 1), (2, 1, 5, 2)]);
        assert_eq!(compose(&identity(f.dom()), &f).unwrap(), f);
        assert_eq!(compose(&f, &identity(f.cod())).unwrap(), f);
    }

    #[test]
    fn tensor_examples() {
        let f1 = map(&[(0, 1, 0, 1), (1, 1, 2, 1)]);
        let f2 = map(&[(0, 1, 0, 1), (2, 1, 1, 1)]);
        assert_eq!(
            pts(&tensor_map(&f1, &f2)),
            vec![s("0", "0"), s("1", "2"), s("3", "3")]
        );
        let (a, b) = (Length::of(1, 1), Length::of(2, 1));
        assert_eq!(
            tensor_map(&identity(&a), &identity(&b)),
            identity(&Length::of(3, 1))
        );
    }

    #[test]
    fn decompose_examples() {
        let f = map(&[(0, 1, 0, 1), (1, 1, 3, 2), (2, 1, 2, 1)]);
        let (f1, f2) = decompose_map(&f, &Length::of(3, 2), &Length::of(1, 2)).unwrap();
        assert_eq!(pts(&f1), vec![s("0", "0"), s("1", "3/2")]);
        assert_eq!(pts(&f2), vec![s("0", "0"), s("1", "1/2")]);
        assert_eq!(tensor_map(&f1, &f2), f);

        let (a, b) = (Length::of(2, 3), Length::of(5, 7));
        let (i1, i2) = decompose_map(&identity(&(&a + &b)), &a, &b).unwrap();
        assert_eq!((i1, i2), (identity(&a), identity(&b)));
    }

    #[test]
    fn decompose_rejects_bad_split() {
        let f = identity(&Length::of(2, 1));
        let err = decompose_map(&f, &Length::of(1, 1), &Length::of(3, 2)).unwrap_err();
        assert!(matches!(err, Error::Split(_)));
    }

    #[test]
    fn mu_examples() {
        let one = Length::of(1, 1);
        assert_eq!(mu(&one), identity(&one));
        let l = Length::of(5, 3);
        assert_eq!(compose(&mu(&l), &mu(&l).inverse()).unwrap(), identity(&l));
    }

    #[test]
    fn shift_examples() {
        let (l, lp) = (Length::of(1, 1), Length::of(3, 4));
        assert_eq!(shift_left(&l, &identity(&lp)), identity(&(&l + &lp)));
        let r = shift_right(&l, &mu(&Length::of(2, 1)));
        assert_eq!(pts(&r), vec![s("0", "0"), s("2", "1"), s("3", "2")]);
    }

    #[test]
    fn collinear_points_are_merged() {
        let f = map(&[(0, 1, 0, 1), (1, 1, 1, 1), (2, 1, 2, 1), (3, 1, 4, 1)]);
        assert_eq!(pts(&f), vec![s("0", "0"), s("2", "2"), s("3", "4")]);
    }

    #[test]
    fn invalid_breaks_are_rejected() {
        let bad = |v: Vec<(Rational, Rational)>| PLMap::from_breaks(v).unwrap_err();
        assert!(matches!(bad(vec![(int(0), int(0))]), Error::InvalidMap(_)));
        assert!(matches!(
            bad(vec![(int(0), int(1)), (int(1), int(2))]),
            Error::InvalidMap(_)
        ));
        assert!(matches!(
            bad(vec![(int(0), int(0)), (int(1), int(2)), (int(2), int(1))]),
            Error::InvalidMap(_)
        ));
        assert!(matches!(
            bad(vec![(int(0), int(0)), (int(1), int(1)), (int(1), int(2))]),
            Error::InvalidMap(_)
        ));
    }

    #[test]
    fn slice_window() {
        let f = map(&[(0, 1, 0, 1), (1, 1, 2, 1), (3, 1, 3, 1)]);
        let w = f.slice(&ratio(1, 2), &int(2)).unwrap();
        assert_eq!(pts(&w), vec![s("0", "0"), s("1/2", "1"), s("3/2", "3/2")]);
    }

    #[test]
    fn json_shape() {
        let f = map(&[(0, 1, 0, 1), (1, 1, 3, 2), (2, 1, 2, 1)]);
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(
            j,
            r#"{"dom":"2","cod":"2","breaks":[["0","0"],["1","3/2"],["2","2"]]}"#
        );
        let back: PLMap = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
        let lying = r#"{"dom":"3","cod":"2","breaks":[["0","0"],["2","2"]]}"#;
        assert!(serde_json::from_str::<PLMap>(lying).is_err());
        let nonmono = r#"{"dom":"2","cod":"2","breaks":[["0","0"],["1","3"],["2","2"]]}"#;
        let err = serde_json::from_str::<PLMap>(nonmono)
            .unwrap_err()
            .to_string();
        assert!(err.contains("strictly increasing"), "{err}");
    }
}
