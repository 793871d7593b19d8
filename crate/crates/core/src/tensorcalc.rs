//! The coend tensor product of finitely presented G-spaces.
//!
//! A point of `(D₁ ⊗ … ⊗ Dₙ)(L)` is a class of triples `(ψ, x₁, …, xₙ)` with
//! `ψ: L -> ℓ₁ + … + ℓₙ` and `xᵢ ∈ Dᵢ(ℓᵢ)`, modulo
//! `(ψ, x₁φ₁, …, xₙφₙ) ~ ((φ₁ ⊗ … ⊗ φₙ)ψ, x₁, …, xₙ)`.
//!
//! Classes are stored in segment normal form: cutting `ψ` along the partial
//! sums of the `ℓᵢ` (unique in `G`) and pushing each piece into its factor
//! gives, for every free factor, an interval of `[0, L]` and a map from that
//! interval onto the cell's arity. Constant factors keep only their label;
//! a run of consecutive constant factors owns the gap between the surrounding
//! free intervals. Equality of classes is structural equality of normal forms.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmaps::{
    compose, identity, linear, shift_left, shift_right, split_codomain, tensor_all, PLMap,
};
use crate::pspaces::{
    colimit, restrict, CellId, CellKind, Colimit, Element, ElementData, Generator, Label, PSpace,
};
use crate::rational::{serde_rational, total, Length, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Slot {
    Free {
        cell: CellId,
        #[serde(with = "serde_rational")]
        start: Rational,
        #[serde(with = "serde_rational")]
        end: Rational,
        map: PLMap,
        label: Label,
    },
    Const {
        cell: CellId,
        label: Label,
    },
}

impl Slot {
    pub fn cell(&self) -> &CellId {
        match self {
            Slot::Free { cell, .. } | Slot::Const { cell, .. } => cell,
        }
    }

    pub fn label(&self) -> &Label {
        match self {
            Slot::Free { label, .. } | Slot::Const { label, .. } => label,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Slot::Free { .. })
    }

    pub fn generator(&self) -> Generator {
        (self.cell().clone(), self.label().clone())
    }

    pub(crate) fn translated(&self, by: &Rational) -> Slot {
        match self {
            Slot::Free {
                cell,
                start,
                end,
                map,
                label,
            } => Slot::Free {
                cell: cell.clone(),
                start: start + by,
                end: end + by,
                map: map.clone(),
                label: label.clone(),
            },
            c => c.clone(),
        }
    }
}

/// A class of an n-fold tensor, `n ≥ 2`, in segment normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TensorClassRepr", into = "TensorClassRepr")]
pub struct TensorClass {
    length: Length,
    slots: Vec<Slot>,
}

/// One stretch of `[0, L]` in a normal form: either a free slot or the gap
/// owned by a run of constant slots.
enum Segment {
    Free {
        slot: usize,
    },
    Gap {
        start: Rational,
        end: Rational,
        slots: std::ops::Range<usize>,
    },
}

impl TensorClass {
    pub fn new(length: Length, slots: Vec<Slot>) -> Result<Self> {
        let c = TensorClass { length, slots };
        c.check_geometry()?;
        Ok(c)
    }

    fn check_geometry(&self) -> Result<()> {
        if self.slots.len() < 2 {
            return Err(Error::InvalidClass(
                "a tensor class needs at least two slots".into(),
            ));
        }
        let mut pos = Rational::zero();
        let mut pending_const = false;
        for (i, s) in self.slots.iter().enumerate() {
            match s {
                Slot::Free {
                    start, end, map, ..
                } => {
                    if pending_const && start <= &pos {
                        return Err(Error::InvalidClass(format!(
                            "slot {i}: constant slots before it need a positive gap"
                        )));
                    }
                    if !pending_const && start != &pos {
                        return Err(Error::InvalidClass(format!(
                            "slot {i}: free slot must start at {pos}, found {start}"
                        )));
                    }
                    if map.dom().value() != &(end - start) {
                        return Err(Error::InvalidClass(format!(
                            "slot {i}: map domain {} differs from interval width {}",
                            map.dom(),
                            end - start
                        )));
                    }
                    pos = end.clone();
                    pending_const = false;
                }
                Slot::Const { .. } => pending_const = true,
            }
        }
        let l = self.length.value();
        if pending_const && &pos >= l {
            return Err(Error::InvalidClass(
                "trailing constant slots need a positive gap".into(),
            ));
        }
        if !pending_const && &pos != l {
            return Err(Error::InvalidClass(format!(
                "free slots end at {pos}, not at length {l}"
            )));
        }
        Ok(())
    }

    pub fn length(&self) -> &Length {
        &self.length
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.slots.iter().map(Slot::generator).collect()
    }

    /// Interior and exterior endpoints of the free slots.
    pub fn boundaries(&self) -> Vec<Rational> {
        self.slots
            .iter()
            .filter_map(|s| match s {
                Slot::Free { start, end, .. } => Some([start.clone(), end.clone()]),
                Slot::Const { .. } => None,
            })
            .flatten()
            .collect()
    }

    /// The concatenation of the slot maps, when every slot is free.
    pub fn joined_map(&self) -> Option<PLMap> {
        let maps = self
            .slots
            .iter()
            .map(|s| match s {
                Slot::Free { map, .. } => Some(map),
                Slot::Const { .. } => None,
            })
            .collect::<Option<Vec<_>>>()?;
        tensor_all(maps)
    }

    fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        let mut pos = Rational::zero();
        let mut run_start: Option<usize> = None;
        for (i, s) in self.slots.iter().enumerate() {
            match s {
                Slot::Const { .. } => {
                    run_start.get_or_insert(i);
                }
                Slot::Free { start, end, .. } => {
                    if let Some(r) = run_start.take() {
                        out.push(Segment::Gap {
                            start: pos.clone(),
                            end: start.clone(),
                            slots: r..i,
                        });
                    }
                    out.push(Segment::Free { slot: i });
                    pos = end.clone();
                }
            }
        }
        if let Some(r) = run_start {
            out.push(Segment::Gap {
                start: pos,
                end: self.length.value().clone(),
                slots: r..self.slots.len(),
            });
        }
        out
    }

    /// A representative triple with `ψ = id_L`. Each constant run splits its
    /// gap evenly among its slots.
    pub fn representative(&self) -> RawTriple {
        let mut parts = Vec::with_capacity(self.slots.len());
        for seg in self.segments() {
            match seg {
                Segment::Free { slot } => {
                    if let Slot::Free {
                        cell, map, label, ..
                    } = &self.slots[slot]
                    {
                        parts.push(Element::free(cell.clone(), map.clone(), label.clone()));
                    }
                }
                Segment::Gap { start, end, slots } => {
                    let share =
                        Length::new((end - start) / Rational::from_integer(slots.len().into()))
                            .expect("gaps are positive");
                    for s in &self.slots[slots] {
                        parts.push(Element::constant(
                            s.cell().clone(),
                            share.clone(),
                            s.label().clone(),
                        ));
                    }
                }
            }
        }
        RawTriple {
            psi: identity(&self.length),
            parts,
        }
    }

    /// The generator class for these labels (free slots at their arity with
    /// identity maps, each constant run on a gap of length 1), together with
    /// the map `ω` such that restricting the generator along `ω` gives `self`.
    pub fn generator_connection(&self) -> (TensorClass, PLMap) {
        let one = Length::of(1, 1);
        let mut pieces = Vec::new();
        let mut slots = Vec::with_capacity(self.slots.len());
        let mut pos = Rational::zero();
        for seg in self.segments() {
            match seg {
                Segment::Free { slot } => {
                    if let Slot::Free {
                        cell, map, label, ..
                    } = &self.slots[slot]
                    {
                        let end = &pos + map.cod().value();
                        slots.push(Slot::Free {
                            cell: cell.clone(),
                            start: pos.clone(),
                            end: end.clone(),
                            map: identity(map.cod()),
                            label: label.clone(),
                        });
                        pieces.push(map.clone());
                        pos = end;
                    }
                }
                Segment::Gap {
                    start,
                    end,
                    slots: run,
                } => {
                    slots.extend(self.slots[run].iter().cloned());
                    let gap = Length::new(end - start).expect("gaps are positive");
                    pieces.push(linear(&gap, &one));
                    pos += one.value();
                }
            }
        }
        let omega = tensor_all(&pieces).expect("at least one segment");
        let generator = TensorClass {
            length: omega.cod().clone(),
            slots,
        };
        (generator, omega)
    }

    /// Checks the slots against the factor spaces.
    pub fn check_factors(&self, factors: &[&PSpace]) -> Result<()> {
        if factors.len() != self.slots.len() {
            return Err(Error::InvalidClass(format!(
                "{} slots for {} factors",
                self.slots.len(),
                factors.len()
            )));
        }
        for (i, (s, d)) in self.slots.iter().zip(factors).enumerate() {
            let cell = d
                .cell(s.cell())
                .ok_or_else(|| Error::InvalidClass(format!("slot {i}: no cell {}", s.cell())))?;
            if !cell.has_label(s.label()) {
                return Err(Error::InvalidClass(format!(
                    "slot {i}: no label {}",
                    s.label()
                )));
            }
            match (cell.kind(), s) {
                (CellKind::Free { arity }, Slot::Free { map, .. }) if map.cod() == arity => {}
                (CellKind::Const, Slot::Const { .. }) => {}
                _ => {
                    return Err(Error::InvalidClass(format!(
                        "slot {i} does not fit cell {}",
                        s.cell()
                    )))
                }
            }
        }
        Ok(())
    }
}

/// A representative `(ψ, x₁, …, xₙ)` before normalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTriple {
    pub psi: PLMap,
    pub parts: Vec<Element>,
}

impl RawTriple {
    pub fn new(psi: PLMap, parts: Vec<Element>) -> Result<Self> {
        let r = RawTriple { psi, parts };
        r.check()?;
        Ok(r)
    }

    fn part_lengths(&self) -> Vec<Length> {
        self.parts.iter().map(|x| x.length.clone()).collect()
    }

    fn check(&self) -> Result<()> {
        if self.parts.len() < 2 {
            return Err(Error::Representative(
                "a tensor needs at least two parts".into(),
            ));
        }
        let sum = total(&self.part_lengths()).expect("nonempty");
        if &sum != self.psi.cod() {
            return Err(Error::Representative(format!(
                "parts have total length {sum} but ψ lands in {}",
                self.psi.cod()
            )));
        }
        Ok(())
    }

    /// The action of `ω: L' -> L` on the representative: `(ψω, x₁, …, xₙ)`.
    pub fn act(&self, omega: &PLMap) -> Result<RawTriple> {
        Ok(RawTriple {
            psi: compose(omega, &self.psi)?,
            parts: self.parts.clone(),
        })
    }

    /// Applies one generating identification at `slot`.
    ///
    /// With `φ: ℓᵢ -> m`, writes `xᵢ = x'.φ` for a point `x'` at length `m`
    /// and returns `((id ⊗ … ⊗ φ ⊗ … ⊗ id)ψ, …, x', …)`.
    pub fn push(&self, slot: usize, phi: &PLMap) -> Result<RawTriple> {
        let mut phis: Vec<PLMap> = self.parts.iter().map(|x| identity(&x.length)).collect();
        if slot >= phis.len() {
            return Err(Error::Representative(format!("no slot {slot}")));
        }
        phis[slot] = phi.clone();
        self.push_all(&phis)
    }

    /// The identification with a map on every slot: `(ψ, x₁φ₁, …) ~ ((φ₁ ⊗ …)ψ, x₁, …)`.
    pub fn push_all(&self, phis: &[PLMap]) -> Result<RawTriple> {
        if phis.len() != self.parts.len() {
            return Err(Error::Representative("one map per part is required".into()));
        }
        let mut parts = Vec::with_capacity(self.parts.len());
        for (x, phi) in self.parts.iter().zip(phis) {
            if phi.dom() != &x.length {
                return Err(Error::Representative(format!(
                    "rewrite map starts at {} but the part has length {}",
                    phi.dom(),
                    x.length
                )));
            }
            parts.push(match &x.data {
                ElementData::Free { map, label } => {
                    Element::free(x.cell.clone(), compose(&phi.inverse(), map)?, label.clone())
                }
                ElementData::Const { label } => {
                    Element::constant(x.cell.clone(), phi.cod().clone(), label.clone())
                }
            });
        }
        let psi = compose(&self.psi, &tensor_all(phis).expect("nonempty"))?;
        Ok(RawTriple { psi, parts })
    }

    /// The equivalent triple `(id_L, x₁ψ₁, …, xₙψₙ)` with `ψ = ψ₁ ⊗ … ⊗ ψₙ`.
    pub fn with_identity_psi(&self) -> Result<RawTriple> {
        self.check()?;
        let pieces = split_codomain(&self.psi, &self.part_lengths())?;
        let parts = self
            .parts
            .iter()
            .zip(&pieces)
            .map(|(x, p)| restrict(x, &p.map))
            .collect::<Result<Vec<_>>>()?;
        Ok(RawTriple {
            psi: identity(self.psi.dom()),
            parts,
        })
    }
}

/// Normal form of a representative.
pub fn canonicalize(r: &RawTriple) -> Result<TensorClass> {
    r.check()?;
    let pieces = split_codomain(&r.psi, &r.part_lengths())?;
    let slots = r
        .parts
        .iter()
        .zip(pieces)
        .map(|(x, p)| {
            Ok(match &x.data {
                ElementData::Free { map, label } => Slot::Free {
                    cell: x.cell.clone(),
                    start: p.start,
                    end: p.end,
                    map: compose(&p.map, map)?,
                    label: label.clone(),
                },
                ElementData::Const { label } => Slot::Const {
                    cell: x.cell.clone(),
                    label: label.clone(),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TensorClass {
        length: r.psi.dom().clone(),
        slots,
    })
}

/// The presheaf action on classes.
pub fn restrict_class(c: &TensorClass, omega: &PLMap) -> Result<TensorClass> {
    if omega.cod() != &c.length {
        return Err(Error::Action(format!(
            "cannot restrict a class of length {} along a map into {}",
            c.length,
            omega.cod()
        )));
    }
    let slots = c
        .slots
        .iter()
        .map(|s| {
            Ok(match s {
                Slot::Free {
                    cell,
                    start,
                    end,
                    map,
                    label,
                } => {
                    let s2 = omega.eval_inverse(start)?;
                    let e2 = omega.eval_inverse(end)?;
                    let piece = omega.slice(&s2, &e2)?;
                    Slot::Free {
                        cell: cell.clone(),
                        start: s2,
                        end: e2,
                        map: compose(&piece, map)?,
                        label: label.clone(),
                    }
                }
                other => other.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TensorClass {
        length: omega.dom().clone(),
        slots,
    })
}

/// How a product of two cells is presented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `𝔽_a U ⊗ 𝔽_b V ≅ 𝔽_{a+b}(U × V)`.
    Free { arity: Length },
    /// `ΔU ⊗ ΔV ≅ Δ(U × V)`.
    Const,
    /// A free cell against a constant one; only the normal form represents it.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCell {
    pub id: CellId,
    pub left: CellId,
    pub right: CellId,
    pub form: ClosedForm,
    /// `(product label, left label, right label)`.
    pub labels: Vec<(Label, Label, Label)>,
}

impl ProductCell {
    fn pair_label(&self, u: &Label, v: &Label) -> Option<&Label> {
        self.labels
            .iter()
            .find(|(_, a, b)| a == u && b == v)
            .map(|(p, _, _)| p)
    }

    fn split_label(&self, p: &Label) -> Option<(&Label, &Label)> {
        self.labels
            .iter()
            .find(|(q, _, _)| q == p)
            .map(|(_, a, b)| (a, b))
    }
}

/// `D ⊗ E`, distributed cellwise over the two coproducts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSpace {
    left: PSpace,
    right: PSpace,
    cells: Vec<ProductCell>,
}

pub fn tensor_space(d: &PSpace, e: &PSpace) -> TensorSpace {
    let mut cells = Vec::new();
    for c in d.cells() {
        for k in e.cells() {
            let form = match (c.kind(), k.kind()) {
                (CellKind::Free { arity: a }, CellKind::Free { arity: b }) => {
                    ClosedForm::Free { arity: a + b }
                }
                (CellKind::Const, CellKind::Const) => ClosedForm::Const,
                _ => ClosedForm::Mixed,
            };
            let labels = c
                .labels()
                .iter()
                .flat_map(|u| {
                    k.labels()
                        .iter()
                        .map(move |v| (Label::pair(u, v), u.clone(), v.clone()))
                })
                .collect();
            cells.push(ProductCell {
                id: CellId(format!("{}*{}", c.id(), k.id())),
                left: c.id().clone(),
                right: k.id().clone(),
                form,
                labels,
            });
        }
    }
    TensorSpace {
        left: d.clone(),
        right: e.clone(),
        cells,
    }
}

impl TensorSpace {
    pub fn left(&self) -> &PSpace {
        &self.left
    }

    pub fn right(&self) -> &PSpace {
        &self.right
    }

    pub fn cells(&self) -> &[ProductCell] {
        &self.cells
    }

    pub fn product_cell(&self, left: &CellId, right: &CellId) -> Option<&ProductCell> {
        self.cells
            .iter()
            .find(|c| &c.left == left && &c.right == right)
    }

    /// The closed-form cells assembled into a space, if there are any.
    pub fn closed_form_space(&self) -> Option<PSpace> {
        let cells = self
            .cells
            .iter()
            .filter_map(|pc| {
                let kind = match &pc.form {
                    ClosedForm::Free { arity } => CellKind::Free {
                        arity: arity.clone(),
                    },
                    ClosedForm::Const => CellKind::Const,
                    ClosedForm::Mixed => return None,
                };
                let labels = pc.labels.iter().map(|(p, _, _)| p.clone()).collect();
                Some(
                    crate::pspaces::Cell::new(pc.id.clone(), kind, labels)
                        .expect("product of valid cells"),
                )
            })
            .collect::<Vec<_>>();
        PSpace::new(cells).ok()
    }

    fn binary_cell(&self, c: &TensorClass) -> Result<&ProductCell> {
        if c.arity() != 2 {
            return Err(Error::InvalidClass(format!(
                "expected a binary class, got {} slots",
                c.arity()
            )));
        }
        c.check_factors(&[&self.left, &self.right])?;
        Ok(self
            .product_cell(c.slots[0].cell(), c.slots[1].cell())
            .expect("cells checked"))
    }

    /// The class-to-point bijection of a closed-form cell; `None` for mixed cells.
    pub fn to_element(&self, c: &TensorClass) -> Result<Option<Element>> {
        let pc = self.binary_cell(c)?;
        let label = pc
            .pair_label(c.slots[0].label(), c.slots[1].label())
            .expect("labels checked")
            .clone();
        Ok(match pc.form {
            ClosedForm::Free { .. } => Some(Element::free(
                pc.id.clone(),
                c.joined_map().expect("free slots"),
                label,
            )),
            ClosedForm::Const => Some(Element::constant(pc.id.clone(), c.length.clone(), label)),
            ClosedForm::Mixed => None,
        })
    }

    /// Inverse of [`TensorSpace::to_element`].
    pub fn from_element(&self, x: &Element) -> Result<TensorClass> {
        let pc = self
            .cells
            .iter()
            .find(|pc| pc.id == x.cell)
            .ok_or_else(|| Error::InvalidElement(format!("no product cell {}", x.cell)))?;
        let (u, v) = pc
            .split_label(x.label())
            .ok_or_else(|| Error::InvalidElement(format!("no product label {}", x.label())))?;
        match (&pc.form, &x.data) {
            (ClosedForm::Free { arity }, ElementData::Free { map, .. }) if map.cod() == arity => {
                let a = self
                    .left
                    .cell(&pc.left)
                    .and_then(|c| c.arity())
                    .expect("free")
                    .clone();
                let b = self
                    .right
                    .cell(&pc.right)
                    .and_then(|c| c.arity())
                    .expect("free")
                    .clone();
                let pieces = split_codomain(map, &[a, b])?;
                let slots = pieces
                    .into_iter()
                    .zip([(&pc.left, u), (&pc.right, v)])
                    .map(|(p, (cell, label))| Slot::Free {
                        cell: cell.clone(),
                        start: p.start,
                        end: p.end,
                        map: p.map,
                        label: label.clone(),
                    })
                    .collect();
                Ok(TensorClass {
                    length: x.length.clone(),
                    slots,
                })
            }
            (ClosedForm::Const, ElementData::Const { .. }) => Ok(TensorClass {
                length: x.length.clone(),
                slots: vec![
                    Slot::Const {
                        cell: pc.left.clone(),
                        label: u.clone(),
                    },
                    Slot::Const {
                        cell: pc.right.clone(),
                        label: v.clone(),
                    },
                ],
            }),
            _ => Err(Error::InvalidElement(format!(
                "point does not fit product cell {}",
                pc.id
            ))),
        }
    }

    /// The colimit of `D ⊗ E`: one class per product label.
    pub fn colimit(&self) -> BTreeSet<Generator> {
        self.cells
            .iter()
            .flat_map(|pc| {
                pc.labels
                    .iter()
                    .map(move |(p, _, _)| (pc.id.clone(), p.clone()))
            })
            .collect()
    }

    /// The colimit class of a binary tensor class.
    pub fn classify(&self, c: &TensorClass) -> Result<Generator> {
        let pc = self.binary_cell(c)?;
        let p = pc
            .pair_label(c.slots[0].label(), c.slots[1].label())
            .expect("labels checked");
        Ok((pc.id.clone(), p.clone()))
    }
}

/// A parenthesization of the factors of a flat class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bracket {
    Leaf,
    Pair(Box<Bracket>, Box<Bracket>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Left,
    Right,
}

impl Bracket {
    pub fn pair(a: Bracket, b: Bracket) -> Bracket {
        Bracket::Pair(Box::new(a), Box::new(b))
    }

    /// `((…(x₁ x₂) x₃) …) xₙ`
    pub fn left_nested(n: usize) -> Bracket {
        (1..n).fold(Bracket::Leaf, |acc, _| Bracket::pair(acc, Bracket::Leaf))
    }

    /// `x₁ (x₂ (… (xₙ₋₁ xₙ)))`
    pub fn right_nested(n: usize) -> Bracket {
        (1..n).fold(Bracket::Leaf, |acc, _| Bracket::pair(Bracket::Leaf, acc))
    }

    pub fn leaves(&self) -> usize {
        match self {
            Bracket::Leaf => 1,
            Bracket::Pair(a, b) => a.leaves() + b.leaves(),
        }
    }

    fn at_mut(&mut self, path: &[Branch]) -> Option<&mut Bracket> {
        match (path.split_first(), self) {
            (None, b) => Some(b),
            (Some((Branch::Left, rest)), Bracket::Pair(a, _)) => a.at_mut(rest),
            (Some((Branch::Right, rest)), Bracket::Pair(_, b)) => b.at_mut(rest),
            (Some(_), Bracket::Leaf) => None,
        }
    }
}

/// A flat class with grouping metadata. The tensor is strict, so the
/// associator only rewrites the grouping.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grouped {
    pub class: TensorClass,
    pub bracket: Bracket,
}

impl Grouped {
    pub fn new(class: TensorClass, bracket: Bracket) -> Result<Self> {
        if bracket.leaves() != class.arity() {
            return Err(Error::InvalidClass(format!(
                "grouping has {} factors but the class has {}",
                bracket.leaves(),
                class.arity()
            )));
        }
        Ok(Grouped { class, bracket })
    }
}

/// `a_{X,Y,Z}: (X ⊗ Y) ⊗ Z -> X ⊗ (Y ⊗ Z)` applied to the sub-grouping at `path`.
pub fn associate_at(g: &Grouped, path: &[Branch]) -> Result<Grouped> {
    let mut bracket = g.bracket.clone();
    let node = bracket
        .at_mut(path)
        .ok_or_else(|| Error::InvalidClass("no such sub-grouping".into()))?;
    let taken = std::mem::replace(node, Bracket::Leaf);
    *node = match taken {
        Bracket::Pair(xy, z) => match *xy {
            Bracket::Pair(x, y) => Bracket::Pair(x, Box::new(Bracket::Pair(y, z))),
            _ => {
                return Err(Error::InvalidClass(
                    "grouping is not of the form (X Y) Z".into(),
                ))
            }
        },
        _ => {
            return Err(Error::InvalidClass(
                "grouping is not of the form (X Y) Z".into(),
            ))
        }
    };
    Ok(Grouped {
        class: g.class.clone(),
        bracket,
    })
}

/// `a⁻¹: X ⊗ (Y ⊗ Z) -> (X ⊗ Y) ⊗ Z` at `path`.
pub fn associate_inverse_at(g: &Grouped, path: &[Branch]) -> Result<Grouped> {
    let mut bracket = g.bracket.clone();
    let node = bracket
        .at_mut(path)
        .ok_or_else(|| Error::InvalidClass("no such sub-grouping".into()))?;
    let taken = std::mem::replace(node, Bracket::Leaf);
    *node = match taken {
        Bracket::Pair(x, yz) => match *yz {
            Bracket::Pair(y, z) => Bracket::Pair(Box::new(Bracket::Pair(x, y)), z),
            _ => {
                return Err(Error::InvalidClass(
                    "grouping is not of the form X (Y Z)".into(),
                ))
            }
        },
        _ => {
            return Err(Error::InvalidClass(
                "grouping is not of the form X (Y Z)".into(),
            ))
        }
    };
    Ok(Grouped {
        class: g.class.clone(),
        bracket,
    })
}

pub fn associate(g: &Grouped) -> Result<Grouped> {
    associate_at(g, &[])
}

pub fn associate_inverse(g: &Grouped) -> Result<Grouped> {
    associate_inverse_at(g, &[])
}

/// The two composites `((A⊗B)⊗C)⊗D -> A⊗(B⊗(C⊗D))` of the pentagon, applied
/// to a 4-factor class.
pub fn pentagon_paths(c: &TensorClass) -> Result<(Grouped, Grouped)> {
    let start = Grouped::new(c.clone(), Bracket::left_nested(4))?;
    let top = associate_at(&associate_at(&start, &[])?, &[])?;
    let bottom = associate_at(
        &associate_at(&associate_at(&start, &[Branch::Left])?, &[])?,
        &[Branch::Right],
    )?;
    Ok((top, bottom))
}

/// `(φ ⊗ id_{ℓ'})ψ` for `ψ` into `ℓ + ℓ'` and `φ: ℓ -> ℓ''`.
pub fn collapse_right(psi: &PLMap, phi: &PLMap) -> Result<PLMap> {
    let rest = psi.cod().checked_sub(phi.dom()).ok_or_else(|| {
        Error::Collapse(format!(
            "ψ lands in {}, which does not extend {}",
            psi.cod(),
            phi.dom()
        ))
    })?;
    compose(psi, &shift_right(&rest, phi))
}

/// `(id_{ℓ'} ⊗ φ)ψ` for `ψ` into `ℓ' + ℓ` and `φ: ℓ -> ℓ''`.
pub fn collapse_left(psi: &PLMap, phi: &PLMap) -> Result<PLMap> {
    let rest = psi.cod().checked_sub(phi.dom()).ok_or_else(|| {
        Error::Collapse(format!(
            "ψ lands in {}, which does not extend {}",
            psi.cod(),
            phi.dom()
        ))
    })?;
    compose(psi, &shift_left(&rest, phi))
}

/// A representative of `((D₁ ⊗ D₂) ⊗ D₃)(L)`: outer `ψ: L -> m + ℓ₃`,
/// inner `(φ: m -> ℓ₁ + ℓ₂, x₁, x₂)`, and `x₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftNested {
    pub psi: PLMap,
    pub phi: PLMap,
    pub x1: Element,
    pub x2: Element,
    pub x3: Element,
}

/// A representative of `(D₁ ⊗ (D₂ ⊗ D₃))(L)`: outer `ψ: L -> ℓ₁ + m`,
/// `x₁`, and inner `(φ: m -> ℓ₂ + ℓ₃, x₂, x₃)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightNested {
    pub psi: PLMap,
    pub x1: Element,
    pub phi: PLMap,
    pub x2: Element,
    pub x3: Element,
}

impl LeftNested {
    /// Collapses the inner coend with `(φ ⊗ id)ψ`.
    pub fn flatten(&self) -> Result<RawTriple> {
        RawTriple::new(
            collapse_right(&self.psi, &self.phi)?,
            vec![self.x1.clone(), self.x2.clone(), self.x3.clone()],
        )
    }

    /// The representative-level associator: write `φ = φ₁ ⊗ φ₂` and
    /// `ψ = ψ₁ ⊗ ψ₂ ⊗ ψ₃`, then move everything into the points,
    /// giving `(id_L, x₁φ₁ψ₁, (id, x₂φ₂ψ₂, x₃ψ₃))`.
    pub fn reassociate(&self) -> Result<RightNested> {
        let phis = split_codomain(&self.phi, &[self.x1.length.clone(), self.x2.length.clone()])?;
        let (phi1, phi2) = (&phis[0].map, &phis[1].map);
        let psis = split_codomain(
            &self.psi,
            &[
                phi1.dom().clone(),
                phi2.dom().clone(),
                self.x3.length.clone(),
            ],
        )?;
        let y1 = restrict(&restrict(&self.x1, phi1)?, &psis[0].map)?;
        let y2 = restrict(&restrict(&self.x2, phi2)?, &psis[1].map)?;
        let y3 = restrict(&self.x3, &psis[2].map)?;
        Ok(RightNested {
            psi: identity(self.psi.dom()),
            phi: identity(&(&y2.length + &y3.length)),
            x1: y1,
            x2: y2,
            x3: y3,
        })
    }
}

impl RightNested {
    /// Collapses the inner coend with `(id ⊗ φ)ψ`.
    pub fn flatten(&self) -> Result<RawTriple> {
        RawTriple::new(
            collapse_left(&self.psi, &self.phi)?,
            vec![self.x1.clone(), self.x2.clone(), self.x3.clone()],
        )
    }
}

/// Evidence for `colim(D ⊗ E) ≅ colim D × colim E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColimitWitness {
    /// `((class of D, class of E), class of D ⊗ E)`.
    pub bijection: Vec<((Generator, Generator), Generator)>,
    pub bijective: bool,
    pub samples_checked: usize,
    pub compatible: bool,
    pub first_failure: Option<String>,
}

impl ColimitWitness {
    pub fn holds(&self) -> bool {
        self.bijective && self.compatible
    }
}

/// Builds the label bijection and checks, on each sampled representative,
/// that classifying its class agrees with classifying its parts, that the
/// class is reachable from its generator by restriction, and that
/// restriction does not move the class.
pub fn colimit_tensor_check(
    d: &PSpace,
    e: &PSpace,
    samples: &[RawTriple],
) -> Result<ColimitWitness> {
    let ts = tensor_space(d, e);
    let (cd, ce): (Colimit, Colimit) = (colimit(d), colimit(e));
    let tensor_classes = ts.colimit();

    let mut bijection = Vec::new();
    let mut images = BTreeSet::new();
    for gd in cd.classes() {
        for ge in ce.classes() {
            let pc = ts
                .product_cell(&gd.0, &ge.0)
                .expect("every cell pair has a product");
            let p = pc
                .pair_label(&gd.1, &ge.1)
                .expect("every label pair has a product")
                .clone();
            let image = (pc.id.clone(), p);
            images.insert(image.clone());
            bijection.push(((gd.clone(), ge.clone()), image));
        }
    }
    let bijective = images.len() == bijection.len() && images == tensor_classes;

    let mut first_failure = None;
    for (i, r) in samples.iter().enumerate() {
        if r.parts.len() != 2 {
            return Err(Error::Representative(
                "colimit samples must be binary".into(),
            ));
        }
        let c = canonicalize(r)?;
        let expected = (cd.classify(&r.parts[0])?, ce.classify(&r.parts[1])?);
        let via_class = ts.classify(&c)?;
        let via_parts = bijection
            .iter()
            .find(|(k, _)| k == &expected)
            .map(|(_, v)| v.clone())
            .expect("bijection is total");
        let (generator, omega) = c.generator_connection();
        let reached = restrict_class(&generator, &omega)?;
        let moved = restrict_class(&c, &linear(&Length::of(1, 1), c.length()))?;
        let problem = if via_class != via_parts {
            Some("class and parts classify differently")
        } else if reached != c {
            Some("class is not a restriction of its generator")
        } else if ts.classify(&generator)? != via_class || ts.classify(&moved)? != via_class {
            Some("restriction changed the colimit class")
        } else {
            None
        };
        if let (Some(p), None) = (problem, &first_failure) {
            first_failure = Some(format!("sample {i}: {p}"));
        }
    }
    Ok(ColimitWitness {
        bijection,
        bijective,
        samples_checked: samples.len(),
        compatible: first_failure.is_none(),
        first_failure,
    })
}

#[derive(Serialize, Deserialize)]
struct TensorClassRepr {
    length: Length,
    slots: Vec<Slot>,
}

impl TryFrom<TensorClassRepr> for TensorClass {
    type Error = Error;
    fn try_from(r: TensorClassRepr) -> Result<Self> {
        TensorClass::new(r.length, r.slots)
    }
}

impl From<TensorClass> for TensorClassRepr {
    fn from(c: TensorClass) -> Self {
        TensorClassRepr {
            length: c.length,
            slots: c.slots,
        }
    }
}
