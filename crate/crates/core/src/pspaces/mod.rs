//! Finitely presented G-spaces.
//!
//! A [`PSpace`] is a finite coproduct of cells. A free cell of arity `ℓ₀`
//! with labels `U` is the representable `G(-, ℓ₀) × U`: its points at
//! length `L` are pairs `(φ: L -> ℓ₀, u)`. A constant cell is the constant
//! presheaf on its label set.

mod hom;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmaps::{compose, identity, PLMap};
use crate::rational::Length;

pub use hom::{
    curry_left, curry_right, uncurry_left, uncurry_right, ShiftSide, ShiftedMorphism,
    TensorGenerator, TensorMorphism, Transpose,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(pub String);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub String);

impl CellId {
    pub fn new(s: impl Into<String>) -> Self {
        CellId(s.into())
    }
}

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    /// Label of a pair in a product label set.
    pub fn pair(a: &Label, b: &Label) -> Label {
        Label(format!("({},{})", a.0, b.0))
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A generator of a space: one label of one cell.
pub type Generator = (CellId, Label);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    Free { arity: Length },
    Const,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CellRepr", into = "CellRepr")]
pub struct Cell {
    id: CellId,
    kind: CellKind,
    labels: Vec<Label>,
}

impl Cell {
    pub fn new(id: CellId, kind: CellKind, labels: Vec<Label>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidSpace(format!("cell {id} has no labels")));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidSpace(format!("cell {id} repeats label {l}")));
            }
        }
        Ok(Cell { id, kind, labels })
    }

    pub fn free(id: &str, arity: Length, labels: &[&str]) -> Result<Self> {
        Cell::new(
            CellId::new(id),
            CellKind::Free { arity },
            labels.iter().map(|l| Label::new(*l)).collect(),
        )
    }

    pub fn constant(id: &str, labels: &[&str]) -> Result<Self> {
        Cell::new(
            CellId::new(id),
            CellKind::Const,
            labels.iter().map(|l| Label::new(*l)).collect(),
        )
    }

    pub fn id(&self) -> &CellId {
        &self.id
    }

    pub fn kind(&self) -> &CellKind {
        &self.kind
    }

    pub fn arity(&self) -> Option<&Length> {
        match &self.kind {
            CellKind::Free { arity } => Some(arity),
            CellKind::Const => None,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, CellKind::Free { .. })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn has_label(&self, l: &Label) -> bool {
        self.labels.contains(l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PSpaceRepr", into = "PSpaceRepr")]
pub struct PSpace {
    cells: Vec<Cell>,
}

impl PSpace {
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidSpace(
                "a space needs at least one cell".into(),
            ));
        }
        let mut ids = BTreeSet::new();
        for c in &cells {
            if !ids.insert(&c.id) {
                return Err(Error::InvalidSpace(format!("duplicate cell id {}", c.id)));
            }
        }
        Ok(PSpace { cells })
    }

    /// One free cell; handy for fixtures.
    pub fn free(id: &str, arity: Length, labels: &[&str]) -> Result<Self> {
        PSpace::new(vec![Cell::free(id, arity, labels)?])
    }

    /// One constant cell.
    pub fn constant(id: &str, labels: &[&str]) -> Result<Self> {
        PSpace::new(vec![Cell::constant(id, labels)?])
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: &CellId) -> Option<&Cell> {
        self.cells.iter().find(|c| &c.id == id)
    }

    pub fn has_const_cells(&self) -> bool {
        self.cells.iter().any(|c| !c.is_free())
    }

    pub fn generators(&self) -> impl Iterator<Item = (&Cell, &Label)> + '_ {
        self.cells
            .iter()
            .flat_map(|c| c.labels.iter().map(move |l| (c, l)))
    }

    /// Checks that `x` is a point of this space.
    pub fn check_element(&self, x: &Element) -> Result<()> {
        let cell = self
            .cell(&x.cell)
            .ok_or_else(|| Error::InvalidElement(format!("no cell {} in space", x.cell)))?;
        if !cell.has_label(x.label()) {
            return Err(Error::InvalidElement(format!(
                "cell {} has no label {}",
                x.cell,
                x.label()
            )));
        }
        match (&cell.kind, &x.data) {
            (CellKind::Free { arity }, ElementData::Free { map, .. }) => {
                if map.cod() != arity {
                    return Err(Error::InvalidElement(format!(
                        "map codomain {} differs from arity {arity} of cell {}",
                        map.cod(),
                        x.cell
                    )));
                }
                Ok(())
            }
            (CellKind::Const, ElementData::Const { .. }) => Ok(()),
            _ => Err(Error::InvalidElement(format!(
                "element kind does not match cell {}",
                x.cell
            ))),
        }
    }

    /// The canonical point `(id_ℓ₀, u)` of a free generator, or the label at
    /// length 1 for a constant one.
    pub fn generator_element(&self, cell: &CellId, label: &Label) -> Result<Element> {
        let c = self
            .cell(cell)
            .ok_or_else(|| Error::InvalidElement(format!("no cell {cell}")))?;
        if !c.has_label(label) {
            return Err(Error::InvalidElement(format!(
                "cell {cell} has no label {label}"
            )));
        }
        Ok(match &c.kind {
            CellKind::Free { arity } => Element::free(cell.clone(), identity(arity), label.clone()),
            CellKind::Const => Element::constant(cell.clone(), Length::of(1, 1), label.clone()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementData {
    Free { map: PLMap, label: Label },
    Const { label: Label },
}

/// A point of `D(L)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct Element {
    pub cell: CellId,
    pub length: Length,
    pub data: ElementData,
}

impl Element {
    pub fn free(cell: CellId, map: PLMap, label: Label) -> Self {
        Element {
            cell,
            length: map.dom().clone(),
            data: ElementData::Free { map, label },
        }
    }

    pub fn constant(cell: CellId, length: Length, label: Label) -> Self {
        Element {
            cell,
            length,
            data: ElementData::Const { label },
        }
    }

    pub fn label(&self) -> &Label {
        match &self.data {
            ElementData::Free { label, .. } | ElementData::Const { label } => label,
        }
    }

    pub fn map(&self) -> Option<&PLMap> {
        match &self.data {
            ElementData::Free { map, .. } => Some(map),
            ElementData::Const { .. } => None,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self.data, ElementData::Free { .. })
    }

    pub fn generator(&self) -> Generator {
        (self.cell.clone(), self.label().clone())
    }
}

/// The action `x.ω = D(ω)(x)` for `ω: L' -> L`.
pub fn restrict(x: &Element, omega: &PLMap) -> Result<Element> {
    if omega.cod() != &x.length {
        return Err(Error::Action(format!(
            "cannot restrict an element of length {} along a map into {}",
            x.length,
            omega.cod()
        )));
    }
    Ok(match &x.data {
        ElementData::Free { map, label } => {
            Element::free(x.cell.clone(), compose(omega, map)?, label.clone())
        }
        ElementData::Const { label } => {
            Element::constant(x.cell.clone(), omega.dom().clone(), label.clone())
        }
    })
}

/// Where a generator of the source goes.
///
/// Free generators go to a point of the target at the generator's arity;
/// constant generators go to a label of a constant cell of the target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Image {
    At(Element),
    Const { cell: CellId, label: Label },
}

impl Image {
    /// The image point at length `at`: free images are restricted along
    /// `along`, constant images are simply re-read at that length.
    fn realize(&self, along: &PLMap, at: &Length) -> Result<Element> {
        match self {
            Image::At(y) => restrict(y, along),
            Image::Const { cell, label } => {
                Ok(Element::constant(cell.clone(), at.clone(), label.clone()))
            }
        }
    }
}

/// A natural transformation between finitely presented spaces, given on
/// generators (Yoneda).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMorphism {
    source: PSpace,
    target: PSpace,
    assignment: BTreeMap<Generator, Image>,
}

/// Checks that `image` is a legal image of a generator with the given kind.
/// `expected` is the length the image must live at for free generators.
pub(crate) fn check_image(
    target: &PSpace,
    source_free: bool,
    expected: &Length,
    image: &Image,
) -> Result<()> {
    match (source_free, image) {
        (true, Image::At(y)) => {
            target
                .check_element(y)
                .map_err(|e| Error::Morphism(e.to_string()))?;
            if &y.length != expected {
                return Err(Error::Morphism(format!(
                    "image has length {} but the generator needs {expected}",
                    y.length
                )));
            }
            Ok(())
        }
        (false, Image::Const { cell, label }) => match target.cell(cell) {
            Some(c) if !c.is_free() && c.has_label(label) => Ok(()),
            Some(c) if c.is_free() => Err(Error::Morphism(format!(
                "constant generators can only map to constant cells, {cell} is free"
            ))),
            _ => Err(Error::Morphism(format!(
                "target has no constant label {cell}/{label}"
            ))),
        },
        (true, Image::Const { .. }) => {
            Err(Error::Morphism("free generators need a point image".into()))
        }
        (false, Image::At(_)) => Err(Error::Morphism(
            "constant generators need a constant label image".into(),
        )),
    }
}

impl GenMorphism {
    pub fn new(
        source: PSpace,
        target: PSpace,
        assignment: BTreeMap<Generator, Image>,
    ) -> Result<Self> {
        let mut expected = 0;
        for (cell, label) in source.generators() {
            let key = (cell.id.clone(), label.clone());
            let image = assignment.get(&key).ok_or_else(|| {
                Error::Morphism(format!("no image for generator {}/{}", key.0, key.1))
            })?;
            let len = cell.arity().cloned().unwrap_or_else(|| Length::of(1, 1));
            check_image(&target, cell.is_free(), &len, image)?;
            expected += 1;
        }
        if assignment.len() != expected {
            return Err(Error::Morphism(
                "assignment names generators outside the source".into(),
            ));
        }
        Ok(GenMorphism {
            source,
            target,
            assignment,
        })
    }

    pub fn identity(space: &PSpace) -> Self {
        let assignment = space
            .generators()
            .map(|(c, l)| {
                let image = match &c.kind {
                    CellKind::Free { arity } => {
                        Image::At(Element::free(c.id.clone(), identity(arity), l.clone()))
                    }
                    CellKind::Const => Image::Const {
                        cell: c.id.clone(),
                        label: l.clone(),
                    },
                };
                ((c.id.clone(), l.clone()), image)
            })
            .collect();
        GenMorphism {
            source: space.clone(),
            target: space.clone(),
            assignment,
        }
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

    /// Evaluates the transformation at a point of the source.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.source
            .check_element(x)
            .map_err(|e| Error::Morphism(e.to_string()))?;
        let image = &self.assignment[&x.generator()];
        match &x.data {
            ElementData::Free { map, .. } => image.realize(map, &x.length),
            ElementData::Const { .. } => image.realize(&identity(&x.length), &x.length),
        }
    }
}

/// The colimit of a finitely presented space: every cell collapses to its
/// label set, because all points over one label are connected by restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colimit {
    classes: BTreeSet<Generator>,
}

impl Colimit {
    pub fn classes(&self) -> &BTreeSet<Generator> {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classify(&self, x: &Element) -> Result<Generator> {
        let g = x.generator();
        if self.classes.contains(&g) {
            Ok(g)
        } else {
            Err(Error::InvalidElement(format!(
                "{}/{} is not a point of this space",
                g.0, g.1
            )))
        }
    }
}

pub fn colimit(d: &PSpace) -> Colimit {
    Colimit {
        classes: d
            .generators()
            .map(|(c, l)| (c.id.clone(), l.clone()))
            .collect(),
    }
}

#[derive(Serialize, Deserialize)]
struct CellRepr {
    id: CellId,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arity: Option<Length>,
    labels: Vec<Label>,
}

impl TryFrom<CellRepr> for Cell {
    type Error = Error;
    fn try_from(r: CellRepr) -> Result<Self> {
        let kind = match (r.kind.as_str(), r.arity) {
            ("free", Some(arity)) => CellKind::Free { arity },
            ("free", None) => {
                return Err(Error::InvalidSpace(format!(
                    "free cell {} needs an arity",
                    r.id
                )))
            }
            ("const", None) => CellKind::Const,
            ("const", Some(_)) => {
                return Err(Error::InvalidSpace(format!(
                    "constant cell {} cannot carry an arity",
                    r.id
                )))
            }
            (other, _) => return Err(Error::InvalidSpace(format!("unknown cell kind {other:?}"))),
        };
        Cell::new(r.id, kind, r.labels)
    }
}

impl From<Cell> for CellRepr {
    fn from(c: Cell) -> Self {
        let (kind, arity) = match c.kind {
            CellKind::Free { arity } => ("free", Some(arity)),
            CellKind::Const => ("const", None),
        };
        CellRepr {
            id: c.id,
            kind: kind.into(),
            arity,
            labels: c.labels,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PSpaceRepr {
    cells: Vec<Cell>,
}

impl TryFrom<PSpaceRepr> for PSpace {
    type Error = Error;
    fn try_from(r: PSpaceRepr) -> Result<Self> {
        PSpace::new(r.cells)
    }
}

impl From<PSpace> for PSpaceRepr {
    fn from(s: PSpace) -> Self {
        PSpaceRepr { cells: s.cells }
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    cell: CellId,
    length: Length,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    map: Option<PLMap>,
    label: Label,
}

impl TryFrom<ElementRepr> for Element {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        match r.map {
            Some(map) => {
                if map.dom() != &r.length {
                    return Err(Error::InvalidElement(format!(
                        "map domain {} differs from element length {}",
                        map.dom(),
                        r.length
                    )));
                }
                Ok(Element::free(r.cell, map, r.label))
            }
            None => Ok(Element::constant(r.cell, r.length, r.label)),
        }
    }
}

impl From<Element> for ElementRepr {
    fn from(x: Element) -> Self {
        let (map, label) = match x.data {
            ElementData::Free { map, label } => (Some(map), label),
            ElementData::Const { label } => (None, label),
        };
        ElementRepr {
            cell: x.cell,
            length: x.length,
            map,
            label,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmaps::{mu, PLMap};
    use crate::rational::ratio;

    fn one() -> Length {
        Length::of(1, 1)
    }

    fn u() -> Label {
        Label::new("u")
    }

    #[test]
    fn cell_invariants() {
        assert!(Cell::free("c", one(), &[]).is_err());
        assert!(Cell::constant("c", &["a", "a"]).is_err());
        let c = Cell::free("c", one(), &["a"]).unwrap();
        assert!(PSpace::new(vec![c.clone(), c]).is_err());
        assert!(PSpace::new(vec![]).is_err());
    }

    #[test]
    fn restrict_identity_is_noop() {
        let x = Element::free(CellId::new("c"), mu(&Length::of(3, 1)), u());
        assert_eq!(restrict(&x, &identity(&x.length)).unwrap(), x);
    }

    #[test]
    fn restrict_free_composes() {
        let x = Element::free(CellId::new("c"), identity(&one()), u());
        let y = restrict(&x, &mu(&Length::of(2, 1))).unwrap();
        assert_eq!(y.map(), Some(&mu(&Length::of(2, 1))));
        assert_eq!(y.length, Length::of(2, 1));
    }

    #[test]
    fn restrict_const_changes_length_only() {
        let x = Element::constant(CellId::new("k"), Length::of(2, 1), Label::new("c"));
        let omega = PLMap::from_breaks(vec![
            (ratio(0, 1), ratio(0, 1)),
            (ratio(1, 1), ratio(3, 2)),
            (ratio(5, 1), ratio(2, 1)),
        ])
        .unwrap();
        let y = restrict(&x, &omega).unwrap();
        assert_eq!(
            y,
            Element::constant(CellId::new("k"), Length::of(5, 1), Label::new("c"))
        );
        assert!(matches!(restrict(&y, &omega), Err(Error::Action(_))));
    }

    #[test]
    fn apply_identity_and_free_image() {
        let d = PSpace::free("d", one(), &["u"]).unwrap();
        let x = Element::free(CellId::new("d"), mu(&Length::of(3, 1)), u());
        assert_eq!(GenMorphism::identity(&d).apply(&x).unwrap(), x);

        let two = Length::of(2, 1);
        let f = PSpace::free("f", two.clone(), &["w"]).unwrap();
        let psi = PLMap::from_breaks(vec![
            (ratio(0, 1), ratio(0, 1)),
            (ratio(1, 2), ratio(3, 2)),
            (ratio(1, 1), ratio(2, 1)),
        ])
        .unwrap();
        let mut a = BTreeMap::new();
        a.insert(
            (CellId::new("d"), u()),
            Image::At(Element::free(
                CellId::new("f"),
                psi.clone(),
                Label::new("w"),
            )),
        );
        let m = GenMorphism::new(d, f, a).unwrap();
        let phi = mu(&Length::of(3, 1));
        let y = m
            .apply(&Element::free(CellId::new("d"), phi.clone(), u()))
            .unwrap();
        assert_eq!(
            y,
            Element::free(
                CellId::new("f"),
                compose(&phi, &psi).unwrap(),
                Label::new("w")
            )
        );
    }

    #[test]
    fn const_generators_cannot_hit_free_cells() {
        let d = PSpace::constant("k", &["c"]).unwrap();
        let f = PSpace::free("f", one(), &["w"]).unwrap();
        let mut a = BTreeMap::new();
        a.insert(
            (CellId::new("k"), Label::new("c")),
            Image::Const {
                cell: CellId::new("f"),
                label: Label::new("w"),
            },
        );
        assert!(matches!(GenMorphism::new(d, f, a), Err(Error::Morphism(_))));
    }

    #[test]
    fn apply_rejects_foreign_points() {
        let d = PSpace::free("d", one(), &["u"]).unwrap();
        let stray = Element::free(CellId::new("e"), identity(&one()), u());
        assert!(matches!(
            GenMorphism::identity(&d).apply(&stray),
            Err(Error::Morphism(_))
        ));
    }

    #[test]
    fn colimits() {
        let d = PSpace::free("d", one(), &["a", "b"]).unwrap();
        let c = colimit(&d);
        assert_eq!(c.len(), 2);
        let x = Element::free(CellId::new("d"), mu(&Length::of(7, 3)), Label::new("a"));
        assert_eq!(c.classify(&x).unwrap(), (CellId::new("d"), Label::new("a")));

        let k = PSpace::constant("k", &["c"]).unwrap();
        assert_eq!(colimit(&k).len(), 1);

        let both = PSpace::new(vec![
            Cell::free("d", one(), &["a", "b"]).unwrap(),
            Cell::constant("k", &["c"]).unwrap(),
        ])
        .unwrap();
        assert_eq!(colimit(&both).len(), 3);
    }

    #[test]
    fn json_shapes() {
        let s = PSpace::new(vec![
            Cell::free("c1", Length::of(3, 2), &["u"]).unwrap(),
            Cell::constant("c2", &["v", "w"]).unwrap(),
        ])
        .unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"cells":[{"id":"c1","kind":"free","arity":"3/2","labels":["u"]},{"id":"c2","kind":"const","labels":["v","w"]}]}"#
        );
        assert_eq!(serde_json::from_str::<PSpace>(&j).unwrap(), s);
        assert!(serde_json::from_str::<PSpace>(
            r#"{"cells":[{"id":"c","kind":"free","arity":"0","labels":["u"]}]}"#
        )
        .is_err());

        let x = Element::free(CellId::new("c1"), mu(&Length::of(3, 2)), u());
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(
            j,
            r#"{"cell":"c1","length":"3/2","map":{"dom":"3/2","cod":"1","breaks":[["0","0"],["3/2","1"]]},"label":"u"}"#
        );
        assert_eq!(serde_json::from_str::<Element>(&j).unwrap(), x);
    }
}
