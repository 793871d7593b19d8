//! Seeded generators for maps, spaces, points and representatives.
//!
//! Everything is drawn from a ChaCha stream, so a `(seed, profile)` pair
//! replays the same sequence on every platform.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gmaps::PLMap;
use crate::pspaces::{
    Cell, CellKind, Element, GenMorphism, Generator, Image, Label, PSpace, TensorGenerator,
    TensorMorphism,
};
use crate::rational::{total, Length, Rational};
use crate::tensorcalc::{tensor_space, RawTriple};

/// Size bounds for random instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    /// Interior breakpoints per random map are drawn from `0..=max_breaks`.
    pub max_breaks: usize,
    /// Largest denominator of random lengths and breakpoint fractions.
    pub denominator_bound: u32,
    /// Random lengths lie in `(0, max_length]`.
    pub max_length: u32,
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            max_breaks: 6,
            denominator_bound: 64,
            max_length: 8,
        }
    }
}

/// Which cell kinds a random space may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cells {
    Free,
    Const,
    Mixed,
}

pub struct Gen {
    rng: ChaCha8Rng,
    profile: Profile,
}

fn fnv1a(bytes: &[u8], mut h: u64) -> u64 {
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Gen {
    pub fn new(seed: u64, profile: Profile) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            profile,
        }
    }

    /// A stream keyed by `seed` and a path of names, independent of any
    /// other stream drawn from the same seed.
    pub fn derived(seed: u64, path: &[&str], profile: Profile) -> Self {
        let mut h = fnv1a(&seed.to_le_bytes(), 0xcbf2_9ce4_8422_2325);
        for p in path {
            h = fnv1a(p.as_bytes(), h);
            h = fnv1a(&[0xff], h);
        }
        Gen::new(h, profile)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A uniform integer in `lo..=hi`.
    pub fn rng_range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    fn grid(&self) -> u32 {
        self.profile.denominator_bound.max(2)
    }

    pub fn length(&mut self) -> Length {
        let q = self
            .rng
            .gen_range(1..=self.profile.denominator_bound.max(1));
        let p = self.rng.gen_range(1..=self.profile.max_length.max(1) * q);
        Length::new(Rational::new(BigInt::from(p), BigInt::from(q))).expect("p, q > 0")
    }

    /// A rational strictly inside `(lo, hi)`.
    pub fn between(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        let d = self.grid();
        let n = self.rng.gen_range(1..d);
        lo + (hi - lo) * Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn fractions(&mut self, k: usize) -> Vec<Rational> {
        let d = self.grid() as usize;
        let mut picks: Vec<usize> = sample(&mut self.rng, d - 1, k)
            .into_iter()
            .map(|i| i + 1)
            .collect();
        picks.sort_unstable();
        picks
            .into_iter()
            .map(|n| Rational::new(BigInt::from(n), BigInt::from(d)))
            .collect()
    }

    pub fn map(&mut self, dom: &Length, cod: &Length) -> PLMap {
        let k = self
            .rng
            .gen_range(0..=self.profile.max_breaks)
            .min(self.grid() as usize - 1);
        self.map_with(dom, cod, k)
    }

    fn map_with(&mut self, dom: &Length, cod: &Length, k: usize) -> PLMap {
        let ts = self.fractions(k);
        let vs = self.fractions(k);
        let mut breaks = vec![(
            Rational::from_integer(0.into()),
            Rational::from_integer(0.into()),
        )];
        breaks.extend(
            ts.into_iter()
                .zip(vs)
                .map(|(t, v)| (dom.value() * t, cod.value() * v)),
        );
        breaks.push((dom.value().clone(), cod.value().clone()));
        PLMap::from_breaks(breaks).expect("sorted distinct fractions give a monotone map")
    }

    /// A map with at least one genuine kink.
    pub fn bent_map(&mut self, dom: &Length, cod: &Length) -> PLMap {
        let top = self.profile.max_breaks.clamp(1, self.grid() as usize - 1);
        loop {
            let k = self.rng.gen_range(1..=top);
            let m = self.map_with(dom, cod, k);
            if !m.is_linear() {
                return m;
            }
        }
    }

    pub fn any_map(&mut self) -> PLMap {
        let (dom, cod) = (self.length(), self.length());
        self.map(&dom, &cod)
    }

    /// A split `(c₁, c₂)` of `l` into two positive parts.
    pub fn split(&mut self, l: &Length) -> (Length, Length) {
        let c1 = self.between(&Rational::from_integer(0.into()), l.value());
        let c2 = l.value() - &c1;
        (
            Length::new(c1).expect("inside"),
            Length::new(c2).expect("inside"),
        )
    }

    fn labels(&mut self, prefix: &str) -> Vec<Label> {
        let n = self.rng.gen_range(1..=3);
        (0..n).map(|i| Label::new(format!("{prefix}{i}"))).collect()
    }

    /// A random space with one to three cells.
    pub fn space(&mut self, cells: Cells) -> PSpace {
        let n = self.rng.gen_range(1..=3);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let free = match cells {
                Cells::Free => true,
                Cells::Const => false,
                Cells::Mixed => self.rng.gen_bool(0.5),
            };
            let kind = if free {
                CellKind::Free {
                    arity: self.length(),
                }
            } else {
                CellKind::Const
            };
            let prefix = if free { "u" } else { "k" };
            let labels = self.labels(prefix);
            out.push(
                Cell::new(crate::pspaces::CellId(format!("c{i}")), kind, labels)
                    .expect("fresh labels"),
            );
        }
        PSpace::new(out).expect("fresh ids")
    }

    /// A space with at least one free and one constant cell.
    pub fn rich_space(&mut self) -> PSpace {
        let mut cells = self.space(Cells::Mixed).cells().to_vec();
        let n = cells.len();
        cells.push(
            Cell::new(
                crate::pspaces::CellId(format!("c{n}")),
                CellKind::Free {
                    arity: self.length(),
                },
                self.labels("u"),
            )
            .expect("fresh"),
        );
        cells.push(
            Cell::new(
                crate::pspaces::CellId(format!("c{}", n + 1)),
                CellKind::Const,
                self.labels("k"),
            )
            .expect("fresh"),
        );
        PSpace::new(cells).expect("fresh ids")
    }

    fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.rng.gen_range(0..items.len())]
    }

    pub fn generator(&mut self, space: &PSpace) -> Generator {
        let cell = self.pick(space.cells()).clone();
        let label = self.pick(cell.labels()).clone();
        (cell.id().clone(), label)
    }

    /// A random point of `space` at `length`.
    pub fn element_at(&mut self, space: &PSpace, length: &Length) -> Element {
        let cell = self.pick(space.cells()).clone();
        let label = self.pick(cell.labels()).clone();
        match cell.kind() {
            CellKind::Free { arity } => {
                Element::free(cell.id().clone(), self.map(length, arity), label)
            }
            CellKind::Const => Element::constant(cell.id().clone(), length.clone(), label),
        }
    }

    pub fn element(&mut self, space: &PSpace) -> Element {
        let l = self.length();
        self.element_at(space, &l)
    }

    /// A random representative `(ψ, x₁, …, xₙ)` over the given factors.
    pub fn raw(&mut self, factors: &[&PSpace]) -> RawTriple {
        let parts: Vec<Element> = factors.iter().map(|d| self.element(d)).collect();
        let lengths: Vec<Length> = parts.iter().map(|x| x.length.clone()).collect();
        let cod = total(&lengths).expect("nonempty");
        let dom = self.length();
        let psi = self.map(&dom, &cod);
        RawTriple::new(psi, parts).expect("consistent by construction")
    }

    fn image_of(&mut self, source_free: bool, at: &Length, target: &PSpace) -> Image {
        let consts: Vec<&Cell> = target.cells().iter().filter(|c| !c.is_free()).collect();
        if source_free {
            let cell = self.pick(target.cells()).clone();
            let label = self.pick(cell.labels()).clone();
            Image::At(match cell.kind() {
                CellKind::Free { arity } => {
                    Element::free(cell.id().clone(), self.map(at, arity), label)
                }
                CellKind::Const => Element::constant(cell.id().clone(), at.clone(), label),
            })
        } else {
            let cell = (*self.pick(&consts)).clone();
            let label = self.pick(cell.labels()).clone();
            Image::Const {
                cell: cell.id().clone(),
                label,
            }
        }
    }

    /// A random natural map; `target` needs a constant cell whenever
    /// `source` has one.
    pub fn gen_morphism(&mut self, source: &PSpace, target: &PSpace) -> GenMorphism {
        let mut assignment = BTreeMap::new();
        for (cell, label) in source.generators() {
            let at = cell.arity().cloned().unwrap_or_else(|| Length::of(1, 1));
            let image = self.image_of(cell.is_free(), &at, target);
            assignment.insert((cell.id().clone(), label.clone()), image);
        }
        GenMorphism::new(source.clone(), target.clone(), assignment).expect("valid by construction")
    }

    /// A random natural map `D ⊗ E -> F`; `F` needs a constant cell.
    pub fn tensor_morphism(&mut self, d: &PSpace, e: &PSpace, f: &PSpace) -> TensorMorphism {
        let mut assignment = BTreeMap::new();
        for (dc, u) in d.generators() {
            for (ec, v) in e.generators() {
                let image = match (dc.arity(), ec.arity()) {
                    (Some(a), Some(b)) => self.image_of(true, &(a + b), f),
                    _ => self.image_of(false, &Length::of(1, 1), f),
                };
                let g = TensorGenerator {
                    left: (dc.id().clone(), u.clone()),
                    right: (ec.id().clone(), v.clone()),
                };
                assignment.insert(g, image);
            }
        }
        TensorMorphism::new(tensor_space(d, e), f.clone(), assignment)
            .expect("valid by construction")
    }
}
