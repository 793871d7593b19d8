//! Randomized law checks over seeded instances.
//!
//! Each suite is a list of named checks; each check draws its own stream
//! from `(seed, suite, check)`, so adding a check never perturbs the inputs
//! of another. Expected values come from pointwise evaluation or from a
//! second route through the calculus, never from the code path under test
//! alone.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::braiding::{
    braid2, braid_class, braid_map, braid_map_via_mu, naive_swap_check, naive_swap_fixture,
    naturality_square, naturality_witness, non_naturality_fixture,
};
use crate::error::{Error, Result};
use crate::gmaps::{
    compose, decompose_map, identity, mu, shift_left, shift_right, tensor_map, PLMap,
};
use crate::pspaces::{
    colimit, curry_left, curry_right, restrict, uncurry_left, uncurry_right, CellId, Element,
    ElementData, Label, PSpace, ShiftSide,
};
use crate::random::{Cells, Gen, Profile};
use crate::rational::{int, Length, Rational};
use crate::tensorcalc::{
    associate, associate_inverse, canonicalize, collapse_left, collapse_right, pentagon_paths,
    restrict_class, tensor_space, Bracket, ClosedForm, Grouped, LeftNested, RawTriple, Slot,
    TensorClass,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const SUITES: [&str; 10] = [
    "gmaps-laws",
    "shift-functors",
    "coend-normalform",
    "associator-pentagon",
    "ftenseur-ptenseur",
    "colimit-product",
    "adjunction-roundtrip",
    "braiding-laws",
    "non-naturality",
    "naive-swap-negative",
];

/// Random cases per check when no override is given.
pub fn default_cases(suite: &str) -> Option<usize> {
    Some(match suite {
        "gmaps-laws" | "shift-functors" | "coend-normalform" => 500,
        "associator-pentagon" | "adjunction-roundtrip" => 200,
        "ftenseur-ptenseur" | "braiding-laws" => 300,
        "colimit-product" => 50,
        "non-naturality" | "naive-swap-negative" => 100,
        _ => return None,
    })
}

/// The results each suite is responsible for. The lists are disjoint.
pub fn covers(suite: &str) -> &'static [&'static str] {
    match suite {
        "gmaps-laws" => &[
            "category-axioms",
            "strict-tensor",
            "decomposition-bijection",
            "scaling-maps",
        ],
        "shift-functors" => &["left-shift-functor", "right-shift-functor"],
        "coend-normalform" => &[
            "presheaf-action",
            "tensor-identifications",
            "normal-form-surjection",
        ],
        "associator-pentagon" => &["first-collapse", "second-collapse", "associator-pentagon"],
        "ftenseur-ptenseur" => &["free-tensor-closed-form", "constant-tensor-collapse"],
        "colimit-product" => &["colimit-of-tensor"],
        "adjunction-roundtrip" => &["biclosed-adjunctions"],
        "braiding-laws" => &["braid-two", "braid-map", "class-braiding"],
        "non-naturality" => &["braiding-non-naturality"],
        "naive-swap-negative" => &["naive-swap-ill-defined"],
        _ => &[],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// The first failing input, serialized.
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Suite {
    pub name: String,
    pub seed: u64,
    pub cases: usize,
    pub covers: Vec<String>,
    pub checks: Vec<CheckResult>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Totals {
    pub suites: usize,
    pub checks: usize,
    pub cases: usize,
    pub failed_checks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub seed: u64,
    pub profile: Profile,
    pub suites: Vec<Suite>,
    pub totals: Totals,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(Suite::passed)
    }
}

type Outcome = std::result::Result<(), Value>;

fn j<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

trait Ctx<T> {
    fn ctx(self, inputs: &Value) -> std::result::Result<T, Value>;
}

impl<T> Ctx<T> for Result<T> {
    fn ctx(self, inputs: &Value) -> std::result::Result<T, Value> {
        self.map_err(|e| json!({ "inputs": inputs, "error": e.to_string() }))
    }
}

fn ensure(ok: bool, inputs: &Value, violated: &str) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(json!({ "inputs": inputs, "violated": violated }))
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

struct Runner<'a> {
    suite: &'a str,
    seed: u64,
    profile: Profile,
    cases: usize,
    checks: Vec<CheckResult>,
}

impl Runner<'_> {
    fn check(&mut self, name: &str, case: impl FnMut(&mut Gen) -> Outcome) {
        let n = self.cases;
        self.check_n(name, n, case);
    }

    fn check_n(&mut self, name: &str, n: usize, mut case: impl FnMut(&mut Gen) -> Outcome) {
        let mut g = Gen::derived(self.seed, &[self.suite, name], self.profile);
        let (mut passed, mut failed, mut counterexample) = (0, 0, None);
        for _ in 0..n {
            let outcome = catch_unwind(AssertUnwindSafe(|| case(&mut g)))
                .unwrap_or_else(|p| Err(json!({ "panic": panic_message(p) })));
            match outcome {
                Ok(()) => passed += 1,
                Err(v) => {
                    failed += 1;
                    counterexample.get_or_insert(v);
                }
            }
        }
        self.checks.push(CheckResult {
            name: name.into(),
            cases: n,
            passed,
            failed,
            counterexample,
        });
    }
}

/// Points of `[0, len]` to probe: both ends, the given interior points and
/// a few random ones.
fn probes(g: &mut Gen, len: &Length, extra: impl IntoIterator<Item = Rational>) -> Vec<Rational> {
    let zero = Rational::zero();
    let mut ts = vec![zero.clone(), len.value().clone()];
    ts.extend(extra);
    for _ in 0..3 {
        ts.push(g.between(&zero, len.value()));
    }
    ts.sort();
    ts.dedup();
    ts
}

fn lengths(g: &mut Gen, n: usize) -> Vec<Length> {
    (0..n).map(|_| g.length()).collect()
}

fn gmaps_laws(r: &mut Runner) {
    r.check("compose-associative", |g| {
        let l = lengths(g, 4);
        let (f, h, k) = (
            g.map(&l[0], &l[1]),
            g.map(&l[1], &l[2]),
            g.map(&l[2], &l[3]),
        );
        let inputs = json!({ "f": j(&f), "g": j(&h), "h": j(&k) });
        let lhs = compose(&compose(&f, &h).ctx(&inputs)?, &k).ctx(&inputs)?;
        let rhs = compose(&f, &compose(&h, &k).ctx(&inputs)?).ctx(&inputs)?;
        ensure(lhs == rhs, &inputs, "h(gf) = (hg)f")
    });
    r.check("identity-units", |g| {
        let f = g.any_map();
        let inputs = json!({ "f": j(&f) });
        let left = compose(&identity(f.dom()), &f).ctx(&inputs)?;
        let right = compose(&f, &identity(f.cod())).ctx(&inputs)?;
        ensure(left == f && right == f, &inputs, "f id = f = id f")
    });
    r.check("compose-pointwise", |g| {
        let l = lengths(g, 3);
        let (f, h) = (g.map(&l[0], &l[1]), g.map(&l[1], &l[2]));
        let inputs = json!({ "f": j(&f), "g": j(&h) });
        let gf = compose(&f, &h).ctx(&inputs)?;
        let kinks = f
            .breaks()
            .iter()
            .map(|(t, _)| t.clone())
            .collect::<Vec<_>>();
        for t in probes(g, &l[0], kinks) {
            let want = h.eval(&f.eval(&t).ctx(&inputs)?).ctx(&inputs)?;
            ensure(
                gf.eval(&t).ctx(&inputs)? == want,
                &inputs,
                "(gf)(t) = g(f(t))",
            )?;
        }
        Ok(())
    });
    r.check("inverse-laws", |g| {
        let f = g.any_map();
        let inputs = json!({ "f": j(&f) });
        let inv = f.inverse();
        ensure(
            compose(&f, &inv).ctx(&inputs)? == identity(f.dom()),
            &inputs,
            "f⁻¹f = id",
        )?;
        ensure(
            compose(&inv, &f).ctx(&inputs)? == identity(f.cod()),
            &inputs,
            "ff⁻¹ = id",
        )?;
        ensure(inv.inverse() == f, &inputs, "(f⁻¹)⁻¹ = f")?;
        for t in probes(g, f.dom(), []) {
            let back = f.eval_inverse(&f.eval(&t).ctx(&inputs)?).ctx(&inputs)?;
            ensure(back == t, &inputs, "f⁻¹(f(t)) = t")?;
        }
        Ok(())
    });
    r.check("monotone-endpoints", |g| {
        let f = g.any_map();
        let inputs = json!({ "f": j(&f) });
        let ts = probes(g, f.dom(), f.breaks().iter().map(|(t, _)| t.clone()));
        let vs = ts
            .iter()
            .map(|t| f.eval(t))
            .collect::<Result<Vec<_>>>()
            .ctx(&inputs)?;
        ensure(
            vs[0].is_zero() && vs.last() == Some(f.cod().value()),
            &inputs,
            "f(0) = 0, f(ℓ) = ℓ'",
        )?;
        ensure(
            vs.windows(2).all(|w| w[0] < w[1]),
            &inputs,
            "f strictly increasing",
        )
    });
    r.check("canonical-breakpoints", |g| {
        let f = g.any_map();
        let inputs = json!({ "f": j(&f) });
        let mut padded = Vec::new();
        for w in f.breaks().windows(2) {
            let (a, b) = (&w[0], &w[1]);
            padded.push(a.clone());
            let half = Rational::new(1.into(), 2.into());
            padded.push(((&a.0 + &b.0) * &half, (&a.1 + &b.1) * &half));
        }
        padded.push(f.breaks().last().expect("two points").clone());
        let same = PLMap::from_breaks(padded).ctx(&inputs)?;
        ensure(same == f, &inputs, "collinear points merge")?;
        let back: PLMap = serde_json::from_value(j(&f))
            .map_err(|e| json!({ "inputs": inputs, "error": e.to_string() }))?;
        ensure(back == f, &inputs, "JSON round trip")
    });
    r.check("tensor-associative", |g| {
        let (f1, f2, f3) = (g.any_map(), g.any_map(), g.any_map());
        let inputs = json!({ "f1": j(&f1), "f2": j(&f2), "f3": j(&f3) });
        let lhs = tensor_map(&tensor_map(&f1, &f2), &f3);
        let rhs = tensor_map(&f1, &tensor_map(&f2, &f3));
        ensure(lhs == rhs, &inputs, "(f1⊗f2)⊗f3 = f1⊗(f2⊗f3)")
    });
    r.check("tensor-identities", |g| {
        let (a, b) = (g.length(), g.length());
        let inputs = json!({ "a": j(&a), "b": j(&b) });
        ensure(
            tensor_map(&identity(&a), &identity(&b)) == identity(&(&a + &b)),
            &inputs,
            "id⊗id = id",
        )
    });
    r.check("tensor-interchange", |g| {
        let l = lengths(g, 6);
        let (g1, f1) = (g.map(&l[0], &l[1]), g.map(&l[1], &l[2]));
        let (g2, f2) = (g.map(&l[3], &l[4]), g.map(&l[4], &l[5]));
        let inputs = json!({ "g1": j(&g1), "f1": j(&f1), "g2": j(&g2), "f2": j(&f2) });
        let lhs = tensor_map(
            &compose(&g1, &f1).ctx(&inputs)?,
            &compose(&g2, &f2).ctx(&inputs)?,
        );
        let rhs = compose(&tensor_map(&g1, &g2), &tensor_map(&f1, &f2)).ctx(&inputs)?;
        ensure(lhs == rhs, &inputs, "(f1g1)⊗(f2g2) = (f1⊗f2)(g1⊗g2)")
    });
    r.check("tensor-pointwise", |g| {
        let (f1, f2) = (g.any_map(), g.any_map());
        let inputs = json!({ "f1": j(&f1), "f2": j(&f2) });
        let t = tensor_map(&f1, &f2);
        let a = f1.dom().value();
        for s in probes(g, t.dom(), [a.clone()]) {
            let want = if &s <= a {
                f1.eval(&s).ctx(&inputs)?
            } else {
                f1.cod().value() + f2.eval(&(&s - a)).ctx(&inputs)?
            };
            ensure(
                t.eval(&s).ctx(&inputs)? == want,
                &inputs,
                "(f1⊗f2)(t) by cases",
            )?;
        }
        Ok(())
    });
    r.check("decompose-after-tensor", |g| {
        let (f1, f2) = (g.any_map(), g.any_map());
        let inputs = json!({ "f1": j(&f1), "f2": j(&f2) });
        let (p1, p2) = decompose_map(&tensor_map(&f1, &f2), f1.cod(), f2.cod()).ctx(&inputs)?;
        ensure(p1 == f1 && p2 == f2, &inputs, "decompose(f1⊗f2) = (f1, f2)")
    });
    r.check("tensor-after-decompose", |g| {
        let f = g.any_map();
        let (c1, c2) = g.split(f.cod());
        let inputs = json!({ "f": j(&f), "split": [j(&c1), j(&c2)] });
        let (p1, p2) = decompose_map(&f, &c1, &c2).ctx(&inputs)?;
        let s = f.eval_inverse(c1.value()).ctx(&inputs)?;
        ensure(
            p1.dom().value() == &s && p1.cod() == &c1 && p2.cod() == &c2,
            &inputs,
            "ℓ₁ = f⁻¹(c₁)",
        )?;
        ensure(tensor_map(&p1, &p2) == f, &inputs, "f₁⊗f₂ = f")
    });
    r.check("scaling-maps", |g| {
        let l = g.length();
        let inputs = json!({ "l": j(&l) });
        let m = mu(&l);
        ensure(
            m.is_linear() && m.cod().value() == &int(1),
            &inputs,
            "μ_ℓ: ℓ -> 1 linear",
        )?;
        for t in probes(g, &l, []) {
            ensure(
                m.eval(&t).ctx(&inputs)? == &t / l.value(),
                &inputs,
                "μ_ℓ(t) = t/ℓ",
            )?;
        }
        ensure(
            compose(&m, &m.inverse()).ctx(&inputs)? == identity(&l),
            &inputs,
            "μ⁻¹μ = id",
        )
    });
}

fn shift_functors(r: &mut Runner) {
    for side in [ShiftSide::Left, ShiftSide::Right] {
        let (shift, prefix): (fn(&Length, &PLMap) -> PLMap, &str) = match side {
            ShiftSide::Left => (shift_left, "left"),
            ShiftSide::Right => (shift_right, "right"),
        };
        r.check(&format!("{prefix}-identity"), |g| {
            let (l, m) = (g.length(), g.length());
            let inputs = json!({ "shift": j(&l), "at": j(&m) });
            ensure(
                shift(&l, &identity(&m)) == identity(&(&l + &m)),
                &inputs,
                "s(id) = id",
            )
        });
        r.check(&format!("{prefix}-composition"), |g| {
            let ls = lengths(g, 4);
            let (f, h) = (g.map(&ls[1], &ls[2]), g.map(&ls[2], &ls[3]));
            let inputs = json!({ "shift": j(&ls[0]), "f": j(&f), "g": j(&h) });
            let lhs = shift(&ls[0], &compose(&f, &h).ctx(&inputs)?);
            let rhs = compose(&shift(&ls[0], &f), &shift(&ls[0], &h)).ctx(&inputs)?;
            ensure(lhs == rhs, &inputs, "s(gf) = s(g)s(f)")
        });
        r.check(&format!("{prefix}-additive"), |g| {
            let (l1, l2, f) = (g.length(), g.length(), g.any_map());
            let inputs = json!({ "outer": j(&l1), "inner": j(&l2), "f": j(&f) });
            ensure(
                shift(&l1, &shift(&l2, &f)) == shift(&(&l1 + &l2), &f),
                &inputs,
                "s_a s_b = s_{a+b}",
            )
        });
        r.check(&format!("{prefix}-pointwise"), |g| {
            let (l, f) = (g.length(), g.any_map());
            let inputs = json!({ "shift": j(&l), "f": j(&f) });
            let s = shift(&l, &f);
            for t in probes(g, s.dom(), [l.value().clone(), f.dom().value().clone()]) {
                let want = match side {
                    ShiftSide::Left if &t <= l.value() => t.clone(),
                    ShiftSide::Left => l.value() + f.eval(&(&t - l.value())).ctx(&inputs)?,
                    ShiftSide::Right if &t <= f.dom().value() => f.eval(&t).ctx(&inputs)?,
                    ShiftSide::Right => f.cod().value() + (&t - f.dom().value()),
                };
                ensure(
                    s.eval(&t).ctx(&inputs)? == want,
                    &inputs,
                    "shifted map by cases",
                )?;
            }
            Ok(())
        });
    }
    r.check("shift-interchange", |g| {
        let (f, h) = (g.any_map(), g.any_map());
        let inputs = json!({ "f": j(&f), "g": j(&h) });
        let t = tensor_map(&f, &h);
        let one = compose(&shift_right(h.dom(), &f), &shift_left(f.cod(), &h)).ctx(&inputs)?;
        let two = compose(&shift_left(f.dom(), &h), &shift_right(h.cod(), &f)).ctx(&inputs)?;
        ensure(
            one == t && two == t,
            &inputs,
            "(id⊗g)(f⊗id) = f⊗g = (f⊗id)(id⊗g)",
        )
    });
}

fn factors(g: &mut Gen, lo: usize, hi: usize) -> Vec<PSpace> {
    let n = g.rng_range(lo, hi);
    (0..n).map(|_| g.space(Cells::Mixed)).collect()
}

fn refs(spaces: &[PSpace]) -> Vec<&PSpace> {
    spaces.iter().collect()
}

fn rewrite_maps(g: &mut Gen, r: &RawTriple) -> Vec<PLMap> {
    r.parts
        .iter()
        .map(|x| {
            let m = g.length();
            g.map(&x.length, &m)
        })
        .collect()
}

fn raw_inputs(r: &RawTriple) -> Value {
    json!({ "triple": j(r) })
}

fn coend_normalform(r: &mut Runner) {
    r.check("single-slot-rewrite", |g| {
        let spaces = factors(g, 2, 3);
        let t = g.raw(&refs(&spaces));
        let i = g.rng_range(0, t.parts.len() - 1);
        let m = g.length();
        let phi = g.map(&t.parts[i].length, &m);
        let inputs = json!({ "triple": j(&t), "slot": i, "phi": j(&phi) });
        let moved = t.push(i, &phi).ctx(&inputs)?;
        ensure(
            canonicalize(&t).ctx(&inputs)? == canonicalize(&moved).ctx(&inputs)?,
            &inputs,
            "rewrite keeps the class",
        )
    });
    r.check("all-slot-rewrite", |g| {
        let spaces = factors(g, 2, 3);
        let t = g.raw(&refs(&spaces));
        let phis = rewrite_maps(g, &t);
        let inputs = json!({ "triple": j(&t), "phis": j(&phis) });
        let moved = t.push_all(&phis).ctx(&inputs)?;
        ensure(
            canonicalize(&t).ctx(&inputs)? == canonicalize(&moved).ctx(&inputs)?,
            &inputs,
            "rewrite keeps the class",
        )
    });
    r.check("free-slot-pointwise", |g| {
        let spaces = factors(g, 2, 3);
        let t = g.raw(&refs(&spaces));
        let inputs = raw_inputs(&t);
        let c = canonicalize(&t).ctx(&inputs)?;
        let mut offset = Rational::zero();
        for (x, s) in t.parts.iter().zip(c.slots()) {
            let next = &offset + x.length.value();
            ensure(
                s.cell() == &x.cell && s.label() == x.label(),
                &inputs,
                "slot keeps cell and label",
            )?;
            if let (
                ElementData::Free { map, .. },
                Slot::Free {
                    start,
                    end,
                    map: sm,
                    ..
                },
            ) = (&x.data, s)
            {
                let want_start = t.psi.eval_inverse(&offset).ctx(&inputs)?;
                let want_end = t.psi.eval_inverse(&next).ctx(&inputs)?;
                ensure(
                    start == &want_start && end == &want_end,
                    &inputs,
                    "slot ends are ψ⁻¹ of partial sums",
                )?;
                let width = Length::new(end - start).ctx(&inputs)?;
                for u in probes(g, &width, []) {
                    let v = t.psi.eval(&(start + &u)).ctx(&inputs)? - &offset;
                    let want = map.eval(&v).ctx(&inputs)?;
                    ensure(
                        sm.eval(&u).ctx(&inputs)? == want,
                        &inputs,
                        "slot map = xᵢ ∘ ψᵢ",
                    )?;
                }
            }
            offset = next;
        }
        Ok(())
    });
    r.check("identity-psi-form", |g| {
        let spaces = factors(g, 2, 3);
        let t = g.raw(&refs(&spaces));
        let inputs = raw_inputs(&t);
        let flat = t.with_identity_psi().ctx(&inputs)?;
        ensure(
            canonicalize(&flat).ctx(&inputs)? == canonicalize(&t).ctx(&inputs)?,
            &inputs,
            "(ψ, x) ~ (id, xψ)",
        )
    });
    r.check("normal-form-idempotent", |g| {
        let spaces = factors(g, 2, 3);
        let t = g.raw(&refs(&spaces));
        let inputs = raw_inputs(&t);
        let c = canonicalize(&t).ctx(&inputs)?;
        c.check_factors(&refs(&spaces)).ctx(&inputs)?;
        ensure(
            canonicalize(&c.representative()).ctx(&inputs)? == c,
            &inputs,
            "canon(rep(c)) = c",
        )
    });
    r.check("generator-connection", |g| {
        let spaces = factors(g, 2, 3);
        let t = g.raw(&refs(&spaces));
        let inputs = raw_inputs(&t);
        let c = canonicalize(&t).ctx(&inputs)?;
        let (gen, omega) = c.generator_connection();
        gen.check_factors(&refs(&spaces)).ctx(&inputs)?;
        ensure(
            restrict_class(&gen, &omega).ctx(&inputs)? == c,
            &inputs,
            "every class is a restricted generator",
        )
    });
    r.check("restrict-matches-action", |g| {
        let spaces = factors(g, 2, 3);
        let t = g.raw(&refs(&spaces));
        let l = g.length();
        let omega = g.map(&l, t.psi.dom());
        let inputs = json!({ "triple": j(&t), "omega": j(&omega) });
        let via_class = restrict_class(&canonicalize(&t).ctx(&inputs)?, &omega).ctx(&inputs)?;
        let via_triple = canonicalize(&t.act(&omega).ctx(&inputs)?).ctx(&inputs)?;
        ensure(via_class == via_triple, &inputs, "c.ω = [ψω, x]")
    });
    r.check("restrict-class-functor", |g| {
        let spaces = factors(g, 2, 3);
        let t = g.raw(&refs(&spaces));
        let (l1, l2) = (g.length(), g.length());
        let w1 = g.map(&l1, t.psi.dom());
        let w2 = g.map(&l2, &l1);
        let inputs = json!({ "triple": j(&t), "omega1": j(&w1), "omega2": j(&w2) });
        let c = canonicalize(&t).ctx(&inputs)?;
        let stepwise = restrict_class(&restrict_class(&c, &w1).ctx(&inputs)?, &w2).ctx(&inputs)?;
        let once = restrict_class(&c, &compose(&w2, &w1).ctx(&inputs)?).ctx(&inputs)?;
        ensure(stepwise == once, &inputs, "(c.ω₁).ω₂ = c.(ω₁ω₂)")?;
        ensure(
            restrict_class(&c, &identity(c.length())).ctx(&inputs)? == c,
            &inputs,
            "c.id = c",
        )
    });
    r.check("restrict-point-functor", |g| {
        let d = g.space(Cells::Mixed);
        let x = g.element(&d);
        let (l1, l2) = (g.length(), g.length());
        let w1 = g.map(&l1, &x.length);
        let w2 = g.map(&l2, &l1);
        let inputs = json!({ "space": j(&d), "x": j(&x), "omega1": j(&w1), "omega2": j(&w2) });
        let stepwise = restrict(&restrict(&x, &w1).ctx(&inputs)?, &w2).ctx(&inputs)?;
        let once = restrict(&x, &compose(&w2, &w1).ctx(&inputs)?).ctx(&inputs)?;
        d.check_element(&once).ctx(&inputs)?;
        ensure(stepwise == once, &inputs, "(x.ω₁).ω₂ = x.(ω₁ω₂)")?;
        ensure(
            restrict(&x, &identity(&x.length)).ctx(&inputs)? == x,
            &inputs,
            "x.id = x",
        )
    });
    r.check("morphism-naturality", |g| {
        let d = g.space(Cells::Mixed);
        let e = g.rich_space();
        let m = g.gen_morphism(&d, &e);
        let x = g.element(&d);
        let l = g.length();
        let omega = g.map(&l, &x.length);
        let inputs = json!({ "source": j(&d), "target": j(&e), "x": j(&x), "omega": j(&omega) });
        let lhs = m.apply(&restrict(&x, &omega).ctx(&inputs)?).ctx(&inputs)?;
        let rhs = restrict(&m.apply(&x).ctx(&inputs)?, &omega).ctx(&inputs)?;
        e.check_element(&lhs).ctx(&inputs)?;
        ensure(lhs == rhs, &inputs, "m(x.ω) = m(x).ω")
    });
    r.check("class-json-roundtrip", |g| {
        let spaces = factors(g, 2, 3);
        let t = g.raw(&refs(&spaces));
        let inputs = raw_inputs(&t);
        let c = canonicalize(&t).ctx(&inputs)?;
        let back: TensorClass = serde_json::from_value(j(&c))
            .map_err(|e| json!({ "inputs": inputs, "error": e.to_string() }))?;
        ensure(back == c, &inputs, "JSON round trip")
    });
}

fn associator_pentagon(r: &mut Runner) {
    r.check("pentagon", |g| {
        let spaces = factors(g, 4, 4);
        let t = g.raw(&refs(&spaces));
        let inputs = raw_inputs(&t);
        let c = canonicalize(&t).ctx(&inputs)?;
        let (top, bottom) = pentagon_paths(&c).ctx(&inputs)?;
        ensure(top == bottom, &inputs, "both pentagon composites agree")?;
        ensure(
            top.bracket == Bracket::right_nested(4) && top.class == c,
            &inputs,
            "composite lands right-nested",
        )
    });
    r.check("associator-inverse", |g| {
        let spaces = factors(g, 3, 3);
        let t = g.raw(&refs(&spaces));
        let inputs = raw_inputs(&t);
        let c = canonicalize(&t).ctx(&inputs)?;
        let left = Grouped::new(c.clone(), Bracket::left_nested(3)).ctx(&inputs)?;
        let right = Grouped::new(c, Bracket::right_nested(3)).ctx(&inputs)?;
        ensure(
            associate(&left).ctx(&inputs)? == right,
            &inputs,
            "a((XY)Z) = X(YZ)",
        )?;
        ensure(
            associate_inverse(&associate(&left).ctx(&inputs)?).ctx(&inputs)? == left,
            &inputs,
            "a⁻¹a = id",
        )?;
        ensure(
            associate(&associate_inverse(&right).ctx(&inputs)?).ctx(&inputs)? == right,
            &inputs,
            "aa⁻¹ = id",
        )
    });
    r.check("representative-chase", |g| {
        let spaces = factors(g, 3, 3);
        let xs: Vec<Element> = spaces.iter().map(|d| g.element(d)).collect();
        let m = g.length();
        let phi = g.map(&m, &(&xs[0].length + &xs[1].length));
        let l = g.length();
        let psi = g.map(&l, &(&m + &xs[2].length));
        let nested = LeftNested {
            psi,
            phi,
            x1: xs[0].clone(),
            x2: xs[1].clone(),
            x3: xs[2].clone(),
        };
        let inputs = json!({ "psi": j(&nested.psi), "phi": j(&nested.phi), "x": j(&xs) });
        let flat = canonicalize(&nested.flatten().ctx(&inputs)?).ctx(&inputs)?;
        let moved = nested.reassociate().ctx(&inputs)?;
        let other = canonicalize(&moved.flatten().ctx(&inputs)?).ctx(&inputs)?;
        ensure(
            flat == other,
            &inputs,
            "associator agrees on representatives",
        )
    });
    r.check("collapse-right-pointwise", |g| {
        let (l, rest, out) = (g.length(), g.length(), g.length());
        let big = g.length();
        let psi = g.map(&big, &(&l + &rest));
        let phi = g.map(&l, &out);
        let inputs = json!({ "psi": j(&psi), "phi": j(&phi) });
        let c = collapse_right(&psi, &phi).ctx(&inputs)?;
        for t in probes(g, &big, []) {
            let v = psi.eval(&t).ctx(&inputs)?;
            let want = if &v <= l.value() {
                phi.eval(&v).ctx(&inputs)?
            } else {
                out.value() + (&v - l.value())
            };
            ensure(
                c.eval(&t).ctx(&inputs)? == want,
                &inputs,
                "((φ⊗id)ψ)(t) by cases",
            )?;
        }
        Ok(())
    });
    r.check("collapse-left-pointwise", |g| {
        let (l, rest, out) = (g.length(), g.length(), g.length());
        let big = g.length();
        let psi = g.map(&big, &(&rest + &l));
        let phi = g.map(&l, &out);
        let inputs = json!({ "psi": j(&psi), "phi": j(&phi) });
        let c = collapse_left(&psi, &phi).ctx(&inputs)?;
        for t in probes(g, &big, []) {
            let v = psi.eval(&t).ctx(&inputs)?;
            let want = if &v <= rest.value() {
                v.clone()
            } else {
                rest.value() + phi.eval(&(&v - rest.value())).ctx(&inputs)?
            };
            ensure(
                c.eval(&t).ctx(&inputs)? == want,
                &inputs,
                "((id⊗φ)ψ)(t) by cases",
            )?;
        }
        Ok(())
    });
    r.check("collapse-right-coend", |g| {
        let ls = lengths(g, 5);
        let (la, lb, rest, out, big) = (&ls[0], &ls[1], &ls[2], &ls[3], &ls[4]);
        let psi = g.map(big, &(la + rest));
        let chi = g.map(la, lb);
        let phi = g.map(lb, out);
        let inputs = json!({ "psi": j(&psi), "chi": j(&chi), "phi": j(&phi) });
        let pushed = compose(&psi, &shift_right(rest, &chi)).ctx(&inputs)?;
        let lhs = collapse_right(&pushed, &phi).ctx(&inputs)?;
        let rhs = collapse_right(&psi, &compose(&chi, &phi).ctx(&inputs)?).ctx(&inputs)?;
        ensure(
            lhs == rhs,
            &inputs,
            "((χ⊗id)ψ, φ) and (ψ, φχ) collapse equally",
        )
    });
    r.check("collapse-left-coend", |g| {
        let ls = lengths(g, 5);
        let (la, lb, rest, out, big) = (&ls[0], &ls[1], &ls[2], &ls[3], &ls[4]);
        let psi = g.map(big, &(rest + la));
        let chi = g.map(la, lb);
        let phi = g.map(lb, out);
        let inputs = json!({ "psi": j(&psi), "chi": j(&chi), "phi": j(&phi) });
        let pushed = compose(&psi, &shift_left(rest, &chi)).ctx(&inputs)?;
        let lhs = collapse_left(&pushed, &phi).ctx(&inputs)?;
        let rhs = collapse_left(&psi, &compose(&chi, &phi).ctx(&inputs)?).ctx(&inputs)?;
        ensure(
            lhs == rhs,
            &inputs,
            "((id⊗χ)ψ, φ) and (ψ, φχ) collapse equally",
        )
    });
}

fn one_cell(g: &mut Gen, cells: Cells) -> PSpace {
    let s = g.space(cells);
    PSpace::new(vec![s.cells()[0].clone()]).expect("single cell")
}

fn ftenseur_ptenseur(r: &mut Runner) {
    r.check("free-closed-form", |g| {
        let (d, e) = (one_cell(g, Cells::Free), one_cell(g, Cells::Free));
        let inputs = json!({ "d": j(&d), "e": j(&e) });
        let ts = tensor_space(&d, &e);
        let (dc, ec) = (&d.cells()[0], &e.cells()[0]);
        let pc = &ts.cells()[0];
        let want = dc.arity().expect("free") + ec.arity().expect("free");
        ensure(
            ts.cells().len() == 1 && pc.form == ClosedForm::Free { arity: want },
            &inputs,
            "𝔽_a ⊗ 𝔽_b = 𝔽_{a+b}",
        )?;
        let mut names: Vec<_> = pc.labels.iter().map(|(p, _, _)| p.clone()).collect();
        names.sort();
        names.dedup();
        ensure(
            names.len() == dc.labels().len() * ec.labels().len(),
            &inputs,
            "labels U × V",
        )
    });
    r.check("free-bijection", |g| {
        let (d, e) = (one_cell(g, Cells::Free), one_cell(g, Cells::Free));
        let t = g.raw(&[&d, &e]);
        let inputs = json!({ "d": j(&d), "e": j(&e), "triple": j(&t) });
        let ts = tensor_space(&d, &e);
        let c = canonicalize(&t).ctx(&inputs)?;
        let x = ts
            .to_element(&c)
            .ctx(&inputs)?
            .ok_or_else(|| json!({ "inputs": inputs, "violated": "closed form" }))?;
        ensure(
            Some(x.map().cloned()) == Some(c.joined_map()),
            &inputs,
            "point map is the joined slot map",
        )?;
        ensure(
            ts.from_element(&x).ctx(&inputs)? == c,
            &inputs,
            "from(to(c)) = c",
        )?;
        let closed = ts.closed_form_space().expect("one free cell");
        let y = g.element(&closed);
        let back = ts
            .to_element(&ts.from_element(&y).ctx(&inputs)?)
            .ctx(&inputs)?;
        ensure(back.as_ref() == Some(&y), &inputs, "to(from(y)) = y")
    });
    r.check("free-joined-pointwise", |g| {
        let (d, e) = (one_cell(g, Cells::Free), one_cell(g, Cells::Free));
        let t = g.raw(&[&d, &e]);
        let inputs = json!({ "d": j(&d), "e": j(&e), "triple": j(&t) });
        let ts = tensor_space(&d, &e);
        let x = ts
            .to_element(&canonicalize(&t).ctx(&inputs)?)
            .ctx(&inputs)?
            .expect("free cells");
        let (x1, x2) = (&t.parts[0], &t.parts[1]);
        let (m1, m2) = (x1.map().expect("free"), x2.map().expect("free"));
        let l1 = x1.length.value();
        for s in probes(g, t.psi.dom(), []) {
            let v = t.psi.eval(&s).ctx(&inputs)?;
            let want = if &v <= l1 {
                m1.eval(&v).ctx(&inputs)?
            } else {
                m1.cod().value() + m2.eval(&(&v - l1)).ctx(&inputs)?
            };
            ensure(
                x.map().expect("free").eval(&s).ctx(&inputs)? == want,
                &inputs,
                "point = (x₁⊗x₂)ψ",
            )?;
        }
        Ok(())
    });
    r.check("free-restriction-compatible", |g| {
        let (d, e) = (one_cell(g, Cells::Free), one_cell(g, Cells::Free));
        let t = g.raw(&[&d, &e]);
        let l = g.length();
        let omega = g.map(&l, t.psi.dom());
        let inputs = json!({ "d": j(&d), "e": j(&e), "triple": j(&t), "omega": j(&omega) });
        let ts = tensor_space(&d, &e);
        let c = canonicalize(&t).ctx(&inputs)?;
        let x = ts.to_element(&c).ctx(&inputs)?.expect("free cells");
        let lhs = ts
            .to_element(&restrict_class(&c, &omega).ctx(&inputs)?)
            .ctx(&inputs)?;
        ensure(
            lhs == Some(restrict(&x, &omega).ctx(&inputs)?),
            &inputs,
            "bijection is natural",
        )
    });
    r.check("const-collapse", |g| {
        let (d, e) = (one_cell(g, Cells::Const), one_cell(g, Cells::Const));
        let t = g.raw(&[&d, &e]);
        let inputs = json!({ "d": j(&d), "e": j(&e), "triple": j(&t) });
        let slots = vec![
            Slot::Const {
                cell: t.parts[0].cell.clone(),
                label: t.parts[0].label().clone(),
            },
            Slot::Const {
                cell: t.parts[1].cell.clone(),
                label: t.parts[1].label().clone(),
            },
        ];
        let want = TensorClass::new(t.psi.dom().clone(), slots).ctx(&inputs)?;
        ensure(
            canonicalize(&t).ctx(&inputs)? == want,
            &inputs,
            "every (ψ, u, v) is (id_L, u, v)",
        )
    });
    r.check_n("const-bent-psi-fixture", 1, |_| {
        let point =
            |label: &str| Element::constant(CellId::new("k"), Length::of(1, 1), Label::new(label));
        let half = Rational::new(1.into(), 2.into());
        let bent = PLMap::from_breaks(vec![(int(0), int(0)), (half, int(1)), (int(2), int(2))])
            .expect("valid fixture");
        let inputs = json!({ "psi": j(&bent) });
        let parts = vec![point("u"), point("v")];
        let lhs = canonicalize(&RawTriple::new(bent, parts.clone()).ctx(&inputs)?).ctx(&inputs)?;
        let rhs = canonicalize(&RawTriple::new(identity(&Length::of(2, 1)), parts).ctx(&inputs)?)
            .ctx(&inputs)?;
        ensure(
            lhs == rhs,
            &inputs,
            "a 3-breakpoint ψ is equivalent to id_L",
        )
    });
    r.check("const-closed-form", |g| {
        let (d, e) = (one_cell(g, Cells::Const), one_cell(g, Cells::Const));
        let t = g.raw(&[&d, &e]);
        let l = g.length();
        let omega = g.map(&l, t.psi.dom());
        let inputs = json!({ "d": j(&d), "e": j(&e), "triple": j(&t), "omega": j(&omega) });
        let ts = tensor_space(&d, &e);
        ensure(
            ts.cells()[0].form == ClosedForm::Const,
            &inputs,
            "ΔU ⊗ ΔV = Δ(U×V)",
        )?;
        let c = canonicalize(&t).ctx(&inputs)?;
        let x = ts.to_element(&c).ctx(&inputs)?.expect("const cells");
        ensure(
            x.length == *t.psi.dom() && !x.is_free(),
            &inputs,
            "constant point at L",
        )?;
        ensure(
            ts.from_element(&x).ctx(&inputs)? == c,
            &inputs,
            "from(to(c)) = c",
        )?;
        let lhs = ts
            .to_element(&restrict_class(&c, &omega).ctx(&inputs)?)
            .ctx(&inputs)?;
        ensure(
            lhs == Some(restrict(&x, &omega).ctx(&inputs)?),
            &inputs,
            "bijection is natural",
        )
    });
}

fn colimit_product(r: &mut Runner) {
    r.check("tensor-colimit", |g| {
        let (d, e) = (g.space(Cells::Mixed), g.space(Cells::Mixed));
        let samples: Vec<RawTriple> = (0..10).map(|_| g.raw(&[&d, &e])).collect();
        let inputs = json!({ "d": j(&d), "e": j(&e), "samples": j(&samples) });
        let w = crate::tensorcalc::colimit_tensor_check(&d, &e, &samples).ctx(&inputs)?;
        ensure(w.bijective, &inputs, "colim(D⊗E) = colim D × colim E")?;
        ensure(w.compatible, &inputs, "classes agree with the bijection")
    });
    r.check("colimit-cardinality", |g| {
        let (d, e) = (g.space(Cells::Mixed), g.space(Cells::Mixed));
        let inputs = json!({ "d": j(&d), "e": j(&e) });
        let count = |s: &PSpace| s.cells().iter().map(|c| c.labels().len()).sum::<usize>();
        let ts = tensor_space(&d, &e);
        ensure(
            ts.colimit().len() == count(&d) * count(&e),
            &inputs,
            "|colim(D⊗E)| = |colim D|·|colim E|",
        )?;
        ensure(
            colimit(&d).len() == count(&d),
            &inputs,
            "|colim D| = labels of D",
        )
    });
    r.check("classify-restriction-invariant", |g| {
        let (d, e) = (g.space(Cells::Mixed), g.space(Cells::Mixed));
        let t = g.raw(&[&d, &e]);
        let l = g.length();
        let omega = g.map(&l, t.psi.dom());
        let x = g.element(&d);
        let w = g.map(&l, &x.length);
        let inputs = json!({ "d": j(&d), "e": j(&e), "triple": j(&t), "omega": j(&omega), "x": j(&x), "w": j(&w) });
        let ts = tensor_space(&d, &e);
        let c = canonicalize(&t).ctx(&inputs)?;
        let moved = ts.classify(&restrict_class(&c, &omega).ctx(&inputs)?).ctx(&inputs)?;
        ensure(moved == ts.classify(&c).ctx(&inputs)?, &inputs, "[c.ω] = [c]")?;
        let cd = colimit(&d);
        ensure(
            cd.classify(&restrict(&x, &w).ctx(&inputs)?).ctx(&inputs)? == cd.classify(&x).ctx(&inputs)?,
            &inputs,
            "[x.ω] = [x]",
        )
    });
}

fn adjunction_roundtrip(r: &mut Runner) {
    r.check("left-roundtrip", |g| {
        let (d, e, f) = (g.space(Cells::Free), g.space(Cells::Mixed), g.rich_space());
        let m = g.tensor_morphism(&d, &e, &f);
        let inputs = json!({ "d": j(&d), "e": j(&e), "f": j(&f) });
        let t = curry_left(&m).ctx(&inputs)?;
        let back = uncurry_left(&d, &e, &f, &t).ctx(&inputs)?;
        ensure(back == m, &inputs, "uncurry(curry(m)) = m")?;
        ensure(
            curry_left(&back).ctx(&inputs)? == t,
            &inputs,
            "curry(uncurry(t)) = t",
        )
    });
    r.check("right-roundtrip", |g| {
        let (d, e, f) = (g.space(Cells::Mixed), g.space(Cells::Free), g.rich_space());
        let m = g.tensor_morphism(&d, &e, &f);
        let inputs = json!({ "d": j(&d), "e": j(&e), "f": j(&f) });
        let t = curry_right(&m).ctx(&inputs)?;
        let back = uncurry_right(&d, &e, &f, &t).ctx(&inputs)?;
        ensure(back == m, &inputs, "uncurry(curry(m)) = m")?;
        ensure(
            curry_right(&back).ctx(&inputs)? == t,
            &inputs,
            "curry(uncurry(t)) = t",
        )
    });
    r.check("left-transpose-evaluation", |g| {
        let (d, e, f) = (g.space(Cells::Free), g.space(Cells::Mixed), g.rich_space());
        let m = g.tensor_morphism(&d, &e, &f);
        let (x, y) = (g.element(&d), g.element(&e));
        let inputs = json!({ "d": j(&d), "e": j(&e), "f": j(&f), "x": j(&x), "y": j(&y) });
        let c = canonicalize(
            &RawTriple::new(
                identity(&(&x.length + &y.length)),
                vec![x.clone(), y.clone()],
            )
            .ctx(&inputs)?,
        )
        .ctx(&inputs)?;
        let direct = m.apply(&c).ctx(&inputs)?;
        let t = curry_left(&m).ctx(&inputs)?;
        let h = t
            .get(&x.generator())
            .ok_or_else(|| json!({ "inputs": inputs, "violated": "transpose covers D" }))?;
        let along = tensor_map(x.map().expect("free"), &identity(&y.length));
        let via = restrict(&h.apply(&y).ctx(&inputs)?, &along).ctx(&inputs)?;
        ensure(direct == via, &inputs, "m[id, x, y] = m♭(x)(y).(f⊗id)")
    });
    r.check("right-transpose-evaluation", |g| {
        let (d, e, f) = (g.space(Cells::Mixed), g.space(Cells::Free), g.rich_space());
        let m = g.tensor_morphism(&d, &e, &f);
        let (x, y) = (g.element(&d), g.element(&e));
        let inputs = json!({ "d": j(&d), "e": j(&e), "f": j(&f), "x": j(&x), "y": j(&y) });
        let c = canonicalize(
            &RawTriple::new(
                identity(&(&x.length + &y.length)),
                vec![x.clone(), y.clone()],
            )
            .ctx(&inputs)?,
        )
        .ctx(&inputs)?;
        let direct = m.apply(&c).ctx(&inputs)?;
        let t = curry_right(&m).ctx(&inputs)?;
        let h = t
            .get(&y.generator())
            .ok_or_else(|| json!({ "inputs": inputs, "violated": "transpose covers E" }))?;
        let along = tensor_map(&identity(&x.length), y.map().expect("free"));
        let via = restrict(&h.apply(&x).ctx(&inputs)?, &along).ctx(&inputs)?;
        ensure(direct == via, &inputs, "m[id, x, y] = m♯(y)(x).(id⊗g)")
    });
    r.check("tensor-morphism-naturality", |g| {
        let (d, e, f) = (g.space(Cells::Mixed), g.space(Cells::Mixed), g.rich_space());
        let m = g.tensor_morphism(&d, &e, &f);
        let t = g.raw(&[&d, &e]);
        let l = g.length();
        let omega = g.map(&l, t.psi.dom());
        let inputs =
            json!({ "d": j(&d), "e": j(&e), "f": j(&f), "triple": j(&t), "omega": j(&omega) });
        let c = canonicalize(&t).ctx(&inputs)?;
        let lhs = m
            .apply(&restrict_class(&c, &omega).ctx(&inputs)?)
            .ctx(&inputs)?;
        let rhs = restrict(&m.apply(&c).ctx(&inputs)?, &omega).ctx(&inputs)?;
        f.check_element(&lhs).ctx(&inputs)?;
        ensure(lhs == rhs, &inputs, "m(c.ω) = m(c).ω")
    });
    r.check("constant-factor-unsupported", |g| {
        let (d, e, f) = (g.rich_space(), g.space(Cells::Mixed), g.rich_space());
        let m = g.tensor_morphism(&d, &e, &f);
        let inputs = json!({ "d": j(&d), "e": j(&e), "f": j(&f) });
        let left = matches!(curry_left(&m), Err(Error::UnsupportedTranspose(_)));
        let m2 = g.tensor_morphism(&e, &d, &f);
        let right = matches!(curry_right(&m2), Err(Error::UnsupportedTranspose(_)));
        ensure(
            left && right,
            &inputs,
            "curry along a constant cell is refused",
        )
    });
}

fn braiding_laws(r: &mut Runner) {
    let two = Length::of(2, 1);
    r.check("braid2-involution", |g| {
        let l = g.length();
        let phi = g.map(&two, &l);
        let inputs = json!({ "phi": j(&phi) });
        ensure(
            braid2(&braid2(&phi).ctx(&inputs)?).ctx(&inputs)? == phi,
            &inputs,
            "B₂B₂ = id",
        )
    });
    r.check("braid2-pointwise", |g| {
        let l = g.length();
        let phi = g.map(&two, &l);
        let inputs = json!({ "phi": j(&phi) });
        let b = braid2(&phi).ctx(&inputs)?;
        let (one, mid) = (int(1), phi.eval(&int(1)).ctx(&inputs)?);
        let top = l.value() - &mid;
        for t in probes(g, &two, [one.clone()]) {
            let want = if t <= one {
                phi.eval(&(&one + &t)).ctx(&inputs)? - &mid
            } else {
                &top + phi.eval(&(&t - &one)).ctx(&inputs)?
            };
            ensure(b.eval(&t).ctx(&inputs)? == want, &inputs, "B₂φ by cases")?;
        }
        Ok(())
    });
    r.check("braid2-matches-braid-map", |g| {
        let l = g.length();
        let phi = g.map(&two, &l);
        let inputs = json!({ "phi": j(&phi) });
        let l1 = Length::new(phi.eval(&int(1)).ctx(&inputs)?).ctx(&inputs)?;
        let l2 = l.checked_sub(&l1).expect("φ(1) < φ(2)");
        ensure(
            braid_map(&phi, &l1, &l2).ctx(&inputs)? == braid2(&phi).ctx(&inputs)?,
            &inputs,
            "B₂ = B at ψ⁻¹(ℓ₁) = 1",
        )
    });
    r.check("braid-map-involution", |g| {
        let (l1, l2, big) = (g.length(), g.length(), g.length());
        let psi = g.map(&big, &(&l1 + &l2));
        let inputs = json!({ "psi": j(&psi), "l1": j(&l1), "l2": j(&l2) });
        let b = braid_map(&psi, &l1, &l2).ctx(&inputs)?;
        ensure(
            braid_map(&b, &l2, &l1).ctx(&inputs)? == psi,
            &inputs,
            "BB = id",
        )
    });
    r.check("braid-map-pointwise", |g| {
        let (l1, l2, big) = (g.length(), g.length(), g.length());
        let psi = g.map(&big, &(&l1 + &l2));
        let inputs = json!({ "psi": j(&psi), "l1": j(&l1), "l2": j(&l2) });
        let b = braid_map(&psi, &l1, &l2).ctx(&inputs)?;
        let s = psi.eval_inverse(l1.value()).ctx(&inputs)?;
        let rest = big.value() - &s;
        for t in probes(g, &big, [rest.clone()]) {
            let want = if t <= rest {
                psi.eval(&(&s + &t)).ctx(&inputs)? - l1.value()
            } else {
                l2.value() + psi.eval(&(&t - &rest)).ctx(&inputs)?
            };
            ensure(b.eval(&t).ctx(&inputs)? == want, &inputs, "B(ψ) by cases")?;
        }
        Ok(())
    });
    r.check("mu-formula", |g| {
        let (l1, l2, big) = (g.length(), g.length(), g.length());
        let psi = g.map(&big, &(&l1 + &l2));
        let inputs = json!({ "psi": j(&psi), "l1": j(&l1), "l2": j(&l2) });
        let direct = braid_map(&psi, &l1, &l2).ctx(&inputs)?;
        ensure(
            braid_map_via_mu(&psi, &l1, &l2).ctx(&inputs)? == direct,
            &inputs,
            "μ-conjugated B₂ = B",
        )
    });
    r.check("class-well-defined", |g| {
        let (d, e) = (g.space(Cells::Mixed), g.space(Cells::Mixed));
        let t = g.raw(&[&d, &e]);
        let phis = rewrite_maps(g, &t);
        let inputs = json!({ "triple": j(&t), "phis": j(&phis) });
        let moved = t.push_all(&phis).ctx(&inputs)?;
        let a = braid_class(&canonicalize(&t).ctx(&inputs)?).ctx(&inputs)?;
        let b = braid_class(&canonicalize(&moved).ctx(&inputs)?).ctx(&inputs)?;
        ensure(a == b, &inputs, "equivalent representatives braid equally")
    });
    r.check("class-matches-representative", |g| {
        let (d, e) = (g.space(Cells::Mixed), g.space(Cells::Mixed));
        let t = g.raw(&[&d, &e]);
        let inputs = raw_inputs(&t);
        let (x1, x2) = (&t.parts[0], &t.parts[1]);
        let swapped = braid_map(&t.psi, &x1.length, &x2.length).ctx(&inputs)?;
        let want =
            canonicalize(&RawTriple::new(swapped, vec![x2.clone(), x1.clone()]).ctx(&inputs)?)
                .ctx(&inputs)?;
        ensure(
            braid_class(&canonicalize(&t).ctx(&inputs)?).ctx(&inputs)? == want,
            &inputs,
            "[ψ,x₁,x₂] ↦ [B(ψ),x₂,x₁]",
        )
    });
    r.check("class-bijective", |g| {
        let (d, e) = (g.space(Cells::Mixed), g.space(Cells::Mixed));
        let t = g.raw(&[&e, &d]);
        let inputs = json!({ "d": j(&d), "e": j(&e), "triple": j(&t) });
        let c = canonicalize(&t).ctx(&inputs)?;
        let pre = braid_class(&c).ctx(&inputs)?;
        pre.check_factors(&[&d, &e]).ctx(&inputs)?;
        ensure(
            braid_class(&pre).ctx(&inputs)? == c,
            &inputs,
            "BB = id on classes",
        )
    });
}

fn non_naturality(r: &mut Runner) {
    r.check_n("fixture-witness", 1, |_| {
        let w = non_naturality_fixture();
        let inputs = j(&w);
        let want = PLMap::from_breaks(vec![
            (int(0), int(0)),
            (Rational::new(1.into(), 2.into()), int(1)),
            (int(2), int(2)),
        ])
        .ctx(&inputs)?;
        ensure(w.omega == want, &inputs, "ω bends through (1/2, 1)")?;
        ensure(!w.equal, &inputs, "B(x).ω ≠ B(x.ω)")?;
        let (w1, w2) =
            decompose_map(&w.omega, &Length::of(1, 1), &Length::of(1, 1)).ctx(&inputs)?;
        ensure(
            w.lhs.joined_map() == Some(tensor_map(&w1, &w2)),
            &inputs,
            "B(x).ω reads ω₁⊗ω₂",
        )?;
        ensure(
            w.rhs.joined_map() == Some(tensor_map(&w2, &w1)),
            &inputs,
            "B(x.ω) reads ω₂⊗ω₁",
        )
    });
    r.check("witness-found", |g| {
        let (d, e) = (g.rich_space(), g.space(Cells::Mixed));
        let (d, e) = if g.rng_range(0, 1) == 0 {
            (d, e)
        } else {
            (e, d)
        };
        let inputs = json!({ "d": j(&d), "e": j(&e) });
        let w = naturality_witness(&d, &e).ctx(&inputs)?;
        ensure(!w.equal, &inputs, "some square fails to commute")?;
        ensure(w.lhs != w.rhs, &inputs, "reported sides differ")
    });
    r.check("identity-square-commutes", |g| {
        let (d, e) = (g.space(Cells::Mixed), g.space(Cells::Mixed));
        let t = g.raw(&[&d, &e]);
        let inputs = raw_inputs(&t);
        let c = canonicalize(&t).ctx(&inputs)?;
        ensure(
            naturality_square(&c, &identity(c.length()))
                .ctx(&inputs)?
                .equal,
            &inputs,
            "ω = id commutes",
        )
    });
    r.check("symmetric-square-commutes", |g| {
        let (a, m) = (g.length(), g.length());
        let d = PSpace::free("d", a.clone(), &["u"]).expect("valid");
        let x = d
            .generator_element(
                &d.cells()[0].id().clone(),
                &d.cells()[0].labels()[0].clone(),
            )
            .expect("valid");
        let chi = g.map(&m, &a);
        let inputs = json!({ "a": j(&a), "chi": j(&chi) });
        let c =
            canonicalize(&RawTriple::new(identity(&(&a + &a)), vec![x.clone(), x]).ctx(&inputs)?)
                .ctx(&inputs)?;
        let sq = naturality_square(&c, &tensor_map(&chi, &chi)).ctx(&inputs)?;
        ensure(
            sq.equal,
            &inputs,
            "ω = χ⊗χ commutes on the diagonal generator",
        )
    });
    r.check("constant-square-commutes", |g| {
        let (d, e) = (g.space(Cells::Const), g.space(Cells::Const));
        let t = g.raw(&[&d, &e]);
        let l = g.length();
        let omega = g.map(&l, t.psi.dom());
        let inputs = json!({ "triple": j(&t), "omega": j(&omega) });
        let c = canonicalize(&t).ctx(&inputs)?;
        ensure(
            naturality_square(&c, &omega).ctx(&inputs)?.equal,
            &inputs,
            "Δ⊗Δ squares commute",
        )
    });
}

fn naive_swap_negative(r: &mut Runner) {
    r.check_n("fixture-ill-defined", 1, |_| {
        let rep = naive_swap_fixture();
        let inputs = j(&rep);
        ensure(
            canonicalize(&rep.r) == canonicalize(&rep.rewritten),
            &inputs,
            "the two triples are equivalent",
        )?;
        ensure(!rep.welldefined, &inputs, "naive swaps differ")?;
        ensure(rep.braid_agrees, &inputs, "the braid agrees")
    });
    r.check("identity-rewrite-consistent", |g| {
        let (d, e) = (g.space(Cells::Mixed), g.space(Cells::Mixed));
        let t = g.raw(&[&d, &e]);
        let inputs = raw_inputs(&t);
        let ids = [identity(&t.parts[0].length), identity(&t.parts[1].length)];
        let rep = naive_swap_check(&t, &ids[0], &ids[1]).ctx(&inputs)?;
        ensure(
            rep.welldefined,
            &inputs,
            "a trivial rewrite swaps consistently",
        )
    });
    r.check("braid-positive-control", |g| {
        let (d, e) = (g.space(Cells::Mixed), g.space(Cells::Mixed));
        let t = g.raw(&[&d, &e]);
        let phis = rewrite_maps(g, &t);
        let inputs = json!({ "triple": j(&t), "phis": j(&phis) });
        let rep = naive_swap_check(&t, &phis[0], &phis[1]).ctx(&inputs)?;
        ensure(rep.braid_agrees, &inputs, "the braid is well defined")
    });
}

/// Runs one suite. `cases` overrides the per-check count of random cases.
pub fn run_suite(name: &str, seed: u64, cases: Option<usize>, profile: Profile) -> Result<Suite> {
    let default = default_cases(name).ok_or_else(|| Error::UnknownSuite(name.into()))?;
    let cases = cases.unwrap_or(default);
    let mut r = Runner {
        suite: name,
        seed,
        profile,
        cases,
        checks: Vec::new(),
    };
    match name {
        "gmaps-laws" => gmaps_laws(&mut r),
        "shift-functors" => shift_functors(&mut r),
        "coend-normalform" => coend_normalform(&mut r),
        "associator-pentagon" => associator_pentagon(&mut r),
        "ftenseur-ptenseur" => ftenseur_ptenseur(&mut r),
        "colimit-product" => colimit_product(&mut r),
        "adjunction-roundtrip" => adjunction_roundtrip(&mut r),
        "braiding-laws" => braiding_laws(&mut r),
        "non-naturality" => non_naturality(&mut r),
        "naive-swap-negative" => naive_swap_negative(&mut r),
        _ => unreachable!("checked by default_cases"),
    }
    Ok(Suite {
        name: name.into(),
        seed,
        cases,
        covers: covers(name).iter().map(|s| s.to_string()).collect(),
        checks: r.checks,
    })
}

/// Runs the named suites in parallel; the report lists them in the order given.
pub fn run(names: &[&str], seed: u64, cases: Option<usize>, profile: Profile) -> Result<Report> {
    for n in names {
        default_cases(n).ok_or_else(|| Error::UnknownSuite(n.to_string()))?;
    }
    let suites = std::thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| s.spawn(move || run_suite(n, seed, cases, profile)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread"))
            .collect::<Result<Vec<_>>>()
    })?;
    let totals = Totals {
        suites: suites.len(),
        checks: suites.iter().map(|s| s.checks.len()).sum(),
        cases: suites.iter().flat_map(|s| &s.checks).map(|c| c.cases).sum(),
        failed_checks: suites
            .iter()
            .flat_map(|s| &s.checks)
            .filter(|c| c.failed > 0)
            .count(),
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        seed,
        profile,
        suites,
        totals,
    })
}

pub fn run_all(seed: u64, cases: Option<usize>, profile: Profile) -> Report {
    run(&SUITES, seed, cases, profile).expect("every listed suite exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_are_disjoint() {
        let mut all: Vec<&str> = SUITES
            .iter()
            .flat_map(|s| covers(s).iter().copied())
            .collect();
        let n = all.len();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), n);
        assert!(SUITES.iter().all(|s| !covers(s).is_empty()));
    }

    #[test]
    fn failures_keep_the_first_counterexample() {
        let mut r = Runner {
            suite: "t",
            seed: 1,
            profile: Profile::default(),
            cases: 4,
            checks: Vec::new(),
        };
        let mut i = 0;
        r.check("odd", |g| {
            i += 1;
            let f = g.any_map();
            ensure(i % 2 == 0, &json!({ "i": i, "f": j(&f) }), "even")
        });
        r.check_n("boom", 1, |_| panic!("kaboom"));
        let odd = &r.checks[0];
        assert_eq!((odd.passed, odd.failed), (2, 2));
        assert_eq!(odd.counterexample.as_ref().unwrap()["inputs"]["i"], 1);
        let f: PLMap =
            serde_json::from_value(odd.counterexample.as_ref().unwrap()["inputs"]["f"].clone())
                .unwrap();
        assert_eq!(
            f,
            Gen::derived(1, &["t", "odd"], Profile::default()).any_map()
        );
        assert_eq!(
            r.checks[1].counterexample.as_ref().unwrap()["panic"],
            "kaboom"
        );
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(
            run_suite("nope", 0, None, Profile::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn small_runs_pass_and_replay() {
        let a = run_all(11, Some(5), Profile::default());
        assert!(a.passed(), "{}", serde_json::to_string_pretty(&a).unwrap());
        let b = run_all(11, Some(5), Profile::default());
        assert_eq!(a, b);
    }
}
