use moorecat_core::gmaps::{compose, decompose_map, identity, mu, shift_right, tensor_map, PLMap};
use moorecat_core::rational::{int, ratio, Rational};
use moorecat_core::Length;

fn map(points: &[(Rational, Rational)]) -> PLMap {
    PLMap::from_breaks(points.to_vec()).unwrap()
}

fn q(p: i64, d: i64) -> Rational {
    ratio(p, d)
}

/// Interpolates a breakpoint list directly, without the library's evaluator.
fn oracle(points: &[(Rational, Rational)], t: &Rational) -> Rational {
    for w in points.windows(2) {
        let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
        if t0 <= t && t <= t1 {
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    panic!("{t} outside the oracle's domain")
}

fn grid(points: &[(Rational, Rational)], extra: &[Rational]) -> Vec<Rational> {
    let mut ts: Vec<Rational> = points
        .iter()
        .map(|p| p.0.clone())
        .chain(extra.iter().cloned())
        .collect();
    let n = ts.len();
    for i in 0..n {
        for k in i + 1..n {
            ts.push((&ts[i] + &ts[k]) / int(2));
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

#[test]
fn identity_has_two_breakpoints() {
    assert_eq!(
        identity(&Length::of(1, 1)).breaks(),
        &[(int(0), int(0)), (int(1), int(1))]
    );
}

#[test]
fn scaling_map_values() {
    assert_eq!(mu(&Length::of(2, 1)).eval(&int(1)).unwrap(), q(1, 2));
    assert_eq!(mu(&Length::of(3, 1)).eval(&int(2)).unwrap(), q(2, 3));
    assert_eq!(identity(&Length::of(3, 1)).eval(&q(7, 5)).unwrap(), q(7, 5));
}

#[test]
fn evaluation_matches_interpolation() {
    let pts = [(int(0), int(0)), (int(1), int(2)), (int(3), int(3))];
    let f = map(&pts);
    assert_eq!(f.eval(&int(2)).unwrap(), q(5, 2));
    for t in grid(&pts, &[]) {
        assert_eq!(f.eval(&t).unwrap(), oracle(&pts, &t));
    }
    assert!(f.eval(&q(7, 2)).is_err());
}

#[test]
fn inverse_swaps_coordinates() {
    let f = map(&[(int(0), int(0)), (int(1), int(2)), (int(3), int(3))]);
    let inv = f.inverse();
    assert_eq!(
        inv.breaks(),
        &[(int(0), int(0)), (int(2), int(1)), (int(3), int(3))]
    );
    assert_eq!(compose(&f, &inv).unwrap(), identity(f.dom()));
    assert_eq!(compose(&inv, &f).unwrap(), identity(f.cod()));
}

#[test]
fn composition_example() {
    let f = mu(&Length::of(2, 1));
    let g_pts = [(int(0), int(0)), (q(1, 2), q(3, 2)), (int(1), int(2))];
    let g = map(&g_pts);
    let gf = compose(&f, &g).unwrap();
    assert_eq!(
        gf.breaks(),
        &[(int(0), int(0)), (int(1), q(3, 2)), (int(2), int(2))]
    );
    let f_pts = f.breaks().to_vec();
    for t in grid(&f_pts, &[int(1)]) {
        assert_eq!(gf.eval(&t).unwrap(), oracle(&g_pts, &oracle(&f_pts, &t)));
    }
    assert!(compose(&g, &g).is_err());
}

#[test]
fn tensor_example() {
    let f1 = map(&[(int(0), int(0)), (int(1), int(2))]);
    let f2 = map(&[(int(0), int(0)), (int(2), int(1))]);
    let t = tensor_map(&f1, &f2);
    assert_eq!(
        t.breaks(),
        &[(int(0), int(0)), (int(1), int(2)), (int(3), int(3))]
    );
    for s in grid(t.breaks(), &[]) {
        let want = if s <= int(1) {
            oracle(f1.breaks(), &s)
        } else {
            int(2) + oracle(f2.breaks(), &(&s - int(1)))
        };
        assert_eq!(t.eval(&s).unwrap(), want);
    }
}

#[test]
fn decomposition_example() {
    let f = map(&[(int(0), int(0)), (int(1), q(3, 2)), (int(2), int(2))]);
    let (f1, f2) = decompose_map(&f, &Length::of(3, 2), &Length::of(1, 2)).unwrap();
    assert_eq!(f1.breaks(), &[(int(0), int(0)), (int(1), q(3, 2))]);
    assert_eq!(f2.breaks(), &[(int(0), int(0)), (int(1), q(1, 2))]);
    assert_eq!(tensor_map(&f1, &f2), f);
    assert!(decompose_map(&f, &Length::of(1, 1), &Length::of(3, 2)).is_err());
}

#[test]
fn right_shift_example() {
    let s = shift_right(&Length::of(1, 1), &mu(&Length::of(2, 1)));
    assert_eq!(
        s.breaks(),
        &[(int(0), int(0)), (int(2), int(1)), (int(3), int(2))]
    );
}

#[test]
fn validation_names_the_invariant() {
    let bad =
        PLMap::from_breaks(vec![(int(0), int(0)), (int(1), int(2)), (int(2), int(1))]).unwrap_err();
    assert!(bad.to_string().contains("increasing"), "{bad}");
    let shifted = PLMap::from_breaks(vec![(int(1), int(0)), (int(2), int(1))]).unwrap_err();
    assert!(
        shifted.to_string().contains("(0,0)") || shifted.to_string().contains("origin"),
        "{shifted}"
    );
    assert!(Length::new(int(0)).is_err());
    assert!(Length::new(q(-1, 2)).is_err());
}

#[test]
fn json_round_trip() {
    let f = map(&[(int(0), int(0)), (q(1, 3), q(2, 3)), (int(1), int(1))]);
    let text = serde_json::to_string(&f).unwrap();
    assert_eq!(
        text,
        r#"{"dom":"1","cod":"1","breaks":[["0","0"],["1/3","2/3"],["1","1"]]}"#
    );
    let back: PLMap = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
    let err = serde_json::from_str::<PLMap>(
        r#"{"dom":"1","cod":"1","breaks":[["0","0"],["1","1"],["1/2","1/2"]]}"#,
    );
    assert!(err.is_err());
}
