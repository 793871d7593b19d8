use moorecat_core::lawcheck::{run, run_suite, SUITES};
use moorecat_core::random::Profile;
use moorecat_core::Error;

#[test]
fn pentagon_suite_with_seed_42() {
    let s = run_suite("associator-pentagon", 42, Some(200), Profile::default()).unwrap();
    assert!(s.passed(), "{s:?}");
    assert!(s
        .checks
        .iter()
        .any(|c| c.name == "pentagon" && c.cases == 200 && c.failed == 0));
}

#[test]
fn fixture_suites_with_one_case() {
    for name in ["non-naturality", "naive-swap-negative"] {
        for seed in [0, 99] {
            let s = run_suite(name, seed, Some(1), Profile::default()).unwrap();
            assert!(s.passed(), "{s:?}");
            assert!(s.checks[0].name.starts_with("fixture") && s.checks[0].passed == 1);
        }
    }
}

#[test]
fn unknown_suite_is_rejected() {
    assert!(matches!(
        run(&["gmaps-laws", "bogus"], 1, Some(1), Profile::default()),
        Err(Error::UnknownSuite(_))
    ));
}

#[test]
fn reports_replay_exactly() {
    let a = run(&SUITES, 5, Some(3), Profile::default()).unwrap();
    let b = run(&SUITES, 5, Some(3), Profile::default()).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let c = run(&SUITES, 6, Some(3), Profile::default()).unwrap();
    assert!(c.passed());
    assert_eq!(a.totals, c.totals);
}

#[test]
fn small_profile_still_passes() {
    let p = Profile {
        max_breaks: 1,
        denominator_bound: 1,
        max_length: 2,
    };
    let r = run(&SUITES, 3, Some(20), p).unwrap();
    assert!(r.passed(), "{}", serde_json::to_string_pretty(&r).unwrap());
}
