use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qpcheck_core::qp::EvalContext;
use qpcheck_core::verifier::{
    builtin_catalog, default_contexts, find_builtin, run_suite_with_catalog, verify, IdentitySpec,
    Verdict, VerifyParams,
};
use qpcheck_core::{lattice_new, TauNome};
use serde_json::Value;

#[test]
fn fixed_seed_gives_identical_json() {
    let spec = find_builtin("weierstrass-3term").unwrap();
    let ctx = default_contexts()[1];
    let params = VerifyParams {
        seed: 9,
        samples: 50,
        tol: None,
    };
    let a = verify(&spec, &ctx, &params).unwrap().to_json();
    let b = verify(&spec, &ctx, &params).unwrap().to_json();
    assert_eq!(a, b);
    let other = verify(&spec, &ctx, &VerifyParams { seed: 10, ..params })
        .unwrap()
        .to_json();
    assert_ne!(a, other);
}

#[test]
fn json_layout() {
    let spec = find_builtin("weierstrass-3term").unwrap();
    let ctx = default_contexts()[0];
    let params = VerifyParams {
        seed: 42,
        samples: 200,
        tol: Some(1e-10),
    };
    let v: Value = serde_json::from_str(&verify(&spec, &ctx, &params).unwrap().to_json()).unwrap();
    for key in [
        "identity",
        "context",
        "multipliers",
        "predicted_N",
        "zeros",
        "zero_excess",
        "residuals",
        "verdict",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["verdict"], "verified");
    assert_eq!(v["predicted_N"]["num"], 2);
    assert_eq!(v["predicted_N"]["den"], 1);
    assert_eq!(v["zero_excess"], true);
    assert_eq!(
        v["context"]["omega1"][0].as_f64().unwrap(),
        std::f64::consts::FRAC_PI_2
    );
    assert_eq!(v["context"]["tau"][1].as_f64().unwrap(), 1.0);
    assert_eq!(v["multipliers"].as_array().unwrap().len(), 2);
    assert!(v["multipliers"]
        .as_array()
        .unwrap()
        .iter()
        .all(|m| m["matched"] == true));
    assert_eq!(v["zeros"].as_array().unwrap().len(), 3);
    assert_eq!(v["residuals"]["samples"], 200);
    assert_eq!(v["residuals"]["seed"], 42);
}

#[test]
fn catalog_examples() {
    let cat = builtin_catalog();
    assert!(cat.len() >= 10);
    let fundamental = find_builtin("jacobi-fundamental").unwrap();
    let text = fundamental.as_functional().unwrap().expr.to_string();
    assert!(
        text.starts_with("2*theta3(a)*theta3(b)*theta3(c)*theta3(d)"),
        "{text}"
    );
    assert_eq!(fundamental.as_functional().unwrap().expr.terms.len(), 5);
    assert!(fundamental.as_functional().unwrap().candidates.is_empty());
}

#[test]
fn legendre_entry_verifies_below_its_tolerance() {
    let spec = find_builtin("legendre-relation").unwrap();
    for ctx in default_contexts() {
        let r = verify(&spec, &ctx, &VerifyParams::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.residuals.max_rel < 1e-5);
    }
}

#[test]
fn mutated_entry_fails_the_suite() {
    let mut cat = builtin_catalog();
    let k = cat
        .iter()
        .position(|s| s.name == "jacobi-add-mixed")
        .unwrap();
    cat[k] = cat[k].with_flipped_sign(1).unwrap();
    let suite = run_suite_with_catalog(&cat[k..=k], &default_contexts(), &VerifyParams::default());
    assert_eq!(suite.exit_code(), 1);
    let suite = run_suite_with_catalog(&cat[..1], &default_contexts(), &VerifyParams::default());
    assert_eq!(suite.exit_code(), 0);
}

#[test]
fn suite_keeps_errors_and_continues() {
    let ctxs = vec![
        EvalContext::Nome(TauNome::new(C64::new(0.0, 1.0)).unwrap()),
        default_contexts()[0],
    ];
    let cat: Vec<IdentitySpec> = ["sigma-mixed", "jacobi-add-theta3"]
        .iter()
        .map(|n| find_builtin(n).unwrap())
        .collect();
    let suite = run_suite_with_catalog(&cat, &ctxs, &VerifyParams::default());
    assert_eq!(suite.entries.len(), 4);
    assert!(suite.entries[0].error.is_some());
    assert_eq!(suite.entries[1].verdict(), Verdict::Verified);
    assert_eq!(suite.exit_code(), 2);
}

#[test]
fn user_identity_round_trip() {
    let spec = IdentitySpec::functional(
        "user",
        "theta1(2*z) - 2*theta1(z)*theta2(z)*theta3_0*theta4_0/theta2_0",
        "z",
        ("pi", "pitau"),
        &[],
    );
    // Division by a constant factor is not part of the language.
    assert!(spec.is_err());
    let spec = IdentitySpec::functional(
        "user",
        "theta1(z+pi) + theta1(z)",
        "z",
        ("pi", "pitau"),
        &["0"],
    )
    .unwrap();
    let r = verify(&spec, &default_contexts()[0], &VerifyParams::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Verified);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn builtins_verify_on_random_lattices(
        re3 in -0.5f64..0.5,
        im3 in 0.6f64..1.6,
        seed in 0u64..1000,
        pick in 0usize..8,
    ) {
        let lat = lattice_new(C64::new(1.0, 0.0), C64::new(re3, im3)).unwrap();
        let spec = &builtin_catalog()[pick];
        let params = VerifyParams { seed, samples: 40, tol: None };
        let r = verify(spec, &EvalContext::Lattice(lat), &params).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Verified, "{}", r.to_json());
    }
}
