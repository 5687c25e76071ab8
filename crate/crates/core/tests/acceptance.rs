//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use num_complex::Complex64 as C64;
use qpcheck_core::contour::lattice_distance;
use qpcheck_core::qp::{
    check_zero_symbolic, eval_linform, expr_multiplier, parse_linform, parse_with,
    predicted_zero_count, Bindings, BoundExpr, EvalContext, LinForm, ParseOptions,
};
use qpcheck_core::sigma::eta_from_product;
use qpcheck_core::theta::theta_nullwerte;
use qpcheck_core::verifier::{
    builtin_catalog, default_contexts, find_builtin, run_suite, run_suite_with_catalog, verify,
    Verdict, VerifyParams,
};
use qpcheck_core::{
    choose_admissible_base, locate_zeros, sigma_eval, sigma_product_oracle, winding_count, Lattice,
    Parallelogram, SigmaKind, TauNome, WindingOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn lattices() -> Vec<Lattice> {
    default_contexts()
        .iter()
        .map(|c| *c.lattice().unwrap())
        .collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, started: Instant) -> Result<(), String> {
    let took = started.elapsed();
    check(took < budget, || {
        format!("took {took:.2?}, budget {budget:?}")
    })
}

fn theta_relation_suite(name: &str, budget: Option<Duration>) -> Outcome {
    let started = Instant::now();
    let spec = find_builtin(name).map_err(|e| e.to_string())?;
    let params = VerifyParams {
        seed: 7,
        samples: 200,
        tol: Some(1e-10),
    };
    let mut worst: f64 = 0.0;
    for tau in [C64::new(0.0, 1.0), C64::new(0.3, 0.8), C64::new(-0.4, 1.1)] {
        let ctx = EvalContext::Nome(TauNome::new(tau).map_err(|e| e.to_string())?);
        let r = verify(&spec, &ctx, &params).map_err(|e| e.to_string())?;
        check(r.verdict == Verdict::Verified, || {
            format!("tau={tau}: {}", r.verdict)
        })?;
        for rel in &r.relations {
            check(rel.max_rel < 1e-10, || {
                format!("tau={tau}: {} residual {:.2e}", rel.relation, rel.max_rel)
            })?;
        }
        worst = worst.max(r.residuals.max_rel);
    }
    if let Some(b) = budget {
        within(b, started)?;
    }
    Ok(format!(
        "{} relations, max residual {worst:.1e}",
        spec.term_count() / 2
    ))
}

fn c1_quasi_periodicity() -> Outcome {
    theta_relation_suite("lemma1-qp", Some(Duration::from_secs(5)))
}

fn c2_half_periods() -> Outcome {
    theta_relation_suite("lemma2-transforms", None)
}

fn c3_sigma_product() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for lat in lattices() {
        for _ in 0..50 {
            let (u, v): (f64, f64) = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let z = 2.0 * u * lat.omega1() + 2.0 * v * lat.omega3();
            let s = sigma_eval(SigmaKind::Sigma, z, &lat).map_err(|e| e.to_string())?;
            let p = sigma_product_oracle(z, &lat, 60).map_err(|e| e.to_string())?;
            let rel = (s - p).norm() / s.norm();
            check(rel < 1e-5, || {
                format!("z={z}: relative difference {rel:.2e}")
            })?;
            worst = worst.max(rel);
        }
    }
    within(Duration::from_secs(60), started)?;
    Ok(format!("150 points, max relative difference {worst:.1e}"))
}

fn c4_legendre() -> Outcome {
    let mut worst: f64 = 0.0;
    for lat in lattices() {
        let e1 = eta_from_product(1, &lat, 60);
        let e3 = eta_from_product(3, &lat, 60);
        let defect =
            (e1 * lat.omega3() - e3 * lat.omega1() - C64::new(0.0, PI / 2.0)).norm() / (PI / 2.0);
        check(defect < 1e-4, || {
            format!("lattice {:?}: defect {defect:.2e}", lat.omega1())
        })?;
        worst = worst.max(defect);
    }
    Ok(format!("max relative defect {worst:.1e}"))
}

fn c5_zero_counts() -> Outcome {
    let expected = [
        ("weierstrass-3term", 2),
        ("weierstrass-fundamental", 4),
        ("sigma-mixed", 2),
        ("jacobi-add-theta3", 2),
        ("jacobi-add-mixed", 2),
        ("jacobi-fundamental", 1),
    ];
    for (name, n) in expected {
        let spec = find_builtin(name).map_err(|e| e.to_string())?;
        let f = spec.as_functional().ok_or("not a functional identity")?;
        let (g1, g2) = &f.generators;
        let m1 = expr_multiplier(&f.expr, &f.variable, g1).map_err(|e| format!("{name}: {e}"))?;
        let m2 = expr_multiplier(&f.expr, &f.variable, g2).map_err(|e| format!("{name}: {e}"))?;
        let got = predicted_zero_count(&m1, &m2, g1, g2).map_err(|e| format!("{name}: {e}"))?;
        check(got.is_integer() && *got.numer() == n, || {
            format!("{name}: N = {got}, want {n}")
        })?;
    }
    Ok("N = 2, 4, 2, 2, 2, 1".into())
}

fn winding_of(
    text: &str,
    bindings: Bindings,
    ctx: EvalContext,
    gens: (&str, &str),
    seed: u64,
) -> Result<(i64, i64), String> {
    let opts = ParseOptions::default();
    let expr = parse_with(text, &opts).map_err(|e| e.to_string())?;
    let g1 = parse_linform(gens.0, &opts).map_err(|e| e.to_string())?;
    let g2 = parse_linform(gens.1, &opts).map_err(|e| e.to_string())?;
    let m1 = expr_multiplier(&expr, "z", &g1).map_err(|e| e.to_string())?;
    let m2 = expr_multiplier(&expr, "z", &g2).map_err(|e| e.to_string())?;
    let n = predicted_zero_count(&m1, &m2, &g1, &g2).map_err(|e| e.to_string())?;
    let numeric = |g: &LinForm| eval_linform(g, &Bindings::new(), &ctx).map_err(|e| e.to_string());
    let (l1, l2) = (numeric(&g1)?, numeric(&g2)?);
    let f = BoundExpr::new(expr, bindings, ctx);
    let base = choose_admissible_base(&f, l1, l2, seed).map_err(|e| e.to_string())?;
    let cell = Parallelogram::new(base, l1, l2).map_err(|e| e.to_string())?;
    let cert = winding_count(&f, &cell, &WindingOptions::default()).map_err(|e| e.to_string())?;
    check(n.is_integer(), || format!("{text}: N = {n}"))?;
    Ok((cert.winding, *n.numer()))
}

fn c6_contour() -> Outcome {
    let started = Instant::now();
    let lat = lattices()[1];
    let ctx = EvalContext::Lattice(lat);
    let a = 0.3 * lat.omega1() + 0.2 * lat.omega3();
    let cases: [(&str, Bindings, (&str, &str), i64); 6] = [
        ("sigma(z)", Bindings::new(), ("2*w1", "2*w3"), 1),
        ("theta1(z)", Bindings::new(), ("pi", "pitau"), 1),
        ("sigma1(z)", Bindings::new(), ("2*w1", "2*w3"), 1),
        ("sigma2(z)", Bindings::new(), ("2*w1", "2*w3"), 1),
        ("sigma3(z)", Bindings::new(), ("2*w1", "2*w3"), 1),
        (
            "sigma(z+a)*sigma(z-a)",
            BTreeMap::from([("a".to_string(), a)]),
            ("2*w1", "2*w3"),
            2,
        ),
    ];
    let mut got = Vec::new();
    for (seed, (text, bindings, gens, want)) in cases.into_iter().enumerate() {
        let (w, n) = winding_of(text, bindings, ctx, gens, seed as u64 + 1)?;
        check(w == n && n == want, || {
            format!("{text}: winding {w}, predicted {n}, want {want}")
        })?;
        got.push(w.to_string());
    }
    within(Duration::from_secs(10), started)?;
    Ok(format!("windings {}", got.join(", ")))
}

fn c7_localization() -> Outcome {
    let lat = lattices()[0];
    let ctx = EvalContext::Lattice(lat);
    let a = 0.3 * lat.omega1() + 0.2 * lat.omega3();
    let expr =
        parse_with("sigma(z+a)*sigma(z-a)", &ParseOptions::default()).map_err(|e| e.to_string())?;
    let f = BoundExpr::new(expr, BTreeMap::from([("a".to_string(), a)]), ctx);
    let (l1, l2) = (2.0 * lat.omega1(), 2.0 * lat.omega3());
    let base = choose_admissible_base(&f, l1, l2, 11).map_err(|e| e.to_string())?;
    let cell = Parallelogram::new(base, l1, l2).map_err(|e| e.to_string())?;
    let zeros = locate_zeros(&f, &cell, 2, 1e-8).map_err(|e| e.to_string())?;
    check(zeros.len() == 2, || format!("found {} zeros", zeros.len()))?;
    let mut worst: f64 = 0.0;
    for target in [a, -a] {
        let d = zeros
            .iter()
            .map(|z| lattice_distance(z.zero, target, l1, l2))
            .fold(f64::INFINITY, f64::min);
        check(d < 1e-8, || {
            format!("nearest zero to {target} is {d:.2e} away")
        })?;
        worst = worst.max(d);
    }
    check(zeros.iter().all(|z| z.multiplicity == 1), || {
        "multiplicities differ from 1".into()
    })?;
    Ok(format!("zeros at +-a, max distance {worst:.1e}"))
}

fn c8_identity_residuals() -> Outcome {
    let started = Instant::now();
    let params = VerifyParams {
        seed: 42,
        samples: 200,
        tol: None,
    };
    let suite = run_suite(&default_contexts(), &params);
    let mut worst: f64 = 0.0;
    for e in &suite.entries {
        let r = e
            .report
            .as_ref()
            .ok_or_else(|| format!("{}: {}", e.identity, e.error.clone().unwrap_or_default()))?;
        check(r.verdict == Verdict::Verified, || {
            format!("{}: {}", e.identity, r.verdict)
        })?;
        if e.identity != "legendre-relation" {
            check(r.residuals.max_rel < 1e-9, || {
                format!("{}: residual {:.2e}", e.identity, r.residuals.max_rel)
            })?;
            worst = worst.max(r.residuals.max_rel);
        }
    }
    check(suite.exit_code() == 0, || {
        format!("suite exit code {}", suite.exit_code())
    })?;
    within(Duration::from_secs(30), started)?;
    Ok(format!(
        "{} reports verified, max residual {worst:.1e}",
        suite.entries.len()
    ))
}

fn c9_symbolic_zeros() -> Outcome {
    let stated: [(&str, &[&str]); 6] = [
        ("weierstrass-3term", &["a", "b", "c"]),
        ("sigma-mixed", &["0", "w1", "w2"]),
        ("sigma-mixed-13", &["0", "w1", "w3"]),
        ("sigma-mixed-23", &["0", "w2", "w3"]),
        (
            "jacobi-add-theta3",
            &["0", "pi/2+pitau/2", "b+pi/2+pitau/2"],
        ),
        ("jacobi-add-mixed", &["0", "-b", "pi/2"]),
    ];
    let ctx = default_contexts()[0];
    let params = VerifyParams::default();
    for (name, cands) in stated {
        let spec = find_builtin(name).map_err(|e| e.to_string())?;
        let f = spec.as_functional().ok_or("not a functional identity")?;
        let opts = ParseOptions::with_variable(&f.variable);
        for c in cands {
            let form = parse_linform(c, &opts).map_err(|e| e.to_string())?;
            let binding = BTreeMap::from([(f.variable.clone(), form)]);
            check(check_zero_symbolic(&f.expr, &binding), || {
                format!("{name}: candidate {c} not cancelled")
            })?;
        }
        let r = verify(&spec, &ctx, &params).map_err(|e| e.to_string())?;
        check(r.zero_excess, || format!("{name}: zero_excess not set"))?;
    }
    for name in ["weierstrass-fundamental", "jacobi-fundamental"] {
        let r = verify(
            &find_builtin(name).map_err(|e| e.to_string())?,
            &ctx,
            &params,
        )
        .map_err(|e| e.to_string())?;
        check(!r.zero_excess && !r.notes.is_empty(), || {
            format!("{name}: unexpected zero evidence")
        })?;
    }
    Ok("18 candidates cancel symbolically, excess flagged on 6 identities".into())
}

fn c10_mutations() -> Outcome {
    let ctxs = default_contexts();
    let params = VerifyParams::default();
    let mut count = 0;
    for spec in builtin_catalog() {
        for m in spec.mutations() {
            let suite = run_suite_with_catalog(std::slice::from_ref(&m), &ctxs, &params);
            check(suite.exit_code() == 1, || {
                format!("{}: exit code {}", m.name, suite.exit_code())
            })?;
            for e in &suite.entries {
                check(e.verdict() == Verdict::Falsified, || {
                    format!("{}: {}", m.name, e.verdict())
                })?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} mutations falsified in every context"))
}

fn c11_jacobi_derivative() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let tau = C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0));
        let nw = theta_nullwerte(&TauNome::new(tau).map_err(|e| e.to_string())?);
        let product = nw.theta2 * nw.theta3 * nw.theta4;
        let rel = (nw.theta1_prime - product).norm() / product.norm();
        check(rel < 1e-12, || {
            format!("tau={tau}: relative difference {rel:.2e}")
        })?;
        worst = worst.max(rel);
    }
    Ok(format!("10 nomes, max relative difference {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("theta quasi-periodicity relations", c1_quasi_periodicity),
        ("theta half-period transformations", c2_half_periods),
        ("theta form of sigma against the product", c3_sigma_product),
        ("Legendre relation from product etas", c4_legendre),
        ("exact predicted zero counts", c5_zero_counts),
        ("winding numbers match predicted counts", c6_contour),
        (
            "zero localization for sigma(z+a)sigma(z-a)",
            c7_localization,
        ),
        ("built-in identity residuals", c8_identity_residuals),
        ("symbolic zero exhibition", c9_symbolic_zeros),
        ("single-sign mutation sweep", c10_mutations),
        ("theta1' = theta2 theta3 theta4", c11_jacobi_derivative),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let took = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {:>2}: {title} [{detail}] ({took:.2}s)",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {title} [{why}] ({took:.2}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
