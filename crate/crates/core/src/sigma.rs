//! Weierstrass `σ` and the auxiliary `σ₁, σ₂, σ₃`.
//!
//! Evaluation goes through theta functions at `u = πz/(2ω₁)`, `τ = ω₃/ω₁`:
//!
//! ```text
//! σ(z)  = (2ω₁/(πϑ₁′)) e^{η₁z²/(2ω₁)} ϑ₁(u)
//! σ₁(z) = e^{η₁z²/(2ω₁)} ϑ₂(u)/ϑ₂      σ₂(z) = e^{η₁z²/(2ω₁)} ϑ₃(u)/ϑ₃
//! σ₃(z) = e^{η₁z²/(2ω₁)} ϑ₄(u)/ϑ₄
//! ```
//!
//! `σ_j` vanishes at `ω_j`; with `ω₂ = -ω₁-ω₃` that pairs `σ₂` with `ϑ₃` and
//! `σ₃` with `ϑ₄`. The defining infinite product is kept as a slow oracle.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::theta::{theta_reduced_parts, ThetaKind, MAX_EXPONENT};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SigmaKind {
    Sigma,
    Sigma1,
    Sigma2,
    Sigma3,
}

impl SigmaKind {
    pub const ALL: [SigmaKind; 4] = [
        SigmaKind::Sigma,
        SigmaKind::Sigma1,
        SigmaKind::Sigma2,
        SigmaKind::Sigma3,
    ];

    /// `σ_j` for `j ∈ {1,2,3}`.
    pub fn aux(j: u8) -> SigmaKind {
        match j {
            1 => SigmaKind::Sigma1,
            2 => SigmaKind::Sigma2,
            3 => SigmaKind::Sigma3,
            _ => panic!("auxiliary sigma index {j} out of range"),
        }
    }

    /// 0 for `σ`, `j` for `σ_j`.
    pub fn index(self) -> u8 {
        match self {
            SigmaKind::Sigma => 0,
            SigmaKind::Sigma1 => 1,
            SigmaKind::Sigma2 => 2,
            SigmaKind::Sigma3 => 3,
        }
    }

    pub fn is_odd(self) -> bool {
        self == SigmaKind::Sigma
    }

    pub fn theta_kind(self) -> ThetaKind {
        match self {
            SigmaKind::Sigma => ThetaKind::One,
            SigmaKind::Sigma1 => ThetaKind::Two,
            SigmaKind::Sigma2 => ThetaKind::Three,
            SigmaKind::Sigma3 => ThetaKind::Four,
        }
    }
}

pub fn sigma_eval(kind: SigmaKind, z: C64, lat: &Lattice) -> Result<C64> {
    let w1 = lat.omega1();
    let u = z * PI / (2.0 * w1);
    let theta_kind = kind.theta_kind();
    let (reduced, theta_exponent, _) = theta_reduced_parts(theta_kind, u, lat.tau_nome())?;
    let exponent = lat.eta1() * z * z / (2.0 * w1) + theta_exponent;
    if exponent.re > MAX_EXPONENT {
        return Err(Error::Overflow(exponent.re));
    }
    let prefactor = match kind {
        SigmaKind::Sigma => 2.0 * w1 / (PI * lat.nullwerte().theta1_prime),
        _ => 1.0 / lat.nullwerte().get(theta_kind),
    };
    Ok(prefactor * reduced * exponent.exp())
}

/// Partial product `z ∏ exp(z/w + z²/(2w²))(1 - z/w)` over
/// `w = 2nω₁ + 2mω₃`, `|n|, |m| ≤ shell_cutoff`, `(n, m) ≠ (0, 0)`.
///
/// Converges slowly; meant for tests and oracle checks only.
pub fn sigma_product_oracle(z: C64, lat: &Lattice, shell_cutoff: usize) -> Result<C64> {
    if shell_cutoff < 10 {
        return Err(Error::Domain(format!(
            "shell cutoff {shell_cutoff} below 10"
        )));
    }
    let n_max = shell_cutoff as i64;
    let mut acc = C64::new(1.0, 0.0);
    for n in -n_max..=n_max {
        for m in -n_max..=n_max {
            if n == 0 && m == 0 {
                continue;
            }
            let w = 2.0 * n as f64 * lat.omega1() + 2.0 * m as f64 * lat.omega3();
            let r = z / w;
            acc *= (r + r * r / 2.0).exp() * (1.0 - r);
        }
    }
    Ok(z * acc)
}

/// Exact logarithmic derivative of the truncated product:
/// `1/z + Σ [1/(z-w) + 1/w + z/w²]`.
pub fn product_log_derivative(z: C64, lat: &Lattice, shell_cutoff: usize) -> C64 {
    let n_max = shell_cutoff as i64;
    let mut acc = 1.0 / z;
    for n in -n_max..=n_max {
        for m in -n_max..=n_max {
            if n == 0 && m == 0 {
                continue;
            }
            let w = 2.0 * n as f64 * lat.omega1() + 2.0 * m as f64 * lat.omega3();
            acc += 1.0 / (z - w) + 1.0 / w + z / (w * w);
        }
    }
    acc
}

/// `η_j = σ′(ω_j)/σ(ω_j)` from the product definition.
pub fn eta_from_product(j: u8, lat: &Lattice, shell_cutoff: usize) -> C64 {
    product_log_derivative(lat.omega(j), lat, shell_cutoff)
}

/// Largest pairwise relative difference among
/// `e^{η_j z}σ(ω_j-z)/σ(ω_j)`, `e^{-η_j z}σ(ω_j+z)/σ(ω_j)` and `σ_j(z)`.
pub fn sigma_aux_consistency(j: u8, z: C64, lat: &Lattice) -> Result<f64> {
    if !(1..=3).contains(&j) {
        return Err(Error::Domain(format!(
            "auxiliary index {j} not in {{1,2,3}}"
        )));
    }
    let wj = lat.omega(j);
    let eta = lat.eta(j);
    let at_half = sigma_eval(SigmaKind::Sigma, wj, lat)?;
    if at_half.norm() < 1e-8 * wj.norm() {
        return Err(Error::Degenerate(format!("σ(ω{j}) is numerically zero")));
    }
    let minus = (eta * z).exp() * sigma_eval(SigmaKind::Sigma, wj - z, lat)? / at_half;
    let plus = (-eta * z).exp() * sigma_eval(SigmaKind::Sigma, wj + z, lat)? / at_half;
    let direct = sigma_eval(SigmaKind::aux(j), z, lat)?;

    let envelope = (lat.eta1() * z * z / (2.0 * lat.omega1())).exp().norm();
    let largest = minus.norm().max(plus.norm()).max(direct.norm());
    if largest < 1e-8 * envelope {
        return Err(Error::Degenerate(format!("σ{j} is near a zero at {z}")));
    }
    let rel = |a: C64, b: C64| (a - b).norm() / a.norm().max(b.norm());
    Ok(rel(minus, plus)
        .max(rel(minus, direct))
        .max(rel(plus, direct)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_new;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square() -> Lattice {
        lattice_new(C64::new(PI / 2.0, 0.0), C64::new(0.0, PI / 2.0)).unwrap()
    }

    fn lattices() -> Vec<Lattice> {
        vec![
            square(),
            lattice_new(C64::new(1.0, 0.0), C64::new(0.3, 0.9)).unwrap(),
            lattice_new(C64::new(1.0, 0.2), C64::new(-0.4, 1.1)).unwrap(),
        ]
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm())
    }

    fn cell_point(rng: &mut ChaCha8Rng, lat: &Lattice) -> C64 {
        rng.gen_range(-0.95..0.95) * lat.omega1() + rng.gen_range(-0.95..0.95) * lat.omega3()
    }

    #[test]
    fn sigma_near_origin() {
        for lat in lattices() {
            assert_eq!(
                sigma_eval(SigmaKind::Sigma, C64::new(0.0, 0.0), &lat)
                    .unwrap()
                    .norm(),
                0.0
            );
            let z = C64::new(1e-6, 0.0);
            let s = sigma_eval(SigmaKind::Sigma, z, &lat).unwrap();
            assert!((s / z - 1.0).norm() < 1e-6);
            for j in 1..=3 {
                let v = sigma_eval(SigmaKind::aux(j), C64::new(0.0, 0.0), &lat).unwrap();
                assert!((v - 1.0).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn aux_vanishes_at_own_half_period() {
        for lat in lattices() {
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            let scale = (0..20)
                .map(|_| {
                    sigma_eval(SigmaKind::Sigma1, cell_point(&mut rng, &lat), &lat)
                        .unwrap()
                        .norm()
                })
                .fold(0.0, f64::max);
            for j in 1..=3 {
                let v = sigma_eval(SigmaKind::aux(j), lat.omega(j), &lat).unwrap();
                assert!(v.norm() < 1e-12 * scale, "σ{j}(ω{j}) = {v}");
            }
        }
    }

    #[test]
    fn product_oracle_agrees() {
        let lat = square();
        let z = C64::new(0.3, 0.1);
        let p = sigma_product_oracle(z, &lat, 60).unwrap();
        let s = sigma_eval(SigmaKind::Sigma, z, &lat).unwrap();
        assert!(rel(p, s) < 1e-5);
        assert_eq!(
            sigma_product_oracle(C64::new(0.0, 0.0), &lat, 10)
                .unwrap()
                .norm(),
            0.0
        );
        assert!(sigma_product_oracle(z, &lat, 5).is_err());
        let m = sigma_product_oracle(-z, &lat, 30).unwrap();
        let p30 = sigma_product_oracle(z, &lat, 30).unwrap();
        assert!(rel(m, -p30) < 1e-12);
    }

    #[test]
    fn product_oracle_converges_with_cutoff() {
        for lat in lattices() {
            let z = 0.4 * lat.omega1() + 0.3 * lat.omega3();
            let s = sigma_eval(SigmaKind::Sigma, z, &lat).unwrap();
            let e30 = rel(sigma_product_oracle(z, &lat, 30).unwrap(), s);
            let e60 = rel(sigma_product_oracle(z, &lat, 60).unwrap(), s);
            assert!(e60 <= 0.5 * e30, "{e30} -> {e60}");
        }
    }

    #[test]
    fn aux_consistency() {
        for lat in lattices() {
            assert!(sigma_aux_consistency(1, C64::new(0.0, 0.0), &lat).unwrap() < 1e-14);
            let z = 0.2 * lat.omega1() + 0.1 * lat.omega3();
            assert!(sigma_aux_consistency(1, z, &lat).unwrap() < 1e-9);
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..30 {
                let z = cell_point(&mut rng, &lat);
                for j in 1..=3 {
                    match sigma_aux_consistency(j, z, &lat) {
                        Ok(r) => assert!(r < 1e-9, "j={j} z={z} r={r}"),
                        Err(Error::Degenerate(_)) => {}
                        Err(e) => panic!("{e}"),
                    }
                    let a = sigma_eval(SigmaKind::aux(j), z, &lat).unwrap();
                    let b = sigma_eval(SigmaKind::aux(j), -z, &lat).unwrap();
                    assert!(rel(a, b) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn quasi_periodicity() {
        for lat in lattices() {
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            for _ in 0..30 {
                let z = cell_point(&mut rng, &lat);
                for j in [1u8, 2, 3] {
                    let (w, eta) = (lat.omega(j), lat.eta(j));
                    let lhs = sigma_eval(SigmaKind::Sigma, z + 2.0 * w, &lat).unwrap();
                    let rhs = -(2.0 * eta * (z + w)).exp()
                        * sigma_eval(SigmaKind::Sigma, z, &lat).unwrap();
                    assert!(rel(lhs, rhs) < 1e-10);
                    for k in 1..=3 {
                        let a = sigma_eval(SigmaKind::aux(k), z + 2.0 * w, &lat).unwrap();
                        let b = sigma_eval(SigmaKind::aux(k), z, &lat).unwrap();
                        let rhs = (4.0 * eta * z + 4.0 * eta * w).exp() * b * b;
                        assert!(rel(a * a, rhs) < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn large_arguments_stay_finite() {
        let lat = square();
        let z = 6.0 * 2.0 * lat.omega1() + 0.3;
        assert!(sigma_eval(SigmaKind::Sigma, z, &lat)
            .unwrap()
            .norm()
            .is_finite());
    }
}
