//! Period-lattice data for half-periods `ω₁, ω₃` (with `ω₂ = -ω₁-ω₃`).

use crate::error::{Error, Result};
use crate::sigma::{sigma_eval, SigmaKind};
use crate::theta::{theta1_odd_derivative, theta_nullwerte, Nullwerte, TauNome};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    omega1: C64,
    omega3: C64,
    tn: TauNome,
    eta1: C64,
    eta3: C64,
    nullwerte: Nullwerte,
}

/// Builds the lattice with half-periods `ω₁, ω₃`.
///
/// `η₁ = -(π²/(12ω₁))·ϑ₁‴(0)/ϑ₁′(0)` at `τ = ω₃/ω₁`, and `η₃` is fixed by the
/// Legendre relation `η₁ω₃ - η₃ω₁ = iπ/2`.
pub fn lattice_new(omega1: C64, omega3: C64) -> Result<Lattice> {
    if omega1 == C64::new(0.0, 0.0) || omega3 == C64::new(0.0, 0.0) {
        return Err(Error::Domain("half-periods must be non-zero".into()));
    }
    let tau = omega3 / omega1;
    if tau.im.is_nan() || tau.im <= 0.0 {
        return Err(Error::Domain(format!(
            "Im(ω₃/ω₁) = {} must be positive",
            tau.im
        )));
    }
    let tn = TauNome::new(tau)?;
    let nullwerte = theta_nullwerte(&tn);
    let d3 = theta1_odd_derivative(3, &tn);
    let eta1 = -(PI * PI / (12.0 * omega1)) * d3 / nullwerte.theta1_prime;
    let eta3 = (eta1 * omega3 - C64::i() * (PI / 2.0)) / omega1;
    Ok(Lattice {
        omega1,
        omega3,
        tn,
        eta1,
        eta3,
        nullwerte,
    })
}

impl Lattice {
    pub fn new(omega1: C64, omega3: C64) -> Result<Self> {
        lattice_new(omega1, omega3)
    }

    pub fn omega1(&self) -> C64 {
        self.omega1
    }

    pub fn omega2(&self) -> C64 {
        -self.omega1 - self.omega3
    }

    pub fn omega3(&self) -> C64 {
        self.omega3
    }

    pub fn eta1(&self) -> C64 {
        self.eta1
    }

    pub fn eta2(&self) -> C64 {
        -self.eta1 - self.eta3
    }

    pub fn eta3(&self) -> C64 {
        self.eta3
    }

    /// `ω_j` for `j ∈ {1,2,3}`.
    pub fn omega(&self, j: u8) -> C64 {
        match j {
            1 => self.omega1,
            2 => self.omega2(),
            3 => self.omega3,
            _ => panic!("half-period index {j} out of range"),
        }
    }

    pub fn eta(&self, j: u8) -> C64 {
        match j {
            1 => self.eta1,
            2 => self.eta2(),
            3 => self.eta3,
            _ => panic!("half-period index {j} out of range"),
        }
    }

    pub fn tau(&self) -> C64 {
        self.tn.tau()
    }

    pub fn tau_nome(&self) -> &TauNome {
        &self.tn
    }

    pub fn nullwerte(&self) -> &Nullwerte {
        &self.nullwerte
    }

    /// `η₁ω₃ - η₃ω₁ - iπ/2`; zero up to rounding by construction.
    pub fn legendre_defect(&self) -> C64 {
        self.eta1 * self.omega3 - self.eta3 * self.omega1 - C64::i() * (PI / 2.0)
    }

    /// Real coordinates `(x, y)` with `z = x·2ω₁ + y·2ω₃`.
    pub fn coords(&self, z: C64) -> (f64, f64) {
        crate::contour::cell_coords(z, 2.0 * self.omega1, 2.0 * self.omega3)
    }

    /// True when `z` lies within `tol` (in cell units) of a lattice point.
    pub fn is_lattice_point(&self, z: C64, tol: f64) -> bool {
        let (x, y) = self.coords(z);
        (x - x.round()).abs() < tol && (y - y.round()).abs() < tol
    }
}

fn check_index(j: u8) -> Result<()> {
    if (1..=3).contains(&j) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "half-period index {j} not in {{1,2,3}}"
        )))
    }
}

/// `e_k - e_l` for `k, l ∈ {1,2,3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EjDifference {
    pub k: u8,
    pub l: u8,
    pub value: C64,
}

/// Probe points in units of `ω₁`.
const PROBES: [C64; 2] = [C64::new(0.27, 0.31), C64::new(0.41, 0.17)];

/// `e_k - e_l = (σ_l/σ)² - (σ_k/σ)²` at a fixed probe point.
pub fn e_diff(lat: &Lattice, k: u8, l: u8) -> Result<EjDifference> {
    check_index(k)?;
    check_index(l)?;
    if k == l {
        return Ok(EjDifference {
            k,
            l,
            value: C64::new(0.0, 0.0),
        });
    }
    let mut last = None;
    for probe in PROBES {
        match e_diff_at(lat, k, l, probe * lat.omega1) {
            Ok(value) => return Ok(EjDifference { k, l, value }),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one probe"))
}

/// `e_k - e_l` evaluated at an arbitrary non-lattice point `z`.
pub fn e_diff_at(lat: &Lattice, k: u8, l: u8, z: C64) -> Result<C64> {
    check_index(k)?;
    check_index(l)?;
    let s = sigma_eval(SigmaKind::Sigma, z, lat)?;
    if s.norm() < 1e-8 * z.norm().max(lat.omega1.norm()) {
        return Err(Error::Degenerate(format!(
            "σ({z}) too close to zero for a probe"
        )));
    }
    let rk = sigma_eval(SigmaKind::aux(k), z, lat)? / s;
    let rl = sigma_eval(SigmaKind::aux(l), z, lat)? / s;
    Ok(rl * rl - rk * rk)
}

/// Absolute `e₁, e₂, e₃` under `e₁ + e₂ + e₃ = 0`.
pub fn e_values(lat: &Lattice) -> Result<[C64; 3]> {
    let d12 = e_diff(lat, 1, 2)?.value;
    let d13 = e_diff(lat, 1, 3)?.value;
    let e1 = (d12 + d13) / 3.0;
    Ok([e1, e1 - d12, e1 - d13])
}

/// Weierstrass `℘(z) = e_1 + (σ₁(z)/σ(z))²`.
pub fn wp_eval(lat: &Lattice, z: C64) -> Result<C64> {
    wp_eval_via(lat, z, 1)
}

/// `℘(z) = e_l + (σ_l(z)/σ(z))²` for a chosen `l`.
pub fn wp_eval_via(lat: &Lattice, z: C64, l: u8) -> Result<C64> {
    check_index(l)?;
    if lat.is_lattice_point(z, 1e-9) {
        return Err(Error::Pole(format!(
            "{z} is congruent to 0 modulo the lattice"
        )));
    }
    let e = e_values(lat)?;
    let s = sigma_eval(SigmaKind::Sigma, z, lat)?;
    let r = sigma_eval(SigmaKind::aux(l), z, lat)? / s;
    Ok(e[l as usize - 1] + r * r)
}
