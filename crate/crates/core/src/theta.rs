//! Jacobi theta functions with nome `q = e^{iπτ}`.
//!
//! ```text
//! ϑ₁(z) = -i Σ (-1)^n q^{(n+½)²} e^{(2n+1)iz}      ϑ₂(z) = Σ q^{(n+½)²} e^{(2n+1)iz}
//! ϑ₃(z) =    Σ q^{n²} e^{2niz}                      ϑ₄(z) = Σ (-1)^n q^{n²} e^{2niz}
//! ```
//!
//! Arguments are first reduced into the cell `|Re z| ≤ π/2`, `|Im z| ≤ π Im τ / 2`
//! with the quasi-periods `π` and `πτ`; the multiplier picked up by the
//! reduction is kept as an exact exponent and exponentiated once at the end.
//!
//! Accuracy is about `1e-13` relative for `Im τ ≥ 0.3`. Between `0.05` and
//! `0.3` results degrade gracefully; below `0.05` evaluation is refused since
//! no modular transformation of `τ` is attempted.

use crate::error::{Error, Result};
use crate::exact::{fold_ipi, gauss_int, gauss_one, gauss_to_c64, i_pow, q, qi, GaussQ, Q};
use num_complex::Complex64 as C64;
use num_traits::Zero;
use std::f64::consts::PI;

/// Relative size below which series terms are dropped.
const SERIES_CUTOFF: f64 = 1e-18;

/// Largest real part of an exponent that is exponentiated.
pub(crate) const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauNome {
    tau: C64,
    q: C64,
}

impl TauNome {
    /// Smallest `Im τ` accepted.
    pub const MIN_IM_TAU: f64 = 0.05;
    /// Below this `Im τ` results are outside the documented accuracy band.
    pub const ACCURATE_IM_TAU: f64 = 0.3;

    pub fn new(tau: C64) -> Result<Self> {
        if !(tau.re.is_finite() && tau.im.is_finite()) {
            return Err(Error::Domain(format!("τ = {tau} is not finite")));
        }
        if tau.im <= 0.0 {
            return Err(Error::Domain(format!(
                "τ = {tau} is not in the upper half-plane"
            )));
        }
        if tau.im < Self::MIN_IM_TAU {
            return Err(Error::Domain(format!(
                "Im τ = {} is below the supported bound {}",
                tau.im,
                Self::MIN_IM_TAU
            )));
        }
        let q = (C64::i() * PI * tau).exp();
        Ok(Self { tau, q })
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    /// The nome `e^{iπτ}`.
    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn pi_tau(&self) -> C64 {
        self.tau * PI
    }

    pub fn is_accurate(&self) -> bool {
        self.tau.im >= Self::ACCURATE_IM_TAU
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ThetaKind {
    One,
    Two,
    Three,
    Four,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 4] = [
        ThetaKind::One,
        ThetaKind::Two,
        ThetaKind::Three,
        ThetaKind::Four,
    ];

    pub fn index(self) -> u8 {
        match self {
            ThetaKind::One => 1,
            ThetaKind::Two => 2,
            ThetaKind::Three => 3,
            ThetaKind::Four => 4,
        }
    }

    pub fn from_index(j: u8) -> Option<Self> {
        match j {
            1 => Some(ThetaKind::One),
            2 => Some(ThetaKind::Two),
            3 => Some(ThetaKind::Three),
            4 => Some(ThetaKind::Four),
            _ => None,
        }
    }

    /// `ϑ₁` is odd, the others are even.
    pub fn is_odd(self) -> bool {
        self == ThetaKind::One
    }

    /// Sign in `ϑ(z+π) = ±ϑ(z)`.
    pub fn pi_sign(self) -> i64 {
        match self {
            ThetaKind::One | ThetaKind::Two => -1,
            ThetaKind::Three | ThetaKind::Four => 1,
        }
    }

    /// Sign in `ϑ(z+πτ) = ±q⁻¹e^{-2iz}ϑ(z)`.
    pub fn pitau_sign(self) -> i64 {
        match self {
            ThetaKind::One | ThetaKind::Four => -1,
            ThetaKind::Two | ThetaKind::Three => 1,
        }
    }

    fn half_index(self) -> bool {
        matches!(self, ThetaKind::One | ThetaKind::Two)
    }

    fn alternating(self) -> bool {
        matches!(self, ThetaKind::One | ThetaKind::Four)
    }
}

/// Exact multiplier `sign · exp(c0·iπ + pitau·iπτ + iz·(i z))`.
///
/// The `z` in the last monomial is the argument the multiplier is evaluated
/// at; for [`reduce_argument`] that is the reduced argument `z₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMultiplier {
    pub sign: GaussQ,
    pub c0: Q,
    pub pitau: Q,
    pub iz: Q,
}

impl ExactMultiplier {
    pub fn identity() -> Self {
        Self {
            sign: gauss_one(),
            c0: Q::zero(),
            pitau: Q::zero(),
            iz: Q::zero(),
        }
    }

    fn unit(sign: GaussQ, pitau: Q, iz: Q) -> Self {
        Self {
            sign,
            c0: Q::zero(),
            pitau,
            iz,
        }
    }

    /// Product of two multipliers written in the same variable.
    pub fn compose(&self, other: &ExactMultiplier) -> ExactMultiplier {
        ExactMultiplier {
            sign: self.sign * other.sign,
            c0: self.c0 + other.c0,
            pitau: self.pitau + other.pitau,
            iz: self.iz + other.iz,
        }
        .normalized()
    }

    /// Moves every `iπ` multiple of `c0` that is a power of `i` into `sign`.
    pub fn normalized(mut self) -> Self {
        let (unit, rest) = fold_ipi(self.c0);
        self.sign *= unit;
        self.c0 = rest;
        self
    }

    pub fn exponent(&self, z: C64, tn: &TauNome) -> C64 {
        let i = C64::i();
        i * PI * crate::exact::q_to_f64(&self.c0)
            + i * tn.pi_tau() * crate::exact::q_to_f64(&self.pitau)
            + i * z * crate::exact::q_to_f64(&self.iz)
    }

    pub fn value(&self, z: C64, tn: &TauNome) -> C64 {
        gauss_to_c64(&self.sign) * self.exponent(z, tn).exp()
    }
}

/// Raw theta series at `z` without argument reduction.
///
/// The symmetric index range is grown outward from the largest term until
/// terms fall below `1e-18` of the running maximum.
pub fn theta_series(kind: ThetaKind, z: C64, tn: &TauNome) -> C64 {
    theta_series_with(kind, z, tn, 0)
}

/// As [`theta_series`], continuing `extra` terms past the cutoff on each side.
pub fn theta_series_with(kind: ThetaKind, z: C64, tn: &TauNome, extra: usize) -> C64 {
    if kind == ThetaKind::One && z == C64::zero() {
        // Odd series: exact zero rather than the rounding residue of the pairing.
        return C64::zero();
    }
    let shift = if kind.half_index() { 0.5 } else { 0.0 };
    let i = C64::i();
    let pi_tau = tn.pi_tau();
    let im_tau = tn.tau().im;
    let term = |n: i64| -> (C64, f64) {
        let x = n as f64 + shift;
        let exponent = i * pi_tau * (x * x) + i * z * (2.0 * x);
        let sign = if kind.alternating() && n.rem_euclid(2) == 1 {
            -1.0
        } else {
            1.0
        };
        (exponent.exp() * sign, exponent.re)
    };

    // Term magnitudes are Gaussian in x = n + shift with peak at -Im z/(π Im τ).
    let peak = -z.im / (PI * im_tau);
    let start = (peak - shift).round().clamp(-1e9, 1e9) as i64;
    let (first, first_log) = term(start);
    let mut max_log = first_log;
    let mut upper = C64::zero();
    let mut lower = C64::zero();
    for direction in [1i64, -1] {
        let mut n = start + direction;
        let mut remaining_extra = extra;
        let mut steps = 0;
        loop {
            let (t, log_mag) = term(n);
            if direction > 0 {
                upper += t;
            } else {
                lower += t;
            }
            max_log = max_log.max(log_mag);
            let past_peak = (n as f64 + shift - peak) * direction as f64 > 0.0;
            let small = log_mag < max_log + SERIES_CUTOFF.ln();
            if (past_peak && small) || !log_mag.is_finite() {
                if remaining_extra == 0 {
                    break;
                }
                remaining_extra -= 1;
            }
            steps += 1;
            if steps > 100_000 {
                break;
            }
            n += direction;
        }
    }
    let sum = first + upper + lower;
    if kind == ThetaKind::One {
        -i * sum
    } else {
        sum
    }
}

/// Multiplier of a full lattice shift: `ϑ(u + jπ + kπτ) = m(u)·ϑ(u)`.
pub fn lattice_shift_multiplier(kind: ThetaKind, j: i64, k: i64) -> ExactMultiplier {
    let mut sign = 1i64;
    if j.rem_euclid(2) == 1 {
        sign *= kind.pi_sign();
    }
    if k.rem_euclid(2) == 1 {
        sign *= kind.pitau_sign();
    }
    ExactMultiplier::unit(gauss_int(sign, 0), qi(-(k * k)), qi(-2 * k))
}

/// Splits `z = z₀ + jπ + kπτ` with `z₀` in the reduced cell and returns the
/// exact multiplier with `ϑ(z) = m(z₀)·ϑ(z₀)`.
pub fn reduce_argument(kind: ThetaKind, z: C64, tn: &TauNome) -> Result<(C64, ExactMultiplier)> {
    let (z0, j, k) = reduce_counts(z, tn)?;
    Ok((z0, lattice_shift_multiplier(kind, j, k)))
}

fn reduce_counts(z: C64, tn: &TauNome) -> Result<(C64, i64, i64)> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("argument {z} is not finite")));
    }
    let pi_tau = tn.pi_tau();
    let kf = (z.im / pi_tau.im).round();
    if kf.abs() > 1e7 {
        return Err(Error::Overflow(PI * tn.tau().im * kf * kf));
    }
    let k = kf as i64;
    let z1 = z - pi_tau * kf;
    let jf = (z1.re / PI).round();
    if jf.abs() > 1e15 {
        return Err(Error::Domain(format!(
            "argument {z} is too large to reduce"
        )));
    }
    let j = jf as i64;
    Ok((z1 - jf * PI, j, k))
}

/// Theta function value with exact argument reduction.
pub fn theta_eval(kind: ThetaKind, z: C64, tn: &TauNome) -> Result<C64> {
    let (z0, m) = reduce_argument(kind, z, tn)?;
    let exponent = m.exponent(z0, tn);
    if exponent.re > MAX_EXPONENT {
        return Err(Error::Overflow(exponent.re));
    }
    Ok(gauss_to_c64(&m.sign) * exponent.exp() * theta_series(kind, z0, tn))
}

/// Reduced argument plus the log-form of the multiplier, for callers that fold
/// further exponents in before exponentiating.
pub(crate) fn theta_reduced_parts(
    kind: ThetaKind,
    z: C64,
    tn: &TauNome,
) -> Result<(C64, C64, C64)> {
    let (z0, m) = reduce_argument(kind, z, tn)?;
    let series = theta_series(kind, z0, tn);
    Ok((gauss_to_c64(&m.sign) * series, m.exponent(z0, tn), z0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nullwerte {
    pub theta2: C64,
    pub theta3: C64,
    pub theta4: C64,
    /// `ϑ₁′(0)`.
    pub theta1_prime: C64,
}

impl Nullwerte {
    pub fn get(&self, kind: ThetaKind) -> C64 {
        match kind {
            ThetaKind::One => C64::zero(),
            ThetaKind::Two => self.theta2,
            ThetaKind::Three => self.theta3,
            ThetaKind::Four => self.theta4,
        }
    }
}

pub fn theta_nullwerte(tn: &TauNome) -> Nullwerte {
    Nullwerte {
        theta2: theta_series(ThetaKind::Two, C64::zero(), tn),
        theta3: theta_series(ThetaKind::Three, C64::zero(), tn),
        theta4: theta_series(ThetaKind::Four, C64::zero(), tn),
        theta1_prime: theta1_odd_derivative(1, tn),
    }
}

/// Odd-order derivative `ϑ₁^{(p)}(0)` by term-wise differentiation:
/// `-i^{p+1} · 2 Σ_{n≥0} (-1)^n (2n+1)^p q^{(n+½)²}`.
pub fn theta1_odd_derivative(order: u32, tn: &TauNome) -> C64 {
    assert!(order % 2 == 1, "even derivatives of ϑ₁ vanish at 0");
    let i = C64::i();
    let mut sum = C64::zero();
    let mut max_mag: f64 = 0.0;
    for n in 0..10_000i64 {
        let x = n as f64 + 0.5;
        let weight = (2 * n + 1) as f64;
        let t = (i * tn.pi_tau() * (x * x)).exp() * weight.powi(order as i32);
        let t = if n % 2 == 1 { -t } else { t };
        max_mag = max_mag.max(t.norm());
        sum += t;
        if t.norm() < SERIES_CUTOFF * max_mag {
            break;
        }
    }
    let unit = crate::exact::gauss_to_c64(&i_pow(order as i64 + 1));
    -unit * sum * 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfShift {
    /// `π/2`
    Pi,
    /// `πτ/2`
    PiTau,
    /// `π/2 + πτ/2`
    Both,
}

impl HalfShift {
    pub fn from_halves(pi: bool, pitau: bool) -> Option<Self> {
        match (pi, pitau) {
            (true, false) => Some(HalfShift::Pi),
            (false, true) => Some(HalfShift::PiTau),
            (true, true) => Some(HalfShift::Both),
            (false, false) => None,
        }
    }

    /// Coefficients of `π` and `πτ` in the shift.
    pub fn coefficients(self) -> (Q, Q) {
        match self {
            HalfShift::Pi => (q(1, 2), Q::zero()),
            HalfShift::PiTau => (Q::zero(), q(1, 2)),
            HalfShift::Both => (q(1, 2), q(1, 2)),
        }
    }
}

/// `ϑ_kind(z + shift) = m(z)·ϑ_new(z)`, the half-period transformation
/// formulas solved for the shifted side.
pub fn half_period_rewrite(kind: ThetaKind, shift: HalfShift) -> (ThetaKind, ExactMultiplier) {
    use HalfShift as H;
    use ThetaKind as K;
    // q^{-1/4} e^{-iz}
    let quarter = |sign: GaussQ| ExactMultiplier::unit(sign, q(-1, 4), qi(-1));
    let plain = |sign: i64| ExactMultiplier::unit(gauss_int(sign, 0), Q::zero(), Q::zero());
    match (kind, shift) {
        (K::One, H::Pi) => (K::Two, plain(1)),
        (K::One, H::PiTau) => (K::Four, quarter(gauss_int(0, 1))),
        (K::One, H::Both) => (K::Three, quarter(gauss_int(1, 0))),
        (K::Two, H::Pi) => (K::One, plain(-1)),
        (K::Two, H::PiTau) => (K::Three, quarter(gauss_int(1, 0))),
        (K::Two, H::Both) => (K::Four, quarter(gauss_int(0, -1))),
        (K::Three, H::Pi) => (K::Four, plain(1)),
        (K::Three, H::PiTau) => (K::Two, quarter(gauss_int(1, 0))),
        (K::Three, H::Both) => (K::One, quarter(gauss_int(0, 1))),
        (K::Four, H::Pi) => (K::Three, plain(1)),
        (K::Four, H::PiTau) => (K::One, quarter(gauss_int(0, 1))),
        (K::Four, H::Both) => (K::Two, quarter(gauss_int(1, 0))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tn(re: f64, im: f64) -> TauNome {
        TauNome::new(C64::new(re, im)).unwrap()
    }

    /// Direct bilateral sum with a fixed, generous index range.
    fn brute_series(kind: ThetaKind, z: C64, tau: C64) -> C64 {
        let i = C64::i();
        let mut s = C64::zero();
        for n in -60i64..=60 {
            let (x, sign) = match kind {
                ThetaKind::One => (n as f64 + 0.5, if n % 2 == 0 { 1.0 } else { -1.0 }),
                ThetaKind::Two => (n as f64 + 0.5, 1.0),
                ThetaKind::Three => (n as f64, 1.0),
                ThetaKind::Four => (n as f64, if n % 2 == 0 { 1.0 } else { -1.0 }),
            };
            s += (i * PI * tau * x * x + i * z * 2.0 * x).exp() * sign;
        }
        if kind == ThetaKind::One {
            -i * s
        } else {
            s
        }
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm())
    }

    #[test]
    fn theta3_at_origin_square_lattice() {
        let t = tn(0.0, 1.0);
        let oracle = brute_series(ThetaKind::Three, C64::zero(), C64::i());
        assert!((oracle.re - 1.086_434_811_213_308).abs() < 1e-15);
        let v = theta_eval(ThetaKind::Three, C64::zero(), &t).unwrap();
        assert!((v - C64::new(1.086_434_811_213_308, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn theta1_vanishes_at_origin() {
        let v = theta_eval(ThetaKind::One, C64::zero(), &tn(0.3, 0.8)).unwrap();
        assert!(v.norm() < 1e-16);
    }

    #[test]
    fn theta1_pi_antiperiodic() {
        let t = tn(0.0, 1.0);
        let z = C64::new(0.3, 0.0);
        let a = theta_eval(ThetaKind::One, z + PI, &t).unwrap();
        let b = theta_eval(ThetaKind::One, z, &t).unwrap();
        assert!(rel(a, -b) < 1e-14);
    }

    #[test]
    fn matches_brute_force_in_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for tau in [
            C64::new(0.0, 1.0),
            C64::new(0.3, 0.8),
            C64::new(-0.4, 1.1),
            C64::new(0.1, 0.3),
        ] {
            let t = TauNome::new(tau).unwrap();
            for _ in 0..50 {
                let z = C64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.0..1.0));
                for kind in ThetaKind::ALL {
                    let got = theta_eval(kind, z, &t).unwrap();
                    let want = brute_series(kind, z, tau);
                    assert!(
                        rel(got, want) < 1e-12,
                        "{kind:?} {z} {tau}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn nullwerte_self_dual_point() {
        let n = theta_nullwerte(&tn(0.0, 1.0));
        assert!(rel(n.theta2, n.theta4) < 1e-13);
        assert!((n.theta3.re - 1.086_434_811_213_308).abs() < 1e-15);
    }

    #[test]
    fn jacobi_derivative_formula() {
        for tau in [
            C64::new(0.0, 1.0),
            C64::new(0.3, 0.8),
            C64::new(-0.45, 0.35),
        ] {
            let t = TauNome::new(tau).unwrap();
            let n = theta_nullwerte(&t);
            // Oracle: bilateral term-wise derivative, independent of the paired sum.
            let i = C64::i();
            let mut d = C64::zero();
            for k in -60i64..=60 {
                let x = k as f64 + 0.5;
                let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                d += (i * PI * tau * x * x).exp() * (2.0 * x) * i * sign;
            }
            let d = -i * d;
            assert!(rel(d, n.theta1_prime) < 1e-13);
            assert!(rel(n.theta1_prime, n.theta2 * n.theta3 * n.theta4) < 1e-12);
        }
    }

    #[test]
    fn reduce_argument_examples() {
        let t = tn(0.3, 0.8);
        let z = C64::new(0.2, 0.1);
        let (z0, m) = reduce_argument(ThetaKind::One, z + t.pi_tau(), &t).unwrap();
        assert!((z0 - z).norm() < 1e-14);
        assert_eq!(m.sign, gauss_int(-1, 0));
        assert_eq!((m.pitau, m.iz), (qi(-1), qi(-2)));

        let (z0, m) = reduce_argument(ThetaKind::Three, z + PI, &t).unwrap();
        assert!((z0 - z).norm() < 1e-14);
        assert_eq!(m, ExactMultiplier::identity());

        let (z0, m) = reduce_argument(ThetaKind::Four, z + 5.0 * PI, &t).unwrap();
        assert!((z0 - z).norm() < 1e-13);
        assert_eq!(m, ExactMultiplier::identity());
    }

    #[test]
    fn reduced_cell_bounds() {
        let t = tn(-0.4, 1.1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let z = C64::new(rng.gen_range(-30.0..30.0), rng.gen_range(-20.0..20.0));
            let (z0, _) = reduce_argument(ThetaKind::Two, z, &t).unwrap();
            assert!(z0.re.abs() <= PI / 2.0 + 1e-12);
            assert!(z0.im.abs() <= PI * 1.1 / 2.0 + 1e-12);
        }
    }

    #[test]
    fn reduction_round_trip_against_raw_series() {
        let t = tn(0.3, 0.8);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let z = C64::new(rng.gen_range(-7.0..7.0), rng.gen_range(-4.0..4.0));
            for kind in ThetaKind::ALL {
                let raw = theta_series(kind, z, &t);
                let (z0, m) = reduce_argument(kind, z, &t).unwrap();
                let via = m.value(z0, &t) * theta_series(kind, z0, &t);
                assert!(rel(raw, via) < 1e-10, "{kind:?} at {z}");
            }
        }
    }

    #[test]
    fn half_period_examples() {
        assert_eq!(
            half_period_rewrite(ThetaKind::One, HalfShift::Pi).0,
            ThetaKind::Two
        );
        let (k, m) = half_period_rewrite(ThetaKind::Three, HalfShift::Pi);
        assert_eq!((k, m), (ThetaKind::Four, ExactMultiplier::identity()));
        let (k, m) = half_period_rewrite(ThetaKind::Two, HalfShift::PiTau);
        assert_eq!(k, ThetaKind::Three);
        assert_eq!((m.sign, m.pitau, m.iz), (gauss_int(1, 0), q(-1, 4), qi(-1)));
    }

    #[test]
    fn half_period_table_numerically() {
        let t = tn(-0.4, 1.1);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let z = C64::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
            for kind in ThetaKind::ALL {
                for shift in [HalfShift::Pi, HalfShift::PiTau, HalfShift::Both] {
                    let (a, b) = shift.coefficients();
                    let h =
                        PI * crate::exact::q_to_f64(&a) + t.pi_tau() * crate::exact::q_to_f64(&b);
                    let (new, m) = half_period_rewrite(kind, shift);
                    let lhs = theta_series(kind, z + h, &t);
                    let rhs = m.value(z, &t) * theta_series(new, z, &t);
                    assert!(rel(lhs, rhs) < 1e-12, "{kind:?} {shift:?}");
                }
            }
        }
    }

    #[test]
    fn domain_checks() {
        assert!(TauNome::new(C64::new(0.0, 0.04)).is_err());
        assert!(TauNome::new(C64::new(0.0, -1.0)).is_err());
        assert!(!tn(0.0, 0.1).is_accurate());
        let t = tn(0.0, 1.0);
        assert!(matches!(
            theta_eval(ThetaKind::Three, C64::new(0.0, 400.0), &t),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn truncation_is_converged() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for tau in [C64::new(0.0, 0.3), C64::new(0.5, 0.3), C64::new(0.0, 1.0)] {
            let t = TauNome::new(tau).unwrap();
            for _ in 0..50 {
                let z = C64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-0.45..0.45));
                for kind in ThetaKind::ALL {
                    let a = theta_series(kind, z, &t);
                    let b = theta_series_with(kind, z, &t, 5);
                    assert!((a - b).norm() <= 1e-14 * b.norm().max(1e-300));
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn parity(re in -1.5f64..1.5, im in -1.0f64..1.0) {
            let t = tn(0.3, 0.8);
            let z = C64::new(re, im);
            for kind in ThetaKind::ALL {
                let a = theta_eval(kind, z, &t).unwrap();
                let b = theta_eval(kind, -z, &t).unwrap();
                let want = if kind.is_odd() { -a } else { a };
                proptest::prop_assert!((b - want).norm() <= 1e-12 * a.norm().max(1e-300) + 1e-300);
            }
        }
    }
}
