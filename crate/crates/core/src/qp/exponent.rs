//! Exact exponents `Σ c·(coef·atom)` with `coef ∈ {η₁, η₃, i}` and the
//! multipliers `scalar·e^{αz+β}` built from them.

use super::linform::{Atom, LinForm};
use crate::error::{Error, Result};
use crate::exact::{fmt_gauss, fmt_q, fold_ipi, gauss_one, gauss_to_c64, q, q_to_f64, GaussQ, Q};
use num_complex::Complex64 as C64;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coef {
    Eta1,
    Eta3,
    I,
}

impl Coef {
    fn name(self) -> &'static str {
        match self {
            Coef::Eta1 => "eta1",
            Coef::Eta3 => "eta3",
            Coef::I => "i",
        }
    }
}

/// `η_j` as a combination of `η₁, η₃`.
pub fn eta_combo(j: u8) -> Vec<(Coef, Q)> {
    match j {
        1 => vec![(Coef::Eta1, Q::one())],
        3 => vec![(Coef::Eta3, Q::one())],
        2 => vec![(Coef::Eta1, -Q::one()), (Coef::Eta3, -Q::one())],
        _ => panic!("half-period index {j} out of range"),
    }
}

/// Numeric values needed to evaluate exponents.
pub trait ExponentScope {
    fn coef_value(&self, c: Coef) -> Result<C64>;
    fn atom_value(&self, a: &Atom) -> Result<C64>;
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(BTreeMap<(Coef, Atom), Q>);

impl Exponent {
    pub fn zero() -> Self {
        Exponent::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_monomial(&mut self, c: Coef, a: Atom, v: Q) {
        if v.is_zero() {
            return;
        }
        let key = (c, a);
        let entry = self.0.entry(key.clone()).or_insert_with(Q::zero);
        *entry += v;
        if entry.is_zero() {
            self.0.remove(&key);
        }
    }

    /// Adds `scale · coef · form`.
    pub fn add_product(&mut self, coef: Coef, scale: Q, form: &LinForm) {
        for (a, c) in form.iter() {
            self.add_monomial(coef, a.clone(), scale * *c);
        }
    }

    /// Adds `(Σ eta) · form`.
    pub fn add_eta_product(&mut self, eta: &[(Coef, Q)], form: &LinForm) {
        for (c, s) in eta {
            self.add_product(*c, *s, form);
        }
    }

    pub fn add(&mut self, other: &Exponent) {
        for ((c, a), v) in &other.0 {
            self.add_monomial(*c, a.clone(), *v);
        }
    }

    pub fn coeff(&self, c: Coef, a: &Atom) -> Q {
        self.0.get(&(c, a.clone())).copied().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Coef, Atom), &Q)> {
        self.0.iter()
    }

    /// Rewrites `η₁ω₃` through `η₁ω₃ = η₃ω₁ + iπ/2`.
    pub fn apply_legendre(&mut self) {
        let c = self.coeff(Coef::Eta1, &Atom::Omega3);
        if !c.is_zero() {
            self.add_monomial(Coef::Eta1, Atom::Omega3, -c);
            self.add_monomial(Coef::Eta3, Atom::Omega1, c);
            self.add_monomial(Coef::I, Atom::Pi, c / Q::from_integer(2));
        }
    }

    /// Legendre rewrite plus moving `iπ·k/2` into `scalar` as `i^k`.
    pub fn normalize_into(&mut self, scalar: &mut GaussQ) {
        self.apply_legendre();
        let c = self.coeff(Coef::I, &Atom::Pi);
        if !c.is_zero() {
            let (unit, rest) = fold_ipi(c);
            *scalar *= unit;
            self.add_monomial(Coef::I, Atom::Pi, rest - c);
        }
    }

    /// Substitutes a symbol inside every monomial.
    pub fn substitute(&self, name: &str, form: &LinForm) -> Exponent {
        let mut out = Exponent::zero();
        for ((c, a), v) in &self.0 {
            match a {
                Atom::Sym(s) if s == name => out.add_product(*c, *v, form),
                _ => out.add_monomial(*c, a.clone(), *v),
            }
        }
        out
    }

    pub fn eval(&self, scope: &dyn ExponentScope) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for ((c, a), v) in &self.0 {
            acc += scope.coef_value(*c)? * scope.atom_value(a)? * q_to_f64(v);
        }
        Ok(acc)
    }

    fn render(&self) -> String {
        let parts: Vec<(String, Q)> = self
            .0
            .iter()
            .map(|((c, a), v)| (format!("{}*{}", c.name(), a), *v))
            .collect();
        render_sum(parts)
    }
}

fn render_sum(parts: Vec<(String, Q)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (mono, v)) in parts.into_iter().enumerate() {
        let negative = v.is_negative();
        if k > 0 {
            out.push_str(if negative { " - " } else { " + " });
        } else if negative {
            out.push('-');
        }
        let v = v.abs();
        if !v.is_one() {
            out.push_str(&fmt_q(&v));
            out.push('*');
        }
        out.push_str(&mono);
    }
    out
}

/// `scalar · exp(α·z + β)`: `alpha` collects monomials in the distinguished
/// variable, `beta` the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplier {
    pub scalar: GaussQ,
    pub alpha: BTreeMap<Coef, Q>,
    pub beta: Exponent,
}

impl Multiplier {
    pub fn identity() -> Self {
        Multiplier {
            scalar: gauss_one(),
            alpha: BTreeMap::new(),
            beta: Exponent::zero(),
        }
    }

    /// Splits a full exponent into `α` and `β` with respect to `var`.
    pub fn from_parts(mut scalar: GaussQ, mut exponent: Exponent, var: &str) -> Self {
        exponent.normalize_into(&mut scalar);
        let key = Atom::sym(var);
        let mut alpha = BTreeMap::new();
        let mut beta = Exponent::zero();
        for ((c, a), v) in exponent.0 {
            if a == key {
                alpha.insert(c, v);
            } else {
                beta.add_monomial(c, a, v);
            }
        }
        Multiplier {
            scalar,
            alpha,
            beta,
        }
    }

    /// Product of two multipliers in the same variable.
    pub fn compose(&self, other: &Multiplier) -> Multiplier {
        let mut scalar = self.scalar * other.scalar;
        let mut alpha = self.alpha.clone();
        for (c, v) in &other.alpha {
            let e = alpha.entry(*c).or_insert_with(Q::zero);
            *e += *v;
        }
        alpha.retain(|_, v| !v.is_zero());
        let mut beta = self.beta.clone();
        beta.add(&other.beta);
        beta.normalize_into(&mut scalar);
        Multiplier {
            scalar,
            alpha,
            beta,
        }
    }

    pub fn alpha_coeff(&self, c: Coef) -> Q {
        self.alpha.get(&c).copied().unwrap_or_else(Q::zero)
    }

    pub fn alpha_string(&self) -> String {
        render_sum(
            self.alpha
                .iter()
                .map(|(c, v)| (c.name().to_string(), *v))
                .collect(),
        )
    }

    pub fn beta_string(&self) -> String {
        self.beta.render()
    }

    pub fn scalar_string(&self) -> String {
        fmt_gauss(&self.scalar)
    }

    /// Numeric `scalar·e^{αz+β}` at `z`.
    pub fn value(&self, z: C64, scope: &dyn ExponentScope) -> Result<C64> {
        let mut alpha = C64::new(0.0, 0.0);
        for (c, v) in &self.alpha {
            alpha += scope.coef_value(*c)? * q_to_f64(v);
        }
        let exponent = alpha * z + self.beta.eval(scope)?;
        Ok(gauss_to_c64(&self.scalar) * exponent.exp())
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} * exp(({})*z + {})",
            self.scalar_string(),
            self.alpha_string(),
            self.beta_string()
        )
    }
}

/// Exact zero count `(α₁λ₂ - α₂λ₁)/(2πi)`.
///
/// Generators must be ℚ-combinations of `ω₁, ω₃` or of `π, πτ`, positively
/// oriented. Anything but a multiple of `iπ` left after the Legendre
/// rewrite is reported as [`Error::IrreducibleMonomial`].
pub fn predicted_zero_count(
    m1: &Multiplier,
    m2: &Multiplier,
    l1: &LinForm,
    l2: &LinForm,
) -> Result<Q> {
    check_orientation(l1, l2)?;
    let mut p = Exponent::zero();
    for (c, v) in &m1.alpha {
        p.add_product(*c, *v, l2);
    }
    for (c, v) in &m2.alpha {
        p.add_product(*c, -*v, l1);
    }
    p.apply_legendre();
    let ipi = p.coeff(Coef::I, &Atom::Pi);
    p.add_monomial(Coef::I, Atom::Pi, -ipi);
    if !p.is_zero() {
        return Err(Error::IrreducibleMonomial(p.render()));
    }
    Ok(ipi * q(1, 2))
}

fn check_orientation(l1: &LinForm, l2: &LinForm) -> Result<()> {
    // (is sigma family, coordinates in the family's basis)
    let coords = |f: &LinForm| -> Option<(bool, Q, Q)> {
        if !f.only_periods() {
            return None;
        }
        let omega = (f.coeff(&Atom::Omega1), f.coeff(&Atom::Omega3));
        let theta = (f.coeff(&Atom::Pi), f.coeff(&Atom::PiTau));
        let omega_used = !omega.0.is_zero() || !omega.1.is_zero();
        let theta_used = !theta.0.is_zero() || !theta.1.is_zero();
        match (omega_used, theta_used) {
            (true, false) => Some((true, omega.0, omega.1)),
            (false, true) => Some((false, theta.0, theta.1)),
            _ => None,
        }
    };
    match (coords(l1), coords(l2)) {
        (Some((fa, a0, a1)), Some((fb, b0, b1))) if fa == fb => {
            if a0 * b1 - a1 * b0 > Q::zero() {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "generators {l1}, {l2} are not positively oriented"
                )))
            }
        }
        _ => Err(Error::Domain(format!(
            "generators {l1}, {l2} are not period combinations"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{gauss_int, qi};

    fn alpha(entries: &[(Coef, i64)]) -> Multiplier {
        let mut m = Multiplier::identity();
        for (c, v) in entries {
            m.alpha.insert(*c, qi(*v));
        }
        m
    }

    #[test]
    fn legendre_folds_to_sign() {
        let mut e = Exponent::zero();
        e.add_monomial(Coef::Eta1, Atom::Omega3, qi(-2));
        e.add_monomial(Coef::Eta3, Atom::Omega1, qi(2));
        let mut s = gauss_one();
        e.normalize_into(&mut s);
        assert!(e.is_zero());
        assert_eq!(s, gauss_int(-1, 0));
    }

    #[test]
    fn zero_counts() {
        let two = |a: Atom| LinForm::term(a, qi(2));
        let four = |a: Atom| LinForm::term(a, qi(4));
        let n = predicted_zero_count(
            &alpha(&[(Coef::Eta1, 4)]),
            &alpha(&[(Coef::Eta3, 4)]),
            &two(Atom::Omega1),
            &two(Atom::Omega3),
        )
        .unwrap();
        assert_eq!(n, qi(2));
        let n = predicted_zero_count(
            &alpha(&[(Coef::Eta1, 4)]),
            &alpha(&[(Coef::Eta3, 4)]),
            &four(Atom::Omega1),
            &four(Atom::Omega3),
        )
        .unwrap();
        assert_eq!(n, qi(4));
        let n = predicted_zero_count(
            &Multiplier::identity(),
            &alpha(&[(Coef::I, -2)]),
            &LinForm::atom(Atom::Pi),
            &LinForm::atom(Atom::PiTau),
        )
        .unwrap();
        assert_eq!(n, qi(1));
    }

    #[test]
    fn malformed_multipliers() {
        let r = predicted_zero_count(
            &alpha(&[(Coef::Eta1, 4)]),
            &alpha(&[(Coef::Eta1, 4)]),
            &LinForm::term(Atom::Omega1, qi(2)),
            &LinForm::term(Atom::Omega3, qi(2)),
        );
        assert!(matches!(r, Err(Error::IrreducibleMonomial(_))));
        let r = predicted_zero_count(
            &Multiplier::identity(),
            &Multiplier::identity(),
            &LinForm::term(Atom::Omega3, qi(2)),
            &LinForm::term(Atom::Omega1, qi(2)),
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn rendering() {
        let mut e = Exponent::zero();
        e.add_monomial(Coef::Eta1, Atom::Omega1, qi(4));
        e.add_monomial(Coef::I, Atom::PiTau, qi(-2));
        let m = Multiplier::from_parts(gauss_int(-1, 0), e, "a");
        assert_eq!(m.beta_string(), "4*eta1*w1 - 2*i*pitau");
        assert_eq!(m.alpha_string(), "0");
        assert_eq!(m.scalar_string(), "-1");
    }
}
