//! Exact ℚ-linear forms over parameter symbols and half-period atoms.

use crate::exact::{q_to_f64, Q};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Building block of an argument. The derived order puts symbols first
/// (lexicographically), which fixes the canonical sign of an argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Sym(String),
    Omega1,
    Omega3,
    Pi,
    PiTau,
}

impl Atom {
    pub fn sym(name: &str) -> Atom {
        Atom::Sym(name.to_string())
    }

    pub fn is_period(&self) -> bool {
        !matches!(self, Atom::Sym(_))
    }

    fn token(&self) -> &str {
        match self {
            Atom::Sym(s) => s,
            Atom::Omega1 => "w1",
            Atom::Omega3 => "w3",
            Atom::Pi => "pi",
            Atom::PiTau => "pitau",
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// `Σ cₐ·a` with every stored coefficient nonzero.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinForm(BTreeMap<Atom, Q>);

impl LinForm {
    pub fn zero() -> Self {
        LinForm::default()
    }

    pub fn atom(a: Atom) -> Self {
        Self::term(a, Q::one())
    }

    pub fn sym(name: &str) -> Self {
        Self::atom(Atom::sym(name))
    }

    pub fn term(a: Atom, c: Q) -> Self {
        let mut f = LinForm::zero();
        f.add_term(a, c);
        f
    }

    /// `ω₂ = -ω₁ - ω₃`.
    pub fn omega(j: u8) -> Self {
        match j {
            1 => Self::atom(Atom::Omega1),
            3 => Self::atom(Atom::Omega3),
            2 => Self::term(Atom::Omega1, -Q::one()) + Self::term(Atom::Omega3, -Q::one()),
            _ => panic!("half-period index {j} out of range"),
        }
    }

    pub fn add_term(&mut self, a: Atom, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(a.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&a);
        }
    }

    pub fn coeff(&self, a: &Atom) -> Q {
        self.0.get(a).copied().unwrap_or_else(Q::zero)
    }

    pub fn var_coeff(&self, var: &str) -> Q {
        self.coeff(&Atom::sym(var))
    }

    pub fn without(&self, a: &Atom) -> LinForm {
        let mut f = self.clone();
        f.0.remove(a);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &Q)> {
        self.0.iter()
    }

    pub fn scale(&self, c: Q) -> LinForm {
        if c.is_zero() {
            return LinForm::zero();
        }
        LinForm(self.0.iter().map(|(a, v)| (a.clone(), *v * c)).collect())
    }

    /// First atom in canonical order with its coefficient.
    pub fn leading(&self) -> Option<(&Atom, &Q)> {
        self.0.iter().next()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.0.keys().filter_map(|a| match a {
            Atom::Sym(s) => Some(s.as_str()),
            _ => None,
        })
    }

    pub fn only_periods(&self) -> bool {
        self.0.keys().all(Atom::is_period)
    }

    /// Replaces the symbol `name` by `form`.
    pub fn substitute(&self, name: &str, form: &LinForm) -> LinForm {
        let key = Atom::sym(name);
        match self.0.get(&key) {
            None => self.clone(),
            Some(&c) => self.without(&key) + form.scale(c),
        }
    }

    /// Numeric value given a resolver for each atom.
    pub fn eval<E>(
        &self,
        mut atom_value: impl FnMut(&Atom) -> Result<num_complex::Complex64, E>,
    ) -> Result<num_complex::Complex64, E> {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (a, c) in &self.0 {
            acc += atom_value(a)? * q_to_f64(c);
        }
        Ok(acc)
    }

    /// Renders with `first` (usually the distinguished variable) leading.
    pub fn display_with(&self, first: Option<&str>) -> String {
        let mut order: Vec<(&Atom, &Q)> = Vec::with_capacity(self.0.len());
        if let Some(name) = first {
            order.extend(
                self.0
                    .iter()
                    .filter(|(a, _)| matches!(a, Atom::Sym(s) if s == name)),
            );
        }
        order.extend(
            self.0
                .iter()
                .filter(|(a, _)| !matches!(a, Atom::Sym(s) if Some(s.as_str()) == first)),
        );
        if order.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (a, c)) in order.into_iter().enumerate() {
            let negative = c.is_negative();
            if k > 0 {
                out.push(if negative { '-' } else { '+' });
            } else if negative {
                out.push('-');
            }
            out.push_str(&scaled_token(a.token(), &c.abs()));
        }
        out
    }
}

/// `c·token` for positive `c`: `a`, `2*a`, `a/2`, `3*a/2`.
fn scaled_token(token: &str, c: &Q) -> String {
    let (n, d) = (*c.numer(), *c.denom());
    match (n, d) {
        (1, 1) => token.to_string(),
        (_, 1) => format!("{n}*{token}"),
        (1, _) => format!("{token}/{d}"),
        _ => format!("{n}*{token}/{d}"),
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(None))
    }
}

impl std::ops::Add for LinForm {
    type Output = LinForm;
    fn add(mut self, rhs: LinForm) -> LinForm {
        for (a, c) in rhs.0 {
            self.add_term(a, c);
        }
        self
    }
}

impl std::ops::Sub for LinForm {
    type Output = LinForm;
    fn sub(self, rhs: LinForm) -> LinForm {
        self + rhs.scale(-Q::one())
    }
}

impl std::ops::Neg for LinForm {
    type Output = LinForm;
    fn neg(self) -> LinForm {
        self.scale(-Q::one())
    }
}
