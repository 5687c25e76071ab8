//! Expression tree: sums of products of sigma/theta factors.

use super::linform::{Atom, LinForm};
use crate::error::{Error, Result};
use crate::exact::{fmt_gauss, gauss_one, GaussQ};
use crate::sigma::SigmaKind;
use crate::theta::ThetaKind;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Sigma,
    Theta,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Sigma => "sigma",
            Family::Theta => "theta",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sigma(SigmaKind),
    Theta(ThetaKind),
}

impl Func {
    pub fn family(self) -> Family {
        match self {
            Func::Sigma(_) => Family::Sigma,
            Func::Theta(_) => Family::Theta,
        }
    }

    pub fn is_odd(self) -> bool {
        match self {
            Func::Sigma(k) => k.is_odd(),
            Func::Theta(k) => k.is_odd(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sigma(SigmaKind::Sigma) => "sigma",
            Func::Sigma(SigmaKind::Sigma1) => "sigma1",
            Func::Sigma(SigmaKind::Sigma2) => "sigma2",
            Func::Sigma(SigmaKind::Sigma3) => "sigma3",
            Func::Theta(ThetaKind::One) => "theta1",
            Func::Theta(ThetaKind::Two) => "theta2",
            Func::Theta(ThetaKind::Three) => "theta3",
            Func::Theta(ThetaKind::Four) => "theta4",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sigma" => Func::Sigma(SigmaKind::Sigma),
            "sigma1" => Func::Sigma(SigmaKind::Sigma1),
            "sigma2" => Func::Sigma(SigmaKind::Sigma2),
            "sigma3" => Func::Sigma(SigmaKind::Sigma3),
            "theta1" => Func::Theta(ThetaKind::One),
            "theta2" => Func::Theta(ThetaKind::Two),
            "theta3" => Func::Theta(ThetaKind::Three),
            "theta4" => Func::Theta(ThetaKind::Four),
            _ => return None,
        })
    }
}

/// Argument-free factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Const {
    /// `ϑ_j(0)` for `j ∈ {2,3,4}`.
    Nullwert(ThetaKind),
    /// `ϑ₁′(0)`.
    Theta1Prime,
    /// `e_k - e_l`.
    EDiff(u8, u8),
}

impl Const {
    pub fn family(self) -> Family {
        match self {
            Const::EDiff(..) => Family::Sigma,
            _ => Family::Theta,
        }
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Nullwert(k) => write!(f, "theta{}_0", k.index()),
            Const::Theta1Prime => f.write_str("theta1p0"),
            Const::EDiff(k, l) => write!(f, "ediff({k},{l})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Apply { func: Func, arg: LinForm },
    Const(Const),
}

impl Factor {
    pub fn apply(func: Func, arg: LinForm) -> Factor {
        Factor::Apply { func, arg }
    }

    pub fn family(&self) -> Family {
        match self {
            Factor::Apply { func, .. } => func.family(),
            Factor::Const(c) => c.family(),
        }
    }

    /// Coefficient of `var` in the argument (0 for constants).
    pub fn eps(&self, var: &str) -> num_rational::Ratio<i64> {
        match self {
            Factor::Apply { arg, .. } => arg.var_coeff(var),
            Factor::Const(_) => Zero::zero(),
        }
    }

    /// The argument with the `var` part removed.
    pub fn shift(&self, var: &str) -> LinForm {
        match self {
            Factor::Apply { arg, .. } => arg.without(&Atom::sym(var)),
            Factor::Const(_) => LinForm::zero(),
        }
    }

    pub fn display_with(&self, var: Option<&str>) -> String {
        match self {
            Factor::Apply { func, arg } => format!("{}({})", func.name(), arg.display_with(var)),
            Factor::Const(c) => c.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: GaussQ,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(coeff: GaussQ, factors: Vec<Factor>) -> Term {
        Term { coeff, factors }
    }

    pub fn product(&self, other: &Term) -> Term {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Term {
            coeff: self.coeff * other.coeff,
            factors,
        }
    }

    pub fn sorted_factors(&self) -> Vec<Factor> {
        let mut f = self.factors.clone();
        f.sort();
        f
    }

    fn display_with(&self, var: Option<&str>) -> (bool, String) {
        let c = self.coeff;
        let negative =
            (c.im.is_zero() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative());
        let magnitude = if negative { -c } else { c };
        let mut parts = Vec::new();
        if !magnitude.is_one() || self.factors.is_empty() {
            parts.push(fmt_gauss(&magnitude));
        }
        parts.extend(self.factors.iter().map(|f| f.display_with(var)));
        (negative, parts.join("*"))
    }
}

/// A sum of terms in one distinguished variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
    pub variable: String,
    pub parameters: Vec<String>,
}

impl Expr {
    pub fn new(terms: Vec<Term>, variable: &str) -> Expr {
        let mut e = Expr {
            terms,
            variable: variable.to_string(),
            parameters: Vec::new(),
        };
        e.parameters = e.collect_parameters();
        e
    }

    pub fn zero(variable: &str) -> Expr {
        Expr::new(Vec::new(), variable)
    }

    /// Symbols other than the variable, sorted.
    pub fn collect_parameters(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .terms
            .iter()
            .flat_map(|t| t.factors.iter())
            .filter_map(|f| match f {
                Factor::Apply { arg, .. } => {
                    Some(arg.symbols().map(str::to_string).collect::<Vec<_>>())
                }
                Factor::Const(_) => None,
            })
            .flatten()
            .filter(|s| *s != self.variable)
            .collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Single family shared by every factor; `None` for constant-only input.
    pub fn family(&self) -> Result<Option<Family>> {
        let mut found: Option<Family> = None;
        for f in self.terms.iter().flat_map(|t| t.factors.iter()) {
            let fam = f.family();
            match found {
                Some(prev) if prev != fam => {
                    return Err(Error::FamilyMismatch(format!(
                        "expression mixes {prev} and {fam} factors"
                    )))
                }
                _ => found = Some(fam),
            }
        }
        Ok(found)
    }

    /// Same expression with term `k` negated.
    pub fn with_flipped_sign(&self, k: usize) -> Expr {
        let mut e = self.clone();
        e.terms[k].coeff = -e.terms[k].coeff;
        e
    }

    /// Substitutes `name ↦ form` in every argument.
    pub fn substitute(&self, name: &str, form: &LinForm) -> Expr {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff,
                factors: t
                    .factors
                    .iter()
                    .map(|f| match f {
                        Factor::Apply { func, arg } => {
                            Factor::apply(*func, arg.substitute(name, form))
                        }
                        c => c.clone(),
                    })
                    .collect(),
            })
            .collect();
        let mut e = Expr {
            terms,
            variable: self.variable.clone(),
            parameters: Vec::new(),
        };
        e.parameters = e.collect_parameters();
        e
    }

    pub fn one(variable: &str) -> Expr {
        Expr::new(vec![Term::new(gauss_one(), Vec::new())], variable)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let (negative, body) = t.display_with(Some(&self.variable));
            match (k, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}
