//! Sign-canonical forms and symbolic zero checks.
//!
//! The rewriting is deliberately small: period reduction (with half-period
//! rewrites for theta factors), parity, known zeros and unit values, and one
//! identity for squared auxiliary sigmas at half-periods. A `true` answer is
//! therefore always justified; a `false` one only means "not shown here".

use super::exponent::Exponent;
use super::expr::{Const, Expr, Factor, Func, Term};
use super::linform::{Atom, LinForm};
use super::shift::shift_rule;
use crate::error::Result;
use crate::exact::{qi, GaussQ, Q};
use crate::sigma::SigmaKind;
use crate::theta::ThetaKind;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
struct NormTerm {
    coeff: GaussQ,
    exp: Exponent,
    factors: Vec<Factor>,
}

enum Outcome {
    Zero,
    One,
    Keep(Factor),
}

/// Canonical representative of `ω_j` modulo the lattice: coefficients in `(-1, 1]`.
fn canonical_omega(j: u8) -> LinForm {
    match j {
        1 => LinForm::atom(Atom::Omega1),
        3 => LinForm::atom(Atom::Omega3),
        _ => LinForm::atom(Atom::Omega1) + LinForm::atom(Atom::Omega3),
    }
}

fn flip_if_negative(func: Func, arg: LinForm, coeff: &mut GaussQ) -> (LinForm, bool) {
    match arg.leading() {
        Some((_, c)) if c.is_negative() => {
            if func.is_odd() {
                *coeff = -*coeff;
            }
            (-arg, true)
        }
        _ => (arg, false),
    }
}

/// Moves the argument into the canonical cell, absorbing the multiplier.
fn reduce_periods(
    func: Func,
    arg: LinForm,
    coeff: &mut GaussQ,
    exp: &mut Exponent,
) -> Result<(Func, LinForm)> {
    let delta = match func {
        // residual coefficients in (-1, 1]
        Func::Sigma(_) => {
            let step = |c: Q| ((c - qi(1)) / qi(2)).ceil() * qi(2);
            LinForm::term(Atom::Omega1, step(arg.coeff(&Atom::Omega1)))
                + LinForm::term(Atom::Omega3, step(arg.coeff(&Atom::Omega3)))
        }
        // residual coefficients in (-1/4, 1/4]
        Func::Theta(_) => {
            let step = |c: Q| (c * qi(2) - Q::new(1, 2)).ceil() / qi(2);
            LinForm::term(Atom::Pi, step(arg.coeff(&Atom::Pi)))
                + LinForm::term(Atom::PiTau, step(arg.coeff(&Atom::PiTau)))
        }
    };
    if delta.is_zero() {
        return Ok((func, arg));
    }
    let base = arg - delta.clone();
    let (s, e, new_func) = shift_rule(func, &base, &delta, true)?;
    *coeff *= s;
    exp.add(&e);
    Ok((new_func, base))
}

fn normalize_factor(
    f: &Factor,
    reduce: bool,
    coeff: &mut GaussQ,
    exp: &mut Exponent,
) -> Result<Outcome> {
    let (mut func, mut arg) = match f {
        Factor::Const(Const::EDiff(k, l)) => {
            return Ok(match k.cmp(l) {
                std::cmp::Ordering::Equal => Outcome::Zero,
                std::cmp::Ordering::Less => Outcome::Keep(f.clone()),
                std::cmp::Ordering::Greater => {
                    *coeff = -*coeff;
                    Outcome::Keep(Factor::Const(Const::EDiff(*l, *k)))
                }
            })
        }
        Factor::Const(_) => return Ok(Outcome::Keep(f.clone())),
        Factor::Apply { func, arg } => (*func, arg.clone()),
    };
    if reduce {
        // Reduction and parity can undo each other only at the cell boundary;
        // a few rounds settle it.
        for _ in 0..4 {
            let (f2, a2) = reduce_periods(func, arg.clone(), coeff, exp)?;
            let (a3, flipped) = flip_if_negative(f2, a2, coeff);
            let settled = !flipped && f2 == func && a3 == arg;
            func = f2;
            arg = a3;
            if settled {
                break;
            }
        }
    } else {
        arg = flip_if_negative(func, arg, coeff).0;
    }

    let literal_zero = |func: Func, arg: &LinForm| -> bool {
        let half = Q::new(1, 2);
        match func {
            Func::Sigma(SigmaKind::Sigma) | Func::Theta(ThetaKind::One) => arg.is_zero(),
            Func::Sigma(k) => *arg == canonical_omega(k.index()),
            Func::Theta(ThetaKind::Two) => *arg == LinForm::term(Atom::Pi, half),
            Func::Theta(ThetaKind::Three) => {
                *arg == LinForm::term(Atom::Pi, half) + LinForm::term(Atom::PiTau, half)
            }
            Func::Theta(ThetaKind::Four) => *arg == LinForm::term(Atom::PiTau, half),
        }
    };
    if literal_zero(func, &arg) {
        return Ok(Outcome::Zero);
    }
    if reduce && arg.is_zero() {
        return Ok(match func {
            Func::Sigma(_) => Outcome::One,
            Func::Theta(k) => Outcome::Keep(Factor::Const(Const::Nullwert(k))),
        });
    }
    Ok(Outcome::Keep(Factor::apply(func, arg)))
}

/// `σ_l(ω_k)² = (e_k - e_l)·σ(ω_k)²`, applied to every pair it finds.
fn apply_wp_rule(coeff: &mut GaussQ, factors: &mut Vec<Factor>) {
    for k in 1..=3u8 {
        let w = canonical_omega(k);
        for l in [SigmaKind::Sigma1, SigmaKind::Sigma2, SigmaKind::Sigma3] {
            let target = Factor::apply(Func::Sigma(l), w.clone());
            loop {
                let hits: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| **f == target)
                    .map(|(i, _)| i)
                    .collect();
                if hits.len() < 2 {
                    break;
                }
                factors.remove(hits[1]);
                factors.remove(hits[0]);
                let (a, b) = (k, l.index());
                if a < b {
                    factors.push(Factor::Const(Const::EDiff(a, b)));
                } else {
                    *coeff = -*coeff;
                    factors.push(Factor::Const(Const::EDiff(b, a)));
                }
                let sigma = Factor::apply(Func::Sigma(SigmaKind::Sigma), w.clone());
                factors.push(sigma.clone());
                factors.push(sigma);
            }
        }
    }
}

fn canonical_terms(e: &Expr, reduce: bool) -> Result<Vec<NormTerm>> {
    let mut merged: BTreeMap<(Vec<Factor>, Exponent), GaussQ> = BTreeMap::new();
    let mut order: Vec<(Vec<Factor>, Exponent)> = Vec::new();
    'terms: for t in &e.terms {
        let mut coeff = t.coeff;
        let mut exp = Exponent::zero();
        let mut factors = Vec::with_capacity(t.factors.len());
        for f in &t.factors {
            match normalize_factor(f, reduce, &mut coeff, &mut exp)? {
                Outcome::Zero => continue 'terms,
                Outcome::One => {}
                Outcome::Keep(g) => factors.push(g),
            }
        }
        if reduce {
            apply_wp_rule(&mut coeff, &mut factors);
        }
        exp.normalize_into(&mut coeff);
        factors.sort();
        let key = (factors, exp);
        match merged.get_mut(&key) {
            Some(c) => *c += coeff,
            None => {
                merged.insert(key.clone(), coeff);
                order.push(key);
            }
        }
    }
    Ok(order
        .into_iter()
        .filter_map(|key| {
            let coeff = merged[&key];
            (!coeff.is_zero()).then_some(NormTerm {
                coeff,
                exp: key.1,
                factors: key.0,
            })
        })
        .collect())
}

/// Canonical signs for every argument (leading symbol positive), parity
/// signs hoisted into coefficients, literal zero factors removed and like
/// terms merged.
pub fn parity_normalize(e: &Expr) -> Expr {
    let terms = match canonical_terms(e, false) {
        Ok(ts) => ts
            .into_iter()
            .map(|t| Term::new(t.coeff, t.factors))
            .collect(),
        Err(_) => e.terms.clone(),
    };
    let mut out = Expr::new(terms, &e.variable);
    out.parameters = e.parameters.clone();
    out
}

/// Substitutes `binding` and decides whether the result cancels to zero by
/// the rewrite rules above. Never reports a zero that is not there.
pub fn check_zero_symbolic(e: &Expr, binding: &BTreeMap<String, LinForm>) -> bool {
    let mut sub = e.clone();
    for (name, form) in binding {
        sub = sub.substitute(name, form);
    }
    matches!(canonical_terms(&sub, true), Ok(ts) if ts.is_empty())
}
