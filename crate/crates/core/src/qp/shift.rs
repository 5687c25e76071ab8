//! Exact behaviour of factors, terms and expressions under period shifts.

use super::exponent::{eta_combo, Coef, Exponent, Multiplier};
use super::expr::{Expr, Factor, Family, Func, Term};
use super::linform::{Atom, LinForm};
use crate::error::{Error, Result};
use crate::exact::{gauss_int, gauss_one, qi, GaussQ, Q};
use crate::sigma::SigmaKind;
use crate::theta::{half_period_rewrite, lattice_shift_multiplier, HalfShift, ThetaKind};
use num_traits::Zero;

/// `func(base + delta) = scalar · e^{exp} · new_func(base)`.
///
/// Sigma functions accept only full periods `2nω₁ + 2mω₃`. Theta functions
/// accept full periods `jπ + kπτ` and, when `allow_half` is set, half periods,
/// which change the theta index.
pub fn shift_rule(
    func: Func,
    base: &LinForm,
    delta: &LinForm,
    allow_half: bool,
) -> Result<(GaussQ, Exponent, Func)> {
    if !delta.only_periods() {
        return Err(Error::NonPeriodShift(format!(
            "shift {delta} involves symbols"
        )));
    }
    match func {
        Func::Sigma(kind) => sigma_shift(kind, base, delta).map(|(s, e)| (s, e, func)),
        Func::Theta(kind) => theta_shift(kind, base, delta, allow_half),
    }
}

fn sigma_shift(kind: SigmaKind, base: &LinForm, delta: &LinForm) -> Result<(GaussQ, Exponent)> {
    if !delta.coeff(&Atom::Pi).is_zero() || !delta.coeff(&Atom::PiTau).is_zero() {
        return Err(Error::FamilyMismatch(format!(
            "sigma factor shifted by {delta}"
        )));
    }
    let half = |c: Q| -> Result<i64> {
        let h = c / qi(2);
        if h.is_integer() {
            Ok(*h.numer())
        } else {
            Err(Error::NonPeriodShift(format!(
                "{delta} is not a period of {}",
                Func::Sigma(kind).name()
            )))
        }
    };
    let n = half(delta.coeff(&Atom::Omega1))?;
    let m = half(delta.coeff(&Atom::Omega3))?;
    // σ(u+L) = (-1)^{n+m+nm} e^{η(L)(u+L/2)} σ(u), η(L) = 2nη₁ + 2mη₃.
    let eta_l = [(Coef::Eta1, qi(2 * n)), (Coef::Eta3, qi(2 * m))];
    let mut exp = Exponent::zero();
    exp.add_eta_product(&eta_l, &(base.clone() + delta.scale(Q::new(1, 2))));
    if kind != SigmaKind::Sigma {
        // σ_j picks up -η_j·L + η(L)·ω_j on top.
        let j = kind.index();
        let minus_eta_j: Vec<(Coef, Q)> = eta_combo(j).into_iter().map(|(c, v)| (c, -v)).collect();
        exp.add_eta_product(&minus_eta_j, delta);
        exp.add_eta_product(&eta_l, &LinForm::omega(j));
    }
    let sign = if (n + m + n * m).rem_euclid(2) == 0 {
        1
    } else {
        -1
    };
    let mut scalar = gauss_int(sign, 0);
    exp.normalize_into(&mut scalar);
    Ok((scalar, exp))
}

fn theta_shift(
    kind: ThetaKind,
    base: &LinForm,
    delta: &LinForm,
    allow_half: bool,
) -> Result<(GaussQ, Exponent, Func)> {
    if !delta.coeff(&Atom::Omega1).is_zero() || !delta.coeff(&Atom::Omega3).is_zero() {
        return Err(Error::FamilyMismatch(format!(
            "theta factor shifted by {delta}"
        )));
    }
    let x = delta.coeff(&Atom::Pi);
    let y = delta.coeff(&Atom::PiTau);
    let (j, hx) = (x.floor(), x - x.floor());
    let (k, hy) = (y.floor(), y - y.floor());
    let half = Q::new(1, 2);
    let ok = |h: Q| h.is_zero() || (allow_half && h == half);
    if !ok(hx) || !ok(hy) {
        return Err(Error::NonPeriodShift(format!(
            "{delta} is not a{} period of {}",
            if allow_half { " half" } else { " full" },
            Func::Theta(kind).name()
        )));
    }
    let (j, k) = (*j.numer(), *k.numer());
    let h = LinForm::term(Atom::Pi, hx) + LinForm::term(Atom::PiTau, hy);
    let v = base.clone() + h;

    // Full lattice step at v = base + h.
    let m = lattice_shift_multiplier(kind, j, k);
    let mut scalar = m.sign;
    let mut exp = Exponent::zero();
    exp.add_monomial(Coef::I, Atom::Pi, m.c0);
    exp.add_monomial(Coef::I, Atom::PiTau, m.pitau);
    exp.add_product(Coef::I, m.iz, &v);

    // Half step from base + h back to base.
    let mut new_kind = kind;
    if let Some(shift) = HalfShift::from_halves(!hx.is_zero(), !hy.is_zero()) {
        let (to, r) = half_period_rewrite(kind, shift);
        new_kind = to;
        scalar *= r.sign;
        exp.add_monomial(Coef::I, Atom::Pi, r.c0);
        exp.add_monomial(Coef::I, Atom::PiTau, r.pitau);
        exp.add_product(Coef::I, r.iz, base);
    }
    exp.normalize_into(&mut scalar);
    Ok((scalar, exp, Func::Theta(new_kind)))
}

/// Shifted term `t(var + gen)` as `scalar · e^{exp} · Π new_factors`.
pub fn shift_term(
    t: &Term,
    var: &str,
    gen: &LinForm,
    allow_half: bool,
) -> Result<(GaussQ, Exponent, Vec<Factor>)> {
    let mut scalar = gauss_one();
    let mut exp = Exponent::zero();
    let mut factors = Vec::with_capacity(t.factors.len());
    for f in &t.factors {
        match f {
            Factor::Apply { func, arg } => {
                let eps = arg.var_coeff(var);
                if eps.is_zero() {
                    factors.push(f.clone());
                    continue;
                }
                let (s, e, new_func) = shift_rule(*func, arg, &gen.scale(eps), allow_half)?;
                scalar *= s;
                exp.add(&e);
                factors.push(Factor::apply(new_func, arg.clone()));
            }
            Factor::Const(_) => factors.push(f.clone()),
        }
    }
    exp.normalize_into(&mut scalar);
    Ok((scalar, exp, factors))
}

/// Multiplier of a single term under `var ↦ var + gen`. Only full periods of
/// every factor are accepted.
pub fn term_multiplier(t: &Term, var: &str, gen: &LinForm) -> Result<Multiplier> {
    let (scalar, exp, _) = shift_term(t, var, gen, false)?;
    Ok(Multiplier::from_parts(scalar, exp, var))
}

fn check_generator(family: Option<Family>, gen: &LinForm) -> Result<()> {
    if gen.is_zero() || !gen.only_periods() {
        return Err(Error::Domain(format!(
            "generator {gen} is not a period combination"
        )));
    }
    let sigma_atoms = gen
        .iter()
        .all(|(a, _)| matches!(a, Atom::Omega1 | Atom::Omega3));
    let theta_atoms = gen.iter().all(|(a, _)| matches!(a, Atom::Pi | Atom::PiTau));
    match family {
        Some(Family::Sigma) if !sigma_atoms => Err(Error::FamilyMismatch(format!(
            "sigma expression with generator {gen}"
        ))),
        Some(Family::Theta) if !theta_atoms => Err(Error::FamilyMismatch(format!(
            "theta expression with generator {gen}"
        ))),
        _ => Ok(()),
    }
}

/// Like terms merged (first occurrence keeps its place), zero sums dropped.
/// Each entry remembers the original index of its first term.
fn merged_terms(e: &Expr) -> Vec<(usize, GaussQ, Vec<Factor>)> {
    let mut out: Vec<(usize, GaussQ, Vec<Factor>)> = Vec::new();
    for (i, t) in e.terms.iter().enumerate() {
        let key = t.sorted_factors();
        match out.iter_mut().find(|(_, _, k)| *k == key) {
            Some(entry) => entry.1 += t.coeff,
            None => out.push((i, t.coeff, key)),
        }
    }
    out.retain(|(_, c, _)| !c.is_zero());
    out
}

/// Common multiplier of the whole expression under `var ↦ var + gen`.
///
/// Terms may be permuted by the shift (half-period rewrites turn one theta
/// index into another); the induced map on terms must be a bijection and
/// every term must carry the same multiplier after dividing out the
/// coefficient of its image.
pub fn expr_multiplier(e: &Expr, var: &str, gen: &LinForm) -> Result<Multiplier> {
    check_generator(e.family()?, gen)?;
    let terms = merged_terms(e);
    let mut image = Vec::with_capacity(terms.len());
    let mut multipliers: Vec<(GaussQ, Exponent)> = Vec::with_capacity(terms.len());
    for (orig, coeff, factors) in &terms {
        let t = Term::new(*coeff, factors.clone());
        let (scalar, exp, mut shifted) = shift_term(&t, var, gen, true)?;
        shifted.sort();
        let Some(j) = terms.iter().position(|(_, _, k)| *k == shifted) else {
            return Err(Error::MultiplierMismatch {
                terms: vec![*orig],
                detail: format!("shifted term {orig} matches no term of the expression"),
            });
        };
        image.push(j);
        multipliers.push((*coeff * scalar / terms[j].1, exp));
    }
    let mut seen = vec![false; terms.len()];
    for &j in &image {
        if std::mem::replace(&mut seen[j], true) {
            let hits: Vec<usize> = image
                .iter()
                .enumerate()
                .filter(|(_, &k)| k == j)
                .map(|(i, _)| terms[i].0)
                .collect();
            return Err(Error::MultiplierMismatch {
                terms: hits,
                detail: format!("terms collide on term {} after the shift", terms[j].0),
            });
        }
    }
    let Some(first) = multipliers.first().cloned() else {
        return Ok(Multiplier::identity());
    };
    // Report the terms that disagree with the most common multiplier.
    let majority = multipliers
        .iter()
        .max_by_key(|m| multipliers.iter().filter(|o| o == m).count())
        .cloned()
        .unwrap_or(first);
    let odd: Vec<usize> = multipliers
        .iter()
        .enumerate()
        .filter(|(_, m)| **m != majority)
        .map(|(i, _)| terms[i].0)
        .collect();
    if !odd.is_empty() {
        return Err(Error::MultiplierMismatch {
            terms: odd,
            detail: format!("terms do not share one multiplier under {gen}"),
        });
    }
    Ok(Multiplier::from_parts(majority.0, majority.1, var))
}
