//! Numeric evaluation of expressions and exponents.

use super::exponent::{Coef, ExponentScope};
use super::expr::{Const, Expr, Factor, Func};
use super::linform::{Atom, LinForm};
use crate::contour::Sample;
use crate::error::{Error, Result};
use crate::exact::gauss_to_c64;
use crate::lattice::{e_diff, Lattice};
use crate::sigma::sigma_eval;
use crate::theta::{theta_eval, TauNome};
use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Where numbers come from: a lattice serves both families, a bare nome
/// only theta expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalContext {
    Lattice(Lattice),
    Nome(TauNome),
}

impl EvalContext {
    pub fn tau_nome(&self) -> &TauNome {
        match self {
            EvalContext::Lattice(l) => l.tau_nome(),
            EvalContext::Nome(t) => t,
        }
    }

    pub fn lattice(&self) -> Result<&Lattice> {
        match self {
            EvalContext::Lattice(l) => Ok(l),
            EvalContext::Nome(_) => Err(Error::Domain(
                "sigma factors need a lattice, not just a nome".into(),
            )),
        }
    }
}

impl From<Lattice> for EvalContext {
    fn from(l: Lattice) -> Self {
        EvalContext::Lattice(l)
    }
}

impl From<TauNome> for EvalContext {
    fn from(t: TauNome) -> Self {
        EvalContext::Nome(t)
    }
}

pub type Bindings = BTreeMap<String, C64>;

/// Context plus symbol values, enough to evaluate any exponent or argument.
pub struct Scope<'a> {
    pub ctx: &'a EvalContext,
    pub bindings: &'a Bindings,
}

impl ExponentScope for Scope<'_> {
    fn coef_value(&self, c: Coef) -> Result<C64> {
        Ok(match c {
            Coef::Eta1 => self.ctx.lattice()?.eta1(),
            Coef::Eta3 => self.ctx.lattice()?.eta3(),
            Coef::I => C64::i(),
        })
    }

    fn atom_value(&self, a: &Atom) -> Result<C64> {
        Ok(match a {
            Atom::Sym(s) => *self
                .bindings
                .get(s)
                .ok_or_else(|| Error::Unbound(s.clone()))?,
            Atom::Omega1 => self.ctx.lattice()?.omega1(),
            Atom::Omega3 => self.ctx.lattice()?.omega3(),
            Atom::Pi => C64::new(PI, 0.0),
            Atom::PiTau => self.ctx.tau_nome().pi_tau(),
        })
    }
}

pub fn eval_factor(f: &Factor, scope: &Scope<'_>) -> Result<C64> {
    match f {
        Factor::Apply { func, arg } => {
            let x = arg.eval(|a| scope.atom_value(a))?;
            match func {
                Func::Sigma(k) => sigma_eval(*k, x, scope.ctx.lattice()?),
                Func::Theta(k) => theta_eval(*k, x, scope.ctx.tau_nome()),
            }
        }
        Factor::Const(Const::Nullwert(k)) => Ok(scope.nullwerte().get(*k)),
        Factor::Const(Const::Theta1Prime) => Ok(scope.nullwerte().theta1_prime),
        Factor::Const(Const::EDiff(k, l)) => Ok(e_diff(scope.ctx.lattice()?, *k, *l)?.value),
    }
}

impl Scope<'_> {
    fn nullwerte(&self) -> crate::theta::Nullwerte {
        match self.ctx {
            EvalContext::Lattice(l) => *l.nullwerte(),
            EvalContext::Nome(t) => crate::theta::theta_nullwerte(t),
        }
    }
}

/// Value of every term, in order.
pub fn eval_terms(e: &Expr, bindings: &Bindings, ctx: &EvalContext) -> Result<Vec<C64>> {
    let scope = Scope { ctx, bindings };
    e.terms
        .iter()
        .enumerate()
        .map(|(ti, t)| {
            let mut v = gauss_to_c64(&t.coeff);
            for (fi, f) in t.factors.iter().enumerate() {
                v *= eval_factor(f, &scope).map_err(|source| Error::Eval {
                    term: ti,
                    factor: fi,
                    source: Box::new(source),
                })?;
            }
            Ok(v)
        })
        .collect()
}

/// Sum of the terms together with the largest term magnitude.
pub fn eval_expr(e: &Expr, bindings: &Bindings, ctx: &EvalContext) -> Result<Sample> {
    let values = eval_terms(e, bindings, ctx)?;
    let value = values.iter().sum();
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(Sample { value, scale })
}

/// Numeric value of a linear form such as a generator `2*w1` or a
/// candidate `b+pi/2`.
pub fn eval_linform(form: &LinForm, bindings: &Bindings, ctx: &EvalContext) -> Result<C64> {
    let scope = Scope { ctx, bindings };
    form.eval(|a| scope.atom_value(a))
}

/// An expression as a function of its variable, every other symbol fixed.
#[derive(Debug, Clone)]
pub struct BoundExpr {
    pub expr: Expr,
    pub bindings: Bindings,
    pub ctx: EvalContext,
}

impl BoundExpr {
    pub fn new(expr: Expr, bindings: Bindings, ctx: EvalContext) -> Self {
        BoundExpr {
            expr,
            bindings,
            ctx,
        }
    }
}

impl crate::contour::Evaluable for BoundExpr {
    fn sample(&self, z: C64) -> Result<Sample> {
        let mut b = self.bindings.clone();
        b.insert(self.expr.variable.clone(), z);
        eval_expr(&self.expr, &b, &self.ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_new;
    use crate::qp::parse::{parse, parse_with, ParseOptions};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square() -> EvalContext {
        lattice_new(C64::new(PI / 2.0, 0.0), C64::new(0.0, PI / 2.0))
            .unwrap()
            .into()
    }

    #[test]
    fn sigma_at_origin() {
        let e = parse("sigma(z)").unwrap();
        let b = Bindings::from([("z".to_string(), C64::new(0.0, 0.0))]);
        assert_eq!(
            eval_expr(&e, &b, &square()).unwrap().value,
            C64::new(0.0, 0.0)
        );
    }

    #[test]
    fn three_term_vanishes() {
        let e = parse("sigma(z+a)*sigma(z-a)*sigma(b+c)*sigma(b-c) + sigma(z+b)*sigma(z-b)*sigma(c+a)*sigma(c-a) + sigma(z+c)*sigma(z-c)*sigma(a+b)*sigma(a-b)").unwrap();
        let ctx = square();
        let lat = *ctx.lattice().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut b = Bindings::new();
            for s in ["z", "a", "b", "c"] {
                let z = rng.gen_range(0.05..0.95) * 2.0 * lat.omega1()
                    + rng.gen_range(0.05..0.95) * 2.0 * lat.omega3();
                b.insert(s.into(), z);
            }
            let s = eval_expr(&e, &b, &ctx).unwrap();
            assert!(s.value.norm() / s.scale < 1e-10);
        }
    }

    #[test]
    fn jacobi_addition_vanishes() {
        let opts = ParseOptions::with_variable("a");
        let e = parse_with(
            "theta3(a+b)*theta3(a-b)*theta3_0^2 - theta3(a)^2*theta3(b)^2 - theta1(a)^2*theta1(b)^2",
            &opts,
        )
        .unwrap();
        let ctx = EvalContext::Nome(TauNome::new(C64::new(0.0, 1.0)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut b = Bindings::new();
            for s in ["a", "b"] {
                b.insert(
                    s.into(),
                    C64::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..PI)),
                );
            }
            let s = eval_expr(&e, &b, &ctx).unwrap();
            assert!(s.value.norm() / s.scale < 1e-10);
        }
    }

    #[test]
    fn errors_carry_location() {
        let e = parse("theta1(z) + sigma(z)").unwrap();
        let ctx = EvalContext::Nome(TauNome::new(C64::new(0.0, 1.0)).unwrap());
        let b = Bindings::from([("z".to_string(), C64::new(0.1, 0.0))]);
        match eval_expr(&e, &b, &ctx) {
            Err(Error::Eval {
                term: 1, factor: 0, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        let e = parse("sigma(z+a)").unwrap();
        assert!(matches!(
            eval_expr(&e, &b, &square()),
            Err(Error::Eval { source, .. }) if *source == Error::Unbound("a".into())
        ));
    }
}
