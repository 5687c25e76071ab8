//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*' power) | ('/' number))*
//! power  := atom ['^' integer]
//! atom   := number | number 'i' | 'i' | func '(' arg ')' | const | '(' scalar ')'
//! const  := theta1p0 | theta2_0 | theta3_0 | theta4_0 | ediff '(' k ',' l ')'
//! arg    := linear combination of symbols, w1, w2, w3, pi, pitau
//! ```

use super::expr::{Const, Expr, Factor, Func, Term};
use super::linform::{Atom, LinForm};
use crate::error::{Error, Result};
use crate::exact::{gauss, gauss_one, parse_decimal, q, GaussQ, Q};
use crate::theta::ThetaKind;
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub variable: String,
    /// When set, any other symbol is rejected.
    pub parameters: Option<Vec<String>>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            variable: "z".into(),
            parameters: None,
        }
    }
}

impl ParseOptions {
    pub fn with_variable(variable: &str) -> Self {
        ParseOptions {
            variable: variable.into(),
            parameters: None,
        }
    }
}

/// Parses with variable `z` and free parameters.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, &ParseOptions::default())
}

pub fn parse_with(text: &str, opts: &ParseOptions) -> Result<Expr> {
    let mut p = Parser::new(text, opts)?;
    let terms = p.expr()?;
    p.expect_end()?;
    let mut e = Expr::new(terms, &opts.variable);
    if let Some(declared) = &opts.parameters {
        let mut declared = declared.clone();
        declared.sort();
        declared.dedup();
        e.parameters = declared;
    }
    Ok(e)
}

/// Parses a bare linear form such as `b+pi/2+pitau/2` or `4*w1`.
pub fn parse_linform(text: &str, opts: &ParseOptions) -> Result<LinForm> {
    let mut p = Parser::new(text, opts)?;
    let form = p.arg()?;
    p.expect_end()?;
    Ok(form)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Imag(Q),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    opts: &'a ParseOptions,
}

const RESERVED: &[&str] = &[
    "sigma", "sigma1", "sigma2", "sigma3", "theta1", "theta2", "theta3", "theta4", "theta1p0",
    "theta2_0", "theta3_0", "theta4_0", "ediff", "i", "w1", "w2", "w3", "pi", "pitau",
];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        if c.is_ascii_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < bytes.len() && (bytes[k].is_ascii_digit() || bytes[k] == b'.') {
                k += 1;
            }
            let value = parse_decimal(&text[start..k]).ok_or_else(|| Error::Syntax {
                pos: start,
                msg: format!("bad number `{}`", &text[start..k]),
            })?;
            let ends_ident = |j: usize| {
                j >= bytes.len() || !(bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
            };
            if k < bytes.len() && bytes[k] == b'i' && ends_ident(k + 1) {
                k += 1;
                out.push((start, Tok::Imag(value)));
            } else {
                out.push((start, Tok::Num(value)));
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                k += 1;
            }
            out.push((start, Tok::Ident(text[start..k].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((k, Tok::Sym(c)));
            k += 1;
        } else {
            return Err(Error::Syntax {
                pos: k,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn new(text: &str, opts: &'a ParseOptions) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            len: text.len(),
            opts,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let mut t = self.term()?;
            if negate {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(terms);
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut term = self.power()?;
        loop {
            if self.eat('*') {
                term = term.product(&self.power()?);
            } else if self.eat('/') {
                let d = self.number()?;
                if d.is_zero() {
                    return self.err("division by zero");
                }
                term.coeff /= gauss(d, Q::zero());
            } else {
                return Ok(term);
            }
        }
    }

    fn number(&mut self) -> Result<Q> {
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn power(&mut self) -> Result<Term> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let n = self.number()?;
        if !n.is_integer() || *n.numer() < 1 || *n.numer() > 64 {
            return self.err("exponent must be an integer between 1 and 64");
        }
        let mut out = base.clone();
        for _ in 1..*n.numer() {
            out = out.product(&base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Term> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(scalar(gauss(v, Q::zero()))),
            Some(Tok::Imag(v)) => Ok(scalar(gauss(Q::zero(), v))),
            Some(Tok::Sym('(')) => {
                let c = self.scalar_expr()?;
                self.expect(')')?;
                Ok(scalar(c))
            }
            Some(Tok::Ident(name)) => self.ident_factor(&name, pos),
            _ => {
                self.pos -= 1;
                self.err("expected a factor")
            }
        }
    }

    fn ident_factor(&mut self, name: &str, pos: usize) -> Result<Term> {
        let constant = |c: Const| Ok(Term::new(gauss_one(), vec![Factor::Const(c)]));
        match name {
            "i" => return Ok(scalar(gauss(Q::zero(), Q::one()))),
            "theta1p0" => return constant(Const::Theta1Prime),
            "theta2_0" => return constant(Const::Nullwert(ThetaKind::Two)),
            "theta3_0" => return constant(Const::Nullwert(ThetaKind::Three)),
            "theta4_0" => return constant(Const::Nullwert(ThetaKind::Four)),
            "ediff" => {
                self.expect('(')?;
                let k = self.index()?;
                self.expect(',')?;
                let l = self.index()?;
                self.expect(')')?;
                return constant(Const::EDiff(k, l));
            }
            _ => {}
        }
        if self.peek() != Some(&Tok::Sym('(')) {
            return Err(Error::Syntax {
                pos,
                msg: format!("`{name}` is not a factor"),
            });
        }
        let func = Func::from_name(name).ok_or_else(|| Error::UnknownFunction {
            name: name.to_string(),
            pos,
        })?;
        self.expect('(')?;
        let arg_pos = self.here();
        let arg = self.arg()?;
        self.expect(')')?;
        self.check_arg(func, &arg, arg_pos)?;
        Ok(Term::new(gauss_one(), vec![Factor::apply(func, arg)]))
    }

    fn check_arg(&self, func: Func, arg: &LinForm, pos: usize) -> Result<()> {
        let eps = arg.var_coeff(&self.opts.variable);
        let allowed = [q(-1, 1), q(-1, 2), Q::zero(), q(1, 2), q(1, 1)];
        if !allowed.contains(&eps) {
            return Err(Error::Syntax {
                pos,
                msg: format!(
                    "coefficient {eps} of `{}` would dilate the period lattice",
                    self.opts.variable
                ),
            });
        }
        let foreign = arg.iter().any(|(a, _)| match func {
            Func::Sigma(_) => matches!(a, Atom::Pi | Atom::PiTau),
            Func::Theta(_) => matches!(a, Atom::Omega1 | Atom::Omega3),
        });
        if foreign {
            return Err(Error::FamilyMismatch(format!(
                "{}({}) uses half-periods of the other family",
                func.name(),
                arg
            )));
        }
        Ok(())
    }

    fn index(&mut self) -> Result<u8> {
        let n = self.number()?;
        if n.is_integer() && (1..=3).contains(n.numer()) {
            Ok(*n.numer() as u8)
        } else {
            self.err("index must be 1, 2 or 3")
        }
    }

    fn scalar_expr(&mut self) -> Result<GaussQ> {
        let mut negate = self.eat('-');
        if !negate {
            self.eat('+');
        }
        let mut acc = GaussQ::zero();
        loop {
            let t = self.scalar_term()?;
            acc = if negate { acc - t } else { acc + t };
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_term(&mut self) -> Result<GaussQ> {
        let mut acc = self.scalar_atom()?;
        loop {
            if self.eat('*') {
                acc *= self.scalar_atom()?;
            } else if self.eat('/') {
                let d = self.scalar_atom()?;
                if d.is_zero() {
                    return self.err("division by zero");
                }
                acc /= d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_atom(&mut self) -> Result<GaussQ> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(gauss(v, Q::zero())),
            Some(Tok::Imag(v)) => Ok(gauss(Q::zero(), v)),
            Some(Tok::Ident(name)) if name == "i" => Ok(gauss(Q::zero(), Q::one())),
            Some(Tok::Sym('(')) => {
                let v = self.scalar_expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Sym('-')) => Ok(-self.scalar_atom()?),
            _ => {
                self.pos -= 1;
                self.err("expected a constant")
            }
        }
    }

    /// Linear argument; internally carries a constant part that must vanish.
    fn arg(&mut self) -> Result<LinForm> {
        let pos = self.here();
        let (constant, form) = self.lin_sum()?;
        if !constant.is_zero() {
            return Err(Error::Syntax {
                pos,
                msg: "arguments cannot contain bare constants".into(),
            });
        }
        Ok(form)
    }

    fn lin_sum(&mut self) -> Result<(Q, LinForm)> {
        let mut negate = self.eat('-');
        if !negate {
            self.eat('+');
        }
        let mut acc = (Q::zero(), LinForm::zero());
        loop {
            let (c, f) = self.lin_term()?;
            if negate {
                acc = (acc.0 - c, acc.1 - f);
            } else {
                acc = (acc.0 + c, acc.1 + f);
            }
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn lin_term(&mut self) -> Result<(Q, LinForm)> {
        let mut acc = self.lin_atom()?;
        loop {
            if self.eat('*') {
                let rhs = self.lin_atom()?;
                acc = if acc.1.is_zero() {
                    (acc.0 * rhs.0, rhs.1.scale(acc.0))
                } else if rhs.1.is_zero() {
                    (acc.0 * rhs.0, acc.1.scale(rhs.0))
                } else {
                    return self.err("arguments must be linear");
                };
            } else if self.eat('/') {
                let d = self.number()?;
                if d.is_zero() {
                    return self.err("division by zero");
                }
                acc = (acc.0 / d, acc.1.scale(Q::one() / d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn lin_atom(&mut self) -> Result<(Q, LinForm)> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(v)) => Ok((v, LinForm::zero())),
            Some(Tok::Sym('(')) => {
                let v = self.lin_sum()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Sym('-')) => {
                let (c, f) = self.lin_atom()?;
                Ok((-c, -f))
            }
            Some(Tok::Ident(name)) => {
                let form = match name.as_str() {
                    "w1" => LinForm::omega(1),
                    "w2" => LinForm::omega(2),
                    "w3" => LinForm::omega(3),
                    "pi" => LinForm::atom(Atom::Pi),
                    "pitau" => LinForm::atom(Atom::PiTau),
                    _ if name == self.opts.variable => LinForm::sym(&name),
                    _ if RESERVED.contains(&name.as_str()) => {
                        return Err(Error::Syntax {
                            pos,
                            msg: format!("`{name}` cannot appear in an argument"),
                        })
                    }
                    _ => {
                        if let Some(declared) = &self.opts.parameters {
                            if !declared.contains(&name) {
                                return Err(Error::UndeclaredSymbol { name, pos });
                            }
                        }
                        LinForm::sym(&name)
                    }
                };
                Ok((Q::zero(), form))
            }
            _ => {
                self.pos -= 1;
                self.err("expected a symbol, half-period or number")
            }
        }
    }
}

fn scalar(c: GaussQ) -> Term {
    Term::new(c, Vec::new())
}
