//! Exact scalars: rationals and Gaussian rationals.

use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Write;

pub type Q = Ratio<i64>;
pub type GaussQ = Complex<Q>;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn gauss(re: Q, im: Q) -> GaussQ {
    Complex::new(re, im)
}

pub fn gauss_int(re: i64, im: i64) -> GaussQ {
    Complex::new(qi(re), qi(im))
}

pub fn gauss_one() -> GaussQ {
    GaussQ::one()
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn gauss_to_c64(z: &GaussQ) -> Complex64 {
    Complex64::new(q_to_f64(&z.re), q_to_f64(&z.im))
}

/// `i^k` for any integer `k`.
pub fn i_pow(k: i64) -> GaussQ {
    match k.mod_floor(&4) {
        0 => gauss_int(1, 0),
        1 => gauss_int(0, 1),
        2 => gauss_int(-1, 0),
        _ => gauss_int(0, -1),
    }
}

/// Splits `e^{iπc}` into a unit `i^k` and a residual coefficient in `[0, 1/2)`.
pub fn fold_ipi(c: Q) -> (GaussQ, Q) {
    let two = qi(2);
    let reduced = c - (c / two).floor() * two;
    let halves = (reduced * two).floor();
    let k = *halves.numer();
    (i_pow(k), reduced - halves / two)
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// `x` is an integer multiple of `1/2`.
pub fn is_half_integer(x: &Q) -> bool {
    (*x * qi(2)).is_integer()
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Gaussian rational in the DSL literal style: `2`, `-1/2`, `3i/4`, `(1/2-3i/4)`.
pub fn fmt_gauss(z: &GaussQ) -> String {
    if z.im.is_zero() {
        return fmt_q(&z.re);
    }
    if z.re.is_zero() {
        return fmt_imag(&z.im);
    }
    let mut s = String::from("(");
    s.push_str(&fmt_q(&z.re));
    if z.im.is_positive() {
        s.push('+');
    }
    s.push_str(&fmt_imag(&z.im));
    s.push(')');
    s
}

fn fmt_imag(y: &Q) -> String {
    let mut s = String::new();
    let num = *y.numer();
    if num == -1 {
        s.push('-');
    } else if num != 1 {
        let _ = write!(s, "{num}");
    }
    s.push('i');
    if *y.denom() != 1 {
        let _ = write!(s, "/{}", y.denom());
    }
    s
}

/// Exact value of a decimal literal such as `0.125` or `12`.
pub fn parse_decimal(text: &str) -> Option<Q> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    if frac_part.len() > 15 {
        return None;
    }
    let den = 10i64.checked_pow(frac_part.len() as u32)?;
    let digits = format!("{int_part}{frac_part}");
    let num: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().ok()?
    };
    Some(Q::new(num, den))
}

pub fn q_is_one(x: &Q) -> bool {
    x.is_one()
}
