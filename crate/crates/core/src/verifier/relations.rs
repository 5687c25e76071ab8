//! Closed-form relations checked by direct numeric evaluation.
//!
//! These entries are not single expressions in one variable, so they bypass
//! multiplier inference. Each relation is a signed sum of terms that should
//! cancel at every sample point. Theta terms use the raw series so that the
//! argument-reduction rules under test are not used to check themselves.

use crate::error::{Error, Result};
use crate::qp::EvalContext;
use crate::sigma::{eta_from_product, sigma_eval, SigmaKind};
use crate::theta::{theta_series, ThetaKind};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type TermFn = Arc<dyn Fn(&EvalContext, C64) -> Result<C64> + Send + Sync>;

#[derive(Clone)]
pub struct RelationTerm {
    pub sign: f64,
    pub eval: TermFn,
}

/// `Σ sign·term(z) = 0` for every sample `z`.
#[derive(Clone)]
pub struct Relation {
    pub label: String,
    pub terms: Vec<RelationTerm>,
    /// Overrides the family tolerance when set.
    pub tolerance: Option<f64>,
    /// Constant relations are evaluated once instead of per sample.
    pub sampled: bool,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signs: Vec<f64> = self.terms.iter().map(|t| t.sign).collect();
        f.debug_struct("Relation")
            .field("label", &self.label)
            .field("signs", &signs)
            .field("tolerance", &self.tolerance)
            .field("sampled", &self.sampled)
            .finish()
    }
}

impl Relation {
    fn new(label: impl Into<String>, terms: Vec<(f64, TermFn)>) -> Self {
        Relation {
            label: label.into(),
            terms: terms
                .into_iter()
                .map(|(sign, eval)| RelationTerm { sign, eval })
                .collect(),
            tolerance: None,
            sampled: true,
        }
    }

    /// Relative residual `|Σ|/max|term|` at `z`.
    pub fn residual(&self, ctx: &EvalContext, z: C64) -> Result<f64> {
        let mut sum = C64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for t in &self.terms {
            let v = t.sign * (t.eval)(ctx, z)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Degenerate(format!(
                    "{}: non-finite term",
                    self.label
                )));
            }
            sum += v;
            scale = scale.max(v.norm());
        }
        Ok(if scale == 0.0 {
            0.0
        } else {
            sum.norm() / scale
        })
    }

    pub fn with_flipped_sign(&self, k: usize) -> Relation {
        let mut r = self.clone();
        if let Some(t) = r.terms.get_mut(k) {
            t.sign = -t.sign;
        }
        r
    }
}

fn term(f: impl Fn(&EvalContext, C64) -> Result<C64> + Send + Sync + 'static) -> TermFn {
    Arc::new(f)
}

fn quarter_nome(ctx: &EvalContext) -> C64 {
    (C64::i() * ctx.tau_nome().pi_tau() / 4.0).exp()
}

/// The eight sign-and-exponent rules for shifts by `π` and `πτ`.
pub fn shift_relations() -> Vec<Relation> {
    let mut out = Vec::with_capacity(8);
    for kind in ThetaKind::ALL {
        let j = kind.index();
        let s_pi = kind.pi_sign() as f64;
        out.push(Relation::new(
            format!("theta{j}(z+pi) = {s_pi:+}*theta{j}(z)"),
            vec![
                (
                    1.0,
                    term(move |c, z| Ok(theta_series(kind, z + PI, c.tau_nome()))),
                ),
                (
                    -s_pi,
                    term(move |c, z| Ok(theta_series(kind, z, c.tau_nome()))),
                ),
            ],
        ));
        let s_tau = kind.pitau_sign() as f64;
        out.push(Relation::new(
            format!("theta{j}(z+pitau) = {s_tau:+}*exp(-2iz-i*pitau)*theta{j}(z)"),
            vec![
                (
                    1.0,
                    term(move |c, z| {
                        Ok(theta_series(kind, z + c.tau_nome().pi_tau(), c.tau_nome()))
                    }),
                ),
                (
                    -s_tau,
                    term(move |c, z| {
                        let tn = c.tau_nome();
                        let m = (-C64::i() * (2.0 * z + tn.pi_tau())).exp();
                        Ok(m * theta_series(kind, z, tn))
                    }),
                ),
            ],
        ));
    }
    out
}

/// `theta_from(z) = unit · [q^{1/4} e^{iz}]^{with_exp} · theta_to(z + shift)`,
/// with the shift given in halves of `π` and `πτ`.
fn half_period_relation(
    from: ThetaKind,
    to: ThetaKind,
    unit: C64,
    with_exp: bool,
    half_pi: bool,
    half_pitau: bool,
) -> Relation {
    let shift_text = match (half_pi, half_pitau) {
        (true, true) => "z+pi/2+pitau/2",
        (true, false) => "z+pi/2",
        (false, true) => "z+pitau/2",
        (false, false) => "z",
    };
    let prefix = if with_exp { "*q^(1/4)*exp(iz)" } else { "" };
    let unit_text = if unit.re == 1.0 {
        "1"
    } else if unit.re == -1.0 {
        "-1"
    } else if unit.im == 1.0 {
        "i"
    } else {
        "-i"
    };
    let label = format!(
        "theta{}(z) = {unit_text}{prefix}*theta{}({shift_text})",
        from.index(),
        to.index()
    );
    Relation::new(
        label,
        vec![
            (
                1.0,
                term(move |c, z| Ok(theta_series(from, z, c.tau_nome()))),
            ),
            (
                -1.0,
                term(move |c, z| {
                    let tn = c.tau_nome();
                    let mut shift = C64::new(0.0, 0.0);
                    if half_pi {
                        shift += PI / 2.0;
                    }
                    if half_pitau {
                        shift += tn.pi_tau() / 2.0;
                    }
                    let factor = if with_exp {
                        quarter_nome(c) * (C64::i() * z).exp()
                    } else {
                        C64::new(1.0, 0.0)
                    };
                    Ok(unit * factor * theta_series(to, z + shift, tn))
                }),
            ),
        ],
    )
}

/// Each theta function written through the other three by half-period
/// shifts, with the prefactors as printed in the source table.
pub fn half_period_relations() -> Vec<Relation> {
    use ThetaKind::{Four, One, Three, Two};
    let one = C64::new(1.0, 0.0);
    let i = C64::i();
    vec![
        half_period_relation(One, Two, -one, false, true, false),
        half_period_relation(One, Three, -i, true, true, true),
        half_period_relation(One, Four, -i, true, false, true),
        half_period_relation(Two, Three, one, true, false, true),
        half_period_relation(Two, Four, one, true, true, true),
        half_period_relation(Two, One, one, false, true, false),
        half_period_relation(Three, Four, one, false, true, false),
        half_period_relation(Three, One, one, true, true, true),
        half_period_relation(Three, Two, one, true, false, true),
        half_period_relation(Four, One, -i, true, false, true),
        half_period_relation(Four, Two, i, true, true, true),
        half_period_relation(Four, Three, one, false, true, false),
    ]
}

/// `σ′(ω_j)/σ(ω_j)` by a five-point difference of the theta-based `σ`,
/// independent of the lattice's own eta constants.
fn eta_by_difference(j: u8, ctx: &EvalContext) -> Result<C64> {
    let lat = ctx.lattice()?;
    let w = lat.omega(j);
    let h = 1e-3 * lat.omega1().norm().min(lat.omega3().norm());
    let s = |x: C64| sigma_eval(SigmaKind::Sigma, x, lat);
    let d = (s(w - 2.0 * h)? - 8.0 * s(w - h)? + 8.0 * s(w + h)? - s(w + 2.0 * h)?) / (12.0 * h);
    let v = s(w)?;
    if v.norm() == 0.0 {
        return Err(Error::Degenerate(format!("sigma vanishes at w{j}")));
    }
    Ok(d / v)
}

/// The theta representation of `σ` and `σ_j` tested against the defining
/// properties: quasi-periodicity of `σ` and `σ_j(z) = e^{-η_j z}σ(z+ω_j)/σ(ω_j)`.
pub fn sigma_theta_relations() -> Vec<Relation> {
    let mut out = vec![Relation::new(
        "sigma(z+2*w1) = -exp(2*eta1*(z+w1))*sigma(z)",
        vec![
            (
                1.0,
                term(|c, z| {
                    let lat = c.lattice()?;
                    sigma_eval(SigmaKind::Sigma, z + 2.0 * lat.omega1(), lat)
                }),
            ),
            (
                1.0,
                term(|c, z| {
                    let lat = c.lattice()?;
                    let eta = eta_by_difference(1, c)?;
                    Ok((2.0 * eta * (z + lat.omega1())).exp()
                        * sigma_eval(SigmaKind::Sigma, z, lat)?)
                }),
            ),
        ],
    )];
    for j in 1..=3u8 {
        out.push(Relation::new(
            format!("sigma{j}(z) = exp(-eta{j}*z)*sigma(z+w{j})/sigma(w{j})"),
            vec![
                (
                    1.0,
                    term(move |c, z| sigma_eval(SigmaKind::aux(j), z, c.lattice()?)),
                ),
                (
                    -1.0,
                    term(move |c, z| {
                        let lat = c.lattice()?;
                        let w = lat.omega(j);
                        let eta = eta_by_difference(j, c)?;
                        let num = sigma_eval(SigmaKind::Sigma, z + w, lat)?;
                        let den = sigma_eval(SigmaKind::Sigma, w, lat)?;
                        Ok((-eta * z).exp() * num / den)
                    }),
                ),
            ],
        ));
    }
    out
}

/// Shell cutoff of the product used for the Legendre check.
pub const LEGENDRE_CUTOFF: usize = 60;

/// `η₁ω₃ - η₃ω₁ - iπ/2` with both etas taken from the product definition.
pub fn legendre_relations() -> Vec<Relation> {
    let mut r = Relation::new(
        "eta1*w3 - eta3*w1 = i*pi/2",
        vec![
            (
                1.0,
                term(|c, _| {
                    let lat = c.lattice()?;
                    Ok(eta_from_product(1, lat, LEGENDRE_CUTOFF) * lat.omega3())
                }),
            ),
            (
                -1.0,
                term(|c, _| {
                    let lat = c.lattice()?;
                    Ok(eta_from_product(3, lat, LEGENDRE_CUTOFF) * lat.omega1())
                }),
            ),
            (-1.0, term(|_, _| Ok(C64::new(0.0, PI / 2.0)))),
        ],
    );
    r.tolerance = Some(1e-5);
    r.sampled = false;
    vec![r]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_new;
    use crate::theta::TauNome;

    fn nome_ctx() -> EvalContext {
        EvalContext::Nome(TauNome::new(C64::new(0.3, 0.8)).unwrap())
    }

    #[test]
    fn theta_rules_hold_and_flips_do_not() {
        let ctx = nome_ctx();
        let z = C64::new(0.7, 0.4);
        for r in shift_relations()
            .iter()
            .chain(half_period_relations().iter())
        {
            assert!(r.residual(&ctx, z).unwrap() < 1e-12, "{}", r.label);
            assert!(
                r.with_flipped_sign(0).residual(&ctx, z).unwrap() > 0.5,
                "{}",
                r.label
            );
        }
    }

    #[test]
    fn sigma_rules_hold() {
        let ctx =
            EvalContext::Lattice(lattice_new(C64::new(1.0, 0.0), C64::new(0.3, 0.9)).unwrap());
        let z = C64::new(0.21, -0.13);
        for r in sigma_theta_relations() {
            assert!(r.residual(&ctx, z).unwrap() < 1e-10, "{}", r.label);
        }
        let legendre = &legendre_relations()[0];
        assert!(legendre.residual(&ctx, z).unwrap() < 1e-5);
    }

    #[test]
    fn sigma_rules_need_a_lattice() {
        let r = &sigma_theta_relations()[1];
        assert!(matches!(
            r.residual(&nome_ctx(), C64::new(0.1, 0.1)),
            Err(Error::Domain(_))
        ));
    }
}
