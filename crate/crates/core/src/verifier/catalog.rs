//! Identity specifications and the built-in catalog.

use super::relations::{
    half_period_relations, legendre_relations, shift_relations, sigma_theta_relations, Relation,
};
use crate::error::{Error, Result};
use crate::qp::{parse_linform, parse_with, Expr, Family, LinForm, ParseOptions};

/// A single expression that should vanish identically in `variable`.
#[derive(Debug, Clone)]
pub struct Functional {
    pub expr: Expr,
    pub variable: String,
    pub generators: (LinForm, LinForm),
    /// Exhibited zeros in `variable`, as linear forms in the parameters.
    pub candidates: Vec<LinForm>,
    /// Why the candidate list is empty, when it is.
    pub candidate_note: Option<String>,
}

#[derive(Debug, Clone)]
pub enum Body {
    Functional(Functional),
    Relations(Vec<Relation>),
}

#[derive(Debug, Clone)]
pub struct IdentitySpec {
    pub name: String,
    pub description: String,
    pub family: Family,
    pub body: Body,
}

impl IdentitySpec {
    /// Parses a user identity. The family is read off the expression.
    pub fn functional(
        name: &str,
        expr: &str,
        variable: &str,
        generators: (&str, &str),
        candidates: &[&str],
    ) -> Result<Self> {
        let opts = ParseOptions::with_variable(variable);
        let expr = parse_with(expr, &opts)?;
        let family = expr
            .family()?
            .ok_or_else(|| Error::Domain("expression has no sigma or theta factor".into()))?;
        let g1 = parse_linform(generators.0, &opts)?;
        let g2 = parse_linform(generators.1, &opts)?;
        let candidates = candidates
            .iter()
            .map(|c| parse_linform(c, &opts))
            .collect::<Result<Vec<_>>>()?;
        for (i, c) in candidates.iter().enumerate() {
            if candidates[..i].contains(c) {
                return Err(Error::Domain(format!("candidate {c} listed twice")));
            }
        }
        Ok(IdentitySpec {
            name: name.to_string(),
            description: String::new(),
            family,
            body: Body::Functional(Functional {
                expr,
                variable: variable.to_string(),
                generators: (g1, g2),
                candidates,
                candidate_note: None,
            }),
        })
    }

    fn relations(name: &str, description: &str, family: Family, rels: Vec<Relation>) -> Self {
        IdentitySpec {
            name: name.into(),
            description: description.into(),
            family,
            body: Body::Relations(rels),
        }
    }

    fn described(mut self, text: &str) -> Self {
        self.description = text.into();
        self
    }

    fn without_candidates(mut self, note: &str) -> Self {
        if let Body::Functional(f) = &mut self.body {
            f.candidate_note = Some(note.into());
        }
        self
    }

    pub fn as_functional(&self) -> Option<&Functional> {
        match &self.body {
            Body::Functional(f) => Some(f),
            Body::Relations(_) => None,
        }
    }

    /// Number of signed terms, summed over relations for relation entries.
    pub fn term_count(&self) -> usize {
        match &self.body {
            Body::Functional(f) => f.expr.terms.len(),
            Body::Relations(rs) => rs.iter().map(|r| r.terms.len()).sum(),
        }
    }

    /// Copy with the sign of the `k`-th term flipped, counting terms as in
    /// [`IdentitySpec::term_count`].
    pub fn with_flipped_sign(&self, k: usize) -> Option<IdentitySpec> {
        let mut out = self.clone();
        out.name = format!("{}~flip{k}", self.name);
        match &mut out.body {
            Body::Functional(f) => {
                if k >= f.expr.terms.len() {
                    return None;
                }
                f.expr = f.expr.with_flipped_sign(k);
            }
            Body::Relations(rs) => {
                let mut rest = k;
                let slot = rs.iter_mut().find_map(|r| {
                    if rest < r.terms.len() {
                        Some(r)
                    } else {
                        rest -= r.terms.len();
                        None
                    }
                })?;
                *slot = slot.with_flipped_sign(rest);
            }
        }
        Some(out)
    }

    /// Every single-sign mutation of this identity.
    pub fn mutations(&self) -> Vec<IdentitySpec> {
        (0..self.term_count())
            .filter_map(|k| self.with_flipped_sign(k))
            .collect()
    }
}

const PHI1: &str = "sigma(z+a)*sigma(z-a)*sigma(b+c)*sigma(b-c) + sigma(z+b)*sigma(z-b)*sigma(c+a)*sigma(c-a) + sigma(z+c)*sigma(z-c)*sigma(a+b)*sigma(a-b)";

const PHI2: &str = "sigma(a)*sigma(b)*sigma(c)*sigma(d) \
    + sigma((a+b+c+d)/2)*sigma((a+b-c-d)/2)*sigma((a-b+c-d)/2)*sigma((-a+b+c-d)/2) \
    + sigma((a+b+c-d)/2)*sigma((a+b-c+d)/2)*sigma((a-b+c+d)/2)*sigma((a-b-c-d)/2)";

const PSI1: &str =
    "theta3(a+b)*theta3(a-b)*theta3_0^2 - theta3(a)^2*theta3(b)^2 - theta1(a)^2*theta1(b)^2";

const PSI2: &str = "theta1(a+b)*theta2(a-b)*theta3_0*theta4_0 - theta1(a)*theta2(a)*theta3(b)*theta4(b) - theta1(b)*theta2(b)*theta3(a)*theta4(a)";

const NO_CANDIDATES: &str =
    "no zeros are exhibited for this identity; the verdict rests on multipliers, the exact count and residuals";

fn psi3() -> String {
    let star = |k: u8| {
        format!("theta{k}((-a+b+c+d)/2)*theta{k}((a-b+c+d)/2)*theta{k}((a+b-c+d)/2)*theta{k}((a+b+c-d)/2)")
    };
    format!(
        "2*theta3(a)*theta3(b)*theta3(c)*theta3(d) + {} - {} - {} - {}",
        star(1),
        star(2),
        star(3),
        star(4)
    )
}

fn sigma_mixed(k: u8, l: u8) -> Result<IdentitySpec> {
    let name = if (k, l) == (1, 2) {
        "sigma-mixed".to_string()
    } else {
        format!("sigma-mixed-{k}{l}")
    };
    let text = format!("sigma{k}(z)^2 - sigma{l}(z)^2 + ediff({k},{l})*sigma(z)^2");
    let (wk, wl) = (format!("w{k}"), format!("w{l}"));
    Ok(
        IdentitySpec::functional(&name, &text, "z", ("2*w1", "2*w3"), &["0", &wk, &wl])?
            .described(&format!("sigma{k}^2 - sigma{l}^2 = (e{l} - e{k}) sigma^2")),
    )
}

fn build() -> Result<Vec<IdentitySpec>> {
    let sigma_periods = ("2*w1", "2*w3");
    let theta_periods = ("pi", "pitau");
    let mut out = vec![
        IdentitySpec::functional(
            "weierstrass-3term",
            PHI1,
            "z",
            sigma_periods,
            &["a", "b", "c"],
        )?
        .described("three-term sigma identity"),
        IdentitySpec::functional("weierstrass-fundamental", PHI2, "a", ("4*w1", "4*w3"), &[])?
            .described("fundamental sigma identity in four parameters")
            .without_candidates(NO_CANDIDATES),
        sigma_mixed(1, 2)?,
        sigma_mixed(1, 3)?,
        sigma_mixed(2, 3)?,
        IdentitySpec::functional(
            "jacobi-add-theta3",
            PSI1,
            "a",
            theta_periods,
            &["0", "pi/2+pitau/2", "b+pi/2+pitau/2"],
        )?
        .described("addition formula for theta3(a+b)theta3(a-b)"),
        IdentitySpec::functional(
            "jacobi-add-mixed",
            PSI2,
            "a",
            theta_periods,
            &["0", "-b", "pi/2"],
        )?
        .described("addition formula for theta1(a+b)theta2(a-b)"),
        IdentitySpec::functional("jacobi-fundamental", &psi3(), "a", theta_periods, &[])?
            .described("2[3] + [1]* - [2]* - [3]* - [4]*")
            .without_candidates(NO_CANDIDATES),
    ];
    out.push(IdentitySpec::relations(
        "legendre-relation",
        "eta1*w3 - eta3*w1 = i*pi/2 with etas from the product definition",
        Family::Sigma,
        legendre_relations(),
    ));
    out.push(IdentitySpec::relations(
        "lemma1-qp",
        "theta shifts by pi and pitau",
        Family::Theta,
        shift_relations(),
    ));
    out.push(IdentitySpec::relations(
        "lemma2-transforms",
        "theta functions through one another by half-period shifts",
        Family::Theta,
        half_period_relations(),
    ));
    out.push(IdentitySpec::relations(
        "sigma-theta-transforms",
        "theta form of sigma and sigma_j against their defining properties",
        Family::Sigma,
        sigma_theta_relations(),
    ));
    Ok(out)
}

/// The built-in identities, in a fixed order.
pub fn builtin_catalog() -> Vec<IdentitySpec> {
    build().expect("built-in identities parse")
}

pub fn find_builtin(name: &str) -> Result<IdentitySpec> {
    builtin_catalog()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownIdentity(name.to_string()))
}
