//! Report types and their JSON form.

use crate::exact::Q;
use crate::qp::EvalContext;
use num_complex::Complex64 as C64;
use serde::{Serialize, Serializer};

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Falsified,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Falsified => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Falsified => "falsified",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContextInfo {
    pub omega1: Option<[f64; 2]>,
    pub omega3: Option<[f64; 2]>,
    pub tau: [f64; 2],
    pub q: [f64; 2],
}

impl From<&EvalContext> for ContextInfo {
    fn from(ctx: &EvalContext) -> Self {
        let tn = ctx.tau_nome();
        let omegas = ctx
            .lattice()
            .ok()
            .map(|l| (pair(l.omega1()), pair(l.omega3())));
        ContextInfo {
            omega1: omegas.map(|o| o.0),
            omega3: omegas.map(|o| o.1),
            tau: pair(tn.tau()),
            q: pair(tn.q()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational(pub Q);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", self.0.numer())?;
        st.serialize_field("den", self.0.denom())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierEvidence {
    pub generator: String,
    pub matched: bool,
    pub scalar: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroEvidence {
    pub candidate: String,
    pub symbolic: bool,
    pub residual: f64,
}

impl ZeroEvidence {
    pub fn verified(&self, tol: f64) -> bool {
        self.symbolic || self.residual < tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualStats {
    pub samples: usize,
    pub seed: u64,
    pub max_rel: f64,
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationEvidence {
    pub relation: String,
    pub max_rel: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub context: ContextInfo,
    pub tolerance: f64,
    pub multipliers: Vec<MultiplierEvidence>,
    #[serde(rename = "predicted_N")]
    pub predicted_n: Option<Rational>,
    pub zeros: Vec<ZeroEvidence>,
    pub zero_excess: bool,
    pub residuals: ResidualStats,
    /// Rerun with doubled samples, present when the first pass looked false.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confirmation: Option<ResidualStats>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RelationEvidence>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn verified_candidates(&self) -> usize {
        self.zeros
            .iter()
            .filter(|z| z.verified(self.tolerance))
            .count()
    }
}

/// One identity in one context; failures to run are kept, not dropped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub identity: String,
    pub context: ContextInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SuiteEntry {
    pub fn verdict(&self) -> Verdict {
        self.report
            .as_ref()
            .map_or(Verdict::Inconclusive, |r| r.verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
    pub verified: usize,
    pub falsified: usize,
    pub inconclusive: usize,
}

impl SuiteReport {
    pub fn new(entries: Vec<SuiteEntry>) -> Self {
        let count = |v: Verdict| entries.iter().filter(|e| e.verdict() == v).count();
        let (verified, falsified, inconclusive) = (
            count(Verdict::Verified),
            count(Verdict::Falsified),
            count(Verdict::Inconclusive),
        );
        SuiteReport {
            entries,
            verified,
            falsified,
            inconclusive,
        }
    }

    /// 0 when everything verified, 1 on any falsification, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.falsified > 0 {
            1
        } else if self.inconclusive > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
