//! The certificate: one record per element, the coinvariant report and the overall verdict.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "shl/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn of(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing failed but some requested check was skipped.
    Incomplete,
}

/// A scalar matrix with entries printed exactly.
pub type ExactMatrix = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    pub status: Status,
    pub reason: String,
}

impl Skip {
    pub fn new(reason: impl Into<String>) -> Self {
        Skip { status: Status::Skipped, reason: reason.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome<T> {
    Done(T),
    Skipped(Skip),
}

impl<T> Outcome<T> {
    pub fn done(&self) -> Option<&T> {
        match self {
            Outcome::Done(t) => Some(t),
            Outcome::Skipped(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoergelRecord {
    pub status: Status,
    /// ch(B_x) in the standard basis.
    pub character: String,
    /// H̄_x in the standard basis.
    pub kl: String,
    pub end0_dim: usize,
    pub used_split_top: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HlRecord {
    pub status: Status,
    /// (i, dim H^{−i}, rank L^i)
    pub ranks: Vec<(usize, usize, usize)>,
    pub betti: Vec<(i32, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub i: usize,
    pub dim: usize,
    pub rank: usize,
    pub prim_dim: usize,
    /// (positive, negative, zero)
    pub signature: [usize; 3],
    pub expected_sign: i32,
    pub pass: bool,
    /// The Lefschetz form on H^{−i}, present when this degree fails.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<ExactMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HrRecord {
    pub status: Status,
    pub degrees: Vec<DegreeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRecord {
    pub y: String,
    pub s: usize,
    pub dim: usize,
    pub signature: [usize; 3],
    pub expected_sign: i32,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<ExactMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub y: String,
    pub s: usize,
    /// ⟨ρ^{ℓ(y)} c̄_bot, c̄_bot⟩
    pub n: String,
    pub n_positive: bool,
    pub injective: bool,
    pub primitive: bool,
    pub isometry: bool,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaPointRecord {
    pub zeta: String,
    pub hl: bool,
    pub hr: bool,
    /// (i, [p, n, z]) of the Lefschetz form on H^{−i}
    pub signatures: Vec<(usize, [usize; 3])>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaRecord {
    pub s: usize,
    pub ascent: bool,
    pub excluded: Vec<String>,
    pub points: Vec<ZetaPointRecord>,
    pub hl: bool,
    pub constant_signatures: bool,
    pub hr: bool,
    pub retries: usize,
    pub inconclusive: bool,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandRecord {
    pub z: String,
    pub shift: i32,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub i: i32,
    pub summands: Vec<SummandRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouquierRecord {
    pub status: Status,
    pub terms: Vec<TermRecord>,
    pub linear: bool,
    pub offending: Vec<(i32, String)>,
    /// Σ(−1)^i m_{z,i} v^k equals g_{z,x}.
    pub inverse_kl: bool,
    pub sign_positive: bool,
    pub parity: bool,
    pub cohomology: bool,
    /// (cohomological degree, internal degree, dim)
    pub cohomology_groups: Vec<(i32, i32, usize)>,
    /// g_{z,x} per z.
    pub g: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub x: String,
    pub length: usize,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none", default)]
    pub soergel: Option<Outcome<SoergelRecord>>,
    #[serde(rename = "hL", skip_serializing_if = "Option::is_none", default)]
    pub hl: Option<Outcome<HlRecord>>,
    #[serde(rename = "HR", skip_serializing_if = "Option::is_none", default)]
    pub hr: Option<Outcome<HrRecord>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub local: Option<Outcome<Vec<LocalRecord>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub embedding: Option<Outcome<Vec<EmbeddingRecord>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub zeta: Option<Outcome<Vec<ZetaRecord>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rouquier: Option<Outcome<RouquierRecord>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinvariantRecord {
    pub status: Status,
    pub group_order: usize,
    pub dim: usize,
    pub poincare: Vec<usize>,
    pub hl: HlRecord,
    pub hr: HrRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub catalogue_seconds: f64,
    pub elements_seconds: f64,
    pub coinvariant_seconds: f64,
    pub total_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub config_hash: String,
    pub elements: Vec<ElementRecord>,
    pub coinvariant: Option<Outcome<CoinvariantRecord>>,
    pub verdict: Verdict,
    /// Check name and location of every failure.
    pub failures: Vec<String>,
    pub skipped: Vec<String>,
    pub timings: Option<Timings>,
}

impl Certificate {
    pub fn empty(config_hash: String) -> Self {
        Certificate {
            schema: SCHEMA.into(),
            config_hash,
            elements: vec![],
            coinvariant: None,
            verdict: Verdict::Pass,
            failures: vec![],
            skipped: vec![],
            timings: None,
        }
    }

    /// Recomputes `failures`, `skipped` and `verdict` from the records.
    pub fn finalize(&mut self) {
        let mut failures = Vec::new();
        let mut skipped = Vec::new();
        fn note<T>(o: &Option<Outcome<T>>, what: String, ok: impl Fn(&T) -> bool, f: &mut Vec<String>, s: &mut Vec<String>) {
            match o {
                Some(Outcome::Done(t)) if !ok(t) => f.push(what),
                Some(Outcome::Skipped(k)) => s.push(format!("{what}: {}", k.reason)),
                _ => {}
            }
        }
        for e in &self.elements {
            let x = &e.x;
            note(&e.soergel, format!("S({x})"), |r| r.status == Status::Pass, &mut failures, &mut skipped);
            note(&e.hl, format!("hL({x})"), |r| r.status == Status::Pass, &mut failures, &mut skipped);
            note(&e.hr, format!("HR({x})"), |r| r.status == Status::Pass, &mut failures, &mut skipped);
            note(&e.local, format!("local({x})"), |r| r.iter().all(|l| l.status == Status::Pass), &mut failures, &mut skipped);
            note(&e.embedding, format!("embedding({x})"), |r| r.iter().all(|l| l.status == Status::Pass), &mut failures, &mut skipped);
            note(&e.zeta, format!("zeta({x})"), |r| r.iter().all(|l| l.status == Status::Pass), &mut failures, &mut skipped);
            note(&e.rouquier, format!("rouquier({x})"), |r| r.status == Status::Pass, &mut failures, &mut skipped);
        }
        note(&self.coinvariant, "coinvariant".into(), |r| r.status == Status::Pass, &mut failures, &mut skipped);
        self.verdict = if !failures.is_empty() {
            Verdict::Fail
        } else if !skipped.is_empty() {
            Verdict::Incomplete
        } else {
            Verdict::Pass
        };
        self.failures = failures;
        self.skipped = skipped;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}
