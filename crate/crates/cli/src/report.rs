//! The report document: what was asked, what was computed, and under which
//! assumptions. Serializes to JSON with a fixed key order, or to a plain
//! text summary.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::jobspec::{IdealSpec, RingSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub spec: SpecEcho,
    pub ring: RingInfo,
    pub results: Vec<CommandResult>,
    pub caveats: Vec<String>,
    /// Wall-clock milliseconds; `null` unless requested, so that output is
    /// reproducible byte for byte.
    pub timing_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub ring: RingSpec,
    pub ideals: Vec<IdealSpec>,
    pub command: String,
    /// Parameters after defaults were filled in.
    pub parameters: Parameters,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub ideal: Option<String>,
    pub power: Option<u32>,
    pub max_n: Option<u32>,
    pub q_max: Option<u64>,
    pub degree: Option<u32>,
    pub element: Option<String>,
    pub test_element: Option<String>,
    pub cap: Option<u32>,
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingInfo {
    pub characteristic: u64,
    pub variables: Vec<String>,
    pub relation: String,
    pub dimension: usize,
    pub fermat: Option<FermatInfo>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatInfo {
    pub r: u32,
    pub d: u32,
    /// `p > (d−1)r − d`.
    pub formula_licensed: bool,
    /// `(d−1)r − d`.
    pub license_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CommandResult {
    Closure(ClosureEntry),
    TightHilbert(HilbertEntry),
    Coefficients(CoefficientsEntry),
    IdentityCheck(IdentityEntry),
    Certificate(CertificateEntry),
    Slice(SliceEntry),
    Reduction(ReductionEntry),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureEntry {
    pub power: u32,
    pub method: String,
    pub licensed: bool,
    pub conjectural: bool,
    /// `(n−1)e + de`: `m` to this power lies in the closure.
    pub maximal_ideal_power: u32,
    pub generators: Vec<String>,
    pub colength: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertEntry {
    pub method: String,
    /// `(n, ℓ(R/(J^n)*))`.
    pub values: Vec<NValue>,
    pub strictly_increasing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NValue {
    pub n: u32,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientsEntry {
    /// `e*_0, ..., e*_d`.
    pub e_star: Vec<i64>,
    pub fit_window: [u32; 2],
    pub validation_n: u32,
    pub r_star: u32,
    pub huckaba_marley: Vec<HuckabaMarleyEntry>,
    /// Fit and sums agree for every `j = 1..d`.
    pub agree: bool,
    /// `e*_0 = r·e^d` on Fermat rings.
    pub multiplicity_check: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuckabaMarleyEntry {
    pub j: u32,
    pub value: i64,
    pub vanishes_from: u32,
    pub cap: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub identity: String,
    pub statement: String,
    pub applicable: bool,
    pub per_n: Vec<NVerdict>,
    pub overall: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NVerdict {
    pub n: u32,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub element: String,
    pub power: u32,
    pub test_element: String,
    pub test_element_source: String,
    pub tight_closure: VerdictEntry,
    pub frobenius_closure: VerdictEntry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictEntry {
    NotInTightClosure { q: u64 },
    EvidenceIn { q_max: u64 },
    FrobeniusClosureMember { q: u64 },
    NoFrobeniusWitness { q_max: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceEntry {
    pub power: u32,
    pub degree: u32,
    pub q_max: u64,
    pub method: String,
    pub ambient_dim: usize,
    pub dim: usize,
    pub basis: Vec<String>,
    pub kernel_dims: Vec<QDim>,
    /// `dim ((J^n)*)_t` from the closed form, when licensed.
    pub closed_form_dim: Option<u64>,
    pub agrees_with_closed_form: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDim {
    pub q: u64,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionEntry {
    pub degree_e: u32,
    pub r_j_me: u32,
    /// `⌊(r − 1 − d)/e⌋ + d`.
    pub r_j_me_closed_form: Option<i64>,
    pub r_star: u32,
    /// `⌊(r − 1 − d)/e⌋ + 1`.
    pub r_star_bound: Option<i64>,
    pub r_star_cap: u32,
    pub r_star_per_n: Vec<NVerdict>,
    pub rees_cm: bool,
    /// `⌊(r − 1 − d)/e⌋ ≤ d − 2`.
    pub sufficient_condition_fired: bool,
}

impl CommandResult {
    /// Names of the checks in this result that failed.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            CommandResult::Closure(_) | CommandResult::Certificate(_) => {}
            CommandResult::TightHilbert(h) => {
                if !h.strictly_increasing {
                    out.push("tight Hilbert function is not strictly increasing".into());
                }
            }
            CommandResult::Coefficients(c) => {
                if !c.agree {
                    out.push("fitted coefficients disagree with the Huckaba-Marley sums".into());
                }
                if c.multiplicity_check == Some(false) {
                    out.push("e*_0 differs from r·e^d".into());
                }
            }
            CommandResult::IdentityCheck(i) => {
                if i.applicable && !i.overall {
                    out.push(format!("{} identity fails", i.identity));
                }
            }
            CommandResult::Slice(s) => {
                if s.agrees_with_closed_form == Some(false) {
                    out.push(format!(
                        "slice in degree {} disagrees with the closed form",
                        s.degree
                    ));
                }
            }
            CommandResult::Reduction(r) => {
                if r.r_j_me_closed_form.is_some_and(|c| c != r.r_j_me as i64) {
                    out.push("r_J(m^e) differs from its closed form".into());
                }
                if r.r_star_bound.is_some_and(|b| r.r_star as i64 > b) {
                    out.push("r* exceeds its bound".into());
                }
                if r.sufficient_condition_fired && !r.rees_cm {
                    out.push("sufficient condition fired but r* > d - 1".into());
                }
            }
        }
        out
    }
}

impl Report {
    pub fn failures(&self) -> Vec<String> {
        self.results
            .iter()
            .flat_map(CommandResult::failures)
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let ring = &self.ring;
        let _ = writeln!(
            out,
            "ring: F_{}[{}]/({}), dimension {}",
            ring.characteristic,
            ring.variables.join(", "),
            ring.relation,
            ring.dimension
        );
        if let Some(f) = &ring.fermat {
            let _ = writeln!(
                out,
                "fermat: r = {}, d = {}, closed form {} (p > {})",
                f.r,
                f.d,
                if f.formula_licensed {
                    "licensed"
                } else {
                    "not licensed"
                },
                f.license_bound
            );
        }
        for ideal in &self.spec.ideals {
            let _ = writeln!(
                out,
                "ideal {} = ({})",
                ideal.name,
                ideal.generators.join(", ")
            );
        }
        let _ = writeln!(out, "command: {}", self.spec.command);
        for result in &self.results {
            write_result(&mut out, result);
        }
        for caveat in &self.caveats {
            let _ = writeln!(out, "note: {caveat}");
        }
        let failures = self.failures();
        if failures.is_empty() {
            let _ = writeln!(out, "status: all checks passed");
        } else {
            for f in failures {
                let _ = writeln!(out, "FAILED: {f}");
            }
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "time: {ms} ms");
        }
        out
    }
}

fn verdict_text(v: &VerdictEntry) -> String {
    match v {
        VerdictEntry::NotInTightClosure { q } => format!("NOT_IN_TIGHT_CLOSURE (witness q = {q})"),
        VerdictEntry::EvidenceIn { q_max } => format!("EVIDENCE_IN (checked q ≤ {q_max})"),
        VerdictEntry::FrobeniusClosureMember { q } => format!("FROBENIUS_CLOSURE_MEMBER (q = {q})"),
        VerdictEntry::NoFrobeniusWitness { q_max } => {
            format!("NO_FROBENIUS_WITNESS (checked q ≤ {q_max})")
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn write_result(out: &mut String, result: &CommandResult) {
    match result {
        CommandResult::Closure(c) => {
            let _ = writeln!(
                out,
                "(J^{})* [{}{}] = J^{} + m^{}, colength {}",
                c.power,
                c.method,
                if c.conjectural { ", conjectural" } else { "" },
                c.power,
                c.maximal_ideal_power,
                c.colength
            );
        }
        CommandResult::TightHilbert(h) => {
            let values: Vec<String> = h.values.iter().map(|v| v.value.to_string()).collect();
            let first = h.values.first().map_or(0, |v| v.n);
            let _ = writeln!(out, "H*(n) for n = {first}..: {}", values.join(", "));
        }
        CommandResult::Coefficients(c) => {
            let e: Vec<String> = c.e_star.iter().map(i64::to_string).collect();
            let _ = writeln!(
                out,
                "e* = ({}) fitted on n = {}..{}, validated at n = {}",
                e.join(", "),
                c.fit_window[0],
                c.fit_window[1],
                c.validation_n
            );
            for hm in &c.huckaba_marley {
                let _ = writeln!(out, "  Huckaba-Marley e*_{} = {}", hm.j, hm.value);
            }
            let _ = writeln!(out, "  agree: {}", yes_no(c.agree));
        }
        CommandResult::IdentityCheck(i) => {
            if !i.applicable {
                let _ = writeln!(out, "{}: hypothesis not met, not applicable", i.identity);
            } else {
                let range = match (i.per_n.first(), i.per_n.last()) {
                    (Some(a), Some(b)) => format!("n = {}..{}", a.n, b.n),
                    _ => "empty range".into(),
                };
                let _ = writeln!(out, "{} ({range}): {}", i.identity, yes_no(i.overall));
            }
        }
        CommandResult::Certificate(c) => {
            let _ = writeln!(
                out,
                "certificate for {} against (J^{})*:",
                c.element, c.power
            );
            let _ = writeln!(out, "  tight closure: {}", verdict_text(&c.tight_closure));
            let _ = writeln!(
                out,
                "  Frobenius closure: {}",
                verdict_text(&c.frobenius_closure)
            );
        }
        CommandResult::Slice(s) => {
            let _ = writeln!(
                out,
                "slice of (J^{})* in degree {}: dim {} of {} (q ≤ {})",
                s.power, s.degree, s.dim, s.ambient_dim, s.q_max
            );
            if let Some(agree) = s.agrees_with_closed_form {
                let _ = writeln!(out, "  agrees with closed form: {}", yes_no(agree));
            }
        }
        CommandResult::Reduction(r) => {
            let cf = r
                .r_j_me_closed_form
                .map_or(String::new(), |c| format!(" (closed form {c})"));
            let _ = writeln!(out, "r_J(m^{}) = {}{cf}", r.degree_e, r.r_j_me);
            let bound = r
                .r_star_bound
                .map_or(String::new(), |b| format!(" (bound {b})"));
            let _ = writeln!(out, "r* = {}{bound}", r.r_star);
            let _ = writeln!(
                out,
                "tight Rees algebra Cohen-Macaulay: {}",
                yes_no(r.rees_cm)
            );
        }
    }
}
