//! Command execution: turns a parsed spec and a command into a [`Report`].

use std::time::Instant;

use thiserror::Error;
use tight_core::filtration::{FiltrationError, IdentityCheckReport, TightFiltration};
use tight_core::graded_ring::{maximal_ideal_power, RIdeal, RingRef};
use tight_core::tight::{
    certify_non_membership, check_license, closed_form_tight_closure, closure_socle_bound,
    default_test_element, frobenius_closure_member, tight_closure_degree_slice, ClosureMethod,
    HsopIdeal, TestElement, TestElementSource, TightError, Verdict,
};

use crate::jobspec::{JobSpec, SpecError};
use crate::report::{
    CertificateEntry, ClosureEntry, CoefficientsEntry, CommandResult, FermatInfo, HilbertEntry,
    HuckabaMarleyEntry, IdentityEntry, NValue, NVerdict, Parameters, QDim, ReductionEntry, Report,
    RingInfo, SliceEntry, SpecEcho, VerdictEntry, SCHEMA_VERSION,
};

pub const DEFAULT_MAX_N: u32 = 6;
/// Elements of `J*` outside `J` certified by `report`, at most.
const REPORT_CERTIFICATES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    /// Bad spec, bad flags, or a precondition that the input violates.
    #[error("{0}")]
    Input(String),
    /// A computation that could not confirm what it was asked to confirm.
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Computation(_) => 1,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<TightError> for CliError {
    fn from(e: TightError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<FiltrationError> for CliError {
    fn from(e: FiltrationError) -> Self {
        match e {
            FiltrationError::Tight(t) => t.into(),
            FiltrationError::Ring(_)
            | FiltrationError::RangeTooSmall(_)
            | FiltrationError::BadIndex { .. }
            | FiltrationError::WindowTooSmall { .. } => CliError::Input(e.to_string()),
            FiltrationError::NotPolynomial
            | FiltrationError::NonIntegralFit
            | FiltrationError::CapReached { .. }
            | FiltrationError::ReductionNotFound { .. }
            | FiltrationError::PersistenceUnverified(_) => CliError::Computation(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Ring and ideals only, no computation.
    Describe,
    TightClosure {
        power: u32,
    },
    Hilbert {
        max_n: Option<u32>,
    },
    Coeffs,
    VvCheck {
        max_n: Option<u32>,
    },
    BuchsbaumCheck {
        max_n: Option<u32>,
    },
    ItohCheck {
        max_n: Option<u32>,
    },
    Certify {
        power: u32,
        element: String,
        q_max: Option<u64>,
    },
    Slice {
        power: u32,
        degree: u32,
        q_max: Option<u64>,
    },
    Reduction,
    Report {
        max_n: Option<u32>,
        q_max: Option<u64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Describe => "describe",
            Command::TightClosure { .. } => "tight-closure",
            Command::Hilbert { .. } => "hilbert",
            Command::Coeffs => "coeffs",
            Command::VvCheck { .. } => "vv-check",
            Command::BuchsbaumCheck { .. } => "buchsbaum-check",
            Command::ItohCheck { .. } => "itoh-check",
            Command::Certify { .. } => "certify",
            Command::Slice { .. } => "slice",
            Command::Reduction => "reduction",
            Command::Report { .. } => "report",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub ideal: Option<String>,
    pub force: bool,
    pub test_element: Option<String>,
    pub cap: Option<u32>,
    pub timing: bool,
}

/// Report skeleton with the ring and spec echoed and no results.
pub fn empty_report(spec: &JobSpec, command: &str, parameters: Parameters) -> Report {
    let ring = &spec.ring;
    let fermat = ring.fermat_params().map(|f| FermatInfo {
        r: f.r,
        d: f.d,
        formula_licensed: f.formula_licensed,
        license_bound: (f.d as i64 - 1) * f.r as i64 - f.d as i64,
    });
    Report {
        schema: SCHEMA_VERSION,
        spec: SpecEcho {
            ring: spec.ring_spec.clone(),
            ideals: spec.ideal_specs().cloned().collect(),
            command: command.to_string(),
            parameters,
        },
        ring: RingInfo {
            characteristic: ring.char().get() as u64,
            variables: ring.var_names().to_vec(),
            relation: ring
                .relation()
                .map_or_else(|| "0".into(), |f| ring.format(f)),
            dimension: ring.dimension(),
            fermat,
        },
        results: Vec::new(),
        caveats: Vec::new(),
        timing_ms: None,
    }
}

struct Job<'a> {
    spec: &'a JobSpec,
    opts: &'a Options,
    params: Parameters,
    results: Vec<CommandResult>,
    caveats: Vec<String>,
}

fn q_default(ring: &RingRef) -> u64 {
    (ring.char().get() as u64).pow(3)
}

impl<'a> Job<'a> {
    fn ring(&self) -> &RingRef {
        &self.spec.ring
    }

    fn ideal(&mut self) -> Result<RIdeal, CliError> {
        let (s, ideal) = self.spec.ideal(self.opts.ideal.as_deref())?;
        self.params.ideal = Some(s.name.clone());
        Ok(ideal.clone())
    }

    fn hsop(&mut self) -> Result<HsopIdeal, CliError> {
        Ok(HsopIdeal::validate(self.ideal()?)?)
    }

    fn caveat(&mut self, text: String) {
        if !self.caveats.contains(&text) {
            self.caveats.push(text);
        }
    }

    fn license_caveat(&mut self) {
        let Some(f) = self.ring().fermat_params() else {
            self.caveat(
                "conjectural: closed form applied outside the Fermat family (forced)".into(),
            );
            return;
        };
        let p = self.ring().char().get();
        let bound = (f.d as i64 - 1) * f.r as i64 - f.d as i64;
        if f.formula_licensed {
            self.caveat(format!(
                "closed form (J^n)* = J^n + m^((n-1)e+de) used under p > (d-1)r - d: {p} > {bound}"
            ));
        } else {
            self.caveat(format!(
                "conjectural: closed form forced although p > (d-1)r - d fails ({p} ≤ {bound})"
            ));
        }
    }

    fn filtration(&mut self) -> Result<TightFiltration, CliError> {
        let j = self.hsop()?;
        let f = TightFiltration::new(j, self.opts.force)?;
        self.license_caveat();
        Ok(f)
    }

    fn test_element(&mut self) -> Result<TestElement, CliError> {
        let c = match &self.opts.test_element {
            Some(text) => {
                let poly = self
                    .ring()
                    .parse(text)
                    .map_err(|e| CliError::Input(format!("--test-element: {e}")))?;
                TestElement::new(self.ring(), poly, TestElementSource::UserSupplied)?
            }
            None => default_test_element(self.ring())?,
        };
        let shown = self.ring().format(c.poly());
        self.params.test_element = Some(shown.clone());
        self.caveat(match c.source() {
            TestElementSource::Jacobian => format!(
                "refutations assume c = {shown} is a test element (a unit multiple of df/dx0); \
                 EVIDENCE_IN verdicts are finite scans, not proofs"
            ),
            TestElementSource::UserSupplied => format!(
                "refutations assume the supplied c = {shown} is a test element; \
                 EVIDENCE_IN verdicts are finite scans, not proofs"
            ),
        });
        Ok(c)
    }

    fn closure_entry(&mut self, j: &HsopIdeal, n: u32) -> Result<CommandResult, CliError> {
        let closure = closed_form_tight_closure(j, n, self.opts.force)?;
        self.license_caveat();
        let jn = j.ideal().power(n);
        let bound = closure_socle_bound(j, n);
        let mut generators: Vec<String> = jn.gen_strings();
        for m in maximal_ideal_power(j.ring(), bound).gens().gens() {
            if !jn.member(m) {
                generators.push(self.ring().format(m));
            }
        }
        Ok(CommandResult::Closure(ClosureEntry {
            power: n,
            method: closure.method.to_string(),
            licensed: closure.licensed,
            conjectural: closure.conjectural,
            maximal_ideal_power: bound,
            generators,
            colength: closure
                .ideal
                .length()
                .map_err(|e| CliError::Input(e.to_string()))?,
        }))
    }

    fn hilbert_entry(f: &TightFiltration, max_n: u32) -> Result<CommandResult, CliError> {
        let series = f.tight_hilbert_series(1, max_n)?;
        let values: Vec<NValue> = series
            .values
            .iter()
            .enumerate()
            .map(|(i, &value)| NValue {
                n: i as u32 + 1,
                value,
            })
            .collect();
        let strictly_increasing = values.first().is_none_or(|v| v.value > 0)
            && values.windows(2).all(|w| w[0].value < w[1].value);
        Ok(CommandResult::TightHilbert(HilbertEntry {
            method: ClosureMethod::ClosedForm.to_string(),
            values,
            strictly_increasing,
        }))
    }

    fn cap(&mut self, f: &TightFiltration) -> u32 {
        let cap = self.opts.cap.unwrap_or_else(|| f.default_cap());
        self.params.cap = Some(cap);
        cap
    }

    fn reduction_entry(&mut self, f: &TightFiltration) -> Result<ReductionEntry, CliError> {
        let cap = self.cap(f);
        let me = f.reduction_number_me()?;
        let star = f.tight_reduction_number(cap)?;
        let rees = f.rees_cm_verdict(star.r_star);
        self.caveat(
            "r* is read as the least n0 with J(J^n)* = (J^(n+1))* for every n0 ≤ n ≤ cap".into(),
        );
        self.caveat("[(r-1-d)/e] is the integer floor, so [-1/1] = -1".into());
        Ok(ReductionEntry {
            degree_e: f.hsop().degree_e(),
            r_j_me: me.computed,
            r_j_me_closed_form: me.closed_form,
            r_star: star.r_star,
            r_star_bound: star.bound,
            r_star_cap: star.cap,
            r_star_per_n: star
                .per_n
                .iter()
                .map(|&(n, holds)| NVerdict { n, holds })
                .collect(),
            rees_cm: rees.cohen_macaulay,
            sufficient_condition_fired: rees.sufficient_condition_fired,
        })
    }

    fn coefficients_entry(
        &mut self,
        f: &TightFiltration,
        r_star: u32,
    ) -> Result<CommandResult, CliError> {
        let cap = self.cap(f);
        let fit = f.coefficients(r_star)?;
        let d = f.hsop().dimension();
        let mut huckaba_marley = Vec::with_capacity(d as usize);
        for j in 1..=d {
            let sum = f.huckaba_marley_coefficient(j, cap)?;
            huckaba_marley.push(HuckabaMarleyEntry {
                j,
                value: sum.value,
                vanishes_from: sum.vanishes_from,
                cap,
            });
        }
        let agree = huckaba_marley
            .iter()
            .all(|hm| fit.coefficients[hm.j as usize] == hm.value);
        let multiplicity_check =
            f.hsop().ring().fermat_params().map(|fp| {
                fit.coefficients[0] == (fp.r as i64) * (f.hsop().degree_e() as i64).pow(d)
            });
        Ok(CommandResult::Coefficients(CoefficientsEntry {
            e_star: fit.coefficients,
            fit_window: [fit.fit_window.0, fit.fit_window.1],
            validation_n: fit.validation,
            r_star,
            huckaba_marley,
            agree,
            multiplicity_check,
        }))
    }

    fn certificate_entry(
        &mut self,
        k: &RIdeal,
        power: u32,
        z: &tight_core::ffpoly::Poly,
        c: &TestElement,
        q_max: u64,
    ) -> Result<CommandResult, CliError> {
        let tight = certify_non_membership(z, k, c, q_max)?;
        let frobenius = frobenius_closure_member(z, k, q_max)?;
        Ok(CommandResult::Certificate(CertificateEntry {
            element: self.ring().format(z),
            power,
            test_element: self.ring().format(c.poly()),
            test_element_source: match c.source() {
                TestElementSource::Jacobian => "jacobian".into(),
                TestElementSource::UserSupplied => "user".into(),
            },
            tight_closure: verdict_entry(tight.verdict),
            frobenius_closure: verdict_entry(frobenius.verdict),
        }))
    }
}

fn verdict_entry(v: Verdict) -> VerdictEntry {
    match v {
        Verdict::NotInTightClosure { q } => VerdictEntry::NotInTightClosure { q },
        Verdict::EvidenceIn { q_max } => VerdictEntry::EvidenceIn { q_max },
        Verdict::FrobeniusClosureMember { q } => VerdictEntry::FrobeniusClosureMember { q },
        Verdict::NoFrobeniusWitness { q_max } => VerdictEntry::NoFrobeniusWitness { q_max },
    }
}

fn identity_entry(report: IdentityCheckReport) -> CommandResult {
    let statement = match report.name {
        "valabrega_valla" => "J ∩ (J^(n+1))* = J(J^n)*",
        "itoh" => "J^n ∩ (J^(n+1))* = J^n J*",
        "buchsbaum" => "(a_1^2, ..., a_d^2) ∩ (J^n)* = (a_1^2, ..., a_d^2)(J^(n-2))*",
        "tightly_closed_powers" => "J* = J implies (J^n)* = J^n",
        _ => "",
    };
    CommandResult::IdentityCheck(IdentityEntry {
        identity: report.name.to_string(),
        statement: statement.to_string(),
        applicable: report.applicable,
        overall: report.overall(),
        per_n: report
            .per_n
            .iter()
            .map(|&(n, holds)| NVerdict { n, holds })
            .collect(),
    })
}

/// Runs `command` against `spec`.
pub fn run(spec: &JobSpec, command: &Command, opts: &Options) -> Result<Report, CliError> {
    let started = Instant::now();
    let mut job = Job {
        spec,
        opts,
        params: Parameters {
            force: opts.force,
            ..Parameters::default()
        },
        results: Vec::new(),
        caveats: Vec::new(),
    };
    match command {
        Command::Describe => {}
        Command::TightClosure { power } => {
            job.params.power = Some(*power);
            let j = job.hsop()?;
            let entry = job.closure_entry(&j, *power)?;
            job.results.push(entry);
        }
        Command::Hilbert { max_n } => {
            let max_n = max_n.unwrap_or(DEFAULT_MAX_N);
            job.params.max_n = Some(max_n);
            let f = job.filtration()?;
            job.results.push(Job::hilbert_entry(&f, max_n)?);
        }
        Command::Coeffs => {
            let f = job.filtration()?;
            let r_star = job.reduction_entry(&f)?.r_star;
            let entry = job.coefficients_entry(&f, r_star)?;
            job.results.push(entry);
        }
        Command::VvCheck { max_n } => {
            let max_n = max_n.unwrap_or(DEFAULT_MAX_N);
            job.params.max_n = Some(max_n);
            let f = job.filtration()?;
            job.results.push(identity_entry(f.vv_check(max_n)));
        }
        Command::BuchsbaumCheck { max_n } => {
            let max_n = max_n.unwrap_or(DEFAULT_MAX_N - 1);
            job.params.max_n = Some(max_n);
            let f = job.filtration()?;
            job.results.push(identity_entry(f.buchsbaum_check(max_n)?));
        }
        Command::ItohCheck { max_n } => {
            let max_n = max_n.unwrap_or(DEFAULT_MAX_N - 1);
            job.params.max_n = Some(max_n);
            let f = job.filtration()?;
            job.results.push(identity_entry(f.itoh_check(max_n)));
        }
        Command::Certify {
            power,
            element,
            q_max,
        } => {
            let q_max = q_max.unwrap_or_else(|| q_default(job.ring()));
            job.params.power = Some(*power);
            job.params.q_max = Some(q_max);
            job.params.element = Some(element.clone());
            let k = job.ideal()?.power(*power);
            let z = job
                .ring()
                .parse(element)
                .map_err(|e| CliError::Input(format!("--element: {e}")))?;
            let c = job.test_element()?;
            let entry = job.certificate_entry(&k, *power, &z, &c, q_max)?;
            job.results.push(entry);
        }
        Command::Slice {
            power,
            degree,
            q_max,
        } => {
            let q_max = q_max.unwrap_or_else(|| q_default(job.ring()));
            job.params.power = Some(*power);
            job.params.degree = Some(*degree);
            job.params.q_max = Some(q_max);
            let ideal = job.ideal()?;
            let k = ideal.power(*power);
            let c = job.test_element()?;
            let slice = tight_closure_degree_slice(&k, *degree, &c, q_max)?;
            job.caveat(
                "slices contain the degree-t part of the tight closure and equal it once q_max \
                 is large enough for the test element"
                    .into(),
            );
            let closed_form_dim = match (HsopIdeal::validate(ideal), check_license(job.ring())) {
                (Ok(j), Ok(())) => {
                    let closure = closed_form_tight_closure(&j, *power, false)?.ideal;
                    job.license_caveat();
                    Some(slice.ambient_dim as u64 - closure.hilbert_function(*degree))
                }
                _ => None,
            };
            job.results.push(CommandResult::Slice(SliceEntry {
                power: *power,
                degree: *degree,
                q_max,
                method: ClosureMethod::SliceApproximation.to_string(),
                ambient_dim: slice.ambient_dim,
                dim: slice.dim(),
                basis: slice.basis.iter().map(|b| job.ring().format(b)).collect(),
                kernel_dims: slice
                    .kernel_dims
                    .iter()
                    .map(|&(q, dim)| QDim { q, dim })
                    .collect(),
                closed_form_dim,
                agrees_with_closed_form: closed_form_dim.map(|d| d == slice.dim() as u64),
            }));
        }
        Command::Reduction => {
            let f = job.filtration()?;
            let entry = job.reduction_entry(&f)?;
            job.results.push(CommandResult::Reduction(entry));
        }
        Command::Report { max_n, q_max } => {
            let max_n = max_n.unwrap_or(DEFAULT_MAX_N);
            let q_max = q_max.unwrap_or_else(|| q_default(job.ring()));
            job.params.max_n = Some(max_n);
            job.params.q_max = Some(q_max);
            let f = job.filtration()?;
            for n in 1..=3 {
                let entry = job.closure_entry(f.hsop(), n)?;
                job.results.push(entry);
            }
            job.results.push(Job::hilbert_entry(&f, max_n)?);
            let reduction = job.reduction_entry(&f)?;
            let coefficients = job.coefficients_entry(&f, reduction.r_star)?;
            job.results.push(coefficients);
            job.results.push(identity_entry(f.vv_check(max_n)));
            job.results
                .push(identity_entry(f.itoh_check(max_n.saturating_sub(1))));
            if max_n > 3 {
                job.results
                    .push(identity_entry(f.buchsbaum_check(max_n - 1)?));
            }
            job.results
                .push(identity_entry(f.tightly_closed_powers_check(max_n)));
            job.results.push(CommandResult::Reduction(reduction));

            // certify the generators of J* that J misses
            let closure = f.closure(1);
            let extra: Vec<_> = closure
                .gens()
                .gens()
                .iter()
                .filter(|g| !f.ideal().member(g))
                .take(REPORT_CERTIFICATES)
                .cloned()
                .collect();
            if !extra.is_empty() {
                let c = job.test_element()?;
                let j = f.ideal().clone();
                for z in &extra {
                    let entry = job.certificate_entry(&j, 1, z, &c, q_max)?;
                    job.results.push(entry);
                }
            }
        }
    }
    let mut report = empty_report(spec, command.name(), job.params);
    report.results = job.results;
    report.caveats = job.caveats;
    if opts.timing {
        report.timing_ms = Some(started.elapsed().as_millis() as u64);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = "[ring]\np = 7\nr = 3\nd = 2\n\n[ideal.J]\ngenerators = [\"x1\", \"x2\"]\n";

    fn cubic() -> JobSpec {
        JobSpec::parse(CUBIC).unwrap()
    }

    #[test]
    fn describe_gives_a_minimal_report() {
        let report = run(&cubic(), &Command::Describe, &Options::default()).unwrap();
        assert!(report.results.is_empty());
        assert!(report.caveats.is_empty());
        assert_eq!(report.ring.relation, "x0^3 + x1^3 + x2^3");
        assert_eq!(report.spec.ideals[0].generators, ["x1", "x2"]);
        assert_eq!(Report::from_json(&report.to_json()).unwrap(), report);
    }

    #[test]
    fn closure_command() {
        let report = run(
            &cubic(),
            &Command::TightClosure { power: 2 },
            &Options::default(),
        )
        .unwrap();
        let CommandResult::Closure(c) = &report.results[0] else {
            panic!("expected a closure");
        };
        assert_eq!(c.colength, 7);
        assert_eq!(c.maximal_ideal_power, 3);
        // x0^3 = -(x1^3 + x2^3) already lies in J^2
        assert_eq!(
            c.generators,
            ["x1^2", "x1*x2", "x2^2", "x0^2*x1", "x0^2*x2"]
        );
        assert_eq!(c.method, "closed_form");
        assert!(report.caveats[0].contains("7 > 1"));
    }

    #[test]
    fn certify_refutes_x0() {
        let cmd = Command::Certify {
            power: 1,
            element: "x0".into(),
            q_max: Some(343),
        };
        let report = run(&cubic(), &cmd, &Options::default()).unwrap();
        let CommandResult::Certificate(c) = &report.results[0] else {
            panic!("expected a certificate");
        };
        assert!(matches!(c.tight_closure, VerdictEntry::NotInTightClosure { q } if q <= 343));
        assert!(report.failures().is_empty());
    }

    #[test]
    fn input_errors_map_to_exit_two() {
        let bad_element = Command::Certify {
            power: 1,
            element: "y".into(),
            q_max: None,
        };
        let err = run(&cubic(), &bad_element, &Options::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let too_small = Command::Slice {
            power: 1,
            degree: 1,
            q_max: Some(3),
        };
        assert_eq!(
            run(&cubic(), &too_small, &Options::default())
                .unwrap_err()
                .exit_code(),
            2
        );
        let err = run(
            &cubic(),
            &Command::BuchsbaumCheck { max_n: Some(2) },
            &Options::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
