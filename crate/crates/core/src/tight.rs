//! Tight closure of parameter ideals in Fermat hypersurfaces.
//!
//! Three sources of answers, kept apart in every result:
//!
//! * the closed form `(J^n)* = J^n + m^{(n−1)e + de}` for a homogeneous
//!   system of parameters `J` of degree `e`, valid on Fermat rings with
//!   `p > (d−1)r − d`, `p ∤ r`;
//! * Frobenius certificates `c·z^q ∈ K^[q]` against a fixed test element `c`,
//!   which can refute membership at a single `q` but only ever give finite
//!   evidence for it;
//! * a degree-by-degree linear-algebra approximation, exploiting that
//!   `z ↦ c·z^q` is additive in characteristic `p`.
//!
//! Normal forms of `z^q` are computed along a ladder `q = p, p², ...`: if
//! `z^q ≡ g` modulo `K^[q] + (f)` then `z^{pq} ≡ g^p` modulo
//! `K^[pq] + (f)`, because `(K^[q] + (f))^[p] ⊆ K^[pq] + (f)`. Each rung
//! therefore starts from a reduced polynomial instead of the full power.

use std::fmt;

use thiserror::Error;

use crate::ffpoly::{Monomial, Poly, PolyError};
use crate::graded_ring::{maximal_ideal_power, RIdeal, RingError, RingRef};
use crate::groebner::{self, GroebnerBasis};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TightError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("a system of parameters needs {expected} generators, got {found}")]
    WrongGeneratorCount { expected: usize, found: usize },
    #[error("generators are not homogeneous")]
    NotHomogeneous,
    #[error("generators have different degrees: {0:?}")]
    MixedDegrees(Vec<u32>),
    #[error("generators must have positive degree")]
    ConstantGenerator,
    #[error("ideal is not m-primary: no pure power of {var} among the leading terms")]
    NotMPrimary { var: String },
    #[error("the closed form needs a Fermat ring x0^r + ... + xd^r")]
    NotFermat,
    #[error("closed form not licensed: p > (d-1)r - d fails (p = {p}, (d-1)r - d = {bound})")]
    Unlicensed { p: u64, bound: i64 },
    #[error("test element must be homogeneous and nonzero in R")]
    BadTestElement,
    #[error("no default test element outside Fermat rings; supply one")]
    NoDefaultTestElement,
    #[error("q_max = {q_max} is below the characteristic {p}")]
    QMaxTooSmall { q_max: u64, p: u64 },
}

/// An ideal generated by a homogeneous system of parameters of common
/// degree `e`.
#[derive(Debug, Clone)]
pub struct HsopIdeal {
    ideal: RIdeal,
    degree_e: u32,
}

impl HsopIdeal {
    /// Checks, in order: generator count equals `dim R`, homogeneity,
    /// finite colength, and a common positive degree.
    pub fn validate(ideal: RIdeal) -> Result<Self, TightError> {
        let ring = ideal.ring().clone();
        let gens = ideal.gens().gens();
        if gens.len() != ring.dimension() {
            return Err(TightError::WrongGeneratorCount {
                expected: ring.dimension(),
                found: gens.len(),
            });
        }
        if !ideal.is_homogeneous() {
            return Err(TightError::NotHomogeneous);
        }
        match ideal.length() {
            Ok(_) => {}
            Err(RingError::NotMPrimary { var }) => return Err(TightError::NotMPrimary { var }),
            Err(e) => return Err(e.into()),
        }
        let degrees: Vec<u32> = gens.iter().map(|g| g.degree().unwrap_or(0)).collect();
        if degrees.windows(2).any(|w| w[0] != w[1]) {
            return Err(TightError::MixedDegrees(degrees));
        }
        let degree_e = degrees.first().copied().unwrap_or(0);
        if degree_e == 0 {
            return Err(TightError::ConstantGenerator);
        }
        Ok(HsopIdeal { ideal, degree_e })
    }

    pub fn ideal(&self) -> &RIdeal {
        &self.ideal
    }

    pub fn ring(&self) -> &RingRef {
        self.ideal.ring()
    }

    pub fn degree_e(&self) -> u32 {
        self.degree_e
    }

    /// `d = dim R`, also the number of generators.
    pub fn dimension(&self) -> u32 {
        self.ring().dimension() as u32
    }
}

/// How a closure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureMethod {
    ClosedForm,
    SliceApproximation,
}

impl fmt::Display for ClosureMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureMethod::ClosedForm => "closed_form",
            ClosureMethod::SliceApproximation => "slice_approximation",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub power: u32,
    pub ideal: RIdeal,
    pub method: ClosureMethod,
    /// The ring satisfies the hypotheses of the closed form.
    pub licensed: bool,
    /// Produced outside those hypotheses on request.
    pub conjectural: bool,
}

/// Checks the hypotheses under which the closed form is known to hold.
pub fn check_license(ring: &RingRef) -> Result<(), TightError> {
    let fermat = ring.fermat_params().ok_or(TightError::NotFermat)?;
    if fermat.formula_licensed {
        Ok(())
    } else {
        Err(TightError::Unlicensed {
            p: ring.char().get() as u64,
            bound: (fermat.d as i64 - 1) * fermat.r as i64 - fermat.d as i64,
        })
    }
}

/// Degree from which `m^t ⊆ (J^n)*` in the closed form: `(n−1)e + de`.
pub fn closure_socle_bound(j: &HsopIdeal, n: u32) -> u32 {
    (n.saturating_sub(1) + j.dimension()) * j.degree_e()
}

/// `(J^n)* = J^n + m^{(n−1)e + de}`. Refuses unlicensed rings unless
/// `force` is set, in which case the result is marked conjectural.
/// `n = 0` gives the unit ideal.
pub fn closed_form_tight_closure(
    j: &HsopIdeal,
    n: u32,
    force: bool,
) -> Result<ClosureResult, TightError> {
    let licensed = match check_license(j.ring()) {
        Ok(()) => true,
        Err(e) if !force => return Err(e),
        Err(_) => false,
    };
    let ideal = if n == 0 {
        RIdeal::unit(j.ring())
    } else {
        j.ideal()
            .power(n)
            .sum(&maximal_ideal_power(j.ring(), closure_socle_bound(j, n)))
    };
    Ok(ClosureResult {
        power: n,
        ideal,
        method: ClosureMethod::ClosedForm,
        licensed,
        conjectural: !licensed,
    })
}

/// Where a test element came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestElementSource {
    /// `x0^{r−1}`, a unit multiple of `∂f/∂x0`.
    Jacobian,
    UserSupplied,
}

#[derive(Debug, Clone)]
pub struct TestElement {
    c: Poly,
    source: TestElementSource,
}

impl TestElement {
    /// Rejects `c` unless it is homogeneous and nonzero in `R`.
    pub fn new(ring: &RingRef, c: Poly, source: TestElementSource) -> Result<Self, TightError> {
        if c.nvars() != ring.nvars() || c.char() != ring.char() {
            return Err(RingError::RingMismatch.into());
        }
        if !c.is_homogeneous() || ring.reduce(&c).is_zero() {
            return Err(TightError::BadTestElement);
        }
        Ok(TestElement { c, source })
    }

    pub fn poly(&self) -> &Poly {
        &self.c
    }

    pub fn source(&self) -> TestElementSource {
        self.source
    }
}

/// `c = x0^{r−1}` on a Fermat ring.
pub fn default_test_element(ring: &RingRef) -> Result<TestElement, TightError> {
    let fermat = ring
        .fermat_params()
        .ok_or(TightError::NoDefaultTestElement)?;
    let c = ring
        .poly_ring()
        .monomial(Monomial::var_power(0, fermat.r - 1));
    TestElement::new(ring, c, TestElementSource::Jacobian)
}

/// Outcome of a finite Frobenius scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `c·z^q ∉ K^[q]`: refuted, given that `c` is a test element.
    NotInTightClosure { q: u64 },
    /// `c·z^q ∈ K^[q]` for every scanned `q ≤ q_max`.
    EvidenceIn { q_max: u64 },
    /// `z^q ∈ K^[q]` at this `q`: a definite Frobenius closure member.
    FrobeniusClosureMember { q: u64 },
    /// `z^q ∉ K^[q]` for every scanned `q ≤ q_max`.
    NoFrobeniusWitness { q_max: u64 },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotInTightClosure { q } => write!(f, "NOT_IN_TIGHT_CLOSURE(q = {q})"),
            Verdict::EvidenceIn { q_max } => write!(f, "EVIDENCE_IN(q_max = {q_max})"),
            Verdict::FrobeniusClosureMember { q } => {
                write!(f, "FROBENIUS_CLOSURE_MEMBER(q = {q})")
            }
            Verdict::NoFrobeniusWitness { q_max } => {
                write!(f, "NO_FROBENIUS_WITNESS(q_max = {q_max})")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub element: Poly,
    pub verdict: Verdict,
    /// The test element the verdict depends on, if any.
    pub test_element: Option<TestElementSource>,
}

/// Cached Gröbner bases of `K^[q] + (f)` for `q = p, p², ...`.
pub struct FrobeniusLadder<'a> {
    ideal: &'a RIdeal,
    rungs: Vec<GroebnerBasis>,
}

impl<'a> FrobeniusLadder<'a> {
    pub fn new(ideal: &'a RIdeal) -> Self {
        FrobeniusLadder {
            ideal,
            rungs: Vec::new(),
        }
    }

    fn p(&self) -> u64 {
        self.ideal.ring().char().get() as u64
    }

    /// Basis for `q = p^(k+1)`.
    fn rung(&mut self, k: usize) -> &GroebnerBasis {
        while self.rungs.len() <= k {
            let q = self.p().pow(self.rungs.len() as u32 + 1);
            let bracket = self
                .ideal
                .bracket_power(q)
                .expect("q is a power of p by construction");
            self.rungs.push(bracket.gb().clone());
        }
        &self.rungs[k]
    }

    /// Powers `q = p, p², ... ≤ q_max`.
    pub fn powers(&self, q_max: u64) -> Vec<u64> {
        let p = self.p();
        std::iter::successors(Some(p), |&q| q.checked_mul(p))
            .take_while(|&q| q <= q_max)
            .collect()
    }

    /// Normal forms of `z^q` modulo `K^[q] + (f)` for every `q` in
    /// [`Self::powers`]. Once a rung is zero all later ones are too.
    pub fn frobenius_normal_forms(&mut self, z: &Poly, q_max: u64) -> Vec<Poly> {
        let p = self.p();
        let steps = self.powers(q_max).len();
        let mut out = Vec::with_capacity(steps);
        let mut current = z.clone();
        for k in 0..steps {
            if !current.is_zero() {
                let lifted = current.frobenius_pow(p).expect("p is a power of p");
                current = groebner::normal_form(&lifted, self.rung(k));
            }
            out.push(current.clone());
        }
        out
    }

    /// `NF(c·g)` modulo the rung of `q = p^(k+1)`, where `g` is the rung's
    /// normal form of `z^q`.
    fn times_test_element(&mut self, c: &Poly, g: &Poly, k: usize) -> Poly {
        if g.is_zero() {
            return g.clone();
        }
        groebner::normal_form(&(c * g), self.rung(k))
    }
}

fn require_q_max(ideal: &RIdeal, q_max: u64) -> Result<(), TightError> {
    let p = ideal.ring().char().get() as u64;
    if q_max < p {
        return Err(TightError::QMaxTooSmall { q_max, p });
    }
    Ok(())
}

/// `c·z^q ∈ K^[q] + (f)`, computed directly without the ladder.
pub fn frobenius_certificate(
    z: &Poly,
    k: &RIdeal,
    c: &TestElement,
    q: u64,
) -> Result<bool, TightError> {
    let bracket = k.bracket_power(q)?;
    let zq = z.frobenius_pow(q)?;
    Ok(bracket.member(&(c.poly() * &zq)))
}

/// Scans `q = p, p², ... ≤ q_max`; the first failure refutes membership in
/// `K*`, otherwise the scan is evidence for it.
pub fn certify_non_membership(
    z: &Poly,
    k: &RIdeal,
    c: &TestElement,
    q_max: u64,
) -> Result<Certificate, TightError> {
    require_q_max(k, q_max)?;
    let mut ladder = FrobeniusLadder::new(k);
    let qs = ladder.powers(q_max);
    let forms = ladder.frobenius_normal_forms(z, q_max);
    let mut verdict = Verdict::EvidenceIn { q_max };
    for (idx, (q, g)) in qs.iter().zip(&forms).enumerate() {
        if !ladder.times_test_element(c.poly(), g, idx).is_zero() {
            verdict = Verdict::NotInTightClosure { q: *q };
            break;
        }
    }
    Ok(Certificate {
        element: z.clone(),
        verdict,
        test_element: Some(c.source()),
    })
}

/// Least `q ≤ q_max` with `z^q ∈ K^[q]`, if any.
pub fn frobenius_closure_member(
    z: &Poly,
    k: &RIdeal,
    q_max: u64,
) -> Result<Certificate, TightError> {
    require_q_max(k, q_max)?;
    let mut ladder = FrobeniusLadder::new(k);
    let qs = ladder.powers(q_max);
    let forms = ladder.frobenius_normal_forms(z, q_max);
    let verdict = qs
        .iter()
        .zip(&forms)
        .find(|(_, g)| g.is_zero())
        .map_or(Verdict::NoFrobeniusWitness { q_max }, |(&q, _)| {
            Verdict::FrobeniusClosureMember { q }
        });
    Ok(Certificate {
        element: z.clone(),
        verdict,
        test_element: None,
    })
}

/// The degree-`t` part of `K*` as approximated by a finite Frobenius scan.
#[derive(Debug, Clone)]
pub struct DegreeSlice {
    pub degree: u32,
    /// `dim R_t`.
    pub ambient_dim: usize,
    /// Basis of the subspace, in reduced echelon form over the standard
    /// monomials of `R_t`.
    pub basis: Vec<Poly>,
    /// Dimension of the accumulated kernel after each `q`.
    pub kernel_dims: Vec<(u64, usize)>,
}

impl DegreeSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `{ z ∈ R_t : c·z^q ∈ K^[q] for all q = p, ..., ≤ q_max }`.
///
/// Over-approximates `(K*)_t`; with a genuine test element the two agree once
/// `q_max` is large enough.
pub fn tight_closure_degree_slice(
    k: &RIdeal,
    t: u32,
    c: &TestElement,
    q_max: u64,
) -> Result<DegreeSlice, TightError> {
    require_q_max(k, q_max)?;
    let ring = k.ring().clone();
    let p = ring.char();
    let monomials = ring.degree_basis(t);
    let n = monomials.len();
    let mut ladder = FrobeniusLadder::new(k);
    let qs = ladder.powers(q_max);
    let forms: Vec<Vec<Poly>> = monomials
        .iter()
        .map(|&m| ladder.frobenius_normal_forms(&ring.poly_ring().monomial(m), q_max))
        .collect();

    // rows: current kernel basis, as coordinate vectors over `monomials`
    let mut kernel: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    let mut kernel_dims = Vec::with_capacity(qs.len());
    for (idx, &q) in qs.iter().enumerate() {
        if !kernel.is_empty() {
            let images: Vec<Poly> = (0..n)
                .map(|i| ladder.times_test_element(c.poly(), &forms[i][idx], idx))
                .collect();
            let mut columns: Vec<Monomial> = images
                .iter()
                .flat_map(|g| g.terms().iter().map(|&(m, _)| m))
                .collect();
            columns.sort_unstable_by(|a, b| b.cmp(a));
            columns.dedup();
            let coords: Vec<Vec<u32>> = images
                .iter()
                .map(|g| columns.iter().map(|m| g.coeff(m)).collect())
                .collect();
            // image of each kernel vector, then the kernel of that map
            let restricted: Vec<Vec<u32>> = kernel
                .iter()
                .map(|v| {
                    let mut row = vec![0u32; columns.len()];
                    for (a, img) in v.iter().zip(&coords) {
                        if *a == 0 {
                            continue;
                        }
                        for (r, &x) in row.iter_mut().zip(img) {
                            *r = p.add(*r, p.mul(*a, x));
                        }
                    }
                    row
                })
                .collect();
            let combos = linalg::left_kernel(&restricted, p);
            let mut next: Vec<Vec<u32>> = combos
                .iter()
                .map(|w| {
                    let mut v = vec![0u32; n];
                    for (a, row) in w.iter().zip(&kernel) {
                        if *a == 0 {
                            continue;
                        }
                        for (x, &y) in v.iter_mut().zip(row) {
                            *x = p.add(*x, p.mul(*a, y));
                        }
                    }
                    v
                })
                .collect();
            linalg::row_echelon(&mut next, p);
            kernel = next;
        }
        kernel_dims.push((q, kernel.len()));
    }

    let basis = kernel
        .iter()
        .map(|v| {
            Poly::from_terms(
                p,
                ring.nvars(),
                v.iter().zip(&monomials).map(|(&a, &m)| (m, a)),
            )
        })
        .collect();
    Ok(DegreeSlice {
        degree: t,
        ambient_dim: n,
        basis,
        kernel_dims,
    })
}
