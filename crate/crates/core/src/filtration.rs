//! The tight filtration `{(J^n)*}` of a parameter ideal: tight Hilbert
//! function and coefficients, identity checks, reduction numbers.
//!
//! Every identity is decided by exact Gröbner equality. Closures come from
//! the closed form, so the whole module inherits its license check.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_rational::Ratio;
use thiserror::Error;

use crate::graded_ring::{maximal_ideal_power, RIdeal, RingError};
use crate::tight::{closed_form_tight_closure, HsopIdeal, TightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error(transparent)]
    Tight(#[from] TightError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("polynomial regime not reached; increase window")]
    NotPolynomial,
    #[error("need at least {needed} consecutive values to fit, got {got}")]
    WindowTooSmall { needed: usize, got: usize },
    #[error("fitted coefficients are not integers")]
    NonIntegralFit,
    #[error("cap {cap} reached before the terms vanished (partial sum {partial})")]
    CapReached { cap: u32, partial: i64 },
    #[error("j = {j} outside 1..={d}")]
    BadIndex { j: u32, d: u32 },
    #[error("the check starts at n = 3; n_max = {0} is too small")]
    RangeTooSmall(u32),
    #[error("no n ≤ {cap} with J·(m^e)^n = (m^e)^(n+1); closed form predicted {predicted:?}")]
    ReductionNotFound { cap: u32, predicted: Option<i64> },
    #[error("J(J^n)* = (J^(n+1))* fails at the cap n = {0}; raise the cap")]
    PersistenceUnverified(u32),
}

/// `⌊(r − 1 − d)/e⌋` with integer floor (so `⌊−1/1⌋ = −1`); `None` off the
/// Fermat family.
pub fn fermat_floor_term(j: &HsopIdeal) -> Option<i64> {
    let fermat = j.ring().fermat_params()?;
    let numer = fermat.r as i64 - 1 - fermat.d as i64;
    Some(numer.div_euclid(j.degree_e() as i64))
}

/// Values of a function on consecutive integers `start, start + 1, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub start: u32,
    pub values: Vec<u64>,
}

impl Series {
    pub fn at(&self, n: u32) -> Option<u64> {
        n.checked_sub(self.start)
            .and_then(|i| self.values.get(i as usize).copied())
    }
}

/// `e*_0, ..., e*_d` with the window they were solved on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightCoefficients {
    pub coefficients: Vec<i64>,
    /// `n`-range whose values determined and confirmed the fit.
    pub fit_window: (u32, u32),
    /// Extra point the fit was validated against.
    pub validation: u32,
}

fn binomial(n: i64, k: i64) -> Ratio<i128> {
    if k < 0 {
        return Ratio::from_integer(0);
    }
    // polynomial binomial: n(n−1)...(n−k+1)/k!, valid for negative n too
    let mut acc = Ratio::from_integer(1i128);
    for i in 0..k {
        acc = acc * Ratio::from_integer((n - i) as i128) / Ratio::from_integer((i + 1) as i128);
    }
    acc
}

/// Evaluates `Σ_i (−1)^i e_i · binom(n + d − 1 − i, d − i)`.
pub fn hilbert_polynomial(coefficients: &[i64], n: i64) -> i128 {
    let d = coefficients.len() as i64 - 1;
    let value = coefficients
        .iter()
        .enumerate()
        .fold(Ratio::from_integer(0i128), |acc, (i, &e)| {
            let i = i as i64;
            let sign = if i % 2 == 0 { 1 } else { -1 };
            acc + binomial(n + d - 1 - i, d - i) * Ratio::from_integer((sign * e) as i128)
        });
    value.to_integer()
}

/// Solves for `e_0..e_d` in the signed binomial basis from the first `d + 1`
/// values and checks every remaining value. The last value is reported as
/// the validation point.
pub fn fit_tight_coefficients(
    series: &Series,
    d: u32,
) -> Result<TightCoefficients, FiltrationError> {
    let unknowns = d as usize + 1;
    if series.values.len() < unknowns + 1 {
        return Err(FiltrationError::WindowTooSmall {
            needed: unknowns + 1,
            got: series.values.len(),
        });
    }
    let d = d as i64;
    // augmented system: row k is the equation at n = start + k
    let mut rows: Vec<Vec<Ratio<i128>>> = (0..unknowns)
        .map(|k| {
            let n = series.start as i64 + k as i64;
            let mut row: Vec<Ratio<i128>> = (0..unknowns as i64)
                .map(|i| {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    binomial(n + d - 1 - i, d - i) * Ratio::from_integer(sign)
                })
                .collect();
            row.push(Ratio::from_integer(series.values[k] as i128));
            row
        })
        .collect();
    for col in 0..unknowns {
        let pivot = (col..unknowns)
            .find(|&r| rows[r][col] != Ratio::from_integer(0))
            .ok_or(FiltrationError::NotPolynomial)?;
        rows.swap(col, pivot);
        let lead = rows[col][col];
        for x in rows[col].iter_mut() {
            *x /= lead;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && row[col] != Ratio::from_integer(0) {
                let factor = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= factor * *y;
                }
            }
        }
    }
    let mut coefficients = Vec::with_capacity(unknowns);
    for row in &rows {
        let v = row[unknowns];
        if !v.is_integer() {
            return Err(FiltrationError::NonIntegralFit);
        }
        coefficients.push(v.to_integer() as i64);
    }
    for (k, &value) in series.values.iter().enumerate() {
        let n = series.start as i64 + k as i64;
        if hilbert_polynomial(&coefficients, n) != value as i128 {
            return Err(FiltrationError::NotPolynomial);
        }
    }
    let last = series.start + series.values.len() as u32 - 1;
    Ok(TightCoefficients {
        coefficients,
        fit_window: (series.start, last - 1),
        validation: last,
    })
}

/// Per-`n` verdicts of an ideal identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheckReport {
    pub name: &'static str,
    /// `(n, holds)` in increasing `n`.
    pub per_n: Vec<(u32, bool)>,
    /// `false` when the identity's hypothesis fails; `per_n` is then empty.
    pub applicable: bool,
}

impl IdentityCheckReport {
    /// Conjunction of the per-`n` verdicts; vacuously true when not
    /// applicable.
    pub fn overall(&self) -> bool {
        self.per_n.iter().all(|&(_, ok)| ok)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuckabaMarleySum {
    pub j: u32,
    pub value: i64,
    /// `(n, ℓ((J^n)*/J(J^{n−1})*))` for `n = 1..=cap`.
    pub terms: Vec<(u32, u64)>,
    /// Least `n` from which every computed term is zero.
    pub vanishes_from: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionNumber {
    pub computed: u32,
    /// `⌊(r − 1 − d)/e⌋ + d`, when the ring is Fermat.
    pub closed_form: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightReductionNumber {
    pub r_star: u32,
    /// `⌊(r − 1 − d)/e⌋ + 1`, when the ring is Fermat.
    pub bound: Option<i64>,
    /// `(n, J(J^n)* = (J^{n+1})*)` for `n = 0..=cap`.
    pub per_n: Vec<(u32, bool)>,
    pub cap: u32,
}

impl TightReductionNumber {
    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.r_star as i64 <= b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReesVerdict {
    /// `r* ≤ d − 1`.
    pub cohen_macaulay: bool,
    pub r_star: u32,
    pub d: u32,
    /// `⌊(r − 1 − d)/e⌋ ≤ d − 2`, the sufficient condition in closed form.
    pub sufficient_condition_fired: bool,
}

/// The tight filtration of `J`, with closures computed once and cached.
pub struct TightFiltration {
    j: HsopIdeal,
    force: bool,
    closures: Mutex<BTreeMap<u32, RIdeal>>,
}

impl TightFiltration {
    /// Fails up front when the closed form is not licensed and `force` is
    /// off.
    pub fn new(j: HsopIdeal, force: bool) -> Result<Self, FiltrationError> {
        closed_form_tight_closure(&j, 1, force)?;
        Ok(TightFiltration {
            j,
            force,
            closures: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn hsop(&self) -> &HsopIdeal {
        &self.j
    }

    pub fn ideal(&self) -> &RIdeal {
        self.j.ideal()
    }

    fn d(&self) -> u32 {
        self.j.dimension()
    }

    /// `(J^n)*`, with `(J^0)* = R`.
    pub fn closure(&self, n: u32) -> RIdeal {
        let mut cache = self.closures.lock().expect("closure cache poisoned");
        if let Some(c) = cache.get(&n) {
            return c.clone();
        }
        let c = closed_form_tight_closure(&self.j, n, self.force)
            .expect("license checked in the constructor")
            .ideal;
        c.gb();
        cache.insert(n, c.clone());
        c
    }

    /// `H*(n) = ℓ(R/(J^n)*)`.
    pub fn tight_hilbert_function(&self, n: u32) -> Result<u64, FiltrationError> {
        Ok(self.closure(n).length()?)
    }

    pub fn tight_hilbert_series(&self, from: u32, to: u32) -> Result<Series, FiltrationError> {
        let values = (from..=to)
            .map(|n| self.tight_hilbert_function(n))
            .collect::<Result<_, _>>()?;
        Ok(Series {
            start: from,
            values,
        })
    }

    /// `⌊(r − 1 − d)/e⌋ + 1 + 3`, or 6 off the Fermat family.
    pub fn default_cap(&self) -> u32 {
        fermat_floor_term(&self.j).map_or(6, |t| (t + 4).max(1) as u32)
    }

    /// Fits `e*_0..e*_d` on `n ∈ [r* + 1, r* + d + 2]`, validating at
    /// `r* + d + 3`.
    pub fn coefficients(&self, r_star: u32) -> Result<TightCoefficients, FiltrationError> {
        let series = self.tight_hilbert_series(r_star + 1, r_star + self.d() + 3)?;
        fit_tight_coefficients(&series, self.d())
    }

    /// `e*_j = Σ_{n≥j} binom(n−1, j−1) ℓ((J^n)*/J(J^{n−1})*)`, summing
    /// terms for `n = 1..=cap`; the term at `cap` must vanish.
    pub fn huckaba_marley_coefficient(
        &self,
        j: u32,
        cap: u32,
    ) -> Result<HuckabaMarleySum, FiltrationError> {
        if j == 0 || j > self.d() {
            return Err(FiltrationError::BadIndex { j, d: self.d() });
        }
        let mut terms = Vec::new();
        for n in 1..=cap.max(j) {
            let lower = self.ideal().product(&self.closure(n - 1)).length()?;
            let upper = self.closure(n).length()?;
            terms.push((n, lower - upper));
        }
        let value: i64 = terms
            .iter()
            .filter(|&&(n, _)| n >= j)
            .map(|&(n, t)| binomial(n as i64 - 1, j as i64 - 1).to_integer() as i64 * t as i64)
            .sum();
        let vanishes_from = terms
            .iter()
            .rev()
            .take_while(|&&(_, t)| t == 0)
            .last()
            .map(|&(n, _)| n);
        match vanishes_from {
            Some(n) => Ok(HuckabaMarleySum {
                j,
                value,
                terms,
                vanishes_from: n,
            }),
            None => Err(FiltrationError::CapReached {
                cap: cap.max(j),
                partial: value,
            }),
        }
    }

    /// `J ∩ (J^{n+1})* = J(J^n)*` for `n = 0..=n_max`.
    pub fn vv_check(&self, n_max: u32) -> IdentityCheckReport {
        let per_n = (0..=n_max)
            .map(|n| {
                let left = self.ideal().intersect(&self.closure(n + 1));
                let right = self.ideal().product(&self.closure(n));
                (n, left.equals(&right))
            })
            .collect();
        IdentityCheckReport {
            name: "valabrega_valla",
            per_n,
            applicable: true,
        }
    }

    /// `(a_1², ..., a_d²) ∩ (J^n)* = (a_1², ..., a_d²)(J^{n−2})*` for
    /// `n = 3..=n_max`, `a_i` the generators of `J`.
    pub fn buchsbaum_check(&self, n_max: u32) -> Result<IdentityCheckReport, FiltrationError> {
        if n_max < 3 {
            return Err(FiltrationError::RangeTooSmall(n_max));
        }
        let squares = RIdeal::new(
            self.j.ring(),
            self.ideal().gens().gens().iter().map(|g| g * g),
        )?;
        let per_n = (3..=n_max)
            .map(|n| {
                let left = squares.intersect(&self.closure(n));
                let right = squares.product(&self.closure(n - 2));
                (n, left.equals(&right))
            })
            .collect();
        Ok(IdentityCheckReport {
            name: "buchsbaum",
            per_n,
            applicable: true,
        })
    }

    /// `J^n ∩ (J^{n+1})* = J^n J*` for `n = 0..=n_max`.
    pub fn itoh_check(&self, n_max: u32) -> IdentityCheckReport {
        let per_n = (0..=n_max)
            .map(|n| {
                let jn = self.ideal().power(n);
                let left = jn.intersect(&self.closure(n + 1));
                let right = jn.product(&self.closure(1));
                (n, left.equals(&right))
            })
            .collect();
        IdentityCheckReport {
            name: "itoh",
            per_n,
            applicable: true,
        }
    }

    /// Least `n ≥ 0` with `J·(m^e)^n = (m^e)^{n+1}`, searched up to the
    /// closed form plus 3 (or `cap` off the Fermat family).
    pub fn reduction_number_me(&self) -> Result<ReductionNumber, FiltrationError> {
        let e = self.j.degree_e();
        let closed_form = fermat_floor_term(&self.j).map(|t| t + self.d() as i64);
        let cap = closed_form
            .map_or(self.default_cap() as i64, |c| c + 3)
            .max(0) as u32;
        let ring = self.j.ring();
        for n in 0..=cap {
            let left = self.ideal().product(&maximal_ideal_power(ring, e * n));
            let right = maximal_ideal_power(ring, e * (n + 1));
            if left.equals(&right) {
                return Ok(ReductionNumber {
                    computed: n,
                    closed_form,
                });
            }
        }
        Err(FiltrationError::ReductionNotFound {
            cap,
            predicted: closed_form,
        })
    }

    /// Least `n₀` with `J(J^n)* = (J^{n+1})*` for every `n ∈ [n₀, cap]`.
    pub fn tight_reduction_number(
        &self,
        cap: u32,
    ) -> Result<TightReductionNumber, FiltrationError> {
        let per_n: Vec<(u32, bool)> = (0..=cap)
            .map(|n| {
                let left = self.ideal().product(&self.closure(n));
                (n, left.equals(&self.closure(n + 1)))
            })
            .collect();
        if !per_n.last().is_some_and(|&(_, ok)| ok) {
            return Err(FiltrationError::PersistenceUnverified(cap));
        }
        let r_star = per_n
            .iter()
            .rev()
            .take_while(|&&(_, ok)| ok)
            .last()
            .map_or(cap, |&(n, _)| n);
        Ok(TightReductionNumber {
            r_star,
            bound: fermat_floor_term(&self.j).map(|t| t + 1),
            per_n,
            cap,
        })
    }

    /// Cohen–Macaulayness of the tight Rees algebra: holds iff `r* ≤ d − 1`.
    pub fn rees_cm_verdict(&self, r_star: u32) -> ReesVerdict {
        let d = self.d();
        ReesVerdict {
            cohen_macaulay: r_star < d,
            r_star,
            d,
            sufficient_condition_fired: fermat_floor_term(&self.j)
                .is_some_and(|t| t <= d as i64 - 2),
        }
    }

    /// If `J* = J`, checks `(J^n)* = J^n` for `n = 2..=n_max`.
    pub fn tightly_closed_powers_check(&self, n_max: u32) -> IdentityCheckReport {
        let applicable = self.closure(1).equals(self.ideal());
        let per_n = if applicable {
            (2..=n_max)
                .map(|n| (n, self.closure(n).equals(&self.ideal().power(n))))
                .collect()
        } else {
            Vec::new()
        };
        IdentityCheckReport {
            name: "tightly_closed_powers",
            per_n,
            applicable,
        }
    }
}
