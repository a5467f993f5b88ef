//! The graded hypersurface ring `R = 𝔽_p[x0..xd]/(f)` and its homogeneous
//! ideals.
//!
//! Ideals of `R` are represented by lifts to the ambient polynomial ring with
//! the relation `f` adjoined before any Gröbner computation, so one engine
//! serves both rings.
//!
//! Lengths are computed by counting standard monomials degree by degree. For
//! an m-primary ideal the set of standard monomials is closed under taking
//! divisors, so once a degree contributes nothing every higher degree is
//! empty too; the summation stops there.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::ffpoly::{
    monomials_of_degree, Monomial, Poly, PolyError, PolyRing, PrimeChar, MAX_VARS,
};
use crate::groebner::{self, GroebnerBasis, IdealGens};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("p divides r (p = {p}, r = {r}): the Fermat hypersurface must have p ∤ r")]
    CharDividesExponent { p: u64, r: u32 },
    #[error("invalid Fermat parameters: {0}")]
    BadParameters(String),
    #[error("the relation must be a nonzero homogeneous polynomial")]
    BadRelation,
    #[error("ideal is not homogeneous")]
    NotHomogeneous,
    #[error("ideal is not m-primary: no pure power of {var} among the leading terms")]
    NotMPrimary { var: String },
    #[error("generator lives in a different ring")]
    RingMismatch,
}

/// Parameters of a Fermat hypersurface `x0^r + ... + xd^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FermatParams {
    pub r: u32,
    pub d: u32,
    /// `p > (d − 1)·r − d`, the inequality under which the closed-form
    /// tight closure is known to hold (together with `p ∤ r`, `r, d ≥ 2`).
    pub formula_licensed: bool,
}

/// `R = S/(f)` for a homogeneous relation `f`, or `S` itself when there is
/// no relation.
#[derive(Debug)]
pub struct HypersurfaceRing {
    poly_ring: PolyRing,
    relation: Option<Poly>,
    fermat: Option<FermatParams>,
    zero_gb: GroebnerBasis,
}

pub type RingRef = Arc<HypersurfaceRing>;

impl HypersurfaceRing {
    /// `𝔽_p[x0, ..., xd] / (x0^r + ... + xd^r)`.
    pub fn fermat(p: u64, r: u32, d: u32) -> Result<RingRef, RingError> {
        let char = PrimeChar::new(p)?;
        if r < 2 || d < 2 {
            return Err(RingError::BadParameters(format!(
                "need r ≥ 2 and d ≥ 2, got r = {r}, d = {d}"
            )));
        }
        if (r as u64).is_multiple_of(p) {
            return Err(RingError::CharDividesExponent { p, r });
        }
        if d as usize + 1 >= MAX_VARS {
            return Err(PolyError::TooManyVariables(d as usize + 1).into());
        }
        let poly_ring = PolyRing::indexed(char, d as usize + 1)?;
        let relation = (0..=d as usize).fold(poly_ring.zero(), |acc, i| {
            &acc + &poly_ring.monomial(Monomial::var_power(i, r))
        });
        let bound = (d as i64 - 1) * r as i64 - d as i64;
        let fermat = FermatParams {
            r,
            d,
            formula_licensed: (p as i64) > bound,
        };
        Ok(Arc::new(Self::build(
            poly_ring,
            Some(relation),
            Some(fermat),
        )))
    }

    /// `𝔽_p[vars] / (relation)` for an arbitrary nonzero homogeneous relation.
    pub fn general(p: u64, vars: Vec<String>, relation: &str) -> Result<RingRef, RingError> {
        let poly_ring = PolyRing::new(PrimeChar::new(p)?, vars)?;
        let f = poly_ring.parse(relation)?;
        if f.is_zero() || !f.is_homogeneous() || f.is_constant() {
            return Err(RingError::BadRelation);
        }
        Ok(Arc::new(Self::build(poly_ring, Some(f), None)))
    }

    /// The polynomial ring itself (no relation).
    pub fn polynomial(p: u64, vars: Vec<String>) -> Result<RingRef, RingError> {
        let poly_ring = PolyRing::new(PrimeChar::new(p)?, vars)?;
        Ok(Arc::new(Self::build(poly_ring, None, None)))
    }

    fn build(poly_ring: PolyRing, relation: Option<Poly>, fermat: Option<FermatParams>) -> Self {
        let gens = IdealGens::new(poly_ring.char(), poly_ring.nvars(), relation.clone());
        HypersurfaceRing {
            zero_gb: gens.groebner(),
            poly_ring,
            relation,
            fermat,
        }
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.poly_ring
    }

    pub fn char(&self) -> PrimeChar {
        self.poly_ring.char()
    }

    pub fn nvars(&self) -> usize {
        self.poly_ring.nvars()
    }

    pub fn var_names(&self) -> &[String] {
        self.poly_ring.names()
    }

    pub fn relation(&self) -> Option<&Poly> {
        self.relation.as_ref()
    }

    pub fn fermat_params(&self) -> Option<FermatParams> {
        self.fermat
    }

    pub fn formula_licensed(&self) -> bool {
        self.fermat.is_some_and(|f| f.formula_licensed)
    }

    /// Krull dimension: one less than the variable count when there is a
    /// relation.
    pub fn dimension(&self) -> usize {
        self.nvars() - usize::from(self.relation.is_some())
    }

    pub fn parse(&self, text: &str) -> Result<Poly, PolyError> {
        self.poly_ring.parse(text)
    }

    pub fn format(&self, f: &Poly) -> String {
        self.poly_ring.format(f)
    }

    /// Normal form of `f` modulo the relation: the canonical representative
    /// of its class in `R`.
    pub fn reduce(&self, f: &Poly) -> Poly {
        groebner::normal_form(f, &self.zero_gb)
    }

    /// Standard monomials of degree `t`: a basis of `R_t`.
    pub fn degree_basis(&self, t: u32) -> Vec<Monomial> {
        monomials_of_degree(self.nvars(), t)
            .into_iter()
            .filter(|m| !self.zero_gb.is_leading_multiple(m))
            .collect()
    }
}

impl fmt::Display for HypersurfaceRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.char(), self.var_names().join(", "))?;
        if let Some(rel) = &self.relation {
            write!(f, "/({})", self.format(rel))?;
        }
        Ok(())
    }
}

/// A homogeneous ideal of `R`, stored as lifts; the relation is adjoined
/// implicitly. The Gröbner basis is computed on first use and cached.
#[derive(Debug, Clone)]
pub struct RIdeal {
    ring: RingRef,
    gens: IdealGens,
    gb: OnceLock<GroebnerBasis>,
}

impl RIdeal {
    pub fn new(ring: &RingRef, gens: impl IntoIterator<Item = Poly>) -> Result<Self, RingError> {
        let gens: Vec<Poly> = gens.into_iter().collect();
        if gens
            .iter()
            .any(|g| g.nvars() != ring.nvars() || g.char() != ring.char())
        {
            return Err(RingError::RingMismatch);
        }
        Ok(Self::from_gens(
            ring,
            IdealGens::new(ring.char(), ring.nvars(), gens),
        ))
    }

    fn from_gens(ring: &RingRef, gens: IdealGens) -> Self {
        RIdeal {
            ring: Arc::clone(ring),
            gens,
            gb: OnceLock::new(),
        }
    }

    pub fn parse(ring: &RingRef, gens: &[&str]) -> Result<Self, RingError> {
        let polys = gens
            .iter()
            .map(|g| ring.parse(g))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ring, polys)
    }

    pub fn zero(ring: &RingRef) -> Self {
        Self::from_gens(ring, IdealGens::zero(ring.char(), ring.nvars()))
    }

    pub fn unit(ring: &RingRef) -> Self {
        Self::from_gens(ring, IdealGens::unit(ring.char(), ring.nvars()))
    }

    /// The homogeneous maximal ideal `m = (x0, ..., xd)`.
    pub fn maximal(ring: &RingRef) -> Self {
        maximal_ideal_power(ring, 1)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// Generators as given (relation not included).
    pub fn gens(&self) -> &IdealGens {
        &self.gens
    }

    /// Generators with the relation adjoined.
    pub fn full_gens(&self) -> IdealGens {
        self.gens.with(self.ring.relation.clone())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.is_homogeneous()
    }

    /// Reduced Gröbner basis of the lifts together with the relation.
    pub fn gb(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| self.full_gens().groebner())
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit()
    }

    pub fn member(&self, f: &Poly) -> bool {
        groebner::member(f, self.gb())
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        groebner::normal_form(f, self.gb())
    }

    pub fn is_subset_of(&self, other: &RIdeal) -> bool {
        self.gens.gens().iter().all(|g| other.member(g))
    }

    /// Equality as ideals of `R`.
    pub fn equals(&self, other: &RIdeal) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    pub fn sum(&self, other: &RIdeal) -> RIdeal {
        Self::from_gens(&self.ring, groebner::ideal_sum(&self.gens, &other.gens))
    }

    pub fn product(&self, other: &RIdeal) -> RIdeal {
        Self::from_gens(&self.ring, groebner::ideal_product(&self.gens, &other.gens))
    }

    pub fn power(&self, n: u32) -> RIdeal {
        Self::from_gens(&self.ring, groebner::ideal_power(&self.gens, n))
    }

    /// `K^[q]`: q-th powers of the lifts (plus the relation, implicitly).
    pub fn bracket_power(&self, q: u64) -> Result<RIdeal, PolyError> {
        Ok(Self::from_gens(
            &self.ring,
            groebner::bracket_power(&self.gens, q)?,
        ))
    }

    /// Intersection in `R`, computed on the reduced bases of both lifts.
    pub fn intersect(&self, other: &RIdeal) -> RIdeal {
        let cut = groebner::intersect(&self.gb().to_gens(), &other.gb().to_gens());
        Self::from_gens(&self.ring, cut)
    }

    /// `self :_R other`.
    pub fn colon(&self, other: &RIdeal) -> RIdeal {
        let quotient = groebner::colon(&self.gb().to_gens(), &other.gens);
        Self::from_gens(&self.ring, quotient)
    }

    /// Formats the generators with the ring's variable names.
    pub fn gen_strings(&self) -> Vec<String> {
        self.gens
            .gens()
            .iter()
            .map(|g| self.ring.format(g))
            .collect()
    }

    /// Variables without a pure power among the leading monomials; empty
    /// exactly when the quotient has finite length.
    fn variables_without_pure_power(&self) -> Vec<usize> {
        let gb = self.gb();
        if gb.is_unit() {
            return Vec::new();
        }
        let mut seen = vec![false; self.ring.nvars()];
        for m in gb.leading_monomials() {
            if let Some(i) = m.pure_power_var() {
                seen[i] = true;
            }
        }
        (0..seen.len()).filter(|&i| !seen[i]).collect()
    }

    pub fn is_m_primary(&self) -> bool {
        self.variables_without_pure_power().is_empty()
    }

    fn require_m_primary(&self) -> Result<(), RingError> {
        if !self.is_homogeneous() {
            return Err(RingError::NotHomogeneous);
        }
        match self.variables_without_pure_power().first() {
            None => Ok(()),
            Some(&i) => Err(RingError::NotMPrimary {
                var: self.ring.var_names()[i].clone(),
            }),
        }
    }

    /// `dim_𝔽p (R/K)_t`, counted as standard monomials of degree `t`.
    pub fn hilbert_function(&self, t: u32) -> u64 {
        let gb = self.gb();
        monomials_of_degree(self.ring.nvars(), t)
            .iter()
            .filter(|m| !gb.is_leading_multiple(m))
            .count() as u64
    }

    /// The Hilbert function of `R/K` up to its last nonzero degree.
    pub fn hilbert_table(&self) -> Result<HilbertTable, RingError> {
        self.require_m_primary()?;
        let mut values = Vec::new();
        loop {
            let h = self.hilbert_function(values.len() as u32);
            if h == 0 {
                break;
            }
            values.push(h);
        }
        Ok(HilbertTable { values })
    }

    /// `ℓ(R/K)` for an m-primary homogeneous ideal.
    pub fn length(&self) -> Result<u64, RingError> {
        Ok(self.hilbert_table()?.total_length())
    }

    /// Standard monomials of `R/K` in degree `t`.
    pub fn standard_monomials(&self, t: u32) -> Vec<Monomial> {
        let gb = self.gb();
        monomials_of_degree(self.ring.nvars(), t)
            .into_iter()
            .filter(|m| !gb.is_leading_multiple(m))
            .collect()
    }

    /// Degrees of a basis of `Soc(R/K) = (K : m)/K`, with multiplicity.
    pub fn socle_degrees(&self) -> Result<DegreeMultiset, RingError> {
        let table = self.hilbert_table()?;
        let wider = self.colon(&RIdeal::maximal(&self.ring));
        let mut out = DegreeMultiset::default();
        for (t, &h) in table.values.iter().enumerate() {
            let h_wider = wider.hilbert_function(t as u32);
            debug_assert!(h_wider <= h);
            out.insert(t as i64, h - h_wider);
        }
        Ok(out)
    }

    /// Last twists `b_i` of a minimal free resolution over a polynomial ring
    /// in `d` variables of degree `e`, read off from the socle:
    /// `b_i = (socle degree) + d·e`.
    pub fn infer_last_twists(&self, d: u32, e: u32) -> Result<DegreeMultiset, RingError> {
        Ok(self.socle_degrees()?.shifted(d as i64 * e as i64))
    }
}

/// `m^n`, generated by all monomials of degree `n`; `n = 0` is the unit ideal.
pub fn maximal_ideal_power(ring: &RingRef, n: u32) -> RIdeal {
    let gens = monomials_of_degree(ring.nvars(), n)
        .into_iter()
        .map(|m| ring.poly_ring().monomial(m));
    RIdeal::from_gens(ring, IdealGens::new(ring.char(), ring.nvars(), gens))
}

/// `t ↦ dim (R/K)_t` for `t = 0..len`, all later values zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertTable {
    pub values: Vec<u64>,
}

impl HilbertTable {
    pub fn total_length(&self) -> u64 {
        self.values.iter().sum()
    }

    pub fn value(&self, t: u32) -> u64 {
        self.values.get(t as usize).copied().unwrap_or(0)
    }
}

/// A finite multiset of integers (degrees or twists).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreeMultiset(BTreeMap<i64, u64>);

impl DegreeMultiset {
    pub fn insert(&mut self, value: i64, count: u64) {
        if count > 0 {
            *self.0.entry(value).or_insert(0) += count;
        }
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn multiplicity(&self, value: i64) -> u64 {
        self.0.get(&value).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.0.iter().map(|(&v, &c)| (v, c))
    }

    /// Sorted with repetitions.
    pub fn to_vec(&self) -> Vec<i64> {
        self.iter()
            .flat_map(|(v, c)| std::iter::repeat_n(v, c as usize))
            .collect()
    }

    pub fn shifted(&self, by: i64) -> DegreeMultiset {
        DegreeMultiset(self.0.iter().map(|(&v, &c)| (v + by, c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn fermat_constructor() {
        let r = HypersurfaceRing::fermat(7, 3, 2).unwrap();
        assert_eq!(r.nvars(), 3);
        assert_eq!(r.format(r.relation().unwrap()), "x0^3 + x1^3 + x2^3");
        assert!(r.formula_licensed());
        assert_eq!(r.dimension(), 2);

        let r = HypersurfaceRing::fermat(5, 3, 3).unwrap();
        assert_eq!(r.nvars(), 4);
        assert!(r.formula_licensed());

        assert_eq!(
            HypersurfaceRing::fermat(3, 3, 2).unwrap_err(),
            RingError::CharDividesExponent { p: 3, r: 3 }
        );
        assert!(HypersurfaceRing::fermat(4, 3, 2).is_err());
        // (d-1)r - d = 3·7 - 4 = 17 ≥ 17
        assert!(!HypersurfaceRing::fermat(17, 7, 4)
            .unwrap()
            .formula_licensed());
    }

    #[test]
    fn general_constructor_checks_relation() {
        let vars = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        let r = HypersurfaceRing::general(5, vars.clone(), "x^2 + y*z").unwrap();
        assert_eq!(r.dimension(), 2);
        assert!(r.fermat_params().is_none());
        assert_eq!(
            HypersurfaceRing::general(5, vars.clone(), "x^2 + y").unwrap_err(),
            RingError::BadRelation
        );
        assert!(HypersurfaceRing::general(5, vars, "x + w").is_err());
    }

    #[test]
    fn maximal_ideal_powers() {
        let r = HypersurfaceRing::fermat(7, 3, 2).unwrap();
        assert!(maximal_ideal_power(&r, 0).is_unit());
        assert_eq!(maximal_ideal_power(&r, 2).gens().len(), 6);
        assert!(maximal_ideal_power(&r, 3).member(&r.parse("x0^3").unwrap()));
    }

    #[test]
    fn hilbert_function_examples() {
        let r = HypersurfaceRing::fermat(7, 3, 2).unwrap();
        let j = RIdeal::parse(&r, &["x1", "x2"]).unwrap();
        let values: Vec<u64> = (0..5).map(|t| j.hilbert_function(t)).collect();
        assert_eq!(values, [1, 1, 1, 0, 0]);
        assert!((0..4).all(|t| RIdeal::unit(&r).hilbert_function(t) == 0));
        assert_eq!(maximal_ideal_power(&r, 2).hilbert_function(1), 3);
    }

    #[test]
    fn fermat_hilbert_series() {
        // coefficient of z^t in (1 - z^r)/(1 - z)^(d+1)
        for (p, rr, d) in [(7u64, 3u32, 2u32), (5, 2, 2), (5, 3, 3), (11, 4, 2)] {
            let ring = HypersurfaceRing::fermat(p, rr, d).unwrap();
            let zero = RIdeal::zero(&ring);
            for t in 0..=3 * rr as u64 {
                let mut expected = binom(t + d as u64, d as u64);
                if t >= rr as u64 {
                    expected -= binom(t - rr as u64 + d as u64, d as u64);
                }
                assert_eq!(zero.hilbert_function(t as u32), expected, "t = {t}");
            }
        }
    }

    #[test]
    fn lengths() {
        let r = HypersurfaceRing::fermat(7, 3, 2).unwrap();
        let j = RIdeal::parse(&r, &["x1", "x2"]).unwrap();
        assert_eq!(j.length().unwrap(), 3);
        let closure = j.sum(&maximal_ideal_power(&r, 2));
        assert_eq!(closure.length().unwrap(), 2);
        let x1 = RIdeal::parse(&r, &["x1"]).unwrap();
        assert_eq!(
            x1.length().unwrap_err(),
            RingError::NotMPrimary { var: "x2".into() }
        );
        assert_eq!(RIdeal::unit(&r).length().unwrap(), 0);
    }

    #[test]
    fn length_is_generating_set_invariant() {
        let r = HypersurfaceRing::fermat(5, 2, 2).unwrap();
        let a = RIdeal::parse(&r, &["x1", "x2"]).unwrap();
        let b = RIdeal::parse(&r, &["x1 + x2", "x1 - x2", "x1*x0"]).unwrap();
        assert!(a.equals(&b));
        assert_eq!(a.length().unwrap(), b.length().unwrap());
    }

    #[test]
    fn socle_of_power_of_polynomial_maximal_ideal() {
        let s = HypersurfaceRing::polynomial(7, vec!["y1".into(), "y2".into()]).unwrap();
        let n2 = maximal_ideal_power(&s, 2);
        let soc = n2.socle_degrees().unwrap();
        assert_eq!(soc.to_vec(), [1, 1]);
        assert_eq!(n2.infer_last_twists(2, 1).unwrap().to_vec(), [3, 3]);

        // n^n in d variables: socle concentrated in degree n-1 with
        // multiplicity binom(n+d-2, d-1)
        for d in 2..=3u32 {
            let names = (1..=d).map(|i| format!("y{i}")).collect();
            let s = HypersurfaceRing::polynomial(5, names).unwrap();
            for n in 1..=3u32 {
                let soc = maximal_ideal_power(&s, n).socle_degrees().unwrap();
                let mult = binom((n + d - 2) as u64, (d - 1) as u64);
                assert_eq!(soc.total(), mult);
                assert_eq!(soc.multiplicity(n as i64 - 1), mult);
                let twists = maximal_ideal_power(&s, n).infer_last_twists(d, 1).unwrap();
                assert_eq!(twists.multiplicity((n - 1 + d) as i64), mult);
            }
        }
        let twists = RIdeal::maximal(&s).infer_last_twists(2, 1).unwrap();
        assert_eq!(twists.to_vec(), [2]);
    }

    #[test]
    fn socle_of_residue_field() {
        let r = HypersurfaceRing::fermat(7, 3, 2).unwrap();
        let soc = RIdeal::maximal(&r).socle_degrees().unwrap();
        assert_eq!(soc.to_vec(), [0]);
    }

    #[test]
    fn socle_strictly_enlarges() {
        let r = HypersurfaceRing::fermat(7, 3, 2).unwrap();
        let j = RIdeal::parse(&r, &["x1", "x2"]).unwrap();
        let soc = j.socle_degrees().unwrap();
        // R/J = F[x0]/(x0^3): socle spanned by x0^2
        assert_eq!(soc.to_vec(), [2]);
        let wider = j.colon(&RIdeal::maximal(&r));
        assert!(j.is_subset_of(&wider) && !wider.is_subset_of(&j));
    }
}
