use std::collections::BTreeMap;
use std::fmt;

use super::{FieldScalar, Monomial, PolyError, PrimeChar};

/// A multivariate polynomial over 𝔽_p in sparse distributed form.
///
/// Terms are kept strictly descending in the monomial order with no zero
/// coefficients, so structural equality is mathematical equality and the
/// leading term is always `terms[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    char: PrimeChar,
    nvars: usize,
    terms: Vec<(Monomial, u32)>,
}

impl Poly {
    pub fn zero(char: PrimeChar, nvars: usize) -> Self {
        Poly {
            char,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(c: i64, char: PrimeChar, nvars: usize) -> Self {
        Self::term(Monomial::ONE, char.reduce(c), char, nvars)
    }

    pub fn one(char: PrimeChar, nvars: usize) -> Self {
        Self::constant(1, char, nvars)
    }

    pub fn term(m: Monomial, c: u32, char: PrimeChar, nvars: usize) -> Self {
        let c = c % char.get();
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Poly { char, nvars, terms }
    }

    pub fn monomial(m: Monomial, char: PrimeChar, nvars: usize) -> Self {
        Self::term(m, 1, char, nvars)
    }

    pub fn var(i: usize, char: PrimeChar, nvars: usize) -> Self {
        assert!(
            i < nvars,
            "variable index {i} out of range for {nvars} variables"
        );
        Self::monomial(Monomial::var_power(i, 1), char, nvars)
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated,
    /// unsorted, zero) terms.
    pub fn from_terms(
        char: PrimeChar,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, u32)>,
    ) -> Self {
        let mut acc: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (m, c) in terms {
            let e = acc.entry(m).or_insert(0);
            *e = char.add(*e, c % char.get());
        }
        Self::from_sorted_map(char, nvars, acc)
    }

    pub(crate) fn from_sorted_map(
        char: PrimeChar,
        nvars: usize,
        acc: BTreeMap<Monomial, u32>,
    ) -> Self {
        let terms = acc.into_iter().rev().filter(|&(_, c)| c != 0).collect();
        Poly { char, nvars, terms }
    }

    /// Wraps terms that are already strictly descending with nonzero
    /// coefficients.
    pub(crate) fn from_descending(
        char: PrimeChar,
        nvars: usize,
        terms: Vec<(Monomial, u32)>,
    ) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|&(_, c)| c != 0 && c < char.get()));
        Poly { char, nvars, terms }
    }

    pub fn char(&self) -> PrimeChar {
        self.char
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<(Monomial, u32)> {
        self.terms.first().copied()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<FieldScalar> {
        self.terms
            .first()
            .map(|t| FieldScalar::new(t.1 as i64, self.char))
    }

    /// Coefficient of `m`, zero when absent.
    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms
            .binary_search_by(|(tm, _)| m.cmp(tm))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// True when every term has the same total degree (zero counts as
    /// homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        if self.char != other.char {
            return Err(PolyError::CharMismatch {
                left: self.char.get(),
                right: other.char.get(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_compatible(other)?;
        let p = self.char;
        let mut acc: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(mb)?;
                let e = acc.entry(m).or_insert(0);
                *e = p.add(*e, p.mul(*ca, *cb));
            }
        }
        Ok(Self::from_sorted_map(p, self.nvars, acc))
    }

    fn merge(&self, other: &Poly, subtract: bool) -> Poly {
        let p = self.char;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Less,
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if subtract { p.neg(b[j].1) } else { b[j].1 };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if subtract {
                        p.sub(a[i].1, b[j].1)
                    } else {
                        p.add(a[i].1, b[j].1)
                    };
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly {
            char: p,
            nvars: self.nvars,
            terms: out,
        }
    }

    /// `c * m * self`.
    pub fn scale_by_term(&self, m: &Monomial, c: u32) -> Poly {
        let p = self.char;
        let c = c % p.get();
        if c == 0 {
            return Poly::zero(p, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(tm, tc)| (tm.mul(m), p.mul(*tc, c)))
            .collect();
        Poly {
            char: p,
            nvars: self.nvars,
            terms,
        }
    }

    pub fn scale(&self, c: u32) -> Poly {
        self.scale_by_term(&Monomial::ONE, c)
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, 1)) => self.clone(),
            Some(&(_, lc)) => self.scale(self.char.inv(lc)),
        }
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.char, self.nvars);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The Frobenius power `self^q` for `q = p^k`, computed term-wise:
    /// exponents scale by `q` and coefficients are fixed (`c^q = c` on 𝔽_p).
    pub fn frobenius_pow(&self, q: u64) -> Result<Poly, PolyError> {
        let p = self.char;
        if p.log_of_power(q).is_none() {
            return Err(PolyError::NotPowerOfChar { q, p: p.get() });
        }
        let q32 = u32::try_from(q).map_err(|_| PolyError::ExponentOverflow)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.scale(q32)?, *c));
        }
        // Scaling every exponent by the same positive factor preserves the
        // order, so the term list stays sorted.
        Ok(Poly {
            char: p,
            nvars: self.nvars,
            terms,
        })
    }

    /// Exact quotient `self / divisor`, `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading_term()?;
        let p = self.char;
        let lc_inv = p.inv(lc);
        let mut rest: BTreeMap<Monomial, u32> = self.terms.iter().copied().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rest.pop_last() {
            let qm = m.div(&lm)?;
            let qc = p.mul(c, lc_inv);
            quotient.push((qm, qc));
            for (dm, dc) in &divisor.terms[1..] {
                let t = dm.mul(&qm);
                let e = rest.entry(t).or_insert(0);
                *e = p.sub(*e, p.mul(qc, *dc));
                if *e == 0 {
                    rest.remove(&t);
                }
            }
        }
        Some(Poly::from_descending(p, self.nvars, quotient))
    }

    /// Multiplies every term by `t^k` for the elimination tag variable.
    pub fn times_tag(&self, k: u32) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.times_tag(k), *c))
            .collect();
        Poly {
            char: self.char,
            nvars: self.nvars,
            terms,
        }
    }

    /// True when no term mentions the elimination tag.
    pub fn is_tag_free(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.tag() == 0)
    }

    /// Restricts to the terms of total degree `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == deg)
            .copied()
            .collect();
        Poly {
            char: self.char,
            nvars: self.nvars,
            terms,
        }
    }

    /// Formats with the given variable names (`x0, x1, ...` when short).
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let p = self.char;
        Poly {
            char: p,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, p.neg(*c))).collect(),
        }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl PolyDisplay<'_> {
    fn name(&self, i: usize) -> String {
        self.names
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("x{i}"))
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if m.tag() > 0 {
                factors.push(power_string("t", m.tag()));
            }
            for i in 0..self.poly.nvars {
                if m.exp(i) > 0 {
                    factors.push(power_string(&self.name(i), m.exp(i)));
                }
            }
            match (factors.is_empty(), *c) {
                (true, c) => write!(f, "{c}")?,
                (false, 1) => f.write_str(&factors.join("*"))?,
                (false, c) => write!(f, "{c}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}

fn power_string(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(&[]).fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> PrimeChar {
        PrimeChar::new(n).unwrap()
    }

    fn x(i: usize, char: PrimeChar) -> Poly {
        Poly::var(i, char, 3)
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let c = p(7);
        let a = &x(0, c) + &x(1, c).scale(3);
        assert_eq!(&a + &Poly::zero(c, 3), a);
        let z = &x(1, c) - &x(1, c);
        assert!(z.is_zero());
        assert!(z.terms().is_empty());
    }

    #[test]
    fn difference_of_squares() {
        let c = p(7);
        let prod = &(&x(0, c) + &x(1, c)) * &(&x(0, c) - &x(1, c));
        let expected = &x(0, c).pow(2) - &x(1, c).pow(2);
        assert_eq!(prod, expected);
        assert_eq!(prod.to_string(), "x0^2 + 6*x1^2");
    }

    #[test]
    fn freshmans_dream() {
        let c = p(5);
        let s = &x(1, c) + &x(2, c);
        let f = s.frobenius_pow(5).unwrap();
        assert_eq!(f, &x(1, c).pow(5) + &x(2, c).pow(5));
        assert_eq!(s.pow(5), f);
    }

    #[test]
    fn frobenius_fixes_coefficients() {
        let c = p(7);
        let a = x(0, c).scale(2);
        let f = a.frobenius_pow(49).unwrap();
        assert_eq!(f, x(0, c).pow(49).scale(2));
        assert!(matches!(
            a.frobenius_pow(14),
            Err(PolyError::NotPowerOfChar { q: 14, p: 7 })
        ));
        assert_eq!(a.frobenius_pow(1).unwrap(), a);
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = Poly::var(0, p(7), 3);
        let b = Poly::var(0, p(7), 2);
        assert!(matches!(
            a.checked_add(&b),
            Err(PolyError::VarCountMismatch { left: 3, right: 2 })
        ));
        let b = Poly::var(0, p(5), 3);
        assert!(matches!(
            a.checked_mul(&b),
            Err(PolyError::CharMismatch { .. })
        ));
    }

    #[test]
    fn exact_division() {
        let c = p(7);
        let g = &x(0, c) + &x(1, c);
        let h = &g * &(&x(0, c).pow(2) - &x(2, c));
        assert_eq!(h.div_exact(&g).unwrap(), &x(0, c).pow(2) - &x(2, c));
        assert!((&h + &x(2, c).pow(3)).div_exact(&g).is_none());
    }

    #[test]
    fn homogeneity() {
        let c = p(7);
        assert!((&x(0, c).pow(3) + &x(1, c).pow(3)).is_homogeneous());
        assert!(!(&x(0, c).pow(3) + &x(1, c)).is_homogeneous());
        assert!(Poly::zero(c, 3).is_homogeneous());
    }
}
