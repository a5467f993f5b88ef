use std::cmp::Ordering;

use super::PolyError;

/// Upper bound on the number of ring variables a monomial can carry.
pub const MAX_VARS: usize = 8;

/// Which monomial order a ring uses.
///
/// Both orders are graded reverse lexicographic on the ring variables with
/// precedence `x0 > x1 > ...`. `Elimination` additionally carries one tag
/// variable ranked above every ring variable in a block order; it is used to
/// eliminate that variable when intersecting ideals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Elimination,
}

/// Exponent vector of a monomial, with a separate slot for the elimination
/// tag.
///
/// The derived `Ord` *is* the monomial order: tag exponent first, then total
/// degree, then reverse lexicographic tie-break on the last differing
/// variable. Monomials of a grevlex ring simply have a zero tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    tag: u32,
    deg: u32,
    mask: u32,
    exps: [u32; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        tag: 0,
        deg: 0,
        mask: 0,
        exps: [0; MAX_VARS],
    };

    pub fn new(exps: &[u32]) -> Result<Self, PolyError> {
        Self::with_tag(exps, 0)
    }

    pub fn with_tag(exps: &[u32], tag: u32) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exps.len()));
        }
        let mut m = Monomial::ONE;
        let mut deg: u32 = 0;
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = e;
            deg = deg.checked_add(e).ok_or(PolyError::ExponentOverflow)?;
        }
        m.deg = deg;
        m.tag = tag;
        m.refresh_mask();
        Ok(m)
    }

    /// The monomial `x_i^k`.
    pub fn var_power(i: usize, k: u32) -> Self {
        assert!(i < MAX_VARS);
        let mut m = Monomial::ONE;
        m.exps[i] = k;
        m.deg = k;
        m.refresh_mask();
        m
    }

    fn refresh_mask(&mut self) {
        let mut mask = 0;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                mask |= 1 << i;
            }
        }
        if self.tag > 0 {
            mask |= 1 << MAX_VARS;
        }
        self.mask = mask;
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn tag(&self) -> u32 {
        self.tag
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn exps(&self, nvars: usize) -> &[u32] {
        &self.exps[..nvars]
    }

    pub fn is_one(&self) -> bool {
        self.mask == 0
    }

    /// Index of the variable if this monomial is a pure power `x_i^k`, k ≥ 1.
    pub fn pure_power_var(&self) -> Option<usize> {
        (self.tag == 0 && self.mask.count_ones() == 1).then(|| self.mask.trailing_zeros() as usize)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        if self.mask & !other.mask != 0 || self.deg > other.deg || self.tag > other.tag {
            return false;
        }
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        let mut m = Monomial::ONE;
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .ok_or(PolyError::ExponentOverflow)?;
        }
        m.deg = self
            .deg
            .checked_add(other.deg)
            .ok_or(PolyError::ExponentOverflow)?;
        m.tag = self
            .tag
            .checked_add(other.tag)
            .ok_or(PolyError::ExponentOverflow)?;
        m.mask = self.mask | other.mask;
        Ok(m)
    }

    /// Product; panics on exponent overflow.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    /// Exact quotient `self / other`, `None` unless `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut m = Monomial::ONE;
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i] - other.exps[i];
        }
        m.deg = self.deg - other.deg;
        m.tag = self.tag - other.tag;
        m.refresh_mask();
        Some(m)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::ONE;
        let mut deg = 0;
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(other.exps[i]);
            deg += m.exps[i];
        }
        m.deg = deg;
        m.tag = self.tag.max(other.tag);
        m.mask = self.mask | other.mask;
        m
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.mask & other.mask == 0
    }

    /// Every exponent (tag included) multiplied by `q`.
    pub fn scale(&self, q: u32) -> Result<Monomial, PolyError> {
        let mut m = *self;
        for e in m.exps.iter_mut() {
            *e = e.checked_mul(q).ok_or(PolyError::ExponentOverflow)?;
        }
        m.deg = m.deg.checked_mul(q).ok_or(PolyError::ExponentOverflow)?;
        m.tag = m.tag.checked_mul(q).ok_or(PolyError::ExponentOverflow)?;
        Ok(m)
    }

    /// Same exponents with the tag slot cleared.
    pub fn without_tag(&self) -> Monomial {
        let mut m = *self;
        m.tag = 0;
        m.refresh_mask();
        m
    }

    pub fn times_tag(&self, k: u32) -> Monomial {
        let mut m = *self;
        m.tag += k;
        m.refresh_mask();
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag
            .cmp(&other.tag)
            .then(self.deg.cmp(&other.deg))
            .then_with(|| {
                for i in (0..MAX_VARS).rev() {
                    match self.exps[i].cmp(&other.exps[i]) {
                        Ordering::Equal => continue,
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compares two exponent vectors of equal length under `ord`.
///
/// For `MonomialOrder::Elimination` the last entry of each slice is the tag
/// variable.
pub fn compare_monomials(a: &[u32], b: &[u32], ord: MonomialOrder) -> Result<Ordering, PolyError> {
    if a.len() != b.len() {
        return Err(PolyError::VarCountMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let build = |v: &[u32]| match ord {
        MonomialOrder::Grevlex => Monomial::new(v),
        MonomialOrder::Elimination => match v.split_last() {
            Some((&tag, rest)) => Monomial::with_tag(rest, tag),
            None => Ok(Monomial::ONE),
        },
    };
    Ok(build(a)?.cmp(&build(b)?))
}

/// All exponent vectors of total degree `deg` in `nvars` variables, in
/// descending monomial order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fill(&mut exps, 0, deg, &mut out);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn fill(exps: &mut [u32], i: usize, left: u32, out: &mut Vec<Monomial>) {
    if exps.is_empty() {
        if left == 0 {
            out.push(Monomial::ONE);
        }
        return;
    }
    if i + 1 == exps.len() {
        exps[i] = left;
        out.push(Monomial::new(exps).expect("bounded by MAX_VARS"));
        return;
    }
    for e in 0..=left {
        exps[i] = e;
        fill(exps, i + 1, left - e, out);
    }
    exps[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    #[test]
    fn grevlex_examples() {
        // x0^2 > x0*x1
        assert!(m(&[2, 0, 0]) > m(&[1, 1, 0]));
        // x1^3 > x0^2 by degree
        assert!(m(&[0, 3, 0]) > m(&[2, 0, 0]));
        // x1^2 > x0*x2: last differing variable is x2
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
        assert_eq!(
            compare_monomials(&[1, 0, 1], &[0, 2, 0], MonomialOrder::Grevlex).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(
            compare_monomials(&[1, 0], &[1, 0, 0], MonomialOrder::Grevlex),
            Err(PolyError::VarCountMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn tag_dominates() {
        let t = Monomial::with_tag(&[0, 0, 0], 1).unwrap();
        assert!(t > m(&[50, 0, 0]));
        assert_eq!(
            compare_monomials(&[0, 0, 1], &[9, 9, 0], MonomialOrder::Elimination).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[2, 1, 0]);
        let b = m(&[1, 1, 0]);
        assert!(b.divides(&a));
        assert!(!a.divides(&b));
        assert_eq!(a.div(&b), Some(m(&[1, 0, 0])));
        assert_eq!(a.lcm(&m(&[0, 3, 1])), m(&[2, 3, 1]));
        assert!(m(&[1, 0, 0]).is_coprime(&m(&[0, 2, 2])));
        assert_eq!(m(&[0, 4, 0]).pure_power_var(), Some(1));
        assert_eq!(m(&[0, 4, 1]).pure_power_var(), None);
    }

    #[test]
    fn overflow_is_caught() {
        let big = m(&[u32::MAX - 1, 0]);
        assert!(big.checked_mul(&m(&[2, 0])).is_err());
        assert!(m(&[1 << 20, 0]).scale(1 << 12).is_err());
    }

    #[test]
    fn degree_enumeration() {
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(monomials_of_degree(4, 3).len(), 20);
        assert_eq!(monomials_of_degree(3, 0), vec![Monomial::ONE]);
    }
}
