use std::fmt;

use super::PolyError;

/// Characteristic of a prime field 𝔽_p.
///
/// Construction checks primality by trial division, which is fine for the
/// desk-scale characteristics this crate is meant for. `p` is capped below
/// 2^31 so products of two residues fit in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeChar(u32);

impl PrimeChar {
    pub const MAX: u64 = (1 << 31) - 1;

    pub fn new(p: u64) -> Result<Self, PolyError> {
        if !(2..=Self::MAX).contains(&p) || !is_prime(p) {
            return Err(PolyError::NotPrime(p));
        }
        Ok(PrimeChar(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Canonical representative of an arbitrary signed integer.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.0 as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "inverse of zero in F_{}", self.0);
        self.pow(a, self.0 as u64 - 2)
    }

    /// Returns `k` with `q = p^k`, or `None` when `q` is not a power of `p`.
    pub fn log_of_power(self, q: u64) -> Option<u32> {
        if q == 0 {
            return None;
        }
        let p = self.0 as u64;
        let mut k = 0;
        let mut rest = q;
        while rest > 1 {
            if !rest.is_multiple_of(p) {
                return None;
            }
            rest /= p;
            k += 1;
        }
        Some(k)
    }
}

impl fmt::Display for PrimeChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of 𝔽_p carrying its characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    value: u32,
    char: PrimeChar,
}

impl FieldScalar {
    pub fn new(v: i64, char: PrimeChar) -> Self {
        FieldScalar {
            value: char.reduce(v),
            char,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn char(self) -> PrimeChar {
        self.char
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Option<Self> {
        (!self.is_zero()).then(|| FieldScalar {
            value: self.char.inv(self.value),
            char: self.char,
        })
    }
}

impl std::ops::Add for FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.char, rhs.char);
        FieldScalar {
            value: self.char.add(self.value, rhs.value),
            char: self.char,
        }
    }
}

impl std::ops::Sub for FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.char, rhs.char);
        FieldScalar {
            value: self.char.sub(self.value, rhs.value),
            char: self.char,
        }
    }
}

impl std::ops::Mul for FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.char, rhs.char);
        FieldScalar {
            value: self.char.mul(self.value, rhs.value),
            char: self.char,
        }
    }
}

impl std::ops::Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> Self {
        FieldScalar {
            value: self.char.neg(self.value),
            char: self.char,
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
