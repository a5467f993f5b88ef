//! Exact arithmetic over prime fields: scalars, monomials, sparse
//! polynomials under graded reverse lexicographic order, and the polynomial
//! text format.

mod field;
mod monomial;
mod parse;
mod poly;

pub use field::{FieldScalar, PrimeChar};
pub use monomial::{compare_monomials, monomials_of_degree, Monomial, MonomialOrder, MAX_VARS};
pub use poly::{Poly, PolyDisplay};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { message: String, offset: usize },
    #[error("negative exponent at byte {offset}")]
    NegativeExponent { offset: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("characteristic mismatch: {left} vs {right}")]
    CharMismatch { left: u32, right: u32 },
    #[error("{q} is not a power of the characteristic {p}")]
    NotPowerOfChar { q: u64, p: u32 },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("at most {max} variables are supported, got {0}", max = MAX_VARS - 1)]
    TooManyVariables(usize),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
}

/// A polynomial ring 𝔽_p[vars] with named variables, graded by total degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    char: PrimeChar,
    names: Vec<String>,
}

impl PolyRing {
    /// One slot of [`MAX_VARS`] stays reserved for the elimination tag.
    pub fn new(char: PrimeChar, names: Vec<String>) -> Result<Self, PolyError> {
        if names.is_empty() || names.len() >= MAX_VARS {
            return Err(PolyError::TooManyVariables(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if !parse::is_valid_name(n) {
                return Err(PolyError::InvalidVariableName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(PolyRing { char, names })
    }

    /// Variables named `x0, x1, ..., x{n-1}`.
    pub fn indexed(char: PrimeChar, n: usize) -> Result<Self, PolyError> {
        Self::new(char, (0..n).map(|i| format!("x{i}")).collect())
    }

    pub fn char(&self) -> PrimeChar {
        self.char
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.char, self.nvars())
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.char, self.nvars())
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(i, self.char, self.nvars())
    }

    pub fn monomial(&self, m: Monomial) -> Poly {
        Poly::monomial(m, self.char, self.nvars())
    }

    /// Parses text in the polynomial grammar; coefficients are reduced mod p.
    pub fn parse(&self, text: &str) -> Result<Poly, PolyError> {
        parse::parse(text, &self.names, self.char)
    }

    /// Canonical text form; [`PolyRing::parse`] inverts it.
    pub fn format(&self, f: &Poly) -> String {
        f.display_with(&self.names).to_string()
    }
}
