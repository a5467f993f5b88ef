//! Buchberger engine and ideal calculus in the ambient polynomial ring.
//!
//! Every ideal identity elsewhere in the crate is decided here, exactly,
//! through reduced Gröbner bases under graded reverse lexicographic order.

mod buchberger;
mod ideal;

pub use ideal::{
    bracket_power, colon, ideal_equal, ideal_power, ideal_product, ideal_sum, intersect,
};

use crate::ffpoly::{Monomial, MonomialOrder, Poly, PrimeChar};

/// A finite generating set. Zero generators and exact duplicates are pruned
/// on construction; an empty list is the zero ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealGens {
    char: PrimeChar,
    nvars: usize,
    gens: Vec<Poly>,
}

impl IdealGens {
    pub fn new(char: PrimeChar, nvars: usize, gens: impl IntoIterator<Item = Poly>) -> Self {
        let mut out: Vec<Poly> = Vec::new();
        for g in gens {
            assert_eq!(g.nvars(), nvars, "generator lives in a different ring");
            assert_eq!(g.char(), char, "generator lives in a different ring");
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        IdealGens {
            char,
            nvars,
            gens: out,
        }
    }

    pub fn zero(char: PrimeChar, nvars: usize) -> Self {
        Self::new(char, nvars, [])
    }

    pub fn unit(char: PrimeChar, nvars: usize) -> Self {
        Self::new(char, nvars, [Poly::one(char, nvars)])
    }

    /// Builds from a nonempty list, taking the ring from the first element.
    pub fn from_polys(gens: Vec<Poly>) -> Self {
        let first = gens.first().expect("nonempty generator list");
        let (char, nvars) = (first.char(), first.nvars());
        Self::new(char, nvars, gens)
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn char(&self) -> PrimeChar {
        self.char
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Poly>) -> Self {
        Self::new(
            self.char,
            self.nvars,
            self.gens.iter().cloned().chain(extra),
        )
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(Poly::is_homogeneous)
    }

    pub fn groebner(&self) -> GroebnerBasis {
        buchberger(self, MonomialOrder::Grevlex)
    }
}

/// The reduced Gröbner basis of an ideal: monic, inter-reduced, sorted by
/// leading monomial descending. Unique for a given ideal and order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    char: PrimeChar,
    nvars: usize,
    order: MonomialOrder,
    basis: Vec<Poly>,
    leads: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leads
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn char(&self) -> PrimeChar {
        self.char
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_unit(&self) -> bool {
        self.leads.iter().any(Monomial::is_one)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn to_gens(&self) -> IdealGens {
        IdealGens::new(self.char, self.nvars, self.basis.iter().cloned())
    }

    /// True when `m` lies in the leading-term ideal.
    pub fn is_leading_multiple(&self, m: &Monomial) -> bool {
        self.leads.iter().any(|l| l.divides(m))
    }
}

/// Reduced Gröbner basis of `g`.
///
/// With `MonomialOrder::Elimination` generators may carry the tag variable,
/// which ranks above every ring variable.
pub fn buchberger(g: &IdealGens, ord: MonomialOrder) -> GroebnerBasis {
    if ord == MonomialOrder::Grevlex {
        assert!(
            g.gens.iter().all(Poly::is_tag_free),
            "tagged generators need the elimination order"
        );
    }
    let basis = buchberger::groebner_basis(&g.gens);
    let leads = basis
        .iter()
        .map(|b| b.leading_monomial().unwrap())
        .collect();
    GroebnerBasis {
        char: g.char,
        nvars: g.nvars,
        order: ord,
        basis,
        leads,
    }
}

/// Remainder of `f` on division by `gb`; zero exactly when `f` is in the ideal.
pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Poly {
    buchberger::reduce(f, &gb.basis, &gb.leads)
}

/// Remainder of `f` on division by `divisors`, tried in the given order.
/// For a Gröbner basis the result does not depend on that order.
pub fn normal_form_by(f: &Poly, divisors: &[Poly]) -> Poly {
    let divisors: Vec<Poly> = divisors.iter().filter(|g| !g.is_zero()).cloned().collect();
    let leads: Vec<Monomial> = divisors
        .iter()
        .map(|g| g.leading_monomial().unwrap())
        .collect();
    buchberger::reduce(f, &divisors, &leads)
}

pub fn member(f: &Poly, gb: &GroebnerBasis) -> bool {
    f.is_zero() || normal_form(f, gb).is_zero()
}
