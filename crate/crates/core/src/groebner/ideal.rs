use crate::ffpoly::{MonomialOrder, Poly, PolyError};

use super::{buchberger, member, IdealGens};

fn assert_same_ring(a: &IdealGens, b: &IdealGens) {
    assert_eq!(a.nvars(), b.nvars(), "ideals live in different rings");
    assert_eq!(a.char(), b.char(), "ideals live in different rings");
}

pub fn ideal_sum(a: &IdealGens, b: &IdealGens) -> IdealGens {
    assert_same_ring(a, b);
    a.with(b.gens().iter().cloned())
}

/// All pairwise products of generators.
pub fn ideal_product(a: &IdealGens, b: &IdealGens) -> IdealGens {
    assert_same_ring(a, b);
    let prods = a
        .gens()
        .iter()
        .flat_map(|f| b.gens().iter().map(move |g| f * g));
    IdealGens::new(a.char(), a.nvars(), prods)
}

/// All products of `n` generators taken with repetition; `n = 0` gives the
/// unit ideal.
pub fn ideal_power(a: &IdealGens, n: u32) -> IdealGens {
    let one = Poly::one(a.char(), a.nvars());
    let mut layer: Vec<(usize, Poly)> = vec![(0, one)];
    for _ in 0..n {
        let mut next = Vec::new();
        for (start, prod) in &layer {
            for (k, g) in a.gens().iter().enumerate().skip(*start) {
                next.push((k, prod * g));
            }
        }
        layer = next;
    }
    IdealGens::new(a.char(), a.nvars(), layer.into_iter().map(|(_, p)| p))
}

/// The Frobenius bracket power `a^[q]`, generated by the `q`-th powers of the
/// given generators.
pub fn bracket_power(a: &IdealGens, q: u64) -> Result<IdealGens, PolyError> {
    if a.char().log_of_power(q).is_none() {
        return Err(PolyError::NotPowerOfChar {
            q,
            p: a.char().get(),
        });
    }
    let gens = a
        .gens()
        .iter()
        .map(|g| g.frobenius_pow(q))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IdealGens::new(a.char(), a.nvars(), gens))
}

/// `a ∩ b` by elimination: the tag-free part of
/// `t·a + (1 − t)·b` under the block order with `t` ranked first.
pub fn intersect(a: &IdealGens, b: &IdealGens) -> IdealGens {
    assert_same_ring(a, b);
    if a.is_empty() || b.is_empty() {
        return IdealGens::zero(a.char(), a.nvars());
    }
    let tagged = a
        .gens()
        .iter()
        .map(|g| g.times_tag(1))
        .chain(b.gens().iter().map(|g| g - &g.times_tag(1)));
    let gb = buchberger(
        &IdealGens::new(a.char(), a.nvars(), tagged),
        MonomialOrder::Elimination,
    );
    // The tag ranks above everything, so a tag-free leading term means the
    // whole element is tag-free.
    let gens: Vec<Poly> = gb
        .basis()
        .iter()
        .filter(|g| g.leading_monomial().is_some_and(|m| m.tag() == 0))
        .cloned()
        .collect();
    debug_assert!(gens.iter().all(Poly::is_tag_free));
    IdealGens::new(a.char(), a.nvars(), gens)
}

/// `a : b = ⋂_{g ∈ b} (a : g)`, with `(a : g) = (a ∩ (g)) / g`.
///
/// The zero ideal as divisor yields the unit ideal.
pub fn colon(a: &IdealGens, b: &IdealGens) -> IdealGens {
    assert_same_ring(a, b);
    let mut acc: Option<IdealGens> = None;
    for g in b.gens() {
        let principal = IdealGens::new(a.char(), a.nvars(), [g.clone()]);
        let cut = intersect(a, &principal);
        let quotient = IdealGens::new(
            a.char(),
            a.nvars(),
            cut.gens().iter().map(|h| {
                h.div_exact(g)
                    .expect("generator of a ∩ (g) must be divisible by g")
            }),
        );
        acc = Some(match acc {
            None => quotient,
            Some(prev) => intersect(&prev, &quotient),
        });
    }
    acc.unwrap_or_else(|| IdealGens::unit(a.char(), a.nvars()))
}

/// Double containment through Gröbner membership.
pub fn ideal_equal(a: &IdealGens, b: &IdealGens) -> bool {
    assert_same_ring(a, b);
    let gb_a = a.groebner();
    let gb_b = b.groebner();
    a.gens().iter().all(|g| member(g, &gb_b)) && b.gens().iter().all(|g| member(g, &gb_a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{PolyRing, PrimeChar};

    fn ring(p: u64) -> PolyRing {
        PolyRing::indexed(PrimeChar::new(p).unwrap(), 3).unwrap()
    }

    fn ideal(r: &PolyRing, gens: &[&str]) -> IdealGens {
        IdealGens::new(
            r.char(),
            r.nvars(),
            gens.iter().map(|g| r.parse(g).unwrap()),
        )
    }

    fn strings(r: &PolyRing, i: &IdealGens) -> Vec<String> {
        i.gens().iter().map(|g| r.format(g)).collect()
    }

    #[test]
    fn sums_products_powers() {
        let r = ring(7);
        let j = ideal(&r, &["x1", "x2"]);
        assert_eq!(strings(&r, &ideal_power(&j, 2)), ["x1^2", "x1*x2", "x2^2"]);
        assert_eq!(ideal_power(&j, 1), j);
        assert_eq!(ideal_power(&j, 0), IdealGens::unit(r.char(), 3));
        let p = ideal_product(&ideal(&r, &["x1"]), &ideal(&r, &["x2"]));
        assert_eq!(strings(&r, &p), ["x1*x2"]);
        assert_eq!(ideal_sum(&j, &ideal(&r, &["x0"])).len(), 3);
    }

    #[test]
    fn bracket_powers() {
        let r = ring(7);
        let j = ideal(&r, &["x1", "x2"]);
        assert_eq!(
            strings(&r, &bracket_power(&j, 7).unwrap()),
            ["x1^7", "x2^7"]
        );
        assert_eq!(bracket_power(&j, 1).unwrap(), j);
        assert!(bracket_power(&j, 6).is_err());
    }

    #[test]
    fn intersections() {
        let r = ring(7);
        let i = intersect(&ideal(&r, &["x1"]), &ideal(&r, &["x2"]));
        assert!(ideal_equal(&i, &ideal(&r, &["x1*x2"])));
        let a = ideal(&r, &["x0^2 + x1*x2", "x2^3"]);
        assert!(ideal_equal(&intersect(&a, &a), &a));
        let i = intersect(&ideal(&r, &["x1^2", "x2"]), &ideal(&r, &["x1"]));
        assert!(ideal_equal(&i, &ideal(&r, &["x1^2", "x1*x2"])));
        assert!(i.gens().iter().all(Poly::is_tag_free));
    }

    #[test]
    fn colons() {
        let r = ring(7);
        let a = ideal(&r, &["x0^2 + x1*x2", "x2^3"]);
        assert!(ideal_equal(&colon(&a, &IdealGens::unit(r.char(), 3)), &a));
        let c = colon(&ideal(&r, &["x1^2"]), &ideal(&r, &["x1"]));
        assert!(ideal_equal(&c, &ideal(&r, &["x1"])));
        let c = colon(
            &ideal(&r, &["x1^2", "x1*x2", "x2^2"]),
            &ideal(&r, &["x1", "x2"]),
        );
        assert!(ideal_equal(&c, &ideal(&r, &["x1", "x2"])));
        assert_eq!(
            colon(&a, &IdealGens::zero(r.char(), 3)),
            IdealGens::unit(r.char(), 3)
        );
    }

    #[test]
    fn equality() {
        let r = ring(7);
        let a = ideal(&r, &["x1", "x2^2"]);
        assert!(ideal_equal(&a, &a.with([r.zero()])));
        assert!(!ideal_equal(&ideal(&r, &["x1"]), &ideal(&r, &["x1^2"])));
        assert!(ideal_equal(
            &ideal(&r, &["x0^2 - x1^2", "x0^2 + x1^2"]),
            &ideal(&r, &["x0^2", "x1^2"])
        ));
    }
}
