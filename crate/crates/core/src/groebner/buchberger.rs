use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::ffpoly::{Monomial, Poly};

/// Full reduction of `f` by `basis`: returns the remainder, no term of which
/// is divisible by any leading monomial in `leads`.
///
/// At each step the largest remaining term is reduced by the *first* basis
/// element (in slice order) whose leading monomial divides it.
pub(crate) fn reduce(f: &Poly, basis: &[Poly], leads: &[Monomial]) -> Poly {
    reduce_skipping(f, basis, leads, None)
}

fn reduce_skipping(f: &Poly, basis: &[Poly], leads: &[Monomial], skip: Option<usize>) -> Poly {
    debug_assert_eq!(basis.len(), leads.len());
    if f.is_zero() || basis.is_empty() {
        return f.clone();
    }
    let p = f.char();
    let mut acc: BTreeMap<Monomial, u32> = f.terms().iter().copied().collect();
    let mut rem: Vec<(Monomial, u32)> = Vec::new();
    while let Some((m, c)) = acc.pop_last() {
        let divisor = leads
            .iter()
            .enumerate()
            .position(|(k, lm)| Some(k) != skip && lm.divides(&m));
        let Some(k) = divisor else {
            rem.push((m, c));
            continue;
        };
        let g = &basis[k];
        let q = m.div(&leads[k]).expect("checked divisibility");
        // basis elements are monic, so the multiplier is just c
        let (_, lc) = g.leading_term().expect("basis elements are nonzero");
        let coef = if lc == 1 { c } else { p.mul(c, p.inv(lc)) };
        for (gm, gc) in &g.terms()[1..] {
            let t = gm.mul(&q);
            let delta = p.mul(coef, *gc);
            match acc.entry(t) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let v = p.sub(*e.get(), delta);
                    if v == 0 {
                        e.remove();
                    } else {
                        *e.get_mut() = v;
                    }
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(p.neg(delta));
                }
            }
        }
    }
    Poly::from_descending(p, f.nvars(), rem)
}

pub(crate) fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (lf, cf) = f.leading_term().expect("nonzero");
    let (lg, cg) = g.leading_term().expect("nonzero");
    let l = lf.lcm(&lg);
    let p = f.char();
    let a = f.scale_by_term(&l.div(&lf).expect("lcm"), p.inv(cf));
    let b = g.scale_by_term(&l.div(&lg).expect("lcm"), p.inv(cg));
    &a - &b
}

/// Buchberger's algorithm with the coprime-leading-term criterion and the
/// chain criterion. Pairs are processed smallest lcm first, ties broken by
/// index, which makes every intermediate step deterministic.
///
/// Returns the reduced Gröbner basis, each element monic, sorted by leading
/// monomial descending.
pub(crate) fn groebner_basis(gens: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut pending: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut pending_idx: HashSet<(usize, usize)> = HashSet::new();

    let add = |h: Poly,
               basis: &mut Vec<Poly>,
               leads: &mut Vec<Monomial>,
               pending: &mut BTreeSet<(Monomial, usize, usize)>,
               pending_idx: &mut HashSet<(usize, usize)>| {
        let h = h.monic();
        let lh = h.leading_monomial().expect("nonzero");
        let k = basis.len();
        for (i, li) in leads.iter().enumerate() {
            if !li.is_coprime(&lh) {
                pending.insert((li.lcm(&lh), i, k));
                pending_idx.insert((i, k));
            }
        }
        basis.push(h);
        leads.push(lh);
    };

    for g in gens {
        let h = reduce(g, &basis, &leads);
        if !h.is_zero() {
            if h.is_constant() {
                return vec![h.monic()];
            }
            add(h, &mut basis, &mut leads, &mut pending, &mut pending_idx);
        }
    }

    while let Some((lcm, i, j)) = pending.pop_first() {
        pending_idx.remove(&(i, j));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&lcm)
                && !pending_idx.contains(&(i.min(k), i.max(k)))
                && !pending_idx.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let h = reduce(&s, &basis, &leads);
        if !h.is_zero() {
            if h.is_constant() {
                return vec![h.monic()];
            }
            add(h, &mut basis, &mut leads, &mut pending, &mut pending_idx);
        }
    }
    reduce_basis(basis)
}

/// Turns a Gröbner basis into the reduced one: drop elements whose leading
/// monomial is divisible by another's, tail-reduce, normalize, sort.
pub(crate) fn reduce_basis(mut basis: Vec<Poly>) -> Vec<Poly> {
    basis.retain(|g| !g.is_zero());
    basis.sort_by_key(|g| g.leading_monomial());
    let mut minimal: Vec<Poly> = Vec::new();
    for g in basis {
        let lg = g.leading_monomial().expect("nonzero");
        if !minimal
            .iter()
            .any(|h| h.leading_monomial().expect("nonzero").divides(&lg))
        {
            minimal.push(g.monic());
        }
    }
    // Leading monomials are untouched by tail reduction, so `leads` stays valid.
    let leads: Vec<Monomial> = minimal
        .iter()
        .map(|g| g.leading_monomial().unwrap())
        .collect();
    for i in 0..minimal.len() {
        minimal[i] = reduce_skipping(&minimal[i], &minimal, &leads, Some(i)).monic();
    }
    minimal.sort_by_key(|g| std::cmp::Reverse(g.leading_monomial()));
    minimal
}
