//! Acceptance suite. Each criterion prints one `[PASS]` or `[FAIL]` line;
//! the process fails if any criterion fails. All comparisons are exact.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tight_core::ffpoly::{Monomial, Poly, PrimeChar};
use tight_core::filtration::TightFiltration;
use tight_core::graded_ring::{HypersurfaceRing, RIdeal};
use tight_core::groebner::{
    bracket_power, colon, ideal_equal, ideal_product, intersect, member, normal_form,
    normal_form_by, IdealGens,
};
use tight_core::tight::{
    certify_non_membership, closed_form_tight_closure, default_test_element,
    tight_closure_degree_slice, HsopIdeal, Verdict,
};

/// `(p, r, d, e)`; `J` is generated by the `e`-th powers of the last `d`
/// variables.
const GRID: [(u64, u32, u32, u32); 5] = [
    (7, 3, 2, 1),
    (5, 2, 2, 1),
    (5, 3, 3, 1),
    (7, 5, 2, 2),
    (11, 4, 2, 1),
];

type Check = Result<String, Vec<String>>;
type Criterion = (&'static str, fn() -> Check);

fn hsop(p: u64, r: u32, d: u32, e: u32) -> HsopIdeal {
    let ring = HypersurfaceRing::fermat(p, r, d).unwrap();
    let gens: Vec<String> = (1..=d).map(|i| format!("x{i}^{e}")).collect();
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    HsopIdeal::validate(RIdeal::parse(&ring, &refs).unwrap()).unwrap()
}

fn filtration(p: u64, r: u32, d: u32, e: u32) -> TightFiltration {
    TightFiltration::new(hsop(p, r, d, e), false).unwrap()
}

fn finish(summary: String, failures: Vec<String>) -> Check {
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(failures)
    }
}

fn closed_form_matches_slices() -> Check {
    let mut failures = Vec::new();
    let mut compared = 0;
    for (p, r, d, e) in GRID {
        let j = hsop(p, r, d, e);
        let c = default_test_element(j.ring()).unwrap();
        for n in 1..=4 {
            let closure = closed_form_tight_closure(&j, n, false).unwrap().ideal;
            let k = j.ideal().power(n);
            for t in 0..=(n - 1) * e + d * e + e {
                let slice = tight_closure_degree_slice(&k, t, &c, p.pow(3)).unwrap();
                let formula = slice.ambient_dim as u64 - closure.hilbert_function(t);
                compared += 1;
                if slice.dim() as u64 != formula {
                    failures.push(format!(
                        "({p},{r},{d},{e}) n={n} t={t}: slice {} vs formula {formula}",
                        slice.dim()
                    ));
                }
            }
        }
    }
    finish(
        format!(
            "closed form equals slice dimension in all {compared} (point, n, t) cases, q_max = p^3"
        ),
        failures,
    )
}

fn classic_instance() -> Check {
    let mut failures = Vec::new();
    let f = filtration(7, 3, 2, 1);
    let lengths: Vec<u64> = (1..=3)
        .map(|n| f.tight_hilbert_function(n).unwrap())
        .collect();
    if lengths != [2, 7, 15] {
        failures.push(format!("lengths {lengths:?}, expected [2, 7, 15]"));
    }
    let ring = f.hsop().ring().clone();
    let c = default_test_element(&ring).unwrap();
    let x0 = ring.parse("x0").unwrap();
    let x0sq = ring.parse("x0^2").unwrap();
    let refuted = certify_non_membership(&x0, f.ideal(), &c, 343)
        .unwrap()
        .verdict;
    let witness = match refuted {
        Verdict::NotInTightClosure { q } if q <= 343 => q,
        other => {
            failures.push(format!("x0: {other}"));
            0
        }
    };
    let evidence = certify_non_membership(&x0sq, f.ideal(), &c, 343)
        .unwrap()
        .verdict;
    if evidence != (Verdict::EvidenceIn { q_max: 343 }) {
        failures.push(format!("x0^2: {evidence}"));
    }
    finish(
        format!("Fermat(7,3,2): lengths {lengths:?}; x0 refuted at q = {witness}; x0^2 {evidence}"),
        failures,
    )
}

fn coefficients() -> Check {
    let mut failures = Vec::new();
    let mut fits = Vec::new();
    for (p, r, d, e) in GRID {
        let f = filtration(p, r, d, e);
        let cap = f.default_cap();
        let r_star = f.tight_reduction_number(cap).unwrap().r_star;
        let fit = f.coefficients(r_star).unwrap().coefficients;
        for j in 1..=d {
            let hm = f.huckaba_marley_coefficient(j, cap).unwrap().value;
            if hm != fit[j as usize] {
                failures.push(format!(
                    "({p},{r},{d},{e}) j={j}: Huckaba-Marley {hm} vs fit {}",
                    fit[j as usize]
                ));
            }
        }
        let expected: Option<&[i64]> = match (p, r, d, e) {
            (7, 3, 2, 1) => Some(&[3, 1, 0]),
            (5, 2, 2, 1) => Some(&[2, 0, 0]),
            _ => None,
        };
        if let Some(expected) = expected {
            if fit != expected {
                failures.push(format!(
                    "({p},{r},{d},{e}): fit {fit:?}, expected {expected:?}"
                ));
            }
        }
        fits.push(format!("({p},{r},{d},{e}) -> {fit:?}"));
    }
    finish(
        format!(
            "fits {}; Huckaba-Marley sums agree for j = 1..d",
            fits.join(", ")
        ),
        failures,
    )
}

fn identity_suites() -> Check {
    let mut failures = Vec::new();
    for (p, r, d, e) in GRID {
        let f = filtration(p, r, d, e);
        let checks = [
            f.vv_check(6),
            f.itoh_check(5),
            f.buchsbaum_check(5).unwrap(),
        ];
        for report in checks {
            for (n, holds) in &report.per_n {
                if !holds {
                    failures.push(format!("({p},{r},{d},{e}) {} fails at n={n}", report.name));
                }
            }
        }
    }
    finish(
        "Valabrega-Valla (n ≤ 6), Itoh (n ≤ 5), Buchsbaum (3 ≤ n ≤ 5) hold on the grid".into(),
        failures,
    )
}

fn reduction_numbers() -> Check {
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for (p, r, d, e) in GRID {
        let f = filtration(p, r, d, e);
        let floor = (r as i64 - 1 - d as i64).div_euclid(e as i64);
        let me = f.reduction_number_me().unwrap();
        if me.computed as i64 != floor + d as i64 {
            failures.push(format!(
                "({p},{r},{d},{e}): r_J(m^e) = {} vs {}",
                me.computed,
                floor + d as i64
            ));
        }
        let star = f.tight_reduction_number(f.default_cap()).unwrap();
        if star.r_star as i64 > floor + 1 {
            failures.push(format!(
                "({p},{r},{d},{e}): r* = {} > {}",
                star.r_star,
                floor + 1
            ));
        }
        let rees = f.rees_cm_verdict(star.r_star);
        if rees.cohen_macaulay != (star.r_star < d) {
            failures.push(format!(
                "({p},{r},{d},{e}): Rees verdict inconsistent with r*"
            ));
        }
        if (p, r, d, e) == (7, 3, 2, 1) && !rees.sufficient_condition_fired {
            failures.push("(7,3,2,1): sufficient condition did not fire".into());
        }
        if (p, r, d, e) == (5, 3, 3, 1) && me.computed != 2 {
            failures.push(format!("(5,3,3,1): r_J(m) = {}, expected 2", me.computed));
        }
        seen.push(format!(
            "({p},{r},{d},{e}) r_J={} r*={} cm={}",
            me.computed, star.r_star, rees.cohen_macaulay
        ));
    }
    finish(seen.join("; "), failures)
}

fn f_rational_powers() -> Check {
    let mut failures = Vec::new();
    for (p, r, d) in [(5, 2, 2), (5, 3, 3)] {
        let f = filtration(p, r, d, 1);
        if !f.closure(1).equals(f.ideal()) {
            failures.push(format!("({p},{r},{d}): J* != J"));
        }
        let report = f.tightly_closed_powers_check(6);
        if !report.applicable || !report.overall() {
            failures.push(format!("({p},{r},{d}): {:?}", report.per_n));
        }
    }
    finish(
        "Fermat(5,2,2) and Fermat(5,3,3): J* = J and (J^n)* = J^n for n ≤ 6".into(),
        failures,
    )
}

fn random_poly(rng: &mut ChaCha8Rng, p: u64, max_exp: u32, max_terms: usize) -> Poly {
    let char = PrimeChar::new(p).unwrap();
    let n = rng.gen_range(1..=max_terms);
    Poly::from_terms(
        char,
        3,
        (0..n).map(|_| {
            let exps = [
                rng.gen_range(0..=max_exp),
                rng.gen_range(0..=max_exp),
                rng.gen_range(0..=max_exp),
            ];
            (Monomial::new(&exps).unwrap(), rng.gen_range(1..p as u32))
        }),
    )
}

fn random_homogeneous(rng: &mut ChaCha8Rng, p: u64, deg: u32) -> Poly {
    let char = PrimeChar::new(p).unwrap();
    let n = rng.gen_range(1..=3);
    Poly::from_terms(
        char,
        3,
        (0..n).map(|_| {
            let a = rng.gen_range(0..=deg);
            let b = rng.gen_range(0..=deg - a);
            (
                Monomial::new(&[a, b, deg - a - b]).unwrap(),
                rng.gen_range(1..p as u32),
            )
        }),
    )
}

fn random_ideal(rng: &mut ChaCha8Rng, p: u64) -> IdealGens {
    loop {
        let k = rng.gen_range(1..=3);
        let gens: Vec<Poly> = (0..k)
            .map(|_| {
                let deg = rng.gen_range(1..=2);
                random_homogeneous(rng, p, deg)
            })
            .collect();
        let ideal = IdealGens::new(PrimeChar::new(p).unwrap(), 3, gens);
        if !ideal.is_empty() {
            return ideal;
        }
    }
}

fn engine_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7167_6874);
    let mut failures = Vec::new();

    // confluence: reduction by a Gröbner basis in any order gives one answer
    for i in 0..50 {
        let ideal = random_ideal(&mut rng, 7);
        let gb = ideal.groebner();
        let mut gens = ideal.gens().to_vec();
        gens.shuffle(&mut rng);
        if IdealGens::new(ideal.char(), 3, gens).groebner() != gb {
            failures.push(format!("ideal {i}: basis depends on generator order"));
        }
        for _ in 0..4 {
            let f = random_poly(&mut rng, 7, 4, 5);
            let mut order = gb.basis().to_vec();
            order.shuffle(&mut rng);
            if normal_form_by(&f, &order) != normal_form(&f, &gb) {
                failures.push(format!("ideal {i}: normal form depends on reduction order"));
            }
        }
    }

    // bracket powers depend only on the ideal
    for i in 0..40 {
        let a = random_ideal(&mut rng, 3);
        let g = a.gens();
        let h = random_homogeneous(&mut rng, 3, 1);
        let mut other: Vec<Poly> = g.to_vec();
        if g.len() >= 2 {
            // g2 + h·g1 with h of degree deg g2 − deg g1 when that is ≥ 0
            let d1 = g[0].degree().unwrap();
            let d2 = g[1].degree().unwrap();
            if d2 == d1 + 1 {
                other[1] = &g[1] + &(&h * &g[0]);
            }
        }
        other.push(&h * &g[0]);
        other.reverse();
        let b = IdealGens::new(a.char(), 3, other);
        for q in [3, 9] {
            let lhs = bracket_power(&a, q).unwrap();
            let rhs = bracket_power(&b, q).unwrap();
            if !ideal_equal(&lhs, &rhs) {
                failures.push(format!(
                    "ideal {i}: bracket power {q} depends on generators"
                ));
            }
        }
    }

    // Frobenius against repeated multiplication
    for i in 0..200 {
        let p = [3u64, 5, 7][i % 3];
        let f = random_poly(&mut rng, p, 3, 4);
        let mut repeated = Poly::one(f.char(), 3);
        for _ in 0..p {
            repeated = &repeated * &f;
        }
        if f.frobenius_pow(p).unwrap() != repeated {
            failures.push(format!("poly {i}: frobenius_pow({p}) differs from f^{p}"));
        }
    }

    // Fermat Hilbert function against the series (1 − z^r)/(1 − z)^(d+1)
    for (p, r, d, _) in GRID {
        let ring = HypersurfaceRing::fermat(p, r, d).unwrap();
        let zero = RIdeal::zero(&ring);
        let len = 3 * r as usize + 1;
        let mut series = vec![0i64; len];
        series[0] = 1;
        series[r as usize] = -1;
        for _ in 0..=d {
            for t in 1..len {
                series[t] += series[t - 1];
            }
        }
        for (t, &coefficient) in series.iter().enumerate() {
            if zero.hilbert_function(t as u32) as i64 != coefficient {
                failures.push(format!(
                    "Fermat({p},{r},{d}) t={t}: Hilbert function mismatch"
                ));
            }
        }
    }

    // containments of the ideal calculus
    for i in 0..100 {
        let a = random_ideal(&mut rng, 7);
        let b = random_ideal(&mut rng, 7);
        let gb_a = a.groebner();
        let gb_b = b.groebner();
        let cut = intersect(&a, &b);
        let gb_cut = cut.groebner();
        let quotient = colon(&a, &b);
        let gb_quotient = quotient.groebner();
        let ok = ideal_product(&a, &b)
            .gens()
            .iter()
            .all(|g| member(g, &gb_cut))
            && cut
                .gens()
                .iter()
                .all(|g| member(g, &gb_a) && member(g, &gb_b))
            && a.gens().iter().all(|g| member(g, &gb_quotient))
            && ideal_product(&quotient, &b)
                .gens()
                .iter()
                .all(|g| member(g, &gb_a));
        if !ok {
            failures.push(format!("ideal pair {i}: containment fails"));
        }
    }

    finish(
        "confluence (50 ideals), bracket powers (40 ideals), Frobenius (200 polys), \
         Fermat Hilbert series (t ≤ 3r), ideal calculus (100 pairs)"
            .into(),
        failures,
    )
}

fn spec_path(p: u64, r: u32, d: u32) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(format!("fermat-{p}-{r}-{d}.toml"))
}

fn determinism() -> Check {
    let mut failures = Vec::new();
    for (p, r, d, _) in GRID {
        let path = spec_path(p, r, d);
        let runs: Vec<Vec<u8>> = (0..3)
            .map(|_| {
                let out = Command::new(env!("CARGO_BIN_EXE_tightcl"))
                    .arg("report")
                    .arg(&path)
                    .args(["--format", "json"])
                    .output()
                    .expect("tightcl runs");
                if !out.status.success() {
                    failures.push(format!(
                        "({p},{r},{d}): exit {:?}: {}",
                        out.status.code(),
                        String::from_utf8_lossy(&out.stderr)
                    ));
                }
                out.stdout
            })
            .collect();
        if runs[0].is_empty() || runs.iter().any(|o| o != &runs[0]) {
            failures.push(format!("({p},{r},{d}): report output differs between runs"));
        }
    }
    finish(
        "`tightcl report --format json` byte-identical over 3 runs per grid point".into(),
        failures,
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("closed form vs degree slices", closed_form_matches_slices),
        ("classic instance", classic_instance),
        ("tight Hilbert coefficients", coefficients),
        ("identity suites", identity_suites),
        ("reduction numbers", reduction_numbers),
        ("tightly closed powers", f_rational_powers),
        ("engine properties", engine_properties),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err(vec!["panicked".into()]));
        match outcome {
            Ok(summary) => println!("[PASS] criterion {} ({name}): {summary}", i + 1),
            Err(details) => {
                failed += 1;
                println!("[FAIL] criterion {} ({name})", i + 1);
                for d in details {
                    println!("       {d}");
                }
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
