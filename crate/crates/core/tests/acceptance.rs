//! Acceptance suite: one test per criterion, each ending in a single
//! "ACCEPTANCE n: PASS" line. Everything asserted here is exact unless the
//! criterion itself is statistical (criterion 3) or a trend (criteria 8, 10).

use std::sync::OnceLock;

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mutau_core::hfun::{bound, factorial, h_value, integral_h, monte_carlo_h, rat_to_f64};
use mutau_core::{
    builtin_corpus, corpus_run_text, count_bounded, frobenius_power, generalized_milnor,
    h_s_level, hilbert_samuel_multiplicity, local_colength, mu_tau_report, prime_ring,
    tau_min_experiment, tjurina_ideal, Colength, ConjectureReport, Count, Ideal,
    InvariantOptions, Monomial, Polynomial, Rat, Rationals, Ring, SumMode,
};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn opts() -> InvariantOptions {
    InvariantOptions::default()
}

/// The built-in conjecture corpus is computed once and shared by the two
/// criteria that read it (7 and 11).
fn corpus_report() -> &'static ConjectureReport {
    static REPORT: OnceLock<ConjectureReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let mut o = opts();
        o.seed = 20260819;
        corpus_run_text(&builtin_corpus(o.seed), &o).expect("corpus run succeeds")
    })
}

#[test]
fn acceptance_01_bound_table_exact_values() {
    assert_eq!(bound(2).unwrap(), rat(4, 3));
    assert_eq!(bound(3).unwrap(), rat(3, 2));
    assert_eq!(bound(4).unwrap(), rat(192, 115));
    assert_eq!(bound(5).unwrap(), rat(20, 11));
    println!("ACCEPTANCE 1: PASS");
}

#[test]
fn acceptance_02_h_identity_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acc_0002);
    let d_rat = |d: u32| Rat::from_integer(BigInt::from(d));
    for _ in 0..200 {
        let d: u32 = rng.random_range(1..=6);
        // A random rational strictly inside (0, d).
        let den: i64 = rng.random_range(2..=12);
        let num: i64 = rng.random_range(1..(den * d as i64));
        let s = rat(num, den);
        assert!(Rat::zero() < s && s < d_rat(d));

        // Reflection symmetry H(s,d) + H(d-s,d) = 1, exactly.
        let sum = h_value(&s, d) + h_value(&(d_rat(d) - &s), d);
        assert_eq!(sum, Rat::one(), "reflection fails at s={s}, d={d}");

        // Monomial regime: H(s,d) = s^d/d! on (0,1].
        if s <= Rat::one() {
            let mut pow = Rat::one();
            for _ in 0..d {
                pow *= &s;
            }
            let expected = pow / Rat::from_integer(factorial(d));
            assert_eq!(h_value(&s, d), expected, "monomial regime at s={s}, d={d}");
        }

        // Integral recurrence H(s,d) = integral of H(t,d-1) over [s-1, s].
        if d >= 2 {
            let lo = &s - Rat::one();
            let rec = integral_h(&lo, &s, d - 1);
            assert_eq!(h_value(&s, d), rec, "recurrence fails at s={s}, d={d}");
        }
    }
    // Monotone on grids: 64 ascending nodes across [0, d] for every d.
    for d in 1..=6 {
        let mut prev = Rat::zero();
        for k in 0..=64i64 {
            let t = rat(k * d as i64, 64);
            let v = h_value(&t, d);
            assert!(v >= prev, "H not monotone at t={t}, d={d}");
            prev = v;
        }
    }
    println!("ACCEPTANCE 2: PASS");
}

#[test]
fn acceptance_03_monte_carlo_cross_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acc_0003);
    for i in 0..10u64 {
        let d: u32 = rng.random_range(1..=6);
        // Keep s in the middle band so the hit probability is bounded away
        // from 0 and 1 and the normal-approximation band is meaningful.
        let t: i64 = rng.random_range(33..=66);
        let s = rat(t * d as i64, 100);
        let exact = rat_to_f64(&h_value(&s, d));
        let mc = monte_carlo_h(&s, d, 100_000, 7 + i);
        assert!(
            (mc.estimate - exact).abs() < 4.0 * mc.stderr,
            "MC off at s={s}, d={d}: estimate {} vs exact {} (stderr {})",
            mc.estimate,
            exact,
            mc.stderr
        );
    }
    println!("ACCEPTANCE 3: PASS");
}

#[test]
fn acceptance_04_char_p_worked_examples() {
    for p in [2u64, 3, 5] {
        let ring = prime_ring(&format!("char={p}; vars=x,y")).unwrap();
        let f = mutau_core::parse_polynomial(&ring, &format!("x^{p} + y^{}", p + 1)).unwrap();
        let o = opts();
        let (record, _warnings) = mu_tau_report(&f, &o).unwrap();
        let pp = p * p;
        assert_eq!(record.tau, Count::Finite(pp), "tau at p={p}");
        assert!(!record.mu.is_finite(), "mu must be non-finite at p={p}");
        assert_eq!(record.mu_o, Count::Finite(pp), "mu_O at p={p}");
        // The multiplicity cross-check agrees: e(tj(f)) = p^2 both through
        // the sampling report and the Hilbert-Samuel scan.
        let gm = generalized_milnor(&f, &o).unwrap();
        assert_eq!(gm.value, Count::Finite(pp));
        assert_eq!(gm.e_tj, Some(pp), "e(tj) at p={p}");
        assert_eq!(gm.agrees_with_e_tj, Some(true));
        let tj = tjurina_ideal(&f).unwrap();
        assert_eq!(hilbert_samuel_multiplicity(&tj, &o).unwrap(), pp);
    }
    println!("ACCEPTANCE 4: PASS");
}

#[test]
fn acceptance_05_parameter_ideal_frobenius_exactness() {
    let o = opts();
    for p in [2u64, 3] {
        let ring = prime_ring(&format!("char={p}; vars=x,y")).unwrap();
        for a in 1..=4u64 {
            for b in 1..=4u64 {
                let ideal = Ideal::parse(&ring, &format!("x^{a}, y^{b}")).unwrap();
                for e in 0..=3u32 {
                    let q = p.pow(e);
                    let fro = frobenius_power(&ideal, e).unwrap();
                    match local_colength(&fro, &o.local, &o.groebner).unwrap() {
                        Colength::Finite { value, .. } => {
                            assert_eq!(
                                value,
                                a * b * q * q,
                                "colength of (x^{a},y^{b})^[{q}] over F_{p}"
                            );
                        }
                        Colength::Infinite => panic!("parameter ideal has finite colength"),
                    }
                }
            }
        }
    }
    println!("ACCEPTANCE 5: PASS");
}

#[test]
fn acceptance_06_saito_equality_for_quasi_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acc_0006);
    let o = opts();
    let mut done = 0u32;
    let mut attempts = 0u32;
    while done < 25 {
        attempts += 1;
        assert!(attempts <= 300, "generator kept hitting degenerate draws");
        let nv: usize = rng.random_range(2..=3);
        let names: &[&str] = if nv == 2 { &["x", "y"] } else { &["x", "y", "z"] };
        let ring: Ring<Rationals> = Ring::new(Rationals, names).unwrap();
        let exps: Vec<u32> = (0..nv).map(|_| rng.random_range(2..=6)).collect();
        // All monomials of weighted degree exactly 1 under weights 1/a_i
        // (checked in integers via the lcm) and total degree at most 6.
        let lcm = exps.iter().fold(1u64, |acc, &a| num::integer::lcm(acc, a as u64));
        let mut monos = Vec::new();
        let mut stack = vec![0u32; nv];
        collect_weighted(&mut monos, &mut stack, 0, &exps, lcm);
        let mut terms = Vec::new();
        for m in &monos {
            let spine = m.iter().enumerate().all(|(i, &e)| {
                (e == exps[i] && m.iter().filter(|&&x| x > 0).count() == 1) || e == 0
            }) && m.iter().any(|&e| e > 0);
            let keep = spine || rng.random_bool(0.5);
            if keep {
                let mut c: i64 = rng.random_range(-9..=9);
                if c == 0 {
                    c = 1;
                }
                terms.push((Monomial::from_exps(m), Rat::from_integer(BigInt::from(c))));
            }
        }
        let f = Polynomial::from_terms(&ring, terms);
        let (record, _) = match mu_tau_report(&f, &o) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if !record.tau.is_finite() {
            // A degenerate coefficient draw; quasi-homogeneity only promises
            // mu = tau for isolated singularities.
            continue;
        }
        assert_eq!(
            record.mu, record.tau,
            "Saito equality fails for quasi-homogeneous {f}"
        );
        done += 1;
    }
    println!("ACCEPTANCE 6: PASS");
}

fn collect_weighted(
    out: &mut Vec<Vec<u32>>,
    stack: &mut Vec<u32>,
    i: usize,
    exps: &[u32],
    lcm: u64,
) {
    if i == exps.len() {
        let total: u32 = stack.iter().sum();
        let weighted: u64 = stack
            .iter()
            .zip(exps)
            .map(|(&e, &a)| e as u64 * (lcm / a as u64))
            .sum();
        if weighted == lcm && total <= 6 {
            out.push(stack.clone());
        }
        return;
    }
    for e in 0..=6u32 {
        stack[i] = e;
        collect_weighted(out, stack, i + 1, exps, lcm);
    }
    stack[i] = 0;
}

#[test]
fn acceptance_07_main_inequality_on_corpus() {
    let report = corpus_report();
    assert!(report.summary.instances >= 100, "corpus has 100+ instances");
    assert_eq!(report.summary.errors, 0, "corpus runs clean");
    assert_eq!(report.summary.bound_violations, 0);
    let mut char0 = 0usize;
    let mut charp = 0usize;
    let mut defined = 0usize;
    for r in &report.records {
        if r.characteristic == 0 {
            char0 += 1;
        } else {
            charp += 1;
        }
        if let (Some(ratio), Some(bound)) = (&r.ratio, &r.bound) {
            defined += 1;
            assert!(
                &Rat::one() <= ratio,
                "[{}] ratio below 1: {} for {}",
                r.index,
                ratio,
                r.f
            );
            assert!(
                ratio <= bound,
                "[{}] ratio {} exceeds bound {} for {}",
                r.index,
                ratio,
                bound,
                r.f
            );
            assert_eq!(r.bound_satisfied, Some(true));
        }
    }
    assert!(char0 >= 40 && charp >= 25, "corpus mixes characteristics");
    assert!(defined >= 90, "most instances have a defined ratio");
    println!("ACCEPTANCE 7: PASS");
}

#[test]
fn acceptance_08_hs_levels_converge_to_the_volume() {
    let ring = prime_ring("char=2; vars=x,y").unwrap();
    let m = Ideal::parse(&ring, "x, y").unwrap();
    let o = opts();
    for s in [rat(1, 2), rat(1, 1), rat(3, 2)] {
        let target = h_value(&s, 2);
        let gaps: Vec<Rat> = (1..=6)
            .map(|e| {
                let level = h_s_level(&m, &m, &s, e, &o).unwrap();
                let diff = &level.value - &target;
                if diff < Rat::zero() {
                    -diff
                } else {
                    diff
                }
            })
            .collect();
        // Strictly shrinking gap from e = 3 on.
        for e in 3..6 {
            assert!(
                gaps[e - 1] > gaps[e],
                "gap did not shrink at s={s}, e={}->{}: {} vs {}",
                e,
                e + 1,
                gaps[e - 1],
                gaps[e]
            );
        }
    }
    println!("ACCEPTANCE 8: PASS");
}

#[test]
fn acceptance_09_counting_lemmas_match_brute_force() {
    for d in 1..=4u32 {
        for c in 0..=6u32 {
            for m in 0..=12u32 {
                let mut eq = 0u64;
                let mut le = 0u64;
                let mut tuple = vec![0u32; d as usize];
                brute_count(&mut tuple, 0, c, m, &mut eq, &mut le);
                assert_eq!(
                    count_bounded(m, d, c, SumMode::Eq),
                    eq,
                    "Eq mismatch at m={m} d={d} c={c}"
                );
                assert_eq!(
                    count_bounded(m, d, c, SumMode::Le),
                    le,
                    "Le mismatch at m={m} d={d} c={c}"
                );
            }
        }
    }
    println!("ACCEPTANCE 9: PASS");
}

fn brute_count(tuple: &mut Vec<u32>, i: usize, c: u32, m: u32, eq: &mut u64, le: &mut u64) {
    if i == tuple.len() {
        let sum: u32 = tuple.iter().sum();
        if sum == m {
            *eq += 1;
        }
        if sum <= m {
            *le += 1;
        }
        return;
    }
    for e in 0..=c {
        tuple[i] = e;
        brute_count(tuple, i + 1, c, m, eq, le);
    }
    tuple[i] = 0;
}

#[test]
fn acceptance_10_family_desk_scale_d2() {
    let ring: Ring<Rationals> = Ring::new(Rationals, &["x", "y"]).unwrap();
    let o = opts();
    let mut prev_ratio: Option<Rat> = None;
    for n in [6u32, 8, 10, 12] {
        let report = tau_min_experiment(&ring, n, 20, 1000 + n as u64, None, &o).unwrap();
        let musq = ((n - 1) * (n - 1)) as u64;
        for t in &report.trials {
            assert_eq!(t.error, None, "trial {} errored at n={n}", t.trial);
            assert_eq!(t.mu, Some(musq), "mu at n={n}, trial {}", t.trial);
        }
        let ratio = report.ratio.clone().expect("ratio defined");
        assert!(ratio <= rat(4, 3), "ratio exceeds 4/3 at n={n}");
        assert_eq!(report.bound_satisfied, Some(true));
        if let Some(prev) = &prev_ratio {
            assert!(
                &ratio >= prev,
                "mu/tau_min decreased from {prev} to {ratio} at n={n}"
            );
        }
        prev_ratio = Some(ratio);
        if n == 12 {
            let gap = report.relative_gap.clone().expect("gap defined");
            assert!(
                gap <= rat(1, 4),
                "tau_min/n^2 misses 3/4 by more than 25%: gap {gap}"
            );
        }
    }
    println!("ACCEPTANCE 10: PASS");
}

/// The d = 3 analogue of criterion 10 at reduced trial counts; slow, so it
/// only runs when requested (cargo test -- --ignored).
#[test]
#[ignore]
fn acceptance_10_family_desk_scale_d3_slow() {
    let ring: Ring<Rationals> = Ring::new(Rationals, &["x", "y", "z"]).unwrap();
    let o = opts();
    let mut prev_ratio: Option<Rat> = None;
    for n in [3u32, 4, 5] {
        let report = tau_min_experiment(&ring, n, 6, 2000 + n as u64, None, &o).unwrap();
        let mucube = ((n - 1) as u64).pow(3);
        for t in &report.trials {
            assert_eq!(t.error, None, "trial {} errored at n={n}", t.trial);
            assert_eq!(t.mu, Some(mucube), "mu at n={n}, trial {}", t.trial);
        }
        assert_eq!(report.bound, rat(3, 2), "limit bound for d=3");
        assert_eq!(report.target, rat(2, 3), "H_2(3) - H_1(3) target");
        let ratio = report.ratio.clone().expect("ratio defined");
        assert!(ratio <= rat(3, 2), "ratio exceeds 3/2 at n={n}");
        assert_eq!(report.bound_satisfied, Some(true));
        if let Some(prev) = &prev_ratio {
            assert!(
                &ratio >= prev,
                "mu/tau_min decreased from {prev} to {ratio} at n={n}"
            );
        }
        prev_ratio = Some(ratio);
    }
    println!("ACCEPTANCE 10 (d=3): PASS");
}

#[test]
fn acceptance_11_conjecture_harness_on_builtin_corpus() {
    let report = corpus_report();
    assert_eq!(report.summary.errors, 0, "corpus runs clean");
    let mut char0_contained = 0usize;
    let mut charp_contained = 0usize;
    for r in &report.records {
        if r.contained_in_tj == Some(true) {
            if r.characteristic == 0 {
                char0_contained += 1;
            } else {
                charp_contained += 1;
            }
        }
    }
    assert_eq!(
        char0_contained, 0,
        "a char-0 instance has (j(f):f) inside tj(f)"
    );
    assert_eq!(report.summary.char_zero_contained_candidates, 0);
    // Char-p outcomes are recorded, never asserted; the builtin corpus is
    // known to contain such examples.
    println!(
        "ACCEPTANCE 11: PASS (char-p containments recorded: {charp_contained})"
    );
}
