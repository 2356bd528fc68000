//! Property-based checks of the algebraic core: ring axioms, parser
//! roundtrips, Groebner normal-form laws, staircase counting, volume-function
//! identities, and local colon soundness on small inputs.

use num::{BigInt, One, Zero};
use proptest::prelude::*;

use mutau_core::hfun::h_value;
use mutau_core::{
    local_colon, local_contains, parse_polynomial, staircase_count, Field, GroebnerConfig, Ideal,
    InvariantOptions, Monomial, Polynomial, PrimeField, Rat, Rationals, Ring,
};

/// A raw term: exponents for up to two variables plus a small integer
/// coefficient.
fn term_strategy() -> impl Strategy<Value = (u32, u32, i64)> {
    (0u32..=3, 0u32..=3, -5i64..=5)
}

fn poly_strategy() -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
    proptest::collection::vec(term_strategy(), 0..=5)
}

fn build<F: Field>(ring: &Ring<F>, terms: &[(u32, u32, i64)]) -> Polynomial<F> {
    let field = ring.field().clone();
    let list = terms
        .iter()
        .map(|&(a, b, c)| (Monomial::from_exps(&[a, b]), field.from_int(c)))
        .collect();
    Polynomial::from_terms(ring, list)
}

fn q_ring() -> Ring<Rationals> {
    Ring::new(Rationals, &["x", "y"]).unwrap()
}

fn fp_ring(p: u64) -> Ring<PrimeField> {
    Ring::new(PrimeField::new(p).unwrap(), &["x", "y"]).unwrap()
}

fn ring_laws<F: Field>(ring: &Ring<F>, ta: &[(u32, u32, i64)], tb: &[(u32, u32, i64)], tc: &[(u32, u32, i64)]) {
    let a = build(ring, ta);
    let b = build(ring, tb);
    let c = build(ring, tc);
    let zero = Polynomial::zero(ring);
    let one = Polynomial::one(ring);

    // Additive group laws.
    let ab = a.checked_add(&b).unwrap();
    assert_eq!(ab, b.checked_add(&a).unwrap(), "addition commutes");
    assert_eq!(
        ab.checked_add(&c).unwrap(),
        a.checked_add(&b.checked_add(&c).unwrap()).unwrap(),
        "addition associates"
    );
    assert_eq!(a.checked_sub(&a).unwrap(), zero, "a - a = 0");
    assert_eq!(a.checked_add(&zero).unwrap(), a, "a + 0 = a");

    // Multiplicative monoid laws.
    let amb = a.checked_mul(&b).unwrap();
    assert_eq!(amb, b.checked_mul(&a).unwrap(), "multiplication commutes");
    assert_eq!(
        amb.checked_mul(&c).unwrap(),
        a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap(),
        "multiplication associates"
    );
    assert_eq!(a.checked_mul(&one).unwrap(), a, "a * 1 = a");
    assert_eq!(a.checked_mul(&zero).unwrap(), zero, "a * 0 = 0");

    // Distributivity.
    assert_eq!(
        a.checked_mul(&b.checked_add(&c).unwrap()).unwrap(),
        a.checked_mul(&b)
            .unwrap()
            .checked_add(&a.checked_mul(&c).unwrap())
            .unwrap(),
        "multiplication distributes over addition"
    );
}

proptest! {
    #[test]
    fn ring_laws_over_q(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        ring_laws(&q_ring(), &a, &b, &c);
    }

    #[test]
    fn ring_laws_over_f5(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        ring_laws(&fp_ring(5), &a, &b, &c);
    }

    #[test]
    fn display_then_parse_roundtrips_over_q(t in poly_strategy()) {
        let ring = q_ring();
        let f = build(&ring, &t);
        let back = parse_polynomial(&ring, &f.to_string()).unwrap();
        prop_assert!(back == f, "roundtrip changed {f}");
    }

    #[test]
    fn display_then_parse_roundtrips_over_f3(t in poly_strategy()) {
        let ring = fp_ring(3);
        let f = build(&ring, &t);
        let back = parse_polynomial(&ring, &f.to_string()).unwrap();
        prop_assert!(back == f, "roundtrip changed {f}");
    }

    #[test]
    fn groebner_normal_form_laws(
        gens in proptest::collection::vec(poly_strategy(), 1..=3),
        t in poly_strategy(),
        u in poly_strategy(),
    ) {
        let ring = q_ring();
        let cfg = GroebnerConfig::default();
        let polys: Vec<_> = gens.iter().map(|g| build(&ring, g)).collect();
        if polys.iter().all(|p| p.is_zero()) {
            return Ok(());
        }
        let ideal = Ideal::new(&ring, polys.clone()).unwrap();
        let gb = ideal.groebner_degrevlex(&cfg).unwrap();

        // Every generator reduces to zero against the basis.
        for g in &polys {
            prop_assert!(gb.contains(g, &cfg).unwrap(), "generator {g} escapes its own ideal");
        }

        let f = build(&ring, &t);
        let g = build(&ring, &u);
        let nf_f = gb.normal_form(&f, &cfg).unwrap();
        let nf_g = gb.normal_form(&g, &cfg).unwrap();

        // Normal forms are idempotent, fixed points differ from the input by
        // an ideal element, and reduction is linear.
        prop_assert!(gb.normal_form(&nf_f, &cfg).unwrap() == nf_f);
        prop_assert!(gb.contains(&f.checked_sub(&nf_f).unwrap(), &cfg).unwrap());
        let nf_sum = gb.normal_form(&f.checked_add(&g).unwrap(), &cfg).unwrap();
        prop_assert!(nf_sum == nf_f.checked_add(&nf_g).unwrap(), "normal form is not linear");
    }

    #[test]
    fn staircase_count_matches_brute_force(
        raw in proptest::collection::vec((0u32..=4, 0u32..=4, 0u32..=4), 1..=4),
        nvars in 1usize..=3,
    ) {
        let lts: Vec<Monomial> = raw
            .iter()
            .map(|&(a, b, c)| Monomial::from_exps(&[a, b, c][..nvars]))
            .collect();

        // The count is finite exactly when every variable is cut off by a
        // pure power among the leading terms; in that case every standard
        // monomial lies in the box below those powers.
        let mut box_bounds = vec![None::<u32>; nvars];
        for m in &lts {
            let nz: Vec<usize> = (0..nvars).filter(|&i| m.exponent(i) > 0).collect();
            match nz.len() {
                0 => {
                    for b in &mut box_bounds {
                        *b = Some(0);
                    }
                }
                1 => {
                    let i = nz[0];
                    let e = m.exponent(i);
                    box_bounds[i] = Some(box_bounds[i].map_or(e, |cur| cur.min(e)));
                }
                _ => {}
            }
        }
        let expected = if box_bounds.iter().all(Option::is_some) {
            let bounds: Vec<u32> = box_bounds.into_iter().map(Option::unwrap).collect();
            let mut count = 0u64;
            let mut tuple = vec![0u32; nvars];
            count_standard(&mut tuple, 0, &bounds, &lts, &mut count);
            Some(count)
        } else {
            None
        };
        prop_assert_eq!(staircase_count(nvars, &lts), expected);
    }

    #[test]
    fn h_identities(num in 1i64..=200, den in 1i64..=20, d in 1u32..=5, step in 0i64..=30) {
        let d_rat = Rat::from_integer(BigInt::from(d));
        // Fold the raw fraction into (0, d).
        let mut s = Rat::new(BigInt::from(num), BigInt::from(den));
        while s >= d_rat {
            s -= &d_rat;
        }
        if s.is_zero() {
            s = Rat::new(BigInt::from(1), BigInt::from(den + 1));
        }
        let h = h_value(&s, d);
        prop_assert!(Rat::zero() <= h && h <= Rat::one(), "H out of range at s={}", s);
        let reflected = h_value(&(&d_rat - &s), d);
        prop_assert_eq!(&h + &reflected, Rat::one(), "reflection identity fails at s={}", s);
        let shifted = &s + Rat::new(BigInt::from(step), BigInt::from(7));
        prop_assert!(h_value(&shifted, d) >= h, "H not monotone at s={}", s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn local_colon_is_sound_on_small_germs(
        a in 2u32..=3,
        b in 2u32..=3,
        c in -3i64..=3,
        i in 1u32..=2,
        j in 1u32..=2,
    ) {
        let ring = q_ring();
        let field = ring.field().clone();
        let opts = InvariantOptions::default();
        let f = Polynomial::from_terms(
            &ring,
            vec![
                (Monomial::from_exps(&[a + 1, 0]), field.from_int(1)),
                (Monomial::from_exps(&[0, b + 1]), field.from_int(1)),
                (Monomial::from_exps(&[i, j]), field.from_int(c)),
            ],
        );
        let jac = mutau_core::jacobian_ideal(&f).unwrap();
        let colon = local_colon(&jac, &f, &opts.local, &opts.groebner).unwrap();

        // Soundness: every generator of the colon multiplies f back into the
        // Jacobian ideal locally.
        for g in colon.gens() {
            let gf = g.checked_mul(&f).unwrap();
            prop_assert!(
                local_contains(&jac, &gf, &opts.local, &opts.groebner).unwrap(),
                "colon generator {g} fails (j(f):f) membership for f = {f}"
            );
        }

        // The colon contains the Jacobian ideal itself: g f lies in j(f) for
        // every g in j(f).
        for g in jac.gens() {
            prop_assert!(
                local_contains(&colon, g, &opts.local, &opts.groebner).unwrap(),
                "colon misses Jacobian generator {g} for f = {f}"
            );
        }
    }
}

fn count_standard(tuple: &mut Vec<u32>, i: usize, bounds: &[u32], lts: &[Monomial], count: &mut u64) {
    if i == tuple.len() {
        let m = Monomial::from_exps(tuple);
        if lts.iter().all(|lt| !lt.divides(&m)) {
            *count += 1;
        }
        return;
    }
    for e in 0..bounds[i] {
        tuple[i] = e;
        count_standard(tuple, i + 1, bounds, lts, count);
    }
    tuple[i] = 0;
}
