//! Buchberger's algorithm, normal forms and staircase colengths.
//!
//! The engine is deterministic: same generators, order and budget always
//! produce the same reduced basis. Reduction work is metered by a global
//! step budget so pathological inputs fail fast with `BudgetExceeded`
//! instead of hanging.
//!
//! Two features serve the local-algebra layer:
//!
//! * a run may be seeded with an already-known Groebner basis (its internal
//!   S-pairs are skipped, which is sound because they reduce to zero by
//!   definition), and
//! * a run may carry a degree-truncation bound T. Working polynomials drop
//!   every term of total degree >= T as they are built. Each drop is an
//!   eager reduction step against the degree-T monomial generators, so it is
//!   only legal when the generator set contains all of m^T; the local layer
//!   guarantees that. Basis elements themselves are never truncated.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::Ring;

/// Knobs for a Groebner computation.
#[derive(Clone, Debug)]
pub struct GroebnerConfig {
    /// Total reduction steps allowed; one step is one single-term
    /// elimination against a basis element.
    pub max_reduction_steps: u64,
}

impl Default for GroebnerConfig {
    /// 10^7 steps, overridable through `MUTAU_GROEBNER_BUDGET`.
    fn default() -> Self {
        let b = std::env::var("MUTAU_GROEBNER_BUDGET")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(10_000_000);
        GroebnerConfig {
            max_reduction_steps: b,
        }
    }
}

struct Budget {
    left: u64,
    limit: u64,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { left: limit, limit }
    }

    fn spend(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::BudgetExceeded { budget: self.limit });
        }
        self.left -= 1;
        Ok(())
    }
}

pub(crate) type Terms<F> = Vec<(Monomial, <F as Field>::Elem)>;

struct Entry<F: Field> {
    terms: Terms<F>,
    lt: Monomial,
    is_mono: bool,
    is_seed: bool,
}

/// a - c * x^m * b, both inputs sorted descending under `order`; terms of
/// total degree >= trunc are dropped from the product as it is merged.
fn sub_scaled<F: Field>(
    field: &F,
    order: &MonomialOrder,
    trunc: Option<u64>,
    a: &[(Monomial, F::Elem)],
    c: &F::Elem,
    m: &Monomial,
    b: &[(Monomial, F::Elem)],
) -> Terms<F> {
    let keep = |mono: &Monomial| trunc.map_or(true, |t| mono.total_degree() < t);
    let mut out: Terms<F> = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    let mut shifted: Option<Monomial> = None;
    while i < a.len() && j < b.len() {
        let bm = shifted.get_or_insert_with(|| b[j].0.mul(m));
        if !keep(bm) {
            j += 1;
            shifted = None;
            continue;
        }
        match order.cmp(&a[i].0, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let coeff = field.neg(&field.mul(c, &b[j].1));
                out.push((shifted.take().unwrap(), coeff));
                j += 1;
            }
            Ordering::Equal => {
                let s = field.sub(&a[i].1, &field.mul(c, &b[j].1));
                if !field.is_zero(&s) {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
                shifted = None;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    while j < b.len() {
        let bm = b[j].0.mul(m);
        if keep(&bm) {
            out.push((bm, field.neg(&field.mul(c, &b[j].1))));
        }
        j += 1;
    }
    out
}

fn make_monic<F: Field>(field: &F, t: &mut Terms<F>) {
    if let Some((_, lc)) = t.first() {
        if *lc == field.one() {
            return;
        }
        let inv = field.inv(&lc.clone());
        for (_, c) in t.iter_mut() {
            *c = field.mul(c, &inv);
        }
    }
}

/// Full normal form of `work` against the entries, in place. The slice of
/// already-irreducible leading terms grows from the left.
fn reduce_full<F: Field>(
    field: &F,
    order: &MonomialOrder,
    trunc: Option<u64>,
    basis: &[Entry<F>],
    mut work: Terms<F>,
    budget: &mut Budget,
) -> Result<Terms<F>> {
    let mut cursor = 0;
    while cursor < work.len() {
        let lm = work[cursor].0.clone();
        let lc = work[cursor].1.clone();
        let reducer = basis.iter().find(|e| e.lt.divides(&lm));
        match reducer {
            Some(e) => {
                budget.spend()?;
                let q = e.lt.div(&lm).expect("divisibility checked");
                let tail = sub_scaled(field, order, trunc, &work[cursor..], &lc, &q, &e.terms);
                work.truncate(cursor);
                work.extend(tail);
            }
            None => cursor += 1,
        }
    }
    Ok(work)
}

fn spoly<F: Field>(
    field: &F,
    order: &MonomialOrder,
    trunc: Option<u64>,
    f: &Entry<F>,
    g: &Entry<F>,
) -> Terms<F> {
    let lcm = f.lt.lcm(&g.lt);
    let mf = f.lt.div(&lcm).expect("lt divides lcm");
    let mg = g.lt.div(&lcm).expect("lt divides lcm");
    // Both product sides drop their over-degree terms, including the lcm
    // itself when it is over the bound; the drops are matched so the lead
    // cancellation is preserved.
    let keep = |mono: &Monomial| trunc.map_or(true, |t| mono.total_degree() < t);
    let lifted: Terms<F> = f
        .terms
        .iter()
        .map(|(m, c)| (m.mul(&mf), c.clone()))
        .filter(|(m, _)| keep(m))
        .collect();
    sub_scaled(field, order, trunc, &lifted, &field.one(), &mg, &g.terms)
}

/// A reduced Groebner basis: monic elements, pairwise non-divisible leading
/// terms, fully tail-reduced, sorted by descending leading monomial.
pub struct GroebnerBasis<F: Field> {
    ring: Ring<F>,
    order: MonomialOrder,
    entries: Vec<Entry<F>>,
}

/// Compute the reduced Groebner basis of the ideal generated by `gens`.
pub fn groebner_basis<F: Field>(
    ring: &Ring<F>,
    gens: &[Polynomial<F>],
    order: &MonomialOrder,
    cfg: &GroebnerConfig,
) -> Result<GroebnerBasis<F>> {
    groebner_basis_seeded(ring, None, gens, order, None, cfg)
}

/// Seeded/truncated variant. `seed` must be a Groebner basis (its internal
/// pairs are skipped); when `trunc` is `Some(T)` the generator set together
/// with the seed must contain every monomial of total degree T.
pub(crate) fn groebner_basis_seeded<F: Field>(
    ring: &Ring<F>,
    seed: Option<&GroebnerBasis<F>>,
    gens: &[Polynomial<F>],
    order: &MonomialOrder,
    trunc: Option<u64>,
    cfg: &GroebnerConfig,
) -> Result<GroebnerBasis<F>> {
    let field = ring.field().clone();
    let mut budget = Budget::new(cfg.max_reduction_steps);

    let mut entries: Vec<Entry<F>> = Vec::new();
    let mut seen: BTreeSet<Vec<(Monomial, F::Elem)>> = BTreeSet::new();
    let mut push_input = |terms: Terms<F>, is_seed: bool, entries: &mut Vec<Entry<F>>| {
        if terms.is_empty() || !seen.insert(terms.clone()) {
            return;
        }
        let lt = terms[0].0.clone();
        let is_mono = terms.len() == 1;
        entries.push(Entry {
            terms,
            lt,
            is_mono,
            is_seed,
        });
    };

    if let Some(gb) = seed {
        debug_assert_eq!(&gb.order, order, "seed order must match");
        for e in &gb.entries {
            push_input(e.terms.clone(), true, &mut entries);
        }
    }
    for g in gens {
        if g.ring() != ring {
            return Err(Error::RingMismatch);
        }
        let mut t = g.sorted_terms(order);
        if t.is_empty() {
            continue;
        }
        make_monic(&field, &mut t);
        push_input(t, false, &mut entries);
    }

    // Pair queue with the two Buchberger criteria applied at creation
    // (coprime leads) and at selection (chain criterion).
    let mut queue: Vec<(Monomial, u32, u32)> = Vec::new();
    let mut pending: BTreeSet<(u32, u32)> = BTreeSet::new();

    let make_pairs = |t: usize,
                      entries: &[Entry<F>],
                      queue: &mut Vec<(Monomial, u32, u32)>,
                      pending: &mut BTreeSet<(u32, u32)>| {
        for s in 0..t {
            let (a, b) = (&entries[s], &entries[t]);
            if a.is_seed && b.is_seed {
                continue;
            }
            if a.is_mono && b.is_mono {
                continue;
            }
            if a.lt.coprime_with(&b.lt) {
                continue;
            }
            queue.push((a.lt.lcm(&b.lt), s as u32, t as u32));
            pending.insert((s as u32, t as u32));
        }
    };

    for t in 0..entries.len() {
        make_pairs(t, &entries, &mut queue, &mut pending);
    }

    while !queue.is_empty() {
        // Normal selection: smallest lcm in the order, ties by indices.
        let mut best = 0;
        for k in 1..queue.len() {
            let c = order.cmp(&queue[k].0, &queue[best].0);
            if c == Ordering::Less
                || (c == Ordering::Equal
                    && (queue[k].1, queue[k].2) < (queue[best].1, queue[best].2))
            {
                best = k;
            }
        }
        let (lcm, i, j) = queue.swap_remove(best);
        pending.remove(&(i, j));

        // Chain criterion: some other element divides the lcm and both
        // companion pairs have already been handled.
        let chain = entries.iter().enumerate().any(|(k, e)| {
            let k = k as u32;
            k != i
                && k != j
                && e.lt.divides(&lcm)
                && !pending.contains(&(k.min(i), k.max(i)))
                && !pending.contains(&(k.min(j), k.max(j)))
        });
        if chain {
            continue;
        }

        let s = spoly(
            &field,
            order,
            trunc,
            &entries[i as usize],
            &entries[j as usize],
        );
        let mut rem = reduce_full(&field, order, trunc, &entries, s, &mut budget)?;
        if rem.is_empty() {
            continue;
        }
        make_monic(&field, &mut rem);
        let t = entries.len();
        let lt = rem[0].0.clone();
        let is_mono = rem.len() == 1;
        entries.push(Entry {
            terms: rem,
            lt,
            is_mono,
            is_seed: false,
        });
        make_pairs(t, &entries, &mut queue, &mut pending);
    }

    // Minimalize: keep leading terms not divisible by an earlier kept one,
    // scanning in ascending order (a proper divisor is always smaller).
    let mut idx: Vec<usize> = (0..entries.len()).collect();
    idx.sort_by(|&a, &b| {
        order
            .cmp(&entries[a].lt, &entries[b].lt)
            .then(entries[a].terms.cmp(&entries[b].terms))
    });
    let mut kept: Vec<usize> = Vec::new();
    for &i in &idx {
        if !kept.iter().any(|&k| entries[k].lt.divides(&entries[i].lt)) {
            kept.push(i);
        }
    }

    // Inter-reduce tails. Leading terms are pairwise non-divisible, so one
    // full pass leaves every element reduced against all the others.
    let mut reduced: Vec<Entry<F>> = Vec::new();
    for (pos, &i) in kept.iter().enumerate() {
        let others: Vec<Entry<F>> = kept
            .iter()
            .enumerate()
            .filter(|(q, _)| *q != pos)
            .map(|(_, &k)| Entry {
                terms: entries[k].terms.clone(),
                lt: entries[k].lt.clone(),
                is_mono: entries[k].is_mono,
                is_seed: false,
            })
            .collect();
        let mut t = reduce_full(
            &field,
            order,
            trunc,
            &others,
            entries[i].terms.clone(),
            &mut budget,
        )?;
        make_monic(&field, &mut t);
        debug_assert!(!t.is_empty(), "minimal element reduced to zero");
        let lt = t[0].0.clone();
        debug_assert_eq!(lt, entries[i].lt, "inter-reduction must keep the lead");
        let is_mono = t.len() == 1;
        reduced.push(Entry {
            terms: t,
            lt,
            is_mono,
            is_seed: false,
        });
    }
    reduced.sort_by(|a, b| order.cmp(&b.lt, &a.lt));

    Ok(GroebnerBasis {
        ring: ring.clone(),
        order: order.clone(),
        entries: reduced,
    })
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Basis elements as polynomials, leading terms descending.
    pub fn elements(&self) -> Vec<Polynomial<F>> {
        self.entries
            .iter()
            .map(|e| Polynomial::from_terms(&self.ring, e.terms.clone()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.entries.iter().map(|e| e.lt.clone()).collect()
    }

    /// True when the basis contains a unit, i.e. the ideal is (1).
    pub fn is_trivial(&self) -> bool {
        self.entries.iter().any(|e| e.lt.is_one())
    }

    /// Full normal form (lead and tails) of f against the basis.
    pub fn normal_form(&self, f: &Polynomial<F>, cfg: &GroebnerConfig) -> Result<Polynomial<F>> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let field = self.ring.field().clone();
        let mut budget = Budget::new(cfg.max_reduction_steps);
        let work = f.sorted_terms(&self.order);
        let rem = reduce_full(&field, &self.order, None, &self.entries, work, &mut budget)?;
        Ok(Polynomial::from_terms(&self.ring, rem))
    }

    /// Ideal membership through the normal form.
    pub fn contains(&self, f: &Polynomial<F>, cfg: &GroebnerConfig) -> Result<bool> {
        Ok(self.normal_form(f, cfg)?.is_zero())
    }

    /// Vector-space dimension of R/ideal, None when infinite.
    pub fn colength(&self) -> Option<u64> {
        staircase_count(self.ring.nvars(), &self.leading_monomials())
    }

    /// Standard monomials of total degree exactly k (graded slice size).
    pub fn standard_monomials_of_degree(&self, k: u64) -> u64 {
        let lts = self.leading_monomials();
        Monomial::all_of_degree(self.ring.nvars(), k as u32)
            .into_iter()
            .filter(|m| !lts.iter().any(|l| l.divides(m)))
            .count() as u64
    }
}

/// Count monomials outside the monomial ideal generated by `lts`; None when
/// the count is infinite (some variable has no pure power in the ideal).
pub fn staircase_count(nvars: usize, lts: &[Monomial]) -> Option<u64> {
    if lts.iter().any(|m| m.is_one()) {
        return Some(0);
    }
    // Minimal generators only.
    let mut uniq: Vec<&Monomial> = Vec::new();
    for m in lts {
        if !uniq.contains(&m) {
            uniq.push(m);
        }
    }
    let min: Vec<&Monomial> = uniq
        .iter()
        .filter(|m| !uniq.iter().any(|o| o != *m && o.divides(m)))
        .copied()
        .collect();
    let mut bounds = vec![u32::MAX; nvars];
    for m in &min {
        for i in 0..nvars {
            if m.exponent(i) > 0 && m.is_pure_power_of(i) {
                bounds[i] = bounds[i].min(m.exponent(i));
            }
        }
    }
    if bounds.iter().any(|b| *b == u32::MAX) {
        return None;
    }
    // Only generators strictly inside the box can exclude a box monomial.
    let divisors: Vec<&Monomial> = min
        .iter()
        .filter(|m| (0..nvars).all(|i| m.exponent(i) < bounds[i]))
        .copied()
        .collect();
    let mut count = 0u64;
    let mut exps = vec![0u32; nvars];
    'outer: loop {
        let mono = Monomial::from_exps(&exps);
        if !divisors.iter().any(|d| d.divides(&mono)) {
            count += 1;
        }
        for i in 0..nvars {
            exps[i] += 1;
            if exps[i] < bounds[i] {
                continue 'outer;
            }
            exps[i] = 0;
        }
        break;
    }
    Some(count)
}

/// Exact division f / g; fails unless g divides f exactly.
pub fn exact_divide<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Result<Polynomial<F>> {
    if f.ring() != g.ring() {
        return Err(Error::RingMismatch);
    }
    if g.is_zero() {
        return Err(Error::DegenerateInput("division by zero polynomial".into()));
    }
    let ring = f.ring().clone();
    let field = ring.field().clone();
    let order = MonomialOrder::DegRevLex;
    let gt = g.sorted_terms(&order);
    let (glm, glc) = gt[0].clone();
    let mut rem = f.sorted_terms(&order);
    let mut quot: Terms<F> = Vec::new();
    while !rem.is_empty() {
        let (lm, lc) = rem[0].clone();
        let qm = glm
            .div(&lm)
            .ok_or(Error::ExactDivisionFailed)?;
        let qc = field.div(&lc, &glc);
        quot.push((qm.clone(), qc.clone()));
        rem = sub_scaled(&field, &order, None, &rem, &qc, &qm, &gt);
    }
    Ok(Polynomial::from_terms(&ring, quot))
}
