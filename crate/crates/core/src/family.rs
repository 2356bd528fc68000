//! Deformation-family machinery: lattice counting lemmas, generic positive
//! weight deformations of the Fermat polynomial x_1^n + ... + x_d^n, the
//! tau_min experiment, and graded codimension checks.
//!
//! Throughout this module d is the number of variables and n the Fermat
//! degree, matching the family's natural parameters (so mu(f_u) = (n-1)^d
//! and the asymptotic target for tau_min/n^d is H_{(d+1)/2}(d) - H_{(d-1)/2}(d)).

use crate::error::{Error, Result};
use crate::field::{sample_nonzero, Field, Rat};
use crate::hfun;
use crate::ideal::Ideal;
use crate::invariants::{milnor, tjurina, Count, InvariantOptions};
use crate::local::{local_colength, local_data, Colength};
use crate::monomial::{Exp, Monomial};
use crate::poly::Polynomial;
use crate::ring::Ring;
use num::{BigInt, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Number of monomials of total degree exactly m in d variables:
/// C(m+d-1, d-1).
pub fn count_compositions(m: u32, d: u32) -> u64 {
    assert!(d >= 1, "need at least one variable");
    hfun::binomial(m + d - 1, d - 1)
        .to_u64()
        .expect("composition count fits u64")
}

/// Which sum constraint `count_bounded` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMode {
    Eq,
    Le,
}

fn count_eq_bounded(m: u32, d: u32, c: u32) -> u64 {
    // Inclusion-exclusion over which coordinates exceed c.
    let mut total = BigInt::zero();
    for j in 0..=d {
        let shift = j as u64 * (c as u64 + 1);
        if (m as u64) < shift {
            break;
        }
        let rest = (m as u64 - shift) as u32;
        let term = hfun::binomial(d, j) * hfun::binomial(rest + d - 1, d - 1);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total.to_u64().expect("bounded count is a nonnegative integer fitting u64")
}

/// Number of d-tuples with 0 <= a_i <= c and sum equal to (or at most) m.
pub fn count_bounded(m: u32, d: u32, c: u32, mode: SumMode) -> u64 {
    assert!(d >= 1, "need at least one variable");
    match mode {
        SumMode::Eq => count_eq_bounded(m, d, c),
        SumMode::Le => (0..=m).map(|k| count_eq_bounded(k, d, c)).sum(),
    }
}

/// One row of the asymptotic counting check.
#[derive(Clone, Debug)]
pub struct AsymptoticRow {
    pub n: u32,
    pub m: u32,
    pub count: u64,
    /// count / n^d, exact.
    pub value: Rat,
    /// |value - H_lambda(d)|, exact.
    pub gap: Rat,
}

#[derive(Clone, Debug)]
pub struct AsymptoticReport {
    pub d: u32,
    pub lambda: Rat,
    pub target: Rat,
    pub rows: Vec<AsymptoticRow>,
}

/// Check that count_bounded(floor(lambda*n), d, n, Le)/n^d approaches
/// H_lambda(d): the gap must be non-increasing along n_list and below
/// `tolerance` at the largest n. A violated trend is an assertion failure.
pub fn asymptotic_lemma_check(
    d: u32,
    lambda: &Rat,
    n_list: &[u32],
    tolerance: &Rat,
) -> Result<AsymptoticReport> {
    if lambda <= &Rat::zero() {
        return Err(Error::NonPositiveS);
    }
    if n_list.is_empty() {
        return Err(Error::DegenerateInput("asymptotic check needs at least one n".into()));
    }
    let target = hfun::h_value(lambda, d);
    let mut rows = Vec::new();
    for &n in n_list {
        if n == 0 {
            return Err(Error::DegenerateInput("n must be positive".into()));
        }
        let m = (lambda * Rat::from_integer(BigInt::from(n)))
            .floor()
            .to_integer()
            .to_u32()
            .ok_or_else(|| Error::DegenerateInput("lambda*n out of range".into()))?;
        let count = count_bounded(m, d, n, SumMode::Le);
        let nd = BigInt::from(n).pow(d);
        let value = Rat::new(BigInt::from(count), nd);
        let gap = (&value - &target).abs();
        rows.push(AsymptoticRow { n, m, count, value, gap });
    }
    for w in rows.windows(2) {
        if w[1].gap > w[0].gap {
            return Err(Error::Internal(format!(
                "asymptotic gap increased from n={} ({}) to n={} ({})",
                w[0].n,
                hfun::format_rat(&w[0].gap),
                w[1].n,
                hfun::format_rat(&w[1].gap),
            )));
        }
    }
    let last = rows.last().expect("nonempty");
    if &last.gap >= tolerance {
        return Err(Error::Internal(format!(
            "asymptotic gap {} at n={} is not below tolerance {}",
            hfun::format_rat(&last.gap),
            last.n,
            hfun::format_rat(tolerance),
        )));
    }
    Ok(AsymptoticReport { d, lambda: lambda.clone(), target, rows })
}

/// How deformation coefficients are chosen.
#[derive(Clone, Debug)]
pub enum CoefficientMode {
    /// Nonzero random field elements, seeded.
    RandomNonzero,
    /// Explicit (exponent tuple, integer coefficient) pairs; every tuple
    /// must lie in the allowed monomial set.
    UserSupplied(Vec<(Vec<Exp>, i64)>),
}

/// Parameters of one deformation f_u of the Fermat polynomial.
#[derive(Clone, Debug)]
pub struct DeformationSpec {
    /// Fermat degree; at least 3.
    pub n: u32,
    /// Number of variables; at least 2.
    pub d: u32,
    pub seed: u64,
    pub coefficient_mode: CoefficientMode,
    /// Upper bound on deformation monomial degree.
    pub degree_cap: u32,
}

/// The default truncation degree n + ceil((d-1)n/2) + 2: higher-degree
/// deformation monomials land in the Tjurina ideal and cannot change tau.
pub fn default_degree_cap(n: u32, d: u32) -> u32 {
    n + ((d - 1) * n).div_ceil(2) + 2
}

impl DeformationSpec {
    pub fn new(n: u32, d: u32, seed: u64) -> Result<Self> {
        if n < 3 || d < 2 {
            return Err(Error::DegenerateInput(
                "deformation family needs degree n >= 3 and dimension d >= 2".into(),
            ));
        }
        Ok(DeformationSpec {
            n,
            d,
            seed,
            coefficient_mode: CoefficientMode::RandomNonzero,
            degree_cap: default_degree_cap(n, d),
        })
    }

    fn allows(&self, m: &Monomial) -> bool {
        let deg = m.total_degree();
        m.exponents().iter().all(|&a| a <= (self.n - 2) as Exp)
            && deg >= (self.n + 1) as u64
            && deg <= self.degree_cap as u64
    }
}

/// All monomials with every exponent at most n-2 and total degree between
/// n+1 and the degree cap, in lexicographic exponent order.
pub fn deformation_monomials(spec: &DeformationSpec) -> Vec<Monomial> {
    let d = spec.d as usize;
    let hi = (spec.n - 2) as Exp;
    let mut out = Vec::new();
    let mut exps = vec![0 as Exp; d];
    loop {
        let m = Monomial::from_exps(&exps);
        if spec.allows(&m) {
            out.push(m);
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if exps[i] < hi {
                exps[i] += 1;
                for e in exps.iter_mut().skip(i + 1) {
                    *e = 0;
                }
                break;
            }
        }
    }
}

/// The Fermat polynomial x_1^n + ... + x_d^n.
pub fn fermat<F: Field>(ring: &Ring<F>, n: u32) -> Polynomial<F> {
    let field = ring.field();
    let terms = (0..ring.nvars())
        .map(|i| (Monomial::var(i, ring.nvars()).pow(n as Exp), field.one()))
        .collect();
    Polynomial::from_terms(ring, terms)
}

/// f_u = f_0 + sum of u_alpha x^alpha over the allowed monomial set. An
/// empty allowed set returns f_0 itself. Requires the field characteristic
/// not to divide n, so f_0 has an isolated singularity.
pub fn random_deformation<F: Field>(
    ring: &Ring<F>,
    spec: &DeformationSpec,
) -> Result<Polynomial<F>> {
    if ring.nvars() != spec.d as usize {
        return Err(Error::RingMismatch);
    }
    let p = ring.characteristic();
    if p != 0 && spec.n as u64 % p == 0 {
        return Err(Error::DegenerateInput(format!(
            "characteristic {p} divides the Fermat degree {}; f_0 would be non-isolated",
            spec.n
        )));
    }
    let field = ring.field();
    let mut f = fermat(ring, spec.n);
    match &spec.coefficient_mode {
        CoefficientMode::RandomNonzero => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            for m in deformation_monomials(spec) {
                let c = sample_nonzero(field, &mut rng);
                f = f
                    .checked_add(&Polynomial::term(ring, m, c))
                    .expect("same ring");
            }
        }
        CoefficientMode::UserSupplied(pairs) => {
            for (exps, coeff) in pairs {
                if exps.len() != spec.d as usize {
                    return Err(Error::InvalidDeformationMonomial(format!("{exps:?}")));
                }
                let m = Monomial::from_exps(exps);
                if !spec.allows(&m) {
                    return Err(Error::InvalidDeformationMonomial(format!("{exps:?}")));
                }
                let c = field.from_int(*coeff);
                if !field.is_zero(&c) {
                    f = f
                        .checked_add(&Polynomial::term(ring, m, c))
                        .expect("same ring");
                }
            }
        }
    }
    Ok(f)
}

/// Outcome of one deformation trial.
#[derive(Clone, Debug)]
pub struct TrialResult {
    pub trial: u32,
    pub seed: u64,
    pub tau: Option<u64>,
    pub mu: Option<u64>,
    /// mu/tau of this trial, when both are finite.
    pub ratio: Option<Rat>,
    pub error: Option<String>,
    pub flags: Vec<String>,
}

/// Aggregate of a tau_min experiment.
#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub n: u32,
    pub d: u32,
    pub seed: u64,
    pub degree_cap: u32,
    pub trials: Vec<TrialResult>,
    pub tau_min: Option<u64>,
    /// The common mu over successful trials, expected (n-1)^d.
    pub mu: Option<u64>,
    /// mu / tau_min.
    pub ratio: Option<Rat>,
    /// tau_min / n^d, exact.
    pub tau_min_normalized: Option<Rat>,
    /// The asymptotic target H_{(d+1)/2}(d) - H_{(d-1)/2}(d) for
    /// tau_min/n^d.
    pub target: Rat,
    /// bound(d) = 1/target, the limit of mu/tau_min.
    pub bound: Rat,
    /// |tau_min/n^d - target| / target.
    pub relative_gap: Option<Rat>,
    pub bound_satisfied: Option<bool>,
    pub warnings: Vec<String>,
}

/// Run `trials` random deformations of x_1^n + ... + x_d^n (plus the
/// undeformed f_0 as trial 0), compute tau and mu for each, and aggregate
/// tau_min against the asymptotic prediction. Per-trial errors (budget
/// exhaustion, inconclusive truncation) are recorded on the trial and the
/// experiment continues.
pub fn tau_min_experiment<F: Field>(
    ring: &Ring<F>,
    n: u32,
    trials: u32,
    seed: u64,
    degree_cap: Option<u32>,
    opts: &InvariantOptions,
) -> Result<FamilyReport> {
    let d = ring.nvars() as u32;
    let base = DeformationSpec::new(n, d, seed)?;
    let base = DeformationSpec {
        degree_cap: degree_cap.unwrap_or(base.degree_cap),
        ..base
    };
    let expected_mu = ((n - 1) as u64).pow(d);

    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut plan: Vec<(u32, u64, bool)> = vec![(0, seed, true)];
    for t in 1..=trials {
        plan.push((t, master.random::<u64>(), false));
    }

    let results: Vec<TrialResult> = plan
        .par_iter()
        .map(|&(trial, trial_seed, undeformed)| {
            let spec = DeformationSpec {
                seed: trial_seed,
                coefficient_mode: if undeformed {
                    CoefficientMode::UserSupplied(Vec::new())
                } else {
                    CoefficientMode::RandomNonzero
                },
                ..base.clone()
            };
            let mut flags = Vec::new();
            let f = match random_deformation(ring, &spec) {
                Ok(f) => f,
                Err(e) => {
                    return TrialResult {
                        trial,
                        seed: trial_seed,
                        tau: None,
                        mu: None,
                        ratio: None,
                        error: Some(e.to_string()),
                        flags,
                    }
                }
            };
            let computed = (|| -> Result<(Count, Count)> {
                Ok((tjurina(&f, opts)?, milnor(&f, opts)?))
            })();
            match computed {
                Ok((tau, mu)) => {
                    let tau_v = tau.finite();
                    let mu_v = mu.finite();
                    if tau_v.is_none() {
                        flags.push("tau not finite".into());
                    }
                    match mu_v {
                        Some(m) if m != expected_mu => flags.push(format!(
                            "mu = {m} differs from the expected (n-1)^d = {expected_mu}"
                        )),
                        None => flags.push("mu not finite".into()),
                        _ => {}
                    }
                    let ratio = match (mu_v, tau_v) {
                        (Some(m), Some(t)) if t > 0 => {
                            Some(Rat::new(BigInt::from(m), BigInt::from(t)))
                        }
                        _ => None,
                    };
                    TrialResult {
                        trial,
                        seed: trial_seed,
                        tau: tau_v,
                        mu: mu_v,
                        ratio,
                        error: None,
                        flags,
                    }
                }
                Err(e) => TrialResult {
                    trial,
                    seed: trial_seed,
                    tau: None,
                    mu: None,
                    ratio: None,
                    error: Some(e.to_string()),
                    flags,
                },
            }
        })
        .collect();

    let mut warnings: Vec<String> = Vec::new();
    for r in &results {
        for fl in &r.flags {
            warnings.push(format!("trial {}: {fl}", r.trial));
        }
        if let Some(e) = &r.error {
            warnings.push(format!("trial {}: {e}", r.trial));
        }
    }

    let tau_min = results.iter().filter_map(|r| r.tau).min();
    let mus: Vec<u64> = results.iter().filter_map(|r| r.mu).collect();
    let mu = if mus.is_empty() {
        None
    } else if mus.iter().all(|&m| m == mus[0]) {
        Some(mus[0])
    } else {
        warnings.push("mu is not constant across trials".into());
        None
    };

    let target = hfun::central_band(d);
    let bound = hfun::bound(d)?;
    let nd = BigInt::from(n).pow(d);
    let tau_min_normalized = tau_min.map(|t| Rat::new(BigInt::from(t), nd.clone()));
    let ratio = match (mu, tau_min) {
        (Some(m), Some(t)) if t > 0 => Some(Rat::new(BigInt::from(m), BigInt::from(t))),
        _ => None,
    };
    let relative_gap = tau_min_normalized
        .as_ref()
        .map(|v| (v - &target).abs() / &target);
    let bound_satisfied = ratio.as_ref().map(|r| r <= &bound);
    if bound_satisfied == Some(false) {
        warnings.push(format!(
            "ratio {} exceeds bound {}; conjecture-violation candidate",
            hfun::format_rat(ratio.as_ref().unwrap()),
            hfun::format_rat(&bound),
        ));
    }

    Ok(FamilyReport {
        n,
        d,
        seed,
        degree_cap: base.degree_cap,
        trials: results,
        tau_min,
        mu,
        ratio,
        tau_min_normalized,
        target,
        bound,
        relative_gap,
        bound_satisfied,
        warnings,
    })
}

///// Dimension of the degree-k graded piece m^k / (m^(k+1) + T) of the
/// associated graded ring of R_m/T, computed as the colength difference
/// lambda(R/(T + m^(k+1))) - lambda(R/(T + m^k)). The difference of
/// inflations is used because T need not be homogeneous: the graded piece
/// is cut out by lowest-degree initial forms, which a global Groebner basis
/// (leading terms from top-degree forms) does not see. Requires T of finite
/// local colength.
pub fn graded_codim<F: Field>(
    t: &Ideal<F>,
    k: u32,
    opts: &InvariantOptions,
) -> Result<u64> {
    match local_data(t, &opts.local, &opts.groebner)? {
        crate::local::LocalOutcome::Finite(_) => {}
        crate::local::LocalOutcome::Infinite => {
            return Err(Error::DegenerateInput(
                "graded codimension needs an m-primary ideal".into(),
            ))
        }
    }
    let ring = t.ring();
    let inflated_colength = |power: u32| -> Result<u64> {
        let mut gens = t.gens().to_vec();
        gens.extend(Ideal::m_power_gens(ring, power));
        let sum = Ideal::new(ring, gens)?;
        match local_colength(&sum, &opts.local, &opts.groebner)? {
            Colength::Finite { value, .. } => Ok(value),
            Colength::Infinite => Err(Error::Internal(
                "inflated ideal must be m-primary".into(),
            )),
        }
    };
    let below = inflated_colength(k + 1)?;
    let at = inflated_colength(k)?;
    Ok(below - at)
}

/// The counting prediction for graded_codim(tj(f_u), n+p+1) at generic u:
/// C(k+d-1, d-1) − #A_p − r_{n,p} at k = n+p+1, where A_p is the set of
/// degree-k monomials divisible by some x_i^(n-1) and r_{n,p} counts the
/// degree-p tuples with every entry at most n-2 (the rank of the relation
/// matrix for generic coefficients). Equivalently: the number of degree-k
/// monomials with all exponents at most n-2, minus r_{n,p}. May be negative
/// past the valid range p <= (d-1)n/2, where the actual piece is zero.
pub fn codim_prediction(n: u32, d: u32, p: u32) -> i64 {
    let k = n + p + 1;
    let survivors = count_bounded(k, d, n - 2, SumMode::Eq) as i64;
    let r_np = count_bounded(p, d, n - 2, SumMode::Eq) as i64;
    survivors - r_np
}
