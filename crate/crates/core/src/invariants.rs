//! The singularity invariant stack: Jacobian and Tjurina ideals, the Milnor
//! and Tjurina numbers, the generalized Milnor number via unit sampling, the
//! Hilbert-Samuel multiplicity, the Briancon-Skoda exponent, and the
//! assembled bound report.
//!
//! All colengths are taken in the localization at the origin, through the
//! certified truncation machinery of [`crate::local`].

use crate::error::{Error, Result};
use crate::field::{sample_nonzero, ExtField, Field, PrimeField, Rat};
use crate::groebner::GroebnerConfig;
use crate::hfun;
use crate::ideal::Ideal;
use crate::local::{local_colength, local_data, Colength, LocalOptions, LocalOutcome};
use crate::poly::Polynomial;
use crate::ring::Ring;
use num::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::{Serialize, SerializeStruct, Serializer};

/// A possibly non-finite colength-style invariant.
///
/// `Infinite` is used only when non-finiteness is provable (monomial
/// staircase certificate); an exhausted truncation budget gives `Unknown`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Finite(u64),
    Infinite,
    Unknown,
}

impl Count {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Count::Finite(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Count::Finite(_))
    }
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Count::Finite(v) => write!(f, "{v}"),
            Count::Infinite => write!(f, "infinite"),
            Count::Unknown => write!(f, "unknown"),
        }
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Count::Finite(v) => s.serialize_u64(*v),
            Count::Infinite => s.serialize_str("infinite"),
            Count::Unknown => s.serialize_str("unknown"),
        }
    }
}

/// Knobs shared by the invariant computations.
#[derive(Clone, Debug)]
pub struct InvariantOptions {
    pub local: LocalOptions,
    pub groebner: GroebnerConfig,
    /// Unit samples for the generalized Milnor number (the identity unit is
    /// always tried in addition).
    pub trials: u32,
    pub seed: u64,
    /// Briancon-Skoda search cap; `None` means the number of variables.
    pub ebs_cap: Option<u32>,
    /// Largest power of the ideal used by the Hilbert-Samuel difference scan.
    pub hs_k_max: u32,
    /// Consecutive equal n-th differences required to declare stabilization.
    pub hs_window: u32,
    /// Cross-check the sampled generalized Milnor number against e(tj(f)).
    pub cross_check: bool,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            local: LocalOptions::default(),
            groebner: GroebnerConfig::default(),
            trials: 8,
            seed: 0,
            ebs_cap: None,
            hs_k_max: 12,
            hs_window: 3,
            cross_check: true,
        }
    }
}

/// j(f) = (df/dx_1, ..., df/dx_n). Requires f in m^2.
pub fn jacobian_ideal<F: Field>(f: &Polynomial<F>) -> Result<Ideal<F>> {
    if !f.in_m_squared() {
        return Err(Error::NotInMSquared);
    }
    let ring = f.ring();
    let gens: Vec<Polynomial<F>> = (0..ring.nvars())
        .map(|i| f.partial_derivative(i))
        .collect::<Result<_>>()?;
    Ideal::new(ring, gens)
}

/// tj(f) = (f, df/dx_1, ..., df/dx_n). Requires f in m^2.
pub fn tjurina_ideal<F: Field>(f: &Polynomial<F>) -> Result<Ideal<F>> {
    if !f.in_m_squared() {
        return Err(Error::NotInMSquared);
    }
    let ring = f.ring();
    let mut gens = vec![f.clone()];
    for i in 0..ring.nvars() {
        gens.push(f.partial_derivative(i)?);
    }
    Ideal::new(ring, gens)
}

fn colength_count<F: Field>(
    ideal: &Ideal<F>,
    opts: &InvariantOptions,
) -> Result<Count> {
    match local_colength(ideal, &opts.local, &opts.groebner) {
        Ok(Colength::Finite { value, .. }) => Ok(Count::Finite(value)),
        Ok(Colength::Infinite) => Ok(Count::Infinite),
        Err(Error::Inconclusive { .. }) => Ok(Count::Unknown),
        Err(e) => Err(e),
    }
}

/// mu(f) = dim_K R_loc/j(f). `Infinite` only with a monomial certificate,
/// `Unknown` when the truncation scan is inconclusive.
pub fn milnor<F: Field>(f: &Polynomial<F>, opts: &InvariantOptions) -> Result<Count> {
    colength_count(&jacobian_ideal(f)?, opts)
}

/// tau(f) = dim_K R_loc/tj(f). Reported as a natural number or `Unknown`;
/// a provably infinite colength (non-isolated singularity) is also reported
/// as `Unknown` since tau carries no separate infinity tag.
pub fn tjurina<F: Field>(f: &Polynomial<F>, opts: &InvariantOptions) -> Result<Count> {
    match colength_count(&tjurina_ideal(f)?, opts)? {
        Count::Finite(v) => Ok(Count::Finite(v)),
        _ => Ok(Count::Unknown),
    }
}

/// Result of the unit-sampling estimate of mu(O_f).
#[derive(Clone, Debug)]
pub struct GeneralizedMilnor {
    /// Minimum of the finite mu(u f) over the sampled units; an upper bound
    /// for mu(O_f), conjecturally exact for generic units.
    pub value: Count,
    /// The unit attaining the minimum, printed.
    pub best_unit: Option<String>,
    /// Sampled units whose mu(u f) came out non-finite.
    pub non_finite_trials: u32,
    /// e(tj(f)) when the cross-check ran to stabilization.
    pub e_tj: Option<u64>,
    /// Whether value == e(tj(f)); None when either side is unavailable.
    pub agrees_with_e_tj: Option<bool>,
    pub warnings: Vec<String>,
}

/// mu(O_f) = min over units u of mu(u f), estimated by sampling units of
/// degree <= 1 (the shape the generic-unit criterion analyzes). The identity
/// unit is always included, so the result never exceeds mu(f). In
/// characteristic 0 the identity unit is already optimal and no sampling
/// happens. The estimate is cross-checked against e(tj(f)).
pub fn generalized_milnor<F: Field>(
    f: &Polynomial<F>,
    opts: &InvariantOptions,
) -> Result<GeneralizedMilnor> {
    let tau = tjurina(f, opts)?;
    if !tau.is_finite() {
        return Err(Error::DegenerateInput(
            "generalized Milnor number needs finite Tjurina number (isolated singularity)".into(),
        ));
    }
    let ring = f.ring();
    let field = ring.field();
    let n = ring.nvars();
    let mut warnings = Vec::new();

    let (value, best_unit, non_finite_trials) = if ring.characteristic() == 0 {
        let mu = milnor(f, opts)?;
        if !mu.is_finite() {
            warnings.push(
                "characteristic 0 with finite tau but inconclusive mu; raise the truncation cap"
                    .into(),
            );
        }
        (mu, Some("1".into()), 0u32)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut units = vec![Polynomial::one(ring)];
        for _ in 0..opts.trials {
            let mut u = Polynomial::constant(ring, sample_nonzero(field, &mut rng));
            for i in 0..n {
                let c = field.sample(&mut rng);
                if !field.is_zero(&c) {
                    u = u
                        .checked_add(&Polynomial::term(ring, crate::monomial::Monomial::var(i, n), c))
                        .expect("same ring");
                }
            }
            units.push(u);
        }
        units.sort_by(|a, b| a.storage_cmp(b));
        units.dedup_by(|a, b| a.storage_cmp(b) == std::cmp::Ordering::Equal);
        let mut best: Option<(u64, String)> = None;
        let mut non_finite = 0u32;
        for u in &units {
            let uf = u.checked_mul(f).expect("same ring");
            match milnor(&uf, opts)? {
                Count::Finite(v) => {
                    if best.as_ref().map_or(true, |(b, _)| v < *b) {
                        best = Some((v, u.to_string()));
                    }
                }
                _ => non_finite += 1,
            }
        }
        match best {
            Some((v, u)) => (Count::Finite(v), Some(u), non_finite),
            None => {
                warnings.push(format!(
                    "all {} sampled units gave non-finite Milnor numbers; mu(O_f) unknown",
                    units.len()
                ));
                (Count::Unknown, None, non_finite)
            }
        }
    };

    let (e_tj, agrees) = if opts.cross_check {
        match hilbert_samuel_multiplicity(&tjurina_ideal(f)?, opts) {
            Ok(e) => {
                let agrees = value.finite().map(|v| v == e);
                if agrees == Some(false) {
                    warnings.push(format!(
                        "sampled mu(O_f) = {value} disagrees with e(tj(f)) = {e}; \
                         flagged, not resolved (sampling may have missed the generic locus)"
                    ));
                }
                (Some(e), agrees)
            }
            Err(Error::WindowNotReached { k_max }) => {
                warnings.push(format!(
                    "e(tj(f)) cross-check skipped: difference window not reached by k = {k_max}"
                ));
                (None, None)
            }
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };

    Ok(GeneralizedMilnor {
        value,
        best_unit,
        non_finite_trials,
        e_tj,
        agrees_with_e_tj: agrees,
        warnings,
    })
}

/// Run [`generalized_milnor`] with unit coefficients drawn from the degree-k
/// extension F_{p^k} instead of the prime field, by mapping f across the
/// canonical embedding. Supported degrees: 2 and 3.
pub fn generalized_milnor_extended(
    f: &Polynomial<PrimeField>,
    k: u32,
    opts: &InvariantOptions,
) -> Result<GeneralizedMilnor> {
    let base = f.ring();
    let ext = ExtField::new(base.characteristic(), k)?;
    let vars: Vec<&str> = base.vars().iter().map(|s| s.as_str()).collect();
    let ring_ext: Ring<ExtField> = Ring::new(ext.clone(), &vars)?;
    let f_ext = f.map_scalars(&ring_ext, |c| ext.embed(*c));
    generalized_milnor(&f_ext, opts)
}

/// Hilbert-Samuel multiplicity e(I) of an m-primary ideal, read off as the
/// n-th finite difference of k -> colength(I^k) once that difference is
/// constant over `hs_window` consecutive values of k.
pub fn hilbert_samuel_multiplicity<F: Field>(
    ideal: &Ideal<F>,
    opts: &InvariantOptions,
) -> Result<u64> {
    let n = ideal.ring().nvars();
    match local_colength(ideal, &opts.local, &opts.groebner)? {
        Colength::Finite { value, .. } if value > 0 => {}
        Colength::Finite { .. } => {
            return Err(Error::DegenerateInput(
                "Hilbert-Samuel multiplicity needs a proper ideal".into(),
            ))
        }
        Colength::Infinite => {
            return Err(Error::DegenerateInput(
                "Hilbert-Samuel multiplicity needs finite colength".into(),
            ))
        }
    }
    let window = opts.hs_window.max(1) as usize;
    let mut lambdas: Vec<i64> = Vec::new();
    for k in 1..=opts.hs_k_max {
        let lk = match local_colength(&ideal.power(k)?, &opts.local, &opts.groebner)? {
            Colength::Finite { value, .. } => value as i64,
            Colength::Infinite => {
                return Err(Error::Internal(
                    "power of a finite-colength ideal reported infinite colength".into(),
                ))
            }
        };
        lambdas.push(lk);
        if lambdas.len() >= n + window {
            let mut diffs = lambdas.clone();
            for _ in 0..n {
                diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
            }
            let tail = &diffs[diffs.len() - window..];
            if tail.iter().all(|d| *d == tail[0]) && tail[0] > 0 {
                return Ok(tail[0] as u64);
            }
        }
    }
    Err(Error::WindowNotReached { k_max: opts.hs_k_max })
}

/// Smallest e <= cap with f^e in j(f) R_m, the Jacobian ideal in the local
/// ring at the origin (the exponent is a local-ring notion: in residue
/// characteristic zero the Briancon-Skoda theorem puts f^n in j(f) R_m for n
/// variables, with no quasi-homogeneity hypothesis). When j(f) has finite
/// local colength the membership test runs against its certified inflated
/// basis, which decides local membership exactly; otherwise the test falls
/// back to the global basis of j(f), which is sound for every "found" answer.
/// Default cap: the number of variables.
pub fn briancon_skoda_exponent<F: Field>(
    f: &Polynomial<F>,
    opts: &InvariantOptions,
) -> Result<u32> {
    let j = jacobian_ideal(f)?;
    let cap = opts.ebs_cap.unwrap_or(f.ring().nvars() as u32).max(1);
    let gb = match local_data(&j, &opts.local, &opts.groebner) {
        Ok(LocalOutcome::Finite(data)) => data.gb.clone(),
        Ok(LocalOutcome::Infinite) | Err(Error::Inconclusive { .. }) => {
            j.groebner_degrevlex(&opts.groebner)?
        }
        Err(e) => return Err(e),
    };
    let mut fe = f.clone();
    for e in 1..=cap {
        if e > 1 {
            fe = fe.checked_mul(f).expect("same ring");
        }
        if gb.contains(&fe, &opts.groebner)? {
            return Ok(e);
        }
    }
    Err(Error::NotFoundWithinCap { cap })
}

/// Briancon-Skoda outcome as stored in a [`SingularityRecord`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EBs {
    Found(u32),
    NotFoundWithinCap(u32),
}

impl std::fmt::Display for EBs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EBs::Found(e) => write!(f, "{e}"),
            EBs::NotFoundWithinCap(cap) => write!(f, "not_found_within_cap({cap})"),
        }
    }
}

impl Serialize for EBs {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EBs::Found(e) => s.serialize_u32(*e),
            EBs::NotFoundWithinCap(_) => s.serialize_str(&self.to_string()),
        }
    }
}

/// The full invariant record for one singularity.
///
/// `ratio` is defined iff the ratio numerator (mu in characteristic 0,
/// mu(O_f) in characteristic p) and tau are finite with tau > 0; then
/// `bound_satisfied` states the exact rational comparison ratio <= bound.
#[derive(Clone, Debug)]
pub struct SingularityRecord {
    pub f: String,
    pub mu: Count,
    pub tau: Count,
    pub mu_o: Count,
    pub e_bs: EBs,
    pub ratio: Option<Rat>,
    pub bound: Rat,
    pub bound_satisfied: Option<bool>,
    pub characteristic: u64,
}

impl Serialize for SingularityRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SingularityRecord", 9)?;
        st.serialize_field("f", &self.f)?;
        st.serialize_field("mu", &self.mu)?;
        st.serialize_field("tau", &self.tau)?;
        st.serialize_field("mu_O", &self.mu_o)?;
        st.serialize_field("e_bs", &self.e_bs)?;
        match &self.ratio {
            Some(r) => st.serialize_field("ratio", &hfun::format_rat(r))?,
            None => st.serialize_field("ratio", "undefined")?,
        }
        st.serialize_field("bound", &hfun::format_rat(&self.bound))?;
        match self.bound_satisfied {
            Some(b) => st.serialize_field("bound_satisfied", &b)?,
            None => st.serialize_field("bound_satisfied", "undefined")?,
        }
        st.serialize_field("characteristic", &self.characteristic)?;
        st.end()
    }
}

fn rat_from_counts(num: u64, den: u64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Assemble the full record for f. In characteristic p the ratio numerator
/// is the sampled mu(O_f); in characteristic 0 it is mu itself (the identity
/// unit is optimal there, so no sampling runs). Warnings (cross-check
/// disagreements, exhausted samplers) are returned alongside, not stored in
/// the record.
pub fn mu_tau_report<F: Field>(
    f: &Polynomial<F>,
    opts: &InvariantOptions,
) -> Result<(SingularityRecord, Vec<String>)> {
    if !f.in_m_squared() {
        return Err(Error::NotInMSquared);
    }
    let ring = f.ring();
    let characteristic = ring.characteristic();
    let mut warnings = Vec::new();

    let mu = milnor(f, opts)?;
    let tau = tjurina(f, opts)?;

    let mu_o = if characteristic == 0 {
        match mu {
            Count::Finite(v) => Count::Finite(v),
            _ => Count::Unknown,
        }
    } else if tau.is_finite() {
        let gm = generalized_milnor(f, opts)?;
        warnings.extend(gm.warnings.iter().cloned());
        match gm.value {
            Count::Finite(v) => Count::Finite(v),
            _ => Count::Unknown,
        }
    } else {
        Count::Unknown
    };

    let e_bs = match briancon_skoda_exponent(f, opts) {
        Ok(e) => EBs::Found(e),
        Err(Error::NotFoundWithinCap { cap }) => EBs::NotFoundWithinCap(cap),
        Err(e) => return Err(e),
    };

    let numerator = if characteristic == 0 { mu } else { mu_o };
    let ratio = match (numerator, tau) {
        (Count::Finite(num), Count::Finite(t)) if t > 0 => Some(rat_from_counts(num, t)),
        _ => None,
    };
    let bound = hfun::bound(ring.nvars() as u32)?;
    let bound_satisfied = ratio.as_ref().map(|r| r <= &bound);

    Ok((
        SingularityRecord {
            f: f.to_string(),
            mu,
            tau,
            mu_o,
            e_bs,
            ratio,
            bound,
            bound_satisfied,
            characteristic,
        },
        warnings,
    ))
}
