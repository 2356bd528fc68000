//! Characteristic-p machinery: Frobenius powers, Hilbert-Kunz colength
//! sequences, the finite-level h_s and e_s values, and the finite-level
//! threshold functions nu and mu.
//!
//! Everything here reports exact values at finite Frobenius level e; limits
//! are never extrapolated, only displayed as sequences.

use crate::error::{Error, Result};
use crate::field::{Field, Rat};
use crate::hfun;
use crate::ideal::Ideal;
use crate::invariants::InvariantOptions;
use crate::local::{is_m_primary_local, local_contains, local_data, LocalOutcome};
use crate::local::{local_colength, Colength};
use crate::monomial::Exp;
use crate::poly::Polynomial;
use num::BigInt;

/// Default top Frobenius level by ambient dimension: colengths grow like
/// q^n, so three levels in two variables cost about what two do in three.
pub fn default_e_max(nvars: usize) -> u32 {
    if nvars <= 2 {
        3
    } else {
        2
    }
}

fn check_char_p<F: Field>(ideal: &Ideal<F>) -> Result<u64> {
    let p = ideal.ring().characteristic();
    if p == 0 {
        return Err(Error::CharZero);
    }
    Ok(p)
}

fn q_of(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .ok_or_else(|| Error::DegenerateInput(format!("p^e overflows u64 at p={p}, e={e}")))
}

/// The e-th Frobenius power I^{[q]} with q = p^e, generated by g^q for each
/// generator g; by Frobenius additivity g^q is computed term by term
/// (exponents times q, coefficients to the q).
pub fn frobenius_power<F: Field>(ideal: &Ideal<F>, e: u32) -> Result<Ideal<F>> {
    let p = check_char_p(ideal)?;
    if e == 0 {
        return Ok(ideal.clone());
    }
    let q = q_of(p, e)?;
    let ring = ideal.ring();
    let field = ring.field();
    let gens: Vec<Polynomial<F>> = ideal
        .gens()
        .iter()
        .map(|g| {
            let terms = g
                .terms()
                .map(|(m, c)| (m.pow(q as Exp), field.pow_u64(c, q)))
                .collect();
            Polynomial::from_terms(ring, terms)
        })
        .collect();
    Ideal::new(ring, gens)
}

/// One row of a Hilbert-Kunz colength sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HKEntry {
    pub e: u32,
    pub q: u64,
    pub colength: u64,
    /// colength / q^n, exact.
    pub normalized: Rat,
}

/// The finite-level Hilbert-Kunz data of an m-primary ideal.
#[derive(Clone, Debug)]
pub struct HKSequence {
    pub p: u64,
    pub nvars: usize,
    pub entries: Vec<HKEntry>,
}

fn rat_u64(num: u64, den: u64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

fn finite_colength<F: Field>(ideal: &Ideal<F>, opts: &InvariantOptions, what: &str) -> Result<u64> {
    match local_colength(ideal, &opts.local, &opts.groebner)? {
        Colength::Finite { value, .. } => Ok(value),
        Colength::Infinite => Err(Error::DegenerateInput(format!(
            "{what} must have finite colength"
        ))),
    }
}

/// Exact colengths of I^{[p^e]} for e = 0..=e_max, with exact normalization
/// colength/q^n. Requires an m-primary ideal in characteristic p.
pub fn hk_sequence<F: Field>(
    ideal: &Ideal<F>,
    e_max: u32,
    opts: &InvariantOptions,
) -> Result<HKSequence> {
    let p = check_char_p(ideal)?;
    let n = ideal.ring().nvars();
    finite_colength(ideal, opts, "Hilbert-Kunz input ideal")?;
    let mut entries = Vec::new();
    for e in 0..=e_max {
        let q = q_of(p, e)?;
        let colength = finite_colength(&frobenius_power(ideal, e)?, opts, "Frobenius power")?;
        let qn = q
            .checked_pow(n as u32)
            .ok_or_else(|| Error::DegenerateInput("q^n overflows u64".into()))?;
        entries.push(HKEntry {
            e,
            q,
            colength,
            normalized: rat_u64(colength, qn),
        });
    }
    Ok(HKSequence { p, nvars: n, entries })
}

/// The finite-level value of h_s: lambda(R/(I^ceil(sq) + J^[q]))/q^n.
#[derive(Clone, Debug)]
pub struct HsLevel {
    pub s: Rat,
    pub e: u32,
    pub q: u64,
    pub ceil_sq: u32,
    pub colength: u64,
    pub value: Rat,
}

fn ceil_to_u32(r: &Rat) -> Result<u32> {
    use num::ToPrimitive;
    r.ceil()
        .to_integer()
        .to_u32()
        .ok_or_else(|| Error::DegenerateInput("ceil(s*q) out of range".into()))
}

/// Exact level-e value of h_s(I, J). Both ideals must be m-primary (checked
/// through the certified local machinery) and s must be positive; ceil(s*q)
/// is computed exactly on rationals.
pub fn h_s_level<F: Field>(
    i: &Ideal<F>,
    j: &Ideal<F>,
    s: &Rat,
    e: u32,
    opts: &InvariantOptions,
) -> Result<HsLevel> {
    let p = check_char_p(i)?;
    if i.ring() != j.ring() {
        return Err(Error::RingMismatch);
    }
    if s <= &Rat::from_integer(BigInt::from(0)) {
        return Err(Error::NonPositiveS);
    }
    if !is_m_primary_local(i, &opts.local, &opts.groebner)?
        || !is_m_primary_local(j, &opts.local, &opts.groebner)?
    {
        return Err(Error::DegenerateInput(
            "h_s needs m-primary ideals on both sides".into(),
        ));
    }
    let n = i.ring().nvars();
    let q = q_of(p, e)?;
    let ceil_sq = ceil_to_u32(&(s * rat_u64(q, 1)))?;
    let mix = i.power(ceil_sq)?.sum(&frobenius_power(j, e)?)?;
    let colength = finite_colength(&mix, opts, "h_s mixed ideal")?;
    let qn = q
        .checked_pow(n as u32)
        .ok_or_else(|| Error::DegenerateInput("q^n overflows u64".into()))?;
    Ok(HsLevel {
        s: s.clone(),
        e,
        q,
        ceil_sq,
        colength,
        value: rat_u64(colength, qn),
    })
}

/// Level-e value of e_s(I, J) = h_s(I, J)/H_s(n).
pub fn e_s_level<F: Field>(
    i: &Ideal<F>,
    j: &Ideal<F>,
    s: &Rat,
    e: u32,
    opts: &InvariantOptions,
) -> Result<Rat> {
    let level = h_s_level(i, j, s, e, opts)?;
    let h = hfun::h_value(s, i.ring().nvars() as u32);
    if h == Rat::from_integer(BigInt::from(0)) {
        return Err(Error::DegenerateInput(
            "H_s(n) vanishes for s <= 0; e_s undefined".into(),
        ));
    }
    Ok(level.value / h)
}

/// Finite-level thresholds at q = p^e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub e: u32,
    pub q: u64,
    /// nu = sup{n >= 1 : I^n not contained in J^[q]}, with sup of the empty
    /// set taken as 0.
    pub nu: u32,
    /// mu = inf{n >= 1 : J^[q] not contained in I^n}.
    pub mu: u32,
}

impl Thresholds {
    /// nu/q, the finite-level approximation to c_J(I).
    pub fn nu_over_q(&self) -> Rat {
        rat_u64(self.nu as u64, self.q)
    }

    /// mu/q, the finite-level approximation to b_J(I).
    pub fn mu_over_q(&self) -> Rat {
        rat_u64(self.mu as u64, self.q)
    }
}

fn contained_locally<F: Field>(
    sub: &Ideal<F>,
    sup: &Ideal<F>,
    opts: &InvariantOptions,
) -> Result<bool> {
    for g in sub.gens() {
        if !local_contains(sup, g, &opts.local, &opts.groebner)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compute the finite-level thresholds nu and mu by iterating ordinary
/// powers of I against the fixed Frobenius power J^[q]. Both containment
/// scans are monotone, so a single upward pass is exact; the Nakayama
/// certificate of J^[q] bounds the nu scan and q times the generator degree
/// of J bounds the mu scan.
pub fn threshold_levels<F: Field>(
    i: &Ideal<F>,
    j: &Ideal<F>,
    e: u32,
    opts: &InvariantOptions,
) -> Result<Thresholds> {
    let p = check_char_p(i)?;
    if i.ring() != j.ring() {
        return Err(Error::RingMismatch);
    }
    if !is_m_primary_local(i, &opts.local, &opts.groebner)?
        || !is_m_primary_local(j, &opts.local, &opts.groebner)?
    {
        return Err(Error::DegenerateInput(
            "thresholds need m-primary ideals on both sides".into(),
        ));
    }
    let q = q_of(p, e)?;
    let jq = frobenius_power(j, e)?;
    let cert = match local_data(&jq, &opts.local, &opts.groebner)? {
        LocalOutcome::Finite(d) => d.certificate,
        LocalOutcome::Infinite => {
            return Err(Error::Internal(
                "Frobenius power of an m-primary ideal reported infinite colength".into(),
            ))
        }
    };

    // I^cert lies in m^cert which lies in J^[q] locally, so the scan ends.
    let mut nu = None;
    for n in 1..=cert.max(1) + 1 {
        if contained_locally(&i.power(n)?, &jq, opts)? {
            nu = Some(n - 1);
            break;
        }
    }
    let nu = nu.ok_or_else(|| {
        Error::Internal("nu scan passed its Nakayama bound without containment".into())
    })?;

    // A generator of J^[q] has order at most q * deg(J), so J^[q] cannot lie
    // in I^n for n past that, and the scan ends.
    let mu_cap = (q * j.max_gen_degree().max(1)) as u32 + 2;
    let mut mu = None;
    for n in 1..=mu_cap {
        if !contained_locally(&jq, &i.power(n)?, opts)? {
            mu = Some(n);
            break;
        }
    }
    let mu = mu.ok_or_else(|| {
        Error::Internal("mu scan passed its degree bound while still contained".into())
    })?;

    Ok(Thresholds { e, q, nu, mu })
}
