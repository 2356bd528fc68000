//! Colengths and membership in the local ring at the origin.
//!
//! For an ideal I of K[x_1..x_n], the localized colength dim_K R_m/I R_m is
//! computed by inflating: c_N = colength(I + m^N) is nondecreasing in N and
//! stabilizes exactly when m^N is contained in I R_m (Nakayama). The first N
//! with c_N = c_{N+1} is reported as the certificate degree. Because
//! I + m^N is supported at the origin alone, every localized question about
//! I (membership, colons) can then be answered through the ordinary global
//! Groebner basis of I + m^N.
//!
//! Monomial ideals bypass the loop: their staircase answers both the
//! colength and, when infinite, proves the positive local dimension.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{groebner_basis_seeded, GroebnerBasis, GroebnerConfig};
use crate::ideal::Ideal;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;

/// Limits for the inflation loop.
#[derive(Clone, Debug, Default)]
pub struct LocalOptions {
    /// Largest inflation degree to try; None picks 4 * maxdeg(gens) + 8.
    pub n_max: Option<u32>,
}

impl LocalOptions {
    pub fn effective_n_max<F: Field>(&self, ideal: &Ideal<F>) -> u32 {
        self.n_max
            .unwrap_or_else(|| 4 * ideal.max_gen_degree() as u32 + 8)
    }
}

/// A certified description of I in the local ring: m^certificate lies in
/// I R_m, and `gb` is a Groebner basis of I + m^certificate, which agrees
/// with I after localization.
pub struct LocalData<F: Field> {
    pub colength: u64,
    pub certificate: u32,
    pub gb: Arc<GroebnerBasis<F>>,
}

/// Resolved local structure of an ideal.
#[derive(Clone)]
pub enum LocalOutcome<F: Field> {
    Finite(Arc<LocalData<F>>),
    /// The local quotient is provably infinite-dimensional.
    Infinite,
}

/// Localized colength of an ideal, as a plain value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Colength {
    Finite { value: u64, certificate: u32 },
    Infinite,
}

/// Certified local data for `ideal`, cached on the ideal.
pub fn local_data<F: Field>(
    ideal: &Ideal<F>,
    opts: &LocalOptions,
    cfg: &GroebnerConfig,
) -> Result<LocalOutcome<F>> {
    if let Some(out) = ideal.local_cache().lock().unwrap().as_ref() {
        return Ok(out.clone());
    }
    let out = compute_local(ideal, opts, cfg)?;
    *ideal.local_cache().lock().unwrap() = Some(out.clone());
    Ok(out)
}

/// dim_K of R_m / I R_m, with its Nakayama certificate degree.
pub fn local_colength<F: Field>(
    ideal: &Ideal<F>,
    opts: &LocalOptions,
    cfg: &GroebnerConfig,
) -> Result<Colength> {
    match local_data(ideal, opts, cfg)? {
        LocalOutcome::Finite(d) => Ok(Colength::Finite {
            value: d.colength,
            certificate: d.certificate,
        }),
        LocalOutcome::Infinite => Ok(Colength::Infinite),
    }
}

/// True when I is m-primary after localization: finite positive colength.
pub fn is_m_primary_local<F: Field>(
    ideal: &Ideal<F>,
    opts: &LocalOptions,
    cfg: &GroebnerConfig,
) -> Result<bool> {
    Ok(matches!(
        local_colength(ideal, opts, cfg)?,
        Colength::Finite { value, .. } if value > 0
    ))
}

/// Membership of f in I R_m (the localization at the origin).
pub fn local_contains<F: Field>(
    ideal: &Ideal<F>,
    f: &Polynomial<F>,
    opts: &LocalOptions,
    cfg: &GroebnerConfig,
) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    if let Some(min) = ideal.monomial_min_gens() {
        // Localization cannot add membership for monomial ideals.
        return Ok(f
            .terms()
            .all(|(m, _)| min.iter().any(|g| g.divides(m))));
    }
    match local_data(ideal, opts, cfg)? {
        LocalOutcome::Finite(d) => d.gb.contains(f, cfg),
        LocalOutcome::Infinite => Err(Error::Internal(
            "non-monomial ideal reported infinite local colength".into(),
        )),
    }
}

/// The local colon ideal (I R_m : f) given as an ideal of the global ring.
///
/// Requires finite local colength. With certificate degree N (so m^N lies in
/// I R_m) and f of order w at the origin, any g supported in degrees >= N - w
/// multiplies f into m^N, hence lies in the colon; the rest of the colon is
/// exactly the kernel of the linear map g -> NF(g*f) taken over polynomials
/// supported below degree N - w, with normal forms against the certified
/// basis of I + m^N (an m-primary ideal, so global membership in it decides
/// local membership in I R_m). The generators returned are an echelon basis
/// of that kernel, each monic in its highest monomial, plus the monomials of
/// degree N - w; when f itself lies in I R_m the colon is the unit ideal and
/// a single generator 1 is returned.
pub fn local_colon<F: Field>(
    ideal: &Ideal<F>,
    f: &Polynomial<F>,
    opts: &LocalOptions,
    cfg: &GroebnerConfig,
) -> Result<Ideal<F>> {
    if f.is_zero() {
        return Err(Error::DegenerateInput(
            "colon by the zero polynomial".into(),
        ));
    }
    let data = match local_data(ideal, opts, cfg)? {
        LocalOutcome::Finite(d) => d,
        LocalOutcome::Infinite => {
            return Err(Error::DegenerateInput(
                "local colon needs a finite-colength ideal".into(),
            ))
        }
    };
    let ring = ideal.ring().clone();
    let field = ring.field().clone();
    if data.gb.contains(f, cfg)? {
        return Ideal::new(&ring, vec![Polynomial::one(&ring)]);
    }
    // f survives reduction, so ord(f) < N and the cutoff below is positive.
    let ord = f
        .terms()
        .map(|(m, _)| m.total_degree())
        .min()
        .expect("nonzero polynomial has terms");
    let cutoff = u64::from(data.certificate) - ord;

    // Rows of the kernel problem: one per monomial below the cutoff, each row
    // the normal form of monomial * f written over the support monomials that
    // appear. Columns are indexed lazily as support monomials show up.
    let mut monos: Vec<Monomial> = Vec::new();
    for k in 0..cutoff {
        monos.extend(Monomial::all_of_degree(
            ring.nvars(),
            k.try_into().expect("cutoff fits the exponent type"),
        ));
    }
    let mut columns: std::collections::BTreeMap<Monomial, usize> = Default::default();
    type SparseVec<E> = std::collections::BTreeMap<usize, E>;
    // dst -= factor * src, dropping entries that cancel to zero.
    let axpy = |dst: &mut SparseVec<F::Elem>, factor: &F::Elem, src: &SparseVec<F::Elem>| {
        for (k, v) in src {
            let delta = field.mul(factor, v);
            let next = match dst.get(k) {
                Some(cur) => field.sub(cur, &delta),
                None => field.neg(&delta),
            };
            if field.is_zero(&next) {
                dst.remove(k);
            } else {
                dst.insert(*k, next);
            }
        }
    };

    // Incremental row echelon with combination tracking: a row that reduces
    // to zero certifies its combination of monomials as a kernel element.
    let mut pivots: Vec<(usize, SparseVec<F::Elem>, SparseVec<F::Elem>)> = Vec::new();
    let mut kernel: Vec<Polynomial<F>> = Vec::new();
    for (i, mono) in monos.iter().enumerate() {
        let g = Polynomial::term(&ring, mono.clone(), field.one());
        let gf = g.checked_mul(f)?;
        let nf = data.gb.normal_form(&gf, cfg)?;
        let mut row: SparseVec<F::Elem> = Default::default();
        for (m, c) in nf.terms() {
            let next = columns.len();
            let col = *columns.entry(m.clone()).or_insert(next);
            row.insert(col, c.clone());
        }
        let mut comb: SparseVec<F::Elem> = Default::default();
        comb.insert(i, field.one());
        for (col, prow, pcomb) in &pivots {
            if let Some(c) = row.get(col) {
                let factor = field.div(c, prow.get(col).expect("pivot entry"));
                axpy(&mut row, &factor, prow);
                axpy(&mut comb, &factor, pcomb);
            }
        }
        match row.keys().next().copied() {
            None => {
                let terms = comb
                    .iter()
                    .map(|(idx, c)| (monos[*idx].clone(), c.clone()))
                    .collect();
                kernel.push(Polynomial::from_terms(&ring, terms));
            }
            Some(col) => pivots.push((col, row, comb)),
        }
    }

    let mut gens = kernel;
    gens.extend(Ideal::m_power_gens(
        &ring,
        cutoff.try_into().expect("cutoff fits u32"),
    ));
    Ideal::new(&ring, gens)
}

fn compute_local<F: Field>(
    ideal: &Ideal<F>,
    opts: &LocalOptions,
    cfg: &GroebnerConfig,
) -> Result<LocalOutcome<F>> {
    let ring = ideal.ring().clone();
    let nvars = ring.nvars();

    if ideal.is_zero() {
        return Ok(LocalOutcome::Infinite);
    }

    // Monomial ideals: read everything off the staircase.
    if let Some(min) = ideal.monomial_min_gens() {
        let mut count = 0u64;
        let mut d = 0u32;
        loop {
            let standard = Monomial::all_of_degree(nvars, d)
                .into_iter()
                .filter(|m| !min.iter().any(|g| g.divides(m)))
                .count() as u64;
            if standard == 0 {
                break;
            }
            count += standard;
            d += 1;
            if d > 4 * ideal.max_gen_degree() as u32 + 8 {
                // Some variable admits no pure power: positive dimension.
                return Ok(LocalOutcome::Infinite);
            }
        }
        let certificate = d;
        let gens: Vec<Polynomial<F>> = min
            .iter()
            .map(|m| Polynomial::term(&ring, m.clone(), ring.field().one()))
            .chain(Ideal::m_power_gens(&ring, certificate))
            .collect();
        let gb = crate::groebner::groebner_basis(&ring, &gens, &MonomialOrder::DegRevLex, cfg)?;
        return Ok(LocalOutcome::Finite(Arc::new(LocalData {
            colength: count,
            certificate,
            gb: Arc::new(gb),
        })));
    }

    let seed = ideal.groebner_degrevlex(cfg)?;
    if seed.is_trivial() {
        return Ok(LocalOutcome::Finite(Arc::new(LocalData {
            colength: 0,
            certificate: 0,
            gb: seed,
        })));
    }

    let n_max = opts.effective_n_max(ideal);
    let inflate = |n: u32| -> Result<GroebnerBasis<F>> {
        let monos: Vec<Polynomial<F>> = Ideal::m_power_gens(&ring, n);
        groebner_basis_seeded(
            &ring,
            Some(&seed),
            &monos,
            &MonomialOrder::DegRevLex,
            Some(n as u64 + 1),
            cfg,
        )
    };

    let mut n = 2u32;
    let mut gb_n = inflate(n)?;
    let mut c_n = gb_n
        .colength()
        .ok_or_else(|| Error::Internal("inflated ideal with infinite staircase".into()))?;
    while n < n_max {
        let gb_next = inflate(n + 1)?;
        let c_next = gb_next
            .colength()
            .ok_or_else(|| Error::Internal("inflated ideal with infinite staircase".into()))?;
        if c_next == c_n {
            // Certificate recheck: every degree-n monomial must lie in
            // I + m^(n+1), and hence in I after localization.
            for m in Monomial::all_of_degree(nvars, n) {
                let p = Polynomial::term(&ring, m, ring.field().one());
                if !gb_next.contains(&p, cfg)? {
                    return Err(Error::Internal(
                        "colength stabilized but a monomial escaped the certificate".into(),
                    ));
                }
            }
            return Ok(LocalOutcome::Finite(Arc::new(LocalData {
                colength: c_n,
                certificate: n,
                gb: Arc::new(gb_n),
            })));
        }
        n += 1;
        gb_n = gb_next;
        c_n = c_next;
    }
    Err(Error::Inconclusive {
        n_max,
        last: c_n,
    })
}
