//! Batch checks of testable consequences over corpora of singularities:
//! whether (j(f):f) lands inside tj(f), Briancon-Skoda-type power
//! membership f^e in j(f), and the mu/tau ratio bound, with per-instance
//! error records, a deterministic built-in corpus, and a plain-text corpus
//! file format.
//!
//! The full integral-closure statements are out of computational reach;
//! every report states that only the tj-containment consequence is probed.

use crate::error::{Error, Result};
use crate::family::{random_deformation, DeformationSpec};
use crate::field::{sample_nonzero, Field, Rat, Rationals};
use crate::hfun;
use crate::invariants::{
    jacobian_ideal, mu_tau_report, tjurina_ideal, Count, EBs, InvariantOptions,
};
use crate::local::{local_colon, local_contains, local_data, LocalOutcome};
use crate::parse::parse_polynomial;
use crate::poly::Polynomial;
use crate::ring::{parse_ring_spec, prime_ring, rational_ring, FieldSpec, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::fmt::Write as _;

/// Caveat printed at the top of every report.
pub const REPORT_HEADER: &str = "Integral closure is not computed; these runs \
test only the tangent-space consequence, namely whether (j(f):f) lies in \
tj(f). A containment in characteristic zero is flagged as a violation \
candidate pending manual inspection (budget exhaustion can masquerade as an \
anomaly); candidates are never silently accepted.";

/// Outcome of the colon-containment probe for a single polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct ColonCheck {
    /// Printed generators of (j(f) : f).
    pub colon_gens: Vec<String>,
    /// Whether every generator of (j(f):f) lies in tj(f) in the local ring.
    pub contained_in_tj: bool,
    /// Methodological notes (for example the non-m-primary fallback).
    pub notes: Vec<String>,
}

/// Compute (j(f):f) and test it for containment in tj(f).
///
/// The colon is formed in the polynomial ring; colon ideals of finitely
/// generated ideals commute with localization, so the computed generators
/// also generate the colon in the local ring, where membership in tj(f) is
/// then decided through the certified m-primary basis of tj(f). Requires f
/// isolated (finite certified tau).
pub fn check_colon_containment<F: Field>(
    f: &Polynomial<F>,
    opts: &InvariantOptions,
) -> Result<ColonCheck> {
    let tj = tjurina_ideal(f)?;
    match local_data(&tj, &opts.local, &opts.groebner)? {
        LocalOutcome::Finite(_) => {}
        LocalOutcome::Infinite => {
            return Err(Error::DegenerateInput(
                "colon check needs an isolated singularity (finite tau)".into(),
            ))
        }
    }
    let ring = f.ring();
    let j = jacobian_ideal(f)?;
    let mut notes = Vec::new();
    let j_primary = match local_data(&j, &opts.local, &opts.groebner) {
        Ok(LocalOutcome::Finite(_)) => true,
        Ok(LocalOutcome::Infinite) => {
            notes.push(
                "j(f) is not m-primary (mu infinite); the colon is still exact: it \
                 commutes with localization"
                    .to_string(),
            );
            false
        }
        Err(Error::Inconclusive { .. }) => {
            notes.push(
                "m-primarity of j(f) undetermined within budget; colon computed in \
                 the polynomial ring"
                    .to_string(),
            );
            false
        }
        Err(other) => return Err(other),
    };

    let colon = if j_primary {
        // Kernel-based local colon against the certified basis of j(f).
        // Structural sanity per instance, phrased through the defining
        // property of the colon: every j(f)-multiple of f must reduce to
        // zero locally, and f in j(f) R_m exactly when the colon is (1).
        let colon = local_colon(&j, f, &opts.local, &opts.groebner)?;
        for g in j.gens() {
            let gf = g.checked_mul(f)?;
            if !local_contains(&j, &gf, &opts.local, &opts.groebner)? {
                return Err(Error::Internal(
                    "colon sanity failed: (j(f):f) does not contain j(f)".into(),
                ));
            }
        }
        let f_in_j = local_contains(&j, f, &opts.local, &opts.groebner)?;
        let colon_is_unit = colon
            .gens()
            .iter()
            .any(|g| g.terms().count() == 1 && g.terms().all(|(m, _)| m.is_one()));
        if f_in_j != colon_is_unit {
            return Err(Error::Internal(
                "colon sanity failed: f in j(f) R_m must coincide with (j(f):f) = (1)"
                    .into(),
            ));
        }
        colon
    } else {
        let colon = j.colon_poly(f, &opts.groebner)?;
        // Structural sanity, asserted per instance: (j:f) contains j, and
        // when f in j(f) the colon is the unit ideal.
        let colon_gb = colon.groebner_degrevlex(&opts.groebner)?;
        for g in j.gens() {
            if !colon_gb.contains(g, &opts.groebner)? {
                return Err(Error::Internal(
                    "colon sanity failed: (j(f):f) does not contain j(f)".into(),
                ));
            }
        }
        let j_gb = j.groebner_degrevlex(&opts.groebner)?;
        if j_gb.contains(f, &opts.groebner)? {
            let one = Polynomial::one(ring);
            if !colon_gb.contains(&one, &opts.groebner)? {
                return Err(Error::Internal(
                    "colon sanity failed: f in j(f) but (j(f):f) is not the unit ideal"
                        .into(),
                ));
            }
        }
        colon
    };

    let mut contained = true;
    for g in colon.gens() {
        if !local_contains(&tj, g, &opts.local, &opts.groebner)? {
            contained = false;
            break;
        }
    }
    Ok(ColonCheck {
        colon_gens: colon.gens().iter().map(|g| g.to_string()).collect(),
        contained_in_tj: contained,
        notes,
    })
}

/// One entry of the power-membership sequence: is f^e in j(f)?
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PowerMembership {
    pub e: u32,
    pub in_j: bool,
}

/// Normal-form membership of f^e in j(f) for e = 1..cap (global reduced
/// basis). The integral-closure hypothesis that would force eventual
/// membership is not tested; results are reported as-is.
pub fn check_power_membership<F: Field>(
    f: &Polynomial<F>,
    cap: u32,
    opts: &InvariantOptions,
) -> Result<Vec<PowerMembership>> {
    let j = jacobian_ideal(f)?;
    let gb = j.groebner_degrevlex(&opts.groebner)?;
    let mut out = Vec::with_capacity(cap as usize);
    let mut fe = f.clone();
    for e in 1..=cap {
        if e > 1 {
            fe = fe.checked_mul(f).expect("same ring");
        }
        out.push(PowerMembership {
            e,
            in_j: gb.contains(&fe, &opts.groebner)?,
        });
    }
    Ok(out)
}

/// One corpus instance: the active ring spec plus a polynomial as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub ring_spec: String,
    pub poly_text: String,
    /// 1-based line number in the source text.
    pub line: usize,
}

/// Parse corpus text. `#` starts a comment, blank lines are skipped, a line
/// containing `char=` is a ring-spec line switching the active ring, and
/// every other line is one polynomial over the active ring. Ring specs are
/// validated here; polynomial syntax is checked per instance at run time so
/// one bad instance cannot sink a whole corpus.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut active: Option<String> = None;
    let mut entries = Vec::new();
    let mut offset = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let pos = offset;
        offset += raw.len() + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.contains("char=") {
            parse_ring_spec(line).map_err(|e| Error::Syntax {
                pos,
                msg: format!("line {}: bad ring spec: {e}", idx + 1),
            })?;
            active = Some(line.to_string());
        } else {
            let Some(spec) = active.clone() else {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("line {}: polynomial before any ring-spec line", idx + 1),
                });
            };
            entries.push(CorpusEntry {
                ring_spec: spec,
                poly_text: line.to_string(),
                line: idx + 1,
            });
        }
    }
    Ok(entries)
}

fn ser_opt_rat<S: Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(x) => s.serialize_str(&hfun::format_rat(x)),
        None => s.serialize_str("undefined"),
    }
}

/// Everything recorded for one corpus instance. Errors are data: a failed
/// instance keeps its `error` message and leaves the analysis fields empty.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub ring: String,
    pub f: String,
    pub characteristic: u64,
    pub mu: Count,
    pub tau: Count,
    pub colon_gens: Vec<String>,
    pub contained_in_tj: Option<bool>,
    /// True exactly when contained_in_tj is true; containment candidates are
    /// surfaced, never silently accepted.
    pub violation_candidate: bool,
    pub e_bs: Option<EBs>,
    pub f_power_membership: Vec<PowerMembership>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub ratio: Option<Rat>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub bound: Option<Rat>,
    pub bound_satisfied: Option<bool>,
    pub notes: Vec<String>,
    pub error: Option<String>,
}

/// Aggregate counts over a run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConjectureSummary {
    pub instances: usize,
    pub ok: usize,
    pub errors: usize,
    /// Instances with (j(f):f) contained in tj(f), any characteristic.
    pub contained_candidates: usize,
    /// The char-0 subset of `contained_candidates`; the conjecture predicts
    /// zero here.
    pub char_zero_contained_candidates: usize,
    pub bound_violations: usize,
}

/// Full report: header caveat, config echo, per-instance records, summary.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub header: String,
    pub seed: u64,
    pub trials: u32,
    pub ebs_cap: Option<u32>,
    pub records: Vec<InstanceRecord>,
    pub summary: ConjectureSummary,
}

fn error_record(index: usize, entry: &CorpusEntry, characteristic: u64, msg: String) -> InstanceRecord {
    InstanceRecord {
        index,
        ring: entry.ring_spec.clone(),
        f: entry.poly_text.clone(),
        characteristic,
        mu: Count::Unknown,
        tau: Count::Unknown,
        colon_gens: Vec::new(),
        contained_in_tj: None,
        violation_candidate: false,
        e_bs: None,
        f_power_membership: Vec::new(),
        ratio: None,
        bound: None,
        bound_satisfied: None,
        notes: Vec::new(),
        error: Some(msg),
    }
}

fn check_one<F: Field>(
    index: usize,
    entry: &CorpusEntry,
    ring: &Ring<F>,
    opts: &InvariantOptions,
) -> Result<InstanceRecord> {
    let f = parse_polynomial(ring, &entry.poly_text)?;
    let (rec, mut notes) = mu_tau_report(&f, opts)?;
    if !rec.tau.is_finite() {
        return Err(Error::DegenerateInput(
            "not isolated (tau not finite); conjecture checks need an isolated singularity"
                .into(),
        ));
    }
    let colon = check_colon_containment(&f, opts)?;
    notes.extend(colon.notes);
    let cap = opts.ebs_cap.unwrap_or(ring.nvars() as u32).max(1);
    let powers = check_power_membership(&f, cap, opts)?;
    Ok(InstanceRecord {
        index,
        ring: ring.spec_string(),
        f: rec.f,
        characteristic: rec.characteristic,
        mu: rec.mu,
        tau: rec.tau,
        colon_gens: colon.colon_gens,
        contained_in_tj: Some(colon.contained_in_tj),
        violation_candidate: colon.contained_in_tj,
        e_bs: Some(rec.e_bs),
        f_power_membership: powers,
        ratio: rec.ratio,
        bound: Some(rec.bound),
        bound_satisfied: rec.bound_satisfied,
        notes,
        error: None,
    })
}

fn run_entry(index: usize, entry: &CorpusEntry, opts: &InvariantOptions) -> InstanceRecord {
    let field = match parse_ring_spec(&entry.ring_spec) {
        Ok((field, _)) => field,
        Err(e) => return error_record(index, entry, 0, e.to_string()),
    };
    let characteristic = match field {
        FieldSpec::Rationals => 0,
        FieldSpec::Prime(p) => p,
    };
    let outcome = match field {
        FieldSpec::Rationals => rational_ring(&entry.ring_spec)
            .and_then(|ring| check_one(index, entry, &ring, opts)),
        FieldSpec::Prime(_) => prime_ring(&entry.ring_spec)
            .and_then(|ring| check_one(index, entry, &ring, opts)),
    };
    match outcome {
        Ok(record) => record,
        Err(e) => error_record(index, entry, characteristic, e.to_string()),
    }
}

/// Run every corpus entry (instances in parallel, assembly single-threaded).
/// Per-instance errors become error records; the run always completes. The
/// result is a pure function of (entries, opts), so reports are reproducible
/// bit for bit from (corpus, seed, config).
pub fn corpus_run(entries: &[CorpusEntry], opts: &InvariantOptions) -> ConjectureReport {
    let records: Vec<InstanceRecord> = entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| run_entry(i, e, opts))
        .collect();
    let mut summary = ConjectureSummary {
        instances: records.len(),
        ..ConjectureSummary::default()
    };
    for r in &records {
        if r.error.is_some() {
            summary.errors += 1;
        } else {
            summary.ok += 1;
        }
        if r.violation_candidate {
            summary.contained_candidates += 1;
            if r.characteristic == 0 {
                summary.char_zero_contained_candidates += 1;
            }
        }
        if r.bound_satisfied == Some(false) {
            summary.bound_violations += 1;
        }
    }
    ConjectureReport {
        header: REPORT_HEADER.to_string(),
        seed: opts.seed,
        trials: opts.trials,
        ebs_cap: opts.ebs_cap,
        records,
        summary,
    }
}

/// Parse corpus text and run it.
pub fn corpus_run_text(text: &str, opts: &InvariantOptions) -> Result<ConjectureReport> {
    let entries = parse_corpus(text)?;
    Ok(corpus_run(&entries, opts))
}

fn push_fermat(out: &mut String, vars: &[&str], n: u32) {
    let body = vars
        .iter()
        .map(|v| format!("{v}^{n}"))
        .collect::<Vec<_>>()
        .join(" + ");
    writeln!(out, "{body}").unwrap();
}

fn push_brieskorn(out: &mut String, vars: &[&str], exps: &[u32]) {
    let body = vars
        .iter()
        .zip(exps)
        .map(|(v, a)| format!("{v}^{a}"))
        .collect::<Vec<_>>()
        .join(" + ");
    writeln!(out, "{body}").unwrap();
}

/// Quasi-homogeneous 2-variable instance x^a + y^b + sum of seeded nonzero
/// middle terms on the weight line i/a + j/b = 1.
fn push_quasi_homog2(out: &mut String, rng: &mut ChaCha8Rng, a: u32, b: u32, middles: &[(u32, u32)]) {
    let ring = Ring::new(Rationals, &["x", "y"]).expect("valid ring");
    let mut f = parse_polynomial(&ring, &format!("x^{a} + y^{b}")).expect("valid text");
    for &(i, j) in middles {
        let c = sample_nonzero(&Rationals, rng);
        let mono = crate::monomial::Monomial::from_exps(&[
            i as crate::monomial::Exp,
            j as crate::monomial::Exp,
        ]);
        f = f
            .checked_add(&Polynomial::term(&ring, mono, c))
            .expect("same ring");
    }
    writeln!(out, "{f}").unwrap();
}

/// Deterministic built-in corpus (well over 100 instances, characteristics 0
/// and p mixed, 2 and 3 variables), rendered in the corpus file format.
pub fn builtin_corpus(seed: u64) -> String {
    let mut out = String::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x5eed));
    writeln!(out, "# built-in singularity corpus (seed {seed})").unwrap();

    // --- characteristic 0, two variables ---
    writeln!(out, "char=0; vars=x,y").unwrap();
    for k in 1..=6u32 {
        writeln!(out, "x^2 + y^{}", k + 1).unwrap(); // A_k
    }
    for k in 4..=7u32 {
        writeln!(out, "x^{} + x*y^2", k - 1).unwrap(); // D_k
    }
    writeln!(out, "x^3 + y^4").unwrap(); // E_6
    writeln!(out, "x^3 + x*y^3").unwrap(); // E_7
    writeln!(out, "x^3 + y^5").unwrap(); // E_8
    for n in 2..=8u32 {
        push_fermat(&mut out, &["x", "y"], n);
    }
    for (a, b) in [(3u32, 6u32), (4, 5), (4, 6), (5, 6)] {
        push_brieskorn(&mut out, &["x", "y"], &[a, b]);
    }
    push_quasi_homog2(&mut out, &mut rng, 4, 4, &[(2, 2), (1, 3)]);
    push_quasi_homog2(&mut out, &mut rng, 5, 5, &[(2, 3), (3, 2)]);
    push_quasi_homog2(&mut out, &mut rng, 6, 6, &[(3, 3), (2, 4)]);
    push_quasi_homog2(&mut out, &mut rng, 6, 3, &[(2, 2), (4, 1)]);
    push_quasi_homog2(&mut out, &mut rng, 4, 6, &[(2, 3)]);
    push_quasi_homog2(&mut out, &mut rng, 6, 4, &[(3, 2)]);
    {
        let ring = Ring::new(Rationals, &["x", "y"]).expect("valid ring");
        for (i, n) in [3u32, 4, 5, 6, 3, 4, 5, 6].iter().enumerate() {
            let spec = DeformationSpec::new(*n, 2, seed.wrapping_add(100 + i as u64))
                .expect("valid deformation spec");
            let f = random_deformation(&ring, &spec).expect("char 0 deformation");
            writeln!(out, "{f}").unwrap();
        }
    }

    // --- characteristic 0, three variables ---
    writeln!(out, "char=0; vars=x,y,z").unwrap();
    for n in 2..=5u32 {
        push_fermat(&mut out, &["x", "y", "z"], n);
    }
    for exps in [
        [2u32, 2, 2],
        [2, 2, 3],
        [2, 2, 4],
        [2, 3, 3],
        [2, 3, 4],
        [2, 4, 4],
        [3, 3, 3],
        [3, 3, 4],
        [3, 4, 4],
        [4, 4, 4],
        [2, 3, 5],
        [2, 3, 6],
        [2, 4, 5],
        [3, 4, 5],
        [2, 2, 5],
        [2, 2, 6],
    ] {
        push_brieskorn(&mut out, &["x", "y", "z"], &exps);
    }
    {
        let ring = Ring::new(Rationals, &["x", "y", "z"]).expect("valid ring");
        // Middle terms on the weight hyperplane, seeded nonzero coefficients.
        let shapes: [(&str, &[&str]); 4] = [
            ("x^3 + y^3 + z^3", &["x*y*z"]),
            ("x^2 + y^4 + z^4", &["y^2*z^2"]),
            ("x^2 + y^3 + z^6", &["y^2*z^2", "x*z^3"]),
            ("x^2 + y^6 + z^3", &["y^3*z", "y^2*z^2"]),
        ];
        for (base, middles) in shapes {
            let mut f = parse_polynomial(&ring, base).expect("valid text");
            for m in middles {
                let c = sample_nonzero(&Rationals, &mut rng);
                let term = parse_polynomial(&ring, m).expect("valid text");
                let scaled = term.scale(&c);
                f = f.checked_add(&scaled).expect("same ring");
            }
            writeln!(out, "{f}").unwrap();
        }
        for (i, n) in [3u32, 4].iter().enumerate() {
            let spec = DeformationSpec::new(*n, 3, seed.wrapping_add(200 + i as u64))
                .expect("valid deformation spec");
            let f = random_deformation(&ring, &spec).expect("char 0 deformation");
            writeln!(out, "{f}").unwrap();
        }
    }

    // --- characteristic p, two variables ---
    for p in [2u64, 3, 5] {
        writeln!(out, "char={p}; vars=x,y").unwrap();
        writeln!(out, "x^{p} + y^{}", p + 1).unwrap();
    }
    writeln!(out, "char=2; vars=x,y").unwrap();
    writeln!(out, "x^3 + y^3").unwrap();
    writeln!(out, "x^3 + x*y^3").unwrap();
    writeln!(out, "x^5 + y^3").unwrap();
    writeln!(out, "char=3; vars=x,y").unwrap();
    writeln!(out, "x^2 + y^2").unwrap();
    writeln!(out, "x^4 + y^4").unwrap();
    writeln!(out, "x^2 + y^5").unwrap();
    writeln!(out, "x^4 + y^5").unwrap();
    writeln!(out, "char=5; vars=x,y").unwrap();
    writeln!(out, "x^2 + y^3").unwrap();
    writeln!(out, "x^3 + y^4").unwrap();
    writeln!(out, "x^4 + y^6").unwrap();
    writeln!(out, "x^7 + y^2").unwrap();
    for (p, pairs) in [
        (7u64, vec![(2u32, 3u32), (3, 4), (5, 6), (4, 5), (6, 6), (2, 6)]),
        (11, vec![(2, 3), (3, 4), (4, 5), (5, 6), (2, 9)]),
        (13, vec![(2, 3), (3, 5), (4, 4)]),
    ] {
        writeln!(out, "char={p}; vars=x,y").unwrap();
        for (a, b) in pairs {
            push_brieskorn(&mut out, &["x", "y"], &[a, b]);
        }
    }
    // char-p deformations (p never divides the Fermat degree)
    for (p, n, offset) in [(5u64, 4u32, 300u64), (7, 5, 301), (7, 3, 302), (11, 4, 303)] {
        writeln!(out, "char={p}; vars=x,y").unwrap();
        let ring = prime_ring(&format!("char={p}; vars=x,y")).expect("valid ring");
        let spec =
            DeformationSpec::new(n, 2, seed.wrapping_add(offset)).expect("valid deformation spec");
        let f = random_deformation(&ring, &spec).expect("p does not divide n");
        writeln!(out, "{f}").unwrap();
    }

    // --- characteristic p, three variables ---
    writeln!(out, "char=7; vars=x,y,z").unwrap();
    for exps in [[2u32, 2, 2], [2, 3, 4], [3, 3, 3], [2, 3, 5], [2, 2, 4]] {
        push_brieskorn(&mut out, &["x", "y", "z"], &exps);
    }
    writeln!(out, "char=5; vars=x,y,z").unwrap();
    for exps in [[2u32, 3, 4], [2, 2, 3], [3, 3, 4], [2, 3, 3]] {
        push_brieskorn(&mut out, &["x", "y", "z"], &exps);
    }
    writeln!(out, "char=11; vars=x,y,z").unwrap();
    for exps in [[2u32, 3, 7], [3, 4, 5]] {
        push_brieskorn(&mut out, &["x", "y", "z"], &exps);
    }
    {
        writeln!(out, "char=5; vars=x,y,z").unwrap();
        let ring = prime_ring("char=5; vars=x,y,z").expect("valid ring");
        let spec = DeformationSpec::new(3, 3, seed.wrapping_add(400)).expect("valid spec");
        let f = random_deformation(&ring, &spec).expect("5 does not divide 3");
        writeln!(out, "{f}").unwrap();
    }
    out
}
