//! mutau: exact invariants of isolated hypersurface singularities.
//!
//! Subcommands delegate to the `mutau-core` kernel and print reproducible,
//! machine-readable artifacts: identical invocations (same flags, same seed,
//! same budget environment) produce byte-identical primary output.
//!
//! Exit codes: 0 success, 1 input/usage error, 2 budget or stabilization
//! window exhausted, 3 internal assertion failure.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mutau_core::hfun::{self, format_rat, format_rat_decimal};
use mutau_core::{
    builtin_corpus, corpus_run_text, default_e_max, e_s_level, generalized_milnor_extended,
    h_s_level, hk_sequence, mu_tau_report, parse_polynomial, parse_ring_spec, prime_ring,
    rational_ring, tau_min_experiment, threshold_levels, FieldSpec, Ideal, InvariantOptions, Rat,
    Ring,
};

const TOOL: &str = "mutau";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "mutau",
    version,
    about = "Exact Milnor/Tjurina invariants, Hilbert-Kunz and s-multiplicity \
             experiments, the simplicial volume function H_s(d), and the sharp \
             mu/tau bound",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full invariant record (mu, tau, mu_O, e_BS, ratio, bound) of one polynomial
    Invariants(InvariantsArgs),
    /// Exact upper-bound table for mu/tau: n, 1/(H_{(n+1)/2}(n)-H_{(n-1)/2}(n)), decimal preview
    BoundTable(BoundTableArgs),
    /// Evaluate the simplicial volume function H_s(d) and its relatives exactly
    Hfun(HfunArgs),
    /// Hilbert-Kunz colength sequence of an m-primary ideal in characteristic p
    Hk(HkArgs),
    /// Finite-level s-multiplicity h_s(I, J) data in characteristic p
    Hs(HsArgs),
    /// Random deformation-family experiment around the Fermat hypersurface
    Family(FamilyArgs),
    /// Colon-containment sweep over a singularity corpus
    Conjectures(ConjecturesArgs),
}

#[derive(Args)]
struct InvariantsArgs {
    /// Ring specification, e.g. "char=0; vars=x,y"
    #[arg(long)]
    ring: String,
    /// The polynomial, e.g. "x^3 + y^4"
    poly: String,
    /// Unit samples for the generalized Milnor number
    #[arg(long)]
    trials: Option<u32>,
    /// Seed for unit sampling
    #[arg(long)]
    seed: Option<u64>,
    /// Cap for the Briancon-Skoda exponent search (default: number of variables)
    #[arg(long)]
    ebs_cap: Option<u32>,
    /// Also sample units over F_{p^k} for k in {2,3} (prime characteristic only)
    #[arg(long)]
    field_extension: Option<u32>,
    /// Groebner reduction-step budget (default: MUTAU_GROEBNER_BUDGET or 10^7)
    #[arg(long)]
    budget: Option<u64>,
    /// Largest inflation degree for local colength certificates
    #[arg(long)]
    nmax: Option<u32>,
    /// Output format: json or table
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the primary output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundTableArgs {
    /// Largest n; rows cover n = 2..=N
    n_max: u32,
    /// Output format: csv, json or table
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HfunArgs {
    /// The parameter s, an exact rational like 3/2 (negative values allowed)
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// The dimension d >= 1
    #[arg(long)]
    d: u32,
    /// Print the derivative H_s'(d) instead of H_s(d)
    #[arg(long)]
    deriv: bool,
    /// Monte Carlo cross-check with this many samples
    #[arg(long)]
    mc: Option<u64>,
    /// Seed for the Monte Carlo sampler
    #[arg(long)]
    seed: Option<u64>,
    /// Check symmetry/unimodality of t -> H_{t+1}(d) - H_t(d) on a grid
    #[arg(long)]
    fmax: bool,
    /// Grid points per unit interval for --fmax
    #[arg(long, default_value_t = 16)]
    grid: u32,
    /// Output format: value (bare result line), json or table
    #[arg(long, default_value = "value")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HkArgs {
    /// Ring specification with prime characteristic, e.g. "char=2; vars=x,y"
    #[arg(long)]
    ring: String,
    /// Generators of the m-primary ideal, comma separated, e.g. "x^2, y^3"
    ideal: String,
    /// Largest Frobenius level e (q = p^e); default depends on the variable count
    #[arg(long)]
    emax: Option<u32>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    nmax: Option<u32>,
    /// Output format: json, csv or table
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HsArgs {
    /// Ring specification with prime characteristic
    #[arg(long)]
    ring: String,
    /// Generators of the m-primary ideal I, comma separated
    ideal: String,
    /// Generators of the m-primary ideal J (default: same as I)
    #[arg(long)]
    j: Option<String>,
    /// The parameter s > 0, an exact rational like 3/2
    #[arg(long)]
    s: String,
    /// Single Frobenius level e
    #[arg(long, conflicts_with = "emax")]
    e: Option<u32>,
    /// Sweep levels e = 1..=emax
    #[arg(long)]
    emax: Option<u32>,
    /// Also report the normalized level e_s = h_s / H_s(d)
    #[arg(long)]
    es: bool,
    /// Also report the threshold pair (nu, mu) at each level
    #[arg(long)]
    thresholds: bool,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    nmax: Option<u32>,
    /// Output format: json, csv or table
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    /// Fermat degree n >= 3
    #[arg(long)]
    n: u32,
    /// Number of variables d (2..=6)
    #[arg(long)]
    d: u32,
    /// Number of random deformation trials
    #[arg(long, default_value_t = 20)]
    trials: u32,
    /// Seed for the deformation sampler
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Upper bound on deformation monomial degree (default: truncation degree)
    #[arg(long)]
    degree_cap: Option<u32>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    nmax: Option<u32>,
    /// Output format: csv (rows plus "# summary:" line) or json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConjecturesArgs {
    /// Corpus file; omit to use the built-in generated corpus
    corpus: Option<PathBuf>,
    /// Seed: generates the built-in corpus and drives unit sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    ebs_cap: Option<u32>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    nmax: Option<u32>,
    /// Output format: json or table (summary only)
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        let code = err
            .downcast_ref::<mutau_core::Error>()
            .map(|e| e.exit_code())
            .unwrap_or(1);
        std::process::exit(code);
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Invariants(a) => cmd_invariants(a),
        Cmd::BoundTable(a) => cmd_bound_table(a),
        Cmd::Hfun(a) => cmd_hfun(a),
        Cmd::Hk(a) => cmd_hk(a),
        Cmd::Hs(a) => cmd_hs(a),
        Cmd::Family(a) => cmd_family(a),
        Cmd::Conjectures(a) => cmd_conjectures(a),
    }
}

// ---------------------------------------------------------------------------
// shared plumbing

fn build_opts(
    budget: Option<u64>,
    nmax: Option<u32>,
    trials: Option<u32>,
    seed: Option<u64>,
    ebs_cap: Option<u32>,
) -> InvariantOptions {
    let mut o = InvariantOptions::default();
    if let Some(b) = budget {
        o.groebner.max_reduction_steps = b;
    }
    if let Some(n) = nmax {
        o.local.n_max = Some(n);
    }
    if let Some(t) = trials {
        o.trials = t;
    }
    if let Some(s) = seed {
        o.seed = s;
    }
    if let Some(c) = ebs_cap {
        o.ebs_cap = Some(c);
    }
    o
}

/// Resolved-configuration JSON shared by every machine-readable artifact.
fn config_json(opts: &InvariantOptions, extra: &[(&str, Value)]) -> Value {
    let mut cfg = serde_json::Map::new();
    for (k, v) in extra {
        cfg.insert((*k).to_string(), v.clone());
    }
    cfg.insert(
        "budget".into(),
        json!(opts.groebner.max_reduction_steps),
    );
    cfg.insert("nmax".into(), json!(opts.local.n_max));
    Value::Object(cfg)
}

fn envelope(command: &str, config: Value) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), json!(TOOL));
    m.insert("version".into(), json!(VERSION));
    m.insert("command".into(), json!(command));
    m.insert("config".into(), config);
    m
}

fn emit(out: &Option<PathBuf>, payload: &str) -> anyhow::Result<()> {
    let mut text = payload.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(out: &Option<PathBuf>, value: &Value) -> anyhow::Result<()> {
    emit(out, &serde_json::to_string_pretty(value)?)
}

/// CSV comment header embedding tool version and resolved configuration.
fn csv_header(command: &str, config_line: &str) -> String {
    format!("# tool: {TOOL} {VERSION}\n# command: {command}\n# config: {config_line}\n")
}

fn parse_rat(text: &str) -> anyhow::Result<Rat> {
    use num::BigInt;
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| anyhow!("invalid rational {text:?}: bad numerator"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| anyhow!("invalid rational {text:?}: bad denominator"))?;
    if d == BigInt::from(0) {
        bail!("invalid rational {text:?}: zero denominator");
    }
    Ok(Rat::new(n, d))
}

/// Runs `body` over the ring named by `spec`, dispatching on characteristic.
fn with_ring<T>(
    spec: &str,
    body_q: impl FnOnce(Ring<mutau_core::Rationals>) -> anyhow::Result<T>,
    body_p: impl FnOnce(Ring<mutau_core::PrimeField>) -> anyhow::Result<T>,
) -> anyhow::Result<T> {
    let (field, _) = parse_ring_spec(spec)?;
    match field {
        FieldSpec::Rationals => body_q(rational_ring(spec)?),
        FieldSpec::Prime(_) => body_p(prime_ring(spec)?),
    }
}

// ---------------------------------------------------------------------------
// invariants

fn cmd_invariants(a: InvariantsArgs) -> anyhow::Result<()> {
    let opts = build_opts(a.budget, a.nmax, a.trials, a.seed, a.ebs_cap);
    let config = config_json(
        &opts,
        &[
            ("ring", json!(a.ring)),
            ("seed", json!(opts.seed)),
            ("trials", json!(opts.trials)),
            ("ebs_cap", json!(opts.ebs_cap)),
            ("field_extension", json!(a.field_extension)),
        ],
    );

    let (record_json, warnings, extension) = with_ring(
        &a.ring,
        |ring| {
            if a.field_extension.is_some() {
                bail!("--field-extension needs a prime-characteristic ring");
            }
            let f = parse_polynomial(&ring, &a.poly)?;
            let (record, warnings) = mu_tau_report(&f, &opts)?;
            Ok((serde_json::to_value(&record)?, warnings, None))
        },
        |ring| {
            let f = parse_polynomial(&ring, &a.poly)?;
            let (record, warnings) = mu_tau_report(&f, &opts)?;
            let ext = match a.field_extension {
                None => None,
                Some(k) => {
                    let g = generalized_milnor_extended(&f, k, &opts)?;
                    Some(json!({
                        "k": k,
                        "mu_O": serde_json::to_value(&g.value)?,
                        "best_unit": g.best_unit,
                        "non_finite_trials": g.non_finite_trials,
                        "e_tj": g.e_tj,
                        "agrees_with_e_tj": g.agrees_with_e_tj,
                        "warnings": g.warnings,
                    }))
                }
            };
            Ok((serde_json::to_value(&record)?, warnings, ext))
        },
    )?;

    for w in &warnings {
        eprintln!("warning: {w}");
    }

    match a.format.as_str() {
        "json" => {
            let mut env = envelope("invariants", config);
            env.insert("record".into(), record_json);
            if let Some(ext) = extension {
                env.insert("field_extension".into(), ext);
            }
            env.insert("warnings".into(), json!(warnings));
            emit_json(&a.out, &Value::Object(env))
        }
        "table" => {
            let obj = record_json
                .as_object()
                .expect("record serializes to an object");
            let mut lines = String::new();
            for (k, v) in obj {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                lines.push_str(&format!("{k} = {shown}\n"));
            }
            if let Some(ext) = extension {
                lines.push_str(&format!("field_extension = {ext}\n"));
            }
            emit(&a.out, &lines)
        }
        other => bail!("unsupported format {other:?} for invariants (json|table)"),
    }
}

// ---------------------------------------------------------------------------
// bound-table

fn cmd_bound_table(a: BoundTableArgs) -> anyhow::Result<()> {
    if a.n_max < 2 {
        bail!("bound-table needs N >= 2");
    }
    let ns: Vec<u32> = (2..=a.n_max).collect();
    let rows = hfun::bound_table(&ns)?;

    match a.format.as_str() {
        "csv" => {
            let mut out = csv_header("bound-table", &format!("n_max={}", a.n_max));
            out.push_str("n,bound,preview\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{}\n",
                    r.n,
                    format_rat(&r.bound),
                    format_rat_decimal(&r.bound, 6)
                ));
            }
            emit(&a.out, &out)
        }
        "json" => {
            let mut env = envelope("bound-table", json!({ "n_max": a.n_max }));
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "h_upper": format_rat(&r.h_hi),
                        "h_lower": format_rat(&r.h_lo),
                        "band": format_rat(&r.band),
                        "bound": format_rat(&r.bound),
                        "preview": format_rat_decimal(&r.bound, 6),
                    })
                })
                .collect();
            env.insert("rows".into(), json!(rows));
            emit_json(&a.out, &Value::Object(env))
        }
        "table" => {
            let mut out = String::from("n  bound        preview\n");
            for r in &rows {
                out.push_str(&format!(
                    "{:<2} {:<12} {}\n",
                    r.n,
                    format_rat(&r.bound),
                    format_rat_decimal(&r.bound, 6)
                ));
            }
            emit(&a.out, &out)
        }
        other => bail!("unsupported format {other:?} for bound-table (csv|json|table)"),
    }
}

// ---------------------------------------------------------------------------
// hfun

fn cmd_hfun(a: HfunArgs) -> anyhow::Result<()> {
    if a.d == 0 {
        bail!("hfun needs d >= 1");
    }
    let s = parse_rat(&a.s)?;
    let seed = a.seed.unwrap_or(0);

    // The primary exact value (or derivative when --deriv).
    let value = if a.deriv {
        hfun::h_prime(&s, a.d)?
    } else {
        hfun::h_value(&s, a.d)
    };

    let mc = a.mc.map(|samples| hfun::monte_carlo_h(&s, a.d, samples, seed));
    let fmax = if a.fmax {
        Some(hfun::fmax_check(a.d, a.grid)?)
    } else {
        None
    };

    match a.format.as_str() {
        "value" => {
            let mut out = format!("{}\n", format_rat(&value));
            if let Some(mc) = &mc {
                out.push_str(&format!(
                    "mc estimate={:.6} stderr={:.6} samples={} seed={}\n",
                    mc.estimate, mc.stderr, mc.samples, mc.seed
                ));
            }
            if let Some(f) = &fmax {
                out.push_str(&format!(
                    "fmax symmetric={} strictly_unimodal={} max_at_center={} center={} value={}\n",
                    f.symmetric,
                    f.strictly_unimodal,
                    f.max_at_center,
                    format_rat(&f.center),
                    format_rat(&f.center_value)
                ));
            }
            emit(&a.out, &out)
        }
        "json" => {
            let mut env = envelope(
                "hfun",
                json!({
                    "s": format_rat(&s),
                    "d": a.d,
                    "deriv": a.deriv,
                    "mc_samples": a.mc,
                    "seed": seed,
                    "fmax": a.fmax,
                    "grid": if a.fmax { Some(a.grid) } else { None },
                }),
            );
            env.insert(
                if a.deriv { "derivative" } else { "value" }.into(),
                json!(format_rat(&value)),
            );
            env.insert(
                "preview".into(),
                json!(format_rat_decimal(&value, 6)),
            );
            if let Some(mc) = &mc {
                env.insert(
                    "monte_carlo".into(),
                    json!({
                        "estimate": mc.estimate,
                        "stderr": mc.stderr,
                        "samples": mc.samples,
                        "seed": mc.seed,
                    }),
                );
            }
            if let Some(f) = &fmax {
                let values: Vec<Value> = f
                    .values
                    .iter()
                    .map(|(t, v)| json!([format_rat(t), format_rat(v)]))
                    .collect();
                env.insert(
                    "fmax".into(),
                    json!({
                        "n": f.n,
                        "grid": f.grid,
                        "center": format_rat(&f.center),
                        "center_value": format_rat(&f.center_value),
                        "symmetric": f.symmetric,
                        "strictly_unimodal": f.strictly_unimodal,
                        "max_at_center": f.max_at_center,
                        "values": values,
                    }),
                );
            }
            emit_json(&a.out, &Value::Object(env))
        }
        "table" => {
            let label = if a.deriv { "H'" } else { "H" };
            let mut out = format!(
                "{}_{}({}) = {} ({})\n",
                label,
                format_rat(&s),
                a.d,
                format_rat(&value),
                format_rat_decimal(&value, 6)
            );
            if let Some(mc) = &mc {
                out.push_str(&format!(
                    "monte carlo: {:.6} +/- {:.6} ({} samples, seed {})\n",
                    mc.estimate, mc.stderr, mc.samples, mc.seed
                ));
            }
            if let Some(f) = &fmax {
                out.push_str(&format!(
                    "fmax check at n={}: symmetric={} strictly_unimodal={} max_at_center={}\n",
                    f.n, f.symmetric, f.strictly_unimodal, f.max_at_center
                ));
            }
            emit(&a.out, &out)
        }
        other => bail!("unsupported format {other:?} for hfun (value|json|table)"),
    }
}

// ---------------------------------------------------------------------------
// hk

fn cmd_hk(a: HkArgs) -> anyhow::Result<()> {
    let opts = build_opts(a.budget, a.nmax, None, None, None);
    let ring = prime_ring(&a.ring)?;
    let ideal = Ideal::parse(&ring, &a.ideal)?;
    let e_max = a.emax.unwrap_or_else(|| default_e_max(ring.nvars()));
    let seq = hk_sequence(&ideal, e_max, &opts)?;

    let config = config_json(
        &opts,
        &[
            ("ring", json!(a.ring)),
            ("ideal", json!(a.ideal)),
            ("emax", json!(e_max)),
        ],
    );

    match a.format.as_str() {
        "json" => {
            let mut env = envelope("hk", config);
            let entries: Vec<Value> = seq
                .entries
                .iter()
                .map(|en| {
                    json!({
                        "e": en.e,
                        "q": en.q,
                        "colength": en.colength,
                        "normalized": format_rat(&en.normalized),
                        "normalized_preview": format_rat_decimal(&en.normalized, 6),
                    })
                })
                .collect();
            env.insert("p".into(), json!(seq.p));
            env.insert("nvars".into(), json!(seq.nvars));
            env.insert("entries".into(), json!(entries));
            emit_json(&a.out, &Value::Object(env))
        }
        "csv" => {
            let mut out = csv_header(
                "hk",
                &format!(
                    "ring={:?} ideal={:?} emax={} budget={}",
                    a.ring, a.ideal, e_max, opts.groebner.max_reduction_steps
                ),
            );
            out.push_str("e,q,colength,normalized\n");
            for en in &seq.entries {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    en.e,
                    en.q,
                    en.colength,
                    format_rat(&en.normalized)
                ));
            }
            emit(&a.out, &out)
        }
        "table" => {
            let mut out = String::from("e  q      colength  normalized\n");
            for en in &seq.entries {
                out.push_str(&format!(
                    "{:<2} {:<6} {:<9} {}\n",
                    en.e,
                    en.q,
                    en.colength,
                    format_rat(&en.normalized)
                ));
            }
            emit(&a.out, &out)
        }
        other => bail!("unsupported format {other:?} for hk (json|csv|table)"),
    }
}

// ---------------------------------------------------------------------------
// hs

fn cmd_hs(a: HsArgs) -> anyhow::Result<()> {
    let opts = build_opts(a.budget, a.nmax, None, None, None);
    let s = parse_rat(&a.s)?;
    if s <= Rat::from_integer(0.into()) {
        bail!("hs needs s > 0");
    }
    let ring = prime_ring(&a.ring)?;
    let i = Ideal::parse(&ring, &a.ideal)?;
    let j = match &a.j {
        Some(text) => Ideal::parse(&ring, text)?,
        None => i.clone(),
    };
    let levels: Vec<u32> = match (a.e, a.emax) {
        (Some(e), None) => vec![e],
        (None, Some(emax)) => (1..=emax).collect(),
        (None, None) => (1..=default_e_max(ring.nvars())).collect(),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    if levels.is_empty() || levels.contains(&0) {
        bail!("hs needs Frobenius levels e >= 1");
    }

    struct Row {
        level: mutau_core::HsLevel,
        e_s: Option<Rat>,
        thresholds: Option<mutau_core::Thresholds>,
    }
    let mut rows = Vec::new();
    for &e in &levels {
        let level = h_s_level(&i, &j, &s, e, &opts)?;
        let e_s = if a.es {
            Some(e_s_level(&i, &j, &s, e, &opts)?)
        } else {
            None
        };
        let thresholds = if a.thresholds {
            Some(threshold_levels(&i, &j, e, &opts)?)
        } else {
            None
        };
        rows.push(Row {
            level,
            e_s,
            thresholds,
        });
    }

    let config = config_json(
        &opts,
        &[
            ("ring", json!(a.ring)),
            ("ideal", json!(a.ideal)),
            ("j", json!(a.j)),
            ("s", json!(format_rat(&s))),
            ("levels", json!(levels)),
            ("es", json!(a.es)),
            ("thresholds", json!(a.thresholds)),
        ],
    );

    match a.format.as_str() {
        "json" => {
            let mut env = envelope("hs", config);
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut m = serde_json::Map::new();
                    m.insert("e".into(), json!(r.level.e));
                    m.insert("q".into(), json!(r.level.q));
                    m.insert("ceil_sq".into(), json!(r.level.ceil_sq));
                    m.insert("colength".into(), json!(r.level.colength));
                    m.insert("value".into(), json!(format_rat(&r.level.value)));
                    m.insert(
                        "value_preview".into(),
                        json!(format_rat_decimal(&r.level.value, 6)),
                    );
                    if let Some(es) = &r.e_s {
                        m.insert("e_s".into(), json!(format_rat(es)));
                    }
                    if let Some(t) = &r.thresholds {
                        m.insert("nu".into(), json!(t.nu));
                        m.insert("mu".into(), json!(t.mu));
                    }
                    Value::Object(m)
                })
                .collect();
            env.insert("levels".into(), json!(rows));
            emit_json(&a.out, &Value::Object(env))
        }
        "csv" => {
            let mut out = csv_header(
                "hs",
                &format!(
                    "ring={:?} ideal={:?} j={:?} s={} budget={}",
                    a.ring,
                    a.ideal,
                    a.j.as_deref().unwrap_or("<same as ideal>"),
                    format_rat(&s),
                    opts.groebner.max_reduction_steps
                ),
            );
            let mut header = String::from("e,q,ceil_sq,colength,value");
            if a.es {
                header.push_str(",e_s");
            }
            if a.thresholds {
                header.push_str(",nu,mu");
            }
            out.push_str(&header);
            out.push('\n');
            for r in &rows {
                let mut line = format!(
                    "{},{},{},{},{}",
                    r.level.e,
                    r.level.q,
                    r.level.ceil_sq,
                    r.level.colength,
                    format_rat(&r.level.value)
                );
                if let Some(es) = &r.e_s {
                    line.push_str(&format!(",{}", format_rat(es)));
                }
                if let Some(t) = &r.thresholds {
                    line.push_str(&format!(",{},{}", t.nu, t.mu));
                }
                out.push_str(&line);
                out.push('\n');
            }
            emit(&a.out, &out)
        }
        "table" => {
            let mut out = String::from("e  q      ceil(sq)  colength  value\n");
            for r in &rows {
                out.push_str(&format!(
                    "{:<2} {:<6} {:<9} {:<9} {}",
                    r.level.e,
                    r.level.q,
                    r.level.ceil_sq,
                    r.level.colength,
                    format_rat(&r.level.value)
                ));
                if let Some(es) = &r.e_s {
                    out.push_str(&format!("  e_s={}", format_rat(es)));
                }
                if let Some(t) = &r.thresholds {
                    out.push_str(&format!("  nu={} mu={}", t.nu, t.mu));
                }
                out.push('\n');
            }
            emit(&a.out, &out)
        }
        other => bail!("unsupported format {other:?} for hs (json|csv|table)"),
    }
}

// ---------------------------------------------------------------------------
// family

fn cmd_family(a: FamilyArgs) -> anyhow::Result<()> {
    const NAMES: [&str; 6] = ["x", "y", "z", "w", "v", "u"];
    if !(2..=6).contains(&(a.d as usize)) {
        bail!("family supports 2..=6 variables");
    }
    let opts = build_opts(a.budget, a.nmax, None, Some(a.seed), None);
    let ring = Ring::new(mutau_core::Rationals, &NAMES[..a.d as usize])?;
    let report = tau_min_experiment(&ring, a.n, a.trials, a.seed, a.degree_cap, &opts)?;

    for w in &report.warnings {
        eprintln!("warning: {w}");
    }

    let rat_opt = |r: &Option<Rat>| r.as_ref().map(format_rat);
    let summary = json!({
        "n": report.n,
        "d": report.d,
        "seed": report.seed,
        "degree_cap": report.degree_cap,
        "tau_min": report.tau_min,
        "mu": report.mu,
        "ratio": rat_opt(&report.ratio),
        "tau_min_normalized": rat_opt(&report.tau_min_normalized),
        "target": format_rat(&report.target),
        "bound": format_rat(&report.bound),
        "relative_gap": rat_opt(&report.relative_gap),
        "bound_satisfied": report.bound_satisfied,
        "warnings": report.warnings,
    });

    match a.format.as_str() {
        "csv" => {
            let mut out = csv_header(
                "family",
                &format!(
                    "n={} d={} trials={} seed={} degree_cap={} budget={}",
                    report.n,
                    report.d,
                    a.trials,
                    report.seed,
                    report.degree_cap,
                    opts.groebner.max_reduction_steps
                ),
            );
            out.push_str("trial,seed,n,d,tau,mu,ratio\n");
            for t in &report.trials {
                let cell = |v: &Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    t.trial,
                    t.seed,
                    report.n,
                    report.d,
                    cell(&t.tau),
                    cell(&t.mu),
                    t.ratio.as_ref().map(format_rat).unwrap_or_default()
                ));
            }
            for t in &report.trials {
                if let Some(err) = &t.error {
                    out.push_str(&format!("# trial {} error: {}\n", t.trial, err));
                }
                for flag in &t.flags {
                    out.push_str(&format!("# trial {} flag: {}\n", t.trial, flag));
                }
            }
            out.push_str(&format!("# summary: {summary}\n"));
            emit(&a.out, &out)
        }
        "json" => {
            let config = config_json(
                &opts,
                &[
                    ("n", json!(a.n)),
                    ("d", json!(a.d)),
                    ("trials", json!(a.trials)),
                    ("seed", json!(a.seed)),
                    ("degree_cap", json!(report.degree_cap)),
                ],
            );
            let mut env = envelope("family", config);
            let rows: Vec<Value> = report
                .trials
                .iter()
                .map(|t| {
                    json!({
                        "trial": t.trial,
                        "seed": t.seed,
                        "n": report.n,
                        "d": report.d,
                        "tau": t.tau,
                        "mu": t.mu,
                        "ratio": t.ratio.as_ref().map(format_rat),
                        "error": t.error,
                        "flags": t.flags,
                    })
                })
                .collect();
            env.insert("trials".into(), json!(rows));
            env.insert("summary".into(), summary);
            emit_json(&a.out, &Value::Object(env))
        }
        other => bail!("unsupported format {other:?} for family (csv|json)"),
    }
}

// ---------------------------------------------------------------------------
// conjectures

fn cmd_conjectures(a: ConjecturesArgs) -> anyhow::Result<()> {
    let mut opts = build_opts(a.budget, a.nmax, a.trials, Some(a.seed), a.ebs_cap);
    opts.seed = a.seed;
    let (source, text) = match &a.corpus {
        Some(path) => (
            json!(path.display().to_string()),
            std::fs::read_to_string(path)
                .with_context(|| format!("cannot read corpus {}", path.display()))?,
        ),
        None => (json!("builtin"), builtin_corpus(a.seed)),
    };
    let report = corpus_run_text(&text, &opts)?;

    match a.format.as_str() {
        "json" => {
            let config = config_json(
                &opts,
                &[
                    ("source", source),
                    ("seed", json!(a.seed)),
                    ("trials", json!(opts.trials)),
                    ("ebs_cap", json!(opts.ebs_cap)),
                ],
            );
            let mut env = envelope("conjectures", config);
            env.insert("report".into(), serde_json::to_value(&report)?);
            emit_json(&a.out, &Value::Object(env))
        }
        "table" => {
            let s = &report.summary;
            let mut out = String::new();
            for line in report.header.lines() {
                out.push_str(&format!("# {line}\n"));
            }
            out.push_str(&format!(
                "instances={} ok={} errors={} contained={} char0_contained={} bound_violations={}\n",
                s.instances,
                s.ok,
                s.errors,
                s.contained_candidates,
                s.char_zero_contained_candidates,
                s.bound_violations
            ));
            for r in &report.records {
                if r.violation_candidate {
                    out.push_str(&format!(
                        "candidate [{}] {} over {}\n",
                        r.index, r.f, r.ring
                    ));
                }
                if let Some(err) = &r.error {
                    out.push_str(&format!("error [{}] {}: {}\n", r.index, r.f, err));
                }
            }
            emit(&a.out, &out)
        }
        other => bail!("unsupported format {other:?} for conjectures (json|table)"),
    }
}
