//! Polynomial ring contexts and ring-spec strings.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};

#[derive(Debug)]
struct RingInner<F: Field> {
    field: F,
    vars: Vec<String>,
}

/// The polynomial ring K[x_1, ..., x_n]: a scalar field plus named
/// variables. Cheap to clone; equality is structural.
#[derive(Debug)]
pub struct Ring<F: Field> {
    inner: Arc<RingInner<F>>,
}

impl<F: Field> Clone for Ring<F> {
    fn clone(&self) -> Self {
        Ring {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<F: Field> PartialEq for Ring<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.field == other.inner.field && self.inner.vars == other.inner.vars)
    }
}

impl<F: Field> Eq for Ring<F> {}

fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl<F: Field> Ring<F> {
    pub fn new(field: F, vars: &[&str]) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::RingSpec("at least one variable required".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in vars {
            if !valid_var_name(v) {
                return Err(Error::RingSpec(format!("invalid variable name `{v}`")));
            }
            if !seen.insert(*v) {
                return Err(Error::RingSpec(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring {
            inner: Arc::new(RingInner {
                field,
                vars: vars.iter().map(|s| s.to_string()).collect(),
            }),
        })
    }

    pub fn field(&self) -> &F {
        &self.inner.field
    }

    pub fn nvars(&self) -> usize {
        self.inner.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.inner.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.inner.vars.iter().position(|v| v == name)
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.field.characteristic()
    }

    /// Canonical ring-spec string, e.g. `char=0; vars=x,y`.
    pub fn spec_string(&self) -> String {
        format!(
            "char={}; vars={}",
            self.characteristic(),
            self.inner.vars.join(",")
        )
    }

    /// Same field, variables extended by one fresh name (for elimination).
    pub fn extended(&self) -> Ring<F> {
        let mut name = String::from("t");
        let mut i = 0u32;
        while self.var_index(&name).is_some() {
            name = format!("t{i}");
            i += 1;
        }
        let mut vars: Vec<&str> = self.inner.vars.iter().map(|s| s.as_str()).collect();
        vars.push(&name);
        Ring::new(self.inner.field.clone(), &vars).expect("extension of a valid ring is valid")
    }
}

impl<F: Field> fmt::Display for Ring<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec_string())
    }
}

/// Scalar field named by a ring-spec string: `char=0` or `char=p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

/// Parse `char=<c>; vars=<name>,<name>,...`.
pub fn parse_ring_spec(spec: &str) -> Result<(FieldSpec, Vec<String>)> {
    let mut char_part: Option<&str> = None;
    let mut vars_part: Option<&str> = None;
    for piece in spec.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (key, value) = piece
            .split_once('=')
            .ok_or_else(|| Error::RingSpec(format!("expected key=value, got `{piece}`")))?;
        match key.trim() {
            "char" => char_part = Some(value.trim()),
            "vars" => vars_part = Some(value.trim()),
            other => return Err(Error::RingSpec(format!("unknown key `{other}`"))),
        }
    }
    let char_part = char_part.ok_or_else(|| Error::RingSpec("missing `char=`".into()))?;
    let vars_part = vars_part.ok_or_else(|| Error::RingSpec("missing `vars=`".into()))?;
    let c: u64 = char_part
        .parse()
        .map_err(|_| Error::RingSpec(format!("invalid characteristic `{char_part}`")))?;
    let field = if c == 0 {
        FieldSpec::Rationals
    } else {
        // Primality is validated by PrimeField::new; reject here for a
        // uniform error out of spec parsing as well.
        if !crate::field::is_prime(c) {
            return Err(Error::NonPrimeCharacteristic(c));
        }
        FieldSpec::Prime(c)
    };
    let vars: Vec<String> = vars_part
        .split(',')
        .map(|v| v.trim().to_string())
        .collect();
    if vars.iter().any(|v| v.is_empty()) {
        return Err(Error::RingSpec("empty variable name".into()));
    }
    Ok((field, vars))
}

/// Build the rational ring named by a spec; fails if the spec names F_p.
pub fn rational_ring(spec: &str) -> Result<Ring<Rationals>> {
    let (field, vars) = parse_ring_spec(spec)?;
    match field {
        FieldSpec::Rationals => {
            let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            Ring::new(Rationals, &refs)
        }
        FieldSpec::Prime(p) => Err(Error::RingSpec(format!(
            "expected char=0, spec names char={p}"
        ))),
    }
}

/// Build the prime-field ring named by a spec; fails if the spec names Q.
pub fn prime_ring(spec: &str) -> Result<Ring<PrimeField>> {
    let (field, vars) = parse_ring_spec(spec)?;
    match field {
        FieldSpec::Prime(p) => {
            let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            Ring::new(PrimeField::new(p)?, &refs)
        }
        FieldSpec::Rationals => Err(Error::RingSpec("expected char=p, spec names char=0".into())),
    }
}
