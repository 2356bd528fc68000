//! Sparse multivariate polynomials over a [`Field`] context.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Exp, Monomial};
use crate::order::MonomialOrder;
use crate::ring::Ring;

/// A polynomial as a sparse term map. Storage is ordering-agnostic (keys in
/// the canonical storage order); Groebner computations impose their own
/// monomial order when they sort terms. Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct Polynomial<F: Field> {
    ring: Ring<F>,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Ring<F>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring<F>, c: F::Elem) -> Self {
        let mut p = Self::zero(ring);
        if !ring.field().is_zero(&c) {
            p.terms.insert(Monomial::one(ring.nvars()), c);
        }
        p
    }

    pub fn one(ring: &Ring<F>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Ring<F>, i: usize) -> Result<Self> {
        if i >= ring.nvars() {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: ring.nvars(),
            });
        }
        Ok(Self::term(
            ring,
            Monomial::var(i, ring.nvars()),
            ring.field().one(),
        ))
    }

    pub fn term(ring: &Ring<F>, m: Monomial, c: F::Elem) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity mismatch");
        let mut p = Self::zero(ring);
        if !ring.field().is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(ring: &Ring<F>, terms: Vec<(Monomial, F::Elem)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    /// Single term as (monomial, coefficient) when the polynomial is one.
    pub fn as_monomial(&self) -> Option<(&Monomial, &F::Elem)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&F::Elem> {
        self.terms.get(m)
    }

    pub fn constant_term(&self) -> F::Elem {
        self.terms
            .get(&Monomial::one(self.ring.nvars()))
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    /// Largest total degree among terms; None for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Smallest total degree among terms (the order of vanishing at 0).
    pub fn min_total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).min()
    }

    /// True when every term has total degree >= 2.
    pub fn in_m_squared(&self) -> bool {
        self.min_total_degree().map_or(true, |d| d >= 2)
    }

    /// A unit of the local ring K[[x]]: nonzero constant term.
    pub fn is_local_unit(&self) -> bool {
        !self.field().is_zero(&self.constant_term())
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field().is_zero(&c) {
            return;
        }
        let field = self.ring.field().clone();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(e.get(), &c);
                if field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        let field = self.field().clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), field.neg(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let field = self.field().clone();
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let field = self.field().clone();
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), field.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let field = self.field().clone();
        let mut out = Self::zero(&self.ring);
        if field.is_zero(c) {
            return out;
        }
        for (m, k) in &self.terms {
            out.add_term(m.clone(), field.mul(k, c));
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let field = self.field().clone();
        let mut out = Self::zero(&self.ring);
        if field.is_zero(c) {
            return out;
        }
        for (mm, k) in &self.terms {
            out.terms.insert(mm.mul(m), field.mul(k, c));
        }
        out
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same ring");
            }
            base = base.checked_mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    /// Formal partial derivative with respect to variable i. In positive
    /// characteristic the exponent multiplies inside F, so p-th power terms
    /// differentiate to zero.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.ring.nvars() {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.ring.nvars(),
            });
        }
        let field = self.field().clone();
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let factor = field.from_int(e as i64);
            let coeff = field.mul(c, &factor);
            if field.is_zero(&coeff) {
                continue;
            }
            let mut exps: Vec<Exp> = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::from_exps(&exps), coeff);
        }
        Ok(out)
    }

    /// Map into another ring (same number of variables) through a scalar map.
    pub fn map_scalars<G: Field>(
        &self,
        target: &Ring<G>,
        f: impl Fn(&F::Elem) -> G::Elem,
    ) -> Polynomial<G> {
        assert_eq!(self.ring.nvars(), target.nvars(), "variable count mismatch");
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Terms sorted descending under `order` (leading term first).
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, F::Elem)> {
        let mut v: Vec<(Monomial, F::Elem)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Option<Monomial> {
        self.terms
            .keys()
            .max_by(|a, b| order.cmp(a, b))
            .cloned()
    }

    /// Drop all terms of total degree >= bound.
    pub fn truncated(&self, bound: u64) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.total_degree() < bound {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Deterministic total order on term data (for dedup and sorting;
    /// unrelated to any monomial order).
    pub fn storage_cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a: Vec<_> = self.terms.iter().collect();
        let b: Vec<_> = other.terms.iter().collect();
        a.cmp(&b)
    }
}

fn format_monomial(vars: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, name) in vars.iter().enumerate() {
        match m.exponent(i) {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl<F: Field> fmt::Display for Polynomial<F> {
    /// Prints terms in descending DegRevLex order; output reparses to the
    /// same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = self.field();
        let one = field.one();
        let minus_one = field.neg(&one);
        let mut first = true;
        for (m, c) in self.sorted_terms(&MonomialOrder::DegRevLex) {
            let cs = field.format(&c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if c == one || (neg && c == minus_one) {
                write!(f, "{}", format_monomial(self.ring.vars(), &m))?;
            } else {
                write!(f, "{}*{}", mag, format_monomial(self.ring.vars(), &m))?;
            }
        }
        Ok(())
    }
}
