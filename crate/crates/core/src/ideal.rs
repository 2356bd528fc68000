//! Ideals with cached Groebner bases and the classical operations.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{exact_divide, groebner_basis, GroebnerBasis, GroebnerConfig};
use crate::local::LocalOutcome;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::parse::parse_polynomial_list;
use crate::poly::Polynomial;
use crate::ring::Ring;

/// An ideal of the polynomial ring, given by generators. Groebner bases and
/// the certified local data are computed on demand and cached per ideal.
pub struct Ideal<F: Field> {
    ring: Ring<F>,
    gens: Vec<Polynomial<F>>,
    gb_cache: Mutex<BTreeMap<MonomialOrder, Arc<GroebnerBasis<F>>>>,
    local_cache: Mutex<Option<LocalOutcome<F>>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            gb_cache: Mutex::new(self.gb_cache.lock().unwrap().clone()),
            local_cache: Mutex::new(self.local_cache.lock().unwrap().clone()),
        }
    }
}

impl<F: Field> std::fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "Ideal({})", gens.join(", "))
    }
}

impl<F: Field> Ideal<F> {
    /// Build an ideal from generators; zero generators are dropped.
    pub fn new(ring: &Ring<F>, gens: Vec<Polynomial<F>>) -> Result<Self> {
        for g in &gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
        }
        let gens: Vec<Polynomial<F>> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal {
            ring: ring.clone(),
            gens,
            gb_cache: Mutex::new(BTreeMap::new()),
            local_cache: Mutex::new(None),
        })
    }

    /// Parse a comma-separated generator list.
    pub fn parse(ring: &Ring<F>, src: &str) -> Result<Self> {
        Ideal::new(ring, parse_polynomial_list(ring, src)?)
    }

    pub fn zero(ring: &Ring<F>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: Vec::new(),
            gb_cache: Mutex::new(BTreeMap::new()),
            local_cache: Mutex::new(None),
        }
    }

    /// The maximal ideal (x_1, ..., x_n) at the origin.
    pub fn maximal(ring: &Ring<F>) -> Self {
        let gens = (0..ring.nvars())
            .map(|i| Polynomial::var(ring, i).expect("index in range"))
            .collect();
        Ideal::new(ring, gens).expect("same ring")
    }

    /// Generators of m^k: all monomials of total degree k.
    pub fn m_power_gens(ring: &Ring<F>, k: u32) -> Vec<Polynomial<F>> {
        Monomial::all_of_degree(ring.nvars(), k)
            .into_iter()
            .map(|m| Polynomial::term(ring, m, ring.field().one()))
            .collect()
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// True when every generator is a single term.
    pub fn is_monomial(&self) -> bool {
        self.gens.iter().all(|g| g.num_terms() == 1)
    }

    /// For a monomial ideal, its minimal monomial generators.
    pub fn monomial_min_gens(&self) -> Option<Vec<Monomial>> {
        if !self.is_monomial() {
            return None;
        }
        let monos: Vec<Monomial> = self
            .gens
            .iter()
            .map(|g| g.as_monomial().expect("single term").0.clone())
            .collect();
        let mut uniq: Vec<Monomial> = Vec::new();
        for m in monos {
            if !uniq.contains(&m) {
                uniq.push(m);
            }
        }
        let mut min: Vec<Monomial> = uniq
            .iter()
            .filter(|m| !uniq.iter().any(|o| o != *m && o.divides(m)))
            .cloned()
            .collect();
        min.sort();
        Some(min)
    }

    /// Reduced Groebner basis under `order`, cached.
    pub fn groebner(
        &self,
        order: &MonomialOrder,
        cfg: &GroebnerConfig,
    ) -> Result<Arc<GroebnerBasis<F>>> {
        if let Some(gb) = self.gb_cache.lock().unwrap().get(order) {
            return Ok(gb.clone());
        }
        let gb = Arc::new(groebner_basis(&self.ring, &self.gens, order, cfg)?);
        self.gb_cache
            .lock()
            .unwrap()
            .insert(order.clone(), gb.clone());
        Ok(gb)
    }

    pub fn groebner_degrevlex(&self, cfg: &GroebnerConfig) -> Result<Arc<GroebnerBasis<F>>> {
        self.groebner(&MonomialOrder::DegRevLex, cfg)
    }

    pub(crate) fn local_cache(&self) -> &Mutex<Option<LocalOutcome<F>>> {
        &self.local_cache
    }

    /// Global ideal membership.
    pub fn contains_global(&self, f: &Polynomial<F>, cfg: &GroebnerConfig) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        if self.is_zero() {
            return Ok(false);
        }
        self.groebner_degrevlex(cfg)?.contains(f, cfg)
    }

    pub fn contains_ideal_global(&self, other: &Ideal<F>, cfg: &GroebnerConfig) -> Result<bool> {
        for g in &other.gens {
            if !self.contains_global(g, cfg)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals_global(&self, other: &Ideal<F>, cfg: &GroebnerConfig) -> Result<bool> {
        Ok(self.contains_ideal_global(other, cfg)? && other.contains_ideal_global(self, cfg)?)
    }

    /// I + J.
    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    /// I * J, generated by the pairwise products.
    pub fn product(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.checked_mul(b)?);
            }
        }
        dedupe(&mut gens);
        Ideal::new(&self.ring, gens)
    }

    /// I^k, generated by k-fold products of the generators. k = 0 gives the
    /// unit ideal.
    pub fn power(&self, k: u32) -> Result<Ideal<F>> {
        if k == 0 {
            let one = Polynomial::constant(&self.ring, self.ring.field().one());
            return Ideal::new(&self.ring, vec![one]);
        }
        if self.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let mut gens = Vec::new();
        for combo in (0..self.gens.len()).combinations_with_replacement(k as usize) {
            let mut p = self.gens[combo[0]].clone();
            for &i in &combo[1..] {
                p = p.checked_mul(&self.gens[i])?;
            }
            gens.push(p);
        }
        dedupe(&mut gens);
        Ideal::new(&self.ring, gens)
    }

    /// I intersect J, through the auxiliary-variable elimination
    /// t*I + (1-t)*J.
    pub fn intersection(&self, other: &Ideal<F>, cfg: &GroebnerConfig) -> Result<Ideal<F>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let ext = self.ring.extended();
        let n = self.ring.nvars();
        let t = Polynomial::var(&ext, n).expect("aux var");
        let one = Polynomial::constant(&ext, ext.field().one());
        let one_minus_t = one.checked_sub(&t)?;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(t.checked_mul(&extend_poly(g, &ext))?);
        }
        for g in &other.gens {
            gens.push(one_minus_t.checked_mul(&extend_poly(g, &ext))?);
        }
        let order = MonomialOrder::BlockElim { front: vec![n] };
        let gb = groebner_basis(&ext, &gens, &order, cfg)?;
        let kept: Vec<Polynomial<F>> = gb
            .elements()
            .into_iter()
            .filter(|p| p.terms().all(|(m, _)| m.exponent(n) == 0))
            .map(|p| project_poly(&p, &self.ring))
            .collect();
        Ideal::new(&self.ring, kept)
    }

    /// The colon ideal (I : f) = { g : g f in I }, via (I cap (f)) / f.
    pub fn colon_poly(&self, f: &Polynomial<F>, cfg: &GroebnerConfig) -> Result<Ideal<F>> {
        if f.is_zero() {
            return Err(Error::DegenerateInput("colon by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let fideal = Ideal::new(&self.ring, vec![f.clone()])?;
        let inter = self.intersection(&fideal, cfg)?;
        let mut gens = Vec::new();
        for g in inter.gens() {
            gens.push(exact_divide(g, f)?);
        }
        Ideal::new(&self.ring, gens)
    }

    /// Largest total degree among the generators (0 for the zero ideal).
    pub fn max_gen_degree(&self) -> u64 {
        self.gens
            .iter()
            .map(|g| g.total_degree().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

fn dedupe<F: Field>(gens: &mut Vec<Polynomial<F>>) {
    gens.sort_by(|a, b| a.storage_cmp(b));
    gens.dedup();
}

/// Reinterpret p in the ring with one extra (last) variable.
fn extend_poly<F: Field>(p: &Polynomial<F>, ext: &Ring<F>) -> Polynomial<F> {
    let terms = p
        .terms()
        .map(|(m, c)| (m.extend_one(0), c.clone()))
        .collect();
    Polynomial::from_terms(ext, terms)
}

/// Drop the last variable of p; all its exponents must be zero.
fn project_poly<F: Field>(p: &Polynomial<F>, base: &Ring<F>) -> Polynomial<F> {
    let terms = p
        .terms()
        .map(|(m, c)| (m.project_last(), c.clone()))
        .collect();
    Polynomial::from_terms(base, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::parse::parse_polynomial;
    use crate::ring::rational_ring;

    fn q2() -> Ring<Rationals> {
        rational_ring("char=0; vars=x,y").unwrap()
    }

    #[test]
    fn groebner_bases_are_cached() {
        let r = q2();
        let i = Ideal::parse(&r, "x^2+y, x*y").unwrap();
        let cfg = GroebnerConfig::default();
        let a = i.groebner_degrevlex(&cfg).unwrap();
        let b = i.groebner_degrevlex(&cfg).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn monomial_detection_and_min_gens() {
        let r = q2();
        let i = Ideal::parse(&r, "x^2, x^3, x*y, y^4, x^2*y^4").unwrap();
        let min = i.monomial_min_gens().unwrap();
        let strs: Vec<String> = min.iter().map(|m| format!("{:?}", m.exponents())).collect();
        assert_eq!(strs, vec!["[0, 4]", "[1, 1]", "[2, 0]"]);
        let j = Ideal::parse(&r, "x^2 + y").unwrap();
        assert!(j.monomial_min_gens().is_none());
    }

    #[test]
    fn sum_product_power() {
        let r = q2();
        let i = Ideal::parse(&r, "x").unwrap();
        let j = Ideal::parse(&r, "y").unwrap();
        let cfg = GroebnerConfig::default();
        let s = i.sum(&j).unwrap();
        assert!(s
            .contains_global(&parse_polynomial(&r, "3*x - 7*y").unwrap(), &cfg)
            .unwrap());
        let p = i.product(&j).unwrap();
        assert!(p
            .contains_global(&parse_polynomial(&r, "x*y").unwrap(), &cfg)
            .unwrap());
        assert!(!p
            .contains_global(&parse_polynomial(&r, "x").unwrap(), &cfg)
            .unwrap());
        let m = Ideal::maximal(&r);
        let m3 = m.power(3).unwrap();
        // (x,y)^3 = (x^3, x^2 y, x y^2, y^3).
        assert_eq!(m3.gens().len(), 4);
        assert!(m3
            .contains_global(&parse_polynomial(&r, "x^2*y - y^3").unwrap(), &cfg)
            .unwrap());
        assert!(!m3
            .contains_global(&parse_polynomial(&r, "x^2").unwrap(), &cfg)
            .unwrap());
        let unit = m.power(0).unwrap();
        assert!(unit
            .contains_global(&parse_polynomial(&r, "1").unwrap(), &cfg)
            .unwrap());
    }

    #[test]
    fn intersection_of_principal_ideals_is_lcm() {
        let r = q2();
        let cfg = GroebnerConfig::default();
        let i = Ideal::parse(&r, "x^2*y").unwrap();
        let j = Ideal::parse(&r, "x*y^3").unwrap();
        let inter = i.intersection(&j, &cfg).unwrap();
        let expect = Ideal::parse(&r, "x^2*y^3").unwrap();
        assert!(inter.equals_global(&expect, &cfg).unwrap());

        // (x) cap (x + 1) = (x^2 + x): coprime principal ideals multiply.
        let a = Ideal::parse(&r, "x").unwrap();
        let b = Ideal::parse(&r, "x + 1").unwrap();
        let inter = a.intersection(&b, &cfg).unwrap();
        let expect = Ideal::parse(&r, "x^2 + x").unwrap();
        assert!(inter.equals_global(&expect, &cfg).unwrap());
    }

    #[test]
    fn colon_recovers_cofactor() {
        let r = q2();
        let cfg = GroebnerConfig::default();
        // ((x^2 y, x y^2) : x) = (x y, y^2).
        let i = Ideal::parse(&r, "x^2*y, x*y^2").unwrap();
        let x = parse_polynomial(&r, "x").unwrap();
        let colon = i.colon_poly(&x, &cfg).unwrap();
        let expect = Ideal::parse(&r, "x*y, y^2").unwrap();
        assert!(colon.equals_global(&expect, &cfg).unwrap());

        // ((f g) : f) = (g) for a nontrivial pair.
        let f = parse_polynomial(&r, "x^2 + y^3").unwrap();
        let g = parse_polynomial(&r, "x - y + 1").unwrap();
        let prod = Ideal::new(&r, vec![f.checked_mul(&g).unwrap()]).unwrap();
        let colon = prod.colon_poly(&f, &cfg).unwrap();
        let expect = Ideal::new(&r, vec![g]).unwrap();
        assert!(colon.equals_global(&expect, &cfg).unwrap());
    }

    #[test]
    fn zero_and_unit_edge_cases() {
        let r = q2();
        let cfg = GroebnerConfig::default();
        let z = Ideal::zero(&r);
        assert!(z.is_zero());
        assert!(!z
            .contains_global(&parse_polynomial(&r, "x").unwrap(), &cfg)
            .unwrap());
        assert!(z
            .contains_global(&Polynomial::zero(&r), &cfg)
            .unwrap());
        let m = Ideal::maximal(&r);
        assert!(z.intersection(&m, &cfg).unwrap().is_zero());
        assert_eq!(m.power(2).unwrap().max_gen_degree(), 2);
    }
}
