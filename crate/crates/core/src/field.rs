//! Scalar fields as context objects.
//!
//! A [`Field`] value is the field of scalars itself (Q, F_p or F_{p^k});
//! elements are plain data manipulated through the context. Carrying the
//! modulus in the context is what lets the polynomial and Groebner layers
//! stay generic while F_p keeps a runtime characteristic.

use std::fmt::Debug;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Exact rational scalar: always reduced, denominator positive.
pub type Rat = BigRational;

/// A field of scalars, used as an explicit context for element arithmetic.
pub trait Field: Clone + Eq + Debug + Send + Sync + 'static {
    type Elem: Clone + Eq + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse of a nonzero element. Panics on zero; every
    /// caller in the kernel guards with [`Field::is_zero`] first.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    /// Image of an integer under the canonical map Z -> K.
    fn from_int(&self, k: i64) -> Self::Elem;

    /// Image of num/den; fails when den maps to zero (char p divides den).
    fn from_big_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem>;

    /// 0 for Q, p for F_p and its extensions.
    fn characteristic(&self) -> u64;

    /// Number of elements for a finite field, None for Q.
    fn size(&self) -> Option<u64>;

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Uniform random element for finite fields; a bounded random integer
    /// for Q (genericity source for unit and deformation coefficients).
    fn sample<R: Rng>(&self, rng: &mut R) -> Self::Elem;

    fn format(&self, a: &Self::Elem) -> String;
}

/// Rejection-sample a nonzero element.
pub fn sample_nonzero<F: Field, R: Rng>(field: &F, rng: &mut R) -> F::Elem {
    loop {
        let x = field.sample(rng);
        if !field.is_zero(&x) {
            return x;
        }
    }
}

/// The rational numbers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn inv(&self, a: &Rat) -> Rat {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_int(&self, k: i64) -> Rat {
        Rat::from_integer(BigInt::from(k))
    }
    fn from_big_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Rat> {
        if den.is_zero() {
            return Err(Error::DegenerateInput("zero denominator".into()));
        }
        Ok(Rat::new(num.clone(), den.clone()))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn size(&self) -> Option<u64> {
        None
    }
    fn sample<R: Rng>(&self, rng: &mut R) -> Rat {
        self.from_int(rng.random_range(-999..=999))
    }
    fn format(&self, a: &Rat) -> String {
        a.to_string()
    }
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let pow_mod = |base: u64, mut e: u64| -> u64 {
        let m = n as u128;
        let mut acc: u128 = 1;
        let mut b = base as u128 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc as u64
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The prime field F_p with runtime modulus. Elements are residues in [0, p).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + (self.p - *b) as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow_u64(a, self.p - 2)
    }
    fn from_int(&self, k: i64) -> u64 {
        let p = self.p as i128;
        (((k as i128 % p) + p) % p) as u64
    }
    fn from_big_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u64> {
        let p = BigInt::from(self.p);
        let red = |x: &BigInt| -> u64 {
            let mut r = x % &p;
            if r.is_negative() {
                r += &p;
            }
            r.to_u64().expect("residue fits u64")
        };
        let d = red(den);
        if d == 0 {
            return Err(Error::NonInvertibleCoefficient { p: self.p });
        }
        Ok(self.mul(&red(num), &self.inv(&d)))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn size(&self) -> Option<u64> {
        Some(self.p)
    }
    fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// The field F_{p^k}, presented as F_p[g]/(modulus) for a root-free monic
/// modulus of degree k. Supported degrees are 2 and 3, where having no root
/// in F_p already certifies irreducibility; that is all the unit-sampling
/// escalation in `invariants` ever needs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtField {
    base: PrimeField,
    k: u32,
    /// Coefficients of the monic modulus, degree 0..=k (last entry 1).
    modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let base = PrimeField::new(p)?;
        if !(2..=3).contains(&k) {
            return Err(Error::UnsupportedExtensionDegree(k));
        }
        // Deterministic search for a monic degree-k polynomial without
        // roots in F_p; for k in {2, 3} that is irreducibility.
        for c0 in 1..p {
            for c1 in 0..p {
                let candidate = if k == 2 {
                    vec![c0, c1, 1]
                } else {
                    vec![c0, c1, 0, 1]
                };
                let has_root = (0..p).any(|a| {
                    let mut acc = 0u64;
                    for c in candidate.iter().rev() {
                        acc = base.add(&base.mul(&acc, &a), c);
                    }
                    acc == 0
                });
                if !has_root {
                    return Ok(ExtField { base, k, modulus: candidate });
                }
            }
        }
        // Unreachable: irreducible polynomials of every degree exist over F_p.
        Err(Error::Internal(format!(
            "no degree-{k} irreducible polynomial found over F_{p}"
        )))
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Canonical embedding F_p -> F_{p^k}.
    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0u64; self.k as usize];
        v[0] = a % self.base.p();
        v
    }

    /// Reduce a coefficient vector modulo the modulus, to length k.
    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let k = self.k as usize;
        while v.len() > k {
            let top = v.pop().unwrap();
            if top != 0 {
                let deg = v.len() - k;
                for (i, m) in self.modulus[..k].iter().enumerate() {
                    let t = self.base.mul(&top, m);
                    v[deg + i] = self.base.sub(&v[deg + i], &t);
                }
            }
        }
        v.resize(k, 0);
        v
    }
}

impl Field for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.k as usize]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|c| *c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y);
                prod[i + j] = self.base.add(&prod[i + j], &t);
            }
        }
        self.reduce(prod)
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(!self.is_zero(a), "inverse of zero");
        // a^(p^k - 2) by square-and-multiply; p^k is small by construction.
        let size = (self.base.p() as u128).pow(self.k);
        let mut e = size - 2;
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    fn from_int(&self, k: i64) -> Vec<u64> {
        self.embed(self.base.from_int(k))
    }
    fn from_big_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Vec<u64>> {
        Ok(self.embed(self.base.from_big_ratio(num, den)?))
    }
    fn characteristic(&self) -> u64 {
        self.base.p()
    }
    fn size(&self) -> Option<u64> {
        (self.base.p() as u128)
            .checked_pow(self.k)
            .and_then(|s| u64::try_from(s).ok())
    }
    fn sample<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.k).map(|_| self.base.sample(rng)).collect()
    }
    fn format(&self, a: &Vec<u64>) -> String {
        if self.is_zero(a) {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let m = match i {
                0 => c.to_string(),
                1 if *c == 1 => "g".into(),
                1 => format!("{c}*g"),
                _ if *c == 1 => format!("g^{i}"),
                _ => format!("{c}*g^{i}"),
            };
            parts.push(m);
        }
        let body = parts.join("+");
        if parts.len() > 1 {
            format!("({body})")
        } else {
            body
        }
    }
}
