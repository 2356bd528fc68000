//! Exponent vectors.

use smallvec::SmallVec;

/// Exponent of a single variable inside a monomial.
pub type Exp = u32;

/// A monomial in n variables, stored as its exponent vector. Index i is the
/// exponent of the i-th ring variable. The derived `Ord` is the storage
/// order used by canonical containers; term comparison under a monomial
/// order goes through [`crate::order::MonomialOrder`] instead.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(SmallVec<[Exp; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exps(exps: &[Exp]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// The monomial x_i.
    pub fn var(i: usize, nvars: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponent(&self, i: usize) -> Exp {
        self.0[i]
    }

    pub fn exponents(&self) -> &[Exp] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|e| *e as u64).sum()
    }

    /// Number of variables with a nonzero exponent.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|e| **e > 0).count()
    }

    /// True when the monomial is a power of the single variable i (or 1).
    pub fn is_pure_power_of(&self, i: usize) -> bool {
        self.0.iter().enumerate().all(|(j, e)| j == i || *e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn pow(&self, k: Exp) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self, when self divides other.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (*a).max(*b))
                .collect(),
        )
    }

    /// True when the two monomials share no variable: lcm = product.
    pub fn coprime_with(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Append one fresh variable with exponent e (elimination helper).
    pub fn extend_one(&self, e: Exp) -> Monomial {
        let mut v = self.0.clone();
        v.push(e);
        Monomial(v)
    }

    /// Drop the last variable; requires its exponent to be zero.
    pub fn project_last(&self) -> Monomial {
        debug_assert_eq!(*self.0.last().unwrap(), 0);
        Monomial(SmallVec::from_slice(&self.0[..self.0.len() - 1]))
    }

    /// All monomials of total degree exactly d, in storage order.
    pub fn all_of_degree(nvars: usize, d: Exp) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0 as Exp; nvars];
        fn rec(current: &mut Vec<Exp>, i: usize, left: Exp, out: &mut Vec<Monomial>) {
            if i + 1 == current.len() {
                current[i] = left;
                out.push(Monomial::from_exps(current));
                return;
            }
            for e in 0..=left {
                current[i] = e;
                rec(current, i + 1, left - e, out);
            }
        }
        rec(&mut current, 0, d, &mut out);
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_and_quotients() {
        let a = Monomial::from_exps(&[2, 1]);
        let b = Monomial::from_exps(&[3, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.div(&b).unwrap(), Monomial::from_exps(&[1, 0]));
        assert_eq!(b.div(&a), None);
    }

    #[test]
    fn lcm_and_coprimality() {
        let a = Monomial::from_exps(&[2, 0, 1]);
        let b = Monomial::from_exps(&[0, 3, 0]);
        assert_eq!(a.lcm(&b), Monomial::from_exps(&[2, 3, 1]));
        assert!(a.coprime_with(&b));
        assert!(!a.coprime_with(&Monomial::from_exps(&[1, 0, 0])));
    }

    #[test]
    fn degree_enumeration_counts_compositions() {
        // #{monomials of degree d in n vars} = C(d+n-1, n-1).
        assert_eq!(Monomial::all_of_degree(2, 5).len(), 6);
        assert_eq!(Monomial::all_of_degree(3, 4).len(), 15);
        let all = Monomial::all_of_degree(3, 4);
        assert!(all.iter().all(|m| m.total_degree() == 4));
        let mut sorted = all.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
    }

    #[test]
    fn pure_power_detection() {
        assert!(Monomial::from_exps(&[0, 4]).is_pure_power_of(1));
        assert!(!Monomial::from_exps(&[1, 4]).is_pure_power_of(1));
        assert!(Monomial::from_exps(&[0, 0]).is_pure_power_of(0));
    }
}
