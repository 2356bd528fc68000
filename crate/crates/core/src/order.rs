//! Monomial orders for Groebner computations.

use std::cmp::Ordering;

use crate::monomial::Monomial;

/// A global monomial order.
///
/// `DegRevLex` is the house order for every colength computation.
/// `BlockElim` puts a front block of variables lexicographically before the
/// rest (compared by DegRevLex among themselves); with the front block equal
/// to one fresh variable it is the elimination order used by intersections
/// and colon ideals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MonomialOrder {
    DegRevLex,
    BlockElim { front: Vec<usize> },
}

fn degrevlex_on(a: &Monomial, b: &Monomial, vars: &[usize]) -> Ordering {
    let deg = |m: &Monomial| -> u64 { vars.iter().map(|i| m.exponent(*i) as u64).sum() };
    match deg(a).cmp(&deg(b)) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for i in vars.iter().rev() {
        let (ea, eb) = (a.exponent(*i), b.exponent(*i));
        if ea != eb {
            // Smaller exponent in the last differing variable wins.
            return eb.cmp(&ea);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    /// Total order on monomials; `Greater` means `a` is the larger monomial.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match self {
            MonomialOrder::DegRevLex => {
                let all: Vec<usize> = (0..a.nvars()).collect();
                degrevlex_on(a, b, &all)
            }
            MonomialOrder::BlockElim { front } => {
                for i in front {
                    let (ea, eb) = (a.exponent(*i), b.exponent(*i));
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
                let back: Vec<usize> =
                    (0..a.nvars()).filter(|i| !front.contains(i)).collect();
                degrevlex_on(a, b, &back)
            }
        }
    }

    pub fn max<'m>(&self, a: &'m Monomial, b: &'m Monomial) -> &'m Monomial {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u32]) -> Monomial {
        Monomial::from_exps(exps)
    }

    #[test]
    fn degrevlex_basics() {
        let ord = MonomialOrder::DegRevLex;
        // Degree decides first.
        assert_eq!(ord.cmp(&m(&[3, 0]), &m(&[0, 2])), Ordering::Greater);
        // Same degree: x^3 > y^3 (last differing variable has smaller exponent).
        assert_eq!(ord.cmp(&m(&[3, 0]), &m(&[0, 3])), Ordering::Greater);
        // Classic triple in 3 vars: x*z < y^2 under DegRevLex.
        assert_eq!(ord.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(ord.cmp(&m(&[1, 1, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(ord.cmp(&m(&[2, 1]), &m(&[2, 1])), Ordering::Equal);
    }

    #[test]
    fn block_elimination_front_dominates() {
        // Variables (x, y, t) with t = index 2 in front.
        let ord = MonomialOrder::BlockElim { front: vec![2] };
        // Any positive power of t beats any t-free monomial.
        assert_eq!(ord.cmp(&m(&[0, 0, 1]), &m(&[9, 9, 0])), Ordering::Greater);
        // t-free monomials compare by DegRevLex on (x, y).
        assert_eq!(ord.cmp(&m(&[2, 0, 0]), &m(&[0, 2, 0])), Ordering::Greater);
        // Equal t exponent, then back block decides.
        assert_eq!(ord.cmp(&m(&[1, 0, 2]), &m(&[0, 1, 2])), Ordering::Greater);
    }

    #[test]
    fn orders_are_total_and_multiplicative() {
        let orders = [
            MonomialOrder::DegRevLex,
            MonomialOrder::BlockElim { front: vec![0] },
        ];
        let ms: Vec<Monomial> = Monomial::all_of_degree(3, 3)
            .into_iter()
            .chain(Monomial::all_of_degree(3, 2))
            .collect();
        for ord in &orders {
            for a in &ms {
                for b in &ms {
                    let c = ord.cmp(a, b);
                    assert_eq!(ord.cmp(b, a), c.reverse());
                    // Multiplicativity: a < b implies am < bm.
                    let k = m(&[1, 2, 0]);
                    assert_eq!(ord.cmp(&a.mul(&k), &b.mul(&k)), c);
                    // 1 is the smallest monomial.
                    if !a.is_one() {
                        assert_eq!(
                            ord.cmp(a, &Monomial::one(3)),
                            Ordering::Greater
                        );
                    }
                }
            }
        }
    }
}
