//! The piecewise-polynomial volume function H_s(d) and the bound built
//! from its central band.
//!
//! H_s(d) is the volume of the corner simplex {x in [0,1]^d : sum x_i <= s},
//! equivalently the CDF of a sum of d independent uniforms:
//!
//!   H_s(d) = (1/d!) * sum_{i=0..floor(s)} (-1)^i C(d,i) (s-i)^d
//!
//! extended by 0 below s=0 and 1 above s=d. All evaluation here is exact
//! over the rationals; floats only appear in the Monte Carlo cross-check.

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Rat;

pub fn int_rat(k: i64) -> Rat {
    Rat::from_integer(BigInt::from(k))
}

fn rat_pow(base: &Rat, mut e: u32) -> Rat {
    let mut acc = Rat::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact H_s(d); s may be any rational, d >= 1.
pub fn h_value(s: &Rat, d: u32) -> Rat {
    if s <= &Rat::zero() {
        return Rat::zero();
    }
    if s >= &int_rat(d as i64) {
        return Rat::one();
    }
    let k = s.floor().to_integer().to_u32().expect("0 <= floor(s) < d");
    let mut acc = Rat::zero();
    for i in 0..=k {
        let t = rat_pow(&(s - int_rat(i as i64)), d) * Rat::from_integer(binomial(d, i));
        if i % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc / Rat::from_integer(factorial(d))
}

/// Exact density d/ds H_s(d) (right-continuous at the knots); zero outside
/// (0, d).
pub fn h_derivative(s: &Rat, d: u32) -> Rat {
    if s <= &Rat::zero() || s >= &int_rat(d as i64) {
        return Rat::zero();
    }
    let k = s.floor().to_integer().to_u32().expect("0 <= floor(s) < d");
    let mut acc = Rat::zero();
    for i in 0..=k {
        let t = rat_pow(&(s - int_rat(i as i64)), d - 1) * Rat::from_integer(binomial(d, i));
        if i % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc / Rat::from_integer(factorial(d - 1))
}

/// Exact integral of H_t(d) dt over [a, b] (a <= b), using the piecewise
/// antiderivative; the regions t < 0 and t > d contribute 0 and b - t
/// respectively.
pub fn integral_h(a: &Rat, b: &Rat, d: u32) -> Rat {
    assert!(a <= b, "integral bounds out of order");
    let zero = Rat::zero();
    let dd = int_rat(d as i64);
    let lo = if a < &zero { zero.clone() } else { a.clone() };
    let hi = if b > &dd { dd.clone() } else { b.clone() };
    let mut total = if b > &dd { b - &dd } else { Rat::zero() };
    if lo >= hi {
        return total;
    }
    // Antiderivative valid on the piece [k, k+1].
    let piece = |x: &Rat, k: u32| -> Rat {
        let mut acc = Rat::zero();
        for i in 0..=k {
            let t = rat_pow(&(x - int_rat(i as i64)), d + 1) * Rat::from_integer(binomial(d, i));
            if i % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        acc / (Rat::from_integer(factorial(d)) * int_rat(d as i64 + 1))
    };
    let mut left = lo.clone();
    while left < hi {
        let k = left.floor().to_integer().to_u32().expect("piece index");
        let next = int_rat(k as i64 + 1);
        let right = if hi < next { hi.clone() } else { next };
        total += piece(&right, k) - piece(&left, k);
        left = right;
    }
    total
}

/// Mass of the unit band [s-1, s]: H_s(n) - H_{s-1}(n). This equals the
/// density of a sum of n+1 uniforms at s.
pub fn band(s: &Rat, n: u32) -> Rat {
    h_value(s, n) - h_value(&(s - Rat::one()), n)
}

/// Derivative of H_s(d) in s via the difference formula in dimension d-1:
/// H'(s, d) = H(s, d-1) - H(s-1, d-1). Requires d >= 2.
pub fn h_prime(s: &Rat, d: u32) -> Result<Rat> {
    if d < 2 {
        return Err(Error::DegenerateInput("H' needs d >= 2".into()));
    }
    Ok(band(s, d - 1))
}

/// The central band mass H_{(n+1)/2}(n) - H_{(n-1)/2}(n).
pub fn central_band(n: u32) -> Rat {
    let half_hi = Rat::new(BigInt::from(n as i64 + 1), BigInt::from(2));
    band(&half_hi, n)
}

/// The sharp bound 1 / (H_{(n+1)/2}(n) - H_{(n-1)/2}(n)); n >= 1.
pub fn bound(n: u32) -> Result<Rat> {
    if n == 0 {
        return Err(Error::DegenerateInput("bound needs n >= 1".into()));
    }
    let b = central_band(n);
    if b <= Rat::zero() {
        return Err(Error::Internal("central band mass must be positive".into()));
    }
    Ok(Rat::one() / b)
}

/// One row of the bound table.
#[derive(Clone, Debug)]
pub struct BoundRow {
    pub n: u32,
    pub h_hi: Rat,
    pub h_lo: Rat,
    pub band: Rat,
    pub bound: Rat,
}

pub fn bound_table(ns: &[u32]) -> Result<Vec<BoundRow>> {
    ns.iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::DegenerateInput("bound needs n >= 1".into()));
            }
            let hi = Rat::new(BigInt::from(n as i64 + 1), BigInt::from(2));
            let lo = &hi - Rat::one();
            let h_hi = h_value(&hi, n);
            let h_lo = h_value(&lo, n);
            let band = &h_hi - &h_lo;
            Ok(BoundRow {
                n,
                h_hi,
                h_lo,
                bound: Rat::one() / &band,
                band,
            })
        })
        .collect()
}

/// Grid certificate that the band function f_n(t) = H(t,n) - H(t-1,n) is
/// symmetric under t -> n+1-t, strictly increasing up to (n+1)/2, and
/// attains its grid maximum there.
#[derive(Clone, Debug)]
pub struct FmaxReport {
    pub n: u32,
    pub grid: u32,
    pub center: Rat,
    pub center_value: Rat,
    /// Evaluated grid: (t, f_n(t)) pairs in increasing t.
    pub values: Vec<(Rat, Rat)>,
    pub symmetric: bool,
    pub strictly_unimodal: bool,
    pub max_at_center: bool,
}

impl FmaxReport {
    pub fn all_ok(&self) -> bool {
        self.symmetric && self.strictly_unimodal && self.max_at_center
    }
}

/// Evaluate the band function on the rational grid t_j = 1 + n*j/grid over
/// (1, n+1), with the center (n+1)/2 always inserted as an extra evaluation
/// point. Any symmetry or maximality failure is returned as an error naming
/// the offending grid point.
pub fn fmax_check(n: u32, grid: u32) -> Result<FmaxReport> {
    if n < 2 {
        return Err(Error::DegenerateInput("fmax needs n >= 2".into()));
    }
    if grid < 8 {
        return Err(Error::DegenerateInput("fmax needs grid >= 8".into()));
    }
    let center = Rat::new(BigInt::from(n as i64 + 1), BigInt::from(2));
    let mut points: std::collections::BTreeSet<Rat> = (0..=grid)
        .map(|j| Rat::one() + int_rat(n as i64) * Rat::new(BigInt::from(j), BigInt::from(grid)))
        .collect();
    points.insert(center.clone());
    let values: Vec<(Rat, Rat)> = points.into_iter().map(|t| (t.clone(), band(&t, n))).collect();
    let center_value = band(&center, n);
    let reflect = int_rat(n as i64 + 1);
    for (t, v) in &values {
        if *v != band(&(&reflect - t), n) {
            return Err(Error::FmaxViolation { t: format_rat(t) });
        }
        if v > &center_value {
            return Err(Error::FmaxViolation { t: format_rat(t) });
        }
    }
    let up = values.iter().take_while(|(t, _)| t <= &center).collect::<Vec<_>>();
    let strictly_unimodal = up.windows(2).all(|w| w[0].1 < w[1].1);
    if !strictly_unimodal {
        let bad = up
            .windows(2)
            .find(|w| w[0].1 >= w[1].1)
            .map(|w| format_rat(&w[1].0))
            .unwrap_or_default();
        return Err(Error::FmaxViolation { t: bad });
    }
    Ok(FmaxReport {
        n,
        grid,
        center,
        center_value,
        values,
        symmetric: true,
        strictly_unimodal: true,
        max_at_center: true,
    })
}

/// Monte Carlo estimate of H_s(d), as a cross-check of the exact values.
#[derive(Clone, Copy, Debug)]
pub struct MonteCarlo {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

pub fn monte_carlo_h(s: &Rat, d: u32, samples: u64, seed: u64) -> MonteCarlo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rat_to_f64(s);
    let mut hits = 0u64;
    for _ in 0..samples {
        let sum: f64 = (0..d).map(|_| rng.random::<f64>()).sum();
        if sum <= target {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let stderr = (p * (1.0 - p) / samples as f64).sqrt();
    MonteCarlo {
        estimate: p,
        stderr,
        samples,
        seed,
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational fits in f64 range")
}

/// "p/q", or just "p" for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fixed-point decimal with `digits` places, rounded half away from zero.
pub fn format_rat_decimal(r: &Rat, digits: u32) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = num::pow(BigInt::from(10), digits as usize);
    let scaled = (a.numer() * &scale * BigInt::from(2) + a.denom()) / (a.denom() * BigInt::from(2));
    let int_part = &scaled / &scale;
    let frac = &scaled % &scale;
    let frac_str = format!("{:0>width$}", frac.to_string(), width = digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_str)
}
