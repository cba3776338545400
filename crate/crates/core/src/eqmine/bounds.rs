//! Explicit numeric bounds on sizes and degrees of bounded-rank loci.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::poly::binomial;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// Whether `n^d > m^2 + r (n^(d-1) + n)`.
pub fn n_bound_holds(d: u32, m: u64, r: u64, n: u64) -> bool {
    let lhs = big(n).pow(d);
    let rhs = big(m) * big(m) + big(r) * (big(n).pow(d - 1) + big(n));
    lhs > rhs
}

/// Smallest `n >= 1` with `n^d > m^2 + r (n^(d-1) + n)`.
pub fn min_n(d: u32, m: u64, r: u64) -> u64 {
    assert!(d >= 2, "needs d >= 2");
    // n = r + m + 1 always works, so the scan terminates
    (1..).find(|&n| n_bound_holds(d, m, r, n)).unwrap()
}

/// `m · sum_{1 <= |I| <= d/2} prod_{j not in I} n_j`: the dimension count
/// bounding the parameter space of rank-`r` decompositions per term.
pub fn prk_bound(m: u64, shape: &[usize]) -> BigUint {
    let d = shape.len();
    let mut total = BigUint::zero();
    for mask in 1u32..(1 << d) {
        let size = mask.count_ones() as usize;
        if size > d / 2 {
            continue;
        }
        let prod = (0..d).filter(|j| mask >> j & 1 == 0).fold(BigUint::one(), |acc, j| acc * big(shape[j] as u64));
        total += prod;
    }
    total * big(m)
}

/// Closed form of [`prk_bound`] for cubical shapes: `m · sum_e C(d,e) n^(d-e)`.
pub fn prk_bound_cubical(d: u32, m: u64, n: u64) -> BigUint {
    let mut total = BigUint::zero();
    for e in 1..=d / 2 {
        total += BigUint::from(binomial(d as u64, e as u64)) * big(n).pow(d - e);
    }
    total * big(m)
}

/// The degree bound together with the auxiliary `n` it is evaluated at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBound {
    pub n: u64,
    pub degree: BigUint,
}

/// `ceil(4 (r + m^(2/d)))`, found exactly: the least `n >= 4r` with
/// `(n - 4r)^d >= 4^d m^2`.
pub fn degree_bound_n(d: u32, m: u64, r: u64) -> u64 {
    let target = big(4).pow(d) * big(m) * big(m);
    let mut k = 0u64;
    while big(k).pow(d) < target {
        k += 1;
    }
    4 * r + k
}

/// Bracket `lo < e < hi` from the Taylor series truncated after `k` terms.
fn euler_bracket(k: u32) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for i in 0..k {
        if i > 0 {
            term /= BigRational::from_integer((i as i64).into());
        }
        sum += &term;
    }
    // remainder after k terms is below 2 / k!
    let tail = term / BigRational::from_integer((k as i64).into()) * BigRational::from_integer(2.into());
    (sum.clone(), sum + tail)
}

fn ceil(x: &BigRational) -> BigUint {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    let q = if r.is_zero() { q } else { q + 1 };
    q.to_biguint().expect("nonnegative")
}

/// Smallest `D` with `log2 D >= 4 log2(m n^d) + (4m - 1) log2(9e / ((3m - 1) n^d))`
/// and `D >= (m - 1/4) n^d`, at `n = ceil(4 (r + m^(2/d)))`.
///
/// The transcendental factor `e^(4m-1)` is bracketed by rationals, refined
/// until both ends give the same ceiling.
pub fn degree_bound(d: u32, m: u64, r: u64) -> Result<DegreeBound> {
    assert!(d >= 2 && m >= 1, "needs d >= 2, m >= 1");
    let n = degree_bound_n(d, m, r);
    if !n_bound_holds(d, m, r, n) {
        return Err(Error::NBoundUnmet(n));
    }
    let nd = big(n).pow(d);
    let exp = (4 * m - 1) as u32;
    let base = BigRational::new((big(m) * &nd).pow(4u32).into(), BigUint::one().into())
        * Pow::pow(BigRational::new(big(9).into(), (big(3 * m - 1) * &nd).into()), exp);
    let mut k = 8;
    let main = loop {
        let (lo, hi) = euler_bracket(k);
        let a = ceil(&(&base * Pow::pow(lo, exp)));
        let b = ceil(&(&base * Pow::pow(hi, exp)));
        if a == b {
            break a;
        }
        k *= 2;
    };
    let floor_req = ceil(&BigRational::new((big(4 * m - 1) * &nd).into(), big(4).into()));
    Ok(DegreeBound { n, degree: main.max(floor_req) })
}

/// Bit length of a bound, for reporting.
pub fn bits(x: &BigUint) -> u64 {
    x.bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_n_examples() {
        assert_eq!(min_n(3, 1, 1), 2);
        assert_eq!(min_n(2, 1, 1), 3);
        assert_eq!(min_n(4, 1, 2), 3);
        assert_eq!(min_n(2, 1, 0), 2);
    }

    #[test]
    fn min_n_monotone() {
        for d in 2..=5 {
            for m in 1..=3 {
                for r in 0..=10 {
                    let n = min_n(d, m, r);
                    assert!(n_bound_holds(d, m, r, n) && (n == 1 || !n_bound_holds(d, m, r, n - 1)));
                    if r < 10 {
                        assert!(min_n(d, m, r + 1) >= n);
                    }
                    if m < 3 {
                        assert!(min_n(d, m + 1, r) >= n);
                    }
                }
            }
        }
    }

    #[test]
    fn prk_bound_examples() {
        assert_eq!(prk_bound(1, &[2, 2, 2]), big(12));
        assert_eq!(prk_bound(1, &[3, 3]), big(6));
        assert_eq!(prk_bound(2, &[2, 2, 2, 2]), big(112));
        for d in 2..=5u32 {
            for n in 1..=4u64 {
                for m in 1..=3 {
                    let shape = alloc::vec![n as usize; d as usize];
                    assert_eq!(prk_bound(m, &shape), prk_bound_cubical(d, m, n));
                }
            }
        }
        for n in 1..=6u64 {
            assert_eq!(prk_bound_cubical(2, 1, n), big(2 * n));
        }
    }

    #[test]
    fn degree_bound_matches_float_evaluation() {
        let e = core::f64::consts::E;
        for (d, m, r) in [(3u32, 1u64, 1u64), (2, 1, 1), (3, 1, 2), (2, 2, 3)] {
            let b = degree_bound(d, m, r).unwrap();
            let n = b.n as f64;
            assert_eq!(b.n as f64, (4.0 * (r as f64 + (m as f64).powf(2.0 / d as f64))).ceil());
            let nd = n.powi(d as i32);
            let log2 = 4.0 * (m as f64 * nd).log2()
                + (4 * m - 1) as f64 * (3.0 * e / ((m as f64 - 1.0 / 3.0) * nd)).log2();
            let floor_req = (m as f64 - 0.25) * nd;
            let expect = log2.exp2().max(floor_req);
            let got = b.degree.to_string().parse::<f64>().unwrap();
            assert!((got - expect).abs() <= 1.0 + expect * 1e-12, "{d} {m} {r}: {got} vs {expect}");
        }
        let b = degree_bound(3, 1, 1).unwrap();
        assert_eq!(b.n, 8);
        let bits = (b.degree.to_string().parse::<f64>().unwrap()).log2();
        assert!((bits - 19.84).abs() < 0.01);
        assert!(degree_bound(3, 1, 2).unwrap().degree >= b.degree);
    }

    #[test]
    fn degree_bound_n_exact_on_perfect_powers() {
        // m = 4, d = 2: m^(2/d) = 4 exactly
        assert_eq!(degree_bound_n(2, 4, 1), 20);
        // m = 8, d = 3: m^(2/3) = 4
        assert_eq!(degree_bound_n(3, 8, 0), 16);
    }

    #[test]
    fn euler_bracket_contains_e() {
        let (lo, hi) = euler_bracket(20);
        let lo = lo.numer().to_string().parse::<f64>().unwrap() / lo.denom().to_string().parse::<f64>().unwrap();
        let hi = hi.numer().to_string().parse::<f64>().unwrap() / hi.denom().to_string().parse::<f64>().unwrap();
        assert!(lo <= core::f64::consts::E && core::f64::consts::E <= hi);
    }
}
