//! Integer-side utilities: factorization, p-adic valuations,
//! multiplicative independence of integer tuples, completely
//! additive/multiplicative function builders, and second-order
//! recurrences with the degeneracy test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arithfun::ArithFun;
use crate::coeff::Coefficient;
use crate::error::{Error, Result};

/// Largest integer the factorization routines accept; trial division
/// stays fast up to here.
pub const FACTOR_LIMIT: u64 = 10_000_000;

/// Safety cap for recurrence generation, so bounded degenerate cycles
/// (e.g. P=0, Q=1) still terminate.
pub const MAX_RECURRENCE_TERMS: usize = 10_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    out
}

/// `n` together with its prime factorization, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// `true` iff `n = p^j` with `j >= 1`; returns `(p, j)`.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        if self.factors.len() == 1 {
            Some(self.factors[0])
        } else {
            None
        }
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 1 || n > FACTOR_LIMIT {
        return Err(Error::OutOfRange(format!(
            "factorize({n}): accepted range is 1..={FACTOR_LIMIT}"
        )));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

/// The exponent of `p` in `n`; `v_p(1) = 0`.
pub fn padic_val(p: u64, n: u64) -> u32 {
    assert!(p >= 2 && n >= 1, "padic_val({p}, {n})");
    let mut v = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// Smallest-prime-factor sieve for bulk factorization of every index up
/// to a horizon. Immutable after construction.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> SpfSieve {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut m = i;
                while m <= n {
                    if spf[m] == 0 {
                        spf[m] = i as u32;
                    }
                    m += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    pub fn factors(&self, n: u64) -> Vec<(u64, u32)> {
        let mut m = n as usize;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    /// `Some((p, j))` iff `n = p^j` with `j >= 1`.
    pub fn prime_power(&self, n: u64) -> Option<(u64, u32)> {
        if n < 2 {
            return None;
        }
        let p = self.spf[n as usize] as u64;
        let mut m = n;
        let mut j = 0;
        while m % p == 0 {
            m /= p;
            j += 1;
        }
        if m == 1 {
            Some((p, j))
        } else {
            None
        }
    }
}

/// Outcome of the multiplicative-independence test for integer tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultIndep {
    Independent,
    /// Integer exponents `k` with `prod n_i^{k_i} = 1`, not all zero.
    Relation(Vec<i64>),
}

/// Decides whether `n_1, ..., n_r` are multiplicatively independent by
/// computing the rank of their prime-exponent matrix over Q. A found
/// relation is verified by re-multiplication before being returned.
///
/// Tuples containing 1 are always dependent (1^k = 1).
pub fn mult_indep_integers(ns: &[u64]) -> MultIndep {
    if ns.is_empty() {
        return MultIndep::Independent;
    }
    if let Some(i) = ns.iter().position(|&n| n == 1) {
        let mut rel = vec![0i64; ns.len()];
        rel[i] = 1;
        return MultIndep::Relation(rel);
    }
    let facts: Vec<Factorization> = ns
        .iter()
        .map(|&n| factorize(n).expect("mult_indep_integers operand out of range"))
        .collect();
    let mut primes: Vec<u64> = facts
        .iter()
        .flat_map(|f| f.factors.iter().map(|&(p, _)| p))
        .collect();
    primes.sort_unstable();
    primes.dedup();

    // rows = tuple entries, cols = primes, augmented with the identity to
    // read a kernel combination off any row that eliminates to zero
    let rows = ns.len();
    let cols = primes.len();
    let mut mat: Vec<Vec<BigInt>> = facts
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut row: Vec<BigInt> = primes
                .iter()
                .map(|&p| BigInt::from(f.exponent_of(p)))
                .collect();
            let mut aug = vec![BigInt::zero(); rows];
            aug[i] = BigInt::one();
            row.extend(aug);
            row
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(r) = (pivot_row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(pivot_row, r);
        let pivot = mat[pivot_row][col].clone();
        for r in pivot_row + 1..rows {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in 0..cols + rows {
                let v = &mat[r][c] * &pivot - &mat[pivot_row][c] * &factor;
                mat[r][c] = v;
            }
            normalize_int_row(&mut mat[r]);
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    for r in pivot_row..rows {
        if mat[r][..cols].iter().all(Zero::is_zero) {
            let mut rel: Vec<i64> = mat[r][cols..]
                .iter()
                .map(|v| i64::try_from(v).expect("kernel exponent overflow"))
                .collect();
            if rel.iter().find(|&&k| k != 0).map_or(false, |&k| k < 0) {
                for k in &mut rel {
                    *k = -*k;
                }
            }
            debug_assert!(verify_relation(ns, &rel));
            return MultIndep::Relation(rel);
        }
    }
    MultIndep::Independent
}

fn normalize_int_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        g = num_integer::gcd(g, v.abs());
    }
    if g > BigInt::one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn verify_relation(ns: &[u64], rel: &[i64]) -> bool {
    if rel.iter().all(|&k| k == 0) {
        return false;
    }
    let mut prod = BigRational::one();
    for (&n, &k) in ns.iter().zip(rel) {
        let base = BigRational::from(BigInt::from(n));
        let mut pow = BigRational::one();
        for _ in 0..k.unsigned_abs() {
            pow *= &base;
        }
        prod *= if k < 0 { pow.recip() } else { pow };
    }
    prod.is_one()
}

/// A second-order integral linear recurrence
/// `U_{n+2} = P U_{n+1} - Q U_n` together with its generated terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    pub p: i64,
    pub q: i64,
    pub u1: BigInt,
    pub u2: BigInt,
    pub terms: Vec<BigInt>,
}

/// Generates terms until they exceed `bound` in absolute value (or the
/// term cap is hit, for bounded degenerate cycles).
pub fn recurrence_terms(p: i64, q: i64, u1: i64, u2: i64, bound: u64) -> Result<Recurrence> {
    if q == 0 {
        return Err(Error::InvalidQ);
    }
    let bound = BigInt::from(bound);
    let (pb, qb) = (BigInt::from(p), BigInt::from(q));
    let mut terms = Vec::new();
    let (mut a, mut b) = (BigInt::from(u1), BigInt::from(u2));
    while a.abs() <= bound && terms.len() < MAX_RECURRENCE_TERMS {
        terms.push(a.clone());
        let next = &pb * &b - &qb * &a;
        a = std::mem::replace(&mut b, next);
    }
    Ok(Recurrence { p, q, u1: BigInt::from(u1), u2: BigInt::from(u2), terms })
}

/// A recurrence is degenerate iff the ratio of its characteristic roots
/// is a root of unity. For integer P, Q that ratio can only have order
/// 1, 2, 3, 4 or 6, which happens exactly when `P^2` is one of
/// `0, Q, 2Q, 3Q, 4Q`.
pub fn is_degenerate(p: i64, q: i64) -> Result<bool> {
    if q == 0 {
        return Err(Error::InvalidQ);
    }
    let p2 = (p as i128) * (p as i128);
    let q = q as i128;
    Ok([0, q, 2 * q, 3 * q, 4 * q].contains(&p2))
}

/// `g(n) = sum_p v_p(n) g(p)`, with `g(p) = 0` for unspecified primes.
pub fn build_completely_additive(
    prime_values: &[(u64, Coefficient)],
    horizon: u64,
) -> Result<ArithFun> {
    let sieve = SpfSieve::new(horizon);
    ArithFun::from_fn(horizon, |n| {
        let mut acc = Coefficient::zero();
        for (p, e) in sieve.factors(n) {
            if let Some((_, v)) = prime_values.iter().find(|&&(q, _)| q == p) {
                acc += &(v * &Coefficient::from_int(e as i64));
            }
        }
        acc
    })
}

/// `g(n) = prod_p g(p)^{v_p(n)}`, with `g(p) = 1` for unspecified primes.
pub fn build_completely_multiplicative(
    prime_values: &[(u64, Coefficient)],
    horizon: u64,
) -> Result<ArithFun> {
    let sieve = SpfSieve::new(horizon);
    ArithFun::from_fn(horizon, |n| {
        let mut acc = Coefficient::one();
        for (p, e) in sieve.factors(n) {
            if let Some((_, v)) = prime_values.iter().find(|&&(q, _)| q == p) {
                acc = &acc * &v.pow(e);
            }
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        let f = factorize(12).unwrap();
        assert_eq!(f.factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1).unwrap().factors, vec![]);
        assert!(factorize(0).is_err());
        assert!(factorize(FACTOR_LIMIT + 1).is_err());
    }

    #[test]
    fn padic_examples() {
        assert_eq!(padic_val(2, 8), 3);
        assert_eq!(padic_val(3, 12), 1);
        assert_eq!(padic_val(5, 7), 0);
        assert_eq!(padic_val(7, 1), 0);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let sieve = SpfSieve::new(500);
        for n in 1..=500u64 {
            assert_eq!(sieve.factors(n), factorize(n).unwrap().factors, "n = {n}");
            assert_eq!(sieve.is_prime(n), is_prime(n), "n = {n}");
        }
        assert_eq!(sieve.prime_power(8), Some((2, 3)));
        assert_eq!(sieve.prime_power(6), None);
        assert_eq!(sieve.prime_power(1), None);
    }

    #[test]
    fn mult_indep_examples() {
        assert_eq!(mult_indep_integers(&[2, 6]), MultIndep::Independent);
        assert_eq!(mult_indep_integers(&[2, 4]), MultIndep::Relation(vec![2, -1]));
        assert_eq!(mult_indep_integers(&[6, 10, 15]), MultIndep::Independent);
        assert_eq!(mult_indep_integers(&[]), MultIndep::Independent);
        match mult_indep_integers(&[4, 6, 9]) {
            // 4 * 9 = 36 = 6^2
            MultIndep::Relation(rel) => assert!(verify_relation(&[4, 6, 9], &rel)),
            other => panic!("expected relation, got {other:?}"),
        }
        match mult_indep_integers(&[8, 1]) {
            MultIndep::Relation(rel) => assert_eq!(rel, vec![0, 1]),
            other => panic!("expected relation, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_examples() {
        assert!(!is_degenerate(1, -1).unwrap()); // Fibonacci
        assert!(is_degenerate(2, 1).unwrap()); // double root 1
        assert!(is_degenerate(1, 1).unwrap()); // sixth root of unity
        assert!(is_degenerate(0, 5).unwrap()); // ratio -1
        assert!(!is_degenerate(1, 2).unwrap());
        assert!(is_degenerate(3, 0).is_err());
    }

    #[test]
    fn fibonacci_terms() {
        let rec = recurrence_terms(1, -1, 1, 1, 100).unwrap();
        let expect: Vec<BigInt> =
            [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89].iter().map(|&n| BigInt::from(n)).collect();
        assert_eq!(rec.terms, expect);
    }

    #[test]
    fn bounded_cycle_terminates() {
        let rec = recurrence_terms(0, 1, 1, 1, 10).unwrap();
        assert_eq!(rec.terms.len(), MAX_RECURRENCE_TERMS);
    }
}
