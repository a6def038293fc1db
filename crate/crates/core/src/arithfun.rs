//! The truncated ring of arithmetic functions under Dirichlet
//! convolution: values at 1..N, exact coefficients, convolution,
//! inverses, pointwise product, and order/norm/support reporting.
//!
//! Every operation computes the largest horizon at which its output is
//! exact; "zero" verdicts always mean "zero up to the horizon".

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::coeff::{Coefficient, Rational};
use crate::error::{Error, Result};
use crate::numtheory::{self, SpfSieve};

pub const DEFAULT_HORIZON: u64 = 1024;
pub const MAX_HORIZON: u64 = 10_000_000;

/// A parameter of a named builtin: an integer, or the prime/value pairs
/// accepted by the completely additive/multiplicative builders.
#[derive(Clone, Debug, PartialEq)]
pub enum BuiltinParam {
    Int(i64),
    Pairs(Vec<(u64, Coefficient)>),
}

/// An arithmetic function truncated to its horizon: exact values at
/// `1..=horizon`, nothing asserted beyond. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithFun {
    values: Vec<Coefficient>,
}

fn check_horizon(n: u64) -> Result<()> {
    if n < 1 || n > MAX_HORIZON {
        return Err(Error::OutOfRange(format!(
            "horizon {n} outside 1..={MAX_HORIZON}"
        )));
    }
    Ok(())
}

impl ArithFun {
    pub fn from_values(values: Vec<Coefficient>) -> Result<ArithFun> {
        check_horizon(values.len() as u64)?;
        Ok(ArithFun { values })
    }

    pub fn from_fn(horizon: u64, mut f: impl FnMut(u64) -> Coefficient) -> Result<ArithFun> {
        check_horizon(horizon)?;
        Ok(ArithFun { values: (1..=horizon).map(|n| f(n)).collect() })
    }

    pub fn horizon(&self) -> u64 {
        self.values.len() as u64
    }

    /// Value at `n` (1-based); panics outside `1..=horizon`.
    pub fn at(&self, n: u64) -> &Coefficient {
        assert!(
            n >= 1 && n <= self.horizon(),
            "index {n} outside 1..={}",
            self.horizon()
        );
        &self.values[(n - 1) as usize]
    }

    pub fn get(&self, n: u64) -> Option<&Coefficient> {
        if n >= 1 && n <= self.horizon() {
            Some(&self.values[(n - 1) as usize])
        } else {
            None
        }
    }

    pub fn values(&self) -> &[Coefficient] {
        &self.values
    }

    /// Restriction to a smaller horizon.
    pub fn truncated(&self, horizon: u64) -> Result<ArithFun> {
        check_horizon(horizon)?;
        if horizon > self.horizon() {
            return Err(Error::OutOfRange(format!(
                "cannot extend horizon {} to {horizon}",
                self.horizon()
            )));
        }
        Ok(ArithFun { values: self.values[..horizon as usize].to_vec() })
    }

    // ---- constructors -------------------------------------------------

    pub fn zero(horizon: u64) -> Result<ArithFun> {
        Self::from_fn(horizon, |_| Coefficient::zero())
    }

    /// The all-ones function (the zeta direction).
    pub fn one(horizon: u64) -> Result<ArithFun> {
        Self::from_fn(horizon, |_| Coefficient::one())
    }

    /// The convolution identity `e_1`.
    pub fn epsilon(horizon: u64) -> Result<ArithFun> {
        Self::e_at(1, horizon)
    }

    /// `e_n`: 1 exactly at index `n`.
    pub fn e_at(n: u64, horizon: u64) -> Result<ArithFun> {
        if n < 1 {
            return Err(Error::InvalidParams("e(n) needs n >= 1".into()));
        }
        Self::from_fn(horizon, |k| {
            if k == n {
                Coefficient::one()
            } else {
                Coefficient::zero()
            }
        })
    }

    /// Indicator of the primes.
    pub fn ind_prime(horizon: u64) -> Result<ArithFun> {
        check_horizon(horizon)?;
        let sieve = SpfSieve::new(horizon);
        Self::from_fn(horizon, |n| {
            if sieve.is_prime(n) {
                Coefficient::one()
            } else {
                Coefficient::zero()
            }
        })
    }

    /// Indicator of the powers of `p` (including 1).
    pub fn ind_prime_powers(p: u64, horizon: u64) -> Result<ArithFun> {
        if !numtheory::is_prime(p) {
            return Err(Error::InvalidParams(format!("ind_p({p}): {p} is not prime")));
        }
        Self::from_fn(horizon, |n| {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            if m == 1 {
                Coefficient::one()
            } else {
                Coefficient::zero()
            }
        })
    }

    /// Indicator of an explicit set of indices.
    pub fn ind_set(set: &[u64], horizon: u64) -> Result<ArithFun> {
        if set.iter().any(|&n| n < 1) {
            return Err(Error::InvalidParams("ind_set members must be >= 1".into()));
        }
        let members: BTreeSet<u64> = set.iter().copied().collect();
        Self::from_fn(horizon, |n| {
            if members.contains(&n) {
                Coefficient::one()
            } else {
                Coefficient::zero()
            }
        })
    }

    /// Moebius function, computed as the convolution inverse of `one`.
    pub fn moebius(horizon: u64) -> Result<ArithFun> {
        Self::one(horizon)?.conv_inverse()
    }

    /// Von Mangoldt: `L_p` at prime powers `p^j`, 0 elsewhere.
    pub fn von_mangoldt(horizon: u64) -> Result<ArithFun> {
        check_horizon(horizon)?;
        let sieve = SpfSieve::new(horizon);
        Self::from_fn(horizon, |n| match sieve.prime_power(n) {
            Some((p, _)) => Coefficient::symbol(p),
            None => Coefficient::zero(),
        })
    }

    /// Number of prime factors counted with multiplicity.
    pub fn omega(horizon: u64) -> Result<ArithFun> {
        check_horizon(horizon)?;
        let sieve = SpfSieve::new(horizon);
        Self::from_fn(horizon, |n| {
            let total: u32 = sieve.factors(n).iter().map(|&(_, e)| e).sum();
            Coefficient::from_int(total as i64)
        })
    }

    /// `1/j` at prime powers `p^j`, 0 elsewhere (the Log of `one`).
    pub fn kappa(horizon: u64) -> Result<ArithFun> {
        check_horizon(horizon)?;
        let sieve = SpfSieve::new(horizon);
        Self::from_fn(horizon, |n| match sieve.prime_power(n) {
            Some((_, j)) => Coefficient::rational(1, j as i64),
            None => Coefficient::zero(),
        })
    }

    /// `I_k : n -> n^k`, exact for any integer `k`.
    pub fn power_id(k: i64, horizon: u64) -> Result<ArithFun> {
        Self::from_fn(horizon, |n| {
            let pow = BigInt::from(n).pow(k.unsigned_abs() as u32);
            let q = if k >= 0 {
                Rational::from(pow)
            } else {
                Rational::new(BigInt::from(1), pow)
            };
            Coefficient::from_rational(q)
        })
    }

    /// `(one - eps)^2`: counts the proper factors of its argument.
    pub fn tau_star(horizon: u64) -> Result<ArithFun> {
        check_horizon(horizon)?;
        // divisor-count sieve, then tau(n) - 2 for n > 1
        let n = horizon as usize;
        let mut tau = vec![0i64; n + 1];
        for d in 1..=n {
            let mut m = d;
            while m <= n {
                tau[m] += 1;
                m += d;
            }
        }
        Self::from_fn(horizon, |k| {
            if k == 1 {
                Coefficient::zero()
            } else {
                Coefficient::from_int(tau[k as usize] - 2)
            }
        })
    }

    /// Named-builtin dispatcher used by the expression language and the
    /// CLI. `ind_p` and `ind_ppowers` are synonyms.
    pub fn builtin(name: &str, params: &[BuiltinParam], horizon: u64) -> Result<ArithFun> {
        fn want_ints(name: &str, params: &[BuiltinParam], arity: usize) -> Result<Vec<i64>> {
            let ints: Vec<i64> = params
                .iter()
                .map(|p| match p {
                    BuiltinParam::Int(v) => Ok(*v),
                    BuiltinParam::Pairs(_) => Err(Error::InvalidParams(format!(
                        "{name} takes integer parameters"
                    ))),
                })
                .collect::<Result<_>>()?;
            if ints.len() != arity {
                return Err(Error::InvalidParams(format!(
                    "{name} takes {arity} parameter(s), got {}",
                    ints.len()
                )));
            }
            Ok(ints)
        }
        fn want_pairs(name: &str, params: &[BuiltinParam]) -> Result<Vec<(u64, Coefficient)>> {
            match params {
                [BuiltinParam::Pairs(pairs)] => Ok(pairs.clone()),
                _ => Err(Error::InvalidParams(format!("{name} takes {{prime: value}} pairs"))),
            }
        }
        fn positive(name: &str, v: i64) -> Result<u64> {
            u64::try_from(v)
                .ok()
                .filter(|&u| u >= 1)
                .ok_or_else(|| Error::InvalidParams(format!("{name}: parameter must be >= 1, got {v}")))
        }

        match name {
            "one" => {
                want_ints(name, params, 0)?;
                Self::one(horizon)
            }
            "eps" => {
                want_ints(name, params, 0)?;
                Self::epsilon(horizon)
            }
            "e" => {
                let p = want_ints(name, params, 1)?;
                Self::e_at(positive(name, p[0])?, horizon)
            }
            "ind_prime" => {
                want_ints(name, params, 0)?;
                Self::ind_prime(horizon)
            }
            "ind_p" | "ind_ppowers" => {
                let p = want_ints(name, params, 1)?;
                Self::ind_prime_powers(positive(name, p[0])?, horizon)
            }
            "ind_set" => {
                if params.is_empty() {
                    return Err(Error::InvalidParams("ind_set needs at least one index".into()));
                }
                let ints = want_ints(name, params, params.len())?;
                let set: Vec<u64> =
                    ints.iter().map(|&v| positive(name, v)).collect::<Result<_>>()?;
                Self::ind_set(&set, horizon)
            }
            "mu" => {
                want_ints(name, params, 0)?;
                Self::moebius(horizon)
            }
            "Lambda" => {
                want_ints(name, params, 0)?;
                Self::von_mangoldt(horizon)
            }
            "Omega" => {
                want_ints(name, params, 0)?;
                Self::omega(horizon)
            }
            "kappa" => {
                want_ints(name, params, 0)?;
                Self::kappa(horizon)
            }
            "I" => {
                let p = want_ints(name, params, 1)?;
                Self::power_id(p[0], horizon)
            }
            "tau_star" => {
                want_ints(name, params, 0)?;
                Self::tau_star(horizon)
            }
            "recur" => {
                let p = want_ints(name, params, 4)?;
                let rec = numtheory::recurrence_terms(p[0], p[1], p[2], p[3], horizon)?;
                let set: Vec<u64> = rec
                    .terms
                    .iter()
                    .filter_map(|t| u64::try_from(t).ok())
                    .filter(|&t| t >= 1)
                    .collect();
                Self::ind_set(&set, horizon)
            }
            "addfun" => {
                numtheory::build_completely_additive(&want_pairs(name, params)?, horizon)
            }
            "mulfun" => {
                numtheory::build_completely_multiplicative(&want_pairs(name, params)?, horizon)
            }
            other => Err(Error::UnknownBuiltin(other.into())),
        }
    }

    // ---- ring operations ----------------------------------------------

    /// Dirichlet convolution, exact up to the smaller horizon.
    pub fn conv(&self, other: &ArithFun) -> ArithFun {
        let n = self.horizon().min(other.horizon());
        let mut out = vec![Coefficient::zero(); n as usize];
        for d in 1..=n {
            let fd = self.at(d);
            if fd.is_zero() {
                continue;
            }
            for q in 1..=n / d {
                let gq = other.at(q);
                if gq.is_zero() {
                    continue;
                }
                out[(d * q - 1) as usize].add_mul_assign(fd, gq);
            }
        }
        ArithFun { values: out }
    }

    pub fn add(&self, other: &ArithFun) -> ArithFun {
        let n = self.horizon().min(other.horizon()) as usize;
        ArithFun {
            values: (0..n).map(|i| &self.values[i] + &other.values[i]).collect(),
        }
    }

    pub fn sub(&self, other: &ArithFun) -> ArithFun {
        let n = self.horizon().min(other.horizon()) as usize;
        ArithFun {
            values: (0..n).map(|i| &self.values[i] - &other.values[i]).collect(),
        }
    }

    pub fn neg(&self) -> ArithFun {
        ArithFun { values: self.values.iter().map(|v| -v).collect() }
    }

    pub fn scale(&self, c: &Coefficient) -> ArithFun {
        ArithFun { values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn pointwise_mul(&self, other: &ArithFun) -> ArithFun {
        let n = self.horizon().min(other.horizon()) as usize;
        ArithFun {
            values: (0..n).map(|i| &self.values[i] * &other.values[i]).collect(),
        }
    }

    /// Pointwise `k`-th power.
    pub fn pointwise_pow(&self, k: u32) -> ArithFun {
        ArithFun { values: self.values.iter().map(|v| v.pow(k)).collect() }
    }

    /// Convolution inverse `g` with `f * g = eps` up to the horizon,
    /// by the standard recursion on divisors. Requires `f(1)` to be an
    /// invertible coefficient (a nonzero rational).
    pub fn conv_inverse(&self) -> Result<ArithFun> {
        let inv1 = self.at(1).inverse().ok_or_else(|| {
            Error::NotInvertible(format!(
                "value at 1 is `{}`, which is not an invertible rational",
                self.at(1)
            ))
        })?;
        let n = self.horizon();
        let mut g = vec![Coefficient::zero(); n as usize];
        g[0] = inv1.clone();
        for m in 2..=n {
            let mut acc = Coefficient::zero();
            let mut d = 1u64;
            while d * d <= m {
                if m % d == 0 {
                    let q = m / d;
                    if d > 1 {
                        acc.add_mul_assign(self.at(d), &g[(q - 1) as usize]);
                    }
                    if q != d && q > 1 {
                        acc.add_mul_assign(self.at(q), &g[(d - 1) as usize]);
                    }
                }
                d += 1;
            }
            g[(m - 1) as usize] = &(-&acc) * &inv1;
        }
        Ok(ArithFun { values: g })
    }

    /// `f^k` with respect to convolution: repeated squaring for `k > 0`,
    /// `eps` for `k = 0` (rejecting the zero function), and inverse
    /// powers for `k < 0`.
    pub fn conv_power(&self, k: i64) -> Result<ArithFun> {
        if k == 0 {
            if self.is_zero_up_to_horizon() {
                return Err(Error::ZeroToThePowerZero);
            }
            return ArithFun::epsilon(self.horizon());
        }
        let base = if k < 0 { self.conv_inverse()? } else { self.clone() };
        let mut exp = k.unsigned_abs();
        let mut result: Option<ArithFun> = None;
        let mut square = base;
        loop {
            if exp & 1 == 1 {
                result = Some(match result {
                    None => square.clone(),
                    Some(r) => r.conv(&square),
                });
            }
            exp >>= 1;
            if exp == 0 {
                break;
            }
            square = square.conv(&square);
        }
        Ok(result.expect("nonzero exponent"))
    }

    // ---- inspection ----------------------------------------------------

    /// Least index with a nonzero value, together with that value.
    pub fn first_nonzero(&self) -> Option<(u64, &Coefficient)> {
        self.values
            .iter()
            .position(|v| !v.is_zero())
            .map(|i| ((i + 1) as u64, &self.values[i]))
    }

    pub fn is_zero_up_to_horizon(&self) -> bool {
        self.values.iter().all(Coefficient::is_zero)
    }

    /// Indices with nonzero value, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| (i + 1) as u64)
            .collect()
    }

    pub fn order_report(&self) -> OrderReport {
        let support = self.support();
        let order = support.first().copied();
        let norm = match order {
            Some(m) => Rational::new(BigInt::from(1), BigInt::from(m)),
            None => Rational::zero(),
        };
        let mut prime_divisors = BTreeSet::new();
        for &s in &support {
            for (p, _) in numtheory::factorize(s).expect("support within horizon").factors {
                prime_divisors.insert(p);
            }
        }
        OrderReport { horizon: self.horizon(), order, norm, support, prime_divisors }
    }

    /// Equality at every index both horizons cover.
    pub fn eq_up_to_common_horizon(&self, other: &ArithFun) -> bool {
        let n = self.horizon().min(other.horizon()) as usize;
        self.values[..n] == other.values[..n]
    }

    // ---- serialization --------------------------------------------------

    pub fn to_json(&self) -> Value {
        json!({
            "horizon": self.horizon(),
            "values": self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<ArithFun> {
        let horizon = v
            .get("horizon")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidParams("missing numeric `horizon`".into()))?;
        let values = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidParams("missing `values` array".into()))?;
        if values.len() as u64 != horizon {
            return Err(Error::InvalidParams(format!(
                "horizon {horizon} does not match {} values",
                values.len()
            )));
        }
        let parsed: Vec<Coefficient> = values
            .iter()
            .map(|s| {
                s.as_str()
                    .ok_or_else(|| Error::InvalidParams("values must be strings".into()))?
                    .parse::<Coefficient>()
            })
            .collect::<Result<_>>()?;
        ArithFun::from_values(parsed)
    }

    /// `(index, value)` pairs as CSV, header included.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, v));
        }
        out
    }
}

/// Order, norm (reciprocal of the order), support and its prime
/// divisors, all relative to the horizon. `order = None` means the
/// function is zero up to the horizon, i.e. order "infinity so far".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub horizon: u64,
    pub order: Option<u64>,
    pub norm: Rational,
    pub support: Vec<u64>,
    pub prime_divisors: BTreeSet<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    // independent oracle: direct divisor-sum convolution at one index
    fn brute_conv_at(f: &ArithFun, g: &ArithFun, n: u64) -> Coefficient {
        let mut acc = Coefficient::zero();
        for d in 1..=n {
            if n % d == 0 {
                acc += &(f.at(d) * g.at(n / d));
            }
        }
        acc
    }

    // independent oracle: Moebius from the prime factorization
    fn brute_moebius(n: u64) -> i64 {
        let f = numtheory::factorize(n).unwrap();
        if f.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn builtin_values() {
        let kappa = ArithFun::kappa(16).unwrap();
        assert_eq!(kappa.at(8), &Coefficient::rational(1, 3));
        assert_eq!(kappa.at(6), &Coefficient::zero());
        assert_eq!(kappa.at(2), &Coefficient::one());

        let lambda = ArithFun::von_mangoldt(16).unwrap();
        assert_eq!(lambda.at(8), &Coefficient::symbol(2));
        assert_eq!(lambda.at(6), &Coefficient::zero());

        let e2 = ArithFun::e_at(2, 8).unwrap();
        assert_eq!(e2.support(), vec![2]);

        let i_neg = ArithFun::power_id(-2, 8).unwrap();
        assert_eq!(i_neg.at(4).as_rational(), Some(&rat(1, 16)));

        let omega = ArithFun::omega(16).unwrap();
        assert_eq!(omega.at(12), &Coefficient::from_int(3));
        assert_eq!(omega.at(1), &Coefficient::zero());
    }

    #[test]
    fn conv_examples() {
        let n = 32;
        let e2 = ArithFun::e_at(2, n).unwrap();
        let e3 = ArithFun::e_at(3, n).unwrap();
        let e6 = ArithFun::e_at(6, n).unwrap();
        assert_eq!(e2.conv(&e3), e6);

        let one = ArithFun::one(n).unwrap();
        let eps = ArithFun::epsilon(n).unwrap();
        assert_eq!(one.conv(&eps), one);

        let tau = one.conv(&one);
        assert_eq!(tau.at(6), &Coefficient::from_int(4));
        for k in 1..=n {
            assert_eq!(tau.at(k), &brute_conv_at(&one, &one, k), "tau({k})");
        }
    }

    #[test]
    fn conv_takes_min_horizon() {
        let one8 = ArithFun::one(8).unwrap();
        let one4 = ArithFun::one(4).unwrap();
        assert_eq!(one8.conv(&one4).horizon(), 4);
    }

    #[test]
    fn linear_and_pointwise() {
        let n = 12;
        let e2 = ArithFun::e_at(2, n).unwrap();
        let e3 = ArithFun::e_at(3, n).unwrap();
        let s = e2.add(&e3);
        assert_eq!(s.at(2), &Coefficient::one());
        assert_eq!(s.at(3), &Coefficient::one());
        assert!(s.sub(&s).is_zero_up_to_horizon());

        let one = ArithFun::one(n).unwrap();
        let scaled = one.scale(&Coefficient::from_int(3));
        assert_eq!(scaled.at(7), &Coefficient::from_int(3));
        assert_eq!(one.pointwise_mul(&scaled), scaled);

        let omega = ArithFun::omega(n).unwrap();
        assert_eq!(
            omega.pointwise_mul(&omega).at(12),
            &Coefficient::from_int(9)
        );
        assert!(e2.pointwise_mul(&e3).is_zero_up_to_horizon());
    }

    #[test]
    fn inverse_examples() {
        let n = 24;
        let mu = ArithFun::moebius(n).unwrap();
        for k in 1..=n {
            assert_eq!(mu.at(k), &Coefficient::from_int(brute_moebius(k)), "mu({k})");
        }

        let eps = ArithFun::epsilon(n).unwrap();
        let e2 = ArithFun::e_at(2, n).unwrap();
        let geom = eps.sub(&e2).conv_inverse().unwrap();
        assert_eq!(geom, ArithFun::ind_prime_powers(2, n).unwrap());

        assert_eq!(eps.conv_inverse().unwrap(), eps);
        assert!(ArithFun::zero(4).unwrap().conv_inverse().is_err());
        // nonzero but non-rational leading value is not invertible either
        let bad = ArithFun::from_fn(4, |_| Coefficient::symbol(2)).unwrap();
        assert!(matches!(bad.conv_inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn conv_power_examples() {
        let n = 32;
        let x = ArithFun::ind_prime_powers(2, n).unwrap();
        let sq = x.conv_power(2).unwrap();
        for k in 0..=5 {
            assert_eq!(sq.at(1 << k), &Coefficient::from_int(k + 1), "2^{k}");
        }
        assert_eq!(sq.at(6), &Coefficient::zero());

        let one = ArithFun::one(n).unwrap();
        assert_eq!(one.conv_power(1).unwrap(), one);
        assert_eq!(one.conv_power(2).unwrap(), one.conv(&one));
        assert_eq!(
            one.conv_power(-1).unwrap(),
            ArithFun::moebius(n).unwrap()
        );
        assert_eq!(
            one.conv_power(0).unwrap(),
            ArithFun::epsilon(n).unwrap()
        );
        assert!(matches!(
            ArithFun::zero(8).unwrap().conv_power(0),
            Err(Error::ZeroToThePowerZero)
        ));
        // three routes to one^4 agree
        let quad = one.conv(&one).conv(&one).conv(&one);
        assert_eq!(one.conv_power(4).unwrap(), quad);
    }

    #[test]
    fn order_reports() {
        let e6 = ArithFun::e_at(6, 16).unwrap();
        let rep = e6.order_report();
        assert_eq!(rep.order, Some(6));
        assert_eq!(rep.norm, rat(1, 6));
        assert_eq!(rep.prime_divisors.iter().copied().collect::<Vec<_>>(), vec![2, 3]);

        let zero = ArithFun::zero(16).unwrap();
        assert_eq!(zero.order_report().order, None);
        assert!(zero.order_report().norm.is_zero());

        let tau_star = ArithFun::tau_star(16).unwrap();
        assert_eq!(tau_star.order_report().order, Some(4));
    }

    #[test]
    fn tau_star_matches_defining_product() {
        let n = 64;
        let one = ArithFun::one(n).unwrap();
        let eps = ArithFun::epsilon(n).unwrap();
        let built = one.sub(&eps).conv_power(2).unwrap();
        assert_eq!(ArithFun::tau_star(n).unwrap(), built);
    }

    #[test]
    fn builtin_dispatch() {
        let f = ArithFun::builtin("e", &[BuiltinParam::Int(2)], 8).unwrap();
        assert_eq!(f, ArithFun::e_at(2, 8).unwrap());
        assert!(ArithFun::builtin("nope", &[], 8).is_err());
        assert!(ArithFun::builtin("e", &[], 8).is_err());
        assert!(ArithFun::builtin("e", &[BuiltinParam::Int(0)], 8).is_err());
        assert!(ArithFun::builtin("ind_p", &[BuiltinParam::Int(4)], 8).is_err());

        let fib = ArithFun::builtin(
            "recur",
            &[1, -1, 1, 1].map(BuiltinParam::Int).to_vec().as_slice(),
            16,
        )
        .unwrap();
        assert_eq!(fib.support(), vec![1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn json_and_csv() {
        let lambda = ArithFun::von_mangoldt(6).unwrap();
        let v = lambda.to_json();
        assert_eq!(v["horizon"], 6);
        assert_eq!(v["values"][1], "L2");
        let back = ArithFun::from_json(&v).unwrap();
        assert_eq!(back, lambda);

        let csv = ArithFun::kappa(4).unwrap().to_csv();
        assert_eq!(csv, "index,value\n1,0\n2,1\n3,1\n4,1/2\n");

        assert!(ArithFun::from_json(&json!({"horizon": 2, "values": ["1"]})).is_err());
    }

    #[test]
    fn equality_up_to_common_horizon() {
        let a = ArithFun::one(8).unwrap();
        let b = ArithFun::one(5).unwrap();
        assert!(a.eq_up_to_common_horizon(&b));
        let c = ArithFun::e_at(6, 5).unwrap();
        assert!(!a.eq_up_to_common_horizon(&c));
    }
}
