//! Linear operators on arithmetic functions: the log-derivation, the
//! basic derivations, pointwise multipliers and their powers, the
//! composite differential operators `d_k` and their normalizations,
//! and integer shifts — with horizon-shrink bookkeeping throughout.

use std::fmt;

use crate::arithfun::ArithFun;
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::numtheory::{self, SpfSieve};

/// Descriptor of a linear operator together with its horizon-shrink
/// factor: applying an operator with shrink `s` to a function known up
/// to `N` yields a function known up to `floor(N / s)`.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSpec {
    /// `f(n) -> log(n) f(n)`, with `log n` materialized symbolically as
    /// `sum_p v_p(n) L_p`. Shrink 1.
    LogDeriv,
    /// `f(n) -> f(np) v_p(np)`. Shrink `p`.
    BasicDeriv(u64),
    /// `f -> g^i . f` pointwise; negative `i` needs `g` invertible at
    /// every index used. Shrink 1.
    PointwiseMul { g: ArithFun, exponent: i64 },
    /// `d_k = prod_p d_p^{v_p(k)}`. Shrink `k`.
    CompositeDk(u64),
    /// `d_k` normalized by `prod_p v_p(k)!`, so its value at 1 is the
    /// k-th coordinate. Shrink `k`.
    DkHat(u64),
    /// `f(n) -> n^alpha f(n)` for integer `alpha`. Shrink 1.
    Shift(i64),
    /// Heterogeneous composition, applied right to left. Shrink is the
    /// product of the parts.
    Chain(Vec<OperatorSpec>),
}

impl OperatorSpec {
    pub fn shrink(&self) -> u64 {
        match self {
            OperatorSpec::LogDeriv | OperatorSpec::PointwiseMul { .. } | OperatorSpec::Shift(_) => 1,
            OperatorSpec::BasicDeriv(p) => *p,
            OperatorSpec::CompositeDk(k) | OperatorSpec::DkHat(k) => *k,
            OperatorSpec::Chain(ops) => ops.iter().map(OperatorSpec::shrink).product(),
        }
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorSpec::LogDeriv => write!(f, "dL"),
            OperatorSpec::BasicDeriv(p) => write!(f, "dp{p}"),
            OperatorSpec::PointwiseMul { exponent, .. } => write!(f, "mg^{exponent}"),
            OperatorSpec::CompositeDk(k) => write!(f, "dk{k}"),
            OperatorSpec::DkHat(k) => write!(f, "dhat{k}"),
            OperatorSpec::Shift(a) => write!(f, "T{a}"),
            OperatorSpec::Chain(ops) => {
                write!(f, "compose(")?;
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{op}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Applies an operator, returning the result at the shrunk horizon.
pub fn apply(op: &OperatorSpec, f: &ArithFun) -> Result<ArithFun> {
    match op {
        OperatorSpec::LogDeriv => {
            let n = f.horizon();
            let sieve = SpfSieve::new(n);
            ArithFun::from_fn(n, |k| {
                let mut log = Coefficient::zero();
                for (p, e) in sieve.factors(k) {
                    log += &(&Coefficient::symbol(p) * &Coefficient::from_int(e as i64));
                }
                &log * f.at(k)
            })
        }
        OperatorSpec::BasicDeriv(p) => {
            let p = *p;
            if !numtheory::is_prime(p) {
                return Err(Error::InvalidParams(format!("dp{p}: {p} is not prime")));
            }
            let out_n = f.horizon() / p;
            if out_n < 1 {
                return Err(Error::HorizonExhausted(format!(
                    "dp{p} on horizon {} leaves nothing",
                    f.horizon()
                )));
            }
            ArithFun::from_fn(out_n, |n| {
                let v = numtheory::padic_val(p, n * p);
                f.at(n * p) * &Coefficient::from_int(v as i64)
            })
        }
        OperatorSpec::PointwiseMul { g, exponent } => {
            let n = f.horizon().min(g.horizon());
            let mut values = Vec::with_capacity(n as usize);
            for k in 1..=n {
                let gk = g.at(k).powi(*exponent).map_err(|_| {
                    Error::DivisionByZeroValue(format!(
                        "mg^{exponent}: multiplier value `{}` at index {k} is not invertible",
                        g.at(k)
                    ))
                })?;
                values.push(&gk * f.at(k));
            }
            ArithFun::from_values(values)
        }
        OperatorSpec::CompositeDk(k) => {
            let k = *k;
            if k < 1 {
                return Err(Error::InvalidParams("dk needs k >= 1".into()));
            }
            let out_n = f.horizon() / k;
            if out_n < 1 {
                return Err(Error::HorizonExhausted(format!(
                    "dk{k} on horizon {} leaves nothing",
                    f.horizon()
                )));
            }
            let factors = numtheory::factorize(k)?.factors;
            ArithFun::from_fn(out_n, |n| {
                let mut weight = 1i64;
                for &(p, e) in &factors {
                    let vpn = numtheory::padic_val(p, n) as i64;
                    for j in 1..=e as i64 {
                        weight *= vpn + j;
                    }
                }
                f.at(k * n) * &Coefficient::from_int(weight)
            })
        }
        OperatorSpec::DkHat(k) => {
            let raw = apply(&OperatorSpec::CompositeDk(*k), f)?;
            let mut norm = 1i64;
            for (_, e) in numtheory::factorize(*k)?.factors {
                for j in 1..=e as i64 {
                    norm *= j;
                }
            }
            Ok(raw.scale(&Coefficient::rational(1, norm)))
        }
        OperatorSpec::Shift(alpha) => {
            let scaler = ArithFun::power_id(*alpha, f.horizon())?;
            Ok(scaler.pointwise_mul(f))
        }
        OperatorSpec::Chain(ops) => {
            let mut out = f.clone();
            for op in ops.iter().rev() {
                out = apply(op, &out)?;
            }
            Ok(out)
        }
    }
}

/// `op` applied `times` in a row.
pub fn apply_iterated(op: &OperatorSpec, f: &ArithFun, times: u32) -> Result<ArithFun> {
    let mut out = f.clone();
    for _ in 0..times {
        out = apply(op, &out)?;
    }
    Ok(out)
}

/// The normalized composite: `(dhat_k f)(1) = f(k)`.
pub fn apply_dk_hat(k: u64, f: &ArithFun) -> Result<ArithFun> {
    apply(&OperatorSpec::DkHat(k), f)
}

/// Composes operators (leftmost applied last). Pure compositions of
/// basic derivations and `d_k`s fold into a single `d_k`; anything
/// heterogeneous stays a chain.
pub fn compose(ops: &[OperatorSpec]) -> Result<OperatorSpec> {
    if ops.len() == 1 {
        return Ok(ops[0].clone());
    }
    let mut k: u64 = 1;
    let mut all_basic = true;
    for op in ops {
        let factor = match op {
            OperatorSpec::BasicDeriv(p) => *p,
            OperatorSpec::CompositeDk(m) => *m,
            _ => {
                all_basic = false;
                break;
            }
        };
        k = k
            .checked_mul(factor)
            .ok_or_else(|| Error::OutOfRange("composed d_k index overflows".into()))?;
    }
    if all_basic {
        Ok(OperatorSpec::CompositeDk(k))
    } else {
        Ok(OperatorSpec::Chain(ops.to_vec()))
    }
}

/// Verdict of a functional-equation check over all pairs within the
/// horizon. `counterexample` is a pair `(n, m)` where the equation
/// fails, when one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCheck {
    pub holds: bool,
    pub horizon: u64,
    pub counterexample: Option<(u64, u64)>,
}

/// Checks `g(nm) = g(n) + g(m)` for all `nm <= N` (which at `n = m = 1`
/// forces `g(1) = 0`).
pub fn is_completely_additive(g: &ArithFun) -> ClosureCheck {
    let n = g.horizon();
    for a in 1..=n {
        for b in a..=n / a {
            let expect = g.at(a) + g.at(b);
            if *g.at(a * b) != expect {
                return ClosureCheck { holds: false, horizon: n, counterexample: Some((a, b)) };
            }
        }
    }
    ClosureCheck { holds: true, horizon: n, counterexample: None }
}

/// Checks `g(1) = 1` and `g(nm) = g(n) g(m)` for all `nm <= N`.
pub fn is_completely_multiplicative(g: &ArithFun) -> ClosureCheck {
    let n = g.horizon();
    if !g.at(1).is_one() {
        return ClosureCheck { holds: false, horizon: n, counterexample: Some((1, 1)) };
    }
    for a in 2..=n {
        for b in a..=n / a {
            let expect = g.at(a) * g.at(b);
            if *g.at(a * b) != expect {
                return ClosureCheck { holds: false, horizon: n, counterexample: Some((a, b)) };
            }
        }
    }
    ClosureCheck { holds: true, horizon: n, counterexample: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn basic_derivation_of_prime_indicator_is_eps() {
        let n = 64;
        let ind = ArithFun::ind_prime(n).unwrap();
        for p in [2u64, 3, 5, 7] {
            let d = apply(&OperatorSpec::BasicDeriv(p), &ind).unwrap();
            assert!(d.eq_up_to_common_horizon(&ArithFun::epsilon(n).unwrap()), "p = {p}");
        }
    }

    #[test]
    fn log_derivation_of_prime_power_indicator() {
        // dL x = L2 * (x^2 - x) for x the indicator of powers of 2
        let n = 256;
        let x = ArithFun::ind_prime_powers(2, n).unwrap();
        let lhs = apply(&OperatorSpec::LogDeriv, &x).unwrap();
        let rhs = x
            .conv_power(2)
            .unwrap()
            .sub(&x)
            .scale(&Coefficient::symbol(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_derivation_kills_eps() {
        let eps = ArithFun::epsilon(16).unwrap();
        assert!(apply(&OperatorSpec::LogDeriv, &eps).unwrap().is_zero_up_to_horizon());
    }

    #[test]
    fn dk_hat_reads_coordinates() {
        let n = 64;
        let x = ArithFun::ind_prime_powers(2, n).unwrap();
        let d4 = apply_dk_hat(4, &x).unwrap();
        assert!(d4.at(1).is_one());

        let f = ArithFun::von_mangoldt(n).unwrap();
        assert_eq!(apply_dk_hat(1, &f).unwrap(), f);

        // unnormalized dk4 at 1 carries the 2! factor
        let raw = apply(&OperatorSpec::CompositeDk(4), &f).unwrap();
        assert_eq!(raw.at(1), &(f.at(4) * &Coefficient::from_int(2)));
    }

    #[test]
    fn shift_scales_by_powers() {
        let n = 16;
        let one = ArithFun::one(n).unwrap();
        let shifted = apply(&OperatorSpec::Shift(2), &one).unwrap();
        assert_eq!(shifted.at(5).as_rational(), Some(&rat(25, 1)));
        let back = apply(&OperatorSpec::Shift(-2), &shifted).unwrap();
        assert_eq!(back, one);
    }

    #[test]
    fn pointwise_mul_powers() {
        let n = 32;
        let omega = ArithFun::omega(n).unwrap();
        let one = ArithFun::one(n).unwrap();
        let sq = apply(&OperatorSpec::PointwiseMul { g: omega.clone(), exponent: 2 }, &one).unwrap();
        assert_eq!(sq, omega.pointwise_pow(2));

        // negative powers need nonvanishing invertible values
        let err = apply(&OperatorSpec::PointwiseMul { g: omega, exponent: -1 }, &one);
        assert!(matches!(err, Err(Error::DivisionByZeroValue(_))));

        let id = ArithFun::power_id(1, n).unwrap();
        let inv = apply(&OperatorSpec::PointwiseMul { g: id, exponent: -1 }, &one).unwrap();
        assert_eq!(inv, ArithFun::power_id(-1, n).unwrap());
    }

    #[test]
    fn horizon_bookkeeping() {
        let f = ArithFun::one(10).unwrap();
        let d = apply(&OperatorSpec::BasicDeriv(3), &f).unwrap();
        assert_eq!(d.horizon(), 3);
        assert!(matches!(
            apply(&OperatorSpec::BasicDeriv(11), &f),
            Err(Error::HorizonExhausted(_))
        ));
        assert_eq!(OperatorSpec::Chain(vec![
            OperatorSpec::BasicDeriv(2),
            OperatorSpec::LogDeriv,
            OperatorSpec::DkHat(3),
        ]).shrink(), 6);
    }

    #[test]
    fn compose_folds_basic_derivations() {
        let d2 = OperatorSpec::BasicDeriv(2);
        let d3 = OperatorSpec::BasicDeriv(3);
        assert_eq!(compose(&[d2.clone(), d2.clone()]).unwrap(), OperatorSpec::CompositeDk(4));
        assert_eq!(compose(&[d2.clone(), d3.clone()]).unwrap(), OperatorSpec::CompositeDk(6));
        assert_eq!(compose(&[]).unwrap(), OperatorSpec::CompositeDk(1));
        let single = compose(&[OperatorSpec::LogDeriv]).unwrap();
        assert_eq!(single, OperatorSpec::LogDeriv);
        let mixed = compose(&[d2.clone(), OperatorSpec::LogDeriv]).unwrap();
        assert!(matches!(mixed, OperatorSpec::Chain(_)));
        assert_eq!(mixed.shrink(), 2);

        // folded composite agrees with sequential application
        let f = ArithFun::von_mangoldt(64).unwrap();
        let seq = apply(&d3, &apply(&d2, &f).unwrap()).unwrap();
        let folded = apply(&compose(&[d2, d3]).unwrap(), &f).unwrap();
        assert!(seq.eq_up_to_common_horizon(&folded));
    }

    #[test]
    fn composite_identity() {
        let f = ArithFun::omega(16).unwrap();
        assert_eq!(apply(&OperatorSpec::CompositeDk(1), &f).unwrap(), f);
    }

    #[test]
    fn closure_checks() {
        let n = 64;
        let omega = ArithFun::omega(n).unwrap();
        assert!(is_completely_additive(&omega).holds);
        assert!(!is_completely_multiplicative(&omega).holds);

        let cube = ArithFun::power_id(3, n).unwrap();
        assert!(is_completely_multiplicative(&cube).holds);
        assert!(!is_completely_additive(&cube).holds);

        let neither = ArithFun::one(n).unwrap().add(&ArithFun::e_at(2, n).unwrap());
        let add_check = is_completely_additive(&neither);
        let mul_check = is_completely_multiplicative(&neither);
        assert!(!add_check.holds && !mul_check.holds);
        assert_eq!(mul_check.counterexample, Some((2, 2)));
    }
}
