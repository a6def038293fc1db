//! Exponential and logarithm on the convolution ring: mutually inverse
//! group isomorphisms between (A0, +) and (A1, *), plus the power
//! `f^g = Exp(g * Log f)`.
//!
//! Exact mode restricts Exp to `f(1) = 0` and Log to `f(1) = 1`: the
//! general extension would adjoin transcendental constants like `e`.
//! For `g` of order >= 2 the series truncate at `floor(log2 N)` terms,
//! because `v(g^k) >= 2^k`; no tolerance is involved anywhere.

use crate::arithfun::ArithFun;
use crate::coeff::Coefficient;
use crate::error::{Error, Result};

fn series_depth(horizon: u64) -> u32 {
    63 - horizon.leading_zeros()
}

/// `Exp f = sum_k f^k / k!` for `f(1) = 0`; lands in A1.
pub fn exp0(f: &ArithFun) -> Result<ArithFun> {
    if !f.at(1).is_zero() {
        return Err(Error::NotInA0(format!("value at 1 is `{}`", f.at(1))));
    }
    let n = f.horizon();
    let mut acc = ArithFun::epsilon(n)?;
    let mut term = ArithFun::epsilon(n)?;
    for k in 1..=series_depth(n) as i64 {
        term = term.conv(f).scale(&Coefficient::rational(1, k));
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The Rearick logarithm `Log f = sum_k (-1)^{k+1} (f - eps)^k / k` for
/// `f(1) = 1`; lands in A0 and inverts [`exp0`].
pub fn log1(f: &ArithFun) -> Result<ArithFun> {
    if !f.at(1).is_one() {
        return Err(Error::NotInA1(format!("value at 1 is `{}`", f.at(1))));
    }
    let n = f.horizon();
    let g = f.sub(&ArithFun::epsilon(n)?);
    let mut acc = ArithFun::zero(n)?;
    let mut pow = ArithFun::epsilon(n)?;
    for k in 1..=series_depth(n) as i64 {
        pow = pow.conv(&g);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc = acc.add(&pow.scale(&Coefficient::rational(sign, k)));
    }
    Ok(acc)
}

/// `f^g = Exp(g * Log f)`, defined for `f(1) = 1`.
pub fn power_fg(f: &ArithFun, g: &ArithFun) -> Result<ArithFun> {
    exp0(&g.conv(&log1(f)?))
}

/// Exactly iterable Exp chain: depth 1 is Exp (needs A0), depth -1 is
/// Log (needs A1), depth 0 is the identity. Deeper exact chains do not
/// exist because `Exp f` never lands back in A0.
pub fn iterate_exp(f: &ArithFun, depth: i64) -> Result<ArithFun> {
    match depth {
        0 => Ok(f.clone()),
        1 => exp0(f),
        -1 => log1(f),
        other => Err(Error::UnsupportedDepth(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn exp_of_zero_is_eps() {
        let n = 32;
        let zero = ArithFun::zero(n).unwrap();
        assert_eq!(exp0(&zero).unwrap(), ArithFun::epsilon(n).unwrap());
    }

    #[test]
    fn exp_of_point_mass() {
        let n = 64;
        let e2 = ArithFun::e_at(2, n).unwrap();
        let exp = exp0(&e2).unwrap();
        // e2^k = e(2^k), so the value at 2^k is 1/k!
        let mut factorial = 1i64;
        for k in 0..=6 {
            if k > 0 {
                factorial *= k;
            }
            assert_eq!(exp.at(1 << k).as_rational(), Some(&rat(1, factorial)));
        }
        assert!(exp.at(6).is_zero());
    }

    #[test]
    fn exp_of_kappa_is_one() {
        let n = 64;
        let kappa = ArithFun::kappa(n).unwrap();
        assert_eq!(exp0(&kappa).unwrap(), ArithFun::one(n).unwrap());
    }

    #[test]
    fn log_of_one_is_kappa() {
        let n = 64;
        let one = ArithFun::one(n).unwrap();
        assert_eq!(log1(&one).unwrap(), ArithFun::kappa(n).unwrap());
    }

    #[test]
    fn log_of_eps_is_zero() {
        let n = 16;
        let eps = ArithFun::epsilon(n).unwrap();
        assert!(log1(&eps).unwrap().is_zero_up_to_horizon());
    }

    #[test]
    fn log_of_prime_power_indicator() {
        let n = 64;
        let x = ArithFun::ind_prime_powers(2, n).unwrap();
        let log = log1(&x).unwrap();
        for k in 1..=6 {
            assert_eq!(log.at(1 << k).as_rational(), Some(&rat(1, k)), "2^{k}");
        }
        assert!(log.at(6).is_zero());
        // round trip back
        assert_eq!(exp0(&log).unwrap(), x);
    }

    #[test]
    fn domain_errors() {
        let one = ArithFun::one(8).unwrap();
        let zero = ArithFun::zero(8).unwrap();
        assert!(matches!(exp0(&one), Err(Error::NotInA0(_))));
        assert!(matches!(log1(&zero), Err(Error::NotInA1(_))));
    }

    #[test]
    fn power_examples() {
        let n = 32;
        let one = ArithFun::one(n).unwrap();
        let eps = ArithFun::epsilon(n).unwrap();
        assert_eq!(power_fg(&one, &eps).unwrap(), one);

        let two_eps = eps.scale(&Coefficient::from_int(2));
        assert_eq!(
            power_fg(&one, &two_eps).unwrap(),
            one.conv_power(2).unwrap()
        );
    }

    #[test]
    fn iteration_depths() {
        let n = 32;
        let one = ArithFun::one(n).unwrap();
        let kappa = ArithFun::kappa(n).unwrap();
        assert_eq!(iterate_exp(&kappa, 1).unwrap(), one);
        assert_eq!(iterate_exp(&one, -1).unwrap(), kappa);
        assert_eq!(iterate_exp(&kappa, 0).unwrap(), kappa);
        assert!(matches!(iterate_exp(&kappa, 2), Err(Error::UnsupportedDepth(2))));
        assert!(matches!(iterate_exp(&one, -2), Err(Error::UnsupportedDepth(-2))));
    }

    #[test]
    fn horizon_one_edge_case() {
        let f = ArithFun::zero(1).unwrap();
        assert_eq!(exp0(&f).unwrap(), ArithFun::epsilon(1).unwrap());
        assert!(log1(&ArithFun::one(1).unwrap()).unwrap().is_zero_up_to_horizon());
    }
}
