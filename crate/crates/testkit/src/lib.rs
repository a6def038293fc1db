//! Deterministic random generators for the test suites: a SplitMix64
//! generator (stable across platforms and toolchain versions, so seeded
//! tests reproduce forever) plus samplers for coefficients and
//! arithmetic functions.

use dirichlet_core::{ArithFun, Coefficient};

/// SplitMix64. Not cryptographic; chosen for total reproducibility.
#[derive(Clone, Debug)]
pub struct TestRng {
    state: u64,
}

impl TestRng {
    pub fn new(seed: u64) -> TestRng {
        TestRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi);
        lo + self.next_u64() % (hi - lo + 1)
    }

    pub fn irange(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % ((hi - lo + 1) as u64)) as i64
    }

    /// True with probability `num/den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.range(0, items.len() as u64 - 1) as usize]
    }
}

/// Small nonzero rational coefficient.
pub fn nonzero_rational(rng: &mut TestRng) -> Coefficient {
    let num = loop {
        let v = rng.irange(-6, 6);
        if v != 0 {
            break v;
        }
    };
    Coefficient::rational(num, rng.irange(1, 4))
}

/// Rational coefficient, zero with roughly the given chance (percent).
pub fn sparse_rational(rng: &mut TestRng, zero_percent: u64) -> Coefficient {
    if rng.chance(zero_percent, 100) {
        Coefficient::zero()
    } else {
        nonzero_rational(rng)
    }
}

/// Random rational-valued function, about half the entries zero.
pub fn random_fun(rng: &mut TestRng, horizon: u64) -> ArithFun {
    ArithFun::from_fn(horizon, |_| sparse_rational(rng, 50)).unwrap()
}

/// Random function with exact order `order` (first support point).
pub fn random_fun_with_order(rng: &mut TestRng, horizon: u64, order: u64) -> ArithFun {
    assert!(order >= 1 && order <= horizon);
    ArithFun::from_fn(horizon, |n| {
        if n < order {
            Coefficient::zero()
        } else if n == order {
            nonzero_rational(rng)
        } else {
            sparse_rational(rng, 60)
        }
    })
    .unwrap()
}

/// Random member of A0 (value 0 at 1).
pub fn random_a0(rng: &mut TestRng, horizon: u64) -> ArithFun {
    ArithFun::from_fn(horizon, |n| {
        if n == 1 {
            Coefficient::zero()
        } else {
            sparse_rational(rng, 40)
        }
    })
    .unwrap()
}

/// Random member of A1 (value 1 at 1).
pub fn random_a1(rng: &mut TestRng, horizon: u64) -> ArithFun {
    ArithFun::from_fn(horizon, |n| {
        if n == 1 {
            Coefficient::one()
        } else {
            sparse_rational(rng, 40)
        }
    })
    .unwrap()
}

/// Random invertible function (nonzero rational at 1).
pub fn random_invertible(rng: &mut TestRng, horizon: u64) -> ArithFun {
    ArithFun::from_fn(horizon, |n| {
        if n == 1 {
            nonzero_rational(rng)
        } else {
            sparse_rational(rng, 40)
        }
    })
    .unwrap()
}

/// Random completely additive function with rational prime values; with
/// `nonvanishing`, every prime value is positive so g(m) > 0 for m > 1.
pub fn random_additive(rng: &mut TestRng, horizon: u64, nonvanishing: bool) -> ArithFun {
    let primes = dirichlet_core::numtheory::primes_up_to(horizon);
    let values: Vec<(u64, Coefficient)> = primes
        .iter()
        .map(|&p| {
            let c = if nonvanishing {
                Coefficient::rational(rng.irange(1, 5), rng.irange(1, 3))
            } else {
                sparse_rational(rng, 25)
            };
            (p, c)
        })
        .collect();
    dirichlet_core::numtheory::build_completely_additive(&values, horizon).unwrap()
}

/// Random completely multiplicative function with nonzero rational
/// prime values (hence nowhere vanishing).
pub fn random_multiplicative(rng: &mut TestRng, horizon: u64) -> ArithFun {
    let primes = dirichlet_core::numtheory::primes_up_to(horizon);
    let values: Vec<(u64, Coefficient)> =
        primes.iter().map(|&p| (p, nonzero_rational(rng))).collect();
    dirichlet_core::numtheory::build_completely_multiplicative(&values, horizon).unwrap()
}
