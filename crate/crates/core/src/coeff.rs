//! Exact coefficients: arbitrary-precision rationals extended by formal
//! logarithm symbols `L_p`, one per prime.
//!
//! A [`Coefficient`] is a sparse polynomial over the rationals in the
//! symbols `L2, L3, L5, ...` standing for `log 2, log 3, log 5, ...`.
//! Keeping the logarithms formal makes every zero test in the crate an
//! exact polynomial identity: the `L_p` are treated as algebraically
//! independent (the `log p` are known to be Q-linearly independent; full
//! algebraic independence is a working hypothesis, so a "nonzero" verdict
//! about a value involving products of logs is conditional on it).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

mod numeric;

pub use numeric::{decimal_string, NumericEval};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// A power product of prime-indexed symbols, kept sorted by prime with
/// strictly positive exponents. The empty product is the monomial 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(u64, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    /// The symbol `L_p`. The index must be prime; this is a programmer
    /// contract, checked here because every constructor funnels through.
    pub fn symbol(p: u64) -> Self {
        assert!(crate::numtheory::is_prime(p), "L_{p}: index must be prime");
        Monomial { factors: vec![(p, 1)] }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (p, e) = self.factors[i];
            let (q, f) = other.factors[j];
            match p.cmp(&q) {
                Ordering::Less => {
                    out.push((p, e));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((q, f));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((p, e + f));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self.factors.iter().map(|&(p, e)| (p, e * k)).collect(),
        }
    }

    fn from_factors(mut factors: Vec<(u64, u32)>) -> Monomial {
        factors.sort_unstable_by_key(|&(p, _)| p);
        factors.retain(|&(_, e)| e > 0);
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Monomial { factors: merged }
    }
}

// Graded lexicographic order by prime: lower total degree first, then
// the exponent vectors compared prime by prime. This fixes the canonical
// term order used for display, hashing and pivot tie-breaks.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(p, e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "L{p}")?;
            } else {
                write!(f, "L{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// An exact element of Q[L2, L3, L5, ...] in canonical sparse form:
/// no stored rational is zero and monomial keys are unique, so equality
/// is plain structural comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coefficient {
    terms: BTreeMap<Monomial, Rational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Coefficient::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::from_rational(int(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Monomial::one(), q);
        }
        Coefficient { terms }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Coefficient::from_rational(rat(num, den))
    }

    /// The symbol `L_p` (p prime).
    pub fn symbol(p: u64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::symbol(p), Rational::one());
        Coefficient { terms }
    }

    pub fn term(q: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(m, q);
        }
        Coefficient { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map_or(false, |q| q.is_one())
    }

    /// Some(q) iff the coefficient is the plain rational q (including 0).
    pub fn as_rational(&self) -> Option<&Rational> {
        static ZERO: std::sync::OnceLock<Rational> = std::sync::OnceLock::new();
        if self.terms.is_empty() {
            return Some(ZERO.get_or_init(Rational::zero));
        }
        if self.terms.len() == 1 {
            let (m, q) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(q);
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest total degree in the logarithm symbols (0 for rationals).
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn insert_add(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &q;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// self += a * b, without materializing the intermediate product.
    /// This is the inner step of every convolution loop.
    pub fn add_mul_assign(&mut self, a: &Coefficient, b: &Coefficient) {
        for (ma, qa) in &a.terms {
            for (mb, qb) in &b.terms {
                self.insert_add(ma.mul(mb), qa * qb);
            }
        }
    }

    pub fn pow(&self, k: u32) -> Coefficient {
        let mut acc = Coefficient::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse, defined exactly for nonzero rationals
    /// (the units of the polynomial ring).
    pub fn inverse(&self) -> Option<Coefficient> {
        let q = self.as_rational()?;
        if q.is_zero() {
            return None;
        }
        Some(Coefficient::from_rational(q.recip()))
    }

    /// Integer power with negative exponents allowed when invertible.
    pub fn powi(&self, k: i64) -> Result<Coefficient> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            let inv = self.inverse().ok_or_else(|| {
                Error::DivisionByZeroValue(format!(
                    "cannot raise `{self}` to the power {k}: value is not an invertible rational"
                ))
            })?;
            Ok(inv.pow((-k) as u32))
        }
    }

    /// Substitutes `L_p -> log p` with rigorous interval enclosures and
    /// returns the midpoint together with a radius bounding the error.
    /// `precision` is the targeted number of correct decimal digits.
    pub fn eval_numeric(&self, precision: u32) -> NumericEval {
        numeric::eval(self, precision.max(1))
    }

    /// Flat textual form, e.g. `5/6 + 2*L2*L3^2`. Round-trips through
    /// [`Coefficient::from_str`] and through the expression parser.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, q) in &self.terms {
            let neg = q.is_negative();
            let abs = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.insert_add(m.clone(), q.clone());
        }
        out
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.insert_add(m.clone(), -q.clone());
        }
        out
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        out.add_mul_assign(self, rhs);
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q.clone())).collect(),
        }
    }
}

impl Add for Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: Coefficient) -> Coefficient {
        &self + &rhs
    }
}

impl Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Coefficient) -> Coefficient {
        &self - &rhs
    }
}

impl Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Coefficient) -> Coefficient {
        &self * &rhs
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        for (m, q) in &rhs.terms {
            self.insert_add(m.clone(), q.clone());
        }
    }
}

impl SubAssign<&Coefficient> for Coefficient {
    fn sub_assign(&mut self, rhs: &Coefficient) {
        for (m, q) in &rhs.terms {
            self.insert_add(m.clone(), -q.clone());
        }
    }
}

/// Parser for the flat textual form produced by `Display`:
///
/// ```text
/// coeff    := ["-"] term (("+" | "-") term)*
/// term     := rational ["*" monomial] | monomial
/// monomial := lsym ("*" lsym)*
/// lsym     := "L" digits ["^" digits]
/// rational := digits ["/" digits]
/// ```
impl FromStr for Coefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Coefficient> {
        let mut p = CoeffParser { input: s.as_bytes(), pos: 0 };
        p.skip_ws();
        let mut acc = Coefficient::zero();
        let mut sign = if p.eat(b'-') { -1i64 } else { 1 };
        loop {
            let term = p.parse_term()?;
            acc += &(&term * &Coefficient::from_int(sign));
            p.skip_ws();
            if p.eat(b'+') {
                sign = 1;
            } else if p.eat(b'-') {
                sign = -1;
            } else {
                break;
            }
        }
        p.skip_ws();
        if p.pos != p.input.len() {
            return Err(p.err("end of input"));
        }
        Ok(acc)
    }
}

struct CoeffParser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> CoeffParser<'a> {
    fn err(&self, expected: &str) -> Error {
        let found = self
            .input
            .get(self.pos)
            .map(|&b| (b as char).to_string())
            .unwrap_or_else(|| "end of input".into());
        Error::Syntax { position: self.pos, expected: expected.into(), found }
    }

    fn skip_ws(&mut self) {
        while self.input.get(self.pos).map_or(false, |b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.input.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_digits(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.input.get(self.pos).map_or(false, |b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("digits"));
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err("a smaller integer"))
    }

    fn parse_bigint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.input.get(self.pos).map_or(false, |b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("digits"));
        }
        Ok(BigInt::parse_bytes(&self.input[start..self.pos], 10).unwrap())
    }

    fn parse_lsym(&mut self) -> Result<(u64, u32)> {
        if !self.eat(b'L') {
            return Err(self.err("`L`"));
        }
        let p = self.parse_digits()?;
        if !crate::numtheory::is_prime(p) {
            return Err(Error::Syntax {
                position: self.pos,
                expected: "a prime index for an L symbol".into(),
                found: p.to_string(),
            });
        }
        let e = if self.eat(b'^') { self.parse_digits()? as u32 } else { 1 };
        Ok((p, e))
    }

    fn parse_term(&mut self) -> Result<Coefficient> {
        self.skip_ws();
        let mut q = Rational::one();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        loop {
            self.skip_ws();
            match self.input.get(self.pos) {
                Some(b'L') => factors.push(self.parse_lsym()?),
                Some(b) if b.is_ascii_digit() => {
                    let num = self.parse_bigint()?;
                    let den = if self.eat(b'/') { self.parse_bigint()? } else { BigInt::one() };
                    if den.is_zero() {
                        return Err(self.err("a nonzero denominator"));
                    }
                    q *= Rational::new(num, den);
                }
                _ => return Err(self.err("a rational or an L symbol")),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok(Coefficient::term(q, Monomial::from_factors(factors)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(p: u64) -> Coefficient {
        Coefficient::symbol(p)
    }

    #[test]
    fn rational_arithmetic() {
        let a = Coefficient::rational(1, 2);
        let b = Coefficient::rational(1, 3);
        assert_eq!(&a + &b, Coefficient::rational(5, 6));
        assert_eq!(&a - &a, Coefficient::zero());
    }

    #[test]
    fn monomial_exponent_addition() {
        let sq = &l(2) * &l(2);
        assert_eq!(sq.to_string(), "L2^2");
        assert_eq!(sq.degree(), 2);
    }

    #[test]
    fn cancellation_to_canonical_form() {
        let s = &(&l(2) + &l(3)) - &l(3);
        assert_eq!(s, l(2));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn zero_tests_are_exact() {
        assert!(Coefficient::zero().is_zero());
        assert!((&l(2) - &l(2)).is_zero());
        assert!(!(&l(2) - &l(3)).is_zero());
    }

    #[test]
    fn rational_view() {
        assert_eq!(Coefficient::rational(3, 4).as_rational(), Some(&rat(3, 4)));
        assert_eq!(l(2).as_rational(), None);
        assert!(Coefficient::zero().as_rational().unwrap().is_zero());
    }

    #[test]
    fn inverse_is_rational_only() {
        assert_eq!(
            Coefficient::rational(2, 3).inverse(),
            Some(Coefficient::rational(3, 2))
        );
        assert_eq!(l(2).inverse(), None);
        assert_eq!(Coefficient::zero().inverse(), None);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let samples = [
            Coefficient::zero(),
            Coefficient::one(),
            Coefficient::rational(-5, 6),
            l(2),
            &Coefficient::rational(5, 6)
                + &(&Coefficient::from_int(2) * &(&l(2) * &l(3).pow(2))),
            &(-&l(2)) + &Coefficient::rational(7, 3),
            &l(2).pow(3) * &l(5),
        ];
        for c in &samples {
            let text = c.to_string();
            let back: Coefficient = text.parse().unwrap();
            assert_eq!(&back, c, "round-trip failed for `{text}`");
        }
        assert_eq!(
            (&Coefficient::rational(5, 6)
                + &(&Coefficient::from_int(2) * &(&l(2) * &l(3).pow(2))))
                .to_string(),
            "5/6 + 2*L2*L3^2"
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<Coefficient>().is_err());
        assert!("L4".parse::<Coefficient>().is_err());
        assert!("1/0".parse::<Coefficient>().is_err());
        assert!("2 +".parse::<Coefficient>().is_err());
        assert!("2 $ 3".parse::<Coefficient>().is_err());
    }

    #[test]
    fn graded_lex_ordering() {
        let m1 = Monomial::one();
        let l2 = Monomial::symbol(2);
        let l3 = Monomial::symbol(3);
        let l2sq = l2.pow(2);
        assert!(m1 < l2);
        assert!(l2 < l3);
        assert!(l3 < l2sq);
        assert!(l2.mul(&l3) < l2sq);
    }
}
