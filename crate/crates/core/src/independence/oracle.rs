//! Brute-force polynomial-relation oracle: enumerates convolution
//! monomials of the given functions up to a total degree, eliminates
//! their value rows over the coefficient fraction field (by
//! cross-multiplication, staying in the ring), and reports either a
//! candidate relation or the independence-measure profile.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arithfun::ArithFun;
use crate::coeff::{Coefficient, Rational};
use crate::error::{Error, Result};

use super::{Certificate, Verdict, Witness};

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Maximum number of monomials `C(n + d, d)` the oracle will build.
    pub monomial_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { monomial_cap: 500 }
    }
}

/// A polynomial in the input functions, as (coefficient, exponent
/// vector) terms in descending graded-lex order. Coefficients live in
/// the exact coefficient ring; when they are all rational the
/// polynomial is normalized to coprime integers with positive leading
/// coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationPoly {
    nvars: usize,
    terms: Vec<(Coefficient, Vec<u32>)>,
}

fn grlex_desc(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    db.cmp(&da).then_with(|| b.cmp(a)).reverse().reverse()
}

impl RelationPoly {
    fn from_combo(monomials: &[Vec<u32>], combo: &[Coefficient], nvars: usize) -> RelationPoly {
        let mut terms: Vec<(Coefficient, Vec<u32>)> = monomials
            .iter()
            .zip(combo)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (c.clone(), m.clone()))
            .collect();
        terms.sort_by(|(_, ma), (_, mb)| grlex_desc(ma, mb));
        let mut poly = RelationPoly { nvars, terms };
        poly.normalize();
        poly
    }

    fn normalize(&mut self) {
        let rationals: Option<Vec<&Rational>> =
            self.terms.iter().map(|(c, _)| c.as_rational()).collect();
        let Some(qs) = rationals else { return };
        if qs.is_empty() {
            return;
        }
        let lcm_den = qs
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let gcd_num = qs.iter().fold(BigInt::zero(), |acc, q| {
            acc.gcd(&(q.numer() * &lcm_den / q.denom()))
        });
        if gcd_num.is_zero() {
            return;
        }
        let mut scale = Rational::new(lcm_den, gcd_num);
        if qs[0].is_negative() {
            scale = -scale;
        }
        let scale = Coefficient::from_rational(scale);
        for (c, _) in &mut self.terms {
            *c = &*c * &scale;
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Coefficient, Vec<u32>)] {
        &self.terms
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, m)| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Evaluates the polynomial at the functions through the ring
    /// operations, independent of the elimination that produced it.
    pub fn eval(&self, fs: &[ArithFun]) -> Result<ArithFun> {
        assert_eq!(fs.len(), self.nvars);
        let horizon = fs.iter().map(ArithFun::horizon).min().unwrap();
        let mut acc = ArithFun::zero(horizon)?;
        for (c, exps) in &self.terms {
            let mut term = ArithFun::epsilon(horizon)?;
            for (f, &e) in fs.iter().zip(exps) {
                for _ in 0..e {
                    term = term.conv(f);
                }
            }
            acc = acc.add(&term.scale(c));
        }
        Ok(acc)
    }
}

fn var_name(nvars: usize, i: usize) -> String {
    if nvars <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for RelationPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (c, exps)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        var_name(self.nvars, i)
                    } else {
                        format!("{}^{e}", var_name(self.nvars, i))
                    }
                })
                .collect();
            let mono = mono.join("*");
            match c.as_rational() {
                Some(q) => {
                    let neg = q.is_negative();
                    let abs = q.abs();
                    if pos == 0 {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else if neg {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    if mono.is_empty() {
                        write!(f, "{abs}")?;
                    } else if abs.is_one() {
                        write!(f, "{mono}")?;
                    } else {
                        write!(f, "{abs}*{mono}")?;
                    }
                }
                None => {
                    if pos > 0 {
                        write!(f, " + ")?;
                    }
                    if mono.is_empty() {
                        write!(f, "({c})")?;
                    } else {
                        write!(f, "({c})*{mono}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Independence measure at one degree: the norm of the best nonzero
/// combination with a nonconstant component (`0` when a combination
/// vanishes up to the horizon), with the combination that achieves it.
#[derive(Clone, Debug)]
pub struct DegreeMu {
    pub degree: u32,
    pub mu: Rational,
    /// Order of the best combination; `None` means it vanishes up to
    /// the horizon.
    pub order: Option<u64>,
    pub witness: RelationPoly,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub certificate: Certificate,
    pub horizon: u64,
    pub profile: Vec<DegreeMu>,
}

impl OracleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "certificate": self.certificate.to_json(),
            "horizon": self.horizon,
            "mu_profile": self.profile.iter().map(|d| json!({
                "degree": d.degree,
                "mu": d.mu.to_string(),
                "order": d.order,
                "witness": d.witness.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    usize::try_from(acc).ok()
}

/// Exponent vectors of total degree exactly `t`, in descending lex
/// order (so `x`-heavy monomials come first).
fn monomials_of_degree(nvars: usize, t: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, t: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == nvars - 1 {
            current.push(t);
            out.push(current.clone());
            current.pop();
            return;
        }
        for e in (0..=t).rev() {
            current.push(e);
            rec(nvars, t - e, pos + 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, t, 0, &mut Vec::new(), &mut out);
    out
}

/// Scales a row so its rational content is 1 (coprime integers); a
/// positive rescale never changes zero patterns or pivots.
fn normalize_row(vals: &mut [Coefficient], combo: &mut [Coefficient]) {
    let mut lcm_den = BigInt::one();
    let mut gcd_num = BigInt::zero();
    for c in vals.iter().chain(combo.iter()) {
        for (_, q) in c.terms() {
            lcm_den = lcm_den.lcm(q.denom());
        }
    }
    for c in vals.iter().chain(combo.iter()) {
        for (_, q) in c.terms() {
            gcd_num = gcd_num.gcd(&(q.numer() * &lcm_den / q.denom()));
        }
    }
    if gcd_num.is_zero() || (gcd_num.is_one() && lcm_den.is_one()) {
        return;
    }
    let scale = Coefficient::from_rational(Rational::new(lcm_den, gcd_num));
    for c in vals.iter_mut().chain(combo.iter_mut()) {
        *c = &*c * &scale;
    }
}

struct EchelonRow {
    pivot: u64,
    vals: Vec<Coefficient>,
    combo: Vec<Coefficient>,
    nonconstant: bool,
}

/// Searches for polynomial relations of total degree `<= degree` among
/// the functions, and computes the order profile of the best nonzero
/// combinations degree by degree. Relations found are candidates
/// "up to the horizon", verified by re-evaluation before being
/// returned; they are never a proof of dependence.
pub fn dependence_oracle(
    fs: &[ArithFun],
    degree: u32,
    config: &OracleConfig,
) -> Result<OracleReport> {
    if fs.is_empty() || degree < 1 {
        return Err(Error::InvalidParams(
            "oracle needs at least one function and degree >= 1".into(),
        ));
    }
    let nvars = fs.len();
    let horizon = fs.iter().map(ArithFun::horizon).min().unwrap();
    let count = binomial(nvars + degree as usize, degree as usize)
        .unwrap_or(usize::MAX);
    if count > config.monomial_cap {
        return Err(Error::CapExceeded { count, cap: config.monomial_cap });
    }

    let by_degree: Vec<Vec<Vec<u32>>> =
        (0..=degree).map(|t| monomials_of_degree(nvars, t)).collect();
    let all_monomials: Vec<Vec<u32>> = by_degree.iter().flatten().cloned().collect();
    let total = all_monomials.len();

    // convolution monomials f^alpha, built incrementally
    let mut cache: HashMap<Vec<u32>, ArithFun> = HashMap::new();
    cache.insert(vec![0; nvars], ArithFun::epsilon(horizon)?);
    let monomial_fun = |alpha: &[u32], cache: &mut HashMap<Vec<u32>, ArithFun>| -> ArithFun {
        if let Some(f) = cache.get(alpha) {
            return f.clone();
        }
        let i = alpha.iter().position(|&e| e > 0).expect("nonzero exponent");
        let mut lower = alpha.to_vec();
        lower[i] -= 1;
        let prev = if let Some(f) = cache.get(&lower) {
            f.clone()
        } else {
            // recursion depth is the total degree; keep it iterative
            let mut base = ArithFun::epsilon(horizon).unwrap();
            for (f, &e) in fs.iter().zip(&lower) {
                for _ in 0..e {
                    base = base.conv(f);
                }
            }
            cache.insert(lower.clone(), base.clone());
            base
        };
        let f = prev.conv(&fs[i]);
        cache.insert(alpha.to_vec(), f.clone());
        f
    };

    let mut echelon: Vec<EchelonRow> = Vec::new();
    let mut first_relation: Option<RelationPoly> = None;
    let mut profile: Vec<DegreeMu> = Vec::new();
    let mut mono_idx = 0usize;

    for t in 0..=degree {
        if first_relation.is_none() {
            'mono: for alpha in &by_degree[t as usize] {
                let f = monomial_fun(alpha, &mut cache);
                let mut vals: Vec<Coefficient> =
                    (1..=horizon).map(|k| f.at(k).clone()).collect();
                let mut combo = vec![Coefficient::zero(); total];
                combo[mono_idx] = Coefficient::one();
                mono_idx += 1;

                for row in &echelon {
                    let a = vals[(row.pivot - 1) as usize].clone();
                    if a.is_zero() {
                        continue;
                    }
                    let p = row.vals[(row.pivot - 1) as usize].clone();
                    for (v, rv) in vals.iter_mut().zip(&row.vals) {
                        *v = &(&*v * &p) - &(rv * &a);
                    }
                    for (c, rc) in combo.iter_mut().zip(&row.combo) {
                        *c = &(&*c * &p) - &(rc * &a);
                    }
                    normalize_row(&mut vals, &mut combo);
                }

                match vals.iter().position(|v| !v.is_zero()) {
                    Some(pos) => {
                        let nonconstant = combo[1..].iter().any(|c| !c.is_zero());
                        let row = EchelonRow {
                            pivot: (pos + 1) as u64,
                            vals,
                            combo,
                            nonconstant,
                        };
                        let at = echelon
                            .binary_search_by_key(&row.pivot, |r| r.pivot)
                            .expect_err("pivots are distinct in echelon form");
                        echelon.insert(at, row);
                    }
                    None => {
                        let poly = RelationPoly::from_combo(&all_monomials, &combo, nvars);
                        let check = poly.eval(fs)?;
                        assert!(
                            check.is_zero_up_to_horizon(),
                            "oracle relation failed re-evaluation: {poly}"
                        );
                        first_relation = Some(poly);
                        break 'mono;
                    }
                }
            }
        }

        if t >= 1 {
            match &first_relation {
                Some(poly) => profile.push(DegreeMu {
                    degree: t,
                    mu: Rational::zero(),
                    order: None,
                    witness: poly.clone(),
                }),
                None => {
                    let best = echelon
                        .iter()
                        .filter(|r| r.nonconstant)
                        .max_by_key(|r| r.pivot)
                        .expect("degree >= 1 always yields a nonconstant row");
                    profile.push(DegreeMu {
                        degree: t,
                        mu: Rational::new(BigInt::one(), BigInt::from(best.pivot)),
                        order: Some(best.pivot),
                        witness: RelationPoly::from_combo(&all_monomials, &best.combo, nvars),
                    });
                }
            }
        }
    }

    let certificate = match &first_relation {
        Some(poly) => Certificate {
            verdict: Verdict::DependentRelationFound,
            method: "oracle".into(),
            witness: Some(Witness::Relation { poly: poly.clone() }),
            horizon_used: horizon,
            caveats: vec![format!(
                "relation vanishes up to horizon {horizon}; candidate only, not a dependence proof"
            )],
        },
        None => Certificate {
            verdict: Verdict::Inconclusive,
            method: "oracle".into(),
            witness: None,
            horizon_used: horizon,
            caveats: vec![format!(
                "no polynomial relation of total degree <= {degree} found at horizon {horizon}"
            )],
        },
    };

    Ok(OracleReport { certificate, horizon, profile })
}
