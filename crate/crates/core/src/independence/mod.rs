//! Algebraic-independence certificates: Jacobian and Wronskian
//! determinants in the convolution ring, scalar value tests, order and
//! support criteria, fraction-free rank, and a brute-force
//! polynomial-relation oracle cross-checking them all.
//!
//! Every verdict is one-sided: an exact nonzero witness certifies
//! independence, while a determinant that vanishes up to the horizon is
//! only ever `Inconclusive`, and an oracle relation is a candidate
//! "up to horizon", never a proof of dependence.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::arithfun::ArithFun;
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::numtheory::{self, MultIndep};
use crate::operators::{self, OperatorSpec};

mod oracle;

pub use oracle::{dependence_oracle, DegreeMu, OracleConfig, OracleReport, RelationPoly};

pub const MAX_DET_DIM: usize = 6;

/// A rectangular grid of arithmetic functions; the usable horizon of
/// any matrix computation is the minimum over the entries.
#[derive(Clone, Debug)]
pub struct FunMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ArithFun>,
}

impl FunMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ArithFun>) -> Result<FunMatrix> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::InvalidParams(format!(
                "matrix shape {rows}x{cols} does not fit {} entries",
                entries.len()
            )));
        }
        Ok(FunMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &ArithFun {
        &self.entries[i * self.cols + j]
    }

    pub fn common_horizon(&self) -> u64 {
        self.entries.iter().map(ArithFun::horizon).min().unwrap()
    }
}

/// Outcome of a certificate run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    IndependentCertified,
    DependentRelationFound,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::IndependentCertified => "IndependentCertified",
            Verdict::DependentRelationFound => "DependentRelationFound",
            Verdict::Inconclusive => "Inconclusive",
        }
    }

    /// Process exit code used by the CLI: 0 certified, 2 inconclusive,
    /// 3 relation found.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::IndependentCertified => 0,
            Verdict::Inconclusive => 2,
            Verdict::DependentRelationFound => 3,
        }
    }
}

/// Witness data backing a verdict; every `IndependentCertified`
/// certificate carries one that re-evaluates to the stored value.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Nonzero value of a determinant in the convolution ring.
    IndexValue { index: u64, value: Coefficient },
    /// Nonzero scalar (a determinant or sum evaluated in the
    /// coefficient ring).
    Scalar { value: Coefficient },
    /// Candidate polynomial relation among the functions.
    Relation { poly: RelationPoly },
    /// Integer exponents with `prod order_i^{k_i} = 1`.
    IntegerRelation { exponents: Vec<i64> },
    /// Orders and their prime-exponent matrix, of full row rank.
    ExponentMatrix { orders: Vec<u64>, primes: Vec<u64>, matrix: Vec<Vec<u32>> },
    /// Per-function prime assignments `(p_j, witness support element)`.
    PrimeSupport { assignments: Vec<(u64, u64)> },
}

impl Witness {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::IndexValue { index, value } => {
                json!({"index": index, "value": value.to_string()})
            }
            Witness::Scalar { value } => json!({"value": value.to_string()}),
            Witness::Relation { poly } => json!({"relation": poly.to_string()}),
            Witness::IntegerRelation { exponents } => json!({"relation_exponents": exponents}),
            Witness::ExponentMatrix { orders, primes, matrix } => {
                json!({"orders": orders, "primes": primes, "matrix": matrix})
            }
            Witness::PrimeSupport { assignments } => json!({
                "assignments": assignments
                    .iter()
                    .map(|&(p, s)| json!({"prime": p, "support_element": s}))
                    .collect::<Vec<_>>()
            }),
        }
    }
}

/// An independence verdict with the criterion used, witness data, the
/// horizon it holds at, and any caveats (e.g. one-sided support checks).
#[derive(Clone, Debug)]
pub struct Certificate {
    pub verdict: Verdict,
    pub method: String,
    pub witness: Option<Witness>,
    pub horizon_used: u64,
    pub caveats: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "method": self.method,
            "witness": self.witness.as_ref().map(|w| w.to_json()).unwrap_or(Value::Null),
            "horizon": self.horizon_used,
            "caveats": self.caveats,
        })
    }
}

fn permutations_with_sign(n: usize) -> Vec<(i64, Vec<usize>)> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        n: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<(i64, Vec<usize>)>,
    ) {
        if current.len() == n {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if current[i] > current[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            out.push((sign, current.clone()));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(n, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// Determinant in the convolution ring by Leibniz expansion (n <= 6),
/// exact up to the common horizon of the entries.
pub fn conv_det(m: &FunMatrix) -> Result<ArithFun> {
    if m.rows != m.cols {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    if m.rows > MAX_DET_DIM {
        return Err(Error::DimensionTooLarge(m.rows));
    }
    let n = m.rows;
    let horizon = m.common_horizon();
    let mut acc = ArithFun::zero(horizon)?;
    for (sign, perm) in permutations_with_sign(n) {
        let mut prod = m.at(0, perm[0]).clone();
        for (i, &j) in perm.iter().enumerate().skip(1) {
            prod = prod.conv(m.at(i, j));
        }
        acc = if sign > 0 { acc.add(&prod) } else { acc.sub(&prod) };
    }
    acc.truncated(horizon)
}

/// Determinant of a scalar coefficient matrix by Leibniz expansion.
pub fn scalar_det(entries: &[Vec<Coefficient>]) -> Result<Coefficient> {
    let n = entries.len();
    if n > MAX_DET_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    if entries.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare { rows: n, cols: entries.first().map_or(0, Vec::len) });
    }
    let mut acc = Coefficient::zero();
    for (sign, perm) in permutations_with_sign(n) {
        let mut prod = Coefficient::from_int(sign);
        for (i, &j) in perm.iter().enumerate() {
            prod = &prod * &entries[i][j];
        }
        acc += &prod;
    }
    Ok(acc)
}

/// Least index with a nonzero value, plus that value; `None` means zero
/// up to the horizon.
pub fn nonzero_witness(f: &ArithFun) -> Option<(u64, Coefficient)> {
    f.first_nonzero().map(|(m, v)| (m, v.clone()))
}

fn horizon_caveat(h: u64) -> String {
    format!("determinant vanishes up to horizon {h}; not a dependence proof")
}

/// Jacobian criterion: a nonzero `det(D_j f_i)` in the convolution ring
/// certifies algebraic independence of the `f_i` over the joint kernel
/// of the derivations.
pub fn certify_jacobian(fs: &[ArithFun], ops: &[OperatorSpec]) -> Result<Certificate> {
    let n = fs.len();
    if n == 0 || n != ops.len() {
        return Err(Error::InvalidParams(format!(
            "need equally many functions and derivations, got {n} and {}",
            ops.len()
        )));
    }
    if n > MAX_DET_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let mut entries = Vec::with_capacity(n * n);
    for f in fs {
        for op in ops {
            entries.push(operators::apply(op, f)?);
        }
    }
    let det = conv_det(&FunMatrix::new(n, n, entries)?)?;
    let horizon_used = det.horizon();
    Ok(match nonzero_witness(&det) {
        Some((index, value)) => Certificate {
            verdict: Verdict::IndependentCertified,
            method: "jacobian".into(),
            witness: Some(Witness::IndexValue { index, value }),
            horizon_used,
            caveats: vec![],
        },
        None => Certificate {
            verdict: Verdict::Inconclusive,
            method: "jacobian".into(),
            witness: None,
            horizon_used,
            caveats: vec![horizon_caveat(horizon_used)],
        },
    })
}

/// Which scalar value test to run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueTestMode {
    /// `det(f_i(p_j)) != 0` certifies independence.
    AtPrimes,
    /// The weighted sum over factorizations of `m` expressing the value
    /// of the basic-derivation Jacobian at `m`.
    Gvj { m: u64 },
    /// `det((d_{p_j} f_i)(m_j)) != 0` under `m_j <= v(d_{p_j} f_i)`;
    /// `ms = None` picks the minimal valid anchors.
    OrderAnchored { ms: Option<Vec<u64>> },
}

fn check_distinct_primes(primes: &[u64]) -> Result<()> {
    let set: BTreeSet<u64> = primes.iter().copied().collect();
    if set.len() != primes.len() {
        return Err(Error::NonDistinctPrimes(format!("{primes:?}")));
    }
    if let Some(&p) = primes.iter().find(|&&p| !numtheory::is_prime(p)) {
        return Err(Error::InvalidParams(format!("{p} is not prime")));
    }
    Ok(())
}

fn value_within(f: &ArithFun, n: u64) -> Result<Coefficient> {
    f.get(n).cloned().ok_or_else(|| {
        Error::HorizonExhausted(format!("value at {n} requested, horizon is {}", f.horizon()))
    })
}

/// Scalar determinant/sum criteria evaluated in the coefficient ring.
pub fn certify_value_tests(
    fs: &[ArithFun],
    primes: &[u64],
    mode: ValueTestMode,
) -> Result<Certificate> {
    let n = fs.len();
    if n == 0 || n != primes.len() {
        return Err(Error::InvalidParams(format!(
            "need equally many functions and primes, got {n} and {}",
            primes.len()
        )));
    }
    if n > MAX_DET_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    check_distinct_primes(primes)?;
    let horizon_used = fs.iter().map(ArithFun::horizon).min().unwrap();

    let (method, value): (String, Coefficient) = match mode {
        ValueTestMode::AtPrimes => {
            let entries: Vec<Vec<Coefficient>> = fs
                .iter()
                .map(|f| primes.iter().map(|&p| value_within(f, p)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            ("at_primes".into(), scalar_det(&entries)?)
        }
        ValueTestMode::Gvj { m } => {
            if m < 1 {
                return Err(Error::InvalidParams("gvj needs m >= 1".into()));
            }
            let mut sum = Coefficient::zero();
            let mut tuple = vec![1u64; n];
            gvj_sum(fs, primes, m, 0, &mut tuple, &mut sum)?;
            (format!("gvj(m={m})"), sum)
        }
        ValueTestMode::OrderAnchored { ms } => {
            // rows i, cols j: d_{p_j} f_i
            let mut derived = Vec::with_capacity(n * n);
            for f in fs {
                for &p in primes {
                    derived.push(operators::apply(&OperatorSpec::BasicDeriv(p), f)?);
                }
            }
            let anchors: Vec<u64> = match ms {
                Some(ms) => {
                    if ms.len() != n {
                        return Err(Error::InvalidParams(format!(
                            "need {n} anchors, got {}",
                            ms.len()
                        )));
                    }
                    ms
                }
                None => (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|i| {
                                derived[i * n + j].first_nonzero().map(|(o, _)| o).ok_or_else(
                                    || {
                                        Error::HypothesisViolated(format!(
                                            "d_p{} of function #{i} is zero up to its horizon; \
                                             its order is unknown",
                                            primes[j]
                                        ))
                                    },
                                )
                            })
                            .collect::<Result<Vec<u64>>>()
                            .map(|orders| orders.into_iter().min().unwrap())
                    })
                    .collect::<Result<_>>()?,
            };
            for (j, &m_j) in anchors.iter().enumerate() {
                if m_j < 1 {
                    return Err(Error::InvalidParams("anchors must be >= 1".into()));
                }
                for i in 0..n {
                    let order = derived[i * n + j].first_nonzero().map(|(o, _)| o);
                    if order.map_or(true, |o| m_j > o) {
                        return Err(Error::HypothesisViolated(format!(
                            "m_{j} = {m_j} exceeds v(d_p{} f_{i}) = {:?}",
                            primes[j], order
                        )));
                    }
                }
            }
            let entries: Vec<Vec<Coefficient>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| value_within(&derived[i * n + j], anchors[j]))
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?;
            ("order_anchored".into(), scalar_det(&entries)?)
        }
    };

    Ok(if value.is_zero() {
        Certificate {
            verdict: Verdict::Inconclusive,
            method,
            witness: None,
            horizon_used,
            caveats: vec!["scalar criterion evaluates to zero; no conclusion".into()],
        }
    } else {
        Certificate {
            verdict: Verdict::IndependentCertified,
            method,
            witness: Some(Witness::Scalar { value }),
            horizon_used,
            caveats: vec![],
        }
    })
}

/// Recursive enumeration of ordered factorizations `k_1 ... k_n = m`,
/// accumulating `prod_j v_{p_j}(k_j p_j) * det(f_i(k_j p_j))`.
fn gvj_sum(
    fs: &[ArithFun],
    primes: &[u64],
    remaining: u64,
    pos: usize,
    tuple: &mut Vec<u64>,
    sum: &mut Coefficient,
) -> Result<()> {
    let n = fs.len();
    if pos == n {
        if remaining != 1 {
            return Ok(());
        }
        let mut weight = 1i64;
        for (j, &k) in tuple.iter().enumerate() {
            weight *= numtheory::padic_val(primes[j], k * primes[j]) as i64;
        }
        if weight == 0 {
            return Ok(());
        }
        let entries: Vec<Vec<Coefficient>> = fs
            .iter()
            .map(|f| {
                (0..n)
                    .map(|j| value_within(f, tuple[j] * primes[j]))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let det = scalar_det(&entries)?;
        *sum += &(&det * &Coefficient::from_int(weight));
        return Ok(());
    }
    let mut d = 1;
    while d <= remaining {
        if remaining % d == 0 {
            tuple[pos] = d;
            gvj_sum(fs, primes, remaining / d, pos + 1, tuple, sum)?;
        }
        d += 1;
    }
    Ok(())
}

/// Order criterion: multiplicatively independent orders certify
/// independence; a multiplicative relation among the orders is only
/// inconclusive for the functions themselves.
pub fn certify_orders(fs: &[ArithFun]) -> Result<Certificate> {
    let horizon_used = fs.iter().map(ArithFun::horizon).min().unwrap_or(0);
    let mut orders = Vec::with_capacity(fs.len());
    for (i, f) in fs.iter().enumerate() {
        match f.first_nonzero() {
            Some((m, _)) => orders.push(m),
            None => return Err(Error::ZeroFunction(i)),
        }
    }
    Ok(match numtheory::mult_indep_integers(&orders) {
        MultIndep::Independent => {
            let mut primes: Vec<u64> = Vec::new();
            for &o in &orders {
                for (p, _) in numtheory::factorize(o)?.factors {
                    if !primes.contains(&p) {
                        primes.push(p);
                    }
                }
            }
            primes.sort_unstable();
            let matrix: Vec<Vec<u32>> = orders
                .iter()
                .map(|&o| {
                    let f = numtheory::factorize(o).expect("order within range");
                    primes.iter().map(|&p| f.exponent_of(p)).collect()
                })
                .collect();
            Certificate {
                verdict: Verdict::IndependentCertified,
                method: "orders".into(),
                witness: Some(Witness::ExponentMatrix { orders, primes, matrix }),
                horizon_used,
                caveats: vec![],
            }
        }
        MultIndep::Relation(exponents) => Certificate {
            verdict: Verdict::Inconclusive,
            method: "orders".into(),
            witness: Some(Witness::IntegerRelation { exponents }),
            horizon_used,
            caveats: vec![
                "orders are multiplicatively dependent; the criterion does not apply".into(),
            ],
        },
    })
}

fn support_caveat(h: u64) -> String {
    format!("support computed at horizon {h} is an under-approximation; \
             non-membership of a prime is one-sided")
}

/// Triangular support criterion: `p_j` divides some support element of
/// `f_j` and none of `f_i` for `i < j`.
pub fn certify_support_triangular(fs: &[ArithFun], primes: &[u64]) -> Result<Certificate> {
    let n = fs.len();
    if n == 0 || n != primes.len() {
        return Err(Error::InvalidParams(format!(
            "need equally many functions and primes, got {n} and {}",
            primes.len()
        )));
    }
    check_distinct_primes(primes)?;
    let horizon_used = fs.iter().map(ArithFun::horizon).min().unwrap();
    let supports: Vec<Vec<u64>> = fs.iter().map(ArithFun::support).collect();
    let mut assignments = Vec::with_capacity(n);
    for j in 0..n {
        let p = primes[j];
        let Some(&elem) = supports[j].iter().find(|&&s| s % p == 0) else {
            return Ok(Certificate {
                verdict: Verdict::Inconclusive,
                method: "support_triangular".into(),
                witness: None,
                horizon_used,
                caveats: vec![format!(
                    "prime {p} divides no support element of function #{j} up to horizon {horizon_used}"
                )],
            });
        };
        for (i, support) in supports.iter().enumerate().take(j) {
            if let Some(&bad) = support.iter().find(|&&s| s % p == 0) {
                return Ok(Certificate {
                    verdict: Verdict::Inconclusive,
                    method: "support_triangular".into(),
                    witness: None,
                    horizon_used,
                    caveats: vec![format!(
                        "prime {p} divides support element {bad} of earlier function #{i}"
                    )],
                });
            }
        }
        assignments.push((p, elem));
    }
    Ok(Certificate {
        verdict: Verdict::IndependentCertified,
        method: "support_triangular".into(),
        witness: Some(Witness::PrimeSupport { assignments }),
        horizon_used,
        caveats: vec![support_caveat(horizon_used)],
    })
}

/// Support-escape criterion: a prime dividing some support element of
/// `f` but none of any `g_i` certifies independence of `f` from the
/// algebra the `g_i` generate.
pub fn certify_support_escape(f: &ArithFun, gs: &[ArithFun]) -> Result<Certificate> {
    let horizon_used = gs
        .iter()
        .map(ArithFun::horizon)
        .chain(std::iter::once(f.horizon()))
        .min()
        .unwrap();
    let f_report = f.order_report();
    let g_primes: BTreeSet<u64> = gs
        .iter()
        .flat_map(|g| g.order_report().prime_divisors)
        .collect();
    for &p in &f_report.prime_divisors {
        if !g_primes.contains(&p) {
            let elem = f_report
                .support
                .iter()
                .copied()
                .find(|&s| s % p == 0)
                .expect("prime divisor comes from some support element");
            return Ok(Certificate {
                verdict: Verdict::IndependentCertified,
                method: "support_escape".into(),
                witness: Some(Witness::PrimeSupport { assignments: vec![(p, elem)] }),
                horizon_used,
                caveats: vec![support_caveat(horizon_used)],
            });
        }
    }
    Ok(Certificate {
        verdict: Verdict::Inconclusive,
        method: "support_escape".into(),
        witness: None,
        horizon_used,
        caveats: vec![format!(
            "every prime divisor of supp f up to horizon {horizon_used} also divides \
             a support element of some g"
        )],
    })
}

/// Wronskian with respect to `op`: rows are `op^j f_i` for
/// `j = 0..n-1`; a nonzero determinant certifies linear independence
/// over the constants of the derivation.
pub fn wronskian_li(fs: &[ArithFun], op: &OperatorSpec) -> Result<Certificate> {
    let n = fs.len();
    if n == 0 {
        return Err(Error::InvalidParams("need at least one function".into()));
    }
    if n > MAX_DET_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let mut entries = Vec::with_capacity(n * n);
    for f in fs {
        let mut current = f.clone();
        for j in 0..n {
            if j > 0 {
                current = operators::apply(op, &current)?;
            }
            entries.push(current.clone());
        }
    }
    let det = conv_det(&FunMatrix::new(n, n, entries)?)?;
    let horizon_used = det.horizon();
    Ok(match nonzero_witness(&det) {
        Some((index, value)) => Certificate {
            verdict: Verdict::IndependentCertified,
            method: "wronskian".into(),
            witness: Some(Witness::IndexValue { index, value }),
            horizon_used,
            caveats: vec!["certifies linear independence over the constants of the derivation"
                .into()],
        },
        None => Certificate {
            verdict: Verdict::Inconclusive,
            method: "wronskian".into(),
            witness: None,
            horizon_used,
            caveats: vec![horizon_caveat(horizon_used)],
        },
    })
}

/// Rank report from fraction-free elimination: the rank is a lower
/// bound, because a pivot that vanishes up to the horizon may be a
/// truncation artifact.
#[derive(Clone, Debug)]
pub struct RankReport {
    pub rank: usize,
    pub horizon: u64,
    pub caveat: String,
}

/// Fraction-free row elimination in the convolution ring
/// (cross-multiplication only, no division). Pivot selection: the row
/// whose entry has the smallest order, then the lowest row index.
pub fn rank_ff(m: &FunMatrix) -> RankReport {
    let horizon = m.common_horizon();
    let mut grid: Vec<Vec<ArithFun>> = (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .map(|j| m.at(i, j).truncated(horizon).expect("common horizon"))
                .collect()
        })
        .collect();
    let mut row = 0;
    for col in 0..m.cols {
        let mut best: Option<(u64, usize)> = None;
        for (r, grid_row) in grid.iter().enumerate().take(m.rows).skip(row) {
            if let Some((order, _)) = grid_row[col].first_nonzero() {
                if best.map_or(true, |(b, _)| order < b) {
                    best = Some((order, r));
                }
            }
        }
        let Some((_, pivot_row)) = best else { continue };
        grid.swap(row, pivot_row);
        for r in row + 1..m.rows {
            if grid[r][col].is_zero_up_to_horizon() {
                continue;
            }
            let a = grid[r][col].clone();
            let p = grid[row][col].clone();
            for c in col..m.cols {
                grid[r][c] = grid[r][c].conv(&p).sub(&grid[row][c].conv(&a));
            }
        }
        row += 1;
        if row == m.rows {
            break;
        }
    }
    RankReport {
        rank: row,
        horizon,
        caveat: format!(
            "rank {row} is a lower bound at horizon {horizon}: vanishing pivots may be \
             truncation artifacts"
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn tau_star_and_primes(n: u64) -> (ArithFun, ArithFun) {
        (ArithFun::tau_star(n).unwrap(), ArithFun::ind_prime(n).unwrap())
    }

    #[test]
    fn conv_det_tau_star_example() {
        let (tau_star, ind_p) = tau_star_and_primes(64);
        let d2 = OperatorSpec::BasicDeriv(2);
        let d3 = OperatorSpec::BasicDeriv(3);
        let entries = vec![
            operators::apply(&d2, &tau_star).unwrap(),
            operators::apply(&d3, &tau_star).unwrap(),
            operators::apply(&d2, &ind_p).unwrap(),
            operators::apply(&d3, &ind_p).unwrap(),
        ];
        let det = conv_det(&FunMatrix::new(2, 2, entries).unwrap()).unwrap();
        assert_eq!(det.at(4), &Coefficient::from_int(2));
        assert_eq!(nonzero_witness(&det), Some((4, Coefficient::from_int(2))));
    }

    #[test]
    fn conv_det_1x1_is_identity() {
        let f = ArithFun::von_mangoldt(16).unwrap();
        let det = conv_det(&FunMatrix::new(1, 1, vec![f.clone()]).unwrap()).unwrap();
        assert_eq!(det, f);
    }

    #[test]
    fn conv_det_dependent_pair_vanishes() {
        let n = 128;
        let f1 = ArithFun::ind_prime_powers(2, n).unwrap();
        let f2 = f1.conv(&f1);
        let d2 = OperatorSpec::BasicDeriv(2);
        let d3 = OperatorSpec::BasicDeriv(3);
        let entries = vec![
            operators::apply(&d2, &f1).unwrap(),
            operators::apply(&d3, &f1).unwrap(),
            operators::apply(&d2, &f2).unwrap(),
            operators::apply(&d3, &f2).unwrap(),
        ];
        let det = conv_det(&FunMatrix::new(2, 2, entries).unwrap()).unwrap();
        assert!(det.is_zero_up_to_horizon());
    }

    #[test]
    fn conv_det_shape_errors() {
        let f = ArithFun::one(4).unwrap();
        let m = FunMatrix::new(1, 2, vec![f.clone(), f.clone()]).unwrap();
        assert!(matches!(conv_det(&m), Err(Error::NotSquare { .. })));
        let entries = vec![f; 49];
        let m = FunMatrix::new(7, 7, entries).unwrap();
        assert!(matches!(conv_det(&m), Err(Error::DimensionTooLarge(7))));
    }

    #[test]
    fn nonzero_witness_examples() {
        let one = ArithFun::one(16).unwrap();
        let dl = operators::apply(&OperatorSpec::LogDeriv, &one).unwrap();
        assert_eq!(nonzero_witness(&dl), Some((2, Coefficient::symbol(2))));
        assert_eq!(nonzero_witness(&ArithFun::zero(8).unwrap()), None);
        assert_eq!(
            nonzero_witness(&ArithFun::kappa(8).unwrap()),
            Some((2, Coefficient::one()))
        );
    }

    #[test]
    fn jacobian_certificates() {
        let (tau_star, ind_p) = tau_star_and_primes(64);
        let cert = certify_jacobian(
            &[tau_star, ind_p],
            &[OperatorSpec::BasicDeriv(2), OperatorSpec::BasicDeriv(3)],
        )
        .unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);
        assert_eq!(
            cert.witness,
            Some(Witness::IndexValue { index: 4, value: Coefficient::from_int(2) })
        );

        let n = 128;
        let f1 = ArithFun::ind_prime_powers(2, n).unwrap();
        let f2 = f1.conv(&f1);
        let cert = certify_jacobian(
            &[f1, f2],
            &[OperatorSpec::BasicDeriv(2), OperatorSpec::BasicDeriv(3)],
        )
        .unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);

        let one = ArithFun::one(16).unwrap();
        let cert = certify_jacobian(&[one], &[OperatorSpec::LogDeriv]).unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);
        assert_eq!(
            cert.witness,
            Some(Witness::IndexValue { index: 2, value: Coefficient::symbol(2) })
        );
    }

    #[test]
    fn value_tests_at_primes() {
        let n = 32;
        let fs = vec![
            ArithFun::ind_prime_powers(2, n).unwrap(),
            ArithFun::ind_prime_powers(3, n).unwrap(),
            ArithFun::ind_prime_powers(5, n).unwrap(),
            ArithFun::one(n).unwrap(),
        ];
        let cert = certify_value_tests(&fs, &[2, 3, 5, 7], ValueTestMode::AtPrimes).unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);
        assert_eq!(cert.witness, Some(Witness::Scalar { value: Coefficient::one() }));

        let f1 = ArithFun::ind_prime_powers(2, n).unwrap();
        let f2 = f1.conv(&f1);
        let cert = certify_value_tests(&[f1, f2], &[2, 3], ValueTestMode::AtPrimes).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);

        assert!(matches!(
            certify_value_tests(
                &[ArithFun::one(8).unwrap(), ArithFun::one(8).unwrap()],
                &[2, 2],
                ValueTestMode::AtPrimes
            ),
            Err(Error::NonDistinctPrimes(_))
        ));
    }

    #[test]
    fn value_tests_gvj() {
        let one = ArithFun::one(16).unwrap();
        let cert = certify_value_tests(&[one], &[2], ValueTestMode::Gvj { m: 1 }).unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);
        assert_eq!(cert.witness, Some(Witness::Scalar { value: Coefficient::one() }));
    }

    #[test]
    fn value_tests_order_anchored() {
        let n = 32;
        let one = ArithFun::one(n).unwrap();
        let id = ArithFun::power_id(1, n).unwrap();
        let cert =
            certify_value_tests(&[one.clone(), id], &[2, 3], ValueTestMode::OrderAnchored { ms: None })
                .unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);
        assert_eq!(cert.witness, Some(Witness::Scalar { value: Coefficient::one() }));

        // anchors above a derivative order are rejected
        let err = certify_value_tests(
            &[one.clone(), ArithFun::omega(n).unwrap()],
            &[2, 3],
            ValueTestMode::OrderAnchored { ms: Some(vec![4, 1]) },
        );
        assert!(matches!(err, Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn orders_certificates() {
        let n = 32;
        let e = |k| ArithFun::e_at(k, n).unwrap();
        let cert = certify_orders(&[e(2), e(6)]).unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);

        let cert = certify_orders(&[e(2), e(4)]).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert_eq!(
            cert.witness,
            Some(Witness::IntegerRelation { exponents: vec![2, -1] })
        );

        let cert = certify_orders(&[e(6), e(10), e(15)]).unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);

        assert!(matches!(
            certify_orders(&[ArithFun::zero(8).unwrap()]),
            Err(Error::ZeroFunction(0))
        ));
    }

    #[test]
    fn support_triangular_certificates() {
        let n = 32;
        let fs = vec![
            ArithFun::e_at(2, n).unwrap(),
            ArithFun::e_at(3, n).unwrap(),
            ArithFun::ind_prime(n).unwrap(),
        ];
        let cert = certify_support_triangular(&fs, &[2, 3, 5]).unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);
        assert_eq!(
            cert.witness,
            Some(Witness::PrimeSupport { assignments: vec![(2, 2), (3, 3), (5, 5)] })
        );
        assert!(!cert.caveats.is_empty());

        let same = vec![ArithFun::e_at(2, n).unwrap(), ArithFun::e_at(2, n).unwrap()];
        let cert = certify_support_triangular(&same, &[2, 3]).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn support_escape_certificates() {
        let n = 32;
        let one = ArithFun::one(n).unwrap();
        let gs = vec![ArithFun::e_at(2, n).unwrap(), ArithFun::e_at(3, n).unwrap()];
        let cert = certify_support_escape(&one, &gs).unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);
        assert_eq!(
            cert.witness,
            Some(Witness::PrimeSupport { assignments: vec![(5, 5)] })
        );

        let f = ArithFun::e_at(6, n).unwrap();
        let gs = vec![ArithFun::e_at(2, n).unwrap(), ArithFun::e_at(3, n).unwrap()];
        let cert = certify_support_escape(&f, &gs).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn wronskian_certificates() {
        let n = 256;
        let one = ArithFun::one(n).unwrap();
        let omega = ArithFun::omega(n).unwrap();
        let omega2 = omega.pointwise_pow(2);
        let cert =
            wronskian_li(&[one.clone(), omega, omega2], &OperatorSpec::BasicDeriv(2)).unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);
        match cert.witness {
            Some(Witness::IndexValue { index, ref value }) => {
                assert_eq!(index, 1);
                assert_eq!(value, &Coefficient::from_int(4));
            }
            other => panic!("unexpected witness {other:?}"),
        }

        let f = ArithFun::von_mangoldt(64).unwrap();
        let doubled = f.scale(&Coefficient::from_int(2));
        let cert = wronskian_li(&[f, doubled], &OperatorSpec::LogDeriv).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);

        let eps = ArithFun::epsilon(64).unwrap();
        let one = ArithFun::one(64).unwrap();
        let cert = wronskian_li(&[eps, one], &OperatorSpec::LogDeriv).unwrap();
        assert_eq!(cert.verdict, Verdict::IndependentCertified);
        match cert.witness {
            Some(Witness::IndexValue { index, ref value }) => {
                assert_eq!((index, value), (2, &Coefficient::symbol(2)));
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn rank_reports() {
        let n = 16;
        let eps = ArithFun::epsilon(n).unwrap();
        let zero = ArithFun::zero(n).unwrap();
        let m = FunMatrix::new(2, 2, vec![eps.clone(), zero.clone(), zero.clone(), eps.clone()])
            .unwrap();
        assert_eq!(rank_ff(&m).rank, 2);

        let f = ArithFun::von_mangoldt(n).unwrap();
        let m = FunMatrix::new(2, 1, vec![f.clone(), f.clone()]).unwrap();
        assert_eq!(rank_ff(&m).rank, 1);

        let one = ArithFun::one(n).unwrap();
        let dl = operators::apply(&OperatorSpec::LogDeriv, &one).unwrap();
        let scaled = dl.scale(&Coefficient::rational(7, 3));
        let m = FunMatrix::new(1, 2, vec![dl, scaled]).unwrap();
        assert_eq!(rank_ff(&m).rank, 1);
    }

    #[test]
    fn certificate_json_shape() {
        let one = ArithFun::one(16).unwrap();
        let cert = certify_jacobian(&[one], &[OperatorSpec::LogDeriv]).unwrap();
        let v = cert.to_json();
        assert_eq!(v["verdict"], "IndependentCertified");
        assert_eq!(v["method"], "jacobian");
        assert_eq!(v["witness"]["index"], 2);
        assert_eq!(v["witness"]["value"], "L2");
        assert_eq!(v["horizon"], 16);
        assert!(v["caveats"].as_array().unwrap().is_empty());
    }

    #[test]
    fn det_value_shortcut_example() {
        // value of det at prod(a_i b_i) equals the scalar det of values
        // at a_i b_j, when a_i b_j <= v(f_ij); here a = (2, 3), b = (1, 4)
        let n = 64;
        let two = Coefficient::from_int(2);
        let fs = [
            [ArithFun::e_at(2, n).unwrap().scale(&two), ArithFun::e_at(8, n).unwrap()],
            [ArithFun::e_at(3, n).unwrap(), ArithFun::e_at(12, n).unwrap()],
        ];
        let entries: Vec<ArithFun> = fs.iter().flatten().cloned().collect();
        let det = conv_det(&FunMatrix::new(2, 2, entries).unwrap()).unwrap();
        let scalar = scalar_det(&[
            vec![fs[0][0].at(2).clone(), fs[0][1].at(8).clone()],
            vec![fs[1][0].at(3).clone(), fs[1][1].at(12).clone()],
        ])
        .unwrap();
        assert_eq!(scalar, Coefficient::one());
        assert_eq!(det.at(2 * 1 * 3 * 4), &scalar);
    }

    #[test]
    fn order_one_functions_are_dependent_by_orders() {
        let eps = ArithFun::epsilon(8).unwrap();
        let cert = certify_orders(&[eps]).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }
}
