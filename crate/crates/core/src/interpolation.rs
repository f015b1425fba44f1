//! Fat points, evaluation matrices and the AH decision.
//!
//! A fat point of multiplicity `m` at `p` imposes the vanishing of every
//! partial derivative of order `m - 1` at `p`. For a weighted-homogeneous
//! form the lower-order conditions follow from these by the weighted Euler
//! identity, except for derivatives whose result has degree zero: those are
//! constants that Euler says nothing about, so each one contributes its own
//! row. Such rows only exist in degrees where `d = <u, a>` for some operator
//! `x^u` of order below `m - 1`, e.g. `d = 0` for double points.
//!
//! General points are drawn at random; the generic rank is the maximum over
//! a few independent draws, since rank only drops on a closed subset.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{random_prime, Field, FieldSpec, PrimeField, Rational, Rationals, ResolvedField};
use crate::grading::{count_monomials, enumerate_monomials, Monomial, Weights};
use crate::linalg::{rational_rank, EchelonBuilder};
use crate::poly::WeightedPoint;

pub const DEFAULT_TRIALS: usize = 3;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Magnitude bound for sampled rational coordinates.
const RATIONAL_SAMPLE_BOUND: i64 = 1 << 16;

/// Fields the sampler can draw general coordinates from.
pub trait SampleField: Field {
    fn random_nonzero(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
}

impl SampleField for PrimeField {
    fn random_nonzero(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(1..self.modulus())
    }
}

impl SampleField for Rationals {
    fn random_nonzero(&self, rng: &mut ChaCha8Rng) -> Rational {
        let mag = rng.gen_range(1..=RATIONAL_SAMPLE_BOUND);
        let v = if rng.gen_bool(0.5) { mag } else { -mag };
        Rational::from_integer(v.into())
    }
}

/// A scheme of fat points together with the sampling policy used when the
/// points are "general".
#[derive(Clone, Debug)]
pub struct FatPointConfig {
    pub weights: Weights,
    pub multiplicities: Vec<u32>,
    /// Explicit points; `None` means fresh general points for every trial.
    pub points: Option<Vec<WeightedPoint>>,
    pub field: FieldSpec,
    pub seed: u64,
    pub trials: usize,
}

impl FatPointConfig {
    pub fn new(weights: &Weights, multiplicities: Vec<u32>) -> Result<Self> {
        if multiplicities.contains(&0) {
            return Err(Error::InvalidPoint("multiplicities must be at least 1".into()));
        }
        Ok(Self {
            weights: weights.clone(),
            multiplicities,
            points: None,
            field: FieldSpec::default(),
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
        })
    }

    pub fn uniform(weights: &Weights, r: usize, multiplicity: u32) -> Result<Self> {
        Self::new(weights, vec![multiplicity; r])
    }

    pub fn double_points(weights: &Weights, r: usize) -> Self {
        Self::uniform(weights, r, 2).expect("multiplicity 2 is valid")
    }

    pub fn simple_points(weights: &Weights, r: usize) -> Self {
        Self::uniform(weights, r, 1).expect("multiplicity 1 is valid")
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials.max(1);
        self
    }

    pub fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    pub fn with_points(mut self, points: Vec<WeightedPoint>) -> Result<Self> {
        if points.len() != self.multiplicities.len() {
            return Err(Error::InvalidPoint(format!(
                "{} points given for {} multiplicities",
                points.len(),
                self.multiplicities.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.weights() != &self.weights) {
            return Err(Error::InvalidPoint(format!("{p} lives in P{}", p.weights())));
        }
        self.points = Some(points);
        self.trials = 1;
        Ok(self)
    }

    pub fn num_points(&self) -> usize {
        self.multiplicities.len()
    }

    /// `sum_i binom(n + m_i - 1, n)`.
    pub fn condition_count(&self) -> u64 {
        let n = self.weights.dim() as u64;
        self.multiplicities.iter().map(|&m| binomial(n + m as u64 - 1, n)).sum()
    }

    /// Draws the random prime (if any) and checks the field against `max_degree`.
    pub fn resolve_field(&self, max_degree: u64) -> Result<ResolvedField> {
        match self.field {
            FieldSpec::Rational => Ok(ResolvedField::Rational),
            FieldSpec::Prime(p) => {
                if !crate::field::is_prime(p) {
                    return Err(Error::InvalidField(format!("{p} is not prime")));
                }
                if p <= max_degree {
                    return Err(Error::InvalidField(format!(
                        "characteristic {p} does not exceed degree {max_degree}"
                    )));
                }
                if p >= 1 << 63 {
                    return Err(Error::InvalidField(format!("{p} exceeds 2^63")));
                }
                Ok(ResolvedField::Prime(p))
            }
            FieldSpec::RandomPrime => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(u64::MAX);
                Ok(ResolvedField::Prime(random_prime(
                    &mut rng,
                    &excluded_characteristics(&self.weights),
                )))
            }
        }
    }
}

/// Characteristics where the determinant arguments break down.
pub fn excluded_characteristics(w: &Weights) -> Vec<u64> {
    let a = w.as_slice();
    let mut out = vec![2, 3, 5];
    out.extend(a.iter().map(|&x| x as u64));
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            out.push(a[i] as u64 + a[j] as u64);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Deterministic RNG for one `(degree, trial)` task.
pub fn task_rng(seed: u64, d: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((d << 16) ^ trial as u64);
    rng
}

/// General points: nonzero coordinates, the first coordinate pinned to 1
/// when its weight is 1, and pairwise distinct values in every other slot.
pub fn sample_points<F: SampleField>(field: &F, w: &Weights, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<F::Elem>> {
    let n1 = w.len();
    let pin_first = w.get(0) == 1;
    let mut points: Vec<Vec<F::Elem>> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut coords = Vec::with_capacity(n1);
        for slot in 0..n1 {
            if slot == 0 && pin_first {
                coords.push(field.one());
                continue;
            }
            let value = loop {
                let v = field.random_nonzero(rng);
                if points.iter().all(|p| p[slot] != v) {
                    break v;
                }
            };
            coords.push(value);
        }
        points.push(coords);
    }
    points
}

/// Exponent vectors of total order `k` in `n1` variables, in basis order.
fn operators(n1: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n1];
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            go(i + 1, left - e, cur, out);
        }
    }
    if n1 > 0 {
        go(0, k, &mut cur, &mut out);
    }
    out
}

/// Derivative operators imposed by a point of multiplicity `m` in degree `d`.
pub fn condition_operators(w: &Weights, m: u32, d: u64) -> Vec<Vec<u32>> {
    let mut ops = operators(w.len(), m - 1);
    for k in 0..m.saturating_sub(1) {
        ops.extend(operators(w.len(), k).into_iter().filter(|u| w.degree_of(u) == d));
    }
    ops
}

/// Rows `(d^u m_j)(p)` for every operator `u` and basis monomial `m_j`.
pub fn derivative_rows<F: Field>(
    field: &F,
    basis: &[Vec<u32>],
    point: &[F::Elem],
    ops: &[Vec<u32>],
) -> Vec<Vec<F::Elem>> {
    let max_exp = basis.iter().flatten().copied().max().unwrap_or(0) as usize;
    let powers: Vec<Vec<F::Elem>> = point
        .iter()
        .map(|x| {
            let mut pw = Vec::with_capacity(max_exp + 1);
            pw.push(field.one());
            for k in 1..=max_exp {
                let next = field.mul(&pw[k - 1], x);
                pw.push(next);
            }
            pw
        })
        .collect();
    ops.iter()
        .map(|u| {
            basis
                .iter()
                .map(|e| {
                    if e.iter().zip(u).any(|(ei, ui)| ei < ui) {
                        return field.zero();
                    }
                    let mut value = field.one();
                    for i in 0..e.len() {
                        for t in 0..u[i] {
                            value = field.mul(&value, &field.from_u64((e[i] - t) as u64));
                        }
                        value = field.mul(&value, &powers[i][(e[i] - u[i]) as usize]);
                    }
                    value
                })
                .collect()
        })
        .collect()
}

/// Which operator at which point a matrix row comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowLabel {
    pub point: usize,
    pub operator: Vec<u32>,
}

/// Evaluation matrix of a fat-point scheme in one degree.
#[derive(Clone, Debug)]
pub struct EvaluationMatrix<E> {
    pub d: u64,
    pub columns: Vec<Monomial>,
    pub rows: Vec<RowLabel>,
    pub entries: Vec<Vec<E>>,
}

impl<E> EvaluationMatrix<E> {
    pub fn num_rows(&self) -> usize {
        self.entries.len()
    }

    pub fn num_cols(&self) -> usize {
        self.columns.len()
    }
}

/// Evaluation matrix at explicit points (given in `field`).
pub fn build_evaluation_matrix<F: Field>(
    field: &F,
    w: &Weights,
    points: &[(Vec<F::Elem>, u32)],
    d: u64,
) -> Result<EvaluationMatrix<F::Elem>> {
    check_characteristic(field, d)?;
    let columns = enumerate_monomials(w, d as i64);
    let basis: Vec<Vec<u32>> = columns.iter().map(|m| m.exponents.clone()).collect();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (idx, (p, m)) in points.iter().enumerate() {
        if p.len() != w.len() {
            return Err(Error::InvalidPoint(format!("point {idx} has wrong dimension")));
        }
        let ops = condition_operators(w, *m, d);
        entries.extend(derivative_rows(field, &basis, p, &ops));
        rows.extend(ops.into_iter().map(|operator| RowLabel { point: idx, operator }));
    }
    Ok(EvaluationMatrix {
        d,
        columns,
        rows,
        entries,
    })
}

fn check_characteristic<F: Field>(field: &F, d: u64) -> Result<()> {
    let p = field.characteristic();
    if p != 0 && p <= d {
        return Err(Error::InvalidField(format!(
            "characteristic {p} does not exceed degree {d}"
        )));
    }
    Ok(())
}

/// Hilbert function value of a fat-point scheme in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub weights: Weights,
    /// Number of points.
    pub r: usize,
    pub d: u64,
    pub s_d: u64,
    pub expected: u64,
    pub actual: u64,
    pub deficiency: u64,
    #[serde(rename = "is_AH")]
    pub is_ah: bool,
    pub trials: usize,
}

impl RankProfile {
    fn new(cfg: &FatPointConfig, r: usize, d: u64, s_d: u64, condition_count: u64, actual: u64, trials: usize) -> Self {
        let expected = s_d.min(condition_count);
        Self {
            weights: cfg.weights.clone(),
            r,
            d,
            s_d,
            expected,
            actual,
            deficiency: expected.saturating_sub(actual),
            is_ah: actual == expected,
            trials,
        }
    }

    pub const CSV_HEADER: &'static str = "weights,r,d,s_d,expected,actual,deficiency,is_AH,trials";

    pub fn csv_row(&self) -> String {
        let w: Vec<String> = self.weights.as_slice().iter().map(u32::to_string).collect();
        format!(
            "\"{}\",{},{},{},{},{},{},{},{}",
            w.join(","),
            self.r,
            self.d,
            self.s_d,
            self.expected,
            self.actual,
            self.deficiency,
            self.is_ah,
            self.trials
        )
    }
}

/// Ranks of every prefix `X_1 ⊂ X_2 ⊂ ...` of one sample, in one pass.
fn prefix_ranks_in<F: SampleField>(field: &F, cfg: &FatPointConfig, d: u64, trial: usize) -> Result<Vec<u64>> {
    let w = &cfg.weights;
    let columns = enumerate_monomials(w, d as i64);
    let basis: Vec<Vec<u32>> = columns.into_iter().map(|m| m.exponents).collect();
    let points: Vec<Vec<F::Elem>> = match &cfg.points {
        Some(pts) => pts
            .iter()
            .map(|p| {
                p.coords()
                    .iter()
                    .map(|c| field.from_rational(c))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::InvalidPoint(format!("{p} has no image in the field")))
            })
            .collect::<Result<_>>()?,
        None => sample_points(field, w, cfg.num_points(), &mut task_rng(cfg.seed, d, trial)),
    };
    let mut out = Vec::with_capacity(points.len());
    let mut eb = EchelonBuilder::new(field.clone(), basis.len());
    for (p, &m) in points.iter().zip(&cfg.multiplicities) {
        let ops = condition_operators(w, m, d);
        for row in derivative_rows(field, &basis, p, &ops) {
            if eb.is_full() {
                break;
            }
            eb.push(row);
        }
        out.push(eb.rank() as u64);
    }
    Ok(out)
}

/// Rank of every prefix over `Q` by fraction-free elimination.
fn rational_prefix_ranks(cfg: &FatPointConfig, d: u64, trial: usize) -> Result<Vec<u64>> {
    let w = &cfg.weights;
    let basis: Vec<Vec<u32>> = enumerate_monomials(w, d as i64)
        .into_iter()
        .map(|m| m.exponents)
        .collect();
    let points: Vec<Vec<Rational>> = match &cfg.points {
        Some(pts) => pts.iter().map(|p| p.coords().to_vec()).collect(),
        None => sample_points(&Rationals, w, cfg.num_points(), &mut task_rng(cfg.seed, d, trial)),
    };
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut out = Vec::with_capacity(points.len());
    let mut last = 0u64;
    for (p, &m) in points.iter().zip(&cfg.multiplicities) {
        let ops = condition_operators(w, m, d);
        rows.extend(derivative_rows(&Rationals, &basis, p, &ops));
        if last < basis.len() as u64 {
            last = rational_rank(&rows, basis.len()) as u64;
        }
        out.push(last);
    }
    Ok(out)
}

fn prefix_ranks(cfg: &FatPointConfig, field: ResolvedField, d: u64, trial: usize) -> Result<Vec<u64>> {
    match field {
        ResolvedField::Prime(p) => {
            let f = PrimeField::new(p)?;
            check_characteristic(&f, d)?;
            prefix_ranks_in(&f, cfg, d, trial)
        }
        ResolvedField::Rational => rational_prefix_ranks(cfg, d, trial),
    }
}

/// Condition counts of every prefix of the configuration.
fn prefix_condition_counts(cfg: &FatPointConfig) -> Vec<u64> {
    let n = cfg.weights.dim() as u64;
    cfg.multiplicities
        .iter()
        .scan(0u64, |acc, &m| {
            *acc += binomial(n + m as u64 - 1, n);
            Some(*acc)
        })
        .collect()
}

/// Profiles for the sub-configurations of the first `1, 2, ..., r` points
/// in degree `d`, sharing one elimination per trial.
pub fn hilbert_fat_points_prefixes(cfg: &FatPointConfig, d: u64) -> Result<Vec<RankProfile>> {
    let field = cfg.resolve_field(d)?;
    hilbert_prefixes_with_field(cfg, field, d)
}

fn hilbert_prefixes_with_field(cfg: &FatPointConfig, field: ResolvedField, d: u64) -> Result<Vec<RankProfile>> {
    let s_d = count_monomials(&cfg.weights, d as i64);
    let counts = prefix_condition_counts(cfg);
    let expected: Vec<u64> = counts.iter().map(|&m| m.min(s_d)).collect();
    let mut best = vec![0u64; counts.len()];
    let mut used = 0;
    let trials = if cfg.points.is_some() { 1 } else { cfg.trials.max(1) };
    for trial in 0..trials {
        used = trial + 1;
        let ranks = prefix_ranks(cfg, field, d, trial)?;
        for (b, r) in best.iter_mut().zip(ranks) {
            *b = (*b).max(r);
        }
        if best == expected {
            break;
        }
    }
    Ok(best
        .iter()
        .zip(&counts)
        .enumerate()
        .map(|(i, (&actual, &m))| RankProfile::new(cfg, i + 1, d, s_d, m, actual, used))
        .collect())
}

/// `H_d(S/I_X)` as the generic rank of the evaluation matrix.
pub fn hilbert_fat_points(cfg: &FatPointConfig, d: u64) -> Result<RankProfile> {
    let field = cfg.resolve_field(d)?;
    hilbert_with_field(cfg, field, d)
}

pub fn hilbert_with_field(cfg: &FatPointConfig, field: ResolvedField, d: u64) -> Result<RankProfile> {
    if cfg.num_points() == 0 {
        let s_d = count_monomials(&cfg.weights, d as i64);
        return Ok(RankProfile::new(cfg, 0, d, s_d, 0, 0, 0));
    }
    let mut profiles = hilbert_prefixes_with_field(cfg, field, d)?;
    Ok(profiles.pop().expect("at least one point"))
}

/// One profile per degree, computed in parallel and returned in degree order.
pub fn deficiency_table(cfg: &FatPointConfig, degrees: RangeInclusive<u64>) -> Result<Vec<RankProfile>> {
    let field = cfg.resolve_field(*degrees.end())?;
    degrees
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|d| hilbert_with_field(cfg, field, d))
        .collect()
}

/// Ranks of one integer sample over two primes, with an exact recomputation
/// when they disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckedRank {
    pub primes: [u64; 2],
    pub ranks: [u64; 2],
    /// Present only when the two modular ranks differ.
    pub rational: Option<u64>,
}

impl CrossCheckedRank {
    pub fn rank(&self) -> u64 {
        self.rational.unwrap_or(self.ranks[0])
    }

    pub fn agreed(&self) -> bool {
        self.ranks[0] == self.ranks[1]
    }
}

pub fn cross_checked_rank(cfg: &FatPointConfig, d: u64, trial: usize) -> Result<CrossCheckedRank> {
    let w = &cfg.weights;
    let mut rng = task_rng(cfg.seed, d, trial);
    let excluded = excluded_characteristics(w);
    let p1 = random_prime(&mut rng, &excluded);
    let p2 = loop {
        let p = random_prime(&mut rng, &excluded);
        if p != p1 {
            break p;
        }
    };
    let sample = match &cfg.points {
        Some(pts) => pts.iter().map(|p| p.coords().to_vec()).collect(),
        None => sample_points(&Rationals, w, cfg.num_points(), &mut rng),
    };
    let exact = cfg.clone().with_points(
        sample
            .into_iter()
            .map(|c| WeightedPoint::new(w, c))
            .collect::<Result<_>>()?,
    )?;
    let r1 = prefix_ranks(&exact, ResolvedField::Prime(p1), d, 0)?;
    let r2 = prefix_ranks(&exact, ResolvedField::Prime(p2), d, 0)?;
    let ranks = [*r1.last().unwrap_or(&0), *r2.last().unwrap_or(&0)];
    let rational = if ranks[0] != ranks[1] {
        Some(*rational_prefix_ranks(&exact, d, 0)?.last().unwrap_or(&0))
    } else {
        None
    };
    Ok(CrossCheckedRank {
        primes: [p1, p2],
        ranks,
        rational,
    })
}

/// `H_d` of general fat points on the line `P(a, b)`, `gcd(a, b) = 1`,
/// with multiplicities `r_i`: `s_d` below `b(a r - 1)`, `r` from there on.
pub fn line_interpolation_formula(a: u32, b: u32, multiplicities: &[u32], d: u64) -> Result<u64> {
    use num_integer::Integer;
    if a == 0 || b == 0 || a.gcd(&b) != 1 {
        return Err(Error::UnsupportedWeights(format!(
            "({a},{b}) are not coprime positive weights"
        )));
    }
    let r: u64 = multiplicities.iter().map(|&m| m as u64).sum();
    let threshold = b as u64 * (a as u64 * r).saturating_sub(1);
    if d < threshold {
        Ok(count_monomials(&Weights::new(&[a, b])?, d as i64))
    } else {
        Ok(r)
    }
}

/// `min(s_d, r)`: the Hilbert function of `r` general simple points.
pub fn simple_points_expected(w: &Weights, r: u64, d: u64) -> u64 {
    count_monomials(w, d as i64).min(r)
}

/// Integer matrix of a rational evaluation matrix, for determinant checks.
pub fn integer_entries(m: &EvaluationMatrix<Rational>) -> Vec<Vec<BigInt>> {
    m.entries.iter().map(|r| crate::linalg::clear_denominators(r)).collect()
}

/// The two regimes where two general double points in `P(1,b,c)` first
/// fill a degree with six monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoPointRegime {
    /// `2b < c < 3b`, or `b = 1, c = 2`: degree `b + c`.
    BPlusC,
    /// `3b/2 < c < 2b`: degree `3b`.
    ThreeB,
}

impl TwoPointRegime {
    pub fn of(b: u32, c: u32) -> Option<Self> {
        if (2 * b < c && c < 3 * b) || (b == 1 && c == 2) {
            Some(Self::BPlusC)
        } else if 3 * b < 2 * c && c < 2 * b {
            Some(Self::ThreeB)
        } else {
            None
        }
    }

    pub fn degree(self, b: u32, c: u32) -> u64 {
        match self {
            Self::BPlusC => (b + c) as u64,
            Self::ThreeB => 3 * b as u64,
        }
    }

    /// Basis of the six monomials, as exponents of `(z, u, v)`.
    pub fn basis(self, b: u32, c: u32) -> Vec<Vec<u32>> {
        match self {
            Self::BPlusC => vec![
                vec![b + c, 0, 0],
                vec![c, 1, 0],
                vec![c - b, 2, 0],
                vec![c - 2 * b, 3, 0],
                vec![b, 0, 1],
                vec![0, 1, 1],
            ],
            Self::ThreeB => vec![
                vec![3 * b, 0, 0],
                vec![2 * b, 1, 0],
                vec![b, 2, 0],
                vec![0, 3, 0],
                vec![2 * b - c, 1, 1],
                vec![3 * b - c, 0, 1],
            ],
        }
    }
}

/// The 6x6 evaluation matrix of double points at `[1:p1:p2]`, `[1:q1:q2]`
/// in the regime's degree. Rows for the `b + c` regime are `dz, du` at each
/// point followed by `dv` at both; for `3b` they are `dz, du, dv` per point.
pub fn two_point_matrix(
    b: u32,
    c: u32,
    p: [Rational; 2],
    q: [Rational; 2],
) -> Result<(TwoPointRegime, Vec<Vec<Rational>>)> {
    let regime = TwoPointRegime::of(b, c)
        .ok_or_else(|| Error::UnsupportedConfiguration(format!("(1,{b},{c}) is in neither two-point regime")))?;
    let basis = regime.basis(b, c);
    let one = Rational::from_integer(1.into());
    let pp = [one.clone(), p[0].clone(), p[1].clone()];
    let qq = [one, q[0].clone(), q[1].clone()];
    let dz = vec![1, 0, 0];
    let du = vec![0, 1, 0];
    let dv = vec![0, 0, 1];
    let rows = |pt: &[Rational], ops: &[Vec<u32>]| derivative_rows(&Rationals, &basis, pt, ops);
    let m = match regime {
        TwoPointRegime::BPlusC => {
            let zu = [dz, du];
            let dvs = [dv];
            [rows(&pp, &zu), rows(&qq, &zu), rows(&pp, &dvs), rows(&qq, &dvs)].concat()
        }
        TwoPointRegime::ThreeB => {
            let all = [dz, du, dv];
            [rows(&pp, &all), rows(&qq, &all)].concat()
        }
    };
    Ok((regime, m))
}

/// The closed-form determinants claimed for the two regimes.
pub fn two_point_stated_det(regime: TwoPointRegime, b: u32, c: u32, p1: &Rational, q1: &Rational) -> Rational {
    let int = |v: u64| Rational::from_integer(v.into());
    let t = p1 - q1;
    match regime {
        TwoPointRegime::BPlusC => {
            let bc = int((b + c) as u64);
            -(t.pow(5) * &bc * &bc)
        }
        TwoPointRegime::ThreeB => {
            let b3 = int(3 * b as u64);
            let two = int(2);
            let inner = &b3 * t.pow(2) - &two * p1 * p1 - &two * p1 * q1 - &two * q1 * q1;
            &b3 * t.pow(3) * inner
        }
    }
}

/// Determinant of [`two_point_matrix`] as derived from its entries:
/// `-(b+c)^2 (p1-q1)^5` and `9 b^2 (p1-q1)^5`.
pub fn two_point_true_det(regime: TwoPointRegime, b: u32, c: u32, p1: &Rational, q1: &Rational) -> Rational {
    let int = |v: u64| Rational::from_integer(v.into());
    let t5 = (p1 - q1).pow(5);
    match regime {
        TwoPointRegime::BPlusC => -(t5 * int(((b + c) * (b + c)) as u64)),
        TwoPointRegime::ThreeB => t5 * int(9 * (b * b) as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational_det;

    fn w(v: &[u32]) -> Weights {
        Weights::new(v).unwrap()
    }

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn operator_enumeration() {
        assert_eq!(operators(3, 1), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(operators(2, 0), vec![vec![0, 0]]);
        assert_eq!(operators(2, 2).len(), 3);
        // double point in degree 0: the value row only
        let ops = condition_operators(&w(&[1, 2, 3]), 2, 0);
        assert_eq!(ops.len(), 4);
        assert_eq!(ops[3], vec![0, 0, 0]);
        assert_eq!(condition_operators(&w(&[1, 2, 3]), 2, 5).len(), 3);
    }

    #[test]
    fn double_point_matrix_degree_three() {
        let ws = w(&[1, 2, 3]);
        let (p1, p2) = (q(7), q(-4));
        let m = build_evaluation_matrix(&Rationals, &ws, &[(vec![q(1), p1.clone(), p2], 2)], 3).unwrap();
        let expect = vec![vec![q(3), p1, q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        assert_eq!(m.entries, expect);
        assert_eq!(rational_rank(&m.entries, 3), 3);
    }

    #[test]
    fn empty_degree_gives_zero_columns() {
        let ws = w(&[2, 3]);
        let cfg = FatPointConfig::double_points(&ws, 2);
        let prof = hilbert_fat_points(&cfg, 1).unwrap();
        assert_eq!((prof.s_d, prof.actual, prof.expected), (0, 0, 0));
        assert!(prof.is_ah);
    }

    #[test]
    fn small_prime_rejected() {
        let ws = w(&[1, 2, 3]);
        let cfg = FatPointConfig::double_points(&ws, 1).with_field(FieldSpec::Prime(7));
        assert!(matches!(hilbert_fat_points(&cfg, 7), Err(Error::InvalidField(_))));
        assert!(hilbert_fat_points(&cfg, 6).is_ok());
        let cfg = cfg.with_field(FieldSpec::Prime(9));
        assert!(hilbert_fat_points(&cfg, 2).is_err());
    }

    #[test]
    fn one_double_point_degree_two() {
        let ws = w(&[1, 2, 3]);
        let prof = hilbert_fat_points(&FatPointConfig::double_points(&ws, 1), 2).unwrap();
        assert_eq!(prof.actual, 2);
        assert!(prof.is_ah);
    }

    #[test]
    fn degree_zero_is_one() {
        for ws in [w(&[1, 2, 3]), w(&[1, 1, 1]), w(&[2, 3])] {
            for mult in 1..=3 {
                let cfg = FatPointConfig::uniform(&ws, 2, mult).unwrap();
                assert_eq!(hilbert_fat_points(&cfg, 0).unwrap().actual, 1, "{ws} m={mult}");
            }
        }
    }

    #[test]
    fn straight_plane_exceptions() {
        let ws = w(&[1, 1, 1]);
        let prof = hilbert_fat_points(&FatPointConfig::double_points(&ws, 5), 4).unwrap();
        assert_eq!((prof.actual, prof.expected, prof.deficiency), (14, 15, 1));
        let prof = hilbert_fat_points(&FatPointConfig::double_points(&ws, 2), 2).unwrap();
        assert_eq!(prof.deficiency, 1);
    }

    #[test]
    fn table_entry_159() {
        let ws = w(&[1, 5, 9]);
        let prof = hilbert_fat_points(&FatPointConfig::double_points(&ws, 3), 21).unwrap();
        assert_eq!(prof.deficiency, 1);
    }

    #[test]
    fn rational_and_prime_agree() {
        let ws = w(&[1, 2, 3]);
        for d in [4, 7, 10] {
            let base = FatPointConfig::double_points(&ws, 4);
            let a = hilbert_fat_points(&base.clone().with_field(FieldSpec::Rational), d).unwrap();
            let b = hilbert_fat_points(&base, d).unwrap();
            assert_eq!(a.actual, b.actual);
        }
    }

    #[test]
    fn explicit_points_and_prefixes() {
        let ws = w(&[1, 1, 1]);
        // four collinear points impose only three conditions on conics
        let pts: Vec<WeightedPoint> = [[1, 0, 0], [1, 1, 0], [1, 2, 0], [1, 3, 0], [0, 0, 1]]
            .iter()
            .map(|c| WeightedPoint::from_integers(&ws, c).unwrap())
            .collect();
        let cfg = FatPointConfig::simple_points(&ws, 5).with_points(pts).unwrap();
        let profs = hilbert_fat_points_prefixes(&cfg, 2).unwrap();
        let actual: Vec<u64> = profs.iter().map(|p| p.actual).collect();
        assert_eq!(actual, vec![1, 2, 3, 3, 4]);
        assert_eq!(profs[4].deficiency, 1);
    }

    #[test]
    fn determinism() {
        let ws = w(&[1, 3, 4]);
        let cfg = FatPointConfig::double_points(&ws, 3).with_seed(99);
        assert_eq!(cfg.resolve_field(50).unwrap(), cfg.resolve_field(50).unwrap());
        let a = deficiency_table(&cfg, 5..=15).unwrap();
        let b = deficiency_table(&cfg, 5..=15).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().map(|p| p.d).collect::<Vec<_>>(), (5..=15).collect::<Vec<_>>());
    }

    #[test]
    fn sampler_constraints() {
        let ws = w(&[1, 2, 3]);
        let f = PrimeField::new(101).unwrap();
        let pts = sample_points(&f, &ws, 30, &mut task_rng(1, 2, 3));
        assert!(pts.iter().all(|p| p[0] == 1 && p.iter().all(|&x| x != 0)));
        for slot in 1..3 {
            let mut vals: Vec<u64> = pts.iter().map(|p| p[slot]).collect();
            vals.sort_unstable();
            vals.dedup();
            assert_eq!(vals.len(), 30);
        }
    }

    #[test]
    fn line_formula_examples() {
        assert_eq!(line_interpolation_formula(1, 2, &[2], 2).unwrap(), 2);
        assert_eq!(line_interpolation_formula(1, 2, &[2], 1).unwrap(), 1);
        assert_eq!(line_interpolation_formula(2, 3, &[2], 12).unwrap(), 2);
        assert!(line_interpolation_formula(2, 4, &[2], 12).is_err());
    }

    #[test]
    fn simple_points_examples() {
        assert_eq!(simple_points_expected(&w(&[1, 2, 3]), 4, 11), 4);
        assert_eq!(simple_points_expected(&w(&[1, 5]), 1, 0), 1);
        assert_eq!(simple_points_expected(&w(&[2, 3]), 2, 1), 0);
    }

    #[test]
    fn cross_check_agrees() {
        let ws = w(&[1, 2, 3]);
        let cfg = FatPointConfig::double_points(&ws, 5);
        let cc = cross_checked_rank(&cfg, 11, 0).unwrap();
        assert!(cc.agreed());
        assert_eq!(cc.rank(), 15);
        assert_ne!(cc.primes[0], cc.primes[1]);
    }

    #[test]
    fn triple_point_low_degree() {
        // P(1,2), triple point: conditions f, f', f'' at p
        let ws = w(&[1, 2]);
        let cfg = FatPointConfig::uniform(&ws, 1, 3).unwrap();
        for d in 0..8 {
            let prof = hilbert_fat_points(&cfg, d).unwrap();
            assert_eq!(prof.actual, line_interpolation_formula(1, 2, &[3], d).unwrap(), "d={d}");
        }
    }

    #[test]
    fn two_point_regimes() {
        assert_eq!(TwoPointRegime::of(2, 5), Some(TwoPointRegime::BPlusC));
        assert_eq!(TwoPointRegime::of(1, 2), Some(TwoPointRegime::BPlusC));
        assert_eq!(TwoPointRegime::of(5, 8), Some(TwoPointRegime::ThreeB));
        assert_eq!(TwoPointRegime::of(2, 3), None);
        assert_eq!(TwoPointRegime::of(2, 6), None);
        let w = Weights::new(&[1, 5, 8]).unwrap();
        for m in TwoPointRegime::ThreeB.basis(5, 8) {
            assert_eq!(w.degree_of(&m), 15);
        }
        assert_eq!(count_monomials(&w, 15), 6);
    }

    #[test]
    fn two_point_determinants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (b, c) in [(1, 2), (2, 5), (3, 7), (3, 8), (4, 11)] {
            for _ in 0..10 {
                let v: Vec<Rational> = (0..4).map(|_| q(rng.gen_range(-50..=50))).collect();
                let (reg, m) =
                    two_point_matrix(b, c, [v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]).unwrap();
                let det = rational_det(&m);
                assert_eq!(det, two_point_stated_det(reg, b, c, &v[0], &v[2]));
                assert_eq!(det, two_point_true_det(reg, b, c, &v[0], &v[2]));
            }
        }
    }

    #[test]
    fn three_b_determinant_differs_from_stated() {
        let (b, c) = (5, 8);
        let (p1, p2, q1, q2) = (q(2), q(3), q(5), q(7));
        let (reg, mut m) = two_point_matrix(b, c, [p1.clone(), p2], [q1.clone(), q2]).unwrap();
        let det = rational_det(&m);
        assert_eq!(det, two_point_true_det(reg, b, c, &p1, &q1));
        assert_ne!(det, two_point_stated_det(reg, b, c, &p1, &q1));
        // putting p^3 where d/dz u^3 = 0 belongs reproduces the stated value
        m[0][3] = p1.pow(3);
        m[3][3] = q1.pow(3);
        assert_eq!(rational_det(&m), two_point_stated_det(reg, b, c, &p1, &q1));
    }
}
