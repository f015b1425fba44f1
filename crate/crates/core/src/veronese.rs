//! The weighted Veronese map and secant dimensions.
//!
//! On the chart `x_0 != 0` of `P(1, a_1, ..., a_n)` the degree-`d` monomials
//! define a map `psi` into `P^{s_d - 1}`. Its tangent space at `psi(p)` is
//! spanned by the rows of the Jacobian, and the span of `r` tangent spaces
//! is the tangent space of the `r`-th secant variety at a general point.
//! The stacked Jacobian is the evaluation matrix of `r` double points read
//! the other way round, so secant dimensions and double-point Hilbert
//! functions determine each other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rational, Rationals, ResolvedField};
use crate::grading::{enumerate_monomials, Weights};
use crate::interpolation::{
    derivative_rows, sample_points, task_rng, FatPointConfig, SampleField, DEFAULT_SEED, DEFAULT_TRIALS,
};
use crate::linalg::{rank, EchelonBuilder};
use crate::poly::WeightedPoint;

/// Degree-`d` monomial chart of `P(1, a_1, ..., a_n)`, `d >= a_n`.
#[derive(Clone, Debug)]
pub struct VeroneseChart {
    weights: Weights,
    d: u64,
    basis: Vec<Vec<u32>>,
}

impl VeroneseChart {
    pub fn new(weights: &Weights, d: u64) -> Result<Self> {
        if weights.get(0) != 1 {
            return Err(Error::UnsupportedWeights(format!("P{weights} has no weight 1")));
        }
        if d < weights.max() as u64 {
            return Err(Error::OutsideDomain(format!(
                "degree {d} is below the largest weight {}; the chart needs d >= a_n",
                weights.max()
            )));
        }
        let basis = enumerate_monomials(weights, d as i64)
            .into_iter()
            .map(|m| m.exponents)
            .collect();
        Ok(Self {
            weights: weights.clone(),
            d,
            basis,
        })
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn degree(&self) -> u64 {
        self.d
    }

    /// The monomials `m_0, ..., m_N` as exponent vectors; `m_0 = x_0^d`.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// `N + 1 = s_d`.
    pub fn ambient_len(&self) -> usize {
        self.basis.len()
    }

    fn check_point(&self, p: &WeightedPoint) -> Result<()> {
        if p.weights() != &self.weights {
            return Err(Error::InvalidPoint(format!("{p} does not live in P{}", self.weights)));
        }
        Ok(())
    }

    /// `[m_0(p) : ... : m_N(p)]`.
    pub fn image(&self, p: &WeightedPoint) -> Result<Vec<Rational>> {
        self.check_point(p)?;
        let row = derivative_rows(&Rationals, &self.basis, p.coords(), &[vec![0; self.weights.len()]])
            .pop()
            .expect("one row");
        if row.iter().all(|x| x == &Rational::from_integer(0.into())) {
            return Err(Error::OutsideDomain(format!(
                "every degree-{} monomial vanishes at {p}",
                self.d
            )));
        }
        Ok(row)
    }

    /// Row `j` holds `d m_k / d x_j` at `p` for every basis monomial.
    pub fn jacobian(&self, p: &WeightedPoint) -> Result<Vec<Vec<Rational>>> {
        self.check_point(p)?;
        if p.coord(0) == &Rational::from_integer(0.into()) {
            return Err(Error::OutsideDomain(format!("{p} is not in the chart x_0 != 0")));
        }
        Ok(self.jacobian_in(&Rationals, p.coords()))
    }

    pub fn jacobian_in<F: Field>(&self, field: &F, coords: &[F::Elem]) -> Vec<Vec<F::Elem>> {
        derivative_rows(field, &self.basis, coords, &unit_operators(self.weights.len()))
    }
}

fn unit_operators(n1: usize) -> Vec<Vec<u32>> {
    (0..n1)
        .map(|j| {
            let mut u = vec![0; n1];
            u[j] = 1;
            u
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct SecantOptions {
    pub field: FieldSpec,
    pub seed: u64,
    pub trials: usize,
}

impl Default for SecantOptions {
    fn default() -> Self {
        Self {
            field: FieldSpec::default(),
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecantReport {
    pub weights: Weights,
    pub d: u64,
    pub r: u64,
    /// `min(s_d, r (n+1)) - 1`
    pub expected_dim: u64,
    /// Largest rank over the trials, minus one.
    pub computed_dim: u64,
    /// `expected_dim - computed_dim`, claimed only when every trial agrees.
    pub defect: Option<u64>,
    pub trial_ranks: Vec<u64>,
    pub prime: Option<u64>,
    pub seed: u64,
}

/// Dimension of the `r`-th secant variety of the chart's image, from the
/// rank of `r` stacked Jacobians at sampled general points.
pub fn secant_dimension(chart: &VeroneseChart, r: u64, opts: &SecantOptions) -> Result<SecantReport> {
    if r == 0 {
        return Err(Error::Precondition("r must be at least 1".into()));
    }
    let w = chart.weights();
    let cfg = FatPointConfig::double_points(w, r as usize)
        .with_field(opts.field)
        .with_seed(opts.seed)
        .with_trials(opts.trials);
    let field = cfg.resolve_field(chart.d)?;
    let trials = opts.trials.max(1);
    let trial_ranks = (0..trials)
        .map(|t| match field {
            ResolvedField::Prime(p) => Ok(stacked_rank(&PrimeField::new(p)?, chart, r, opts.seed, t)),
            ResolvedField::Rational => Ok(stacked_rank(&Rationals, chart, r, opts.seed, t)),
        })
        .collect::<Result<Vec<u64>>>()?;
    let best = *trial_ranks.iter().max().expect("at least one trial");
    let n1 = w.len() as u64;
    let expected_dim = (chart.ambient_len() as u64).min(r * n1) - 1;
    let computed_dim = best.saturating_sub(1);
    let defect = trial_ranks
        .iter()
        .all(|&x| x == best)
        .then_some(expected_dim - computed_dim);
    Ok(SecantReport {
        weights: w.clone(),
        d: chart.d,
        r,
        expected_dim,
        computed_dim,
        defect,
        trial_ranks,
        prime: field.prime(),
        seed: opts.seed,
    })
}

fn stacked_rank<F: SampleField>(field: &F, chart: &VeroneseChart, r: u64, seed: u64, trial: usize) -> u64 {
    let points = sample_points(field, chart.weights(), r as usize, &mut task_rng(seed, chart.d, trial));
    let mut eb = EchelonBuilder::new(field.clone(), chart.ambient_len());
    for p in &points {
        for row in chart.jacobian_in(field, p) {
            if eb.is_full() {
                return eb.rank() as u64;
            }
            eb.push(row);
        }
    }
    eb.rank() as u64
}

/// Rank of the Jacobian at one point; the tangent space has projective
/// dimension one less.
pub fn tangent_rank(chart: &VeroneseChart, p: &WeightedPoint) -> Result<usize> {
    let j = chart.jacobian(p)?;
    Ok(rank(&Rationals, &j, chart.ambient_len()))
}
