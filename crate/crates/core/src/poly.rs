//! Sparse weighted-homogeneous polynomials with rational coefficients, and
//! points of weighted projective space.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::grading::{grlex_order, Weights};

/// Polynomial stored as a map from exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    weights: Weights,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SparsePoly {
    pub fn zero(weights: &Weights) -> Self {
        Self {
            weights: weights.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(weights: &Weights, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(weights);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn monomial(weights: &Weights, exponents: Vec<u32>, coeff: Rational) -> Self {
        Self::from_terms(weights, [(exponents, coeff)])
    }

    pub fn variable(weights: &Weights, i: usize) -> Self {
        let mut e = vec![0; weights.len()];
        e[i] = 1;
        Self::monomial(weights, e, Rational::one())
    }

    fn add_term(&mut self, exponents: Vec<u32>, coeff: Rational) {
        assert_eq!(exponents.len(), self.weights.len(), "exponent vector length");
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in basis order (see [`grlex_order`]).
    pub fn terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_order(a.0, b.0));
        v
    }

    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms().into_iter().next()
    }

    /// Weighted degree if every term has the same degree.
    pub fn degree(&self) -> Option<u64> {
        let mut degs = self.terms.keys().map(|e| self.weights.degree_of(e));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(&self.weights, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.weights);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut e = vec![0; self.weights.len()];
        let mut acc = Self::monomial(&self.weights, std::mem::take(&mut e), Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        Self::from_terms(
            &self.weights,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * Rational::from_integer(e[i].into()))
            }),
        )
    }

    /// Sign-normalized copy: the leading coefficient is positive.
    pub fn normalized(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Scalar-normalized copy: leading coefficient 1.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Whether `self = c * other` for some nonzero rational `c`.
    pub fn is_scalar_multiple_of(&self, other: &Self) -> bool {
        self.monic() == other.monic()
    }

    pub fn evaluate(&self, p: &WeightedPoint) -> Rational {
        self.evaluate_coords(p.coords())
    }

    pub fn evaluate_coords(&self, coords: &[Rational]) -> Rational {
        assert_eq!(coords.len(), self.weights.len(), "point dimension");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in coords.iter().zip(e) {
                if k > 0 {
                    term *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += term;
        }
        acc
    }

    /// Evaluation in another field; `None` if a coefficient has no image there.
    pub fn evaluate_in<F: Field>(&self, field: &F, coords: &[F::Elem]) -> Option<F::Elem> {
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut term = field.from_rational(c)?;
            for (x, &k) in coords.iter().zip(e) {
                term = field.mul(&term, &field.pow(x, k as u64));
            }
            acc = field.add(&acc, &term);
        }
        Some(acc)
    }

    /// Substitutes `x_i -> c_i t^{a_i}` and returns the univariate result as
    /// a map from powers of `t` to coefficients (zero entries dropped).
    pub fn substitute_curve(&self, c: &[Rational]) -> BTreeMap<u64, Rational> {
        let mut out: BTreeMap<u64, Rational> = BTreeMap::new();
        for (e, coeff) in &self.terms {
            let mut value = coeff.clone();
            for (x, &k) in c.iter().zip(e) {
                value *= num_traits::pow(x.clone(), k as usize);
            }
            *out.entry(self.weights.degree_of(e)).or_insert_with(Rational::zero) += value;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn variable_names(&self) -> Vec<String> {
        match self.weights.len() {
            1 => vec!["z".into()],
            2 => vec!["z".into(), "u".into()],
            3 => vec!["z".into(), "u".into(), "v".into()],
            n => (0..n).map(|i| format!("x{i}")).collect(),
        }
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.variable_names();
        for (idx, (e, c)) in self.terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = e.iter().all(|&k| k == 0);
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let factors: Vec<String> = e
                .iter()
                .zip(&names)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermRecord<'a> {
    exponents: &'a [u32],
    coeff: String,
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRecord<'_>> = self
            .terms()
            .into_iter()
            .map(|(e, c)| TermRecord {
                exponents: e,
                coeff: c.to_string(),
            })
            .collect();
        let mut s = serializer.serialize_struct("SparsePoly", 3)?;
        s.serialize_field("weights", self.weights.as_slice())?;
        s.serialize_field("text", &self.to_string())?;
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

/// A representative of a point of `P(a_0, ..., a_n)`.
#[derive(Clone, Debug)]
pub struct WeightedPoint {
    weights: Weights,
    coords: Vec<Rational>,
}

impl WeightedPoint {
    pub fn new(weights: &Weights, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != weights.len() {
            return Err(Error::InvalidPoint(format!(
                "expected {} coordinates, got {}",
                weights.len(),
                coords.len()
            )));
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        Ok(Self {
            weights: weights.clone(),
            coords,
        })
    }

    pub fn from_integers(weights: &Weights, coords: &[i64]) -> Result<Self> {
        Self::new(
            weights,
            coords.iter().map(|&c| Rational::from_integer(c.into())).collect(),
        )
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn zero_count(&self) -> usize {
        self.coords.iter().filter(|c| c.is_zero()).count()
    }

    /// `lambda . p`, coordinate `i` scaled by `lambda^{a_i}`.
    pub fn scaled(&self, lambda: &Rational) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(self.weights.as_slice())
            .map(|(c, &a)| c * num_traits::pow(lambda.clone(), a as usize))
            .collect();
        Self {
            weights: self.weights.clone(),
            coords,
        }
    }

    /// Representative whose first nonzero weight-1 coordinate is 1; the
    /// point itself when no such coordinate exists.
    pub fn canonical(&self) -> Self {
        let pivot = self
            .coords
            .iter()
            .zip(self.weights.as_slice())
            .find(|(c, &a)| a == 1 && !c.is_zero());
        match pivot {
            Some((c, _)) => self.scaled(&c.recip()),
            None => self.clone(),
        }
    }

    /// Equality as points over the algebraic closure: `q = lambda . p` for
    /// some nonzero `lambda` in an extension field.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.orbit_witness(other).is_some()
    }

    /// Equality with the scalar `lambda` required to be rational.
    pub fn equivalent_over_rationals(&self, other: &Self) -> bool {
        use crate::field::Rationals;
        match self.orbit_witness(other) {
            Some((mu, g)) => Rationals.is_nth_power(&mu, g),
            None => false,
        }
    }

    /// Returns `(mu, g)` with `lambda^g = mu` forced by the nonzero
    /// coordinates, if the ratios are consistent.
    fn orbit_witness(&self, other: &Self) -> Option<(Rational, u64)> {
        if self.weights != other.weights {
            return None;
        }
        let mut support = Vec::new();
        for (i, (x, y)) in self.coords.iter().zip(&other.coords).enumerate() {
            match (x.is_zero(), y.is_zero()) {
                (true, true) => {}
                (false, false) => support.push(i),
                _ => return None,
            }
        }
        let a = self.weights.as_slice();
        let ratios: Vec<Rational> = support.iter().map(|&i| &other.coords[i] / &self.coords[i]).collect();
        // Bezout combination sum c_i a_i = g over the support.
        let mut g: i64 = 0;
        let mut coeffs: Vec<i64> = Vec::with_capacity(support.len());
        for &i in &support {
            let ai = a[i] as i64;
            let ext = g.extended_gcd(&ai);
            for c in coeffs.iter_mut() {
                *c *= ext.x;
            }
            coeffs.push(ext.y);
            g = ext.gcd;
        }
        let mut mu = Rational::one();
        for (r, &c) in ratios.iter().zip(&coeffs) {
            let factor = num_traits::pow(r.clone(), c.unsigned_abs() as usize);
            mu = if c >= 0 { mu * factor } else { mu / factor };
        }
        let consistent = support
            .iter()
            .zip(&ratios)
            .all(|(&i, r)| &num_traits::pow(mu.clone(), (a[i] as i64 / g) as usize) == r);
        consistent.then_some((mu, g as u64))
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}
