//! Generators of ideals of single points: the weighted line, the weighted
//! plane (through monomial-curve relations), and spaces whose point ideals
//! are cut out by binomials in a weight-1 variable.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::grading::Weights;
use crate::poly::{SparsePoly, WeightedPoint};

/// Relation `r * w_i = k * w_j + g * w_l` for one of the three weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HerzogRelation {
    pub r: u64,
    pub k: u64,
    pub g: u64,
}

/// Minimal relations among three weights `(a, b, c)`:
/// `r1 a = k1 b + g1 c`, `r2 b = k2 a + g2 c`, `r3 c = k3 a + g3 b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HerzogData {
    pub weights: [u64; 3],
    pub relations: [HerzogRelation; 3],
    /// Some `k_i` or `g_i` vanishes.
    pub hc: bool,
}

impl HerzogData {
    pub fn r(&self) -> [u64; 3] {
        self.relations.map(|rel| rel.r)
    }
}

/// Smallest `(k, g)` in lexicographic order with `k x + g y = n`.
fn smallest_combination(n: u64, x: u64, y: u64) -> Option<(u64, u64)> {
    (0..=n / x).find_map(|k| {
        let rest = n - k * x;
        rest.is_multiple_of(y).then(|| (k, rest / y))
    })
}

fn minimal_relation(target: u64, x: u64, y: u64) -> HerzogRelation {
    // r = x always works (k = target), so the search is bounded.
    (1..=x)
        .find_map(|r| smallest_combination(r * target, x, y).map(|(k, g)| HerzogRelation { r, k, g }))
        .expect("r = x admits a solution")
}

/// Minimal monomial-curve relations for `(a, b, c)` taken in the given order.
pub fn herzog_data(a: u64, b: u64, c: u64) -> Result<HerzogData> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::InvalidWeights("weights must be positive".into()));
    }
    if a.gcd(&b).gcd(&c) != 1 {
        return Err(Error::InvalidWeights(format!("gcd({a},{b},{c}) != 1")));
    }
    let relations = [
        minimal_relation(a, b, c),
        minimal_relation(b, a, c),
        minimal_relation(c, a, b),
    ];
    let hc = relations.iter().any(|rel| rel.k == 0 || rel.g == 0);
    Ok(HerzogData {
        weights: [a, b, c],
        relations,
        hc,
    })
}

fn powq(x: &Rational, e: u64) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// `c1 * x^e1 - c2 * x^e2`, sign-normalized.
fn binomial(w: &Weights, c1: Rational, e1: Vec<u32>, c2: Rational, e2: Vec<u32>) -> SparsePoly {
    SparsePoly::from_terms(w, [(e1, c1), (e2, -c2)]).normalized()
}

fn exps(v: [u64; 3]) -> Vec<u32> {
    v.iter().map(|&e| e as u32).collect()
}

/// The three binomials cutting out a point with no vanishing coordinate.
fn plane_binomials(w: &Weights, h: &HerzogData, p: &[Rational]) -> Vec<SparsePoly> {
    let [r1, r2, r3] = h.relations;
    vec![
        binomial(
            w,
            powq(&p[1], r1.k) * powq(&p[2], r1.g),
            exps([r1.r, 0, 0]),
            powq(&p[0], r1.r),
            exps([0, r1.k, r1.g]),
        ),
        binomial(
            w,
            powq(&p[0], r2.k) * powq(&p[2], r2.g),
            exps([0, r2.r, 0]),
            powq(&p[1], r2.r),
            exps([r2.k, 0, r2.g]),
        ),
        binomial(
            w,
            powq(&p[0], r3.k) * powq(&p[1], r3.g),
            exps([0, 0, r3.r]),
            powq(&p[2], r3.r),
            exps([r3.k, r3.g, 0]),
        ),
    ]
}

/// Generators of the monomial-curve ideal `ker(z -> t^a, u -> t^b, v -> t^c)`.
pub fn herzog_binomials(w: &Weights) -> Result<Vec<SparsePoly>> {
    let a = plane_weights(w)?;
    let h = herzog_data(a[0], a[1], a[2])?;
    Ok(plane_binomials(
        w,
        &h,
        &[Rational::one(), Rational::one(), Rational::one()],
    ))
}

/// Drops generators that are scalar multiples of earlier ones, which
/// happens when two relations coincide (e.g. with a weight 1).
fn distinct(gens: Vec<SparsePoly>) -> Vec<SparsePoly> {
    let mut out: Vec<SparsePoly> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.is_scalar_multiple_of(&g)) {
            out.push(g);
        }
    }
    out
}

fn plane_weights(w: &Weights) -> Result<[u64; 3]> {
    match w.as_slice() {
        &[a, b, c] => Ok([a as u64, b as u64, c as u64]),
        _ => Err(Error::InvalidWeights(format!("{w} is not a weighted plane"))),
    }
}

/// Ideal of a point of the weighted line `P(a, b)`.
pub fn point_ideal_line(p: &WeightedPoint) -> Result<Vec<SparsePoly>> {
    let w = p.weights();
    let (a, b) = match w.as_slice() {
        &[a, b] => (a as u64, b as u64),
        _ => return Err(Error::InvalidWeights(format!("{w} is not a weighted line"))),
    };
    if a.gcd(&b) != 1 {
        return Err(Error::UnsupportedWeights(format!("gcd({a},{b}) != 1")));
    }
    let (p0, p1) = (p.coord(0), p.coord(1));
    if p0.is_zero() {
        return Ok(vec![SparsePoly::variable(w, 0)]);
    }
    if p1.is_zero() {
        return Ok(vec![SparsePoly::variable(w, 1)]);
    }
    Ok(vec![binomial(
        w,
        powq(p1, a),
        vec![b as u32, 0],
        powq(p0, b),
        vec![0, a as u32],
    )])
}

/// Ideal of a point of a well-formed weighted plane `P(a, b, c)`.
pub fn point_ideal_plane(p: &WeightedPoint) -> Result<Vec<SparsePoly>> {
    let w = p.weights();
    let a = plane_weights(w)?;
    if !w.is_well_formed() {
        return Err(Error::InvalidWeights(format!("{w} is not well-formed")));
    }
    let c = p.coords();
    let zeros: Vec<usize> = (0..3).filter(|&i| c[i].is_zero()).collect();
    match zeros.as_slice() {
        [] => {
            let h = herzog_data(a[0], a[1], a[2])?;
            Ok(distinct(plane_binomials(w, &h, c)))
        }
        &[i] => {
            // the other two indices j < l
            let (j, l) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let mut e1 = vec![0u32; 3];
            let mut e2 = vec![0u32; 3];
            e1[j] = a[l] as u32;
            e2[l] = a[j] as u32;
            let g = binomial(w, powq(&c[l], a[j]), e1, powq(&c[j], a[l]), e2);
            Ok(vec![SparsePoly::variable(w, i), g])
        }
        zs => Ok(zs.iter().map(|&i| SparsePoly::variable(w, i)).collect()),
    }
}

/// Ideal of a point of `P(1, ..., 1, a_{i+1}, ..., a_n)` with a nonzero
/// coordinate of weight 1: the binomials `p_j x_t^{a_j} - p_t^{a_j} x_j`.
pub fn point_ideal_hyperplane_case(p: &WeightedPoint) -> Result<Vec<SparsePoly>> {
    let w = p.weights();
    let a = w.as_slice();
    let t = (0..a.len())
        .find(|&i| a[i] == 1 && !p.coord(i).is_zero())
        .ok_or_else(|| Error::UnsupportedConfiguration("no nonzero coordinate of weight 1".into()))?;
    let pt = p.coord(t);
    Ok((0..a.len())
        .filter(|&j| j != t)
        .map(|j| {
            let mut e1 = vec![0u32; a.len()];
            let mut e2 = vec![0u32; a.len()];
            e1[t] = a[j];
            e2[j] = 1;
            binomial(w, p.coord(j).clone(), e1, powq(pt, a[j] as u64), e2)
        })
        .collect())
}

/// Dispatches to the explicit description that applies to `p`.
pub fn point_ideal(p: &WeightedPoint) -> Result<Vec<SparsePoly>> {
    let a = p.weights().as_slice();
    let has_unit_support = a.iter().zip(p.coords()).any(|(&w, c)| w == 1 && !c.is_zero());
    match a.len() {
        2 => point_ideal_line(p),
        3 if p.weights().is_well_formed() => point_ideal_plane(p),
        _ if has_unit_support => point_ideal_hyperplane_case(p),
        _ => Err(Error::UnsupportedConfiguration(format!(
            "no explicit generators known for {p} in P{}",
            p.weights()
        ))),
    }
}

pub fn evaluate(f: &SparsePoly, p: &WeightedPoint) -> Rational {
    f.evaluate(p)
}
