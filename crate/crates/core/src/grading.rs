//! Weighted gradings: monomials of a fixed weighted degree and the Hilbert
//! function `s_d` of `k[x_0, ..., x_n]` with `deg x_i = a_i`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grading vector `(a_0, ..., a_n)`, stored in non-decreasing order.
///
/// The order the caller supplied is kept in `permutation`: sorted entry `i`
/// came from input position `permutation[i]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Weights {
    a: Vec<u32>,
    permutation: Vec<usize>,
}

impl TryFrom<Vec<u32>> for Weights {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Weights::new(&v)
    }
}

impl From<Weights> for Vec<u32> {
    fn from(w: Weights) -> Self {
        w.a
    }
}

impl PartialEq for Weights {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl Eq for Weights {}

impl std::hash::Hash for Weights {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
    }
}

impl Weights {
    pub fn new(input: &[u32]) -> Result<Self> {
        if input.is_empty() {
            return Err(Error::InvalidWeights("at least one weight is required".into()));
        }
        if let Some(pos) = input.iter().position(|&w| w == 0) {
            return Err(Error::InvalidWeights(format!("weight at position {pos} is zero")));
        }
        let mut permutation: Vec<usize> = (0..input.len()).collect();
        permutation.sort_by_key(|&i| (input[i], i));
        let a = permutation.iter().map(|&i| input[i]).collect();
        Ok(Self { a, permutation })
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.a
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Number of variables, `n + 1`.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Projective dimension `n`.
    pub fn dim(&self) -> usize {
        self.a.len() - 1
    }

    pub fn get(&self, i: usize) -> u32 {
        self.a[i]
    }

    pub fn max(&self) -> u32 {
        *self.a.last().expect("non-empty")
    }

    pub fn has_unit_weight(&self) -> bool {
        self.a[0] == 1
    }

    /// Weights of the coordinate hyperplane `V(x_i)`.
    pub fn without(&self, i: usize) -> Result<Weights> {
        if self.a.len() < 2 {
            return Err(Error::InvalidWeights("cannot drop the only weight".into()));
        }
        let mut rest = self.a.clone();
        rest.remove(i);
        Weights::new(&rest)
    }

    /// Every choice of `n` of the `n + 1` weights is coprime.
    pub fn is_well_formed(&self) -> bool {
        if self.a.len() == 1 {
            return self.a[0] == 1;
        }
        (0..self.a.len()).all(|skip| {
            self.a
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .fold(0u32, |g, (_, &w)| g.gcd(&w))
                == 1
        })
    }

    pub fn degree_of(&self, exponents: &[u32]) -> u64 {
        exponents.iter().zip(&self.a).map(|(&e, &w)| e as u64 * w as u64).sum()
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for Weights {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parsed: std::result::Result<Vec<u32>, _> = trimmed.split(',').map(|t| t.trim().parse::<u32>()).collect();
        match parsed {
            Ok(v) => Weights::new(&v),
            Err(_) => Err(Error::InvalidWeights(format!("cannot parse `{s}`"))),
        }
    }
}

/// Exponent vector together with its weighted degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub degree: u64,
}

impl Monomial {
    pub fn new(weights: &Weights, exponents: Vec<u32>) -> Self {
        assert_eq!(exponents.len(), weights.len(), "exponent vector length");
        let degree = weights.degree_of(&exponents);
        Self { exponents, degree }
    }

    pub fn total_exponent(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }
}

/// The basis order used everywhere: larger exponent sum first, ties broken by
/// descending lexicographic order. `Less` means "comes first".
pub fn grlex_order(a: &[u32], b: &[u32]) -> Ordering {
    let sa: u64 = a.iter().map(|&e| e as u64).sum();
    let sb: u64 = b.iter().map(|&e| e as u64).sum();
    sb.cmp(&sa).then_with(|| b.cmp(a))
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| grlex_order(&self.exponents, &other.exponents))
    }
}

/// `s_d`: number of `e` with `sum a_i e_i = d`, by coin-counting dynamic
/// programming. Negative degrees give 0.
///
/// Panics if the count overflows `u64`; use [`count_monomials_big`] there.
pub fn count_monomials(w: &Weights, d: i64) -> u64 {
    if d < 0 {
        return 0;
    }
    HilbertTable::new(w, d as u64).value(d)
}

/// Arbitrary-precision variant of [`count_monomials`].
pub fn count_monomials_big(w: &Weights, d: i64) -> BigUint {
    if d < 0 {
        return BigUint::zero();
    }
    let d = d as usize;
    let mut table = vec![BigUint::zero(); d + 1];
    table[0] = BigUint::from(1u32);
    for &a in w.as_slice() {
        let a = a as usize;
        for x in a..=d {
            let prev = table[x - a].clone();
            table[x] += prev;
        }
    }
    table.swap_remove(d)
}

/// `s_0, ..., s_max` for one grading, filled once and read-only afterwards.
#[derive(Clone, Debug)]
pub struct HilbertTable {
    weights: Weights,
    values: Vec<u64>,
}

impl HilbertTable {
    pub fn new(w: &Weights, max_degree: u64) -> Self {
        let len = max_degree as usize + 1;
        let mut values = vec![0u64; len];
        values[0] = 1;
        for &a in w.as_slice() {
            let a = a as usize;
            for x in a..len {
                values[x] = values[x]
                    .checked_add(values[x - a])
                    .expect("s_d overflows u64; use count_monomials_big");
            }
        }
        Self {
            weights: w.clone(),
            values,
        }
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn max_degree(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// `s_d`; 0 for negative `d`. Panics above the filled range.
    pub fn value(&self, d: i64) -> u64 {
        if d < 0 {
            return 0;
        }
        match self.values.get(d as usize) {
            Some(&v) => v,
            None => panic!("degree {d} beyond table range {}", self.max_degree()),
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// All monomials of weighted degree `d`, in [`grlex_order`].
pub fn enumerate_monomials(w: &Weights, d: i64) -> Vec<Monomial> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    if d < 0 {
        return Vec::new();
    }
    let mut current = vec![0u32; w.len()];
    fill_exponents(w.as_slice(), 0, d as u64, &mut current, &mut out);
    out.sort_by(|a, b| grlex_order(a, b));
    out.into_iter()
        .map(|exponents| Monomial {
            exponents,
            degree: d as u64,
        })
        .collect()
}

fn fill_exponents(a: &[u32], idx: usize, remaining: u64, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let w = a[idx] as u64;
    if idx + 1 == a.len() {
        if remaining.is_multiple_of(w) {
            current[idx] = (remaining / w) as u32;
            out.push(current.clone());
        }
        return;
    }
    for e in 0..=remaining / w {
        current[idx] = e as u32;
        fill_exponents(a, idx + 1, remaining - e * w, current, out);
    }
    current[idx] = 0;
}

/// The closed forms for `s_d` that exist: two coprime weights (Popoviciu's
/// formula), `(1, b)`, and `(1, 2, 3)`. `Ok(None)` means no formula applies.
pub fn hilbert_closed_form(w: &Weights, d: i64) -> Result<Option<u64>> {
    if d < 0 {
        return Ok(Some(0));
    }
    let d = d as u64;
    match *w.as_slice() {
        [a, b] => {
            let (a, b) = (a as u64, b as u64);
            if a.gcd(&b) != 1 {
                return Err(Error::UnsupportedWeights(format!(
                    "two-variable formula needs coprime weights, got ({a},{b})"
                )));
            }
            if a == 1 {
                return Ok(Some(d / b + 1));
            }
            // a*q - b*p = 1 with p, q positive
            let q = (1..=b).find(|q| (a * q) % b == 1).expect("a invertible mod b");
            let p = (a * q - 1) / b;
            let (dq, dp) = (d as u128 * q as u128, d as u128 * p as u128);
            let value = if !d.is_multiple_of(a) {
                dq / b as u128 - dp / a as u128
            } else {
                dq / b as u128 - dp / a as u128 + 1
            };
            Ok(Some(value as u64))
        }
        [1, 2, 3] => {
            let d = d as u128;
            Ok(Some(((d * d + 6 * d + 12) / 12) as u64))
        }
        _ => Ok(None),
    }
}

/// Whether `d` lies in the numerical semigroup generated by the weights.
pub fn semigroup_member(w: &Weights, d: i64) -> bool {
    if d < 0 {
        return false;
    }
    let d = d as usize;
    let mut reach = vec![false; d + 1];
    reach[0] = true;
    for &a in w.as_slice() {
        let a = a as usize;
        for x in a..=d {
            if reach[x - a] {
                reach[x] = true;
            }
        }
    }
    reach[d]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[u32]) -> Weights {
        Weights::new(v).unwrap()
    }

    // Independent oracle: nested loops over exponent vectors.
    fn brute_count(a: &[u32], d: u64) -> u64 {
        fn go(a: &[u32], d: u64) -> u64 {
            match a {
                [] => (d == 0) as u64,
                [first, rest @ ..] => (0..=d / *first as u64).map(|e| go(rest, d - e * *first as u64)).sum(),
            }
        }
        go(a, d)
    }

    #[test]
    fn counts_from_worked_example() {
        assert_eq!(count_monomials(&w(&[1, 2, 3]), 14), 24);
        assert_eq!(count_monomials(&w(&[1, 2, 3]), 11), 16);
        assert_eq!(count_monomials(&w(&[1, 2, 3]), 0), 1);
        assert_eq!(count_monomials(&w(&[2, 3]), 1), 0);
        assert_eq!(count_monomials(&w(&[1, 2]), 14), 8);
        assert_eq!(count_monomials(&w(&[1, 2, 3]), -1), 0);
    }

    #[test]
    fn weights_sorted_with_permutation() {
        let ws = w(&[3, 1, 2]);
        assert_eq!(ws.as_slice(), &[1, 2, 3]);
        assert_eq!(ws.permutation(), &[1, 2, 0]);
        assert!(Weights::new(&[]).is_err());
        assert!(Weights::new(&[1, 0]).is_err());
        assert_eq!("1, 5,9".parse::<Weights>().unwrap().as_slice(), &[1, 5, 9]);
        assert!("1,x".parse::<Weights>().is_err());
    }

    #[test]
    fn well_formedness() {
        assert!(w(&[1, 2, 3]).is_well_formed());
        assert!(w(&[1, 1, 1]).is_well_formed());
        assert!(w(&[3, 4, 5]).is_well_formed());
        assert!(!w(&[1, 2, 4]).is_well_formed());
        assert!(!w(&[2, 2, 3]).is_well_formed());
        assert!(w(&[1, 2, 3, 4]).is_well_formed());
        assert!(!w(&[1, 2, 2, 4]).is_well_formed());
    }

    #[test]
    fn enumerate_small_cases() {
        let m: Vec<Vec<u32>> = enumerate_monomials(&w(&[1, 2, 3]), 3)
            .into_iter()
            .map(|m| m.exponents)
            .collect();
        assert_eq!(m, vec![vec![3, 0, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        let m1: Vec<Vec<u32>> = enumerate_monomials(&w(&[1, 2, 3]), 1)
            .into_iter()
            .map(|m| m.exponents)
            .collect();
        assert_eq!(m1, vec![vec![1, 0, 0]]);
        assert_eq!(enumerate_monomials(&w(&[1, 2]), 14).len(), 8);
        assert!(enumerate_monomials(&w(&[2, 3]), 1).is_empty());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(hilbert_closed_form(&w(&[1, 2, 3]), 14).unwrap(), Some(24));
        assert_eq!(hilbert_closed_form(&w(&[1, 3]), 7).unwrap(), Some(3));
        assert_eq!(hilbert_closed_form(&w(&[2, 3]), 6).unwrap(), Some(2));
        assert_eq!(hilbert_closed_form(&w(&[1, 2, 4]), 6).unwrap(), None);
        assert!(matches!(
            hilbert_closed_form(&w(&[2, 4]), 6),
            Err(Error::UnsupportedWeights(_))
        ));
    }

    #[test]
    fn closed_forms_match_counting() {
        let mut cases: Vec<Vec<u32>> = vec![vec![1, 2, 3]];
        for a in 1..=9u32 {
            for b in a..=9u32 {
                if a.gcd(&b) == 1 {
                    cases.push(vec![a, b]);
                }
            }
        }
        for c in cases {
            let ws = w(&c);
            let table = HilbertTable::new(&ws, 2000);
            for d in 0..=2000i64 {
                assert_eq!(hilbert_closed_form(&ws, d).unwrap(), Some(table.value(d)), "{ws} d={d}");
            }
        }
    }

    #[test]
    fn semigroup() {
        assert!(!semigroup_member(&w(&[2, 3]), 1));
        assert!(semigroup_member(&w(&[2, 3]), 7));
        assert!((0..50).all(|d| semigroup_member(&w(&[1, 2, 3]), d)));
        let ws = w(&[3, 5]);
        for d in 0..40 {
            assert_eq!(semigroup_member(&ws, d), count_monomials(&ws, d) >= 1);
        }
    }

    #[test]
    fn big_counts_agree() {
        let ws = w(&[1, 1, 1, 1, 1]);
        assert_eq!(count_monomials_big(&ws, 30), BigUint::from(count_monomials(&ws, 30)));
        // C(34, 4)
        assert_eq!(count_monomials(&ws, 30), 46_376);
    }

    #[test]
    fn unit_weight_gives_nondecreasing_table() {
        let table = HilbertTable::new(&w(&[1, 4, 57]), 300);
        assert!(table.values().windows(2).all(|p| p[0] <= p[1]));
    }

    proptest! {
        #[test]
        fn dp_matches_brute_force(a in proptest::collection::vec(1u32..6, 1..4), d in 0u64..40) {
            let ws = Weights::new(&a).unwrap();
            prop_assert_eq!(count_monomials(&ws, d as i64), brute_count(ws.as_slice(), d));
        }

        #[test]
        fn hyperplane_recursion(a in proptest::collection::vec(1u32..10, 2..6), d in 0i64..300, pick in 0usize..5) {
            let ws = Weights::new(&a).unwrap();
            let i = pick % ws.len();
            let rest = ws.without(i).unwrap();
            prop_assert_eq!(
                count_monomials(&ws, d),
                count_monomials(&ws, d - ws.get(i) as i64) + count_monomials(&rest, d)
            );
        }

        #[test]
        fn enumeration_is_consistent(a in proptest::collection::vec(1u32..5, 1..4), d in 0i64..25) {
            let ws = Weights::new(&a).unwrap();
            let mons = enumerate_monomials(&ws, d);
            prop_assert_eq!(mons.len() as u64, count_monomials(&ws, d));
            prop_assert!(mons.iter().all(|m| ws.degree_of(&m.exponents) == d as u64));
            let mut seen = std::collections::HashSet::new();
            prop_assert!(mons.iter().all(|m| seen.insert(m.exponents.clone())));
            prop_assert!(mons.windows(2).all(|p| grlex_order(&p[0].exponents, &p[1].exponents) == Ordering::Less));
        }
    }
}
