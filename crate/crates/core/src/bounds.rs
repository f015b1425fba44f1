//! Exceptions and interpolation bounds in `P(1,b,c)`.
//!
//! An exceptional configuration comes from a square: if a form `F` of degree
//! `floor(d/2)` passes through the `r` points, `F^2` is singular there. The
//! converse direction bounds the degrees where this can happen, via the
//! lattice-point inequality `floor(s_d / 3) >= s_{floor(d/2)}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grading::{count_monomials, Weights};
use crate::interpolation::{hilbert_fat_points_prefixes, FatPointConfig};

fn plane(w: &Weights) -> Result<(u32, u32)> {
    match w.as_slice() {
        &[1, b, c] => Ok((b, c)),
        _ => Err(Error::UnsupportedWeights(format!("expected P(1,b,c), got P{w}"))),
    }
}

/// `r < s_{floor(d/2)}` and `(n+1) r >= s_d`: a form of degree `floor(d/2)`
/// through the points squares to a degree-`d` form singular at all of them.
pub fn exception_sufficient(w: &Weights, r: u64, d: i64) -> Result<bool> {
    if w.get(0) != 1 {
        return Err(Error::UnsupportedWeights(format!("P{w} has no weight 1")));
    }
    let half = count_monomials(w, d.div_euclid(2));
    let s = count_monomials(w, d);
    Ok(r < half && w.len() as u64 * r >= s)
}

/// When `3 | s_d` and `r = s_d / 3`, the points are exceptional exactly
/// when `r < s_{floor(d/2)}`.
pub fn exception_classifier_div3(w: &Weights, d: i64) -> Result<bool> {
    plane(w)?;
    let s = count_monomials(w, d);
    if !s.is_multiple_of(3) {
        return Err(Error::Precondition(format!("s_{d} = {s} is not divisible by 3")));
    }
    Ok(s / 3 < count_monomials(w, d.div_euclid(2)))
}

/// One point of `r` general double points is enough to see failure unless
/// `c <= r + 1` (`b = 1`) or `c < (r + 1) b` (`b > 1`).
pub fn neck_condition(w: &Weights, r: u64) -> Result<bool> {
    let (b, c) = plane(w)?;
    if r == 0 {
        return Err(Error::Precondition("r must be at least 1".into()));
    }
    let (b, c) = (b as u64, c as u64);
    Ok(if b == 1 { c <= r + 1 } else { c < (r + 1) * b })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub d: i64,
    /// `floor(s_d / 3)`
    pub lhs: u64,
    /// `s_{floor(d/2)}`
    pub rhs: u64,
    pub holds: bool,
    /// Whether the inequality is guaranteed in this degree.
    pub asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub b: u32,
    pub c: u32,
    pub threshold_10c: i64,
    pub threshold_6c: i64,
    /// `floor(2c/b) >= 5`, which lowers the guaranteed range to `d >= 6c`.
    pub wide: bool,
    pub records: Vec<BoundRecord>,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "d,lhs,rhs,holds";

    pub fn csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!("{},{},{},{}\n", r.d, r.lhs, r.rhs, r.holds));
        }
        out
    }

    /// First degree from which the inequality is guaranteed.
    pub fn guaranteed_from(&self) -> i64 {
        if self.wide {
            self.threshold_6c
        } else {
            self.threshold_10c
        }
    }
}

/// Evaluates `floor(s_d/3) >= s_{floor(d/2)}` on `lo..=hi` in `P(1,b,c)`
/// and fails if it is violated where it is guaranteed.
pub fn interpolation_bound_check(b: u32, c: u32, lo: i64, hi: i64) -> Result<BoundReport> {
    if b == 0 || b > c {
        return Err(Error::InvalidWeights(format!("need 1 <= b <= c, got ({b},{c})")));
    }
    if lo > hi {
        return Err(Error::Precondition(format!("empty degree range {lo}..{hi}")));
    }
    let w = Weights::new(&[1, b, c])?;
    let mut report = BoundReport {
        b,
        c,
        threshold_10c: 10 * c as i64,
        threshold_6c: 6 * c as i64,
        wide: 2 * c / b >= 5,
        records: Vec::with_capacity((hi - lo + 1) as usize),
    };
    let from = report.guaranteed_from();
    for d in lo..=hi {
        let lhs = count_monomials(&w, d) / 3;
        let rhs = count_monomials(&w, d.div_euclid(2));
        report.records.push(BoundRecord {
            d,
            lhs,
            rhs,
            holds: lhs >= rhs,
            asserted: d >= from,
        });
    }
    if let Some(bad) = report.records.iter().find(|r| r.asserted && !r.holds) {
        return Err(Error::VerificationFailed(format!(
            "floor(s_d/3) = {} < s_(d/2) = {} in P(1,{b},{c}) at d = {}",
            bad.lhs, bad.rhs, bad.d
        )));
    }
    Ok(report)
}

/// Lattice-point decomposition of the triangle `b x + c y <= d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub b: u32,
    pub c: u32,
    pub d: i64,
    pub t: u64,
    pub t1: u64,
    pub t2: u64,
    pub t3: u64,
    pub t1_t2: u64,
    pub t2_t3: u64,
    pub t1_t3: u64,
    pub t1_t2_t3: u64,
    pub t4_interior: u64,
    /// `s_d` and `s_{floor(d/2)}` from the counting recursion.
    pub s_d: u64,
    pub s_half: u64,
    /// `3 s_{floor(d/2)} - 3 - floor(c/b) + #T4`
    pub aggregate_bound: i64,
    pub failures: Vec<String>,
}

impl TriangleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Counts every piece of the decomposition by direct enumeration and checks
/// the identities and containments the inequality rests on.
pub fn triangle_lattice_check(b: u32, c: u32, d: i64) -> Result<TriangleReport> {
    if b == 0 || b > c {
        return Err(Error::InvalidWeights(format!("need 1 <= b <= c, got ({b},{c})")));
    }
    let (bi, ci) = (b as i64, c as i64);
    if d < 2 * ci {
        return Err(Error::Precondition(format!("need d >= 2c = {}, got {d}", 2 * ci)));
    }
    let e = d / 2;
    let x0 = d / (2 * bi);
    let y0 = d / (2 * ci);
    let in_t = |x: i64, y: i64| x >= 0 && y >= 0 && bi * x + ci * y <= d;
    let in_t1 = |x: i64, y: i64| x >= 0 && y >= 0 && bi * x + ci * y <= e;
    let in_t2 = |x: i64, y: i64| in_t1(x - x0, y);
    let in_t3 = |x: i64, y: i64| in_t1(x, y - y0);
    let in_t4 = |t: i64, i: i64| ci * i > e - bi * x0 && i < y0 && bi * t > e - i * ci && t < x0;

    let mut rep = TriangleReport {
        b,
        c,
        d,
        t: 0,
        t1: 0,
        t2: 0,
        t3: 0,
        t1_t2: 0,
        t2_t3: 0,
        t1_t3: 0,
        t1_t2_t3: 0,
        t4_interior: 0,
        s_d: 0,
        s_half: 0,
        aggregate_bound: 0,
        failures: Vec::new(),
    };
    let mut outside_t = 0u64;
    let mut t4_overlap = 0u64;
    let mut stray_13 = 0u64;
    let mut t12_other = 0u64;
    let mut t23_other = 0u64;
    for y in 0..=d / ci {
        for x in 0..=d / bi {
            let (a1, a2, a3) = (in_t1(x, y), in_t2(x, y), in_t3(x, y));
            let a4 = in_t4(x, y);
            rep.t += in_t(x, y) as u64;
            rep.t1 += a1 as u64;
            rep.t2 += a2 as u64;
            rep.t3 += a3 as u64;
            rep.t4_interior += a4 as u64;
            if a1 && a2 {
                rep.t1_t2 += 1;
                t12_other += ((x, y) != (x0, 0)) as u64;
            }
            if a2 && a3 {
                rep.t2_t3 += 1;
                t23_other += ((x, y) != (x0, y0)) as u64;
            }
            if a1 && a3 {
                rep.t1_t3 += 1;
                stray_13 += !(y == y0 && x * bi < ci) as u64;
            }
            rep.t1_t2_t3 += (a1 && a2 && a3) as u64;
            if (a1 || a2 || a3 || a4) && !in_t(x, y) {
                outside_t += 1;
            }
            if a4 && (a1 || a2 || a3) {
                t4_overlap += 1;
            }
        }
    }
    let w = Weights::new(&[1, b, c])?;
    rep.s_d = count_monomials(&w, d);
    rep.s_half = count_monomials(&w, e);
    rep.aggregate_bound = 3 * rep.s_half as i64 - 3 - (c / b) as i64 + rep.t4_interior as i64;

    let mut fail = |cond: bool, msg: String| {
        if !cond {
            rep.failures.push(msg);
        }
    };
    fail(rep.t == rep.s_d, format!("#T = {} but s_d = {}", rep.t, rep.s_d));
    fail(
        rep.t1 == rep.s_half,
        format!("#T1 = {} but s_(d/2) = {}", rep.t1, rep.s_half),
    );
    fail(
        rep.t2 == rep.t1 && rep.t3 == rep.t1,
        format!("translates differ: {} {} {}", rep.t1, rep.t2, rep.t3),
    );
    fail(outside_t == 0, format!("{outside_t} piece points lie outside T"));
    fail(
        t4_overlap == 0,
        format!("{t4_overlap} interior points of T4 lie in T1, T2 or T3"),
    );
    fail(
        rep.t1_t2 == 1 && t12_other == 0,
        format!("T1 and T2 meet in {} points", rep.t1_t2),
    );
    fail(
        rep.t2_t3 <= 1 && t23_other == 0,
        format!("T2 and T3 meet in {} points", rep.t2_t3),
    );
    fail(
        stray_13 == 0,
        format!("{stray_13} points of T1 and T3 off the row y = {y0}"),
    );
    fail(
        rep.t1_t3 as i64 <= (c / b) as i64 + 1,
        format!("T1 and T3 meet in {} points", rep.t1_t3),
    );
    fail(rep.t1_t2_t3 == 0, "T1, T2 and T3 share a point".into());
    fail(
        rep.t as i64 >= rep.aggregate_bound,
        format!("#T = {} below the aggregate bound {}", rep.t, rep.aggregate_bound),
    );
    Ok(rep)
}

/// Why `r` double points fail in degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessSource {
    /// `c` too large for a single point.
    Neck,
    /// Two points in a plane with `b < c < 3b/2`.
    TwoPoints,
    /// `r = s_d / 3 < s_{d/2}`.
    Divisible,
    /// Found by scanning ranks.
    Scan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionWitness {
    pub r: u64,
    pub d: i64,
    pub expected: u64,
    pub actual: u64,
    pub source: WitnessSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneVerdict {
    pub b: u32,
    pub c: u32,
    pub witness: Option<ExceptionWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub max_c: u32,
    pub scan_degree: i64,
    pub scan_points: u64,
    pub planes: Vec<PlaneVerdict>,
}

impl UniquenessReport {
    /// Planes without an exceptional configuration.
    pub fn unexceptional(&self) -> Vec<(u32, u32)> {
        self.planes
            .iter()
            .filter(|p| p.witness.is_none())
            .map(|p| (p.b, p.c))
            .collect()
    }
}

/// The predicted failing configuration for a well-formed `P(1,b,c)`.
pub fn predicted_witness(b: u32, c: u32) -> Option<(u64, i64, WitnessSource)> {
    let (b64, c64) = (b as i64, c as i64);
    match (b, c) {
        (1, 1) => Some((2, 2, WitnessSource::Divisible)),
        (1, 2) => Some((3, 4, WitnessSource::Divisible)),
        (1, _) => Some((1, 2, WitnessSource::Neck)),
        _ if c > 2 * b => Some((1, 2 * b64, WitnessSource::Neck)),
        _ if 2 * c > 3 * b && c < 2 * b => Some((3, 4 * b64, WitnessSource::Divisible)),
        _ if b < c && 2 * c < 3 * b => Some((2, 2 * c64, WitnessSource::TwoPoints)),
        _ => None,
    }
}

fn failure_at(w: &Weights, r: u64, d: i64, seed: u64) -> Result<Option<(u64, u64)>> {
    let cfg = FatPointConfig::double_points(w, r as usize).with_seed(seed);
    let prof = hilbert_fat_points_prefixes(&cfg, d as u64)?.pop().expect("r >= 1");
    Ok((prof.actual < prof.expected).then_some((prof.expected, prof.actual)))
}

fn scan_witness(w: &Weights, max_d: i64, max_r: u64, seed: u64) -> Result<Option<ExceptionWitness>> {
    for d in 0..=max_d {
        let cfg = FatPointConfig::double_points(w, max_r as usize).with_seed(seed);
        for prof in hilbert_fat_points_prefixes(&cfg, d as u64)? {
            if prof.actual < prof.expected {
                return Ok(Some(ExceptionWitness {
                    r: prof.r as u64,
                    d,
                    expected: prof.expected,
                    actual: prof.actual,
                    source: WitnessSource::Scan,
                }));
            }
        }
    }
    Ok(None)
}

/// For every well-formed `P(1,b,c)` with `b <= c <= max_c`, a configuration
/// of general double points that fails, confirmed by rank. Planes where the
/// predicted witness does not confirm are scanned up to `scan_degree` and
/// `scan_points`.
pub fn classify_plane_123_uniqueness(
    max_c: u32,
    scan_degree: i64,
    scan_points: u64,
    seed: u64,
) -> Result<UniquenessReport> {
    let mut report = UniquenessReport {
        max_c,
        scan_degree,
        scan_points,
        planes: Vec::new(),
    };
    for c in 1..=max_c {
        for b in 1..=c {
            let w = Weights::new(&[1, b, c])?;
            if !w.is_well_formed() {
                continue;
            }
            let mut witness = None;
            if let Some((r, d, source)) = predicted_witness(b, c) {
                if let Some((expected, actual)) = failure_at(&w, r, d, seed)? {
                    witness = Some(ExceptionWitness {
                        r,
                        d,
                        expected,
                        actual,
                        source,
                    });
                }
            }
            if witness.is_none() {
                witness = scan_witness(&w, scan_degree, scan_points, seed)?;
            }
            report.planes.push(PlaneVerdict { b, c, witness });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> Weights {
        Weights::new(v).unwrap()
    }

    #[test]
    fn sufficient_condition_examples() {
        assert!(exception_sufficient(&w(&[1, 1, 1]), 5, 4).unwrap());
        assert!(exception_sufficient(&w(&[1, 1, 1]), 2, 2).unwrap());
        assert!(!exception_sufficient(&w(&[1, 2, 3]), 8, 14).unwrap());
        let p = w(&[1, 4, 57]);
        assert_eq!((count_monomials(&p, 25), count_monomials(&p, 50)), (7, 13));
        assert_eq!((count_monomials(&p, 22), count_monomials(&p, 44)), (6, 12));
        assert!(!exception_sufficient(&p, 4, 50).unwrap());
        assert!(exception_sufficient(&p, 4, 44).unwrap());
        assert!(exception_sufficient(&w(&[2, 3]), 1, 4).is_err());
    }

    #[test]
    fn divisible_classifier() {
        assert!(!exception_classifier_div3(&w(&[1, 2, 3]), 14).unwrap());
        assert!(exception_classifier_div3(&w(&[1, 1, 1]), 4).unwrap());
        assert!(matches!(
            exception_classifier_div3(&w(&[1, 1, 1]), 3),
            Err(Error::Precondition(_))
        ));
        let p = w(&[1, 5, 9]);
        assert_eq!((count_monomials(&p, 21), count_monomials(&p, 10)), (9, 4));
        assert!(exception_classifier_div3(&p, 21).unwrap());
        assert!(!exception_classifier_div3(&p, 25).unwrap());
    }

    #[test]
    fn neck_examples() {
        assert!(neck_condition(&w(&[1, 2, 3]), 1).unwrap());
        assert!(!neck_condition(&w(&[1, 2, 5]), 1).unwrap());
        assert!(neck_condition(&w(&[1, 1, 2]), 1).unwrap());
        assert!(!neck_condition(&w(&[1, 1, 3]), 1).unwrap());
        assert!(neck_condition(&w(&[1, 1, 3]), 2).unwrap());
        assert!(neck_condition(&w(&[1, 2, 3]), 0).is_err());
    }

    #[test]
    fn bound_examples() {
        let r = interpolation_bound_check(2, 3, 30, 30).unwrap();
        assert_eq!((r.records[0].lhs, r.records[0].rhs), (30, 27));
        let r = interpolation_bound_check(1, 1, 10, 10).unwrap();
        assert_eq!((r.records[0].lhs, r.records[0].rhs), (22, 21));
        assert!(r.csv().starts_with("d,lhs,rhs,holds\n10,22,21,true"));
        assert!(interpolation_bound_check(3, 2, 0, 5).is_err());
    }

    #[test]
    fn bound_holds_in_guaranteed_range() {
        for c in 1..=12 {
            for b in 1..=c {
                let r = interpolation_bound_check(b, c, 0, 14 * c as i64).unwrap();
                assert_eq!(r.records.len(), 14 * c as usize + 1);
            }
        }
    }

    #[test]
    fn bound_fails_below_range_somewhere() {
        // the guarantee is not vacuous: small degrees do violate it
        let r = interpolation_bound_check(1, 1, 0, 10).unwrap();
        assert!(r.records.iter().any(|x| !x.holds));
    }

    #[test]
    fn triangle_examples() {
        let r = triangle_lattice_check(2, 3, 30).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!((r.t1, r.s_half, r.t), (27, 27, 91));
        let r = triangle_lattice_check(5, 9, 90).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        for (b, c) in [(1, 1), (2, 3), (3, 7), (5, 9)] {
            let r = triangle_lattice_check(b, c, 2 * c as i64).unwrap();
            assert!(r.passed(), "({b},{c}): {:?}", r.failures);
        }
        assert!(triangle_lattice_check(2, 3, 5).is_err());
    }

    #[test]
    fn triangle_scan() {
        for c in 1..=8u32 {
            for b in 1..=c {
                for d in 2 * c as i64..=14 * c as i64 {
                    let r = triangle_lattice_check(b, c, d).unwrap();
                    assert!(r.passed(), "({b},{c},{d}): {:?}", r.failures);
                }
            }
        }
    }

    #[test]
    fn predicted_witnesses() {
        assert_eq!(predicted_witness(2, 5), Some((1, 4, WitnessSource::Neck)));
        assert_eq!(predicted_witness(3, 5), Some((3, 12, WitnessSource::Divisible)));
        assert_eq!(predicted_witness(4, 5), Some((2, 10, WitnessSource::TwoPoints)));
        assert_eq!(predicted_witness(2, 3), None);
        let p = w(&[1, 3, 5]);
        assert_eq!((count_monomials(&p, 12), count_monomials(&p, 6)), (9, 4));
    }

    #[test]
    fn uniqueness_small() {
        let rep = classify_plane_123_uniqueness(7, 20, 8, 11).unwrap();
        assert_eq!(rep.unexceptional(), vec![(2, 3)]);
        for p in &rep.planes {
            if let Some(wt) = &p.witness {
                assert_ne!(wt.source, WitnessSource::Scan, "({},{})", p.b, p.c);
                assert!(wt.actual < wt.expected);
            }
        }
    }
}
