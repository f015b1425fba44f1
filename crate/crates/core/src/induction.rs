//! Terracini's inductive method in `P(1, a_1, ..., a_n)`.
//!
//! To prove that `r` general double points impose independent conditions in
//! degree `d`, specialize `q` of them onto a coordinate hyperplane `L` and
//! check three things:
//!
//! * a numerical condition relating `r`, `q`, `s_{d-a_i}` and the Hilbert
//!   function of `L`;
//! * the `q` double points are independent on `L` (a weighted line here,
//!   where a closed formula decides it);
//! * `r - q` double points plus `q` simple points on `L` are independent in
//!   degree `d - a_i`, which Chandler's inequality reduces to statements
//!   about `r - q` double points in degrees `d - a_i` and `d - 2 a_i`.
//!
//! The recursion bottoms out in low degrees, which are settled by rank.
//! The result is a [`Certificate`] tree that [`check_certificate`] re-derives
//! from scratch.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::grading::{count_monomials, hilbert_closed_form, Weights};
use crate::interpolation::{
    hilbert_fat_points, line_interpolation_formula, FatPointConfig, DEFAULT_SEED, DEFAULT_TRIALS,
};

pub const CERTIFICATE_SCHEMA: &str = "wpah.certificate.v1";

/// Which side of the numerical condition holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `(n+1) r - s_{d-a_i} <= n q <= sbar_d`
    Lower,
    /// `sbar_d <= n q <= (n+1) r - s_{d-a_i}`
    Upper,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Lower => write!(f, "lower"),
            Direction::Upper => write!(f, "upper"),
        }
    }
}

/// Specialize `q` double points onto the hyperplane `x_i = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TerraciniChoice {
    /// Index of the removed variable.
    pub i: usize,
    pub q: u64,
    pub direction: Direction,
    /// `a_i`.
    pub weight: u32,
}

/// The quantities entering the numerical condition for hyperplane `i`.
fn condition_terms(w: &Weights, d: i64, r: u64, i: usize) -> Result<(i64, i64, i64)> {
    let n = w.dim() as i64;
    let a = w.get(i) as i64;
    let bar = w.without(i)?;
    let lhs = (n + 1) * r as i64 - count_monomials(w, d - a) as i64;
    let sbar = count_monomials(&bar, d) as i64;
    Ok((n, lhs, sbar))
}

fn satisfies(n: i64, lhs: i64, sbar: i64, q: u64, dir: Direction) -> bool {
    let nq = n * q as i64;
    match dir {
        Direction::Lower => lhs <= nq && nq <= sbar,
        Direction::Upper => sbar <= nq && nq <= lhs,
    }
}

/// Every `(i, q, direction)` with `1 <= q <= r` satisfying the numerical
/// condition, ordered by preference: larger weight, then smaller `q`.
pub fn terracini_candidates(w: &Weights, d: i64, r: u64) -> Result<Vec<TerraciniChoice>> {
    if w.get(0) != 1 {
        return Err(Error::UnsupportedWeights(format!("{w} has no weight 1")));
    }
    if w.len() < 2 {
        return Err(Error::UnsupportedWeights(format!("{w} has no hyperplanes")));
    }
    let mut out = Vec::new();
    for i in 0..w.len() {
        let (n, lhs, sbar) = condition_terms(w, d, r, i)?;
        for q in 1..=r {
            for dir in [Direction::Lower, Direction::Upper] {
                if satisfies(n, lhs, sbar, q, dir) {
                    out.push(TerraciniChoice {
                        i,
                        q,
                        direction: dir,
                        weight: w.get(i),
                    });
                }
            }
        }
    }
    out.sort_by(|x, y| {
        y.weight
            .cmp(&x.weight)
            .then(x.q.cmp(&y.q))
            .then(x.i.cmp(&y.i))
            .then(x.direction.cmp(&y.direction))
    });
    Ok(out)
}

/// Chandler's inequality for adding `q` general simple points of the
/// hyperplane of degree `weight` to `r - q` general double points in degree
/// `d - weight`, assuming the double points alone are independent in
/// degrees `d - weight` and `d - 2 weight`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChandlerCheck {
    pub holds: bool,
    pub case: u8,
    pub witnesses: BTreeMap<String, i64>,
}

pub fn chandler_inequality(w: &Weights, d: i64, weight: u32, q: u64, r: u64) -> Result<ChandlerCheck> {
    let i = w
        .as_slice()
        .iter()
        .position(|&a| a == weight)
        .ok_or_else(|| Error::InvalidWeights(format!("{w} has no weight {weight}")))?;
    let (n, lhs, sbar) = condition_terms(w, d, r, i)?;
    let case = if satisfies(n, lhs, sbar, q, Direction::Lower) || q == 0 {
        1
    } else {
        2
    };
    chandler_case(w, d, i, q, r, case)
}

fn chandler_case(w: &Weights, d: i64, i: usize, q: u64, r: u64, case: u8) -> Result<ChandlerCheck> {
    let n = w.dim() as i64;
    let a = w.get(i) as i64;
    let bar = w.without(i)?;
    let (d1, d2) = (d - a, d - 2 * a);
    let rest = (n + 1) * (r as i64 - q as i64);
    let s1 = count_monomials(w, d1) as i64;
    let s2 = count_monomials(w, d2) as i64;
    let sbar1 = count_monomials(&bar, d1) as i64;
    let h1 = s1.min(rest);
    let h2 = s2.min(rest);
    let q = q as i64;
    let mut wit = BTreeMap::new();
    wit.insert("d1".to_string(), d1);
    wit.insert("d2".to_string(), d2);
    wit.insert("s_d1".to_string(), s1);
    wit.insert("s_d2".to_string(), s2);
    wit.insert("sbar_d1".to_string(), sbar1);
    wit.insert("h_d1".to_string(), h1);
    wit.insert("h_d2".to_string(), h2);
    wit.insert("q".to_string(), q);
    let holds = if q == 0 {
        true
    } else if case == 1 {
        wit.insert("lhs".to_string(), h1 + q);
        wit.insert("rhs".to_string(), h2 + sbar1);
        h1 + q <= h2 + sbar1
    } else if h1 == s1 {
        // the double points already fill degree d1
        wit.insert("lhs".to_string(), s1);
        wit.insert("rhs".to_string(), s1);
        true
    } else {
        let m = s1 - h1;
        wit.insert("m".to_string(), m);
        wit.insert("lhs".to_string(), h1 + m);
        wit.insert("rhs".to_string(), h2 + sbar1);
        m <= q && h1 + m <= h2 + sbar1
    };
    Ok(ChandlerCheck {
        holds,
        case,
        witnesses: wit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Base,
    Terracini,
    ChandlerLeaf,
}

/// One node of a certificate tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertNode {
    pub kind: NodeKind,
    pub weights: Vec<u32>,
    pub d: i64,
    pub r: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<TerraciniChoice>,
    pub witnesses: BTreeMap<String, i64>,
    pub children: Vec<CertNode>,
}

impl CertNode {
    pub fn count(&self) -> usize {
        1 + self.children.iter().map(CertNode::count).sum::<usize>()
    }

    /// Terracini nodes along the chain of first premises.
    pub fn trace(&self) -> Vec<(i64, u64, TerraciniChoice)> {
        let mut out = Vec::new();
        let mut node = self;
        while let Some(c) = node.choice {
            out.push((node.d, node.r, c));
            match node.children.get(1) {
                Some(next) => node = next,
                None => break,
            }
        }
        out
    }
}

/// A certificate together with the sampling used for its base cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub version: String,
    pub seed: u64,
    pub field: FieldSpec,
    /// The characteristic used for base-case ranks, if any.
    #[serde(default)]
    pub prime: Option<u64>,
    pub trials: usize,
    pub base_max_degree: i64,
    pub root: CertNode,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedCertificate {
            path: "$".into(),
            reason: e.to_string(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CertificateOptions {
    pub field: FieldSpec,
    pub seed: u64,
    pub trials: usize,
    /// Degrees at or below this are settled by rank.
    pub base_max_degree: i64,
}

impl CertificateOptions {
    /// Defaults for `w`: rank-verified base cases up to degree 5 in
    /// `P(1,2,3)`, none elsewhere (only empty configurations are base).
    pub fn for_weights(w: &Weights) -> Self {
        Self {
            field: FieldSpec::default(),
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            base_max_degree: if w.as_slice() == [1, 2, 3] { 5 } else { -1 },
        }
    }
}

/// `floor(s_D / (n+1))` when `r'` fits below it, `ceil(s_D / (n+1))`
/// otherwise. Proving that many points independent covers `r'` points.
pub fn bracket(w: &Weights, r: u64, d: i64) -> u64 {
    let s = count_monomials(w, d);
    let n1 = w.len() as u64;
    if n1 * r <= s {
        s / n1
    } else {
        s.div_ceil(n1)
    }
}

fn node_name(w: &Weights, d: i64, r: u64) -> String {
    format!("P{w} d={d} r={r}")
}

fn base_node(w: &Weights, d: i64, r: u64, opts: &CertificateOptions) -> Result<CertNode> {
    let mut wit = BTreeMap::new();
    let s = count_monomials(w, d) as i64;
    wit.insert("s_d".to_string(), s);
    if r > 0 && d >= 0 {
        let prof = base_rank(w, d, r, opts.field, opts.seed, opts.trials)?;
        wit.insert("expected".to_string(), prof.0 as i64);
        wit.insert("rank".to_string(), prof.1 as i64);
        if prof.0 != prof.1 {
            return Err(Error::CertificateFailure {
                node: format!("{} (base case rank {} < {})", node_name(w, d, r), prof.1, prof.0),
            });
        }
    }
    Ok(CertNode {
        kind: NodeKind::Base,
        weights: w.as_slice().to_vec(),
        d,
        r,
        choice: None,
        witnesses: wit,
        children: Vec::new(),
    })
}

fn base_rank(w: &Weights, d: i64, r: u64, field: FieldSpec, seed: u64, trials: usize) -> Result<(u64, u64)> {
    let cfg = FatPointConfig::double_points(w, r as usize)
        .with_field(field)
        .with_seed(seed)
        .with_trials(trials);
    let prof = hilbert_fat_points(&cfg, d as u64)?;
    Ok((prof.expected, prof.actual))
}

/// `H_d` of `q` general double points on the weighted line `L`, by formula.
fn line_premise(line: &Weights, q: u64, d: i64) -> Result<(i64, i64)> {
    let (a, b) = match line.as_slice() {
        &[a, b] => (a, b),
        _ => {
            return Err(Error::UnsupportedWeights(format!(
                "hyperplane {line} is not a weighted line"
            )))
        }
    };
    let s = count_monomials(line, d) as i64;
    let expected = s.min(2 * q as i64);
    if d < 0 {
        return Ok((0, expected));
    }
    let value = line_interpolation_formula(a, b, &vec![2; q as usize], d as u64)? as i64;
    Ok((value, expected))
}

fn terracini_witnesses(w: &Weights, d: i64, r: u64, c: &TerraciniChoice) -> Result<BTreeMap<String, i64>> {
    let (n, lhs, sbar) = condition_terms(w, d, r, c.i)?;
    let line = w.without(c.i)?;
    let (line_rank, line_expected) = line_premise(&line, c.q, d)?;
    let mut wit = BTreeMap::new();
    wit.insert("s_d".to_string(), count_monomials(w, d) as i64);
    wit.insert(
        "s_d_minus_a".to_string(),
        count_monomials(w, d - c.weight as i64) as i64,
    );
    wit.insert("sbar_d".to_string(), sbar);
    wit.insert("lhs".to_string(), lhs);
    wit.insert("nq".to_string(), n * c.q as i64);
    wit.insert("line_rank".to_string(), line_rank);
    wit.insert("line_expected".to_string(), line_expected);
    Ok(wit)
}

/// Builds a certificate that `r` general double points in `P(w)` impose
/// independent conditions in degree `d`.
pub fn build_certificate(w: &Weights, d: i64, r: u64, opts: &CertificateOptions) -> Result<Certificate> {
    if w.len() != 3 || w.get(0) != 1 {
        return Err(Error::UnsupportedWeights(format!(
            "certificates are built for planes P(1,b,c), got P{w}"
        )));
    }
    let mut memo = BTreeMap::new();
    let root = build_node(w, d, r, opts, &mut memo)?;
    let prime = FatPointConfig::double_points(w, 1)
        .with_field(opts.field)
        .with_seed(opts.seed)
        .resolve_field(opts.base_max_degree.max(0) as u64)?
        .prime();
    Ok(Certificate {
        schema: CERTIFICATE_SCHEMA.to_string(),
        version: crate::VERSION.to_string(),
        seed: opts.seed,
        field: opts.field,
        prime,
        trials: opts.trials,
        base_max_degree: opts.base_max_degree,
        root,
    })
}

fn build_node(
    w: &Weights,
    d: i64,
    r: u64,
    opts: &CertificateOptions,
    memo: &mut BTreeMap<(i64, u64), CertNode>,
) -> Result<CertNode> {
    if let Some(n) = memo.get(&(d, r)) {
        return Ok(n.clone());
    }
    let node = if r == 0 || d < 0 || d <= opts.base_max_degree {
        base_node(w, d, r, opts)?
    } else {
        terracini_node(w, d, r, opts, memo)?
    };
    memo.insert((d, r), node.clone());
    Ok(node)
}

fn terracini_node(
    w: &Weights,
    d: i64,
    r: u64,
    opts: &CertificateOptions,
    memo: &mut BTreeMap<(i64, u64), CertNode>,
) -> Result<CertNode> {
    let candidates = terracini_candidates(w, d, r)?;
    let mut last_reason = String::from("no Terracini candidate");
    for c in candidates {
        let wit = terracini_witnesses(w, d, r, &c)?;
        if wit["line_rank"] != wit["line_expected"] {
            last_reason = format!("line premise fails for q={}", c.q);
            continue;
        }
        let case = match c.direction {
            Direction::Lower => 1,
            Direction::Upper => 2,
        };
        let ch = chandler_case(w, d, c.i, c.q, r, case)?;
        if !ch.holds {
            last_reason = format!("Chandler inequality fails for q={}", c.q);
            continue;
        }
        let a = c.weight as i64;
        let rest = r - c.q;
        let mut children = vec![CertNode {
            kind: NodeKind::ChandlerLeaf,
            weights: w.as_slice().to_vec(),
            d: d - a,
            r: rest,
            choice: None,
            witnesses: ch.witnesses,
            children: Vec::new(),
        }];
        for dd in [d - a, d - 2 * a] {
            let rr = if rest == 0 { 0 } else { bracket(w, rest, dd) };
            children.push(build_node(w, dd, rr, opts, memo)?);
        }
        return Ok(CertNode {
            kind: NodeKind::Terracini,
            weights: w.as_slice().to_vec(),
            d,
            r,
            choice: Some(c),
            witnesses: wit,
            children,
        });
    }
    Err(Error::CertificateFailure {
        node: format!("{} ({last_reason})", node_name(w, d, r)),
    })
}

/// Outcome of re-checking a certificate: the paths of failing nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub nodes_checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_certificate(c: &Certificate) -> Result<bool> {
    Ok(check_certificate_report(c)?.passed())
}

pub fn check_certificate_json(json: &str) -> Result<bool> {
    check_certificate(&Certificate::from_json(json)?)
}

/// Re-derives every Hilbert value, inequality and base-case rank.
pub fn check_certificate_report(c: &Certificate) -> Result<CheckReport> {
    if c.schema != CERTIFICATE_SCHEMA {
        return Err(Error::MalformedCertificate {
            path: "$.schema".into(),
            reason: format!("unknown schema `{}`", c.schema),
        });
    }
    let w = Weights::new(&c.root.weights).map_err(|e| Error::MalformedCertificate {
        path: "$.root.weights".into(),
        reason: e.to_string(),
    })?;
    let mut report = CheckReport::default();
    let resolved = FatPointConfig::double_points(&w, 1)
        .with_field(c.field)
        .with_seed(c.seed)
        .resolve_field(c.base_max_degree.max(0) as u64)?
        .prime();
    if c.prime.is_some() && c.prime != resolved {
        report.failures.push(format!(
            "$.prime: recorded {:?}, field and seed give {:?}",
            c.prime, resolved
        ));
    }
    let mut checker = Checker {
        cert: c,
        w: &w,
        report: &mut report,
        base_cache: BTreeMap::new(),
    };
    checker.node(&c.root, "$.root")?;
    Ok(report)
}

struct Checker<'a> {
    cert: &'a Certificate,
    w: &'a Weights,
    report: &'a mut CheckReport,
    base_cache: BTreeMap<(i64, u64), (u64, u64)>,
}

impl Checker<'_> {
    fn fail(&mut self, path: &str, msg: String) {
        self.report.failures.push(format!("{path}: {msg}"));
    }

    fn malformed(path: &str, reason: &str) -> Error {
        Error::MalformedCertificate {
            path: path.to_string(),
            reason: reason.to_string(),
        }
    }

    fn compare(&mut self, path: &str, recorded: &BTreeMap<String, i64>, recomputed: &BTreeMap<String, i64>) {
        for (k, v) in recomputed {
            match recorded.get(k) {
                Some(x) if x == v => {}
                Some(x) => self.fail(path, format!("witness {k} = {x}, recomputed {v}")),
                None => self.fail(path, format!("witness {k} missing")),
            }
        }
    }

    fn node(&mut self, n: &CertNode, path: &str) -> Result<()> {
        self.report.nodes_checked += 1;
        if n.weights != self.w.as_slice() {
            return Err(Self::malformed(path, "weights differ from the root"));
        }
        match n.kind {
            NodeKind::Base => self.base(n, path),
            NodeKind::Terracini => self.terracini(n, path),
            NodeKind::ChandlerLeaf => Err(Self::malformed(path, "chandler leaf outside a Terracini node")),
        }
    }

    fn base(&mut self, n: &CertNode, path: &str) -> Result<()> {
        if !n.children.is_empty() || n.choice.is_some() {
            return Err(Self::malformed(path, "base node with a choice or children"));
        }
        let s = count_monomials(self.w, n.d) as i64;
        if n.witnesses.get("s_d") != Some(&s) {
            self.fail(path, format!("s_d recomputes to {s}"));
        }
        if n.r == 0 || n.d < 0 {
            return Ok(());
        }
        if n.d > self.cert.base_max_degree {
            self.fail(path, format!("degree {} above the base range", n.d));
            return Ok(());
        }
        let key = (n.d, n.r);
        let (expected, rank) = match self.base_cache.get(&key) {
            Some(v) => *v,
            None => {
                let v = base_rank(self.w, n.d, n.r, self.cert.field, self.cert.seed, self.cert.trials)?;
                self.base_cache.insert(key, v);
                v
            }
        };
        if rank != expected {
            self.fail(path, format!("rank {rank} below {expected}"));
        }
        if n.witnesses.get("rank") != Some(&(rank as i64)) {
            self.fail(path, format!("recorded rank differs from recomputed {rank}"));
        }
        Ok(())
    }

    fn terracini(&mut self, n: &CertNode, path: &str) -> Result<()> {
        let c = n
            .choice
            .ok_or_else(|| Self::malformed(path, "terracini node without a choice"))?;
        if c.i >= self.w.len() {
            return Err(Self::malformed(path, "hyperplane index out of range"));
        }
        if c.weight != self.w.get(c.i) {
            self.fail(path, format!("weight {} is not a_{}", c.weight, c.i));
        }
        if n.children.len() != 3 {
            return Err(Self::malformed(path, "terracini node needs three children"));
        }
        if c.q == 0 || c.q > n.r {
            self.fail(path, format!("q={} outside 1..={}", c.q, n.r));
            return Ok(());
        }
        let (nn, lhs, sbar) = condition_terms(self.w, n.d, n.r, c.i)?;
        if !satisfies(nn, lhs, sbar, c.q, c.direction) {
            self.fail(
                path,
                format!(
                    "numerical condition fails: lhs={lhs}, nq={}, sbar={sbar}",
                    nn * c.q as i64
                ),
            );
        }
        let wit = terracini_witnesses(self.w, n.d, n.r, &c)?;
        self.compare(path, &n.witnesses, &wit);
        if wit["line_rank"] != wit["line_expected"] {
            self.fail(path, "double points on the line are not independent".into());
        }

        let a = c.weight as i64;
        let rest = n.r - c.q;
        let leaf = &n.children[0];
        let leaf_path = format!("{path}.children[0]");
        if leaf.kind != NodeKind::ChandlerLeaf {
            return Err(Self::malformed(&leaf_path, "first child must be a chandler leaf"));
        }
        let case = match c.direction {
            Direction::Lower => 1,
            Direction::Upper => 2,
        };
        let ch = chandler_case(self.w, n.d, c.i, c.q, n.r, case)?;
        self.compare(&leaf_path, &leaf.witnesses, &ch.witnesses);
        if !ch.holds {
            self.fail(&leaf_path, "Chandler inequality fails".into());
        }
        if leaf.d != n.d - a || leaf.r != rest {
            self.fail(&leaf_path, "leaf degree or point count inconsistent".into());
        }
        for (k, dd) in [(1usize, n.d - a), (2, n.d - 2 * a)] {
            let child = &n.children[k];
            let child_path = format!("{path}.children[{k}]");
            let want = if rest == 0 { 0 } else { bracket(self.w, rest, dd) };
            if child.d != dd || child.r != want {
                self.fail(
                    &child_path,
                    format!("premise should be d={dd}, r={want}; found d={}, r={}", child.d, child.r),
                );
            }
            self.node(child, &child_path)?;
        }
        Ok(())
    }
}

/// `s_d`, `s'_d`, `s''_d`, `s'''_d` for `P(1,2,3)` and its coordinate lines,
/// from the closed forms.
pub fn closed_forms_123(d: i64) -> [i64; 4] {
    if d < 0 {
        return [0; 4];
    }
    let w = Weights::new(&[1, 2, 3]).expect("valid weights");
    let s = hilbert_closed_form(&w, d).expect("closed form").expect("supported") as i64;
    let s1 = if d % 6 == 1 { d / 6 } else { d / 6 + 1 };
    let s2 = d / 3 + 1;
    let s3 = d / 2 + 1;
    [s, s1, s2, s3]
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub lo: i64,
    pub hi: i64,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every `d` in range and both `r = floor(s_d/3)`, `ceil(s_d/3)`, some
/// hyperplane of `P(1,2,3)` admits `q` with `1 <= q <= r` in the numerical
/// condition (closed forms only).
pub fn teranum_verify(lo: i64, hi: i64) -> Result<ScanReport> {
    if lo < 6 {
        return Err(Error::Precondition(format!("scan must start at d >= 6, got {lo}")));
    }
    let mut rep = ScanReport {
        lo,
        hi,
        ..Default::default()
    };
    for d in lo..=hi {
        let s = closed_forms_123(d)[0];
        let mut rs = vec![s / 3, (s + 2) / 3];
        rs.dedup();
        for r in rs {
            rep.checks += 1;
            if teranum_choices(d, r).is_empty() {
                rep.failures.push(format!("d={d} r={r}"));
            }
        }
    }
    Ok(rep)
}

/// `(weight, q)` pairs satisfying the condition for `P(1,2,3)`.
pub fn teranum_choices(d: i64, r: i64) -> Vec<(u32, i64)> {
    let [_, s1, s2, s3] = closed_forms_123(d);
    let mut out = Vec::new();
    for (a, sbar) in [(1u32, s1), (2, s2), (3, s3)] {
        let lhs = 3 * r - closed_forms_123(d - a as i64)[0];
        let (lo, hi) = (lhs.min(sbar), lhs.max(sbar));
        // even numbers 2q in [lo, hi] with 1 <= q <= r
        let qlo = ((lo + 1).div_euclid(2)).max(1);
        let qhi = hi.div_euclid(2).min(r);
        if qlo <= qhi {
            out.push((a, qlo));
        }
    }
    out
}

/// The inequalities feeding the induction: `s'''_d < 2 s_{d-3}` and
/// `sbar_d / 2 <= sbar_{d-a}` for the three coordinate lines.
pub fn numeric_facts_verify(lo: i64, hi: i64) -> Result<ScanReport> {
    if lo < 6 {
        return Err(Error::Precondition(format!("scan must start at d >= 6, got {lo}")));
    }
    let mut rep = ScanReport {
        lo,
        hi,
        ..Default::default()
    };
    for d in lo..=hi {
        let [_, s1, s2, s3] = closed_forms_123(d);
        let facts = [
            ("s'''_d < 2 s_{d-3}", s3 < 2 * closed_forms_123(d - 3)[0]),
            ("s'_d/2 <= s'_{d-1}", s1 <= 2 * closed_forms_123(d - 1)[1]),
            ("s''_d/2 <= s''_{d-2}", s2 <= 2 * closed_forms_123(d - 2)[2]),
            ("s'''_d/2 <= s'''_{d-3}", s3 <= 2 * closed_forms_123(d - 3)[3]),
        ];
        for (name, ok) in facts {
            rep.checks += 1;
            if !ok {
                rep.failures.push(format!("d={d}: {name}"));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> Weights {
        Weights::new(v).unwrap()
    }

    #[test]
    fn candidates_at_degree_fourteen() {
        let ws = w(&[1, 2, 3]);
        let c = terracini_candidates(&ws, 14, 8).unwrap();
        assert!(!c.is_empty());
        assert!(c.iter().all(|c| c.weight == 3 && c.q == 4));
        assert_eq!(c[0].direction, Direction::Lower);
    }

    #[test]
    fn candidates_at_degree_eleven() {
        let ws = w(&[1, 2, 3]);
        let c = terracini_candidates(&ws, 11, 5).unwrap();
        let weights: std::collections::BTreeSet<u32> = c.iter().map(|c| c.weight).collect();
        assert_eq!(weights.into_iter().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!((c[0].weight, c[0].q), (3, 3));
    }

    #[test]
    fn straight_plane_condition_fails() {
        let ws = w(&[1, 1, 1]);
        assert!(terracini_candidates(&ws, 2, 2).unwrap().is_empty());
        assert!(terracini_candidates(&ws, 4, 5).unwrap().is_empty());
        assert!(!terracini_candidates(&ws, 3, 3).unwrap().is_empty());
    }

    #[test]
    fn chandler_examples() {
        let ws = w(&[1, 2, 3]);
        let c = chandler_inequality(&ws, 14, 3, 4, 8).unwrap();
        assert!(c.holds);
        assert_eq!(c.case, 1);
        assert_eq!((c.witnesses["lhs"], c.witnesses["rhs"]), (16, 16));
        assert_eq!(c.witnesses["h_d1"], 12);
        assert_eq!(c.witnesses["h_d2"], 10);
        assert_eq!(c.witnesses["sbar_d1"], 6);
        assert!(chandler_inequality(&ws, 14, 3, 0, 8).unwrap().holds);
        assert!(chandler_inequality(&ws, 8, 3, 3, 5).unwrap().holds);
        // the second stage of the worked example
        let c = chandler_inequality(&ws, 11, 3, 3, 5).unwrap();
        assert!(c.holds);
        assert_eq!(
            (c.witnesses["h_d1"], c.witnesses["h_d2"], c.witnesses["sbar_d1"]),
            (6, 5, 5)
        );
    }

    #[test]
    fn bracket_values() {
        let ws = w(&[1, 2, 3]);
        assert_eq!(bracket(&ws, 4, 11), 5);
        assert_eq!(bracket(&ws, 4, 8), 4);
        assert_eq!(bracket(&ws, 2, 8), 3);
        assert_eq!(bracket(&ws, 2, 5), 2);
    }

    #[test]
    fn certificate_matches_worked_example() {
        let ws = w(&[1, 2, 3]);
        let cert = build_certificate(&ws, 14, 8, &CertificateOptions::for_weights(&ws)).unwrap();
        let trace = cert.root.trace();
        assert_eq!((trace[0].0, trace[0].1, trace[0].2.weight, trace[0].2.q), (14, 8, 3, 4));
        assert_eq!((trace[1].0, trace[1].1, trace[1].2.weight, trace[1].2.q), (11, 5, 3, 3));
        assert!(check_certificate(&cert).unwrap());
        let round = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(round, cert);
    }

    #[test]
    fn perturbed_certificate_rejected() {
        let ws = w(&[1, 2, 3]);
        let mut cert = build_certificate(&ws, 14, 8, &CertificateOptions::for_weights(&ws)).unwrap();
        cert.root.choice.as_mut().unwrap().q = 5;
        let rep = check_certificate_report(&cert).unwrap();
        assert!(!rep.passed());
        assert!(rep.failures.iter().any(|f| f.contains("numerical condition")));
    }

    #[test]
    fn malformed_certificate_reports_path() {
        let ws = w(&[1, 2, 3]);
        let mut cert = build_certificate(&ws, 9, 4, &CertificateOptions::for_weights(&ws)).unwrap();
        cert.root.children.pop();
        match check_certificate(&cert) {
            Err(Error::MalformedCertificate { path, .. }) => assert_eq!(path, "$.root"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(check_certificate_json("{\"schema\": 3}").is_err());
    }

    #[test]
    fn trivial_certificates() {
        let ws = w(&[1, 2, 3]);
        let opts = CertificateOptions::for_weights(&ws);
        let c = build_certificate(&ws, 3, 1, &opts).unwrap();
        assert_eq!(c.root.kind, NodeKind::Base);
        assert!(check_certificate(&c).unwrap());
        let c = build_certificate(&ws, 0, 0, &opts).unwrap();
        assert_eq!(c.root.kind, NodeKind::Base);
        assert!(check_certificate(&c).unwrap());
    }

    #[test]
    fn straight_plane_failure_names_node() {
        let ws = w(&[1, 1, 1]);
        let err = build_certificate(&ws, 4, 5, &CertificateOptions::for_weights(&ws)).unwrap_err();
        match err {
            Error::CertificateFailure { node } => assert!(node.contains("d=4 r=5"), "{node}"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn closed_forms_against_counting() {
        let lines = [w(&[2, 3]), w(&[1, 3]), w(&[1, 2])];
        let full = w(&[1, 2, 3]);
        for d in 0..500 {
            let cf = closed_forms_123(d);
            assert_eq!(cf[0] as u64, count_monomials(&full, d));
            for k in 0..3 {
                assert_eq!(cf[k + 1] as u64, count_monomials(&lines[k], d), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn teranum_small_degrees() {
        assert!(teranum_verify(6, 2000).unwrap().passed());
        // d = 7, r = 2: 3r - s_4 = 2 and s'''_7 = 4
        assert_eq!(3 * 2 - closed_forms_123(4)[0], 2);
        assert!(teranum_choices(7, 2).iter().any(|&(a, _)| a == 3));
        assert!(teranum_choices(14, 8).contains(&(3, 4)));
        assert!(teranum_verify(5, 10).is_err());
    }

    #[test]
    fn numeric_facts_small() {
        assert!(numeric_facts_verify(6, 5000).unwrap().passed());
        let [_, _, _, s3] = closed_forms_123(6);
        assert_eq!((s3, 2 * closed_forms_123(3)[0]), (4, 6));
        let [_, _, _, s3] = closed_forms_123(8);
        assert_eq!((s3, 2 * closed_forms_123(5)[0]), (5, 10));
    }
}
