//! Acceptance checks, one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wpah::bounds::{interpolation_bound_check, triangle_lattice_check};
use wpah::induction::{
    build_certificate, check_certificate, closed_forms_123, numeric_facts_verify, teranum_verify, CertificateOptions,
};
use wpah::interpolation::{
    deficiency_table, hilbert_fat_points, hilbert_fat_points_prefixes, line_interpolation_formula, two_point_matrix,
    two_point_stated_det, two_point_true_det, FatPointConfig, TwoPointRegime,
};
use wpah::linalg::rational_det;
use wpah::veronese::{secant_dimension, SecantOptions, VeroneseChart};
use wpah::{count_monomials, hilbert_closed_form, Rational, Weights};

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(limit: Duration, start: Instant, mut out: Outcome) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        out.pass = false;
        out.detail = format!("{} (took {took:.1?}, limit {limit:?})", out.detail);
    } else {
        out.detail = format!("{} [{took:.1?}]", out.detail);
    }
    out
}

fn w(v: &[u32]) -> Weights {
    Weights::new(v).unwrap()
}

/// Deficiencies by degree for `r` general double points.
fn deficiencies(ws: &Weights, r: usize, lo: u64, hi: u64) -> BTreeMap<u64, u64> {
    let cfg = FatPointConfig::double_points(ws, r);
    deficiency_table(&cfg, lo..=hi)
        .unwrap()
        .into_iter()
        .map(|p| (p.d, p.deficiency))
        .collect()
}

fn table_case(ws: &Weights, r: usize, lo: u64, hi: u64, listed: &[(u64, u64, u64)], bad: &mut Vec<String>) {
    let got = deficiencies(ws, r, lo, hi);
    for (&d, &def) in &got {
        let want = listed
            .iter()
            .find(|&&(a, b, _)| a <= d && d <= b)
            .map_or(0, |&(_, _, v)| v);
        if def != want {
            bad.push(format!("P{ws} r={r} d={d}: D={def}, listed {want}"));
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    table_case(&w(&[1, 5, 9]), 3, 10, 35, &[(20, 22, 1)], &mut bad);
    table_case(
        &w(&[1, 5, 26]),
        2,
        15,
        40,
        &[(20, 24, 1), (25, 25, 2), (26, 30, 1)],
        &mut bad,
    );
    table_case(
        &w(&[1, 4, 57]),
        4,
        25,
        75,
        &[
            (32, 35, 1),
            (36, 39, 2),
            (40, 43, 3),
            (44, 56, 4),
            (57, 60, 3),
            (61, 64, 2),
            (65, 68, 1),
        ],
        &mut bad,
    );
    within(
        Duration::from_secs(60),
        start,
        Outcome {
            pass: bad.is_empty(),
            detail: if bad.is_empty() {
                "all three deficiency tables match on their windows".into()
            } else {
                bad.join("; ")
            },
        },
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let ws = w(&[1, 2, 3]);
    let mut bad = Vec::new();
    let mut cases = 0;
    for d in 0..=40u64 {
        let rmax = count_monomials(&ws, d as i64).div_ceil(3).max(1) as usize;
        let cfg = FatPointConfig::double_points(&ws, rmax);
        for p in hilbert_fat_points_prefixes(&cfg, d).unwrap() {
            cases += 1;
            if !p.is_ah {
                bad.push(format!("d={d} r={}: {} < {}", p.r, p.actual, p.expected));
            }
        }
    }
    within(
        Duration::from_secs(300),
        start,
        Outcome {
            pass: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("{cases} (d, r) pairs are AH")
            } else {
                bad.join("; ")
            },
        },
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let ws = w(&[1, 1, 1]);
    let mut bad = Vec::new();
    for d in 0..=10u64 {
        let rmax = count_monomials(&ws, d as i64).div_ceil(3).max(1) as usize;
        let cfg = FatPointConfig::double_points(&ws, rmax);
        for p in hilbert_fat_points_prefixes(&cfg, d).unwrap() {
            let want = u64::from(matches!((d, p.r), (2, 2) | (4, 5)));
            if p.deficiency != want {
                bad.push(format!("d={d} r={}: D={}", p.r, p.deficiency));
            }
        }
    }
    within(
        Duration::from_secs(60),
        start,
        Outcome {
            pass: bad.is_empty(),
            detail: if bad.is_empty() {
                "deficiency 1 exactly at (2,2) and (4,5)".into()
            } else {
                bad.join("; ")
            },
        },
    )
}

fn criterion_4() -> Outcome {
    let ws = w(&[1, 2, 3]);
    let cert = match build_certificate(&ws, 14, 8, &CertificateOptions::for_weights(&ws)) {
        Ok(c) => c,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let trace: Vec<(i64, u64, u32, u64)> = cert
        .root
        .trace()
        .into_iter()
        .map(|(d, r, c)| (d, r, c.weight, c.q))
        .collect();
    let accepted = check_certificate(&cert).unwrap_or(false);
    let shape = trace.len() >= 2 && trace[0] == (14, 8, 3, 4) && trace[1] == (11, 5, 3, 3);
    Outcome {
        pass: shape && accepted,
        detail: format!("trace {:?}, checker accepts: {accepted}", &trace[..trace.len().min(2)]),
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let hi = 100_000;
    let t = teranum_verify(6, hi).unwrap();
    let n = numeric_facts_verify(6, hi).unwrap();
    let full = w(&[1, 2, 3]);
    let lines = [w(&[2, 3]), w(&[1, 3]), w(&[1, 2])];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = Vec::new();
    for _ in 0..200 {
        let d = rng.gen_range(6..=hi);
        let cf = closed_forms_123(d);
        let dp = [
            count_monomials(&full, d),
            count_monomials(&lines[0], d),
            count_monomials(&lines[1], d),
            count_monomials(&lines[2], d),
        ];
        if cf.iter().zip(dp).any(|(&a, b)| a as u64 != b) {
            mismatches.push(d);
        }
    }
    let pass = t.passed() && n.passed() && mismatches.is_empty();
    within(
        Duration::from_secs(10),
        start,
        Outcome {
            pass,
            detail: format!(
                "{} + {} checks on 6..={hi}, {} failures; closed forms vs counting at 200 degrees: {} mismatches",
                t.checks,
                n.checks,
                t.failures.len() + n.failures.len(),
                mismatches.len()
            ),
        },
    )
}

/// Multisets of positive parts with sum at most `total`.
fn multiplicity_lists(total: u32) -> Vec<Vec<u32>> {
    fn go(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for m in (1..=max.min(left)).rev() {
            cur.push(m);
            go(left - m, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut cases = 0;
    for b in 1..=7u32 {
        for a in 1..=b {
            if a.gcd(&b) != 1 {
                continue;
            }
            let ws = w(&[a, b]);
            for mults in multiplicity_lists(5) {
                let cfg = FatPointConfig::new(&ws, mults.clone()).unwrap();
                for d in 0..=100u64 {
                    cases += 1;
                    let rank = hilbert_fat_points(&cfg, d).unwrap().actual;
                    let formula = line_interpolation_formula(a, b, &mults, d).unwrap();
                    if rank != formula {
                        bad.push(format!("P({a},{b}) {mults:?} d={d}: rank {rank}, formula {formula}"));
                    }
                }
            }
        }
    }
    within(
        Duration::from_secs(60),
        start,
        Outcome {
            pass: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("{cases} cases agree")
            } else {
                format!("{} of {cases} disagree, first: {}", bad.len(), bad[0])
            },
        },
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut cases = 0;
    for v in [&[1u32, 2, 3][..], &[1, 3, 4], &[1, 1, 2], &[1, 2, 3, 4]] {
        let ws = w(v);
        let cfg = FatPointConfig::simple_points(&ws, 10);
        for d in 0..=40u64 {
            for p in hilbert_fat_points_prefixes(&cfg, d).unwrap() {
                cases += 1;
                let want = count_monomials(&ws, d as i64).min(p.r as u64);
                if p.actual != want {
                    bad.push(format!("P{ws} r={} d={d}: {} vs {want}", p.r, p.actual));
                }
            }
        }
    }
    within(
        Duration::from_secs(120),
        start,
        Outcome {
            pass: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("{cases} cases equal min(s_d, r)")
            } else {
                bad.join("; ")
            },
        },
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    while seen.len() < 20 {
        let n = rng.gen_range(1..=3);
        let mut v = vec![1u32];
        v.extend((0..n).map(|_| rng.gen_range(1..=6)));
        let ws = w(&v);
        let d = rng.gen_range(ws.max() as u64..=12);
        let r = rng.gen_range(1..=6u64);
        let chart = VeroneseChart::new(&ws, d).unwrap();
        let sec = secant_dimension(&chart, r, &SecantOptions::default()).unwrap();
        let prof = hilbert_fat_points(&FatPointConfig::double_points(&ws, r as usize), d).unwrap();
        if sec.computed_dim + 1 != prof.actual {
            bad.push(format!(
                "P{ws} d={d} r={r}: {} + 1 vs {}",
                sec.computed_dim, prof.actual
            ));
        }
        seen.push((ws.to_string(), d, r));
    }
    within(
        Duration::from_secs(60),
        start,
        Outcome {
            pass: bad.is_empty(),
            detail: if bad.is_empty() {
                "20 random cases agree".into()
            } else {
                bad.join("; ")
            },
        },
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut report = Vec::new();
    let mut pass = true;
    for regime in [TwoPointRegime::BPlusC, TwoPointRegime::ThreeB] {
        let mut pairs = Vec::new();
        while pairs.len() < 5 {
            let b = rng.gen_range(2..=12u32);
            let c = rng.gen_range(b + 1..=3 * b);
            if b.gcd(&c) == 1 && TwoPointRegime::of(b, c) == Some(regime) && !pairs.contains(&(b, c)) {
                pairs.push((b, c));
            }
        }
        let (mut stated_ok, mut true_ok, mut total) = (0, 0, 0);
        for &(b, c) in &pairs {
            for _ in 0..50 {
                let v: Vec<Rational> = (0..4)
                    .map(|_| Rational::from_integer(rng.gen_range(-1000i64..=1000).into()))
                    .collect();
                let (_, m) =
                    two_point_matrix(b, c, [v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]).unwrap();
                let det = rational_det(&m);
                total += 1;
                stated_ok += (det == two_point_stated_det(regime, b, c, &v[0], &v[2])) as u32;
                true_ok += (det == two_point_true_det(regime, b, c, &v[0], &v[2])) as u32;
            }
        }
        pass &= stated_ok == total;
        let name = match regime {
            TwoPointRegime::BPlusC => "M_(b+c)",
            TwoPointRegime::ThreeB => "M_(3b)",
        };
        report.push(format!(
            "{name} {pairs:?}: stated formula {stated_ok}/{total}, entry-derived formula {true_ok}/{total}"
        ));
    }
    Outcome {
        pass,
        detail: report.join("; "),
    }
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for c in 1..=12u32 {
        for b in 1..=c {
            match interpolation_bound_check(b, c, 0, 14 * c as i64) {
                Ok(rep) => {
                    checked += rep.records.iter().filter(|r| r.asserted).count();
                }
                Err(e) => bad.push(format!("({b},{c}): {e}")),
            }
            for d in 2 * c as i64..=14 * c as i64 {
                let t = triangle_lattice_check(b, c, d).unwrap();
                if !t.passed() {
                    bad.push(format!("triangle ({b},{c},{d}): {:?}", t.failures));
                }
            }
        }
    }
    within(
        Duration::from_secs(120),
        start,
        Outcome {
            pass: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("{checked} guaranteed degrees hold; lattice counts agree with s_d")
            } else {
                bad.join("; ")
            },
        },
    )
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut supported = vec![w(&[1, 2, 3])];
    for b in 1..=24u32 {
        for a in 1..=b {
            if a.gcd(&b) == 1 {
                supported.push(w(&[a, b]));
            }
        }
    }
    for ws in &supported {
        for d in 0..=2000 {
            match hilbert_closed_form(ws, d) {
                Ok(Some(v)) if v == count_monomials(ws, d) => {}
                other => {
                    bad.push(format!("P{ws} d={d}: {other:?}"));
                    break;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let len = rng.gen_range(2..=5);
        let v: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=9)).collect();
        let ws = w(&v);
        for i in 0..ws.len() {
            let bar = ws.without(i).unwrap();
            let a = ws.get(i) as i64;
            for d in 0..=500 {
                if count_monomials(&ws, d) != count_monomials(&bar, d) + count_monomials(&ws, d - a) {
                    bad.push(format!("recursion P{ws} i={i} d={d}"));
                }
            }
        }
    }
    within(
        Duration::from_secs(60),
        start,
        Outcome {
            pass: bad.is_empty(),
            detail: if bad.is_empty() {
                format!(
                    "{} weight vectors with closed forms, 100 recursion vectors",
                    supported.len()
                )
            } else {
                bad.join("; ")
            },
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("deficiency tables", criterion_1),
        ("P(1,2,3) has no exceptions", criterion_2),
        ("straight-plane exceptions", criterion_3),
        ("worked Terracini trace", criterion_4),
        ("numerical lemmas", criterion_5),
        ("weighted-line formula", criterion_6),
        ("simple-point interpolation", criterion_7),
        ("secant equivalence", criterion_8),
        ("two-point determinants", criterion_9),
        ("interpolation bound", criterion_10),
        ("counting oracles", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let out = f();
        failed += (!out.pass) as u32;
        println!(
            "criterion {:>2} {}: {} -- {}",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            name,
            out.detail
        );
    }
    println!("{} passed, {failed} failed", criteria.len() as u32 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
