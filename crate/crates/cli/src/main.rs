//! `wpah`: Hilbert functions, fat-point ranks, Terracini certificates and
//! bound scans for weighted projective spaces.

mod args;
mod render;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use serde_json::json;

use wpah::bounds::{interpolation_bound_check, triangle_lattice_check};
use wpah::ideals::{herzog_binomials, herzog_data, point_ideal};
use wpah::induction::{
    build_certificate, check_certificate_report, numeric_facts_verify, teranum_verify, CertNode, Certificate,
    CertificateOptions, Direction, NodeKind,
};
use wpah::interpolation::{deficiency_table, FatPointConfig};
use wpah::veronese::{secant_dimension, SecantOptions, VeroneseChart};
use wpah::{count_monomials, hilbert_closed_form, Error, WeightedPoint, Weights};

use args::{Cli, Command, Common, Format};
use render::{Meta, Output};

/// Failure modes mapped to exit codes 1 and 2.
enum Failure {
    Verification(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::VerificationFailed(_) | Error::CertificateFailure { .. } | Error::MalformedCertificate { .. } => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<Output, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.command.common().clone();
    match run(cli.command) {
        Ok(out) => match emit(&common, &out.text) {
            Ok(()) if out.verified => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(common: &Common, text: &str) -> std::io::Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Hilbert { weights, deg, common } => cmd_hilbert(&weights, deg, &common),
        Command::AhCheck {
            weights,
            points,
            mult,
            deg,
            common,
        } => cmd_ah_check(&weights, points, mult, deg, &common),
        Command::TerraciniTrace {
            weights,
            deg,
            points,
            common,
        } => cmd_terracini_trace(&weights, deg, points, &common),
        Command::CheckCert { input, common } => cmd_check_cert(&input, &common),
        Command::PointIdeal { weights, point, common } => cmd_point_ideal(&weights, &point, &common),
        Command::Herzog { weights, common } => cmd_herzog(&weights, &common),
        Command::SecantDim {
            weights,
            deg,
            rank,
            common,
        } => cmd_secant(&weights, deg, rank, &common),
        Command::BoundCheck {
            weights,
            deg,
            triangle,
            common,
        } => cmd_bound_check(&weights, deg, triangle, &common),
        Command::VerifySuite { max_deg, max_c, common } => cmd_verify_suite(max_deg, max_c, &common),
    }
}

fn cmd_hilbert(w: &Weights, deg: args::DegRange, common: &Common) -> CmdResult {
    let meta = Meta::new("hilbert", Some(w), common, None);
    let mut rows = Vec::new();
    for d in deg.lo..=deg.hi {
        let counted = count_monomials(w, d);
        let (value, source) = match hilbert_closed_form(w, d) {
            Ok(Some(v)) => (v, "closed-form"),
            _ => (counted, "count"),
        };
        if value != counted {
            return Err(Failure::Verification(format!(
                "closed form {value} != count {counted} at d={d}"
            )));
        }
        rows.push((d, value, source));
    }
    Ok(match common.format {
        Format::Text => {
            let mut t = meta.text_header();
            t.push_str("d\ts_d\tsource\n");
            for (d, v, s) in &rows {
                t.push_str(&format!("{d}\t{v}\t{s}\n"));
            }
            Output::ok(t)
        }
        Format::Csv => {
            let mut t = meta.csv_header();
            t.push_str("weights,d,s_d,source\n");
            for (d, v, s) in &rows {
                t.push_str(&format!("\"{}\",{d},{v},{s}\n", render::weights_list(w)));
            }
            Output::ok(t)
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(d, v, s)| json!({"d": d, "s_d": v, "source": s}))
                .collect();
            Output::ok(meta.json(json!({ "rows": rows })))
        }
    })
}

fn cmd_ah_check(w: &Weights, points: usize, mult: u32, deg: args::DegRange, common: &Common) -> CmdResult {
    if deg.lo < 0 {
        return Err(Failure::Usage("degrees must be non-negative".into()));
    }
    let cfg = FatPointConfig::uniform(w, points, mult)?
        .with_field(common.field)
        .with_seed(common.seed)
        .with_trials(common.trials);
    let field = cfg.resolve_field(deg.hi as u64)?;
    let meta = Meta::new("ah-check", Some(w), common, field.prime());
    let profiles = deficiency_table(&cfg, deg.lo as u64..=deg.hi as u64)?;
    Ok(Output::ok(render::profiles(&meta, common.format, &profiles, mult)))
}

fn cmd_terracini_trace(w: &Weights, d: i64, r: u64, common: &Common) -> CmdResult {
    let mut opts = CertificateOptions::for_weights(w);
    opts.field = common.field;
    opts.seed = common.seed;
    opts.trials = common.trials;
    let cert = build_certificate(w, d, r, &opts)?;
    let report = check_certificate_report(&cert)?;
    let prime = resolved_prime(w, common, d.max(0) as u64)?;
    let meta = Meta::new("terracini-trace", Some(w), common, prime);
    let text = match common.format {
        Format::Json => {
            let mut s = cert.to_json();
            s.push('\n');
            s
        }
        Format::Text | Format::Csv => {
            let mut t = meta.text_header();
            t.push_str(&format!("nodes: {}\n", cert.root.count()));
            render_tree(&cert.root, 0, &mut t);
            t.push_str(&format!(
                "checker: {}\n",
                if report.passed() { "accepted" } else { "rejected" }
            ));
            t
        }
    };
    if !report.passed() {
        return Err(Failure::Verification(report.failures.join("; ")));
    }
    Ok(Output::ok(text))
}

fn resolved_prime(w: &Weights, common: &Common, max_d: u64) -> Result<Option<u64>, Failure> {
    let cfg = FatPointConfig::double_points(w, 1)
        .with_field(common.field)
        .with_seed(common.seed);
    Ok(cfg.resolve_field(max_d)?.prime())
}

fn render_tree(node: &CertNode, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match node.kind {
        NodeKind::Base => {
            let how = if node.r == 0 || node.d < 0 { "trivial" } else { "rank" };
            out.push_str(&format!("{pad}base d={} r={} ({how})\n", node.d, node.r));
        }
        NodeKind::ChandlerLeaf => {
            let lhs = node.witnesses.get("lhs").copied().unwrap_or(0);
            let rhs = node.witnesses.get("rhs").copied().unwrap_or(0);
            out.push_str(&format!("{pad}chandler d={} r={}: {lhs} <= {rhs}\n", node.d, node.r));
        }
        NodeKind::Terracini => {
            let c = node.choice.expect("terracini node has a choice");
            let get = |k: &str| node.witnesses.get(k).copied().unwrap_or(0);
            let (lo, hi) = match c.direction {
                Direction::Lower => (get("lhs"), get("sbar_d")),
                Direction::Upper => (get("sbar_d"), get("lhs")),
            };
            out.push_str(&format!(
                "{pad}terracini d={} r={}: hyperplane x{} (weight {}), q={} [{}: {lo} <= {} <= {hi}]\n",
                node.d,
                node.r,
                c.i,
                c.weight,
                c.q,
                c.direction,
                get("nq"),
            ));
            for child in &node.children {
                render_tree(child, depth + 1, out);
            }
        }
    }
}

fn cmd_check_cert(input: &str, common: &Common) -> CmdResult {
    let json = fs::read_to_string(input).map_err(|e| Failure::Usage(format!("cannot read {input}: {e}")))?;
    let cert = Certificate::from_json(&json)?;
    let report = check_certificate_report(&cert)?;
    let w = Weights::new(&cert.root.weights)?;
    let meta = Meta {
        seed: cert.seed,
        trials: cert.trials,
        field: cert.field.to_string(),
        ..Meta::new("check-cert", Some(&w), common, None)
    };
    let text = match common.format {
        Format::Json => meta.json(json!({
            "accepted": report.passed(),
            "nodes_checked": report.nodes_checked,
            "failures": report.failures,
        })),
        _ => {
            let mut t = meta.text_header();
            t.push_str(&format!(
                "{} ({} nodes checked)\n",
                if report.passed() { "accepted" } else { "rejected" },
                report.nodes_checked
            ));
            for f in &report.failures {
                t.push_str(&format!("  {f}\n"));
            }
            t
        }
    };
    Ok(Output {
        text,
        verified: report.passed(),
    })
}

fn cmd_point_ideal(w: &Weights, point: &args::PointArg, common: &Common) -> CmdResult {
    // the user lists coordinates in the order of the weights they typed
    let coords = w
        .permutation()
        .iter()
        .map(|&i| point.0.get(i).cloned())
        .collect::<Option<Vec<_>>>();
    let coords = coords.ok_or_else(|| Failure::Usage(format!("expected {} coordinates", w.len())))?;
    if point.0.len() != w.len() {
        return Err(Failure::Usage(format!(
            "expected {} coordinates, got {}",
            w.len(),
            point.0.len()
        )));
    }
    let p = WeightedPoint::new(w, coords)?;
    let gens = point_ideal(&p)?;
    let meta = Meta::new("point-ideal", Some(w), common, None);
    Ok(Output::ok(match common.format {
        Format::Json => meta.json(json!({ "point": p.to_string(), "generators": gens })),
        _ => {
            let mut t = meta.text_header();
            t.push_str(&format!("point {p}\n"));
            for g in &gens {
                t.push_str(&format!("{g}\n"));
            }
            t
        }
    }))
}

fn cmd_herzog(w: &Weights, common: &Common) -> CmdResult {
    let a = w.as_slice();
    if a.len() != 3 {
        return Err(Failure::Usage(format!("herzog needs three weights, got {w}")));
    }
    let h = herzog_data(a[0] as u64, a[1] as u64, a[2] as u64)?;
    let gens = herzog_binomials(w)?;
    let meta = Meta::new("herzog", Some(w), common, None);
    let r = h.r();
    Ok(Output::ok(match common.format {
        Format::Json => meta.json(json!({ "data": h, "r": r, "generators": gens })),
        _ => {
            let mut t = meta.text_header();
            t.push_str(&format!("r=({},{},{}) hc={}\n", r[0], r[1], r[2], h.hc));
            for (i, rel) in h.relations.iter().enumerate() {
                let (x, y) = match i {
                    0 => (a[1], a[2]),
                    1 => (a[0], a[2]),
                    _ => (a[0], a[1]),
                };
                t.push_str(&format!("{}*{} = {}*{} + {}*{}\n", rel.r, a[i], rel.k, x, rel.g, y));
            }
            for g in &gens {
                t.push_str(&format!("{g}\n"));
            }
            t
        }
    }))
}

fn cmd_secant(w: &Weights, d: u64, r: u64, common: &Common) -> CmdResult {
    let chart = VeroneseChart::new(w, d)?;
    let opts = SecantOptions {
        field: common.field,
        seed: common.seed,
        trials: common.trials,
    };
    let rep = secant_dimension(&chart, r, &opts)?;
    let meta = Meta::new("secant-dim", Some(w), common, rep.prime);
    Ok(Output::ok(match common.format {
        Format::Json => meta.json(json!({
            "d": rep.d,
            "r": rep.r,
            "expected_dim": rep.expected_dim,
            "computed_dim": rep.computed_dim,
            "defect": rep.defect,
            "trial_ranks": rep.trial_ranks,
        })),
        Format::Csv => {
            let mut t = meta.csv_header();
            t.push_str("weights,d,r,expected_dim,computed_dim,defect\n");
            t.push_str(&format!(
                "\"{}\",{},{},{},{},{}\n",
                render::weights_list(w),
                rep.d,
                rep.r,
                rep.expected_dim,
                rep.computed_dim,
                rep.defect.map_or(String::new(), |x| x.to_string())
            ));
            t
        }
        Format::Text => {
            let mut t = meta.text_header();
            t.push_str(&format!("{}\n", rep.computed_dim));
            t.push_str(&format!(
                "# expected {}, defect {}, trial ranks {:?}\n",
                rep.expected_dim,
                rep.defect.map_or("undetermined".into(), |x| x.to_string()),
                rep.trial_ranks
            ));
            t
        }
    }))
}

fn cmd_bound_check(w: &Weights, deg: args::DegRange, triangle: bool, common: &Common) -> CmdResult {
    let (b, c) = match w.as_slice() {
        &[1, b, c] => (b, c),
        _ => return Err(Failure::Usage(format!("bound-check needs weights 1,b,c, got {w}"))),
    };
    let rep = interpolation_bound_check(b, c, deg.lo, deg.hi)?;
    let mut triangles = Vec::new();
    if triangle {
        for d in deg.lo.max(2 * c as i64)..=deg.hi {
            triangles.push(triangle_lattice_check(b, c, d)?);
        }
    }
    let tri_ok = triangles.iter().all(|t| t.passed());
    let meta = Meta::new("bound-check", Some(w), common, None);
    let text = match common.format {
        Format::Json => meta.json(json!({ "report": rep, "triangles": triangles })),
        Format::Csv => {
            let mut t = meta.csv_header();
            t.push_str(&rep.csv());
            t
        }
        Format::Text => {
            let mut t = meta.text_header();
            t.push_str(&format!(
                "guaranteed from d = {} (10c = {}, 6c = {}, floor(2c/b) >= 5: {})\n",
                rep.guaranteed_from(),
                rep.threshold_10c,
                rep.threshold_6c,
                rep.wide
            ));
            t.push_str("d\tfloor(s_d/3)\ts_(d/2)\tholds\n");
            for r in &rep.records {
                t.push_str(&format!("{}\t{}\t{}\t{}\n", r.d, r.lhs, r.rhs, r.holds));
            }
            for tr in &triangles {
                t.push_str(&format!(
                    "triangle d={}: #T={} #T1={} #T4={} bound={} {}\n",
                    tr.d,
                    tr.t,
                    tr.t1,
                    tr.t4_interior,
                    tr.aggregate_bound,
                    if tr.passed() { "ok" } else { "FAILED" }
                ));
            }
            t
        }
    };
    Ok(Output { text, verified: tri_ok })
}

fn cmd_verify_suite(max_deg: i64, max_c: u32, common: &Common) -> CmdResult {
    let t = teranum_verify(6, max_deg)?;
    let n = numeric_facts_verify(6, max_deg)?;
    let pairs: Vec<(u32, u32)> = (1..=max_c).flat_map(|c| (1..=c).map(move |b| (b, c))).collect();
    // collected in (c, b) order whatever the completion order
    let results: Vec<_> = pairs
        .par_iter()
        .map(|&(b, c)| (b, c, interpolation_bound_check(b, c, 0, 14 * c as i64)))
        .collect();
    let mut bound_failures = Vec::new();
    let mut bound_checks = 0usize;
    for (b, c, res) in results {
        match res {
            Ok(rep) => bound_checks += rep.records.iter().filter(|r| r.asserted).count(),
            Err(e) => bound_failures.push(format!("({b},{c}): {e}")),
        }
    }
    let pass = t.passed() && n.passed() && bound_failures.is_empty();
    let meta = Meta::new("verify-suite", None, common, None);
    let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let text = match common.format {
        Format::Json => meta.json(json!({
            "pass": pass,
            "teranum": t,
            "numeric_facts": n,
            "bounds": { "max_c": max_c, "checks": bound_checks, "failures": bound_failures },
        })),
        _ => {
            let mut s = meta.text_header();
            s.push_str(&format!(
                "teranum 6..={max_deg}: {} ({} checks)\n",
                status(t.passed()),
                t.checks
            ));
            s.push_str(&format!(
                "numeric facts 6..={max_deg}: {} ({} checks)\n",
                status(n.passed()),
                n.checks
            ));
            s.push_str(&format!(
                "bounds b <= c <= {max_c}: {} ({bound_checks} degrees)\n",
                status(bound_failures.is_empty())
            ));
            for f in t.failures.iter().chain(&n.failures).chain(&bound_failures) {
                s.push_str(&format!("  {f}\n"));
            }
            s.push_str(&format!("{}\n", status(pass)));
            s
        }
    };
    Ok(Output { text, verified: pass })
}
