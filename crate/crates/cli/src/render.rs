use serde_json::{json, Value};

use wpah::interpolation::RankProfile;
use wpah::Weights;

use crate::args::{Common, Format};

pub struct Output {
    pub text: String,
    /// False when a check ran to completion and failed.
    pub verified: bool,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Self { text, verified: true }
    }
}

/// Provenance embedded in every artifact.
pub struct Meta {
    pub schema: String,
    pub weights: Option<Vec<u32>>,
    pub seed: u64,
    pub field: String,
    pub prime: Option<u64>,
    pub trials: usize,
}

impl Meta {
    pub fn new(command: &str, w: Option<&Weights>, common: &Common, prime: Option<u64>) -> Self {
        Self {
            schema: format!("wpah.{command}.v1"),
            weights: w.map(|w| w.as_slice().to_vec()),
            seed: common.seed,
            field: common.field.to_string(),
            prime,
            trials: common.trials,
        }
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("wpah", wpah::VERSION.to_string()),
            ("schema", self.schema.clone()),
            (
                "weights",
                self.weights.as_ref().map_or("-".into(), |w| format!("({})", join(w))),
            ),
            ("seed", self.seed.to_string()),
            ("field", self.field.clone()),
            ("prime", self.prime.map_or("-".into(), |p| p.to_string())),
            ("trials", self.trials.to_string()),
        ]
    }

    pub fn text_header(&self) -> String {
        let parts: Vec<String> = self.pairs().into_iter().map(|(k, v)| format!("{k} {v}")).collect();
        format!("# {}\n", parts.join("  "))
    }

    pub fn csv_header(&self) -> String {
        let parts: Vec<String> = self.pairs().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# {}\n", parts.join(" "))
    }

    pub fn json(&self, body: Value) -> String {
        let mut v = json!({
            "schema": self.schema,
            "version": wpah::VERSION,
            "weights": self.weights,
            "seed": self.seed,
            "field": self.field,
            "prime": self.prime,
            "trials": self.trials,
        });
        if let (Value::Object(map), Value::Object(extra)) = (&mut v, body) {
            map.extend(extra);
        }
        let mut s = serde_json::to_string_pretty(&v).expect("json value serializes");
        s.push('\n');
        s
    }
}

fn join(w: &[u32]) -> String {
    w.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

pub fn weights_list(w: &Weights) -> String {
    join(w.as_slice())
}

pub fn profiles(meta: &Meta, format: Format, rows: &[RankProfile], mult: u32) -> String {
    match format {
        Format::Csv => {
            let mut t = meta.csv_header();
            t.push_str(RankProfile::CSV_HEADER);
            t.push('\n');
            for p in rows {
                t.push_str(&p.csv_row());
                t.push('\n');
            }
            t
        }
        Format::Json => meta.json(json!({ "multiplicity": mult, "rows": rows })),
        Format::Text => {
            let mut t = meta.text_header();
            t.push_str("d\ts_d\texpected\tactual\tdeficiency\tAH\n");
            for p in rows {
                t.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    p.d,
                    p.s_d,
                    p.expected,
                    p.actual,
                    p.deficiency,
                    if p.is_ah { "yes" } else { "no" }
                ));
            }
            t
        }
    }
}
