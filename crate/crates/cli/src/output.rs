use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use twotree::resistance::ResistanceValue;
use twotree::Rational;

use crate::methods::{Method, Query};
use crate::CliError;

/// Relative tolerance for comparing a float result with the exact value.
pub const FLOAT_AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodValue {
    pub method: &'static str,
    /// `num/den` for exact methods, shortest round-trip decimal for floats.
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub command: &'static str,
    pub family: String,
    pub n: usize,
    pub k: Option<usize>,
    pub i: usize,
    pub j: usize,
    pub exact: Option<String>,
    pub decimal: String,
    pub methods: Vec<MethodValue>,
    /// Present whenever two or more methods ran.
    pub agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log: Option<serde_json::Value>,
}

fn agreement(results: &[(Method, ResistanceValue)], exact: Option<&Rational>) -> bool {
    results.iter().all(|(_, v)| match (v, exact) {
        (ResistanceValue::Exact(r), Some(e)) => r == e,
        (ResistanceValue::Float(x), Some(e)) => {
            let e = e.to_f64();
            (x - e).abs() <= FLOAT_AGREEMENT_TOL * e.abs()
        }
        // Float results only: compare them with each other.
        (ResistanceValue::Float(x), None) => results.iter().all(|(_, w)| match w {
            ResistanceValue::Float(y) => (x - y).abs() <= FLOAT_AGREEMENT_TOL * x.abs(),
            ResistanceValue::Exact(_) => unreachable!("an exact value would be the reference"),
        }),
        (ResistanceValue::Exact(_), None) => unreachable!("first exact value is the reference"),
    })
}

impl OutputRecord {
    pub fn new(
        command: &'static str,
        q: &Query,
        results: &[(Method, ResistanceValue)],
        digits: usize,
    ) -> Self {
        let exact = results.iter().find_map(|(_, v)| match v {
            ResistanceValue::Exact(r) => Some(r.clone()),
            ResistanceValue::Float(_) => None,
        });
        let decimal = match (&exact, results.first()) {
            (Some(r), _) => r.to_decimal(digits),
            (None, Some((_, ResistanceValue::Float(x)))) => {
                format!("{:.*e}", digits.saturating_sub(1), x)
            }
            _ => String::new(),
        };
        let agree = (results.len() >= 2).then(|| agreement(results, exact.as_ref()));
        Self {
            command,
            family: q.family.to_string(),
            n: q.n,
            k: q.k,
            i: q.i,
            j: q.j,
            exact: exact.map(|r| r.to_string()),
            decimal,
            methods: results
                .iter()
                .map(|(m, v)| MethodValue {
                    method: m.tag(),
                    value: match v {
                        ResistanceValue::Exact(r) => r.to_string(),
                        ResistanceValue::Float(x) => format!("{x:?}"),
                    },
                })
                .collect(),
            agree,
            log: None,
        }
    }

    pub fn disagrees(&self) -> bool {
        self.agree == Some(false)
    }

    fn text_line(&self) -> String {
        let mut line = format!("{} n={}", self.family, self.n);
        if let Some(k) = self.k {
            line += &format!(" k={k}");
        }
        line += &format!(
            " r({},{}) = {} ~ {}",
            self.i,
            self.j,
            self.exact.as_deref().unwrap_or("?"),
            self.decimal
        );
        let tags: Vec<_> = self.methods.iter().map(|m| m.method).collect();
        line += &format!(" [{}]", tags.join(", "));
        match self.agree {
            Some(true) => line += " agree",
            Some(false) => {
                line += " DISAGREE:";
                for m in &self.methods {
                    line += &format!(" {}={}", m.method, m.value);
                }
            }
            None => {}
        }
        line
    }
}

/// Flat CSV row; per-method values are packed as `tag=value;tag=value`.
#[derive(Serialize)]
struct CsvRow<'a> {
    command: &'a str,
    family: &'a str,
    n: usize,
    k: Option<usize>,
    i: usize,
    j: usize,
    exact: Option<&'a str>,
    decimal: &'a str,
    methods: String,
    values: String,
    agree: Option<bool>,
}

pub fn write_records<W: Write>(
    out: W,
    format: Format,
    records: &[OutputRecord],
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(|e| CliError::Io(e.into()))?;
                writeln!(out)?;
            }
            out.flush()?;
        }
        Format::Text => {
            let mut out = out;
            for r in records {
                writeln!(out, "{}", r.text_line())?;
                if let Some(serde_json::Value::Array(steps)) = &r.log {
                    for step in steps {
                        writeln!(out, "{step}")?;
                    }
                }
            }
            out.flush()?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(CsvRow {
                    command: r.command,
                    family: &r.family,
                    n: r.n,
                    k: r.k,
                    i: r.i,
                    j: r.j,
                    exact: r.exact.as_deref(),
                    decimal: &r.decimal,
                    methods: r.methods.iter().map(|m| m.method).collect::<Vec<_>>().join(";"),
                    values: r
                        .methods
                        .iter()
                        .map(|m| format!("{}={}", m.method, m.value))
                        .collect::<Vec<_>>()
                        .join(";"),
                    agree: r.agree,
                })
                .map_err(|e| CliError::Io(e.into()))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
