//! Registry of worked examples, each a self-contained pass/fail experiment
//! producing one table row.

mod scenarios;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use scenarios::registry;

/// What a scenario computes: a headline number with its expected value and
/// tolerance, plus any side conditions that must also hold.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub computed: f64,
    pub expected: f64,
    pub tol: f64,
    pub conditions_hold: bool,
    pub detail: String,
}

impl Outcome {
    pub fn passes(&self) -> bool {
        self.conditions_hold && (self.computed - self.expected).abs() <= self.tol
    }
}

pub struct Scenario {
    pub id: &'static str,
    pub title: &'static str,
    pub run: fn() -> Result<Outcome>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub id: String,
    pub computed: f64,
    pub expected: f64,
    pub tol: f64,
    pub status: RowStatus,
    pub seconds: f64,
    #[serde(default)]
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Md,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "md" => Ok(Format::Md),
            _ => Err(Error::Invalid(format!("unknown format {s:?}, expected csv, json or md"))),
        }
    }
}

pub fn ids() -> Vec<&'static str> {
    registry().iter().map(|s| s.id).collect()
}

// wasm32-unknown-unknown has no clock; rows report 0 seconds there
#[cfg(not(target_arch = "wasm32"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = std::time::Instant::now();
    let out = f();
    (out, t.elapsed().as_secs_f64())
}

#[cfg(target_arch = "wasm32")]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    (f(), 0.0)
}

fn execute(s: &Scenario) -> Row {
    let (out, seconds) = timed(s.run);
    match out {
        Ok(o) => Row {
            id: s.id.to_string(),
            computed: o.computed,
            expected: o.expected,
            tol: o.tol,
            status: if o.passes() { RowStatus::Pass } else { RowStatus::Fail },
            seconds,
            detail: o.detail,
        },
        Err(e) => Row {
            id: s.id.to_string(),
            computed: f64::NAN,
            expected: f64::NAN,
            tol: 0.0,
            status: RowStatus::Fail,
            seconds,
            detail: format!("error: {e}"),
        },
    }
}

/// Runs one scenario, or every scenario for `"all"`. Rows come back sorted
/// by id.
pub fn run(which: &str) -> Result<Vec<Row>> {
    let reg = registry();
    let chosen: Vec<&Scenario> = if which == "all" {
        reg.iter().collect()
    } else {
        let picked: Vec<&Scenario> = which
            .split(',')
            .map(|id| {
                let id = id.trim();
                reg.iter().find(|s| s.id == id).ok_or_else(|| Error::UnknownScenario(id.to_string()))
            })
            .collect::<Result<_>>()?;
        picked
    };
    let mut rows: Vec<Row> = chosen.par_iter().map(|s| execute(s)).collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(rows)
}

/// Twelve digits: twelve decimals in the usual range, twelve significant
/// digits in scientific notation outside it.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{x:.12}")
    } else {
        format!("{x:.11e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders the table. `timing = false` writes zero seconds, which makes the
/// output byte-identical across runs.
pub fn emit(rows: &[Row], format: Format, timing: bool) -> Result<String> {
    let secs = |r: &Row| if timing { r.seconds } else { 0.0 };
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("id,computed,expected,tol,status,seconds\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{:.3}\n",
                    csv_field(&r.id),
                    fmt_num(r.computed),
                    fmt_num(r.expected),
                    fmt_num(r.tol),
                    if r.status == RowStatus::Pass { "pass" } else { "fail" },
                    secs(r)
                ));
            }
            out
        }
        Format::Json => {
            let rows: Vec<Row> = rows.iter().map(|r| Row { seconds: secs(r), ..r.clone() }).collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
        Format::Md => {
            let reg = registry();
            let mut out = String::from(
                "| id | example | computed | expected | tol | status | seconds |\n|---|---|---|---|---|---|---|\n",
            );
            for r in rows {
                let title = reg.iter().find(|s| s.id == r.id).map_or("", |s| s.title);
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {:.3} |\n",
                    r.id,
                    title,
                    fmt_num(r.computed),
                    fmt_num(r.expected),
                    fmt_num(r.tol),
                    if r.status == RowStatus::Pass { "pass" } else { "**fail**" },
                    secs(r)
                ));
            }
            out
        }
    })
}

/// Parses a table written by [`emit`] in JSON.
pub fn parse_json(s: &str) -> Result<Vec<Row>> {
    Ok(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0), "1.000000000000");
        assert_eq!(fmt_num(0.0), "0.000000000000");
        assert_eq!(fmt_num(12.5), "12.500000000000");
        assert_eq!(fmt_num(-0.25), "-0.250000000000");
        assert_eq!(fmt_num(1e-9), "1.00000000000e-9");
    }

    #[test]
    fn ids_are_unique_and_sorted_on_output() {
        let mut v = ids();
        let n = v.len();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), n);
        assert!(matches!(run("no-such-case"), Err(Error::UnknownScenario(_))));
    }
}
