//! Scenario results and their on-disk layout.
//!
//! Each run gets a fresh `run-<k>` directory under
//! `<out>/<name>-<scenario>-seed<seed>/`; existing runs are never touched.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::dump::FieldDump;
use super::spec::ExperimentSpec;
use crate::error::Result;
use crate::estimates::ProbeReport;

/// Comparison used by a [`Check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cmp {
    Lt,
    Le,
    Ge,
}

impl Cmp {
    fn holds(self, value: f64, limit: f64) -> bool {
        match self {
            Cmp::Lt => value < limit,
            Cmp::Le => value <= limit,
            Cmp::Ge => value >= limit,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
        }
    }
}

/// One in-scenario assertion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub metric: String,
    pub value: f64,
    pub cmp: Cmp,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn describe(&self) -> String {
        format!(
            "{} = {:.6e} (required {} {:.6e}){}",
            self.metric,
            self.value,
            self.cmp.symbol(),
            self.limit,
            if self.passed { "" } else { " FAILED" }
        )
    }
}

/// Everything a scenario produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub probes: Vec<ProbeReport>,
    pub series: BTreeMap<String, Vec<[f64; 2]>>,
    pub dumps: Vec<(String, FieldDump)>,
}

impl Outcome {
    pub fn metric(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    /// Record `value cmp limit`; NaN never passes.
    pub fn check(&mut self, metric: impl Into<String>, value: f64, cmp: Cmp, limit: f64) -> bool {
        let passed = cmp.holds(value, limit);
        self.checks.push(Check { metric: metric.into(), value, cmp, limit, passed });
        passed
    }

    /// Boolean assertion stored as 1/0 against `>= 1`.
    pub fn require(&mut self, metric: impl Into<String>, ok: bool) -> bool {
        self.check(metric, f64::from(u8::from(ok)), Cmp::Ge, 1.0)
    }

    pub fn series(&mut self, key: impl Into<String>, points: Vec<[f64; 2]>) {
        self.series.insert(key.into(), points);
    }

    pub fn point(&mut self, key: &str, x: f64, y: f64) {
        self.series.entry(key.to_string()).or_default().push([x, y]);
    }

    pub fn dump(&mut self, name: impl Into<String>, dump: FieldDump) {
        self.dumps.push((name.into(), dump));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Contents of `report.json`. Nothing time- or host-dependent is stored, so
/// identical inputs give identical files.
#[derive(Debug, Serialize)]
pub struct RunReport<'a> {
    pub name: &'a str,
    pub scenario: &'a str,
    pub seed: u64,
    pub passed: bool,
    pub params: &'a super::spec::ScenarioParams,
    pub metrics: &'a BTreeMap<String, f64>,
    pub checks: &'a [Check],
    pub probes: &'a [ProbeReport],
    pub series: Vec<&'a str>,
    pub dumps: Vec<&'a str>,
}

/// `<out>/<name>-<scenario>-seed<seed>`.
pub fn experiment_dir(spec: &ExperimentSpec) -> PathBuf {
    spec.out.join(format!("{}-{}-seed{}", spec.name, spec.scenario, spec.seed))
}

/// Create the first unused `run-<k>` directory, `k ≥ 1`.
pub fn fresh_run_dir(base: &Path) -> io::Result<PathBuf> {
    fs::create_dir_all(base)?;
    for k in 1.. {
        let dir = base.join(format!("run-{k}"));
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!("unbounded run counter")
}

fn sanitize(key: &str) -> String {
    key.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' }).collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Write `report.json`, `report.csv`, `plotdata/*.tsv` and the dumps into
/// `dir`.
pub fn write_artifacts(dir: &Path, spec: &ExperimentSpec, outcome: &Outcome) -> Result<()> {
    let mut probe_series: Vec<(String, &Vec<[f64; 2]>)> = Vec::new();
    for (i, p) in outcome.probes.iter().enumerate() {
        for (k, v) in &p.series {
            probe_series.push((format!("{}-{}-{}", i, p.probe, k), v));
        }
    }
    let all_series: Vec<(String, &Vec<[f64; 2]>)> =
        outcome.series.iter().map(|(k, v)| (k.clone(), v)).chain(probe_series).collect();

    if !all_series.is_empty() {
        let plot = dir.join("plotdata");
        fs::create_dir_all(&plot)?;
        for (key, points) in &all_series {
            let mut f = fs::File::create(plot.join(format!("{}.tsv", sanitize(key))))?;
            writeln!(f, "# {key}")?;
            for [x, y] in points.iter() {
                writeln!(f, "{x:.17e}\t{y:.17e}")?;
            }
        }
    }
    for (name, dump) in &outcome.dumps {
        dump.write(&dir.join(format!("{}.fd", sanitize(name))))?;
    }

    let series_names: Vec<&str> = all_series.iter().map(|(k, _)| k.as_str()).collect();
    let report = RunReport {
        name: &spec.name,
        scenario: spec.scenario.name(),
        seed: spec.seed,
        passed: outcome.passed(),
        params: &spec.params,
        metrics: &outcome.metrics,
        checks: &outcome.checks,
        probes: &outcome.probes,
        series: series_names,
        dumps: outcome.dumps.iter().map(|(n, _)| n.as_str()).collect(),
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    fs::write(dir.join("report.json"), json)?;

    let mut csv = String::from("kind,key,value,limit,passed\n");
    for (k, v) in &outcome.metrics {
        csv.push_str(&format!("metric,{},{v:e},,\n", csv_field(k)));
    }
    for c in &outcome.checks {
        csv.push_str(&format!(
            "check,{},{:e},{} {:e},{}\n",
            csv_field(&c.metric),
            c.value,
            c.cmp.symbol(),
            c.limit,
            c.passed
        ));
    }
    for (i, p) in outcome.probes.iter().enumerate() {
        let key = csv_field(&format!("{i}-{}", p.probe));
        csv.push_str(&format!("probe,{key}.constant,{:e},,\n", p.constant));
        csv.push_str(&format!("probe,{key}.samples,{},,\n", p.samples));
        if let Some(s) = p.stable {
            csv.push_str(&format!("probe,{key}.stable,{},,\n", u8::from(s)));
        }
        for (k, v) in &p.details {
            csv.push_str(&format!("probe,{key}.{},{v:e},,\n", csv_field(k)));
        }
    }
    fs::write(dir.join("report.csv"), csv)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_and_nan() {
        let mut o = Outcome::default();
        assert!(o.check("a", 1.0, Cmp::Lt, 2.0));
        assert!(!o.check("b", f64::NAN, Cmp::Lt, 2.0));
        assert!(o.require("c", true));
        assert!(!o.passed());
        assert_eq!(o.failures().len(), 1);
        assert!(o.failures()[0].describe().contains("FAILED"));
    }

    #[test]
    fn run_dirs_are_append_only() {
        let tmp = tempfile::tempdir().unwrap();
        let a = fresh_run_dir(tmp.path()).unwrap();
        let b = fresh_run_dir(tmp.path()).unwrap();
        assert!(a.ends_with("run-1") && b.ends_with("run-2"));
    }
}
