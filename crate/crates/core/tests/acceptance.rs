//! Acceptance suite. Runs every criterion in sequence so that the wall-clock
//! limits are measured without contention, prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use dnls_lab::cli::{execute, ExperimentSpec, Outcome, Scenario};
use dnls_lab::estimates::fields::random_spectral;
use dnls_lab::estimates::{besov_sobolev_check, xy_embedding_check, SpaceTimeGrid};
use dnls_lab::nonlinear::{quintic_q_fourier, quintic_q_physical, trilinear_t, trilinear_t_fourier, NonlinearityConfig};
use dnls_lab::solver::{picard_iterate, solve, SolverConfig};
use dnls_lab::spaces::sobolev_norm;
use dnls_lab::{Complex64, Domain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Verdict { passed, detail: detail.into() }
    }
}

fn config(file: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(file);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn run(scenario: Scenario, text: &str) -> Outcome {
    let spec = ExperimentSpec::parse(scenario, text).unwrap_or_else(|e| panic!("{scenario}: {e}"));
    execute(&spec).unwrap_or_else(|e| panic!("{scenario}: {e}"))
}

fn run_config(scenario: Scenario) -> Outcome {
    run(scenario, &config(&format!("{scenario}.json")))
}

/// Largest value among checks whose metric contains `needle`.
fn worst(out: &Outcome, needle: &str) -> f64 {
    out.checks.iter().filter(|c| c.metric.contains(needle)).map(|c| c.value).fold(0.0, f64::max)
}

fn failures(out: &Outcome) -> String {
    out.failures().iter().map(|c| c.describe()).collect::<Vec<_>>().join("; ")
}

fn all_checks(out: &Outcome, what: &str) -> Verdict {
    if out.passed() {
        Verdict::new(true, format!("{what}: {} checks", out.checks.len()))
    } else {
        Verdict::new(false, format!("{what}: {}", failures(out)))
    }
}

fn timed(limit: Option<Duration>, body: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let v = body();
    let elapsed = start.elapsed();
    let detail = format!("{}; {:.2} s", v.detail, elapsed.as_secs_f64());
    match limit {
        Some(l) if elapsed >= l => Verdict::new(false, format!("{detail} exceeds {} s", l.as_secs())),
        _ => Verdict::new(v.passed, detail),
    }
}

fn a1() -> Verdict {
    let out = run_config(Scenario::VerifyResonance);
    let res = worst(&out, "max_relative_residual");
    Verdict::new(out.passed(), format!("max relative residual {res:.2e}, {}", all_checks(&out, "resonance").detail))
}

fn a2(drifts: &mut Vec<f64>) -> Verdict {
    let out = run_config(Scenario::PlaneWave);
    drifts.push(worst(&out, "mass_drift"));
    let err = worst(&out, "relative_l2_error");
    let gains: Vec<String> =
        out.metrics.iter().filter(|(k, _)| k.starts_with("halving_gain")).map(|(_, v)| format!("{v:.2}")).collect();
    let v = all_checks(&out, "plane wave");
    Verdict::new(v.passed, format!("relative L2 error {err:.2e}, halving gains [{}]; {}", gains.join(", "), v.detail))
}

fn a3(drifts: &mut Vec<f64>) -> Verdict {
    let mut passed = true;
    let mut parts = Vec::new();
    for file in ["gauge-equivalence.json", "gauge-equivalence-line.json"] {
        let out = run(Scenario::GaugeEquivalence, &config(file));
        drifts.push(worst(&out, "mass_drift"));
        let h1 = out.metrics["initial_h1"];
        let ok = out.passed() && h1 <= 0.3 + 1e-12;
        passed &= ok;
        parts.push(format!("{file}: discrepancy {:.2e}, H1 {h1:.3}{}", worst(&out, "sup_l2_discrepancy"), if ok { "" } else { " FAILED" }));
    }
    Verdict::new(passed, parts.join("; "))
}

fn a4() -> Verdict {
    let torus = run_config(Scenario::GaugeRoundtrip);
    let line = run(
        Scenario::GaugeRoundtrip,
        r#"{"name": "line", "seed": 1, "params": {"domain": {"kind": "line-approx", "n_points": 512, "scale": 8}, "samples": 100, "band": 16}}"#,
    );
    let passed = torus.passed() && line.passed();
    let e = worst(&torus, "error").max(worst(&line, "error"));
    Verdict::new(passed, format!("max round-trip/modulus error {e:.2e} over torus and line, 100 fields each"))
}

fn a5(drifts: &[f64]) -> Verdict {
    let w = drifts.iter().cloned().fold(0.0, f64::max);
    Verdict::new(drifts.len() == 3 && w < 1e-9, format!("max relative mass drift {w:.2e} over {} runs", drifts.len()))
}

fn a6() -> Verdict {
    let out = run_config(Scenario::Scaling);
    Verdict::new(out.passed(), format!("max norm mismatch {:.2e} for sigma in {{2, 4}}", worst(&out, "norm_mismatch")))
}

fn a7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut et, mut eq) = (0.0f64, 0.0f64);
    let dt = Domain::torus(32).unwrap();
    for _ in 0..50 {
        let vh = random_spectral(dt, 15, 0.0, &mut rng);
        let phys = trilinear_t(&vh.to_grid()).unwrap().to_spectral();
        let four = trilinear_t_fourier(&vh, &vh, &vh.conj_flip()).unwrap();
        et = et.max(phys.max_abs_diff(&four));
    }
    let dq = Domain::torus(16).unwrap();
    for _ in 0..50 {
        let vh = random_spectral(dq, 7, 0.0, &mut rng);
        let c = vh.conj_flip();
        let phys = quintic_q_physical(&vh.to_grid()).unwrap().to_spectral();
        let four = quintic_q_fourier([&vh, &c, &vh, &c, &vh]).unwrap();
        eq = eq.max(phys.max_abs_diff(&four));
    }
    Verdict::new(et < 1e-10 && eq < 1e-9, format!("trilinear n=32 max diff {et:.2e}, quintic n=16 max diff {eq:.2e}"))
}

fn a8() -> Verdict {
    let out = run_config(Scenario::VerifyDomination);
    let consts: Vec<String> = out
        .series
        .iter()
        .filter(|(k, _)| k.ends_with("_constant_vs_box"))
        .map(|(k, v)| format!("{}: {:.3}/{:.3}", k.trim_end_matches("_constant_vs_box"), v[0][1], v[1][1]))
        .collect();
    let v = all_checks(&out, "domination");
    Verdict::new(v.passed, format!("sup at boxes 100/200 [{}]; {}", consts.join(", "), v.detail))
}

fn a9() -> Verdict {
    let besov = besov_sobolev_check(256, 1000, 0.5, 10).unwrap();
    let xy = xy_embedding_check(SpaceTimeGrid::new(64, 256, 4.0).unwrap(), 100, 0.5, 0.0, 0.6, 10).unwrap();
    let passed = besov.constant <= 2.0 && xy.constant <= 1.0 + 1e-12;
    Verdict::new(
        passed,
        format!("max besov/sobolev {:.3} (<= 2) on 1000 fields, max XY ratio {:.3} (<= 1) on 100 fields", besov.constant, xy.constant),
    )
}

fn a10() -> Verdict {
    let d = Domain::torus(64).unwrap();
    let cfg = SolverConfig::new(d, NonlinearityConfig::original(d.kind, 0.0, 1), 2.5e-4, 0.05);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let f = random_spectral(d, 4, 2.0, &mut rng);
    let f = f.to_grid().scaled(Complex64::new(0.1 / sobolev_norm(&f, 1.0), 0.0));
    let rep = picard_iterate(&f, &cfg, 30).unwrap();
    let traj = solve(&f, &cfg).unwrap();
    let gap = rep.trajectory.sup_l2_distance(&traj).unwrap();
    let r = rep.max_ratio();
    Verdict::new(
        !rep.diverged && !rep.ratios.is_empty() && r < 0.5 && gap < 1e-6,
        format!("max successive ratio {r:.2e} over {} iterations, distance to time stepper {gap:.2e}", rep.differences.len()),
    )
}

fn a11() -> Verdict {
    let out = run_config(Scenario::Flowmap);
    let spread = out.checks.iter().find(|c| c.metric == "max_over_median").map_or(f64::NAN, |c| c.value);
    let v = all_checks(&out, "flowmap");
    Verdict::new(v.passed, format!("median L {:.4}, max/median {spread:.5}; {}", out.metrics["median_lipschitz"], v.detail))
}

fn a12() -> Verdict {
    let tri = run_config(Scenario::ProbeTrilinear);
    let multi = run_config(Scenario::ProbeMultilinear);
    let mut consts = Vec::new();
    for p in tri.probes.iter().chain(&multi.probes) {
        consts.push(format!("{} {:.3e} ({} samples)", p.probe, p.constant, p.samples));
    }
    let ensembles = tri.probes.iter().chain(&multi.probes).all(|p| p.samples >= 100);
    let passed = tri.passed() && multi.passed() && ensembles;
    let mut detail = consts.join(", ");
    if !passed {
        detail = format!("{detail}; {} {}", failures(&tri), failures(&multi));
    }
    Verdict::new(passed, detail)
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut drifts = Vec::new();
    let secs = |s| Some(Duration::from_secs(s));
    let results = vec![
        ("A1", timed(secs(10), a1)),
        ("A2", timed(secs(30), || a2(&mut drifts))),
        ("A3", timed(secs(120), || a3(&mut drifts))),
        ("A4", timed(secs(5), a4)),
        ("A5", timed(None, || a5(&drifts))),
        ("A6", timed(None, a6)),
        ("A7", timed(None, a7)),
        ("A8", timed(None, a8)),
        ("A9", timed(None, a9)),
        ("A10", timed(None, a10)),
        ("A11", timed(None, a11)),
        ("A12", timed(secs(600), a12)),
    ];
    let mut failed = 0;
    for (id, v) in &results {
        println!("{} {id}: {}", if v.passed { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
