//! Drive a scenario through the library interface and write its artifacts,
//! the same way the `dnls-lab` binary does.

use dnls_lab::cli::{run, ExperimentSpec, FieldDump, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("dnls-lab-example");
    let text = format!(
        r#"{{
            "name": "example",
            "seed": 2,
            "out": {:?},
            "params": {{
                "domain": {{"kind": "torus", "n_points": 64}},
                "nonlinearity": {{"lambda": 1.0, "k": 1}},
                "dt": 1e-3,
                "t_final": 0.1,
                "initial": {{"kind": "random", "band": 5, "h1_norm": 0.5}}
            }}
        }}"#,
        out.display()
    );
    let spec = ExperimentSpec::parse(Scenario::Solve, &text)?;
    let done = run(&spec)?;
    for c in &done.outcome.checks {
        println!("{}", c.describe());
    }
    let dump = FieldDump::read(&done.dir.join("final.fd"))?;
    println!("final field at t = {} with {} points, crc32 {:08x}", dump.header.time, dump.header.n_points, dump.header.crc32);
    println!("artifacts in {}", done.dir.display());
    Ok(())
}
