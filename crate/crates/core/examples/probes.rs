//! Small-ensemble versions of the Strichartz and trilinear probes.

use dnls_lab::estimates::{strichartz_probe, trilinear_probe, SpaceTimeGrid};
use dnls_lab::Result;

fn main() -> Result<()> {
    let s = strichartz_probe(0.5, 20, &SpaceTimeGrid::strichartz_defaults(), 3)?;
    println!("L4 / X^(0,1/2): sup {:.4}, stable under refinement: {:?}", s.constant, s.stable);
    let grid = SpaceTimeGrid::new(32, 256, 4.0)?;
    let t = trilinear_probe(0.5, &[1.0, 0.5, 0.25], 8, grid, 3)?;
    for series in ["TX", "TY"] {
        println!("{series} class sup per T: {:?}", t.series[series]);
    }
    Ok(())
}
