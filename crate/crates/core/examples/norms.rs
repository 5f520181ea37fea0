//! Besov, Sobolev and Bourgain-type norms of a few fields.

use dnls_lab::frequency::Window;
use dnls_lab::solver::Trajectory;
use dnls_lab::spaces::{besov_norm, sobolev_norm, window_trajectory, xsb_norm, ysb_norm, BesovParams, XsbParams};
use dnls_lab::{Complex64, Domain, GridFunction, Result, SpectralField};

fn main() -> Result<()> {
    // lacunary series: bounded in B^{1/2}_{2,∞}, with H^{1/2} growing like √(#modes)
    let d = Domain::torus(256)?;
    let mut f = SpectralField::zeros(d);
    for j in 0..7 {
        let k = 1i64 << j;
        f.coeffs[d.slot(k).unwrap()] = Complex64::new((k as f64).powf(-0.5), 0.0);
    }
    println!(
        "lacunary: B^1/2_2,inf {:.4}  B^1/2_2,2 {:.4}  H^1/2 {:.4}",
        besov_norm(&f, BesovParams::sup(0.5)),
        besov_norm(&f, BesovParams::l2(0.5)),
        sobolev_norm(&f, 0.5)
    );

    // a free Schrödinger mode sits on τ = −ξ², so its X^{s,b} norm barely depends on b
    let d = Domain::torus(64)?;
    let free = Trajectory::from_fn(d, -2.0, 1.0 / 32.0, 129, |t| GridFunction::from_fn(d, |x| Complex64::from_polar(1.0, 3.0 * x - 9.0 * t)));
    let u = window_trajectory(&free, Window::Unit)?.field;
    for b in [0.0, 0.5, 1.0] {
        println!(
            "free mode k=3, unit window: X^(1,{b}) {:.4}  X^(1,{b},-) {:.4}  Y^(1,{b}) {:.4}",
            xsb_norm(&u, XsbParams::plus(1.0, b)),
            xsb_norm(&u, XsbParams::minus(1.0, b)),
            ysb_norm(&u, 1.0, b)
        );
    }
    Ok(())
}
