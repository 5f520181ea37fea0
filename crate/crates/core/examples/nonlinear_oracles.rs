//! Physical-space nonlinearities against their Fourier-side convolution
//! oracles.

use dnls_lab::estimates::fields::random_spectral;
use dnls_lab::nonlinear::{quintic_q_fourier, quintic_q_physical, trilinear_t, trilinear_t_fourier};
use dnls_lab::{Domain, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let d = Domain::torus(32)?;
    let v = random_spectral(d, 15, 0.0, &mut rng);
    let t = trilinear_t(&v.to_grid())?.to_spectral();
    let tf = trilinear_t_fourier(&v, &v, &v.conj_flip())?;
    println!("trilinear, n = 32: max coefficient difference {:.2e} (size {:.2e})", t.max_abs_diff(&tf), tf.l2_norm());

    let d = Domain::torus(16)?;
    let v = random_spectral(d, 7, 0.0, &mut rng);
    let c = v.conj_flip();
    let q = quintic_q_physical(&v.to_grid())?.to_spectral();
    let qf = quintic_q_fourier([&v, &c, &v, &c, &v])?;
    println!("quintic, n = 16: max coefficient difference {:.2e} (size {:.2e})", q.max_abs_diff(&qf), qf.l2_norm());
    Ok(())
}
