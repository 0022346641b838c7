//! Exact-transition Monte Carlo: eigenfunction decay, Brownian martingales,
//! and the ensemble file format.

use hlito::simulate::ou::semigroup_target;
use hlito::simulate::{
    complex_bm_martingale, ito_sum_check, read_ensemble, sample_ou, semigroup_mc, write_ensemble,
    ItoSigns, Start,
};
use hlito::{Complex64, OUParams};

fn main() -> hlito::Result<()> {
    let params = OUParams::new(1.0, 2.0, 0.5)?;
    let z0 = Complex64::new(0.7, -0.4);
    let (t, paths, seed) = (0.5, 100_000, 11);

    println!("E[J_(m,n)(Z_t)] from z0 = {z0}, t = {t}, {paths} paths");
    for (m, n) in [(1, 0), (1, 1), (2, 1), (0, 3)] {
        let est = semigroup_mc(m, n, t, z0, &params, paths, seed)?;
        let target = semigroup_target(m, n, t, z0, &params)?;
        let k = ((est.mean - target).re / est.stderr_re).abs().max(((est.mean - target).im / est.stderr_im).abs());
        println!("  ({m},{n}) mean {:.5} target {:.5}  worst |z-score| {k:.2}", est.mean, target);
    }

    println!("\nF_(m,n)(ζ_1) for complex Brownian motion has mean zero:");
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        let est = complex_bm_martingale(m, n, 1.0, paths, seed)?;
        println!("  ({m},{n}) mean {:.5} ± {:.5}", est.mean, est.stderr());
    }

    // with the correct Itô signs the left-point sums close; without them they don't
    for signs in [ItoSigns::Derived, ItoSigns::Unsigned] {
        let check = ito_sum_check(1, 1, 1.0, 2000, 200, seed, signs)?;
        println!("Itô sums for F_(1,1), {signs:?}: relative RMS residual {:.3}", check.relative());
    }

    let ensemble = sample_ou(&params, Start::Stationary, 0.1, 20, 4, seed)?;
    let mut bytes = Vec::new();
    write_ensemble(&ensemble, &mut bytes)?;
    let back = read_ensemble(&bytes[..])?;
    println!("\nensemble of {} paths × {} steps: {} bytes, round trip equal: {}", back.n_paths(), back.n_steps(), bytes.len(), back == ensemble);
    Ok(())
}
