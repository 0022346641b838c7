//! The generator maps J_{m,n} to a multiple of itself; the multiple is the
//! eigenvalue -(m+n) r - i (m-n) Ω.

use hlito::spectral::{dense_generator_spectrum, spectrum, spectrum_mismatch};
use hlito::{hlito, OUParams};

fn main() -> hlito::Result<()> {
    let params = OUParams::new(1.0, -3.0, 0.5)?;
    println!("r = {}, Ω = {}, σ² = {}, ρ = {}", params.r(), params.omega(), params.sigma2(), params.rho());
    println!("{:>3} {:>3} {:>24} {:>12}", "m", "n", "A J / J", "residual");
    for (m, n) in [(0, 0), (1, 0), (0, 1), (2, 1), (3, 3), (5, 2)] {
        let j = hlito(m, n, params.rho())?;
        let image = j.apply_generator(&params);
        // J_{0,0} = 1 is annihilated, so there is no ratio to read off
        let (ratio, residual) = image.proportional_to(&j).unwrap_or_default();
        println!("{m:>3} {n:>3} {:>24} {residual:>12.2e}", format!("{ratio:.6}"));
        assert!((ratio - params.eigenvalue(m, n)).norm() < 1e-12);
    }

    let level = 6;
    let predicted: Vec<_> = spectrum(&params, level).into_iter().map(|(_, e)| e).collect();
    let dense = dense_generator_spectrum(&params, level)?;
    println!(
        "\n{} eigenvalues up to level {level}; largest gap to a dense eigensolve: {:.2e}",
        predicted.len(),
        spectrum_mismatch(&predicted, &dense).unwrap()
    );
    Ok(())
}
