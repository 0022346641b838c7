//! Expanding functions in the J basis of L²(μ) and watching Parseval sums close.

use hlito::expansion::{build_grid, expand, parseval_check, DEFAULT_NODES};
use hlito::special_fns::hermite;
use hlito::Complex64;

fn main() -> hlito::Result<()> {
    let rho = 1.0;
    let grid = build_grid(DEFAULT_NODES, rho)?;

    // H_2(x, ρ/2) lives on level 2 and level 0 only
    let h2 = |x: [f64; 2]| Complex64::new(hermite(2, x[0], rho / 2.0).unwrap(), 0.0);
    let e = expand(&h2, 3, &grid)?;
    println!("H_2(x, ρ/2) coefficients <f, J_(m,n)> above 1e-12:");
    for (idx, a) in e.coeffs().iter().filter(|(_, a)| a.norm() > 1e-12) {
        println!("  ({}, {}) -> {a:.12}", idx.m, idx.n);
    }

    // the generating function has ‖w‖² = exp(2ρ|λ|²)
    let lambda = Complex64::new(0.4, 0.3);
    let w = move |x: [f64; 2]| {
        let z = Complex64::new(x[0], x[1]);
        (lambda * z.conj() + lambda.conj() * z - rho * lambda.norm_sqr()).exp()
    };
    let report = parseval_check(&w, 8, &grid)?;
    println!("\nParseval for the generating function, exact {:.12}:", (2.0 * rho * lambda.norm_sqr()).exp());
    print!("{}", report.to_csv());
    Ok(())
}
