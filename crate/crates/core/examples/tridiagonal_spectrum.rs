//! On level l the eigenproblem in the Hermite product basis is tridiagonal.
//! Its determinant factors over the eigenvalues, and its null vectors map
//! back to the J polynomials.

use hlito::spectral::{beta_to_poly, det_m, hermite_basis_of_j, null_vector, null_vector_residual};
use hlito::{hlito, Complex64};

fn main() -> hlito::Result<()> {
    let lambda = Complex64::new(0.3, -1.7);
    for l in [0, 1, 4, 9] {
        let (direct, product) = det_m(l, lambda)?;
        println!("l = {l}: continuant {direct:.6e}  product {product:.6e}");
    }

    let l = 5;
    let rho = 1.0;
    for m in 0..=l {
        let beta = null_vector(l, m)?;
        let poly = beta_to_poly(&beta, l, rho)?;
        let (scale, rel) = poly.proportional_to(&hlito(m, l - m, rho)?).unwrap();
        println!(
            "m = {m}: ‖Mβ‖/‖β‖ = {:.1e}, β ↦ {scale:.4} · J_({m},{}) (residual {rel:.1e})",
            null_vector_residual(l, m)?,
            l - m
        );
    }

    let coeffs: Vec<String> = hermite_basis_of_j(1, 1)?.iter().map(|c| format!("{c}")).collect();
    println!("\nJ_(1,0) = z in the H_k(x)H_(1-k)(y) basis: ({})", coeffs.join(", "));
    Ok(())
}
