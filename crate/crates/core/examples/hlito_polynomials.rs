//! Building J_{m,n}(z, ρ) two ways and inspecting its coefficients.

use hlito::hlito_poly::hlito_values;
use hlito::{hlito, hlito_by_creation, Complex64};

fn main() -> hlito::Result<()> {
    let rho = 2.0;
    let j = hlito(3, 2, rho)?;
    println!("J_(3,2)(z, {rho}):\n{j}");
    println!("JSON: {}", j.to_json());

    // the creation-operator route reproduces the closed form exactly
    let via_creation = hlito_by_creation(3, 2, rho)?;
    println!("closed form == creation route: {}", j == via_creation);

    // the ladder: lowering J_{3,2} by ∂ gives 3 J_{2,2}
    let lowered = j.annihilate();
    let target = &hlito(2, 2, rho)? * 3.0;
    println!("∂ J_(3,2) == 3 J_(2,2): {}", lowered.approx_eq(&target, 1e-15));

    let z = Complex64::new(0.4, -1.1);
    let table = hlito_values(z, rho, 5)?;
    println!("\nvalues at z = {z}:");
    for m in 0..=2 {
        for n in 0..=2 {
            let direct = hlito(m as u32, n as u32, rho)?.eval(z);
            println!("  J_({m},{n}) = {:.12}  (recursion {:.12})", direct, table[m][n]);
        }
    }
    println!("\nJ_(2,1) conjugated is J_(1,2): {}", hlito(2, 1, rho)?.conjugate() == hlito(1, 2, rho)?);
    Ok(())
}
