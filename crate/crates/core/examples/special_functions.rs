//! Variance-scaled Hermite and Laguerre families, and the Bessel integral
//! that gives an independent route to Laguerre values.

use hlito::special_fns::{bessel_jn, hermite_sequence, laguerre, laguerre_via_bessel};

fn main() -> hlito::Result<()> {
    let rho = 0.5;
    let x = 0.9;
    println!("H_k({x}, {rho}) for k = 0..6:");
    for (k, h) in hermite_sequence(6, x, rho)?.iter().enumerate() {
        println!("  H_{k} = {h:+.10}");
    }

    println!("\nLaguerre series vs Bessel integral, rho = {rho}:");
    println!("{:>3} {:>3} {:>6} {:>20} {:>20} {:>10}", "n", "a", "x", "series", "integral", "diff");
    for (n, alpha) in [(2u32, 0u32), (3, 1), (5, 2)] {
        for x in [0.3, 1.2] {
            let series = laguerre(n, f64::from(alpha), x, rho)?;
            let integral = laguerre_via_bessel(n, alpha, x, rho)?;
            println!(
                "{n:>3} {alpha:>3} {x:>6} {series:>20.14} {integral:>20.14} {:>10.2e}",
                (series - integral).abs()
            );
        }
    }

    println!("\nJ_n(x) by the periodic trapezoid rule:");
    for n in 0..4 {
        println!("  J_{n}(2.5) = {:+.15}", bessel_jn(n, 2.5));
    }
    Ok(())
}
