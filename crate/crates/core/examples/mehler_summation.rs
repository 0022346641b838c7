//! The eigen-series of the transition kernel against its closed form. At
//! small u a few dozen levels suffice; near u = 1 convergence slows sharply.

use hlito::mehler::{mehler_kernel, mehler_series, mehler_series_unconjugated, MehlerPoint};
use hlito::OUParams;

fn main() -> hlito::Result<()> {
    let params = OUParams::from_rho_c(1.0, -2.0)?;
    let (x, y) = ([0.6, -0.3], [-0.2, 0.9]);
    println!("{:>5} {:>4} {:>18} {:>10}", "u", "N", "kernel", "rel err");
    for u in [0.3, 0.5, 0.8] {
        let pt = MehlerPoint::new(u, x, y)?;
        let k = mehler_kernel(&pt, &params)?;
        for n in [10, 20, 40, 60] {
            let s = mehler_series(&pt, &params, n)?;
            println!("{u:>5} {n:>4} {k:>18.12} {:>10.2e}", (s - k).norm() / k);
        }
    }

    // dropping the conjugate on the second factor reflects y across the real axis
    let pt = MehlerPoint::new(0.4, x, y)?;
    let flipped = MehlerPoint::new(0.4, x, [y[0], -y[1]])?;
    println!(
        "\nunconjugated series {:.12} vs kernel at (y1, -y2) {:.12}",
        mehler_series_unconjugated(&pt, &params, 40)?.re,
        mehler_kernel(&flipped, &params)?
    );
    Ok(())
}
