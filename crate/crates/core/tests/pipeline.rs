//! Properties that only hold when several modules agree with each other.

use hlito::expansion::{build_grid, expand, norm_sq, DEFAULT_NODES};
use hlito::mehler::{mehler_kernel, semigroup_apply, symmetric_relation_check, MehlerPoint};
use hlito::simulate::{sample_ou, Start};
use hlito::spectral::{beta_to_poly, hermite_basis_of_j, monomial_in_j_basis};
use hlito::{hlito, Complex64, ComplexPoly, OUParams};
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = OUParams> {
    (0.3f64..2.5, -3.0f64..3.0, 0.2f64..1.5).prop_map(|(r, w, s)| OUParams::new(r, w, s).unwrap())
}

fn arb_poly(max_degree: u32) -> impl Strategy<Value = ComplexPoly> {
    prop::collection::vec(((0..=max_degree), (0..=max_degree), -2.0f64..2.0, -2.0f64..2.0), 1..6).prop_map(
        move |terms| {
            let kept = terms
                .into_iter()
                .filter(|(p, q, _, _)| p + q <= max_degree)
                .map(|(p, q, re, im)| (p, q, Complex64::new(re, im)));
            ComplexPoly::from_terms(kept).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// P_t acting on a polynomial equals the diagonal action on its J-expansion.
    #[test]
    fn semigroup_is_diagonal_in_the_expansion(
        params in arb_params(),
        p in arb_poly(5),
        t in 0.05f64..1.0,
        x in (-1.5f64..1.5, -1.5f64..1.5),
    ) {
        let grid = build_grid(DEFAULT_NODES, params.rho()).unwrap();
        let e = expand(&p, 5, &grid).unwrap();
        let z = Complex64::new(x.0, x.1);
        let mut spectral_side = Complex64::new(0.0, 0.0);
        for (idx, &a) in e.coeffs() {
            let j = hlito(idx.m, idx.n, params.rho()).unwrap();
            spectral_side += (params.eigenvalue(idx.m, idx.n) * t).exp() * a * j.eval(z)
                / norm_sq(idx.m, idx.n, params.rho());
        }
        let direct = semigroup_apply(&p, t, [x.0, x.1], &params, &grid).unwrap();
        let scale = p.max_abs_coeff() * (1.0 + z.norm()).powi(5);
        prop_assert!((direct - spectral_side).norm() <= 1e-9 * scale);
    }

    /// The rotation commutes with the symmetric semigroup.
    #[test]
    fn rotation_intertwines_symmetric_semigroup(
        params in arb_params(),
        p in arb_poly(4),
        t in 0.05f64..2.0,
        x in (-1.5f64..1.5, -1.5f64..1.5),
    ) {
        let grid = build_grid(DEFAULT_NODES, params.rho()).unwrap();
        let (lhs, rhs) = symmetric_relation_check(&p, t, [x.0, x.1], &params, &grid).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * p.max_abs_coeff().max(lhs.norm()));
    }

    /// The kernel is a probability density against μ in its second argument.
    #[test]
    fn kernel_integrates_to_one(
        c in -2.0f64..2.0,
        rho in 0.5f64..2.0,
        u in 0.05f64..0.7,
        x in (-1.5f64..1.5, -1.5f64..1.5),
    ) {
        let params = OUParams::from_rho_c(rho, c).unwrap();
        let grid = build_grid(DEFAULT_NODES, rho).unwrap();
        let mass = grid.integrate(|y| {
            let pt = MehlerPoint::new(u, [x.0, x.1], y).unwrap();
            Complex64::new(mehler_kernel(&pt, &params).unwrap(), 0.0)
        });
        prop_assert!((mass - 1.0).norm() < 1e-10);
    }
}

#[test]
fn hermite_and_monomial_bases_agree() {
    let rho = 1.3;
    for l in 0..=6u32 {
        for m in 0..=l {
            let target = hlito(m, l - m, rho).unwrap();
            let via_hermite = beta_to_poly(&hermite_basis_of_j(m, l).unwrap(), l, rho).unwrap();
            let (_, residual) = via_hermite.proportional_to(&target).unwrap();
            assert!(residual < 1e-10, "m={m} l={l}");

            let mut rebuilt = ComplexPoly::zero();
            for (idx, a) in monomial_in_j_basis(m, l - m, rho).unwrap() {
                rebuilt = &rebuilt + &(&hlito(idx.m, idx.n, rho).unwrap() * a);
            }
            let monomial = ComplexPoly::monomial(m, l - m, Complex64::new(1.0, 0.0)).unwrap();
            // cancelled keys keep rounding residue since ρ is not integer-exact
            let scale = rebuilt.max_abs_coeff();
            assert!(rebuilt.max_coeff_delta(&monomial) <= 1e-12 * scale, "m={m} l={l}");
        }
    }
}

#[test]
fn stationary_ensemble_has_stationary_moments() {
    let params = OUParams::new(1.5, 2.0, 0.75).unwrap();
    let ens = sample_ou(&params, Start::Stationary, 0.2, 10, 40_000, 17).unwrap();
    for step in [0, 5, 10] {
        let states = ens.states_at(step);
        let second: f64 = states.iter().map(|z| z.norm_sqr()).sum::<f64>() / states.len() as f64;
        // E|Z|² = ρ under μ; the sample SE is ρ / sqrt(n)
        let se = params.rho() / (states.len() as f64).sqrt();
        assert!((second - params.rho()).abs() < 4.0 * se, "step {step}: {second}");
        assert!(ens.mean_at(step).within(Complex64::new(0.0, 0.0), 4.0));
    }
}
