use bellwalk::closed_form::amplitudes_closed;
use bellwalk::linalg::{eig_hermitian, mat_power, von_neumann_entropy, Matrix};
use bellwalk::measures::{probability_grid, reduced_spin_density, srd, Subsystem};
use bellwalk::{build_coin, build_coin_from_bell, simulate, CoinParams, SpinVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn spin_strategy() -> impl Strategy<Value = SpinVector> {
    prop::array::uniform8(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let amps = std::array::from_fn(|i| Complex64::new(v[2 * i], v[2 * i + 1]));
            SpinVector::new(amps).normalized().unwrap()
        })
}

fn params_strategy() -> impl Strategy<Value = CoinParams> {
    (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(x, y, z)| CoinParams::new(x, y, z).unwrap())
}

fn hermitian_strategy() -> impl Strategy<Value = Matrix> {
    prop::array::uniform16(-1.0f64..1.0).prop_map(|v| {
        let mut m = Matrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m.set(i, j, Complex64::new(v[4 * i + j], v[4 * j + i]));
            }
        }
        (m + m.adjoint()).scale(Complex64::new(0.5, 0.0))
    })
}

fn density_strategy() -> impl Strategy<Value = Matrix> {
    prop::collection::vec(spin_strategy(), 1..4).prop_map(|spins| {
        let mut m = Matrix::zeros(4);
        let w = 1.0 / spins.len() as f64;
        for s in &spins {
            let v: Vec<Complex64> = s.0.iter().map(|a| a * w.sqrt()).collect();
            m.add_outer(&v);
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn walk_preserves_norm(spin in spin_strategy(), params in params_strategy(), t in 0usize..60) {
        let state = simulate(&spin, &params, t).unwrap();
        prop_assert!((probability_grid(&state).total() - 1.0).abs() < 1e-12);
        prop_assert!(state.validate().is_ok());
    }

    #[test]
    fn coin_forms_agree(params in params_strategy()) {
        let a = build_coin(&params);
        let b = build_coin_from_bell(&params);
        prop_assert!(a.max_abs_diff(&b) < 1e-14);
        prop_assert!(a.unitarity_defect() < 1e-14);
    }

    #[test]
    fn closed_form_matches_recursion(spin in spin_strategy(), params in params_strategy(), t in 0usize..24) {
        let a = amplitudes_closed(&spin, &params, t).unwrap();
        let b = simulate(&spin, &params, t).unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
    }

    #[test]
    fn eigen_reconstructs(h in hermitian_strategy()) {
        let e = eig_hermitian(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-13);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let v = e.vectors;
        prop_assert!((v.adjoint() * v).max_abs_diff(&Matrix::identity(4)) < 1e-13);
    }

    #[test]
    fn power_round_trip(rho in density_strategy(), p in 0.1f64..3.0) {
        let back = mat_power(&mat_power(&rho, p).unwrap(), 1.0 / p).unwrap();
        prop_assert!(back.max_abs_diff(&rho) < 1e-9);
    }

    #[test]
    fn entropy_is_unitarily_invariant(rho in density_strategy(), h in hermitian_strategy()) {
        // U = eigenvectors of a random Hermitian matrix
        let u = eig_hermitian(&h).unwrap().vectors;
        let rotated = u * rho * u.adjoint();
        let rotated = (rotated + rotated.adjoint()).scale(Complex64::new(0.5, 0.0));
        let a = von_neumann_entropy(&rho).unwrap();
        let b = von_neumann_entropy(&rotated).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!((0.0..=4f64.ln() + 1e-12).contains(&a));
    }

    #[test]
    fn spin_entropies_bounded(spin in spin_strategy(), params in params_strategy(), t in 0usize..40) {
        let rho = reduced_spin_density(&simulate(&spin, &params, t).unwrap());
        let full = Subsystem::Spin.entropy(&rho).unwrap();
        prop_assert!((0.0..=4f64.ln() + 1e-12).contains(&full));
        for sub in [Subsystem::QubitA, Subsystem::QubitB] {
            let e = sub.entropy(&rho).unwrap();
            prop_assert!((0.0..=2f64.ln() + 1e-12).contains(&e));
        }
    }

    #[test]
    fn srd_of_state_with_itself_vanishes(rho in density_strategy(), alpha in 0.05f64..0.95) {
        // the sandwich holds each eigenvalue as λ^{1/α}; skip spectra whose
        // small end would sink into round-off there
        let values = eig_hermitian(&rho).unwrap().values;
        let top = values.iter().cloned().fold(0.0, f64::max);
        prop_assume!(values.iter().all(|&l| l < 1e-12 || (l / top).powf(1.0 / alpha) > 1e-6));
        let d = bellwalk::linalg::DensityMatrix::new(rho).unwrap();
        prop_assert!(srd(&d, &d, alpha).unwrap().abs() < 1e-10);
    }
}
