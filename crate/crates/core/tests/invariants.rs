use fkdv::galileo::{is_single_lobe, phase_align, ZeroMeanWave};
use fkdv::solvers::{continue_branch, petviashvili_report, SolverConfig};
use fkdv::special::{bo_exact, kdv_exact};
use fkdv::stability::{b_prime_series, dx_l_spectrum, predicted_counts, range_residuals};
use fkdv::{FourierGrid, NormalizedWave, PeriodicField};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn galilean_map_round_trips(gamma in 0.6f64..3.0, n in prop::sample::select(vec![128usize, 256])) {
        let grid = FourierGrid::new(n).unwrap();
        let e = bo_exact(gamma, &grid).unwrap();
        let w = NormalizedWave::new(1.0, e.omega, e.phi.clone());
        let z = w.to_zero_mean().unwrap();
        prop_assert!((z.c - e.c).abs() < 1e-12 * e.c.abs().max(1.0));
        prop_assert!((z.b - e.b).abs() < 1e-12 * e.b.max(1.0));
        prop_assert!(z.psi.mean().abs() < 1e-13);
        let back = z.to_normalized().unwrap();
        prop_assert!((back.omega - e.omega).abs() < 1e-12 * e.omega);
        prop_assert!(back.phi.sub(&e.phi).unwrap().max_abs() < 1e-12 * e.omega);
        prop_assert!((z.omega().unwrap().powi(2) - (z.c * z.c + 4.0 * z.b)).abs() < 1e-12 * e.omega * e.omega);
    }

    #[test]
    fn cnoidal_waves_satisfy_both_forms(k in 0.05f64..0.9) {
        let grid = FourierGrid::new(256).unwrap();
        let e = kdv_exact(k, &grid).unwrap();
        let w = NormalizedWave::new(2.0, e.omega, e.phi.clone());
        prop_assert!(w.residual() < 1e-9 * e.omega * e.omega);
        let z = w.to_zero_mean().unwrap();
        prop_assert!(z.residual() < 1e-9 * e.omega * e.omega);
        prop_assert!((z.c - e.c).abs() < 1e-10 * e.c.abs().max(1.0));
        prop_assert!(is_single_lobe(&z.psi));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn branch_points_satisfy_the_structure_identities(alpha in 0.6f64..2.0, c in -0.8f64..1.0) {
        let cfg = SolverConfig::default();
        let br = continue_branch(alpha, (c, c), &cfg).unwrap();
        prop_assert!(br.is_complete());
        let p = &br.points[0];
        p.validate(cfg.residual_tol).unwrap();
        prop_assert!((p.c - c).abs() < 1e-15);
        prop_assert!(p.b > 0.0 && p.b_prime > 0.0);
        prop_assert_eq!((p.n_neg, p.z_zero), predicted_counts(p.c_plus_2bprime, 1e-4));
        prop_assert_eq!(p.doubling_consistent, Some(true));
        prop_assert!((p.gamma_prime_fd - 3.0 * p.b).abs() < 1e-3 * 3.0 * p.b);
        prop_assert!((p.b_prime_fd - p.b_prime).abs() < 1e-4);
        prop_assert!((p.omega.powi(2) - (c * c + 4.0 * p.b)).abs() < 1e-12 * p.omega.powi(2));

        let grid = p.psi.natural_grid();
        let field = p.psi.to_field(&grid);
        prop_assert!(is_single_lobe(&field));
        let bp = b_prime_series(alpha, c, &p.psi, None, false).unwrap();
        let r = range_residuals(alpha, c, &p.psi, &bp.dc_psi, bp.value).unwrap();
        prop_assert!(r.iter().all(|&x| x < 1e-6), "{:?}", r);
        let spec = dx_l_spectrum(alpha, c, &p.psi, p.stability_modes).unwrap();
        prop_assert!(spec[0].re < 1e-6);

        let z = ZeroMeanWave::from_psi(alpha, c, field);
        let w = z.to_normalized().unwrap();
        let amp = w.phi.project_zero_mean().max_abs();
        let bump = PeriodicField::from_fn(&grid, |x| 0.05 * amp * (2.0 * x).cos());
        let seed = NormalizedWave::new(alpha, w.omega, w.phi.scale(1.1).add(&bump).unwrap());
        match petviashvili_report(alpha, w.omega, &seed, &cfg) {
            Ok(rep) => {
                prop_assert!((rep.factor - 1.0).abs() < 1e-10);
                prop_assert!(phase_align(&rep.wave.phi).sub(&w.phi).unwrap().max_abs() < 1e-8);
            }
            Err(e) => prop_assert!(false, "petviashvili at alpha {alpha}, c {c}: {e}"),
        }
    }
}
