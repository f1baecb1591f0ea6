use num_complex::Complex64 as C64;
use otto_engine::channels::{amplitude_damping, random_hermitian, random_unitary};
use otto_engine::linalg::{inner, jacobi_eigh};
use otto_engine::quantum::boltzmann_populations;
use otto_engine::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_operator(dim: usize, seed: u64) -> HermitianOperator {
    hermitian_eigensystem(&random_hermitian(dim, &mut rng(seed))).unwrap()
}

fn random_passive(h: &HermitianOperator, r: &mut impl Rng) -> (Vec<f64>, DensityMatrix) {
    let mut p: Vec<f64> = (0..h.dim()).map(|_| r.gen::<f64>() + 1e-3).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    p.sort_by(|a, b| b.total_cmp(a));
    let rho = DensityMatrix::from_populations(&p, h.eigenvectors()).unwrap();
    (p, rho)
}

fn random_projective(dim: usize, r: &mut impl Rng) -> KrausChannel {
    let u = random_unitary(dim, r).unwrap();
    let basis: Vec<_> = (0..dim).map(|j| u.column(j)).collect();
    KrausChannel::projective(&basis).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigensystem_reconstructs_operator(dim in 1usize..=6, seed in any::<u64>()) {
        let m = random_hermitian(dim, &mut rng(seed));
        let (vals, vecs) = jacobi_eigh(&m).unwrap();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for (k, &val) in vals.iter().enumerate() {
            let v = vecs.column(k);
            for (mv, vi) in m.mul_vec(&v).iter().zip(&v) {
                prop_assert!((mv - vi * val).norm() <= 1e-10);
            }
            for l in 0..dim {
                let target = if k == l { 1.0 } else { 0.0 };
                prop_assert!((inner(&v, &vecs.column(l)) - C64::new(target, 0.0)).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn gibbs_states_are_passive_and_cool_with_beta(
        dim in 2usize..=5,
        seed in any::<u64>(),
        b1 in 0.01f64..5.0,
        db in 0.0f64..5.0,
    ) {
        let h = random_operator(dim, seed);
        let rho1 = gibbs_state(&h, BathSpec::new(b1).unwrap());
        let rho2 = gibbs_state(&h, BathSpec::new(b1 + db).unwrap());
        let pops = populations_in_basis(&rho1, &h).unwrap();
        prop_assert!((rho1.trace() - 1.0).abs() <= 1e-12);
        prop_assert!(is_passive(&pops, h.eigenvalues()).unwrap());
        let u1 = energy_expectation(&rho1, &h).unwrap();
        let u2 = energy_expectation(&rho2, &h).unwrap();
        prop_assert!(u2 <= u1 + 1e-12);
    }

    #[test]
    fn passive_states_minimise_energy_over_rearrangements(dim in 2usize..=5, seed in any::<u64>()) {
        let h = random_operator(dim, seed);
        let (p, rho) = random_passive(&h, &mut rng(seed ^ 0x5eed));
        let oracle = rearrangement_oracle(&p, h.eigenvalues()).unwrap();
        prop_assert!((energy_expectation(&rho, &h).unwrap() - oracle).abs() <= 1e-10);
    }

    #[test]
    fn transfer_matrix_reproduces_channel(dim in 2usize..=4, seed in any::<u64>(), kind in 0u8..3) {
        let mut r = rng(seed);
        let h = random_operator(dim, seed.wrapping_add(1));
        let ch = match kind {
            0 => channels::random_unital_channel_with(dim, r.gen_range(1..4), &mut r).unwrap(),
            1 => random_projective(dim, &mut r),
            _ => amplitude_damping(h.eigenvectors(), r.gen_range(0.05..0.95)).unwrap(),
        };
        let t = transfer_matrix(&ch, &h).unwrap();
        prop_assert!(t.is_column_stochastic());
        prop_assert_eq!(t.is_bistochastic(), is_unital(&ch));
        if is_minimally_disturbing(&ch) {
            prop_assert!(is_unital(&ch));
        }
        let (p, rho) = random_passive(&h, &mut r);
        let direct = populations_in_basis(&apply_channel(&ch, &rho).unwrap(), &h).unwrap();
        for (a, b) in t.apply(&p).unwrap().iter().zip(&direct) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn projective_measurements_are_minimally_disturbing(dim in 2usize..=4, seed in any::<u64>()) {
        let ch = random_projective(dim, &mut rng(seed));
        prop_assert!(is_minimally_disturbing(&ch));
        prop_assert!(is_unital(&ch));
    }

    #[test]
    fn labelled_spectrum_agrees_with_eigensolver(
        kind in 0u8..3,
        b in 0.05f64..6.0,
        j in 0.0f64..4.0,
        jz in -2.0f64..2.0,
    ) {
        let spec = match kind {
            0 => SubstanceSpec::Qubit,
            1 => SubstanceSpec::Qutrit { j },
            _ => SubstanceSpec::Xxz { jxy: j, jz },
        };
        let spectrum = labelled_spectrum(&spec, b).unwrap();
        let h = build_hamiltonian(&spec, b).unwrap();
        let mut analytic = spectrum.energies();
        analytic.sort_by(f64::total_cmp);
        for (a, e) in analytic.iter().zip(h.eigenvalues()) {
            prop_assert!((a - e).abs() <= 1e-10);
        }
        for level in &spectrum.levels {
            let hv = h.matrix().mul_vec(&level.state);
            for (x, v) in hv.iter().zip(&level.state) {
                prop_assert!((x - v * level.energy).norm() <= 1e-10);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn unital_channels_never_lower_passive_energy(
        dim in 2usize..=4,
        seed in any::<u64>(),
        projective in any::<bool>(),
        gibbs in any::<bool>(),
        beta in 0.05f64..5.0,
    ) {
        let mut r = rng(seed);
        let h = random_operator(dim, seed.rotate_left(17));
        let rho = if gibbs {
            gibbs_state(&h, BathSpec::new(beta).unwrap())
        } else {
            random_passive(&h, &mut r).1
        };
        let ch = if projective {
            random_projective(dim, &mut r)
        } else {
            channels::random_unital_channel_with(dim, r.gen_range(1..5), &mut r).unwrap()
        };
        prop_assert!(energy_change(&ch, &rho, &h).unwrap() >= -1e-10);
    }
}

fn spec_strategy() -> impl Strategy<Value = SubstanceSpec> {
    prop_oneof![
        Just(SubstanceSpec::Qubit),
        (0.0f64..4.0).prop_map(|j| SubstanceSpec::Qutrit { j }),
        (0.0f64..2.0, -1.5f64..1.5).prop_map(|(jxy, jz)| SubstanceSpec::Xxz { jxy, jz }),
    ]
}

fn channel_for(spec: &SubstanceSpec, r: &mut impl Rng) -> KrausChannel {
    match spec {
        SubstanceSpec::Qutrit { .. } => {
            let mut a = || r.gen_range(0.0..std::f64::consts::TAU);
            su3_projective_channel(&Su3Angles::new(a(), a(), a(), a()).unwrap()).unwrap()
        }
        SubstanceSpec::Xxz { .. } => {
            let mut dir = || {
                let v: [f64; 3] = rand_distr::Distribution::sample(&rand_distr::UnitSphere, r);
                SpinDirection::new(v[0], v[1], v[2]).unwrap()
            };
            local_spin_channel(&dir(), &dir()).unwrap()
        }
        SubstanceSpec::Qubit => random_projective(2, r),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cycle_conserves_energy(
        spec in spec_strategy(),
        bi in 0.2f64..4.0,
        gap in 0.1f64..3.0,
        beta_c in 0.1f64..5.0,
        beta_h in 0.05f64..5.0,
        measured in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let bf = bi + gap;
        let cfg = if measured {
            let ch = channel_for(&spec, &mut rng(seed));
            CycleConfig::measurement(spec, bi, bf, beta_c, ch).unwrap()
        } else {
            CycleConfig::two_bath(spec, bi, bf, beta_c, beta_h).unwrap()
        };
        let rec = run_cycle(&cfg).unwrap();
        prop_assert!((rec.w + rec.qh + rec.qc).abs() <= 1e-12);
        let dp: f64 = rec.levels.iter().map(|l| l.delta_p).sum();
        prop_assert!(dp.abs() <= 1e-12);
        let work: f64 = rec.levels.iter().map(|l| -(l.energy_hot - l.energy_cold) * l.delta_p).sum();
        prop_assert!((work - rec.w).abs() <= 1e-12);
        for l in rec.levels.iter().filter(|l| l.idle) {
            prop_assert!((l.q_hot + l.q_cold).abs() <= 1e-12);
        }
        prop_assert_eq!(rec.eta.is_some(), rec.engine_mode);
        if rec.engine_mode && rec.qh > 1e-3 {
            let ratio = efficiency_ratio_identity(&rec).unwrap();
            prop_assert!((rec.eta.unwrap() / rec.eta0 - ratio).abs() <= 1e-10);
        }
        if !measured {
            let p_hot = boltzmann_populations(
                &labelled_spectrum(&spec, bf).unwrap().energies(),
                BathSpec::new(beta_h).unwrap(),
            );
            for (l, p) in rec.levels.iter().zip(&p_hot) {
                prop_assert_eq!(l.p_hot, *p);
            }
        }
    }
}
