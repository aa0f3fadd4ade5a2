use jordan_kepler::blowup::{
    chart_inverse, metric_curvature, sigma_c, theta_c, ChartPoint, SingularModule,
};
use jordan_kepler::jordan::{
    bergman_apply, bergman_apply_expanded, bergman_det, delta, haar_unitary, pseudo_inverse,
    pseudo_inverse_residuals, random_element, random_rank_element, random_tripotent_with,
    seeded_rng, with_spectral_norm, Peirce, SeededRng, TripleElement, TripleSpace,
};
use jordan_kepler::kernel::{kernel_eval, truncated_kernel_eval, CoefficientSequence, KernelSpec};
use jordan_kepler::partition::{
    dim_p_mu_shape, enumerate_partitions, fock_component, log_gamma_lambda_at, pochhammer,
    Partition,
};
use jordan_kepler::radial::RadialMeasure;
use num_complex::Complex64;
use proptest::prelude::*;

const SPACES: [(usize, usize, usize); 3] = [(2, 3, 1), (1, 4, 1), (3, 4, 2)];

fn space_strategy() -> impl Strategy<Value = TripleSpace> {
    prop::sample::select(SPACES.to_vec()).prop_map(|(r, s, l)| TripleSpace::new(r, s, l).unwrap())
}

fn partition_strategy(len: usize, max_part: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, len).prop_map(|v| {
        let mut v = v;
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn pair(space: &TripleSpace, norm: f64, rng: &mut SeededRng) -> (TripleElement, TripleElement) {
    let z = with_spectral_norm(&random_element(space.r(), space.s(), rng), norm);
    let w = with_spectral_norm(&random_element(space.r(), space.s(), rng), norm);
    (z, w)
}

fn chart_point(space: &TripleSpace, rng: &mut SeededRng) -> ChartPoint {
    let c = random_tripotent_with(space.r(), space.s(), space.lambda(), rng).unwrap();
    let s = with_spectral_norm(&random_element(space.r(), space.s(), rng), 0.45);
    let t = with_spectral_norm(&random_element(space.r(), space.s(), rng), 0.4);
    ChartPoint::projected(c, &s, &t).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bergman_determinant_is_delta_power(space in space_strategy(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let (z, w) = pair(&space, 0.9, &mut rng);
        let det = bergman_det(&z, &w).unwrap();
        let power = delta(&z, &w).unwrap().powi(space.genus() as i32);
        prop_assert!(rel(det, power) < 1e-10);
        let v = random_element(space.r(), space.s(), &mut rng);
        let lhs = bergman_apply(&z, &w, &v).unwrap();
        let rhs = bergman_apply_expanded(&z, &w, &v).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn peirce_projections_are_complementary(space in space_strategy(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let c = random_tripotent_with(space.r(), space.s(), space.lambda(), &mut rng).unwrap();
        let v = random_element(space.r(), space.s(), &mut rng);
        let parts = c.decompose(&v).unwrap();
        let total = &(&parts[0] + &parts[1]) + &parts[2];
        prop_assert!(total.max_abs_diff(&v) < 1e-12);
        for (i, k) in [Peirce::Zero, Peirce::One, Peirce::Two].into_iter().enumerate() {
            for (j, x) in parts.iter().enumerate() {
                let p = c.project(x, k).unwrap();
                let expected = if i == j { x.clone() } else { TripleElement::zeros(space.r(), space.s()) };
                prop_assert!(p.max_abs_diff(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn pseudo_inverse_identities(space in space_strategy(), k in 1usize..=3, seed in any::<u64>()) {
        let k = k.min(space.r());
        let mut rng = seeded_rng(seed);
        let z = random_rank_element(space.r(), space.s(), k, &mut rng);
        let zt = pseudo_inverse(&z).unwrap();
        let probe = random_element(space.r(), space.s(), &mut rng);
        let res = pseudo_inverse_residuals(&z, &zt, &probe).unwrap();
        let scale = z.norm().max(zt.norm()).powi(3);
        prop_assert!(res.iter().all(|r| *r < 1e-10 * scale), "{res:?}");
    }

    #[test]
    fn jordan_determinant_is_frame_independent(space in space_strategy(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let c = random_tripotent_with(space.r(), space.s(), space.lambda(), &mut rng).unwrap();
        let x = c.project(&random_element(space.r(), space.s(), &mut rng), Peirce::Two).unwrap();
        // a unitary acting inside the frame of c leaves c fixed
        let l = space.lambda();
        let g = haar_unitary(l, &mut rng);
        let mut u = c.frame_left().clone();
        let mut w = c.frame_right().clone();
        let ul = u.columns(0, l) * &g;
        let wl = w.columns(0, l) * &g;
        u.columns_mut(0, l).copy_from(&ul);
        w.columns_mut(0, l).copy_from(&wl);
        let other = c.reframed(u, w).unwrap();
        prop_assert!(other.element().max_abs_diff(c.element()) < 1e-12);
        prop_assert!(rel(c.jordan_det(&x).unwrap(), other.jordan_det(&x).unwrap()) < 1e-10);
        prop_assert!((c.jordan_det(c.element()).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn fock_components_are_conjugate_symmetric(space in space_strategy(), mu in partition_strategy(2, 3), seed in any::<u64>()) {
        let mu = Partition::new(mu.parts().iter().take(space.r()).copied().collect()).unwrap();
        let mut rng = seeded_rng(seed);
        let (z, w) = pair(&space, 0.8, &mut rng);
        let a = fock_component(&mu, &z, &w).unwrap();
        let b = fock_component(&mu, &w, &z).unwrap().conj();
        prop_assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn fock_components_are_k_invariant(space in space_strategy(), mu in partition_strategy(2, 3), seed in any::<u64>()) {
        let mu = Partition::new(mu.parts().iter().take(space.r()).copied().collect()).unwrap();
        let mut rng = seeded_rng(seed);
        let (z, w) = pair(&space, 0.8, &mut rng);
        let u = haar_unitary(space.r(), &mut rng);
        let v = haar_unitary(space.s(), &mut rng);
        let kz = TripleElement::new(&u * z.matrix() * &v);
        let kw = TripleElement::new(&u * w.matrix() * &v);
        let a = fock_component(&mu, &z, &w).unwrap();
        let b = fock_component(&mu, &kz, &kw).unwrap();
        prop_assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn pochhammer_shift_and_gamma_ratio(nu in 2.5f64..20.0, lambda in 1usize..=3, mu in partition_strategy(3, 4)) {
        let mu = Partition::new(mu.parts().iter().take(lambda).copied().collect()).unwrap();
        let a = 2.0;
        let one = Partition::rectangle(1, lambda);
        let shifted = mu.shifted(1, lambda).unwrap();
        let lhs = pochhammer(nu, &shifted, a);
        let rhs = pochhammer(nu + 1.0, &mu, a) * pochhammer(nu, &one, a);
        prop_assert!((lhs - rhs).abs() < 1e-12 * lhs.abs());

        let ratio = (log_gamma_lambda_at(nu, &mu, lambda, a).unwrap()
            - log_gamma_lambda_at(nu, &Partition::empty(), lambda, a).unwrap())
        .exp();
        let direct = pochhammer(nu, &mu, a);
        prop_assert!((ratio - direct).abs() < 1e-10 * direct.abs());
    }

    #[test]
    fn dimension_ratio_against_peirce_space(space in space_strategy(), mu in partition_strategy(2, 4)) {
        let (r, s, l) = (space.r(), space.s(), space.lambda());
        let mu = Partition::new(mu.parts().iter().take(l).copied().collect()).unwrap();
        let full = dim_p_mu_shape(r, s, &mu).unwrap() as f64;
        let sub = dim_p_mu_shape(l, l, &mu).unwrap() as f64;
        let a = 2.0;
        let predicted = pochhammer(s as f64, &mu, a) / pochhammer(l as f64, &mu, a)
            * pochhammer(r as f64, &mu, a) / pochhammer(l as f64, &mu, a);
        prop_assert!((full / sub - predicted).abs() < 1e-10 * predicted);
    }

    #[test]
    fn square_shift_lemma(n in 1usize..=3, mu in partition_strategy(3, 3), seed in any::<u64>()) {
        let mu = Partition::new(mu.parts().iter().take(n).copied().collect()).unwrap();
        let mut rng = seeded_rng(seed);
        let z = with_spectral_norm(&random_element(n, n, &mut rng), 0.9);
        let w = with_spectral_norm(&random_element(n, n, &mut rng), 0.9);
        let shifted = mu.shifted(1, n).unwrap();
        let lhs = fock_component(&shifted, &z, &w).unwrap();
        let d = n as f64;
        let factor = pochhammer(d, &mu, 2.0) / pochhammer(d, &shifted, 2.0);
        let rhs = z.matrix().determinant() * w.matrix().determinant().conj() * fock_component(&mu, &z, &w).unwrap() * factor;
        prop_assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1e-12), "{lhs} vs {rhs}");
    }

    #[test]
    fn nu_moment_ratios(d in 1usize..6, nu_excess in 0.5f64..10.0, m in 0usize..10) {
        let space = TripleSpace::ball(d.max(2)).unwrap();
        let nu = space.d_lambda() + nu_excess;
        let measure = RadialMeasure::nu(nu);
        let rho = |k: usize| measure.moment(&space, &Partition::new(vec![k]).unwrap()).unwrap();
        let expected = (space.d_lambda() + m as f64) / (nu + m as f64);
        prop_assert!((rho(m + 1) / rho(m) - expected).abs() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_is_positive_and_hermitian(seed in any::<u64>(), nu in 5.5f64..12.0, hardy in any::<bool>()) {
        let space = TripleSpace::new(2, 3, 1).unwrap();
        let coeffs = if hardy { CoefficientSequence::hardy() } else { CoefficientSequence::nu_rule(nu) };
        let spec = KernelSpec::new(space, coeffs, 10, 0).unwrap();
        let mut rng = seeded_rng(seed);
        let z = with_spectral_norm(&random_rank_element(2, 3, 1, &mut rng), 0.7);
        let w = with_spectral_norm(&random_rank_element(2, 3, 1, &mut rng), 0.7);
        let kzz = kernel_eval(&spec, &z, &z).unwrap().value;
        prop_assert!(kzz.re >= 1.0 && kzz.im.abs() < 1e-12 * kzz.re);
        let a = kernel_eval(&spec, &z, &w).unwrap().value;
        let b = kernel_eval(&spec, &w, &z).unwrap().value.conj();
        prop_assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn truncated_kernel_vanishes_below_rank(seed in any::<u64>()) {
        let space = TripleSpace::new(3, 4, 2).unwrap();
        let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(8.0), 8, 1).unwrap();
        let mut rng = seeded_rng(seed);
        let z = with_spectral_norm(&random_rank_element(3, 4, 2, &mut rng), 0.6);
        let w = with_spectral_norm(&random_rank_element(3, 4, 1, &mut rng), 0.6);
        prop_assert!(truncated_kernel_eval(&spec, &z, &w).unwrap().value.norm() < 1e-12);
    }

    #[test]
    fn chart_round_trip_and_consistency(space in space_strategy(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let point = chart_point(&space, &mut rng);
        let w = sigma_c(&point);
        let back = chart_inverse(&point.c, &w).unwrap();
        prop_assert!(back.s.max_abs_diff(&point.s) < 1e-10);
        prop_assert!(back.t.max_abs_diff(&point.t) < 1e-10);

        let theta = theta_c(&point).unwrap();
        let probe = random_element(space.r(), space.s(), &mut rng);
        let res = pseudo_inverse_residuals(&theta.z, &theta.z_tilde, &probe).unwrap();
        let scale = theta.z.norm().max(theta.z_tilde.norm()).powi(3) * probe.norm();
        prop_assert!(res.iter().all(|r| *r < 1e-10 * scale), "{res:?}");

        // K̃(w,w) through the factorization of a second chart
        let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(space.genus() as f64 + 2.0), 8 + space.lambda(), 1).unwrap();
        let module = SingularModule::new(&spec).unwrap();
        let other = random_tripotent_with(space.r(), space.s(), space.lambda(), &mut rng).unwrap();
        if let Ok(p2) = chart_inverse(&other, &w) {
            let a = module.prop_h(&point).unwrap().rhs;
            let b = module.prop_h(&p2).unwrap().rhs;
            prop_assert!(rel(a, b) < 1e-9, "{a} vs {b}");
        }
    }
}

#[test]
fn curvature_of_submodule_metric_is_hermitian() {
    let space = TripleSpace::new(2, 3, 1).unwrap();
    let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(6.0), 14, 1).unwrap();
    let module = SingularModule::new(&spec).unwrap();
    let mut rng = seeded_rng(29);
    for _ in 0..3 {
        let point = chart_point(&space, &mut rng);
        let report = metric_curvature(&module, &point, 1e-3).unwrap();
        assert!(
            report.hermitian_defect < 1e-8,
            "{}",
            report.hermitian_defect
        );
        assert_eq!(report.matrix.nrows(), point.dim());
    }
}

#[test]
fn enumerated_partitions_are_graded() {
    let parts = enumerate_partitions(2, 6);
    assert!(parts.windows(2).all(|w| w[0].weight() <= w[1].weight()));
    assert_eq!(parts.len(), 16);
}
