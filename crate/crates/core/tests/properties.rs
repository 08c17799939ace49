use std::sync::Arc;

use limitop::algebra::{convolve, i_norm, involution, reduced_norm, regular_representation, AlgebraElement};
use limitop::band::{
    laurent_symbol, limit_operator, BandOperatorZ, CoefficientSequence, DirectionSpec, LaurentSymbol, LimitConfig,
};
use limitop::crossed::crossed_product_defect;
use limitop::fredholm::{
    fredholm_report, toeplitz_index, truncation_kernel_oracle, winding_number, FredholmConfig, FredholmReport,
    TruncationInput, DEFAULT_RANK_TOL,
};
use limitop::gen::{
    complex, random_action, random_element, random_eventual_band, random_groupoid, random_invariant_units,
    random_separated_symbol, random_symbol,
};
use limitop::groupoid::{transformation_groupoid, FiniteGroupoid};
use limitop::invertibility::{exel_invertibility, main_theorem_check, Mode};
use limitop::linalg::CMatrix;
use limitop::section::{equivariance_defect, lambda_section, propagation, BoundaryDecomposition};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 1 << 12;

fn setup(seed: u64) -> (ChaCha8Rng, Arc<FiniteGroupoid>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Arc::new(random_groupoid(&mut rng, 30, 3));
    (rng, g)
}

fn elem(rng: &mut ChaCha8Rng, g: &Arc<FiniteGroupoid>) -> AlgebraElement {
    let d = rng.gen_range(0.2..1.0);
    random_element(rng, g, d)
}

fn dist(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn mat_dist(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The report minus its finite-section evidence.
fn limit_part(r: &FredholmReport) -> FredholmReport {
    FredholmReport {
        evidence: vec![],
        ..r.clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_is_associative(seed in any::<u64>()) {
        let (mut rng, g) = setup(seed);
        let (a, b, c) = (elem(&mut rng, &g), elem(&mut rng, &g), elem(&mut rng, &g));
        let left = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
        let right = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
        prop_assert!(dist(&left, &right) < 1e-12 * (1.0 + i_norm(&a) * i_norm(&b) * i_norm(&c)));
    }

    #[test]
    fn involution_laws(seed in any::<u64>()) {
        let (mut rng, g) = setup(seed);
        let (a, b) = (elem(&mut rng, &g), elem(&mut rng, &g));
        prop_assert_eq!(involution(&involution(&a)), a.clone());
        let lhs = involution(&convolve(&a, &b).unwrap());
        let rhs = convolve(&involution(&b), &involution(&a)).unwrap();
        prop_assert!(dist(&lhs, &rhs) < 1e-12);
        let z = complex(&mut rng);
        prop_assert!(dist(&involution(&a.scale(z)), &involution(&a).scale(z.conj())) < 1e-15);
    }

    #[test]
    fn regular_representation_is_a_star_homomorphism(seed in any::<u64>()) {
        let (mut rng, g) = setup(seed);
        let (a, b) = (elem(&mut rng, &g), elem(&mut rng, &g));
        let ab = convolve(&a, &b).unwrap();
        for x in g.units() {
            let la = regular_representation(&a, x).unwrap().matrix;
            let lb = regular_representation(&b, x).unwrap().matrix;
            let lab = regular_representation(&ab, x).unwrap().matrix;
            prop_assert!(mat_dist(&lab, &(&la * &lb)) < 1e-12);
            let lstar = regular_representation(&involution(&a), x).unwrap().matrix;
            prop_assert!(mat_dist(&lstar, &la.adjoint()) == 0.0);
        }
    }

    #[test]
    fn norms_are_ordered_and_c_star(seed in any::<u64>()) {
        let (mut rng, g) = setup(seed);
        let a = elem(&mut rng, &g);
        let r = reduced_norm(&a);
        prop_assert!(r <= i_norm(&a) * (1.0 + 1e-12) + 1e-12);
        let sq = reduced_norm(&convolve(&involution(&a), &a).unwrap());
        prop_assert!((sq - r * r).abs() <= 1e-10 * (r * r).max(1.0));
    }

    #[test]
    fn lambda_sections_are_equivariant_with_propagation_the_support(seed in any::<u64>()) {
        let (mut rng, g) = setup(seed);
        let a = elem(&mut rng, &g);
        let s = lambda_section(&a);
        prop_assert!(equivariance_defect(&s) <= 1e-12);
        prop_assert_eq!(propagation(&s), a.support());
    }

    #[test]
    fn exel_verdict_matches_direct_fibres(seed in any::<u64>()) {
        let (mut rng, g) = setup(seed);
        let a = elem(&mut rng, &g);
        let report = exel_invertibility(&a, Mode::Unitized);
        let direct = g.units().all(|x| {
            let m = regular_representation(&a, x).unwrap().matrix;
            let n = m.nrows();
            (m + CMatrix::identity(n, n)).singular_values().min() > 1e-10
        });
        prop_assert_eq!(report.verdict, direct);
    }

    #[test]
    fn main_theorem_conditions_agree(seed in any::<u64>()) {
        let (mut rng, g) = setup(seed);
        let boundary = random_invariant_units(&mut rng, &g);
        let d = BoundaryDecomposition::new(&g, &boundary).unwrap();
        let a = elem(&mut rng, &g);
        let (report, cert) = main_theorem_check(&a, &d).unwrap();
        let c = report.conditions.unwrap();
        prop_assert!(c.all_agree());
        prop_assert_eq!(cert.is_some(), c.c1);
    }

    #[test]
    fn crossed_product_matches_conjugated_regular_rep(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let act = random_action(&mut rng, 6, 6);
        let g = Arc::new(transformation_groupoid(&act));
        let a = elem(&mut rng, &g);
        for w in 0..act.num_points() {
            prop_assert!(crossed_product_defect(&act, &a, w).unwrap() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn band_entries_follow_shift_and_adjoint(seed in any::<u64>(), g in -20i64..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_eventual_band(&mut rng, 3, 4, 0.0);
        let s = t.shift_conjugate(g);
        let a = t.adjoint();
        for x in -12..12 {
            for y in -12..12 {
                prop_assert_eq!(s.entry(x, y), t.entry(x + g, y + g));
                prop_assert_eq!(a.entry(x, y), t.entry(y, x).conj());
            }
        }
    }

    #[test]
    fn eventual_entries_equal_the_limits(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_eventual_band(&mut rng, 3, 4, 0.0);
        let cfg = LimitConfig::default();
        let plus = limit_operator(&t, &DirectionSpec::PlusInfinity, &cfg).unwrap();
        let minus = limit_operator(&t, &DirectionSpec::MinusInfinity, &cfg).unwrap();
        let w = t.width() as i64;
        for m in -w..=w {
            for n in [5i64, 17, 1000] {
                prop_assert_eq!(t.entry(n + m, n), plus.coeff(m));
                prop_assert_eq!(t.entry(-n + m, -n), minus.coeff(m));
            }
        }
    }

    #[test]
    fn limits_are_shift_invariant_and_respect_adjoints(seed in any::<u64>(), g in -50i64..50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_eventual_band(&mut rng, 3, 4, 0.0);
        let cfg = LimitConfig::default();
        for dir in [DirectionSpec::PlusInfinity, DirectionSpec::MinusInfinity] {
            let base = limit_operator(&t, &dir, &cfg).unwrap();
            prop_assert_eq!(&limit_operator(&t.shift_conjugate(g), &dir, &cfg).unwrap(), &base);
            prop_assert_eq!(limit_operator(&t.adjoint(), &dir, &cfg).unwrap(), base.adjoint());
        }
    }

    #[test]
    fn winding_is_additive_and_flips_under_adjoint(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d1 = rng.gen_range(0..=3);
        let d2 = rng.gen_range(0..=3);
        let s1 = random_symbol(&mut rng, d1, 0.05);
        let s2 = random_symbol(&mut rng, d2, 0.05);
        let w1 = winding_number(&s1, N).unwrap();
        let w2 = winding_number(&s2, N).unwrap();
        prop_assert_eq!(winding_number(&s1.product(&s2), 4 * N).unwrap(), w1 + w2);
        prop_assert_eq!(winding_number(&s1.adjoint(), N).unwrap(), -w1);
    }

    #[test]
    fn finite_perturbations_leave_the_shift_report_alone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<(i64, Complex64)> = (0..rng.gen_range(1..6))
            .map(|_| (rng.gen_range(-30..30), complex(&mut rng)))
            .collect();
        let m = rng.gen_range(-2i64..=2);
        let p = BandOperatorZ::new(2, [(m, CoefficientSequence::finite(entries))]).unwrap();
        let v = BandOperatorZ::shift();
        let cfg = FredholmConfig { sizes: vec![20], ..FredholmConfig::default() };
        let base = fredholm_report(&v, &cfg).unwrap();
        let moved = fredholm_report(&v.add(&p).unwrap(), &cfg).unwrap();
        prop_assert_eq!(limit_part(&moved), limit_part(&base));
        prop_assert_eq!(base.index, Some(0));
    }
}

#[test]
fn monomial_windings() {
    for k in -3..=3 {
        assert_eq!(winding_number(&LaurentSymbol::monomial(k), N).unwrap(), k);
        assert_eq!(winding_number(&LaurentSymbol::monomial(k).adjoint(), N).unwrap(), -k);
    }
}

#[test]
fn toeplitz_index_matches_truncations_on_random_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let d = rng.gen_range(1..=3);
        let s = random_separated_symbol(&mut rng, d, 0.1);
        let (ker, coker) = truncation_kernel_oracle(TruncationInput::Toeplitz(&s), 400, DEFAULT_RANK_TOL);
        assert_eq!(toeplitz_index(&s).unwrap(), ker as i64 - coker as i64, "{s:?}");
    }
}

#[test]
fn limit_symbol_of_a_laurent_operator_is_itself() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let s = random_symbol(&mut rng, 2, 0.0);
    let t = limitop::band::LaurentOperator::new(s.coeffs().iter().map(|(&m, &c)| (m, c))).to_band();
    let l = limit_operator(&t, &DirectionSpec::PlusInfinity, &LimitConfig::default()).unwrap();
    assert_eq!(laurent_symbol(&l), s);
}
