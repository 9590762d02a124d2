//! Property tests for the algebraic invariants: character group laws,
//! transform round-trips, serialization stability and the loss identities.

use proptest::prelude::*;

use juntas::cube::{binomial, chi_eval, enumerate_subsets, CubePoint, EnumMode, SubsetMask};
use juntas::dataset::Dataset;
use juntas::dist::JointDistribution;
use juntas::fourier::{inverse_fourier, uniform_fourier};
use juntas::oracle::exact_loss;
use juntas::regression::{model_from_json, model_to_json, u_poly, Predictor, SparsePolynomial};

fn dim_and_masks() -> impl Strategy<Value = (usize, u32, u32, u32)> {
    (1usize..=10).prop_flat_map(|d| {
        let top = 1u32 << d;
        (Just(d), 0..top, 0..top, 0..top)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chi_is_a_group_character((d, s_bits, t_bits, x_bits) in dim_and_masks()) {
        let s = SubsetMask::new(s_bits, d).unwrap();
        let t = SubsetMask::new(t_bits, d).unwrap();
        let x = CubePoint::new(x_bits, d).unwrap();
        let st = s.sym_diff(t).unwrap();
        let lhs = chi_eval(s, x).unwrap() as i32 * chi_eval(t, x).unwrap() as i32;
        prop_assert_eq!(lhs, chi_eval(st, x).unwrap() as i32);
    }

    #[test]
    fn chi_equals_coordinate_product((d, s_bits, _t, x_bits) in dim_and_masks()) {
        let s = SubsetMask::new(s_bits, d).unwrap();
        let x = CubePoint::new(x_bits, d).unwrap();
        let mut product = 1i32;
        for j in 0..d {
            if s.contains(j) {
                product *= x.coord(j) as i32;
            }
        }
        prop_assert_eq!(product, chi_eval(s, x).unwrap() as i32);
    }

    #[test]
    fn subset_enumeration_is_sorted_and_counted(d in 1usize..=10, k_frac in 0.0f64..=1.0) {
        let k = ((d as f64) * k_frac).floor() as usize;
        let exact = enumerate_subsets(d, k, EnumMode::ExactlyK).unwrap();
        prop_assert_eq!(exact.len(), binomial(d, k));
        prop_assert!(exact.windows(2).all(|w| w[0].bits() < w[1].bits()));
        prop_assert!(exact.iter().all(|m| m.len() == k));
        let upto = enumerate_subsets(d, k, EnumMode::UpToK).unwrap();
        let expect: usize = (0..=k).map(|l| binomial(d, l)).sum();
        prop_assert_eq!(upto.len(), expect);
        prop_assert!(upto.windows(2).all(|w| w[0].bits() < w[1].bits()));
    }

    #[test]
    fn transform_roundtrip_and_parseval(
        d in 1usize..=7,
        raw in prop::collection::vec(-3.0f64..3.0, 1..=128),
    ) {
        let len = 1usize << d;
        let table: Vec<f64> = (0..len).map(|i| raw[i % raw.len()]).collect();
        let spec = uniform_fourier(&table).unwrap();
        let back = inverse_fourier(&spec).unwrap();
        for (a, b) in table.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let mean_sq: f64 = table.iter().map(|v| v * v).sum::<f64>() / len as f64;
        prop_assert!((spec.energy() - mean_sq).abs() < 1e-10);
    }

    #[test]
    fn dataset_csv_roundtrip(
        d in 1usize..=8,
        n in 1usize..=40,
        seed in any::<u64>(),
    ) {
        let dist = JointDistribution::uniform_x_fair_label(d).unwrap();
        let data = dist.sample(n, juntas::RngSeed::new(seed, 0)).unwrap();
        let text = data.to_csv_string();
        let back = Dataset::from_csv(text.as_bytes()).unwrap();
        prop_assert_eq!(&data, &back);
        prop_assert_eq!(text, back.to_csv_string());
    }

    #[test]
    fn distribution_json_roundtrip(
        d in 1usize..=6,
        raw in prop::collection::vec(0.0f64..1.0, 1..=128),
    ) {
        let len = 1usize << (d + 1);
        let weights: Vec<f64> = (0..len).map(|i| raw[i % raw.len()] + 1e-6).collect();
        let dist = JointDistribution::from_weights(d, weights).unwrap();
        let text = dist.to_json();
        let back = JointDistribution::from_json(&text).unwrap();
        prop_assert_eq!(&dist, &back);
        prop_assert_eq!(text, back.to_json());
    }

    #[test]
    fn model_json_roundtrip(
        d in 1usize..=8,
        coeffs in prop::collection::vec((any::<u32>(), -2.0f64..2.0), 0..=10),
        theta in -1.0f64..=1.0,
    ) {
        let mut poly = SparsePolynomial::zero(d).unwrap();
        for (bits, c) in coeffs {
            poly.set_term(SubsetMask::new(bits & ((1 << d) - 1), d).unwrap(), c).unwrap();
        }
        let g = Predictor::new(poly, theta).unwrap();
        let subset = SubsetMask::full(d);
        let text = model_to_json(&g, subset);
        let (back, s) = model_from_json(&text).unwrap();
        prop_assert_eq!(back, g);
        prop_assert_eq!(s, subset);
    }

    #[test]
    fn u_poly_shape(x in 0.0f64..=1.0, y in 0.0f64..=5.0) {
        prop_assert!(u_poly(x) <= 4.0 * x + 1e-12);
        if y > x {
            prop_assert!(u_poly(y) > u_poly(x));
        }
    }

    #[test]
    fn loss_identities_hold_for_random_pairs(
        d in 1usize..=6,
        raw in prop::collection::vec(0.001f64..1.0, 1..=128),
        poly_bits in any::<u32>(),
        c in -1.5f64..1.5,
        theta in -1.0f64..=1.0,
    ) {
        let len = 1usize << (d + 1);
        let weights: Vec<f64> = (0..len).map(|i| raw[i % raw.len()]).collect();
        let dist = JointDistribution::from_weights(d, weights).unwrap();
        let mask = SubsetMask::new(poly_bits & ((1 << d) - 1), d).unwrap();
        let g = Predictor::new(SparsePolynomial::monomial(mask, c).unwrap(), theta).unwrap();
        let r = exact_loss(&dist, &g).unwrap();
        prop_assert!((r.zero_one - (0.5 - 0.5 * r.inner)).abs() < 1e-12);
        prop_assert!((r.zero_one - r.square / 4.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&r.zero_one));
    }
}

/// Every shared type is immutable after construction and freely crosses
/// threads.
#[test]
fn core_types_are_send_and_sync() {
    fn check<T: Send + Sync>() {}
    check::<CubePoint>();
    check::<SubsetMask>();
    check::<JointDistribution>();
    check::<Dataset>();
    check::<SparsePolynomial>();
    check::<Predictor>();
    check::<juntas::Spectrum>();
    check::<juntas::RngSeed>();
    check::<juntas::learners::LearnReport>();
    check::<juntas::verify::CheckReport>();
}
