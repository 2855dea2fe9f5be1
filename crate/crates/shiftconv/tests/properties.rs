//! Property tests for the structural invariants that hold on all inputs.

use num_complex::Complex64;
use proptest::prelude::*;
use shiftconv::arith::{crt_recombine, crt_split, is_squarefree, squarefree_factor};
use shiftconv::circle::{eval_i, ModuliSet};
use shiftconv::expsums::{fourier_transform_modp, kloosterman};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kloosterman_symmetric_real_bounded(m in -500i64..500, n in -500i64..500, c in 1u64..150) {
        let a = kloosterman(m, n, c);
        let b = kloosterman(n, m, c);
        prop_assert!((a.value - b.value).norm() < 1e-9);
        prop_assert!(a.value.im.abs() <= 1e-9 * a.term_count.max(1) as f64);
        prop_assert!(a.triangle_ok());
    }

    #[test]
    fn crt_roundtrip(m in 1u64..2000, x in 0u64..2000) {
        prop_assume!(is_squarefree(m));
        let f = squarefree_factor(m).unwrap();
        let x = x % m;
        prop_assert_eq!(crt_recombine(&crt_split(x, &f), &f), x);
    }

    #[test]
    fn fourier_involution_random_tables(p in prop::sample::select(vec![2u64, 3, 5, 13, 31, 67, 97]),
                                        seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<Complex64> = (0..p)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let ft = fourier_transform_modp(&f);
        let ft2 = fourier_transform_modp(&ft);
        for x in 0..p as usize {
            let neg = (p as usize - x) % p as usize;
            prop_assert!((ft2[x] - f[neg]).norm() < 1e-9);
        }
        let a: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        let b: f64 = ft.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-12));
    }

    #[test]
    fn covering_kernel_integral_is_one(moduli in prop::collection::vec(2u64..60, 1..6),
                                       delta_scale in 0.01f64..0.45) {
        let moduli: Vec<u64> = moduli.into_iter().filter(|&q| is_squarefree(q)).collect();
        prop_assume!(!moduli.is_empty());
        let ms = ModuliSet::custom(moduli, delta_scale).unwrap();
        let step = eval_i(&ms).unwrap();
        prop_assert!((step.integral() - 1.0).abs() < 1e-12);
        for (_, _, v) in step.pieces() {
            prop_assert!(v >= 0.0);
        }
    }

    #[test]
    fn minmax_matches_grid_oracle(a1 in -6i64..6, b1 in -6i64..6,
                                  a2 in -6i64..6, b2 in -6i64..6,
                                  a3 in -6i64..6, b3 in -6i64..6) {
        use shiftconv::optimizer::{optimize_single, rat, term, MonomialBound};
        let lines = [(a1, b1), (a2, b2), (a3, b3)];
        prop_assume!(lines.iter().any(|(a, _)| *a > 0) && lines.iter().any(|(a, _)| *a < 0));
        let bound = MonomialBound::new(
            lines
                .iter()
                .map(|(a, b)| term(&[("Q", rat(*a, 1)), ("X", rat(*b, 1))]))
                .collect(),
        )
        .unwrap();
        let opt = optimize_single(&bound, "Q", "X").unwrap();
        // dense rational grid around the optimum never beats it
        let eval = |t: &num_rational::BigRational| {
            lines
                .iter()
                .map(|(a, b)| rat(*a, 1) * t + rat(*b, 1))
                .max()
                .unwrap()
        };
        prop_assert_eq!(eval(&opt.exponent), opt.value.clone());
        for k in -120i64..=120 {
            let t = &opt.exponent + rat(k, 37);
            prop_assert!(eval(&t) >= opt.value);
        }
    }
}
