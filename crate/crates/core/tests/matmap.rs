mod common;

use std::sync::Arc;

use common::{laplace_det, random_poly};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigmaint::matmap::{build_a_tilde, combinations, jacobian, PolyMatrix};
use sigmaint::poly::{Polynomial, Rational, Ring};

fn ring() -> Arc<Ring> {
    Ring::new(&["x", "y", "z"])
}

fn int_matrix(ring: &Arc<Ring>, rows: usize, cols: usize, vals: &[i64]) -> PolyMatrix {
    PolyMatrix::new(ring, rows, cols, vals.iter().map(|&v| Polynomial::from_int(ring, v)).collect()).unwrap()
}

fn laplace_minor(vals: &[Vec<BigInt>], rs: &[usize], cs: &[usize]) -> BigInt {
    let sub: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| vals[i][j].clone()).collect()).collect();
    laplace_det(&sub)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn integer_minors_match_laplace(vals in prop::collection::vec(-20i64..=20, 16)) {
        let r = Ring::new(&["x"]);
        let m = int_matrix(&r, 4, 4, &vals);
        let big: Vec<Vec<BigInt>> = vals.chunks(4).map(|row| row.iter().map(|&v| v.into()).collect()).collect();
        for size in 1..=4 {
            let minors = m.minors(size).unwrap();
            let mut k = 0;
            for rs in combinations(4, size) {
                for cs in combinations(4, size) {
                    let expect = Polynomial::constant(&r, Rational::from_integer(laplace_minor(&big, &rs, &cs)));
                    prop_assert_eq!(&minors[k], &expect);
                    k += 1;
                }
            }
        }
    }

    #[test]
    fn symbolic_minors_commute_with_evaluation(seed in any::<u64>()) {
        // 5x5 exercises the fraction-free path for sizes 4 and 5
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring();
        let entries: Vec<Polynomial> = (0..25).map(|_| random_poly(&mut rng, &r, 3, 2, 4)).collect();
        let m = PolyMatrix::new(&r, 5, 5, entries.clone()).unwrap();
        let at: Vec<Rational> = (0..3).map(|_| Rational::from_integer(rng.gen_range(-3i64..=3).into())).collect();
        let vals: Vec<Vec<BigInt>> = entries
            .chunks(5)
            .map(|row| row.iter().map(|e| e.eval_rational(&at).unwrap().to_integer()).collect())
            .collect();
        for size in [2, 4, 5] {
            let minors = m.minors(size).unwrap();
            let mut k = 0;
            for rs in combinations(5, size) {
                for cs in combinations(5, size) {
                    prop_assert_eq!(minors[k].eval_rational(&at).unwrap().to_integer(), laplace_minor(&vals, &rs, &cs));
                    k += 1;
                }
            }
        }
    }

    #[test]
    fn vanishing_minors_match_numeric_corank(seed in any::<u64>(), rank in 0usize..=3) {
        // a = B C with B 4 x rank and C rank x 3 has rank <= `rank` everywhere
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring();
        let b: Vec<Polynomial> = (0..4 * rank).map(|_| random_poly(&mut rng, &r, 3, 1, 5)).collect();
        let c: Vec<Polynomial> = (0..rank * 3).map(|_| random_poly(&mut rng, &r, 3, 1, 5)).collect();
        let entries: Vec<Polynomial> = (0..4)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| {
                let mut e = Polynomial::zero(&r);
                for t in 0..rank {
                    e += &(&b[i * rank + t] * &c[t * 3 + j]);
                }
                e
            })
            .collect();
        let m = PolyMatrix::new(&r, 4, 3, entries).unwrap();
        let at: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // largest size with some minor nonzero at the point
        let minor_rank = (1..=3)
            .filter(|&s| m.minors(s).unwrap().iter().any(|p| p.eval_f64(&at).unwrap().abs() > 1e-8))
            .max()
            .unwrap_or(0);
        let dm = DMatrix::from_row_slice(4, 3, &m.eval_f64(&at));
        let sv = dm.singular_values();
        let smax = sv.max();
        let svd_rank = sv.iter().filter(|s| **s > 1e-8 * smax.max(1.0)).count();
        prop_assert_eq!(minor_rank, svd_rank);
    }

    #[test]
    fn a_tilde_is_a_of_x_times_beta(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring();
        let entries: Vec<Polynomial> = (0..6).map(|_| random_poly(&mut rng, &r, 3, 2, 5)).collect();
        let a = PolyMatrix::new(&r, 3, 2, entries).unwrap();
        let at = build_a_tilde(&a);
        let beta: [f64; 2] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let ax = a.eval_f64(&x);
        let point: Vec<f64> = beta.iter().chain(&x).copied().collect();
        for (row, comp) in at.components.iter().enumerate() {
            let expect = ax[row * 2] * beta[0] + ax[row * 2 + 1] * beta[1];
            let got = comp.eval_f64(&point).unwrap();
            prop_assert!((got - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
        }
    }
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r = ring();
    let maps: Vec<Polynomial> = (0..4).map(|_| random_poly(&mut rng, &r, 5, 3, 9)).collect();
    let jac = jacobian(&maps, &r);
    assert_eq!((jac.rows(), jac.cols()), (4, 3));
    for _ in 0..10 {
        let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let analytic = jac.eval_f64(&p);
        for (i, f) in maps.iter().enumerate() {
            for v in 0..3 {
                let h = 1e-5;
                let (mut lo, mut hi) = (p.clone(), p.clone());
                lo[v] -= h;
                hi[v] += h;
                let fd = (f.eval_f64(&hi).unwrap() - f.eval_f64(&lo).unwrap()) / (2.0 * h);
                let exact = analytic[i * 3 + v];
                assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{fd} vs {exact}");
            }
        }
    }
}

#[test]
fn minor_counts() {
    let r = ring();
    let m = int_matrix(&r, 3, 2, &[1, 2, 3, 4, 5, 6]);
    assert_eq!(m.minors(2).unwrap().len(), 3);
    assert_eq!(m.minors(1).unwrap().len(), 6);
    let d = int_matrix(&r, 6, 4, &[0; 24]);
    assert_eq!(d.minors(4).unwrap().len(), 15);
    assert!(d.minors(4).unwrap().iter().all(|p| p.is_zero()));
    let big = m.minors(2).unwrap()[0].as_constant().unwrap();
    assert_eq!(big.to_integer().to_i64(), Some(-2));
    assert!(!big.is_zero());
}
