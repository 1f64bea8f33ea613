use nalgebra::DVector;
use sigmaint::cli::{read_problem_file, MapSpec, ProblemSpec, RunOptions};
use sigmaint::crosscap::{build_dhf, CrossCapProblem};
use sigmaint::numeric::{
    finite_difference_jacobian, solve_zeros, stable_under_doubling, OracleConfig, OracleSystem, ZeroSet,
};
use sigmaint::regression::corpus_dir;

fn system(case: &str) -> (OracleSystem, OracleConfig) {
    let file = read_problem_file(&corpus_dir().join(format!("{case}.toml"))).unwrap();
    let spec = ProblemSpec::resolve(&file, &RunOptions::default()).unwrap();
    let sys = match &spec.map {
        MapSpec::Matrix(a) => OracleSystem::from_matrix_map(&spec.h, &spec.g, a).unwrap(),
        MapSpec::F(f) => {
            let p = CrossCapProblem::new(spec.h.clone(), spec.g.clone(), f.clone()).unwrap();
            OracleSystem::from_matrix_map(&p.h, &p.g, &build_dhf(&p)).unwrap()
        }
    };
    (sys, spec.oracle)
}

fn point(z: &sigmaint::numeric::ZeroPoint) -> Vec<f64> {
    z.beta.iter().chain(&z.x).copied().collect()
}

fn check_zero_quality(sys: &OracleSystem, set: &ZeroSet) {
    assert!(!set.zeros.is_empty());
    for z in &set.zeros {
        assert!(z.residual < 1e-12, "residual {:e}", z.residual);
        let start = point(z);
        let mut v = DVector::from_vec(start.clone());
        for _ in 0..5 {
            let step = sys.jacobian(v.as_slice()).lu().solve(&(-sys.eval(v.as_slice()))).unwrap();
            v += step;
        }
        let moved = (v - DVector::from_vec(start)).norm();
        assert!(moved < 1e-10, "zero moved {moved:e} under extra Newton steps");
    }
}

fn antipode_of<'a>(set: &'a ZeroSet, z: &sigmaint::numeric::ZeroPoint) -> &'a sigmaint::numeric::ZeroPoint {
    let anti: Vec<f64> = z.beta.iter().map(|b| -b).collect();
    set.zeros
        .iter()
        .find(|w| {
            let d: f64 = w.x.iter().zip(&z.x).chain(w.beta.iter().zip(&anti)).map(|(a, b)| (a - b).powi(2)).sum();
            d.sqrt() < 1e-6
        })
        .expect("antipodal partner present")
}

#[test]
fn sphere_half_b_zeros_are_polished_and_stable() {
    let (sys, cfg) = system("sphere-half-b");
    let set = solve_zeros(&sys, &cfg).unwrap();
    check_zero_quality(&sys, &set);
    // odd codimension: partners exist, signs are not constrained
    for z in &set.zeros {
        antipode_of(&set, z);
    }
    assert!(stable_under_doubling(&sys, &cfg, &set).unwrap());
}

#[test]
fn torus_half_zero_set_survives_doubling() {
    let (sys, cfg) = system("torus-half");
    let set = solve_zeros(&sys, &cfg).unwrap();
    check_zero_quality(&sys, &set);
    assert!(stable_under_doubling(&sys, &cfg, &set).unwrap());
}

#[test]
fn even_codimension_antipodes_share_their_sign() {
    let (sys, cfg) = system("hyperboloid-r3");
    let set = solve_zeros(&sys, &cfg).unwrap();
    check_zero_quality(&sys, &set);
    for z in &set.zeros {
        assert_eq!(antipode_of(&set, z).jac_sign, z.jac_sign);
    }
}

#[test]
fn analytic_jacobian_matches_finite_differences() {
    let (sys, _) = system("sphere-half-a");
    for (i, v) in [[0.6, 0.8, 0.1, -0.3, 0.5], [-0.2, 0.98, 1.1, 0.4, -0.7]].iter().enumerate() {
        let exact = sys.jacobian(v);
        let fd = finite_difference_jacobian(&sys, v, 1e-6);
        let err = (&exact - &fd).norm() / exact.norm();
        assert!(err < 1e-6, "point {i}: relative error {err:e}");
    }
}
