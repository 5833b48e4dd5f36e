use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use wbrauer::diagram::compose_word;
use wbrauer::irreps::{all_irreps, jm_matrix};
use wbrauer::pbt::{
    build_measurement, build_povm, build_povm_for, dense_povm, port_of, rho_spectrum, rho_word, simulate_pbt,
    verify_measurement, InputState, Protocol,
};
use wbrauer::scalar::{Rational, Surd};

fn rho_k(p: usize, d: usize, k: usize) -> DMatrix<f64> {
    let (g, loops) = compose_word(&rho_word(p, k), p, 1).unwrap();
    g.psi(d).unwrap() * (d as f64).powi(loops as i32)
}

/// `rho^{-1/2} rho_k rho^{-1/2}` on the support, complement as `E_0`.
fn pgm_oracle(p: usize, d: usize) -> Vec<DMatrix<f64>> {
    let rhos: Vec<DMatrix<f64>> = (1..=p).map(|k| rho_k(p, d, k)).collect();
    let rho = rhos.iter().fold(DMatrix::zeros(rhos[0].nrows(), rhos[0].ncols()), |a, b| a + b);
    let eig = rho.clone().symmetric_eigen();
    let inv = eig.eigenvalues.map(|x| if x > 1e-9 { 1.0 / x.sqrt() } else { 0.0 });
    let half = &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose();
    let mut out: Vec<DMatrix<f64>> = rhos.iter().map(|r| &half * r * &half).collect();
    let n = rho.nrows();
    let sum = out.iter().fold(DMatrix::zeros(n, n), |a, b| a + b);
    out.insert(0, DMatrix::identity(n, n) - sum);
    out
}

#[test]
fn povm_matches_dense_oracle() {
    for (p, d) in [(2, 2), (3, 2), (2, 3), (4, 2)] {
        let got = dense_povm(p, d, &build_povm(p, d).unwrap()).unwrap();
        let want = pgm_oracle(p, d);
        for (k, (a, b)) in got.iter().zip(&want).enumerate() {
            assert!((a - b).abs().max() < 1e-10, "p={p} d={d} k={k}");
        }
    }
}

#[test]
fn rho_spectrum_matches_dense() {
    for (p, d) in [(2usize, 2usize), (3, 2), (2, 3)] {
        let n = d.pow(p as u32 + 1);
        let rho = (1..=p).fold(DMatrix::zeros(n, n), |a, k| a + rho_k(p, d, k));
        let mut dense: Vec<f64> = rho.symmetric_eigenvalues().iter().copied().collect();
        dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut exact = Vec::new();
        for (l, _, v) in rho_spectrum(p, d).unwrap() {
            for _ in 0..l.m() {
                exact.push(*v.numer() as f64 / *v.denom() as f64);
            }
        }
        exact.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(dense.len(), exact.len());
        for (a, b) in dense.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-9, "p={p} d={d} {dense:?} {exact:?}");
        }
    }
}

#[test]
fn rho_is_shifted_jm() {
    for (p, d) in [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3)] {
        let eigs = rho_spectrum(p, d).unwrap();
        for irr in all_irreps(p, 1, d).unwrap() {
            let j = jm_matrix(&irr, p + 1).unwrap();
            for (i, t) in irr.paths().iter().enumerate() {
                let (_, _, v) = eigs.iter().find(|x| &x.1 == t).unwrap();
                let want = Surd::from_rational(Rational::from_integer(d as i128) - v);
                assert_eq!(j.get(i, i), want, "{t}");
            }
        }
    }
}

#[test]
fn exact_variant_is_perfect_and_complete() {
    for (p, d) in [(2, 2), (3, 2), (2, 3)] {
        for b in build_povm_for(p, d, Protocol::ProbabilisticExact).unwrap() {
            let n = b.paths.len();
            let mut sum = wbrauer::exact::SurdMatrix::zeros(n, n);
            for e in &b.elements {
                sum = sum.add(e).unwrap();
            }
            assert_eq!(sum, wbrauer::exact::SurdMatrix::identity(n));
        }
        let sim = simulate_pbt(p, d, &InputState::Random(5), Protocol::ProbabilisticExact).unwrap();
        for o in sim.outcomes.iter().filter(|o| o.k > 0) {
            assert!((o.fidelity.unwrap() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn measurement_checks() {
    for (p, d) in [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3)] {
        let r = verify_measurement(&build_measurement(p, d).unwrap()).unwrap();
        assert!(
            r.povm_complete && r.povm_psd && r.pvm_idempotent && r.pvm_orthogonal && r.compress_matches,
            "p={p} d={d}"
        );
        assert!(r.w_norms_one);
    }
}

#[test]
fn json_dump_has_elements() {
    let m = build_measurement(2, 2).unwrap();
    let v = m.to_json().unwrap();
    assert_eq!(v["povm"].as_array().unwrap().len(), m.povm.len());
    assert_eq!(v["dilated_pvm"].as_array().unwrap().len(), m.dilated_pvm.len());
    assert_eq!(v["ports"].as_array().unwrap().len(), 2);
    // every element is a matrix of Scalar strings
    for b in v["povm"].as_array().unwrap() {
        assert_eq!(b["elements"].as_array().unwrap().len(), 3);
        for e in b["elements"].as_array().unwrap() {
            for row in e.as_array().unwrap() {
                for x in row.as_array().unwrap() {
                    x.as_str().unwrap().parse::<wbrauer::scalar::Scalar>().unwrap();
                }
            }
        }
    }
}

#[test]
fn bad_sizes() {
    assert!(build_povm(0, 2).is_err());
    assert!(simulate_pbt(2, 2, &InputState::Vector(vec![Complex64::new(1.0, 0.0)]), Protocol::PrettyGood).is_err());
    assert!(simulate_pbt(2, 2, &InputState::Vector(vec![Complex64::new(0.0, 0.0); 2]), Protocol::PrettyGood).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn outcome_probabilities_sum_to_one(seed in 0u64..10_000, p in 2usize..=3, d in 2usize..=3) {
        prop_assume!(d.pow(p as u32 + 1) <= 81);
        let sim = simulate_pbt(p, d, &InputState::Random(seed), Protocol::PrettyGood).unwrap();
        let total: f64 = sim.outcomes.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for o in &sim.outcomes {
            prop_assert!(o.probability >= -1e-12);
        }
    }

    #[test]
    fn fidelity_is_state_independent(a in 0u64..10_000, b in 0u64..10_000) {
        // the channel is covariant, so the fidelity does not depend on the input
        let fa = simulate_pbt(2, 2, &InputState::Random(a), Protocol::PrettyGood).unwrap();
        let fb = simulate_pbt(2, 2, &InputState::Random(b), Protocol::PrettyGood).unwrap();
        for (x, y) in fa.outcomes.iter().zip(&fb.outcomes) {
            if let (Some(u), Some(v)) = (x.fidelity, y.fidelity) {
                prop_assert!((u - v).abs() < 1e-10);
            }
            prop_assert!((x.probability - y.probability).abs() < 1e-10);
        }
    }

    #[test]
    fn ports_are_a_bijection(p in 1usize..=6) {
        let mut ports: Vec<usize> = (1..=p).map(|k| port_of(p, k).unwrap()).collect();
        ports.sort_unstable();
        prop_assert_eq!(ports, (1..=p).collect::<Vec<_>>());
    }

    #[test]
    fn spectrum_is_nonnegative(p in 1usize..=4, d in 1usize..=4) {
        for (_, _, v) in rho_spectrum(p, d).unwrap() {
            prop_assert!(v >= Rational::from_integer(0));
        }
    }
}
