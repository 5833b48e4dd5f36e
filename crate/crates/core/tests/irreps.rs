use nalgebra::DMatrix;
use proptest::prelude::*;

use wbrauer::bratteli::irr_labels;
use wbrauer::diagram::{compose, BrauerDiagram};
use wbrauer::irreps::{all_irreps, c_squared_contents, c_squared_dimensions, irrep_generator, Irrep, MatrixUnits};
use wbrauer::scalar::Rational;

fn shape() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=3, 1usize..=2, 2usize..=3)
}

#[test]
fn labelled_generator() {
    let l = &irr_labels(2, 1, 2).unwrap()[0];
    let m = irrep_generator(l, 2, 2, 1, 2).unwrap();
    assert_eq!(m.matrix.len(), m.paths.len());
    assert!(irrep_generator(l, 3, 2, 1, 2).is_err());
}

#[test]
fn c_squared_two_ways() {
    for (p, q, d) in [(2, 1, 2), (2, 2, 3), (3, 2, 3), (3, 1, 4)] {
        for irr in all_irreps(p, q, d).unwrap() {
            for t in irr.paths() {
                if let (Ok(a), Ok(b)) = (c_squared_contents(t), c_squared_dimensions(t)) {
                    assert_eq!(a, b, "{t}");
                }
            }
        }
    }
}

#[test]
fn matrix_units_multiply_and_resolve() {
    let (p, q, d) = (2, 1, 2);
    let mut mu = MatrixUnits::new(p, q, d).unwrap();
    let dim = d.pow((p + q) as u32);
    let mut sum = DMatrix::<f64>::zeros(dim, dim);
    for irr in all_irreps(p, q, d).unwrap() {
        for s in irr.paths() {
            sum += mu.unit(&irr, s, s).unwrap();
            for t in irr.paths() {
                for u in irr.paths() {
                    let prod = mu.unit(&irr, s, t).unwrap() * mu.unit(&irr, t, u).unwrap();
                    assert!((prod - mu.unit(&irr, s, u).unwrap()).abs().max() < 1e-10);
                }
            }
        }
    }
    assert!((sum - DMatrix::identity(dim, dim)).abs().max() < 1e-10);
}

proptest! {
    #[test]
    fn irreps_are_homomorphisms((p, q, d) in shape(), i in 0usize..1000, j in 0usize..1000) {
        let all = BrauerDiagram::all(p, q);
        let (a, b) = (&all[i % all.len()], &all[j % all.len()]);
        let (c, loops) = compose(a, b).unwrap();
        let k = Rational::from_integer((d as i128).pow(loops as u32));
        for l in irr_labels(p, q, d).unwrap() {
            let irr = Irrep::new(&l, p, q, d).unwrap();
            let lhs = irr.diagram(a).unwrap().mul(&irr.diagram(b).unwrap()).unwrap();
            let rhs = irr.diagram(&c).unwrap().scale(&k).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn generators_are_symmetric((p, q, d) in shape()) {
        for irr in all_irreps(p, q, d).unwrap() {
            for i in 1..p + q {
                let g = irr.generator(i).unwrap();
                prop_assert_eq!(&g.transpose(), g);
            }
        }
    }

    #[test]
    fn characters_match_dense((p, q, d) in shape(), i in 0usize..1000) {
        // Tr psi(pi) = sum m_lambda Tr psi_lambda(pi)
        let all = BrauerDiagram::all(p, q);
        let pi = &all[i % all.len()];
        let dense = pi.psi(d).unwrap().trace();
        let mut sum = 0.0;
        for irr in all_irreps(p, q, d).unwrap() {
            sum += irr.multiplicity() as f64 * irr.diagram(pi).unwrap().to_dense().trace();
        }
        prop_assert!((dense - sum).abs() < 1e-9);
    }
}
