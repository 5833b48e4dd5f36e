use std::collections::BTreeSet;

use proptest::prelude::*;

use wbrauer::bratteli::{dilated_paths, irr_labels, irr_labels_closed_form, irrep_dimension, paths, Tower};

fn shape() -> impl Strategy<Value = (usize, usize, usize)> {
    (0usize..=4, 0usize..=3, 1usize..=4).prop_filter("nonempty", |(p, q, _)| p + q > 0)
}

#[test]
fn generic_d_gives_all_diagrams() {
    // d >= p+q: A is isomorphic to the walled Brauer algebra
    for (p, q) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let d = p + q;
        let s: u128 = irr_labels(p, q, d).unwrap().iter().map(|l| irrep_dimension(l, p, q, d).unwrap().pow(2)).sum();
        let f: u128 = (1..=(p + q) as u128).product();
        assert_eq!(s, f, "p={p} q={q}");
    }
}

#[test]
fn qubit_three_two() {
    // (C^2)^{⊗5} splits into 3 irreps for d = 2
    let labels = irr_labels(3, 2, 2).unwrap();
    let dims: Vec<u128> = labels.iter().map(|l| irrep_dimension(l, 3, 2, 2).unwrap()).collect();
    let total: u128 = labels.iter().zip(&dims).map(|(l, n)| l.m() * n).sum();
    assert_eq!(total, 32);
}

#[test]
fn bad_paths_rejected() {
    let t = Tower::new(2, 1, 2).unwrap();
    assert!(t.parse_path("nonsense").is_err());
    assert!(Tower::new(1, 1, 0).is_err());
}

proptest! {
    #[test]
    fn closed_form_labels((p, q, d) in shape()) {
        let a: BTreeSet<_> = irr_labels(p, q, d).unwrap().into_iter().collect();
        let b: BTreeSet<_> = irr_labels_closed_form(p, q, d).into_iter().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn path_lists_are_consistent((p, q, d) in shape()) {
        let t = Tower::new(p, q, d).unwrap();
        for l in irr_labels(p, q, d).unwrap() {
            let ps = paths(&l, p, q, d).unwrap();
            prop_assert_eq!(ps.len() as u128, irrep_dimension(&l, p, q, d).unwrap());
            let mut sorted = ps.clone();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), ps.len());
            for s in &ps {
                prop_assert_eq!(s.leaf(), &l.shape);
                for k in 0..p + q {
                    prop_assert!(t.is_edge(k, s.vertex(k), s.vertex(k + 1)));
                }
                prop_assert_eq!(&t.parse_path(&s.to_string()).unwrap(), s);
                prop_assert_eq!(s.truncated().len(), p + q - 1);
            }
        }
    }

    #[test]
    fn swaps_are_involutions((p, q, d) in shape()) {
        for l in irr_labels(p, q, d).unwrap() {
            for s in paths(&l, p, q, d).unwrap() {
                // level p can have several alternatives
                for k in (1..p + q).filter(|&k| k != p) {
                    if let Some(u) = s.swapped(k) {
                        prop_assert_eq!(u.swapped(k), Some(s.clone()));
                    }
                }
            }
        }
    }

    #[test]
    fn dilation_embeds((p, d) in (1usize..=3, 1usize..=3)) {
        for l in irr_labels(p, 1, d).unwrap() {
            let plain = paths(&l, p, 1, d).unwrap();
            let dil = dilated_paths(&l, p, d).unwrap();
            prop_assert!(dil.len() >= plain.len());
            if !l.shape.right.is_empty() {
                prop_assert_eq!(dil, plain);
                continue;
            }
            for s in &plain {
                let up = s.dilated().unwrap();
                prop_assert!(dil.contains(&up));
                prop_assert_eq!(up.undilated(), Some(s.clone()));
            }
        }
    }
}
