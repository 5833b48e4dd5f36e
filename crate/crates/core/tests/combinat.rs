use proptest::prelude::*;

use wbrauer::combinat::{gt_patterns, ssyt_count, syt_count, MixedDiagram, Partition, Staircase};

/// f^lambda by peeling corners.
fn syt_brute(parts: &[usize]) -> u128 {
    if parts.iter().all(|&x| x == 0) {
        return 1;
    }
    let mut total = 0;
    for i in 0..parts.len() {
        let next = parts.get(i + 1).copied().unwrap_or(0);
        if parts[i] > next {
            let mut v = parts.to_vec();
            v[i] -= 1;
            total += syt_brute(&v);
        }
    }
    total
}

/// Weyl dimension of `U(d)` at a weakly decreasing integer tuple.
fn weyl(l: &[i64]) -> u128 {
    let d = l.len();
    let (mut num, mut den) = (1i128, 1i128);
    for i in 0..d {
        for j in i + 1..d {
            num *= (l[i] - l[j] + (j - i) as i64) as i128;
            den *= (j - i) as i128;
        }
    }
    (num / den) as u128
}

fn staircase() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=4).prop_flat_map(|d| proptest::collection::vec(-3i64..=3, d)).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

#[test]
fn syt_counts_match_peeling() {
    for n in 0..=8 {
        for lam in Partition::all_of(n) {
            assert_eq!(syt_count(&lam), syt_brute(lam.parts()), "{lam}");
        }
    }
}

#[test]
fn partition_counts() {
    let want = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30];
    for (n, &w) in want.iter().enumerate() {
        assert_eq!(Partition::all_of(n).len(), w);
    }
}

#[test]
fn sum_of_squares_is_factorial() {
    let mut fact = 1u128;
    for n in 1..=8u128 {
        fact *= n;
        let s: u128 = Partition::all_of(n as usize).iter().map(|l| syt_count(l).pow(2)).sum();
        assert_eq!(s, fact);
    }
}

#[test]
fn corners_of_a_hook() {
    let lam: Partition = "3,1".parse().unwrap();
    assert_eq!(lam.addable().len(), 3);
    assert_eq!(lam.removable().len(), 2);
    assert_eq!(lam.hook(wbrauer::combinat::Cell::new(1, 1)), 4);
}

#[test]
fn bad_partitions_rejected() {
    assert!(Partition::new(vec![1, 2]).is_err());
    assert!("2,x".parse::<Partition>().is_err());
    assert!(Staircase::new(vec![0, 1]).is_err());
}

proptest! {
    #[test]
    fn gt_pattern_count_is_weyl_dimension(l in staircase()) {
        let s = Staircase::new(l.clone()).unwrap();
        let pats = gt_patterns(&s);
        prop_assert_eq!(pats.len() as u128, weyl(&l));
        prop_assert_eq!(s.dimension(), weyl(&l));
        for m in &pats {
            prop_assert!(m.is_interlacing());
            prop_assert_eq!(m.top(), s.clone());
            prop_assert_eq!(m.weight().iter().sum::<i64>(), s.sum());
            let back: wbrauer::combinat::GtPattern = m.to_string().parse().unwrap();
            prop_assert_eq!(&back, m);
        }
    }

    #[test]
    fn staircase_round_trip(l in staircase()) {
        let s = Staircase::new(l).unwrap();
        let mu = MixedDiagram::from_staircase(&s);
        prop_assert_eq!(mu.staircase(), s.clone());
        prop_assert_eq!(mu.dimension(), s.dimension());
        let text = mu.to_string();
        prop_assert_eq!(MixedDiagram::parse(&text, s.d()).unwrap(), mu);
    }

    #[test]
    fn ssyt_is_weyl_of_padded(parts in proptest::collection::vec(0usize..4, 0..4), d in 1usize..5) {
        let lam = Partition::new({ let mut v = parts; v.sort_unstable_by(|a, b| b.cmp(a)); v }).unwrap();
        let want = if lam.length() > d { 0 } else { weyl(&lam.padded(d)) };
        prop_assert_eq!(ssyt_count(&lam, d), want);
    }

    #[test]
    fn add_then_remove(parts in proptest::collection::vec(1usize..5, 0..4)) {
        let lam = Partition::new({ let mut v = parts; v.sort_unstable_by(|a, b| b.cmp(a)); v }).unwrap();
        for c in lam.addable() {
            let big = lam.with_added(c).unwrap();
            prop_assert_eq!(big.size(), lam.size() + 1);
            prop_assert_eq!(lam.added_cell(&big), Some(c));
            prop_assert_eq!(big.with_removed(c).unwrap(), lam.clone());
        }
    }
}
