use fusionmod::classify::tensor_rule;
use fusionmod::invariants::{generic_labels, GenericLabel};
use proptest::prelude::*;

fn pair() -> impl Strategy<Value = (u64, u64)> {
    (3u64..=12, 3u64..=12)
}

/// a (x) b as a label with multiplicity.
fn times(n: u64, k: u64, a: GenericLabel, b: GenericLabel) -> (GenericLabel, u64) {
    let p = tensor_rule(n, k, a, b).unwrap();
    (p.label, p.multiplicity)
}

proptest! {
    #[test]
    fn commutative((n, k) in pair(), i in 0usize..64, j in 0usize..64) {
        let labels = generic_labels(n, k).unwrap();
        let (a, b) = (labels[i % labels.len()], labels[j % labels.len()]);
        prop_assert_eq!(times(n, k, a, b), times(n, k, b, a));
    }

    #[test]
    fn associative((n, k) in pair(), i in 0usize..64, j in 0usize..64, l in 0usize..64) {
        let labels = generic_labels(n, k).unwrap();
        let (a, b, c) = (labels[i % labels.len()], labels[j % labels.len()], labels[l % labels.len()]);
        let (ab, r1) = times(n, k, a, b);
        let (ab_c, r2) = times(n, k, ab, c);
        let (bc, s1) = times(n, k, b, c);
        let (a_bc, s2) = times(n, k, a, bc);
        prop_assert_eq!((ab_c, r1 * r2), (a_bc, s1 * s2));
    }

    #[test]
    fn unit_is_z1_plus((n, k) in pair(), i in 0usize..64) {
        let labels = generic_labels(n, k).unwrap();
        let a = labels[i % labels.len()];
        prop_assert_eq!(times(n, k, labels[0], a), (a, 1));
    }
}
