//! Randomized invariants across modules: canonical representations,
//! duality identities, and coset round trips.

use std::sync::Arc;

use proptest::prelude::*;

use rankcoset::codes::{LinearCode, NestedCodes};
use rankcoset::coset::NestedPair;
use rankcoset::fields::{ExtElem, FieldParams};
use rankcoset::linalg::{self, MatrixFq, Subspace};

fn f8() -> Arc<FieldParams> {
    FieldParams::new(2, 3, vec![1, 1, 0, 1]).unwrap()
}

fn elem(f: &Arc<FieldParams>, coeffs: &[u64]) -> ExtElem {
    f.elem(coeffs).unwrap()
}

/// Rows over F_8 of length `n`, as coefficient triples.
fn arb_rows(n: usize, max_rows: usize) -> impl Strategy<Value = Vec<Vec<Vec<u64>>>> {
    prop::collection::vec(
        prop::collection::vec(prop::collection::vec(0u64..2, 3), n),
        0..=max_rows,
    )
}

fn code_from(f: &Arc<FieldParams>, n: usize, lists: &[Vec<Vec<u64>>]) -> LinearCode {
    let rows: Vec<Vec<ExtElem>> = lists
        .iter()
        .map(|r| r.iter().map(|c| elem(f, c)).collect())
        .collect();
    LinearCode::from_rows(f.clone(), n, &rows).unwrap()
}

proptest! {
    #[test]
    fn dual_is_an_orthogonal_involution(lists in arb_rows(3, 3)) {
        let f = f8();
        let c = code_from(&f, 3, &lists);
        let d = c.dual();
        prop_assert_eq!(c.dim() + d.dim(), 3);
        for x in c.generator().to_rows() {
            for h in d.generator().to_rows() {
                let mut dot = f.zero();
                for (a, b) in x.iter().zip(&h) {
                    dot = f.add(&dot, &f.mul(a, b));
                }
                prop_assert!(dot.is_zero());
            }
        }
        prop_assert_eq!(d.dual(), c);
    }

    #[test]
    fn shorten_dual_is_punctured_dual(lists in arb_rows(3, 3), mask in 1u8..8) {
        let f = f8();
        let c = code_from(&f, 3, &lists);
        let keep: Vec<usize> = (0..3).filter(|j| mask & (1 << j) != 0).collect();
        let lhs = c.shorten(&keep).unwrap().dual();
        let rhs = c.dual().puncture(&keep).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn subspace_representation_is_basis_independent(
        rows in prop::collection::vec(prop::collection::vec(0u64..2, 4), 1..4),
        perm_seed in 0usize..24,
    ) {
        let a = Subspace::from_fq_rows(2, 4, &rows);
        // replace rows by sums of row pairs and a rotation: same row space
        let mut mixed = rows.clone();
        if mixed.len() >= 2 {
            let merged: Vec<u64> = mixed[0]
                .iter()
                .zip(&mixed[1])
                .map(|(&x, &y)| (x + y) % 2)
                .collect();
            mixed[0] = merged;
        }
        let rot = perm_seed % mixed.len().max(1);
        mixed.rotate_left(rot);
        let b = Subspace::from_fq_rows(2, 4, &mixed);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rank_fq_is_column_operation_invariant(
        vec_lists in prop::collection::vec(prop::collection::vec(0u64..2, 3), 3),
        t_rows in prop::collection::vec(prop::collection::vec(0u64..2, 3), 3),
    ) {
        let f = f8();
        let t = MatrixFq::from_rows(2, &t_rows);
        prop_assume!(t.rank() == 3);
        let x: Vec<ExtElem> = vec_lists.iter().map(|c| elem(&f, c)).collect();
        // y_j = Σ_i T[i][j]·x_i is an invertible F_q recombination
        let y = linalg::apply_fq_rows(&f, &t.transpose(), &x);
        prop_assert_eq!(linalg::rank_fq(&f, &x), linalg::rank_fq(&f, &y));
    }

    #[test]
    fn coset_roundtrip_on_random_pairs(
        lists in arb_rows(3, 3),
        msg_coeffs in prop::collection::vec(prop::collection::vec(0u64..2, 3), 2),
        seed in 0u64..1000,
    ) {
        let f = f8();
        let c1 = code_from(&f, 3, &lists);
        prop_assume!(c1.dim() >= 1);
        // strict subcode: drop the last generator row
        let sub_rows = c1.generator().to_rows()[..c1.dim() - 1].to_vec();
        let c2 = LinearCode::from_rows(f.clone(), 3, &sub_rows).unwrap();
        let pair = NestedPair::new(NestedCodes::new(c1, c2).unwrap(), None).unwrap();
        let s: Vec<ExtElem> = msg_coeffs
            .iter()
            .take(pair.message_len())
            .map(|c| elem(&f, c))
            .collect();
        prop_assume!(s.len() == pair.message_len());
        let x = pair.encode(&s, seed).unwrap();
        prop_assert_eq!(pair.decode_clean(&x).unwrap(), s);
    }

    #[test]
    fn gamma_enumeration_matches_product_formula(n in 1usize..5, i in 0usize..5) {
        prop_assume!(i <= n);
        let count = linalg::enumerate_gamma(2, n, i).count() as u128;
        prop_assert_eq!(count, linalg::gaussian_binomial(2, n, i).unwrap());
    }
}
