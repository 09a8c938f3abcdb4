//! Randomized structural invariants of the compression functor and the
//! decomposition machinery, driven by proptest over direct sums of the
//! window indecomposables of the three-vertex chain with one relation.

use std::sync::OnceLock;

use proptest::prelude::*;

use arquiver::algebra::fixtures::triangle;
use arquiver::algebra::PathAlgebra;
use arquiver::artheory::{knit_fixed_size, ARQuiver, Caps};
use arquiver::complexes::{hom_dim, Complex};
use arquiver::decomp::{are_isomorphic, decompose, KsObject};
use arquiver::periodic::{compress, periodic_hom_dim};

fn universe() -> &'static (PathAlgebra, ARQuiver<Complex>) {
    static CELL: OnceLock<(PathAlgebra, ARQuiver<Complex>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let alg = triangle();
        let arq = knit_fixed_size(&alg, 3, &Caps::default()).unwrap();
        (alg, arq)
    })
}

/// A nonzero direct sum of up to three window indecomposables.
fn sum_strategy() -> impl Strategy<Value = Complex> {
    let n = universe().1.vertices.len();
    prop::collection::vec(0..n, 1..=3).prop_map(|picks| {
        let (_, arq) = universe();
        let mut acc = Complex::zero();
        for i in picks {
            acc = acc.direct_sum(&arq.vertices[i]);
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    /// The period-m shift of a compression is the same object (terms equal;
    /// the differentials agree up to the global sign of the shift).
    #[test]
    fn period_shift_is_identity(x in sum_strategy(), m in 2usize..=4) {
        let (alg, _) = universe();
        let z = compress(&x, m);
        let zs = z.shift(m as i64, alg.p);
        prop_assert_eq!(&z.terms, &zs.terms);
        prop_assert!(are_isomorphic(alg, &z, &zs, 1).is_some());
    }

    /// Compression commutes with direct sums up to isomorphism.
    #[test]
    fn compress_respects_sums(x in sum_strategy(), y in sum_strategy(), m in 2usize..=4) {
        let (alg, _) = universe();
        let lhs = compress(&x.direct_sum(&y), m);
        let rhs = compress(&x, m).direct_sum(&compress(&y, m));
        prop_assert!(are_isomorphic(alg, &lhs, &rhs, 1).is_some());
    }

    /// The compression hom identity on arbitrary direct sums:
    /// dim Hom(F_m X, F_m Y) = sum over j of dim Hom(X, Y[mj]).
    #[test]
    fn compression_hom_identity(x in sum_strategy(), y in sum_strategy(), m in 2usize..=4) {
        let (alg, _) = universe();
        let lhs = periodic_hom_dim(alg, &compress(&x, m), &compress(&y, m));
        let span = (x.terms.len() + y.terms.len() + 2) as i64;
        let mut rhs = 0usize;
        for j in -span..=span {
            rhs += hom_dim(alg, &x, &y.shift(m as i64 * j, alg.p));
        }
        prop_assert_eq!(lhs, rhs);
    }

    /// The multiset of summand shapes found by decompose is independent of
    /// the randomness seed.
    #[test]
    fn decomposition_is_seed_independent(x in sum_strategy(), m in 2usize..=4) {
        let (alg, _) = universe();
        let z = compress(&x, m);
        let shape = |seed: u64| {
            let mut sigs: Vec<_> = decompose(alg, &z, seed)
                .unwrap()
                .summands
                .into_iter()
                .map(|(s, _, _)| s.term_signature())
                .collect();
            sigs.sort();
            sigs
        };
        prop_assert_eq!(shape(1), shape(99));
    }
}
