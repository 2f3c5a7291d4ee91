//! Property tests for the algebraic invariants of the simplicial layer.

use germ::chains::normalized_chains;
use germ::constructions::{boundary_simplex, point, product, quotient, standard_simplex};
use germ::matrix::{determinant, smith_normal_form, IntegerMatrix};
use germ::simplicial::FiniteSimplicialSet;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use std::sync::Arc;

fn matrix_strategy() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
            .prop_map(IntegerMatrix::from_rows)
    })
}

fn shape_strategy() -> impl Strategy<Value = Arc<FiniteSimplicialSet>> {
    prop_oneof![
        Just(Arc::new(point())),
        Just(Arc::new(standard_simplex(1))),
        Just(Arc::new(standard_simplex(2))),
        Just(Arc::new(boundary_simplex(1))),
        Just(Arc::new(boundary_simplex(2))),
    ]
}

proptest! {
    #[test]
    fn snf_invariants(m in matrix_strategy()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(determinant(&s.u).abs().is_one());
        prop_assert!(determinant(&s.v).abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn boundary_squares_to_zero_on_products(a in shape_strategy(), b in shape_strategy()) {
        let p = product(a, b);
        let c = normalized_chains(&p.complex);
        prop_assert!(c.validate());
    }

    #[test]
    fn product_euler_characteristic(a in shape_strategy(), b in shape_strategy()) {
        let p = product(a.clone(), b.clone());
        prop_assert_eq!(
            p.complex.euler_characteristic(),
            a.euler_characteristic() * b.euler_characteristic()
        );
        prop_assert_eq!(
            p.complex.count_in_dim(0),
            a.count_in_dim(0) * b.count_in_dim(0)
        );
    }

    #[test]
    fn quotient_boundaries_still_square_to_zero(
        a in shape_strategy(),
        i in 0usize..3,
        j in 0usize..3,
    ) {
        // identify two vertices (possibly equal) and check the chain level
        let v = a.simplices_of_dim(0);
        if v.len() >= 2 {
            let q = quotient(a.clone(), &[(v[i % v.len()], v[j % v.len()])]);
            let c = normalized_chains(&q.complex);
            prop_assert!(c.validate());
            prop_assert!(q.complex.validate().is_ok());
        }
    }

    #[test]
    fn quotient_idempotent_on_collapsed_pairs(a in shape_strategy()) {
        let v = a.simplices_of_dim(0);
        if v.len() >= 2 {
            let q = quotient(a.clone(), &[(v[0], v[1])]);
            // re-identifying the images changes nothing
            let img0 = q.projection.apply(v[0]).base;
            let again = quotient(q.complex.clone(), &[(img0, img0)]);
            prop_assert!(again.projection.is_isomorphism());
        }
    }

    #[test]
    fn disjoint_union_homology_is_additive(a in shape_strategy(), b in shape_strategy()) {
        use germ::chains::homology;
        let du = germ::simplicial::disjoint_union(&[a.as_ref(), b.as_ref()]);
        let cu = normalized_chains(&du.complex);
        let ca = normalized_chains(&a);
        let cb = normalized_chains(&b);
        for d in 0..=2i64 {
            let hu = homology(&cu, d);
            let ha = homology(&ca, d);
            let hb = homology(&cb, d);
            prop_assert_eq!(hu.free_rank, ha.free_rank + hb.free_rank);
            let mut torsion = ha.torsion.clone();
            torsion.extend(hb.torsion.clone());
            torsion.sort();
            let mut hu_t = hu.torsion.clone();
            hu_t.sort();
            prop_assert_eq!(hu_t, torsion);
        }
    }
}

#[test]
fn cones_kill_reduced_homology_across_battery() {
    for (_, label) in germ::fixtures::label_battery() {
        if label.is_empty() {
            continue;
        }
        let c = germ::constructions::cone(&label);
        assert!(germ::chains::is_homology_point(&c.complex));
    }
}

#[test]
fn three_torus_homology() {
    use germ::chains::{homology, AbelianGroup};
    use germ::constructions::product_many;
    let circle = Arc::new(boundary_simplex(2));
    let t3 = product_many(vec![circle.clone(), circle.clone(), circle]);
    let c = normalized_chains(&t3.complex);
    assert!(c.validate());
    assert_eq!(homology(&c, 0), AbelianGroup::free(1));
    assert_eq!(homology(&c, 1), AbelianGroup::free(3));
    assert_eq!(homology(&c, 2), AbelianGroup::free(3));
    assert_eq!(homology(&c, 3), AbelianGroup::free(1));
    assert_eq!(homology(&c, 4), AbelianGroup::zero());
}

/// Every DAG is isomorphic to one whose edges go up a vertex order, so
/// enumerating the upper-triangular graphs on up to five vertices checks
/// the path-count law exhaustively at that size.
#[test]
fn free_flow_path_counts_exhaustive_small_dags() {
    use germ::flow::{free_flow, LabeledDigraph, LabeledEdge};
    let pt = Arc::new(point());
    for n in 2usize..=5 {
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        for mask in 0..(1u32 << slots.len()) {
            let edges: Vec<LabeledEdge> = slots
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(k, &(i, j))| LabeledEdge {
                    name: format!("e{k}"),
                    src: i,
                    dst: j,
                    label: pt.clone(),
                })
                .collect();
            let g = LabeledDigraph {
                vertices: (0..n).map(|i| format!("v{i}")).collect(),
                edges: edges.clone(),
            };
            let flow = free_flow(g).expect("upper-triangular graphs are acyclic");
            // oracle: count edge paths by dynamic programming over targets
            let mut count = vec![vec![0usize; n]; n];
            for i in (0..n).rev() {
                for e in &edges {
                    if e.src == i {
                        count[i][e.dst] += 1;
                        for t in 0..n {
                            count[i][t] += count[e.dst][t];
                        }
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let ai = flow.state_index(&format!("v{a}")).unwrap();
                    let bi = flow.state_index(&format!("v{b}")).unwrap();
                    let got = flow.path(ai, bi).map_or(0, |c| c.count_in_dim(0));
                    assert_eq!(got, count[a][b], "n={n} mask={mask} pair {a}->{b}");
                }
            }
        }
    }
}
