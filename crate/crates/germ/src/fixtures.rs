//! The standard fixture battery used by the test suites, the book, and
//! the acceptance run: a spread of labels, flows, morphisms, and the
//! composition-failure witness pair.

use crate::constructions::{boundary_simplex, point, standard_simplex};
use crate::flow::{
    cube_flow, directed_segment, discrete_flow, free_flow, glob, poset_flow, terminal_flow, Flow,
    FlowBuilder, FlowMorphism, LabeledDigraph, LabeledEdge, Provenance,
};
use crate::simplicial::{ComplexBuilder, FiniteSimplicialSet, SimplexRef, SimplicialMap};
use std::collections::BTreeMap;
use std::sync::Arc;

pub fn pt() -> Arc<FiniteSimplicialSet> {
    Arc::new(point())
}

/// Labels used for globes and free-flow edges throughout the battery.
pub fn label_battery() -> Vec<(&'static str, Arc<FiniteSimplicialSet>)> {
    vec![
        ("empty", Arc::new(FiniteSimplicialSet::empty())),
        ("point", pt()),
        ("interval", Arc::new(standard_simplex(1))),
        ("triangle", Arc::new(standard_simplex(2))),
        ("two-points", Arc::new(boundary_simplex(1))),
        ("circle", Arc::new(boundary_simplex(2))),
    ]
}

pub fn chain3() -> Flow {
    poset_flow(vec!["0".into(), "1".into(), "2".into()], &[(0, 1), (1, 2)]).unwrap()
}

pub fn free_chain(labels: &[Arc<FiniteSimplicialSet>]) -> Flow {
    let vertices: Vec<String> = (0..=labels.len()).map(|i| format!("v{i}")).collect();
    let edges = labels
        .iter()
        .enumerate()
        .map(|(i, l)| LabeledEdge { name: format!("e{i}"), src: i, dst: i + 1, label: l.clone() })
        .collect();
    free_flow(LabeledDigraph { vertices, edges }).unwrap()
}

pub fn free_fork(left: Arc<FiniteSimplicialSet>, right: Arc<FiniteSimplicialSet>) -> Flow {
    free_flow(LabeledDigraph {
        vertices: vec!["a".into(), "b".into(), "c".into()],
        edges: vec![
            LabeledEdge { name: "e1".into(), src: 0, dst: 1, label: left },
            LabeledEdge { name: "e2".into(), src: 0, dst: 2, label: right },
        ],
    })
    .unwrap()
}

/// The flows every battery-wide property is checked on. Kept at desk
/// scale; cube_flow(3) is produced separately because of its size.
pub fn flow_battery() -> Vec<(String, Arc<Flow>)> {
    let mut out: Vec<(String, Arc<Flow>)> = Vec::new();
    out.push(("segment".into(), Arc::new(directed_segment())));
    out.push(("terminal".into(), Arc::new(terminal_flow())));
    for (name, label) in label_battery() {
        out.push((format!("glob({name})"), Arc::new(glob(label))));
    }
    out.push(("chain3".into(), Arc::new(chain3())));
    out.push((
        "antichain2".into(),
        Arc::new(poset_flow(vec!["a".into(), "b".into()], &[]).unwrap()),
    ));
    out.push((
        "square-poset".into(),
        Arc::new(
            poset_flow(
                vec!["00".into(), "01".into(), "10".into(), "11".into()],
                &[(0, 1), (0, 2), (1, 3), (2, 3)],
            )
            .unwrap(),
        ),
    ));
    out.push(("free-chain-pt-pt".into(), Arc::new(free_chain(&[pt(), pt()]))));
    out.push((
        "free-chain-pt-interval".into(),
        Arc::new(free_chain(&[pt(), Arc::new(standard_simplex(1))])),
    ));
    out.push((
        "free-chain-circle-pt".into(),
        Arc::new(free_chain(&[Arc::new(boundary_simplex(2)), pt()])),
    ));
    out.push((
        "free-fork-twopoints-pt".into(),
        Arc::new(free_fork(Arc::new(boundary_simplex(1)), pt())),
    ));
    out.push(("free-fork-pt-pt".into(), Arc::new(free_fork(pt(), pt()))));
    out.push((
        "free-diamond".into(),
        Arc::new(
            free_flow(LabeledDigraph {
                vertices: vec!["a".into(), "b".into(), "c".into(), "d".into()],
                edges: vec![
                    LabeledEdge { name: "e1".into(), src: 0, dst: 1, label: pt() },
                    LabeledEdge { name: "e2".into(), src: 0, dst: 2, label: pt() },
                    LabeledEdge { name: "e3".into(), src: 1, dst: 3, label: pt() },
                    LabeledEdge { name: "e4".into(), src: 2, dst: 3, label: pt() },
                ],
            })
            .unwrap(),
        ),
    ));
    out.push((
        "free-parallel".into(),
        Arc::new(
            free_flow(LabeledDigraph {
                vertices: vec!["a".into(), "b".into()],
                edges: vec![
                    LabeledEdge { name: "e1".into(), src: 0, dst: 1, label: pt() },
                    LabeledEdge { name: "e2".into(), src: 0, dst: 1, label: pt() },
                ],
            })
            .unwrap(),
        ),
    ));
    out.push(("cube1".into(), Arc::new(cube_flow(1).unwrap())));
    out.push(("cube2".into(), Arc::new(cube_flow(2).unwrap())));
    out.push((
        "discrete-triangle".into(),
        Arc::new(
            discrete_flow(
                vec!["a".into(), "b".into(), "c".into()],
                &[
                    ("p".into(), "a".into(), "b".into()),
                    ("q".into(), "b".into(), "c".into()),
                    ("r".into(), "a".into(), "c".into()),
                ],
                &[("p".into(), "q".into(), "r".into())],
            )
            .unwrap(),
        ),
    ));
    out.push((
        "witness-y".into(),
        Arc::new(
            free_flow(LabeledDigraph {
                vertices: vec!["beta".into(), "c".into(), "p".into()],
                edges: vec![
                    LabeledEdge { name: "e".into(), src: 2, dst: 0, label: pt() },
                    LabeledEdge {
                        name: "F".into(),
                        src: 0,
                        dst: 1,
                        label: Arc::new(standard_simplex(2)),
                    },
                ],
            })
            .unwrap(),
        ),
    ));
    out.push(("witness-z".into(), witness_target()));
    out
}

/// Morphism from the directed segment into `y`, choosing the vertex of
/// P(a, b) the unique path lands on.
pub fn segment_morphism(y: Arc<Flow>, a: &str, b: &str, vertex: usize) -> FlowMorphism {
    let x = Arc::new(directed_segment());
    let (ai, bi) = (y.state_index(a).unwrap(), y.state_index(b).unwrap());
    let target = y.path(ai, bi).expect("target pair nonempty").clone();
    let v = target.simplices_of_dim(0)[vertex];
    let pm = SimplicialMap::new(
        x.path(0, 1).unwrap().clone(),
        target,
        vec![SimplexRef::nondeg(v)],
    )
    .unwrap();
    let mut maps = BTreeMap::new();
    maps.insert((0, 1), pm);
    FlowMorphism::new(x, y, vec![ai, bi], maps).unwrap()
}

/// Morphism of globes induced by a simplicial map of labels.
pub fn glob_morphism(
    x: Arc<Flow>,
    y: Arc<Flow>,
    assign: Vec<SimplexRef>,
) -> FlowMorphism {
    let pm = SimplicialMap::new(
        x.path(0, 1).unwrap().clone(),
        y.path(0, 1).unwrap().clone(),
        assign,
    )
    .unwrap();
    let mut maps = BTreeMap::new();
    maps.insert((0, 1), pm);
    FlowMorphism::new(x, y, vec![0, 1], maps).unwrap()
}

/// The inclusion `glob(dDelta[1]) -> glob(Delta[1])`: two parallel paths
/// into the interval's endpoints. The cone of its germ map is a circle.
pub fn globe_inclusion() -> FlowMorphism {
    let x = Arc::new(glob(Arc::new(boundary_simplex(1))));
    let y = Arc::new(glob(Arc::new(standard_simplex(1))));
    glob_morphism(x, y, vec![SimplexRef::nondeg(0), SimplexRef::nondeg(1)])
}

/// `glob(dDelta[2]) -> glob(Delta[2])`: the circle into the solid triangle;
/// the cone germ space is a 2-sphere.
pub fn sphere_inclusion() -> FlowMorphism {
    let x = Arc::new(glob(Arc::new(boundary_simplex(2))));
    let y = Arc::new(glob(Arc::new(standard_simplex(2))));
    // dDelta[2]'s simplices enumerate the proper faces of Delta[2] in the
    // same construction order, so the assignment is the identity on ids.
    let assign = (0..6).map(SimplexRef::nondeg).collect();
    glob_morphism(x, y, assign)
}

/// The subdivided segment: I -> poset chain 0 < 1 < 2 hitting the ends.
pub fn subdivision_morphism() -> FlowMorphism {
    segment_morphism(Arc::new(chain3()), "0", "2", 0)
}

/// `I -> (0 --pt--> 1 --Delta[1]--> 2)` hitting the ends: in ST1 but not in
/// ST0, because the germ at state 1 is an interval, not a single point.
pub fn interval_label_morphism() -> FlowMorphism {
    let y = Arc::new(free_chain(&[pt(), Arc::new(standard_simplex(1))]));
    segment_morphism(y, "v0", "v2", 0)
}

/// I -> cube_flow(n), endpoints to the bottom and top states.
pub fn cube_endpoint_morphism(n: usize) -> FlowMorphism {
    let y = Arc::new(cube_flow(n).unwrap());
    let bottom = "0".repeat(n);
    let top = "1".repeat(n);
    // vertex 0 of the nerve is the trivial chain (chains sorted, shortest first)
    segment_morphism(y, &bottom, &top, 0)
}

/// Chain inclusion used as an ST3 counterexample: {0,2} is essential in
/// the source, its image is not essential in the longer chain.
pub fn chain_extension_morphism() -> FlowMorphism {
    let x = Arc::new(chain3());
    let y = Arc::new(
        poset_flow(
            vec!["0".into(), "1".into(), "2".into(), "3".into()],
            &[(0, 1), (1, 2), (2, 3)],
        )
        .unwrap(),
    );
    let mut maps = BTreeMap::new();
    for (&(a, b), cx) in x.pairs() {
        let tgt = y.path(a, b).unwrap().clone();
        maps.insert((a, b), SimplicialMap::new(cx.clone(), tgt, vec![SimplexRef::nondeg(0)]).unwrap());
    }
    FlowMorphism::new(x, y, vec![0, 1, 2], maps).unwrap()
}

/// The composition-failure witness: f and g pass the homology-level ST1
/// check but g . f does not.
///
/// The mechanism: Z extends `Y = (p --pt--> beta --Delta[2]--> c)` with a
/// detour beta -> n -> c whose continuations wrap a contractible zigzag
/// onto the boundary of the (p, c)-facing triangle. The germ at beta in Z
/// then crushes that boundary circle to a point, turning the triangle
/// into a 2-sphere; beta is skipped by f, so the composite fails the germ
/// condition there while f and g individually pass every clause.
pub struct CompositionWitness {
    pub f: FlowMorphism,
    pub g: FlowMorphism,
    pub composite: FlowMorphism,
}

/// The pseudo-projective plane: one vertex, one loop edge, one 2-simplex
/// whose boundary runs the loop twice (its middle face is degenerate).
/// The smallest complex with torsion: H_1 = Z/2.
pub fn pseudo_projective_plane() -> Arc<FiniteSimplicialSet> {
    let mut b = ComplexBuilder::new();
    let v = b.vertex();
    let e = b.add(1, vec![SimplexRef::nondeg(v), SimplexRef::nondeg(v)]);
    b.add(
        2,
        vec![
            SimplexRef::nondeg(e),
            SimplexRef::nondeg(v).degenerate(0),
            SimplexRef::nondeg(e),
        ],
    );
    Arc::new(b.build().unwrap())
}

/// A circle made of two edges u -> w -> u.
pub fn two_edge_circle() -> Arc<FiniteSimplicialSet> {
    let mut b = ComplexBuilder::new();
    let u = b.vertex();
    let w = b.vertex();
    b.add(1, vec![SimplexRef::nondeg(w), SimplexRef::nondeg(u)]);
    b.add(1, vec![SimplexRef::nondeg(u), SimplexRef::nondeg(w)]);
    Arc::new(b.build().unwrap())
}

/// A circle made of one loop edge.
pub fn loop_circle() -> Arc<FiniteSimplicialSet> {
    let mut b = ComplexBuilder::new();
    let v = b.vertex();
    b.add(1, vec![SimplexRef::nondeg(v), SimplexRef::nondeg(v)]);
    Arc::new(b.build().unwrap())
}

/// Globe morphism wrapping the two-edge circle twice around the loop
/// circle. The cone of its germ map is the pseudo-projective plane, so
/// the long exact sequence of its cone carries Z/2 torsion.
pub fn degree_two_circle_morphism() -> FlowMorphism {
    let x = Arc::new(glob(two_edge_circle()));
    let y = Arc::new(glob(loop_circle()));
    glob_morphism(
        x,
        y,
        vec![
            SimplexRef::nondeg(0),
            SimplexRef::nondeg(0),
            SimplexRef::nondeg(1),
            SimplexRef::nondeg(1),
        ],
    )
}

/// Zigzag w0 -> w1 -> w2 <- w3: a contractible 1-complex that maps onto
/// the triangle boundary.
fn zigzag() -> Arc<FiniteSimplicialSet> {
    let mut b = ComplexBuilder::new();
    let w0 = b.vertex();
    let w1 = b.vertex();
    let w2 = b.vertex();
    let w3 = b.vertex();
    b.add(1, vec![SimplexRef::nondeg(w1), SimplexRef::nondeg(w0)]);
    b.add(1, vec![SimplexRef::nondeg(w2), SimplexRef::nondeg(w1)]);
    b.add(1, vec![SimplexRef::nondeg(w2), SimplexRef::nondeg(w3)]);
    Arc::new(b.build().unwrap())
}

/// The wrap of the zigzag onto the boundary of Delta[2]
/// (vertices 0,1,2; edges [0,1]=3, [0,2]=4, [1,2]=5 in construction order).
fn zigzag_wrap_assignments() -> Vec<SimplexRef> {
    vec![
        SimplexRef::nondeg(0), // w0 -> v0
        SimplexRef::nondeg(1), // w1 -> v1
        SimplexRef::nondeg(2), // w2 -> v2
        SimplexRef::nondeg(0), // w3 -> v0
        SimplexRef::nondeg(3), // w0w1 -> [v0,v1]
        SimplexRef::nondeg(5), // w1w2 -> [v1,v2]
        SimplexRef::nondeg(4), // w3w2 -> [v0,v2]
    ]
}

/// The presented flow Z of the composition witness (public so the battery
/// exercises the coequalizer on a flow with nontrivial identifications).
pub fn witness_target() -> Arc<Flow> {
    let triangle = Arc::new(standard_simplex(2));
    let zig = zigzag();
    let wrap = zigzag_wrap_assignments();
    let mut b = FlowBuilder::new(vec!["beta".into(), "c".into(), "n".into(), "p".into()])
        .unwrap();
    let (beta, c, n, p) = (0usize, 1usize, 2usize, 3usize);
    b.set_path(p, beta, pt());
    b.set_path(beta, n, pt());
    b.set_path(p, n, pt());
    b.set_path(n, c, zig.clone());
    b.set_path(beta, c, triangle.clone());
    b.set_path(p, c, triangle.clone());

    // e * s = es
    let prod = b.composition_product(p, beta, n).unwrap();
    let assign = prod.complex.all_simplices().map(|_| SimplexRef::nondeg(0)).collect();
    b.set_composition(p, beta, n, assign);
    // e * a = a: the product pt x Delta[2] retracts onto the triangle
    let prod = b.composition_product(p, beta, c).unwrap();
    let assign = prod
        .complex
        .all_simplices()
        .map(|s| SimplexRef::nondeg(prod.tuple(s)[1].base))
        .collect();
    b.set_composition(p, beta, c, assign);
    // s * r = wrap(r) and es * r = wrap(r)
    for (a, m) in [(beta, n), (p, n)] {
        let prod = b.composition_product(a, m, c).unwrap();
        let assign = prod
            .complex
            .all_simplices()
            .map(|s| wrap[prod.tuple(s)[1].base].clone())
            .collect();
        b.set_composition(a, m, c, assign);
    }
    b.provenance(Provenance::Presented);
    let z = b.build().unwrap();
    debug_assert!(z.validate().is_ok());
    Arc::new(z)
}

pub fn composition_witness() -> CompositionWitness {
    let triangle = Arc::new(standard_simplex(2));
    // Y: p --pt--> beta --Delta[2]--> c as a free flow
    let y = Arc::new(
        free_flow(LabeledDigraph {
            vertices: vec!["beta".into(), "c".into(), "p".into()],
            edges: vec![
                LabeledEdge { name: "e".into(), src: 2, dst: 0, label: pt() },
                LabeledEdge { name: "F".into(), src: 0, dst: 1, label: triangle.clone() },
            ],
        })
        .unwrap(),
    );
    let z = witness_target();
    let x = Arc::new(glob(triangle.clone()));

    let (yp, ybeta, yc) = (
        y.state_index("p").unwrap(),
        y.state_index("beta").unwrap(),
        y.state_index("c").unwrap(),
    );
    let (zp, zbeta, zn, zc) = (
        z.state_index("p").unwrap(),
        z.state_index("beta").unwrap(),
        z.state_index("n").unwrap(),
        z.state_index("c").unwrap(),
    );
    let _ = zn;

    // f: glob(Delta[2]) -> Y onto the composite path space P(p, c)
    let f = {
        let target = y.path(yp, yc).unwrap().clone();
        // P(p,c) of the free flow is the product pt x Delta[2]; simplices
        // follow the triangle's per-dimension order.
        let assign = (0..triangle.simplex_count())
            .map(|s| {
                let d = triangle.dim_of(s);
                let i = triangle.simplices_of_dim(d).iter().position(|&x| x == s).unwrap();
                SimplexRef::nondeg(target.simplices_of_dim(d)[i])
            })
            .collect();
        let pm = SimplicialMap::new(x.path(0, 1).unwrap().clone(), target, assign).unwrap();
        let mut maps = BTreeMap::new();
        maps.insert((0, 1), pm);
        FlowMorphism::new(x.clone(), y.clone(), vec![yp, yc], maps).unwrap()
    };

    // g: Y -> Z: identity on p, beta, c; the triangle path spaces map by
    // the identity, the (p, c) product collapses onto its second factor.
    let g = {
        let mut maps = BTreeMap::new();
        let id_on = |src: &Arc<FiniteSimplicialSet>, dst: &Arc<FiniteSimplicialSet>| {
            let assign = src.all_simplices().map(SimplexRef::nondeg).collect();
            SimplicialMap::new(src.clone(), dst.clone(), assign).unwrap()
        };
        maps.insert(
            (yp, ybeta),
            id_on(y.path(yp, ybeta).unwrap(), z.path(zp, zbeta).unwrap()),
        );
        maps.insert(
            (ybeta, yc),
            id_on(y.path(ybeta, yc).unwrap(), z.path(zbeta, zc).unwrap()),
        );
        let proj = {
            let src = y.path(yp, yc).unwrap().clone();
            let dst = z.path(zp, zc).unwrap().clone();
            let assign = (0..triangle.simplex_count())
                .map(|s| {
                    let d = triangle.dim_of(s);
                    let i = src.simplices_of_dim(d).iter().position(|&x| x == s);
                    // src follows the triangle's order by construction
                    let i = i.unwrap_or_else(|| {
                        triangle.simplices_of_dim(d).iter().position(|&x| x == s).unwrap()
                    });
                    SimplexRef::nondeg(dst.simplices_of_dim(d)[i])
                })
                .collect();
            SimplicialMap::new(src, dst, assign).unwrap()
        };
        maps.insert((yp, yc), proj);
        FlowMorphism::new(y.clone(), z.clone(), vec![zbeta, zc, zp], maps).unwrap()
    };

    let composite = FlowMorphism::compose(&g, &f).unwrap();
    CompositionWitness { f, g, composite }
}

/// Morphisms whose long exact sequences the acceptance run verifies; all
/// have nonempty branching space on the source side.
pub fn les_battery() -> Vec<(String, FlowMorphism)> {
    vec![
        ("identity-glob-two-points".into(), {
            let x = Arc::new(glob(Arc::new(boundary_simplex(1))));
            FlowMorphism::identity(x)
        }),
        ("globe-inclusion".into(), globe_inclusion()),
        ("sphere-inclusion".into(), sphere_inclusion()),
        ("subdivision".into(), subdivision_morphism()),
        ("interval-label".into(), interval_label_morphism()),
        ("segment-into-cube2".into(), cube_endpoint_morphism(2)),
        ("identity-segment".into(), FlowMorphism::identity(Arc::new(directed_segment()))),
        ("degree-two-circle".into(), degree_two_circle_morphism()),
    ]
}

/// Morphisms for the graded equivalence checks.
pub fn st_battery() -> Vec<(String, FlowMorphism)> {
    vec![
        ("subdivision".into(), subdivision_morphism()),
        ("interval-label".into(), interval_label_morphism()),
        ("identity-chain3".into(), FlowMorphism::identity(Arc::new(chain3()))),
        ("segment-into-cube2".into(), cube_endpoint_morphism(2)),
        ("chain-extension".into(), chain_extension_morphism()),
        ("globe-inclusion".into(), globe_inclusion()),
    ]
}
