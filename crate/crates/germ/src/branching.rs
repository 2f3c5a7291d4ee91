//! Branching and merging spaces of a flow.
//!
//! The branching space identifies an execution path with every way it can
//! be extended on the right: it is the coequalizer of the composition map
//! and the first projection on the space of composable pairs. The merging
//! space is the dual (second projection). Both are computed literally, as
//! quotients of the assembled path space by a congruence closure.

use crate::constructions::quotient_by_pairs;
use crate::flow::{Flow, FlowError, FlowMorphism, Provenance};
use crate::simplicial::{
    disjoint_union, subcomplex, FiniteSimplicialSet, SimplexId, SimplexRef, SimplicialMap,
};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn symbol(&self) -> &'static str {
        match self {
            Side::Minus => "-",
            Side::Plus => "+",
        }
    }
}

/// Cofibrancy handling for the homotopy variants.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Strict,
    Permissive,
}

/// The total path space of a flow, assembled as one simplicial set with a
/// record of which state pair every simplex came from.
pub struct PathSpaceAssembly {
    pub complex: Arc<FiniteSimplicialSet>,
    /// per assembled nondegenerate simplex: the (source, target) pair
    pub pair_of: Vec<(usize, usize)>,
    /// per assembled nondegenerate simplex: its id in the pair's complex
    pub local_of: Vec<SimplexId>,
    /// per state pair: local id -> assembled id
    pub offsets: BTreeMap<(usize, usize), Vec<SimplexId>>,
}

impl PathSpaceAssembly {
    pub fn translate(&self, pair: (usize, usize), r: &SimplexRef) -> SimplexRef {
        SimplexRef { base: self.offsets[&pair][r.base], word: r.word.clone() }
    }
}

pub fn assemble_path_space(x: &Flow) -> PathSpaceAssembly {
    let parts: Vec<(&(usize, usize), &Arc<FiniteSimplicialSet>)> = x.pairs().collect();
    let complexes: Vec<&FiniteSimplicialSet> = parts.iter().map(|(_, c)| c.as_ref()).collect();
    let du = disjoint_union(&complexes);
    let mut pair_of = vec![(0usize, 0usize); du.complex.simplex_count()];
    let mut local_of = vec![0usize; du.complex.simplex_count()];
    let mut offsets = BTreeMap::new();
    for (i, (&pair, _)) in parts.iter().enumerate() {
        for (local, &global) in du.offsets[i].iter().enumerate() {
            pair_of[global] = pair;
            local_of[global] = local;
        }
        offsets.insert(pair, du.offsets[i].clone());
    }
    PathSpaceAssembly { complex: du.complex, pair_of, local_of, offsets }
}

/// A branching or merging space: the germ complex, its decomposition by
/// state, and the coequalizing projection from the path space.
pub struct GermSpace {
    pub side: Side,
    pub total: Arc<FiniteSimplicialSet>,
    pub assembly: Arc<PathSpaceAssembly>,
    /// quotient projection from the assembled path space
    pub projection: SimplicialMap,
    /// per nondegenerate simplex of `total`: the state its germs sit at
    pub state_of: Vec<usize>,
    /// per nondegenerate simplex of `total`: a nondegenerate preimage in
    /// the assembled path space (the least one)
    pub class_rep: Vec<SimplexId>,
    pub warnings: Vec<String>,
}

impl GermSpace {
    /// Sub-simplicial set of germs at one state.
    pub fn component(&self, state: usize) -> Arc<FiniteSimplicialSet> {
        let keep: Vec<SimplexId> = self
            .total
            .all_simplices()
            .filter(|&s| self.state_of[s] == state)
            .collect();
        subcomplex(&self.total, &keep).complex
    }

    /// States that carry at least one germ.
    pub fn occupied_states(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.state_of.clone();
        s.sort_unstable();
        s.dedup();
        s
    }
}

fn germ_space(x: &Flow, side: Side) -> GermSpace {
    let assembly = Arc::new(assemble_path_space(x));
    let mut seeds: Vec<(SimplexRef, SimplexRef)> = Vec::new();
    for (&(a, b, c), law) in x.laws() {
        for s in law.product.complex.all_simplices() {
            let t = law.product.tuple(s);
            let composite = assembly.translate((a, c), law.map.apply(s));
            let kept = match side {
                Side::Minus => assembly.translate((a, b), &t[0]),
                Side::Plus => assembly.translate((b, c), &t[1]),
            };
            seeds.push((composite, kept));
        }
    }
    let q = quotient_by_pairs(assembly.complex.clone(), &seeds);
    let total = q.complex;
    let mut state_of = vec![usize::MAX; total.simplex_count()];
    let mut class_rep = vec![usize::MAX; total.simplex_count()];
    for s in assembly.complex.all_simplices() {
        let img = q.projection.apply(s);
        if img.is_degenerate() {
            continue;
        }
        let (src, tgt) = assembly.pair_of[s];
        let state = match side {
            Side::Minus => src,
            Side::Plus => tgt,
        };
        if state_of[img.base] == usize::MAX {
            state_of[img.base] = state;
            class_rep[img.base] = s;
        } else {
            debug_assert_eq!(
                state_of[img.base], state,
                "germ class spans two states"
            );
            class_rep[img.base] = class_rep[img.base].min(s);
        }
    }
    debug_assert!(state_of.iter().all(|&s| s != usize::MAX));
    GermSpace {
        side,
        total,
        assembly,
        projection: q.projection,
        state_of,
        class_rep,
        warnings: Vec::new(),
    }
}

/// The branching space P^-X: paths identified with their right extensions.
pub fn branching_space(x: &Flow) -> GermSpace {
    germ_space(x, Side::Minus)
}

/// The merging space P^+X: paths identified with their left extensions.
/// Computed directly from the second projection (not through the opposite
/// flow, which the tests use as an independent cross-check).
pub fn merging_space(x: &Flow) -> GermSpace {
    germ_space(x, Side::Plus)
}

pub fn germ_space_of_side(x: &Flow, side: Side) -> GermSpace {
    germ_space(x, side)
}

/// Homotopy branching space. On cofibrant flows this is the branching
/// space itself; strict mode rejects anything else, permissive mode
/// computes the plain space and attaches a warning.
pub fn homotopy_branching_space(x: &Flow, mode: Mode) -> Result<GermSpace, FlowError> {
    homotopy_germ_space(x, Side::Minus, mode)
}

pub fn homotopy_merging_space(x: &Flow, mode: Mode) -> Result<GermSpace, FlowError> {
    homotopy_germ_space(x, Side::Plus, mode)
}

pub fn homotopy_germ_space(x: &Flow, side: Side, mode: Mode) -> Result<GermSpace, FlowError> {
    if x.is_cofibrant() {
        return Ok(germ_space(x, side));
    }
    match mode {
        Mode::Strict => Err(FlowError::NonCofibrant(format!(
            "cofibrant_flag is false; the homotopy {} space is only computed for \
             constructor-built cell complexes (use permissive mode to force the plain space)",
            match side {
                Side::Minus => "branching",
                Side::Plus => "merging",
            }
        ))),
        Mode::Permissive => {
            let mut g = germ_space(x, side);
            g.warnings.push(
                "cofibrant_flag is false: computed the plain germ space, which need not \
                 have the homotopy-invariant type"
                    .to_string(),
            );
            Ok(g)
        }
    }
}

/// Closed form for the branching space of a free flow: germs at a state
/// are the labels of the edges leaving it, since every germ class
/// retracts onto its first edge.
pub fn free_branching_closed_form(x: &Flow) -> Result<GermSpace, FlowError> {
    let Provenance::Free(data) = &x.provenance else {
        return Err(FlowError::NonFreeInput);
    };
    let assembly = Arc::new(assemble_path_space(x));
    // total: for each state (sorted), the labels of its out-edges in edge order
    let mut part_list: Vec<(usize, usize)> = Vec::new(); // (state, edge index)
    for state in 0..x.state_count() {
        for (ei, e) in data.digraph.edges.iter().enumerate() {
            if e.src == state {
                part_list.push((state, ei));
            }
        }
    }
    let complexes: Vec<&FiniteSimplicialSet> = part_list
        .iter()
        .map(|&(_, ei)| data.digraph.edges[ei].label.as_ref())
        .collect();
    let du = disjoint_union(&complexes);
    let total = du.complex.clone();
    let mut state_of = vec![usize::MAX; total.simplex_count()];
    let mut edge_offset: BTreeMap<usize, Vec<SimplexId>> = BTreeMap::new();
    for (i, &(state, ei)) in part_list.iter().enumerate() {
        for &g in &du.offsets[i] {
            state_of[g] = state;
        }
        edge_offset.insert(ei, du.offsets[i].clone());
    }
    // projection: an assembled path simplex goes to the first factor of its
    // edge-path product
    let assign: Vec<SimplexRef> = assembly
        .complex
        .all_simplices()
        .map(|s| {
            let pair = assembly.pair_of[s];
            let local = assembly.local_of[s];
            let parts = &data.parts[&pair];
            let (pi, ploc) = {
                let mut found = None;
                for (pi, part) in parts.iter().enumerate() {
                    if let Some(l) = part.offset.iter().position(|&o| o == local) {
                        found = Some((pi, l));
                        break;
                    }
                }
                found.expect("assembled simplex belongs to a part")
            };
            let part = &parts[pi];
            let first_edge = part.edges[0];
            let first_ref = &part.product.tuple(ploc)[0];
            SimplexRef {
                base: edge_offset[&first_edge][first_ref.base],
                word: first_ref.word.clone(),
            }
        })
        .collect();
    let projection = SimplicialMap::new(assembly.complex.clone(), total.clone(), assign)
        .expect("closed-form projection is simplicial");
    let class_rep = vec![usize::MAX; total.simplex_count()];
    Ok(GermSpace {
        side: Side::Minus,
        total,
        assembly,
        projection,
        state_of,
        class_rep,
        warnings: Vec::new(),
    })
}

/// Outcome of checking the universal property of the germ projection
/// against a candidate coequalizing map.
pub enum UniversalPropertyVerdict {
    /// The unique factorization through the germ space.
    Factors(SimplicialMap),
    /// A composable-pair simplex on which the map fails to coequalize.
    NotCoequalizing { triple: (String, String, String), simplex: SimplexId },
}

/// Check that `phi` (defined on the assembled path space of `x`, with the
/// germ space's own assembly) coequalizes composition against the side's
/// projection, and if so produce the unique factorization through
/// `germ.total`. Uniqueness holds because the projection is surjective on
/// nondegenerate simplices.
pub fn verify_universal_property(
    x: &Flow,
    germ: &GermSpace,
    phi: &SimplicialMap,
) -> UniversalPropertyVerdict {
    // phi may carry its own copy of the assembly; the construction is
    // deterministic, so structural agreement is what matters.
    assert!(
        Arc::ptr_eq(&phi.source, &germ.assembly.complex)
            || phi.source.dump() == germ.assembly.complex.dump(),
        "phi must be defined on the flow's assembled path space"
    );
    for (&(a, b, c), law) in x.laws() {
        for s in law.product.complex.all_simplices() {
            let t = law.product.tuple(s);
            let composite = germ.assembly.translate((a, c), law.map.apply(s));
            let kept = match germ.side {
                Side::Minus => germ.assembly.translate((a, b), &t[0]),
                Side::Plus => germ.assembly.translate((b, c), &t[1]),
            };
            if phi.apply_ref(&composite) != phi.apply_ref(&kept) {
                return UniversalPropertyVerdict::NotCoequalizing {
                    triple: (
                        x.state_name(a).to_string(),
                        x.state_name(b).to_string(),
                        x.state_name(c).to_string(),
                    ),
                    simplex: s,
                };
            }
        }
    }
    let mut assign: Vec<Option<SimplexRef>> = vec![None; germ.total.simplex_count()];
    for s in germ.assembly.complex.all_simplices() {
        let img = germ.projection.apply(s);
        if img.is_degenerate() {
            continue;
        }
        let value = phi.apply(s).clone();
        match &assign[img.base] {
            None => assign[img.base] = Some(value),
            Some(v) => assert_eq!(
                v, &value,
                "coequalizing map disagrees on a germ class; congruence closure is broken"
            ),
        }
    }
    let assign: Vec<SimplexRef> = assign.into_iter().map(|a| a.expect("class has a representative")).collect();
    let factorization = SimplicialMap::new(germ.total.clone(), phi.target.clone(), assign)
        .expect("factorization through the germ space is simplicial");
    UniversalPropertyVerdict::Factors(factorization)
}

/// The germ component at one state: P^-_a X.
pub fn branching_component(x: &Flow, state: &str) -> Result<Arc<FiniteSimplicialSet>, FlowError> {
    let s = x
        .state_index(state)
        .ok_or_else(|| FlowError::UnknownState(state.to_string()))?;
    Ok(branching_space(x).component(s))
}

/// The germ component at one state on the merging side: P^+_a X.
pub fn merging_component(x: &Flow, state: &str) -> Result<Arc<FiniteSimplicialSet>, FlowError> {
    let s = x
        .state_index(state)
        .ok_or_else(|| FlowError::UnknownState(state.to_string()))?;
    Ok(merging_space(x).component(s))
}

/// The map P^-X -> P^-Y induced by a flow morphism, computing both germ
/// spaces. Use [`induced_germ_map`] to share precomputed spaces.
pub fn branching_map(f: &FlowMorphism) -> SimplicialMap {
    let gx = branching_space(&f.source);
    let gy = branching_space(&f.target);
    induced_germ_map(f, &gx, &gy)
}

/// The simplicial map P^-X -> P^-Y (or plus side) induced by a flow
/// morphism; functorial in the morphism.
pub fn induced_germ_map(
    f: &FlowMorphism,
    source_germ: &GermSpace,
    target_germ: &GermSpace,
) -> SimplicialMap {
    assert_eq!(source_germ.side, target_germ.side);
    let assign: Vec<SimplexRef> = source_germ
        .total
        .all_simplices()
        .map(|class| {
            let rep = source_germ.class_rep[class];
            let (a, b) = source_germ.assembly.pair_of[rep];
            let local = source_germ.assembly.local_of[rep];
            let pmap = f.path_map(a, b).expect("morphism covers nonempty pairs");
            let image_local = pmap.apply(local);
            let (ta, tb) = (f.state_map()[a], f.state_map()[b]);
            let image_assembled = target_germ.assembly.translate((ta, tb), image_local);
            target_germ.projection.apply_ref(&image_assembled)
        })
        .collect();
    SimplicialMap::new(source_germ.total.clone(), target_germ.total.clone(), assign)
        .expect("induced germ map is simplicial")
}

/// The map of assembled path spaces induced by a flow morphism.
pub fn assembled_path_map(
    f: &FlowMorphism,
    source_assembly: &PathSpaceAssembly,
    target_assembly: &PathSpaceAssembly,
) -> SimplicialMap {
    let assign: Vec<SimplexRef> = source_assembly
        .complex
        .all_simplices()
        .map(|s| {
            let (a, b) = source_assembly.pair_of[s];
            let local = source_assembly.local_of[s];
            let pmap = f.path_map(a, b).expect("morphism covers nonempty pairs");
            let (ta, tb) = (f.state_map()[a], f.state_map()[b]);
            target_assembly.translate((ta, tb), pmap.apply(local))
        })
        .collect();
    SimplicialMap::new(
        source_assembly.complex.clone(),
        target_assembly.complex.clone(),
        assign,
    )
    .expect("assembled path map is simplicial")
}
