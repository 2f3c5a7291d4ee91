//! Graded dihomotopy equivalence checks.
//!
//! The checks grade how much a morphism is allowed to forget: a plain
//! equivalence onto the restriction to its image, triviality of the germ
//! spaces at skipped states (singletons, then homology points, then
//! homology points of the homotopy germ spaces), and the surrounded
//! condition that keeps skipped states reachable both ways. "Weakly
//! contractible" and "weak homotopy equivalence" are replaced throughout
//! by homology-level conditions, which are necessary but not sufficient;
//! every verdict carries that note.

use crate::branching::{
    branching_space, homotopy_germ_space, merging_space, GermSpace, Mode, Side,
};
use crate::chains::{homology, is_homology_point, normalized_chains, pi0, AbelianGroup};
use crate::flow::{restrict, Flow, FlowError, FlowMorphism};
use crate::simplicial::FiniteSimplicialSet;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub const SEMI_DECISION_NOTE: &str = "weak equivalence and contractibility are checked at \
     homology level (components and integral homology); these conditions are necessary but \
     not sufficient for the homotopy-level statements";

/// `a` is surrounded by `b`: every state of `a` is in `b` or admits a
/// nonconstant path from `b` into it and from it back into `b`.
pub fn surrounded(x: &Flow, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
    a.iter().all(|&alpha| {
        if b.contains(&alpha) {
            return true;
        }
        let incoming = b.iter().any(|&beta| x.path(beta, alpha).is_some());
        let outgoing = b.iter().any(|&beta| x.path(alpha, beta).is_some());
        incoming && outgoing
    })
}

pub fn all_states(x: &Flow) -> BTreeSet<usize> {
    (0..x.state_count()).collect()
}

/// Breakdown of the homology-level weak S-equivalence check: bijective on
/// states, bijective on path components, isomorphisms on integral
/// homology up to the larger path-space dimension.
#[derive(Debug, serde::Serialize)]
pub struct SEquivalenceBreakdown {
    pub states_bijective: bool,
    pub components_bijective: bool,
    pub homology_isomorphic: bool,
    pub failing_degree: Option<usize>,
    pub overall: bool,
    pub semi_decision_note: String,
}

pub fn is_homology_s_equivalence(f: &FlowMorphism) -> SEquivalenceBreakdown {
    let states_bijective = {
        let image: BTreeSet<usize> = f.state_map().iter().copied().collect();
        image.len() == f.source.state_count() && image.len() == f.target.state_count()
    };
    let src = crate::branching::assemble_path_space(&f.source);
    let tgt = crate::branching::assemble_path_space(&f.target);
    let map = if states_bijective {
        Some(crate::branching::assembled_path_map(f, &src, &tgt))
    } else {
        None
    };

    let mut components_bijective = false;
    let mut homology_isomorphic = true;
    let mut failing_degree = None;
    if let Some(map) = &map {
        let src_parts = pi0(&src.complex);
        let tgt_parts = pi0(&tgt.complex);
        let mut hit = BTreeSet::new();
        for part in &src_parts {
            let img = map.apply(part[0]);
            let class = tgt_parts
                .iter()
                .position(|p| p.contains(&img.base))
                .expect("vertex image lands in a component");
            hit.insert(class);
        }
        components_bijective =
            src_parts.len() == tgt_parts.len() && hit.len() == tgt_parts.len();

        let top = src
            .complex
            .dimension()
            .max(tgt.complex.dimension())
            .map_or(0, |d| d);
        let cs = normalized_chains(&src.complex);
        let ct = normalized_chains(&tgt.complex);
        for d in 0..=top {
            let hs = crate::chains::HomologyBasis::compute(&cs, d as i64);
            let ht = crate::chains::HomologyBasis::compute(&ct, d as i64);
            let same_group = hs.group() == ht.group();
            let onto = {
                let m = crate::chains::chain_map_matrix(map, d);
                let induced = crate::chains::induced_on_homology(&m, &hs, &ht);
                crate::chains::surjective(&induced, ht.group())
            };
            // a surjective endomorphism-shaped map between isomorphic
            // finitely generated abelian groups is an isomorphism
            if !(same_group && onto) {
                homology_isomorphic = false;
                failing_degree = Some(d);
                break;
            }
        }
    } else {
        homology_isomorphic = false;
    }
    let overall = states_bijective && components_bijective && homology_isomorphic;
    SEquivalenceBreakdown {
        states_bijective,
        components_bijective,
        homology_isomorphic,
        failing_degree,
        overall,
        semi_decision_note: SEMI_DECISION_NOTE.to_string(),
    }
}

/// The corestriction X -> Y|f(X0) of a morphism with injective state map.
pub fn corestrict_to_image(f: &FlowMorphism) -> Result<FlowMorphism, FlowError> {
    let image: BTreeSet<usize> = f.state_map().iter().copied().collect();
    let keep: Vec<String> =
        image.iter().map(|&s| f.target.state_name(s).to_string()).collect();
    let restricted = Arc::new(restrict(&f.target, &keep)?);
    let state_map: Vec<usize> = f
        .state_map()
        .iter()
        .map(|&s| restricted.state_index(f.target.state_name(s)).unwrap())
        .collect();
    let mut path_maps = BTreeMap::new();
    for (&(a, b), _) in f.source.pairs() {
        let pm = f.path_map(a, b).expect("path map present");
        path_maps.insert((a, b), pm.clone());
    }
    FlowMorphism::new(f.source.clone(), restricted, state_map, path_maps)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum StClass {
    St0,
    St1,
    St2,
}

impl StClass {
    pub fn label(&self) -> &'static str {
        match self {
            StClass::St0 => "ST0",
            StClass::St1 => "ST1",
            StClass::St2 => "ST2",
        }
    }
}

/// Verdict for the graded equivalence checks, with the per-clause
/// breakdown each class definition calls for.
#[derive(Debug, serde::Serialize)]
pub struct StClassVerdict {
    pub class_label: String,
    pub overall: bool,
    pub state_injective: bool,
    pub restriction_equivalence: bool,
    pub germ_condition: bool,
    pub offending_states: Vec<String>,
    pub surrounded_condition: bool,
    pub semi_decision_note: String,
}

fn singleton(c: &FiniteSimplicialSet) -> bool {
    c.count_in_dim(0) == 1 && c.dimension() == Some(0)
}

/// Shared clause evaluation; the classes differ only in the condition put
/// on the germ components at skipped states.
fn check_st(
    f: &FlowMorphism,
    class: StClass,
    mode: Mode,
) -> Result<StClassVerdict, FlowError> {
    let image: BTreeSet<usize> = f.state_map().iter().copied().collect();
    let state_injective = image.len() == f.source.state_count();

    let restriction_equivalence = if state_injective {
        corestrict_to_image(f)
            .map(|g| is_homology_s_equivalence(&g).overall)
            .unwrap_or(false)
    } else {
        false
    };

    let (bm, mm): (GermSpace, GermSpace) = match class {
        StClass::St0 | StClass::St1 => (branching_space(&f.target), merging_space(&f.target)),
        StClass::St2 => (
            homotopy_germ_space(&f.target, Side::Minus, mode)?,
            homotopy_germ_space(&f.target, Side::Plus, mode)?,
        ),
    };
    let mut offending = Vec::new();
    for alpha in 0..f.target.state_count() {
        if image.contains(&alpha) {
            continue;
        }
        let minus = bm.component(alpha);
        let plus = mm.component(alpha);
        let ok = match class {
            StClass::St0 => singleton(&minus) && singleton(&plus),
            StClass::St1 | StClass::St2 => {
                is_homology_point(&minus) && is_homology_point(&plus)
            }
        };
        if !ok {
            offending.push(f.target.state_name(alpha).to_string());
        }
    }
    let germ_condition = offending.is_empty();
    let surrounded_condition = surrounded(&f.target, &all_states(&f.target), &image);
    Ok(StClassVerdict {
        class_label: class.label().to_string(),
        overall: state_injective
            && restriction_equivalence
            && germ_condition
            && surrounded_condition,
        state_injective,
        restriction_equivalence,
        germ_condition,
        offending_states: offending,
        surrounded_condition,
        semi_decision_note: SEMI_DECISION_NOTE.to_string(),
    })
}

pub fn check_st0(f: &FlowMorphism) -> StClassVerdict {
    check_st(f, StClass::St0, Mode::Permissive).expect("st0 does not touch hoP")
}

pub fn check_st1(f: &FlowMorphism) -> StClassVerdict {
    check_st(f, StClass::St1, Mode::Permissive).expect("st1 does not touch hoP")
}

pub fn check_st2(f: &FlowMorphism, mode: Mode) -> Result<StClassVerdict, FlowError> {
    check_st(f, StClass::St2, mode)
}

/// Hard guard on subset enumeration.
pub const ESSENTIAL_STATE_GUARD: usize = 12;

/// Per-flow analysis backing the essential-subset predicates: for every
/// state, whether its homotopy branching and merging germs are homology
/// points.
pub struct EssentialAnalysis {
    flow_states: usize,
    minus_ok: Vec<bool>,
    plus_ok: Vec<bool>,
}

impl EssentialAnalysis {
    pub fn new(x: &Flow, mode: Mode) -> Result<EssentialAnalysis, FlowError> {
        if x.state_count() > ESSENTIAL_STATE_GUARD {
            return Err(FlowError::SizeGuard(format!(
                "essential-subset analysis is limited to {} states, got {}",
                ESSENTIAL_STATE_GUARD,
                x.state_count()
            )));
        }
        let bm = homotopy_germ_space(x, Side::Minus, mode)?;
        let mm = homotopy_germ_space(x, Side::Plus, mode)?;
        let minus_ok =
            (0..x.state_count()).map(|s| is_homology_point(&bm.component(s))).collect();
        let plus_ok =
            (0..x.state_count()).map(|s| is_homology_point(&mm.component(s))).collect();
        Ok(EssentialAnalysis { flow_states: x.state_count(), minus_ok, plus_ok })
    }

    /// States that every essential subset must contain.
    pub fn mandatory_core(&self) -> BTreeSet<usize> {
        (0..self.flow_states)
            .filter(|&s| !(self.minus_ok[s] && self.plus_ok[s]))
            .collect()
    }
}

/// A subset is essential when the whole state set is surrounded by it and
/// every skipped state has homology-point germs on both sides.
pub fn is_essential(
    x: &Flow,
    analysis: &EssentialAnalysis,
    a: &BTreeSet<usize>,
) -> bool {
    let germs_ok = (0..x.state_count())
        .filter(|s| !a.contains(s))
        .all(|s| analysis.minus_ok[s] && analysis.plus_ok[s]);
    germs_ok && surrounded(x, &all_states(x), a)
}

/// All essential subsets, with the minimal ones flagged. Essentiality is
/// monotone (both clauses only get easier for supersets), so enumeration
/// starts from the mandatory core and minimality is a single-removal
/// check.
pub fn essential_subsets(
    x: &Flow,
    mode: Mode,
) -> Result<Vec<(BTreeSet<usize>, bool)>, FlowError> {
    let analysis = EssentialAnalysis::new(x, mode)?;
    let core = analysis.mandatory_core();
    let optional: Vec<usize> = (0..x.state_count()).filter(|s| !core.contains(s)).collect();
    let mut found = Vec::new();
    for mask in 0..(1usize << optional.len()) {
        let mut a = core.clone();
        for (i, &s) in optional.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a.insert(s);
            }
        }
        if is_essential(x, &analysis, &a) {
            found.push(a);
        }
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let flagged: Vec<(BTreeSet<usize>, bool)> = found
        .iter()
        .map(|a| {
            let minimal = a.iter().all(|&drop| {
                let mut smaller = a.clone();
                smaller.remove(&drop);
                !is_essential(x, &analysis, &smaller)
            });
            (a.clone(), minimal)
        })
        .collect();
    Ok(flagged)
}

/// Verdict for the essential-subset based equivalence check.
#[derive(Debug, serde::Serialize)]
pub struct St3Verdict {
    pub overall: bool,
    pub clause1: bool,
    /// a subset essential on exactly one side, with the two answers
    pub clause1_witness: Option<(Vec<String>, bool, bool)>,
    pub clause2: bool,
    /// an essential subset with no essential restriction-equivalent part
    pub clause2_witness: Option<Vec<String>>,
    /// for each essential subset of the source, a witness part
    pub witnesses: Vec<(Vec<String>, Vec<String>)>,
    pub semi_decision_note: String,
}

pub fn check_st3(f: &FlowMorphism, mode: Mode) -> Result<St3Verdict, FlowError> {
    let ax = EssentialAnalysis::new(&f.source, mode)?;
    let ay = EssentialAnalysis::new(&f.target, mode)?;
    let n = f.source.state_count();
    let names = |a: &BTreeSet<usize>, flow: &Flow| -> Vec<String> {
        a.iter().map(|&s| flow.state_name(s).to_string()).collect()
    };

    let mut clause1 = true;
    let mut clause1_witness = None;
    let mut essential_in_x: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 0..(1usize << n) {
        let a: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let fa: BTreeSet<usize> = a.iter().map(|&i| f.state_map()[i]).collect();
        let ex = is_essential(&f.source, &ax, &a);
        let ey = is_essential(&f.target, &ay, &fa);
        if ex != ey {
            clause1 = false;
            if clause1_witness.is_none() {
                clause1_witness = Some((names(&a, &f.source), ex, ey));
            }
        }
        if ex {
            essential_in_x.push(a);
        }
    }

    let mut clause2 = true;
    let mut clause2_witness = None;
    let mut witnesses = Vec::new();
    for a in &essential_in_x {
        let mut found = None;
        // subsets of a, smallest first so the witness is a minimal one
        let elems: Vec<usize> = a.iter().copied().collect();
        let mut candidates: Vec<BTreeSet<usize>> = (0..(1usize << elems.len()))
            .map(|mask| {
                (0..elems.len()).filter(|&i| mask >> i & 1 == 1).map(|i| elems[i]).collect()
            })
            .collect();
        candidates.sort_by_key(|b: &BTreeSet<usize>| b.len());
        for b in candidates {
            if !is_essential(&f.source, &ax, &b) {
                continue;
            }
            if restricted_equivalence(f, &b)? {
                found = Some(b);
                break;
            }
        }
        match found {
            Some(b) => witnesses.push((names(a, &f.source), names(&b, &f.source))),
            None => {
                clause2 = false;
                if clause2_witness.is_none() {
                    clause2_witness = Some(names(a, &f.source));
                }
            }
        }
    }
    Ok(St3Verdict {
        overall: clause1 && clause2,
        clause1,
        clause1_witness,
        clause2,
        clause2_witness,
        witnesses,
        semi_decision_note: SEMI_DECISION_NOTE.to_string(),
    })
}

/// Is the restriction f : X|B -> Y|f(B) a homology S-equivalence?
fn restricted_equivalence(f: &FlowMorphism, b: &BTreeSet<usize>) -> Result<bool, FlowError> {
    let src_names: Vec<String> =
        b.iter().map(|&s| f.source.state_name(s).to_string()).collect();
    let tgt_states: BTreeSet<usize> = b.iter().map(|&s| f.state_map()[s]).collect();
    let tgt_names: Vec<String> =
        tgt_states.iter().map(|&s| f.target.state_name(s).to_string()).collect();
    let rs = Arc::new(restrict(&f.source, &src_names)?);
    let rt = Arc::new(restrict(&f.target, &tgt_names)?);
    let state_map: Vec<usize> = (0..rs.state_count())
        .map(|i| {
            let orig = f.source.state_index(rs.state_name(i)).unwrap();
            rt.state_index(f.target.state_name(f.state_map()[orig])).unwrap()
        })
        .collect();
    let mut path_maps = BTreeMap::new();
    for (&(a, c), _) in rs.pairs() {
        let (oa, oc) = (
            f.source.state_index(rs.state_name(a)).unwrap(),
            f.source.state_index(rs.state_name(c)).unwrap(),
        );
        path_maps.insert((a, c), f.path_map(oa, oc).expect("pair kept by restriction").clone());
    }
    let g = FlowMorphism::new(rs, rt, state_map, path_maps)?;
    Ok(is_homology_s_equivalence(&g).overall)
}

/// Convenience: homology groups of a germ component (for reports).
pub fn component_homology(c: &FiniteSimplicialSet, max_dim: usize) -> Vec<AbelianGroup> {
    let ch = normalized_chains(c);
    (0..=max_dim).map(|d| homology(&ch, d as i64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{boundary_simplex, point, standard_simplex};
    use crate::flow::{
        directed_segment, free_flow, glob, poset_flow, LabeledDigraph, LabeledEdge,
    };
    use crate::simplicial::{SimplexRef, SimplicialMap};

    fn chain3() -> Flow {
        poset_flow(vec!["0".into(), "1".into(), "2".into()], &[(0, 1), (1, 2)]).unwrap()
    }

    fn seg_to_chain3() -> FlowMorphism {
        let x = Arc::new(directed_segment());
        let y = Arc::new(chain3());
        let pm = SimplicialMap::new(
            x.path(0, 1).unwrap().clone(),
            y.path(0, 2).unwrap().clone(),
            vec![SimplexRef::nondeg(0)],
        )
        .unwrap();
        let mut maps = BTreeMap::new();
        maps.insert((0, 1), pm);
        FlowMorphism::new(x, y, vec![0, 2], maps).unwrap()
    }

    #[test]
    fn surrounded_examples() {
        let f = chain3();
        let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
        // a subset of b: first disjunct
        assert!(surrounded(&f, &set(&[0]), &set(&[0, 1])));
        // {1} surrounded by {0,2}: paths (0,1) and (1,2)
        assert!(surrounded(&f, &set(&[1]), &set(&[0, 2])));
        // {0} not surrounded by {2}: no incoming path to 0
        assert!(!surrounded(&f, &set(&[0]), &set(&[2])));
    }

    #[test]
    fn surrounded_monotone_in_second_argument() {
        let f = chain3();
        let all: Vec<BTreeSet<usize>> = (0..8u32)
            .map(|m| (0..3).filter(|&i| m >> i & 1 == 1).collect())
            .collect();
        for a in &all {
            for b in &all {
                for b2 in &all {
                    if b.is_subset(b2) && surrounded(&f, a, b) {
                        assert!(surrounded(&f, a, b2));
                    }
                }
            }
        }
    }

    #[test]
    fn homology_s_equivalence_examples() {
        // identity
        let x = Arc::new(chain3());
        assert!(is_homology_s_equivalence(&FlowMorphism::identity(x)).overall);

        // collapse glob(Delta[1]) -> glob(Delta[0]): an equivalence
        let a = Arc::new(glob(Arc::new(standard_simplex(1))));
        let b = Arc::new(glob(Arc::new(point())));
        let collapse = SimplicialMap::new(
            a.path(0, 1).unwrap().clone(),
            b.path(0, 1).unwrap().clone(),
            vec![
                SimplexRef::nondeg(0),
                SimplexRef::nondeg(0),
                SimplexRef::nondeg(0).degenerate(0),
            ],
        )
        .unwrap();
        let mut maps = BTreeMap::new();
        maps.insert((0, 1), collapse);
        let f = FlowMorphism::new(a, b.clone(), vec![0, 1], maps).unwrap();
        assert!(is_homology_s_equivalence(&f).overall);

        // glob(S^0) -> glob(point): two components to one
        let s = Arc::new(glob(Arc::new(boundary_simplex(1))));
        let fold = SimplicialMap::new(
            s.path(0, 1).unwrap().clone(),
            b.path(0, 1).unwrap().clone(),
            vec![SimplexRef::nondeg(0), SimplexRef::nondeg(0)],
        )
        .unwrap();
        let mut maps = BTreeMap::new();
        maps.insert((0, 1), fold);
        let f = FlowMorphism::new(s, b, vec![0, 1], maps).unwrap();
        let v = is_homology_s_equivalence(&f);
        assert!(!v.overall);
        assert!(!v.components_bijective);
    }

    #[test]
    fn st0_subdivided_segment() {
        let f = seg_to_chain3();
        let v = check_st0(&f);
        assert!(v.overall, "{:?}", v);
        let v1 = check_st1(&f);
        assert!(v1.overall);
        let v2 = check_st2(&f, Mode::Strict).unwrap();
        assert!(v2.overall);
    }

    #[test]
    fn interval_label_is_st1_not_st0() {
        // I -> free flow 0 ->(pt) 1 ->(Delta[1]) 2, endpoints to 0 and 2
        let y = Arc::new(
            free_flow(LabeledDigraph {
                vertices: vec!["0".into(), "1".into(), "2".into()],
                edges: vec![
                    LabeledEdge {
                        name: "e1".into(),
                        src: 0,
                        dst: 1,
                        label: Arc::new(point()),
                    },
                    LabeledEdge {
                        name: "e2".into(),
                        src: 1,
                        dst: 2,
                        label: Arc::new(standard_simplex(1)),
                    },
                ],
            })
            .unwrap(),
        );
        let x = Arc::new(directed_segment());
        // map the unique path of I to a vertex of P(0,2) = pt x Delta[1]
        let target = y.path(0, 2).unwrap().clone();
        let pm = SimplicialMap::new(
            x.path(0, 1).unwrap().clone(),
            target,
            vec![SimplexRef::nondeg(0)],
        )
        .unwrap();
        let mut maps = BTreeMap::new();
        maps.insert((0, 1), pm);
        let f = FlowMorphism::new(x, y, vec![0, 2], maps).unwrap();
        let v0 = check_st0(&f);
        assert!(!v0.overall);
        assert_eq!(v0.offending_states, vec!["1".to_string()]);
        let v1 = check_st1(&f);
        assert!(v1.overall, "{:?}", v1);
    }

    #[test]
    fn identity_is_in_every_class() {
        let x = Arc::new(chain3());
        let id = FlowMorphism::identity(x);
        assert!(check_st0(&id).overall);
        assert!(check_st1(&id).overall);
        assert!(check_st2(&id, Mode::Strict).unwrap().overall);
        let v3 = check_st3(&id, Mode::Strict).unwrap();
        assert!(v3.overall, "{:?}", v3);
    }

    #[test]
    fn essential_subsets_of_chain() {
        let x = chain3();
        let subsets = essential_subsets(&x, Mode::Strict).unwrap();
        let as_names: Vec<Vec<usize>> = subsets
            .iter()
            .map(|(a, _)| a.iter().copied().collect())
            .collect();
        // {0,2} essential ({1} has point germs both sides); {0,1,2} too
        assert!(as_names.contains(&vec![0, 2]));
        assert!(as_names.contains(&vec![0, 1, 2]));
        // {2} is not essential: 0 is not surrounded
        assert!(!as_names.contains(&vec![2]));
        // minimal flag: {0,2} minimal, the full set not
        for (a, minimal) in &subsets {
            let v: Vec<usize> = a.iter().copied().collect();
            if v == vec![0, 2] {
                assert!(minimal);
            }
            if v == vec![0, 1, 2] {
                assert!(!minimal);
            }
        }
    }

    #[test]
    fn cube2_corners_are_essential() {
        // the intermediate germ spaces of the square are homology points,
        // so the two corners already carry the essential structure
        let c = crate::flow::cube_flow(2).unwrap();
        let subsets = essential_subsets(&c, Mode::Strict).unwrap();
        let corners: BTreeSet<usize> = ["00", "11"]
            .iter()
            .map(|n| c.state_index(n).unwrap())
            .collect();
        assert!(subsets.iter().any(|(a, minimal)| a == &corners && *minimal));
    }

    #[test]
    fn antichain_only_full_set_essential() {
        let x = poset_flow(vec!["a".into(), "b".into()], &[]).unwrap();
        let subsets = essential_subsets(&x, Mode::Strict).unwrap();
        assert_eq!(subsets.len(), 1);
        assert_eq!(subsets[0].0.len(), 2);
    }

    #[test]
    fn single_state_flow_essential() {
        let x = poset_flow(vec!["s".into()], &[]).unwrap();
        let subsets = essential_subsets(&x, Mode::Strict).unwrap();
        assert_eq!(subsets.len(), 1);
        assert!(subsets[0].1);
    }

    #[test]
    fn full_state_set_always_essential() {
        for x in [chain3(), crate::flow::cube_flow(2).unwrap(), directed_segment()] {
            let analysis = EssentialAnalysis::new(&x, Mode::Permissive).unwrap();
            assert!(is_essential(&x, &analysis, &all_states(&x)));
        }
    }

    #[test]
    fn st3_on_subdivision_with_full_witness() {
        let f = seg_to_chain3();
        let v = check_st3(&f, Mode::Strict).unwrap();
        assert!(v.overall, "{:?}", v);
        assert!(!v.witnesses.is_empty());
    }

    #[test]
    fn st3_fails_when_essential_image_is_not_essential() {
        // inclusion of chain3 into chain4: {0,2} is essential in the
        // source but its image is not essential in the target (state 3 is
        // a sink the image cannot surround).
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
            maps.insert(
                (a, b),
                SimplicialMap::new(cx.clone(), tgt, vec![SimplexRef::nondeg(0)]).unwrap(),
            );
        }
        let f = FlowMorphism::new(x, y, vec![0, 1, 2], maps).unwrap();
        let v = check_st3(&f, Mode::Strict).unwrap();
        assert!(!v.overall);
        assert!(!v.clause1);
        assert!(v.clause1_witness.is_some());
    }

    #[test]
    fn st_hierarchy_on_fixture_morphisms() {
        let fixtures = vec![seg_to_chain3()];
        for f in fixtures {
            if check_st0(&f).overall {
                assert!(check_st1(&f).overall, "ST0 must imply ST1");
            }
        }
    }
}
