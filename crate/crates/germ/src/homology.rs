//! Branching and merging homology.
//!
//! The augmented complex of a flow puts the free group on the states in
//! degree -1 under the normalized chains of the homotopy branching space,
//! with the augmentation sending a germ vertex to its state. Degree-(n-1)
//! homology of that complex is the n-th branching homology group. The
//! cone of a morphism is handled at the space level: its branching data
//! is the mapping cone of the induced germ map, and the long exact
//! sequence is assembled from chain-level matrices with the connecting
//! homomorphism given by de-suspending the cone part of a cycle.

use crate::branching::{
    homotopy_germ_space, induced_germ_map, GermSpace, Mode, Side,
};
use crate::chains::{
    chain_map_matrix, exact_at, normalized_chains, surjective, AbelianGroup,
    ChainComplex, HomologyBasis,
};
use crate::flow::{Flow, FlowError, FlowMorphism};
use crate::matrix::{IntegerMatrix, Lattice};
use crate::simplicial::{FiniteSimplicialSet, SimplexId};
use num_bigint::BigInt;
use num_traits::One;

/// Chains of a germ space augmented by the free group on all states.
pub struct AugmentedComplex {
    pub chain: ChainComplex,
    pub germ: GermSpace,
    pub state_count: usize,
}

/// Augmentation matrix: rows are states, columns are germ vertices.
fn augmentation_matrix(germ: &GermSpace, state_count: usize) -> IntegerMatrix {
    let verts = germ.total.simplices_of_dim(0);
    let mut eps = IntegerMatrix::zeros(state_count, verts.len());
    for (j, &v) in verts.iter().enumerate() {
        eps.set(germ.state_of[v], j, BigInt::one());
    }
    eps
}

fn augment(germ: GermSpace, state_count: usize) -> AugmentedComplex {
    let plain = normalized_chains(&germ.total);
    let eps = augmentation_matrix(&germ, state_count);
    let mut ranks = vec![state_count];
    ranks.extend_from_slice(&plain.ranks);
    let mut boundaries = vec![eps];
    boundaries.extend(plain.boundaries);
    let chain = ChainComplex { lowest: -1, ranks, boundaries };
    debug_assert!(chain.validate(), "augmentation does not kill boundaries");
    AugmentedComplex { chain, germ, state_count }
}

/// The augmented complex of a flow on the chosen side. Strictness follows
/// the homotopy germ space contract.
pub fn augmented_complex(x: &Flow, side: Side, mode: Mode) -> Result<AugmentedComplex, FlowError> {
    let germ = homotopy_germ_space(x, side, mode)?;
    Ok(augment(germ, x.state_count()))
}

/// The n-th branching homology group (n >= 0): degree n-1 of the
/// augmented complex.
pub fn branching_homology(x: &Flow, n: usize, mode: Mode) -> Result<AbelianGroup, FlowError> {
    let aug = augmented_complex(x, Side::Minus, mode)?;
    Ok(crate::chains::homology(&aug.chain, n as i64 - 1))
}

pub fn merging_homology(x: &Flow, n: usize, mode: Mode) -> Result<AbelianGroup, FlowError> {
    let aug = augmented_complex(x, Side::Plus, mode)?;
    Ok(crate::chains::homology(&aug.chain, n as i64 - 1))
}

/// All branching homology groups up to a degree bound.
pub fn homology_range(
    x: &Flow,
    side: Side,
    max_n: usize,
    mode: Mode,
) -> Result<Vec<AbelianGroup>, FlowError> {
    let aug = augmented_complex(x, side, mode)?;
    Ok((0..=max_n)
        .map(|n| crate::chains::homology(&aug.chain, n as i64 - 1))
        .collect())
}

/// Report for the short exact sequence
/// 0 -> H^-_1(X) -> H_0(hoP^-X) -> Z(germ components)/Ker(s) -> 0.
#[derive(Debug, serde::Serialize)]
pub struct ShortExactReport {
    pub h1_minus: AbelianGroup,
    pub h0_germ: AbelianGroup,
    pub image_presentation: AbelianGroup,
    pub injective_at_h1: bool,
    pub exact_at_h0: bool,
    pub surjective_at_image: bool,
}

impl ShortExactReport {
    pub fn holds(&self) -> bool {
        self.injective_at_h1 && self.exact_at_h0 && self.surjective_at_image
    }
}

/// Verify the short exact sequence at its two inner nodes. The third term
/// is read as the free group on germ components modulo the kernel of the
/// state assignment, i.e. the free group on the states that carry germs.
pub fn short_exact_check(x: &Flow, mode: Mode) -> Result<ShortExactReport, FlowError> {
    let aug = augmented_complex(x, Side::Minus, mode)?;
    let h1_basis = HomologyBasis::compute(&aug.chain, 0);
    let plain = normalized_chains(&aug.germ.total);
    let h0_basis = HomologyBasis::compute(&plain, 0);
    let occupied = aug.germ.occupied_states();
    let image_presentation = AbelianGroup::free(occupied.len());

    // H^-_1 -> H_0: induced by the identity on degree-0 chains
    let map1 = {
        let cols = (0..h1_basis.generator_count())
            .map(|i| h0_basis.express(&h1_basis.generator_chain(i)))
            .collect();
        IntegerMatrix::from_columns(h0_basis.generator_count(), cols)
    };
    // H_0 -> Z occupied: a germ vertex goes to its state
    let map2 = {
        let verts = aug.germ.total.simplices_of_dim(0);
        let mut chain_level = IntegerMatrix::zeros(occupied.len(), verts.len());
        for (j, &v) in verts.iter().enumerate() {
            let row = occupied
                .iter()
                .position(|&s| s == aug.germ.state_of[v])
                .expect("vertex state is occupied");
            chain_level.set(row, j, BigInt::one());
        }
        let cols = (0..h0_basis.generator_count())
            .map(|i| chain_level.mul_vec(&h0_basis.generator_chain(i)))
            .collect();
        IntegerMatrix::from_columns(occupied.len(), cols)
    };

    let zero_in = IntegerMatrix::zeros(h1_basis.generator_count(), 0);
    let injective_at_h1 = exact_at(&zero_in, h1_basis.group(), &map1, h0_basis.group());
    let exact_at_h0 = exact_at(&map1, h0_basis.group(), &map2, &image_presentation);
    let surjective_at_image = surjective(&map2, &image_presentation);
    Ok(ShortExactReport {
        h1_minus: h1_basis.group().clone(),
        h0_germ: h0_basis.group().clone(),
        image_presentation,
        injective_at_h1,
        exact_at_h0,
        surjective_at_image,
    })
}

/// Space-level branching data of the cone of a morphism: the mapping cone
/// of the induced germ map, with the cone's states (the target states
/// with the image of the source states collapsed to one class `*`) and
/// the augmentation for cone germ vertices.
pub struct ConeBranchingData {
    pub source_germ: GermSpace,
    pub target_germ: GermSpace,
    pub germ_map: crate::simplicial::SimplicialMap,
    pub cone: crate::constructions::MappingCone,
    /// names of the cone's state classes, sorted; class `*` is the
    /// collapsed image (fresh when the source has no states)
    pub cone_state_names: Vec<String>,
    /// target state -> index into `cone_state_names`
    pub state_class: Vec<usize>,
    /// index of the `*` class
    pub star_class: usize,
    /// per vertex of the cone complex: its state class
    pub augmentation_state: Vec<usize>,
}

pub fn cone_branching_data(f: &FlowMorphism, mode: Mode) -> Result<ConeBranchingData, FlowError> {
    let source_germ = homotopy_germ_space(&f.source, Side::Minus, mode)?;
    let target_germ = homotopy_germ_space(&f.target, Side::Minus, mode)?;
    let germ_map = induced_germ_map(f, &source_germ, &target_germ);
    let cone = crate::constructions::mapping_cone(&germ_map);

    let image: std::collections::BTreeSet<usize> = f.state_map().iter().copied().collect();
    let mut names: Vec<String> = vec!["*".to_string()];
    for s in 0..f.target.state_count() {
        if !image.contains(&s) {
            names.push(f.target.state_name(s).to_string());
        }
    }
    names.sort();
    let star_class = names.iter().position(|n| n == "*").unwrap();
    let state_class: Vec<usize> = (0..f.target.state_count())
        .map(|s| {
            if image.contains(&s) {
                star_class
            } else {
                names.iter().position(|n| n == f.target.state_name(s)).unwrap()
            }
        })
        .collect();

    let mut augmentation_state = vec![usize::MAX; cone.complex.simplex_count()];
    for (j, &v) in target_germ.total.simplices_of_dim(0).iter().enumerate() {
        let _ = j;
        let img = cone.target_inclusion.apply(v);
        assert!(!img.is_degenerate(), "target germ vertex degenerated in cone");
        augmentation_state[img.base] = state_class[target_germ.state_of[v]];
    }
    augmentation_state[cone.apex] = star_class;
    for &v in cone.complex.simplices_of_dim(0) {
        assert!(augmentation_state[v] != usize::MAX, "cone vertex without a state class");
    }
    Ok(ConeBranchingData {
        source_germ,
        target_germ,
        germ_map,
        cone,
        cone_state_names: names,
        state_class,
        star_class,
        augmentation_state,
    })
}

impl ConeBranchingData {
    /// Augmented chains of the cone germ space over the cone states.
    pub fn augmented_chain(&self) -> ChainComplex {
        let plain = normalized_chains(&self.cone.complex);
        let verts = self.cone.complex.simplices_of_dim(0);
        let mut eps = IntegerMatrix::zeros(self.cone_state_names.len(), verts.len());
        for (j, &v) in verts.iter().enumerate() {
            eps.set(self.augmentation_state[v], j, BigInt::one());
        }
        let mut ranks = vec![self.cone_state_names.len()];
        ranks.extend_from_slice(&plain.ranks);
        let mut boundaries = vec![eps];
        boundaries.extend(plain.boundaries);
        ChainComplex { lowest: -1, ranks, boundaries }
    }

    /// Chains of the cone germ space relative to the distinguished apex
    /// vertex (the apex row of the first boundary is dropped).
    pub fn chains_rel_apex(&self) -> (ChainComplex, Vec<SimplexId>) {
        let verts: Vec<SimplexId> = self
            .cone
            .complex
            .simplices_of_dim(0)
            .iter()
            .copied()
            .filter(|&v| v != self.apex())
            .collect();
        let plain = normalized_chains(&self.cone.complex);
        let mut ranks = plain.ranks.clone();
        ranks[0] = verts.len();
        let mut boundaries = plain.boundaries.clone();
        if !boundaries.is_empty() {
            let old = &plain.boundaries[0];
            let all: Vec<SimplexId> = self.cone.complex.simplices_of_dim(0).to_vec();
            let mut m = IntegerMatrix::zeros(verts.len(), old.cols);
            for (new_r, &v) in verts.iter().enumerate() {
                let old_r = all.iter().position(|&x| x == v).unwrap();
                for c in 0..old.cols {
                    m.set(new_r, c, old.get(old_r, c).clone());
                }
            }
            boundaries[0] = m;
        }
        (ChainComplex { lowest: 0, ranks, boundaries }, verts)
    }

    pub fn apex(&self) -> SimplexId {
        self.cone.apex
    }
}

/// One group slot in the long exact sequence report.
#[derive(Debug, serde::Serialize)]
pub struct LesEntry {
    pub label: String,
    pub group: AbelianGroup,
}

/// One map slot; the matrix is in the canonical generator bases of the
/// adjacent groups.
#[derive(serde::Serialize)]
pub struct LesMap {
    pub label: String,
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: IntegerMatrix,
}

pub(crate) fn serialize_matrix<S: serde::Serializer>(
    m: &IntegerMatrix,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut rows = s.serialize_seq(Some(m.rows))?;
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|j| m.get(i, j).to_string()).collect();
        rows.serialize_element(&row)?;
    }
    rows.end()
}

#[derive(Debug, serde::Serialize)]
pub struct NodeVerdict {
    pub node: String,
    pub exact: bool,
    /// coordinates (in the node's canonical generators) of a class in one
    /// of ker/im but not the other, when inexact
    pub witness: Option<Vec<String>>,
}

/// The assembled long exact sequence of a cone, as printed: rows
/// H^-_n(X) -> H^-_n(Y) -> H^-_n(Cf) from the top degree down to n = 2,
/// then the tail H_0(hoP^-X) -> H_0(hoP^-Y) -> H_0(hoP^-Cf rel apex) -> 0.
#[derive(serde::Serialize)]
pub struct LesReport {
    pub entries: Vec<LesEntry>,
    pub maps: Vec<LesMap>,
    pub verdicts: Vec<NodeVerdict>,
    pub all_exact: bool,
}

/// Assemble the long exact sequence of the cone of `f`.
pub fn long_exact_sequence(f: &FlowMorphism, mode: Mode) -> Result<LesReport, FlowError> {
    let data = cone_branching_data(f, mode)?;
    let aug_x = augment_germ_copy(&data.source_germ, f.source.state_count());
    let aug_y = augment_germ_copy(&data.target_germ, f.target.state_count());
    let aug_m = data.augmented_chain();
    let plain_x = normalized_chains(&data.source_germ.total);
    let plain_y = normalized_chains(&data.target_germ.total);
    let (rel_m, rel_verts) = data.chains_rel_apex();

    let dim_x = data.source_germ.total.dimension().map_or(0, |d| d as i64);
    let dim_y = data.target_germ.total.dimension().map_or(0, |d| d as i64);
    let dim_m = data.cone.complex.dimension().map_or(0, |d| d as i64);
    let top_n = (dim_x.max(dim_y).max(dim_m) + 2).max(2);

    // chain-level matrices per degree
    let germ_chain = |d: usize| chain_map_matrix(&data.germ_map, d);
    let incl_chain = |d: usize| chain_map_matrix(&data.cone.target_inclusion, d);
    // de-suspension: degree-d chains of the cone to degree-(d-1) chains of P^-X
    let desusp = |d: usize| -> IntegerMatrix {
        let m_simplices = data.cone.complex.simplices_of_dim(d);
        let x_simplices = data.source_germ.total.simplices_of_dim(d - 1);
        let mut m = IntegerMatrix::zeros(x_simplices.len(), m_simplices.len());
        for (row, &xs) in x_simplices.iter().enumerate() {
            let over = data.cone.cone_over[xs];
            if let Some(col) = m_simplices.iter().position(|&c| c == over) {
                m.set(row, col, BigInt::one());
            }
        }
        m
    };

    let mut entries: Vec<LesEntry> = Vec::new();
    let mut maps: Vec<LesMap> = Vec::new();

    for n in (2..=top_n).rev() {
        let d = n - 1; // germ-space degree
        let hx = HomologyBasis::compute(&aug_x.chain, d);
        let hy = HomologyBasis::compute(&aug_y.chain, d);
        let hm = HomologyBasis::compute(&aug_m, d);
        entries.push(LesEntry { label: format!("H^-_{}(X)", n), group: hx.group().clone() });
        entries.push(LesEntry { label: format!("H^-_{}(Y)", n), group: hy.group().clone() });
        entries.push(LesEntry { label: format!("H^-_{}(Cf)", n), group: hm.group().clone() });
        maps.push(LesMap {
            label: format!("H^-_{}(f)", n),
            matrix: crate::chains::induced_on_homology(&germ_chain(d as usize), &hx, &hy),
        });
        maps.push(LesMap {
            label: format!("H^-_{}(Y->Cf)", n),
            matrix: crate::chains::induced_on_homology(&incl_chain(d as usize), &hy, &hm),
        });
        // connecting map into the next row (or into the H_0 tail)
        let de = desusp(d as usize);
        let connecting_label = format!("d_{}", n);
        if n > 2 {
            let target = HomologyBasis::compute(&aug_x.chain, d - 1);
            let cols = (0..hm.generator_count())
                .map(|i| target.express(&de.mul_vec(&hm.generator_chain(i))))
                .collect();
            maps.push(LesMap {
                label: connecting_label,
                matrix: IntegerMatrix::from_columns(target.generator_count(), cols),
            });
        } else {
            let target = HomologyBasis::compute(&plain_x, 0);
            let cols = (0..hm.generator_count())
                .map(|i| target.express(&de.mul_vec(&hm.generator_chain(i))))
                .collect();
            maps.push(LesMap {
                label: connecting_label,
                matrix: IntegerMatrix::from_columns(target.generator_count(), cols),
            });
        }
    }

    // tail: H_0(hoP^-X) -> H_0(hoP^-Y) -> H_0(hoP^-Cf rel apex) -> 0
    let h0x = HomologyBasis::compute(&plain_x, 0);
    let h0y = HomologyBasis::compute(&plain_y, 0);
    let h0m = HomologyBasis::compute(&rel_m, 0);
    entries.push(LesEntry { label: "H_0(hoP^-X)".into(), group: h0x.group().clone() });
    entries.push(LesEntry { label: "H_0(hoP^-Y)".into(), group: h0y.group().clone() });
    entries
        .push(LesEntry { label: "H_0(hoP^-Cf rel apex)".into(), group: h0m.group().clone() });
    maps.push(LesMap {
        label: "H_0(hoP^-f)".into(),
        matrix: crate::chains::induced_on_homology(&germ_chain(0), &h0x, &h0y),
    });
    // inclusion into the cone followed by dropping the apex coordinate
    let incl0 = incl_chain(0);
    let all_m_verts: Vec<SimplexId> = data.cone.complex.simplices_of_dim(0).to_vec();
    let mut drop_apex = IntegerMatrix::zeros(rel_verts.len(), all_m_verts.len());
    for (r, &v) in rel_verts.iter().enumerate() {
        let c = all_m_verts.iter().position(|&x| x == v).unwrap();
        drop_apex.set(r, c, BigInt::one());
    }
    let tail_chain = drop_apex.mul(&incl0);
    maps.push(LesMap {
        label: "H_0(hoP^-Y->Cf)".into(),
        matrix: crate::chains::induced_on_homology(&tail_chain, &h0y, &h0m),
    });

    let verdicts = exactness_verdicts(&entries, &maps);
    let all_exact = verdicts.iter().all(|v| v.exact);
    Ok(LesReport { entries, maps, verdicts, all_exact })
}

fn augment_germ_copy(germ: &GermSpace, state_count: usize) -> AugmentedComplex {
    // AugmentedComplex owns its germ space; clone the shared pieces
    let copy = GermSpace {
        side: germ.side,
        total: germ.total.clone(),
        assembly: germ.assembly.clone(),
        projection: germ.projection.clone(),
        state_of: germ.state_of.clone(),
        class_rep: germ.class_rep.clone(),
        warnings: germ.warnings.clone(),
    };
    augment(copy, state_count)
}

fn exactness_verdicts(entries: &[LesEntry], maps: &[LesMap]) -> Vec<NodeVerdict> {
    let mut verdicts = Vec::new();
    // interior nodes: every entry with both an incoming and outgoing map
    for i in 1..entries.len().saturating_sub(1) {
        let exact = exact_at(
            &maps[i - 1].matrix,
            &entries[i].group,
            &maps[i].matrix,
            &entries[i + 1].group,
        );
        let witness = if exact {
            None
        } else {
            exactness_witness(
                &maps[i - 1].matrix,
                &entries[i].group,
                &maps[i].matrix,
                &entries[i + 1].group,
            )
        };
        verdicts.push(NodeVerdict { node: entries[i].label.clone(), exact, witness });
    }
    // the final map must be a surjection (the sequence ends in 0)
    if let (Some(last_entry), Some(last_map)) = (entries.last(), maps.last()) {
        let exact = surjective(&last_map.matrix, &last_entry.group);
        verdicts.push(NodeVerdict {
            node: last_entry.label.clone(),
            exact,
            witness: None,
        });
    }
    // top node: nothing comes in from above by construction (the report
    // starts above every nonzero degree), so exactness there means the
    // first map is injective modulo nothing -- checked as ker = 0.
    if let (Some(first_entry), Some(first_map)) = (entries.first(), maps.first()) {
        let zero_in = IntegerMatrix::zeros(first_entry.group.generator_count(), 0);
        let exact = exact_at(&zero_in, &first_entry.group, &first_map.matrix, &entries[1].group);
        verdicts.insert(
            0,
            NodeVerdict { node: first_entry.label.clone(), exact, witness: None },
        );
    }
    verdicts
}

/// Recheck every node of a report from its stored matrices; returns the
/// overall verdict and the first failing node with a witness class.
pub fn verify_exactness(report: &LesReport) -> (bool, Option<NodeVerdict>) {
    let verdicts = exactness_verdicts(&report.entries, &report.maps);
    let bad = verdicts.into_iter().find(|v| !v.exact);
    (bad.is_none(), bad)
}

/// A class separating im(f) from ker(g) at node B, in B's canonical
/// coordinates.
fn exactness_witness(
    f: &IntegerMatrix,
    b_group: &AbelianGroup,
    g: &IntegerMatrix,
    c_group: &AbelianGroup,
) -> Option<Vec<String>> {
    let rel_b = b_group.relation_matrix();
    let rel_c = c_group.relation_matrix();
    let image = Lattice::from_columns(&f.hstack(&rel_b));
    let stacked = g.hstack(&rel_c);
    let ker = crate::matrix::kernel_basis(&stacked);
    let gens_b = b_group.generator_count();
    // kernel columns not in the image lattice
    for j in 0..ker.cols {
        let col: Vec<BigInt> = (0..gens_b).map(|i| ker.get(i, j).clone()).collect();
        if !image.contains(&col) {
            return Some(col.iter().map(|v| v.to_string()).collect());
        }
    }
    // image columns not in the kernel lattice
    let mut proj = IntegerMatrix::zeros(gens_b, ker.cols);
    for j in 0..ker.cols {
        for i in 0..gens_b {
            proj.set(i, j, ker.get(i, j).clone());
        }
    }
    let kernel = Lattice::from_columns(&proj.hstack(&rel_b));
    for j in 0..f.cols {
        let col = f.column(j);
        if !kernel.contains(&col) {
            return Some(col.iter().map(|v| v.to_string()).collect());
        }
    }
    None
}

/// Human-readable rendering of the sequence.
impl LesReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!("{} = {}", e.label, e.group));
            if i + 1 < self.entries.len() {
                out.push_str(&format!("\n  --[{}]-->\n", self.maps[i].label));
            }
        }
        out.push_str("\n  --> 0\n");
        for v in &self.verdicts {
            out.push_str(&format!(
                "exact at {}: {}{}\n",
                v.node,
                if v.exact { "yes" } else { "NO" },
                v.witness
                    .as_ref()
                    .map(|w| format!(" (witness [{}])", w.join(", ")))
                    .unwrap_or_default()
            ));
        }
        out
    }
}

/// Independent count for H^-_0: the free group on the states missing from
/// the image of the source map of the germ space.
pub fn h0_from_incidence(x: &Flow, germ: &GermSpace) -> AbelianGroup {
    let occupied: std::collections::BTreeSet<usize> =
        germ.occupied_states().into_iter().collect();
    AbelianGroup::free(x.state_count() - occupied.len())
}

/// Dimension-indexed homology of a plain simplicial set (for reports).
pub fn space_homology(c: &FiniteSimplicialSet, max_dim: usize) -> Vec<AbelianGroup> {
    let ch = normalized_chains(c);
    (0..=max_dim).map(|d| crate::chains::homology(&ch, d as i64)).collect()
}
