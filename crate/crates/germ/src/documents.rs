//! File formats for flows and morphisms.
//!
//! A flow document is a single JSON object with a `kind` field; the
//! kind-specific payload follows the constructors. Simplicial sets are
//! written as dimension-indexed simplex lists with face words: a face of
//! a d-simplex is `[index, word]`, pointing at the nondegenerate simplex
//! with that index in dimension `d - 1 - word.len()`.

use crate::flow::{
    cube_flow, discrete_flow, free_flow, glob, poset_flow, Flow, FlowError, FlowMorphism,
    LabeledDigraph, LabeledEdge, Provenance,
};
use crate::simplicial::{ComplexBuilder, FiniteSimplicialSet, SimplexRef, SimplicialMap};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("missing field `{0}` for this document kind")]
    MissingField(&'static str),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("bad simplicial set data: {0}")]
    BadComplex(String),
    #[error("bad path map data: {0}")]
    BadPathMap(String),
    #[error("flow construction failed: {0}")]
    Flow(#[from] FlowError),
}

/// Wire form of a finite simplicial set.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexDocument {
    pub vertices: usize,
    /// `simplices[k]` lists the (k+1)-dimensional simplices as face lists.
    #[serde(default)]
    pub simplices: Vec<Vec<Vec<FaceRefDoc>>>,
}

/// `[index, word]`: the face is `word` applied to the simplex with the
/// given index in the dimension that makes the arithmetic work out.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FaceRefDoc(pub usize, pub Vec<usize>);

impl ComplexDocument {
    pub fn from_complex(c: &FiniteSimplicialSet) -> ComplexDocument {
        let maxd = c.dimension().map_or(0, |d| d + 1);
        // global id -> (dim, index)
        let mut pos = vec![(0usize, 0usize); c.simplex_count()];
        for d in 0..maxd {
            for (i, &s) in c.simplices_of_dim(d).iter().enumerate() {
                pos[s] = (d, i);
            }
        }
        let mut simplices = Vec::new();
        for d in 1..maxd {
            let list = c
                .simplices_of_dim(d)
                .iter()
                .map(|&s| {
                    (0..=d)
                        .map(|i| {
                            let f = c.face_ref(s, i);
                            FaceRefDoc(pos[f.base].1, f.word.clone())
                        })
                        .collect()
                })
                .collect();
            simplices.push(list);
        }
        ComplexDocument { vertices: c.count_in_dim(0), simplices }
    }

    pub fn build(&self) -> Result<Arc<FiniteSimplicialSet>, DocumentError> {
        let mut b = ComplexBuilder::new();
        let mut by_dim: Vec<Vec<usize>> = Vec::new();
        by_dim.push((0..self.vertices).map(|_| b.vertex()).collect());
        for (k, list) in self.simplices.iter().enumerate() {
            let d = k + 1;
            let mut ids = Vec::new();
            for faces in list {
                if faces.len() != d + 1 {
                    return Err(DocumentError::BadComplex(format!(
                        "a {d}-simplex needs {} faces, got {}",
                        d + 1,
                        faces.len()
                    )));
                }
                let refs: Result<Vec<SimplexRef>, DocumentError> = faces
                    .iter()
                    .map(|FaceRefDoc(index, word)| {
                        let base_dim = d
                            .checked_sub(1 + word.len())
                            .ok_or_else(|| DocumentError::BadComplex("word too long".into()))?;
                        let base = *by_dim
                            .get(base_dim)
                            .and_then(|v| v.get(*index))
                            .ok_or_else(|| {
                                DocumentError::BadComplex(format!(
                                    "face index {index} out of range in dimension {base_dim}"
                                ))
                            })?;
                        Ok(SimplexRef { base, word: word.clone() })
                    })
                    .collect();
                ids.push(b.add(d, refs?));
            }
            by_dim.push(ids);
        }
        b.build()
            .map(Arc::new)
            .map_err(|e| DocumentError::BadComplex(e.to_string()))
    }
}

fn default_version() -> u32 {
    1
}

/// Wire form of a flow.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowDocument {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub kind: String,
    #[serde(default)]
    pub states: Vec<String>,
    /// poset: strict relation pairs by state name
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relation: Vec<(String, String)>,
    /// free: labeled edges; labels resolve into `labels`
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, ComplexDocument>,
    /// glob: the single path space
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<ComplexDocument>,
    /// cube: the dimension
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    /// presented_discrete: named point paths and the composition table
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<PathDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathDocument {
    pub name: String,
    pub src: String,
    pub dst: String,
}

impl FlowDocument {
    pub fn build(&self) -> Result<Arc<Flow>, DocumentError> {
        if self.format_version != 1 {
            return Err(DocumentError::Version(self.format_version));
        }
        let state_index = |name: &String| -> Result<usize, DocumentError> {
            let mut sorted = self.states.clone();
            sorted.sort();
            sorted
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| DocumentError::UnknownState(name.clone()))
        };
        let flow = match self.kind.as_str() {
            "poset" => {
                let pairs: Result<Vec<(usize, usize)>, DocumentError> = self
                    .relation
                    .iter()
                    .map(|(a, b)| Ok((state_index(a)?, state_index(b)?)))
                    .collect();
                poset_flow(self.states.clone(), &pairs?)?
            }
            "free" => {
                let labels: Result<BTreeMap<&String, Arc<FiniteSimplicialSet>>, DocumentError> =
                    self.labels.iter().map(|(k, v)| Ok((k, v.build()?))).collect();
                let labels = labels?;
                let vert_pos = |name: &String| -> Result<usize, DocumentError> {
                    self.states
                        .iter()
                        .position(|s| s == name)
                        .ok_or_else(|| DocumentError::UnknownState(name.clone()))
                };
                let edges: Result<Vec<LabeledEdge>, DocumentError> = self
                    .edges
                    .iter()
                    .map(|e| {
                        Ok(LabeledEdge {
                            name: e.name.clone(),
                            src: vert_pos(&e.src)?,
                            dst: vert_pos(&e.dst)?,
                            label: labels
                                .get(&e.label)
                                .cloned()
                                .ok_or_else(|| DocumentError::UnknownLabel(e.label.clone()))?,
                        })
                    })
                    .collect();
                free_flow(LabeledDigraph { vertices: self.states.clone(), edges: edges? })?
            }
            "glob" => {
                let label =
                    self.label.as_ref().ok_or(DocumentError::MissingField("label"))?.build()?;
                glob(label)
            }
            "cube" => {
                let n = self.dimension.ok_or(DocumentError::MissingField("dimension"))?;
                cube_flow(n)?
            }
            "presented_discrete" => {
                let paths: Vec<(String, String, String)> = self
                    .paths
                    .iter()
                    .map(|p| (p.name.clone(), p.src.clone(), p.dst.clone()))
                    .collect();
                discrete_flow(self.states.clone(), &paths, &self.table)?
            }
            other => {
                return Err(DocumentError::BadComplex(format!("unknown flow kind `{other}`")))
            }
        };
        // glob and cube fix their own state names; a declared list must agree
        if !self.states.is_empty() {
            let mut sorted = self.states.clone();
            sorted.sort();
            if sorted != flow.states() {
                return Err(DocumentError::UnknownState(format!(
                    "declared states {:?} do not match the `{}` construction {:?}",
                    sorted,
                    self.kind,
                    flow.states()
                )));
            }
        }
        Ok(Arc::new(flow))
    }
}

impl Flow {
    /// Re-emit the document this flow was built from, when its
    /// construction is document-expressible.
    pub fn to_document(&self) -> Result<FlowDocument, FlowError> {
        let base = FlowDocument {
            format_version: 1,
            kind: String::new(),
            states: self.states().to_vec(),
            relation: Vec::new(),
            edges: Vec::new(),
            labels: BTreeMap::new(),
            label: None,
            dimension: None,
            paths: Vec::new(),
            table: Vec::new(),
        };
        match &self.provenance {
            Provenance::Glob { label } => Ok(FlowDocument {
                kind: "glob".into(),
                label: Some(ComplexDocument::from_complex(label)),
                ..base
            }),
            Provenance::Poset { strict } => Ok(FlowDocument {
                kind: "poset".into(),
                relation: strict
                    .iter()
                    .map(|&(a, b)| {
                        (self.state_name(a).to_string(), self.state_name(b).to_string())
                    })
                    .collect(),
                ..base
            }),
            Provenance::Cube { n } => Ok(FlowDocument {
                kind: "cube".into(),
                states: Vec::new(),
                dimension: Some(*n),
                ..base
            }),
            Provenance::Free(data) => {
                let mut labels = BTreeMap::new();
                let mut edges = Vec::new();
                for e in &data.digraph.edges {
                    labels.insert(e.name.clone(), ComplexDocument::from_complex(&e.label));
                    edges.push(EdgeDocument {
                        name: e.name.clone(),
                        src: data.digraph.vertices[e.src].clone(),
                        dst: data.digraph.vertices[e.dst].clone(),
                        label: e.name.clone(),
                    });
                }
                Ok(FlowDocument { kind: "free".into(), edges, labels, ..base })
            }
            Provenance::Discrete { path_names, table } => {
                let mut paths = Vec::new();
                for (&(a, b), names) in path_names {
                    for name in names {
                        paths.push(PathDocument {
                            name: name.clone(),
                            src: self.state_name(a).to_string(),
                            dst: self.state_name(b).to_string(),
                        });
                    }
                }
                Ok(FlowDocument {
                    kind: "presented_discrete".into(),
                    paths,
                    table: table.clone(),
                    ..base
                })
            }
            Provenance::Terminal | Provenance::Presented => Err(FlowError::NotDocumentable(
                "hand-presented flows have no document form".into(),
            )),
        }
    }
}

/// Cube documents carry no explicit state list.
impl FlowDocument {
    pub fn effective_states(&self) -> Vec<String> {
        if self.kind == "cube" {
            if let Some(n) = self.dimension {
                return (0..1u32 << n).map(|m| crate::flow::bitstring(m, n)).collect();
            }
        }
        self.states.clone()
    }
}

/// Wire form of a morphism. `source` and `target` are inline flow
/// documents or paths to them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismDocument {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub source: DocOrPath,
    pub target: DocOrPath,
    pub kind: String,
    /// source state -> target state, by name (identity kind may omit it)
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub state_map: BTreeMap<String, String>,
    /// points kind: source pair "a->b" -> vertex index of the target path
    /// space (defaults to 0)
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub path_points: BTreeMap<String, usize>,
    /// glob kind: assignment on the source label, one `[index, word]` per
    /// nondegenerate simplex in (dimension, index) order
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub label_map: Vec<FaceRefDoc>,
    /// free kind: per-edge images
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edge_maps: Vec<EdgeMapDocument>,
    /// explicit kind: per-pair assignments "a->b" -> [[index, word], ...]
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub path_maps: BTreeMap<String, Vec<FaceRefDoc>>,
}

/// A source edge mapped to an edge path of the target, with the label map
/// given on the product of the image labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeMapDocument {
    pub edge: String,
    pub image: Vec<String>,
    /// one `[index, word]` per nondegenerate simplex of the source label
    /// in (dimension, index) order; indices refer to the product of the
    /// image labels in construction order
    pub label_map: Vec<FaceRefDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DocOrPath {
    Path { path: String },
    Inline(FlowDocument),
}

impl DocOrPath {
    pub fn resolve(&self, read: &dyn Fn(&str) -> Result<String, String>) -> Result<FlowDocument, DocumentError> {
        match self {
            DocOrPath::Inline(d) => Ok(d.clone()),
            DocOrPath::Path { path } => {
                let text = read(path).map_err(DocumentError::BadComplex)?;
                serde_json::from_str(&text)
                    .map_err(|e| DocumentError::BadComplex(format!("{path}: {e}")))
            }
        }
    }
}

/// Global-id reference from `[index, word]` against a target complex.
fn resolve_ref(
    target: &FiniteSimplicialSet,
    dim: usize,
    doc: &FaceRefDoc,
) -> Result<SimplexRef, DocumentError> {
    let FaceRefDoc(index, word) = doc;
    let base_dim = dim
        .checked_sub(word.len())
        .ok_or_else(|| DocumentError::BadPathMap("word longer than dimension".into()))?;
    let base = *target
        .simplices_of_dim(base_dim)
        .get(*index)
        .ok_or_else(|| {
            DocumentError::BadPathMap(format!("index {index} out of range in dim {base_dim}"))
        })?;
    Ok(SimplexRef { base, word: word.clone() })
}

/// Assignment for a whole complex from `[index, word]` entries listed in
/// (dimension, index) order.
fn resolve_assignment(
    source: &FiniteSimplicialSet,
    target: &FiniteSimplicialSet,
    entries: &[FaceRefDoc],
) -> Result<Vec<SimplexRef>, DocumentError> {
    if entries.len() != source.simplex_count() {
        return Err(DocumentError::BadPathMap(format!(
            "assignment has {} entries for {} simplices",
            entries.len(),
            source.simplex_count()
        )));
    }
    let mut assign = vec![SimplexRef::nondeg(0); source.simplex_count()];
    let maxd = source.dimension().map_or(0, |d| d + 1);
    let mut k = 0usize;
    for d in 0..maxd {
        for &s in source.simplices_of_dim(d) {
            assign[s] = resolve_ref(target, d, &entries[k])?;
            k += 1;
        }
    }
    Ok(assign)
}

impl MorphismDocument {
    pub fn build(
        &self,
        read: &dyn Fn(&str) -> Result<String, String>,
    ) -> Result<FlowMorphism, DocumentError> {
        if self.format_version != 1 {
            return Err(DocumentError::Version(self.format_version));
        }
        let target = self.target.resolve(read)?.build()?;
        let source = if self.kind == "identity" {
            // one flow, shared on both sides, so the path spaces coincide
            let separate = self.source.resolve(read)?.build()?;
            for (&k, cx) in separate.pairs() {
                let same = target
                    .path(k.0, k.1)
                    .map(|t| t.dump() == cx.dump())
                    .unwrap_or(false);
                if separate.states() != target.states() || !same {
                    return Err(DocumentError::BadPathMap(
                        "identity morphism between different flows".into(),
                    ));
                }
            }
            target.clone()
        } else {
            self.source.resolve(read)?.build()?
        };
        let state_map: Vec<usize> = if self.kind == "identity" && self.state_map.is_empty() {
            (0..source.state_count()).collect()
        } else {
            let mut v = Vec::with_capacity(source.state_count());
            for i in 0..source.state_count() {
                let name = source.state_name(i);
                let image = self
                    .state_map
                    .get(name)
                    .ok_or_else(|| DocumentError::UnknownState(name.to_string()))?;
                v.push(
                    target
                        .state_index(image)
                        .ok_or_else(|| DocumentError::UnknownState(image.clone()))?,
                );
            }
            v
        };

        let mut path_maps = BTreeMap::new();
        match self.kind.as_str() {
            "identity" => {
                for (&k, cx) in source.pairs() {
                    path_maps.insert(k, SimplicialMap::identity(cx.clone()));
                }
            }
            "points" => {
                for (&(a, b), cx) in source.pairs() {
                    if cx.dimension() != Some(0) || cx.count_in_dim(0) != 1 {
                        return Err(DocumentError::BadPathMap(format!(
                            "points morphism needs single-point path spaces, ({}, {}) is not",
                            source.state_name(a),
                            source.state_name(b)
                        )));
                    }
                    let key = format!("{}->{}", source.state_name(a), source.state_name(b));
                    let vertex = self.path_points.get(&key).copied().unwrap_or(0);
                    let tgt = target
                        .path(state_map[a], state_map[b])
                        .ok_or_else(|| DocumentError::BadPathMap(format!("empty target for {key}")))?
                        .clone();
                    let v = *tgt.simplices_of_dim(0).get(vertex).ok_or_else(|| {
                        DocumentError::BadPathMap(format!("vertex {vertex} out of range for {key}"))
                    })?;
                    path_maps.insert(
                        (a, b),
                        SimplicialMap::new(cx.clone(), tgt, vec![SimplexRef::nondeg(v)])
                            .map_err(|e| DocumentError::BadPathMap(e.to_string()))?,
                    );
                }
            }
            "glob" => {
                let (src_cx, tgt_cx) = (
                    source.path(0, 1).ok_or_else(|| {
                        DocumentError::BadPathMap("glob source has no path space".into())
                    })?,
                    target
                        .path(state_map[0], state_map[1])
                        .ok_or_else(|| DocumentError::BadPathMap("empty glob target".into()))?,
                );
                let assign = resolve_assignment(src_cx, tgt_cx, &self.label_map)?;
                path_maps.insert(
                    (0, 1),
                    SimplicialMap::new(src_cx.clone(), tgt_cx.clone(), assign)
                        .map_err(|e| DocumentError::BadPathMap(e.to_string()))?,
                );
            }
            "free" => {
                path_maps = expand_free_morphism(&source, &target, &state_map, &self.edge_maps)?;
            }
            "explicit" => {
                for (&(a, b), cx) in source.pairs() {
                    let key = format!("{}->{}", source.state_name(a), source.state_name(b));
                    let entries = self
                        .path_maps
                        .get(&key)
                        .ok_or_else(|| DocumentError::BadPathMap(format!("missing map for {key}")))?;
                    let tgt = target
                        .path(state_map[a], state_map[b])
                        .ok_or_else(|| DocumentError::BadPathMap(format!("empty target for {key}")))?
                        .clone();
                    let assign = resolve_assignment(cx, &tgt, entries)?;
                    path_maps.insert(
                        (a, b),
                        SimplicialMap::new(cx.clone(), tgt, assign)
                            .map_err(|e| DocumentError::BadPathMap(e.to_string()))?,
                    );
                }
            }
            other => {
                return Err(DocumentError::BadPathMap(format!("unknown morphism kind `{other}`")))
            }
        }
        FlowMorphism::new(source, target, state_map, path_maps).map_err(DocumentError::Flow)
    }
}

/// Expand per-edge images into full path maps on every edge-path product.
fn expand_free_morphism(
    source: &Arc<Flow>,
    target: &Arc<Flow>,
    state_map: &[usize],
    edge_maps: &[EdgeMapDocument],
) -> Result<BTreeMap<(usize, usize), SimplicialMap>, DocumentError> {
    let Provenance::Free(sdata) = &source.provenance else {
        return Err(DocumentError::BadPathMap("free morphism needs a free source".into()));
    };
    let Provenance::Free(tdata) = &target.provenance else {
        return Err(DocumentError::BadPathMap("free morphism needs a free target".into()));
    };
    // per source edge: image edge ids and the label assignment into the
    // product of the image labels
    struct EdgeImage {
        image_edges: Vec<usize>,
        product: crate::constructions::ProductComplex,
        assign: Vec<SimplexRef>,
    }
    let mut images: BTreeMap<usize, EdgeImage> = BTreeMap::new();
    for em in edge_maps {
        let ei = sdata
            .digraph
            .edges
            .iter()
            .position(|e| e.name == em.edge)
            .ok_or_else(|| DocumentError::BadPathMap(format!("unknown edge `{}`", em.edge)))?;
        let image_edges: Result<Vec<usize>, DocumentError> = em
            .image
            .iter()
            .map(|n| {
                tdata
                    .digraph
                    .edges
                    .iter()
                    .position(|e| &e.name == n)
                    .ok_or_else(|| DocumentError::BadPathMap(format!("unknown edge `{n}`")))
            })
            .collect();
        let image_edges = image_edges?;
        let labels: Vec<Arc<FiniteSimplicialSet>> =
            image_edges.iter().map(|&e| tdata.digraph.edges[e].label.clone()).collect();
        let product = crate::constructions::product_many(labels);
        let assign = resolve_assignment(
            &sdata.digraph.edges[ei].label,
            &product.complex,
            &em.label_map,
        )?;
        images.insert(ei, EdgeImage { image_edges, product, assign });
    }
    for (ei, e) in sdata.digraph.edges.iter().enumerate() {
        if !images.contains_key(&ei) {
            return Err(DocumentError::BadPathMap(format!("no image for edge `{}`", e.name)));
        }
    }

    let mut out = BTreeMap::new();
    for (&(a, b), parts) in &sdata.parts {
        let src_cx = source.path(a, b).expect("pair with parts is nonempty").clone();
        let (ta, tb) = (state_map[a], state_map[b]);
        let tgt_cx = target
            .path(ta, tb)
            .ok_or_else(|| DocumentError::BadPathMap("image pair has empty path space".into()))?
            .clone();
        let tparts = &tdata.parts[&(ta, tb)];
        let mut assign = vec![SimplexRef::nondeg(0); src_cx.simplex_count()];
        for part in parts {
            // image edge path: concatenation of the per-edge images
            let mut image_path = Vec::new();
            for &e in &part.edges {
                image_path.extend_from_slice(&images[&e].image_edges);
            }
            let tpart = tparts
                .iter()
                .find(|p| p.edges == image_path)
                .ok_or_else(|| DocumentError::BadPathMap("image edge path not in target".into()))?;
            for (local, &global) in part.offset.iter().enumerate() {
                let tuple = part.product.tuple(local);
                // map each factor through its edge image, flattening the
                // sub-product references
                let mut flat: Vec<SimplexRef> = Vec::new();
                for (fi, &e) in part.edges.iter().enumerate() {
                    let img = &images[&e];
                    let r = &tuple[fi];
                    let mapped = img.assign[r.base].apply_word(&r.word);
                    if img.image_edges.is_empty() {
                        // image is the empty edge path: the sub-product is a
                        // point and contributes nothing
                        continue;
                    }
                    let sub_tuple = img.product.tuple(mapped.base);
                    for sr in sub_tuple {
                        flat.push(sr.apply_word(&mapped.word));
                    }
                }
                let local_ref = tpart.product.ref_of_tuple(&flat);
                assign[global] =
                    SimplexRef { base: tpart.offset[local_ref.base], word: local_ref.word };
            }
        }
        out.insert(
            (a, b),
            SimplicialMap::new(src_cx, tgt_cx, assign)
                .map_err(|e| DocumentError::BadPathMap(e.to_string()))?,
        );
    }
    Ok(out)
}
