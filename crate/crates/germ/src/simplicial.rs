//! Finite simplicial sets presented by their nondegenerate simplices.
//!
//! Every simplex of a simplicial set is uniquely a degeneracy of a
//! nondegenerate one, so a finite presentation stores the nondegenerate
//! simplices plus, for each, its faces written in the canonical form
//! "degeneracy word applied to a nondegenerate simplex". The degeneracy
//! word calculus below ([`SimplexRef`]) makes face and degeneracy
//! operators computable on arbitrary simplices, which is what products,
//! quotients and coequalizers need.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Index of a nondegenerate simplex within its complex.
pub type SimplexId = usize;

/// A possibly degenerate simplex: a strictly decreasing degeneracy word
/// applied (outermost first) to a nondegenerate base simplex.
///
/// `word = [j1, j2, ..., jr]` with `j1 > j2 > ... > jr` denotes
/// `s_{j1} ∘ s_{j2} ∘ ... ∘ s_{jr}` (so `s_{jr}` acts first).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub base: SimplexId,
    pub word: Vec<usize>,
}

impl SimplexRef {
    pub fn nondeg(base: SimplexId) -> Self {
        SimplexRef { base, word: Vec::new() }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.word.is_empty()
    }

    /// Apply `s_j` on the outside, keeping the word canonical.
    pub fn degenerate(&self, j: usize) -> SimplexRef {
        SimplexRef { base: self.base, word: word_insert(&self.word, j) }
    }

    /// Apply an outer degeneracy word (canonical, outermost first).
    pub fn apply_word(&self, word: &[usize]) -> SimplexRef {
        let mut r = self.clone();
        for &j in word.iter().rev() {
            r = r.degenerate(j);
        }
        r
    }
}

impl fmt::Debug for SimplexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "#{}", self.base)
        } else {
            write!(f, "s{:?}#{}", self.word, self.base)
        }
    }
}

/// Canonical insertion of `s_j` into a strictly decreasing word, using
/// `s_j s_k = s_{k+1} s_j` for `j <= k`.
fn word_insert(word: &[usize], j: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(word.len() + 1);
    let mut placed = false;
    for &k in word {
        if k >= j {
            out.push(k + 1);
        } else {
            if !placed {
                out.push(j);
                placed = true;
            }
            out.push(k);
        }
    }
    if !placed {
        out.push(j);
    }
    out
}

#[derive(Debug, Clone)]
struct SimplexData {
    dim: usize,
    /// `faces[i]` is the canonical reference for the i-th face; length dim+1
    /// for dim >= 1, empty for vertices.
    faces: Vec<SimplexRef>,
}

/// A finite simplicial set.
#[derive(Clone)]
pub struct FiniteSimplicialSet {
    simplices: Vec<SimplexData>,
    by_dim: Vec<Vec<SimplexId>>,
}

#[derive(Debug, Error)]
pub enum SimplicialError {
    #[error("simplex {simplex} declares {given} faces but has dimension {dim}")]
    FaceCount { simplex: SimplexId, dim: usize, given: usize },
    #[error("face reference of simplex {simplex} has dimension {found}, expected {expected}")]
    FaceDimension { simplex: SimplexId, expected: usize, found: usize },
    #[error("degeneracy word {word:?} on simplex {simplex} is not strictly decreasing or out of range")]
    BadWord { simplex: SimplexId, word: Vec<usize> },
    #[error("simplicial identity d_{i} d_{j} failed on simplex {simplex}")]
    Identity { simplex: SimplexId, i: usize, j: usize },
    #[error("unknown simplex id {0}")]
    UnknownSimplex(SimplexId),
}

impl FiniteSimplicialSet {
    pub fn empty() -> Self {
        FiniteSimplicialSet { simplices: Vec::new(), by_dim: Vec::new() }
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    /// Top dimension carrying a nondegenerate simplex; None when empty.
    pub fn dimension(&self) -> Option<usize> {
        (0..self.by_dim.len()).rev().find(|&d| !self.by_dim[d].is_empty())
    }

    pub fn dim_of(&self, s: SimplexId) -> usize {
        self.simplices[s].dim
    }

    pub fn simplices_of_dim(&self, d: usize) -> &[SimplexId] {
        self.by_dim.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn count_in_dim(&self, d: usize) -> usize {
        self.simplices_of_dim(d).len()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = SimplexId> + '_ {
        0..self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn face_ref(&self, s: SimplexId, i: usize) -> &SimplexRef {
        &self.simplices[s].faces[i]
    }

    pub fn ref_dim(&self, r: &SimplexRef) -> usize {
        self.dim_of(r.base) + r.word.len()
    }

    /// The i-th face of an arbitrary simplex, by the standard rewriting of
    /// `d_i s_j`.
    pub fn face(&self, r: &SimplexRef, i: usize) -> SimplexRef {
        if r.word.is_empty() {
            return self.simplices[r.base].faces[i].clone();
        }
        let j = r.word[0];
        let inner = SimplexRef { base: r.base, word: r.word[1..].to_vec() };
        if i == j || i == j + 1 {
            inner
        } else if i < j {
            self.face(&inner, i).degenerate(j - 1)
        } else {
            self.face(&inner, i - 1).degenerate(j)
        }
    }

    /// Euler characteristic (alternating sum of nondegenerate counts).
    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for d in 0..self.by_dim.len() {
            let c = self.by_dim[d].len() as i64;
            if d % 2 == 0 {
                chi += c;
            } else {
                chi -= c;
            }
        }
        chi
    }

    /// All canonical simplex references of a given dimension, in a stable
    /// order: by base simplex id, then by word.
    pub fn refs_of_dim(&self, k: usize) -> Vec<SimplexRef> {
        let mut out = Vec::new();
        for p in 0..=k.min(self.by_dim.len().saturating_sub(1)) {
            for &b in self.simplices_of_dim(p) {
                for word in decreasing_words(k, k - p) {
                    out.push(SimplexRef { base: b, word });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), SimplicialError> {
        for (id, s) in self.simplices.iter().enumerate() {
            let expected = if s.dim == 0 { 0 } else { s.dim + 1 };
            if s.faces.len() != expected {
                return Err(SimplicialError::FaceCount { simplex: id, dim: s.dim, given: s.faces.len() });
            }
            for f in &s.faces {
                if f.base >= self.simplices.len() {
                    return Err(SimplicialError::UnknownSimplex(f.base));
                }
                if !f.word.windows(2).all(|w| w[0] > w[1]) {
                    return Err(SimplicialError::BadWord { simplex: id, word: f.word.clone() });
                }
                if self.ref_dim(f) + 1 != s.dim {
                    return Err(SimplicialError::FaceDimension {
                        simplex: id,
                        expected: s.dim - 1,
                        found: self.ref_dim(f),
                    });
                }
            }
        }
        // d_i d_j = d_{j-1} d_i for i < j
        for (id, s) in self.simplices.iter().enumerate() {
            if s.dim < 2 {
                continue;
            }
            let r = SimplexRef::nondeg(id);
            for j in 1..=s.dim {
                for i in 0..j {
                    let a = self.face(&self.face(&r, j), i);
                    let b = self.face(&self.face(&r, i), j - 1);
                    if a != b {
                        return Err(SimplicialError::Identity { simplex: id, i, j });
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical textual dump: dimension-indexed simplex lists with face words.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let name = |r: &SimplexRef| -> String {
            let d = self.dim_of(r.base);
            let idx = self.simplices_of_dim(d).iter().position(|&x| x == r.base).unwrap();
            if r.word.is_empty() {
                format!("{}.{}", d, idx)
            } else {
                format!(
                    "s[{}]{}.{}",
                    r.word.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","),
                    d,
                    idx
                )
            }
        };
        for d in 0..self.by_dim.len() {
            if self.by_dim[d].is_empty() {
                continue;
            }
            out.push_str(&format!("dim {}: {} simplices\n", d, self.by_dim[d].len()));
            for (idx, &s) in self.by_dim[d].iter().enumerate() {
                if d == 0 {
                    out.push_str(&format!("  {}.{}\n", d, idx));
                } else {
                    let faces: Vec<String> =
                        self.simplices[s].faces.iter().map(&name).collect();
                    out.push_str(&format!("  {}.{} -> [{}]\n", d, idx, faces.join(" ")));
                }
            }
        }
        out
    }
}

impl fmt::Debug for FiniteSimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSimplicialSet({})", self.dump())
    }
}

/// All strictly decreasing words of length `len` with entries in `0..top`.
pub fn decreasing_words(top: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(max_excl: usize, len: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if len == 0 {
            out.push(acc.clone());
            return;
        }
        // next entry strictly below max_excl, leaving room for len-1 more
        for j in (len - 1..max_excl).rev() {
            acc.push(j);
            rec(j, len - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if len > top {
        return out;
    }
    rec(top, len, &mut Vec::new(), &mut out);
    out
}

/// Incremental builder for [`FiniteSimplicialSet`].
pub struct ComplexBuilder {
    simplices: Vec<SimplexData>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        ComplexBuilder { simplices: Vec::new() }
    }

    /// Add a nondegenerate simplex with canonical face references.
    /// Vertices take an empty face list.
    pub fn add(&mut self, dim: usize, faces: Vec<SimplexRef>) -> SimplexId {
        let id = self.simplices.len();
        self.simplices.push(SimplexData { dim, faces });
        id
    }

    pub fn vertex(&mut self) -> SimplexId {
        self.add(0, Vec::new())
    }

    pub fn build(self) -> Result<FiniteSimplicialSet, SimplicialError> {
        let max_dim = self.simplices.iter().map(|s| s.dim).max();
        let mut by_dim = vec![Vec::new(); max_dim.map_or(0, |d| d + 1)];
        for (id, s) in self.simplices.iter().enumerate() {
            by_dim[s.dim].push(id);
        }
        let complex = FiniteSimplicialSet { simplices: self.simplices, by_dim };
        complex.validate()?;
        Ok(complex)
    }
}

impl Default for ComplexBuilder {
    fn default() -> Self {
        Self::new()
    }
}

/// A map of simplicial sets, stored by its values on nondegenerate
/// simplices (as canonical references in the target).
#[derive(Clone)]
pub struct SimplicialMap {
    pub source: Arc<FiniteSimplicialSet>,
    pub target: Arc<FiniteSimplicialSet>,
    assign: Vec<SimplexRef>,
}

#[derive(Debug, Error)]
pub enum MapError {
    #[error("assignment has {given} entries for {expected} simplices")]
    AssignmentLength { expected: usize, given: usize },
    #[error("map does not preserve dimension on simplex {0}")]
    Dimension(SimplexId),
    #[error("map does not commute with face d_{i} on simplex {simplex}")]
    NotSimplicial { simplex: SimplexId, i: usize },
}

impl SimplicialMap {
    pub fn new(
        source: Arc<FiniteSimplicialSet>,
        target: Arc<FiniteSimplicialSet>,
        assign: Vec<SimplexRef>,
    ) -> Result<Self, MapError> {
        let map = SimplicialMap { source, target, assign };
        map.check()?;
        Ok(map)
    }

    pub fn identity(c: Arc<FiniteSimplicialSet>) -> Self {
        let assign = c.all_simplices().map(SimplexRef::nondeg).collect();
        SimplicialMap { source: c.clone(), target: c, assign }
    }

    pub fn assignment(&self) -> &[SimplexRef] {
        &self.assign
    }

    pub fn apply(&self, s: SimplexId) -> &SimplexRef {
        &self.assign[s]
    }

    pub fn apply_ref(&self, r: &SimplexRef) -> SimplexRef {
        self.assign[r.base].apply_word(&r.word)
    }

    fn check(&self) -> Result<(), MapError> {
        if self.assign.len() != self.source.simplex_count() {
            return Err(MapError::AssignmentLength {
                expected: self.source.simplex_count(),
                given: self.assign.len(),
            });
        }
        for s in self.source.all_simplices() {
            if self.target.ref_dim(&self.assign[s]) != self.source.dim_of(s) {
                return Err(MapError::Dimension(s));
            }
        }
        for s in self.source.all_simplices() {
            let dim = self.source.dim_of(s);
            if dim == 0 {
                continue;
            }
            for i in 0..=dim {
                let lhs = self.apply_ref(self.source.face_ref(s, i));
                let rhs = self.target.face(&self.assign[s], i);
                if lhs != rhs {
                    return Err(MapError::NotSimplicial { simplex: s, i });
                }
            }
        }
        Ok(())
    }

    pub fn compose(after: &SimplicialMap, before: &SimplicialMap) -> SimplicialMap {
        let assign = before.assign.iter().map(|r| after.apply_ref(r)).collect();
        SimplicialMap { source: before.source.clone(), target: after.target.clone(), assign }
    }

    /// Bijective on nondegenerate simplices in every dimension.
    pub fn is_isomorphism(&self) -> bool {
        if self.check().is_err() {
            return false;
        }
        let maxd = self
            .source
            .dimension()
            .max(self.target.dimension())
            .map_or(0, |d| d + 1);
        for d in 0..maxd {
            let src = self.source.simplices_of_dim(d);
            let tgt = self.target.simplices_of_dim(d);
            if src.len() != tgt.len() {
                return false;
            }
            let mut seen = vec![false; self.target.simplex_count()];
            for &s in src {
                let r = &self.assign[s];
                if r.is_degenerate() || seen[r.base] {
                    return false;
                }
                seen[r.base] = true;
            }
        }
        true
    }
}

impl fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialMap{:?}", self.assign)
    }
}

/// Disjoint union with the id translation table for each part.
pub struct DisjointUnion {
    pub complex: Arc<FiniteSimplicialSet>,
    /// `offsets[p][old_id] = new_id` for part p.
    pub offsets: Vec<Vec<SimplexId>>,
}

impl DisjointUnion {
    pub fn inclusion(&self, part: usize, part_complex: Arc<FiniteSimplicialSet>) -> SimplicialMap {
        let assign = self.offsets[part].iter().map(|&id| SimplexRef::nondeg(id)).collect();
        SimplicialMap { source: part_complex, target: self.complex.clone(), assign }
    }

    pub fn translate(&self, part: usize, r: &SimplexRef) -> SimplexRef {
        SimplexRef { base: self.offsets[part][r.base], word: r.word.clone() }
    }
}

pub fn disjoint_union(parts: &[&FiniteSimplicialSet]) -> DisjointUnion {
    let mut b = ComplexBuilder::new();
    let mut offsets = Vec::with_capacity(parts.len());
    for part in parts {
        let mut table = vec![0usize; part.simplex_count()];
        // Ids must be allocated so that faces point backwards; insert by
        // increasing dimension within the part.
        let maxd = part.dimension().map_or(0, |d| d + 1);
        for d in 0..maxd {
            for &s in part.simplices_of_dim(d) {
                let faces = (0..if d == 0 { 0 } else { d + 1 })
                    .map(|i| {
                        let f = part.face_ref(s, i);
                        SimplexRef { base: table[f.base], word: f.word.clone() }
                    })
                    .collect();
                table[s] = b.add(d, faces);
            }
        }
        offsets.push(table);
    }
    let complex = b.build().expect("disjoint union of valid complexes is valid");
    DisjointUnion { complex: Arc::new(complex), offsets }
}

/// Extract the full subcomplex on a set of nondegenerate simplices.
/// The set must be closed under faces (bases of face references).
pub struct Subcomplex {
    pub complex: Arc<FiniteSimplicialSet>,
    /// old id -> new id for retained simplices
    pub into_sub: BTreeMap<SimplexId, SimplexId>,
}

pub fn subcomplex(ambient: &FiniteSimplicialSet, keep: &[SimplexId]) -> Subcomplex {
    let mut sorted: Vec<SimplexId> = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.sort_by_key(|&s| (ambient.dim_of(s), s));
    let mut into_sub = BTreeMap::new();
    let mut b = ComplexBuilder::new();
    for &s in &sorted {
        let d = ambient.dim_of(s);
        let faces = (0..if d == 0 { 0 } else { d + 1 })
            .map(|i| {
                let f = ambient.face_ref(s, i);
                let nb = *into_sub
                    .get(&f.base)
                    .unwrap_or_else(|| panic!("subcomplex not face-closed at {}", f.base));
                SimplexRef { base: nb, word: f.word.clone() }
            })
            .collect();
        let id = b.add(d, faces);
        into_sub.insert(s, id);
    }
    let complex = b.build().expect("face-closed subcomplex is valid");
    Subcomplex { complex: Arc::new(complex), into_sub }
}
