//! Standard complexes and the constructions the flow machinery is built
//! from: categorical products via shuffle enumeration, quotients by
//! congruence closure (with explicit degeneracy collapse), cones, mapping
//! cones, and nerves of posets.

use crate::simplicial::{
    disjoint_union, ComplexBuilder, FiniteSimplicialSet, SimplexId, SimplexRef,
    SimplicialMap,
};
use itertools::Itertools;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

/// The standard n-simplex: nondegenerate k-simplices are the (k+1)-element
/// subsets of {0..n}; the i-th face deletes the i-th vertex.
pub fn standard_simplex(n: usize) -> FiniteSimplicialSet {
    simplex_like(n, false)
}

/// The boundary of the standard n-simplex (n >= 1): everything except the
/// top simplex. The 0-sphere model is `boundary_simplex(1)`.
pub fn boundary_simplex(n: usize) -> FiniteSimplicialSet {
    assert!(n >= 1, "the boundary of a 0-simplex is the empty simplicial set");
    simplex_like(n, true)
}

pub fn point() -> FiniteSimplicialSet {
    standard_simplex(0)
}

fn simplex_like(n: usize, boundary_only: bool) -> FiniteSimplicialSet {
    let mut b = ComplexBuilder::new();
    let mut ids: BTreeMap<Vec<usize>, SimplexId> = BTreeMap::new();
    let top = if boundary_only { n - 1 } else { n };
    for k in 0..=top {
        for subset in (0..=n).combinations(k + 1) {
            let faces = if k == 0 {
                Vec::new()
            } else {
                (0..=k)
                    .map(|i| {
                        let mut f = subset.clone();
                        f.remove(i);
                        SimplexRef::nondeg(ids[&f])
                    })
                    .collect()
            };
            let id = b.add(k, faces);
            ids.insert(subset, id);
        }
    }
    b.build().expect("standard simplex data is valid")
}

/// Nerve of a finite poset: nondegenerate k-simplices are the strict
/// chains of length k+1; the i-th face removes the i-th element.
pub struct NerveComplex {
    pub complex: Arc<FiniteSimplicialSet>,
    /// chain of element indices for each nondegenerate simplex
    pub chains: Vec<Vec<usize>>,
    lookup: BTreeMap<Vec<usize>, SimplexId>,
}

impl NerveComplex {
    /// `leq[i][j]` must be a partial order on `0..n` (reflexive,
    /// antisymmetric, transitive).
    pub fn new(n: usize, leq: &dyn Fn(usize, usize) -> bool) -> NerveComplex {
        let mut b = ComplexBuilder::new();
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut lookup: BTreeMap<Vec<usize>, SimplexId> = BTreeMap::new();
        // enumerate strict chains by length
        let mut current: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut k = 0usize;
        while !current.is_empty() {
            for chain in &current {
                let faces = if k == 0 {
                    Vec::new()
                } else {
                    (0..=k)
                        .map(|i| {
                            let mut f = chain.clone();
                            f.remove(i);
                            SimplexRef::nondeg(lookup[&f])
                        })
                        .collect()
                };
                let id = b.add(k, faces);
                lookup.insert(chain.clone(), id);
                chains.push(chain.clone());
            }
            // extend each chain by one strictly larger element
            let next: Vec<Vec<usize>> = current
                .iter()
                .flat_map(|chain| {
                    let last = *chain.last().unwrap();
                    (0..n)
                        .filter(move |&j| j != last && leq(last, j) && !leq(j, last))
                        .map(move |j| {
                            let mut c = chain.clone();
                            c.push(j);
                            c
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            current = next;
            k += 1;
        }
        let complex = Arc::new(b.build().expect("nerve data is valid"));
        NerveComplex { complex, chains, lookup }
    }

    /// Canonical reference for a weakly increasing chain; repeats become
    /// degeneracies.
    pub fn ref_of_weak_chain(&self, seq: &[usize]) -> SimplexRef {
        let mut strict = Vec::new();
        let mut word = Vec::new();
        for (i, &x) in seq.iter().enumerate() {
            if i + 1 < seq.len() && seq[i + 1] == x {
                word.push(i);
            } else {
                strict.push(x);
            }
        }
        word.reverse();
        SimplexRef { base: self.lookup[&strict], word }
    }

    /// Expand a reference into its weakly increasing chain of elements.
    pub fn weak_chain_of_ref(&self, r: &SimplexRef) -> Vec<usize> {
        let strict = &self.chains[r.base];
        let dim = strict.len() - 1 + r.word.len();
        let mut degen: BTreeSet<usize> = r.word.iter().copied().collect();
        let mut out = Vec::with_capacity(dim + 1);
        let mut it = strict.iter();
        let mut cur = *it.next().unwrap();
        out.push(cur);
        for i in 0..dim {
            if degen.remove(&i) {
                out.push(cur);
            } else {
                cur = *it.next().unwrap();
                out.push(cur);
            }
        }
        out
    }
}

/// Nerve from an explicit strict relation on named elements (transitively
/// closed here). Element order is the given order.
pub fn nerve_of_poset(n: usize, strict_pairs: &[(usize, usize)]) -> NerveComplex {
    let closure = transitive_closure(n, strict_pairs);
    NerveComplex::new(n, &move |a, b| a == b || closure[a][b])
}

pub fn transitive_closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut lt = vec![vec![false; n]; n];
    for &(a, b) in pairs {
        lt[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if lt[i][k] {
                for j in 0..n {
                    if lt[k][j] {
                        lt[i][j] = true;
                    }
                }
            }
        }
    }
    lt
}

/// The categorical product of finitely many simplicial sets.
///
/// A nondegenerate k-simplex is a tuple of canonical references, one per
/// factor, all of dimension k, whose degeneracy word sets have empty
/// common intersection (Eilenberg-Zilber).
pub struct ProductComplex {
    pub complex: Arc<FiniteSimplicialSet>,
    pub factors: Vec<Arc<FiniteSimplicialSet>>,
    tuples: Vec<Vec<SimplexRef>>,
    lookup: BTreeMap<Vec<SimplexRef>, SimplexId>,
}

impl ProductComplex {
    pub fn tuple(&self, s: SimplexId) -> &[SimplexRef] {
        &self.tuples[s]
    }

    /// Canonical reference of an arbitrary tuple of equal-dimension refs.
    pub fn ref_of_tuple(&self, refs: &[SimplexRef]) -> SimplexRef {
        let (word, tuple) = normalize_tuple(&self.factors, refs);
        let id = *self
            .lookup
            .get(&tuple)
            .unwrap_or_else(|| panic!("tuple not found in product: {:?}", tuple));
        SimplexRef { base: id, word }
    }

    pub fn projection(&self, i: usize) -> SimplicialMap {
        let assign = self.tuples.iter().map(|t| t[i].clone()).collect();
        SimplicialMap::new(self.complex.clone(), self.factors[i].clone(), assign)
            .expect("projection is simplicial")
    }
}

/// Strip the common degeneracies of a tuple, outermost first.
fn normalize_tuple(
    factors: &[Arc<FiniteSimplicialSet>],
    refs: &[SimplexRef],
) -> (Vec<usize>, Vec<SimplexRef>) {
    if refs.is_empty() {
        // the empty tuple is the point of the nullary product
        return (Vec::new(), Vec::new());
    }
    let mut common: BTreeSet<usize> = refs[0].word.iter().copied().collect();
    for r in &refs[1..] {
        let w: BTreeSet<usize> = r.word.iter().copied().collect();
        common = common.intersection(&w).copied().collect();
    }
    match common.iter().next_back() {
        None => (Vec::new(), refs.to_vec()),
        Some(&j) => {
            let stripped: Vec<SimplexRef> = refs
                .iter()
                .zip(factors)
                .map(|(r, f)| f.face(r, j))
                .collect();
            let (w, t) = normalize_tuple(factors, &stripped);
            (crate::simplicial::SimplexRef { base: 0, word: w }.degenerate(j).word, t)
        }
    }
}

pub fn product_many(factors: Vec<Arc<FiniteSimplicialSet>>) -> ProductComplex {
    if factors.is_empty() {
        let complex = Arc::new(point());
        let tuples = vec![Vec::new()];
        let mut lookup = BTreeMap::new();
        lookup.insert(Vec::new(), 0usize);
        return ProductComplex { complex, factors, tuples, lookup };
    }
    if factors.iter().any(|f| f.is_empty()) {
        return ProductComplex {
            complex: Arc::new(FiniteSimplicialSet::empty()),
            factors,
            tuples: Vec::new(),
            lookup: BTreeMap::new(),
        };
    }
    let top: usize = factors.iter().map(|f| f.dimension().unwrap_or(0)).sum();
    let mut b = ComplexBuilder::new();
    let mut tuples: Vec<Vec<SimplexRef>> = Vec::new();
    let mut lookup: BTreeMap<Vec<SimplexRef>, SimplexId> = BTreeMap::new();
    for k in 0..=top {
        let per_factor: Vec<Vec<SimplexRef>> =
            factors.iter().map(|f| f.refs_of_dim(k)).collect();
        let mut found: Vec<Vec<SimplexRef>> = Vec::new();
        enumerate_nondeg_tuples(&per_factor, 0, &mut Vec::new(), None, &mut found);
        for tuple in found {
            let faces = if k == 0 {
                Vec::new()
            } else {
                (0..=k)
                    .map(|i| {
                        let face_tuple: Vec<SimplexRef> = tuple
                            .iter()
                            .zip(&factors)
                            .map(|(r, f)| f.face(r, i))
                            .collect();
                        let (word, t) = normalize_tuple(&factors, &face_tuple);
                        SimplexRef { base: lookup[&t], word }
                    })
                    .collect()
            };
            let id = b.add(k, faces);
            lookup.insert(tuple.clone(), id);
            tuples.push(tuple);
        }
    }
    let complex = Arc::new(b.build().expect("product data is valid"));
    ProductComplex { complex, factors, tuples, lookup }
}

fn enumerate_nondeg_tuples(
    per_factor: &[Vec<SimplexRef>],
    i: usize,
    acc: &mut Vec<SimplexRef>,
    running: Option<BTreeSet<usize>>,
    out: &mut Vec<Vec<SimplexRef>>,
) {
    if i == per_factor.len() {
        if running.is_none_or(|s| s.is_empty()) {
            out.push(acc.clone());
        }
        return;
    }
    for r in &per_factor[i] {
        let next = match &running {
            None => Some(r.word.iter().copied().collect::<BTreeSet<_>>()),
            Some(s) => {
                let w: BTreeSet<usize> = r.word.iter().copied().collect();
                Some(s.intersection(&w).copied().collect())
            }
        };
        acc.push(r.clone());
        enumerate_nondeg_tuples(per_factor, i + 1, acc, next, out);
        acc.pop();
    }
}

/// Binary product with both projections.
pub fn product(a: Arc<FiniteSimplicialSet>, b: Arc<FiniteSimplicialSet>) -> ProductComplex {
    product_many(vec![a, b])
}

/// Quotient of a simplicial set by the congruence generated by pairs of
/// (possibly degenerate) equal-dimension simplices.
pub struct Quotient {
    pub complex: Arc<FiniteSimplicialSet>,
    pub projection: SimplicialMap,
}

pub fn quotient_by_pairs(
    ambient: Arc<FiniteSimplicialSet>,
    seeds: &[(SimplexRef, SimplexRef)],
) -> Quotient {
    if ambient.is_empty() {
        let q = Arc::new(FiniteSimplicialSet::empty());
        let projection = SimplicialMap::new(ambient, q.clone(), Vec::new()).unwrap();
        return Quotient { complex: q, projection };
    }
    let amb_dim = ambient.dimension().unwrap_or(0);
    let seed_dim = seeds
        .iter()
        .map(|(a, b)| {
            debug_assert_eq!(ambient.ref_dim(a), ambient.ref_dim(b), "seed dims differ");
            ambient.ref_dim(a)
        })
        .max()
        .unwrap_or(0);
    let top = amb_dim.max(seed_dim);

    // Index all canonical references up to the working dimension.
    let mut refs: Vec<SimplexRef> = Vec::new();
    let mut dim_of: Vec<usize> = Vec::new();
    let mut index: HashMap<SimplexRef, usize> = HashMap::new();
    for k in 0..=top {
        for r in ambient.refs_of_dim(k) {
            index.insert(r.clone(), refs.len());
            refs.push(r);
            dim_of.push(k);
        }
    }

    // Congruence closure: unions propagate along faces and degeneracies.
    let mut parent: Vec<usize> = (0..refs.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut work: Vec<(usize, usize)> = seeds
        .iter()
        .map(|(a, b)| (index[a], index[b]))
        .collect();
    while let Some((a, b)) = work.pop() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        parent[ra.max(rb)] = ra.min(rb);
        let d = dim_of[a];
        if d >= 1 {
            for i in 0..=d {
                let fa = ambient.face(&refs[a], i);
                let fb = ambient.face(&refs[b], i);
                if fa != fb {
                    work.push((index[&fa], index[&fb]));
                }
            }
        }
        if d < top {
            for j in 0..=d {
                let da = refs[a].degenerate(j);
                let db = refs[b].degenerate(j);
                if da != db {
                    work.push((index[&da], index[&db]));
                }
            }
        }
    }

    // Gather classes.
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..refs.len() {
        let r = find(&mut parent, i);
        members.entry(r).or_default().push(i);
    }
    // A class is degenerate exactly when it contains a degenerate reference.
    let mut degenerate_witness: HashMap<usize, usize> = HashMap::new();
    let mut min_nondeg: HashMap<usize, usize> = HashMap::new();
    for (&root, mem) in &members {
        for &i in mem {
            if refs[i].is_degenerate() {
                let e = degenerate_witness.entry(root).or_insert(i);
                if refs[i] < refs[*e] {
                    *e = i;
                }
            } else {
                let e = min_nondeg.entry(root).or_insert(i);
                if refs[i].base < refs[*e].base {
                    *e = i;
                }
            }
        }
    }

    // Surviving nondegenerate classes, ordered by (dim, min base id).
    let mut survivors: Vec<usize> = members
        .keys()
        .copied()
        .filter(|root| !degenerate_witness.contains_key(root) && dim_of[*root] <= amb_dim)
        .collect();
    survivors.sort_by_key(|&root| (dim_of[root], refs[min_nondeg[&root]].base));
    let mut new_id: HashMap<usize, SimplexId> = HashMap::new();
    for (j, &root) in survivors.iter().enumerate() {
        new_id.insert(root, j);
    }

    // Canonical quotient reference of each class, peeling one outermost
    // degeneracy at a time off a degenerate witness.
    let ref_index: HashMap<SimplexRef, usize> = index;
    fn canon_class(
        root: usize,
        refs: &[SimplexRef],
        ref_index: &HashMap<SimplexRef, usize>,
        parent: &mut Vec<usize>,
        degenerate_witness: &HashMap<usize, usize>,
        new_id: &HashMap<usize, SimplexId>,
        memo: &mut HashMap<usize, SimplexRef>,
    ) -> SimplexRef {
        if let Some(r) = memo.get(&root) {
            return r.clone();
        }
        let out = match degenerate_witness.get(&root) {
            None => SimplexRef::nondeg(*new_id.get(&root).expect("survivor has id")),
            Some(&w) => {
                let member = &refs[w];
                let j = member.word[0];
                let inner = SimplexRef { base: member.base, word: member.word[1..].to_vec() };
                let inner_root = find(parent, ref_index[&inner]);
                canon_class(inner_root, refs, ref_index, parent, degenerate_witness, new_id, memo)
                    .degenerate(j)
            }
        };
        memo.insert(root, out.clone());
        out
    }

    let mut memo: HashMap<usize, SimplexRef> = HashMap::new();
    let mut b = ComplexBuilder::new();
    for &root in &survivors {
        let d = dim_of[root];
        let rep = refs[min_nondeg[&root]].base;
        let faces = if d == 0 {
            Vec::new()
        } else {
            (0..=d)
                .map(|i| {
                    let f = ambient.face_ref(rep, i).clone();
                    let froot = find(&mut parent, ref_index[&f]);
                    canon_class(
                        froot,
                        &refs,
                        &ref_index,
                        &mut parent,
                        &degenerate_witness,
                        &new_id,
                        &mut memo,
                    )
                })
                .collect()
        };
        b.add(d, faces);
    }
    let complex = Arc::new(b.build().expect("quotient complex is valid"));
    let assign: Vec<SimplexRef> = ambient
        .all_simplices()
        .map(|s| {
            let root = find(&mut parent, ref_index[&SimplexRef::nondeg(s)]);
            canon_class(
                root,
                &refs,
                &ref_index,
                &mut parent,
                &degenerate_witness,
                &new_id,
                &mut memo,
            )
        })
        .collect();
    let projection = SimplicialMap::new(ambient, complex.clone(), assign)
        .expect("quotient projection is simplicial");
    Quotient { complex, projection }
}

/// Quotient identifying nondegenerate simplices pairwise.
pub fn quotient(
    ambient: Arc<FiniteSimplicialSet>,
    pairs: &[(SimplexId, SimplexId)],
) -> Quotient {
    let seeds: Vec<(SimplexRef, SimplexRef)> = pairs
        .iter()
        .map(|&(a, b)| (SimplexRef::nondeg(a), SimplexRef::nondeg(b)))
        .collect();
    quotient_by_pairs(ambient, &seeds)
}

/// Cone on a simplicial set: one new apex vertex and one (k+1)-simplex
/// over every nondegenerate k-simplex, with the apex as last vertex.
pub struct ConeComplex {
    pub complex: Arc<FiniteSimplicialSet>,
    pub apex: SimplexId,
    /// id in the base complex -> id of its copy in the cone
    pub base_map: Vec<SimplexId>,
    /// id in the base complex -> id of the simplex coned over it
    pub over: Vec<SimplexId>,
}

pub fn cone(a: &FiniteSimplicialSet) -> ConeComplex {
    let mut b = ComplexBuilder::new();
    let mut base_map = vec![0usize; a.simplex_count()];
    let mut over = vec![0usize; a.simplex_count()];
    let maxd = a.dimension().map_or(0, |d| d + 1);
    // dimension 0: base vertices then the apex
    for &v in a.simplices_of_dim(0) {
        base_map[v] = b.vertex();
    }
    let apex = b.vertex();
    for d in 1..maxd {
        for &s in a.simplices_of_dim(d) {
            let faces = (0..=d)
                .map(|i| {
                    let f = a.face_ref(s, i);
                    SimplexRef { base: base_map[f.base], word: f.word.clone() }
                })
                .collect();
            base_map[s] = b.add(d, faces);
        }
    }
    // simplices over the base, one dimension up
    for d in 0..maxd {
        for &s in a.simplices_of_dim(d) {
            let faces = if d == 0 {
                vec![SimplexRef::nondeg(apex), SimplexRef::nondeg(base_map[s])]
            } else {
                let mut fs: Vec<SimplexRef> = (0..=d)
                    .map(|i| {
                        let f = a.face_ref(s, i);
                        SimplexRef { base: over[f.base], word: f.word.clone() }
                    })
                    .collect();
                fs.push(SimplexRef::nondeg(base_map[s]));
                fs
            };
            over[s] = b.add(d + 1, faces);
        }
    }
    let complex = Arc::new(b.build().expect("cone data is valid"));
    ConeComplex { complex, apex, base_map, over }
}

/// Mapping cone of a simplicial map: target glued to the cone on the
/// source along the base copy.
pub struct MappingCone {
    pub complex: Arc<FiniteSimplicialSet>,
    pub target_inclusion: SimplicialMap,
    /// source nondegenerate simplex -> the simplex coned over it
    pub cone_over: Vec<SimplexId>,
    pub apex: SimplexId,
}

pub fn mapping_cone(f: &SimplicialMap) -> MappingCone {
    let ca = cone(&f.source);
    let du = disjoint_union(&[&ca.complex, &f.target]);
    let seeds: Vec<(SimplexRef, SimplexRef)> = f
        .source
        .all_simplices()
        .map(|s| {
            let base_in_cone = SimplexRef::nondeg(du.offsets[0][ca.base_map[s]]);
            let image = du.translate(1, f.apply(s));
            (base_in_cone, image)
        })
        .collect();
    let q = quotient_by_pairs(du.complex.clone(), &seeds);
    let target_inclusion = SimplicialMap::compose(
        &q.projection,
        &du.inclusion(1, f.target.clone()),
    );
    let cone_over: Vec<SimplexId> = f
        .source
        .all_simplices()
        .map(|s| {
            let r = q.projection.apply(du.offsets[0][ca.over[s]]);
            assert!(!r.is_degenerate(), "coned simplex degenerated in mapping cone");
            r.base
        })
        .collect();
    let apex_ref = q.projection.apply(du.offsets[0][ca.apex]);
    assert!(!apex_ref.is_degenerate());
    MappingCone { complex: q.complex, target_inclusion, cone_over, apex: apex_ref.base }
}
