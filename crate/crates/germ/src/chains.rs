//! Chain complexes over the integers, homology in canonical form, induced
//! maps in canonical bases, and exactness checking by lattice comparison.

use crate::matrix::{kernel_basis, lattices_equal, smith_normal_form, IntegerMatrix, Lattice};
use crate::simplicial::{FiniteSimplicialSet, SimplexId, SimplicialMap};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A bounded chain complex of free abelian groups. Degrees run from
/// `lowest` upward; `ranks[k]` is the rank in degree `lowest + k` and
/// `boundaries[k]` maps degree `lowest + k + 1` into degree `lowest + k`.
pub struct ChainComplex {
    pub lowest: i64,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<IntegerMatrix>,
}

impl ChainComplex {
    pub fn rank(&self, degree: i64) -> usize {
        let k = degree - self.lowest;
        if k < 0 {
            return 0;
        }
        self.ranks.get(k as usize).copied().unwrap_or(0)
    }

    pub fn highest(&self) -> i64 {
        self.lowest + self.ranks.len() as i64 - 1
    }

    /// Boundary matrix from `degree` to `degree - 1` (zero-shaped outside range).
    pub fn boundary_from(&self, degree: i64) -> IntegerMatrix {
        let k = degree - self.lowest;
        if k <= 0 || k as usize >= self.ranks.len() {
            return IntegerMatrix::zeros(self.rank(degree - 1), self.rank(degree));
        }
        self.boundaries[(k - 1) as usize].clone()
    }

    /// Consecutive boundaries compose to zero.
    pub fn validate(&self) -> bool {
        for k in 1..self.boundaries.len() {
            if !self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero() {
                return false;
            }
        }
        true
    }
}

/// Normalized chains: free on nondegenerate simplices, with degenerate
/// faces contributing zero.
pub fn normalized_chains(c: &FiniteSimplicialSet) -> ChainComplex {
    let maxd = c.dimension().map_or(0, |d| d + 1);
    let ranks: Vec<usize> = (0..maxd.max(1)).map(|d| c.count_in_dim(d)).collect();
    let mut boundaries = Vec::new();
    for d in 1..maxd {
        boundaries.push(boundary_matrix(c, d));
    }
    ChainComplex { lowest: 0, ranks, boundaries }
}

/// Boundary matrix from degree d to degree d-1 in the per-dimension bases.
pub fn boundary_matrix(c: &FiniteSimplicialSet, d: usize) -> IntegerMatrix {
    let rows = c.count_in_dim(d - 1);
    let cols = c.count_in_dim(d);
    let row_index = index_in_dim(c, d - 1);
    let mut m = IntegerMatrix::zeros(rows, cols);
    for (j, &s) in c.simplices_of_dim(d).iter().enumerate() {
        for i in 0..=d {
            let f = c.face_ref(s, i);
            if f.is_degenerate() {
                continue;
            }
            let r = row_index[f.base];
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let v = m.get(r, j) + sign;
            m.set(r, j, v);
        }
    }
    m
}

fn index_in_dim(c: &FiniteSimplicialSet, d: usize) -> Vec<usize> {
    let mut idx = vec![usize::MAX; c.simplex_count()];
    for (k, &s) in c.simplices_of_dim(d).iter().enumerate() {
        idx[s] = k;
    }
    idx
}

/// Augment a normalized chain complex toward a point: degree -1 gets rank
/// one and the augmentation sums vertex coefficients.
pub fn augmented_to_point(c: &FiniteSimplicialSet) -> ChainComplex {
    let plain = normalized_chains(c);
    let mut ranks = vec![1usize];
    ranks.extend_from_slice(&plain.ranks);
    let mut eps = IntegerMatrix::zeros(1, c.count_in_dim(0));
    for j in 0..c.count_in_dim(0) {
        eps.set(0, j, BigInt::one());
    }
    let mut boundaries = vec![eps];
    boundaries.extend(plain.boundaries);
    ChainComplex { lowest: -1, ranks, boundaries }
}

/// The matrix of a simplicial map on degree-d normalized chains.
pub fn chain_map_matrix(f: &SimplicialMap, d: usize) -> IntegerMatrix {
    let rows = f.target.count_in_dim(d);
    let cols = f.source.count_in_dim(d);
    let row_index = index_in_dim(&f.target, d);
    let mut m = IntegerMatrix::zeros(rows, cols);
    for (j, &s) in f.source.simplices_of_dim(d).iter().enumerate() {
        let r = f.apply(s);
        if r.is_degenerate() {
            continue;
        }
        m.set(row_index[r.base], j, BigInt::one());
    }
    m
}

/// A finitely generated abelian group in canonical form: free rank plus a
/// divisibility chain of torsion orders, each at least 2.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::chains::serialize_torsion")]
    pub torsion: Vec<BigInt>,
}

pub(crate) fn serialize_torsion<S: serde::Serializer>(
    t: &[BigInt],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for v in t {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Total number of canonical generators.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Canonical relation matrix: free generators first, then one torsion
    /// column per order.
    pub fn relation_matrix(&self) -> IntegerMatrix {
        let g = self.generator_count();
        let t = self.torsion.len();
        let mut m = IntegerMatrix::zeros(g, t);
        for (i, d) in self.torsion.iter().enumerate() {
            m.set(self.free_rank + i, i, d.clone());
        }
        m
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology of a chain complex at one degree, with enough basis data to
/// express cycles in canonical coordinates.
pub struct HomologyBasis {
    pub degree: i64,
    chain_rank: usize,
    kernel: IntegerMatrix,
    v_inv: IntegerMatrix,
    bd_rank: usize,
    upr: IntegerMatrix,
    upr_inv: IntegerMatrix,
    /// row index into the u'-basis for each canonical generator
    gen_rows: Vec<usize>,
    gen_orders: Vec<BigInt>,
    group: AbelianGroup,
}

impl HomologyBasis {
    pub fn compute(c: &ChainComplex, degree: i64) -> HomologyBasis {
        let n = c.rank(degree);
        let bd = c.boundary_from(degree);
        let bd_up = c.boundary_from(degree + 1);
        let s_bd = smith_normal_form(&bd);
        let kernel_cols = n - s_bd.rank;
        let mut kernel = IntegerMatrix::zeros(n, kernel_cols);
        for (k, j) in (s_bd.rank..n).enumerate() {
            for i in 0..n {
                kernel.set(i, k, s_bd.v.get(i, j).clone());
            }
        }
        // image of the higher boundary in kernel coordinates
        let mut x = IntegerMatrix::zeros(kernel_cols, bd_up.cols);
        for j in 0..bd_up.cols {
            let col = bd_up.column(j);
            let y = s_bd.v_inv.mul_vec(&col);
            for i in 0..s_bd.rank {
                debug_assert!(y[i].is_zero(), "boundary image not in kernel");
            }
            for k in 0..kernel_cols {
                x.set(k, j, y[s_bd.rank + k].clone());
            }
        }
        let s_x = smith_normal_form(&x);
        let mut free_rows = Vec::new();
        let mut torsion_rows = Vec::new();
        let mut torsion = Vec::new();
        for i in 0..kernel_cols {
            if i < s_x.rank {
                let d = s_x.d.get(i, i).clone();
                if d.abs() > BigInt::one() {
                    torsion_rows.push(i);
                    torsion.push(d.abs());
                }
            } else {
                free_rows.push(i);
            }
        }
        let free_rank = free_rows.len();
        let mut gen_rows = free_rows;
        let mut gen_orders = vec![BigInt::zero(); free_rank];
        gen_rows.extend_from_slice(&torsion_rows);
        gen_orders.extend(torsion.iter().cloned());
        let group = AbelianGroup { free_rank, torsion };
        HomologyBasis {
            degree,
            chain_rank: n,
            kernel,
            v_inv: s_bd.v_inv,
            bd_rank: s_bd.rank,
            upr: s_x.u,
            upr_inv: s_x.u_inv,
            gen_rows,
            gen_orders,
            group,
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn generator_count(&self) -> usize {
        self.gen_rows.len()
    }

    /// Chain representative of the i-th canonical generator.
    pub fn generator_chain(&self, i: usize) -> Vec<BigInt> {
        let row = self.gen_rows[i];
        // kernel * (u'^{-1} e_row)
        let col = self.upr_inv.column(row);
        self.kernel.mul_vec(&col)
    }

    /// Coordinates of a cycle in the canonical generators (torsion entries
    /// reduced into [0, order)). Panics if the chain is not a cycle.
    pub fn express(&self, cycle: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(cycle.len(), self.chain_rank);
        let y_full = self.v_inv.mul_vec(cycle);
        for (i, v) in y_full.iter().enumerate().take(self.bd_rank) {
            assert!(v.is_zero(), "chain is not a cycle (coordinate {})", i);
        }
        let y: Vec<BigInt> = y_full[self.bd_rank..].to_vec();
        let w = self.upr.mul_vec(&y);
        self.gen_rows
            .iter()
            .zip(&self.gen_orders)
            .map(|(&row, order)| {
                if order.is_zero() {
                    w[row].clone()
                } else {
                    let m = &w[row] % order;
                    if m.is_negative() {
                        m + order
                    } else {
                        m
                    }
                }
            })
            .collect()
    }
}

/// Homology group of `c` in a given degree, in canonical form.
pub fn homology(c: &ChainComplex, degree: i64) -> AbelianGroup {
    if degree < c.lowest || degree > c.highest() {
        return AbelianGroup::zero();
    }
    HomologyBasis::compute(c, degree).group().clone()
}

/// Matrix of the map a simplicial map induces on degree-n homology, in
/// the canonical generator bases of source and target.
pub fn induced_map(f: &SimplicialMap, n: usize) -> IntegerMatrix {
    let src = HomologyBasis::compute(&normalized_chains(&f.source), n as i64);
    let tgt = HomologyBasis::compute(&normalized_chains(&f.target), n as i64);
    induced_on_homology(&chain_map_matrix(f, n), &src, &tgt)
}

/// Matrix of the map induced in homology by a chain-level matrix, in the
/// canonical generator bases of `src` and `tgt`.
pub fn induced_on_homology(
    chain_map: &IntegerMatrix,
    src: &HomologyBasis,
    tgt: &HomologyBasis,
) -> IntegerMatrix {
    let cols = (0..src.generator_count())
        .map(|i| {
            let g = src.generator_chain(i);
            let img = chain_map.mul_vec(&g);
            tgt.express(&img)
        })
        .collect();
    IntegerMatrix::from_columns(tgt.generator_count(), cols)
}

/// Exactness of `A --f--> B --g--> C` at `B`, where the groups are given in
/// canonical form and the maps in canonical generator bases: checks that
/// the sublattice im(f) + rel(B) of Z^{gens B} equals the preimage lattice
/// of rel(C) under g.
pub fn exact_at(
    f: &IntegerMatrix,
    b_group: &AbelianGroup,
    g: &IntegerMatrix,
    c_group: &AbelianGroup,
) -> bool {
    let rel_b = b_group.relation_matrix();
    let rel_c = c_group.relation_matrix();
    let image_side = f.hstack(&rel_b);
    // kernel of [g | rel_c], projected to the B coordinates
    let stacked = g.hstack(&rel_c);
    let ker = kernel_basis(&stacked);
    let gens_b = b_group.generator_count();
    let mut proj = IntegerMatrix::zeros(gens_b, ker.cols);
    for j in 0..ker.cols {
        for i in 0..gens_b {
            proj.set(i, j, ker.get(i, j).clone());
        }
    }
    let kernel_side = proj.hstack(&rel_b);
    lattices_equal(&image_side, &kernel_side)
}

/// Surjectivity of `g : B -> C` in canonical bases.
pub fn surjective(g: &IntegerMatrix, c_group: &AbelianGroup) -> bool {
    let rel_c = c_group.relation_matrix();
    Lattice::from_columns(&g.hstack(&rel_c)).is_full()
}

/// Is `g . f` the zero map into C (modulo C's relations)?
pub fn composite_is_zero(
    f: &IntegerMatrix,
    g: &IntegerMatrix,
    c_group: &AbelianGroup,
) -> bool {
    let gf = g.mul(f);
    let rel = Lattice::from_columns(&c_group.relation_matrix());
    (0..gf.cols).all(|j| rel.contains(&gf.column(j)))
}

/// Partition of the vertices under the edge relation; classes are sorted
/// lists of vertex simplex ids and the list of classes is sorted by
/// smallest member.
pub fn pi0(c: &FiniteSimplicialSet) -> Vec<Vec<SimplexId>> {
    let verts = c.simplices_of_dim(0);
    if verts.is_empty() {
        return Vec::new();
    }
    let n = c.simplex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for &e in c.simplices_of_dim(1) {
        let a = c.face_ref(e, 0).base;
        let b = c.face_ref(e, 1).base;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<SimplexId>> = Default::default();
    for &v in verts {
        let r = find(&mut parent, v);
        classes.entry(r).or_default().push(v);
    }
    let mut out: Vec<Vec<SimplexId>> = classes.into_values().collect();
    for class in &mut out {
        class.sort_unstable();
    }
    out.sort_by_key(|c| c[0]);
    out
}

/// Nonempty, connected, and all reduced homology vanishes up to the
/// dimension of the complex. A necessary condition for weak
/// contractibility; it cannot detect a perfect nontrivial fundamental
/// group, and every consumer of this predicate says so.
pub fn is_homology_point(c: &FiniteSimplicialSet) -> bool {
    if c.is_empty() {
        return false;
    }
    let aug = augmented_to_point(c);
    let top = c.dimension().unwrap_or(0) as i64;
    (0..=top).all(|d| homology(&aug, d).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{boundary_simplex, standard_simplex};

    #[test]
    fn chains_of_standard_simplices() {
        let d0 = standard_simplex(0);
        let c = normalized_chains(&d0);
        assert!(c.validate());
        assert_eq!(homology(&c, 0), AbelianGroup::free(1));

        let d2 = standard_simplex(2);
        let c = normalized_chains(&d2);
        assert!(c.validate());
        assert_eq!(homology(&c, 0), AbelianGroup::free(1));
        assert_eq!(homology(&c, 1), AbelianGroup::zero());
        assert_eq!(homology(&c, 2), AbelianGroup::zero());
    }

    #[test]
    fn circle_homology_matches_hand_computation() {
        // Boundary of the triangle: hand chain complex has ∂1 with matrix
        // rows v0,v1,v2 / cols e01,e02,e12 as below; H0 = Z, H1 = Z.
        let circle = boundary_simplex(2);
        let c = normalized_chains(&circle);
        assert!(c.validate());
        let hand = ChainComplex {
            lowest: 0,
            ranks: vec![3, 3],
            boundaries: vec![IntegerMatrix::from_rows(vec![
                vec![-1, -1, 0],
                vec![1, 0, -1],
                vec![0, 1, 1],
            ])],
        };
        for d in 0..=1 {
            assert_eq!(homology(&c, d), homology(&hand, d), "degree {}", d);
        }
        assert_eq!(homology(&c, 0), AbelianGroup::free(1));
        assert_eq!(homology(&c, 1), AbelianGroup::free(1));
    }

    #[test]
    fn two_sphere() {
        let s2 = boundary_simplex(3);
        let c = normalized_chains(&s2);
        assert!(c.validate());
        assert_eq!(homology(&c, 0), AbelianGroup::free(1));
        assert_eq!(homology(&c, 1), AbelianGroup::zero());
        assert_eq!(homology(&c, 2), AbelianGroup::free(1));
    }

    #[test]
    fn homology_point_predicate() {
        assert!(is_homology_point(&standard_simplex(5)));
        assert!(!is_homology_point(&boundary_simplex(1)));
        assert!(!is_homology_point(&boundary_simplex(2)));
        assert!(!is_homology_point(&FiniteSimplicialSet::empty()));
    }

    #[test]
    fn pi0_components() {
        assert_eq!(pi0(&standard_simplex(3)).len(), 1);
        assert_eq!(pi0(&boundary_simplex(1)).len(), 2);
        assert_eq!(pi0(&FiniteSimplicialSet::empty()).len(), 0);
    }

    #[test]
    fn express_and_generators_roundtrip() {
        let circle = boundary_simplex(2);
        let c = normalized_chains(&circle);
        let h1 = HomologyBasis::compute(&c, 1);
        assert_eq!(h1.group(), &AbelianGroup::free(1));
        let g = h1.generator_chain(0);
        let coords = h1.express(&g);
        assert_eq!(coords.len(), 1);
        assert!(coords[0].abs().is_one() || coords[0].is_one());
    }

    #[test]
    fn exactness_toolkit() {
        use num_bigint::BigInt;
        let _ = BigInt::from(0);
        // 0 -> Z --2--> Z --proj--> Z/2 -> 0
        let z = AbelianGroup::free(1);
        let z2 = AbelianGroup { free_rank: 0, torsion: vec![BigInt::from(2)] };
        let two = IntegerMatrix::from_rows(vec![vec![2]]);
        let proj = IntegerMatrix::from_rows(vec![vec![1]]);
        assert!(exact_at(&two, &z, &proj, &z2));
        assert!(surjective(&proj, &z2));
        assert!(composite_is_zero(&two, &proj, &z2));
        // replacing 2 by 4 breaks exactness at the middle
        let four = IntegerMatrix::from_rows(vec![vec![4]]);
        assert!(!exact_at(&four, &z, &proj, &z2));
    }

    #[test]
    fn out_of_range_degrees_are_zero() {
        let c = normalized_chains(&standard_simplex(1));
        assert_eq!(homology(&c, 5), AbelianGroup::zero());
        assert_eq!(homology(&c, -1), AbelianGroup::zero());
    }

    #[test]
    fn induced_map_of_double_cover_is_multiplication_by_two() {
        use crate::simplicial::SimplicialMap;
        let two_edges = crate::fixtures::two_edge_circle();
        let one_loop = crate::fixtures::loop_circle();
        let wrap = SimplicialMap::new(
            two_edges,
            one_loop,
            vec![
                crate::simplicial::SimplexRef::nondeg(0),
                crate::simplicial::SimplexRef::nondeg(0),
                crate::simplicial::SimplexRef::nondeg(1),
                crate::simplicial::SimplexRef::nondeg(1),
            ],
        )
        .unwrap();
        let m = induced_map(&wrap, 1);
        assert_eq!((m.rows, m.cols), (1, 1));
        assert_eq!(m.get(0, 0).abs(), num_bigint::BigInt::from(2));
        // and an isomorphism on components
        let m0 = induced_map(&wrap, 0);
        assert!(crate::chains::surjective(&m0, &AbelianGroup::free(1)));
    }
}
