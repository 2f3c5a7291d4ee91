//! Shared test oracles, kept independent of the library's quotient
//! implementation: the germ relation is closed here by brute force (seeds
//! from every simplex of every composable-pair product, including the
//! degenerate ones, then faces and transitivity until a fixed point),
//! with no degeneracy propagation and no union-find.

use germ::branching::{assemble_path_space, GermSpace, Side};
use germ::flow::Flow;
use germ::simplicial::SimplexRef;
use std::collections::BTreeMap;

pub struct BruteForcePartition {
    refs: Vec<SimplexRef>,
    index: BTreeMap<SimplexRef, usize>,
    label: Vec<usize>,
}

impl BruteForcePartition {
    pub fn same_class(&self, a: &SimplexRef, b: &SimplexRef) -> bool {
        self.label[self.index[a]] == self.label[self.index[b]]
    }

    /// Does the class of this reference contain a degenerate member?
    pub fn class_collapsed(&self, r: &SimplexRef) -> bool {
        let l = self.label[self.index[r]];
        self.refs
            .iter()
            .enumerate()
            .any(|(i, m)| self.label[i] == l && m.is_degenerate())
    }
}

/// Close the relation {(compose s, kept-projection s)} over all simplex
/// references of every composable-pair product, under faces and
/// transitivity.
pub fn brute_force_germ_partition(x: &Flow, side: Side) -> BruteForcePartition {
    let assembly = assemble_path_space(x);
    let amb = &assembly.complex;
    let mut top = amb.dimension().unwrap_or(0);
    for (_, law) in x.laws() {
        top = top.max(law.product.complex.dimension().unwrap_or(0));
    }

    let mut refs: Vec<SimplexRef> = Vec::new();
    let mut index: BTreeMap<SimplexRef, usize> = BTreeMap::new();
    for k in 0..=top {
        for r in amb.refs_of_dim(k) {
            index.insert(r.clone(), refs.len());
            refs.push(r);
        }
    }
    let mut label: Vec<usize> = (0..refs.len()).collect();

    // seeds from every reference of every product, degenerate ones included
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for (&(a, b, c), law) in x.laws() {
        let proj = law.product.projection(match side {
            Side::Minus => 0,
            Side::Plus => 1,
        });
        for k in 0..=law.product.complex.dimension().unwrap_or(0) {
            for r in law.product.complex.refs_of_dim(k) {
                let composite = assembly.translate((a, c), &law.map.apply_ref(&r));
                let kept_pair = match side {
                    Side::Minus => (a, b),
                    Side::Plus => (b, c),
                };
                let kept = assembly.translate(kept_pair, &proj.apply_ref(&r));
                pending.push((index[&composite], index[&kept]));
            }
        }
    }

    // close under transitivity (label merging) and faces
    while let Some((i, j)) = pending.pop() {
        let (li, lj) = (label[i], label[j]);
        if li == lj {
            continue;
        }
        let (keep, kill) = (li.min(lj), li.max(lj));
        for l in label.iter_mut() {
            if *l == kill {
                *l = keep;
            }
        }
        let d = amb.ref_dim(&refs[i]);
        if d >= 1 {
            for f in 0..=d {
                let fa = amb.face(&refs[i], f);
                let fb = amb.face(&refs[j], f);
                if fa != fb {
                    pending.push((index[&fa], index[&fb]));
                }
            }
        }
    }
    BruteForcePartition { refs, index, label }
}

/// Compare a computed germ space with the brute-force partition: the
/// quotient identifies two path simplices exactly when the closure does,
/// and kills exactly the classes the closure collapses.
pub fn germ_space_matches_partition(g: &GermSpace, oracle: &BruteForcePartition) -> bool {
    let amb = &g.assembly.complex;
    let n = amb.simplex_count();
    for s in 0..n {
        let rs = SimplexRef::nondeg(s);
        let img_s = g.projection.apply(s);
        if img_s.is_degenerate() != oracle.class_collapsed(&rs) {
            return false;
        }
        for t in (s + 1)..n {
            if amb.dim_of(s) != amb.dim_of(t) {
                continue;
            }
            let rt = SimplexRef::nondeg(t);
            let same_impl = img_s == g.projection.apply(t);
            if same_impl != oracle.same_class(&rs, &rt) {
                return false;
            }
        }
    }
    true
}
