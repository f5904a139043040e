//! Combinatorial descriptions of j-special and geodesic varieties and
//! their block decompositions.
//!
//! A [`JSpecialSpec`] lists modular edges `Φ_N(y_i, y_k) = 0` on the
//! coordinates of `C^n`; a [`GeodesicSpec`] mirrors the same edge pattern
//! with fractional-linear links `x_i = g_{i,k} x_k`.  Connected components
//! of the edge graph are the j-blocks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::modular::GeoMatrix;

/// A j-special variety given by modular edges on `C^n`.
///
/// Edges are `(i, k, N)` with `1 ≤ i < k ≤ n` and `N ≥ 1`, meaning
/// `Φ_N(y_i, y_k) = 0`.  Self-edges are rejected (no constant
/// coordinates: the specs describe strongly j-special varieties) and a
/// pair carries at most one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JSpecialSpec {
    n: usize,
    edges: Vec<(usize, usize, u32)>,
}

impl JSpecialSpec {
    pub fn new(n: usize, edges: &[(usize, usize, u32)]) -> Result<JSpecialSpec> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "a j-special spec needs at least one coordinate".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut out = edges.to_vec();
        out.sort();
        for &(i, k, level) in &out {
            if i == k {
                return Err(Error::InvalidInput(format!(
                    "self-edge at coordinate {i}: constant coordinates are \
                     not supported"
                )));
            }
            if !(1 <= i && i < k && k <= n) {
                return Err(Error::InvalidInput(format!(
                    "edge ({i}, {k}) out of range for n = {n} (need i < k)"
                )));
            }
            if level == 0 {
                return Err(Error::InvalidInput(format!(
                    "edge ({i}, {k}) has level 0; levels start at 1"
                )));
            }
            if !seen.insert((i, k)) {
                return Err(Error::InvalidInput(format!(
                    "duplicate edge on pair ({i}, {k})"
                )));
            }
        }
        Ok(JSpecialSpec { n, edges: out })
    }

    /// Spec with no edges: the whole `C^n` (every block trivial).
    pub fn trivial(n: usize) -> Result<JSpecialSpec> {
        JSpecialSpec::new(n, &[])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges sorted by `(i, k)`.
    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    /// Levels on a given unordered pair, if any.
    pub fn level_of(&self, i: usize, k: usize) -> Option<u32> {
        let (i, k) = if i < k { (i, k) } else { (k, i) };
        self.edges
            .iter()
            .find(|&&(a, b, _)| (a, b) == (i, k))
            .map(|&(_, _, lv)| lv)
    }

    /// Dimension of the j-special variety: one per block (no constant
    /// coordinates).
    pub fn dimension(&self) -> usize {
        j_block_decomposition(self).blocks().len()
    }
}

/// A geodesic variety mirroring a [`JSpecialSpec`]: edge `(i, k, g)`
/// means `x_i = g x_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicSpec {
    n: usize,
    edges: Vec<(usize, usize, GeoMatrix)>,
}

impl GeodesicSpec {
    pub fn new(
        n: usize,
        edges: &[(usize, usize, GeoMatrix)],
    ) -> Result<GeodesicSpec> {
        // Reuse the combinatorial validation (the level is irrelevant).
        JSpecialSpec::new(n, &edges.iter().map(|&(i, k, _)| (i, k, 1)).collect::<Vec<_>>())?;
        let mut out = edges.to_vec();
        out.sort_by_key(|&(i, k, _)| (i, k));
        for (i, k, g) in &out {
            if g.is_zero() {
                return Err(Error::UnlinkedPair(format!(
                    "edge ({i}, {k}) carries the unlinked marker"
                )));
            }
        }
        Ok(GeodesicSpec { n, edges: out })
    }

    /// Geodesic spec with no edges.
    pub fn trivial(n: usize) -> Result<GeodesicSpec> {
        GeodesicSpec::new(n, &[])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, GeoMatrix)] {
        &self.edges
    }

    pub fn matrix_of(&self, i: usize, k: usize) -> Option<&GeoMatrix> {
        let (i, k) = if i < k { (i, k) } else { (k, i) };
        self.edges
            .iter()
            .find(|&&(a, b, _)| (a, b) == (i, k))
            .map(|(_, _, g)| g)
    }

    /// Whether the edge pattern matches the j-special spec's pattern.
    pub fn matches(&self, jspec: &JSpecialSpec) -> bool {
        self.n == jspec.n()
            && self.edges.len() == jspec.edges().len()
            && self
                .edges
                .iter()
                .zip(jspec.edges())
                .all(|(&(i, k, _), &(a, b, _))| (i, k) == (a, b))
    }
}

/// One j-block: a connected component of the edge graph with its
/// BFS spanning tree (root = smallest index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JBlock {
    indices: Vec<usize>,
    tree: Vec<(usize, usize, u32)>,
}

impl JBlock {
    /// Member coordinates, ascending.  The root is the first.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn root(&self) -> usize {
        self.indices[0]
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// A j-block of length 1 is trivial.
    pub fn is_trivial(&self) -> bool {
        self.indices.len() == 1
    }

    /// Spanning-tree edges as stored in the spec (`i < k`), in BFS
    /// discovery order.
    pub fn tree(&self) -> &[(usize, usize, u32)] {
        &self.tree
    }
}

/// Partition of `{1..n}` into j-blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JBlockDecomp {
    n: usize,
    blocks: Vec<JBlock>,
}

impl JBlockDecomp {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Blocks ordered by their smallest member.
    pub fn blocks(&self) -> &[JBlock] {
        &self.blocks
    }

    pub fn block_of(&self, i: usize) -> &JBlock {
        self.blocks
            .iter()
            .find(|b| b.indices.contains(&i))
            .expect("every coordinate lies in a block")
    }
}

/// Connected components of the modular-edge graph, each with a BFS
/// spanning tree rooted at its smallest index (neighbours visited in
/// ascending order, so the result is deterministic).
pub fn j_block_decomposition(spec: &JSpecialSpec) -> JBlockDecomp {
    let n = spec.n();
    let mut adj: BTreeMap<usize, Vec<(usize, u32)>> = BTreeMap::new();
    for &(i, k, lv) in spec.edges() {
        adj.entry(i).or_default().push((k, lv));
        adj.entry(k).or_default().push((i, lv));
    }
    for nbrs in adj.values_mut() {
        nbrs.sort();
    }
    let mut seen = vec![false; n + 1];
    let mut blocks = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut indices = vec![start];
        let mut tree = Vec::new();
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(v, lv) in adj.get(&u).map(|x| x.as_slice()).unwrap_or(&[]) {
                if !seen[v] {
                    seen[v] = true;
                    indices.push(v);
                    let (a, b) = if u < v { (u, v) } else { (v, u) };
                    tree.push((a, b, lv));
                    queue.push_back(v);
                }
            }
        }
        indices.sort();
        blocks.push(JBlock { indices, tree });
    }
    JBlockDecomp { n, blocks }
}

/// Root-path matrices of one block: for each member `i`, the composed
/// matrix `ĝ_i` with `x_i = ĝ_i x_root` (identity at the root), following
/// the spanning tree.  Every edge of the geodesic spec inside the block —
/// including non-tree cycle edges — is then checked for consistency:
/// `g_{i,k} ĝ_k = ĝ_i` up to the canonical positive scaling.
pub fn root_path_matrices(
    block: &JBlock,
    geo: &GeodesicSpec,
) -> Result<BTreeMap<usize, GeoMatrix>> {
    let mut path: BTreeMap<usize, GeoMatrix> = BTreeMap::new();
    path.insert(block.root(), GeoMatrix::identity());
    for &(i, k, _) in block.tree() {
        // Edge means x_i = g x_k; exactly one endpoint is already placed
        // (BFS tree order).
        let g = geo.matrix_of(i, k).ok_or_else(|| {
            Error::InvalidGeodesic(format!(
                "no geodesic matrix on edge ({i}, {k})"
            ))
        })?;
        match (path.get(&i).cloned(), path.get(&k).cloned()) {
            (None, Some(gk)) => {
                path.insert(i, g.compose(&gk));
            }
            (Some(gi), None) => {
                path.insert(k, g.inverse()?.compose(&gi));
            }
            _ => unreachable!("spanning tree discovers one new endpoint"),
        }
    }
    for (i, k, g) in geo.edges() {
        let (Some(gi), Some(gk)) = (path.get(i), path.get(k)) else {
            continue; // edge of another block
        };
        if g.compose(gk) != *gi {
            return Err(Error::InvalidGeodesic(format!(
                "cycle inconsistency at edge ({i}, {k}): {} · {} ≠ {}",
                g, gk, gi
            )));
        }
    }
    Ok(path)
}
