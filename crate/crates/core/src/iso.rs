//! Graph comparison: positional edge-set equality for rank-aligned graphs
//! and a backtracking isomorphism search for pairs without a shared
//! labeling.
//!
//! Vertices are always numbered by lexicographic label rank, so graphs
//! built over the same label universe compare positionally; that is the
//! strongest possible check and needs no search. The search is reserved
//! for pairs like the alternating-group network against its (n,k)-star
//! twin, where no explicit correspondence is available.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::topology::Graph;

/// A checked vertex bijection between two graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    /// `mapping[v]` is the image of rank `v` of the first graph.
    pub mapping: Vec<u32>,
    /// True once the mapping has survived a full adjacency re-check.
    pub verified: bool,
}

/// Positional equality: same vertex count and identical edge lists by
/// rank. With lexicographically sorted labels this is label equality for
/// same-universe graphs and rank alignment otherwise.
pub fn edge_sets_equal(a: &Graph, b: &Graph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    a.edges()
        .iter()
        .zip(b.edges())
        .all(|(x, y)| (x.u, x.v) == (y.u, y.v))
}

struct AdjMatrix {
    n: usize,
    words: Vec<u64>,
}

impl AdjMatrix {
    fn new(g: &Graph) -> AdjMatrix {
        let n = g.vertex_count();
        let stride = n.div_ceil(64);
        let mut words = alloc::vec![0u64; n * stride];
        for e in g.edges() {
            let (u, v) = (e.u as usize, e.v as usize);
            words[u * stride + v / 64] |= 1 << (v % 64);
            words[v * stride + u / 64] |= 1 << (u % 64);
        }
        AdjMatrix { n, words }
    }

    fn get(&self, u: u32, v: u32) -> bool {
        let stride = self.n.div_ceil(64);
        self.words[u as usize * stride + v as usize / 64] >> (v % 64) & 1 == 1
    }
}

fn bfs_distances(g: &Graph, root: u32) -> Vec<u32> {
    let mut dist = alloc::vec![u32::MAX; g.vertex_count()];
    let mut queue = alloc::collections::VecDeque::new();
    dist[root as usize] = 0;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Degree plus sorted neighbor degrees; cheap invariant for candidate
/// filtering (regular graphs defeat the degree part, as expected).
fn vertex_profile(g: &Graph, v: u32) -> (u32, Vec<u32>) {
    let mut nd: Vec<u32> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
    nd.sort_unstable();
    (g.degree(v), nd)
}

/// Exhaustive isomorphism search with invariant pruning. Returns a
/// verified witness, `None` after a complete search, or a resource error
/// once `node_budget` candidate placements have been tried.
pub fn isomorphic(a: &Graph, b: &Graph, node_budget: u64) -> Result<Option<IsoWitness>> {
    let n = a.vertex_count();
    if n > 120 || b.vertex_count() > 120 {
        return Err(Error::domain("isomorphism search capped at 120 vertices"));
    }
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(IsoWitness {
            mapping: Vec::new(),
            verified: true,
        }));
    }
    let mut deg_a: Vec<u32> = (0..n as u32).map(|v| a.degree(v)).collect();
    let mut deg_b: Vec<u32> = (0..n as u32).map(|v| b.degree(v)).collect();
    deg_a.sort_unstable();
    deg_b.sort_unstable();
    if deg_a != deg_b {
        return Ok(None);
    }

    let profiles_a: Vec<(u32, Vec<u32>)> = (0..n as u32).map(|v| vertex_profile(a, v)).collect();
    let profiles_b: Vec<(u32, Vec<u32>)> = (0..n as u32).map(|v| vertex_profile(b, v)).collect();

    // order the first graph by BFS from rank 0 so every later vertex has a
    // mapped neighbor to anchor its candidates
    let dist_a = bfs_distances(a, 0);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| (dist_a[v as usize], v));
    let mut anchor: Vec<Option<(usize, u32)>> = alloc::vec![None; n];
    {
        let mut placed = alloc::vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            placed[v as usize] = i;
        }
        for (i, &v) in order.iter().enumerate() {
            anchor[i] = a
                .neighbors(v)
                .iter()
                .filter(|&&w| placed[w as usize] < i)
                .min_by_key(|&&w| placed[w as usize])
                .map(|&w| (placed[w as usize], w));
        }
    }

    let adj_b = AdjMatrix::new(b);

    let mut state = SearchState {
        a,
        b,
        adj_b: &adj_b,
        profiles_a: &profiles_a,
        profiles_b: &profiles_b,
        dist_a: &dist_a,
        dist_b: Vec::new(),
        order: &order,
        anchor: &anchor,
        mapping: alloc::vec![u32::MAX; n],
        used: alloc::vec![false; n],
        nodes: 0,
        budget: node_budget,
    };

    // the root of the BFS order tries every invariant-compatible image
    let root = order[0];
    for w0 in 0..n as u32 {
        if profiles_b[w0 as usize] != profiles_a[root as usize] {
            continue;
        }
        state.dist_b = bfs_distances(b, w0);
        state.mapping[root as usize] = w0;
        state.used[w0 as usize] = true;
        state.nodes += 1;
        if state.nodes > state.budget {
            return Err(Error::resource(alloc::format!(
                "isomorphism search exceeded its {node_budget}-node budget"
            )));
        }
        if state.place(1)? {
            let mapping = state.mapping.clone();
            return Ok(Some(verify_witness(a, b, mapping)?));
        }
        state.mapping[root as usize] = u32::MAX;
        state.used[w0 as usize] = false;
    }
    Ok(None)
}

struct SearchState<'a> {
    a: &'a Graph,
    b: &'a Graph,
    adj_b: &'a AdjMatrix,
    profiles_a: &'a [(u32, Vec<u32>)],
    profiles_b: &'a [(u32, Vec<u32>)],
    dist_a: &'a [u32],
    dist_b: Vec<u32>,
    order: &'a [u32],
    anchor: &'a [Option<(usize, u32)>],
    mapping: Vec<u32>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl SearchState<'_> {
    fn place(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let v = self.order[depth];
        // candidates: neighbors of the anchor's image, or anything unmapped
        // for vertices in other components
        let candidates: Vec<u32> = match self.anchor[depth] {
            Some((_, va)) => self.b.neighbors(self.mapping[va as usize]).to_vec(),
            None => (0..self.b.vertex_count() as u32).collect(),
        };
        for w in candidates {
            if self.used[w as usize] {
                continue;
            }
            if self.profiles_b[w as usize] != self.profiles_a[v as usize] {
                continue;
            }
            if self.dist_b[w as usize] != self.dist_a[v as usize] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::resource(alloc::format!(
                    "isomorphism search exceeded its {}-node budget",
                    self.budget
                )));
            }
            if !self.consistent(v, w) {
                continue;
            }
            self.mapping[v as usize] = w;
            self.used[w as usize] = true;
            if self.place(depth + 1)? {
                return Ok(true);
            }
            self.mapping[v as usize] = u32::MAX;
            self.used[w as usize] = false;
        }
        Ok(false)
    }

    /// Adjacency consistency against every mapped vertex: mapped neighbors
    /// of v must map onto neighbors of w, and w must have no other mapped
    /// neighbors.
    fn consistent(&self, v: u32, w: u32) -> bool {
        let mut mapped_nbrs_v = 0usize;
        for &x in self.a.neighbors(v) {
            let img = self.mapping[x as usize];
            if img != u32::MAX {
                if !self.adj_b.get(w, img) {
                    return false;
                }
                mapped_nbrs_v += 1;
            }
        }
        let mapped_nbrs_w = self
            .b
            .neighbors(w)
            .iter()
            .filter(|&&y| self.used[y as usize])
            .count();
        mapped_nbrs_v == mapped_nbrs_w
    }
}

/// Re-check a claimed bijection edge by edge before handing it out.
fn verify_witness(a: &Graph, b: &Graph, mapping: Vec<u32>) -> Result<IsoWitness> {
    let mut image_edges: Vec<(u32, u32)> = a
        .edges()
        .iter()
        .map(|e| {
            let (x, y) = (mapping[e.u as usize], mapping[e.v as usize]);
            (x.min(y), x.max(y))
        })
        .collect();
    image_edges.sort_unstable();
    let b_edges: Vec<(u32, u32)> = b.edges().iter().map(|e| (e.u, e.v)).collect();
    if image_edges != b_edges {
        return Err(Error::structure("witness failed adjacency re-verification"));
    }
    let mut seen = alloc::vec![false; mapping.len()];
    for &w in &mapping {
        if w as usize >= seen.len() || seen[w as usize] {
            return Err(Error::structure("witness mapping is not a bijection"));
        }
        seen[w as usize] = true;
    }
    Ok(IsoWitness {
        mapping,
        verified: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split::split_nkstar;
    use crate::topology::{
        build_alternating_network, build_cycle, build_nkstar, build_star, EdgeKind,
    };

    #[test]
    fn suffix_split_matches_star_by_edge_sets() {
        let (split, _) = split_nkstar(4, 2).unwrap();
        let star = build_star(4).unwrap();
        assert!(edge_sets_equal(&split, &star));
    }

    #[test]
    fn nkstar_with_k_n_minus_1_matches_star() {
        assert!(edge_sets_equal(
            &build_nkstar(4, 3).unwrap(),
            &build_star(4).unwrap()
        ));
    }

    #[test]
    fn edge_removal_breaks_equality() {
        let star = build_star(4).unwrap();
        let mut edges: Vec<(u32, u32, EdgeKind)> = star
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.kind))
            .collect();
        edges.pop();
        let smaller = Graph::new(star.labels().to_vec(), edges, None).unwrap();
        assert!(!edge_sets_equal(&star, &smaller));
        assert!(edge_sets_equal(&star, &star));
    }

    #[test]
    fn alternating_network_matches_its_nkstar_twin() {
        let an4 = build_alternating_network(4).unwrap();
        let s42 = build_nkstar(4, 2).unwrap();
        let w = isomorphic(&an4, &s42, 10_000_000).unwrap().unwrap();
        assert!(w.verified);
        // symmetric in its arguments
        let back = isomorphic(&s42, &an4, 10_000_000).unwrap().unwrap();
        assert!(back.verified);
    }

    #[test]
    fn mismatched_graphs_are_rejected_cheaply() {
        let k4 = build_nkstar(4, 1).unwrap();
        let c4 = build_cycle(4).unwrap();
        assert!(isomorphic(&k4, &c4, 1000).unwrap().is_none());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let an4 = build_alternating_network(4).unwrap();
        let s42 = build_nkstar(4, 2).unwrap();
        match isomorphic(&an4, &s42, 3) {
            Err(Error::Resource(_)) => {}
            other => panic!("expected resource error, got {other:?}"),
        }
    }
}
