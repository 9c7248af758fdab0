//! Immutable simple undirected graphs over arrangement labels, plus the
//! generators for the permutation-network families.
//!
//! Vertices are numbered by the lexicographic rank of their label, so two
//! graphs over the same label universe can be compared positionally.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::perm::{self, Arrangement, Parity};

/// How an edge arises in its family.
///
/// `Swap(i)` exchanges the first digit with the `i`-digit (an `i`-edge);
/// `Unswap` replaces the first digit by an unused one. Families without
/// digit semantics use `Plain`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Swap(u8),
    Unswap,
    Plain,
}

impl EdgeKind {
    /// Classify the edge between two labels by comparing digit positions.
    pub fn classify(a: &Arrangement, b: &Arrangement) -> EdgeKind {
        let (x, y) = (a.digits(), b.digits());
        if x.len() != y.len() {
            return EdgeKind::Plain;
        }
        let diff: Vec<usize> = (0..x.len()).filter(|&i| x[i] != y[i]).collect();
        match diff.as_slice() {
            [0] => EdgeKind::Unswap,
            [0, i] if x[0] == y[*i] && x[*i] == y[0] => EdgeKind::Swap(*i as u8 + 1),
            _ => EdgeKind::Plain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub kind: EdgeKind,
}

/// Graph family descriptor carried by generated graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Star,
    NkStar,
    Alternating,
    Cycle,
    Split,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::NkStar => "nkstar",
            Family::Alternating => "an",
            Family::Cycle => "cycle",
            Family::Split => "split",
        }
    }

    pub fn from_str(s: &str) -> Option<Family> {
        Some(match s {
            "star" => Family::Star,
            "nkstar" => Family::NkStar,
            "an" => Family::Alternating,
            "cycle" => Family::Cycle,
            "split" => Family::Split,
            _ => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyTag {
    pub family: Family,
    pub n: u8,
    pub k: u8,
}

/// Immutable simple undirected graph with ranked, labeled vertices.
#[derive(Clone)]
pub struct Graph {
    labels: Vec<Arrangement>,
    offsets: Vec<u32>,
    nbrs: Vec<u32>,
    edges: Vec<Edge>,
    family: Option<FamilyTag>,
}

impl Graph {
    /// Build a graph from lexicographically sorted labels and an edge list.
    /// Edges may be given in either orientation; loops and duplicates are
    /// rejected.
    pub fn new(
        labels: Vec<Arrangement>,
        edges: Vec<(u32, u32, EdgeKind)>,
        family: Option<FamilyTag>,
    ) -> Result<Graph> {
        let n = labels.len();
        for w in labels.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::domain(alloc::format!(
                    "labels not strictly increasing at {} >= {}",
                    w[0],
                    w[1]
                )));
            }
            if w[0].len() != w[1].len() || w[0].ambient_n() != w[1].ambient_n() {
                return Err(Error::domain("labels come from different universes"));
            }
        }
        let mut norm: Vec<Edge> = Vec::with_capacity(edges.len());
        for (a, b, kind) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::domain(alloc::format!(
                    "edge ({a},{b}) outside vertex range 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::domain(alloc::format!("loop at vertex {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            norm.push(Edge { u, v, kind });
        }
        norm.sort_unstable_by_key(|e| (e.u, e.v));
        for w in norm.windows(2) {
            if w[0].u == w[1].u && w[0].v == w[1].v {
                return Err(Error::domain(alloc::format!(
                    "duplicate edge ({},{})",
                    w[0].u,
                    w[0].v
                )));
            }
        }
        let mut degree = alloc::vec![0u32; n];
        for e in &norm {
            degree[e.u as usize] += 1;
            degree[e.v as usize] += 1;
        }
        let mut offsets = alloc::vec![0u32; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut cursor: Vec<u32> = offsets[..n].to_vec();
        let mut nbrs = alloc::vec![0u32; norm.len() * 2];
        for e in &norm {
            nbrs[cursor[e.u as usize] as usize] = e.v;
            cursor[e.u as usize] += 1;
            nbrs[cursor[e.v as usize] as usize] = e.u;
            cursor[e.v as usize] += 1;
        }
        for v in 0..n {
            nbrs[offsets[v] as usize..offsets[v + 1] as usize].sort_unstable();
        }
        Ok(Graph {
            labels,
            offsets,
            nbrs,
            edges: norm,
            family,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[Arrangement] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &Arrangement {
        &self.labels[v as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn family(&self) -> Option<FamilyTag> {
        self.family
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// Sorted neighbor ranks of `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.nbrs[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    /// Checked variant of [`Graph::neighbors`].
    pub fn try_neighbors(&self, v: u32) -> Result<&[u32]> {
        if (v as usize) < self.vertex_count() {
            Ok(self.neighbors(v))
        } else {
            Err(Error::domain(alloc::format!(
                "vertex rank {v} outside 0..{}",
                self.vertex_count()
            )))
        }
    }

    pub fn is_adjacent(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Rank of a label, if present.
    pub fn rank_of(&self, label: &Arrangement) -> Option<u32> {
        self.labels.binary_search(label).ok().map(|i| i as u32)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0u32];
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n
    }

    /// Subgraph induced by a sorted set of ranks. Labels are preserved,
    /// the family tag is dropped.
    pub fn induced_subgraph(&self, keep: &[u32]) -> Result<Graph> {
        let mut remap = alloc::vec![u32::MAX; self.vertex_count()];
        for (new, &old) in keep.iter().enumerate() {
            if old as usize >= self.vertex_count() {
                return Err(Error::domain(alloc::format!("rank {old} out of range")));
            }
            if remap[old as usize] != u32::MAX {
                return Err(Error::domain(alloc::format!("duplicate rank {old}")));
            }
            remap[old as usize] = new as u32;
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("kept ranks must be sorted ascending"));
        }
        let labels: Vec<Arrangement> = keep.iter().map(|&v| self.labels[v as usize].clone()).collect();
        let edges: Vec<(u32, u32, EdgeKind)> = self
            .edges
            .iter()
            .filter(|e| remap[e.u as usize] != u32::MAX && remap[e.v as usize] != u32::MAX)
            .map(|e| (remap[e.u as usize], remap[e.v as usize], e.kind))
            .collect();
        Graph::new(labels, edges, None)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(nv={}, ne={}, family={:?})",
            self.vertex_count(),
            self.edge_count(),
            self.family
        )
    }
}

/// Star graph on all permutations of `1..=n`: `p ~ q` iff `q` swaps the
/// first digit of `p` with some other position.
pub fn build_star(n: u8) -> Result<Graph> {
    if !(2..=8).contains(&n) {
        return Err(Error::domain(alloc::format!(
            "star graph supported for 2 <= n <= 8, got {n}"
        )));
    }
    let labels = perm::enumerate_arrangements(n, n)?;
    let mut edges = Vec::new();
    for (r, p) in labels.iter().enumerate() {
        for i in 2..=n as usize {
            let q = p.swap_digit(i)?;
            let qr = perm::rank(&q) as u32;
            if (r as u32) < qr {
                edges.push((r as u32, qr, EdgeKind::Swap(i as u8)));
            }
        }
    }
    Graph::new(
        labels,
        edges,
        Some(FamilyTag {
            family: Family::Star,
            n,
            k: n,
        }),
    )
}

/// (n,k)-star graph on the k-arrangements of `1..=n`, with `k-1`
/// swap-neighbors and `n-k` unswap-neighbors per vertex. `k = 1` yields the
/// complete graph.
pub fn build_nkstar(n: u8, k: u8) -> Result<Graph> {
    if n < 2 || k == 0 || k > n - 1 {
        return Err(Error::domain(alloc::format!(
            "(n,k)-star needs 1 <= k <= n-1 with n >= 2, got n={n} k={k}"
        )));
    }
    let count = perm::arrangement_count(n, k)?;
    if count > 1_000_000 {
        return Err(Error::domain(alloc::format!(
            "vertex count {count} exceeds the 10^6 build cap"
        )));
    }
    let labels = perm::enumerate_arrangements(n, k)?;
    let mut edges = Vec::new();
    for (r, p) in labels.iter().enumerate() {
        for i in 2..=k as usize {
            let q = p.swap_digit(i)?;
            let qr = perm::rank(&q) as u32;
            if (r as u32) < qr {
                edges.push((r as u32, qr, EdgeKind::Swap(i as u8)));
            }
        }
        for s in p.unused_digits() {
            let q = p.replace_first(s)?;
            let qr = perm::rank(&q) as u32;
            if (r as u32) < qr {
                edges.push((r as u32, qr, EdgeKind::Unswap));
            }
        }
    }
    Graph::new(
        labels,
        edges,
        Some(FamilyTag {
            family: Family::NkStar,
            n,
            k,
        }),
    )
}

/// Alternating group network: vertices are the even permutations of
/// `1..=n`, adjacency by right composition with one of the generators
/// rotate-first-three (both directions) and exchange-first-two-and-swap
/// position 3 with position `i` for `4 <= i <= n`.
pub fn build_alternating_network(n: u8) -> Result<Graph> {
    if !(3..=6).contains(&n) {
        return Err(Error::domain(alloc::format!(
            "alternating network supported for 3 <= n <= 6, got {n}"
        )));
    }
    let labels: Vec<Arrangement> = perm::enumerate_arrangements(n, n)?
        .into_iter()
        .filter(|p| p.parity() == Ok(Parity::Even))
        .collect();

    // Each generator is a position map sigma: new digit j comes from
    // position sigma[j] of the old label (right action on positions).
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let identity: Vec<usize> = (0..n as usize).collect();
    let mut rot = identity.clone();
    rot[0] = 1;
    rot[1] = 2;
    rot[2] = 0;
    generators.push(rot);
    let mut rot_inv = identity.clone();
    rot_inv[0] = 2;
    rot_inv[1] = 0;
    rot_inv[2] = 1;
    generators.push(rot_inv);
    for i in 4..=n as usize {
        let mut g = identity.clone();
        g.swap(0, 1);
        g.swap(2, i - 1);
        generators.push(g);
    }

    let mut edges = Vec::new();
    for (r, p) in labels.iter().enumerate() {
        for sigma in &generators {
            let digits: Vec<u8> = sigma.iter().map(|&j| p.digits()[j]).collect();
            let q = Arrangement::new(digits, n)?;
            let qr = labels
                .binary_search(&q)
                .map_err(|_| Error::structure("generator image left the even permutations"))?
                as u32;
            if (r as u32) < qr {
                edges.push((r as u32, qr, EdgeKind::Plain));
            }
        }
    }
    Graph::new(
        labels,
        edges,
        Some(FamilyTag {
            family: Family::Alternating,
            n,
            k: n,
        }),
    )
}

/// Cycle on `len` vertices labeled `1..=len`.
pub fn build_cycle(len: u8) -> Result<Graph> {
    if !(3..=perm::MAX_N).contains(&len) {
        return Err(Error::domain(alloc::format!(
            "cycle length must be in 3..={}, got {len}",
            perm::MAX_N
        )));
    }
    let labels: Vec<Arrangement> = (1..=len)
        .map(|d| Arrangement::new(alloc::vec![d], len))
        .collect::<Result<_>>()?;
    let mut edges: Vec<(u32, u32, EdgeKind)> = (0..len as u32 - 1)
        .map(|v| (v, v + 1, EdgeKind::Plain))
        .collect();
    edges.push((0, len as u32 - 1, EdgeKind::Plain));
    Graph::new(
        labels,
        edges,
        Some(FamilyTag {
            family: Family::Cycle,
            n: len,
            k: 1,
        }),
    )
}
