//! Exact h-super connectivity and h-super edge-connectivity by exhaustive
//! fragment enumeration.
//!
//! A fragment is a connected vertex set A with minimum induced degree at
//! least h. For the vertex measure, deleting N(A) together with whatever
//! the h-core peeling removes from the rest yields a valid h-vertex-cut,
//! and a minimum cut always arises this way from the smallest component of
//! the optimum; hence searching fragments up to `|V|/2` vertices is exact.
//! For the edge measure the candidate is the boundary edge set of A, with
//! both sides required to keep minimum degree h.
//!
//! The enumerator generates every connected set exactly once using the
//! usual extension-with-forbidden-set scheme: candidates skipped at a node
//! are banned in the entire remainder of that subtree. Banned vertices
//! drive the pruning:
//!
//! * edges between the current set and banned vertices stay boundary edges
//!   forever, bounding any edge candidate from below;
//! * banned vertices adjacent to the set stay in the vertex neighborhood
//!   forever, bounding any vertex candidate from below;
//! * a member whose non-banned neighborhood cannot reach degree h kills
//!   the subtree, as does a banned vertex whose outside degree has already
//!   fallen below h in the edge measure.
//!
//! Results are deterministic: the best candidate is the minimum under
//! (value, cut ranks, fragment ranks), a total order independent of
//! enumeration order, worker count, and pruning.

use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, Ordering};

use crate::cuts::{self, Verdict};
use crate::error::{Error, Result};
use crate::topology::Graph;
use crate::Measure;

/// Witness deletion set of an exact result.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum WitnessCut {
    Vertices(Vec<u32>),
    Edges(Vec<(u32, u32)>),
}

impl WitnessCut {
    pub fn len(&self) -> usize {
        match self {
            WitnessCut::Vertices(v) => v.len(),
            WitnessCut::Edges(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One qualifying cut found during the search. Candidates are ordered by
/// (value, cut, fragment); the search keeps the minimum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Candidate {
    pub value: u64,
    pub cut: WitnessCut,
    pub fragment: Vec<u32>,
}

/// Partial outcome of searching some enumeration roots; parts from
/// disjoint root sets merge commutatively.
#[derive(Debug, Clone)]
pub struct SearchPart {
    pub best: Option<Candidate>,
    pub fragments: u64,
    /// Enumeration tree nodes expanded; an effort metric only.
    pub nodes: u64,
    pub complete: bool,
}

impl SearchPart {
    pub fn empty() -> SearchPart {
        SearchPart {
            best: None,
            fragments: 0,
            nodes: 0,
            complete: true,
        }
    }
}

/// Merge two partial results; the reduction is associative and
/// commutative, so any partition of the roots yields the same answer.
pub fn merge_parts(a: SearchPart, b: SearchPart) -> SearchPart {
    let best = match (a.best, b.best) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if x <= y { x } else { y }),
    };
    SearchPart {
        best,
        fragments: a.fragments + b.fragments,
        nodes: a.nodes + b.nodes,
        complete: a.complete && b.complete,
    }
}

#[derive(Debug, Clone, Default)]
pub struct OracleOptions {
    /// Restrict fragments to those containing rank 0. Sound only on
    /// vertex-transitive graphs; the caller asserts that.
    pub symmetry: bool,
    /// Largest fragment size to enumerate; defaults to `|V|/2`, which is
    /// exact. Anything lower turns the run into a bound and is flagged.
    pub fragment_cap: Option<usize>,
    /// A verified cut to start from. The search never prunes candidates
    /// that tie the current best, so a seed only speeds things up; value
    /// and witness stay exactly what the unseeded search would return
    /// whenever the seed is optimal or worse.
    pub seed: Option<Candidate>,
}

/// An oracle answer: the exact value with a verified witness, or the fact
/// that no such cut exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub measure: Measure,
    pub h: u32,
    pub value: Option<u64>,
    pub witness_fragment: Vec<u32>,
    pub witness_cut: WitnessCut,
    pub enumerated_fragments: u64,
    pub exhaustive: bool,
    pub symmetry: bool,
}

/// The unique maximal subset of `w` whose induced subgraph has minimum
/// degree at least h, by iterated deletion of low-degree vertices. The
/// result does not depend on deletion order.
pub fn h_core(g: &Graph, w: &[u32], h: u32) -> Vec<u32> {
    let nv = g.vertex_count();
    let mut alive = alloc::vec![false; nv];
    for &v in w {
        assert!((v as usize) < nv, "rank {v} out of range");
        alive[v as usize] = true;
    }
    let mut deg = alloc::vec![0u32; nv];
    let mut queue = Vec::new();
    for &v in w {
        deg[v as usize] = g
            .neighbors(v)
            .iter()
            .filter(|&&x| alive[x as usize])
            .count() as u32;
        if deg[v as usize] < h {
            queue.push(v);
            alive[v as usize] = false;
        }
    }
    while let Some(v) = queue.pop() {
        for &x in g.neighbors(v) {
            if alive[x as usize] {
                deg[x as usize] -= 1;
                if deg[x as usize] < h {
                    alive[x as usize] = false;
                    queue.push(x);
                }
            }
        }
    }
    (0..nv as u32).filter(|&v| alive[v as usize]).collect()
}

/// Like [`h_core`] but attempts deletions following `order` (a permutation
/// of `w`), sweeping until a fixpoint. Exists so order-independence can be
/// exercised directly.
pub fn h_core_with_order(g: &Graph, w: &[u32], h: u32, order: &[u32]) -> Vec<u32> {
    let nv = g.vertex_count();
    let mut alive = alloc::vec![false; nv];
    for &v in w {
        alive[v as usize] = true;
    }
    loop {
        let mut removed = false;
        for &v in order {
            if !alive[v as usize] {
                continue;
            }
            let d = g
                .neighbors(v)
                .iter()
                .filter(|&&x| alive[x as usize])
                .count() as u32;
            if d < h {
                alive[v as usize] = false;
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    (0..nv as u32).filter(|&v| alive[v as usize]).collect()
}

/// Visit every connected vertex set of size at most `cap` exactly once, in
/// a fixed deterministic order, passing each as a sorted rank slice.
/// Returns the number of sets visited.
pub fn enumerate_connected_sets(
    g: &Graph,
    cap: usize,
    mut visit: impl FnMut(&[u32]),
) -> Result<u64> {
    let nv = g.vertex_count();
    if cap < 1 || cap > nv {
        return Err(Error::domain(alloc::format!(
            "cap must be in 1..={nv}, got {cap}"
        )));
    }
    let mut in_set = alloc::vec![false; nv];
    let mut banned = alloc::vec![false; nv];
    let mut adjacent = alloc::vec![0u32; nv];
    let mut members: Vec<u32> = Vec::new();
    let mut ext: Vec<u32> = Vec::new();
    let mut count = 0u64;

    // every set is generated from its smallest member as root
    for root in 0..nv as u32 {
        push_member(g, root, &mut in_set, &mut adjacent, &mut members);
        emit(&members, &mut count, &mut visit);
        let frame: Vec<u32> = g
            .neighbors(root)
            .iter()
            .copied()
            .filter(|&w| !banned[w as usize])
            .collect();
        let start = ext.len();
        ext.extend_from_slice(&frame);
        simple_rec(
            g,
            cap,
            start,
            frame.len(),
            &mut in_set,
            &mut banned,
            &mut adjacent,
            &mut members,
            &mut ext,
            &mut count,
            &mut visit,
        );
        ext.truncate(start);
        pop_member(g, root, &mut in_set, &mut adjacent, &mut members);
        banned[root as usize] = true;
    }
    for v in 0..nv {
        banned[v] = false;
    }
    Ok(count)
}

fn push_member(g: &Graph, v: u32, in_set: &mut [bool], adjacent: &mut [u32], members: &mut Vec<u32>) {
    in_set[v as usize] = true;
    members.push(v);
    for &w in g.neighbors(v) {
        adjacent[w as usize] += 1;
    }
}

fn pop_member(g: &Graph, v: u32, in_set: &mut [bool], adjacent: &mut [u32], members: &mut Vec<u32>) {
    in_set[v as usize] = false;
    members.pop();
    for &w in g.neighbors(v) {
        adjacent[w as usize] -= 1;
    }
}

fn emit(members: &[u32], count: &mut u64, visit: &mut impl FnMut(&[u32])) {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    *count += 1;
    visit(&sorted);
}

#[allow(clippy::too_many_arguments)]
fn simple_rec(
    g: &Graph,
    cap: usize,
    frame_start: usize,
    frame_len: usize,
    in_set: &mut Vec<bool>,
    banned: &mut Vec<bool>,
    adjacent: &mut Vec<u32>,
    members: &mut Vec<u32>,
    ext: &mut Vec<u32>,
    count: &mut u64,
    visit: &mut impl FnMut(&[u32]),
) {
    if members.len() >= cap {
        return;
    }
    let frame_end = frame_start + frame_len;
    let mut banned_here = 0usize;
    for idx in frame_start..frame_end {
        let u = ext[idx];
        push_member(g, u, in_set, adjacent, members);
        emit(members, count, visit);
        if members.len() < cap {
            let child_start = ext.len();
            for j in idx + 1..frame_end {
                let w = ext[j];
                ext.push(w);
            }
            for &w in g.neighbors(u) {
                if !in_set[w as usize] && !banned[w as usize] && adjacent[w as usize] == 1 {
                    ext.push(w);
                }
            }
            let child_len = ext.len() - child_start;
            simple_rec(
                g, cap, child_start, child_len, in_set, banned, adjacent, members, ext, count,
                visit,
            );
            ext.truncate(child_start);
        }
        pop_member(g, u, in_set, adjacent, members);
        banned[u as usize] = true;
        banned_here += 1;
    }
    for idx in frame_start..frame_start + banned_here {
        banned[ext[idx] as usize] = false;
    }
}

/// Exact h-super connectivity (vertex measure).
pub fn exact_kappa_s(g: &Graph, h: u32, opts: &OracleOptions) -> Result<ExactResult> {
    exact_measure(g, Measure::Kappa, h, opts)
}

/// Exact h-super edge-connectivity.
pub fn exact_lambda_s(g: &Graph, h: u32, opts: &OracleOptions) -> Result<ExactResult> {
    exact_measure(g, Measure::Lambda, h, opts)
}

/// Run the full search sequentially and assemble the result.
pub fn exact_measure(g: &Graph, measure: Measure, h: u32, opts: &OracleOptions) -> Result<ExactResult> {
    let roots = default_roots(g, opts);
    let part = exact_roots(g, measure, h, opts, &roots, None)?;
    finish(g, measure, h, opts, part)
}

/// Enumeration roots for these options: rank 0 alone under symmetry,
/// every vertex otherwise. Fragments are generated from their smallest
/// member, so the root-0 slice is exactly the fragments containing 0.
pub fn default_roots(g: &Graph, opts: &OracleOptions) -> Vec<u32> {
    if opts.symmetry {
        alloc::vec![0]
    } else {
        (0..g.vertex_count() as u32).collect()
    }
}

fn validate(g: &Graph, h: u32, opts: &OracleOptions) -> Result<usize> {
    let nv = g.vertex_count();
    if nv == 0 {
        return Err(Error::domain("oracle needs a nonempty graph"));
    }
    if h as usize >= nv {
        return Err(Error::domain(alloc::format!(
            "h must satisfy 0 <= h < |V| = {nv}, got {h}"
        )));
    }
    let cap = opts.fragment_cap.unwrap_or(nv / 2).min(nv);
    Ok(cap)
}

fn verify_seed(g: &Graph, measure: Measure, h: u32, seed: &Candidate) -> Result<()> {
    let ok = match (&seed.cut, measure) {
        (WitnessCut::Vertices(t), Measure::Kappa) => {
            seed.value == t.len() as u64
                && cuts::verify_vertex_cut(g, t, h)? == Verdict::Valid
        }
        (WitnessCut::Edges(f), Measure::Lambda) => {
            seed.value == f.len() as u64 && cuts::verify_edge_cut(g, f, h)? == Verdict::Valid
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::domain("seed is not a verified cut for this measure and h"))
    }
}

/// Search the subtrees of the given enumeration roots. Roots must be a
/// subset of the vertex ranks; passing every rank (or rank 0 under
/// symmetry) gives the complete search, and disjoint root sets can run on
/// different workers and be merged.
pub fn exact_roots(
    g: &Graph,
    measure: Measure,
    h: u32,
    opts: &OracleOptions,
    roots: &[u32],
    cancel: Option<&AtomicBool>,
) -> Result<SearchPart> {
    let cap = validate(g, h, opts)?;
    if let Some(seed) = &opts.seed {
        verify_seed(g, measure, h, seed)?;
    }
    let nv = g.vertex_count();
    for &r in roots {
        if r as usize >= nv {
            return Err(Error::domain(alloc::format!("root {r} out of range")));
        }
    }
    let mut search = Search::new(g, measure, h, cap, opts.seed.clone(), cancel);
    for &root in roots {
        if search.cancelled {
            break;
        }
        search.run_root(root);
    }
    Ok(SearchPart {
        best: search.best,
        fragments: search.fragments,
        nodes: search.steps,
        complete: !search.cancelled,
    })
}

/// Turn a merged part into the final answer, re-verifying the witness.
pub fn finish(
    g: &Graph,
    measure: Measure,
    h: u32,
    opts: &OracleOptions,
    part: SearchPart,
) -> Result<ExactResult> {
    let cap = validate(g, h, opts)?;
    if !part.complete {
        return Err(Error::resource("search cancelled before completion"));
    }
    let exhaustive = cap >= g.vertex_count() / 2;
    let (value, witness_fragment, witness_cut) = match part.best {
        Some(c) => {
            let verdict = match &c.cut {
                WitnessCut::Vertices(t) => cuts::verify_vertex_cut(g, t, h)?,
                WitnessCut::Edges(f) => cuts::verify_edge_cut(g, f, h)?,
            };
            if verdict != Verdict::Valid {
                return Err(Error::structure(alloc::format!(
                    "witness failed re-verification: {verdict:?}"
                )));
            }
            (Some(c.value), c.fragment, c.cut)
        }
        None => (
            None,
            Vec::new(),
            match measure {
                Measure::Kappa => WitnessCut::Vertices(Vec::new()),
                Measure::Lambda => WitnessCut::Edges(Vec::new()),
            },
        ),
    };
    Ok(ExactResult {
        measure,
        h,
        value,
        witness_fragment,
        witness_cut,
        enumerated_fragments: part.fragments,
        exhaustive,
        symmetry: opts.symmetry,
    })
}

struct Search<'a> {
    g: &'a Graph,
    nv: usize,
    measure: Measure,
    h: u32,
    cap: usize,
    // membership state
    in_set: Vec<bool>,
    members: Vec<u32>,
    deg_in: Vec<u32>,
    deficient_in: usize,
    boundary: u64,
    neighbor_count: u64,
    // forbidden-set state
    banned: Vec<bool>,
    banned_nbrs: Vec<u32>,
    hopeless: usize,
    committed_edges: u64,
    committed_vertices: u64,
    bad_outside: usize,
    bad_banned: usize,
    // search products
    best: Option<Candidate>,
    fragments: u64,
    ext: Vec<u32>,
    // h-core scratch with epoch stamping so eval never clears arrays
    epoch: u32,
    r_epoch: Vec<u32>,
    peeled_epoch: Vec<u32>,
    r_deg: Vec<u32>,
    peel_queue: Vec<u32>,
    // residual-flow scratch for the separation bound (edge measure)
    banned_count: usize,
    flow_cap: Vec<[u8; 2]>,
    flow_prev: Vec<u32>,
    flow_seen: Vec<u32>,
    flow_epoch: u32,
    flow_queue: Vec<u32>,
    edge_index_of: Vec<u32>,
    edge_other: Vec<u32>,
    edge_dir: Vec<u8>,
    edge_heads: Vec<u32>,
    // cancellation
    cancel: Option<&'a AtomicBool>,
    cancelled: bool,
    steps: u64,
}

impl<'a> Search<'a> {
    fn new(
        g: &'a Graph,
        measure: Measure,
        h: u32,
        cap: usize,
        seed: Option<Candidate>,
        cancel: Option<&'a AtomicBool>,
    ) -> Search<'a> {
        let nv = g.vertex_count();
        // with an empty set, every vertex of degree < h is outside-bad
        let bad_outside = (0..nv as u32).filter(|&v| g.degree(v) < h).count();
        // CSR over edge indices for the residual-flow scratch
        let ne = g.edge_count();
        let mut edge_heads = alloc::vec![0u32; nv + 1];
        for e in g.edges() {
            edge_heads[e.u as usize + 1] += 1;
            edge_heads[e.v as usize + 1] += 1;
        }
        for v in 0..nv {
            edge_heads[v + 1] += edge_heads[v];
        }
        let mut cursor = edge_heads.clone();
        let mut edge_index_of = alloc::vec![0u32; ne * 2];
        let mut edge_other = alloc::vec![0u32; ne * 2];
        let mut edge_dir = alloc::vec![0u8; ne * 2];
        for (idx, e) in g.edges().iter().enumerate() {
            let cu = cursor[e.u as usize] as usize;
            edge_index_of[cu] = idx as u32;
            edge_other[cu] = e.v;
            edge_dir[cu] = 0;
            cursor[e.u as usize] += 1;
            let cv = cursor[e.v as usize] as usize;
            edge_index_of[cv] = idx as u32;
            edge_other[cv] = e.u;
            edge_dir[cv] = 1;
            cursor[e.v as usize] += 1;
        }
        Search {
            g,
            nv,
            measure,
            h,
            cap,
            in_set: alloc::vec![false; nv],
            members: Vec::new(),
            deg_in: alloc::vec![0; nv],
            deficient_in: 0,
            boundary: 0,
            neighbor_count: 0,
            banned: alloc::vec![false; nv],
            banned_nbrs: alloc::vec![0; nv],
            hopeless: 0,
            committed_edges: 0,
            committed_vertices: 0,
            bad_outside,
            bad_banned: 0,
            best: seed,
            fragments: 0,
            ext: Vec::new(),
            epoch: 0,
            r_epoch: alloc::vec![0; nv],
            peeled_epoch: alloc::vec![0; nv],
            r_deg: alloc::vec![0; nv],
            peel_queue: Vec::new(),
            banned_count: 0,
            flow_cap: alloc::vec![[0u8; 2]; ne],
            flow_prev: alloc::vec![u32::MAX; nv],
            flow_seen: alloc::vec![0; nv],
            flow_epoch: 0,
            flow_queue: Vec::new(),
            edge_index_of,
            edge_other,
            edge_dir,
            edge_heads,
            cancel,
            cancelled: false,
            steps: 0,
        }
    }

    fn best_value(&self) -> u64 {
        self.best.as_ref().map_or(u64::MAX, |c| c.value)
    }

    fn tick(&mut self) {
        self.steps += 1;
        if self.steps % 4096 == 0 {
            if let Some(flag) = self.cancel {
                if flag.load(Ordering::Relaxed) {
                    self.cancelled = true;
                }
            }
        }
    }

    fn add(&mut self, v: u32) {
        let vi = v as usize;
        let deg = self.g.degree(v);
        if self.deg_in[vi] < self.h {
            self.deficient_in += 1;
        }
        if deg.saturating_sub(self.deg_in[vi]) < self.h {
            self.bad_outside -= 1;
        }
        if self.deg_in[vi] >= 1 {
            self.neighbor_count -= 1;
        }
        if deg.saturating_sub(self.banned_nbrs[vi]) < self.h {
            self.hopeless += 1;
        }
        self.boundary = self.boundary + deg as u64 - 2 * self.deg_in[vi] as u64;
        for &w in self.g.neighbors(v) {
            let wi = w as usize;
            if self.in_set[wi] {
                if self.h > 0 && self.deg_in[wi] == self.h - 1 {
                    self.deficient_in -= 1;
                }
                self.deg_in[wi] += 1;
            } else {
                let wdeg = self.g.degree(w);
                if self.deg_in[wi] == 0 {
                    self.neighbor_count += 1;
                    if self.banned[wi] {
                        self.committed_vertices += 1;
                    }
                }
                self.deg_in[wi] += 1;
                let out_after = wdeg - self.deg_in[wi];
                if out_after + 1 >= self.h && out_after < self.h {
                    self.bad_outside += 1;
                    if self.banned[wi] {
                        self.bad_banned += 1;
                    }
                }
                if self.banned[wi] {
                    self.committed_edges += 1;
                }
            }
        }
        self.in_set[vi] = true;
        self.members.push(v);
    }

    fn remove(&mut self, v: u32) {
        let vi = v as usize;
        self.members.pop();
        self.in_set[vi] = false;
        for &w in self.g.neighbors(v) {
            let wi = w as usize;
            if self.in_set[wi] {
                self.deg_in[wi] -= 1;
                if self.h > 0 && self.deg_in[wi] == self.h - 1 {
                    self.deficient_in += 1;
                }
            } else {
                if self.banned[wi] {
                    self.committed_edges -= 1;
                }
                let wdeg = self.g.degree(w);
                let out_before = wdeg - self.deg_in[wi];
                self.deg_in[wi] -= 1;
                if out_before < self.h && out_before + 1 >= self.h {
                    self.bad_outside -= 1;
                    if self.banned[wi] {
                        self.bad_banned -= 1;
                    }
                }
                if self.deg_in[wi] == 0 {
                    self.neighbor_count -= 1;
                    if self.banned[wi] {
                        self.committed_vertices -= 1;
                    }
                }
            }
        }
        let deg = self.g.degree(v);
        if deg.saturating_sub(self.banned_nbrs[vi]) < self.h {
            self.hopeless -= 1;
        }
        if self.deg_in[vi] >= 1 {
            self.neighbor_count += 1;
        }
        if deg.saturating_sub(self.deg_in[vi]) < self.h {
            self.bad_outside += 1;
        }
        if self.deg_in[vi] < self.h {
            self.deficient_in -= 1;
        }
        self.boundary = self.boundary + 2 * self.deg_in[vi] as u64 - deg as u64;
    }

    fn ban(&mut self, v: u32) {
        let vi = v as usize;
        self.banned[vi] = true;
        self.banned_count += 1;
        self.committed_edges += self.deg_in[vi] as u64;
        if self.deg_in[vi] >= 1 {
            self.committed_vertices += 1;
        }
        let deg = self.g.degree(v);
        if deg.saturating_sub(self.deg_in[vi]) < self.h {
            self.bad_banned += 1;
        }
        for &w in self.g.neighbors(v) {
            let wi = w as usize;
            self.banned_nbrs[wi] += 1;
            if self.in_set[wi] {
                let slack = self.g.degree(w).saturating_sub(self.banned_nbrs[wi]);
                if slack + 1 >= self.h && slack < self.h {
                    self.hopeless += 1;
                }
            }
        }
    }

    fn unban(&mut self, v: u32) {
        let vi = v as usize;
        self.banned[vi] = false;
        self.banned_count -= 1;
        self.committed_edges -= self.deg_in[vi] as u64;
        if self.deg_in[vi] >= 1 {
            self.committed_vertices -= 1;
        }
        let deg = self.g.degree(v);
        if deg.saturating_sub(self.deg_in[vi]) < self.h {
            self.bad_banned -= 1;
        }
        for &w in self.g.neighbors(v) {
            let wi = w as usize;
            if self.in_set[wi] {
                let slack = self.g.degree(w).saturating_sub(self.banned_nbrs[wi]);
                if slack + 1 >= self.h && slack < self.h {
                    self.hopeless -= 1;
                }
            }
            self.banned_nbrs[wi] -= 1;
        }
    }

    /// No extension of the current (set, banned) state can qualify or beat
    /// the current best.
    fn dead_for_extension(&self) -> bool {
        if self.hopeless > 0 {
            return true;
        }
        match self.measure {
            Measure::Lambda => {
                self.bad_banned > 0 || self.committed_edges > self.best_value()
            }
            Measure::Kappa => self.committed_vertices > self.best_value(),
        }
    }

    /// Members that cannot reach degree h within the remaining budget.
    fn budget_dead(&self) -> bool {
        let budget = (self.cap - self.members.len()) as u32;
        if budget >= self.h {
            return false;
        }
        self.members
            .iter()
            .any(|&v| self.deg_in[v as usize] + budget < self.h)
    }

    /// Peel the subgraph induced by the non-banned vertices (fragment side)
    /// or the non-member vertices (complement side) down to min degree h.
    /// Marks the region with `r_epoch` and the peeled vertices with
    /// `peeled_epoch`; returns the number peeled.
    fn peel_region(&mut self, fragment_side: bool) -> u64 {
        self.epoch += 1;
        let epoch = self.epoch;
        for v in 0..self.nv {
            let inside = if fragment_side {
                !self.banned[v]
            } else {
                !self.in_set[v]
            };
            if inside {
                self.r_epoch[v] = epoch;
            }
        }
        self.peel_queue.clear();
        let mut peeled = 0u64;
        for v in 0..self.nv as u32 {
            let vi = v as usize;
            if self.r_epoch[vi] != epoch {
                continue;
            }
            let d = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&w| self.r_epoch[w as usize] == epoch)
                .count() as u32;
            self.r_deg[vi] = d;
            if d < self.h {
                self.peel_queue.push(v);
                self.peeled_epoch[vi] = epoch;
                peeled += 1;
            }
        }
        while let Some(v) = self.peel_queue.pop() {
            for &w in self.g.neighbors(v) {
                let wi = w as usize;
                if self.r_epoch[wi] == epoch && self.peeled_epoch[wi] != epoch {
                    self.r_deg[wi] -= 1;
                    if self.r_deg[wi] < self.h {
                        self.peeled_epoch[wi] = epoch;
                        self.peel_queue.push(w);
                        peeled += 1;
                    }
                }
            }
        }
        peeled
    }

    /// Iterated-peeling prunes. Every future fragment lies inside the
    /// h-core of the non-banned region, so a member peeled from it kills
    /// the subtree. In the edge measure the future complement lies inside
    /// the h-core of the non-member region: banned vertices must survive
    /// that peeling, and whatever it removes is forced into the fragment,
    /// which must still fit under the cap. Only worth the linear-time
    /// peeling for h >= 2; below that the cores barely erode.
    fn core_dead(&mut self) -> bool {
        if self.h < 2 {
            return false;
        }
        self.peel_region(true);
        let epoch = self.epoch;
        if self
            .members
            .iter()
            .any(|&v| self.peeled_epoch[v as usize] == epoch)
        {
            return true;
        }
        if self.measure == Measure::Lambda {
            let peeled = self.peel_region(false);
            let epoch = self.epoch;
            if peeled > 0 {
                if self.members.len() as u64 + peeled > self.cap as u64 {
                    return true;
                }
                for v in 0..self.nv {
                    if self.banned[v] && self.peeled_epoch[v] == epoch {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Residual-flow separation bound for the edge measure: the cut of any
    /// future candidate separates the current members from every banned
    /// vertex, so it has at least as many edges as this flow. Pushes
    /// augmenting paths until the flow exceeds `bound` (dead) or no path
    /// remains (alive).
    fn separation_exceeds(&mut self, bound: u64) -> bool {
        if self.banned_count == 0 || bound == u64::MAX {
            return false;
        }
        for c in &mut self.flow_cap {
            *c = [1, 1];
        }
        let mut flow = 0u64;
        loop {
            if flow > bound {
                return true;
            }
            self.flow_epoch += 1;
            let ep = self.flow_epoch;
            self.flow_queue.clear();
            for &m in &self.members {
                self.flow_seen[m as usize] = ep;
                self.flow_queue.push(m);
            }
            let mut qi = 0usize;
            let mut reached = u32::MAX;
            'bfs: while qi < self.flow_queue.len() {
                let v = self.flow_queue[qi];
                qi += 1;
                let lo = self.edge_heads[v as usize] as usize;
                let hi = self.edge_heads[v as usize + 1] as usize;
                for pos in lo..hi {
                    let eidx = self.edge_index_of[pos] as usize;
                    let dir = self.edge_dir[pos] as usize;
                    if self.flow_cap[eidx][dir] == 0 {
                        continue;
                    }
                    let w = self.edge_other[pos];
                    let wi = w as usize;
                    if self.flow_seen[wi] == ep {
                        continue;
                    }
                    self.flow_seen[wi] = ep;
                    self.flow_prev[wi] = pos as u32;
                    if self.banned[wi] {
                        reached = w;
                        break 'bfs;
                    }
                    self.flow_queue.push(w);
                }
            }
            if reached == u32::MAX {
                return flow > bound;
            }
            // walk the augmenting path back to the member side
            let mut v = reached;
            while !self.in_set[v as usize] {
                let pos = self.flow_prev[v as usize] as usize;
                let eidx = self.edge_index_of[pos] as usize;
                let dir = self.edge_dir[pos] as usize;
                self.flow_cap[eidx][dir] -= 1;
                self.flow_cap[eidx][dir ^ 1] += 1;
                v = if dir == 0 {
                    self.g.edges()[eidx].u
                } else {
                    self.g.edges()[eidx].v
                };
            }
            flow += 1;
        }
    }

    fn flow_dead(&mut self) -> bool {
        if self.measure != Measure::Lambda || self.h < 2 {
            return false;
        }
        let bound = self.best_value();
        self.separation_exceeds(bound)
    }

    fn run_root(&mut self, root: u32) {
        for v in 0..root {
            self.ban(v);
        }
        // a banned vertex below the outside-degree floor already kills the
        // whole root in the edge measure
        let root_dead = match self.measure {
            Measure::Lambda => self.bad_banned > 0,
            Measure::Kappa => false,
        };
        if !root_dead && self.cap >= 1 {
            self.add(root);
            self.eval();
            if !self.dead_for_extension()
                && !self.budget_dead()
                && self.members.len() < self.cap
                && !self.core_dead()
                && !self.flow_dead()
            {
                let start = self.ext.len();
                let nbrs: Vec<u32> = self
                    .g
                    .neighbors(root)
                    .iter()
                    .copied()
                    .filter(|&w| !self.banned[w as usize])
                    .collect();
                self.ext.extend_from_slice(&nbrs);
                let len = self.ext.len() - start;
                self.rec(start, len);
                self.ext.truncate(start);
            }
            self.remove(root);
        }
        for v in (0..root).rev() {
            self.unban(v);
        }
    }

    fn rec(&mut self, frame_start: usize, frame_len: usize) {
        if self.cancelled {
            return;
        }
        let frame_end = frame_start + frame_len;
        let mut banned_here = 0usize;
        for idx in frame_start..frame_end {
            let u = self.ext[idx];
            self.tick();
            if self.cancelled {
                break;
            }
            self.add(u);
            self.eval();
            if !self.dead_for_extension()
                && !self.budget_dead()
                && self.members.len() < self.cap
                && !self.core_dead()
                && !self.flow_dead()
            {
                let child_start = self.ext.len();
                for j in idx + 1..frame_end {
                    let w = self.ext[j];
                    self.ext.push(w);
                }
                for &w in self.g.neighbors(u) {
                    let wi = w as usize;
                    if !self.in_set[wi] && !self.banned[wi] && self.deg_in[wi] == 1 {
                        self.ext.push(w);
                    }
                }
                let child_len = self.ext.len() - child_start;
                self.rec(child_start, child_len);
                self.ext.truncate(child_start);
            }
            self.remove(u);
            self.ban(u);
            banned_here += 1;
            if self.dead_for_extension() {
                break;
            }
        }
        for idx in (frame_start..frame_start + banned_here).rev() {
            let u = self.ext[idx];
            self.unban(u);
        }
    }

    fn eval(&mut self) {
        if self.deficient_in > 0 {
            return; // not a fragment: some member is below the degree floor
        }
        self.fragments += 1;
        match self.measure {
            Measure::Lambda => self.eval_lambda(),
            Measure::Kappa => self.eval_kappa(),
        }
    }

    fn eval_lambda(&mut self) {
        if self.bad_outside > 0 || self.members.len() >= self.nv {
            return;
        }
        let value = self.boundary;
        if value > self.best_value() {
            return;
        }
        let mut cut: Vec<(u32, u32)> = Vec::new();
        for &v in &self.members {
            for &w in self.g.neighbors(v) {
                if !self.in_set[w as usize] {
                    cut.push((v.min(w), v.max(w)));
                }
            }
        }
        cut.sort_unstable();
        debug_assert_eq!(cut.len() as u64, value);
        let mut fragment = self.members.clone();
        fragment.sort_unstable();
        self.offer(Candidate {
            value,
            cut: WitnessCut::Edges(cut),
            fragment,
        });
    }

    fn eval_kappa(&mut self) {
        if self.members.len() >= self.nv {
            return;
        }
        if self.neighbor_count > self.best_value() {
            return; // the cut contains all of N(A) already
        }
        // the rest of the graph: outside the set and its neighborhood
        self.epoch += 1;
        let epoch = self.epoch;
        let mut r_count = 0u64;
        for v in 0..self.nv as u32 {
            let vi = v as usize;
            if !self.in_set[vi] && self.deg_in[vi] == 0 {
                self.r_epoch[vi] = epoch;
                r_count += 1;
            }
        }
        if r_count == 0 {
            return;
        }
        // peel the rest down to its h-core
        self.peel_queue.clear();
        for v in 0..self.nv as u32 {
            let vi = v as usize;
            if self.r_epoch[vi] != epoch {
                continue;
            }
            let d = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&w| self.r_epoch[w as usize] == epoch)
                .count() as u32;
            self.r_deg[vi] = d;
            if d < self.h {
                self.peel_queue.push(v);
                self.peeled_epoch[vi] = epoch;
            }
        }
        let mut peeled = self.peel_queue.len() as u64;
        while let Some(v) = self.peel_queue.pop() {
            for &w in self.g.neighbors(v) {
                let wi = w as usize;
                if self.r_epoch[wi] == epoch && self.peeled_epoch[wi] != epoch {
                    self.r_deg[wi] -= 1;
                    if self.r_deg[wi] < self.h {
                        self.peeled_epoch[wi] = epoch;
                        self.peel_queue.push(w);
                        peeled += 1;
                    }
                }
            }
        }
        if peeled == r_count {
            return; // the core is empty: nothing survives on the far side
        }
        let value = self.neighbor_count + peeled;
        if value > self.best_value() {
            return;
        }
        let mut cut: Vec<u32> = Vec::new();
        for v in 0..self.nv as u32 {
            let vi = v as usize;
            if self.in_set[vi] {
                continue;
            }
            if self.deg_in[vi] >= 1 || self.peeled_epoch[vi] == epoch {
                cut.push(v);
            }
        }
        debug_assert_eq!(cut.len() as u64, value);
        let mut fragment = self.members.clone();
        fragment.sort_unstable();
        self.offer(Candidate {
            value,
            cut: WitnessCut::Vertices(cut),
            fragment,
        });
    }

    fn offer(&mut self, cand: Candidate) {
        match &self.best {
            Some(b) if *b <= cand => {}
            _ => self.best = Some(cand),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Arrangement;
    use crate::topology::{build_nkstar, build_star, EdgeKind, Graph};
    use alloc::vec;

    fn path3() -> Graph {
        let labels = crate::perm::enumerate_arrangements(3, 1).unwrap();
        Graph::new(
            labels,
            vec![(0, 1, EdgeKind::Plain), (1, 2, EdgeKind::Plain)],
            None,
        )
        .unwrap()
    }

    fn rank_of(g: &Graph, text: &str) -> u32 {
        let n = g.labels()[0].ambient_n();
        g.rank_of(&Arrangement::parse_label(text, n).unwrap())
            .unwrap()
    }

    #[test]
    fn h_core_examples() {
        let p3 = path3();
        let all: Vec<u32> = (0..3).collect();
        assert!(h_core(&p3, &all, 2).is_empty());

        let k4 = build_nkstar(4, 1).unwrap();
        let all: Vec<u32> = (0..4).collect();
        assert_eq!(h_core(&k4, &all, 3), all);

        // S_{4,2} minus the certificate fragment and cut for h=2 keeps all
        // six remaining vertices at degree 2
        let g = build_nkstar(4, 2).unwrap();
        let gone: Vec<u32> = ["2.1", "3.1", "4.1", "1.2", "1.3", "1.4"]
            .iter()
            .map(|t| rank_of(&g, t))
            .collect();
        let rest: Vec<u32> = (0..12u32).filter(|v| !gone.contains(v)).collect();
        assert_eq!(h_core(&g, &rest, 2), rest);
    }

    #[test]
    fn connected_set_counts() {
        let k3 = build_nkstar(3, 1).unwrap();
        let mut seen = Vec::new();
        let count = enumerate_connected_sets(&k3, 3, |s| seen.push(s.to_vec())).unwrap();
        assert_eq!(count, 7);
        assert_eq!(seen.len(), 7);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 7, "no duplicates");

        let p3 = path3();
        let mut sets = Vec::new();
        let count = enumerate_connected_sets(&p3, 3, |s| sets.push(s.to_vec())).unwrap();
        assert_eq!(count, 6); // {a},{b},{c},{ab},{bc},{abc}; {ac} excluded

        let g = build_nkstar(4, 2).unwrap();
        let count = enumerate_connected_sets(&g, 1, |_| {}).unwrap();
        assert_eq!(count, 12);
    }

    #[test]
    fn kappa_on_s42() {
        let g = build_nkstar(4, 2).unwrap();
        let r = exact_kappa_s(&g, 0, &OracleOptions::default()).unwrap();
        assert_eq!(r.value, Some(3));
        assert!(r.exhaustive);

        let r = exact_kappa_s(&g, 2, &OracleOptions::default()).unwrap();
        assert_eq!(r.value, Some(3));
        let want: Vec<u32> = ["1.2", "1.3", "1.4"].iter().map(|t| rank_of(&g, t)).collect();
        assert_eq!(r.witness_cut, WitnessCut::Vertices(want));
    }

    #[test]
    fn lambda_on_s42_and_star4() {
        let g = build_nkstar(4, 2).unwrap();
        let r = exact_lambda_s(&g, 2, &OracleOptions::default()).unwrap();
        assert_eq!(r.value, Some(3));
        let frag: Vec<u32> = ["2.1", "3.1", "4.1"].iter().map(|t| rank_of(&g, t)).collect();
        assert_eq!(r.witness_fragment, frag);

        let s4 = build_star(4).unwrap();
        let r = exact_lambda_s(&s4, 1, &OracleOptions::default()).unwrap();
        assert_eq!(r.value, Some(4));
    }

    #[test]
    fn complete_graphs_have_no_vertex_cuts() {
        let k4 = build_nkstar(4, 1).unwrap();
        let r = exact_kappa_s(&k4, 0, &OracleOptions::default()).unwrap();
        assert_eq!(r.value, None);
        assert!(r.witness_cut.is_empty());

        let r = exact_lambda_s(&k4, 0, &OracleOptions::default()).unwrap();
        assert_eq!(r.value, Some(3));
    }

    #[test]
    fn symmetry_matches_full_search_on_small_cases() {
        for (n, k) in [(4u8, 2u8), (4, 3)] {
            let g = build_nkstar(n, k).unwrap();
            for h in 0..=(n as u32 - 2) {
                for measure in [Measure::Kappa, Measure::Lambda] {
                    let full = exact_measure(&g, measure, h, &OracleOptions::default()).unwrap();
                    let sym = exact_measure(
                        &g,
                        measure,
                        h,
                        &OracleOptions {
                            symmetry: true,
                            ..Default::default()
                        },
                    )
                    .unwrap();
                    assert_eq!(full.value, sym.value, "{measure} n={n} k={k} h={h}");
                }
            }
        }
    }

    #[test]
    fn root_partition_merge_is_deterministic() {
        let g = build_nkstar(4, 2).unwrap();
        let opts = OracleOptions::default();
        let whole = exact_measure(&g, Measure::Kappa, 2, &opts).unwrap();
        // same search split into three root chunks, merged out of order
        let roots = default_roots(&g, &opts);
        let mut parts: Vec<SearchPart> = roots
            .chunks(5)
            .map(|c| exact_roots(&g, Measure::Kappa, 2, &opts, c, None).unwrap())
            .collect();
        parts.reverse();
        let merged = parts
            .into_iter()
            .fold(SearchPart::empty(), merge_parts);
        let rebuilt = finish(&g, Measure::Kappa, 2, &opts, merged).unwrap();
        assert_eq!(whole, rebuilt);
    }

    #[test]
    fn lowered_cap_is_flagged_non_exhaustive() {
        let g = build_nkstar(4, 2).unwrap();
        let r = exact_kappa_s(
            &g,
            0,
            &OracleOptions {
                fragment_cap: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.value, Some(3)); // a singleton fragment already attains it
    }

    #[test]
    fn seed_does_not_change_the_answer() {
        let g = build_nkstar(4, 2).unwrap();
        let plain = exact_lambda_s(&g, 2, &OracleOptions::default()).unwrap();
        // seed with the certificate cut
        let p = crate::formulas::FamilyParams { n: 4, k: 2, h: 2 };
        let x = crate::cuts::build_fragment_x(&p).unwrap();
        let (_, ec) = crate::cuts::build_cuts_from_x(&g, &p, &x).unwrap();
        let crate::cuts::CutBody::Edges(pairs) = &ec.cut else {
            panic!()
        };
        let cut: Vec<(u32, u32)> = pairs
            .iter()
            .map(|(a, b)| {
                let (u, v) = (g.rank_of(a).unwrap(), g.rank_of(b).unwrap());
                (u.min(v), u.max(v))
            })
            .collect();
        let fragment: Vec<u32> = ec.fragment.iter().map(|a| g.rank_of(a).unwrap()).collect();
        let seeded = exact_lambda_s(
            &g,
            2,
            &OracleOptions {
                seed: Some(Candidate {
                    value: cut.len() as u64,
                    cut: WitnessCut::Edges(cut),
                    fragment,
                }),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(plain.value, seeded.value);
        assert_eq!(plain.witness_cut, seeded.witness_cut);
    }

    #[test]
    fn invalid_seed_is_rejected() {
        let g = build_nkstar(4, 2).unwrap();
        let bad = Candidate {
            value: 1,
            cut: WitnessCut::Vertices(vec![0]),
            fragment: vec![1],
        };
        let err = exact_kappa_s(
            &g,
            0,
            &OracleOptions {
                seed: Some(bad),
                ..Default::default()
            },
        );
        assert!(err.is_err());
    }

    #[test]
    fn domain_errors() {
        let g = build_nkstar(4, 2).unwrap();
        assert!(exact_kappa_s(&g, 12, &OracleOptions::default()).is_err());
        assert!(enumerate_connected_sets(&g, 0, |_| {}).is_err());
        assert!(enumerate_connected_sets(&g, 13, |_| {}).is_err());
    }
}
