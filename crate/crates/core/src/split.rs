//! t-split transforms: each vertex becomes a block of `t` independent
//! copies, each edge a perfect matching between the two blocks.
//!
//! Two deterministic matching rules are provided instead of arbitrary
//! matchings, so every construction is reproducible:
//!
//! * `Parallel` works on any graph. The copies of an edge `uv` (with
//!   `rank(u) < rank(v)`) connect copy `j` of `u` to copy `j+1 mod t` of
//!   `v`. The offset makes the split of a non-bipartite connected graph
//!   connected; a plain copy-to-copy matching would always produce `t`
//!   disjoint copies.
//! * `Suffix` is specific to (n,k)-star graphs and only available through
//!   [`split_nkstar`]: blocks are suffix extensions of the base label, swap
//!   edges match equal suffixes, and the edge that replaces the first digit
//!   by `s` matches the copy whose suffix swaps `s` for the old first
//!   digit. The result is the star graph on full permutations.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::{self, Arrangement};
use crate::topology::{build_nkstar, EdgeKind, Family, FamilyTag, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingRule {
    Parallel,
    Suffix,
}

impl MatchingRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatchingRule::Parallel => "parallel",
            MatchingRule::Suffix => "suffix",
        }
    }

    pub fn from_str(s: &str) -> Option<MatchingRule> {
        match s {
            "parallel" => Some(MatchingRule::Parallel),
            "suffix" => Some(MatchingRule::Suffix),
            _ => None,
        }
    }
}

impl core::fmt::Display for MatchingRule {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Block decomposition and matching bookkeeping of a t-split.
#[derive(Debug, Clone)]
pub struct SplitMap {
    t: usize,
    rule: MatchingRule,
    block_of: Vec<u32>,
    blocks: Vec<Vec<u32>>,
}

impl SplitMap {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn rule(&self) -> MatchingRule {
        self.rule
    }

    /// Base vertex owning a split vertex.
    pub fn block_of(&self, split_rank: u32) -> u32 {
        self.block_of[split_rank as usize]
    }

    /// The `t` split ranks forming the block of a base vertex.
    pub fn block(&self, base_rank: u32) -> &[u32] {
        &self.blocks[base_rank as usize]
    }

    pub fn base_vertex_count(&self) -> usize {
        self.blocks.len()
    }
}

/// t-split of an arbitrary graph under the parallel rule. `t = 1` returns
/// the graph unchanged.
pub fn split_graph(g: &Graph, t: usize, rule: MatchingRule) -> Result<(Graph, SplitMap)> {
    if rule != MatchingRule::Parallel {
        return Err(Error::domain(
            "only the parallel rule applies to arbitrary graphs; use split_nkstar for the suffix rule",
        ));
    }
    if t < 1 {
        return Err(Error::domain("split factor t must be at least 1"));
    }
    let nv = g.vertex_count();
    if t == 1 {
        let map = SplitMap {
            t: 1,
            rule,
            block_of: (0..nv as u32).collect(),
            blocks: (0..nv as u32).map(|v| alloc::vec![v]).collect(),
        };
        return Ok((g.clone(), map));
    }
    if nv == 0 {
        return Err(Error::domain("cannot split an empty graph"));
    }
    let ambient = g.labels()[0].ambient_n();
    let new_ambient = ambient as usize + t;
    if new_ambient > perm::MAX_N as usize {
        return Err(Error::domain(alloc::format!(
            "split labels need {new_ambient} digits, above the {} cap",
            perm::MAX_N
        )));
    }
    let new_ambient = new_ambient as u8;

    // copy j of base vertex b gets label b ++ [ambient + j + 1] and rank b*t + j
    let mut labels = Vec::with_capacity(nv * t);
    let mut block_of = Vec::with_capacity(nv * t);
    let mut blocks = Vec::with_capacity(nv);
    for b in 0..nv {
        let mut block = Vec::with_capacity(t);
        for j in 0..t {
            let mut digits = g.label(b as u32).digits().to_vec();
            digits.push(ambient + j as u8 + 1);
            labels.push(Arrangement::new(digits, new_ambient)?);
            block.push((b * t + j) as u32);
            block_of.push(b as u32);
        }
        blocks.push(block);
    }

    let mut edges = Vec::with_capacity(g.edge_count() * t);
    for e in g.edges() {
        for j in 0..t {
            let x = e.u as usize * t + j;
            let y = e.v as usize * t + (j + 1) % t;
            edges.push((x as u32, y as u32, e.kind));
        }
    }
    let split = Graph::new(
        labels,
        edges,
        Some(FamilyTag {
            family: Family::Split,
            n: new_ambient,
            k: g.labels()[0].len() as u8 + 1,
        }),
    )?;
    Ok((
        split,
        SplitMap {
            t,
            rule,
            block_of,
            blocks,
        },
    ))
}

/// The (n-k)!-split of the (n,k)-star graph under the suffix rule. The
/// result has vertex set P(n) in lexicographic rank order, so comparing it
/// with the star graph is positional equality rather than a search.
pub fn split_nkstar(n: u8, k: u8) -> Result<(Graph, SplitMap)> {
    if n < 3 || n > 6 || k < 2 || k > n - 1 {
        return Err(Error::domain(alloc::format!(
            "suffix split needs 2 <= k <= n-1 and n <= 6, got n={n} k={k}"
        )));
    }
    let base = build_nkstar(n, k)?;
    let t = perm::arrangement_count((n - k) as u8, (n - k) as u8)? as usize;

    // Block of u = all suffix extensions of u, suffixes in lex order.
    // Walking base vertices in rank order then suffixes in lex order yields
    // exactly P(n) in lex order, so split rank = base rank * t + suffix index.
    let mut labels = Vec::with_capacity(base.vertex_count() * t);
    let mut block_of = Vec::with_capacity(base.vertex_count() * t);
    let mut blocks = Vec::with_capacity(base.vertex_count());
    for b in 0..base.vertex_count() {
        let u = base.label(b as u32);
        let mut block = Vec::with_capacity(t);
        for suffix in suffix_permutations(&u.unused_digits()) {
            let mut digits = u.digits().to_vec();
            digits.extend_from_slice(&suffix);
            labels.push(Arrangement::new(digits, n)?);
            block.push((labels.len() - 1) as u32);
            block_of.push(b as u32);
        }
        blocks.push(block);
    }

    let mut edges = Vec::with_capacity(base.edge_count() * t);
    for e in base.edges() {
        let u = base.label(e.u);
        let v = base.label(e.v);
        match e.kind {
            EdgeKind::Swap(_) => {
                // same digit set on both sides, so suffix enumerations align
                for j in 0..t {
                    let x = blocks[e.u as usize][j];
                    let y = blocks[e.v as usize][j];
                    edges.push((x, y, split_edge_kind(&labels, x, y)?));
                }
            }
            EdgeKind::Unswap => {
                // v replaces u's first digit by s; the copy of u whose
                // suffix holds s at position p matches the copy of v whose
                // suffix holds u's first digit there instead
                let s = v.first();
                let old_first = u.first();
                let v_unused = v.unused_digits();
                for j in 0..t {
                    let x = blocks[e.u as usize][j];
                    let x_suffix = &labels[x as usize].digits()[k as usize..];
                    let pos = x_suffix
                        .iter()
                        .position(|&d| d == s)
                        .ok_or_else(|| Error::structure("replacement digit missing from suffix"))?;
                    let mut y_suffix = x_suffix.to_vec();
                    y_suffix[pos] = old_first;
                    let idx = suffix_index(&v_unused, &y_suffix)?;
                    let y = blocks[e.v as usize][idx];
                    edges.push((x, y, split_edge_kind(&labels, x, y)?));
                }
            }
            EdgeKind::Plain => {
                return Err(Error::structure("(n,k)-star edge without a kind tag"))
            }
        }
    }
    let split = Graph::new(
        labels,
        edges,
        Some(FamilyTag {
            family: Family::Split,
            n,
            k: n,
        }),
    )?;
    Ok((
        split,
        SplitMap {
            t,
            rule: MatchingRule::Suffix,
            block_of,
            blocks,
        },
    ))
}

fn split_edge_kind(labels: &[Arrangement], x: u32, y: u32) -> Result<EdgeKind> {
    match EdgeKind::classify(&labels[x as usize], &labels[y as usize]) {
        EdgeKind::Swap(i) => Ok(EdgeKind::Swap(i)),
        _ => Err(Error::structure(alloc::format!(
            "split edge {}-{} is not a first-digit swap",
            labels[x as usize],
            labels[y as usize]
        ))),
    }
}

/// Permutations of an arbitrary digit set in lexicographic order.
fn suffix_permutations(digits: &[u8]) -> Vec<Vec<u8>> {
    let m = digits.len() as u8;
    if m == 0 {
        return alloc::vec![Vec::new()];
    }
    perm::enumerate_arrangements(m, m)
        .expect("m <= n <= 20")
        .into_iter()
        .map(|idx| idx.digits().iter().map(|&i| digits[i as usize - 1]).collect())
        .collect()
}

/// Index of `suffix` in the lex enumeration of permutations of `digits`
/// (both over the same digit set, `digits` sorted ascending).
fn suffix_index(digits: &[u8], suffix: &[u8]) -> Result<usize> {
    let mut used = alloc::vec![false; digits.len()];
    let mut remaining = digits.len();
    let mut rank = 0usize;
    for &d in suffix {
        let di = digits
            .binary_search(&d)
            .map_err(|_| Error::structure("suffix digit outside its block digit set"))?;
        let smaller = (0..di).filter(|&j| !used[j]).count();
        rank += smaller * factorial(remaining - 1);
        used[di] = true;
        remaining -= 1;
    }
    Ok(rank)
}

fn factorial(m: usize) -> usize {
    (1..=m).product::<usize>().max(1)
}

/// Union of the blocks of the base vertices in `t_set`; its size is
/// `t * |t_set|`.
pub fn lift_vertex_cut(map: &SplitMap, t_set: &[u32]) -> Result<Vec<u32>> {
    let mut out = Vec::with_capacity(t_set.len() * map.t);
    for &b in t_set {
        if b as usize >= map.blocks.len() {
            return Err(Error::domain(alloc::format!("base rank {b} out of range")));
        }
        out.extend_from_slice(&map.blocks[b as usize]);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Union of the matchings of the base edges in `f`; its size is `t * |f|`.
/// Needs the split graph to recover each matching.
pub fn lift_edge_cut(
    split: &Graph,
    map: &SplitMap,
    f: &[(u32, u32)],
) -> Result<Vec<(u32, u32)>> {
    let mut out = Vec::with_capacity(f.len() * map.t);
    for &(a, b) in f {
        if a as usize >= map.blocks.len() || b as usize >= map.blocks.len() {
            return Err(Error::domain(alloc::format!(
                "base edge ({a},{b}) out of range"
            )));
        }
        for &x in &map.blocks[a as usize] {
            let mut matched = None;
            for &y in split.neighbors(x) {
                if map.block_of[y as usize] == b {
                    if matched.is_some() {
                        return Err(Error::structure(alloc::format!(
                            "split vertex {x} has two neighbors in block {b}"
                        )));
                    }
                    matched = Some(y);
                }
            }
            let y = matched.ok_or_else(|| {
                Error::structure(alloc::format!(
                    "split vertex {x} has no neighbor in block {b}; is ({a},{b}) a base edge?"
                ))
            })?;
            out.push((x.min(y), x.max(y)));
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
