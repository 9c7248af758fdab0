//! Optimal cut certificates for (n,k)-star graphs and definition-level
//! verification of arbitrary claimed cuts.
//!
//! The certificate construction fixes a fragment X: the arrangements whose
//! last `n-1-h` digits are `1, 2, ..., n-1-h` in order. T is the outside
//! neighborhood of X and F the X-to-T edge set; both have size
//! `|X|(n-1-h) = (h+1)!(n-1-h)/(n-k)!`, matching the closed forms in the
//! regime `n-k <= h <= n-2`. Verification never trusts the construction:
//! a verdict is computed from the bare definitions (deletion leaves the
//! graph disconnected with minimum degree at least h) by traversal from the
//! lexicographically smallest surviving vertex.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formulas::FamilyParams;
use crate::iso;
use crate::perm::{self, Arrangement};
use crate::topology::{build_nkstar, EdgeKind, Family, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutKind {
    Vertex,
    Edge,
}

impl CutKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CutKind::Vertex => "vertex",
            CutKind::Edge => "edge",
        }
    }
}

/// The deletion set of a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutBody {
    Vertices(Vec<Arrangement>),
    Edges(Vec<(Arrangement, Arrangement)>),
}

impl CutBody {
    pub fn kind(&self) -> CutKind {
        match self {
            CutBody::Vertices(_) => CutKind::Vertex,
            CutBody::Edges(_) => CutKind::Edge,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            CutBody::Vertices(v) => v.len(),
            CutBody::Edges(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A fragment plus a claimed cut, serializable and independently checkable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCertificate {
    pub params: FamilyParams,
    pub fragment: Vec<Arrangement>,
    pub cut: CutBody,
    pub claimed_size: u64,
}

/// Outcome of checking a claimed cut against the definitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(InvalidReason),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvalidReason {
    /// Deletion does not disconnect the graph (this includes leaving at
    /// most one vertex behind).
    StillConnected,
    /// A surviving vertex drops below the degree floor.
    MinDegree { vertex: u32, degree: u32 },
    /// The certificate's size field does not match its cut.
    SizeMismatch { claimed: u64, actual: u64 },
    /// A certificate label does not name a vertex of the graph.
    UnknownLabel(String),
}

impl core::fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            InvalidReason::StillConnected => f.write_str("deletion leaves the graph connected"),
            InvalidReason::MinDegree { vertex, degree } => write!(
                f,
                "surviving vertex rank {vertex} has degree {degree} below the floor"
            ),
            InvalidReason::SizeMismatch { claimed, actual } => {
                write!(f, "claimed size {claimed} but cut has {actual} elements")
            }
            InvalidReason::UnknownLabel(l) => write!(f, "label {l} is not a vertex"),
        }
    }
}

fn check_range(p: &FamilyParams) -> Result<()> {
    FamilyParams::new(p.n, p.k, p.h)?;
    if p.h < p.n - p.k {
        return Err(Error::domain(alloc::format!(
            "fragment construction needs n-k <= h <= n-2, got n={} k={} h={}",
            p.n,
            p.k,
            p.h
        )));
    }
    Ok(())
}

/// The fragment X: all k-arrangements whose last `n-1-h` digits are
/// `1, 2, ..., n-1-h` in order. `|X| = (h+1)!/(n-k)!`.
pub fn build_fragment_x(p: &FamilyParams) -> Result<Vec<Arrangement>> {
    check_range(p)?;
    let n = p.n as u8;
    let k = p.k as u8;
    let m = (p.n - 1 - p.h) as u8; // fixed suffix length
    let free_len = k - m;
    let free_symbols: Vec<u8> = (m + 1..=n).collect(); // h+1 symbols
    if perm::arrangement_count(free_symbols.len() as u8, free_len)? > 1_000_000 {
        return Err(Error::domain("fragment would exceed the 10^6 cap"));
    }
    let mut out = Vec::new();
    for idx in perm::enumerate_arrangements(free_symbols.len() as u8, free_len)? {
        let mut digits: Vec<u8> = idx
            .digits()
            .iter()
            .map(|&i| free_symbols[i as usize - 1])
            .collect();
        digits.extend(1..=m);
        out.push(Arrangement::new(digits, n)?);
    }
    Ok(out)
}

/// Expand X into its certificate pair: the vertex cut T = N(X) \ X and the
/// edge cut F of all X-to-T edges. Checks the structural size identities
/// and that T is reached by swap edges only; a failure is a construction
/// bug, not bad input.
pub fn build_cuts_from_x(
    g: &Graph,
    p: &FamilyParams,
    x: &[Arrangement],
) -> Result<(CutCertificate, CutCertificate)> {
    check_range(p)?;
    match g.family() {
        Some(tag)
            if tag.family == Family::NkStar
                && tag.n as u32 == p.n
                && tag.k as u32 == p.k => {}
        other => {
            return Err(Error::domain(alloc::format!(
                "graph tagged {other:?} does not match nkstar n={} k={}",
                p.n,
                p.k
            )))
        }
    }
    let mut x_ranks = Vec::with_capacity(x.len());
    for a in x {
        let r = g
            .rank_of(a)
            .ok_or_else(|| Error::domain(alloc::format!("{a} is not a vertex")))?;
        x_ranks.push(r);
    }
    let mut in_x = alloc::vec![false; g.vertex_count()];
    for &r in &x_ranks {
        in_x[r as usize] = true;
    }

    let mut t_ranks: Vec<u32> = Vec::new();
    let mut f_edges: Vec<(u32, u32)> = Vec::new();
    for &r in &x_ranks {
        for &w in g.neighbors(r) {
            if !in_x[w as usize] {
                t_ranks.push(w);
                f_edges.push((r.min(w), r.max(w)));
            }
        }
    }
    t_ranks.sort_unstable();
    t_ranks.dedup();
    f_edges.sort_unstable();
    f_edges.dedup();

    let expected = x.len() as u64 * (p.n - 1 - p.h) as u64;
    if t_ranks.len() as u64 != expected || f_edges.len() as u64 != expected {
        return Err(Error::structure(alloc::format!(
            "boundary sizes |T|={} |F|={} differ from |X|(n-1-h)={expected}",
            t_ranks.len(),
            f_edges.len()
        )));
    }
    for &(u, v) in &f_edges {
        let kind = EdgeKind::classify(g.label(u), g.label(v));
        if !matches!(kind, EdgeKind::Swap(_)) {
            return Err(Error::structure(alloc::format!(
                "boundary edge {}-{} is not a swap edge",
                g.label(u),
                g.label(v)
            )));
        }
    }

    let fragment: Vec<Arrangement> = x_ranks.iter().map(|&r| g.label(r).clone()).collect();
    let vertex_cert = CutCertificate {
        params: *p,
        fragment: fragment.clone(),
        cut: CutBody::Vertices(t_ranks.iter().map(|&r| g.label(r).clone()).collect()),
        claimed_size: expected,
    };
    let edge_cert = CutCertificate {
        params: *p,
        fragment,
        cut: CutBody::Edges(
            f_edges
                .iter()
                .map(|&(u, v)| (g.label(u).clone(), g.label(v).clone()))
                .collect(),
        ),
        claimed_size: expected,
    };
    Ok((vertex_cert, edge_cert))
}

/// Is T an h-vertex-cut: does deleting T leave the graph disconnected with
/// minimum degree at least h?
pub fn verify_vertex_cut(g: &Graph, t: &[u32], h: u32) -> Result<Verdict> {
    let nv = g.vertex_count();
    let mut removed = alloc::vec![false; nv];
    for &r in t {
        if r as usize >= nv {
            return Err(Error::domain(alloc::format!("rank {r} out of range")));
        }
        removed[r as usize] = true;
    }
    let survivors: Vec<u32> = (0..nv as u32).filter(|&v| !removed[v as usize]).collect();
    if !is_disconnected_vertices(g, &removed, &survivors) {
        return Ok(Verdict::Invalid(InvalidReason::StillConnected));
    }
    for &v in &survivors {
        let d = g
            .neighbors(v)
            .iter()
            .filter(|&&w| !removed[w as usize])
            .count() as u32;
        if d < h {
            return Ok(Verdict::Invalid(InvalidReason::MinDegree { vertex: v, degree: d }));
        }
    }
    Ok(Verdict::Valid)
}

/// Is F an h-edge-cut: does deleting F leave the graph disconnected with
/// minimum degree at least h?
pub fn verify_edge_cut(g: &Graph, f: &[(u32, u32)], h: u32) -> Result<Verdict> {
    let nv = g.vertex_count();
    let mut removed = alloc::collections::BTreeSet::new();
    for &(a, b) in f {
        if a as usize >= nv || b as usize >= nv {
            return Err(Error::domain(alloc::format!("edge ({a},{b}) out of range")));
        }
        if !g.is_adjacent(a, b) {
            return Err(Error::domain(alloc::format!(
                "({a},{b}) is not an edge of the graph"
            )));
        }
        removed.insert((a.min(b), a.max(b)));
    }
    if !is_disconnected_edges(g, &removed) {
        return Ok(Verdict::Invalid(InvalidReason::StillConnected));
    }
    for v in 0..nv as u32 {
        let d = g
            .neighbors(v)
            .iter()
            .filter(|&&w| !removed.contains(&(v.min(w), v.max(w))))
            .count() as u32;
        if d < h {
            return Ok(Verdict::Invalid(InvalidReason::MinDegree { vertex: v, degree: d }));
        }
    }
    Ok(Verdict::Valid)
}

fn is_disconnected_vertices(g: &Graph, removed: &[bool], survivors: &[u32]) -> bool {
    if survivors.len() < 2 {
        return false; // fewer than two vertices can never be disconnected
    }
    let mut seen = alloc::vec![false; g.vertex_count()];
    let mut stack = alloc::vec![survivors[0]];
    seen[survivors[0] as usize] = true;
    let mut reached = 1usize;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !removed[w as usize] && !seen[w as usize] {
                seen[w as usize] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached < survivors.len()
}

fn is_disconnected_edges(g: &Graph, removed: &alloc::collections::BTreeSet<(u32, u32)>) -> bool {
    let nv = g.vertex_count();
    if nv < 2 {
        return false;
    }
    let mut seen = alloc::vec![false; nv];
    let mut stack = alloc::vec![0u32];
    seen[0] = true;
    let mut reached = 1usize;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !seen[w as usize] && !removed.contains(&(v.min(w), v.max(w))) {
                seen[w as usize] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached < nv
}

/// Check a whole certificate against a graph: resolve labels, verify the
/// cut per the definitions, then confirm the claimed size.
pub fn verify_certificate(g: &Graph, cert: &CutCertificate) -> Result<Verdict> {
    let verdict = match &cert.cut {
        CutBody::Vertices(labels) => {
            let mut ranks = Vec::with_capacity(labels.len());
            for l in labels {
                match g.rank_of(l) {
                    Some(r) => ranks.push(r),
                    None => {
                        return Ok(Verdict::Invalid(InvalidReason::UnknownLabel(l.to_label())))
                    }
                }
            }
            verify_vertex_cut(g, &ranks, cert.params.h)?
        }
        CutBody::Edges(pairs) => {
            let mut edges = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                let (Some(u), Some(v)) = (g.rank_of(a), g.rank_of(b)) else {
                    let missing = if g.rank_of(a).is_none() { a } else { b };
                    return Ok(Verdict::Invalid(InvalidReason::UnknownLabel(
                        missing.to_label(),
                    )));
                };
                if !g.is_adjacent(u, v) {
                    return Ok(Verdict::Invalid(InvalidReason::UnknownLabel(
                        alloc::format!("{a} {b} (not an edge)"),
                    )));
                }
                edges.push((u.min(v), u.max(v)));
            }
            verify_edge_cut(g, &edges, cert.params.h)?
        }
    };
    if !verdict.is_valid() {
        return Ok(verdict);
    }
    let actual = cert.cut.len() as u64;
    if cert.claimed_size != actual {
        return Ok(Verdict::Invalid(InvalidReason::SizeMismatch {
            claimed: cert.claimed_size,
            actual,
        }));
    }
    Ok(Verdict::Valid)
}

/// Structural facts about the fragment X inside its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub x_size: u64,
    pub cut_size: u64,
    /// The subgraph induced by X, with its free symbols relabeled so the
    /// j-th smallest becomes j, equals the (h+1, h+1-(n-k))-star graph.
    pub induced_matches: bool,
    /// Every X vertex has exactly h neighbors in X and n-1-h in T, and no
    /// two X vertices share a T neighbor.
    pub boundary_ok: bool,
    /// Every vertex outside X and T has at most one neighbor in T.
    pub outside_ok: bool,
}

impl StructureReport {
    pub fn all_ok(&self) -> bool {
        self.induced_matches && self.boundary_ok && self.outside_ok
    }
}

/// Build the instance for `p` and check the three structural claims behind
/// the certificate construction.
pub fn check_fragment_structure(p: &FamilyParams) -> Result<StructureReport> {
    check_range(p)?;
    let g = build_nkstar(p.n as u8, p.k as u8)?;
    let x = build_fragment_x(p)?;
    let x_ranks: Vec<u32> = x
        .iter()
        .map(|a| g.rank_of(a).expect("fragment labels are vertices"))
        .collect();
    let mut in_x = alloc::vec![false; g.vertex_count()];
    for &r in &x_ranks {
        in_x[r as usize] = true;
    }

    // (a) induced subgraph against the smaller star family
    let induced = g.induced_subgraph(&x_ranks)?;
    let m = (p.n - 1 - p.h) as u8;
    let small_k = (p.h + 1 - (p.n - p.k)) as u8;
    let relabeled_labels: Vec<Arrangement> = induced
        .labels()
        .iter()
        .map(|a| {
            // prefix digits live in m+1..=n; shift them down to 1..=h+1
            let digits: Vec<u8> = a.digits()[..small_k as usize]
                .iter()
                .map(|&d| d - m)
                .collect();
            Arrangement::new(digits, (p.h + 1) as u8)
        })
        .collect::<Result<_>>()?;
    let relabeled = Graph::new(
        relabeled_labels,
        induced
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.kind))
            .collect(),
        None,
    )?;
    let expected = build_nkstar((p.h + 1) as u8, small_k)?;
    let induced_matches = iso::edge_sets_equal(&relabeled, &expected);

    // (b) boundary counts and disjoint T neighborhoods
    let mut t_owner: alloc::collections::BTreeMap<u32, u32> = alloc::collections::BTreeMap::new();
    let mut boundary_ok = true;
    for &r in &x_ranks {
        let mut inside = 0u32;
        let mut outside = 0u32;
        for &w in g.neighbors(r) {
            if in_x[w as usize] {
                inside += 1;
            } else {
                outside += 1;
                if let Some(prev) = t_owner.insert(w, r) {
                    if prev != r {
                        boundary_ok = false; // two X vertices share a T neighbor
                    }
                }
            }
        }
        if inside != p.h || outside != p.n - 1 - p.h {
            boundary_ok = false;
        }
    }

    // (c) at most one T neighbor outside X and T
    let in_t: alloc::collections::BTreeSet<u32> = t_owner.keys().copied().collect();
    let mut outside_ok = true;
    for v in 0..g.vertex_count() as u32 {
        if in_x[v as usize] || in_t.contains(&v) {
            continue;
        }
        let t_nbrs = g.neighbors(v).iter().filter(|w| in_t.contains(w)).count();
        if t_nbrs > 1 {
            outside_ok = false;
        }
    }

    Ok(StructureReport {
        x_size: x.len() as u64,
        cut_size: in_t.len() as u64,
        induced_matches,
        boundary_ok,
        outside_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn params(n: u32, k: u32, h: u32) -> FamilyParams {
        FamilyParams { n, k, h }
    }

    fn labels_of(x: &[Arrangement]) -> Vec<String> {
        x.iter().map(|a| a.to_label()).collect()
    }

    #[test]
    fn fragment_422_is_the_three_suffix_one_vertices() {
        let x = build_fragment_x(&params(4, 2, 2)).unwrap();
        assert_eq!(labels_of(&x), ["2.1", "3.1", "4.1"]);
        assert_eq!(x.len() as u64, 3); // (h+1)!/(n-k)! = 3!/2!
    }

    #[test]
    fn fragment_sizes_match_the_factorial_ratio() {
        assert_eq!(build_fragment_x(&params(5, 3, 3)).unwrap().len(), 12); // 4!/2!
        assert_eq!(build_fragment_x(&params(5, 3, 2)).unwrap().len(), 3); // 3!/2!
    }

    #[test]
    fn fragment_rejects_out_of_regime_parameters() {
        assert!(build_fragment_x(&params(4, 2, 1)).is_err()); // h < n-k
        assert!(build_fragment_x(&params(4, 2, 3)).is_err()); // h > n-2
        assert!(build_fragment_x(&params(4, 1, 2)).is_err()); // k = 1
    }

    #[test]
    fn cuts_from_x_422() {
        let g = build_nkstar(4, 2).unwrap();
        let p = params(4, 2, 2);
        let x = build_fragment_x(&p).unwrap();
        let (vc, ec) = build_cuts_from_x(&g, &p, &x).unwrap();
        match &vc.cut {
            CutBody::Vertices(t) => assert_eq!(labels_of(t), ["1.2", "1.3", "1.4"]),
            _ => panic!("expected vertex cut"),
        }
        match &ec.cut {
            CutBody::Edges(f) => {
                let pairs: Vec<(String, String)> = f
                    .iter()
                    .map(|(a, b)| (a.to_label(), b.to_label()))
                    .collect();
                assert_eq!(
                    pairs,
                    [
                        ("1.2".into(), "2.1".into()),
                        ("1.3".into(), "3.1".into()),
                        ("1.4".into(), "4.1".into())
                    ]
                );
            }
            _ => panic!("expected edge cut"),
        }
        assert_eq!(vc.claimed_size, 3);
        assert_eq!(ec.claimed_size, 3);
    }

    #[test]
    fn cut_sizes_match_the_high_formula() {
        let p = params(5, 3, 3);
        let g = build_nkstar(5, 3).unwrap();
        let x = build_fragment_x(&p).unwrap();
        let (vc, _) = build_cuts_from_x(&g, &p, &x).unwrap();
        assert_eq!(vc.claimed_size, 12);
    }

    #[test]
    fn certificate_cuts_verify() {
        for (n, k, h) in [(4, 2, 2), (4, 3, 1), (4, 3, 2), (5, 3, 2)] {
            let p = params(n, k, h);
            let g = build_nkstar(n as u8, k as u8).unwrap();
            let x = build_fragment_x(&p).unwrap();
            let (vc, ec) = build_cuts_from_x(&g, &p, &x).unwrap();
            assert_eq!(verify_certificate(&g, &vc).unwrap(), Verdict::Valid);
            assert_eq!(verify_certificate(&g, &ec).unwrap(), Verdict::Valid);
        }
    }

    #[test]
    fn single_vertex_does_not_cut() {
        let g = build_nkstar(4, 2).unwrap();
        for v in 0..g.vertex_count() as u32 {
            let verdict = verify_vertex_cut(&g, &[v], 0).unwrap();
            assert_eq!(verdict, Verdict::Invalid(InvalidReason::StillConnected));
        }
    }

    #[test]
    fn empty_cuts_are_invalid_on_connected_graphs() {
        let g = build_nkstar(4, 2).unwrap();
        assert_eq!(
            verify_vertex_cut(&g, &[], 0).unwrap(),
            Verdict::Invalid(InvalidReason::StillConnected)
        );
        assert_eq!(
            verify_edge_cut(&g, &[], 0).unwrap(),
            Verdict::Invalid(InvalidReason::StillConnected)
        );
    }

    #[test]
    fn isolating_a_vertex_fails_the_degree_floor() {
        let g = build_nkstar(4, 2).unwrap();
        let star: Vec<(u32, u32)> = g.neighbors(0).iter().map(|&w| (0, w)).collect();
        let verdict = verify_edge_cut(&g, &star, 1).unwrap();
        assert_eq!(
            verdict,
            Verdict::Invalid(InvalidReason::MinDegree { vertex: 0, degree: 0 })
        );
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let g = build_nkstar(4, 2).unwrap();
        let p = params(4, 2, 2);
        let x = build_fragment_x(&p).unwrap();
        let (vc, _) = build_cuts_from_x(&g, &p, &x).unwrap();
        let mut tampered = vc.clone();
        if let CutBody::Vertices(t) = &mut tampered.cut {
            t.pop();
        }
        // removing any of the three cut vertices reconnects the graph
        let verdict = verify_certificate(&g, &tampered).unwrap();
        assert_eq!(verdict, Verdict::Invalid(InvalidReason::StillConnected));

        let mut size_lie = vc.clone();
        size_lie.claimed_size = 2;
        assert_eq!(
            verify_certificate(&g, &size_lie).unwrap(),
            Verdict::Invalid(InvalidReason::SizeMismatch { claimed: 2, actual: 3 })
        );
    }

    #[test]
    fn structure_report_422() {
        let report = check_fragment_structure(&params(4, 2, 2)).unwrap();
        assert!(report.all_ok(), "{report:?}");
        assert_eq!(report.x_size, 3);
        assert_eq!(report.cut_size, 3);
    }

    #[test]
    fn structure_report_532_is_a_triangle() {
        let report = check_fragment_structure(&params(5, 3, 2)).unwrap();
        assert!(report.all_ok(), "{report:?}");
        assert_eq!(report.x_size, 3);
    }

    #[test]
    fn unknown_labels_invalidate_certificates() {
        let g = build_nkstar(4, 2).unwrap();
        let p = params(4, 2, 2);
        let cert = CutCertificate {
            params: p,
            fragment: vec![],
            cut: CutBody::Vertices(vec![Arrangement::parse_label("1.2.3", 4).unwrap()]),
            claimed_size: 1,
        };
        match verify_certificate(&g, &cert).unwrap() {
            Verdict::Invalid(InvalidReason::UnknownLabel(_)) => {}
            other => panic!("expected unknown label, got {other:?}"),
        }
    }
}
