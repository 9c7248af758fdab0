//! Graph and result serialization.
//!
//! Two graph formats:
//!
//! * `edgelist`: a header `# family=<tag> n=<n> k=<k> nv=<V> ne=<E>`
//!   followed by one line per edge, `<label_u> <label_v>` with the
//!   rank-smaller label first, lines in rank order.
//! * `dimacs`: `p edge <V> <E>` then `e <i> <j>` with 1-based ranks,
//!   `i < j`, sorted; a companion JSON map from 0-based rank to label is
//!   written alongside (`<path>.labels.json`).
//!
//! JSON documents mirror the core result types with labels instead of
//! ranks; field order is fixed by declaration order and all outputs are
//! newline-terminated.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use starkit_core::cuts::{CutBody, CutCertificate};
use starkit_core::formulas::FamilyParams;
use starkit_core::iso::IsoWitness;
use starkit_core::oracle::{ExactResult, WitnessCut};
use starkit_core::split::SplitMap;
use starkit_core::topology::{EdgeKind, Family, FamilyTag};
use starkit_core::{Arrangement, Graph};

use crate::{CliError, CliResult};

pub fn write_edgelist<W: Write>(g: &Graph, w: &mut W) -> std::io::Result<()> {
    let tag = g.family();
    let (family, n, k) = match tag {
        Some(t) => (t.family.as_str(), t.n, t.k),
        None => (
            "custom",
            g.labels().first().map_or(0, |a| a.ambient_n()),
            g.labels().first().map_or(0, |a| a.len() as u8),
        ),
    };
    writeln!(
        w,
        "# family={family} n={n} k={k} nv={} ne={}",
        g.vertex_count(),
        g.edge_count()
    )?;
    for e in g.edges() {
        writeln!(w, "{} {}", g.label(e.u), g.label(e.v))?;
    }
    Ok(())
}

pub fn parse_edgelist<R: BufRead>(r: R) -> CliResult<Graph> {
    let mut lines = r.lines();
    let header = loop {
        match lines.next() {
            Some(line) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(CliError::domain("empty edgelist input")),
        }
    };
    let rest = header
        .strip_prefix("# ")
        .ok_or_else(|| CliError::domain("edgelist must start with a '# family=...' header"))?;
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for part in rest.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::domain(format!("malformed header field {part:?}")))?;
        fields.insert(key, value);
    }
    let get = |key: &str| -> CliResult<&str> {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| CliError::domain(format!("header is missing {key}=")))
    };
    let n: u8 = get("n")?
        .parse()
        .map_err(|_| CliError::domain("bad n= in header"))?;
    let k: u8 = get("k")?
        .parse()
        .map_err(|_| CliError::domain("bad k= in header"))?;
    let nv: usize = get("nv")?
        .parse()
        .map_err(|_| CliError::domain("bad nv= in header"))?;
    let ne: usize = get("ne")?
        .parse()
        .map_err(|_| CliError::domain("bad ne= in header"))?;
    let family = Family::from_str(get("family")?);

    let mut label_pairs: Vec<(Arrangement, Arrangement)> = Vec::with_capacity(ne);
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (a, b) = line
            .split_once(' ')
            .ok_or_else(|| CliError::domain(format!("malformed edge line {line:?}")))?;
        label_pairs.push((
            Arrangement::parse_label(a.trim(), n)?,
            Arrangement::parse_label(b.trim(), n)?,
        ));
    }
    if label_pairs.len() != ne {
        return Err(CliError::domain(format!(
            "header says ne={ne} but found {} edges",
            label_pairs.len()
        )));
    }
    let mut labels: Vec<Arrangement> = label_pairs
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    labels.sort();
    labels.dedup();
    if labels.len() != nv {
        return Err(CliError::domain(format!(
            "header says nv={nv} but edges mention {} distinct labels",
            labels.len()
        )));
    }
    let rank_of = |a: &Arrangement| labels.binary_search(a).expect("label collected above") as u32;
    let edges: Vec<(u32, u32, EdgeKind)> = label_pairs
        .iter()
        .map(|(a, b)| (rank_of(a), rank_of(b), EdgeKind::classify(a, b)))
        .collect();
    let tag = family.map(|f| FamilyTag { family: f, n, k });
    Ok(Graph::new(labels, edges, tag)?)
}

pub fn write_dimacs<W: Write>(g: &Graph, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "p edge {} {}", g.vertex_count(), g.edge_count())?;
    for e in g.edges() {
        writeln!(w, "e {} {}", e.u + 1, e.v + 1)?;
    }
    Ok(())
}

/// The companion map from 0-based rank to label, keys ascending.
pub fn write_dimacs_labels<W: Write>(g: &Graph, w: &mut W) -> std::io::Result<()> {
    // labels are digits and dots, so no JSON escaping is ever needed
    write!(w, "{{")?;
    for (i, a) in g.labels().iter().enumerate() {
        if i > 0 {
            write!(w, ",")?;
        }
        write!(w, "\"{i}\":\"{a}\"")?;
    }
    writeln!(w, "}}")?;
    Ok(())
}

pub fn parse_dimacs<R: BufRead>(r: R, labels_json: &str) -> CliResult<Graph> {
    let map: BTreeMap<String, String> = serde_json::from_str(labels_json)
        .map_err(|e| CliError::domain(format!("bad labels json: {e}")))?;
    let mut nv = 0usize;
    let mut ne = 0usize;
    let mut raw_edges: Vec<(u32, u32)> = Vec::new();
    let mut saw_problem = false;
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p edge") {
            let mut it = rest.split_whitespace();
            nv = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| CliError::domain("bad p line"))?;
            ne = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| CliError::domain("bad p line"))?;
            saw_problem = true;
        } else if let Some(rest) = line.strip_prefix('e') {
            let mut it = rest.split_whitespace();
            let i: u32 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| CliError::domain(format!("bad e line {line:?}")))?;
            let j: u32 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| CliError::domain(format!("bad e line {line:?}")))?;
            if i == 0 || j == 0 {
                return Err(CliError::domain("dimacs ranks are 1-based"));
            }
            raw_edges.push((i - 1, j - 1));
        } else {
            return Err(CliError::domain(format!("unrecognized line {line:?}")));
        }
    }
    if !saw_problem {
        return Err(CliError::domain("missing 'p edge' line"));
    }
    if raw_edges.len() != ne {
        return Err(CliError::domain(format!(
            "p line says {ne} edges but found {}",
            raw_edges.len()
        )));
    }
    if map.len() != nv {
        return Err(CliError::domain(format!(
            "labels json has {} entries for {nv} vertices",
            map.len()
        )));
    }
    // recover the digit universe from the labels themselves
    let ambient = map
        .values()
        .flat_map(|l| l.split('.'))
        .map(|d| d.parse::<u8>().unwrap_or(0))
        .max()
        .ok_or_else(|| CliError::domain("labels json is empty"))?;
    let mut labels: Vec<Arrangement> = vec![Arrangement::parse_label("1", 1)?; nv];
    for (key, text) in &map {
        let rank: usize = key
            .parse()
            .map_err(|_| CliError::domain(format!("bad rank key {key:?}")))?;
        if rank >= nv {
            return Err(CliError::domain(format!("rank key {rank} out of range")));
        }
        labels[rank] = Arrangement::parse_label(text, ambient)?;
    }
    let edges: Vec<(u32, u32, EdgeKind)> = raw_edges
        .iter()
        .map(|&(u, v)| {
            if (u as usize) < nv && (v as usize) < nv {
                Ok((
                    u,
                    v,
                    EdgeKind::classify(&labels[u as usize], &labels[v as usize]),
                ))
            } else {
                Err(CliError::domain(format!("edge ({u},{v}) out of range")))
            }
        })
        .collect::<CliResult<_>>()?;
    Ok(Graph::new(labels, edges, None)?)
}

/// Load a graph from a file, sniffing the format; `-` reads an edgelist
/// from stdin. Dimacs files expect their `<path>.labels.json` companion.
pub fn read_graph(path: &str) -> CliResult<Graph> {
    let content = if path == "-" {
        let mut buf = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)?
    };
    let first = content
        .lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("");
    if first.starts_with('#') {
        parse_edgelist(content.as_bytes())
    } else if first.starts_with("p ") || first.starts_with('c') || first.starts_with("e ") {
        if path == "-" {
            return Err(CliError::domain(
                "dimacs input needs a real path so the labels file can be found",
            ));
        }
        let labels = std::fs::read_to_string(format!("{path}.labels.json"))?;
        parse_dimacs(content.as_bytes(), &labels)
    } else {
        Err(CliError::domain(
            "unrecognized graph format (expected an edgelist header or a dimacs p-line)",
        ))
    }
}

pub fn read_graph_path(path: &Path) -> CliResult<Graph> {
    read_graph(path.to_str().ok_or_else(|| CliError::domain("non-utf8 path"))?)
}

/// Cut payload shared by certificate and oracle documents: labels for a
/// vertex cut, label pairs (smaller first) for an edge cut.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutPayload {
    Vertices(Vec<String>),
    Edges(Vec<[String; 2]>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub family: String,
    pub n: u32,
    pub k: u32,
    pub h: u32,
    pub kind: String,
    pub fragment: Vec<String>,
    pub cut: CutPayload,
    pub size: u64,
}

impl CertificateDoc {
    pub fn from_core(cert: &CutCertificate) -> CertificateDoc {
        let (kind, cut) = match &cert.cut {
            CutBody::Vertices(t) => (
                "vertex",
                CutPayload::Vertices(t.iter().map(|a| a.to_label()).collect()),
            ),
            CutBody::Edges(f) => (
                "edge",
                CutPayload::Edges(
                    f.iter()
                        .map(|(a, b)| [a.to_label(), b.to_label()])
                        .collect(),
                ),
            ),
        };
        CertificateDoc {
            family: "nkstar".into(),
            n: cert.params.n,
            k: cert.params.k,
            h: cert.params.h,
            kind: kind.into(),
            fragment: cert.fragment.iter().map(|a| a.to_label()).collect(),
            cut,
            size: cert.claimed_size,
        }
    }

    pub fn to_core(&self) -> CliResult<CutCertificate> {
        if self.family != "nkstar" {
            return Err(CliError::domain(format!(
                "unsupported certificate family {:?}",
                self.family
            )));
        }
        let n = u8::try_from(self.n).map_err(|_| CliError::domain("n out of range"))?;
        let parse = |l: &String| Arrangement::parse_label(l, n).map_err(CliError::from);
        let cut = match (&self.cut, self.kind.as_str()) {
            (CutPayload::Vertices(t), "vertex") => {
                CutBody::Vertices(t.iter().map(parse).collect::<CliResult<_>>()?)
            }
            (CutPayload::Edges(f), "edge") => CutBody::Edges(
                f.iter()
                    .map(|[a, b]| Ok((parse(a)?, parse(b)?)))
                    .collect::<CliResult<_>>()?,
            ),
            _ => {
                return Err(CliError::domain(
                    "certificate kind does not match its cut payload",
                ))
            }
        };
        Ok(CutCertificate {
            params: FamilyParams {
                n: self.n,
                k: self.k,
                h: self.h,
            },
            fragment: self.fragment.iter().map(parse).collect::<CliResult<_>>()?,
            cut,
            claimed_size: self.size,
        })
    }
}

/// Oracle answer with labels substituted for ranks.
#[derive(Debug, Clone, Serialize)]
pub struct ExactResultDoc {
    pub measure: String,
    pub h: u32,
    pub value: ExactValue,
    pub witness_fragment: Vec<String>,
    pub witness_cut: CutPayload,
    pub enumerated_fragments: u64,
    pub exhaustive: bool,
    pub symmetry: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ExactValue {
    Number(u64),
    None(&'static str),
}

impl ExactResultDoc {
    pub fn from_core(r: &ExactResult, g: &Graph) -> ExactResultDoc {
        let label = |v: &u32| g.label(*v).to_label();
        ExactResultDoc {
            measure: r.measure.as_str().into(),
            h: r.h,
            value: match r.value {
                Some(v) => ExactValue::Number(v),
                None => ExactValue::None("none"),
            },
            witness_fragment: r.witness_fragment.iter().map(label).collect(),
            witness_cut: match &r.witness_cut {
                WitnessCut::Vertices(t) => CutPayload::Vertices(t.iter().map(label).collect()),
                WitnessCut::Edges(f) => CutPayload::Edges(
                    f.iter()
                        .map(|(u, v)| [g.label(*u).to_label(), g.label(*v).to_label()])
                        .collect(),
                ),
            },
            enumerated_fragments: r.enumerated_fragments,
            exhaustive: r.exhaustive,
            symmetry: r.symmetry,
        }
    }
}

/// Block decomposition of a split, keyed by base label in rank order.
#[derive(Debug, Clone)]
pub struct SplitMapDoc {
    pub t: u64,
    pub rule: String,
    pub blocks: Vec<(String, Vec<String>)>,
}

impl SplitMapDoc {
    pub fn from_core(map: &SplitMap, base: &Graph, split: &Graph) -> SplitMapDoc {
        let blocks = (0..map.base_vertex_count() as u32)
            .map(|b| {
                (
                    base.label(b).to_label(),
                    map.block(b)
                        .iter()
                        .map(|&v| split.label(v).to_label())
                        .collect(),
                )
            })
            .collect();
        SplitMapDoc {
            t: map.t() as u64,
            rule: map.rule().as_str().into(),
            blocks,
        }
    }
}

impl Serialize for SplitMapDoc {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Blocks<'a>(&'a [(String, Vec<String>)]);
        impl Serialize for Blocks<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut m = serializer.serialize_map(Some(self.0.len()))?;
                for (key, vals) in self.0 {
                    m.serialize_entry(key, vals)?;
                }
                m.end()
            }
        }
        let mut s = serializer.serialize_struct("SplitMap", 3)?;
        s.serialize_field("t", &self.t)?;
        s.serialize_field("rule", &self.rule)?;
        s.serialize_field("blocks", &Blocks(&self.blocks))?;
        s.end()
    }
}

/// Isomorphism witness with labels, mapping keys in rank order of the
/// first graph.
#[derive(Debug, Clone)]
pub struct IsoWitnessDoc {
    pub mapping: Vec<(String, String)>,
    pub verified: bool,
}

impl IsoWitnessDoc {
    pub fn from_core(w: &IsoWitness, a: &Graph, b: &Graph) -> IsoWitnessDoc {
        IsoWitnessDoc {
            mapping: w
                .mapping
                .iter()
                .enumerate()
                .map(|(v, &img)| (a.label(v as u32).to_label(), b.label(img).to_label()))
                .collect(),
            verified: w.verified,
        }
    }
}

impl Serialize for IsoWitnessDoc {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Mapping<'a>(&'a [(String, String)]);
        impl Serialize for Mapping<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut m = serializer.serialize_map(Some(self.0.len()))?;
                for (key, val) in self.0 {
                    m.serialize_entry(key, val)?;
                }
                m.end()
            }
        }
        let mut s = serializer.serialize_struct("IsoWitness", 2)?;
        s.serialize_field("mapping", &Mapping(&self.mapping))?;
        s.serialize_field("verified", &self.verified)?;
        s.end()
    }
}

/// Serialize any document compactly with a trailing newline.
pub fn to_json_line<T: Serialize>(doc: &T) -> CliResult<String> {
    let mut s = serde_json::to_string(doc).map_err(|e| CliError::domain(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use starkit_core::cuts::{build_cuts_from_x, build_fragment_x};
    use starkit_core::split::{split_graph, split_nkstar, MatchingRule};
    use starkit_core::topology::{build_nkstar, build_star};

    #[test]
    fn edgelist_round_trip() {
        for g in [
            build_nkstar(4, 2).unwrap(),
            build_star(4).unwrap(),
            split_nkstar(4, 2).unwrap().0,
        ] {
            let mut buf = Vec::new();
            write_edgelist(&g, &mut buf).unwrap();
            let back = parse_edgelist(buf.as_slice()).unwrap();
            assert_eq!(back.labels(), g.labels());
            assert_eq!(back.edges(), g.edges());
            assert_eq!(back.family(), g.family());
        }
    }

    #[test]
    fn edgelist_header_shape() {
        let g = build_nkstar(4, 2).unwrap();
        let mut buf = Vec::new();
        write_edgelist(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# family=nkstar n=4 k=2 nv=12 ne=18");
        assert_eq!(lines.next().unwrap(), "1.2 2.1");
        assert_eq!(text.lines().count(), 19);
    }

    #[test]
    fn dimacs_round_trip() {
        let g = build_nkstar(4, 2).unwrap();
        let mut body = Vec::new();
        let mut labels = Vec::new();
        write_dimacs(&g, &mut body).unwrap();
        write_dimacs_labels(&g, &mut labels).unwrap();
        let back = parse_dimacs(body.as_slice(), &String::from_utf8(labels).unwrap()).unwrap();
        assert_eq!(back.labels(), g.labels());
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn dimacs_text_shape() {
        let g = build_nkstar(2, 1).unwrap();
        let mut body = Vec::new();
        write_dimacs(&g, &mut body).unwrap();
        assert_eq!(String::from_utf8(body).unwrap(), "p edge 2 1\ne 1 2\n");
        let mut labels = Vec::new();
        write_dimacs_labels(&g, &mut labels).unwrap();
        assert_eq!(
            String::from_utf8(labels).unwrap(),
            "{\"0\":\"1\",\"1\":\"2\"}\n"
        );
    }

    #[test]
    fn certificate_doc_round_trip_and_key_order() {
        let g = build_nkstar(4, 2).unwrap();
        let p = FamilyParams { n: 4, k: 2, h: 2 };
        let x = build_fragment_x(&p).unwrap();
        let (vc, ec) = build_cuts_from_x(&g, &p, &x).unwrap();
        let doc = CertificateDoc::from_core(&vc);
        let json = to_json_line(&doc).unwrap();
        assert_eq!(
            json,
            "{\"family\":\"nkstar\",\"n\":4,\"k\":2,\"h\":2,\"kind\":\"vertex\",\
             \"fragment\":[\"2.1\",\"3.1\",\"4.1\"],\"cut\":[\"1.2\",\"1.3\",\"1.4\"],\"size\":3}\n"
        );
        let parsed: CertificateDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.to_core().unwrap(), vc);

        let edoc = CertificateDoc::from_core(&ec);
        let ejson = to_json_line(&edoc).unwrap();
        assert!(ejson.contains("\"cut\":[[\"1.2\",\"2.1\"],"));
        let eparsed: CertificateDoc = serde_json::from_str(&ejson).unwrap();
        assert_eq!(eparsed.to_core().unwrap(), ec);
    }

    #[test]
    fn split_map_doc_key_order() {
        let k2 = build_nkstar(2, 1).unwrap();
        let (split, map) = split_graph(&k2, 2, MatchingRule::Parallel).unwrap();
        let doc = SplitMapDoc::from_core(&map, &k2, &split);
        let json = to_json_line(&doc).unwrap();
        assert_eq!(
            json,
            "{\"t\":2,\"rule\":\"parallel\",\"blocks\":{\"1\":[\"1.3\",\"1.4\"],\"2\":[\"2.3\",\"2.4\"]}}\n"
        );
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(parse_edgelist("".as_bytes()).is_err());
        assert!(parse_edgelist("no header\n1 2\n".as_bytes()).is_err());
        assert!(parse_edgelist("# family=star n=4 k=4 nv=2 ne=1\n".as_bytes()).is_err());
        assert!(
            parse_edgelist("# family=nkstar n=4 k=2 nv=2 ne=1\n1.2 1.2\n".as_bytes()).is_err()
        );
        assert!(parse_dimacs("e 1 2\n".as_bytes(), "{}").is_err());
        assert!(parse_dimacs("p edge 2 1\ne 0 1\n".as_bytes(), "{\"0\":\"1\",\"1\":\"2\"}").is_err());
    }
}
