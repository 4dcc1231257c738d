//! The `2complex v1` text format.
//!
//! ```text
//! 2complex v1
//! vertex <id>
//! edge <id> <tail> <head>
//! face <id> <±edge>...
//! rotation <edge> <face>:<pos>...
//! certificate ...
//! ```
//!
//! Ids are tokens of ASCII letters, digits, `_` and `.`. A dart is named by
//! its face and its 0-based position in that face. Printing sorts every
//! section by id (decimal ids numerically, before all other ids), so a
//! canonical document survives `print(parse(text))` byte for byte.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rotplan_core::obstruction::{Certificate, MegaFace, ParaChain, ParaCycle, TorusCrossing};
use rotplan_core::planarity::KuratowskiKind;
use rotplan_core::rotation::RotationSystem;
use rotplan_core::{DartId, DartPos, EdgeId, FaceId, TwoComplex, VertexId};
use thiserror::Error;

pub const HEADER: &str = "2complex v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown {kind} `{id}`")]
    Dangling { line: usize, col: usize, kind: &'static str, id: String },
    #[error("{line}:{col}: duplicate {kind} `{id}`")]
    Duplicate { line: usize, col: usize, kind: &'static str, id: String },
    #[error("invalid document: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DartRef {
    pub face: String,
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDoc {
    pub edges: Vec<String>,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MegaFaceDoc {
    pub winding: usize,
    pub faces: Vec<String>,
    pub darts: Vec<DartRef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateDoc {
    NonPlanarLink { vertex: String, kind: KuratowskiKind, corners: Vec<DartRef> },
    ParaPath(ChainDoc),
    TorusCrossing { windings: (usize, usize), cycle: ChainDoc, deleted: Vec<String>, mega: [MegaFaceDoc; 2] },
    ParityCycle(Vec<ChainDoc>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub vertices: Vec<String>,
    /// `(id, tail, head)`.
    pub edges: Vec<(String, String, String)>,
    /// `(id, [(forward, edge)])`.
    pub faces: Vec<(String, Vec<(bool, String)>)>,
    pub rotation: Vec<(String, Vec<DartRef>)>,
    pub certificate: Option<CertificateDoc>,
}

/// Sort order of ids: canonical decimals by value, then everything else.
pub fn id_order(a: &str, b: &str) -> Ordering {
    match (decimal(a), decimal(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

fn decimal(s: &str) -> Option<u32> {
    if s.is_empty() || (s.len() > 1 && s.starts_with('0')) || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn valid_id(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.')
}

// ----- printing -------------------------------------------------------------------------

fn dart_ref(d: &DartRef) -> String {
    format!("{}:{}", d.face, d.pos)
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(" ")
}

fn chain_line(prefix: &str, c: &ChainDoc) -> String {
    format!("certificate {prefix} edges {} vertices {}\n", c.edges.join(" "), c.vertices.join(" "))
}

fn kuratowski_name(k: KuratowskiKind) -> &'static str {
    match k {
        KuratowskiKind::K5 => "K5",
        KuratowskiKind::K33 => "K33",
    }
}

fn words(prefix: &str, items: &[String]) -> String {
    if items.is_empty() {
        format!("{prefix}\n")
    } else {
        format!("{prefix} {}\n", items.join(" "))
    }
}

/// Canonical text of a document.
pub fn print(doc: &Document) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    let mut vertices = doc.vertices.clone();
    vertices.sort_by(|a, b| id_order(a, b));
    for v in &vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    let mut edges = doc.edges.clone();
    edges.sort_by(|a, b| id_order(&a.0, &b.0));
    for (e, t, h) in &edges {
        out.push_str(&format!("edge {e} {t} {h}\n"));
    }
    let mut faces = doc.faces.clone();
    faces.sort_by(|a, b| id_order(&a.0, &b.0));
    for (f, trail) in &faces {
        let darts = join(trail, |(fw, e)| format!("{}{e}", if *fw { '+' } else { '-' }));
        out.push_str(&format!("face {f} {darts}\n"));
    }
    let mut rotation = doc.rotation.clone();
    rotation.sort_by(|a, b| id_order(&a.0, &b.0));
    for (e, darts) in &rotation {
        out.push_str(&words(&format!("rotation {e}"), &darts.iter().map(dart_ref).collect::<Vec<_>>()));
    }
    match &doc.certificate {
        None => {}
        Some(CertificateDoc::NonPlanarLink { vertex, kind, corners }) => {
            out.push_str(&format!("certificate non-planar-link {vertex} {} {}\n", kuratowski_name(*kind), join(corners, dart_ref)));
        }
        Some(CertificateDoc::ParaPath(c)) => out.push_str(&chain_line("para-path", c)),
        Some(CertificateDoc::TorusCrossing { windings, cycle, deleted, mega }) => {
            out.push_str(&format!("certificate torus-crossing {} {}\n", windings.0, windings.1));
            out.push_str(&chain_line("cycle", cycle));
            out.push_str(&words("certificate deleted", deleted));
            for m in mega {
                out.push_str(&format!(
                    "certificate mega-face {} faces {} darts {}\n",
                    m.winding,
                    m.faces.join(" "),
                    join(&m.darts, dart_ref)
                ));
            }
        }
        Some(CertificateDoc::ParityCycle(chains)) => {
            out.push_str("certificate parity-cycle\n");
            for c in chains {
                out.push_str(&chain_line("chain", c));
            }
        }
    }
    out
}

// ----- parsing --------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

impl Tok<'_> {
    fn syntax(&self, msg: impl Into<String>) -> FormatError {
        FormatError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn dangling(&self, kind: &'static str, id: &str) -> FormatError {
        FormatError::Dangling { line: self.line, col: self.col, kind, id: id.to_string() }
    }
}

fn tokens(line: &str, number: usize) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { text: &line[s..i], line: number, col: line[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn id<'a>(t: &Tok<'a>) -> Result<&'a str, FormatError> {
    if valid_id(t.text) {
        Ok(t.text)
    } else {
        Err(t.syntax(format!("`{}` is not a valid id", t.text)))
    }
}

fn number(t: &Tok<'_>) -> Result<usize, FormatError> {
    t.text.parse().map_err(|_| t.syntax(format!("expected a number, found `{}`", t.text)))
}

fn parse_dart(t: &Tok<'_>) -> Result<DartRef, FormatError> {
    let (f, p) = t.text.split_once(':').ok_or_else(|| t.syntax(format!("expected <face>:<pos>, found `{}`", t.text)))?;
    if !valid_id(f) {
        return Err(t.syntax(format!("`{f}` is not a valid face id")));
    }
    let pos = p.parse().map_err(|_| t.syntax(format!("bad dart position `{p}`")))?;
    Ok(DartRef { face: f.to_string(), pos })
}

/// Splits `edges <e>... vertices <v>...`.
fn parse_chain<'a>(at: &Tok<'a>, rest: &[Tok<'a>]) -> Result<(ChainDoc, Vec<Tok<'a>>, Vec<Tok<'a>>), FormatError> {
    if rest.first().map(|t| t.text) != Some("edges") {
        return Err(rest.first().unwrap_or(at).syntax("expected `edges`"));
    }
    let split = rest.iter().position(|t| t.text == "vertices").ok_or_else(|| at.syntax("expected `vertices`"))?;
    let e: Vec<Tok> = rest[1..split].to_vec();
    let v: Vec<Tok> = rest[split + 1..].to_vec();
    if e.is_empty() || v.is_empty() {
        return Err(at.syntax("empty chain"));
    }
    let edges = e.iter().map(|t| id(t).map(str::to_string)).collect::<Result<_, _>>()?;
    let vertices = v.iter().map(|t| id(t).map(str::to_string)).collect::<Result<_, _>>()?;
    Ok((ChainDoc { edges, vertices }, e, v))
}

/// Ids referenced by a line, checked once every declaration is known.
#[derive(Default)]
struct Refs<'a> {
    vertices: Vec<Tok<'a>>,
    edges: Vec<Tok<'a>>,
    faces: Vec<Tok<'a>>,
    /// `(token, edge the dart must lie on)`.
    darts: Vec<(Tok<'a>, Option<&'a str>)>,
}

fn declare<'a>(seen: &mut BTreeSet<&'a str>, t: &Tok<'a>, kind: &'static str) -> Result<&'a str, FormatError> {
    let s = id(t)?;
    if !seen.insert(s) {
        return Err(FormatError::Duplicate { line: t.line, col: t.col, kind, id: s.to_string() });
    }
    Ok(s)
}

#[derive(Default)]
struct CertBuilder {
    head: Option<(usize, usize)>,
    kind: Option<String>,
    cycle: Option<ChainDoc>,
    deleted: Option<Vec<String>>,
    mega: Vec<MegaFaceDoc>,
    chains: Vec<ChainDoc>,
    done: Option<CertificateDoc>,
}

/// Parses a document, checking syntax and that every reference is declared.
pub fn parse(text: &str) -> Result<Document, FormatError> {
    let mut doc = Document::default();
    let mut refs = Refs::default();
    let (mut vs, mut es, mut fs, mut rs) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    let mut cert = CertBuilder::default();
    let mut header = false;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line, number);
        let Some(first) = toks.first() else { continue };
        if !header {
            if line.trim() != HEADER {
                return Err(first.syntax(format!("expected header `{HEADER}`")));
            }
            header = true;
            continue;
        }
        let args = &toks[1..];
        let arity = |n: usize| -> Result<(), FormatError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(first.syntax(format!("`{}` takes {n} argument(s)", first.text)))
            }
        };
        match first.text {
            "vertex" => {
                arity(1)?;
                doc.vertices.push(declare(&mut vs, &args[0], "vertex")?.to_string());
            }
            "edge" => {
                arity(3)?;
                let e = declare(&mut es, &args[0], "edge")?;
                let (t, h) = (id(&args[1])?, id(&args[2])?);
                refs.vertices.extend([args[1], args[2]]);
                doc.edges.push((e.to_string(), t.to_string(), h.to_string()));
            }
            "face" => {
                if args.len() < 2 {
                    return Err(first.syntax("a face needs at least one dart"));
                }
                let f = declare(&mut fs, &args[0], "face")?;
                let mut trail = Vec::new();
                for t in &args[1..] {
                    let (fw, rest) = match t.text.as_bytes().first() {
                        Some(b'+') => (true, &t.text[1..]),
                        Some(b'-') => (false, &t.text[1..]),
                        _ => return Err(t.syntax(format!("expected a signed edge, found `{}`", t.text))),
                    };
                    if !valid_id(rest) {
                        return Err(t.syntax(format!("`{rest}` is not a valid edge id")));
                    }
                    refs.edges.push(Tok { text: rest, line: t.line, col: t.col + 1 });
                    trail.push((fw, rest.to_string()));
                }
                doc.faces.push((f.to_string(), trail));
            }
            "rotation" => {
                if args.is_empty() {
                    return Err(first.syntax("a rotation line names its edge"));
                }
                let e = declare(&mut rs, &args[0], "rotation for edge")?;
                refs.edges.push(args[0]);
                let mut darts = Vec::new();
                for t in &args[1..] {
                    darts.push(parse_dart(t)?);
                    refs.darts.push((*t, Some(e)));
                }
                doc.rotation.push((e.to_string(), darts));
            }
            "certificate" => parse_certificate_line(first, args, &mut cert, &mut refs)?,
            other => return Err(first.syntax(format!("unknown keyword `{other}`"))),
        }
    }
    if !header {
        return Err(FormatError::Syntax { line: 1, col: 1, msg: format!("expected header `{HEADER}`") });
    }
    doc.certificate = finish_certificate(cert)?;
    check_refs(&doc, &refs, &vs, &es, &fs)?;
    Ok(doc)
}

fn parse_certificate_line<'a>(first: &Tok<'a>, args: &[Tok<'a>], cert: &mut CertBuilder, refs: &mut Refs<'a>) -> Result<(), FormatError> {
    let Some(kind) = args.first() else { return Err(first.syntax("certificate line without a kind")) };
    let rest = &args[1..];
    let starts = matches!(kind.text, "non-planar-link" | "para-path" | "torus-crossing" | "parity-cycle");
    if starts {
        if cert.head.is_some() {
            return Err(kind.syntax("a document carries at most one certificate"));
        }
        cert.head = Some((kind.line, kind.col));
        cert.kind = Some(kind.text.to_string());
    } else if cert.head.is_none() {
        return Err(kind.syntax(format!("`{}` before the certificate kind", kind.text)));
    }
    let in_kind = |k: &str| cert.kind.as_deref() == Some(k);
    match kind.text {
        "non-planar-link" => {
            if rest.len() < 3 {
                return Err(kind.syntax("non-planar-link needs a vertex, a kind and corners"));
            }
            let vertex = id(&rest[0])?.to_string();
            refs.vertices.push(rest[0]);
            let k = match rest[1].text {
                "K5" => KuratowskiKind::K5,
                "K33" => KuratowskiKind::K33,
                other => return Err(rest[1].syntax(format!("expected K5 or K33, found `{other}`"))),
            };
            let corners = rest[2..].iter().map(parse_dart).collect::<Result<_, _>>()?;
            refs.darts.extend(rest[2..].iter().map(|t| (*t, None)));
            cert.done = Some(CertificateDoc::NonPlanarLink { vertex, kind: k, corners });
        }
        "para-path" => {
            let (c, e, v) = parse_chain(kind, rest)?;
            refs.edges.extend(e);
            refs.vertices.extend(v);
            cert.done = Some(CertificateDoc::ParaPath(c));
        }
        "torus-crossing" => {
            if rest.len() != 2 {
                return Err(kind.syntax("torus-crossing takes two windings"));
            }
            cert.mega.clear();
            let w = (number(&rest[0])?, number(&rest[1])?);
            cert.done = Some(CertificateDoc::TorusCrossing {
                windings: w,
                cycle: ChainDoc { edges: Vec::new(), vertices: Vec::new() },
                deleted: Vec::new(),
                mega: [empty_mega(), empty_mega()],
            });
        }
        "cycle" if in_kind("torus-crossing") && cert.cycle.is_none() => {
            let (c, e, v) = parse_chain(kind, rest)?;
            refs.edges.extend(e);
            refs.vertices.extend(v);
            cert.cycle = Some(c);
        }
        "deleted" if in_kind("torus-crossing") && cert.deleted.is_none() => {
            cert.deleted = Some(rest.iter().map(|t| id(t).map(str::to_string)).collect::<Result<_, _>>()?);
            refs.faces.extend(rest.iter().copied());
        }
        "mega-face" if in_kind("torus-crossing") && cert.mega.len() < 2 => {
            let winding = number(rest.first().ok_or_else(|| kind.syntax("mega-face needs a winding"))?)?;
            if rest.get(1).map(|t| t.text) != Some("faces") {
                return Err(rest.get(1).unwrap_or(kind).syntax("expected `faces`"));
            }
            let split = rest.iter().position(|t| t.text == "darts").ok_or_else(|| kind.syntax("expected `darts`"))?;
            let faces = rest[2..split].iter().map(|t| id(t).map(str::to_string)).collect::<Result<_, _>>()?;
            refs.faces.extend(rest[2..split].iter().copied());
            let darts = rest[split + 1..].iter().map(parse_dart).collect::<Result<_, _>>()?;
            refs.darts.extend(rest[split + 1..].iter().map(|t| (*t, None)));
            cert.mega.push(MegaFaceDoc { winding, faces, darts });
        }
        "parity-cycle" => {
            if !rest.is_empty() {
                return Err(rest[0].syntax("parity-cycle takes no arguments"));
            }
            cert.done = Some(CertificateDoc::ParityCycle(Vec::new()));
        }
        "chain" if in_kind("parity-cycle") => {
            let (c, e, v) = parse_chain(kind, rest)?;
            refs.edges.extend(e);
            refs.vertices.extend(v);
            cert.chains.push(c);
        }
        other => return Err(kind.syntax(format!("unexpected certificate line `{other}`"))),
    }
    Ok(())
}

fn empty_mega() -> MegaFaceDoc {
    MegaFaceDoc { winding: 0, faces: Vec::new(), darts: Vec::new() }
}

fn finish_certificate(cert: CertBuilder) -> Result<Option<CertificateDoc>, FormatError> {
    let Some((line, col)) = cert.head else { return Ok(None) };
    let incomplete = |what: &str| FormatError::Syntax { line, col, msg: format!("certificate is missing {what}") };
    Ok(Some(match cert.done.ok_or_else(|| incomplete("its kind"))? {
        CertificateDoc::TorusCrossing { windings, .. } => {
            let cycle = cert.cycle.ok_or_else(|| incomplete("the cycle"))?;
            let deleted = cert.deleted.ok_or_else(|| incomplete("the deleted faces"))?;
            let [a, b]: [MegaFaceDoc; 2] = cert.mega.try_into().map_err(|_| incomplete("two mega faces"))?;
            CertificateDoc::TorusCrossing { windings, cycle, deleted, mega: [a, b] }
        }
        CertificateDoc::ParityCycle(_) => {
            if cert.chains.is_empty() {
                return Err(incomplete("its chains"));
            }
            CertificateDoc::ParityCycle(cert.chains)
        }
        other => other,
    }))
}

fn check_refs(doc: &Document, refs: &Refs<'_>, vs: &BTreeSet<&str>, es: &BTreeSet<&str>, fs: &BTreeSet<&str>) -> Result<(), FormatError> {
    for t in &refs.vertices {
        if !vs.contains(t.text) {
            return Err(t.dangling("vertex", t.text));
        }
    }
    for t in &refs.edges {
        if !es.contains(t.text) {
            return Err(t.dangling("edge", t.text));
        }
    }
    for t in &refs.faces {
        if !fs.contains(t.text) {
            return Err(t.dangling("face", t.text));
        }
    }
    let faces: BTreeMap<&str, &Vec<(bool, String)>> = doc.faces.iter().map(|(f, t)| (f.as_str(), t)).collect();
    for (t, on) in &refs.darts {
        let d = parse_dart(t)?;
        let trail = faces.get(d.face.as_str()).ok_or_else(|| t.dangling("face", &d.face))?;
        let (_, edge) = trail.get(d.pos).ok_or_else(|| t.dangling("dart", t.text))?;
        if let Some(e) = on {
            if edge != e {
                return Err(t.syntax(format!("dart {} lies on edge {edge}, not {e}", t.text)));
            }
        }
    }
    Ok(())
}

// ----- conversion -----------------------------------------------------------------------

/// Document ids of the cells of a complex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Names {
    pub vertices: BTreeMap<VertexId, String>,
    pub edges: BTreeMap<EdgeId, String>,
    pub faces: BTreeMap<FaceId, String>,
}

impl Names {
    pub fn vertex(&self, v: VertexId) -> String {
        self.vertices.get(&v).cloned().unwrap_or_else(|| v.0.to_string())
    }

    pub fn edge(&self, e: EdgeId) -> String {
        self.edges.get(&e).cloned().unwrap_or_else(|| e.0.to_string())
    }

    pub fn face(&self, f: FaceId) -> String {
        self.faces.get(&f).cloned().unwrap_or_else(|| f.0.to_string())
    }
}

/// Numeric ids: canonical decimals keep their value, the rest follow in
/// sorted order after the largest decimal.
fn assign<T: Copy + Ord + From<u32>>(tokens: &[&str]) -> (BTreeMap<String, T>, BTreeMap<T, String>) {
    let mut sorted: Vec<&str> = tokens.to_vec();
    sorted.sort_by(|a, b| id_order(a, b));
    let mut next = sorted.iter().filter_map(|t| decimal(t)).max().map_or(0, |m| m + 1);
    let mut fwd = BTreeMap::new();
    let mut back = BTreeMap::new();
    for t in sorted {
        let n = decimal(t).unwrap_or_else(|| {
            next += 1;
            next - 1
        });
        fwd.insert(t.to_string(), T::from(n));
        back.insert(T::from(n), t.to_string());
    }
    (fwd, back)
}

/// A document turned into core values.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub complex: TwoComplex,
    pub rotation: Option<RotationSystem>,
    pub certificate: Option<Certificate>,
    pub names: Names,
}

impl Document {
    pub fn load(&self) -> Result<Loaded, FormatError> {
        let (vid, vname) = assign::<VertexId>(&self.vertices.iter().map(String::as_str).collect::<Vec<_>>());
        let (eid, ename) = assign::<EdgeId>(&self.edges.iter().map(|e| e.0.as_str()).collect::<Vec<_>>());
        let (fid, fname) = assign::<FaceId>(&self.faces.iter().map(|f| f.0.as_str()).collect::<Vec<_>>());
        let mut c = TwoComplex::new();
        for v in vid.values() {
            c.insert_vertex(*v);
        }
        let mut sorted_edges = self.edges.clone();
        sorted_edges.sort_by(|a, b| id_order(&a.0, &b.0));
        for (e, t, h) in &sorted_edges {
            c.insert_edge(eid[e], vid[t], vid[h]);
        }
        let mut sorted_faces = self.faces.clone();
        sorted_faces.sort_by(|a, b| id_order(&a.0, &b.0));
        for (f, trail) in &sorted_faces {
            let t: Vec<(EdgeId, bool)> = trail.iter().map(|(fw, e)| (eid[e], *fw)).collect();
            c.insert_face(fid[f], &t);
        }
        let report = c.validate();
        if !report.is_valid() {
            return Err(FormatError::Invalid(format!("{:?}", report.violations)));
        }
        let names = Names { vertices: vname, edges: ename, faces: fname };
        let dart = |d: &DartRef| -> DartId { c.face(fid[&d.face]).expect("face declared")[d.pos].id };
        let rotation = if self.rotation.is_empty() {
            None
        } else {
            let rotators = self.rotation.iter().map(|(e, ds)| (eid[e], ds.iter().map(dart).collect())).collect();
            let rs = RotationSystem { rotators };
            rs.check_against(&c).map_err(|e| FormatError::Invalid(e.to_string()))?;
            Some(rs)
        };
        let chain = |d: &ChainDoc| ParaChain { edges: d.edges.iter().map(|e| eid[e]).collect(), vertices: d.vertices.iter().map(|v| vid[v]).collect() };
        let certificate = self.certificate.as_ref().map(|cd| match cd {
            CertificateDoc::NonPlanarLink { vertex, kind, corners } => Certificate::NonPlanarLink {
                vertex: vid[vertex],
                kind: *kind,
                corners: corners.iter().map(|d| DartPos { face: fid[&d.face], pos: d.pos }).collect(),
            },
            CertificateDoc::ParaPath(p) => Certificate::NonLoopPlanarParaPath { path: chain(p) },
            CertificateDoc::TorusCrossing { windings, cycle, deleted, mega } => {
                let m = |x: &MegaFaceDoc| MegaFace { faces: x.faces.iter().map(|f| fid[f]).collect(), darts: x.darts.iter().map(dart).collect(), winding: x.winding };
                let ch = chain(cycle);
                Certificate::TorusCrossing(TorusCrossing {
                    cycle: ParaCycle { edges: ch.edges, vertices: ch.vertices },
                    mega_faces: [m(&mega[0]), m(&mega[1])],
                    windings: *windings,
                    deleted_faces: deleted.iter().map(|f| fid[f]).collect(),
                })
            }
            CertificateDoc::ParityCycle(chains) => Certificate::ParityCycle { chains: chains.iter().map(chain).collect() },
        });
        Ok(Loaded { complex: c, rotation, certificate, names })
    }

    /// Document of a complex with optional rotation and certificate.
    pub fn from_complex(c: &TwoComplex, names: &Names, rotation: Option<&RotationSystem>, certificate: Option<&Certificate>) -> Document {
        let mut where_is: BTreeMap<DartId, DartRef> = BTreeMap::new();
        let faces = c
            .faces()
            .map(|(f, ds)| {
                for (pos, d) in ds.iter().enumerate() {
                    where_is.insert(d.id, DartRef { face: names.face(f), pos });
                }
                (names.face(f), ds.iter().map(|d| (d.forward, names.edge(d.edge))).collect())
            })
            .collect();
        let dref = |d: &DartId| where_is.get(d).cloned().unwrap_or(DartRef { face: "?".into(), pos: 0 });
        let rotation = rotation.map_or_else(Vec::new, |rs| rs.rotators.iter().map(|(e, ds)| (names.edge(*e), ds.iter().map(dref).collect())).collect());
        let chain = |edges: &[EdgeId], vertices: &[VertexId]| ChainDoc {
            edges: edges.iter().map(|e| names.edge(*e)).collect(),
            vertices: vertices.iter().map(|v| names.vertex(*v)).collect(),
        };
        let certificate = certificate.map(|cert| match cert {
            Certificate::NonPlanarLink { vertex, kind, corners } => CertificateDoc::NonPlanarLink {
                vertex: names.vertex(*vertex),
                kind: *kind,
                corners: corners.iter().map(|p| DartRef { face: names.face(p.face), pos: p.pos }).collect(),
            },
            Certificate::NonLoopPlanarParaPath { path } => CertificateDoc::ParaPath(chain(&path.edges, &path.vertices)),
            Certificate::TorusCrossing(t) => {
                let m = |x: &MegaFace| MegaFaceDoc { winding: x.winding, faces: x.faces.iter().map(|f| names.face(*f)).collect(), darts: x.darts.iter().map(dref).collect() };
                CertificateDoc::TorusCrossing {
                    windings: t.windings,
                    cycle: chain(&t.cycle.edges, &t.cycle.vertices),
                    deleted: t.deleted_faces.iter().map(|f| names.face(*f)).collect(),
                    mega: [m(&t.mega_faces[0]), m(&t.mega_faces[1])],
                }
            }
            Certificate::ParityCycle { chains } => CertificateDoc::ParityCycle(chains.iter().map(|p| chain(&p.edges, &p.vertices)).collect()),
        });
        Document {
            vertices: c.vertices().map(|v| names.vertex(v)).collect(),
            edges: c.edges().map(|(e, x)| (names.edge(e), names.vertex(x.tail), names.vertex(x.head))).collect(),
            faces,
            rotation,
            certificate,
        }
    }
}

/// Parses and loads in one go.
pub fn read(text: &str) -> Result<Loaded, FormatError> {
    parse(text)?.load()
}

/// Canonical text of a complex with decimal ids.
pub fn write_complex(c: &TwoComplex) -> String {
    print(&Document::from_complex(c, &Names::default(), None, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rotplan_core::generators;

    const TETRA: &str = "2complex v1\nvertex 0\nvertex 1\nvertex 2\nvertex 3\nedge 0 0 1\nedge 1 1 2\nedge 2 0 2\nedge 3 1 3\nedge 4 0 3\nedge 5 2 3\nface 0 +0 +1 -2\nface 1 +0 +3 -4\nface 2 +2 +5 -4\nface 3 +1 +5 -3\n";

    #[test]
    fn generated_tetrahedron_prints_canonically() {
        assert_eq!(write_complex(&generators::tetrahedron()), TETRA);
        assert_eq!(print(&parse(TETRA).unwrap()), TETRA);
    }

    #[test]
    fn comments_and_order_do_not_matter() {
        let shuffled = "# a comment\n2complex v1\nface 0 +0 +1 -2 # trailing\nedge 2 0 2\nedge 0 0 1\nedge 1 1 2\n\nvertex 2\nvertex 0\nvertex 1\n";
        let doc = parse(shuffled).unwrap();
        assert_eq!(print(&doc), "2complex v1\nvertex 0\nvertex 1\nvertex 2\nedge 0 0 1\nedge 1 1 2\nedge 2 0 2\nface 0 +0 +1 -2\n");
    }

    #[test]
    fn dangling_edge_reports_its_location() {
        let text = "2complex v1\nvertex a\nvertex b\nedge x a b\nface f +x -y\n";
        assert_eq!(parse(text).unwrap_err(), FormatError::Dangling { line: 5, col: 12, kind: "edge", id: "y".into() });
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        assert!(matches!(parse("2complex v2\n"), Err(FormatError::Syntax { line: 1, col: 1, .. })));
        let e = parse("2complex v1\nvertex 0\nedge 0 0\n").unwrap_err();
        assert_eq!(e, FormatError::Syntax { line: 3, col: 1, msg: "`edge` takes 3 argument(s)".into() });
        let e = parse("2complex v1\nvertex 0\nvertex 0\n").unwrap_err();
        assert!(matches!(e, FormatError::Duplicate { line: 3, col: 8, .. }));
        let e = parse("2complex v1\nvertex 0\nedge 0 0 0\nface 0 0\n").unwrap_err();
        assert!(matches!(e, FormatError::Syntax { line: 4, col: 8, .. }));
    }

    #[test]
    fn open_trail_is_invalid() {
        let text = "2complex v1\nvertex 0\nvertex 1\nvertex 2\nedge 0 0 1\nedge 1 1 2\nface 0 +0 +1\n";
        assert!(matches!(read(text), Err(FormatError::Invalid(_))));
    }

    #[test]
    fn named_ids_survive_loading() {
        let text = "2complex v1\nvertex 7\nvertex a\nvertex b\nedge e1 7 a\nedge e2 a b\nedge e3 7 b\nface t +e1 +e2 -e3\n";
        let l = read(text).unwrap();
        assert_eq!(l.complex.vertex_count(), 3);
        let doc = Document::from_complex(&l.complex, &l.names, None, None);
        assert_eq!(print(&doc), text);
    }

    #[test]
    fn rotation_darts_must_lie_on_their_edge() {
        let text = format!("{TETRA}rotation 0 0:1 1:0\n");
        assert!(matches!(parse(&text), Err(FormatError::Syntax { line: 16, col: 12, .. })));
        let text = format!("{TETRA}rotation 0 0:0\n");
        assert!(matches!(read(&text), Err(FormatError::Invalid(_))));
        let c = generators::tetrahedron();
        let rs = RotationSystem::default_for(&c);
        let text = print(&Document::from_complex(&c, &Names::default(), Some(&rs), None));
        assert!(text.contains("rotation 0 0:0 1:0\n"));
        assert_eq!(read(&text).unwrap().rotation, Some(rs));
    }
}
