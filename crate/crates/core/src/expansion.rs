//! Expansion certificates: ordered horn attachments witnessing that a
//! subcomplex inclusion is an (inner) expansion, an independent replay
//! verifier, the certificate generators for the boundary, inner-horn,
//! full-horn and prism inclusions, certificate lifting through the
//! thickening coend, and a generic search used as an oracle.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sset::{
    standard_complex, CellRef, FinSSet, StandardKind, SubcomplexMask,
};
use crate::thick::{
    materialize, prism_chain_test, thick_membership, Materialized, ThickRegion, ThickSimplex,
};

/// One elementary step: attach a simplex along the free face index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Attachment {
    pub cell: CellRef,
    pub free_face: usize,
}

impl Attachment {
    pub fn is_inner(&self) -> bool {
        0 < self.free_face && self.free_face < self.cell.dim
    }
}

/// Ambient complex of a certificate, as a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientDesc {
    Thick(ThickRegion),
    Standard(StandardKind, usize),
}

/// Source subcomplex of a certificate, as a descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceDesc {
    Thick(ThickRegion),
    /// The product of two standard simplices inside the standard simplex
    /// on the lexicographically ordered vertex pairs.
    Product { m: usize, n: usize },
    /// The thickened prism inside the thick simplex on the vertex pairs.
    Prism { m: usize, n: usize },
    /// A single vertex.
    Vertex(usize),
    /// Explicit nondegenerate cells by name (must be face-closed).
    Cells(Vec<String>),
}

impl AmbientDesc {
    pub fn render(&self) -> String {
        match self {
            AmbientDesc::Thick(r) => match r {
                ThickRegion::Full(n) => format!("thick:{n}"),
                ThickRegion::Boundary(n) => format!("thick-boundary:{n}"),
                ThickRegion::Horn(n, i) => format!("thick-horn:{n}:{i}"),
                ThickRegion::HornUnionSimplex(n, i) => {
                    format!("thick-horn-union-simplex:{n}:{i}")
                }
                ThickRegion::BoundaryUnionSimplex(n) => {
                    format!("thick-boundary-union-simplex:{n}")
                }
            },
            AmbientDesc::Standard(kind, n) => match kind {
                StandardKind::Simplex => format!("standard:{n}"),
                StandardKind::Boundary => format!("standard-boundary:{n}"),
                StandardKind::Horn(i) => format!("standard-horn:{n}:{i}"),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Error::Malformed(format!("bad ambient descriptor {text}"));
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["thick", n] => Ok(AmbientDesc::Thick(ThickRegion::Full(num(n)?))),
            ["thick-boundary", n] => Ok(AmbientDesc::Thick(ThickRegion::Boundary(num(n)?))),
            ["thick-horn", n, i] => Ok(AmbientDesc::Thick(ThickRegion::Horn(num(n)?, num(i)?))),
            ["thick-horn-union-simplex", n, i] => Ok(AmbientDesc::Thick(
                ThickRegion::HornUnionSimplex(num(n)?, num(i)?),
            )),
            ["thick-boundary-union-simplex", n] => Ok(AmbientDesc::Thick(
                ThickRegion::BoundaryUnionSimplex(num(n)?),
            )),
            ["standard", n] => Ok(AmbientDesc::Standard(StandardKind::Simplex, num(n)?)),
            ["standard-boundary", n] => Ok(AmbientDesc::Standard(StandardKind::Boundary, num(n)?)),
            ["standard-horn", n, i] => {
                Ok(AmbientDesc::Standard(StandardKind::Horn(num(i)?), num(n)?))
            }
            _ => Err(bad()),
        }
    }
}

impl SourceDesc {
    pub fn render(&self) -> String {
        match self {
            SourceDesc::Thick(r) => match r {
                ThickRegion::Full(n) => format!("full:{n}"),
                ThickRegion::Boundary(n) => format!("boundary:{n}"),
                ThickRegion::Horn(n, i) => format!("horn:{n}:{i}"),
                ThickRegion::HornUnionSimplex(n, i) => format!("horn-union-simplex:{n}:{i}"),
                ThickRegion::BoundaryUnionSimplex(n) => format!("boundary-union-simplex:{n}"),
            },
            SourceDesc::Product { m, n } => format!("product:{m}:{n}"),
            SourceDesc::Prism { m, n } => format!("prism:{m}:{n}"),
            SourceDesc::Vertex(v) => format!("vertex:{v}"),
            SourceDesc::Cells(names) => format!("cells:{}", names.join(",")),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("bad source descriptor {text}"));
        if let Some(rest) = text.strip_prefix("cells:") {
            return Ok(SourceDesc::Cells(
                rest.split(',').map(|s| s.to_string()).collect(),
            ));
        }
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["full", n] => Ok(SourceDesc::Thick(ThickRegion::Full(num(n)?))),
            ["boundary", n] => Ok(SourceDesc::Thick(ThickRegion::Boundary(num(n)?))),
            ["horn", n, i] => Ok(SourceDesc::Thick(ThickRegion::Horn(num(n)?, num(i)?))),
            ["horn-union-simplex", n, i] => Ok(SourceDesc::Thick(ThickRegion::HornUnionSimplex(
                num(n)?,
                num(i)?,
            ))),
            ["boundary-union-simplex", n] => Ok(SourceDesc::Thick(
                ThickRegion::BoundaryUnionSimplex(num(n)?),
            )),
            ["product", m, n] => Ok(SourceDesc::Product {
                m: num(m)?,
                n: num(n)?,
            }),
            ["prism", m, n] => Ok(SourceDesc::Prism {
                m: num(m)?,
                n: num(n)?,
            }),
            ["vertex", v] => Ok(SourceDesc::Vertex(num(v)?)),
            _ => Err(bad()),
        }
    }
}

/// An ordered list of attachments claiming an (inner) expansion from the
/// source to the ambient complex, up to the truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionCertificate {
    pub ambient: AmbientDesc,
    pub source: SourceDesc,
    pub truncation: usize,
    pub inner: bool,
    pub attachments: Vec<SeqAttachment>,
}

/// A serializable attachment: the simplex as a vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqAttachment {
    pub simplex: Vec<usize>,
    pub free_face: usize,
}

/// A resolved certificate environment: the materialized ambient complex,
/// the source mask, and sequence lookups for attachments.
pub struct CertificateArena {
    pub ambient: AmbientDesc,
    pub source_desc: SourceDesc,
    pub truncation: usize,
    pub complex: Arc<FinSSet>,
    pub source: SubcomplexMask,
    thick: Option<Materialized>,
}

impl CertificateArena {
    pub fn cell_of_seq(&self, seq: &[usize]) -> Option<CellRef> {
        match &self.thick {
            Some(mat) => mat.cell_of_seq(seq),
            None => {
                if !seq.windows(2).all(|w| w[0] < w[1]) {
                    return None;
                }
                self.complex
                    .cell_by_name(&crate::sset::vertex_tuple_name(seq))
            }
        }
    }

    pub fn seq_of_cell(&self, cell: CellRef) -> Vec<usize> {
        match &self.thick {
            Some(mat) => mat.seq_of_cell(cell).to_vec(),
            None => self
                .complex
                .cell_name(cell)
                .split('-')
                .map(|p| p.parse().expect("standard cells are vertex tuples"))
                .collect(),
        }
    }

    pub fn encode(&self, attachments: &[Attachment]) -> Vec<SeqAttachment> {
        attachments
            .iter()
            .map(|a| SeqAttachment {
                simplex: self.seq_of_cell(a.cell),
                free_face: a.free_face,
            })
            .collect()
    }
}

/// Materialize the ambient and source of a certificate.
pub fn resolve_arena(
    ambient: &AmbientDesc,
    source: &SourceDesc,
    truncation: usize,
) -> Result<CertificateArena> {
    let (complex, thick) = match ambient {
        AmbientDesc::Thick(region) => {
            let mat = materialize(*region, truncation)?;
            (mat.complex.clone(), Some(mat))
        }
        AmbientDesc::Standard(kind, n) => {
            let complex = Arc::new(standard_complex(*kind, *n, truncation)?);
            (complex, None)
        }
    };
    let arena_seq = |cell: CellRef, thick: &Option<Materialized>| -> Vec<usize> {
        match thick {
            Some(mat) => mat.seq_of_cell(cell).to_vec(),
            None => complex
                .cell_name(cell)
                .split('-')
                .map(|p| p.parse().expect("vertex tuple name"))
                .collect(),
        }
    };
    let mask = match source {
        SourceDesc::Thick(region) => {
            region.validate()?;
            let ambient_n = match ambient {
                AmbientDesc::Thick(r) => r.ambient_n(),
                AmbientDesc::Standard(_, n) => *n,
            };
            if region.ambient_n() != ambient_n {
                return Err(Error::DimensionMismatch {
                    expected: ambient_n,
                    found: region.ambient_n(),
                });
            }
            SubcomplexMask::from_predicate(&complex, |cell| {
                let s = ThickSimplex {
                    ambient_n,
                    seq: arena_seq(cell, &thick),
                };
                thick_membership(&s, region).unwrap_or(false)
            })
        }
        SourceDesc::Product { m, n } => {
            let expected = (m + 1) * (n + 1) - 1;
            if !matches!(ambient, AmbientDesc::Standard(StandardKind::Simplex, nn) if *nn == expected)
            {
                return Err(Error::Malformed(
                    "product source requires the standard simplex on the vertex pairs".into(),
                ));
            }
            let n = *n;
            SubcomplexMask::from_predicate(&complex, |cell| {
                prism_chain_test(&arena_seq(cell, &thick), n)
            })
        }
        SourceDesc::Prism { m, n } => {
            let expected = (m + 1) * (n + 1) - 1;
            if !matches!(ambient, AmbientDesc::Thick(ThickRegion::Full(nn)) if *nn == expected) {
                return Err(Error::Malformed(
                    "prism source requires the thick simplex on the vertex pairs".into(),
                ));
            }
            let n = *n;
            SubcomplexMask::from_predicate(&complex, |cell| {
                prism_chain_test(&arena_seq(cell, &thick), n)
            })
        }
        SourceDesc::Vertex(v) => {
            let name = v.to_string();
            SubcomplexMask::from_predicate(&complex, |cell| {
                cell.dim == 0 && complex.cell_name(cell) == name
            })
        }
        SourceDesc::Cells(names) => {
            let mut mask = SubcomplexMask::empty(&complex);
            for name in names {
                let cell = complex
                    .cell_by_name(name)
                    .ok_or_else(|| Error::Malformed(format!("unknown cell {name}")))?;
                mask.insert(cell);
            }
            mask
        }
    };
    mask.validate_closed(&complex)?;
    Ok(CertificateArena {
        ambient: *ambient,
        source_desc: source.clone(),
        truncation,
        complex,
        source: mask,
        thick,
    })
}

/// Why one attachment step failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepFailure {
    /// The named simplex is not a nondegenerate cell of the ambient.
    UnknownSimplex,
    /// The simplex or its free face is already present.
    Duplicate { what: String },
    /// The designated free face is a degeneracy.
    FreeFaceDegenerate,
    /// Another face is neither present nor a degeneracy of a present cell.
    AbsentFace { index: usize, face: String },
    /// An inner certificate contains an outer attachment.
    InnerViolation,
}

impl StepFailure {
    pub fn code(&self) -> &'static str {
        match self {
            StepFailure::UnknownSimplex => "UNKNOWN_SIMPLEX",
            StepFailure::Duplicate { .. } => "DUPLICATE",
            StepFailure::FreeFaceDegenerate => "FREE_FACE_DEGENERATE",
            StepFailure::AbsentFace { .. } => "ABSENT_FACE",
            StepFailure::InnerViolation => "INNER_VIOLATION",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Ok,
    Failed(StepFailure),
}

/// Replay state: the growing subcomplex.
pub struct Replay<'a> {
    complex: &'a FinSSet,
    coverage_below: usize,
    pub present: SubcomplexMask,
}

impl<'a> Replay<'a> {
    pub fn new(arena: &'a CertificateArena) -> Self {
        Replay {
            complex: &arena.complex,
            coverage_below: arena.truncation,
            present: arena.source.clone(),
        }
    }

    /// Replay over a bare complex and source mask; coverage is checked
    /// below `truncation`.
    pub fn over(complex: &'a FinSSet, source: &SubcomplexMask, truncation: usize) -> Self {
        Replay {
            complex,
            coverage_below: truncation,
            present: source.clone(),
        }
    }

    /// Attempt one attachment; on success both the simplex and its free
    /// face are added.
    pub fn step(&mut self, attachment: &Attachment, require_inner: bool) -> StepOutcome {
        let complex = self.complex;
        let cell = attachment.cell;
        if !complex.contains(cell) || cell.dim == 0 {
            return StepOutcome::Failed(StepFailure::UnknownSimplex);
        }
        if self.present.contains(cell) {
            return StepOutcome::Failed(StepFailure::Duplicate {
                what: complex.cell_name(cell).to_string(),
            });
        }
        if attachment.free_face > cell.dim {
            return StepOutcome::Failed(StepFailure::UnknownSimplex);
        }
        if require_inner && !attachment.is_inner() {
            return StepOutcome::Failed(StepFailure::InnerViolation);
        }
        let table = complex.face_table(cell);
        let free = &table[attachment.free_face];
        if !free.is_nondegenerate() {
            return StepOutcome::Failed(StepFailure::FreeFaceDegenerate);
        }
        if self.present.contains(free.cell) {
            return StepOutcome::Failed(StepFailure::Duplicate {
                what: complex.cell_name(free.cell).to_string(),
            });
        }
        for (j, face) in table.iter().enumerate() {
            if j == attachment.free_face {
                continue;
            }
            if !self.present.contains(face.cell) {
                return StepOutcome::Failed(StepFailure::AbsentFace {
                    index: j,
                    face: complex.display_simplex(face),
                });
            }
        }
        self.present.insert(free.cell);
        self.present.insert(cell);
        StepOutcome::Ok
    }

    /// Nondegenerate cells of dimension below the truncation that are
    /// still missing.
    pub fn coverage_gaps(&self) -> Vec<CellRef> {
        let d = self.coverage_below;
        self.complex
            .all_cells()
            .filter(|c| c.dim + 1 <= d && !self.present.contains(*c))
            .collect()
    }
}

/// Full verification result, one outcome per attachment plus the final
/// truncated-coverage check.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub steps: Vec<StepOutcome>,
    pub inner_claimed: bool,
    pub coverage_missing: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = (usize, &StepFailure)> {
        self.steps.iter().enumerate().filter_map(|(i, s)| match s {
            StepOutcome::Ok => None,
            StepOutcome::Failed(f) => Some((i, f)),
        })
    }

    pub fn render(&self, header: &str) -> String {
        let mut out = String::new();
        out.push_str(header);
        out.push('\n');
        out.push_str(&format!("attachments: {}\n", self.steps.len()));
        out.push_str(&format!("inner: {}\n", self.inner_claimed));
        let mut failures = 0;
        for (i, failure) in self.failures() {
            failures += 1;
            match failure {
                StepFailure::AbsentFace { index, face } => {
                    out.push_str(&format!("step {i}: ABSENT_FACE d{index} -> {face}\n"));
                }
                StepFailure::Duplicate { what } => {
                    out.push_str(&format!("step {i}: DUPLICATE {what}\n"));
                }
                other => out.push_str(&format!("step {i}: {}\n", other.code())),
            }
        }
        out.push_str(&format!("step-failures: {failures}\n"));
        if self.coverage_missing.is_empty() {
            out.push_str("coverage: complete\n");
        } else {
            out.push_str(&format!(
                "coverage: COVERAGE_GAP {} cells missing (first: {})\n",
                self.coverage_missing.len(),
                self.coverage_missing[0]
            ));
        }
        out.push_str(if self.pass {
            "RESULT: PASS\n"
        } else {
            "RESULT: FAIL\n"
        });
        out
    }
}

/// Replay attachments over a complex and source mask, checking coverage
/// of every cell below `truncation`.
pub fn verify_attachments(
    complex: &FinSSet,
    source: &SubcomplexMask,
    attachments: &[Attachment],
    inner_claimed: bool,
    truncation: usize,
) -> VerificationReport {
    let mut replay = Replay::over(complex, source, truncation);
    let mut steps = Vec::with_capacity(attachments.len());
    for attachment in attachments {
        steps.push(replay.step(attachment, inner_claimed));
    }
    let coverage_missing: Vec<String> = replay
        .coverage_gaps()
        .into_iter()
        .map(|c| complex.cell_name(c).to_string())
        .collect();
    let pass = steps.iter().all(|s| matches!(s, StepOutcome::Ok)) && coverage_missing.is_empty();
    VerificationReport {
        steps,
        inner_claimed,
        coverage_missing,
        pass,
    }
}

/// Replay a certificate against its resolved arena.
pub fn verify_resolved(
    arena: &CertificateArena,
    attachments: &[Attachment],
    inner_claimed: bool,
) -> VerificationReport {
    verify_attachments(
        &arena.complex,
        &arena.source,
        attachments,
        inner_claimed,
        arena.truncation,
    )
}

/// Resolve and replay a serialized certificate.
pub fn verify_certificate(cert: &ExpansionCertificate) -> Result<VerificationReport> {
    let arena = resolve_arena(&cert.ambient, &cert.source, cert.truncation)?;
    let attachments: Vec<Attachment> = cert
        .attachments
        .iter()
        .map(|sa| Attachment {
            cell: arena.cell_of_seq(&sa.simplex).unwrap_or(CellRef {
                dim: usize::MAX,
                index: usize::MAX,
            }),
            free_face: sa.free_face,
        })
        .collect();
    Ok(verify_resolved(&arena, &attachments, cert.inner))
}

// ---------------------------------------------------------------------
// Boundary certificates: the structural classification
// ---------------------------------------------------------------------

/// Class of a nondegenerate simplex of the thick n-simplex relative to
/// the boundary-union-simplex source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Class2a {
    /// Already in the source.
    P,
    /// Attached: identity prefix through `m`, tail supported on `m..=n`.
    Q { m: usize },
    /// Appears as the free face of the `Q` parent.
    R { parent: ThickSimplex, free: usize },
}

pub fn classify_2a(s: &ThickSimplex, n: usize) -> Result<Class2a> {
    if !s.is_nondegenerate() {
        return Err(Error::Precondition("classification needs a nondegenerate simplex".into()));
    }
    if s.ambient_n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.ambient_n,
        });
    }
    if thick_membership(s, &ThickRegion::BoundaryUnionSimplex(n))? {
        return Ok(Class2a::P);
    }
    let k = s.dim();
    for m in 0..n.min(k + 1) {
        let prefix = (0..=m).all(|j| s.seq[j] == j);
        if !prefix || m + 1 > k {
            continue;
        }
        let tail: BTreeSet<usize> = s.seq[m + 1..].iter().copied().collect();
        let wanted: BTreeSet<usize> = (m..=n).collect();
        if tail == wanted {
            return Ok(Class2a::Q { m });
        }
    }
    let mut m = 0;
    while m <= k && s.seq[m] == m {
        m += 1;
    }
    let mut parent_seq = s.seq.clone();
    parent_seq.insert(m, m);
    Ok(Class2a::R {
        parent: ThickSimplex {
            ambient_n: n,
            seq: parent_seq,
        },
        free: m,
    })
}

/// The boundary certificate: all `Q`-class simplices in order of
/// increasing dimension, then decreasing prefix length, attached along
/// their prefix index.
pub fn gen_boundary_cert(n: usize, truncation: usize) -> Result<ExpansionCertificate> {
    if n < 1 {
        return Err(Error::Precondition("boundary certificate needs n >= 1".into()));
    }
    if truncation < n {
        return Err(Error::TruncationInsufficient {
            needed: n,
            available: truncation,
        });
    }
    let mut attachments = Vec::new();
    for k in 1..=truncation {
        let mut level: Vec<(usize, Vec<usize>)> = Vec::new();
        for s in crate::thick::thick_enumerate(n, k) {
            if let Class2a::Q { m } = classify_2a(&s, n)? {
                level.push((m, s.seq));
            }
        }
        level.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        attachments.extend(level.into_iter().map(|(m, seq)| SeqAttachment {
            simplex: seq,
            free_face: m,
        }));
    }
    Ok(ExpansionCertificate {
        ambient: AmbientDesc::Thick(ThickRegion::Full(n)),
        source: SourceDesc::Thick(ThickRegion::BoundaryUnionSimplex(n)),
        truncation,
        inner: false,
        attachments,
    })
}

// ---------------------------------------------------------------------
// The canonical wave pairing and the generic search
// ---------------------------------------------------------------------

/// Deterministic sweep pairing: repeatedly scan dimensions in increasing
/// order and cells in index order, attaching any absent cell whose
/// lowest admissible free index works. Returns `None` when the sweeps
/// stall before covering every cell below the truncation.
pub fn wave_pairing(
    ambient: &FinSSet,
    source: &SubcomplexMask,
    inner_only: bool,
) -> Option<Vec<Attachment>> {
    let trunc = ambient.truncation();
    let mut present = source.clone();
    let mut attachments = Vec::new();
    loop {
        let mut progress = false;
        for k in 1..=trunc {
            let (lo, hi) = if inner_only {
                if k < 2 {
                    continue;
                }
                (1, k - 1)
            } else {
                (0, k)
            };
            for cell in ambient.cells(k) {
                if present.contains(cell) {
                    continue;
                }
                let table = ambient.face_table(cell);
                for fi in lo..=hi {
                    let free = &table[fi];
                    if !free.is_nondegenerate() || present.contains(free.cell) {
                        continue;
                    }
                    let others_ok = (0..=k)
                        .all(|j| j == fi || present.contains(table[j].cell));
                    if others_ok {
                        attachments.push(Attachment {
                            cell,
                            free_face: fi,
                        });
                        present.insert(free.cell);
                        present.insert(cell);
                        progress = true;
                        break;
                    }
                }
            }
        }
        if !progress {
            break;
        }
    }
    let covered = ambient
        .all_cells()
        .all(|c| c.dim + 1 > trunc || present.contains(c));
    covered.then_some(attachments)
}

/// Generic expansion search: attach the lexicographically least eligible
/// pair first, with depth-first backtracking, until every cell below the
/// truncation is covered. An independent strategy from [`wave_pairing`].
pub fn find_expansion(
    ambient: &FinSSet,
    source: &SubcomplexMask,
    inner_only: bool,
) -> Option<Vec<Attachment>> {
    let trunc = ambient.truncation();
    // reverse index: cell -> (parent, face position)
    let mut cofaces: BTreeMap<CellRef, Vec<(CellRef, usize)>> = BTreeMap::new();
    for k in 1..=trunc {
        for cell in ambient.cells(k) {
            for (i, face) in ambient.face_table(cell).iter().enumerate() {
                cofaces.entry(face.cell).or_default().push((cell, i));
            }
        }
    }
    let empty: Vec<(CellRef, usize)> = Vec::new();

    let eligibility = |present: &SubcomplexMask, cell: CellRef| -> Vec<usize> {
        if present.contains(cell) || cell.dim == 0 {
            return Vec::new();
        }
        let k = cell.dim;
        let (lo, hi) = if inner_only {
            if k < 2 {
                return Vec::new();
            }
            (1, k - 1)
        } else {
            (0, k)
        };
        let table = ambient.face_table(cell);
        (lo..=hi)
            .filter(|&fi| {
                let free = &table[fi];
                free.is_nondegenerate()
                    && !present.contains(free.cell)
                    && (0..=k).all(|j| j == fi || present.contains(table[j].cell))
            })
            .collect()
    };

    let mut present = source.clone();
    let mut eligible: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for cell in ambient.all_cells() {
        for fi in eligibility(&present, cell) {
            eligible.insert((cell.dim, cell.index, fi));
        }
    }
    let mut missing = ambient
        .all_cells()
        .filter(|c| c.dim + 1 <= trunc && !present.contains(*c))
        .count();

    struct Frame {
        chosen: (usize, usize, usize),
        added: [CellRef; 2],
        covered_delta: usize,
    }
    let mut stack: Vec<Frame> = Vec::new();
    let mut attachments: Vec<Attachment> = Vec::new();

    let refresh = |present: &SubcomplexMask,
                   eligible: &mut BTreeSet<(usize, usize, usize)>,
                   cofaces: &BTreeMap<CellRef, Vec<(CellRef, usize)>>,
                   empty: &Vec<(CellRef, usize)>,
                   eligibility: &dyn Fn(&SubcomplexMask, CellRef) -> Vec<usize>,
                   touched: CellRef| {
        let mut affected: Vec<CellRef> = vec![touched];
        affected.extend(cofaces.get(&touched).unwrap_or(empty).iter().map(|&(p, _)| p));
        for cell in affected {
            let lo = (cell.dim, cell.index, 0usize);
            let hi = (cell.dim, cell.index, usize::MAX);
            let stale: Vec<_> = eligible.range(lo..=hi).copied().collect();
            for key in stale {
                eligible.remove(&key);
            }
            for fi in eligibility(present, cell) {
                eligible.insert((cell.dim, cell.index, fi));
            }
        }
    };

    let mut candidate = eligible.iter().next().copied();
    loop {
        if missing == 0 {
            return Some(attachments);
        }
        match candidate {
            Some(key @ (dim, index, fi)) => {
                let cell = CellRef { dim, index };
                let free_cell = ambient.face_table(cell)[fi].cell;
                let mut covered_delta = 0;
                if cell.dim + 1 <= trunc {
                    covered_delta += 1;
                }
                if free_cell.dim + 1 <= trunc {
                    covered_delta += 1;
                }
                present.insert(cell);
                present.insert(free_cell);
                missing -= covered_delta;
                refresh(&present, &mut eligible, &cofaces, &empty, &eligibility, cell);
                refresh(&present, &mut eligible, &cofaces, &empty, &eligibility, free_cell);
                attachments.push(Attachment {
                    cell,
                    free_face: fi,
                });
                stack.push(Frame {
                    chosen: key,
                    added: [cell, free_cell],
                    covered_delta,
                });
                candidate = eligible.iter().next().copied();
            }
            None => {
                // dead end: backtrack
                let Some(frame) = stack.pop() else {
                    return None;
                };
                attachments.pop();
                present.remove(frame.added[0]);
                present.remove(frame.added[1]);
                missing += frame.covered_delta;
                refresh(&present, &mut eligible, &cofaces, &empty, &eligibility, frame.added[0]);
                refresh(&present, &mut eligible, &cofaces, &empty, &eligibility, frame.added[1]);
                candidate = eligible
                    .range((
                        core::ops::Bound::Excluded(frame.chosen),
                        core::ops::Bound::Unbounded,
                    ))
                    .next()
                    .copied();
            }
        }
    }
}

// ---------------------------------------------------------------------
// Inner-horn certificates via the canonical pairing
// ---------------------------------------------------------------------

/// Class of a nondegenerate simplex of the thick n-simplex relative to
/// the inner-horn-union-simplex source, derived from the canonical
/// pairing (the verifier is the arbiter for these conventions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Class2b {
    P,
    /// Attached with its free index at the end of an odd zig-zag.
    Q { m: usize },
    /// Attached with its free index at the start of a zig-zag.
    QTilde { m: usize },
    /// Appears as the free face of its parent attachment.
    R { parent: ThickSimplex, free: usize },
}

/// Label an attachment as Q or Q-tilde from the alternating run around
/// the removed position: removals at the end of an odd run are Q, all
/// others Q-tilde with the run extending rightward.
fn label_attachment(seq: &[usize], free: usize) -> Class2b {
    let mut left_run = 1;
    if free >= 1 {
        let (a, b) = (seq[free], seq[free - 1]);
        left_run = 2;
        let mut t = 2;
        while t <= free && seq[free - t] == if t % 2 == 0 { a } else { b } {
            left_run += 1;
            t += 1;
        }
    }
    if left_run >= 3 && left_run % 2 == 1 {
        return Class2b::Q { m: left_run - 3 };
    }
    let mut right_run = 1usize;
    if free + 1 < seq.len() {
        let (a, b) = (seq[free], seq[free + 1]);
        right_run = 2;
        let mut t = 2;
        while free + t < seq.len() && seq[free + t] == if t % 2 == 0 { a } else { b } {
            right_run += 1;
            t += 1;
        }
    }
    Class2b::QTilde {
        m: right_run.saturating_sub(2),
    }
}

/// The canonical inner-horn pairing for the thick n-simplex.
pub struct HornPairing {
    pub arena: CertificateArena,
    pub attachments: Vec<Attachment>,
}

pub fn horn_pairing(n: usize, i: usize, truncation: usize) -> Result<HornPairing> {
    if !(0 < i && i < n) {
        return Err(Error::InvalidHorn { n, index: i });
    }
    if truncation < n {
        return Err(Error::TruncationInsufficient {
            needed: n,
            available: truncation,
        });
    }
    let arena = resolve_arena(
        &AmbientDesc::Thick(ThickRegion::Full(n)),
        &SourceDesc::Thick(ThickRegion::HornUnionSimplex(n, i)),
        truncation,
    )?;
    let attachments = wave_pairing(&arena.complex, &arena.source, true).ok_or_else(|| {
        Error::Malformed("canonical pairing stalled before covering the skeleton".into())
    })?;
    Ok(HornPairing { arena, attachments })
}

/// Classify one simplex against the inner horn source. Derived from the
/// canonical pairing computed up to one dimension above the simplex.
pub fn classify_2b(s: &ThickSimplex, n: usize, i: usize) -> Result<Class2b> {
    if !s.is_nondegenerate() {
        return Err(Error::Precondition("classification needs a nondegenerate simplex".into()));
    }
    if !(0 < i && i < n) {
        return Err(Error::InvalidHorn { n, index: i });
    }
    if thick_membership(s, &ThickRegion::HornUnionSimplex(n, i))? {
        return Ok(Class2b::P);
    }
    let pairing = horn_pairing(n, i, (s.dim() + 1).max(n))?;
    let cell = pairing
        .arena
        .cell_of_seq(&s.seq)
        .expect("nondegenerate simplex is a cell");
    for attachment in &pairing.attachments {
        if attachment.cell == cell {
            return Ok(label_attachment(&s.seq, attachment.free_face));
        }
        let free = pairing.arena.complex.face_table(attachment.cell)[attachment.free_face].cell;
        if free == cell {
            return Ok(Class2b::R {
                parent: ThickSimplex {
                    ambient_n: n,
                    seq: pairing.arena.seq_of_cell(attachment.cell),
                },
                free: attachment.free_face,
            });
        }
    }
    Err(Error::Malformed(format!(
        "simplex {:?} not reached by the pairing",
        s.seq
    )))
}

/// Outcome of a generator that can fall back to the search oracle.
pub struct GeneratedCert {
    pub certificate: ExpansionCertificate,
    pub used_fallback: bool,
}

/// The inner-horn certificate for `0 < i < n`.
pub fn gen_inner_horn_cert(n: usize, i: usize, truncation: usize) -> Result<GeneratedCert> {
    let pairing = horn_pairing(n, i, truncation)?;
    let report = verify_resolved(&pairing.arena, &pairing.attachments, true);
    let (attachments, used_fallback) = if report.pass {
        (pairing.attachments, false)
    } else {
        let found = find_expansion(&pairing.arena.complex, &pairing.arena.source, true)
            .ok_or_else(|| Error::Malformed("no inner expansion found".into()))?;
        (found, true)
    };
    Ok(GeneratedCert {
        certificate: ExpansionCertificate {
            ambient: AmbientDesc::Thick(ThickRegion::Full(n)),
            source: SourceDesc::Thick(ThickRegion::HornUnionSimplex(n, i)),
            truncation,
            inner: true,
            attachments: pairing.arena.encode(&attachments),
        },
        used_fallback,
    })
}

/// The full-horn certificate: for inner indices, attach the top simplex
/// along its missing face, then run the inner-horn certificate; outer
/// indices are transported through a vertex transposition.
pub fn gen_horn_cert_full(n: usize, i: usize, truncation: usize) -> Result<ExpansionCertificate> {
    if n <= 1 {
        return Err(Error::Precondition("full horn certificates need n > 1".into()));
    }
    if i > n {
        return Err(Error::InvalidHorn { n, index: i });
    }
    if 0 < i && i < n {
        let inner = gen_inner_horn_cert(n, i, truncation)?;
        let mut attachments = vec![SeqAttachment {
            simplex: (0..=n).collect(),
            free_face: i,
        }];
        attachments.extend(inner.certificate.attachments);
        return Ok(ExpansionCertificate {
            ambient: AmbientDesc::Thick(ThickRegion::Full(n)),
            source: SourceDesc::Thick(ThickRegion::Horn(n, i)),
            truncation,
            inner: true,
            attachments,
        });
    }
    // transport from an inner index through the transposition (i j)
    let j = if i == 0 { 1 } else { n - 1 };
    let base = gen_horn_cert_full(n, j, truncation)?;
    let swap = |v: usize| -> usize {
        if v == i {
            j
        } else if v == j {
            i
        } else {
            v
        }
    };
    let attachments = base
        .attachments
        .into_iter()
        .map(|sa| SeqAttachment {
            simplex: sa.simplex.into_iter().map(swap).collect(),
            free_face: sa.free_face,
        })
        .collect();
    Ok(ExpansionCertificate {
        ambient: AmbientDesc::Thick(ThickRegion::Full(n)),
        source: SourceDesc::Thick(ThickRegion::Horn(n, i)),
        truncation,
        inner: true,
        attachments,
    })
}

// ---------------------------------------------------------------------
// Prism certificates and lifting through the thickening
// ---------------------------------------------------------------------

/// The prism certificate: the inclusion of the product of standard
/// simplices into the standard simplex on the vertex pairs. Attachments
/// are the increasing vertex tuples through the least vertex that leave
/// the product, attached along face 0, in increasing dimension.
pub fn gen_prism_cert(m: usize, n: usize, truncation: usize) -> Result<ExpansionCertificate> {
    if truncation < m + n {
        return Err(Error::TruncationInsufficient {
            needed: m + n,
            available: truncation,
        });
    }
    let big = (m + 1) * (n + 1) - 1;
    let arena = resolve_arena(
        &AmbientDesc::Standard(StandardKind::Simplex, big),
        &SourceDesc::Product { m, n },
        truncation,
    )?;
    let mut attachments = Vec::new();
    for k in 1..=truncation.min(big) {
        for cell in arena.complex.cells(k) {
            if arena.source.contains(cell) {
                continue;
            }
            let seq = arena.seq_of_cell(cell);
            if seq[0] == 0 {
                attachments.push(SeqAttachment {
                    simplex: seq,
                    free_face: 0,
                });
            }
        }
    }
    Ok(ExpansionCertificate {
        ambient: AmbientDesc::Standard(StandardKind::Simplex, big),
        source: SourceDesc::Product { m, n },
        truncation,
        inner: false,
        attachments,
    })
}

/// Lift an expansion certificate through the thickening coend. Each horn
/// attachment of dimension `k` becomes the transported full-horn
/// certificate of the thick k-simplex; attachments of dimension above
/// the new truncation contribute no simplices there and are dropped.
///
/// The certificate must live over a standard-simplex ambient and every
/// attachment must have dimension at least 2.
pub fn lift_cert_through_thickening(
    cert: &ExpansionCertificate,
    truncation: usize,
) -> Result<ExpansionCertificate> {
    let AmbientDesc::Standard(StandardKind::Simplex, big) = cert.ambient else {
        return Err(Error::Precondition(
            "lifting expects a certificate over a standard simplex".into(),
        ));
    };
    for sa in &cert.attachments {
        if sa.simplex.len() < 3 {
            return Err(Error::Precondition(
                "lifting needs every attachment of dimension at least 2".into(),
            ));
        }
    }
    let source = match &cert.source {
        SourceDesc::Product { m, n } => SourceDesc::Prism { m: *m, n: *n },
        SourceDesc::Vertex(v) => SourceDesc::Vertex(*v),
        _ => {
            return Err(Error::Precondition(
                "lifting supports product or vertex sources".into(),
            ))
        }
    };
    let mut blocks: BTreeMap<(usize, usize), Vec<SeqAttachment>> = BTreeMap::new();
    let mut attachments = Vec::new();
    for sa in &cert.attachments {
        let k = sa.simplex.len() - 1;
        if k > truncation {
            continue;
        }
        if !blocks.contains_key(&(k, sa.free_face)) {
            let block = gen_horn_cert_full(k, sa.free_face, truncation)?.attachments;
            blocks.insert((k, sa.free_face), block);
        }
        for inner in &blocks[&(k, sa.free_face)] {
            attachments.push(SeqAttachment {
                simplex: inner.simplex.iter().map(|&u| sa.simplex[u]).collect(),
                free_face: inner.free_face,
            });
        }
    }
    Ok(ExpansionCertificate {
        ambient: AmbientDesc::Thick(ThickRegion::Full(big)),
        source,
        truncation,
        inner: true,
        attachments,
    })
}

/// Prism certificate lifted through the thickening: the thick Kunneth
/// certificate.
pub fn gen_kunneth_cert(m: usize, n: usize, truncation: usize) -> Result<ExpansionCertificate> {
    let base = gen_prism_cert(m, n, (m + n + 2).max(truncation))?;
    lift_cert_through_thickening(&base, truncation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thick(n: usize, seq: &[usize]) -> ThickSimplex {
        ThickSimplex::new(n, seq.to_vec()).unwrap()
    }

    #[test]
    fn classify_2a_examples() {
        assert_eq!(classify_2a(&thick(2, &[0, 1, 0]), 2).unwrap(), Class2a::P);
        assert_eq!(
            classify_2a(&thick(1, &[0, 1, 0]), 1).unwrap(),
            Class2a::Q { m: 0 }
        );
        match classify_2a(&thick(2, &[0, 2, 1]), 2).unwrap() {
            Class2a::R { parent, free } => {
                assert_eq!(parent.seq, vec![0, 1, 2, 1]);
                assert_eq!(free, 1);
            }
            other => panic!("expected R, got {other:?}"),
        }
        assert!(classify_2a(&thick(2, &[0, 0, 1]), 2).is_err());
    }

    #[test]
    fn boundary_cert_n1() {
        let cert = gen_boundary_cert(1, 3).unwrap();
        assert_eq!(cert.attachments.len(), 2);
        assert_eq!(cert.attachments[0].simplex, vec![0, 1, 0]);
        assert_eq!(cert.attachments[0].free_face, 0);
        assert_eq!(cert.attachments[1].simplex, vec![0, 1, 0, 1]);
        assert_eq!(cert.attachments[1].free_face, 0);
        let report = verify_certificate(&cert).unwrap();
        assert!(report.pass, "{}", report.render("boundary n=1"));
    }

    #[test]
    fn boundary_cert_replay_adds_expected_cells() {
        let cert = gen_boundary_cert(1, 3).unwrap();
        let arena = resolve_arena(&cert.ambient, &cert.source, cert.truncation).unwrap();
        let mut replay = Replay::new(&arena);
        for sa in &cert.attachments {
            let attachment = Attachment {
                cell: arena.cell_of_seq(&sa.simplex).unwrap(),
                free_face: sa.free_face,
            };
            assert_eq!(replay.step(&attachment, false), StepOutcome::Ok);
        }
        for seq in [vec![1, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0, 1]] {
            let cell = arena.cell_of_seq(&seq).unwrap();
            assert!(replay.present.contains(cell), "{seq:?} missing");
        }
        // the other top-dimension cell is not touched
        let other = arena.cell_of_seq(&[1, 0, 1, 0]).unwrap();
        assert!(!replay.present.contains(other));
    }

    #[test]
    fn boundary_cert_counts() {
        assert_eq!(gen_boundary_cert(2, 4).unwrap().attachments.len(), 18);
        assert_eq!(gen_boundary_cert(3, 5).unwrap().attachments.len(), 144);
    }

    #[test]
    fn reversed_order_fails() {
        let cert = gen_boundary_cert(1, 3).unwrap();
        let mut reversed = cert.clone();
        reversed.attachments.reverse();
        let report = verify_certificate(&reversed).unwrap();
        assert!(!report.pass);
        let (step, failure) = report.failures().next().unwrap();
        assert_eq!(step, 0);
        assert!(matches!(failure, StepFailure::AbsentFace { .. }));
    }

    #[test]
    fn inner_violation_detected() {
        let mut cert = gen_inner_horn_cert(2, 1, 3).unwrap().certificate;
        cert.attachments[0].free_face = 0;
        let report = verify_certificate(&cert).unwrap();
        assert!(!report.pass);
        assert!(report
            .failures()
            .any(|(_, f)| matches!(f, StepFailure::InnerViolation)
                || matches!(f, StepFailure::Duplicate { .. })
                || matches!(f, StepFailure::AbsentFace { .. })));
    }

    #[test]
    fn inner_horn_small() {
        let generated = gen_inner_horn_cert(2, 1, 3).unwrap();
        assert!(!generated.used_fallback);
        let report = verify_certificate(&generated.certificate).unwrap();
        assert!(report.pass, "{}", report.render("inner horn (2,1)"));
        assert!(generated.certificate.inner);
    }

    #[test]
    fn inner_horn_requires_inner_index() {
        assert!(gen_inner_horn_cert(2, 0, 3).is_err());
        assert!(gen_inner_horn_cert(2, 2, 3).is_err());
    }

    #[test]
    fn classify_2b_examples() {
        assert_eq!(classify_2b(&thick(2, &[1, 0, 1]), 2, 1).unwrap(), Class2b::P);
        match classify_2b(&thick(2, &[2, 0]), 2, 1).unwrap() {
            Class2b::R { parent, free } => {
                // the parent must recover the child along its free face
                let mut child = parent.seq.clone();
                child.remove(free);
                assert_eq!(child, vec![2, 0]);
                assert!(0 < free && free < parent.dim());
            }
            other => panic!("expected R, got {other:?}"),
        }
    }

    #[test]
    fn full_horn_first_attachment() {
        let cert = gen_horn_cert_full(2, 1, 3).unwrap();
        assert_eq!(cert.attachments[0].simplex, vec![0, 1, 2]);
        assert_eq!(cert.attachments[0].free_face, 1);
        let report = verify_certificate(&cert).unwrap();
        assert!(report.pass, "{}", report.render("full horn (2,1)"));
    }

    #[test]
    fn full_horn_outer_transported() {
        for i in [0usize, 2] {
            let cert = gen_horn_cert_full(2, i, 3).unwrap();
            assert!(cert.inner);
            let report = verify_certificate(&cert).unwrap();
            assert!(report.pass, "i={i}: {}", report.render("full horn"));
        }
        assert!(gen_horn_cert_full(1, 0, 2).is_err());
    }

    #[test]
    fn prism_cert_small() {
        let cert = gen_prism_cert(1, 1, 4).unwrap();
        assert_eq!(cert.attachments.len(), 2);
        assert_eq!(cert.attachments[0].simplex, vec![0, 1, 2]);
        assert_eq!(cert.attachments[1].simplex, vec![0, 1, 2, 3]);
        let report = verify_certificate(&cert).unwrap();
        assert!(report.pass, "{}", report.render("prism (1,1)"));

        // (1,0): the prism is the simplex already
        let trivial = gen_prism_cert(1, 0, 3).unwrap();
        assert!(trivial.attachments.is_empty());
        assert!(verify_certificate(&trivial).unwrap().pass);
    }

    #[test]
    fn lift_small_kunneth() {
        let cert = gen_kunneth_cert(1, 1, 3).unwrap();
        assert!(cert.inner);
        let report = verify_certificate(&cert).unwrap();
        assert!(report.pass, "{}", report.render("kunneth (1,1)"));
    }

    #[test]
    fn lift_rejects_low_dimension() {
        // boundary certs over thick ambients are rejected outright
        let cert = gen_boundary_cert(2, 4).unwrap();
        assert!(lift_cert_through_thickening(&cert, 3).is_err());
        // a standard-ambient certificate with a 1-dimensional attachment
        let mut bad = gen_prism_cert(1, 1, 4).unwrap();
        bad.attachments.push(SeqAttachment {
            simplex: vec![0, 1],
            free_face: 0,
        });
        assert!(lift_cert_through_thickening(&bad, 3).is_err());
    }

    #[test]
    fn lift_empty_is_empty() {
        let mut cert = gen_prism_cert(1, 0, 3).unwrap();
        cert.attachments.clear();
        let lifted = lift_cert_through_thickening(&cert, 3).unwrap();
        assert!(lifted.attachments.is_empty());
    }

    #[test]
    fn find_expansion_collapses_horn() {
        // the horn on [2] at 1 collapses to the vertex 0
        let arena = resolve_arena(
            &AmbientDesc::Standard(StandardKind::Horn(1), 2),
            &SourceDesc::Vertex(0),
            2,
        )
        .unwrap();
        let found = find_expansion(&arena.complex, &arena.source, false).unwrap();
        assert_eq!(found.len(), 2);
        let report = verify_resolved(&arena, &found, false);
        assert!(report.pass);
    }

    #[test]
    fn find_expansion_none_for_boundary_fill() {
        // at truncation 3 the top cell falls under the coverage contract,
        // and it has no absent free face to pair with
        let arena = resolve_arena(
            &AmbientDesc::Standard(StandardKind::Simplex, 2),
            &SourceDesc::Cells(
                ["0", "1", "2", "0-1", "0-2", "1-2"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            ),
            3,
        )
        .unwrap();
        assert!(find_expansion(&arena.complex, &arena.source, false).is_none());
    }

    #[test]
    fn descriptor_roundtrip() {
        for text in [
            "thick:3",
            "thick-horn-union-simplex:2:1",
            "standard:5",
            "standard-horn:3:1",
        ] {
            assert_eq!(AmbientDesc::parse(text).unwrap().render(), text);
        }
        for text in ["full:2", "horn:2:1", "product:1:2", "prism:2:2", "vertex:0"] {
            assert_eq!(SourceDesc::parse(text).unwrap().render(), text);
        }
    }
}
