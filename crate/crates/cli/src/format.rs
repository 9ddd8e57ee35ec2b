//! JSON file formats: complexes, morphisms, and expansion certificates.
//!
//! Writing is byte-stable: maps serialize with sorted keys and values are
//! emitted through `to_string_pretty` with a trailing newline.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Map, Value};

use anodyne_core::expansion::{AmbientDesc, ExpansionCertificate, SeqAttachment, SourceDesc};
use anodyne_core::morphism::SSetMorphism;
use anodyne_core::sset::{CellRef, FinSSet, NormalSimplex};

pub fn write_stable(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable");
    out.push('\n');
    out
}

fn normal_simplex_to_value(complex: &FinSSet, ns: &NormalSimplex) -> Value {
    json!({
        "degeneracies": ns.degeneracies,
        "cell": complex.cell_name(ns.cell),
    })
}

fn normal_simplex_from_value(complex: &FinSSet, value: &Value) -> Result<NormalSimplex> {
    let obj = value
        .as_object()
        .ok_or_else(|| anyhow!("face reference must be an object"))?;
    let degeneracies: Vec<usize> = obj
        .get("degeneracies")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("face reference needs degeneracies"))?
        .iter()
        .map(|v| {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| anyhow!("degeneracy indices are naturals"))
        })
        .collect::<Result<_>>()?;
    let name = obj
        .get("cell")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("face reference needs a cell name"))?;
    let cell = complex
        .cell_by_name(name)
        .ok_or_else(|| anyhow!("unknown cell {name}"))?;
    Ok(NormalSimplex { degeneracies, cell })
}

pub fn sset_to_value(complex: &FinSSet) -> Value {
    let cells: Vec<Value> = (0..=complex.truncation())
        .map(|k| {
            Value::Array(
                complex
                    .cells(k)
                    .map(|c| Value::String(complex.cell_name(c).to_string()))
                    .collect(),
            )
        })
        .collect();
    let mut faces = Map::new();
    for k in 1..=complex.truncation() {
        for cell in complex.cells(k) {
            let entry: Vec<Value> = complex
                .face_table(cell)
                .iter()
                .map(|ns| normal_simplex_to_value(complex, ns))
                .collect();
            faces.insert(complex.cell_name(cell).to_string(), Value::Array(entry));
        }
    }
    let mut root = Map::new();
    root.insert("truncation".into(), json!(complex.truncation()));
    if let Some(c) = complex.coskeletal_bound() {
        root.insert("coskeletal".into(), json!(c));
    }
    root.insert("cells".into(), Value::Array(cells));
    root.insert("faces".into(), Value::Object(faces));
    Value::Object(root)
}

pub fn sset_from_value(value: &Value) -> Result<FinSSet> {
    let obj = value
        .as_object()
        .ok_or_else(|| anyhow!("complex file must be a JSON object"))?;
    let truncation = obj
        .get("truncation")
        .and_then(Value::as_u64)
        .ok_or_else(|| anyhow!("missing truncation"))? as usize;
    let coskeletal = obj.get("coskeletal").and_then(Value::as_u64).map(|c| c as usize);
    let cells_value = obj
        .get("cells")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("missing cells"))?;
    if cells_value.len() != truncation + 1 {
        bail!("cells must list one level per dimension 0..=truncation");
    }
    let names: Vec<Vec<String>> = cells_value
        .iter()
        .map(|level| {
            level
                .as_array()
                .ok_or_else(|| anyhow!("each cell level is a list of names"))?
                .iter()
                .map(|n| {
                    n.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| anyhow!("cell names are strings"))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut name_index: std::collections::BTreeMap<&str, CellRef> = Default::default();
    for (dim, level) in names.iter().enumerate() {
        for (index, name) in level.iter().enumerate() {
            name_index.insert(name.as_str(), CellRef { dim, index });
        }
    }
    let parse_face = |value: &Value| -> Result<NormalSimplex> {
        let obj = value
            .as_object()
            .ok_or_else(|| anyhow!("face reference must be an object"))?;
        let degeneracies: Vec<usize> = obj
            .get("degeneracies")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("face reference needs degeneracies"))?
            .iter()
            .map(|v| {
                v.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| anyhow!("degeneracy indices are naturals"))
            })
            .collect::<Result<_>>()?;
        let name = obj
            .get("cell")
            .and_then(Value::as_str)
            .ok_or_else(|| anyhow!("face reference needs a cell name"))?;
        let cell = *name_index
            .get(name)
            .ok_or_else(|| anyhow!("unknown cell {name}"))?;
        Ok(NormalSimplex { degeneracies, cell })
    };
    let faces_obj = obj
        .get("faces")
        .and_then(Value::as_object)
        .ok_or_else(|| anyhow!("missing faces"))?;
    let mut faces: Vec<Vec<Vec<NormalSimplex>>> = vec![Vec::new(); truncation + 1];
    faces[0] = vec![Vec::new(); names[0].len()];
    for k in 1..=truncation {
        for name in &names[k] {
            let entry = faces_obj
                .get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| anyhow!("missing faces for cell {name}"))?;
            if entry.len() != k + 1 {
                bail!("cell {name} needs {} faces", k + 1);
            }
            let table = entry.iter().map(&parse_face).collect::<Result<_>>()?;
            faces[k].push(table);
        }
    }
    let complex = FinSSet::from_parts(truncation, names, faces, coskeletal)
        .map_err(|e| anyhow!("malformed complex: {e}"))?;
    complex
        .validate()
        .map_err(|e| anyhow!("simplicial identities fail: {e}"))?;
    Ok(complex)
}

pub fn save_sset(path: &std::path::Path, complex: &FinSSet) -> Result<()> {
    std::fs::write(path, write_stable(&sset_to_value(complex)))
        .with_context(|| format!("writing {}", path.display()))
}

pub fn load_sset(path: &std::path::Path) -> Result<Arc<FinSSet>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).context("parsing JSON")?;
    Ok(Arc::new(sset_from_value(&value)?))
}

pub fn morphism_to_value(map: &SSetMorphism) -> Value {
    let mut assignment = Map::new();
    for k in 0..=map.source().truncation() {
        for cell in map.source().cells(k) {
            assignment.insert(
                map.source().cell_name(cell).to_string(),
                normal_simplex_to_value(map.target(), map.image_of_cell(cell)),
            );
        }
    }
    json!({
        "source": sset_to_value(map.source()),
        "target": sset_to_value(map.target()),
        "assignment": Value::Object(assignment),
    })
}

pub fn morphism_from_value(value: &Value) -> Result<SSetMorphism> {
    let obj = value
        .as_object()
        .ok_or_else(|| anyhow!("morphism file must be a JSON object"))?;
    let source = Arc::new(sset_from_value(
        obj.get("source").ok_or_else(|| anyhow!("missing source"))?,
    )?);
    let target = Arc::new(sset_from_value(
        obj.get("target").ok_or_else(|| anyhow!("missing target"))?,
    )?);
    let assignment_obj = obj
        .get("assignment")
        .and_then(Value::as_object)
        .ok_or_else(|| anyhow!("missing assignment"))?;
    let mut assignment: Vec<Vec<NormalSimplex>> = Vec::new();
    for k in 0..=source.truncation() {
        let mut level = Vec::new();
        for cell in source.cells(k) {
            let name = source.cell_name(cell);
            let image = assignment_obj
                .get(name)
                .ok_or_else(|| anyhow!("missing image for cell {name}"))?;
            level.push(normal_simplex_from_value(&target, image)?);
        }
        assignment.push(level);
    }
    let morphism = SSetMorphism::new(source, target, assignment)
        .map_err(|e| anyhow!("malformed morphism: {e}"))?;
    morphism
        .validate()
        .map_err(|e| anyhow!("not a simplicial map: {e}"))?;
    Ok(morphism)
}

pub fn load_morphism(path: &std::path::Path) -> Result<SSetMorphism> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).context("parsing JSON")?;
    morphism_from_value(&value)
}

pub fn save_morphism(path: &std::path::Path, map: &SSetMorphism) -> Result<()> {
    std::fs::write(path, write_stable(&morphism_to_value(map)))
        .with_context(|| format!("writing {}", path.display()))
}

/// A certificate as read from disk: either over a descriptor ambient
/// (attachments are vertex sequences) or over an embedded complex
/// (attachments name cells directly).
pub enum CertFile {
    Descriptor(ExpansionCertificate),
    Embedded {
        complex: Arc<FinSSet>,
        source_cells: Vec<String>,
        truncation: usize,
        inner: bool,
        attachments: Vec<(String, usize)>,
    },
}

pub fn cert_to_value(cert: &ExpansionCertificate) -> Value {
    let attachments: Vec<Value> = cert
        .attachments
        .iter()
        .map(|a| {
            json!({
                "simplex": a.simplex,
                "free_face": a.free_face,
            })
        })
        .collect();
    json!({
        "ambient": cert.ambient.render(),
        "source": cert.source.render(),
        "truncation": cert.truncation,
        "inner": cert.inner,
        "attachments": attachments,
    })
}

pub fn embedded_cert_to_value(
    complex: &FinSSet,
    source_cells: &[String],
    truncation: usize,
    inner: bool,
    attachments: &[(String, usize)],
) -> Value {
    let attachments: Vec<Value> = attachments
        .iter()
        .map(|(name, fi)| json!({"simplex": name, "free_face": fi}))
        .collect();
    json!({
        "ambient": sset_to_value(complex),
        "source": format!("cells:{}", source_cells.join(",")),
        "truncation": truncation,
        "inner": inner,
        "attachments": attachments,
    })
}

pub fn cert_from_value(value: &Value) -> Result<CertFile> {
    let obj = value
        .as_object()
        .ok_or_else(|| anyhow!("certificate file must be a JSON object"))?;
    let truncation = obj
        .get("truncation")
        .and_then(Value::as_u64)
        .ok_or_else(|| anyhow!("missing truncation"))? as usize;
    let inner = obj
        .get("inner")
        .and_then(Value::as_bool)
        .ok_or_else(|| anyhow!("missing inner flag"))?;
    let attachments_value = obj
        .get("attachments")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("missing attachments"))?;
    let ambient_value = obj.get("ambient").ok_or_else(|| anyhow!("missing ambient"))?;
    let source_text = obj
        .get("source")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("missing source descriptor"))?;
    match ambient_value {
        Value::String(desc) => {
            let ambient = AmbientDesc::parse(desc).map_err(|e| anyhow!("{e}"))?;
            let source = SourceDesc::parse(source_text).map_err(|e| anyhow!("{e}"))?;
            let attachments = attachments_value
                .iter()
                .map(|a| {
                    let obj = a.as_object().ok_or_else(|| anyhow!("bad attachment"))?;
                    let simplex = obj
                        .get("simplex")
                        .and_then(Value::as_array)
                        .ok_or_else(|| anyhow!("attachment simplex must be a vertex list"))?
                        .iter()
                        .map(|v| {
                            v.as_u64()
                                .map(|x| x as usize)
                                .ok_or_else(|| anyhow!("vertices are naturals"))
                        })
                        .collect::<Result<_>>()?;
                    let free_face = obj
                        .get("free_face")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| anyhow!("missing free_face"))?
                        as usize;
                    Ok(SeqAttachment { simplex, free_face })
                })
                .collect::<Result<_>>()?;
            Ok(CertFile::Descriptor(ExpansionCertificate {
                ambient,
                source,
                truncation,
                inner,
                attachments,
            }))
        }
        Value::Object(_) => {
            let complex = Arc::new(sset_from_value(ambient_value)?);
            let source_cells = source_text
                .strip_prefix("cells:")
                .ok_or_else(|| anyhow!("embedded ambients use a cells: source"))?
                .split(',')
                .map(str::to_string)
                .collect();
            let attachments = attachments_value
                .iter()
                .map(|a| {
                    let obj = a.as_object().ok_or_else(|| anyhow!("bad attachment"))?;
                    let name = obj
                        .get("simplex")
                        .and_then(Value::as_str)
                        .ok_or_else(|| anyhow!("embedded attachments name cells"))?
                        .to_string();
                    let free_face = obj
                        .get("free_face")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| anyhow!("missing free_face"))?
                        as usize;
                    Ok((name, free_face))
                })
                .collect::<Result<_>>()?;
            Ok(CertFile::Embedded {
                complex,
                source_cells,
                truncation,
                inner,
                attachments,
            })
        }
        _ => bail!("ambient must be a descriptor string or an embedded complex"),
    }
}

pub fn load_cert(path: &std::path::Path) -> Result<CertFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).context("parsing JSON")?;
    cert_from_value(&value)
}

pub fn save_cert(path: &std::path::Path, cert: &ExpansionCertificate) -> Result<()> {
    std::fs::write(path, write_stable(&cert_to_value(cert)))
        .with_context(|| format!("writing {}", path.display()))
}

/// Resolve a cell reference for error-free lookups in reports.
pub fn cell_ref_by_name(complex: &FinSSet, name: &str) -> Result<CellRef> {
    complex
        .cell_by_name(name)
        .ok_or_else(|| anyhow!("unknown cell {name}"))
}
