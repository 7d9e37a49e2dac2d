//! Surface file format: UTF-8 JSON with named vertices and edges.
//!
//! ```json
//! {
//!   "delta": 1.0,
//!   "vertices": [{"id": "w0", "color": "white"}, {"id": "b0", "color": "black"}],
//!   "rotations": {"w0": ["e0", "e1", "e2"], "b0": ["e0", "e2", "e1"]},
//!   "edges": {"e0": {"white": "w0", "black": "b0", "alpha": 2.0943951023931953}}
//! }
//! ```
//!
//! Angles are radians. The rotation lists are counterclockwise. Names are
//! arbitrary strings; the in-memory surface uses dense indices and keeps the
//! name tables for round-tripping.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{Color, EdgeId, RhombicSurface, VertexId};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub delta: f64,
    pub vertices: Vec<VertexEntry>,
    pub rotations: BTreeMap<String, Vec<String>>,
    pub edges: BTreeMap<String, EdgeEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: String,
    pub color: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub white: String,
    pub black: String,
    pub alpha: f64,
}

/// A surface together with its external vertex/edge names.
#[derive(Clone, Debug)]
pub struct NamedSurface {
    pub surface: RhombicSurface,
    pub vertex_names: Vec<String>,
    pub edge_names: Vec<String>,
}

impl NamedSurface {
    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0 as usize]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.0 as usize]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
    }

    /// Wrap a programmatically built surface with generated names
    /// (`v0, v1, ...` / `e0, e1, ...`).
    pub fn with_default_names(surface: RhombicSurface) -> Self {
        let vertex_names = (0..surface.vertex_count()).map(|i| format!("v{i}")).collect();
        let edge_names = (0..surface.edge_count()).map(|i| format!("e{i}")).collect();
        NamedSurface { surface, vertex_names, edge_names }
    }
}

pub fn from_json(text: &str) -> Result<NamedSurface> {
    let file: SurfaceFile = serde_json::from_str(text)?;
    from_file(&file)
}

pub fn from_file(file: &SurfaceFile) -> Result<NamedSurface> {
    let mut vertex_names = Vec::with_capacity(file.vertices.len());
    let mut colors = Vec::with_capacity(file.vertices.len());
    let mut vertex_index = BTreeMap::new();
    for entry in &file.vertices {
        let color = match entry.color.as_str() {
            "white" => Color::White,
            "black" => Color::Black,
            other => {
                return Err(Error::InvalidSurface(format!(
                    "vertex {}: unknown color {other:?}",
                    entry.id
                )))
            }
        };
        if vertex_index.insert(entry.id.clone(), VertexId(vertex_names.len() as u32)).is_some() {
            return Err(Error::InvalidSurface(format!("duplicate vertex id {:?}", entry.id)));
        }
        vertex_names.push(entry.id.clone());
        colors.push(color);
    }

    let mut edge_names = Vec::with_capacity(file.edges.len());
    let mut edges = Vec::with_capacity(file.edges.len());
    let mut alpha = Vec::with_capacity(file.edges.len());
    let mut edge_index = BTreeMap::new();
    for (name, entry) in &file.edges {
        let lookup = |id: &str| -> Result<VertexId> {
            vertex_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidSurface(format!("edge {name}: unknown vertex {id:?}")))
        };
        edge_index.insert(name.clone(), EdgeId(edge_names.len() as u32));
        edge_names.push(name.clone());
        edges.push((lookup(&entry.white)?, lookup(&entry.black)?));
        alpha.push(entry.alpha);
    }

    let mut rotations = vec![Vec::new(); vertex_names.len()];
    for (vname, rot) in &file.rotations {
        let v = vertex_index
            .get(vname)
            .ok_or_else(|| Error::InvalidSurface(format!("rotation for unknown vertex {vname:?}")))?;
        rotations[v.0 as usize] = rot
            .iter()
            .map(|ename| {
                edge_index
                    .get(ename)
                    .copied()
                    .ok_or_else(|| Error::InvalidSurface(format!("rotation of {vname}: unknown edge {ename:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
    }

    let surface = RhombicSurface::new(file.delta, colors, edges, alpha, rotations)?;
    Ok(NamedSurface { surface, vertex_names, edge_names })
}

pub fn to_file(named: &NamedSurface) -> SurfaceFile {
    let s = &named.surface;
    let vertices = s
        .vertices()
        .map(|v| VertexEntry {
            id: named.vertex_name(v).to_string(),
            color: match s.color(v) {
                Color::White => "white".to_string(),
                Color::Black => "black".to_string(),
            },
        })
        .collect();
    let rotations = s
        .vertices()
        .map(|v| {
            (
                named.vertex_name(v).to_string(),
                s.rotation(v).iter().map(|&e| named.edge_name(e).to_string()).collect(),
            )
        })
        .collect();
    let edges = s
        .edges()
        .map(|e| {
            (
                named.edge_name(e).to_string(),
                EdgeEntry {
                    white: named.vertex_name(s.white_end(e)).to_string(),
                    black: named.vertex_name(s.black_end(e)).to_string(),
                    alpha: s.alpha(e),
                },
            )
        })
        .collect();
    SurfaceFile { delta: s.delta(), vertices, rotations, edges }
}

pub fn to_json(named: &NamedSurface) -> String {
    serde_json::to_string_pretty(&to_file(named)).expect("surface serialization")
}
