//! Plain-text mesh files.
//!
//! ```text
//! PERIODIC 5000 4330
//! NODES
//! 0 0.0 0.0
//! ...
//! CELLS
//! 0 0 1 32
//! ...
//! ```
//!
//! Blank lines and `#` comments are ignored. Ids are arbitrary unique
//! integers; cells refer to node ids.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{compute_dual_geometry, Mesh, RawMesh};
use crate::error::{Error, Result};

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    let text = std::fs::read_to_string(path)?;
    read_mesh_str(&text)
}

pub fn read_mesh_str(text: &str) -> Result<Mesh> {
    compute_dual_geometry(&parse_raw(text)?)
}

#[derive(PartialEq)]
enum Section {
    None,
    Nodes,
    Cells,
}

pub(crate) fn parse_raw(text: &str) -> Result<RawMesh> {
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut period: Option<(f64, f64)> = None;
    let mut section = Section::None;
    let mut node_ids: HashMap<i64, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut cell_ids: HashMap<i64, usize> = HashMap::new();
    let mut cells_by_id: Vec<[i64; 3]> = Vec::new();
    let mut cell_lines: Vec<usize> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "PERIODIC" => {
                if tokens.len() != 3 {
                    return Err(err(line_no, "expected `PERIODIC Lx Ly`".into()));
                }
                let lx = parse_f64(tokens[1], line_no)?;
                let ly = parse_f64(tokens[2], line_no)?;
                period = Some((lx, ly));
                continue;
            }
            "NODES" => {
                section = Section::Nodes;
                continue;
            }
            "CELLS" => {
                section = Section::Cells;
                continue;
            }
            _ => {}
        }
        match section {
            Section::None => {
                return Err(err(
                    line_no,
                    format!("unexpected line before any section: `{line}`"),
                ))
            }
            Section::Nodes => {
                if tokens.len() != 3 {
                    return Err(err(line_no, "expected `id x y`".into()));
                }
                let id = parse_i64(tokens[0], line_no)?;
                let p = [
                    parse_f64(tokens[1], line_no)?,
                    parse_f64(tokens[2], line_no)?,
                ];
                if node_ids.insert(id, nodes.len()).is_some() {
                    return Err(err(line_no, format!("duplicate node id {id}")));
                }
                nodes.push(p);
            }
            Section::Cells => {
                if tokens.len() != 4 {
                    return Err(err(line_no, "expected `id v1 v2 v3`".into()));
                }
                let id = parse_i64(tokens[0], line_no)?;
                let v = [
                    parse_i64(tokens[1], line_no)?,
                    parse_i64(tokens[2], line_no)?,
                    parse_i64(tokens[3], line_no)?,
                ];
                if cell_ids.insert(id, cells_by_id.len()).is_some() {
                    return Err(err(line_no, format!("duplicate cell id {id}")));
                }
                cells_by_id.push(v);
                cell_lines.push(line_no);
            }
        }
    }

    let (lx, ly) = period.ok_or_else(|| err(0, "missing `PERIODIC Lx Ly` header".into()))?;
    let mut cells = Vec::with_capacity(cells_by_id.len());
    for (v, &line_no) in cells_by_id.iter().zip(&cell_lines) {
        let mut t = [0usize; 3];
        for k in 0..3 {
            t[k] = *node_ids
                .get(&v[k])
                .ok_or_else(|| err(line_no, format!("unknown node id {}", v[k])))?;
        }
        cells.push(t);
    }
    Ok(RawMesh {
        lx,
        ly,
        nodes,
        cells,
    })
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid number `{s}`"),
    })
}

fn parse_i64(s: &str, line: usize) -> Result<i64> {
    s.parse::<i64>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid integer `{s}`"),
    })
}

pub fn write_mesh_string(mesh: &Mesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "PERIODIC {} {}", mesh.lx, mesh.ly);
    let _ = writeln!(out, "NODES");
    for (i, n) in mesh.nodes.iter().enumerate() {
        let _ = writeln!(out, "{} {} {}", i, n.position[0], n.position[1]);
    }
    let _ = writeln!(out, "CELLS");
    for (i, c) in mesh.cells.iter().enumerate() {
        let v = c.vertices;
        let _ = writeln!(out, "{} {} {} {}", i, v[0], v[1], v[2]);
    }
    out
}

pub fn write_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_mesh_string(mesh))?;
    Ok(())
}
