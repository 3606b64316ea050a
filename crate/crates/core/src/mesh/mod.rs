//! Doubly periodic triangular meshes and their circumcentric duals.
//!
//! Orientation conventions used everywhere in the crate:
//!
//! - Cells are stored counter-clockwise; `edges[k]` and `neighbors[k]` are
//!   opposite `vertices[k]`.
//! - Each edge has an owner cell `i` and another cell `j`; the unit normal
//!   points from `i` to `j`. Edge fields are stored in this orientation.
//! - Node `+` of an edge lies to the right of the normal, node `-` to the
//!   left. Flank `i+` is the other cell across the edge of `i` that touches
//!   node `+` (similarly `i-`, `j+`, `j-`).
//! - Node fans and dual loops run counter-clockwise around the node.

pub mod geometry;
mod io;
mod regular;
mod validate;

use std::collections::HashMap;

use crate::error::{Error, Result};
use geometry::{
    circumcenter, clip_polygon, polygon_area, signed_area, sub, wrap_coord, wrap_delta,
};

pub use io::{read_mesh, read_mesh_str, write_mesh, write_mesh_string};
pub use regular::{
    build_refined_mesh, build_regular_mesh, refinement_ratio, Monitor, REFINE_ITERATIONS,
};
pub use validate::{ValidationReport, Violation};

pub type Point = [f64; 2];

/// Index of a flank in [`Edge::flanks`].
pub const I_MINUS: usize = 0;
pub const I_PLUS: usize = 1;
pub const J_MINUS: usize = 2;
pub const J_PLUS: usize = 3;

#[derive(Clone, Debug)]
pub struct Cell {
    pub vertices: [usize; 3],
    pub edges: [usize; 3],
    pub neighbors: [usize; 3],
    /// `+1` where this cell owns `edges[k]`, `-1` otherwise.
    pub signs: [f64; 3],
    pub area: f64,
    pub barycenter: Point,
    pub circumcenter: Point,
}

/// A neighboring edge seen from one of the two cells of an edge.
#[derive(Clone, Copy, Debug)]
pub struct Flank {
    pub edge: usize,
    /// Orientation of `edge` read outward from the base cell.
    pub sign: f64,
    /// The cell across `edge`.
    pub cell: usize,
    /// `|ζ_node ∩ T_base|` for the node this flank touches.
    pub kite: f64,
}

#[derive(Clone, Debug)]
pub struct Edge {
    /// Owner `i` and other cell `j`.
    pub cells: [usize; 2],
    /// `[minus, plus]` endpoint nodes.
    pub nodes: [usize; 2],
    /// Position of this edge in `cells[i].edges` and `cells[j].edges`.
    pub local: [usize; 2],
    pub length: f64,
    /// Signed distance between the circumcenters of `i` and `j` along the normal.
    pub dual_length: f64,
    pub normal: Point,
    pub midpoint: Point,
    /// Indexed by [`I_MINUS`], [`I_PLUS`], [`J_MINUS`], [`J_PLUS`].
    pub flanks: [Flank; 4],
}

#[derive(Clone, Copy, Debug)]
pub struct FanCell {
    pub cell: usize,
    /// `|ζ_e ∩ T_cell| / |ζ_e|`.
    pub k: f64,
    pub kite: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct DualEdge {
    pub edge: usize,
    /// `+1` if the edge normal points along the counter-clockwise loop.
    pub sign: f64,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub position: Point,
    pub dual_area: f64,
    /// Incident cells in counter-clockwise order.
    pub fan: Vec<FanCell>,
    /// `dual_loop[m]` separates `fan[m]` from `fan[m + 1]`.
    pub dual_loop: Vec<DualEdge>,
}

/// Vertices, triangles and periodicity; input of [`compute_dual_geometry`].
#[derive(Clone, Debug, PartialEq)]
pub struct RawMesh {
    pub lx: f64,
    pub ly: f64,
    pub nodes: Vec<Point>,
    pub cells: Vec<[usize; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterKind {
    Barycenter,
    Circumcenter,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub lx: f64,
    pub ly: f64,
    pub cells: Vec<Cell>,
    pub edges: Vec<Edge>,
    pub nodes: Vec<Node>,
}

impl RawMesh {
    /// Combinatorial checks only: edge multiplicity, Euler characteristic,
    /// closed node fans. Orientation of the input cells is irrelevant.
    pub fn validate_topology(&self) -> ValidationReport {
        let mut tris = self.cells.clone();
        // orientation does not matter for counting, but fans need a
        // consistent one; use geometric orientation when possible
        for t in tris.iter_mut() {
            if t.iter().all(|&v| v < self.nodes.len()) {
                let p = self.local_vertices(*t);
                if signed_area(p[0], p[1], p[2]) < 0.0 {
                    t.swap(1, 2);
                }
            }
        }
        topology_report(self.nodes.len(), &tris)
    }

    fn local_vertices(&self, t: [usize; 3]) -> [Point; 3] {
        local_vertices(&self.nodes, t, self.lx, self.ly)
    }
}

/// Vertex positions of `t` unwrapped around its first vertex.
pub(crate) fn local_vertices(nodes: &[Point], t: [usize; 3], lx: f64, ly: f64) -> [Point; 3] {
    let p0 = nodes[t[0]];
    let mut out = [p0; 3];
    for k in 1..3 {
        let p = nodes[t[k]];
        out[k] = [
            p0[0] + wrap_delta(p[0] - p0[0], lx),
            p0[1] + wrap_delta(p[1] - p0[1], ly),
        ];
    }
    out
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub(crate) fn topology_report(n_nodes: usize, tris: &[[usize; 3]]) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (c, t) in tris.iter().enumerate() {
        if t.iter().any(|&v| v >= n_nodes) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            report.push(Violation::BadCell { cell: c });
        }
    }
    if !report.is_empty() {
        return report;
    }

    let mut edge_cells: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (c, t) in tris.iter().enumerate() {
        for k in 0..3 {
            let key = edge_key(t[(k + 1) % 3], t[(k + 2) % 3]);
            edge_cells.entry(key).or_default().push(c);
        }
    }
    let mut keys: Vec<_> = edge_cells.keys().copied().collect();
    keys.sort_unstable();
    for key in &keys {
        let n = edge_cells[key].len();
        if n != 2 {
            report.push(Violation::EdgeCellCount {
                nodes: [key.0, key.1],
                count: n,
            });
        }
    }

    let chi = n_nodes as i64 - keys.len() as i64 + tris.len() as i64;
    if chi != 0 {
        report.push(Violation::EulerCharacteristic { value: chi });
    }

    // each node's incident cells must form a single closed fan
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n_nodes];
    for (c, t) in tris.iter().enumerate() {
        for &v in t {
            incident[v].push(c);
        }
    }
    // directed edge -> cell, for fan walking
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for (c, t) in tris.iter().enumerate() {
        for k in 0..3 {
            directed.insert((t[k], t[(k + 1) % 3]), c);
        }
    }
    for (e, inc) in incident.iter().enumerate() {
        if inc.is_empty() {
            report.push(Violation::BrokenFan { node: e });
            continue;
        }
        let mut seen = 0;
        let start = inc[0];
        let mut cur = start;
        loop {
            seen += 1;
            let t = tris[cur];
            let k = t.iter().position(|&v| v == e).unwrap_or(0);
            let c = t[(k + 2) % 3];
            // next cell counter-clockwise contains the directed edge e -> c
            match directed.get(&(e, c)) {
                Some(&next) if seen <= inc.len() => {
                    if next == start {
                        break;
                    }
                    cur = next;
                }
                _ => {
                    seen = usize::MAX;
                    break;
                }
            }
        }
        if seen != inc.len() {
            report.push(Violation::BrokenFan { node: e });
        }
    }
    report
}

/// Builds the full primal/dual geometry from vertices and triangles.
///
/// Clockwise input triangles are reoriented. Fails on zero-area triangles
/// and on non-torus topology; geometric quality (positive dual lengths,
/// K-coefficients) is left to [`Mesh::validate`].
pub fn compute_dual_geometry(raw: &RawMesh) -> Result<Mesh> {
    let (lx, ly) = (raw.lx, raw.ly);
    if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
        return Err(Error::Config(format!(
            "domain size must be positive, got {lx} x {ly}"
        )));
    }
    if raw
        .nodes
        .iter()
        .any(|p| !(p[0].is_finite() && p[1].is_finite()))
    {
        return Err(Error::NonFinite("mesh node coordinates"));
    }
    let positions: Vec<Point> = raw
        .nodes
        .iter()
        .map(|p| [wrap_coord(p[0], lx), wrap_coord(p[1], ly)])
        .collect();

    let mut tris = raw.cells.clone();
    for (c, t) in tris.iter_mut().enumerate() {
        if t.iter().any(|&v| v >= positions.len()) {
            return Err(Error::Topology(topology_report(
                positions.len(),
                &raw.cells,
            )));
        }
        let p = local_vertices(&positions, *t, lx, ly);
        let area = signed_area(p[0], p[1], p[2]);
        let scale = geometry::dot(sub(p[1], p[0]), sub(p[1], p[0]))
            .max(geometry::dot(sub(p[2], p[0]), sub(p[2], p[0])));
        if !(area.abs() > 1e-12 * scale) {
            return Err(Error::DegenerateCell { cell: c, area });
        }
        if area < 0.0 {
            t.swap(1, 2);
        }
    }

    let report = topology_report(positions.len(), &tris);
    if !report.is_empty() {
        return Err(Error::Topology(report));
    }

    // cells
    let mut cells: Vec<Cell> = tris
        .iter()
        .map(|&t| {
            let p = local_vertices(&positions, t, lx, ly);
            let cc = circumcenter(p[0], p[1], p[2]);
            let bc = [
                (p[0][0] + p[1][0] + p[2][0]) / 3.0,
                (p[0][1] + p[1][1] + p[2][1]) / 3.0,
            ];
            Cell {
                vertices: t,
                edges: [usize::MAX; 3],
                neighbors: [usize::MAX; 3],
                signs: [0.0; 3],
                area: signed_area(p[0], p[1], p[2]),
                barycenter: [wrap_coord(bc[0], lx), wrap_coord(bc[1], ly)],
                circumcenter: [wrap_coord(cc[0], lx), wrap_coord(cc[1], ly)],
            }
        })
        .collect();

    // edges: owner is the first cell that mentions the edge
    struct Proto {
        cells: [usize; 2],
        local: [usize; 2],
    }
    let mut protos: Vec<Proto> = Vec::with_capacity(tris.len() * 3 / 2);
    let mut lookup: HashMap<(usize, usize), usize> = HashMap::with_capacity(tris.len() * 3 / 2);
    for (c, t) in tris.iter().enumerate() {
        for k in 0..3 {
            let key = edge_key(t[(k + 1) % 3], t[(k + 2) % 3]);
            match lookup.get(&key) {
                Some(&e) => {
                    protos[e].cells[1] = c;
                    protos[e].local[1] = k;
                    cells[c].edges[k] = e;
                    cells[c].signs[k] = -1.0;
                }
                None => {
                    let e = protos.len();
                    lookup.insert(key, e);
                    protos.push(Proto {
                        cells: [c, usize::MAX],
                        local: [k, usize::MAX],
                    });
                    cells[c].edges[k] = e;
                    cells[c].signs[k] = 1.0;
                }
            }
        }
    }
    for p in &protos {
        let [i, j] = p.cells;
        cells[i].neighbors[p.local[0]] = j;
        cells[j].neighbors[p.local[1]] = i;
    }

    // nodes: fans, dual polygons, kites
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); positions.len()];
    for (c, t) in tris.iter().enumerate() {
        for (k, &v) in t.iter().enumerate() {
            incident[v].push((c, k));
        }
    }
    let mut nodes: Vec<Node> = Vec::with_capacity(positions.len());
    for (e, inc) in incident.iter().enumerate() {
        let origin = positions[e];
        let (mut cur, mut k) = inc[0];
        let mut fan_cells = Vec::with_capacity(inc.len());
        let mut dual_loop = Vec::with_capacity(inc.len());
        loop {
            fan_cells.push(cur);
            // crossing the edge (e, vertices[k+2]) which is opposite vertices[k+1]
            let l = (k + 1) % 3;
            dual_loop.push(DualEdge {
                edge: cells[cur].edges[l],
                sign: cells[cur].signs[l],
            });
            let next = cells[cur].neighbors[l];
            if next == inc[0].0 {
                break;
            }
            k = tris[next].iter().position(|&v| v == e).expect("fan walk");
            cur = next;
        }
        let rel = |c: usize| -> [Point; 3] {
            let t = tris[c];
            let mut q = [[0.0; 2]; 3];
            for m in 0..3 {
                let p = positions[t[m]];
                q[m] = [
                    wrap_delta(p[0] - origin[0], lx),
                    wrap_delta(p[1] - origin[1], ly),
                ];
            }
            q
        };
        let triangles: Vec<[Point; 3]> = fan_cells.iter().map(|&c| rel(c)).collect();
        let polygon: Vec<Point> = triangles
            .iter()
            .map(|q| circumcenter(q[0], q[1], q[2]))
            .collect();
        let dual_area = polygon_area(&polygon);
        let fan = fan_cells
            .iter()
            .zip(&triangles)
            .map(|(&c, q)| {
                let kite = polygon_area(&clip_polygon(&polygon, q));
                FanCell {
                    cell: c,
                    k: kite / dual_area,
                    kite,
                }
            })
            .collect();
        nodes.push(Node {
            position: origin,
            dual_area,
            fan,
            dual_loop,
        });
    }

    let kite_of = |node: usize, cell: usize| -> f64 {
        nodes[node]
            .fan
            .iter()
            .find(|f| f.cell == cell)
            .map(|f| f.kite)
            .unwrap_or(0.0)
    };

    let mut edges = Vec::with_capacity(protos.len());
    for p in &protos {
        let [i, j] = p.cells;
        let [ki, kj] = p.local;
        let t = tris[i];
        let q = local_vertices(&positions, t, lx, ly);
        let b = q[(ki + 1) % 3];
        let c = q[(ki + 2) % 3];
        let tangent = sub(c, b);
        let length = geometry::norm(tangent);
        let normal = [tangent[1] / length, -tangent[0] / length];
        let midpoint = [
            wrap_coord(0.5 * (b[0] + c[0]), lx),
            wrap_coord(0.5 * (b[1] + c[1]), ly),
        ];
        let plus = t[(ki + 1) % 3];
        let minus = t[(ki + 2) % 3];
        debug_assert_eq!(tris[j][(kj + 1) % 3], minus);

        let ci = cells[i].circumcenter;
        let cj = cells[j].circumcenter;
        let dc = [wrap_delta(cj[0] - ci[0], lx), wrap_delta(cj[1] - ci[1], ly)];
        let dual_length = geometry::dot(dc, normal);

        let flank = |base: usize, l: usize, node: usize| Flank {
            edge: cells[base].edges[l],
            sign: cells[base].signs[l],
            cell: cells[base].neighbors[l],
            kite: kite_of(node, base),
        };
        let flanks = [
            flank(i, (ki + 1) % 3, minus),
            flank(i, (ki + 2) % 3, plus),
            flank(j, (kj + 2) % 3, minus),
            flank(j, (kj + 1) % 3, plus),
        ];
        edges.push(Edge {
            cells: [i, j],
            nodes: [minus, plus],
            local: [ki, kj],
            length,
            dual_length,
            normal,
            midpoint,
            flanks,
        });
    }

    Ok(Mesh {
        lx,
        ly,
        cells,
        edges,
        nodes,
    })
}

impl Mesh {
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn domain_area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn raw(&self) -> RawMesh {
        RawMesh {
            lx: self.lx,
            ly: self.ly,
            nodes: self.nodes.iter().map(|n| n.position).collect(),
            cells: self.cells.iter().map(|c| c.vertices).collect(),
        }
    }

    /// Minimum-image displacement `b - a`.
    pub fn delta(&self, a: Point, b: Point) -> Point {
        [
            wrap_delta(b[0] - a[0], self.lx),
            wrap_delta(b[1] - a[1], self.ly),
        ]
    }

    pub fn distance(&self, a: Point, b: Point) -> f64 {
        geometry::norm(self.delta(a, b))
    }

    pub fn cell_center(&self, c: usize, kind: CenterKind) -> Point {
        match kind {
            CenterKind::Barycenter => self.cells[c].barycenter,
            CenterKind::Circumcenter => self.cells[c].circumcenter,
        }
    }

    /// Vertex positions of cell `c`, unwrapped around its first vertex.
    pub fn cell_vertices(&self, c: usize) -> [Point; 3] {
        let v = self.cells[c].vertices;
        let p0 = self.nodes[v[0]].position;
        let mut out = [p0; 3];
        for k in 1..3 {
            let d = self.delta(p0, self.nodes[v[k]].position);
            out[k] = [p0[0] + d[0], p0[1] + d[1]];
        }
        out
    }

    /// Edge shared by cells `a` and `b`, with the orientation sign of `a -> b`.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<(usize, f64)> {
        let c = &self.cells[a];
        (0..3)
            .find(|&k| c.neighbors[k] == b)
            .map(|k| (c.edges[k], c.signs[k]))
    }

    pub fn min_dual_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.dual_length)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_edge_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.length)
            .fold(f64::INFINITY, f64::min)
    }

    /// Cell whose barycenter is nearest to `p` (periodic distance).
    pub fn nearest_cell(&self, p: Point) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (c, cell) in self.cells.iter().enumerate() {
            let d = self.distance(p, cell.barycenter);
            if d < best.0 {
                best = (d, c);
            }
        }
        best.1
    }

    /// Dual-loop circulation `Σ sign · w_e` around node `e`.
    pub fn loop_sum(&self, e: usize, w: &[f64]) -> f64 {
        self.nodes[e]
            .dual_loop
            .iter()
            .map(|d| d.sign * w[d.edge])
            .sum()
    }

    pub fn k_coefficient(&self, node: usize, cell: usize) -> f64 {
        self.nodes[node]
            .fan
            .iter()
            .find(|f| f.cell == cell)
            .map(|f| f.k)
            .unwrap_or(0.0)
    }
}
