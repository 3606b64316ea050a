use std::fmt;

use super::{topology_report, Mesh};

const AREA_TOL: f64 = 1e-12;
const K_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    BadCell { cell: usize },
    EdgeCellCount { nodes: [usize; 2], count: usize },
    EulerCharacteristic { value: i64 },
    BrokenFan { node: usize },
    NonPositiveArea { cell: usize, area: f64 },
    AreaPartition { relative_error: f64 },
    DualAreaPartition { relative_error: f64 },
    KPartition { node: usize, sum: f64 },
    KOutOfRange { node: usize, cell: usize, k: f64 },
    NonPositiveDualLength { edge: usize, dual_length: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadCell { cell } => write!(f, "cell {cell}: invalid vertex list"),
            Violation::EdgeCellCount { nodes, count } => write!(
                f,
                "edge ({}, {}): {count} incident cells, expected 2",
                nodes[0], nodes[1]
            ),
            Violation::EulerCharacteristic { value } => {
                write!(f, "Euler characteristic {value}, expected 0 for a torus")
            }
            Violation::BrokenFan { node } => {
                write!(
                    f,
                    "node {node}: incident cells do not form a single closed fan"
                )
            }
            Violation::NonPositiveArea { cell, area } => {
                write!(f, "cell {cell}: area {area:e} km^2")
            }
            Violation::AreaPartition { relative_error } => {
                write!(
                    f,
                    "cell areas miss the domain area by {relative_error:e} (relative)"
                )
            }
            Violation::DualAreaPartition { relative_error } => write!(
                f,
                "dual cell areas miss the domain area by {relative_error:e} (relative)"
            ),
            Violation::KPartition { node, sum } => {
                write!(f, "node {node}: K coefficients sum to {sum}")
            }
            Violation::KOutOfRange { node, cell, k } => {
                write!(f, "node {node}, cell {cell}: K = {k} outside (0, 1)")
            }
            Violation::NonPositiveDualLength { edge, dual_length } => {
                write!(f, "edge {edge}: dual length {dual_length:e} km")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "- {v}")?;
        }
        Ok(())
    }
}

impl Mesh {
    /// Checks every structural and geometric invariant; never fails.
    pub fn validate(&self) -> ValidationReport {
        let tris: Vec<[usize; 3]> = self.cells.iter().map(|c| c.vertices).collect();
        let mut report = topology_report(self.nodes.len(), &tris);
        if !report.is_empty() {
            return report;
        }
        let total = self.domain_area();

        for (c, cell) in self.cells.iter().enumerate() {
            if !(cell.area > 0.0) {
                report.push(Violation::NonPositiveArea {
                    cell: c,
                    area: cell.area,
                });
            }
        }
        let area: f64 = self.cells.iter().map(|c| c.area).sum();
        let rel = (area - total).abs() / total;
        if !(rel <= AREA_TOL) {
            report.push(Violation::AreaPartition {
                relative_error: rel,
            });
        }
        let dual: f64 = self.nodes.iter().map(|n| n.dual_area).sum();
        let rel = (dual - total).abs() / total;
        if !(rel <= AREA_TOL) {
            report.push(Violation::DualAreaPartition {
                relative_error: rel,
            });
        }

        // nodes of the two cells of a non-positive dual edge are reported
        // through that edge
        let mut folded = vec![false; self.nodes.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            if !(edge.dual_length > 0.0) {
                report.push(Violation::NonPositiveDualLength {
                    edge: e,
                    dual_length: edge.dual_length,
                });
                for &c in &edge.cells {
                    for &n in &self.cells[c].vertices {
                        folded[n] = true;
                    }
                }
            }
        }

        for (e, node) in self.nodes.iter().enumerate() {
            if folded[e] {
                continue;
            }
            let sum: f64 = node.fan.iter().map(|f| f.k).sum();
            if !((sum - 1.0).abs() <= K_TOL) {
                report.push(Violation::KPartition { node: e, sum });
            }
            for f in &node.fan {
                if !(f.k > 0.0 && f.k < 1.0) {
                    report.push(Violation::KOutOfRange {
                        node: e,
                        cell: f.cell,
                        k: f.k,
                    });
                }
            }
        }

        report
    }
}
