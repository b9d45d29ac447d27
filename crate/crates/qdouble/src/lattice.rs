//! Planar square two-complex with boundary: oriented edges, faces with
//! counterclockwise boundary cycles, ancilla slots on vertices and faces,
//! and the canonical site ordering shared by every protocol.
//!
//! Conventions (fixed once, everything downstream keyed off them):
//! row index i grows upward, column index j grows rightward, v_{0,0} is the
//! bottom-left corner. Horizontal edges point from v_{i,j} to v_{i,j+1},
//! vertical edges from v_{i,j} to v_{i+1,j}. Faces are oriented
//! counterclockwise; o_f(e) = +1 iff the edge direction agrees with the
//! traversal of f's counterclockwise boundary.

use crate::error::QdError;
use serde::{Deserialize, Serialize};

/// Vertex coordinate (row, col) with row 0 at the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub row: usize,
    pub col: usize,
}

/// Face coordinate (row, col); face f_{i,j} has corners v_{i,j}, v_{i,j+1},
/// v_{i+1,j}, v_{i+1,j+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub row: usize,
    pub col: usize,
}

pub fn v(row: usize, col: usize) -> Vertex {
    Vertex { row, col }
}

pub fn f(row: usize, col: usize) -> Face {
    Face { row, col }
}

/// Identifier of a lattice site holding one group-valued qudit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteId {
    /// System particle on the oriented edge from `from` to `to`.
    Edge { from: Vertex, to: Vertex },
    VertexAncilla(Vertex),
    FaceAncilla(Face),
}

/// Which way an edge leaves a vertex star.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarDirection {
    /// Edge = [v, *]: points out of the vertex.
    Out,
    /// Edge = [*, v]: points into the vertex.
    In,
}

/// Four corners of a face, named from the face's perspective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    BottomLeft,
    BottomRight,
    TopRight,
    TopLeft,
}

/// A face boundary walked counterclockwise from a base vertex. Each entry is
/// (edge index in canonical order, o_f(e)); the first entry is the first
/// edge traversed.
#[derive(Debug, Clone)]
pub struct OrientedCycle {
    pub face: Face,
    pub base: Vertex,
    pub edges: Vec<(usize, i8)>,
}

/// Planar square lattice with `rows` × `cols` faces.
#[derive(Debug, Clone)]
pub struct LatticeGeometry {
    pub rows: usize,
    pub cols: usize,
    /// Oriented edges in canonical order: all horizontal row-major, then all
    /// vertical row-major.
    pub edges: Vec<(Vertex, Vertex)>,
}

impl LatticeGeometry {
    pub fn vertex_count(&self) -> usize {
        (self.rows + 1) * (self.cols + 1)
    }

    pub fn edge_count(&self) -> usize {
        self.rows * (self.cols + 1) + self.cols * (self.rows + 1)
    }

    pub fn face_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Total site count: edges, then vertex ancillas, then face ancillas.
    pub fn site_count(&self) -> usize {
        self.edge_count() + self.vertex_count() + self.face_count()
    }

    fn horizontal_count(&self) -> usize {
        (self.rows + 1) * self.cols
    }

    /// Canonical index of the horizontal edge from v_{i,j} to v_{i,j+1}.
    pub fn h_edge(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.rows && j < self.cols);
        i * self.cols + j
    }

    /// Canonical index of the vertical edge from v_{i,j} to v_{i+1,j}.
    pub fn v_edge(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.rows && j <= self.cols);
        self.horizontal_count() + i * (self.cols + 1) + j
    }

    pub fn vertex_site(&self, vx: Vertex) -> usize {
        debug_assert!(vx.row <= self.rows && vx.col <= self.cols);
        self.edge_count() + vx.row * (self.cols + 1) + vx.col
    }

    pub fn face_site(&self, fc: Face) -> usize {
        debug_assert!(fc.row < self.rows && fc.col < self.cols);
        self.edge_count() + self.vertex_count() + fc.row * self.cols + fc.col
    }

    /// SiteId of the canonical site `index`.
    pub fn site_id(&self, index: usize) -> SiteId {
        let e = self.edge_count();
        let v_ = self.vertex_count();
        if index < e {
            let (from, to) = self.edges[index];
            SiteId::Edge { from, to }
        } else if index < e + v_ {
            let k = index - e;
            SiteId::VertexAncilla(v(k / (self.cols + 1), k % (self.cols + 1)))
        } else {
            let k = index - e - v_;
            SiteId::FaceAncilla(f(k / self.cols, k % self.cols))
        }
    }

    /// Canonical position of a SiteId.
    pub fn site_index(&self, id: SiteId) -> usize {
        match id {
            SiteId::Edge { from, to } => {
                if from.row == to.row {
                    self.h_edge(from.row, from.col.min(to.col))
                } else {
                    self.v_edge(from.row.min(to.row), from.col)
                }
            }
            SiteId::VertexAncilla(vx) => self.vertex_site(vx),
            SiteId::FaceAncilla(fc) => self.face_site(fc),
        }
    }

    pub fn corner(&self, fc: Face, which: Corner) -> Vertex {
        match which {
            Corner::BottomLeft => v(fc.row, fc.col),
            Corner::BottomRight => v(fc.row, fc.col + 1),
            Corner::TopRight => v(fc.row + 1, fc.col + 1),
            Corner::TopLeft => v(fc.row + 1, fc.col),
        }
    }

    pub fn corners(&self, fc: Face) -> [Vertex; 4] {
        [
            self.corner(fc, Corner::BottomLeft),
            self.corner(fc, Corner::BottomRight),
            self.corner(fc, Corner::TopRight),
            self.corner(fc, Corner::TopLeft),
        ]
    }

    /// Boundary edges of a face as (edge, o_f): bottom, right, top, left.
    pub fn face_edges(&self, fc: Face) -> [(usize, i8); 4] {
        [
            (self.h_edge(fc.row, fc.col), 1),      // bottom: traversed with
            (self.v_edge(fc.row, fc.col + 1), 1),  // right: with
            (self.h_edge(fc.row + 1, fc.col), -1), // top: against
            (self.v_edge(fc.row, fc.col), -1),     // left: against
        ]
    }

    /// The counterclockwise boundary cycle of `fc` starting at `base`.
    pub fn face_cycle(&self, fc: Face, base: Vertex) -> Result<OrientedCycle, QdError> {
        let corners = self.corners(fc);
        let Some(start) = corners.iter().position(|&c| c == base) else {
            return Err(QdError::Lattice(format!(
                "vertex {base:?} is not a corner of face {fc:?}"
            )));
        };
        // Edge k of the ccw walk leaves corner k (BL, BR, TR, TL order).
        let walk = [
            (self.h_edge(fc.row, fc.col), 1i8),
            (self.v_edge(fc.row, fc.col + 1), 1),
            (self.h_edge(fc.row + 1, fc.col), -1),
            (self.v_edge(fc.row, fc.col), -1),
        ];
        let edges = (0..4).map(|k| walk[(start + k) % 4]).collect();
        Ok(OrientedCycle { face: fc, base, edges })
    }

    /// All incident edges of a vertex, tagged out if e = [v,*], in if [*,v].
    pub fn vertex_star(&self, vx: Vertex) -> Vec<(usize, StarDirection)> {
        let mut star = Vec::with_capacity(4);
        if vx.col < self.cols {
            star.push((self.h_edge(vx.row, vx.col), StarDirection::Out)); // right
        }
        if vx.row < self.rows {
            star.push((self.v_edge(vx.row, vx.col), StarDirection::Out)); // up
        }
        if vx.col > 0 {
            star.push((self.h_edge(vx.row, vx.col - 1), StarDirection::In)); // left
        }
        if vx.row > 0 {
            star.push((self.v_edge(vx.row - 1, vx.col), StarDirection::In)); // down
        }
        star
    }

    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.rows).flat_map(move |i| (0..self.cols).map(move |j| f(i, j)))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..=self.rows).flat_map(move |i| (0..=self.cols).map(move |j| v(i, j)))
    }
}

/// Build an n×m-face lattice ((n+1)×(m+1) vertices).
pub fn build_lattice(rows: usize, cols: usize) -> Result<LatticeGeometry, QdError> {
    if rows < 1 || cols < 1 {
        return Err(QdError::Lattice(format!(
            "lattice needs at least one face, got {rows}x{cols}"
        )));
    }
    let mut edges = Vec::new();
    for i in 0..=rows {
        for j in 0..cols {
            edges.push((v(i, j), v(i, j + 1)));
        }
    }
    for i in 0..rows {
        for j in 0..=cols {
            edges.push((v(i, j), v(i + 1, j)));
        }
    }
    Ok(LatticeGeometry { rows, cols, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let g = build_lattice(1, 2).unwrap();
        assert_eq!(g.edge_count(), 7);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.face_count(), 2);
        let g = build_lattice(2, 2).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.face_count(), 4);
        let g = build_lattice(1, 1).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.face_count(), 1);
        assert!(build_lattice(0, 3).is_err());
    }

    #[test]
    fn site_order_bijection() {
        let g = build_lattice(2, 3).unwrap();
        for idx in 0..g.site_count() {
            assert_eq!(g.site_index(g.site_id(idx)), idx);
        }
        // Edges come first, horizontal before vertical, then vertex and
        // face ancillas.
        assert!(matches!(g.site_id(0), SiteId::Edge { from, to } if from == v(0,0) && to == v(0,1)));
        assert!(matches!(g.site_id(g.edge_count()), SiteId::VertexAncilla(x) if x == v(0, 0)));
        let last = g.site_count() - 1;
        assert!(matches!(g.site_id(last), SiteId::FaceAncilla(x) if x == f(1, 2)));
    }

    #[test]
    fn face_cycle_signs_and_rotation() {
        let g = build_lattice(2, 2).unwrap();
        let fc = f(0, 0);
        // Starting at the top-right corner the ccw walk is top, left,
        // bottom, right with signs −1, −1, +1, +1.
        let cyc = g.face_cycle(fc, v(1, 1)).unwrap();
        assert_eq!(
            cyc.edges,
            vec![
                (g.h_edge(1, 0), -1),
                (g.v_edge(0, 0), -1),
                (g.h_edge(0, 0), 1),
                (g.v_edge(0, 1), 1),
            ]
        );
        // Each corner's cycle is a rotation of the same signed sequence.
        let base_cycle = g.face_cycle(fc, v(0, 0)).unwrap().edges;
        for (k, corner) in g.corners(fc).iter().enumerate() {
            let cyc = g.face_cycle(fc, *corner).unwrap().edges;
            for (pos, &entry) in cyc.iter().enumerate() {
                assert_eq!(entry, base_cycle[(pos + k) % 4]);
            }
        }
        // Signs are two +1 and two −1 in cyclic order.
        let signs: Vec<i8> = base_cycle.iter().map(|&(_, s)| s).collect();
        assert_eq!(signs, vec![1, 1, -1, -1]);
        // Base not on the face is rejected.
        assert!(g.face_cycle(fc, v(2, 2)).is_err());
    }

    #[test]
    fn edge_in_two_faces_with_opposite_signs() {
        let g = build_lattice(2, 3).unwrap();
        let mut seen: std::collections::HashMap<usize, Vec<i8>> = Default::default();
        for fc in g.faces().collect::<Vec<_>>() {
            for (e, s) in g.face_edges(fc) {
                seen.entry(e).or_default().push(s);
            }
        }
        for (_, signs) in seen {
            assert!(signs.len() <= 2);
            if signs.len() == 2 {
                assert_eq!(signs[0] + signs[1], 0);
            }
        }
    }

    #[test]
    fn vertex_stars() {
        let g = build_lattice(2, 2).unwrap();
        // Interior vertex: 4 edges, right and up out, left and down in.
        let star = g.vertex_star(v(1, 1));
        assert_eq!(star.len(), 4);
        let outs: Vec<usize> = star
            .iter()
            .filter(|(_, d)| *d == StarDirection::Out)
            .map(|&(e, _)| e)
            .collect();
        assert_eq!(outs, vec![g.h_edge(1, 1), g.v_edge(1, 1)]);
        // Corner v00: both edges out.
        let star = g.vertex_star(v(0, 0));
        assert_eq!(star.len(), 2);
        assert!(star.iter().all(|(_, d)| *d == StarDirection::Out));
        // Star edges of v are disjoint from the boundary of faces not
        // containing v.
        let far_face_edges = g.face_edges(f(0, 0));
        let star = g.vertex_star(v(2, 2));
        for (e, _) in star {
            assert!(!far_face_edges.iter().any(|&(fe, _)| fe == e));
        }
    }
}
