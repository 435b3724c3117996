//! Structured triangulations of the unit square and per-element P1 geometry.

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Triangulation of the unit square.
///
/// Vertices are stored row-major: vertex `(i, j)` sits at `(i/nx, j/nx)` with
/// index `j * (nx + 1) + i`. Triangles are counter-clockwise.
#[derive(Debug, Clone)]
pub struct Mesh {
    nx: usize,
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    is_boundary: Vec<bool>,
    boundary_vertices: Vec<usize>,
}

/// Constant-gradient geometry of one P1 triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    pub area: f64,
    pub vertex_coords: [Point; 3],
    /// Gradients of the three barycentric coordinates.
    pub shape_gradients: [[f64; 2]; 3],
    /// Longest edge length; used as the element size `h_k`.
    pub diameter: f64,
}

impl ElementGeometry {
    /// Geometry of the triangle with the given (counter-clockwise) corners.
    pub fn from_vertices(vertex_coords: [Point; 3]) -> Option<Self> {
        let [a, b, c] = vertex_coords;
        let e1 = [b[0] - a[0], b[1] - a[1]];
        let e2 = [c[0] - a[0], c[1] - a[1]];
        let det = e1[0] * e2[1] - e1[1] * e2[0];
        if det <= 0.0 || !det.is_finite() {
            return None;
        }
        // grad(lambda_i) = rot(opposite edge) / det
        let mut shape_gradients = [[0.0; 2]; 3];
        for (i, g) in shape_gradients.iter_mut().enumerate() {
            let p = vertex_coords[(i + 1) % 3];
            let q = vertex_coords[(i + 2) % 3];
            *g = [(p[1] - q[1]) / det, (q[0] - p[0]) / det];
        }
        let edge = |p: Point, q: Point| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
        let diameter = edge(a, b).max(edge(b, c)).max(edge(c, a));
        Some(Self {
            area: 0.5 * det,
            vertex_coords,
            shape_gradients,
            diameter,
        })
    }

    /// Maps barycentric coordinates to a physical point.
    #[inline]
    pub fn point(&self, bary: [f64; 3]) -> Point {
        let [a, b, c] = self.vertex_coords;
        [
            bary[0] * a[0] + bary[1] * b[0] + bary[2] * c[0],
            bary[0] * a[1] + bary[1] * b[1] + bary[2] * c[1],
        ]
    }
}

impl Mesh {
    /// Uniform `nx` x `nx` grid, each cell cut along its bottom-left to
    /// top-right diagonal.
    pub fn unit_square(nx: usize) -> Result<Self> {
        if nx == 0 {
            return Err(Error::InvalidArgument("nx must be at least 1".into()));
        }
        let n1 = nx + 1;
        let h = 1.0 / nx as f64;
        let mut vertices = Vec::with_capacity(n1 * n1);
        let mut is_boundary = Vec::with_capacity(n1 * n1);
        for j in 0..n1 {
            for i in 0..n1 {
                // exact 0 and 1 at the ends
                let x = if i == nx { 1.0 } else { i as f64 * h };
                let y = if j == nx { 1.0 } else { j as f64 * h };
                vertices.push([x, y]);
                is_boundary.push(i == 0 || j == 0 || i == nx || j == nx);
            }
        }
        let mut triangles = Vec::with_capacity(2 * nx * nx);
        for j in 0..nx {
            for i in 0..nx {
                let v00 = j * n1 + i;
                let v10 = v00 + 1;
                let v01 = v00 + n1;
                let v11 = v01 + 1;
                triangles.push([v00, v10, v11]);
                triangles.push([v00, v11, v01]);
            }
        }
        let boundary_vertices = (0..is_boundary.len()).filter(|&v| is_boundary[v]).collect();
        Ok(Self {
            nx,
            vertices,
            triangles,
            is_boundary,
            boundary_vertices,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    /// Grid label `1/nx` used in convergence tables.
    pub fn grid_size(&self) -> f64 {
        1.0 / self.nx as f64
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_vertices(&self) -> &[usize] {
        &self.boundary_vertices
    }

    pub fn is_boundary(&self, vertex: usize) -> bool {
        self.is_boundary[vertex]
    }

    pub fn element_geometry(&self, k: usize) -> Result<ElementGeometry> {
        let tri = self.triangles.get(k).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "triangle index {k} out of range ({} triangles)",
                self.n_triangles()
            ))
        })?;
        let coords = tri.map(|v| self.vertices[v]);
        ElementGeometry::from_vertices(coords).ok_or_else(|| {
            let [a, b, c] = coords;
            let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
            Error::DegenerateElement { element: k, area }
        })
    }

    /// Geometry of every element, in element order.
    pub fn geometries(&self) -> Result<Vec<ElementGeometry>> {
        (0..self.n_triangles())
            .map(|k| self.element_geometry(k))
            .collect()
    }
}
