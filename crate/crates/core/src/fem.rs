//! P1 Lagrange space: quadrature, basis evaluation, degree-of-freedom layout
//! and nodal interpolation.

use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// Symmetric Gaussian rule on the reference triangle. Weights are normalized
/// to the reference measure, so a physical integral is `area * sum(w * f)`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    /// Rule exact for polynomials of total degree `degree`; supported degrees
    /// are 2 (3 points), 5 (7 points) and 8 (16 points).
    pub fn new(degree: usize) -> Result<Self> {
        let mut rule = Self {
            points: Vec::new(),
            weights: Vec::new(),
            degree,
        };
        match degree {
            2 => rule.orbit_aab(1.0 / 6.0, 1.0 / 3.0),
            5 => {
                let s15 = 15f64.sqrt();
                rule.centroid(9.0 / 40.0);
                rule.orbit_aab((6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
                rule.orbit_aab((6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
            }
            8 => {
                rule.centroid(0.144_315_607_677_787_17);
                rule.orbit_aab(0.459_292_588_292_723_16, 0.095_091_634_267_284_625);
                rule.orbit_aab(0.170_569_307_751_760_21, 0.103_217_370_534_718_25);
                rule.orbit_aab(0.050_547_228_317_030_975, 0.032_458_497_623_198_080);
                rule.orbit_abc(
                    0.008_394_777_409_957_605_3,
                    0.263_112_829_634_638_11,
                    0.027_230_314_174_434_994,
                );
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "no quadrature rule of degree {degree} (supported: 2, 5, 8)"
                )));
            }
        }
        Ok(rule)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Mean of `f` over the reference triangle.
    pub fn apply(&self, f: impl Fn([f64; 3]) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }

    fn centroid(&mut self, w: f64) {
        self.points.push([1.0 / 3.0; 3]);
        self.weights.push(w);
    }

    fn orbit_aab(&mut self, a: f64, w: f64) {
        let b = 1.0 - 2.0 * a;
        for p in [[a, a, b], [a, b, a], [b, a, a]] {
            self.points.push(p);
            self.weights.push(w);
        }
    }

    fn orbit_abc(&mut self, a: f64, b: f64, w: f64) {
        let c = 1.0 - a - b;
        for p in [
            [a, b, c],
            [a, c, b],
            [b, a, c],
            [b, c, a],
            [c, a, b],
            [c, b, a],
        ] {
            self.points.push(p);
            self.weights.push(w);
        }
    }
}

/// P1 basis values at a barycentric point: the coordinates themselves.
#[inline]
pub fn p1_eval(bary: [f64; 3]) -> [f64; 3] {
    bary
}

/// Blocked global numbering `[u1 | u2 | p | mean multiplier]`.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub n_u: usize,
    pub n_p: usize,
    /// Velocity dofs constrained to zero (both components of every boundary
    /// vertex), in global numbering and sorted.
    pub dirichlet_dofs: Vec<usize>,
    /// `mean_vector[i] = integral of phi_i over the domain`.
    pub mean_vector: Vec<f64>,
    is_dirichlet: Vec<bool>,
}

impl DofMap {
    pub fn new(mesh: &Mesh) -> Result<Self> {
        let n = mesh.n_vertices();
        let mut mean_vector = vec![0.0; n];
        for (k, tri) in mesh.triangles().iter().enumerate() {
            let g = mesh.element_geometry(k)?;
            for &v in tri {
                mean_vector[v] += g.area / 3.0;
            }
        }
        let mut dirichlet_dofs: Vec<usize> = mesh.boundary_vertices().to_vec();
        dirichlet_dofs.extend(mesh.boundary_vertices().iter().map(|&v| n + v));
        dirichlet_dofs.sort_unstable();
        let mut is_dirichlet = vec![false; 2 * n];
        for &d in &dirichlet_dofs {
            is_dirichlet[d] = true;
        }
        Ok(Self {
            n_u: n,
            n_p: n,
            dirichlet_dofs,
            mean_vector,
            is_dirichlet,
        })
    }

    /// Total system dimension `2 n_u + n_p + 1`.
    pub fn dimension(&self) -> usize {
        2 * self.n_u + self.n_p + 1
    }

    #[inline]
    pub fn velocity(&self, component: usize, vertex: usize) -> usize {
        component * self.n_u + vertex
    }

    #[inline]
    pub fn pressure(&self, vertex: usize) -> usize {
        2 * self.n_u + vertex
    }

    #[inline]
    pub fn multiplier(&self) -> usize {
        2 * self.n_u + self.n_p
    }

    #[inline]
    pub fn is_dirichlet(&self, dof: usize) -> bool {
        dof < self.is_dirichlet.len() && self.is_dirichlet[dof]
    }

    /// `mean_vector . p`, the discrete integral of a nodal pressure field.
    pub fn mean(&self, p: &[f64]) -> f64 {
        self.mean_vector.iter().zip(p).map(|(m, q)| m * q).sum()
    }
}

/// Vertex values of `g`.
pub fn interpolate(mesh: &Mesh, g: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    mesh.vertices().iter().map(|&[x, y]| g(x, y)).collect()
}
