use crate::mesh::ElementGeometry;

/// Exact P1 element matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMatrices {
    /// `M_ij = int lambda_i lambda_j`
    pub mass: [[f64; 3]; 3],
    /// `K_ij = int grad lambda_i . grad lambda_j` (not scaled by mu)
    pub stiffness: [[f64; 3]; 3],
    /// `D^c_ij = int (d lambda_j / d x_c) lambda_i`
    pub div: [[[f64; 3]; 3]; 2],
}

pub fn local_galerkin_matrices(g: &ElementGeometry) -> LocalMatrices {
    let mut mass = [[0.0; 3]; 3];
    let mut stiffness = [[0.0; 3]; 3];
    let mut div = [[[0.0; 3]; 3]; 2];
    let grads = &g.shape_gradients;
    for i in 0..3 {
        for j in 0..3 {
            mass[i][j] = g.area / 12.0 * if i == j { 2.0 } else { 1.0 };
            stiffness[i][j] = g.area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
            for c in 0..2 {
                div[c][i][j] = g.area / 3.0 * grads[j][c];
            }
        }
    }
    LocalMatrices {
        mass,
        stiffness,
        div,
    }
}
