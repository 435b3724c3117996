#![allow(dead_code)]

use stokes_asgs::asgs::{FieldState, Forcing, StabilizationParams, SubscaleState, TimeScheme};
use stokes_asgs::fem::QuadratureRule;
use stokes_asgs::mesh::Mesh;

/// Dense system `(matrix, rhs)` for one step, assembled from the weak form
/// by naive loops over elements, test and trial functions and quadrature
/// points. Shares only the mesh connectivity and the quadrature rule with
/// the library (the rule fixes where subscales live).
pub fn dense_oracle(
    mesh: &Mesh,
    scheme: &TimeScheme,
    params: &StabilizationParams,
    state_n: &FieldState,
    subscale_n: &SubscaleState,
    forcing: &dyn Forcing,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let nv = mesh.n_vertices();
    let n = 3 * nv + 1;
    let ui = |c: usize, v: usize| c * nv + v;
    let pi = |v: usize| 2 * nv + v;
    let lm = 3 * nv;
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    let mut mean = vec![0.0; nv];

    let dt = scheme.dt();
    let alpha = 0.5 * (1.0 + scheme.theta());
    let dt_eff = alpha * dt;
    let t0 = state_n.t;
    let mu = params.mu;
    let rule = QuadratureRule::new(5).unwrap();

    for (k, tri) in mesh.triangles().iter().enumerate() {
        let p = tri.map(|v| mesh.vertices()[v]);
        let (e1, e2) = (
            [p[1][0] - p[0][0], p[1][1] - p[0][1]],
            [p[2][0] - p[0][0], p[2][1] - p[0][1]],
        );
        let det = e1[0] * e2[1] - e1[1] * e2[0];
        let area = 0.5 * det.abs();
        // lambda_1 = ( e2[1] dx - e2[0] dy)/det, lambda_2 = (-e1[1] dx + e1[0] dy)/det
        let g1 = [e2[1] / det, -e2[0] / det];
        let g2 = [-e1[1] / det, e1[0] / det];
        let grad = [[-g1[0] - g2[0], -g1[1] - g2[1]], g1, g2];
        let len = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        let h = len(p[0], p[1]).max(len(p[1], p[2])).max(len(p[0], p[2]));
        let (tau1, tau2) = if params.stabilized {
            let t1 = h * h / (params.c1 * mu);
            (t1, params.c2 / t1)
        } else {
            (0.0, 0.0)
        };
        let tau1p = tau1 * dt_eff / (dt_eff + tau1);
        let m = tau1 / (dt_eff + tau1);
        let w = 1.0 - m;

        let un = |c: usize, lam: [f64; 3]| {
            (0..3)
                .map(|a| lam[a] * state_n.velocity(c)[tri[a]])
                .sum::<f64>()
        };
        let grad_un = |c: usize, d: usize| {
            (0..3)
                .map(|a| grad[a][d] * state_n.velocity(c)[tri[a]])
                .sum::<f64>()
        };
        let div_n = grad_un(0, 0) + grad_un(1, 1);

        for (q, (lam, &wq)) in rule.points.iter().zip(&rule.weights).enumerate() {
            let wq = wq * area;
            let x = lam[0] * p[0][0] + lam[1] * p[1][0] + lam[2] * p[2][0];
            let y = lam[0] * p[0][1] + lam[1] * p[1][1] + lam[2] * p[2][1];
            let f1 = forcing.eval(x, y, t0 + dt);
            let f0 = forcing.eval(x, y, t0);
            let f = [0, 1].map(|c| alpha * f1[c] + (1.0 - alpha) * f0[c]);
            let up = subscale_n.get(k, q);
            // Galerkin has no subscale history
            let d1 = if params.stabilized {
                [up[0] / dt_eff, up[1] / dt_eff]
            } else {
                [0.0; 2]
            };
            let u0 = [un(0, *lam), un(1, *lam)];

            for i in 0..3 {
                let vi = tri[i];
                mean[vi] += wq * lam[i];
                // momentum rows
                for c in 0..2 {
                    let row = ui(c, vi);
                    for j in 0..3 {
                        let vj = tri[j];
                        for d in 0..2 {
                            let mut val = alpha * tau2 * grad[j][d] * grad[i][c];
                            if c == d {
                                val += lam[j] * lam[i] / dt
                                    + alpha
                                        * mu
                                        * (grad[j][0] * grad[i][0] + grad[j][1] * grad[i][1])
                                    - m * lam[j] * lam[i] / dt;
                            }
                            a[row][ui(d, vj)] += wq * val;
                        }
                        a[row][pi(vj)] += wq * (-lam[j] * grad[i][c] - m * grad[j][c] * lam[i]);
                    }
                    let rhs = u0[c] * lam[i] / dt
                        - (1.0 - alpha)
                            * mu
                            * (grad_un(c, 0) * grad[i][0] + grad_un(c, 1) * grad[i][1])
                        - (1.0 - alpha) * tau2 * div_n * grad[i][c]
                        - m * u0[c] * lam[i] / dt
                        + w * d1[c] * lam[i]
                        + w * f[c] * lam[i];
                    b[row] += wq * rhs;
                }
                // continuity rows
                let row = pi(vi);
                for j in 0..3 {
                    let vj = tri[j];
                    for d in 0..2 {
                        a[row][ui(d, vj)] +=
                            wq * (alpha * grad[j][d] * lam[i] + tau1p / dt * lam[j] * grad[i][d]);
                    }
                    a[row][pi(vj)] +=
                        wq * tau1p * (grad[j][0] * grad[i][0] + grad[j][1] * grad[i][1]);
                }
                let mut rhs = -(1.0 - alpha) * div_n * lam[i];
                for c in 0..2 {
                    rhs += tau1p * (u0[c] / dt + d1[c] + f[c]) * grad[i][c];
                }
                b[row] += wq * rhs;
            }
        }
    }
    for &v in mesh.boundary_vertices() {
        for c in 0..2 {
            let r = ui(c, v);
            a[r].iter_mut().for_each(|x| *x = 0.0);
            a[r][r] = 1.0;
            b[r] = 0.0;
        }
    }
    for v in 0..nv {
        a[pi(v)][lm] = mean[v];
        a[lm][pi(v)] = mean[v];
    }
    (a, b)
}

/// Largest entrywise difference between two dense matrices.
pub fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Deterministic pseudo-random subscale field.
pub fn pseudo_random_subscales(n_elements: usize, n_qp: usize, seed: u64) -> SubscaleState {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n_elements * n_qp)
        .map(|_| [rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3)])
        .collect();
    SubscaleState::from_values(n_qp, values)
}

/// Largest deviations of iterated subscale updates from their closed forms on
/// a 4 x 4 mesh: `(series, decay)` after `steps` updates.
///
/// * frozen residual `R = f - grad p` with `u' = 0` initially:
///   `u'_n = tau1' R sum_{i<n} m^i`, `m = tau1 / (dt_eff + tau1)`;
/// * zero residual: `u'_n = m^n u'_0`.
pub fn subscale_recursion_errors(scheme: &TimeScheme, steps: usize) -> (f64, f64) {
    use stokes_asgs::asgs::Discretization;
    use stokes_asgs::fem::DofMap;

    let params = StabilizationParams::default();
    let nx = 4;
    let mesh = Mesh::unit_square(nx).unwrap();
    let dm = DofMap::new(&mesh).unwrap();
    let disc = Discretization::new(&mesh, &dm, *scheme, params).unwrap();
    let h2 = 2.0 / (nx * nx) as f64;
    let tau1 = h2 / (params.c1 * params.mu);
    let dt_eff = 0.5 * (1.0 + scheme.theta()) * scheme.dt();
    let tau1p = tau1 * dt_eff / (dt_eff + tau1);
    let m = tau1 / (dt_eff + tau1);

    // frozen residual: u = 0 at both levels, p = 2x - y, steady forcing
    let forcing = |x: f64, y: f64, _t: f64| [(3.0 * x).sin() + y, x * y - 1.0];
    let mut state = FieldState::zeros(mesh.n_vertices(), 0.0);
    for (v, p) in mesh.vertices().iter().enumerate() {
        state.p[v] = 2.0 * p[0] - p[1];
    }
    let mut sub = disc.zero_subscales();
    for _ in 0..steps {
        sub = disc
            .update_subscales(&state, &state, &sub, &forcing)
            .unwrap();
    }
    let partial: f64 = (0..steps).map(|i| m.powi(i as i32)).sum();
    let mut series_err = 0.0f64;
    for (k, &[x, y]) in disc.qp_coords().iter().enumerate() {
        let f = forcing(x, y, 0.0);
        let r = [f[0] - 2.0, f[1] + 1.0];
        let got = sub.values()[k];
        for c in 0..2 {
            series_err = series_err.max((got[c] - tau1p * r[c] * partial).abs());
        }
    }

    // zero residual decay from a pseudo-random start
    let zero = FieldState::zeros(mesh.n_vertices(), 0.0);
    let start = pseudo_random_subscales(mesh.n_triangles(), disc.n_qp(), 11);
    let mut sub = start.clone();
    for _ in 0..steps {
        sub = disc
            .update_subscales(&zero, &zero, &sub, &|_, _, _| [0.0, 0.0])
            .unwrap();
    }
    let factor = m.powi(steps as i32);
    let decay_err = sub
        .values()
        .iter()
        .zip(start.values())
        .flat_map(|(a, b)| [(a[0] - factor * b[0]).abs(), (a[1] - factor * b[1]).abs()])
        .fold(0.0, f64::max);
    (series_err, decay_err)
}

/// Lumped-mass L2 distance between two velocity fields.
pub fn velocity_distance(mean_vector: &[f64], a: &FieldState, b: &FieldState) -> f64 {
    mean_vector
        .iter()
        .enumerate()
        .map(|(v, w)| w * ((a.u1[v] - b.u1[v]).powi(2) + (a.u2[v] - b.u2[v]).powi(2)))
        .sum::<f64>()
        .sqrt()
}

/// Largest deviations over `n` random space-time points of `(forcing, divergence)`:
/// the closed-form forcing against central differences of
/// `du/dt - mu lap u + grad p`, and the pointwise divergence of the exact velocity.
pub fn forcing_oracle_errors(n: usize, seed: u64) -> (f64, f64) {
    use rand::{Rng, SeedableRng};
    use stokes_asgs::manufactured::{ExactSolution, ManufacturedSolution};

    let sol = ManufacturedSolution::new(0.1);
    let h = 1e-5;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (mut f_err, mut div_err) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let x: f64 = rng.random_range(0.0..1.0);
        let y: f64 = rng.random_range(0.0..1.0);
        let t: f64 = rng.random_range(0.0..1.0);
        let u = |x, y, t| sol.velocity(x, y, t);
        let p = |x, y| sol.pressure(x, y, t);
        let c = u(x, y, t);
        let f = sol.forcing(x, y, t);
        for k in 0..2 {
            let dudt = (u(x, y, t + h)[k] - u(x, y, t - h)[k]) / (2.0 * h);
            let lap =
                (u(x + h, y, t)[k] + u(x - h, y, t)[k] + u(x, y + h, t)[k] + u(x, y - h, t)[k]
                    - 4.0 * c[k])
                    / (h * h);
            let dp = if k == 0 {
                (p(x + h, y) - p(x - h, y)) / (2.0 * h)
            } else {
                (p(x, y + h) - p(x, y - h)) / (2.0 * h)
            };
            f_err = f_err.max((f[k] - (dudt - sol.mu * lap + dp)).abs());
        }
        let g = sol.velocity_gradient(x, y, t);
        div_err = div_err.max((g[0][0] + g[1][1]).abs());
    }
    (f_err, div_err)
}
