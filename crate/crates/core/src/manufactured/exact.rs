//! Closed-form verification problem on the unit square:
//!
//! ```text
//! u = e^{-t} ( x^2 (x-1)^2 y (y-1)(2y-1), -y^2 (y-1)^2 x (x-1)(2x-1) )
//! p = e^{-t} (2x-1)(2y-1)
//! ```
//!
//! Writing `g(s) = s^2 (s-1)^2`, the velocity is the curl of the stream
//! function `e^{-t} g(x) g(y) / 2`, so it is divergence free and vanishes on
//! the boundary.

use crate::asgs::Forcing;

/// Reference solution used to measure discretization errors.
pub trait ExactSolution {
    fn velocity(&self, x: f64, y: f64, t: f64) -> [f64; 2];
    /// `grad[c][d] = d u_c / d x_d`
    fn velocity_gradient(&self, x: f64, y: f64, t: f64) -> [[f64; 2]; 2];
    fn pressure(&self, x: f64, y: f64, t: f64) -> f64;
}

#[inline]
fn g0(s: f64) -> f64 {
    s * s * (s - 1.0) * (s - 1.0)
}

#[inline]
fn g1(s: f64) -> f64 {
    2.0 * s * (s - 1.0) * (2.0 * s - 1.0)
}

#[inline]
fn g2(s: f64) -> f64 {
    12.0 * s * s - 12.0 * s + 2.0
}

#[inline]
fn g3(s: f64) -> f64 {
    24.0 * s - 12.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedSolution {
    pub mu: f64,
}

impl ManufacturedSolution {
    pub fn new(mu: f64) -> Self {
        Self { mu }
    }

    pub fn pressure_gradient(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        let e = (-t).exp();
        [e * 2.0 * (2.0 * y - 1.0), e * 2.0 * (2.0 * x - 1.0)]
    }

    pub fn velocity_laplacian(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        let e = 0.5 * (-t).exp();
        [
            e * (g2(x) * g1(y) + g0(x) * g3(y)),
            -e * (g3(x) * g0(y) + g2(y) * g1(x)),
        ]
    }

    /// `f = du/dt - mu lap u + grad p`, with `du/dt = -u`.
    pub fn forcing(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        let u = self.velocity(x, y, t);
        let lap = self.velocity_laplacian(x, y, t);
        let gp = self.pressure_gradient(x, y, t);
        [
            -u[0] - self.mu * lap[0] + gp[0],
            -u[1] - self.mu * lap[1] + gp[1],
        ]
    }
}

impl ExactSolution for ManufacturedSolution {
    fn velocity(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        let e = 0.5 * (-t).exp();
        [e * g0(x) * g1(y), -e * g0(y) * g1(x)]
    }

    fn velocity_gradient(&self, x: f64, y: f64, t: f64) -> [[f64; 2]; 2] {
        let e = 0.5 * (-t).exp();
        [
            [e * g1(x) * g1(y), e * g0(x) * g2(y)],
            [-e * g0(y) * g2(x), -e * g1(y) * g1(x)],
        ]
    }

    fn pressure(&self, x: f64, y: f64, t: f64) -> f64 {
        (-t).exp() * (2.0 * x - 1.0) * (2.0 * y - 1.0)
    }
}

impl Forcing for ManufacturedSolution {
    fn eval(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        self.forcing(x, y, t)
    }
}

/// Exact solution multiplied by a constant factor.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<S>(pub S, pub f64);

impl<S: ExactSolution> ExactSolution for Scaled<S> {
    fn velocity(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        self.0.velocity(x, y, t).map(|v| v * self.1)
    }

    fn velocity_gradient(&self, x: f64, y: f64, t: f64) -> [[f64; 2]; 2] {
        self.0
            .velocity_gradient(x, y, t)
            .map(|r| r.map(|v| v * self.1))
    }

    fn pressure(&self, x: f64, y: f64, t: f64) -> f64 {
        self.0.pressure(x, y, t) * self.1
    }
}

/// Identically zero velocity and pressure.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroSolution;

impl ExactSolution for ZeroSolution {
    fn velocity(&self, _: f64, _: f64, _: f64) -> [f64; 2] {
        [0.0; 2]
    }

    fn velocity_gradient(&self, _: f64, _: f64, _: f64) -> [[f64; 2]; 2] {
        [[0.0; 2]; 2]
    }

    fn pressure(&self, _: f64, _: f64, _: f64) -> f64 {
        0.0
    }
}
