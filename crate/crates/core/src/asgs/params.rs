use crate::error::{Error, Result};
use crate::mesh::ElementGeometry;

/// One-parameter time discretization. `theta = 1` is backward Euler,
/// `theta = 0` is Crank-Nicolson.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScheme {
    theta: f64,
    dt: f64,
    n_steps: usize,
    t_final: f64,
}

impl TimeScheme {
    pub fn new(theta: f64, dt: f64, t_final: f64) -> Result<Self> {
        if theta != 0.0 && theta != 1.0 {
            return Err(Error::InvalidArgument(format!(
                "theta must be 0 or 1, got {theta}"
            )));
        }
        if !(dt > 0.0) || !(t_final > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "dt and t_final must be positive (dt = {dt}, t_final = {t_final})"
            )));
        }
        let n_steps = (t_final / dt).round() as usize;
        if n_steps == 0 || (n_steps as f64 * dt - t_final).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "t_final = {t_final} is not an integer multiple of dt = {dt}"
            )));
        }
        Ok(Self {
            theta,
            dt,
            n_steps,
            t_final,
        })
    }

    pub fn backward_euler(dt: f64, t_final: f64) -> Result<Self> {
        Self::new(1.0, dt, t_final)
    }

    pub fn crank_nicolson(dt: f64, t_final: f64) -> Result<Self> {
        Self::new(0.0, dt, t_final)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    /// Weight of the new level in `f^{n,theta}`: `(1 + theta) / 2`.
    pub fn alpha(&self) -> f64 {
        0.5 * (1.0 + self.theta)
    }

    /// `(1 + theta) / 2 * dt`, the distance from `t^n` to `t^{n,theta}`.
    pub fn dt_eff(&self) -> f64 {
        self.alpha() * self.dt
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }
}

/// Viscosity and stabilization constants. `tau1 = h^2 / (c1 mu)`,
/// `tau2 = c2 / tau1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizationParams {
    pub mu: f64,
    pub c1: f64,
    pub c2: f64,
    /// When false every stabilization term is dropped (plain Galerkin).
    pub stabilized: bool,
}

impl Default for StabilizationParams {
    fn default() -> Self {
        Self {
            mu: 0.1,
            c1: 4.0,
            c2: 2.0,
            stabilized: true,
        }
    }
}

impl StabilizationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mu, c1, c2 must be positive (mu = {}, c1 = {}, c2 = {})",
                self.mu, self.c1, self.c2
            )));
        }
        Ok(())
    }

    /// Element parameters, or all-zero parameters when stabilization is off.
    pub fn element_taus(&self, geometry: &ElementGeometry, dt_eff: f64) -> Result<ElementTaus> {
        if self.stabilized {
            compute_taus(geometry, self.mu, self.c1, self.c2, dt_eff)
        } else {
            Ok(ElementTaus::ZERO)
        }
    }
}

/// Per-element stabilization parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementTaus {
    pub tau1: f64,
    pub tau2: f64,
    /// Time-regularized `tau1 dt_eff / (dt_eff + tau1)`.
    pub tau1p: f64,
    /// `tau1 / (dt_eff + tau1)`, the weight of `I - tau^{-1} tau'`.
    pub m: f64,
    /// `dt_eff / (dt_eff + tau1) = 1 - m`.
    pub w: f64,
}

impl ElementTaus {
    pub const ZERO: Self = Self {
        tau1: 0.0,
        tau2: 0.0,
        tau1p: 0.0,
        m: 0.0,
        w: 1.0,
    };

    /// `tau2'` equals `tau2`: the pressure slot of the mass matrix is zero.
    pub fn tau2p(&self) -> f64 {
        self.tau2
    }
}

pub fn compute_taus(
    geometry: &ElementGeometry,
    mu: f64,
    c1: f64,
    c2: f64,
    dt_eff: f64,
) -> Result<ElementTaus> {
    if !(mu > 0.0 && c1 > 0.0 && c2 > 0.0 && dt_eff > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "stabilization inputs must be positive (mu = {mu}, c1 = {c1}, c2 = {c2}, dt_eff = {dt_eff})"
        )));
    }
    let h = geometry.diameter;
    let tau1 = h * h / (c1 * mu);
    let denom = dt_eff + tau1;
    Ok(ElementTaus {
        tau1,
        tau2: c2 / tau1,
        tau1p: tau1 * dt_eff / denom,
        m: tau1 / denom,
        w: dt_eff / denom,
    })
}
