use std::path::{Path, PathBuf};

use crate::asgs::{LinearSolver, StabilizationParams, TimeScheme};
use crate::error::{Error, Result};
use crate::linalg::GmresOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Direct,
    Gmres,
}

/// Parameters of one transient run. Defaults reproduce the reference
/// experiment: 10 x 10 grid, backward Euler with dt = 0.1 up to T = 1,
/// mu = 0.1, c1 = 4, c2 = 2.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nx: usize,
    pub dt: f64,
    pub theta: f64,
    pub t_final: f64,
    pub mu: f64,
    pub c1: f64,
    pub c2: f64,
    pub stabilized: bool,
    pub solver: SolverKind,
    pub gmres_tol: f64,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            nx: 10,
            dt: 0.1,
            theta: 1.0,
            t_final: 1.0,
            mu: 0.1,
            c1: 4.0,
            c2: 2.0,
            stabilized: true,
            solver: SolverKind::Direct,
            gmres_tol: 1e-9,
            output: None,
        }
    }
}

pub const CONFIG_KEYS: [&str; 11] = [
    "nx",
    "dt",
    "theta",
    "t_final",
    "mu",
    "c1",
    "c2",
    "stabilized",
    "solver",
    "gmres_tol",
    "output",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for key {key:?}")))
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "nx" => self.nx = parse(key, value)?,
            "dt" => self.dt = parse(key, value)?,
            "theta" => {
                let theta: f64 = parse(key, value)?;
                if theta != 0.0 && theta != 1.0 {
                    return Err(Error::Config(format!(
                        "theta must be 0 (Crank-Nicolson) or 1 (backward Euler), got {value}"
                    )));
                }
                self.theta = theta;
            }
            "t_final" => self.t_final = parse(key, value)?,
            "mu" => self.mu = parse(key, value)?,
            "c1" => self.c1 = parse(key, value)?,
            "c2" => self.c2 = parse(key, value)?,
            "stabilized" => self.stabilized = parse(key, value)?,
            "solver" => {
                self.solver = match value {
                    "direct" => SolverKind::Direct,
                    "gmres" => SolverKind::Gmres,
                    _ => {
                        return Err(Error::Config(format!(
                            "unknown solver {value:?} (direct or gmres)"
                        )));
                    }
                }
            }
            "gmres_tol" => self.gmres_tol = parse(key, value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            _ => {
                return Err(Error::Config(format!(
                    "unknown key {key:?} (valid keys: {})",
                    CONFIG_KEYS.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// Applies flat `key = value` lines on top of `self`; `#` starts a
    /// comment.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected key=value, got {raw:?}",
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn from_str_validated(text: &str) -> Result<Self> {
        let mut config = Self::default();
        config.apply_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::default();
        config.apply_str(&text)?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 {
            return Err(Error::Config("nx must be at least 1".into()));
        }
        if !(self.gmres_tol > 0.0) {
            return Err(Error::Config("gmres_tol must be positive".into()));
        }
        self.scheme().map_err(|e| Error::Config(e.to_string()))?;
        self.params()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn scheme(&self) -> Result<TimeScheme> {
        TimeScheme::new(self.theta, self.dt, self.t_final)
    }

    pub fn params(&self) -> StabilizationParams {
        StabilizationParams {
            mu: self.mu,
            c1: self.c1,
            c2: self.c2,
            stabilized: self.stabilized,
        }
    }

    pub fn linear_solver(&self) -> LinearSolver {
        match self.solver {
            SolverKind::Direct => LinearSolver::Direct,
            SolverKind::Gmres => LinearSolver::Gmres(GmresOptions {
                tol: self.gmres_tol,
                ..GmresOptions::default()
            }),
        }
    }
}
