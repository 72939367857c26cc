use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::asymptotics::SweepConfig;
use crate::eigen::SolverOptions;
use crate::error::{Error, Result};
use crate::mesh::{generate_mesh, refine, DomainSpec, Mesh, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Square,
    Rectangle,
    Disk,
    Polygon,
    Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainConfig {
    pub kind: DomainKind,
    /// Mesh size; when absent, α-dependent commands follow the resolution rule.
    pub h: Option<f64>,
    pub radius: f64,
    pub center: [f64; 2],
    pub segments: Option<usize>,
    pub min: [f64; 2],
    pub max: [f64; 2],
    pub vertices: Vec<[f64; 2]>,
}

impl Default for DomainConfig {
    fn default() -> Self {
        Self {
            kind: DomainKind::Square,
            h: None,
            radius: 1.0,
            center: [0.0, 0.0],
            segments: None,
            min: [0.0, 0.0],
            max: [1.0, 1.0],
            vertices: Vec::new(),
        }
    }
}

fn point(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

impl DomainConfig {
    pub fn spec(&self, h: f64) -> Result<DomainSpec> {
        let spec = match self.kind {
            DomainKind::Square => DomainSpec::unit_square(h),
            DomainKind::Rectangle => DomainSpec::rectangle(point(self.min), point(self.max), h),
            DomainKind::Disk => DomainSpec::disk(point(self.center), self.radius, self.segments, h),
            DomainKind::Polygon => DomainSpec::polygon(self.vertices.iter().copied().map(point).collect(), h),
            DomainKind::Interval => {
                return Err(Error::Invalid("the interval is only available to the sweep and analytic commands".into()))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Parameters of one run, read from a JSON file and/or flags. Only the fields
/// relevant to the command are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub domain: DomainConfig,
    /// Load the mesh from this file instead of generating one.
    pub mesh_file: Option<PathBuf>,
    pub refine: u32,
    pub alpha: Option<f64>,
    pub alphas: Vec<f64>,
    pub n: usize,
    pub solver: SolverOptions,
    pub base_h: f64,
    pub max_alpha_h: f64,
    pub extra_levels: u32,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub margin: f64,
    /// Direction-search grid size and success threshold.
    pub m: usize,
    pub delta: f64,
    pub m_max: Option<u32>,
    pub eigenvectors: bool,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sweep = SweepConfig::default();
        Self {
            domain: DomainConfig::default(),
            mesh_file: None,
            refine: 0,
            alpha: None,
            alphas: sweep.alphas,
            n: 3,
            solver: SolverOptions::default(),
            base_h: sweep.base_h,
            max_alpha_h: sweep.max_alpha_h,
            extra_levels: 0,
            p: 2.0,
            q: 1.0,
            r: 4.0,
            margin: 0.25,
            m: 16,
            delta: 0.5,
            m_max: None,
            eigenvectors: false,
            out: PathBuf::from("robinlab-out"),
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }

    /// The configuration as hashed: everything except the output location.
    pub fn hashed(&self) -> Self {
        Self { out: PathBuf::new(), ..self.clone() }
    }

    pub fn sweep(&self, n_max: usize) -> SweepConfig {
        SweepConfig {
            alphas: self.alphas.clone(),
            n_max,
            base_h: self.base_h,
            max_alpha_h: self.max_alpha_h,
            extra_levels: self.extra_levels,
            p: self.p,
            margin: self.margin,
            solver: self.solver.clone(),
        }
    }

    pub fn require_alpha(&self) -> Result<f64> {
        let a = self.alpha.ok_or_else(|| Error::Invalid("--alpha is required".into()))?;
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::Invalid(format!("alpha must be finite and non-negative, got {a}")));
        }
        Ok(a)
    }

    /// Mesh size for a run at `alpha`: explicit `h`, else the resolution rule.
    pub fn h_for(&self, alpha: f64) -> f64 {
        self.domain.h.unwrap_or_else(|| self.sweep(1).level_for(alpha).1)
    }

    /// The mesh for a run at `alpha`: loaded, or generated and refined.
    pub fn mesh_for(&self, alpha: f64) -> Result<Mesh> {
        let mut mesh = match &self.mesh_file {
            Some(path) => {
                Mesh::load(path).map_err(|e| Error::Invalid(format!("cannot load mesh {}: {e}", path.display())))?
            }
            None => generate_mesh(&self.domain.spec(self.h_for(alpha))?)?,
        };
        for _ in 0..self.refine {
            mesh = refine(&mesh)?;
        }
        Ok(mesh)
    }

    /// Checks the fields a command relies on before any computation starts.
    pub fn validate(&self, command: &str) -> Result<()> {
        self.solver.validate()?;
        if let Some(h) = self.domain.h {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Invalid(format!("h must be positive, got {h}")));
            }
        }
        if self.domain.kind != DomainKind::Interval && self.mesh_file.is_none() {
            self.domain.spec(self.domain.h.unwrap_or(self.base_h))?;
        }
        if self.n == 0 {
            return Err(Error::Invalid("n must be at least 1".into()));
        }
        match command {
            "solve" => {
                self.require_alpha()?;
            }
            "bound" => {
                if !(self.require_alpha()? > 0.0) {
                    return Err(Error::Invalid("bound needs alpha > 0".into()));
                }
                if self.m < 2 {
                    return Err(Error::Invalid(format!("direction grid needs m >= 2, got {}", self.m)));
                }
                if !(self.delta > 0.0 && self.delta < 1.0) {
                    return Err(Error::Invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
                }
            }
            "analytic" => {
                if !(self.require_alpha()? > 0.0) {
                    return Err(Error::Invalid("analytic branches need alpha > 0".into()));
                }
                if !matches!(self.domain.kind, DomainKind::Disk | DomainKind::Interval) {
                    return Err(Error::Invalid("analytic branches exist for the disk and the interval only".into()));
                }
            }
            "sweep" | "concentration" | "verify" => {
                self.sweep(self.n).validate()?;
                if command != "sweep" && self.domain.kind == DomainKind::Interval {
                    return Err(Error::Invalid(format!("{command} needs a planar domain")));
                }
                if command == "concentration"
                    && !(1.0 <= self.q && self.q < self.p && self.p < self.r && self.r.is_finite())
                {
                    return Err(Error::Invalid(format!(
                        "exponents must satisfy 1 <= q < p < r < inf, got q={}, p={}, r={}",
                        self.q, self.p, self.r
                    )));
                }
                if command == "verify" && !(self.delta > 0.0 && self.delta < 1.0) {
                    return Err(Error::Invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
                }
            }
            _ => {}
        }
        Ok(())
    }
}
