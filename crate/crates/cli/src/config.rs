use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use tdc_shell::problem::{Benchmark, ConstraintMode, ShellProblem};

/// Run description. Every field may come from the TOML config file; command
/// line flags override it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub case: Option<String>,
    /// Custom problem file (JSON or TOML), relative to the config file.
    pub problem: Option<PathBuf>,
    #[serde(default)]
    pub p: Vec<usize>,
    #[serde(default)]
    pub n: Vec<usize>,
    pub constraint: Option<String>,
    pub qbump: Option<i32>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub vtk: bool,
    /// Sampling points per knot span in VTK output.
    pub vtk_samples: Option<usize>,
    #[serde(default)]
    pub dump_system: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        if let (Some(p), Some(dir)) = (&cfg.problem, path.parent()) {
            if p.is_relative() {
                cfg.problem = Some(dir.join(p));
            }
        }
        Ok(cfg)
    }

    /// `self` with every field set in `flags` replaced.
    pub fn merged(mut self, flags: RunConfig) -> Self {
        if flags.case.is_some() || flags.problem.is_some() {
            self.case = flags.case;
            self.problem = flags.problem;
        }
        if !flags.p.is_empty() {
            self.p = flags.p;
        }
        if !flags.n.is_empty() {
            self.n = flags.n;
        }
        self.constraint = flags.constraint.or(self.constraint);
        self.qbump = flags.qbump.or(self.qbump);
        self.out = flags.out.or(self.out);
        self.vtk |= flags.vtk;
        self.vtk_samples = flags.vtk_samples.or(self.vtk_samples);
        self.dump_system |= flags.dump_system;
        self
    }
}

/// A validated run: template problem, sweep and output options.
#[derive(Clone, Debug)]
pub struct Plan {
    pub label: String,
    pub case: Option<Benchmark>,
    pub problem: ShellProblem,
    pub degrees: Vec<usize>,
    pub elements: Vec<usize>,
    pub out: PathBuf,
    pub vtk: Option<usize>,
    pub dump_system: bool,
    pub warnings: Vec<String>,
}

fn load_problem(path: &Path) -> Result<ShellProblem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading problem {}", path.display()))?;
    let problem: ShellProblem = if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).with_context(|| format!("parsing problem {}", path.display()))?
    } else {
        serde_json::from_str(&text).with_context(|| format!("parsing problem {}", path.display()))?
    };
    Ok(problem)
}

impl Plan {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let mut warnings = Vec::new();
        let (label, case, mut problem) = match (&cfg.case, &cfg.problem) {
            (Some(_), Some(_)) => bail!("give either a benchmark case or a problem file, not both"),
            (None, None) => bail!("no benchmark case or problem file given"),
            (Some(c), None) => {
                let case: Benchmark = c.parse()?;
                let p = cfg.p.first().copied().unwrap_or(4);
                let n = cfg.n.first().copied().unwrap_or(8);
                (case.id().to_string(), Some(case), ShellProblem::benchmark(case, p, n))
            }
            (None, Some(path)) => {
                let problem = load_problem(path)?;
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "problem".into());
                (label, None, problem)
            }
        };
        if let Some(c) = &cfg.constraint {
            problem.constraint = c.parse::<ConstraintMode>()?;
        }
        if let Some(b) = cfg.qbump {
            problem.quadrature_bump = b;
        }
        let degrees = if cfg.p.is_empty() { vec![problem.mesh.degree] } else { cfg.p.clone() };
        let elements = if cfg.n.is_empty() { vec![problem.mesh.elements] } else { cfg.n.clone() };
        if elements.contains(&0) {
            bail!("knot span counts must be at least 1");
        }
        if degrees.contains(&0) {
            bail!("degrees must be at least 1");
        }
        for &p in &degrees {
            if !(2..=6).contains(&p) {
                warnings.push(format!("degree {p} is outside the tested range 2..=6"));
            }
        }
        problem.clone().with_mesh(degrees[0], elements[0]).validate()?;
        Ok(Plan {
            label,
            case,
            problem,
            degrees,
            elements,
            out: cfg.out.clone().unwrap_or_else(|| PathBuf::from("out")),
            vtk: cfg.vtk.then(|| cfg.vtk_samples.unwrap_or(4)),
            dump_system: cfg.dump_system,
            warnings,
        })
    }
}
