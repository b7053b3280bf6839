//! Run configuration: defaults, `key=value` config files, and the merge
//! order default -> file -> explicit flags.

use std::path::PathBuf;

use regl4_core::characters::{
    first_even_primitive, quadratic_character, CharacterDecomposition, DirichletCharacter,
};
use regl4_core::i2::I2Scenario;
use regl4_core::Complex;

use crate::{from_core, CliError};

/// Everything a command needs, fully resolved.  Field names mirror the long
/// flags, and the config-file keys mirror both.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Levels for sweeps and scenario commands; empty until set.
    pub levels: Vec<u64>,
    /// Character selector: a Conrey index, `quadratic`, or `first-even`.
    pub character: String,
    /// First factor of the level decomposition.
    pub q1: u64,
    /// Height of the diagonal point.
    pub t: f64,
    /// Heights for the T-axis sweep.
    pub t_grid: Vec<f64>,
    /// Deformation grid for Laurent fitting and the eta-axis sweep.
    pub eta_grid: Vec<f64>,
    /// Base step of the one-sided derivative stencils.
    pub fd_step: f64,
    /// Relative tolerance used where an evaluation has a tunable budget.
    pub rel_tol: f64,
    /// Prime-sum cutoff for the zero-distribution diagnostics.
    pub cutoff: f64,
    /// Worker count for sweeps; 0 means the library default.
    pub threads: usize,
    /// Sweep output path; stdout when absent.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            levels: Vec::new(),
            character: "first-even".to_string(),
            q1: 1,
            t: 1.0,
            t_grid: Vec::new(),
            eta_grid: I2Scenario::DEFAULT_GRID.to_vec(),
            fd_step: 1e-3,
            rel_tol: 1e-8,
            cutoff: 1e3,
            threads: 0,
            output: None,
        }
    }
}

fn bad_value(key: &str, value: &str) -> CliError {
    CliError::Usage(format!("config: cannot parse `{value}` for key `{key}`"))
}

pub fn parse_u64_list(key: &str, value: &str) -> Result<Vec<u64>, CliError> {
    value
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<u64>().map_err(|_| bad_value(key, value)))
        .collect()
}

pub fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad_value(key, value)))
        .collect()
}

/// Parses `re` or `re,im` into a complex number.
pub fn parse_complex(flag: &str, value: &str) -> Result<Complex, CliError> {
    let parts: Vec<&str> = value.split(',').collect();
    let err = || CliError::Usage(format!("flag --{flag}: expected `re` or `re,im`, got `{value}`"));
    match parts.as_slice() {
        [re] => Ok(regl4_core::c(re.trim().parse().map_err(|_| err())?, 0.0)),
        [re, im] => Ok(regl4_core::c(
            re.trim().parse().map_err(|_| err())?,
            im.trim().parse().map_err(|_| err())?,
        )),
        _ => Err(err()),
    }
}

impl RunConfig {
    /// Applies one `key=value` assignment; keys mirror the long flags.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "N" => self.levels = parse_u64_list(key, value)?,
            "char" => self.character = value.to_string(),
            "q1" => self.q1 = value.parse().map_err(|_| bad_value(key, value))?,
            "T" => self.t = value.parse().map_err(|_| bad_value(key, value))?,
            "T-grid" => self.t_grid = parse_f64_list(key, value)?,
            "eta-grid" => self.eta_grid = parse_f64_list(key, value)?,
            "fd-step" => self.fd_step = value.parse().map_err(|_| bad_value(key, value))?,
            "rel-tol" => self.rel_tol = value.parse().map_err(|_| bad_value(key, value))?,
            "cutoff" => self.cutoff = value.parse().map_err(|_| bad_value(key, value))?,
            "threads" => self.threads = value.parse().map_err(|_| bad_value(key, value))?,
            "output" => self.output = Some(PathBuf::from(value)),
            _ => return Err(CliError::Usage(format!("config: unknown key `{key}`"))),
        }
        if let Some(bad) = [
            ("fd-step", self.fd_step),
            ("rel-tol", self.rel_tol),
            ("cutoff", self.cutoff),
        ]
        .iter()
        .find(|(_, v)| !(*v > 0.0))
        {
            return Err(CliError::Usage(format!(
                "config: `{}` must be positive",
                bad.0
            )));
        }
        Ok(())
    }

    /// Reads a config file: one `key=value` per line, `#` comments, blank
    /// lines ignored.
    pub fn apply_file(&mut self, path: &std::path::Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config: cannot read {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "config: line {} is not `key=value`: `{line}`",
                    lineno + 1
                ))
            })?;
            self.apply_kv(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Checks the constraints that flag assignment can bypass.
    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("fd-step", self.fd_step),
            ("rel-tol", self.rel_tol),
            ("cutoff", self.cutoff),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("`{name}` must be positive and finite")));
            }
        }
        Ok(())
    }

    /// Worker count after the environment override.
    pub fn thread_count(&self) -> Result<usize, CliError> {
        match std::env::var("REGL4_THREADS") {
            Ok(v) => v
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("REGL4_THREADS: cannot parse `{v}`"))),
            Err(_) => Ok(self.threads),
        }
    }

    /// First level of the list, for commands that take a single scenario.
    pub fn single_level(&self) -> Result<u64, CliError> {
        self.levels.first().copied().ok_or_else(|| {
            CliError::Usage("this command needs a level: pass --N or set N= in the config".into())
        })
    }

    /// Builds the scenario for one level: resolves the character, checks the
    /// pipeline preconditions, and installs the grid and step.
    pub fn scenario(&self, level: u64) -> Result<I2Scenario, CliError> {
        self.scenario_at(level, self.t)
    }

    /// Same as [`RunConfig::scenario`] but at an explicit height, for sweeps
    /// along the T axis.
    pub fn scenario_at(&self, level: u64, t: f64) -> Result<I2Scenario, CliError> {
        if level <= 1 {
            return Err(CliError::Usage(
                "pipeline commands need a level greater than 1".into(),
            ));
        }
        let chi = resolve_character(&self.character, level)?;
        if !chi.is_primitive() {
            return Err(CliError::Usage(format!(
                "character {}.{} is not primitive",
                chi.modulus(),
                chi.index()
            )));
        }
        if !chi.is_even() {
            return Err(CliError::Usage(format!(
                "character {}.{} is odd; the pipeline needs an even character",
                chi.modulus(),
                chi.index()
            )));
        }
        let dec = CharacterDecomposition::new(&chi, self.q1).map_err(from_core)?;
        let mut scen = I2Scenario::new(&dec, t)
            .and_then(|s| s.with_grid(&self.eta_grid))
            .map_err(from_core)?;
        scen.fd_step = self.fd_step;
        Ok(scen)
    }
}

/// Resolves a selector against a modulus: `quadratic` and `first-even` are
/// named shortcuts; anything else must be a Conrey index.
pub fn resolve_character(selector: &str, modulus: u64) -> Result<DirichletCharacter, CliError> {
    match selector {
        "quadratic" => quadratic_character(modulus).map_err(from_core),
        "first-even" => first_even_primitive(modulus).ok_or_else(|| {
            CliError::Usage(format!(
                "modulus {modulus} has no even primitive character"
            ))
        }),
        s => {
            let index: u64 = s.parse().map_err(|_| {
                CliError::Usage(format!(
                    "character selector must be a Conrey index, `quadratic`, or `first-even`; got `{s}`"
                ))
            })?;
            DirichletCharacter::new(modulus, index).map_err(from_core)
        }
    }
}

/// Conrey label `modulus.index`, the character column of every table.
pub fn conrey_label(chi: &DirichletCharacter) -> String {
    format!("{}.{}", chi.modulus(), chi.index())
}
