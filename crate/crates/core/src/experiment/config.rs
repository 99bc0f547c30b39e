use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::StepperConfig;
use crate::ground_state::SolverOptions;
use crate::params::PhysParams;
use crate::spectral::{make_grid, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsSection {
    pub dim: usize,
    pub s: f64,
    pub gamma: f64,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        let p = PhysParams::canonical();
        Self { dim: p.dim(), s: p.s(), gamma: p.gamma() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    /// Box side `L`.
    pub len: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n: 128, len: 32.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    GroundState,
    Evolve,
    Classify,
    Sweep,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    GroundState,
    Gaussian,
}

/// `u0 = amplitude · profile(x) · e^{i boost·x}`, or a stored field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    pub profile: Profile,
    pub amplitude: f64,
    /// Gaussian width; ignored for the ground-state profile.
    pub width: f64,
    pub boost: Vec<f64>,
    /// Loads `u0` from a snapshot instead; the amplitude still applies.
    pub snapshot: Option<PathBuf>,
}

impl Default for InitialSection {
    fn default() -> Self {
        Self { profile: Profile::GroundState, amplitude: 0.95, width: 1.0, boost: Vec::new(), snapshot: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoSection {
    pub out_dir: PathBuf,
    /// Write a field snapshot every this many samples; 0 disables.
    pub snapshot_every: usize,
    /// Seed for random test fields.
    pub seed: u64,
    /// Stored ground state to use instead of solving; also the warm start
    /// for the ground-state command.
    pub ground_state: Option<PathBuf>,
    /// Record the localized virial pieces at every sample (slow).
    pub virial: bool,
}

impl Default for IoSection {
    fn default() -> Self {
        Self { out_dir: PathBuf::from("out"), snapshot_every: 0, seed: 20240917, ground_state: None, virial: false }
    }
}

/// Amplitudes `c` for `u0 = c·Q`, optionally repeated over `(s, γ)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub c_lo: f64,
    pub c_hi: f64,
    pub count: usize,
    /// Explicit amplitudes; replaces the uniform grid when non-empty.
    pub values: Vec<f64>,
    /// Extra `[s, γ]` pairs.
    pub params: Vec<[f64; 2]>,
    /// Grid for points classified in `K2`; the main grid when absent.
    pub blowup_grid: Option<GridSection>,
    /// Horizon for runs on the blow-up grid.
    pub blowup_t_end: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            c_lo: 0.8,
            c_hi: 1.2,
            count: 6,
            values: vec![0.8, 0.9, 0.95, 1.05, 1.1, 1.2],
            params: Vec::new(),
            blowup_grid: Some(GridSection { n: 256, len: 16.0 }),
            blowup_t_end: 3.0,
        }
    }
}

impl SweepSpec {
    pub fn amplitudes(&self) -> Result<Vec<f64>> {
        if !self.values.is_empty() {
            if self.values.iter().any(|c| !(*c > 0.0)) {
                return Err(Error::Config("sweep amplitudes must be positive".into()));
            }
            return Ok(self.values.clone());
        }
        if !(self.c_lo > 0.0) || !(self.c_hi > self.c_lo) || self.count < 2 {
            return Err(Error::Config(format!(
                "empty sweep: need 0 < c_lo < c_hi and count >= 2, got [{}, {}] with {}",
                self.c_lo, self.c_hi, self.count
            )));
        }
        let step = (self.c_hi - self.c_lo) / (self.count - 1) as f64;
        Ok((0..self.count).map(|i| self.c_lo + step * i as f64).collect())
    }
}

/// Grid sizes for the identity suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    /// Grid for the Pohozaev and sharp-constant checks.
    pub identity_grid: GridSection,
    /// Grid for the threshold closed forms; the identity grid when absent.
    pub threshold_grid: Option<GridSection>,
    pub random_fields: usize,
    /// Grid for the virial cross-check; the main grid when absent.
    pub virial_grid: Option<GridSection>,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            identity_grid: GridSection { n: 1024, len: 128.0 },
            threshold_grid: Some(GridSection { n: 2048, len: 256.0 }),
            random_fields: 100,
            virial_grid: Some(GridSection { n: 256, len: 32.0 }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Option<Experiment>,
    pub physics: PhysicsSection,
    pub grid: GridSection,
    pub solver: SolverOptions,
    pub stepper: StepperConfig,
    pub initial: InitialSection,
    pub io: IoSection,
    pub sweep: SweepSpec,
    pub verify: VerifySection,
}

impl RunConfig {
    /// `N = 2, s = 0.7, γ = 1.6` on `n = 128, L = 32` with `dt = 1e-3`.
    pub fn canonical() -> Self {
        Self::default()
    }

    pub fn profile(name: &str) -> Result<Self> {
        match name {
            "canonical" => Ok(Self::canonical()),
            other => Err(Error::Config(format!("unknown profile `{other}`"))),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Applies `section.key=value`; the value is read as a TOML literal and
    /// falls back to a bare string.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
        let key = key.trim();
        let raw = raw.trim();
        let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        let mut root = toml::Value::try_from(&*self).map_err(|e| Error::Config(e.to_string()))?;
        let mut node = &mut root;
        let parts: Vec<&str> = key.split('.').collect();
        for (i, part) in parts.iter().enumerate() {
            let table = node
                .as_table_mut()
                .ok_or_else(|| Error::Config(format!("`{key}`: `{part}` is not inside a section")))?;
            if i + 1 == parts.len() {
                table.insert(part.to_string(), value.clone());
                break;
            }
            node = table.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        }
        *self = root.try_into().map_err(|e: toml::de::Error| Error::Config(format!("override `{assignment}`: {e}")))?;
        Ok(())
    }

    pub fn params(&self) -> Result<PhysParams> {
        PhysParams::new(self.physics.dim, self.physics.s, self.physics.gamma)
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        make_grid(self.physics.dim, self.grid.n, self.grid.len)
    }

    /// Checks everything that can be checked before a run starts.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.grid_spec()?;
        self.stepper.validate()?;
        if !(self.initial.amplitude > 0.0) {
            return Err(Error::Config(format!("initial.amplitude = {} must be positive", self.initial.amplitude)));
        }
        if self.initial.boost.len() > self.physics.dim {
            return Err(Error::Config(format!("initial.boost has {} components for N = {}", self.initial.boost.len(), self.physics.dim)));
        }
        std::fs::create_dir_all(&self.io.out_dir)
            .map_err(|e| Error::Config(format!("output directory {}: {e}", self.io.out_dir.display())))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_overrides() {
        let mut cfg = RunConfig::canonical();
        let text = cfg.to_toml().unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg);
        cfg.apply_override("physics.s=0.6").unwrap();
        cfg.apply_override("stepper.t_end = 0.5").unwrap();
        cfg.apply_override("io.out_dir=results/a").unwrap();
        cfg.apply_override("sweep.values=[0.9, 1.1]").unwrap();
        cfg.apply_override("experiment=\"sweep\"").unwrap();
        assert_eq!(cfg.physics.s, 0.6);
        assert_eq!(cfg.stepper.t_end, Some(0.5));
        assert_eq!(cfg.io.out_dir, PathBuf::from("results/a"));
        assert_eq!(cfg.sweep.values, vec![0.9, 1.1]);
        assert_eq!(cfg.experiment, Some(Experiment::Sweep));
        assert!(cfg.apply_override("physics.nope=1").is_err());
        assert!(cfg.apply_override("physics.s").is_err());
        assert!(cfg.apply_override("grid.n=\"many\"").is_err());
    }

    #[test]
    fn partial_files_fill_defaults() {
        let cfg = RunConfig::from_toml("[physics]\ns = 0.8\n[grid]\nn = 64\n").unwrap();
        assert_eq!(cfg.physics.s, 0.8);
        assert_eq!(cfg.grid.len, 32.0);
        assert_eq!(cfg.stepper.dt, 1e-3);
        assert!(RunConfig::from_toml("[physics]\nspin = 1\n").is_err());
    }

    #[test]
    fn sweep_validation() {
        let mut spec = SweepSpec { values: Vec::new(), ..Default::default() };
        assert_eq!(spec.amplitudes().unwrap().len(), 6);
        spec.c_hi = spec.c_lo;
        assert!(spec.amplitudes().is_err());
        spec.c_hi = 1.2;
        spec.count = 1;
        assert!(spec.amplitudes().is_err());
        assert!(SweepSpec { values: vec![0.9, -1.0], ..Default::default() }.amplitudes().is_err());
    }
}
