//! Run configuration: defaults, the JSON config file and flag overrides.
//!
//! Precedence, lowest first: built-in defaults, `--config` file, command-line
//! flags. The resolved configuration is written next to the artifacts as
//! `run_config.json` and can be fed back through `--config`.

use std::path::{Path, PathBuf};

use qaho::evolution::EvolutionConfig;
use qaho::model::{HamiltonianSpec, Representation};
use qaho::vqe::{AnsatzSpec, VQDConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Settings shared by `spectrum` and `vqe`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VariationalSection {
    pub hamiltonian: HamiltonianSpec,
    /// `n_qubits` is always taken from the Hamiltonian dimension.
    pub ansatz: AnsatzSpec,
    pub vqd: VQDConfig,
}

impl Default for VariationalSection {
    fn default() -> Self {
        Self {
            hamiltonian: HamiltonianSpec::default(),
            ansatz: AnsatzSpec::default(),
            vqd: VQDConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub dim: usize,
    pub lambda: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { dim: 8, lambda: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Seeds sampling and optimizer initialization for every command.
    pub seed: u64,
    pub format: Format,
    pub output_dir: PathBuf,
    pub spectrum: VariationalSection,
    pub evolve: EvolutionConfig,
    pub vqe: VariationalSection,
    pub grid: GridSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            format: Format::Csv,
            output_dir: PathBuf::from("out"),
            spectrum: VariationalSection::default(),
            evolve: EvolutionConfig::default(),
            vqe: VariationalSection::default(),
            grid: GridSection::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Pushes the global seed into every section and derives ansatz widths.
    pub fn normalize(&mut self) {
        self.evolve.seed = self.seed;
        for section in [&mut self.spectrum, &mut self.vqe] {
            section.vqd.optimizer.seed = self.seed;
            if section.hamiltonian.dim.is_power_of_two() {
                section.ansatz.n_qubits = section.hamiltonian.dim.trailing_zeros() as usize;
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run config serializes")
    }
}

pub fn validate_variational(section: &VariationalSection) -> Result<(), CliError> {
    section.hamiltonian.validate().map_err(CliError::invalid)?;
    section.ansatz.validate().map_err(CliError::invalid)?;
    section.vqd.optimizer.validate().map_err(CliError::invalid)?;
    let dim = section.hamiltonian.dim;
    if section.vqd.levels == 0 || section.vqd.levels > dim {
        return Err(CliError::Config(format!("levels must be in 1..={dim}")));
    }
    if section.vqd.restarts == 0 {
        return Err(CliError::Config("restarts must be at least 1".into()));
    }
    Ok(())
}

pub fn validate_grid(grid: &GridSection) -> Result<(), CliError> {
    HamiltonianSpec::new(grid.dim, grid.lambda, Representation::Position)
        .map(|_| ())
        .map_err(CliError::invalid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let mut cfg = RunConfig::default();
        cfg.normalize();
        let back: RunConfig = serde_json::from_str(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_file_fills_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"seed": 5, "grid": {"lambda": 0.0}}"#).unwrap();
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.grid, GridSection { dim: 8, lambda: 0.0 });
        assert_eq!(cfg.evolve, EvolutionConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sed": 5}"#).is_err());
    }

    #[test]
    fn normalize_propagates_seed_and_width() {
        let mut cfg = RunConfig { seed: 11, ..Default::default() };
        cfg.vqe.hamiltonian.dim = 4;
        cfg.normalize();
        assert_eq!(cfg.evolve.seed, 11);
        assert_eq!(cfg.vqe.vqd.optimizer.seed, 11);
        assert_eq!(cfg.vqe.ansatz.n_qubits, 2);
    }
}
