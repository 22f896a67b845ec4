//! The four subcommands. Each returns its artifacts in memory plus any
//! warnings; nothing is written here.

use qaho::analysis::{exact_spectrum, SpectrumReport};
use qaho::circuit::basis_label;
use qaho::evolution::{evolution_circuit, evolve_trajectory, potential_grid, EvolutionConfig, EvolutionMethod};
use qaho::model::{hamiltonian, pauli_decompose, HamiltonianExport};
use qaho::vqe::{vqd_spectrum, VQEResult};
use serde::Serialize;

use crate::config::{validate_grid, validate_variational, Format, GridSection, VariationalSection};
use crate::output::Artifact;
use crate::CliError;

pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub warnings: Vec<String>,
}

/// Shortest round-trip form; switches to exponent notation for tiny or huge values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn run_vqd(section: &VariationalSection) -> Result<(Vec<VQEResult>, Vec<f64>, Vec<String>), CliError> {
    validate_variational(section)?;
    let spec = &section.hamiltonian;
    let terms = pauli_decompose(&hamiltonian(spec)?, spec.n_qubits())?;
    let results = vqd_spectrum(&terms, &section.ansatz, &section.vqd)?;
    let mut exact = exact_spectrum(spec)?;
    exact.truncate(results.len());
    let warnings = results
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.converged)
        .map(|(n, r)| format!("level {n} did not converge within {} evaluations", r.iterations))
        .collect();
    Ok((results, exact, warnings))
}

pub fn spectrum(section: &VariationalSection, format: Format) -> Result<Outcome, CliError> {
    let (results, exact, warnings) = run_vqd(section)?;
    let vqe: Vec<f64> = results.iter().map(|r| r.energy).collect();
    let report = SpectrumReport::new(section.hamiltonian.lambda, vqe, exact)?;

    let table = match format {
        Format::Csv => Artifact::csv(
            "spectrum.csv",
            &["n", "vqe", "perturbation", "wkb", "exact"].map(String::from),
            report
                .rows()
                .map(|(n, v, p, w, e)| vec![n.to_string(), num(v), num(p), num(w), num(e)]),
        ),
        Format::Json => Artifact::json("spectrum.json", &report),
    };
    Ok(Outcome {
        artifacts: vec![
            table,
            Artifact::json("metrics.json", &report.metrics),
            Artifact::json("hamiltonian.json", &HamiltonianExport::build(&section.hamiltonian)?),
        ],
        warnings,
    })
}

#[derive(Serialize)]
struct LevelRecord<'a> {
    n: usize,
    energy: f64,
    exact: f64,
    fidelity: f64,
    iterations: usize,
    converged: bool,
    params: &'a [f64],
}

#[derive(Serialize)]
struct VqdExport<'a> {
    lambda: f64,
    representation: qaho::model::Representation,
    mean_fidelity: f64,
    levels: Vec<LevelRecord<'a>>,
    warnings: &'a [String],
}

pub fn vqe(section: &VariationalSection, format: Format) -> Result<Outcome, CliError> {
    let (results, exact, warnings) = run_vqd(section)?;
    let levels: Vec<LevelRecord> = results
        .iter()
        .zip(&exact)
        .enumerate()
        .map(|(n, (r, &e))| LevelRecord {
            n,
            energy: r.energy,
            exact: e,
            fidelity: r.fidelity_vs_exact,
            iterations: r.iterations,
            converged: r.converged,
            params: &r.parameters,
        })
        .collect();
    let mean_fidelity = levels.iter().map(|l| l.fidelity).sum::<f64>() / levels.len() as f64;
    let fidelity = match format {
        Format::Csv => Artifact::csv(
            "fidelity.csv",
            &["n".into(), "fidelity".into()],
            levels.iter().map(|l| vec![l.n.to_string(), num(l.fidelity)]),
        ),
        Format::Json => Artifact::json(
            "fidelity.json",
            &levels.iter().map(|l| (l.n, l.fidelity)).collect::<Vec<_>>(),
        ),
    };
    let export = VqdExport {
        lambda: section.hamiltonian.lambda,
        representation: section.hamiltonian.representation,
        mean_fidelity,
        levels,
        warnings: &warnings,
    };
    Ok(Outcome {
        artifacts: vec![Artifact::json("vqd.json", &export), fidelity],
        warnings,
    })
}

pub fn evolve(cfg: &EvolutionConfig, format: Format) -> Result<Outcome, CliError> {
    cfg.validate().map_err(CliError::invalid)?;
    let records = evolve_trajectory(cfg)?;
    let n = cfg.spec.n_qubits();
    let labels: Vec<String> = (0..cfg.spec.dim).map(|k| basis_label(k, n)).collect();

    let mut artifacts = Vec::new();
    match format {
        Format::Csv => {
            let mut header = vec!["t".to_string()];
            header.extend(labels.iter().map(|l| format!("p{l}")));
            header.push("autocorr".into());
            if cfg.shots.is_some() {
                header.extend(labels.iter().map(|l| format!("c{l}")));
            }
            let rows = records.iter().map(|r| {
                let mut row = vec![num(r.time)];
                row.extend(r.probabilities.iter().map(|&p| num(p)));
                row.push(num(r.autocorrelation));
                if let Some(h) = &r.sampled_counts {
                    row.extend(h.dense_counts().iter().map(u64::to_string));
                }
                row
            });
            artifacts.push(Artifact::csv("trajectory.csv", &header, rows));

            if cfg.shots.is_some() {
                let mut header = vec!["step".to_string(), "t".to_string(), "seed".to_string()];
                header.extend(labels.iter().map(|l| format!("c{l}")));
                let rows = records.iter().filter_map(|r| {
                    r.sampled_counts.as_ref().map(|h| {
                        let mut row = vec![r.step.to_string(), num(r.time), h.seed.to_string()];
                        row.extend(h.dense_counts().iter().map(u64::to_string));
                        row
                    })
                });
                artifacts.push(Artifact::csv("counts.csv", &header, rows));
            }
        }
        Format::Json => artifacts.push(Artifact::json("trajectory.json", &records)),
    }
    if cfg.method == EvolutionMethod::Circuit {
        let dt = cfg.t_max / cfg.steps as f64;
        artifacts.push(Artifact::json("circuit.json", &evolution_circuit(&cfg.spec, dt)?));
    }
    Ok(Outcome {
        artifacts,
        warnings: Vec::new(),
    })
}

pub fn grid(section: &GridSection, format: Format) -> Result<Outcome, CliError> {
    validate_grid(section)?;
    let g = potential_grid(section.dim, section.lambda)?;
    let artifact = match format {
        Format::Csv => Artifact::csv(
            "potential.csv",
            &["x", "y", "V"].map(String::from),
            g.rows().map(|(x, y, v)| vec![num(x), num(y), num(v)]),
        ),
        Format::Json => Artifact::json(
            "potential.json",
            &g.rows().map(|(x, y, v)| [x, y, v]).collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome {
        artifacts: vec![artifact],
        warnings: Vec::new(),
    })
}
