//! Acceptance suite. Each test prints one line
//! `ACCEPTANCE <id> PASS|FAIL <name>: <detail>` and then asserts.
//!
//! Run with `cargo test -p qaho-cli --test acceptance -- --nocapture --test-threads=1`
//! to see every line.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qaho::analysis::{error_metrics, exact_spectrum, perturbation_energy, wkb_energy};
use qaho::circuit::{circuit_to_unitary, filter_circuit_for_index, qft_circuit, run_circuit, total_variation};
use qaho::evolution::{
    evolution_circuit, evolve_state, evolve_trajectory, exact_evolution_operator, potential_phase_diagonal,
    split_error, split_evolution_operator, EvolutionConfig, InitialState,
};
use qaho::model::{fock_hamiltonian, pauli_decompose, pauli_sum_matrix, qft_matrix, HamiltonianSpec};
use qaho::numkernel::{eig_hermitian, ComplexMatrix, StateVector};
use qaho::vqe::{vqd_spectrum, AnsatzSpec, VQDConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The 8x8 Fock Hamiltonian at λ = 0.05 as displayed to four decimals.
const DISPLAYED_MATRIX: [[f64; 8]; 8] = [
    [0.5375, 0.0, 0.1061, 0.0, 0.0612, 0.0, 0.0, 0.0],
    [0.0, 1.6875, 0.0, 0.3062, 0.0, 0.1369, 0.0, 0.0],
    [0.1061, 0.0, 2.9875, 0.0, 0.6062, 0.0, 0.2372, 0.0],
    [0.0, 0.3062, 0.0, 4.4375, 0.0, 1.0062, 0.0, 0.3623],
    [0.0612, 0.0, 0.6062, 0.0, 6.0375, 0.0, 1.5062, 0.0],
    [0.0, 0.1369, 0.0, 1.0062, 0.0, 7.7875, 0.0, 1.4582],
    [0.0, 0.0, 0.2372, 0.0, 1.5062, 0.0, 8.9875, 0.0],
    [0.0, 0.0, 0.0, 0.3623, 0.0, 1.4582, 0.0, 8.6375],
];

/// Reported negated potential phases at t = 1 on the 8-point grid.
const REPORTED_PHASES: [f64; 8] = [2.0643, 1.0398, 0.4235, 0.1001, 0.0, 0.1001, 0.4235, 1.0398];

const REPORTED_VQE: [f64; 8] = [0.532151, 1.653929, 2.794014, 4.268678, 5.329061, 6.829527, 9.688074, 9.813473];
const REPORTED_PERTURBATION: [f64; 8] = [0.5375, 1.6875, 2.9875, 4.4375, 6.0375, 7.7875, 9.6875, 11.7375];
const REPORTED_WKB: [f64; 8] = [0.557, 1.644, 2.987, 4.438, 6.038, 7.788, 9.688, 11.738];
const REPORTED_EXACT: [f64; 8] = [
    0.53215009, 1.665392897, 2.87513953, 4.18508178, 5.49052597, 6.829524, 9.65118441, 9.88346525,
];

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {id:>2} {verdict} {name}: {detail}");
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn fastest<T>(reps: usize, mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..reps {
        let start = Instant::now();
        let v = f();
        best = best.min(start.elapsed());
        out = Some(v);
    }
    (out.expect("reps >= 1"), best)
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn fock() -> HamiltonianSpec {
    HamiltonianSpec::fock(8, 0.05).unwrap()
}

fn position() -> HamiltonianSpec {
    HamiltonianSpec::position(8, 0.05).unwrap()
}

#[test]
fn criterion_01_hamiltonian_matrix() {
    let (h, elapsed) = fastest(5, || fock_hamiltonian(&fock()).unwrap());
    let mut mismatches = Vec::new();
    for (i, row) in DISPLAYED_MATRIX.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            let got = round4(h[(i, j)].re);
            if (got - want).abs() > 1e-12 || h[(i, j)].im != 0.0 {
                mismatches.push(format!("[{i}][{j}] {got} vs {want}"));
            }
        }
    }
    let pass = mismatches.is_empty() && elapsed < Duration::from_millis(1);
    report(
        1,
        "Hamiltonian matrix to 4 decimals",
        pass,
        &format!("H[7][7] = {:.6}, mismatches {:?}, runtime {:?}", h[(7, 7)].re, mismatches, elapsed),
    );
}

#[test]
fn criterion_02_phase_table() {
    let theta = potential_phase_diagonal(8, 0.05, 1.0).unwrap();
    let mut mismatches = Vec::new();
    for (k, (&th, &want)) in theta.iter().zip(&REPORTED_PHASES).enumerate() {
        if (round4(-th) - want).abs() > 1e-12 {
            mismatches.push(format!("entry {k}: computed {:.6} vs reported {want}", -th));
        }
    }
    report(
        2,
        "potential phase table to 4 decimals",
        mismatches.is_empty(),
        &format!("{mismatches:?}"),
    );
}

#[test]
fn criterion_03_exact_spectrum() {
    let h = fock_hamiltonian(&fock()).unwrap();
    let (eig, elapsed) = fastest(3, || eig_hermitian(&h).unwrap());
    let devs: Vec<f64> = eig.eigenvalues.iter().zip(&REPORTED_EXACT).map(|(a, b)| (a - b).abs()).collect();
    let worst = devs.iter().cloned().fold(0.0, f64::max);
    let pass = worst <= 1e-6 && elapsed < Duration::from_millis(10);
    report(
        3,
        "exact spectrum vs reported column within 1e-6",
        pass,
        &format!(
            "computed {:?}, per-level deviation {:?}, trace {:.6} vs reported column sum {:.6}, runtime {:?}",
            eig.eigenvalues,
            devs,
            h.trace().re,
            REPORTED_EXACT.iter().sum::<f64>(),
            elapsed
        ),
    );
}

#[test]
fn criterion_04_perturbation_column() {
    let bad: Vec<usize> = (0..8)
        .filter(|&n| format!("{:.4}", perturbation_energy(n, 0.05)) != format!("{:.4}", REPORTED_PERTURBATION[n]))
        .collect();
    report(4, "perturbation column at printed precision", bad.is_empty(), &format!("mismatched levels {bad:?}"));
}

#[test]
fn criterion_05_wkb_formula() {
    // Closed form at λ = 0.05: (n + ½)(1 + 0.075 (n + ½)).
    let oracle = |n: usize| {
        let m = n as f64 + 0.5;
        m * (1.0 + 0.075 * m)
    };
    let worst = (0..8).map(|n| (wkb_energy(n, 0.05) - oracle(n)).abs()).fold(0.0, f64::max);
    let gaps: Vec<String> = (0..8)
        .map(|n| format!("{:.5}/{}", wkb_energy(n, 0.05), REPORTED_WKB[n]))
        .collect();
    report(
        5,
        "WKB closed form",
        worst <= 1e-12,
        &format!("max formula deviation {worst:e}; computed/reported column {gaps:?} (reported column not matched)"),
    );
}

#[test]
fn criterion_06_reported_metrics() {
    let rel = |got: f64, want: f64| (got / want - 1.0).abs();
    let e = error_metrics(&REPORTED_VQE, &REPORTED_EXACT).unwrap();
    let p = error_metrics(&REPORTED_VQE, &REPORTED_PERTURBATION).unwrap();
    let w = error_metrics(&REPORTED_VQE, &REPORTED_WKB).unwrap();
    let checks: [(&str, f64, f64, bool); 8] = [
        ("exact MSE", e.mse, 5.7374e-3, rel(e.mse, 5.7374e-3) <= 0.01),
        ("exact RMSE", e.rmse, 7.5747e-2, rel(e.rmse, 7.5747e-2) <= 0.01),
        ("exact MAPE", e.mape.unwrap(), 1.1063, (e.mape.unwrap() - 1.1063).abs() <= 0.2),
        ("perturbation MAPE", p.mape.unwrap(), 6.71, rel(p.mape.unwrap(), 6.71) <= 0.02),
        ("perturbation MSE", p.mse, 0.6486, rel(p.mse, 0.6486) <= 0.02),
        ("perturbation RMSE", p.rmse, 0.8053, rel(p.rmse, 0.8053) <= 0.02),
        ("WKB MAPE", w.mape.unwrap(), 5.36, rel(w.mape.unwrap(), 5.36) <= 0.02),
        ("WKB R2", w.r_squared.unwrap(), 0.9517, rel(w.r_squared.unwrap(), 0.9517) <= 0.02),
    ];
    let detail: Vec<String> = checks
        .iter()
        .map(|(name, got, want, ok)| format!("{name} {got:.6} vs {want} [{}]", if *ok { "ok" } else { "off" }))
        .collect();
    report(
        6,
        "metrics recomputed from reported columns",
        checks.iter().all(|c| c.3),
        &detail.join("; "),
    );
}

#[test]
fn criterion_07_variational_spectrum() {
    let h = fock_hamiltonian(&fock()).unwrap();
    let exact = eig_hermitian(&h).unwrap().eigenvalues;
    let terms = pauli_decompose(&h, 3).unwrap();
    let cfg = VQDConfig::default();
    assert_eq!(cfg.restarts, 5);
    let start = Instant::now();
    let levels = vqd_spectrum(&terms, &AnsatzSpec::default(), &cfg).unwrap();
    let elapsed = start.elapsed();

    let energies: Vec<f64> = levels.iter().map(|r| r.energy).collect();
    let fids: Vec<f64> = levels.iter().map(|r| r.fidelity_vs_exact).collect();
    let bounded = energies.iter().zip(&exact).all(|(e, x)| *e >= x - 1e-9);
    let ground = (energies[0] - 0.53215009).abs() <= 1e-3;
    let close = energies.iter().zip(&exact).all(|(e, x)| (e - x).abs() <= 5e-2);
    let faithful = fids.iter().all(|&f| f >= 0.999);
    let pass = levels.len() == 8 && bounded && ground && close && faithful && elapsed < Duration::from_secs(120);
    report(
        7,
        "VQD spectrum",
        pass,
        &format!(
            "energies {energies:?}; min(E - exact) {:e}; ground offset from 0.53215009 {:.3e}; min fidelity {:.9}; runtime {elapsed:?}",
            energies.iter().zip(&exact).map(|(e, x)| e - x).fold(f64::INFINITY, f64::min),
            energies[0] - 0.53215009,
            fids.iter().cloned().fold(1.0, f64::min),
        ),
    );
}

#[test]
fn criterion_08_circuit_equivalence() {
    let start = Instant::now();
    let c = evolution_circuit(&position(), PI / 6.0).unwrap();
    let data = c.data_unitary().unwrap();
    let split = split_evolution_operator(&position(), PI / 6.0).unwrap();
    let evo_dev = data.max_abs_diff(&split);
    let qft_dev = (1..=4)
        .map(|n| circuit_to_unitary(&qft_circuit(n)).unwrap().max_abs_diff(&qft_matrix(1 << n)))
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let pass = evo_dev <= 1e-8 && qft_dev <= 1e-10 && elapsed < Duration::from_secs(1);
    report(
        8,
        "circuit and matrix paths agree",
        pass,
        &format!("evolution circuit deviation {evo_dev:e}, QFT deviation {qft_dev:e}, runtime {elapsed:?}"),
    );
}

fn coherent_like(dim: usize) -> Vec<[f64; 2]> {
    (0..dim)
        .map(|n| [(-0.5f64).exp() / (1..=n).map(|k| k as f64).product::<f64>().sqrt(), 0.0])
        .collect()
}

#[test]
fn criterion_09_trajectory_properties() {
    let start = Instant::now();
    let cfg = EvolutionConfig { shots: None, ..Default::default() };
    let traj = evolve_trajectory(&cfg).unwrap();
    let norm_dev = traj
        .iter()
        .map(|r| (r.probabilities.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let energy_dev = traj.iter().map(|r| (r.energy - traj[0].energy).abs()).fold(0.0, f64::max);

    let control = EvolutionConfig {
        spec: HamiltonianSpec::fock(8, 0.0).unwrap(),
        initial: InitialState::Amplitudes(coherent_like(8)),
        shots: None,
        ..Default::default()
    };
    let psi0 = control.initial.to_state(8).unwrap();
    let revived = evolve_state(&control, &psi0, 2.0 * PI).unwrap();
    let control_ac = psi0.inner(&revived).norm_sqr();

    let mean = traj.iter().map(|r| r.autocorrelation).sum::<f64>() / traj.len() as f64;
    let late_max = traj
        .iter()
        .filter(|r| r.time > 2.0 * PI)
        .map(|r| r.autocorrelation)
        .fold(0.0, f64::max);
    let interior_max = traj[1..traj.len() - 1]
        .iter()
        .map(|r| r.autocorrelation)
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();

    let pass = traj.len() == 29
        && norm_dev <= 1e-9
        && energy_dev <= 1e-8
        && control_ac >= 0.999
        && late_max > mean
        && interior_max < 0.999
        && elapsed < Duration::from_secs(5);
    report(
        9,
        "trajectory properties",
        pass,
        &format!(
            "points {}, norm dev {norm_dev:e}, energy dev {energy_dev:e}, harmonic autocorr at 2pi {control_ac:.12}, \
             late max {late_max:.6} vs mean {mean:.6}, interior max {interior_max:.6}, runtime {elapsed:?}",
            traj.len()
        ),
    );
}

#[test]
fn criterion_10_sampling() {
    let mut worst = 0.0f64;
    for seed in [0, 1, 2] {
        let traj = evolve_trajectory(&EvolutionConfig { seed, shots: Some(8192), ..Default::default() }).unwrap();
        for r in &traj {
            let tv = total_variation(&r.sampled_counts.as_ref().unwrap().frequencies(), &r.probabilities);
            worst = worst.max(tv);
        }
    }
    report(10, "shot sampling total variation", worst <= 0.05, &format!("worst TV {worst:.5} over 3 seeds x 29 steps"));
}

fn random_hermitian(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(8, 8, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    a.add(&a.adjoint())
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    StateVector::from_amplitudes((0..dim).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect())
        .normalized()
        .unwrap()
}

fn run_cli(args: &[&str], out: &Path) -> BTreeMap<String, Vec<u8>> {
    let _ = std::fs::remove_dir_all(out);
    let status = Command::new(env!("CARGO_BIN_EXE_qaho"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    std::fs::read_dir(out)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn criterion_11_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    let pauli_dev = (0..20)
        .map(|_| {
            let h = random_hermitian(&mut rng);
            pauli_sum_matrix(&pauli_decompose(&h, 3).unwrap(), 3).unwrap().max_abs_diff(&h)
        })
        .fold(0.0, f64::max);

    let mut leak = 0.0f64;
    for index in 0..8 {
        let c = filter_circuit_for_index(index, rng.gen::<f64>() * 2.0 * PI, 3).unwrap();
        for _ in 0..5 {
            let s = random_state(&mut rng, 8);
            let out = run_circuit(&c, &c.embed_data_state(&s).unwrap()).unwrap();
            leak = leak.max(c.project_data(&out).1);
        }
    }

    let ratio = split_error(&position(), 0.01).unwrap() / split_error(&position(), 0.005).unwrap();

    let composition = [fock(), position()]
        .iter()
        .map(|spec| {
            let a = exact_evolution_operator(spec, 1.1).unwrap();
            let b = exact_evolution_operator(spec, 2.7).unwrap();
            a.matmul(&b).max_abs_diff(&exact_evolution_operator(spec, 3.8).unwrap())
        })
        .fold(0.0, f64::max);

    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["spectrum", "--seed", "7"],
        &["evolve", "--seed", "7"],
        &["vqe", "--seed", "7"],
        &["grid", "--seed", "7"],
    ];
    let mut deterministic = true;
    let mut artifact_count = 0;
    for args in runs {
        let out = dir.path().join(args[0]);
        let first = run_cli(args, &out);
        let second = run_cli(args, &out);
        artifact_count += first.len();
        deterministic &= first == second;
    }

    let pass = pauli_dev <= 1e-10
        && leak <= 1e-12
        && (3.5..=4.5).contains(&ratio)
        && composition <= 1e-9
        && deterministic;
    report(
        11,
        "property suites",
        pass,
        &format!(
            "Pauli round trip {pauli_dev:e}, ancilla leakage {leak:e}, split error ratio {ratio:.4}, \
             composition {composition:e}, CLI byte-identical over {artifact_count} artifacts: {deterministic}"
        ),
    );
}

#[test]
fn exact_spectrum_is_monotone_in_coupling() {
    let a = exact_spectrum(&HamiltonianSpec::fock(8, 0.0).unwrap()).unwrap();
    let b = exact_spectrum(&fock()).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| x <= y));
}
