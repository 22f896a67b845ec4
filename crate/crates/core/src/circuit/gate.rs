use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gate kinds understood by the simulator. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    Ry(f64),
    Rz(f64),
    /// `diag(1, e^{iθ})`.
    Phase(f64),
    /// Phase gate with one control: `diag(1, 1, 1, e^{iθ})`.
    CPhase(f64),
    Cz,
    Swap,
    /// Doubly controlled X.
    Toffoli,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Ry(_) => "RY",
            GateKind::Rz(_) => "RZ",
            GateKind::Phase(_) => "PHASE",
            GateKind::CPhase(_) => "CPHASE",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::Toffoli => "TOFFOLI",
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            GateKind::Ry(t) | GateKind::Rz(t) | GateKind::Phase(t) | GateKind::CPhase(t) => Some(t),
            _ => None,
        }
    }

    fn arity(&self) -> (usize, usize) {
        // (targets, controls)
        match self {
            GateKind::H | GateKind::X | GateKind::Ry(_) | GateKind::Rz(_) | GateKind::Phase(_) => (1, 0),
            GateKind::CPhase(_) | GateKind::Cz => (1, 1),
            GateKind::Swap => (2, 0),
            GateKind::Toffoli => (1, 2),
        }
    }

    fn adjoint(&self) -> Self {
        match *self {
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::Phase(t) => GateKind::Phase(-t),
            GateKind::CPhase(t) => GateKind::CPhase(-t),
            other => other,
        }
    }

    /// Single-target 2x2 matrix `[[u00, u01], [u10, u11]]`; `None` for SWAP.
    pub(crate) fn target_matrix(&self) -> Option<[Complex64; 4]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let m = match *self {
            GateKind::H => [
                c(FRAC_1_SQRT_2, 0.0),
                c(FRAC_1_SQRT_2, 0.0),
                c(FRAC_1_SQRT_2, 0.0),
                c(-FRAC_1_SQRT_2, 0.0),
            ],
            GateKind::X | GateKind::Toffoli => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            GateKind::Ry(t) => {
                let (s, co) = (t / 2.0).sin_cos();
                [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
            }
            GateKind::Rz(t) => [
                Complex64::from_polar(1.0, -t / 2.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                Complex64::from_polar(1.0, t / 2.0),
            ],
            GateKind::Phase(t) | GateKind::CPhase(t) => {
                [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, t)]
            }
            GateKind::Cz => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
            GateKind::Swap => return None,
        };
        Some(m)
    }
}

/// A control qubit; `polarity = false` makes it an anti-control firing on `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub polarity: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: true,
        }
    }

    pub fn anti(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: false,
        }
    }
}

/// One gate application.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "GateRecord", try_from = "GateRecord")]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<Control>,
}

impl Gate {
    /// Validates arity, distinct qubits and finite angles.
    pub fn new(kind: GateKind, targets: Vec<usize>, controls: Vec<Control>) -> Result<Self> {
        let (nt, nc) = kind.arity();
        if targets.len() != nt || controls.len() != nc {
            return Err(Error::InvalidGate(format!(
                "{} takes {nt} target(s) and {nc} control(s), got {} and {}",
                kind.name(),
                targets.len(),
                controls.len()
            )));
        }
        if let Some(t) = kind.theta() {
            if !t.is_finite() {
                return Err(Error::InvalidGate(format!("{} angle is not finite", kind.name())));
            }
        }
        let mut qubits: Vec<usize> = targets.iter().copied().chain(controls.iter().map(|c| c.qubit)).collect();
        qubits.sort_unstable();
        if qubits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGate(format!(
                "{} acts on repeated qubits {:?}",
                kind.name(),
                qubits
            )));
        }
        Ok(Self {
            kind,
            targets,
            controls,
        })
    }

    fn build(kind: GateKind, targets: Vec<usize>, controls: Vec<Control>) -> Self {
        Self::new(kind, targets, controls).expect("gate constructor arguments are invalid")
    }

    pub fn h(q: usize) -> Self {
        Self::build(GateKind::H, vec![q], vec![])
    }

    pub fn x(q: usize) -> Self {
        Self::build(GateKind::X, vec![q], vec![])
    }

    pub fn ry(q: usize, theta: f64) -> Self {
        Self::build(GateKind::Ry(theta), vec![q], vec![])
    }

    pub fn rz(q: usize, theta: f64) -> Self {
        Self::build(GateKind::Rz(theta), vec![q], vec![])
    }

    pub fn phase(q: usize, theta: f64) -> Self {
        Self::build(GateKind::Phase(theta), vec![q], vec![])
    }

    pub fn cphase(control: usize, target: usize, theta: f64) -> Self {
        Self::build(GateKind::CPhase(theta), vec![target], vec![Control::on(control)])
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::build(GateKind::Cz, vec![b], vec![Control::on(a)])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::build(GateKind::Swap, vec![a, b], vec![])
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Self::build(GateKind::Toffoli, vec![target], vec![Control::on(c1), Control::on(c2)])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// Highest qubit index touched.
    pub fn max_qubit(&self) -> usize {
        self.targets
            .iter()
            .copied()
            .chain(self.controls.iter().map(|c| c.qubit))
            .max()
            .unwrap_or(0)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            kind: self.kind.adjoint(),
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    /// Applies the gate in place. Qubit `q` is bit `q` of the amplitude index.
    pub(crate) fn apply(&self, amps: &mut [Complex64]) {
        let (cmask, cval) = self.controls.iter().fold((0usize, 0usize), |(m, v), c| {
            let bit = 1 << c.qubit;
            (m | bit, if c.polarity { v | bit } else { v })
        });
        match self.kind.target_matrix() {
            Some([u00, u01, u10, u11]) => {
                let tbit = 1 << self.targets[0];
                for i0 in 0..amps.len() {
                    if i0 & tbit != 0 || i0 & cmask != cval {
                        continue;
                    }
                    let i1 = i0 | tbit;
                    let (a0, a1) = (amps[i0], amps[i1]);
                    amps[i0] = u00 * a0 + u01 * a1;
                    amps[i1] = u10 * a0 + u11 * a1;
                }
            }
            None => {
                let (ba, bb) = (1 << self.targets[0], 1 << self.targets[1]);
                for i in 0..amps.len() {
                    if i & ba != 0 && i & bb == 0 && i & cmask == cval {
                        amps.swap(i, i ^ ba ^ bb);
                    }
                }
            }
        }
    }
}

/// Flat JSON form of a gate: `{kind, targets, controls, polarity, theta}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: String,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
    pub polarity: Vec<bool>,
    pub theta: Option<f64>,
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        Self {
            kind: g.kind.name().to_string(),
            targets: g.targets,
            controls: g.controls.iter().map(|c| c.qubit).collect(),
            polarity: g.controls.iter().map(|c| c.polarity).collect(),
            theta: g.kind.theta(),
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Self> {
        let theta = || {
            r.theta
                .ok_or_else(|| Error::InvalidGate(format!("{} requires theta", r.kind)))
        };
        let kind = match r.kind.as_str() {
            "H" => GateKind::H,
            "X" => GateKind::X,
            "RY" => GateKind::Ry(theta()?),
            "RZ" => GateKind::Rz(theta()?),
            "PHASE" => GateKind::Phase(theta()?),
            "CPHASE" => GateKind::CPhase(theta()?),
            "CZ" => GateKind::Cz,
            "SWAP" => GateKind::Swap,
            "TOFFOLI" => GateKind::Toffoli,
            other => return Err(Error::InvalidGate(format!("unknown gate kind {other:?}"))),
        };
        if r.polarity.len() != r.controls.len() {
            return Err(Error::InvalidGate("polarity and controls differ in length".into()));
        }
        let controls = r
            .controls
            .iter()
            .zip(&r.polarity)
            .map(|(&qubit, &polarity)| Control { qubit, polarity })
            .collect();
        Gate::new(kind, r.targets, controls)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Gate::new(GateKind::H, vec![0, 1], vec![]).is_err());
        assert!(Gate::new(GateKind::Toffoli, vec![0], vec![Control::on(0), Control::on(1)]).is_err());
        assert!(Gate::new(GateKind::Ry(f64::NAN), vec![0], vec![]).is_err());
        assert!(Gate::new(GateKind::Swap, vec![1, 1], vec![]).is_err());
        assert!(Gate::new(GateKind::CPhase(1.0), vec![0], vec![Control::anti(2)]).is_ok());
    }

    #[test]
    fn anti_control_fires_on_zero() {
        let g = Gate::new(GateKind::X, vec![0], vec![]).unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[0] = Complex64::new(1.0, 0.0);
        g.apply(&mut amps);
        assert_eq!(amps[1].re, 1.0);

        let cz_anti = Gate::new(GateKind::CPhase(std::f64::consts::PI), vec![1], vec![Control::anti(0)]).unwrap();
        let mut amps = vec![Complex64::new(0.5, 0.0); 4];
        cz_anti.apply(&mut amps);
        // only |10⟩ (q1=1, q0=0) picks up the sign
        assert_eq!(amps.iter().map(|a| a.re.signum()).collect::<Vec<_>>(), vec![1.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn json_record_round_trip() {
        let g = Gate::new(GateKind::CPhase(0.25), vec![2], vec![Control::anti(0)]).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"CPHASE","targets":[2],"controls":[0],"polarity":[false],"theta":0.25}"#
        );
        let back: Gate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Gate>(r#"{"kind":"RY","targets":[0],"controls":[],"polarity":[],"theta":null}"#).is_err());
    }
}
