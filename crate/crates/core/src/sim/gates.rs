use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernels::Mat2;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Elementary gate of a compiled circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    Cnot { control: usize, target: usize },
    /// `exp(-i angle/2 sigma_axis)`.
    Rotation { axis: Axis, angle: f64, qubit: usize },
    Hadamard(usize),
    /// `Rx(pi/2)` (maps Y to Z under conjugation) or its adjoint.
    SqrtX { qubit: usize, adjoint: bool },
}

impl GateOp {
    pub fn is_cnot(&self) -> bool {
        matches!(self, GateOp::Cnot { .. })
    }

    /// Qubit the noise channel attaches to, for two-qubit gates.
    pub fn noisy_target(&self) -> Option<usize> {
        match *self {
            GateOp::Cnot { target, .. } => Some(target),
            _ => None,
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q >= n_qubits {
                Err(Error::Dimension(format!(
                    "gate qubit {q} out of range for {n_qubits} qubits"
                )))
            } else {
                Ok(())
            }
        };
        match *self {
            GateOp::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::InvalidArgument(format!(
                        "CNOT with control = target = {control}"
                    )));
                }
                Ok(())
            }
            GateOp::Rotation { qubit, .. } | GateOp::SqrtX { qubit, .. } => check(qubit),
            GateOp::Hadamard(q) => check(q),
        }
    }

    /// 2x2 matrix of a single-qubit gate.
    pub(crate) fn single_qubit_matrix(&self) -> Option<(usize, Mat2)> {
        let c = Complex64::new;
        match *self {
            GateOp::Cnot { .. } => None,
            GateOp::Hadamard(q) => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                Some((q, [[h, h], [h, -h]]))
            }
            GateOp::SqrtX { qubit, adjoint } => {
                let s = if adjoint { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                let d = c(FRAC_1_SQRT_2, 0.0);
                let o = c(0.0, s);
                Some((qubit, [[d, o], [o, d]]))
            }
            GateOp::Rotation { axis, angle, qubit } => {
                let (s, co) = (angle / 2.0).sin_cos();
                let m = match axis {
                    Axis::X => [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]],
                    Axis::Y => [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]],
                    Axis::Z => [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]],
                };
                Some((qubit, m))
            }
        }
    }
}
