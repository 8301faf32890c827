//! Effect probabilities and qutrit state reconstruction.
//!
//! The logical effect E = diag(0, ½, 1) assigns each basis state its own
//! truth value as a probability. Measuring E after each of the eight probe
//! gates I, NOT[0], SQI[0], SQI[1/2], SQI[1], SQNOT[0], SQNOT[1/2], SQNOT[1]
//! yields eight probabilities that are affine in the Gell-Mann coordinates:
//!
//! ```text
//! p1 = (3 − √3 r3 − 3 r8) / 6
//! p2 = 1/2 − r3/√3
//! p3 = (6 − 3√3 r3 − 2√3 r6 − 3 r8) / 12
//! p4 = 1/2 − r4/√3
//! p5 = (3 − √3 r1 − 3 r8) / 6
//! p6 = (6 − 3√3 r3 − 2√3 r7 − 3 r8) / 12
//! p7 = 1/2 − r5/√3
//! p8 = (3 − √3 r2 − 3 r8) / 6
//! ```
//!
//! The system is triangular in the order r3, r8, r6, r4, r1, r7, r5, r2, so
//! the state is recovered by back-substitution.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{apply_to_density, not3, sqrt_i3, sqrt_not3, GateSpec};
use crate::gellmann::{
    compose, compose_with_tolerance, decompose, BlochVector8, PositivityFailure,
};
use crate::linalg::{eigvals_hermitian3, ComplexMatrix, DEFAULT_TOL};
use crate::states::{DensityOperator, Probability, TruthValue};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Tolerance for agreement between the closed-form probes and the direct
/// trace computation.
pub const CONSISTENCY_TOL: f64 = 1e-10;

/// A Hermitian operator with spectrum in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if validate_effect(&matrix) {
            Ok(Self { matrix })
        } else {
            Err(Error::NotAnEffect)
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// E = diag(0, ½, 1).
pub fn logical_effect() -> Effect {
    Effect {
        matrix: ComplexMatrix::diag_real(&[0.0, 0.5, 1.0]),
    }
}

/// Hermitian 3×3 with every eigenvalue in [0, 1] (within [`DEFAULT_TOL`]).
pub fn validate_effect(matrix: &ComplexMatrix) -> bool {
    if matrix.rows() != 3 || matrix.cols() != 3 || !matrix.is_hermitian(DEFAULT_TOL) {
        return false;
    }
    eigvals_hermitian3(matrix)
        .map(|[lo, _, hi]| lo >= -DEFAULT_TOL && hi <= 1.0 + DEFAULT_TOL)
        .unwrap_or(false)
}

/// tr(E·ρ), clamped to [0, 1].
pub fn effect_probability(effect: &Effect, rho: &DensityOperator) -> Result<Probability> {
    let t = effect.matrix.matmul(rho.matrix())?.trace()?;
    Ok(Probability::from_raw(t.re))
}

/// The eight effect probabilities, ordered p1…p8.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbeVector(pub [f64; 8]);

impl ProbeVector {
    pub fn new(p: [f64; 8]) -> Result<Self> {
        for (i, &value) in p.iter().enumerate() {
            if !value.is_finite() || !(-DEFAULT_TOL..=1.0 + DEFAULT_TOL).contains(&value) {
                return Err(Error::ProbeOutOfRange {
                    index: i + 1,
                    value,
                });
            }
        }
        Ok(Self(p))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: Vec<f64> = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let raw: [f64; 8] = raw.try_into().map_err(|v: Vec<f64>| {
            Error::Format(format!("expected 8 probabilities, got {}", v.len()))
        })?;
        Self::new(raw)
    }
}

impl fmt::Display for ProbeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| format!("{p:.6}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Probe gates in order p₁…p₈; the first probe is the bare state.
pub fn probe_gates() -> [GateSpec; 8] {
    let tv = |i| TruthValue::qutrit(i).expect("qutrit index");
    [
        GateSpec::new("I", 3, 1, ComplexMatrix::identity(3)),
        not3(tv(0)),
        sqrt_i3(tv(0)),
        sqrt_i3(tv(1)),
        sqrt_i3(tv(2)),
        sqrt_not3(tv(0)),
        sqrt_not3(tv(1)),
        sqrt_not3(tv(2)),
    ]
    .map(|g| g.expect("catalog gate"))
}

/// Offsets `c` and coefficient matrix `M` with p = c + M·r.
pub fn probe_affine_map() -> ([f64; 8], [[f64; 8]; 8]) {
    let a = 1.0 / (2.0 * SQRT3);
    let b = 1.0 / SQRT3;
    let q = SQRT3 / 4.0;
    //            r1   r2   r3   r4   r5   r6   r7   r8
    let m = [
        [0.0, 0.0, -a, 0.0, 0.0, 0.0, 0.0, -0.5],
        [0.0, 0.0, -b, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -q, 0.0, 0.0, -a, 0.0, -0.25],
        [0.0, 0.0, 0.0, -b, 0.0, 0.0, 0.0, 0.0],
        [-a, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.5],
        [0.0, 0.0, -q, 0.0, 0.0, 0.0, -a, -0.25],
        [0.0, 0.0, 0.0, 0.0, -b, 0.0, 0.0, 0.0],
        [0.0, -a, 0.0, 0.0, 0.0, 0.0, 0.0, -0.5],
    ];
    ([0.5; 8], m)
}

/// The closed-form right-hand sides, evaluated term by term.
pub fn closed_form_probes(r: &BlochVector8) -> [f64; 8] {
    let [r1, r2, r3, r4, r5, r6, r7, r8] = r.0;
    [
        (3.0 - SQRT3 * r3 - 3.0 * r8) / 6.0,
        0.5 - r3 / SQRT3,
        (6.0 - 3.0 * SQRT3 * r3 - 2.0 * SQRT3 * r6 - 3.0 * r8) / 12.0,
        0.5 - r4 / SQRT3,
        (3.0 - SQRT3 * r1 - 3.0 * r8) / 6.0,
        (6.0 - 3.0 * SQRT3 * r3 - 2.0 * SQRT3 * r7 - 3.0 * r8) / 12.0,
        0.5 - r5 / SQRT3,
        (3.0 - SQRT3 * r2 - 3.0 * r8) / 6.0,
    ]
}

/// tr(E·GρG†) for each probe gate G, without clamping.
pub fn direct_probes(rho: &DensityOperator) -> Result<[f64; 8]> {
    let effect = logical_effect();
    let mut out = [0.0; 8];
    for (slot, gate) in out.iter_mut().zip(probe_gates().iter()) {
        *slot = effect_probability(&effect, &apply_to_density(gate, rho)?)?.raw();
    }
    Ok(out)
}

/// Computes the eight probes directly and cross-checks them against the
/// closed-form expressions in the Gell-Mann coordinates.
pub fn forward_probes(rho: &DensityOperator) -> Result<ProbeVector> {
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "probe set is defined on qutrits, got dimension {}",
            rho.dim()
        )));
    }
    let direct = direct_probes(rho)?;
    let closed = closed_form_probes(&decompose(rho)?);
    for (k, (x, y)) in direct.iter().zip(&closed).enumerate() {
        if (x - y).abs() > CONSISTENCY_TOL {
            return Err(Error::Consistency(format!(
                "probe p{} direct {x} vs closed form {y}",
                k + 1
            )));
        }
    }
    ProbeVector::new(direct.map(|p| p.clamp(0.0, 1.0)))
}

/// Back-substitutes the probe equations for r₁…r₈.
pub fn solve_bloch(p: &ProbeVector) -> BlochVector8 {
    let [p1, p2, p3, p4, p5, p6, p7, p8] = p.0;
    let r3 = SQRT3 * (0.5 - p2);
    let r8 = 1.0 - 2.0 * p1 - r3 / SQRT3;
    let r6 = 2.0 * SQRT3 * (0.5 - p3 - SQRT3 / 4.0 * r3 - r8 / 4.0);
    let r4 = SQRT3 * (0.5 - p4);
    let r1 = 2.0 * SQRT3 * (0.5 - p5 - r8 / 2.0);
    let r7 = 2.0 * SQRT3 * (0.5 - p6 - SQRT3 / 4.0 * r3 - r8 / 4.0);
    let r5 = SQRT3 * (0.5 - p7);
    let r2 = 2.0 * SQRT3 * (0.5 - p8 - r8 / 2.0);
    BlochVector8([r1, r2, r3, r4, r5, r6, r7, r8])
}

/// Reconstructs ρ from its probe vector; unphysical probes are reported
/// with the offending spectrum.
pub fn reconstruct(p: &ProbeVector) -> std::result::Result<DensityOperator, PositivityFailure> {
    compose(&solve_bloch(p))
}

/// As [`reconstruct`] with an explicit positivity tolerance.
pub fn reconstruct_with_tolerance(
    p: &ProbeVector,
    tol: f64,
) -> std::result::Result<DensityOperator, PositivityFailure> {
    compose_with_tolerance(&solve_bloch(p), tol)
}
