//! Gell-Mann decomposition of qutrit density operators.
//!
//! Every Hermitian trace-one 3×3 operator can be written
//! ρ = (1/3)(I + √3 Σᵢ rᵢλᵢ) with real coordinates r₁…r₈ in the standard
//! Gell-Mann basis. Since tr(λᵢλⱼ) = 2δᵢⱼ the coordinates are recovered as
//! rᵢ = (√3/2)·tr(λᵢρ). Pure states have Σrᵢ² = 1 and mixed states Σrᵢ² < 1,
//! but not every point of the unit ball is a state: positivity has to be
//! checked on the composed operator.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigvals_hermitian3, ComplexMatrix, C64, DEFAULT_TOL};
use crate::states::DensityOperator;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// λ₁…λ₈ in the standard order.
#[derive(Debug, Clone, PartialEq)]
pub struct GellMannBasis {
    lambda: [ComplexMatrix; 8],
}

impl GellMannBasis {
    pub fn standard() -> Self {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let m = |entries: [C64; 9]| ComplexMatrix::new(3, 3, entries.to_vec()).expect("3x3");
        let s = 1.0 / SQRT3;
        Self {
            lambda: [
                m([z, one, z, one, z, z, z, z, z]),
                m([z, -i, z, i, z, z, z, z, z]),
                m([one, z, z, z, -one, z, z, z, z]),
                m([z, z, one, z, z, z, one, z, z]),
                m([z, z, -i, z, z, z, i, z, z]),
                m([z, z, z, z, z, one, z, one, z]),
                m([z, z, z, z, z, -i, z, i, z]),
                ComplexMatrix::diag_real(&[s, s, -2.0 * s]),
            ],
        }
    }

    pub fn matrices(&self) -> &[ComplexMatrix; 8] {
        &self.lambda
    }

    /// λₖ for k in 1..=8.
    pub fn lambda(&self, k: usize) -> &ComplexMatrix {
        &self.lambda[k - 1]
    }
}

/// Gell-Mann coordinates r₁…r₈ (index 0 holds r₁).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlochVector8(pub [f64; 8]);

impl BlochVector8 {
    pub fn new(r: [f64; 8]) -> Result<Self> {
        if let Some(index) = r.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(r))
    }

    pub fn zero() -> Self {
        Self([0.0; 8])
    }

    /// rₖ for k in 1..=8.
    pub fn get(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: [f64; 8] = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::new(raw)
    }
}

/// A Bloch vector whose composed operator has a negative eigenvalue. The
/// operator itself is [`compose_matrix`] of `bloch`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityFailure {
    pub bloch: BlochVector8,
    /// Ascending.
    pub eigenvalues: [f64; 3],
}

impl fmt::Display for PositivityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.eigenvalues;
        write!(
            f,
            "not a density operator: eigenvalues {{{a:.12}, {b:.12}, {c:.12}}} include a negative value"
        )
    }
}

impl std::error::Error for PositivityFailure {}

pub fn decompose(rho: &DensityOperator) -> Result<BlochVector8> {
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "Gell-Mann decomposition needs a qutrit operator, got dimension {}",
            rho.dim()
        )));
    }
    let basis = GellMannBasis::standard();
    let mut r = [0.0; 8];
    for (k, lambda) in basis.matrices().iter().enumerate() {
        let t = lambda.matmul(rho.matrix())?.trace()?;
        r[k] = SQRT3 / 2.0 * t.re;
    }
    Ok(BlochVector8(r))
}

/// (1/3)(I + √3 Σ rᵢλᵢ), without any positivity check.
pub fn compose_matrix(r: &BlochVector8) -> ComplexMatrix {
    let basis = GellMannBasis::standard();
    let mut acc = ComplexMatrix::identity(3);
    for (k, lambda) in basis.matrices().iter().enumerate() {
        acc = acc
            .add(&lambda.scale_real(SQRT3 * r.0[k]))
            .expect("3x3 operands");
    }
    acc.scale_real(1.0 / 3.0)
}

/// Composes the operator and accepts it only if it is positive
/// semidefinite within [`DEFAULT_TOL`].
pub fn compose(r: &BlochVector8) -> std::result::Result<DensityOperator, PositivityFailure> {
    compose_with_tolerance(r, DEFAULT_TOL)
}

/// As [`compose`], accepting eigenvalues down to `-tol`.
pub fn compose_with_tolerance(
    r: &BlochVector8,
    tol: f64,
) -> std::result::Result<DensityOperator, PositivityFailure> {
    let matrix = compose_matrix(r);
    let eigenvalues = eigvals_hermitian3(&matrix).expect("composed matrix is Hermitian");
    if eigenvalues[0] >= -tol {
        Ok(DensityOperator::new_unchecked(3, 1, matrix))
    } else {
        Err(PositivityFailure {
            bloch: *r,
            eigenvalues,
        })
    }
}

/// Tr(ρ²) = (1 + 2Σrᵢ²)/3.
pub fn purity_from_bloch(r: &BlochVector8) -> f64 {
    (1.0 + 2.0 * r.norm_sqr()) / 3.0
}
