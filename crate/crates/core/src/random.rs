//! Seeded random states for property checks.
//!
//! Density operators are sampled as ρ = AA†/tr(AA†), where the entries of A
//! are drawn uniformly from the unit square [−½, ½) × [−½, ½) of the
//! complex plane.

use rand::Rng;

use crate::error::Result;
use crate::linalg::{ComplexMatrix, ComplexVector, C64};
use crate::states::{space_dim, DensityOperator, Quregister};

fn random_entry<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
}

pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Result<DensityOperator> {
    let dim = space_dim(d, n)?;
    let a = ComplexMatrix::new(
        dim,
        dim,
        (0..dim * dim).map(|_| random_entry(rng)).collect(),
    )?;
    let aa = a.matmul(&a.dagger())?;
    let trace = aa.trace()?.re;
    // Exact Hermitian symmetrization removes rounding asymmetry.
    let rho = aa.scale_real(1.0 / trace).hermitian_part();
    Ok(DensityOperator::new_unchecked(d, n, rho))
}

pub fn random_qutrit_density<R: Rng + ?Sized>(rng: &mut R) -> DensityOperator {
    random_density(rng, 3, 1).expect("qutrit dimensions are valid")
}

pub fn random_quregister<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Result<Quregister> {
    let dim = space_dim(d, n)?;
    let v = ComplexVector::new((0..dim).map(|_| random_entry(rng)).collect())?;
    let norm = v.norm_sqr().sqrt();
    Quregister::new(d, n, v.scale(C64::new(1.0 / norm, 0.0)))
}
