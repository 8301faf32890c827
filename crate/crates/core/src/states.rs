//! Quregisters, density operators and their truth semantics.
//!
//! A quregister lives in ⊗ⁿℂᵈ. Its truth value is carried by the last tensor
//! factor: the basis vector |i/(d−1)⟩ of the last site.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigvals_hermitian3, ComplexMatrix, ComplexVector, C64, DEFAULT_TOL, MAX_DIM};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn space_dim(d: usize, n: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if n < 1 {
        return Err(Error::InvalidSites(n));
    }
    let mut total: usize = 1;
    for _ in 0..n {
        total = total.saturating_mul(d);
        if total > MAX_DIM {
            return Err(Error::TooLarge(total));
        }
    }
    Ok(total)
}

/// The truth value `i/(d−1)` of a d-valued system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruthValue {
    index: usize,
    d: usize,
}

impl TruthValue {
    pub fn new(index: usize, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if index >= d {
            return Err(Error::TruthValueOutOfRange { index, d });
        }
        Ok(Self { index, d })
    }

    pub fn falsity(d: usize) -> Result<Self> {
        Self::new(0, d)
    }

    pub fn truth(d: usize) -> Result<Self> {
        Self::new(d.saturating_sub(1), d)
    }

    /// Qutrit truth values 0, ½, 1.
    pub fn qutrit(index: usize) -> Result<Self> {
        Self::new(index, 3)
    }

    pub fn all(d: usize) -> Vec<Self> {
        (0..d).map(|index| Self { index, d }).collect()
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn d(self) -> usize {
        self.d
    }

    pub fn value(self) -> f64 {
        self.index as f64 / (self.d - 1) as f64
    }

    /// Parses the reduced-fraction spelling produced by `Display`
    /// (`0`, `1`, `1/2`, `2/3`, ...).
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let bad = || Error::Format(format!("`{text}` is not a truth value for d={d}"));
        let (num, den) = match text.split_once('/') {
            Some((a, b)) => (
                a.parse::<usize>().map_err(|_| bad())?,
                b.parse::<usize>().map_err(|_| bad())?,
            ),
            None => (text.parse::<usize>().map_err(|_| bad())?, 1),
        };
        if den == 0 {
            return Err(bad());
        }
        let g = gcd(num, den).max(1);
        let reduced = if num == 0 { (0, 1) } else { (num / g, den / g) };
        Self::all(d)
            .into_iter()
            .find(|tv| tv.fraction() == reduced)
            .ok_or_else(bad)
    }

    fn fraction(self) -> (usize, usize) {
        let den = self.d - 1;
        if self.index == 0 {
            return (0, 1);
        }
        let g = gcd(self.index, den);
        (self.index / g, den / g)
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fraction() {
            (num, 1) => write!(f, "{num}"),
            (num, den) => write!(f, "{num}/{den}"),
        }
    }
}

/// A probability clamped to `[0, 1]`, keeping the unclamped value for
/// diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probability {
    value: f64,
    raw: f64,
}

impl Probability {
    pub(crate) fn from_raw(raw: f64) -> Self {
        Self {
            value: raw.clamp(0.0, 1.0),
            raw,
        }
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn raw(self) -> f64 {
        self.raw
    }
}

/// A unit vector in ⊗ⁿℂᵈ.
#[derive(Debug, Clone, PartialEq)]
pub struct Quregister {
    d: usize,
    n: usize,
    amplitudes: ComplexVector,
}

impl Quregister {
    pub fn new(d: usize, n: usize, amplitudes: ComplexVector) -> Result<Self> {
        let dim = space_dim(d, n)?;
        if amplitudes.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {dim} amplitudes for d={d}, n={n}, got {}",
                amplitudes.dim()
            )));
        }
        let norm = amplitudes.norm_sqr();
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { d, n, amplitudes })
    }

    /// The computational basis register |x₁,…,xₙ⟩.
    pub fn basis(values: &[TruthValue]) -> Result<Self> {
        let first = values.first().ok_or(Error::InvalidSites(0))?;
        let d = first.d();
        let mut amplitudes: Option<ComplexVector> = None;
        for tv in values {
            if tv.d() != d {
                return Err(Error::DimensionMismatch(format!(
                    "basis register mixes d={d} and d={}",
                    tv.d()
                )));
            }
            let site = ComplexVector::basis(d, tv.index())?;
            amplitudes = Some(match amplitudes {
                None => site,
                Some(acc) => acc.kron(&site),
            });
        }
        Self::new(d, values.len(), amplitudes.expect("non-empty"))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(format!(
                "cannot tensor d={} with d={}",
                self.d, other.d
            )));
        }
        Self::new(
            self.d,
            self.n + other.n,
            self.amplitudes.kron(&other.amplitudes),
        )
    }
}

/// A trace-one positive semidefinite Hermitian operator on ⊗ⁿℂᵈ.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    d: usize,
    n: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(d: usize, n: usize, matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(d, n, matrix, DEFAULT_TOL)
    }

    pub fn with_tolerance(d: usize, n: usize, matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let dim = space_dim(d, n)?;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected a {dim}x{dim} matrix for d={d}, n={n}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.hermiticity_deviation().unwrap_or(f64::INFINITY);
        if deviation > tol {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: tol,
            });
        }
        let trace = matrix.trace()?;
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(Error::TraceNotOne(trace.re));
        }
        if !matrix.is_psd(tol) {
            return Err(Error::NotPositive);
        }
        Ok(Self { d, n, matrix })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn new_unchecked(d: usize, n: usize, matrix: ComplexMatrix) -> Self {
        Self { d, n, matrix }
    }

    /// The maximally mixed state I/dⁿ.
    pub fn maximally_mixed(d: usize, n: usize) -> Result<Self> {
        let dim = space_dim(d, n)?;
        Ok(Self::new_unchecked(
            d,
            n,
            ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        ))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ|ρᵢⱼ|² for Hermitian ρ.
        self.matrix.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues, ascending; only available for qutrit operators.
    pub fn eigenvalues(&self) -> Option<[f64; 3]> {
        (self.dim() == 3)
            .then(|| eigvals_hermitian3(&self.matrix).ok())
            .flatten()
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(format!(
                "cannot tensor d={} with d={}",
                self.d, other.d
            )));
        }
        space_dim(self.d, self.n + other.n)?;
        Ok(Self::new_unchecked(
            self.d,
            self.n + other.n,
            self.matrix.kron(&other.matrix),
        ))
    }

    pub fn to_json(&self) -> DensityJson {
        DensityJson::from(self)
    }
}

/// P^{(dⁿ)}_{i/(d−1)} = I^{(n−1)} ⊗ P^{(d)}_{i/(d−1)}.
pub fn truth_projector(d: usize, n: usize, tv: TruthValue) -> Result<ComplexMatrix> {
    space_dim(d, n)?;
    if tv.d() != d {
        return Err(Error::TruthValueOutOfRange {
            index: tv.index(),
            d,
        });
    }
    let mut site_diag = vec![0.0; d];
    site_diag[tv.index()] = 1.0;
    let site = ComplexMatrix::diag_real(&site_diag);
    let rest = d.pow((n - 1) as u32);
    Ok(ComplexMatrix::identity(rest).kron(&site))
}

/// Born-rule probability tr(P·ρ) that `rho` carries truth value `tv`.
pub fn truth_probability(rho: &DensityOperator, tv: TruthValue) -> Result<Probability> {
    if tv.d() != rho.d() {
        return Err(Error::DimensionMismatch(format!(
            "truth value for d={} applied to a d={} state",
            tv.d(),
            rho.d()
        )));
    }
    // P is diagonal: sum the diagonal entries whose last-site digit is i.
    let d = rho.d();
    let raw = (0..rho.dim())
        .filter(|k| k % d == tv.index())
        .map(|k| rho.matrix().get(k, k).re)
        .sum();
    Ok(Probability::from_raw(raw))
}

pub fn all_truth_probabilities(rho: &DensityOperator) -> Vec<Probability> {
    TruthValue::all(rho.d())
        .into_iter()
        .map(|tv| truth_probability(rho, tv).expect("matching dimension"))
        .collect()
}

fn top_probability(rho: &DensityOperator) -> f64 {
    let top = TruthValue::truth(rho.d()).expect("valid d");
    truth_probability(rho, top)
        .expect("matching dimension")
        .raw()
}

/// Normalized linear entropy (dⁿ/(dⁿ−1))(1 − Tr ρ²), clamped to `[0, 1]`.
pub fn linear_entropy(rho: &DensityOperator) -> f64 {
    let dim = rho.dim() as f64;
    (dim / (dim - 1.0) * (1.0 - rho.purity())).clamp(0.0, 1.0)
}

pub fn is_mixed(rho: &DensityOperator) -> bool {
    rho.purity() < 1.0 - DEFAULT_TOL
}

/// The probability of the top truth value lies strictly inside (0, 1).
pub fn is_uncertain(rho: &DensityOperator) -> bool {
    let p = top_probability(rho);
    p > DEFAULT_TOL && p < 1.0 - DEFAULT_TOL
}

/// Some single truth value is carried with probability 1.
pub fn is_sharp(rho: &DensityOperator) -> bool {
    all_truth_probabilities(rho)
        .iter()
        .any(|p| p.raw() >= 1.0 - DEFAULT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quadrant {
    pub mixed: bool,
    pub uncertain: bool,
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mixed = if self.mixed { "mixed" } else { "not mixed" };
        let uncertain = if self.uncertain {
            "uncertain"
        } else {
            "not uncertain"
        };
        write!(f, "{mixed}, {uncertain}")
    }
}

pub fn classify_quadrant(rho: &DensityOperator) -> Quadrant {
    Quadrant {
        mixed: is_mixed(rho),
        uncertain: is_uncertain(rho),
    }
}

pub fn ket_to_density(psi: &Quregister) -> DensityOperator {
    DensityOperator::new_unchecked(psi.d(), psi.n(), psi.amplitudes().outer_self())
}

/// Convex combination Σ wᵢρᵢ.
pub fn mix(weights: &[(f64, DensityOperator)]) -> Result<DensityOperator> {
    let (_, first) = weights.first().ok_or(Error::InvalidWeights(0.0))?;
    let sum: f64 = weights.iter().map(|(w, _)| w).sum();
    if weights.iter().any(|(w, _)| !w.is_finite() || *w < 0.0) || (sum - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::InvalidWeights(sum));
    }
    let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
    for (w, rho) in weights {
        if rho.d() != first.d() || rho.n() != first.n() {
            return Err(Error::DimensionMismatch(format!(
                "cannot mix (d={}, n={}) with (d={}, n={})",
                first.d(),
                first.n(),
                rho.d(),
                rho.n()
            )));
        }
        acc = acc.add(&rho.matrix().scale(C64::new(*w, 0.0)))?;
    }
    Ok(DensityOperator::new_unchecked(first.d(), first.n(), acc))
}

/// On-disk density operator: `re` and `im` are row-major nested arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityJson {
    pub d: usize,
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&DensityOperator> for DensityJson {
    fn from(rho: &DensityOperator) -> Self {
        let dim = rho.dim();
        let row = |i: usize, f: fn(C64) -> f64| -> Vec<f64> {
            (0..dim).map(|j| f(rho.matrix().get(i, j))).collect()
        };
        Self {
            d: rho.d(),
            n: rho.n(),
            re: (0..dim).map(|i| row(i, |z| z.re)).collect(),
            im: (0..dim).map(|i| row(i, |z| z.im)).collect(),
        }
    }
}

impl TryFrom<DensityJson> for DensityOperator {
    type Error = Error;

    fn try_from(json: DensityJson) -> Result<Self> {
        let dim = space_dim(json.d, json.n)?;
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == dim && m.iter().all(|r| r.len() == dim);
        if !shape_ok(&json.re) || !shape_ok(&json.im) {
            return Err(Error::Format(format!(
                "`re` and `im` must both be {dim}x{dim}"
            )));
        }
        let entries = json
            .re
            .iter()
            .flatten()
            .zip(json.im.iter().flatten())
            .map(|(&re, &im)| C64::new(re, im))
            .collect();
        DensityOperator::new(json.d, json.n, ComplexMatrix::new(dim, dim, entries)?)
    }
}

pub fn density_to_json_string(rho: &DensityOperator) -> String {
    serde_json::to_string_pretty(&rho.to_json()).expect("plain data serializes")
}

pub fn density_from_json_str(text: &str) -> Result<DensityOperator> {
    let json: DensityJson = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    DensityOperator::try_from(json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tv(i: usize, d: usize) -> TruthValue {
        TruthValue::new(i, d).unwrap()
    }

    fn pure(d: usize, n: usize, amps: &[f64]) -> DensityOperator {
        let q = Quregister::new(d, n, ComplexVector::from_real(amps).unwrap()).unwrap();
        ket_to_density(&q)
    }

    #[test]
    fn truth_value_display_and_parse() {
        assert_eq!(tv(1, 3).to_string(), "1/2");
        assert_eq!(tv(2, 3).to_string(), "1");
        assert_eq!(tv(0, 3).to_string(), "0");
        assert_eq!(tv(2, 4).to_string(), "2/3");
        assert_eq!(TruthValue::parse("1/2", 3).unwrap(), tv(1, 3));
        assert_eq!(TruthValue::parse("1", 2).unwrap(), tv(1, 2));
        assert!(TruthValue::parse("1/2", 2).is_err());
        assert!(TruthValue::parse("2", 3).is_err());
        assert!(TruthValue::parse("1/0", 3).is_err());
        assert!(TruthValue::new(3, 3).is_err());
        assert!((tv(1, 4).value() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn projector_examples() {
        assert_eq!(
            truth_projector(2, 2, tv(1, 2)).unwrap(),
            ComplexMatrix::diag_real(&[0.0, 1.0, 0.0, 1.0])
        );
        assert_eq!(
            truth_projector(4, 1, tv(1, 4)).unwrap(),
            ComplexMatrix::diag_real(&[0.0, 1.0, 0.0, 0.0])
        );
        assert_eq!(
            truth_projector(4, 1, tv(3, 4)).unwrap(),
            ComplexMatrix::diag_real(&[0.0, 0.0, 0.0, 1.0])
        );
        assert_eq!(
            truth_projector(3, 1, tv(0, 3)).unwrap(),
            ComplexMatrix::diag_real(&[1.0, 0.0, 0.0])
        );
        assert!(truth_projector(3, 1, tv(1, 2)).is_err());
    }

    #[test]
    fn superposed_yet_certain() {
        let s = FRAC_1_SQRT_2;
        let psi_prime = pure(2, 2, &[s, 0.0, s, 0.0]);
        assert_eq!(
            truth_probability(&psi_prime, tv(1, 2)).unwrap().value(),
            0.0
        );
        let psi = pure(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(truth_probability(&psi, tv(1, 2)).unwrap().value(), 1.0);
        let psi_second = pure(2, 2, &[s, s, 0.0, 0.0]);
        let p = truth_probability(&psi_second, tv(1, 2)).unwrap().value();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn truth_probability_rejects_foreign_dimension() {
        let rho = DensityOperator::maximally_mixed(3, 1).unwrap();
        assert!(truth_probability(&rho, tv(1, 2)).is_err());
    }

    #[test]
    fn all_probabilities_examples() {
        let half = pure(3, 1, &[0.0, 1.0, 0.0]);
        let probs: Vec<f64> = all_truth_probabilities(&half)
            .iter()
            .map(|p| p.value())
            .collect();
        assert_eq!(probs, vec![0.0, 1.0, 0.0]);
        let mixed = DensityOperator::maximally_mixed(3, 1).unwrap();
        for p in all_truth_probabilities(&mixed) {
            assert!((p.value() - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_entropy_examples() {
        assert_eq!(linear_entropy(&pure(3, 1, &[0.0, 0.6, 0.8])), 0.0);
        let qubit_mixed = DensityOperator::maximally_mixed(2, 1).unwrap();
        assert!((linear_entropy(&qubit_mixed) - 1.0).abs() < 1e-15);
        let rho =
            DensityOperator::new(2, 2, ComplexMatrix::diag_real(&[0.0, 0.5, 0.0, 0.5])).unwrap();
        assert!((linear_entropy(&rho) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn table_quadrants() {
        let lambda = 0.3;
        let a =
            DensityOperator::new(2, 1, ComplexMatrix::diag_real(&[1.0 - lambda, lambda])).unwrap();
        assert_eq!(
            classify_quadrant(&a),
            Quadrant {
                mixed: true,
                uncertain: true
            }
        );
        let b =
            DensityOperator::new(2, 2, ComplexMatrix::diag_real(&[0.0, 0.5, 0.0, 0.5])).unwrap();
        assert_eq!(
            classify_quadrant(&b),
            Quadrant {
                mixed: true,
                uncertain: false
            }
        );
        let c = DensityOperator::new(
            2,
            1,
            ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            classify_quadrant(&c),
            Quadrant {
                mixed: false,
                uncertain: true
            }
        );
        let d = DensityOperator::new(2, 1, ComplexMatrix::diag_real(&[0.0, 1.0])).unwrap();
        assert_eq!(
            classify_quadrant(&d),
            Quadrant {
                mixed: false,
                uncertain: false
            }
        );
        assert!(is_sharp(&d) && is_sharp(&b) && !is_sharp(&c));
    }

    #[test]
    fn sharp_differs_from_uncertain_for_qutrits() {
        // Certain of the value ½: not uncertain, and sharp.
        let half = pure(3, 1, &[0.0, 1.0, 0.0]);
        assert!(!is_uncertain(&half));
        assert!(is_sharp(&half));
        // False/½ superposition: top value has probability 0, yet not sharp.
        let s = FRAC_1_SQRT_2;
        let lower = pure(3, 1, &[s, s, 0.0]);
        assert!(!is_uncertain(&lower));
        assert!(!is_sharp(&lower));
    }

    #[test]
    fn mixing() {
        let zero = pure(2, 1, &[1.0, 0.0]);
        let one = pure(2, 1, &[0.0, 1.0]);
        let m = mix(&[(0.5, zero.clone()), (0.5, one)]).unwrap();
        assert_eq!(m.matrix(), &ComplexMatrix::diag_real(&[0.5, 0.5]));
        assert_eq!(mix(&[(1.0, zero.clone())]).unwrap(), zero);
        assert_eq!(
            ket_to_density(&Quregister::basis(&[tv(1, 3)]).unwrap()).matrix(),
            &ComplexMatrix::diag_real(&[0.0, 1.0, 0.0])
        );
        assert!(matches!(
            mix(&[(0.6, zero.clone()), (0.6, zero.clone())]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            mix(&[(1.5, zero.clone()), (-0.5, zero.clone())]),
            Err(Error::InvalidWeights(_))
        ));
        let qutrit = DensityOperator::maximally_mixed(3, 1).unwrap();
        assert!(matches!(
            mix(&[(0.5, zero), (0.5, qutrit)]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(mix(&[]).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            DensityOperator::new(
                3,
                1,
                ComplexMatrix::diag_real(&[2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0])
            ),
            Err(Error::NotPositive)
        ));
        assert!(matches!(
            DensityOperator::new(2, 1, ComplexMatrix::diag_real(&[0.5, 0.6])),
            Err(Error::TraceNotOne(_))
        ));
        let skew = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(matches!(
            DensityOperator::new(2, 1, skew),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            DensityOperator::new(2, 1, ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(
            Quregister::new(3, 1, ComplexVector::from_real(&[1.0, 1.0, 0.0]).unwrap()).is_err()
        );
        assert!(matches!(space_dim(2, 13), Err(Error::TooLarge(_))));
        assert!(matches!(space_dim(1, 1), Err(Error::InvalidDimension(1))));
    }

    #[test]
    fn json_round_trip() {
        let rho = mix(&[
            (0.25, pure(3, 1, &[0.6, 0.0, 0.8])),
            (0.75, DensityOperator::maximally_mixed(3, 1).unwrap()),
        ])
        .unwrap();
        let text = density_to_json_string(&rho);
        let back = density_from_json_str(&text).unwrap();
        assert_eq!(back, rho);
        assert!(density_from_json_str(r#"{"d":3,"n":1,"re":[[1]],"im":[[0]]}"#).is_err());
        assert!(density_from_json_str("not json").is_err());
    }
}
