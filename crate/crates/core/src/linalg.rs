//! Dense complex vectors and matrices.
//!
//! Everything here is a value type: operations never mutate their inputs and
//! always return fresh matrices. Sizes stay tiny (at most 4096×4096 in
//! principle, 9×9 in practice), so storage is a plain row-major `Vec`.

use std::f64::consts::PI;
use std::fmt;

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default absolute tolerance for structural predicates (max-entry norm).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest Hilbert space dimension the kernel accepts.
pub const MAX_DIM: usize = 4096;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

fn check_finite(entries: &[C64]) -> Result<()> {
    match entries
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch("vector must be non-empty".into()));
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// The `k`-th canonical basis vector of ℂ^dim.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut entries = vec![ZERO; dim];
        entries[k] = ONE;
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> C64 {
        self.entries[i]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inner product of lengths {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        Self { entries }
    }

    /// The vector as a `dim × 1` column matrix.
    pub fn to_column(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.dim(),
            cols: 1,
            data: self.entries.clone(),
        }
    }

    /// The rank-one operator |v⟩⟨v|.
    pub fn outer_self(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut data = Vec::with_capacity(n * n);
        for a in &self.entries {
            for b in &self.entries {
                data.push(a * b.conj());
            }
        }
        ComplexMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vectors of lengths {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let entries: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            entries: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Kronecker (tensor) product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    let row = i * other.rows + k;
                    for l in 0..other.cols {
                        data[row * cols + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Self { rows, cols, data }
    }

    /// Block-diagonal direct sum `self ⊕ other`; both operands must be square.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let n = self.require_square()?;
        let m = other.require_square()?;
        let size = n + m;
        let mut out = Self::zeros(size, size);
        for i in 0..n {
            for j in 0..n {
                out.data[i * size + j] = self.get(i, j);
            }
        }
        for i in 0..m {
            for j in 0..m {
                out.data[(n + i) * size + n + j] = other.get(i, j);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v.get(j)).sum())
            .collect();
        Ok(ComplexVector { entries })
    }

    /// `self · rho · self†`.
    pub fn conjugate(&self, rho: &Self) -> Result<Self> {
        self.matmul(rho)?.matmul(&self.dagger())
    }

    pub fn trace(&self) -> Result<C64> {
        let n = self.require_square()?;
        Ok((0..n).map(|i| self.get(i, i)).sum())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ‖A†A − I‖_max, or `None` for non-square input.
    pub fn unitarity_deviation(&self) -> Option<f64> {
        let n = self.require_square().ok()?;
        let product = self.dagger().matmul(self).ok()?;
        product.max_abs_diff(&Self::identity(n)).ok()
    }

    /// ‖A − A†‖_max, or `None` for non-square input.
    pub fn hermiticity_deviation(&self) -> Option<f64> {
        self.require_square().ok()?;
        self.max_abs_diff(&self.dagger()).ok()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation().is_some_and(|d| d <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation().is_some_and(|d| d <= tol)
    }

    /// Hermitian with smallest eigenvalue at least `-tol`.
    ///
    /// 3×3 matrices go through [`eigvals_hermitian3`]; other sizes use a
    /// Cholesky factorization of `A + tol·I`.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        if self.rows == 3 {
            return eigvals_hermitian3(&self.hermitian_part())
                .map(|e| e[0] >= -tol)
                .unwrap_or(false);
        }
        let shifted = self
            .hermitian_part()
            .add(&Self::identity(self.rows).scale_real(tol))
            .expect("same shape");
        shifted.cholesky_succeeds()
    }

    /// (A + A†)/2.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.dagger())
            .map(|m| m.scale_real(0.5))
            .unwrap_or_else(|_| self.clone())
    }

    fn cholesky_succeeds(&self) -> bool {
        let n = self.rows;
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut pivot = self.get(j, j).re;
            for k in 0..j {
                pivot -= l[j * n + k].norm_sqr();
            }
            if pivot.is_nan() || pivot <= 0.0 {
                return false;
            }
            let diag = pivot.sqrt();
            l[j * n + j] = C64::new(diag, 0.0);
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / diag;
            }
        }
        true
    }

    /// Determinant of a 3×3 matrix.
    pub fn det3(&self) -> Result<C64> {
        if self.rows != 3 || self.cols != 3 {
            return Err(Error::DimensionMismatch(format!(
                "det3 needs a 3x3 matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(det3(&self.to_array3()))
    }

    fn to_array3(&self) -> [[C64; 3]; 3] {
        let mut a = [[ZERO; 3]; 3];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = self.get(i, j);
            }
        }
        a
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:>9.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join("  "))?;
        }
        Ok(())
    }
}

fn det3(a: &[[C64; 3]; 3]) -> C64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

type Vec3 = [C64; 3];

fn cross(u: &Vec3, v: &Vec3) -> Vec3 {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn norm3(v: &Vec3) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn inner3(u: &Vec3, v: &Vec3) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn quad_form(a: &[[C64; 3]; 3], u: &Vec3, v: &Vec3) -> C64 {
    let mut s = ZERO;
    for i in 0..3 {
        for j in 0..3 {
            s += u[i].conj() * a[i][j] * v[j];
        }
    }
    s
}

/// Unit vector orthogonal to the unit vector `v`, built by Gram-Schmidt from
/// the canonical basis vector that `v` overlaps least.
fn orthogonal_unit(v: &Vec3, avoid: Option<&Vec3>) -> Vec3 {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm()));
    let mut best: Option<(f64, Vec3)> = None;
    for &k in &order {
        let mut w = [ZERO; 3];
        w[k] = ONE;
        for _ in 0..2 {
            let c = inner3(v, &w);
            for i in 0..3 {
                w[i] -= c * v[i];
            }
            if let Some(a) = avoid {
                let c = inner3(a, &w);
                for i in 0..3 {
                    w[i] -= c * a[i];
                }
            }
        }
        let n = norm3(&w);
        if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
            best = Some((n, w));
        }
    }
    let (n, w) = best.expect("three candidates");
    [w[0] / n, w[1] / n, w[2] / n]
}

/// Eigenvalues of a 3×3 Hermitian matrix in ascending order.
///
/// The trigonometric solution of the characteristic cubic is exact for the
/// best-separated eigenvalue but loses about half the digits of a
/// near-degenerate pair. That pair is therefore recomputed from the 2×2
/// compression of `a` onto the orthogonal complement of the isolated
/// eigenvector, which keeps every eigenvalue accurate to a few ulps.
pub fn eigvals_hermitian3(a: &ComplexMatrix) -> Result<[f64; 3]> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "expected a 3x3 matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let deviation = a.hermiticity_deviation().unwrap_or(f64::INFINITY);
    if deviation > DEFAULT_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: DEFAULT_TOL,
        });
    }
    let m = a.hermitian_part().to_array3();

    let q = (m[0][0].re + m[1][1].re + m[2][2].re) / 3.0;
    let off = m[0][1].norm_sqr() + m[0][2].norm_sqr() + m[1][2].norm_sqr();
    let p2 =
        (m[0][0].re - q).powi(2) + (m[1][1].re - q).powi(2) + (m[2][2].re - q).powi(2) + 2.0 * off;
    let p = (p2 / 6.0).sqrt();
    let scale = m
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    if p <= 1e-15 * scale {
        return Ok([q; 3]);
    }

    let mut b = m;
    for (i, row) in b.iter_mut().enumerate() {
        for z in row.iter_mut() {
            *z /= p;
        }
        row[i] -= q / p;
    }
    let r = (det3(&b).re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let top = q + 2.0 * p * phi.cos();
    let bottom = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let middle = 3.0 * q - top - bottom;

    // The eigenvalue farther from the middle one is well conditioned.
    let isolated = if top - middle >= middle - bottom {
        top
    } else {
        bottom
    };

    let mut shifted = m;
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= isolated;
    }
    let candidates = [
        cross(&shifted[0], &shifted[1]),
        cross(&shifted[0], &shifted[2]),
        cross(&shifted[1], &shifted[2]),
    ];
    let (best, best_norm) = candidates
        .iter()
        .map(|c| (c, norm3(c)))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("three candidates");
    if best_norm <= 1e-300 {
        let mut out = [bottom, middle, top];
        out.sort_by(f64::total_cmp);
        return Ok(out);
    }
    // The (bilinear) cross product of two rows is annihilated by both rows,
    // hence spans the kernel of the rank-two shifted matrix.
    let v: Vec3 = [
        best[0] / best_norm,
        best[1] / best_norm,
        best[2] / best_norm,
    ];
    let u1 = orthogonal_unit(&v, None);
    let u2 = orthogonal_unit(&v, Some(&u1));

    let x = quad_form(&m, &u1, &u1).re;
    let y = quad_form(&m, &u2, &u2).re;
    let c = quad_form(&m, &u1, &u2);
    let mean = 0.5 * (x + y);
    let radius = (0.25 * (x - y).powi(2) + c.norm_sqr()).sqrt();
    let isolated = quad_form(&m, &v, &v).re;

    let mut out = [isolated, mean - radius, mean + radius];
    out.sort_by(f64::total_cmp);
    Ok(out)
}
