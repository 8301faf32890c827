//! Qubit and qutrit gate catalog.
//!
//! Canonical names ("NOT[1/2]", "SQI[0]", "H3", ...) are shared with the
//! expression language; [`lookup`] is the single place that maps a name to
//! a matrix.
//!
//! The qutrit Hadamard gate `H3` is the qutrit Fourier matrix
//! (1/√3)[[1,1,1],[1,ω,ω²],[1,ω²,ω]] with ω = (−1 + i√3)/2. The
//! frequently reproduced variant whose off-diagonal block carries
//! (1/6)(−1 ± i√3) is not unitary (its columns have norm < 1), so it cannot
//! square to `NOT[0]`; the Fourier entries (1/2)(−1 ± i√3) are used instead.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, DEFAULT_TOL};
use crate::states::{space_dim, DensityOperator, Quregister, TruthValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateKind {
    /// Maps basis vectors to basis vectors (up to a phase).
    Semiclassical,
    /// Sends some basis vector to a proper superposition.
    GenuinelyQuantum,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Semiclassical => "semiclassical",
            Self::GenuinelyQuantum => "genuinely quantum",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    name: String,
    d: usize,
    n: usize,
    matrix: ComplexMatrix,
    kind: GateKind,
}

impl GateSpec {
    /// Validates unitarity and derives the kind from the matrix.
    pub fn new(name: impl Into<String>, d: usize, n: usize, matrix: ComplexMatrix) -> Result<Self> {
        let dim = space_dim(d, n)?;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "gate on d={d}, n={n} needs a {dim}x{dim} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let kind = classify_matrix(&matrix)?;
        Ok(Self {
            name: name.into(),
            d,
            n,
            matrix,
            kind,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn real(rows: usize, entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real(rows, rows, entries).expect("static catalog matrix")
}

fn lift(site: ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    if n < 1 {
        return Err(Error::InvalidSites(n));
    }
    let d = site.rows();
    space_dim(d, n)?;
    Ok(ComplexMatrix::identity(d.pow((n - 1) as u32)).kron(&site))
}

fn qutrit_index(tv: TruthValue) -> Result<usize> {
    if tv.d() != 3 {
        return Err(Error::TruthValueOutOfRange {
            index: tv.index(),
            d: 3,
        });
    }
    Ok(tv.index())
}

fn hadamard2() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    real(2, &[s, s, s, -s])
}

fn sqrt_not2() -> ComplexMatrix {
    let (p, m) = (c(0.5, 0.5), c(0.5, -0.5));
    ComplexMatrix::new(2, 2, vec![p, m, m, p]).expect("static catalog matrix")
}

fn sigma_x() -> ComplexMatrix {
    real(2, &[0.0, 1.0, 1.0, 0.0])
}

/// Not^{(2ⁿ)} = I^{(n−1)} ⊗ σₓ.
pub fn not_qubit(n: usize) -> Result<GateSpec> {
    GateSpec::new("NOT", 2, n, lift(sigma_x(), n)?)
}

/// H^{(2ⁿ)} = I^{(n−1)} ⊗ H.
pub fn hadamard_qubit(n: usize) -> Result<GateSpec> {
    GateSpec::new("H", 2, n, lift(hadamard2(), n)?)
}

/// √Not^{(2ⁿ)} = I^{(n−1)} ⊗ ½[[1+i, 1−i], [1−i, 1+i]].
pub fn sqrt_not_qubit(n: usize) -> Result<GateSpec> {
    GateSpec::new("SQNOT2", 2, n, lift(sqrt_not2(), n)?)
}

/// Qutrit negation with fixpoint `fix`: swaps the two other basis vectors.
pub fn not3(fix: TruthValue) -> Result<GateSpec> {
    let matrix = match qutrit_index(fix)? {
        0 => real(3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0]),
        1 => real(3, &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0]),
        _ => real(3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
    };
    GateSpec::new(format!("NOT[{fix}]"), 3, 1, matrix)
}

/// Basis reversal |x⟩ ↦ |1−x⟩ on ℂᵈ (the anti-diagonal permutation).
pub fn not_reversal(d: usize) -> Result<GateSpec> {
    space_dim(d, 1)?;
    let mut entries = vec![0.0; d * d];
    for i in 0..d {
        entries[i * d + (d - 1 - i)] = 1.0;
    }
    GateSpec::new(format!("NOTR[{d}]"), d, 1, real(d, &entries))
}

/// Qutrit Fourier gate.
pub fn h3() -> Result<GateSpec> {
    let s = 1.0 / 3.0_f64.sqrt();
    let h = 3.0_f64.sqrt() / 2.0;
    let omega = c(-0.5, h);
    let omega2 = c(-0.5, -h);
    let one = c(1.0, 0.0);
    let matrix = ComplexMatrix::new(
        3,
        3,
        vec![one, one, one, one, omega, omega2, one, omega2, omega],
    )
    .expect("static catalog matrix")
    .scale_real(s);
    GateSpec::new("H3", 3, 1, matrix)
}

/// Square root of the identity fixing |i⟩: a Hadamard on the other two
/// basis vectors.
pub fn sqrt_i3(i: TruthValue) -> Result<GateSpec> {
    let s = FRAC_1_SQRT_2;
    let matrix = match qutrit_index(i)? {
        0 => ComplexMatrix::identity(1).direct_sum(&hadamard2())?,
        1 => real(3, &[s, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, -s]),
        _ => hadamard2().direct_sum(&ComplexMatrix::identity(1))?,
    };
    GateSpec::new(format!("SQI[{i}]"), 3, 1, matrix)
}

/// Square root of `NOT[i]`: a qubit √Not on the two basis vectors it swaps.
pub fn sqrt_not3(i: TruthValue) -> Result<GateSpec> {
    let (p, m, z, one) = (c(0.5, 0.5), c(0.5, -0.5), c(0.0, 0.0), c(1.0, 0.0));
    let matrix = match qutrit_index(i)? {
        0 => ComplexMatrix::identity(1).direct_sum(&sqrt_not2())?,
        1 => ComplexMatrix::new(3, 3, vec![p, z, m, z, one, z, m, z, p])?,
        _ => sqrt_not2().direct_sum(&ComplexMatrix::identity(1))?,
    };
    GateSpec::new(format!("SQNOT[{i}]"), 3, 1, matrix)
}

/// Semiclassical iff every column has exactly one entry of modulus above
/// the tolerance.
pub fn classify_matrix(matrix: &ComplexMatrix) -> Result<GateKind> {
    let deviation = matrix.unitarity_deviation().ok_or(Error::NotSquare {
        rows: matrix.rows(),
        cols: matrix.cols(),
    })?;
    if deviation > DEFAULT_TOL {
        return Err(Error::NotUnitary {
            deviation,
            tolerance: DEFAULT_TOL,
        });
    }
    let semiclassical = (0..matrix.cols()).all(|j| {
        (0..matrix.rows())
            .filter(|&i| matrix.get(i, j).norm() > DEFAULT_TOL)
            .count()
            == 1
    });
    Ok(if semiclassical {
        GateKind::Semiclassical
    } else {
        GateKind::GenuinelyQuantum
    })
}

pub fn classify_gate(gate: &GateSpec) -> Result<GateKind> {
    classify_matrix(gate.matrix())
}

fn check_signature(gate: &GateSpec, d: usize, n: usize) -> Result<()> {
    if gate.d != d || gate.n != n {
        return Err(Error::DimensionMismatch(format!(
            "gate {} acts on (d={}, n={}), state is (d={d}, n={n})",
            gate.name, gate.d, gate.n
        )));
    }
    Ok(())
}

/// g·ψ; the image is renormalized, which only ever corrects rounding.
pub fn apply_to_state(gate: &GateSpec, psi: &Quregister) -> Result<Quregister> {
    check_signature(gate, psi.d(), psi.n())?;
    let out = gate.matrix.mul_vec(psi.amplitudes())?;
    let norm = out.norm_sqr().sqrt();
    Quregister::new(psi.d(), psi.n(), out.scale(C64::new(1.0 / norm, 0.0)))
}

/// g·ρ·g†.
pub fn apply_to_density(gate: &GateSpec, rho: &DensityOperator) -> Result<DensityOperator> {
    check_signature(gate, rho.d(), rho.n())?;
    let out = gate.matrix.conjugate(rho.matrix())?;
    Ok(DensityOperator::new_unchecked(rho.d(), rho.n(), out))
}

/// Which states a gate name accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateArity {
    pub d: usize,
    /// Qubit gates act on the last site of any register; all others are
    /// single-site.
    pub any_sites: bool,
}

/// Gate base names that take a bracketed argument.
pub const INDEXED_FAMILIES: [&str; 4] = ["NOT", "NOTR", "SQI", "SQNOT"];

/// Gate base names that take no argument.
pub const PLAIN_GATES: [&str; 4] = ["NOT", "H", "H3", "SQNOT2"];

/// Every canonical name, for diagnostics and `gate dump` listings.
pub fn catalog_names() -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for family in ["NOT", "SQI", "SQNOT"] {
        for tv in TruthValue::all(3) {
            names.push(format!("{family}[{tv}]"));
        }
    }
    names.extend(["H3", "NOT", "H", "SQNOT2", "NOTR[d]"].map(String::from));
    names
}

enum Parsed {
    Qutrit(fn(TruthValue) -> Result<GateSpec>, TruthValue),
    H3,
    Reversal(usize),
    Qubit(fn(usize) -> Result<GateSpec>),
}

fn parse_name(name: &str) -> Result<Parsed> {
    let unknown = || Error::UnknownGate(name.to_string());
    if let Some((family, rest)) = name.split_once('[') {
        let arg = rest.strip_suffix(']').ok_or_else(unknown)?;
        return match family {
            "NOTR" => {
                let d = arg.parse::<usize>().map_err(|_| unknown())?;
                if d < 2 {
                    return Err(Error::InvalidDimension(d));
                }
                Ok(Parsed::Reversal(d))
            }
            "NOT" | "SQI" | "SQNOT" => {
                let tv = TruthValue::parse(arg, 3).map_err(|_| unknown())?;
                let ctor: fn(TruthValue) -> Result<GateSpec> = match family {
                    "NOT" => not3,
                    "SQI" => sqrt_i3,
                    _ => sqrt_not3,
                };
                Ok(Parsed::Qutrit(ctor, tv))
            }
            _ => Err(unknown()),
        };
    }
    match name {
        "H3" => Ok(Parsed::H3),
        "NOT" => Ok(Parsed::Qubit(not_qubit)),
        "H" => Ok(Parsed::Qubit(hadamard_qubit)),
        "SQNOT2" => Ok(Parsed::Qubit(sqrt_not_qubit)),
        _ => Err(unknown()),
    }
}

pub fn gate_arity(name: &str) -> Result<GateArity> {
    Ok(match parse_name(name)? {
        Parsed::Qutrit(..) | Parsed::H3 => GateArity {
            d: 3,
            any_sites: false,
        },
        Parsed::Reversal(d) => GateArity {
            d,
            any_sites: false,
        },
        Parsed::Qubit(_) => GateArity {
            d: 2,
            any_sites: true,
        },
    })
}

/// Resolves a canonical gate name acting on an `n`-site register.
pub fn lookup(name: &str, n: usize) -> Result<GateSpec> {
    let single_site = |gate: GateSpec| {
        if n == 1 {
            Ok(gate)
        } else {
            Err(Error::DimensionMismatch(format!(
                "{} is a single-site gate, requested on {n} sites",
                gate.name
            )))
        }
    };
    match parse_name(name)? {
        Parsed::Qutrit(ctor, tv) => single_site(ctor(tv)?),
        Parsed::H3 => single_site(h3()?),
        Parsed::Reversal(d) => single_site(not_reversal(d)?),
        Parsed::Qubit(ctor) => ctor(n),
    }
}

/// The ten qutrit gates.
pub fn qutrit_catalog() -> Vec<GateSpec> {
    let mut gates = Vec::with_capacity(10);
    for ctor in [not3, sqrt_i3, sqrt_not3] {
        for tv in TruthValue::all(3) {
            gates.push(ctor(tv).expect("qutrit truth value"));
        }
    }
    gates.push(h3().expect("static gate"));
    gates
}

/// Not, H and √Not on `n` qubits.
pub fn qubit_catalog(n: usize) -> Result<Vec<GateSpec>> {
    Ok(vec![not_qubit(n)?, hadamard_qubit(n)?, sqrt_not_qubit(n)?])
}
