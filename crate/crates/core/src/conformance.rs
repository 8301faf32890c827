//! Self-verification suite over the gate algebra, truth semantics and
//! reconstruction.
//!
//! Every check reports the measured deviation next to the bound it was held
//! to, so a failing run shows how far off it was.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gates::{
    apply_to_density, classify_gate, h3, hadamard_qubit, lookup, not3, not_qubit, not_reversal,
    qubit_catalog, qutrit_catalog, sqrt_i3, sqrt_not3, sqrt_not_qubit, GateKind, GateSpec,
};
use crate::gellmann::{compose, compose_matrix, decompose, BlochVector8};
use crate::linalg::{eigvals_hermitian3, ComplexMatrix, ComplexVector};
use crate::random::random_density;
use crate::states::{
    classify_quadrant, ket_to_density, linear_entropy, truth_probability, DensityOperator,
    Quadrant, Quregister, TruthValue,
};
use crate::tomography::{
    closed_form_probes, direct_probes, effect_probability, logical_effect, probe_affine_map,
    reconstruct, solve_bloch, ProbeVector,
};

pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// Deviation must not exceed the tolerance.
    AtMost(f64),
    /// Separation must reach at least this value.
    AtLeast(f64),
    /// A yes/no property.
    Holds,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Option<f64>,
    pub bound: Bound,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        match (self.bound, self.value) {
            (Bound::AtMost(tol), Some(v)) => {
                write!(f, "{status} {} (deviation {v:.3e} <= {tol:.1e})", self.name)
            }
            (Bound::AtLeast(min), Some(v)) => {
                write!(
                    f,
                    "{status} {} (separation {v:.3e} >= {min:.1e})",
                    self.name
                )
            }
            _ => write!(f, "{status} {}", self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Replaces every deviation tolerance when set.
    pub tolerance: Option<f64>,
    /// Random states for the reconstruction checks.
    pub tomography_samples: usize,
    /// Random states per gate for the entropy invariance checks.
    pub invariance_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            tolerance: None,
            tomography_samples: 1000,
            invariance_samples: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Documented exceptions that are reported but not checked.
    pub notes: Vec<String>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        for note in &self.notes {
            writeln!(f, "NOTE {note}")?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} checks, {} failed (seed {})",
            self.checks.len(),
            failed,
            self.seed
        )
    }
}

struct Suite {
    tolerance: Option<f64>,
    checks: Vec<Check>,
}

impl Suite {
    fn at_most(&mut self, name: impl Into<String>, deviation: f64, tol: f64) {
        let tol = self.tolerance.unwrap_or(tol);
        self.checks.push(Check {
            name: name.into(),
            passed: deviation <= tol,
            value: Some(deviation),
            bound: Bound::AtMost(tol),
        });
    }

    fn at_least(&mut self, name: impl Into<String>, separation: f64, min: f64) {
        self.checks.push(Check {
            name: name.into(),
            passed: separation >= min,
            value: Some(separation),
            bound: Bound::AtLeast(min),
        });
    }

    fn holds(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            value: None,
            bound: Bound::Holds,
        });
    }
}

fn tv3(i: usize) -> TruthValue {
    TruthValue::qutrit(i).expect("qutrit index")
}

fn square(g: &GateSpec) -> ComplexMatrix {
    g.matrix().matmul(g.matrix()).expect("square gate")
}

fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.max_abs_diff(b).expect("equal shapes")
}

fn basis_density(values: &[TruthValue]) -> DensityOperator {
    ket_to_density(&Quregister::basis(values).expect("basis ket"))
}

fn pure_real(d: usize, n: usize, amplitudes: &[f64]) -> DensityOperator {
    let v = ComplexVector::from_real(amplitudes).expect("finite amplitudes");
    ket_to_density(&Quregister::new(d, n, v).expect("normalized amplitudes"))
}

fn gate_algebra(s: &mut Suite) {
    let qutrit: Vec<GateSpec> = qutrit_catalog();
    let mut all = qutrit.clone();
    all.extend(qubit_catalog(1).expect("qubit gates"));
    all.push(not_reversal(4).expect("NOTR[4]"));
    for g in &all {
        let dev = g.matrix().unitarity_deviation().expect("square gate");
        s.at_most(format!("{} is unitary", g.name()), dev, 1e-9);
    }

    let i3 = ComplexMatrix::identity(3);
    for i in 0..3 {
        let not = not3(tv3(i)).expect("NOT");
        s.at_most(
            format!("{}^2 = I", not.name()),
            dist(&square(&not), &i3),
            1e-12,
        );
        let sqi = sqrt_i3(tv3(i)).expect("SQI");
        s.at_most(
            format!("{}^2 = I", sqi.name()),
            dist(&square(&sqi), &i3),
            1e-12,
        );
        let sqnot = sqrt_not3(tv3(i)).expect("SQNOT");
        s.at_most(
            format!("{}^2 = {}", sqnot.name(), not.name()),
            dist(&square(&sqnot), not.matrix()),
            1e-12,
        );
    }
    let i2 = ComplexMatrix::identity(2);
    let qnot = not_qubit(1).expect("NOT");
    s.at_most("NOT^2 = I", dist(&square(&qnot), &i2), 1e-12);
    let had = hadamard_qubit(1).expect("H");
    s.at_most("H^2 = I", dist(&square(&had), &i2), 1e-12);
    let sqnot2 = sqrt_not_qubit(1).expect("SQNOT2");
    s.at_most(
        "SQNOT2^2 = NOT",
        dist(&square(&sqnot2), qnot.matrix()),
        1e-12,
    );
    let rev4 = not_reversal(4).expect("NOTR[4]");
    s.at_most(
        "NOTR[4]^2 = I",
        dist(&square(&rev4), &ComplexMatrix::identity(4)),
        1e-12,
    );

    let h = h3().expect("H3");
    let not0 = not3(tv3(0)).expect("NOT[0]");
    s.at_most("H3^2 = NOT[0]", dist(&square(&h), not0.matrix()), 1e-12);
    s.at_least("H3^2 != I", dist(&square(&h), &i3), 0.5);
    s.at_most(
        "NOTR[3] = NOT[1/2]",
        dist(
            not_reversal(3).expect("NOTR[3]").matrix(),
            not3(tv3(1)).expect("NOT[1/2]").matrix(),
        ),
        1e-12,
    );
    s.at_least(
        "NOTR[4] != NOT on two qubits",
        dist(rev4.matrix(), not_qubit(2).expect("NOT").matrix()),
        0.5,
    );

    let expected = |name: &str| {
        let semiclassical = name.starts_with("NOT");
        if semiclassical {
            GateKind::Semiclassical
        } else {
            GateKind::GenuinelyQuantum
        }
    };
    let misclassified: Vec<&str> = all
        .iter()
        .filter(|g| classify_gate(g).ok() != Some(expected(g.name())))
        .map(GateSpec::name)
        .collect();
    s.holds(
        "NOT gates are semiclassical, H3/SQI/SQNOT/H/SQNOT2 genuinely quantum",
        misclassified.is_empty(),
    );
}

fn truth_semantics(s: &mut Suite) {
    let h = h3().expect("H3");
    let mut spread: f64 = 0.0;
    for i in 0..3 {
        let rho = apply_to_density(&h, &basis_density(&[tv3(i)])).expect("qutrit");
        for tv in TruthValue::all(3) {
            let p = truth_probability(&rho, tv).expect("qutrit").value();
            spread = spread.max((p - 1.0 / 3.0).abs());
        }
    }
    s.at_most("H3|i> has all truth probabilities 1/3", spread, 1e-12);

    let effect = logical_effect();
    let mut dev: f64 = 0.0;
    for tv in TruthValue::all(3) {
        let p = effect_probability(&effect, &basis_density(&[tv])).expect("qutrit");
        dev = dev.max((p.value() - tv.value()).abs());
    }
    s.at_most("Pr_E(|i>) = i", dev, 0.0);

    let true2 = TruthValue::truth(2).expect("qubit truth");
    let h2 = std::f64::consts::FRAC_1_SQRT_2;
    let superposed = pure_real(2, 2, &[h2, 0.0, h2, 0.0]);
    let p = truth_probability(&superposed, true2)
        .expect("qubits")
        .value();
    s.at_most("(|00> + |10>)/sqrt2 has truth probability 0", p, 0.0);
    let one = basis_density(&[TruthValue::falsity(2).unwrap(), true2]);
    let p = truth_probability(&one, true2).expect("qubits").value();
    s.at_most("|01> has truth probability 1", (p - 1.0).abs(), 0.0);

    let quadrants = [
        (
            "diag(0.7, 0.3)",
            ComplexMatrix::diag_real(&[0.7, 0.3]),
            1,
            (true, true),
        ),
        (
            "diag(0, 1/2, 0, 1/2)",
            ComplexMatrix::diag_real(&[0.0, 0.5, 0.0, 0.5]),
            2,
            (true, false),
        ),
        (
            "(1/2)[[1,1],[1,1]]",
            ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).expect("2x2"),
            1,
            (false, true),
        ),
        (
            "|1><1|",
            ComplexMatrix::diag_real(&[0.0, 1.0]),
            1,
            (false, false),
        ),
    ];
    for (label, matrix, n, (mixed, uncertain)) in quadrants {
        let want = Quadrant { mixed, uncertain };
        let got = DensityOperator::new(2, n, matrix).map(|rho| classify_quadrant(&rho));
        s.holds(format!("{label} classifies as {want}"), got == Ok(want));
    }
}

fn entropy_invariance(s: &mut Suite, rng: &mut ChaCha8Rng, samples: usize) {
    let mut gates = qutrit_catalog();
    gates.extend(qubit_catalog(2).expect("qubit gates"));
    for g in &gates {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let rho = random_density(rng, g.d(), g.n()).expect("valid signature");
            let out = apply_to_density(g, &rho).expect("matching signature");
            worst = worst.max((linear_entropy(&out) - linear_entropy(&rho)).abs());
        }
        s.at_most(
            format!("SL invariant under {} ({samples} states)", g.name()),
            worst,
            1e-9,
        );
    }
}

/// Smallest pivot magnitude of Gaussian elimination with partial pivoting;
/// zero when the matrix is singular.
fn min_pivot(mut m: [[f64; 8]; 8]) -> f64 {
    let mut smallest = f64::INFINITY;
    for col in 0..8 {
        let pivot = (col..8)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("non-empty range");
        m.swap(col, pivot);
        let p = m[col][col];
        smallest = smallest.min(p.abs());
        if p == 0.0 {
            return 0.0;
        }
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let factor = row[col] / p;
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * y;
            }
        }
    }
    smallest
}

fn tomography(s: &mut Suite, rng: &mut ChaCha8Rng, samples: usize) {
    let mut closed_dev: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    let mut all_physical = true;
    for _ in 0..samples {
        let rho = random_density(rng, 3, 1).expect("qutrit");
        let direct = direct_probes(&rho).expect("qutrit");
        let closed = closed_form_probes(&decompose(&rho).expect("qutrit"));
        for (a, b) in direct.iter().zip(&closed) {
            closed_dev = closed_dev.max((a - b).abs());
        }
        match ProbeVector::new(direct.map(|p| p.clamp(0.0, 1.0))).map(|p| reconstruct(&p)) {
            Ok(Ok(back)) => round_trip = round_trip.max(dist(back.matrix(), rho.matrix())),
            _ => all_physical = false,
        }
    }
    s.at_most(
        format!("closed-form probes match tr(E G rho G^dagger) ({samples} states)"),
        closed_dev,
        1e-10,
    );
    let (_, m) = probe_affine_map();
    s.at_least(
        "probe system has full rank (smallest pivot)",
        min_pivot(m),
        1e-6,
    );
    s.holds("reconstructed random states are physical", all_physical);
    s.at_most(
        format!("reconstruct(forward(rho)) = rho ({samples} states)"),
        round_trip,
        1e-9,
    );

    let mut r = [0.0; 8];
    r[7] = 1.0;
    let bloch = BlochVector8(r);
    let matrix = compose_matrix(&bloch);
    let eig = eigvals_hermitian3(&matrix).expect("Hermitian");
    let want = [-1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    let dev = eig
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    s.at_most("r8 = 1 has eigenvalues {-1/3, 2/3, 2/3}", dev, 1e-10);
    s.holds("r8 = 1 is rejected as a state", compose(&bloch).is_err());
    let probes = ProbeVector::new(closed_form_probes(&bloch)).expect("probes in range");
    let rejected = reconstruct(&probes).is_err();
    s.holds("probes of r8 = 1 are rejected on reconstruction", rejected);
    let recovered = solve_bloch(&probes);
    let dev = recovered
        .0
        .iter()
        .zip(&bloch.0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    s.at_most("probe inversion recovers r8 = 1", dev, 1e-12);
}

fn h3_entropy_note() -> String {
    let h = lookup("H3", 1).expect("H3");
    let rho = DensityOperator::maximally_mixed(3, 1).expect("qutrit");
    let before = linear_entropy(&rho);
    let after = linear_entropy(&apply_to_density(&h, &rho).expect("qutrit"));
    format!(
        "the claim that H3 changes the linear entropy of every density operator is unverifiable \
         as stated: SL is invariant under every unitary, and at I/3 SL = {before} before and \
         {after} after H3"
    )
}

pub fn run_suite(config: &SuiteConfig) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut s = Suite {
        tolerance: config.tolerance,
        checks: Vec::new(),
    };
    gate_algebra(&mut s);
    truth_semantics(&mut s);
    entropy_invariance(&mut s, &mut rng, config.invariance_samples);
    tomography(&mut s, &mut rng, config.tomography_samples);
    Report {
        seed: config.seed,
        checks: s.checks,
        notes: vec![h3_entropy_note()],
    }
}
