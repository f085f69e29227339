//! Protocol-level teleportation simulator.
//!
//! Teleports a pure qubit through an arbitrary shared two-qubit state with
//! the textbook circuit: four-outcome Bell measurement on (input, qubit one)
//! followed by the Pauli correction on qubit two. Averaging over the six
//! Pauli eigenstates (a projective 2-design) reproduces the Haar average of
//! the output fidelity exactly, which is what ties the protocol back to the
//! (2f + 1)/3 law.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::cmatrix::{pauli_x, pauli_z, CMatrix};
use crate::error::{CoreError, Result};
use crate::qmeasure::fef_maximizing_mes;
use crate::qstate::{random_bloch_ket, DensityMatrix};

/// Identifier of the Monte-Carlo input sampler, recorded in results.
pub const HAAR_SAMPLER_ID: &str = "chacha12(seed); z~U[-1,1], phi~U[0,2pi)";
/// Identifier of the exact six-state ensemble.
pub const SIX_CARDINAL_ID: &str = "six-pauli-eigenstates (projective 2-design)";

/// Input-state ensemble for fidelity averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    SixCardinal,
    HaarMc,
}

#[derive(Debug, Clone)]
pub struct InputEnsemble {
    pub kind: EnsembleKind,
    pub samples: usize,
    pub seed: u64,
}

impl InputEnsemble {
    pub fn six_cardinal() -> Self {
        InputEnsemble {
            kind: EnsembleKind::SixCardinal,
            samples: 6,
            seed: 0,
        }
    }

    /// Seeded Monte-Carlo over Bloch-uniform pure inputs; at least 1000
    /// samples.
    pub fn haar_mc(samples: usize, seed: u64) -> Result<Self> {
        if samples < 1000 {
            return Err(CoreError::OutOfRange {
                name: "samples",
                value: samples as f64,
                domain: "[1000, inf)",
            });
        }
        Ok(InputEnsemble {
            kind: EnsembleKind::HaarMc,
            samples,
            seed,
        })
    }
}

/// Average fidelity over an ensemble, with the per-input values that
/// produced it.
#[derive(Debug, Clone)]
pub struct TeleportResult {
    pub avg_fidelity: f64,
    pub per_input: Vec<f64>,
    /// Standard error of the mean; zero for the exact ensemble.
    pub std_error: f64,
    pub sampler_id: &'static str,
}

fn bell_kets() -> [(CMatrix, CMatrix); 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| Complex64::new(x, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let phi_plus = CMatrix::ket(&[re(s), zero, zero, re(s)]);
    let psi_plus = CMatrix::ket(&[zero, re(s), re(s), zero]);
    let phi_minus = CMatrix::ket(&[re(s), zero, zero, re(-s)]);
    let psi_minus = CMatrix::ket(&[zero, re(s), re(-s), zero]);
    let zx = pauli_z().mul(&pauli_x()).expect("2x2 product");
    [
        (phi_plus, CMatrix::identity(2)),
        (psi_plus, pauli_x()),
        (phi_minus, pauli_z()),
        (psi_minus, zx),
    ]
}

/// Trace out the two leading qubits of an 8x8 matrix.
fn trace_out_leading(m: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(2, 2);
    for c in 0..2 {
        for d in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..4 {
                acc += m[(2 * a + c, 2 * a + d)];
            }
            out[(c, d)] = acc;
        }
    }
    out
}

fn check_input(input: &CMatrix) -> Result<()> {
    if input.rows() != 2 || input.cols() != 1 {
        return Err(CoreError::DimensionMismatch(format!(
            "teleportation input must be a 2x1 ket, got {}x{}",
            input.rows(),
            input.cols()
        )));
    }
    let norm = (input[(0, 0)].norm_sqr() + input[(1, 0)].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(CoreError::NotNormalized(norm));
    }
    Ok(())
}

/// Outcome probabilities and corrected conditional output states of the
/// four-outcome Bell measurement.
fn teleport_outcomes(
    shared: &DensityMatrix,
    input: &CMatrix,
) -> Result<[(f64, CMatrix); 4]> {
    let psi_rho = input.mul(&input.dagger())?;
    let total = psi_rho.kron(shared.mat())?;
    let i2 = CMatrix::identity(2);

    let mut outcomes = Vec::with_capacity(4);
    for (bell, correction) in bell_kets() {
        let projector = bell.mul(&bell.dagger())?.kron(&i2)?;
        let sandwiched = projector.mul(&total)?.mul(&projector)?;
        let p = sandwiched.trace().re;
        let reduced = trace_out_leading(&sandwiched);
        let corrected = correction.mul(&reduced)?.mul(&correction.dagger())?;
        outcomes.push((p, corrected));
    }
    Ok(outcomes.try_into().expect("four Bell outcomes"))
}

/// Fidelity of the teleported state with the input, summed over the four
/// measurement branches.
pub fn standard_teleport_fidelity(shared: &DensityMatrix, input: &CMatrix) -> Result<f64> {
    check_input(input)?;
    let outcomes = teleport_outcomes(shared, input)?;
    debug_assert!((outcomes.iter().map(|(p, _)| p).sum::<f64>() - 1.0).abs() < 1e-12);
    let mut fidelity = 0.0;
    for (p, corrected) in outcomes {
        if p > 1e-15 {
            // <psi| (corrected/p) |psi> weighted by p: the p cancels.
            fidelity += input.dagger().mul(&corrected)?.mul(input)?[(0, 0)].re;
        }
    }
    Ok(fidelity)
}

fn six_cardinal_kets() -> Vec<CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    vec![
        CMatrix::ket(&[re(1.0), re(0.0)]),
        CMatrix::ket(&[re(0.0), re(1.0)]),
        CMatrix::ket(&[re(s), re(s)]),
        CMatrix::ket(&[re(s), re(-s)]),
        CMatrix::ket(&[re(s), im(s)]),
        CMatrix::ket(&[re(s), im(-s)]),
    ]
}

/// Average teleportation fidelity over the chosen input ensemble.
pub fn average_fidelity(
    shared: &DensityMatrix,
    ensemble: &InputEnsemble,
) -> Result<TeleportResult> {
    let (per_input, sampler_id) = match ensemble.kind {
        EnsembleKind::SixCardinal => {
            let mut values = Vec::with_capacity(6);
            for ket in six_cardinal_kets() {
                values.push(standard_teleport_fidelity(shared, &ket)?);
            }
            (values, SIX_CARDINAL_ID)
        }
        EnsembleKind::HaarMc => {
            let mut rng = ChaCha12Rng::seed_from_u64(ensemble.seed);
            let mut values = Vec::with_capacity(ensemble.samples);
            for _ in 0..ensemble.samples {
                let ket = random_bloch_ket(&mut rng);
                values.push(standard_teleport_fidelity(shared, &ket)?);
            }
            (values, HAAR_SAMPLER_ID)
        }
    };

    let n = per_input.len() as f64;
    let avg = per_input.iter().sum::<f64>() / n;
    let std_error = match ensemble.kind {
        EnsembleKind::SixCardinal => 0.0,
        EnsembleKind::HaarMc => {
            let var = per_input.iter().map(|f| (f - avg).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        }
    };
    Ok(TeleportResult {
        avg_fidelity: avg,
        per_input,
        std_error,
        sampler_id,
    })
}

/// Unitary for qubit two that rotates the FEF-maximizing maximally
/// entangled state onto |phi+>, so that the standard protocol achieves the
/// optimal fidelity (2f + 1)/3.
pub fn optimal_prerotation(shared: &DensityMatrix) -> CMatrix {
    let mes = fef_maximizing_mes(shared);
    // |phi> = (I x U)|phi+>  with  U = sqrt(2) * A^T, A the 2x2 amplitude
    // matrix of |phi>.
    let r2 = std::f64::consts::SQRT_2;
    let mut u = CMatrix::zeros(2, 2);
    u[(0, 0)] = mes[(0, 0)] * r2;
    u[(1, 0)] = mes[(1, 0)] * r2;
    u[(0, 1)] = mes[(2, 0)] * r2;
    u[(1, 1)] = mes[(3, 0)] * r2;
    u.dagger()
}
