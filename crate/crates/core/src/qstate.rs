//! Validated two-qubit density matrices.
//!
//! States come in two flavours: explicit entrywise constructors for the
//! closed-form decohered/protected states, and operational builds through
//! Kraus pipelines. The two routes must agree entrywise; the pipeline audit
//! tests hold them to 1e-12.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::cmatrix::{CMatrix, Qubit};
use crate::error::{CoreError, Result};
use crate::qchannel::{
    adc_kraus, apply_channel, apply_selective, reverse_weak_op, weak_measurement_op, KrausChannel,
    LocalKraus,
};

/// A validated 4x4 two-qubit state: Hermitian, unit trace, PSD (all to
/// 1e-10).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.rows() != 4 || mat.cols() != 4 {
            return Err(CoreError::DimensionMismatch(format!(
                "a two-qubit state is 4x4, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let dev = mat.herm_deviation();
        if dev > 1e-10 {
            return Err(CoreError::NotHermitian(dev));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(CoreError::BadTrace(tr));
        }
        let min = mat
            .herm_eig()?
            .eigenvalues
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(CoreError::NotPositive(min));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    /// Reduced state of the retained qubit.
    pub fn reduced(&self, keep: Qubit) -> CMatrix {
        self.mat.partial_trace(keep).expect("state is 4x4")
    }

    /// Conjugate by a unitary on one qubit.
    pub fn apply_local_unitary(&self, u: &CMatrix, qubit: Qubit) -> Result<DensityMatrix> {
        let i2 = CMatrix::identity(2);
        let lifted = match qubit {
            Qubit::One => u.kron(&i2)?,
            Qubit::Two => i2.kron(u)?,
        };
        DensityMatrix::new(lifted.mul(&self.mat)?.mul(&lifted.dagger())?)
    }
}

/// A post-selected state together with the probability of the branch that
/// produced it.
#[derive(Debug, Clone)]
pub struct SelectiveOutcome {
    pub state: DensityMatrix,
    pub probability: f64,
}

impl SelectiveOutcome {
    pub fn new(state: DensityMatrix, probability: f64) -> Result<Self> {
        if !(-1e-12..=1.0 + 1e-12).contains(&probability) {
            return Err(CoreError::OutOfRange {
                name: "probability",
                value: probability,
                domain: "[0, 1]",
            });
        }
        Ok(SelectiveOutcome { state, probability })
    }
}

/// The maximally entangled state (|00> + |11>)(<00| + <11|)/2.
pub fn bell_phi_plus() -> DensityMatrix {
    let mut m = CMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(r, c)] = Complex64::new(0.5, 0.0);
    }
    DensityMatrix::new(m).expect("Bell state is valid")
}

fn check_unit_interval(name: &'static str, value: f64, open_top: bool) -> Result<()> {
    let ok = if open_top {
        (0.0..1.0).contains(&value)
    } else {
        (0.0..=1.0).contains(&value)
    };
    if !ok || !value.is_finite() {
        return Err(CoreError::OutOfRange {
            name,
            value,
            domain: if open_top { "[0, 1)" } else { "[0, 1]" },
        });
    }
    Ok(())
}

/// Bell state after amplitude damping of strength `d2` on the second qubit,
/// written out entrywise.
pub fn rho_d(d2: f64) -> Result<DensityMatrix> {
    check_unit_interval("d2", d2, false)?;
    let db = 1.0 - d2;
    let w = db.sqrt() / 2.0;
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = Complex64::new(0.5, 0.0);
    m[(0, 3)] = Complex64::new(w, 0.0);
    m[(3, 0)] = Complex64::new(w, 0.0);
    m[(2, 2)] = Complex64::new(d2 / 2.0, 0.0);
    m[(3, 3)] = Complex64::new(db / 2.0, 0.0);
    DensityMatrix::new(m)
}

/// Bell state after independent amplitude damping on both qubits.
pub fn rho_dd(d1: f64, d2: f64) -> Result<DensityMatrix> {
    check_unit_interval("d1", d1, false)?;
    check_unit_interval("d2", d2, false)?;
    let (db1, db2) = (1.0 - d1, 1.0 - d2);
    let w = (db1 * db2).sqrt() / 2.0;
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = Complex64::new((1.0 + d1 * d2) / 2.0, 0.0);
    m[(1, 1)] = Complex64::new(d1 * db2 / 2.0, 0.0);
    m[(2, 2)] = Complex64::new(db1 * d2 / 2.0, 0.0);
    m[(3, 3)] = Complex64::new(db1 * db2 / 2.0, 0.0);
    m[(0, 3)] = Complex64::new(w, 0.0);
    m[(3, 0)] = Complex64::new(w, 0.0);
    DensityMatrix::new(m)
}

/// Protected single-qubit scenario: weak measurement of strength `p2`, then
/// damping `d2`, then reverse measurement `q2`, all on the second qubit.
/// Returns the normalized state and the branch probability alpha/2.
pub fn sigma_r(d2: f64, p2: f64, q2: f64) -> Result<SelectiveOutcome> {
    check_unit_interval("d2", d2, true)?;
    check_unit_interval("p2", p2, true)?;
    check_unit_interval("q2", q2, true)?;
    let (pb, qb, db) = (1.0 - p2, 1.0 - q2, 1.0 - d2);
    let alpha = 2.0 - p2 - q2 - d2 * pb * q2;
    if alpha <= 1e-12 {
        return Err(CoreError::DegenerateNormalization(alpha));
    }
    let w = (db * pb * qb).sqrt() / alpha;
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = Complex64::new(qb / alpha, 0.0);
    m[(0, 3)] = Complex64::new(w, 0.0);
    m[(3, 0)] = Complex64::new(w, 0.0);
    m[(2, 2)] = Complex64::new(d2 * pb * qb / alpha, 0.0);
    m[(3, 3)] = Complex64::new(db * pb / alpha, 0.0);
    SelectiveOutcome::new(DensityMatrix::new(m)?, alpha / 2.0)
}

/// Protected two-qubit scenario with symmetric strengths on both qubits.
/// Returns the normalized state and the branch probability beta/2.
pub fn sigma_rr(d: f64, p: f64, q: f64) -> Result<SelectiveOutcome> {
    check_unit_interval("d", d, true)?;
    check_unit_interval("p", p, true)?;
    check_unit_interval("q", q, true)?;
    let (pb, qb, db) = (1.0 - p, 1.0 - q, 1.0 - d);
    let beta =
        2.0 - 2.0 * q * (1.0 + d * pb * pb) + q * q * (1.0 + d * d * pb * pb) - (2.0 - p) * p;
    if beta <= 1e-12 {
        return Err(CoreError::DegenerateNormalization(beta));
    }
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = Complex64::new(qb * qb * (1.0 + d * d * pb * pb) / beta, 0.0);
    m[(1, 1)] = Complex64::new(d * db * pb * pb * qb / beta, 0.0);
    m[(2, 2)] = Complex64::new(d * db * pb * pb * qb / beta, 0.0);
    m[(3, 3)] = Complex64::new(db * db * pb * pb / beta, 0.0);
    let w = db * pb * qb / beta;
    m[(0, 3)] = Complex64::new(w, 0.0);
    m[(3, 0)] = Complex64::new(w, 0.0);
    SelectiveOutcome::new(DensityMatrix::new(m)?, beta / 2.0)
}

/// One step of an operational state build.
#[derive(Debug, Clone)]
pub enum LocalOpStep {
    /// Trace-preserving channel on one qubit.
    Channel(KrausChannel),
    /// Selective operator on one qubit; contributes its trace to the overall
    /// branch probability.
    Selective(LocalKraus),
}

/// Apply a sequence of local steps to `initial`. The returned probability is
/// the product of the selective branch traces; the state is renormalized.
pub fn build_pipeline(initial: &DensityMatrix, steps: &[LocalOpStep]) -> Result<SelectiveOutcome> {
    let mut state = initial.clone();
    let mut probability = 1.0;
    for step in steps {
        match step {
            LocalOpStep::Channel(ch) => {
                state = apply_channel(&state, ch)?;
            }
            LocalOpStep::Selective(k) => {
                let out = apply_selective(&state, k)?;
                probability *= out.probability;
                state = out.state;
            }
        }
        if probability <= 1e-12 {
            return Err(CoreError::DegenerateNormalization(probability));
        }
    }
    SelectiveOutcome::new(state, probability)
}

/// Pipeline steps for the protected single-qubit scenario.
pub fn wmrwm_steps_single(d: f64, p: f64, q: f64) -> Result<Vec<LocalOpStep>> {
    Ok(vec![
        LocalOpStep::Selective(weak_measurement_op(p, Qubit::Two)?),
        LocalOpStep::Channel(adc_kraus(d, Qubit::Two)?),
        LocalOpStep::Selective(reverse_weak_op(q, Qubit::Two)?),
    ])
}

/// Pipeline steps for the protected two-qubit scenario (symmetric
/// strengths).
pub fn wmrwm_steps_both(d: f64, p: f64, q: f64) -> Result<Vec<LocalOpStep>> {
    Ok(vec![
        LocalOpStep::Selective(weak_measurement_op(p, Qubit::One)?),
        LocalOpStep::Selective(weak_measurement_op(p, Qubit::Two)?),
        LocalOpStep::Channel(adc_kraus(d, Qubit::One)?),
        LocalOpStep::Channel(adc_kraus(d, Qubit::Two)?),
        LocalOpStep::Selective(reverse_weak_op(q, Qubit::One)?),
        LocalOpStep::Selective(reverse_weak_op(q, Qubit::Two)?),
    ])
}

/// Random full-rank two-qubit state from the Ginibre ensemble.
pub fn random_density_matrix(rng: &mut impl Rng) -> DensityMatrix {
    loop {
        let mut g = CMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                g[(i, j)] = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
        }
        let gg = g.mul(&g.dagger()).expect("4x4 product");
        let tr = gg.trace().re;
        if tr > 1e-6 {
            return DensityMatrix::new(gg.scaled(1.0 / tr)).expect("Ginibre state is valid");
        }
    }
}

/// Random pure single-qubit ket, uniform on the Bloch sphere.
pub fn random_bloch_ket(rng: &mut impl Rng) -> CMatrix {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let theta = z.acos();
    CMatrix::ket(&[
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
}

/// Random pure product state of two qubits.
pub fn random_pure_product(rng: &mut impl Rng) -> DensityMatrix {
    let k1 = random_bloch_ket(rng);
    let k2 = random_bloch_ket(rng);
    let ket = k1.kron(&k2).expect("4x1 ket");
    DensityMatrix::new(ket.mul(&ket.dagger()).expect("outer product"))
        .expect("product state is valid")
}

/// Haar-random SU(2) via a uniform unit quaternion.
pub fn random_unitary2(rng: &mut impl Rng) -> CMatrix {
    loop {
        let q: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        let [a, b, c, d] = q.map(|x| x / norm);
        let alpha = Complex64::new(a, b);
        let beta = Complex64::new(c, d);
        let mut u = CMatrix::zeros(2, 2);
        u[(0, 0)] = alpha;
        u[(0, 1)] = beta;
        u[(1, 0)] = -beta.conj();
        u[(1, 1)] = alpha.conj();
        return u;
    }
}
