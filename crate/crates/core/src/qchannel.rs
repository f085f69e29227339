//! Local single-qubit operations on a two-qubit state: the amplitude
//! damping channel, weak measurements, and reverse weak measurements.
//!
//! A trace-preserving channel is a complete Kraus family; a weak or reverse
//! weak measurement is a single selective operator whose trace gives the
//! post-selection probability.

use crate::cmatrix::{CMatrix, Qubit};
use crate::error::{CoreError, Result};
use crate::qstate::{DensityMatrix, SelectiveOutcome};

/// A 2x2 operator tagged with the qubit it acts on.
#[derive(Debug, Clone)]
pub struct LocalKraus {
    op: CMatrix,
    qubit: Qubit,
}

impl LocalKraus {
    pub fn new(op: CMatrix, qubit: Qubit) -> Result<Self> {
        if op.rows() != 2 || op.cols() != 2 {
            return Err(CoreError::DimensionMismatch(format!(
                "local operator must be 2x2, got {}x{}",
                op.rows(),
                op.cols()
            )));
        }
        Ok(LocalKraus { op, qubit })
    }

    pub fn op(&self) -> &CMatrix {
        &self.op
    }

    pub fn qubit(&self) -> Qubit {
        self.qubit
    }

    /// Tensor the operator with the identity on the other qubit.
    pub fn lifted(&self) -> CMatrix {
        let i2 = CMatrix::identity(2);
        match self.qubit {
            Qubit::One => self.op.kron(&i2).expect("2x2 kron 2x2 fits"),
            Qubit::Two => i2.kron(&self.op).expect("2x2 kron 2x2 fits"),
        }
    }
}

/// A complete Kraus family acting on one qubit: sum K'K = I to 1e-12.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    elements: Vec<LocalKraus>,
}

impl KrausChannel {
    pub fn new(elements: Vec<LocalKraus>) -> Result<Self> {
        let qubit = match elements.first() {
            Some(k) => k.qubit(),
            None => {
                return Err(CoreError::DimensionMismatch(
                    "a channel needs at least one Kraus element".into(),
                ))
            }
        };
        if elements.iter().any(|k| k.qubit() != qubit) {
            return Err(CoreError::DimensionMismatch(
                "all Kraus elements must act on the same qubit".into(),
            ));
        }
        let mut sum = CMatrix::zeros(2, 2);
        for k in &elements {
            sum = sum.add(&k.op().dagger().mul(k.op())?)?;
        }
        let dev = sum.sub(&CMatrix::identity(2))?.max_abs();
        if dev > 1e-12 {
            return Err(CoreError::IncompleteChannel(dev));
        }
        Ok(KrausChannel { elements })
    }

    pub fn elements(&self) -> &[LocalKraus] {
        &self.elements
    }

    pub fn qubit(&self) -> Qubit {
        self.elements[0].qubit()
    }
}

/// Amplitude damping with decay probability `d` on the given qubit.
///
/// Element 0 is diag(1, sqrt(1-d)); element 1 moves the excited amplitude
/// to the ground state with weight sqrt(d).
pub fn adc_kraus(d: f64, qubit: Qubit) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&d) || !d.is_finite() {
        return Err(CoreError::OutOfRange {
            name: "d",
            value: d,
            domain: "[0, 1]",
        });
    }
    let w0 = CMatrix::mat2_real(1.0, 0.0, 0.0, (1.0 - d).sqrt());
    let w1 = CMatrix::mat2_real(0.0, d.sqrt(), 0.0, 0.0);
    KrausChannel::new(vec![LocalKraus::new(w0, qubit)?, LocalKraus::new(w1, qubit)?])
}

/// Weak measurement of strength `p`: the no-click branch diag(1, sqrt(1-p)).
pub fn weak_measurement_op(p: f64, qubit: Qubit) -> Result<LocalKraus> {
    if !(0.0..1.0).contains(&p) || !p.is_finite() {
        return Err(CoreError::OutOfRange {
            name: "p",
            value: p,
            domain: "[0, 1)",
        });
    }
    LocalKraus::new(
        CMatrix::mat2_real(1.0, 0.0, 0.0, (1.0 - p).sqrt()),
        qubit,
    )
}

/// Reverse weak measurement of strength `q`: diag(sqrt(1-q), 1).
pub fn reverse_weak_op(q: f64, qubit: Qubit) -> Result<LocalKraus> {
    if !(0.0..1.0).contains(&q) || !q.is_finite() {
        return Err(CoreError::OutOfRange {
            name: "q",
            value: q,
            domain: "[0, 1)",
        });
    }
    LocalKraus::new(
        CMatrix::mat2_real((1.0 - q).sqrt(), 0.0, 0.0, 1.0),
        qubit,
    )
}

/// Apply a trace-preserving channel to one qubit of a two-qubit state.
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    let mut out = CMatrix::zeros(4, 4);
    for k in ch.elements() {
        let m = k.lifted();
        out = out.add(&m.mul(rho.mat())?.mul(&m.dagger())?)?;
    }
    DensityMatrix::new(out)
}

/// Apply a selective local operator: returns the renormalized state and the
/// probability of that branch.
pub fn apply_selective(rho: &DensityMatrix, k: &LocalKraus) -> Result<SelectiveOutcome> {
    let m = k.lifted();
    let unnorm = m.mul(rho.mat())?.mul(&m.dagger())?;
    let tr = unnorm.trace().re;
    if tr <= 1e-12 {
        return Err(CoreError::DegenerateNormalization(tr));
    }
    SelectiveOutcome::new(DensityMatrix::new(unnorm.scaled(1.0 / tr))?, tr)
}
