//! Correlation quantifiers for two-qubit states: concurrence, fully
//! entangled fraction (FEF), teleportation fidelity, von Neumann entropies,
//! mutual information, and classical correlation.
//!
//! Concurrence uses the Hermitian route: the spectrum of sqrt(rho) * rho~ *
//! sqrt(rho) coincides with that of rho * rho~ but keeps the eigensolver on
//! Hermitian inputs. FEF is the largest eigenvalue of the real part of the
//! state in the magic basis, where real unit vectors are exactly the
//! maximally entangled states; a brute-force sweep over one-sided unitaries
//! serves as its independent oracle. Classical correlation maximizes over
//! rank-1 projective measurements on qubit two with a deterministic
//! grid-then-simplex search.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::cmatrix::{pauli_y, CMatrix, Qubit};
use crate::error::{CoreError, Result};
use crate::optim::nelder_mead_min;
use crate::qstate::DensityMatrix;

/// Measurement direction on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    /// Polar angle in [0, pi].
    pub theta: f64,
    /// Azimuth in [0, 2*pi).
    pub phi: f64,
}

impl BlochVector {
    /// Fold arbitrary angles back into theta in [0, pi], phi in [0, 2*pi).
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        let mut f = phi;
        if t > PI {
            t = TAU - t;
            f += PI;
        }
        BlochVector {
            theta: t,
            phi: f.rem_euclid(TAU),
        }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Measurement outcome of a two-outcome projective measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

/// All correlation quantifiers of one state.
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub concurrence: f64,
    pub fef: f64,
    pub tf: f64,
    /// Entropies in bits (base-2 logarithm).
    pub entropy_a: f64,
    pub entropy_b: f64,
    pub entropy_ab: f64,
    pub mutual_info: f64,
    pub cc: f64,
    pub cc_argmax: BlochVector,
}

/// Spin-flipped state (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
pub fn spin_flip(rho: &DensityMatrix) -> CMatrix {
    let yy = pauli_y().kron(&pauli_y()).expect("4x4 fits");
    yy.mul(&rho.mat().conj())
        .and_then(|m| m.mul(&yy))
        .expect("4x4 products")
}

/// Wootters concurrence via the Hermitian reformulation.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let s = rho.mat().psd_sqrt().expect("valid state is PSD");
    let m = s
        .mul(&spin_flip(rho))
        .and_then(|m| m.mul(&s))
        .expect("4x4 products");
    let eig = m.herm_eig().expect("product of PSD factors is Hermitian");
    // Exact zeros of the product come back as O(1e-16 * lmax) noise; taking
    // their square root would inflate them to ~1e-8 and bias the
    // subtraction. Clamp below a relative threshold instead.
    let clamp = 1e-13 * eig.eigenvalues[0].max(0.0);
    let roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l <= clamp { 0.0 } else { l.sqrt() })
        .collect();
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}

/// Closed-form concurrence for X-form states (nonzero entries only on the
/// diagonal and antidiagonal). Serves as an independent oracle for
/// [`concurrence`].
pub fn x_state_concurrence(rho: &DensityMatrix) -> f64 {
    let m = rho.mat();
    let outer = m[(0, 3)].norm() - (m[(1, 1)].re * m[(2, 2)].re).max(0.0).sqrt();
    let inner = m[(1, 2)].norm() - (m[(0, 0)].re * m[(3, 3)].re).max(0.0).sqrt();
    2.0 * outer.max(inner).max(0.0)
}

/// The magic basis as columns: Bell states with phases fixed so that real
/// unit vectors in this basis are exactly the maximally entangled states.
fn magic_basis() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let mut t = CMatrix::zeros(4, 4);
    // (|00> + |11>)/sqrt2
    t[(0, 0)] = re(s);
    t[(3, 0)] = re(s);
    // i(|00> - |11>)/sqrt2
    t[(0, 1)] = im(s);
    t[(3, 1)] = im(-s);
    // i(|01> + |10>)/sqrt2
    t[(1, 2)] = im(s);
    t[(2, 2)] = im(s);
    // (|01> - |10>)/sqrt2
    t[(1, 3)] = re(s);
    t[(2, 3)] = re(-s);
    t
}

fn magic_real_part(rho: &DensityMatrix) -> CMatrix {
    let t = magic_basis();
    let m = t
        .dagger()
        .mul(rho.mat())
        .and_then(|m| m.mul(&t))
        .expect("4x4 products");
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = Complex64::new(m[(i, j)].re, 0.0);
        }
    }
    out
}

/// Fully entangled fraction: the largest eigenvalue of the real part of the
/// state expressed in the magic basis.
pub fn fef(rho: &DensityMatrix) -> f64 {
    magic_real_part(rho)
        .herm_eig()
        .expect("real symmetric matrix")
        .eigenvalues[0]
}

/// The maximally entangled state achieving [`fef`], as a 4x1 ket in the
/// computational basis. Degenerate maxima resolve to the first eigenvector
/// in the solver's descending order.
pub fn fef_maximizing_mes(rho: &DensityMatrix) -> CMatrix {
    let eig = magic_real_part(rho).herm_eig().expect("real symmetric matrix");
    // Eigenvectors of a real symmetric matrix; drop round-off imaginaries.
    let mut r = [0.0f64; 4];
    for (k, slot) in r.iter_mut().enumerate() {
        *slot = eig.eigenvectors[(k, 0)].re;
    }
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let coords: Vec<Complex64> = r.iter().map(|&x| Complex64::new(x / norm, 0.0)).collect();
    magic_basis()
        .mul(&CMatrix::ket(&coords))
        .expect("4x4 by 4x1")
}

fn euler_unitary(alpha: f64, beta: f64, gamma: f64) -> CMatrix {
    let rz = |t: f64| {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::from_polar(1.0, -t / 2.0);
        m[(1, 1)] = Complex64::from_polar(1.0, t / 2.0);
        m
    };
    let (s, c) = (beta / 2.0).sin_cos();
    let ry = CMatrix::mat2_real(c, -s, s, c);
    rz(alpha).mul(&ry).and_then(|m| m.mul(&rz(gamma))).expect("2x2 products")
}

fn mes_overlap(rho: &DensityMatrix, u: &CMatrix) -> f64 {
    // (I x U)|phi+> has amplitudes [U00, U10, U01, U11]/sqrt2.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let ket = CMatrix::ket(&[
        u[(0, 0)] * s,
        u[(1, 0)] * s,
        u[(0, 1)] * s,
        u[(1, 1)] * s,
    ]);
    ket.dagger()
        .mul(rho.mat())
        .and_then(|m| m.mul(&ket))
        .expect("1x4 by 4x4 by 4x1")[(0, 0)]
        .re
}

/// Brute-force FEF oracle: sweep maximally entangled states (I x U)|phi+>
/// over a three-Euler-angle grid, then refine locally with a simplex.
pub fn fef_bruteforce(rho: &DensityMatrix, grid_per_angle: usize) -> f64 {
    let g = grid_per_angle.max(8);
    let mut best = (0.0f64, [0.0f64; 3]);
    for i in 0..g {
        let alpha = TAU * i as f64 / g as f64;
        for j in 0..g {
            let beta = PI * j as f64 / (g - 1) as f64;
            for k in 0..g {
                let gamma = TAU * k as f64 / g as f64;
                let val = mes_overlap(rho, &euler_unitary(alpha, beta, gamma));
                if val > best.0 {
                    best = (val, [alpha, beta, gamma]);
                }
            }
        }
    }
    let steps = [TAU / g as f64 / 2.0, PI / g as f64 / 2.0, TAU / g as f64 / 2.0];
    let (_, neg) = nelder_mead_min(
        |x| -mes_overlap(rho, &euler_unitary(x[0], x[1], x[2])),
        &best.1,
        &steps,
        1e-10,
        300,
    );
    best.0.max(-neg)
}

/// Maximum average teleportation fidelity (2f + 1)/3.
pub fn teleportation_fidelity(rho: &DensityMatrix) -> f64 {
    (2.0 * fef(rho) + 1.0) / 3.0
}

/// Von Neumann entropy in bits of a unit-trace Hermitian PSD matrix.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > 1e-10 {
        return Err(CoreError::BadTrace(tr));
    }
    let eig = rho.herm_eig()?;
    let mut acc = 0.0;
    for &l in &eig.eigenvalues {
        if l < -1e-10 {
            return Err(CoreError::NotPositive(l));
        }
        if l > 0.0 {
            acc -= l * l.log2();
        }
    }
    Ok(acc)
}

/// Total correlation S(rho_A) + S(rho_B) - S(rho_AB).
pub fn mutual_information(rho: &DensityMatrix) -> f64 {
    let sa = von_neumann_entropy(&rho.reduced(Qubit::One)).expect("valid marginal");
    let sb = von_neumann_entropy(&rho.reduced(Qubit::Two)).expect("valid marginal");
    let sab = von_neumann_entropy(rho.mat()).expect("valid state");
    sa + sb - sab
}

fn projector(n: [f64; 3]) -> CMatrix {
    let mut p = CMatrix::zeros(2, 2);
    p[(0, 0)] = Complex64::new((1.0 + n[2]) / 2.0, 0.0);
    p[(1, 1)] = Complex64::new((1.0 - n[2]) / 2.0, 0.0);
    p[(0, 1)] = Complex64::new(n[0] / 2.0, -n[1] / 2.0);
    p[(1, 0)] = Complex64::new(n[0] / 2.0, n[1] / 2.0);
    p
}

/// Unnormalized qubit-one state after projecting qubit two onto `p`:
/// Tr_B[rho (I x P)], which equals Tr_B[(I x P) rho (I x P)] because P is a
/// projector.
fn conditioned_block(rho: &CMatrix, p: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..2 {
                for e in 0..2 {
                    acc += rho[(2 * a + c, 2 * b + e)] * p[(e, c)];
                }
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// Entropy in bits of an unnormalized 2x2 Hermitian block with trace `p`.
fn entropy2_scaled(m: &CMatrix, p: f64) -> f64 {
    let a = m[(0, 0)].re / p;
    let b = m[(1, 1)].re / p;
    let z2 = m[(0, 1)].norm_sqr() / (p * p);
    let mid = (a + b) / 2.0;
    let rad = (((a - b) / 2.0).powi(2) + z2).sqrt();
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    h(mid + rad) + h(mid - rad)
}

/// Post-measurement state of qubit one given a projective outcome on qubit
/// two, together with the outcome probability.
pub fn conditional_state(
    rho: &DensityMatrix,
    direction: &BlochVector,
    outcome: Outcome,
) -> Result<(CMatrix, f64)> {
    let n = direction.unit_vector();
    let n = match outcome {
        Outcome::Plus => n,
        Outcome::Minus => [-n[0], -n[1], -n[2]],
    };
    let block = conditioned_block(rho.mat(), &projector(n));
    let p = block.trace().re;
    if p <= 1e-12 {
        return Err(CoreError::OutcomeImpossible(p));
    }
    Ok((block.scaled(1.0 / p), p))
}

fn cc_objective(rho: &CMatrix, s_a: f64, theta: f64, phi: f64) -> f64 {
    let dir = BlochVector { theta, phi }.unit_vector();
    let mut conditional = 0.0;
    for n in [dir, [-dir[0], -dir[1], -dir[2]]] {
        let block = conditioned_block(rho, &projector(n));
        let p = block.trace().re;
        if p > 1e-12 {
            conditional += p * entropy2_scaled(&block, p);
        }
    }
    s_a - conditional
}

/// Number of polar / azimuthal grid points in the coarse search.
const CC_GRID_THETA: usize = 64;
const CC_GRID_PHI: usize = 128;

/// Classical correlation: max over projective measurements on qubit two of
/// S(rho_A) minus the measured conditional entropy of qubit one. Coarse
/// 64x128 grid, then simplex refinement; the first grid maximum in row-major
/// (theta, phi) order seeds the refinement, so results are reproducible.
pub fn classical_correlation(rho: &DensityMatrix) -> (f64, BlochVector) {
    let s_a = von_neumann_entropy(&rho.reduced(Qubit::One)).expect("valid marginal");
    let m = rho.mat();

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..CC_GRID_THETA {
        let theta = PI * i as f64 / (CC_GRID_THETA - 1) as f64;
        for j in 0..CC_GRID_PHI {
            let phi = TAU * j as f64 / CC_GRID_PHI as f64;
            let val = cc_objective(m, s_a, theta, phi);
            if val > best.0 {
                best = (val, theta, phi);
            }
        }
    }

    let steps = [PI / CC_GRID_THETA as f64, TAU / CC_GRID_PHI as f64];
    let (x, neg) = nelder_mead_min(
        |x| -cc_objective(m, s_a, x[0], x[1]),
        &[best.1, best.2],
        &steps,
        1e-8,
        500,
    );
    let (value, argmax) = if -neg > best.0 {
        (-neg, BlochVector::canonical(x[0], x[1]))
    } else {
        (best.0, BlochVector::canonical(best.1, best.2))
    };
    (value.max(0.0), argmax)
}

/// Assemble every quantifier for one state.
pub fn report(rho: &DensityMatrix) -> CorrelationReport {
    let f = fef(rho);
    let (cc, cc_argmax) = classical_correlation(rho);
    let entropy_a = von_neumann_entropy(&rho.reduced(Qubit::One)).expect("valid marginal");
    let entropy_b = von_neumann_entropy(&rho.reduced(Qubit::Two)).expect("valid marginal");
    let entropy_ab = von_neumann_entropy(rho.mat()).expect("valid state");
    CorrelationReport {
        concurrence: concurrence(rho),
        fef: f,
        tf: (2.0 * f + 1.0) / 3.0,
        entropy_a,
        entropy_b,
        entropy_ab,
        mutual_info: entropy_a + entropy_b - entropy_ab,
        cc,
        cc_argmax,
    }
}
