//! Dense complex matrices for two-qubit operator algebra.
//!
//! Everything here is sized for registers of at most three qubits (8x8),
//! stored row-major. Operations are pure and allocate their results.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Largest supported square dimension (three qubits).
pub const MAX_DIM: usize = 8;

/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
const JACOBI_TOL: f64 = 1e-13;
/// Maximum number of Jacobi sweeps before giving up.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Which qubit of a two-qubit register a local operator addresses.
///
/// Qubit one is the slow (left) tensor factor; the computational basis is
/// ordered |00>, |01>, |10>, |11>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    One,
    Two,
}

/// Dense complex matrix, row-major, at most 8x8.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Hermitian eigendecomposition with eigenvalues sorted descending and
/// orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct EigDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1 && rows <= MAX_DIM && cols <= MAX_DIM);
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major slice of entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
            return Err(CoreError::Oversize(rows, cols));
        }
        if data.len() != rows * cols {
            return Err(CoreError::DimensionMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(CoreError::NonFinite("matrix entries"));
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Square matrix with the given real numbers on the diagonal.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// 2x2 matrix from real entries, row-major.
    pub fn mat2_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        let mut m = Self::zeros(2, 2);
        m[(0, 0)] = Complex64::new(a, 0.0);
        m[(0, 1)] = Complex64::new(b, 0.0);
        m[(1, 0)] = Complex64::new(c, 0.0);
        m[(1, 1)] = Complex64::new(d, 0.0);
        m
    }

    /// Column vector from complex amplitudes.
    pub fn ket(amplitudes: &[Complex64]) -> Self {
        let mut m = Self::zeros(amplitudes.len(), 1);
        for (i, &a) in amplitudes.iter().enumerate() {
            m[(i, 0)] = a;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(CoreError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(CoreError::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o += r;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(CoreError::DimensionMismatch(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o -= r;
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> CMatrix {
        let mut out = self.clone();
        for z in out.data.iter_mut() {
            *z *= factor;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        let mut out = self.clone();
        for z in out.data.iter_mut() {
            *z = z.conj();
        }
        out
    }

    /// Kronecker product; `self` supplies the slow (first-qubit) indices.
    pub fn kron(&self, rhs: &CMatrix) -> Result<CMatrix> {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(CoreError::Oversize(rows, cols));
        }
        let mut out = CMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute value over all entries.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm deviation from the conjugate transpose.
    pub fn herm_deviation(&self) -> f64 {
        self.sub(&self.dagger()).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
    }

    /// Reduce a two-qubit (4x4) matrix to the retained qubit.
    pub fn partial_trace(&self, keep: Qubit) -> Result<CMatrix> {
        if self.rows != 4 || self.cols != 4 {
            return Err(CoreError::DimensionMismatch(format!(
                "partial trace expects a 4x4 matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let mut out = CMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..2 {
                    let (r, c) = match keep {
                        Qubit::One => (2 * a + t, 2 * b + t),
                        Qubit::Two => (2 * t + a, 2 * t + b),
                    };
                    acc += self[(r, c)];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(out)
    }

    fn off_diagonal_frobenius(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Eigenvalues come back sorted descending with matching
    /// eigenvector columns.
    pub fn herm_eig(&self) -> Result<EigDecomp> {
        if self.rows != self.cols {
            return Err(CoreError::DimensionMismatch(format!(
                "eigendecomposition expects a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let dev = self.herm_deviation();
        if dev > 1e-10 {
            return Err(CoreError::NotHermitian(dev));
        }
        let n = self.rows;
        // Work on the symmetrized matrix so round-off asymmetry cannot leak
        // into the rotations.
        let mut a = self.add(&self.dagger())?.scaled(0.5);
        let mut v = CMatrix::identity(n);

        let mut converged = a.off_diagonal_frobenius() <= JACOBI_TOL;
        let mut sweeps = 0;
        while !converged {
            if sweeps == JACOBI_MAX_SWEEPS {
                return Err(CoreError::NoConvergence(JACOBI_MAX_SWEEPS));
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let b = apq.norm();
                    if b == 0.0 {
                        continue;
                    }
                    let alpha = a[(p, p)].re;
                    let beta = a[(q, q)].re;
                    let phase = apq / b;
                    // Zero the (p,q) entry: tan(2t) = 2b / (alpha - beta).
                    let theta = 0.5 * (2.0 * b).atan2(alpha - beta);
                    let (s, c) = theta.sin_cos();
                    let mut g = CMatrix::identity(n);
                    g[(p, p)] = Complex64::new(c, 0.0);
                    g[(p, q)] = Complex64::new(-s, 0.0);
                    g[(q, p)] = phase.conj() * s;
                    g[(q, q)] = phase.conj() * c;
                    a = g.dagger().mul(&a)?.mul(&g)?;
                    v = v.mul(&g)?;
                }
            }
            sweeps += 1;
            converged = a.off_diagonal_frobenius() <= JACOBI_TOL;
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a[(j, j)]
                .re
                .partial_cmp(&a[(i, i)].re)
                .expect("eigenvalues are finite")
        });
        let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
        let mut eigenvectors = CMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            for r in 0..n {
                eigenvectors[(r, dst)] = v[(r, src)];
            }
        }
        Ok(EigDecomp {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Hermitian PSD square root via eigendecomposition. Eigenvalues in
    /// [-1e-10, 0) are clamped to zero; anything below that is an error.
    pub fn psd_sqrt(&self) -> Result<CMatrix> {
        let eig = self.herm_eig()?;
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(CoreError::NotPositive(min));
        }
        let roots: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&l| if l < 0.0 { 0.0 } else { l.sqrt() })
            .collect();
        let d = CMatrix::from_real_diag(&roots);
        eig.eigenvectors.mul(&d)?.mul(&eig.eigenvectors.dagger())
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

pub fn pauli_x() -> CMatrix {
    CMatrix::mat2_real(0.0, 1.0, 1.0, 0.0)
}

pub fn pauli_y() -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = Complex64::new(0.0, -1.0);
    m[(1, 0)] = Complex64::new(0.0, 1.0);
    m
}

pub fn pauli_z() -> CMatrix {
    CMatrix::mat2_real(1.0, 0.0, 0.0, -1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn assert_mat_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.cols(), b.cols());
        let dev = a.sub(b).unwrap().max_abs();
        assert!(dev <= tol, "matrices differ by {dev:.3e} (tol {tol:.1e})");
    }

    fn adc_w0(d: f64) -> CMatrix {
        CMatrix::mat2_real(1.0, 0.0, 0.0, (1.0 - d).sqrt())
    }

    /// The decohered Bell state with damping d on the second qubit, written
    /// out entrywise.
    fn damped_bell(d: f64) -> CMatrix {
        let w = (1.0 - d).sqrt() / 2.0;
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = Complex64::new(0.5, 0.0);
        m[(0, 3)] = Complex64::new(w, 0.0);
        m[(3, 0)] = Complex64::new(w, 0.0);
        m[(2, 2)] = Complex64::new(d / 2.0, 0.0);
        m[(3, 3)] = Complex64::new((1.0 - d) / 2.0, 0.0);
        m
    }

    #[test]
    fn mul_identity_and_pauli() {
        let i2 = CMatrix::identity(2);
        assert_mat_close(&i2.mul(&i2).unwrap(), &i2, 0.0);
        let sy = pauli_y();
        assert_mat_close(&sy.mul(&sy).unwrap(), &i2, 0.0);
    }

    #[test]
    fn mul_damping_kraus() {
        let w0 = adc_w0(0.5);
        let prod = w0.mul(&w0.dagger()).unwrap();
        assert_mat_close(&prod, &CMatrix::from_real_diag(&[1.0, 0.5]), 1e-15);
    }

    #[test]
    fn mul_dimension_mismatch() {
        let a = CMatrix::zeros(2, 2);
        let b = CMatrix::zeros(4, 4);
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn dagger_examples() {
        let i2 = CMatrix::identity(2);
        assert_mat_close(&i2.dagger(), &i2, 0.0);
        let sy = pauli_y();
        assert_mat_close(&sy.dagger(), &sy, 0.0);
        // Real upper-triangular Kraus element transposes cleanly.
        let d: f64 = 0.3;
        let w1 = CMatrix::mat2_real(0.0, d.sqrt(), 0.0, 0.0);
        let expected = CMatrix::mat2_real(0.0, 0.0, d.sqrt(), 0.0);
        assert_mat_close(&w1.dagger(), &expected, 0.0);
    }

    #[test]
    fn kron_examples() {
        let i2 = CMatrix::identity(2);
        assert_mat_close(&i2.kron(&i2).unwrap(), &CMatrix::identity(4), 0.0);

        let d = 0.37;
        let lifted = i2.kron(&adc_w0(d)).unwrap();
        let sq = (1.0 - d).sqrt();
        assert_mat_close(&lifted, &CMatrix::from_real_diag(&[1.0, sq, 1.0, sq]), 0.0);

        let p0 = CMatrix::mat2_real(1.0, 0.0, 0.0, 0.0);
        let p1 = CMatrix::mat2_real(0.0, 0.0, 0.0, 1.0);
        let out = p0.kron(&p1).unwrap();
        let mut expected = CMatrix::zeros(4, 4);
        expected[(1, 1)] = Complex64::new(1.0, 0.0);
        assert_mat_close(&out, &expected, 0.0);
    }

    #[test]
    fn kron_oversize() {
        let a = CMatrix::identity(4);
        let b = CMatrix::identity(4);
        assert!(a.kron(&b).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        // Maximally entangled state has maximally mixed marginals.
        let mut bell = CMatrix::zeros(4, 4);
        for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell[(r, c)] = Complex64::new(0.5, 0.0);
        }
        let half_i2 = CMatrix::identity(2).scaled(0.5);
        assert_mat_close(&bell.partial_trace(Qubit::One).unwrap(), &half_i2, 0.0);
        assert_mat_close(&bell.partial_trace(Qubit::Two).unwrap(), &half_i2, 0.0);

        let mut p01 = CMatrix::zeros(4, 4);
        p01[(1, 1)] = Complex64::new(1.0, 0.0);
        let p1 = CMatrix::mat2_real(0.0, 0.0, 0.0, 1.0);
        assert_mat_close(&p01.partial_trace(Qubit::Two).unwrap(), &p1, 0.0);

        // Fully damped Bell state reduces to |0><0| on the second qubit.
        let p0 = CMatrix::mat2_real(1.0, 0.0, 0.0, 0.0);
        assert_mat_close(&damped_bell(1.0).partial_trace(Qubit::Two).unwrap(), &p0, 0.0);
    }

    #[test]
    fn partial_trace_wrong_size() {
        assert!(CMatrix::identity(2).partial_trace(Qubit::One).is_err());
    }

    #[test]
    fn herm_eig_diagonal_and_pauli() {
        let eig = CMatrix::from_real_diag(&[3.0, 1.0, 2.0, 0.0]).herm_eig().unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, 2.0, 1.0, 0.0]);

        let eig = pauli_x().herm_eig().unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(m.herm_eig(), Err(CoreError::NotHermitian(_))));
    }

    /// Determinant by Gaussian elimination with partial pivoting; kept free
    /// of the Jacobi code path so it can act as an independent oracle.
    fn det(m: &CMatrix) -> Complex64 {
        let n = m.rows();
        let mut a = m.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[(i, col)]
                        .norm()
                        .partial_cmp(&a[(j, col)].norm())
                        .unwrap()
                })
                .unwrap();
            if a[(pivot, col)].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    let tmp = a[(col, j)];
                    a[(col, j)] = a[(pivot, j)];
                    a[(pivot, j)] = tmp;
                }
                det = -det;
            }
            det *= a[(col, col)];
            for i in (col + 1)..n {
                let factor = a[(i, col)] / a[(col, col)];
                for j in col..n {
                    let sub = factor * a[(col, j)];
                    a[(i, j)] -= sub;
                }
            }
        }
        det
    }

    fn char_poly_at(m: &CMatrix, lambda: f64) -> f64 {
        let shifted = m
            .sub(&CMatrix::identity(m.rows()).scaled(lambda))
            .unwrap();
        det(&shifted).re
    }

    #[test]
    fn herm_eig_matches_char_poly_roots() {
        // Both qubits damped at d = 0.5. The antidiagonal block structure
        // gives roots (3/4 +- sqrt(1/2))/2 from the outer block and a double
        // root 1/8 from the inner block.
        let d: f64 = 0.5;
        let mut rho = CMatrix::zeros(4, 4);
        rho[(0, 0)] = Complex64::new((1.0 + d * d) / 2.0, 0.0);
        rho[(1, 1)] = Complex64::new(d * (1.0 - d) / 2.0, 0.0);
        rho[(2, 2)] = Complex64::new(d * (1.0 - d) / 2.0, 0.0);
        rho[(3, 3)] = Complex64::new((1.0 - d) * (1.0 - d) / 2.0, 0.0);
        rho[(0, 3)] = Complex64::new((1.0 - d) / 2.0, 0.0);
        rho[(3, 0)] = Complex64::new((1.0 - d) / 2.0, 0.0);

        // Bisect the two simple roots out of the characteristic polynomial.
        let mut roots = Vec::new();
        let samples = 4000;
        let (lo, hi) = (-0.05, 1.05);
        let mut prev = char_poly_at(&rho, lo);
        for i in 1..=samples {
            let x = lo + (hi - lo) * i as f64 / samples as f64;
            let val = char_poly_at(&rho, x);
            if prev.signum() != val.signum() && prev != 0.0 {
                let (mut a, mut b) = (x - (hi - lo) / samples as f64, x);
                for _ in 0..100 {
                    let mid = 0.5 * (a + b);
                    if char_poly_at(&rho, mid).signum() == char_poly_at(&rho, a).signum() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            prev = val;
        }
        assert_eq!(roots.len(), 2, "expected two simple roots");

        let blk = 0.125; // double root of the inner block
        let mut expected = [roots[1], blk, blk, roots[0]];
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());

        let eig = rho.herm_eig().unwrap();
        for (got, want) in eig.eigenvalues.iter().zip(expected.iter()) {
            assert!(
                (got - want).abs() < 1e-10,
                "eigenvalue {got} differs from oracle root {want}"
            );
        }
        // Analytic cross-check of the simple roots.
        let s = (0.5f64).sqrt();
        assert!((eig.eigenvalues[0] - (0.75 + s) / 2.0).abs() < 1e-12);
        assert!((eig.eigenvalues[3] - (0.75 - s) / 2.0).abs() < 1e-12);
    }

    fn random_hermitian(rng: &mut ChaCha12Rng, n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m.add(&m.dagger()).unwrap().scaled(0.5)
    }

    #[test]
    fn herm_eig_reconstruction_and_orthonormality() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..100 {
            let h = random_hermitian(&mut rng, 4);
            let eig = h.herm_eig().unwrap();
            let v = &eig.eigenvectors;

            let gram = v.dagger().mul(v).unwrap();
            assert_mat_close(&gram, &CMatrix::identity(4), 1e-10);

            let d = CMatrix::from_real_diag(&eig.eigenvalues);
            let rebuilt = v.mul(&d).unwrap().mul(&v.dagger()).unwrap();
            assert_mat_close(&rebuilt, &h, 1e-9);

            // Residual per eigenpair.
            for k in 0..4 {
                for r in 0..4 {
                    let hv: Complex64 = (0..4).map(|c| h[(r, c)] * v[(c, k)]).sum();
                    let lv = v[(r, k)] * eig.eigenvalues[k];
                    assert!((hv - lv).norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn psd_sqrt_examples() {
        let i4 = CMatrix::identity(4);
        assert_mat_close(&i4.psd_sqrt().unwrap(), &i4, 1e-12);

        let m = CMatrix::from_real_diag(&[4.0, 1.0, 0.0, 0.0]);
        assert_mat_close(
            &m.psd_sqrt().unwrap(),
            &CMatrix::from_real_diag(&[2.0, 1.0, 0.0, 0.0]),
            1e-12,
        );

        let rho = damped_bell(0.3);
        let s = rho.psd_sqrt().unwrap();
        assert_mat_close(&s.mul(&s).unwrap(), &rho, 1e-9);
    }

    #[test]
    fn psd_sqrt_rejects_negative() {
        let m = CMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(m.psd_sqrt(), Err(CoreError::NotPositive(_))));
    }

    #[test]
    fn psd_sqrt_idempotent_on_random_psd() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_hermitian(&mut rng, 4);
            let psd = g.mul(&g.dagger()).unwrap().scaled(0.25);
            let s = psd.psd_sqrt().unwrap();
            assert_mat_close(&s.mul(&s).unwrap(), &psd, 1e-9);
        }
    }

    #[test]
    fn kron_trace_multiplicative() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_hermitian(&mut rng, 2);
            let b = random_hermitian(&mut rng, 2);
            let lhs = a.kron(&b).unwrap().trace();
            let rhs = a.trace() * b.trace();
            assert!((lhs - rhs).norm() <= 1e-12);
        }
    }
}
