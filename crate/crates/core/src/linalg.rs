//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian ones.
//!
//! Everything downstream works with matrices of dimension a few hundred at
//! most, so row-major `Vec<Complex64>` storage and O(n^3) sweeps are plenty.

use num_complex::Complex;

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Tolerance on structural checks (Hermiticity of inputs, unitarity).
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius threshold for the eigensolver, relative to ||m||.
const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
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

    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(ComplexMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(ComplexMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        let data = self.data.iter().map(|a| a * factor).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry-wise deviation from `rhs`.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise deviation from the own adjoint; 0 for Hermitian.
    pub fn hermitian_asymmetry(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// (A + A^dag) / 2; projects away roundoff-level asymmetry.
    pub fn symmetrized(&self) -> ComplexMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in i..self.cols {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)].conj());
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product, row-major blocks of `a` scaled copies of `b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i1 in 0..a.rows {
        for j1 in 0..a.cols {
            let aij = a[(i1, j1)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i2 in 0..b.rows {
                for j2 in 0..b.cols {
                    out[(i1 * b.rows + i2, j1 * b.cols + j2)] = aij * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Which tensor factor a partial trace keeps; ordering is system (x) environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Environment,
}

/// Traces out one tensor factor of a (dim_s * dim_e) square matrix.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let (ds, de) = dims;
    if ds == 0 || de == 0 || !m.is_square() || m.rows != ds * de {
        return Err(Error::DimensionMismatch(format!(
            "partial trace of {}x{} with factors ({}, {})",
            m.rows, m.cols, ds, de
        )));
    }
    match keep {
        Subsystem::System => {
            let mut out = ComplexMatrix::zeros(ds, ds);
            for i in 0..ds {
                for j in 0..ds {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..de {
                        acc += m[(i * de + k, j * de + k)];
                    }
                    out[(i, j)] = acc;
                }
            }
            Ok(out)
        }
        Subsystem::Environment => {
            let mut out = ComplexMatrix::zeros(de, de);
            for k in 0..de {
                for l in 0..de {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..ds {
                        acc += m[(i * de + k, i * de + l)];
                    }
                    out[(k, l)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// A square matrix validated (and symmetrized) to be Hermitian at build time.
#[derive(Clone, Debug)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows, m.cols
            )));
        }
        let asym = m.hermitian_asymmetry();
        if asym > STRUCTURE_TOL {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self(m.symmetrized()))
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diag(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

/// A square matrix validated to satisfy U * U^dag = I at build time.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "unitary matrix must be square, got {}x{}",
                m.rows, m.cols
            )));
        }
        let product = m.mul(&m.adjoint())?;
        let dev = product.max_abs_diff(&ComplexMatrix::identity(m.rows));
        if dev > STRUCTURE_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Eigensystem of a Hermitian matrix: real eigenvalues ascending, matching
/// orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds V * diag(lambda) * V^dag (used by tests and propagators).
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..n {
                    acc += v[(i, m)] * self.eigenvalues[m] * v[(j, m)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

fn offdiag_frobenius(a: &ComplexMatrix) -> f64 {
    let n = a.rows;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating a[(p, q)]; updates a and the
/// accumulated eigenvector matrix v in place.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let n = a.rows;
    let phase = apq / mag;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    // smaller-magnitude root of t^2 + 2*tau*t - 1 = 0 keeps rotations mild
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sp = s * phase;
    let spc = s * phase.conj();

    // A <- A R (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - spc * akq;
        a[(k, q)] = sp * akp + c * akq;
    }
    // A <- R^dag A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - sp * aqk;
        a[(q, k)] = spc * apk + c * aqk;
    }
    // the rotation zeroes the pair exactly in exact arithmetic; enforce it
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    // V <- V R
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - spc * vkq;
        v[(k, q)] = sp * vkp + c * vkq;
    }
}

/// Full eigensystem via cyclic complex Jacobi sweeps.
///
/// Terminates when the off-diagonal Frobenius norm drops below
/// 1e-12 * ||m||_F; errors with `NoConvergence` after 100 sweeps.
pub fn hermitian_eig(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale > 0.0 {
        let stop = JACOBI_TOL * scale;
        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if offdiag_frobenius(&a) <= stop {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged && offdiag_frobenius(&a) > stop {
            return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors[(k, dst)] = v[(k, src)];
        }
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Propagator exp(-i H t) assembled from the eigensystem of H.
pub fn unitary_from_hamiltonian(h: &HermitianMatrix, t: f64) -> Result<UnitaryMatrix> {
    let eig = hermitian_eig(h)?;
    UnitaryMatrix::new(propagator_from_eig(&eig, t))
}

/// exp(-i H t) = V diag(exp(-i lambda t)) V^dag for a precomputed eigensystem.
pub fn propagator_from_eig(eig: &EigenDecomposition, t: f64) -> ComplexMatrix {
    let n = eig.eigenvalues.len();
    let v = &eig.eigenvectors;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&lam| Complex64::from_polar(1.0, -lam * t))
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..n {
                acc += v[(i, m)] * phases[m] * v[(j, m)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    out
}
