//! Dense complex matrices sized for one and two qubits.
//!
//! [`ComplexMatrix`] stores at most 4x4 entries inline so that it is `Copy`
//! and never allocates; the propagators evaluate it millions of times.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 4;

/// Inputs whose anti-Hermitian part exceeds this are rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerances a matrix must meet to be accepted as a density matrix.
pub const DENSITY_TRACE_TOL: f64 = 1e-10;
pub const DENSITY_EIGEN_TOL: f64 = 1e-8;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major square complex matrix of dimension 1..=4.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "unsupported matrix dimension {dim}"
        );
        ComplexMatrix {
            dim,
            data: [ZERO; MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "wrong number of entries");
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = entries[i * dim + j];
            }
        }
        m
    }

    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Self {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(dim, &c)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)];
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = *self;
        for i in 0..self.dim * self.dim {
            out.data[i] *= factor;
        }
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `{self, other}`
    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Largest entry-wise modulus of `self - self^dagger`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(M + M^dagger) / 2`, which is exactly Hermitian.
    pub fn hermitize(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            out[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in i + 1..self.dim {
                let v = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// The `dim * dim` used entries in row-major order.
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ComplexMatrix {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        for i in 0..self.dim * self.dim {
            self.data[i] += rhs.data[i];
        }
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in subtraction");
        for i in 0..self.dim * self.dim {
            self.data[i] -= rhs.data[i];
        }
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Mul<ComplexMatrix> for f64 {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        rhs.scale_real(self)
    }
}

impl Mul<ComplexMatrix> for Complex64 {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        rhs.scale(self)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[ONE, ZERO, ZERO, -ONE])
}

/// `|0><1|`, i.e. `(sigma_x + i sigma_y) / 2`.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[ZERO, ONE, ZERO, ZERO])
}

/// `|1><0|`, i.e. `(sigma_x - i sigma_y) / 2`.
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[ZERO, ZERO, ONE, ZERO])
}

/// Pauli basis `(id, sigma_x, sigma_y, sigma_z)` indexed 0..4.
pub fn pauli(index: usize) -> ComplexMatrix {
    match index {
        0 => ComplexMatrix::identity(2),
        1 => sigma_x(),
        2 => sigma_y(),
        3 => sigma_z(),
        _ => panic!("Pauli index {index} out of range"),
    }
}

/// Kronecker product `a ⊗ b`. The result dimension must not exceed 4.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Transpose on the second qubit of a two-qubit operator.
pub fn partial_transpose_second(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    partial_transpose(m, false)
}

/// Transpose on the first qubit of a two-qubit operator.
pub fn partial_transpose_first(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    partial_transpose(m, true)
}

fn partial_transpose(m: &ComplexMatrix, first: bool) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(4);
    // row = 2*i + k, column = 2*j + l with (i, j) on the first qubit.
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let (si, sj, sk, sl) = if first { (j, i, k, l) } else { (i, j, l, k) };
                    out[(2 * i + k, 2 * j + l)] = m[(2 * si + sk, 2 * sj + sl)];
                }
            }
        }
    }
    Ok(out)
}

/// Ascending eigenvalues of a Hermitian matrix.
///
/// The input is symmetrized before diagonalisation; anything further than
/// [`HERMITIAN_TOL`] from Hermitian is rejected. The `n x n` complex problem is
/// embedded as the `2n x 2n` real-symmetric matrix `[[Re, -Im], [Im, Re]]`,
/// whose spectrum is that of the input with every eigenvalue doubled, and
/// diagonalised with cyclic Jacobi rotations.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    let h = m.hermitize();
    let n = h.dim();
    let size = 2 * n;
    let mut a = [[0.0f64; 2 * MAX_DIM]; 2 * MAX_DIM];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    jacobi_symmetric(&mut a, size)?;
    let mut doubled: Vec<f64> = (0..size).map(|i| a[i][i]).collect();
    doubled.sort_by(f64::total_cmp);
    Ok(doubled
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

/// Cyclic Jacobi on the leading `size x size` block; leaves the eigenvalues on
/// the diagonal.
fn jacobi_symmetric(a: &mut [[f64; 2 * MAX_DIM]; 2 * MAX_DIM], size: usize) -> Result<()> {
    let off_norm = |a: &[[f64; 2 * MAX_DIM]; 2 * MAX_DIM]| {
        let mut s = 0.0;
        for (i, row) in a.iter().enumerate().take(size) {
            for (j, x) in row.iter().enumerate().take(size) {
                if i != j {
                    s += x * x;
                }
            }
        }
        s.sqrt()
    };
    let total: f64 = a
        .iter()
        .take(size)
        .flat_map(|row| row.iter().take(size))
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    // Relative for large matrices: rounding alone leaves ~eps * ||A|| behind.
    let tol = JACOBI_OFF_TOL * total.max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(a) < tol {
            return Ok(());
        }
        for p in 0..size {
            for q in p + 1..size {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut().take(size) {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (rp, rq) = (a[p], a[q]);
                for k in 0..size {
                    a[p][k] = c * rp[k] - s * rq[k];
                    a[q][k] = s * rp[k] + c * rq[k];
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    let off = off_norm(a);
    if off < tol {
        Ok(())
    } else {
        Err(Error::EigenNotConverged { off_norm: off })
    }
}

/// Checks trace and positivity; returns the ascending spectrum on success.
pub fn check_density_matrix(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let eig = hermitian_eigenvalues(m)?;
    let trace_error = (m.trace() - ONE).norm();
    let min_eigenvalue = eig[0];
    if trace_error > DENSITY_TRACE_TOL || min_eigenvalue < -DENSITY_EIGEN_TOL {
        return Err(Error::NotDensityMatrix {
            trace_error,
            min_eigenvalue,
        });
    }
    Ok(eig)
}
