//! Small dense complex matrices for one- and two-qubit operators.
//!
//! Only 2×2 and 4×4 square shapes can be built. Row/column index 0..4 of a
//! two-qubit operator follows the computational basis |00⟩, |01⟩, |10⟩, |11⟩
//! with qubit A as the most significant bit.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest tolerated |m − m†| entry for Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-NEGATIVITY_TOL, 0)` are clipped to zero, anything lower is rejected.
pub const NEGATIVITY_TOL: f64 = 1e-10;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 64;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which half of a two-qubit system to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Square complex matrix of side 2 or 4, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::Shape(format!(
            "unsupported dimension {dim}, expected 2 or 4"
        )))
    }
}

impl ComplexMatrix {
    /// Builds a `dim`×`dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::Shape(format!(
                "{} entries cannot fill a {dim}x{dim} matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        let mut m = Self::zeros(dim)?;
        for (i, &v) in values.iter().enumerate() {
            m.data[i * dim + i] = Complex64::new(v, 0.0);
        }
        Ok(m)
    }

    /// Pauli matrix σ_k for k = 1 (x), 2 (y), 3 (z); k = 0 gives the identity.
    pub fn pauli(k: usize) -> Self {
        let data = match k {
            0 => vec![ONE, ZERO, ZERO, ONE],
            1 => vec![ZERO, ONE, ONE, ZERO],
            2 => vec![ZERO, -I, I, ZERO],
            3 => vec![ONE, ZERO, ZERO, -ONE],
            _ => panic!("Pauli index {k} out of range 0..=3"),
        };
        Self { dim: 2, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() < tol
    }

    /// `k · self · k†`
    pub fn conjugated_by(&self, k: &Self) -> Self {
        &(k * self) * &k.adjoint()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        ComplexMatrix { dim: n, data }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`. The result must itself be 2×2 or 4×4.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    check_dim(n)?;
    let mut out = ComplexMatrix::zeros(n)?;
    for i in 0..na {
        for j in 0..na {
            let aij = a.get(i, j);
            for k in 0..nb {
                for l in 0..nb {
                    out.set(i * nb + k, j * nb + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Reduces a two-qubit operator to the kept qubit.
pub fn partial_trace(m: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if m.dim != 4 {
        return Err(Error::Shape(format!(
            "partial trace needs a 4x4 operator, got {0}x{0}",
            m.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(2)?;
    for i in 0..2 {
        for j in 0..2 {
            let v = match keep {
                // index = 2a + b
                Subsystem::A => m.get(2 * i, 2 * j) + m.get(2 * i + 1, 2 * j + 1),
                Subsystem::B => m.get(i, j) + m.get(2 + i, 2 + j),
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Real eigenvalues of a Hermitian matrix, sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Wraps the given values, sorting them descending.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("spectrum is never empty")
    }

    /// Checks the spectrum as a set of probabilities: rejects anything below
    /// `-NEGATIVITY_TOL` and clips the remaining negatives to zero. No renormalization.
    pub fn into_probabilities(self) -> Result<Self> {
        let mut values = self.values;
        for v in values.iter_mut() {
            if *v < -NEGATIVITY_TOL {
                return Err(Error::NegativeEigenvalue(*v));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(Self { values })
    }

    /// Shannon entropy of the spectrum in bits, with 0·log₂0 = 0.
    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(&self.values)
    }
}

/// −Σ λ log₂ λ over the positive entries.
pub fn entropy_bits(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Eigenvalues of a Hermitian 2×2 or 4×4 matrix.
///
/// 2×2 input uses the closed form; 4×4 uses a cyclic complex Jacobi sweep.
/// Both are deterministic for a fixed input.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Spectrum> {
    let err = m.hermiticity_error();
    if err.is_nan() || err >= HERMITIAN_TOL {
        return Err(Error::NotHermitian(err));
    }
    let values = if m.dim == 2 {
        let a = m.get(0, 0).re;
        let d = m.get(1, 1).re;
        let b = m.get(0, 1);
        let mean = 0.5 * (a + d);
        let radius = (0.5 * (a - d)).hypot(b.norm());
        vec![mean + radius, mean - radius]
    } else {
        jacobi_eigenvalues(m)
    };
    Ok(Spectrum::new(values))
}

fn jacobi_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim;
    // symmetrize so the iteration sees an exactly Hermitian matrix
    let mut a = m.clone();
    for i in 0..n {
        a.data[i * n + i] = Complex64::new(a.get(i, i).re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (m.get(i, j) + m.get(j, i).conj());
            a.set(i, j, avg);
            a.set(j, i, avg.conj());
        }
    }

    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).norm_sqr())
            .sum();
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, p, q);
            }
        }
    }
    (0..n).map(|i| a.get(i, i).re).collect()
}

/// Zeroes the (p, q) element with the unitary U = D·G, where D removes the
/// phase of a_pq and G is a real Givens rotation.
fn jacobi_rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim;
    let apq = a.get(p, q);
    let modulus = apq.norm();
    if modulus == 0.0 {
        return;
    }
    let phase = apq / modulus;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let theta = 0.5 * (2.0 * modulus).atan2(aqq - app);
    let (s, c) = theta.sin_cos();

    // U columns: u_p = c e_p + (−s)·conj(phase) e_q, u_q = s e_p + c·conj(phase) e_q
    let up_q = -s * phase.conj();
    let uq_q = c * phase.conj();

    // A ← A U (columns p, q)
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c + akq * up_q);
        a.set(k, q, akp * s + akq * uq_q);
    }
    // A ← U† A (rows p, q)
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c + aqk * up_q.conj());
        a.set(q, k, apk * s + aqk * uq_q.conj());
    }
    a.set(p, q, ZERO);
    a.set(q, p, ZERO);
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
}

/// Validated probability spectrum of a density matrix.
pub fn density_spectrum(m: &ComplexMatrix) -> Result<Spectrum> {
    let trace = m.trace();
    if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
        return Err(Error::TraceNotUnit(trace.re));
    }
    hermitian_eigenvalues(m)?.into_probabilities()
}

/// Von Neumann entropy S(ρ) = −Tr ρ log₂ ρ in bits.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    Ok(density_spectrum(m)?.entropy_bits())
}
