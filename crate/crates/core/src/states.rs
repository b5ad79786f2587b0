//! Bell-diagonal and z-aligned X states in the Pauli parameterization
//!
//! ρ = ¼ (I⊗I + r σ3⊗I + s I⊗σ3 + Σ_k c_k σ_k⊗σ_k)
//!
//! In the computational basis this is
//!
//! ```text
//!     | 1+r+s+c3     0          0        c1-c2   |
//! ¼ · |   0       1+r-s-c3    c1+c2       0      |
//!     |   0        c1+c2    1-r+s-c3      0      |
//!     | c1-c2        0          0      1-r-s+c3  |
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Spectrum, NEGATIVITY_TOL};

/// Off-X entries and transverse Bloch components must vanish to this level.
pub const X_SHAPE_TOL: f64 = 1e-10;

/// Five real parameters of a two-qubit X state with z-aligned local Bloch vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateParams {
    r: f64,
    s: f64,
    c: [f64; 3],
}

/// Correlation coefficients of a Bell-diagonal state (the `r = s = 0` subfamily).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagonalParams {
    c: [f64; 3],
}

/// The four eigenvalues, in block order: the {|00⟩,|11⟩} pair then the {|01⟩,|10⟩} pair.
fn block_eigenvalues(r: f64, s: f64, c: [f64; 3]) -> [f64; 4] {
    let outer = (r + s).hypot(c[0] - c[1]);
    let inner = (r - s).hypot(c[0] + c[1]);
    [
        0.25 * (1.0 + c[2] + outer),
        0.25 * (1.0 + c[2] - outer),
        0.25 * (1.0 - c[2] + inner),
        0.25 * (1.0 - c[2] - inner),
    ]
}

impl XStateParams {
    /// Validates physicality: every eigenvalue must lie in `[-1e-10, 1]`.
    pub fn new(r: f64, s: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let all = [r, s, c1, c2, c3];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Unphysical(format!(
                "non-finite parameter in {all:?}"
            )));
        }
        let c = [c1, c2, c3];
        for (i, lambda) in block_eigenvalues(r, s, c).into_iter().enumerate() {
            if !(-NEGATIVITY_TOL..=1.0 + NEGATIVITY_TOL).contains(&lambda) {
                return Err(Error::Unphysical(format!(
                    "(r, s, c1, c2, c3) = ({r}, {s}, {c1}, {c2}, {c3}) gives eigenvalue {i} = {lambda}"
                )));
            }
        }
        Ok(Self { r, s, c })
    }

    pub fn zero() -> Self {
        Self {
            r: 0.0,
            s: 0.0,
            c: [0.0; 3],
        }
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    #[inline]
    pub fn s(&self) -> f64 {
        self.s
    }

    #[inline]
    pub fn c(&self) -> [f64; 3] {
        self.c
    }

    /// `[r, s, c1, c2, c3]`
    pub fn to_array(&self) -> [f64; 5] {
        [self.r, self.s, self.c[0], self.c[1], self.c[2]]
    }

    pub fn is_bell_diagonal(&self) -> bool {
        self.r == 0.0 && self.s == 0.0
    }

    pub fn as_bell_diagonal(&self) -> Option<BellDiagonalParams> {
        self.is_bell_diagonal()
            .then_some(BellDiagonalParams { c: self.c })
    }

    /// Largest per-parameter absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_density_matrix(&self) -> ComplexMatrix {
        let (r, s, [c1, c2, c3]) = (self.r, self.s, self.c);
        let mut m = ComplexMatrix::zeros(4).expect("4x4 is supported");
        let re = |x: f64| Complex64::new(0.25 * x, 0.0);
        m.set(0, 0, re(1.0 + r + s + c3));
        m.set(1, 1, re(1.0 + r - s - c3));
        m.set(2, 2, re(1.0 - r + s - c3));
        m.set(3, 3, re(1.0 - r - s + c3));
        m.set(0, 3, re(c1 - c2));
        m.set(3, 0, re(c1 - c2));
        m.set(1, 2, re(c1 + c2));
        m.set(2, 1, re(c1 + c2));
        m
    }

    /// Inverse Pauli-basis projection of an X-shaped density matrix.
    pub fn from_density_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::Shape(format!("expected 4x4, got {0}x{0}", m.dim())));
        }
        for i in 0..4 {
            for j in 0..4 {
                let on_x = i == j || i + j == 3;
                if !on_x && m.get(i, j).norm() > X_SHAPE_TOL {
                    return Err(Error::NotXState(format!(
                        "entry ({i},{j}) = {} lies off the diagonal and anti-diagonal",
                        m.get(i, j)
                    )));
                }
            }
        }
        let herm = m.hermiticity_error();
        if herm > X_SHAPE_TOL {
            return Err(Error::NotHermitian(herm));
        }
        // σ1⊗σ1 and σ2⊗σ2 give a real anti-diagonal; an imaginary part means σ1⊗σ2 terms
        for (i, j) in [(0, 3), (1, 2)] {
            if m.get(i, j).im.abs() > X_SHAPE_TOL {
                return Err(Error::NotXState(format!(
                    "anti-diagonal entry ({i},{j}) = {} is not real",
                    m.get(i, j)
                )));
            }
        }
        // transverse local Bloch terms (σ1,2 ⊗ I, I ⊗ σ1,2) only touch off-X entries
        let trace = m.trace().re;
        if (trace - 1.0).abs() > crate::linalg::TRACE_TOL {
            return Err(Error::TraceNotUnit(trace));
        }

        let d: Vec<f64> = (0..4).map(|i| m.get(i, i).re).collect();
        let a03 = 0.5 * (m.get(0, 3).re + m.get(3, 0).re);
        let a12 = 0.5 * (m.get(1, 2).re + m.get(2, 1).re);
        // 4ρ00 = 1+r+s+c3, 4ρ11 = 1+r-s-c3, 4ρ22 = 1-r+s-c3, 4ρ33 = 1-r-s+c3
        let r = d[0] + d[1] - d[2] - d[3];
        let s = d[0] - d[1] + d[2] - d[3];
        let c3 = d[0] - d[1] - d[2] + d[3];
        // 4ρ03 = c1 - c2, 4ρ12 = c1 + c2
        let c1 = 2.0 * (a12 + a03);
        let c2 = 2.0 * (a12 - a03);
        Self::new(r, s, c1, c2, c3)
    }

    /// Eigenvalues from the two 2×2 blocks of the X structure.
    pub fn closed_form_eigenvalues(&self) -> Spectrum {
        Spectrum::new(block_eigenvalues(self.r, self.s, self.c).to_vec())
    }
}

impl BellDiagonalParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        XStateParams::new(0.0, 0.0, c1, c2, c3).map(|p| Self { c: p.c })
    }

    #[inline]
    pub fn c(&self) -> [f64; 3] {
        self.c
    }

    pub fn to_x_state(&self) -> XStateParams {
        XStateParams {
            r: 0.0,
            s: 0.0,
            c: self.c,
        }
    }
}

impl From<BellDiagonalParams> for XStateParams {
    fn from(p: BellDiagonalParams) -> Self {
        p.to_x_state()
    }
}

impl TryFrom<XStateParams> for BellDiagonalParams {
    type Error = Error;

    fn try_from(p: XStateParams) -> Result<Self> {
        p.as_bell_diagonal().ok_or_else(|| {
            Error::Unsupported(format!(
                "state has local Bloch components r = {}, s = {}",
                p.r, p.s
            ))
        })
    }
}
