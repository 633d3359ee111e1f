//! Pauli basis for one and two qubits, and real decompositions of traceless
//! Hermitian matrices in that basis.
//!
//! Conventions: σ_z|0⟩ = +|0⟩; the two-qubit label order is
//! `|00⟩, |01⟩, |10⟩, |11⟩` with the first factor as the control qubit.
//! Single-qubit coefficients are the vector ω⃗ with `H = ½ ω⃗·σ⃗`;
//! two-qubit coefficients multiply the Pauli products directly,
//! `H = Σ_P c_P P`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub fn sigma_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Mat2 {
    Mat2::new(ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO)
}

pub fn sigma_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

/// Kronecker product of two 2×2 matrices, first factor = control qubit.
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Labels of the 15 traceless two-qubit Pauli products, in the fixed order
/// used by [`PauliDecomposition::Two`].
pub const TWO_QUBIT_LABELS: [&str; 15] = [
    "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ",
];

pub const SINGLE_QUBIT_LABELS: [&str; 3] = ["X", "Y", "Z"];

fn single_pauli(i: usize) -> Mat2 {
    match i {
        0 => identity2(),
        1 => sigma_x(),
        2 => sigma_y(),
        _ => sigma_z(),
    }
}

/// The two-qubit Pauli product with index `p ∈ [0, 15)` in label order.
pub fn two_qubit_pauli(p: usize) -> Mat4 {
    // label order enumerates (a, b) over {I,X,Y,Z}² skipping (I, I)
    let (a, b) = ((p + 1) / 4, (p + 1) % 4);
    kron2(&single_pauli(a), &single_pauli(b))
}

/// Real coefficients of a traceless Hermitian operator in the Pauli basis.
#[derive(Debug, Clone, PartialEq)]
pub enum PauliDecomposition {
    /// `H = ½ (ω_x σ_x + ω_y σ_y + ω_z σ_z)`.
    Single { omega: [f64; 3] },
    /// `H = Σ_p coeffs[p] · P_p` over [`TWO_QUBIT_LABELS`].
    Two { coeffs: [f64; 15] },
}

impl PauliDecomposition {
    pub fn zero(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(PauliDecomposition::Single { omega: [0.0; 3] }),
            4 => Ok(PauliDecomposition::Two { coeffs: [0.0; 15] }),
            _ => Err(Error::InvalidParameter(format!("unsupported dimension {dim}"))),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PauliDecomposition::Single { .. } => 2,
            PauliDecomposition::Two { .. } => 4,
        }
    }

    /// Projects a 2×2 Hermitian matrix: `ω_i = Re tr(σ_i H)`.
    pub fn from_matrix2(h: &Mat2) -> Self {
        let omega = [
            (sigma_x() * h).trace().re,
            (sigma_y() * h).trace().re,
            (sigma_z() * h).trace().re,
        ];
        PauliDecomposition::Single { omega }
    }

    /// Projects a 4×4 Hermitian matrix: `c_p = Re tr(P_p H) / 4`.
    pub fn from_matrix4(h: &Mat4) -> Self {
        let mut coeffs = [0.0; 15];
        for (p, c) in coeffs.iter_mut().enumerate() {
            *c = (two_qubit_pauli(p) * h).trace().re / 4.0;
        }
        PauliDecomposition::Two { coeffs }
    }

    pub fn matrix2(&self) -> Result<Mat2> {
        match self {
            PauliDecomposition::Single { omega } => {
                let mut h = sigma_x() * C64::new(0.5 * omega[0], 0.0);
                h += sigma_y() * C64::new(0.5 * omega[1], 0.0);
                h += sigma_z() * C64::new(0.5 * omega[2], 0.0);
                Ok(h)
            }
            _ => Err(Error::DimensionMismatch { left: 4, right: 2 }),
        }
    }

    pub fn matrix4(&self) -> Result<Mat4> {
        match self {
            PauliDecomposition::Two { coeffs } => {
                let mut h = Mat4::zeros();
                for (p, c) in coeffs.iter().enumerate() {
                    h += two_qubit_pauli(p) * C64::new(*c, 0.0);
                }
                Ok(h)
            }
            _ => Err(Error::DimensionMismatch { left: 2, right: 4 }),
        }
    }

    /// Largest absolute coefficient, useful as a trajectory summary.
    pub fn max_abs(&self) -> f64 {
        match self {
            PauliDecomposition::Single { omega } => {
                omega.iter().fold(0.0f64, |m, c| m.max(c.abs()))
            }
            PauliDecomposition::Two { coeffs } => {
                coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
            }
        }
    }
}

pub fn hermiticity_defect2(m: &Mat2) -> f64 {
    let d = m - m.adjoint();
    d.iter().fold(0.0f64, |acc, c| acc.max(c.norm()))
}

pub fn hermiticity_defect4(m: &Mat4) -> f64 {
    let d = m - m.adjoint();
    d.iter().fold(0.0f64, |acc, c| acc.max(c.norm()))
}
