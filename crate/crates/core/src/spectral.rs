//! Spectrally parameterized evolution operators.
//!
//! `U(s)` is built from an instantaneous orthonormal basis with a free
//! eigenphase on one branch: `U₁ = P₊ + e^{iφ} P₋` for a single qubit, and a
//! block-diagonal pair of such operators for two qubits (the first tensor
//! factor selects the block).

use nalgebra::{Vector2, Vector4};

use crate::error::{Error, Result};
use crate::pauli::{C64, Mat2, Mat4};
use crate::schedule::Schedule;

pub type State2 = Vector2<C64>;
pub type State4 = Vector4<C64>;

const TAU_2PI: f64 = 2.0 * std::f64::consts::PI;

fn is_multiple_of_2pi(x: f64) -> bool {
    let r = x.rem_euclid(TAU_2PI);
    r.min(TAU_2PI - r) < 1e-12
}

/// Schedules and total time defining the single-qubit operator `U₁(t)`.
///
/// `theta` and `phi` place the instantaneous basis on the Bloch sphere;
/// `varphi` is the eigenphase of the `|n₋⟩` branch. `varphi(0)` must be a
/// multiple of 2π so that `U₁(0) = 𝟙`.
#[derive(Debug, Clone)]
pub struct SingleQubitParams {
    pub theta: Schedule,
    pub varphi: Schedule,
    pub phi: Schedule,
    pub tau: f64,
}

impl SingleQubitParams {
    pub fn new(theta: Schedule, varphi: Schedule, phi: Schedule, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::InvalidParameter(format!("tau = {tau} must be > 0")));
        }
        theta.validate()?;
        varphi.validate()?;
        phi.validate()?;
        if !is_multiple_of_2pi(varphi.start_value()) {
            return Err(Error::InvalidParameter(
                "varphi(0) must be a multiple of 2*pi so that U(0) = identity".into(),
            ));
        }
        Ok(Self { theta, varphi, phi, tau })
    }
}

/// Per-subspace schedules for the two-qubit operator `U₂(t)`.
#[derive(Debug, Clone)]
pub struct TwoQubitParams {
    pub block1: SingleQubitParams,
    pub block2: SingleQubitParams,
    pub tau: f64,
}

impl TwoQubitParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        theta1: Schedule,
        varphi1: Schedule,
        phi1: Schedule,
        theta2: Schedule,
        varphi2: Schedule,
        phi2: Schedule,
        tau: f64,
    ) -> Result<Self> {
        let block1 = SingleQubitParams::new(theta1, varphi1, phi1, tau)?;
        let block2 = SingleQubitParams::new(theta2, varphi2, phi2, tau)?;
        Ok(Self { block1, block2, tau })
    }
}

/// The instantaneous orthonormal basis `(|n₊⟩, |n₋⟩)` at angles `(θ, ϕ)`.
pub fn basis_single(theta: f64, phi: f64) -> (State2, State2) {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = C64::from_polar(1.0, phi);
    let plus = State2::new(C64::new(c, 0.0), e * s);
    let minus = State2::new(C64::new(-s, 0.0), e * c);
    (plus, minus)
}

fn u1_from_angles(theta: f64, phi: f64, varphi: f64) -> Mat2 {
    let (plus, minus) = basis_single(theta, phi);
    let p_plus = plus * plus.adjoint();
    let p_minus = minus * minus.adjoint();
    p_plus + p_minus * C64::from_polar(1.0, varphi)
}

/// `U₁(s) = P₊(s) + e^{iφ(s)} P₋(s)`.
pub fn u1_at(params: &SingleQubitParams, s: f64) -> Result<Mat2> {
    Ok(u1_from_angles(
        params.theta.evaluate(s)?,
        params.phi.evaluate(s)?,
        params.varphi.evaluate(s)?,
    ))
}

/// `U₂(s)`, block-diagonal in the control qubit: the k = 1 block acts on
/// span{|00⟩, |01⟩} and the k = 2 block on span{|10⟩, |11⟩}.
pub fn u2_at(params: &TwoQubitParams, s: f64) -> Result<Mat4> {
    let b1 = u1_at(&params.block1, s)?;
    let b2 = u1_at(&params.block2, s)?;
    let mut u = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            u[(i, j)] = b1[(i, j)];
            u[(2 + i, 2 + j)] = b2[(i, j)];
        }
    }
    Ok(u)
}

/// Applies `U₁(s)` to a normalized input state.
pub fn evolved_amplitudes(params: &SingleQubitParams, s: f64, input: &State2) -> Result<State2> {
    check_norm(input.norm())?;
    Ok(u1_at(params, s)? * input)
}

/// Applies `U₂(s)` to a normalized two-qubit input state.
pub fn evolved_amplitudes_two(params: &TwoQubitParams, s: f64, input: &State4) -> Result<State4> {
    check_norm(input.norm())?;
    Ok(u2_at(params, s)? * input)
}

fn check_norm(norm: f64) -> Result<()> {
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "input state norm {norm} differs from 1 by more than 1e-12"
        )));
    }
    Ok(())
}

pub fn unitarity_defect2(u: &Mat2) -> f64 {
    let d = u * u.adjoint() - Mat2::identity();
    d.iter().fold(0.0f64, |acc, c| acc.max(c.norm()))
}

pub fn unitarity_defect4(u: &Mat4) -> f64 {
    let d = u * u.adjoint() - Mat4::identity();
    d.iter().fold(0.0f64, |acc, c| acc.max(c.norm()))
}
