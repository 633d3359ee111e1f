//! Hamiltonian synthesis: `H(t) = i U̇(t) U†(t)`, traceless part, projected
//! onto the Pauli basis.
//!
//! Two routes are provided and cross-validated against each other: a
//! finite-difference synthesis from any unitary evaluator, and closed-form
//! coefficients for the spectrally parameterized single-qubit operator.

use nalgebra::SMatrix;

use crate::error::{Error, Result};
use crate::pauli::{C64, PauliDecomposition};
use crate::schedule::Schedule;
use crate::spectral::SingleQubitParams;

pub const DEFAULT_STEP: f64 = 1e-6;

/// Traceless Hermitized `i (dU/dt) U†` from a unitary evaluator, by central
/// difference in normalized time (`dt = τ ds`). One-sided second-order
/// stencils are used within `step` of the endpoints.
fn synthesize_matrix<const D: usize>(
    eval: &impl Fn(f64) -> Result<SMatrix<C64, D, D>>,
    s: f64,
    tau: f64,
    step: f64,
) -> Result<SMatrix<C64, D, D>> {
    if !(step > 0.0 && step < 0.5) {
        return Err(Error::InvalidParameter(format!("step = {step} outside (0, 0.5)")));
    }
    let check = |u: SMatrix<C64, D, D>| -> Result<SMatrix<C64, D, D>> {
        let defect = (u * u.adjoint() - SMatrix::<C64, D, D>::identity())
            .iter()
            .fold(0.0f64, |m, c| m.max(c.norm()));
        if defect > 1e-8 {
            return Err(Error::InvalidEvaluator { defect });
        }
        Ok(u)
    };
    let u = check(eval(s)?)?;
    let du = if s - step >= 0.0 && s + step <= 1.0 {
        (check(eval(s + step)?)? - check(eval(s - step)?)?) / C64::new(2.0 * step, 0.0)
    } else if s - step < 0.0 {
        (-u * C64::new(3.0, 0.0) + check(eval(s + step)?)? * C64::new(4.0, 0.0)
            - check(eval(s + 2.0 * step)?)?)
            / C64::new(2.0 * step, 0.0)
    } else {
        (u * C64::new(3.0, 0.0) - check(eval(s - step)?)? * C64::new(4.0, 0.0)
            + check(eval(s - 2.0 * step)?)?)
            / C64::new(2.0 * step, 0.0)
    };
    // dt = τ ds, H = i U̇ U†
    let h = du * u.adjoint() * C64::new(0.0, 1.0 / tau);
    let h = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let trace = h.trace() / C64::new(D as f64, 0.0);
    Ok(h - SMatrix::<C64, D, D>::identity() * trace)
}

pub fn synthesize_numeric2(
    eval: impl Fn(f64) -> Result<SMatrix<C64, 2, 2>>,
    s: f64,
    tau: f64,
    step: f64,
) -> Result<PauliDecomposition> {
    let h = synthesize_matrix(&eval, s, tau, step)?;
    Ok(PauliDecomposition::from_matrix2(&h))
}

pub fn synthesize_numeric4(
    eval: impl Fn(f64) -> Result<SMatrix<C64, 4, 4>>,
    s: f64,
    tau: f64,
    step: f64,
) -> Result<PauliDecomposition> {
    let h = synthesize_matrix(&eval, s, tau, step)?;
    Ok(PauliDecomposition::from_matrix4(&h))
}

/// Richardson-refined variant: combines steps `h` and `h/2` to cancel the
/// leading O(h²) truncation term.
pub fn synthesize_numeric2_refined(
    eval: impl Fn(f64) -> Result<SMatrix<C64, 2, 2>>,
    s: f64,
    tau: f64,
    step: f64,
) -> Result<PauliDecomposition> {
    let coarse = synthesize_matrix(&eval, s, tau, step)?;
    let fine = synthesize_matrix(&eval, s, tau, step / 2.0)?;
    let h = (fine * C64::new(4.0, 0.0) - coarse) / C64::new(3.0, 0.0);
    Ok(PauliDecomposition::from_matrix2(&h))
}

/// Closed-form `ω⃗(t)` for the single-qubit spectral operator.
///
/// With the instantaneous axis `n̂ = (sinθ cosϕ, sinθ sinϕ, cosθ)` and the
/// eigenphase φ, the traceless part of `i U̇ U†` is `½ ω⃗·σ⃗` with
///
/// `ω⃗ = φ̇ n̂ + sin φ · ṅ + (1 − cos φ) · (n̂ × ṅ)`,
///
/// all derivatives in physical time. Expanded in components this matches the
/// usual trigonometric forms (e.g. `ω_z = φ̇ cosθ − θ̇ sinθ sinφ −
/// (cosφ − 1) ϕ̇ sin²θ`).
pub fn omega_closed_form(params: &SingleQubitParams, s: f64) -> Result<PauliDecomposition> {
    let theta = params.theta.evaluate(s)?;
    let phi = params.phi.evaluate(s)?;
    let varphi = params.varphi.evaluate(s)?;
    let theta_dot = params.theta.derivative(s)? / params.tau;
    let phi_dot = params.phi.derivative(s)? / params.tau;
    let varphi_dot = params.varphi.derivative(s)? / params.tau;

    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let (sv, cv) = varphi.sin_cos();

    let n = [st * cp, st * sp, ct];
    let nd = [
        theta_dot * ct * cp - phi_dot * st * sp,
        theta_dot * ct * sp + phi_dot * st * cp,
        -theta_dot * st,
    ];
    let cross = [
        n[1] * nd[2] - n[2] * nd[1],
        n[2] * nd[0] - n[0] * nd[2],
        n[0] * nd[1] - n[1] * nd[0],
    ];
    let mut omega = [0.0; 3];
    for i in 0..3 {
        omega[i] = varphi_dot * n[i] + sv * nd[i] + (1.0 - cv) * cross[i];
    }
    Ok(PauliDecomposition::Single { omega })
}

/// A Hamiltonian trajectory indexed by normalized time.
pub struct TimeIndexedHamiltonian {
    f: Box<dyn Fn(f64) -> Result<PauliDecomposition> + Send + Sync>,
}

impl TimeIndexedHamiltonian {
    pub fn new(f: impl Fn(f64) -> Result<PauliDecomposition> + Send + Sync + 'static) -> Self {
        Self { f: Box::new(f) }
    }

    pub fn at(&self, s: f64) -> Result<PauliDecomposition> {
        (self.f)(s)
    }
}

fn check_boundary(schedule: &Schedule, end: f64, what: &str) -> Result<()> {
    schedule.validate()?;
    if schedule.start_value().abs() > 1e-9 {
        return Err(Error::InvalidPreset(format!(
            "{what}: varphi(0) = {} must vanish",
            schedule.start_value()
        )));
    }
    let got = schedule.end_value();
    if (got - end).abs() > 1e-9 {
        return Err(Error::InvalidPreset(format!(
            "{what}: varphi(1) = {got} does not reach {end}"
        )));
    }
    Ok(())
}

/// `H_ph(s) = φ̇(s)/2 · σ_z` for the phase-shift gate diag(1, e^{iξ}).
pub fn phase_gate_hamiltonian(
    xi: f64,
    varphi: &Schedule,
    tau: f64,
) -> Result<TimeIndexedHamiltonian> {
    check_boundary(varphi, xi, "phase gate")?;
    let varphi = varphi.clone();
    Ok(TimeIndexedHamiltonian::new(move |s| {
        let wz = varphi.derivative(s)? / tau;
        Ok(PauliDecomposition::Single { omega: [0.0, 0.0, wz] })
    }))
}

/// `H_Had(s) = φ̇(s)/(2√2) · (σ_x + σ_z)` for constant θ = π/4.
pub fn hadamard_hamiltonian(varphi: &Schedule, tau: f64) -> Result<TimeIndexedHamiltonian> {
    check_boundary(varphi, std::f64::consts::PI, "hadamard gate")?;
    let varphi = varphi.clone();
    Ok(TimeIndexedHamiltonian::new(move |s| {
        let w = varphi.derivative(s)? / (tau * std::f64::consts::SQRT_2);
        Ok(PauliDecomposition::Single { omega: [w, 0.0, w] })
    }))
}

/// `H_CZ(s) = φ̇₂(s)/4 · (𝟙⊗σ_z + σ_z⊗𝟙 − σ_z⊗σ_z)`.
pub fn cz_hamiltonian(xi: f64, varphi2: &Schedule, tau: f64) -> Result<TimeIndexedHamiltonian> {
    check_boundary(varphi2, xi, "cz gate")?;
    let varphi2 = varphi2.clone();
    Ok(TimeIndexedHamiltonian::new(move |s| {
        let c = varphi2.derivative(s)? / (4.0 * tau);
        let mut coeffs = [0.0; 15];
        coeffs[2] = c; // IZ
        coeffs[11] = c; // ZI
        coeffs[14] = -c; // ZZ
        Ok(PauliDecomposition::Two { coeffs })
    }))
}
