//! Robustness of the synthesized protocols to a systematic amplitude error
//! on the transverse drive.
//!
//! For `H(s) + ε ω_x(s) σ_x / 2` the fidelity of the final state against the
//! unperturbed target is, to second order in ε, `P(ε) = 1 − ε² q_S` with
//!
//! ```text
//! q_S = ¼ |∫₀^τ ω_x(t) [β ᾱ* + α β̄*] dt|²
//! ```
//!
//! where (α, β) are the evolved amplitudes of the input and (ᾱ, β̄) those of
//! the orthogonal input. Everything is integrated in normalized time, which
//! makes q_S independent of τ.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{C64, PauliDecomposition};
use crate::propagator::{propagate_perturbed, PerturbationSpec};
use crate::quadrature::integrate_complex;
use crate::schedule::Schedule;
use crate::spectral::{evolved_amplitudes, u1_at, SingleQubitParams, State2};
use crate::synthesis::omega_closed_form;

/// Number of evenly spaced interior samples recorded for diagnostics.
const SAMPLE_POINTS: usize = 256;

/// Quadrature tolerance for all sensitivity integrals.
pub const SENSITIVITY_ABS_TOL: f64 = 1e-9;

/// Second-order truncation is considered unreliable past this loss level.
pub const VALIDITY_GUARD: f64 = 0.05;

/// The state orthogonal to `a|0⟩ + b|1⟩`, namely `b*|0⟩ − a*|1⟩`.
pub fn perpendicular_input(input: &State2) -> State2 {
    State2::new(input[1].conj(), -input[0].conj())
}

/// Sensitivity functional `q_S` together with the sampled integrand.
#[derive(Debug, Clone)]
pub struct SensitivityResult {
    pub q_s: f64,
    /// `(s, integrand(s))` on an evenly spaced interior grid.
    pub integrand_samples: Vec<(f64, C64)>,
}

impl SensitivityResult {
    /// `P(ε) = 1 − ε² q_S`.
    pub fn predicted_fidelity(&self, epsilon: f64) -> f64 {
        predicted_fidelity(self.q_s, epsilon)
    }
}

/// `P(ε) = 1 − ε² q_S`; may fall below 0 outside the validity regime.
pub fn predicted_fidelity(q_s: f64, epsilon: f64) -> f64 {
    1.0 - epsilon * epsilon * q_s
}

/// True when `ε² q_S` exceeds the second-order truncation guard.
pub fn truncation_unreliable(q_s: f64, epsilon: f64) -> bool {
    epsilon * epsilon * q_s > VALIDITY_GUARD
}

fn general_integrand(
    params: &SingleQubitParams,
    input: &State2,
    perp: &State2,
    s: f64,
) -> Result<C64> {
    let omega = match omega_closed_form(params, s)? {
        PauliDecomposition::Single { omega } => omega,
        other => {
            return Err(Error::InvalidHamiltonian(format!(
                "expected a single-qubit decomposition, got dimension {}",
                other.dim()
            )))
        }
    };
    let ab = evolved_amplitudes(params, s, input)?;
    let ab_bar = evolved_amplitudes(params, s, perp)?;
    // dt = τ ds cancels the 1/τ inside the physical-time ω_x
    let wx = params.tau * omega[0];
    Ok((ab[1] * ab_bar[0].conj() + ab[0] * ab_bar[1].conj()) * wx)
}

/// `q_S` for an arbitrary normalized input state under `U₁(s)`.
pub fn sensitivity_general(params: &SingleQubitParams, input: &State2) -> Result<SensitivityResult> {
    let norm = input.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "input state norm {norm} differs from 1 by more than 1e-12"
        )));
    }
    let perp = perpendicular_input(input);
    let integral = integrate_complex(
        |s| general_integrand(params, input, &perp, s),
        0.0,
        1.0,
        SENSITIVITY_ABS_TOL,
    )?;
    let mut samples = Vec::with_capacity(SAMPLE_POINTS);
    for i in 0..SAMPLE_POINTS {
        let s = (i as f64 + 0.5) / SAMPLE_POINTS as f64;
        samples.push((s, general_integrand(params, input, &perp, s)?));
    }
    Ok(SensitivityResult { q_s: 0.25 * integral.norm_sqr(), integrand_samples: samples })
}

/// The common bracket of the closed-form integrands (input `|0⟩`, ϕ ≡ 0):
/// `cos 2θ sin²(φ/2) − cos²(φ/2) + i cos θ sin φ`.
fn bracket(theta: f64, phi: f64) -> C64 {
    let half = 0.5 * phi;
    Complex64::new(
        (2.0 * theta).cos() * half.sin().powi(2) - half.cos().powi(2),
        theta.cos() * phi.sin(),
    )
}

/// `q_S` for constant θ ≡ θ₀, ϕ ≡ 0, input `|0⟩`, and an arbitrary
/// eigenphase schedule.
pub fn sensitivity_case_one(theta0: f64, varphi: &Schedule) -> Result<f64> {
    varphi.validate()?;
    let st = theta0.sin();
    let integral = integrate_complex(
        |s| Ok(bracket(theta0, varphi.evaluate(s)?) * (st * varphi.derivative(s)?)),
        0.0,
        1.0,
        SENSITIVITY_ABS_TOL,
    )?;
    Ok(0.25 * integral.norm_sqr())
}

/// Closed form of the constant-θ sensitivity,
/// `q_S = (sin²θ₀/4){cos²θ₀ [cos Φ − 1]² + [cos²θ₀ sin Φ + Φ sin²θ₀]²}`.
pub fn sensitivity_case_one_closed(theta0: f64, phi_end: f64) -> f64 {
    let (s2, c2) = (theta0.sin().powi(2), theta0.cos().powi(2));
    0.25 * s2
        * (c2 * (phi_end.cos() - 1.0).powi(2)
            + (c2 * phi_end.sin() + phi_end * s2).powi(2))
}

/// A commonly quoted variant of the closed form with cos⁴θ₀ in the first
/// bracket. It disagrees with the integral (and with
/// [`sensitivity_case_one_closed`]) whenever cos Φ ≠ 1; kept for discrepancy
/// reporting only.
pub fn sensitivity_case_one_printed(theta0: f64, phi_end: f64) -> f64 {
    let (s2, c2) = (theta0.sin().powi(2), theta0.cos().powi(2));
    0.25 * s2
        * (c2 * c2 * (phi_end.cos() - 1.0).powi(2)
            + (c2 * phi_end.sin() + phi_end * s2).powi(2))
}

/// `q_S` for time-dependent θ(s) with ϕ ≡ 0 and input `|0⟩`:
/// integrand `(sin θ φ′ + cos θ sin φ θ′) · bracket(θ, φ)`.
pub fn sensitivity_case_two(theta: &Schedule, varphi: &Schedule) -> Result<f64> {
    theta.validate()?;
    varphi.validate()?;
    let integral = integrate_complex(
        |s| {
            let th = theta.evaluate(s)?;
            let ph = varphi.evaluate(s)?;
            let weight = th.sin() * varphi.derivative(s)?
                + th.cos() * ph.sin() * theta.derivative(s)?;
            Ok(bracket(th, ph) * weight)
        },
        0.0,
        1.0,
        SENSITIVITY_ABS_TOL,
    )?;
    Ok(0.25 * integral.norm_sqr())
}

/// One (schedule, ε) cell of a robustness sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub schedule_name: String,
    pub epsilon: f64,
    pub q_s: f64,
    pub p_predicted: f64,
    pub p_exact: f64,
}

/// One sampled point of a schedule's control trajectory.
#[derive(Debug, Clone)]
pub struct TrajectoryRow {
    pub schedule_name: String,
    pub s: f64,
    pub theta: f64,
    pub omega_x: f64,
    pub omega_z: f64,
}

/// Aggregated sweep output; failed schedules are recorded, not fatal.
#[derive(Debug, Clone, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub trajectories: Vec<TrajectoryRow>,
    pub failures: Vec<(String, String)>,
}

/// Number of trajectory samples per schedule (interior midpoints).
pub const TRAJECTORY_SAMPLES: usize = 200;

/// Sweeps the amplitude error over a family of θ schedules sharing one
/// eigenphase schedule. For every cell the perturbative prediction and the
/// exact perturbed propagation are recorded side by side; the exact fidelity
/// is `|⟨ψ_target|ψ_ε(τ)⟩|²` with input `|0⟩`.
pub fn robustness_sweep(
    schedule_set: &[(String, Schedule)],
    varphi: &Schedule,
    epsilon_grid: &[f64],
    tau: f64,
    steps: usize,
) -> Result<SweepTable> {
    if schedule_set.is_empty() {
        return Err(Error::InvalidParameter("empty schedule set".into()));
    }
    for &eps in epsilon_grid {
        PerturbationSpec::new(eps)?;
    }
    let mut table = SweepTable::default();
    let input = State2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    for (name, theta) in schedule_set {
        match sweep_one(theta, varphi, epsilon_grid, tau, steps, &input) {
            Ok((rows, trajectory)) => {
                for (epsilon, q_s, p_predicted, p_exact) in rows {
                    table.rows.push(SweepRow {
                        schedule_name: name.clone(),
                        epsilon,
                        q_s,
                        p_predicted,
                        p_exact,
                    });
                }
                for (s, theta, omega_x, omega_z) in trajectory {
                    table.trajectories.push(TrajectoryRow {
                        schedule_name: name.clone(),
                        s,
                        theta,
                        omega_x,
                        omega_z,
                    });
                }
            }
            Err(e) => table.failures.push((name.clone(), e.to_string())),
        }
    }
    if table.rows.is_empty() {
        return Err(Error::NoSolution(format!(
            "all {} schedules failed; first error: {}",
            schedule_set.len(),
            table.failures[0].1
        )));
    }
    Ok(table)
}

type CellRows = Vec<(f64, f64, f64, f64)>;
type TrajectoryPoints = Vec<(f64, f64, f64, f64)>;

fn sweep_one(
    theta: &Schedule,
    varphi: &Schedule,
    epsilon_grid: &[f64],
    tau: f64,
    steps: usize,
    input: &State2,
) -> Result<(CellRows, TrajectoryPoints)> {
    let params = SingleQubitParams::new(
        theta.clone(),
        varphi.clone(),
        Schedule::Constant { value: 0.0 },
        tau,
    )?;
    let q_s = sensitivity_general(&params, input)?.q_s;
    let target = u1_at(&params, 1.0)? * input;
    let hamiltonian = |s: f64| omega_closed_form(&params, s);
    let mut rows = Vec::with_capacity(epsilon_grid.len());
    for &eps in epsilon_grid {
        let psi = propagate_perturbed(hamiltonian, &PerturbationSpec::new(eps)?, tau, steps, input)?;
        let p_exact = target.dotc(&psi).norm_sqr();
        rows.push((eps, q_s, predicted_fidelity(q_s, eps), p_exact));
    }
    let mut trajectory = Vec::with_capacity(TRAJECTORY_SAMPLES);
    for i in 0..TRAJECTORY_SAMPLES {
        let s = (i as f64 + 0.5) / TRAJECTORY_SAMPLES as f64;
        if let PauliDecomposition::Single { omega } = omega_closed_form(&params, s)? {
            trajectory.push((s, theta.evaluate(s)?, omega[0], omega[2]));
        }
    }
    Ok((rows, trajectory))
}

/// Serializes the P(ε) rows: `schedule_name,epsilon,q_s,p_predicted,p_exact`.
pub fn write_sweep_csv(table: &SweepTable, out: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "schedule_name,epsilon,q_s,p_predicted,p_exact")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.schedule_name, r.epsilon, r.q_s, r.p_predicted, r.p_exact
        )?;
    }
    Ok(())
}

/// Serializes the control trajectories:
/// `schedule_name,s,theta,omega_x,omega_z`.
pub fn write_trajectory_csv(
    table: &SweepTable,
    out: &mut impl std::io::Write,
) -> std::io::Result<()> {
    writeln!(out, "schedule_name,s,theta,omega_x,omega_z")?;
    for r in &table.trajectories {
        writeln!(out, "{},{},{},{},{}", r.schedule_name, r.s, r.theta, r.omega_x, r.omega_z)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const Q_HADAMARD: f64 = (8.0 + PI * PI) / 32.0;

    fn ket0() -> State2 {
        State2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    fn hadamard_params(tau: f64) -> SingleQubitParams {
        SingleQubitParams::new(
            Schedule::Constant { value: PI / 4.0 },
            Schedule::Linear { end_value: PI },
            Schedule::Constant { value: 0.0 },
            tau,
        )
        .unwrap()
    }

    #[test]
    fn perpendicular_is_orthogonal() {
        let states = [
            ket0(),
            State2::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)),
            State2::new(C64::new(0.5, -0.5), C64::new(-0.5, 0.5)),
        ];
        for psi in states {
            let perp = perpendicular_input(&psi);
            assert!(psi.dotc(&perp).norm() < 1e-14);
            assert!((perp.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn phase_gate_protocol_is_insensitive() {
        let params = SingleQubitParams::new(
            Schedule::Constant { value: 0.0 },
            Schedule::Linear { end_value: PI },
            Schedule::Constant { value: 0.0 },
            1.0,
        )
        .unwrap();
        let r = sensitivity_general(&params, &ket0()).unwrap();
        assert!(r.q_s < 1e-18);
    }

    #[test]
    fn hadamard_sensitivity_matches_closed_form() {
        let r = sensitivity_general(&hadamard_params(1.0), &ket0()).unwrap();
        assert!((r.q_s - Q_HADAMARD).abs() < 1e-6, "q_s = {}", r.q_s);
    }

    #[test]
    fn sensitivity_is_tau_invariant() {
        let q1 = sensitivity_general(&hadamard_params(1.0), &ket0()).unwrap().q_s;
        for tau in [0.1, 10.0] {
            let q = sensitivity_general(&hadamard_params(tau), &ket0()).unwrap().q_s;
            assert!((q - q1).abs() < 1e-9);
        }
    }

    #[test]
    fn case_one_matches_general_and_closed() {
        let varphi = Schedule::Linear { end_value: PI };
        for theta0 in [0.3, PI / 4.0, 1.2] {
            let q_int = sensitivity_case_one(theta0, &varphi).unwrap();
            let q_closed = sensitivity_case_one_closed(theta0, PI);
            assert!((q_int - q_closed).abs() < 1e-9, "theta0 = {theta0}");
            let params = SingleQubitParams::new(
                Schedule::Constant { value: theta0 },
                varphi.clone(),
                Schedule::Constant { value: 0.0 },
                1.0,
            )
            .unwrap();
            let q_gen = sensitivity_general(&params, &ket0()).unwrap().q_s;
            assert!((q_int - q_gen).abs() < 1e-8, "theta0 = {theta0}");
        }
    }

    #[test]
    fn case_one_reparameterization_invariance() {
        // φ(s) → φ(s³) with the same endpoints leaves the (φ-substituted)
        // integral unchanged
        let linear = Schedule::Linear { end_value: PI };
        let cubic = Schedule::Tabulated {
            values: (0..=32).map(|i| PI * (i as f64 / 32.0).powi(3)).collect(),
        };
        let a = sensitivity_case_one(PI / 4.0, &linear).unwrap();
        let b = sensitivity_case_one(PI / 4.0, &cubic).unwrap();
        assert!((a - b).abs() < 1e-6, "a = {a}, b = {b}");
    }

    #[test]
    fn closed_forms_vanish_without_eigenphase_evolution() {
        for theta0 in [0.0, 0.4, PI / 4.0, 1.3] {
            assert_eq!(sensitivity_case_one_closed(theta0, 0.0), 0.0);
            assert_eq!(sensitivity_case_one_printed(theta0, 0.0), 0.0);
        }
        assert_eq!(sensitivity_case_one_closed(0.0, PI), 0.0);
    }

    #[test]
    fn printed_variant_disagrees_at_hadamard_point() {
        let corrected = sensitivity_case_one_closed(PI / 4.0, PI);
        let printed = sensitivity_case_one_printed(PI / 4.0, PI);
        assert!((corrected - Q_HADAMARD).abs() < 1e-12);
        assert!((printed - (4.0 + PI * PI) / 32.0).abs() < 1e-12);
    }

    #[test]
    fn case_two_reduces_to_case_one() {
        let varphi = Schedule::Linear { end_value: PI };
        let theta = Schedule::Constant { value: PI / 4.0 };
        let q2 = sensitivity_case_two(&theta, &varphi).unwrap();
        let q1 = sensitivity_case_one(PI / 4.0, &varphi).unwrap();
        assert!((q2 - q1).abs() < 1e-10);
    }

    #[test]
    fn case_two_matches_general_for_varying_theta() {
        let varphi = Schedule::Linear { end_value: PI };
        for theta in [
            Schedule::Linear { end_value: PI / 4.0 },
            Schedule::Quadratic { end_value: PI / 4.0 },
            Schedule::Trigonometric { end_value: PI / 4.0 },
            Schedule::Cycloid { r: 0.69294 },
        ] {
            let q2 = sensitivity_case_two(&theta, &varphi).unwrap();
            let params = SingleQubitParams::new(
                theta,
                varphi.clone(),
                Schedule::Constant { value: 0.0 },
                1.0,
            )
            .unwrap();
            let qg = sensitivity_general(&params, &ket0()).unwrap().q_s;
            assert!((q2 - qg).abs() < 1e-8, "q2 = {q2}, qg = {qg}");
        }
    }

    #[test]
    fn predicted_fidelity_properties() {
        assert_eq!(predicted_fidelity(0.5585, 0.0), 1.0);
        assert!((predicted_fidelity(0.5585, 0.1) - 0.994415).abs() < 1e-12);
        assert_eq!(predicted_fidelity(0.7, 0.05), predicted_fidelity(0.7, -0.05));
        assert!(!truncation_unreliable(0.5585, 0.1));
        assert!(truncation_unreliable(0.5585, 0.5));
    }

    #[test]
    fn sweep_covers_all_schedules_and_is_even_in_epsilon() {
        let schedules = vec![
            ("cte".to_string(), Schedule::Constant { value: PI / 4.0 }),
            ("lin".to_string(), Schedule::Linear { end_value: PI / 4.0 }),
        ];
        let varphi = Schedule::Linear { end_value: PI };
        let table =
            robustness_sweep(&schedules, &varphi, &[-0.1, 0.0, 0.1], 1.0, 2000).unwrap();
        assert!(table.failures.is_empty());
        assert_eq!(table.rows.len(), 6);
        assert_eq!(table.trajectories.len(), 2 * TRAJECTORY_SAMPLES);
        for r in &table.rows {
            if r.epsilon == 0.0 {
                assert!((r.p_exact - 1.0).abs() < 1e-9);
                assert_eq!(r.p_predicted, 1.0);
            }
        }
        let at = |name: &str, eps: f64| {
            table
                .rows
                .iter()
                .find(|r| r.schedule_name == name && r.epsilon == eps)
                .unwrap()
                .p_exact
        };
        // exact fidelity is even only through second order; the residual
        // asymmetry at eps = 0.1 is the cubic term, ~2e-4
        assert!((at("cte", 0.1) - at("cte", -0.1)).abs() < 1e-3);
    }

    #[test]
    fn sweep_prediction_tracks_exact_fidelity() {
        let schedules = vec![("cte".to_string(), Schedule::Constant { value: PI / 4.0 })];
        let varphi = Schedule::Linear { end_value: PI };
        let table = robustness_sweep(&schedules, &varphi, &[0.01], 1.0, 4000).unwrap();
        let r = &table.rows[0];
        assert!((r.q_s - Q_HADAMARD).abs() < 1e-6);
        assert!((r.p_predicted - r.p_exact).abs() < 1e-4);
    }

    #[test]
    fn csv_writers_emit_headers_and_rows() {
        let schedules = vec![("cte".to_string(), Schedule::Constant { value: PI / 4.0 })];
        let varphi = Schedule::Linear { end_value: PI };
        let table = robustness_sweep(&schedules, &varphi, &[0.0], 1.0, 200).unwrap();
        let mut sweep = Vec::new();
        write_sweep_csv(&table, &mut sweep).unwrap();
        let text = String::from_utf8(sweep).unwrap();
        assert!(text.starts_with("schedule_name,epsilon,q_s,p_predicted,p_exact\n"));
        assert_eq!(text.lines().count(), 2);
        let mut traj = Vec::new();
        write_trajectory_csv(&table, &mut traj).unwrap();
        let text = String::from_utf8(traj).unwrap();
        assert!(text.starts_with("schedule_name,s,theta,omega_x,omega_z\n"));
        assert_eq!(text.lines().count(), 1 + TRAJECTORY_SAMPLES);
    }
}
