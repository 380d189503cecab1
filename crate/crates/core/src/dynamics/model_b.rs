use super::{check_blowup, effective_coefficients, rk4_step, step_count, trace_steps};
use super::{PointHistory, SourceLaw};
use crate::drive::Drive;
use crate::error::Result;
use crate::field::PointTrace;
use crate::params::{validate_params, InitialState, ModelParams};
use crate::roots::model_b_constants;

/// Integrates the law-B effective equation
///
/// `M q'' + 2 g alpha0 q' + omega^2 q = 2 g alpha0 q'(0) + omega^2 (alpha0 + alpha1 d/dt) u01(t, x0) + M f0 + 2 g alpha0 int_0^t f0`
///
/// with `g = gamma gamma0` and `M = 1 + 2 g alpha1`. The rank-one term is
/// frozen from `init.v0`; `int_0^t f0` is carried as a third RK4 state. The
/// readout follows from the oscillator equation, `Q = q + (q'' - f0) / omega^2`.
pub fn integrate_model_b(
    p: &ModelParams,
    init: &InitialState,
    drive: &Drive,
    horizon: f64,
    dt: f64,
) -> Result<PointHistory> {
    let trace = init.field.point_trace(p.x0, p.c);
    integrate_model_b_with_trace(p, init, &trace, drive, horizon, dt)
}

pub fn integrate_model_b_with_trace(
    p: &ModelParams,
    init: &InitialState,
    trace: &PointTrace,
    drive: &Drive,
    horizon: f64,
    dt: f64,
) -> Result<PointHistory> {
    let p = validate_params(*p)?;
    let k = effective_coefficients(&p, SourceLaw::B)?;
    let n = step_count(horizon, dt)?;
    let (h1, _) = trace_steps(dt);
    let omega_sq = p.omega * p.omega;
    let rank_one = k.initial_velocity_weight * init.v0;

    let accel = |t: f64, y: &[f64; 3]| {
        let free = p.alpha0 * trace.value(t) + p.alpha1 * trace.derivative(t, h1);
        let f0 = drive.value(t);
        let rhs = rank_one + omega_sq * free + k.mass_factor * f0 + k.damping * y[2]
            - k.damping * y[1]
            - k.stiffness * y[0];
        (rhs / k.mass_factor, f0)
    };
    let rhs = |t: f64, y: &[f64; 3]| {
        let (a, f0) = accel(t, y);
        [y[1], a, f0]
    };

    let mut hist = PointHistory::with_capacity(dt, n + 1);
    let mut y = [init.q0, init.v0, 0.0];
    for step in 0..=n {
        let t = step as f64 * dt;
        check_blowup(t, y[0])?;
        let (a, f0) = accel(t, &y);
        let readout = y[0] + (a - f0) / omega_sq;
        hist.push(
            t,
            y[0],
            y[1],
            readout,
            SourceLaw::B.source(&p, y[0], y[1], readout),
        );
        if step < n {
            y = rk4_step(&rhs, t, &y, dt);
        }
    }
    Ok(hist)
}

/// Closed form for `gamma0 = 1`, `alpha0 = 1`, `alpha1 = 0` without drive:
///
/// `q(t) = e^{-gamma t} (cos(w t) + gamma sin(w t) / w) (q(0) - q_lim) + e^{-gamma t} sin(w t) / w v0 + q_lim`
///
/// with `w = sqrt(omega^2 - gamma^2)` and `q_lim = (2 gamma / omega^2) v0`.
pub fn model_b_closed(p: &ModelParams, init: &InitialState, t: f64) -> Result<f64> {
    let k = model_b_constants(p, init)?;
    let w = k.omega_gamma;
    let (s, c) = (w * t).sin_cos();
    let envelope = (-p.gamma * t).exp();
    Ok(envelope * (c + p.gamma * s / w) * (init.q0 - k.q_limit)
        + envelope * s / w * init.v0
        + k.q_limit)
}

/// Residual of the undriven, field-free effective equation
/// `M q'' + 2 g alpha0 q' + omega^2 q - 2 g alpha0 v` at one instant, where
/// `v` is whatever value is inserted into the rank-one functional `q'(0)`.
pub fn model_b_residual(p: &ModelParams, q: f64, qdot: f64, qddot: f64, v: f64) -> Result<f64> {
    let k = effective_coefficients(p, SourceLaw::B)?;
    Ok(k.mass_factor * qddot + k.damping * qdot + k.stiffness * q - k.initial_velocity_weight * v)
}

/// The constant limit `q_inf` of the reduced law-B solution tested against
/// the effective equation in two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitParadox {
    pub q_limit: f64,
    /// Rank-one functional fed the original `q'(0) = v0`: vanishes, since
    /// `q_inf` is the constant particular solution.
    pub residual_original_velocity: f64,
    /// Rank-one functional applied to `q_inf` itself, whose own derivative is
    /// zero: leaves `omega^2 q_inf`, nonzero whenever `v0 != 0`.
    pub residual_self_consistent: f64,
}

pub fn limit_function_paradox(p: &ModelParams, init: &InitialState) -> Result<LimitParadox> {
    let q_limit = model_b_constants(p, init)?.q_limit;
    Ok(LimitParadox {
        q_limit,
        residual_original_velocity: model_b_residual(p, q_limit, 0.0, 0.0, init.v0)?,
        residual_self_consistent: model_b_residual(p, q_limit, 0.0, 0.0, 0.0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn reduced(omega: f64, gamma: f64) -> ModelParams {
        ModelParams {
            omega,
            gamma,
            gamma0: 1.0,
            alpha0: 1.0,
            ..ModelParams::default()
        }
    }

    #[test]
    fn uncoupled_is_harmonic() {
        let p = reduced(1.7, 0.0);
        let hist = integrate_model_b(
            &p,
            &InitialState::quiescent(0.2, 1.0),
            &Drive::Zero,
            6.0,
            1e-3,
        )
        .unwrap();
        for (&t, &q) in hist.t.iter().zip(&hist.q) {
            let exact = 0.2 * (1.7 * t).cos() + (1.7 * t).sin() / 1.7;
            assert!((q - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn matches_closed_form() {
        let p = reduced(1.0, 0.1);
        let init = InitialState::quiescent(1.0, 1.0);
        let hist = integrate_model_b(&p, &init, &Drive::Zero, 20.0, 1e-3).unwrap();
        let err = hist
            .t
            .iter()
            .zip(&hist.q)
            .map(|(&t, &q)| (q - model_b_closed(&p, &init, t).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn closed_form_initial_data() {
        let p = reduced(2.0, 0.7);
        let init = InitialState::quiescent(-0.4, 1.3);
        assert!((model_b_closed(&p, &init, 0.0).unwrap() + 0.4).abs() < 1e-15);
        let h = 1e-6;
        let d = (model_b_closed(&p, &init, h).unwrap() - model_b_closed(&p, &init, -h).unwrap())
            / (2.0 * h);
        assert!((d - 1.3).abs() < 1e-8);
    }

    #[test]
    fn long_time_limit() {
        let p = reduced(1.0, 0.1);
        let init = InitialState::quiescent(1.0, 1.0);
        assert!((model_b_closed(&p, &init, 400.0).unwrap() - 0.2).abs() < 1e-12);
        let hist = integrate_model_b(&p, &init, &Drive::Zero, 200.0, 1e-2).unwrap();
        assert!((hist.final_q() - 0.2).abs() < 1e-4);
    }

    #[test]
    fn paradox_residuals() {
        let p = reduced(1.5, 0.3);
        let init = InitialState::quiescent(0.0, 2.0);
        let par = limit_function_paradox(&p, &init).unwrap();
        assert!(par.residual_original_velocity.abs() < 1e-12);
        let expected = 1.5 * 1.5 * par.q_limit;
        assert!((par.residual_self_consistent - expected).abs() < 1e-12);
        assert!(par.residual_self_consistent.abs() > 0.1);
    }

    #[test]
    fn readout_and_source_law() {
        // With the field at rest, Q - q = (q'' - f0) / omega^2 and F = gamma0 (Q - q).
        let p = ModelParams {
            alpha1: 0.3,
            gamma0: 0.8,
            ..reduced(1.2, 0.2)
        };
        let drive = Drive::Sinusoid {
            amplitude: 0.5,
            omega: 0.7,
            phase: 0.1,
        };
        let hist =
            integrate_model_b(&p, &InitialState::quiescent(0.5, 0.0), &drive, 4.0, 1e-3).unwrap();
        for i in 0..hist.len() {
            let f = hist.src.f_src()[i];
            assert!((f - 0.8 * (hist.readout[i] - hist.q[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_mass_factor() {
        let p = ModelParams {
            alpha1: -5.0,
            ..reduced(1.0, 0.1)
        };
        let err = integrate_model_b(
            &p,
            &InitialState::quiescent(1.0, 0.0),
            &Drive::Zero,
            1.0,
            0.1,
        );
        assert!(matches!(err, Err(Error::SingularMassFactor { .. })));
    }

    #[test]
    fn overdamped_closed_form_rejected() {
        let p = reduced(1.0, 1.5);
        assert!(matches!(
            model_b_closed(&p, &InitialState::quiescent(1.0, 0.0), 1.0),
            Err(Error::OverdampedRegime { .. })
        ));
    }
}
