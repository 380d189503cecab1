//! The readout `Q` decoupled from `q` under law B.
//!
//! Writing `Q_d = Q - u01(., x0)` and `D = alpha0 + alpha1 d/dt`, the readout
//! obeys
//!
//! `(d^2/dt^2 + 2 g D d/dt + omega^2) Q_d = D (2 g (v0 - u01' + int_0^t f0)) + (D - 1)(u01'' + omega^2 u01)`
//!
//! with `g = gamma gamma0`. The last term vanishes for `alpha0 = 1`,
//! `alpha1 = 0`; it comes from the free-field part of `Q`, which is `D u01`
//! rather than `u01` itself.

use super::{effective_coefficients, rk4_step, step_count, trace_steps, SourceLaw};
use crate::drive::Drive;
use crate::error::{Error, Result};
use crate::field::PointTrace;
use crate::params::{validate_params, InitialState, ModelParams};

/// `Q(0)` and `Q'(0)` as forced by the oscillator data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InsulatedInitial {
    pub readout: f64,
    pub readout_rate: f64,
}

/// Solves `Q(0) = D u01|_0 - 2 g alpha1 (Q(0) - q(0))` and its differentiated
/// companion for `Q(0)`, `Q'(0)`.
pub fn insulated_q_initial(
    p: &ModelParams,
    init: &InitialState,
    trace: &PointTrace,
    dt: f64,
) -> Result<InsulatedInitial> {
    let g = p.gamma * p.gamma0;
    let factor = p.mass_factor();
    if factor == 0.0 || !factor.is_finite() {
        return Err(Error::SingularInitialData { factor });
    }
    let (h1, h2) = trace_steps(dt);
    let u = trace.value(0.0);
    let du = trace.derivative(0.0, h1);
    let ddu = trace.second_derivative(0.0, h2);
    let readout = (p.alpha0 * u + p.alpha1 * du + 2.0 * g * p.alpha1 * init.q0) / factor;
    let readout_rate = (p.alpha0 * (-2.0 * g * (readout - init.q0) + du)
        + p.alpha1 * (2.0 * g * init.v0 + ddu))
        / factor;
    Ok(InsulatedInitial {
        readout,
        readout_rate,
    })
}

/// Right-hand side of the insulated equation at time `t`, given the running
/// drive integral `int_0^t f0`.
pub fn insulated_q_rhs(
    p: &ModelParams,
    init: &InitialState,
    trace: &PointTrace,
    drive: &Drive,
    t: f64,
    drive_integral: f64,
    dt: f64,
) -> f64 {
    let g2 = 2.0 * p.gamma * p.gamma0;
    let (h1, h2) = trace_steps(dt);
    let u = trace.value(t);
    let du = trace.derivative(t, h1);
    let ddu = trace.second_derivative(t, h2);
    let dddu = trace.third_derivative(t, h2);
    let omega_sq = p.omega * p.omega;
    p.alpha0 * g2 * (init.v0 - du + drive_integral)
        + p.alpha1 * g2 * (drive.value(t) - ddu)
        + (p.alpha0 - 1.0) * (ddu + omega_sq * u)
        + p.alpha1 * (dddu + omega_sq * du)
}

/// Integrates the insulated equation with RK4 on `(Q_d, Q_d', int f0)` and
/// returns `Q = Q_d + u01(., x0)` on the grid `t_k = k dt`.
pub fn integrate_insulated_q(
    p: &ModelParams,
    init: &InitialState,
    drive: &Drive,
    horizon: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    let trace = init.field.point_trace(p.x0, p.c);
    integrate_insulated_q_with_trace(p, init, &trace, drive, horizon, dt)
}

pub fn integrate_insulated_q_with_trace(
    p: &ModelParams,
    init: &InitialState,
    trace: &PointTrace,
    drive: &Drive,
    horizon: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    let p = validate_params(*p)?;
    let n = step_count(horizon, dt)?;
    let start = insulated_q_initial(&p, init, trace, dt)?;
    let k = effective_coefficients(&p, SourceLaw::B)?;
    let (h1, _) = trace_steps(dt);

    let rhs = |t: f64, y: &[f64; 3]| {
        let forcing = insulated_q_rhs(&p, init, trace, drive, t, y[2], dt);
        let acc = (forcing - k.damping * y[1] - k.stiffness * y[0]) / k.mass_factor;
        [y[1], acc, drive.value(t)]
    };
    let mut y = [
        start.readout - trace.value(0.0),
        start.readout_rate - trace.derivative(0.0, h1),
        0.0,
    ];
    let mut out = Vec::with_capacity(n + 1);
    for step in 0..=n {
        let t = step as f64 * dt;
        out.push(y[0] + trace.value(t));
        if step < n {
            y = rk4_step(&rhs, t, &y, dt);
        }
    }
    Ok(out)
}
