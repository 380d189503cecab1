use super::{effective_coefficients, rk4_step, PointHistory, SourceLaw};
use crate::error::Result;
use crate::field::{PointTrace, WaveInitialData};
use crate::params::ModelParams;

/// Rebuilds `Q(t) = (alpha0 + alpha1 d/dt)(-2 gamma int_0^t F_src + u01(t, x0))`
/// from an oscillator trajectory.
///
/// The time derivative of the source integral is taken analytically as
/// `-2 gamma F_src(t)`; only `u01` is differenced (central, step `dt`). For
/// law A the integral of `F_src` is a Hermite-corrected trapezoid sum over
/// `(q, q')`. For law B, `F_src` involves `Q` itself, so `I = int F_src`
/// is integrated as `I' = gamma0 (Q(I) - q)` with `q` interpolated between
/// samples by cubic Hermite.
pub fn reduce_to_point(
    hist: &PointHistory,
    data: &WaveInitialData,
    p: &ModelParams,
    law: SourceLaw,
) -> Result<Vec<f64>> {
    let trace = data.point_trace(p.x0, p.c);
    reduce_to_point_with_trace(hist, &trace, p, law)
}

pub fn reduce_to_point_with_trace(
    hist: &PointHistory,
    trace: &PointTrace,
    p: &ModelParams,
    law: SourceLaw,
) -> Result<Vec<f64>> {
    let dt = hist.dt;
    let free = |t: f64| p.alpha0 * trace.value(t) + p.alpha1 * trace.derivative(t, dt);
    let n = hist.len();
    let mut out = Vec::with_capacity(n);
    match law {
        SourceLaw::A => {
            let mut q_integral = 0.0;
            for i in 0..n {
                if i > 0 {
                    q_integral += 0.5 * dt * (hist.q[i - 1] + hist.q[i])
                        + dt * dt / 12.0 * (hist.qdot[i - 1] - hist.qdot[i]);
                }
                let memory = -p.gamma2 * q_integral + p.gamma3 * (hist.q[i] - hist.q[0]);
                let f = law.source(p, hist.q[i], hist.qdot[i], 0.0);
                out.push(-2.0 * p.gamma * (p.alpha0 * memory + p.alpha1 * f) + free(hist.t[i]));
            }
        }
        SourceLaw::B => {
            let m = effective_coefficients(p, law)?.mass_factor;
            let g = p.gamma * p.gamma0;
            let readout = |t: f64, integral: f64, q: f64| {
                (p.alpha0 * (-2.0 * p.gamma * integral + trace.value(t))
                    + p.alpha1 * (2.0 * g * q + trace.derivative(t, dt)))
                    / m
            };
            let mut integral = 0.0;
            for i in 0..n {
                let t = hist.t[i];
                out.push(readout(t, integral, hist.q[i]));
                if i + 1 == n {
                    break;
                }
                let (q0, q1) = (hist.q[i], hist.q[i + 1]);
                let (v0, v1) = (hist.qdot[i], hist.qdot[i + 1]);
                let q_mid = 0.5 * (q0 + q1) + dt / 8.0 * (v0 - v1);
                let q_at = |s: f64| {
                    if s <= t {
                        q0
                    } else if s >= t + dt {
                        q1
                    } else {
                        q_mid
                    }
                };
                let rhs = |s: f64, y: &[f64; 1]| {
                    let q = q_at(s);
                    [p.gamma0 * (readout(s, y[0], q) - q)]
                };
                integral = rk4_step(&rhs, t, &[integral], dt)[0];
            }
        }
    }
    Ok(out)
}
