use num_complex::Complex64;

use super::{check_blowup, rk4_step, step_count, trace_steps, PointHistory, SourceLaw};
use crate::drive::Drive;
use crate::error::Result;
use crate::field::PointTrace;
use crate::params::{validate_params, InitialState, ModelParams};
use crate::roots::{concentrated_memory_constants, wide_memory_roots, CharacteristicRoots};

/// Integrates the law-A effective equation
///
/// `q'' = -omega^2 q - 2 gamma1 gamma (alpha0 m + alpha1 F) + gamma1 (alpha0 + alpha1 d/dt) u01(t, x0) + f0`
///
/// with `F = -gamma2 q + gamma3 q'` and `m = int_0^t F`, as the first-order
/// system `(q, q', m)` under classical RK4.
pub fn integrate_model_a(
    p: &ModelParams,
    init: &InitialState,
    drive: &Drive,
    horizon: f64,
    dt: f64,
) -> Result<PointHistory> {
    let trace = init.field.point_trace(p.x0, p.c);
    integrate_model_a_with_trace(p, init, &trace, drive, horizon, dt)
}

/// As [`integrate_model_a`] with an explicitly supplied free-field trace
/// `u01(., x0)`.
pub fn integrate_model_a_with_trace(
    p: &ModelParams,
    init: &InitialState,
    trace: &PointTrace,
    drive: &Drive,
    horizon: f64,
    dt: f64,
) -> Result<PointHistory> {
    let p = validate_params(*p)?;
    let n = step_count(horizon, dt)?;
    let (h1, _) = trace_steps(dt);
    let omega_sq = p.omega * p.omega;
    let law = SourceLaw::A;

    let readout = |t: f64, y: &[f64; 3]| {
        let f = law.source(&p, y[0], y[1], 0.0);
        let free = p.alpha0 * trace.value(t) + p.alpha1 * trace.derivative(t, h1);
        (
            f,
            p.alpha0 * (-2.0 * p.gamma * y[2]) + p.alpha1 * (-2.0 * p.gamma * f) + free,
        )
    };
    let rhs = |t: f64, y: &[f64; 3]| {
        let (f, q_read) = readout(t, y);
        let acc = -omega_sq * y[0] + law.complementary(&p, q_read, drive.value(t));
        [y[1], acc, f]
    };

    let mut hist = PointHistory::with_capacity(dt, n + 1);
    let mut y = [init.q0, init.v0, 0.0];
    for k in 0..=n {
        let t = k as f64 * dt;
        check_blowup(t, y[0])?;
        let (f, q_read) = readout(t, &y);
        hist.push(t, y[0], y[1], q_read, f);
        if k < n {
            y = rk4_step(&rhs, t, &y, dt);
        }
    }
    Ok(hist)
}

/// Closed-form concentrated-memory trajectory (`gamma2 = 0`, no drive, field
/// at rest):
///
/// `q(t) = q_limit + exp(-k t) (C_c cos(omega_g t) + C_s sin(omega_g t))`
///
/// with `k = gamma1 alpha1 gamma gamma3`, `C_c = q(0) - q_limit` and
/// `C_s = (v0 + k C_c) / omega_g`. Differentiating the ansatz at zero gives
/// `q'(0) = -k C_c + omega_g C_s`, which is how `C_s` is fixed.
pub fn model_a_closed_concentrated(p: &ModelParams, init: &InitialState, t: f64) -> Result<f64> {
    Ok(concentrated_memory_constants(p, init)?.position(t))
}

/// A wide-memory solution (`gamma3 = 0`, `alpha1 = 0`) in exponential form.
///
/// Every combination `sum C_i exp(lambda_i t)` solves the differentiated
/// equation `q''' = -omega^2 q' + b q`; the integral equation itself also
/// demands `q''(0) = -omega^2 q(0)`, which by `lambda_i^2 + omega^2 = b / lambda_i`
/// is the constraint `C1 / lambda1 + 2 Re(C2 / lambda2) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WideMemorySolution {
    pub roots: CharacteristicRoots,
    pub c1: f64,
    pub c2: Complex64,
}

impl WideMemorySolution {
    pub fn new(p: &ModelParams, c2: Complex64) -> Result<Self> {
        let roots = wide_memory_roots(p)?;
        let c1 = -2.0 * roots.lambda1 * (c2 / roots.lambda2).re;
        Ok(Self { roots, c1, c2 })
    }

    pub fn position(&self, t: f64) -> f64 {
        let l1 = self.roots.lambda1;
        self.c1 * (l1 * t).exp() + 2.0 * (self.c2 * (self.roots.lambda2 * t).exp()).re
    }

    pub fn velocity(&self, t: f64) -> f64 {
        let (l1, l2) = (self.roots.lambda1, self.roots.lambda2);
        self.c1 * l1 * (l1 * t).exp() + 2.0 * (self.c2 * l2 * (l2 * t).exp()).re
    }

    pub fn acceleration(&self, t: f64) -> f64 {
        let (l1, l2) = (self.roots.lambda1, self.roots.lambda2);
        self.c1 * l1 * l1 * (l1 * t).exp() + 2.0 * (self.c2 * l2 * l2 * (l2 * t).exp()).re
    }

    /// `C1 / lambda1 + 2 Re(C2 / lambda2)`, zero by construction.
    pub fn admissibility_defect(&self) -> f64 {
        self.c1 / self.roots.lambda1 + 2.0 * (self.c2 / self.roots.lambda2).re
    }

    pub fn initial_state(&self) -> InitialState {
        InitialState::quiescent(self.position(0.0), self.velocity(0.0))
    }
}

pub fn model_a_wide_admissible(p: &ModelParams, c2: Complex64, t: f64) -> Result<f64> {
    Ok(WideMemorySolution::new(p, c2)?.position(t))
}
