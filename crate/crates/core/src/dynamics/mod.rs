//! Reduced point dynamics of the oscillator.
//!
//! Eliminating the field leaves the oscillator coupled only to the readout
//! `Q(t) = (alpha0 + alpha1 d/dt)(-2 gamma int_0^t F_src + u01(t, x0))`.
//! The two coupling laws give:
//!
//! * law A: `F_src = -gamma2 q + gamma3 q'`, `f_compl = gamma1 Q + f0`;
//!   an integro-differential equation whose memory integral is carried as an
//!   extra state variable.
//! * law B: `F_src = gamma0 (Q - q)`, `f_compl = omega^2 Q + f0`; after
//!   applying `I + K` this becomes a second-order ODE with a rank-one term
//!   `2 gamma gamma0 alpha0 q'(0)`.

mod insulated;
mod model_a;
mod model_b;
mod reduce;

pub use insulated::{
    insulated_q_initial, insulated_q_rhs, integrate_insulated_q, integrate_insulated_q_with_trace,
    InsulatedInitial,
};
pub use model_a::{
    integrate_model_a, integrate_model_a_with_trace, model_a_closed_concentrated,
    model_a_wide_admissible, WideMemorySolution,
};
pub use model_b::{
    integrate_model_b, integrate_model_b_with_trace, limit_function_paradox, model_b_closed,
    model_b_residual, LimitParadox,
};
pub use reduce::{reduce_to_point, reduce_to_point_with_trace};

use crate::error::{Error, Result};
use crate::field::SourceHistory;
use crate::params::ModelParams;

/// Trajectories beyond this magnitude are reported as blow-ups.
pub const BLOWUP_THRESHOLD: f64 = 1e300;

/// Which coupling between oscillator and field is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceLaw {
    /// `F_src = -gamma2 q + gamma3 q'`, `f_compl = gamma1 Q + f0`.
    A,
    /// `F_src = gamma0 (Q - q)`, `f_compl = omega^2 Q + f0`.
    B,
}

impl SourceLaw {
    pub fn source(self, p: &ModelParams, q: f64, qdot: f64, readout: f64) -> f64 {
        match self {
            SourceLaw::A => -p.gamma2 * q + p.gamma3 * qdot,
            SourceLaw::B => p.gamma0 * (readout - q),
        }
    }

    /// Coefficient of `Q` in `f_compl`.
    pub fn readout_weight(self, p: &ModelParams) -> f64 {
        match self {
            SourceLaw::A => p.gamma1,
            SourceLaw::B => p.omega * p.omega,
        }
    }

    pub fn complementary(self, p: &ModelParams, readout: f64, f0: f64) -> f64 {
        self.readout_weight(p) * readout + f0
    }
}

impl std::str::FromStr for SourceLaw {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(SourceLaw::A),
            "B" | "b" => Ok(SourceLaw::B),
            other => Err(format!("unknown source law `{other}` (expected A or B)")),
        }
    }
}

/// Oscillator trajectory sampled on a uniform grid `t_k = k dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointHistory {
    pub dt: f64,
    pub t: Vec<f64>,
    pub q: Vec<f64>,
    pub qdot: Vec<f64>,
    /// The readout `Q(t) = <l(t)|u>`.
    pub readout: Vec<f64>,
    pub src: SourceHistory,
}

impl PointHistory {
    pub(crate) fn with_capacity(dt: f64, n: usize) -> Self {
        Self {
            dt,
            t: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            qdot: Vec::with_capacity(n),
            readout: Vec::with_capacity(n),
            src: SourceHistory::new(dt),
        }
    }

    pub(crate) fn push(&mut self, t: f64, q: f64, qdot: f64, readout: f64, f_src: f64) {
        self.t.push(t);
        self.q.push(q);
        self.qdot.push(qdot);
        self.readout.push(readout);
        self.src.push(f_src);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.t.last().copied().unwrap_or(0.0)
    }

    pub fn final_q(&self) -> f64 {
        self.q.last().copied().unwrap_or(f64::NAN)
    }

    /// Index of the grid point closest to `t`.
    pub fn index_at(&self, t: f64) -> usize {
        ((t / self.dt).round().max(0.0) as usize).min(self.len().saturating_sub(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectiveRegime {
    Habitual,
    ConcentratedMemory,
    WideMemory,
    GeneralA,
    ReducedB,
}

/// Coefficients of the effective equation written uniformly as
/// `M q'' + D q' + K q = W_int int_0^t q + W_q0 q(0) + W_v0 q'(0) + drives`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoefficients {
    pub regime: EffectiveRegime,
    pub mass_factor: f64,
    pub damping: f64,
    pub stiffness: f64,
    pub integral_weight: f64,
    pub initial_position_weight: f64,
    pub initial_velocity_weight: f64,
}

pub fn effective_coefficients(p: &ModelParams, law: SourceLaw) -> Result<EffectiveCoefficients> {
    match law {
        SourceLaw::A => {
            let g = p.gamma1 * p.gamma;
            let regime = if p.alpha0 == 0.0 {
                EffectiveRegime::Habitual
            } else if p.gamma2 == 0.0 {
                EffectiveRegime::ConcentratedMemory
            } else if p.gamma3 == 0.0 {
                EffectiveRegime::WideMemory
            } else {
                EffectiveRegime::GeneralA
            };
            Ok(EffectiveCoefficients {
                regime,
                mass_factor: 1.0,
                damping: 2.0 * g * p.alpha1 * p.gamma3,
                stiffness: p.omega * p.omega + 2.0 * g * p.alpha0 * p.gamma3
                    - 2.0 * g * p.alpha1 * p.gamma2,
                integral_weight: 2.0 * g * p.alpha0 * p.gamma2,
                initial_position_weight: 2.0 * g * p.alpha0 * p.gamma3,
                initial_velocity_weight: 0.0,
            })
        }
        SourceLaw::B => {
            let mass_factor = p.mass_factor();
            if !(mass_factor > 0.0) {
                return Err(Error::SingularMassFactor {
                    factor: mass_factor,
                });
            }
            let rank_one = 2.0 * p.gamma * p.gamma0 * p.alpha0;
            Ok(EffectiveCoefficients {
                regime: EffectiveRegime::ReducedB,
                mass_factor,
                damping: rank_one,
                stiffness: p.omega * p.omega,
                integral_weight: 0.0,
                initial_position_weight: 0.0,
                initial_velocity_weight: rank_one,
            })
        }
    }
}

/// Number of uniform steps covering `[0, horizon]`.
pub(crate) fn step_count(horizon: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() || !horizon.is_finite() || horizon < dt {
        return Err(Error::InvalidStep { dt, horizon });
    }
    Ok((horizon / dt).round() as usize)
}

pub(crate) fn check_blowup(t: f64, q: f64) -> Result<()> {
    if !q.is_finite() || q.abs() > BLOWUP_THRESHOLD {
        return Err(Error::UnstableBlowup { t, value: q.abs() });
    }
    Ok(())
}

/// One classical fourth-order Runge-Kutta step.
pub(crate) fn rk4_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let shift = |y: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &shift(y, &k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &shift(y, &k2, 0.5 * h));
    let k4 = f(t + h, &shift(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Steps for finite differences of the free-field trace: `dt` for first
/// derivatives, a fixed `1e-3` for the second and third, where a smaller
/// step would lose to round-off and a larger one to truncation.
pub(crate) fn trace_steps(dt: f64) -> (f64, f64) {
    (dt, 1e-3)
}
