//! Algebraic analysis of the effective equations: characteristic roots,
//! regime classification and the closed-form constants of the solvable cases.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{InitialState, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootRegime {
    DecayingOnly,
    SelfAccelerating,
}

/// Roots of `lambda^3 + omega^2 lambda - b = 0` for `omega^2 > 0`.
///
/// There is always exactly one real root; the remaining pair is complex
/// conjugate. Only `lambda2` (the member with positive imaginary part) is
/// stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoots {
    pub lambda1: f64,
    pub lambda2: Complex64,
    pub regime: RootRegime,
}

impl CharacteristicRoots {
    pub fn lambda3(&self) -> Complex64 {
        self.lambda2.conj()
    }

    pub fn all(&self) -> [Complex64; 3] {
        [
            Complex64::new(self.lambda1, 0.0),
            self.lambda2,
            self.lambda3(),
        ]
    }
}

/// Roots of the wide-memory characteristic polynomial
/// `lambda^3 + omega^2 lambda - 2 gamma1 alpha0 gamma gamma2`.
pub fn wide_memory_roots(p: &ModelParams) -> Result<CharacteristicRoots> {
    solve_wide_memory_cubic(p.omega * p.omega, p.wide_memory_coupling())
}

/// Solves `lambda^3 + s lambda - b = 0` with `s > 0`, `b != 0`.
pub fn solve_wide_memory_cubic(s: f64, b: f64) -> Result<CharacteristicRoots> {
    if b == 0.0 {
        return Err(Error::DegenerateCubic);
    }
    if !(s > 0.0) || !s.is_finite() || !b.is_finite() {
        return Err(Error::UnsupportedCase(format!(
            "cubic needs finite omega^2 > 0 and finite b (omega^2 = {s}, b = {b})"
        )));
    }

    // Depressed cubic with positive linear coefficient: hyperbolic form of the
    // single real root. Stays accurate for |b| << s^(3/2) where Cardano's sum
    // of cube roots cancels.
    let scale = (s / 3.0).sqrt();
    let arg = 1.5 * b / s / scale;
    let mut lambda1 = 2.0 * scale * (arg.asinh() / 3.0).sinh();
    lambda1 -= (lambda1 * (lambda1 * lambda1 + s) - b) / (3.0 * lambda1 * lambda1 + s);

    // Deflation: lambda^3 + s lambda - b = (lambda - lambda1)(lambda^2 + lambda1 lambda + lambda1^2 + s)
    let re = -0.5 * lambda1;
    let im = (s + 0.75 * lambda1 * lambda1).sqrt();
    let mut lambda2 = Complex64::new(re, im);
    let f = lambda2 * lambda2 * lambda2 + s * lambda2 - b;
    let df = 3.0 * lambda2 * lambda2 + s;
    lambda2 -= f / df;

    let regime = if lambda1 > 0.0 {
        RootRegime::SelfAccelerating
    } else {
        RootRegime::DecayingOnly
    };
    Ok(CharacteristicRoots {
        lambda1,
        lambda2,
        regime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HabitualRegime {
    Stable,
    SelfAccelerating,
}

/// Classifies the memory-free (`alpha0 = 0`) equation
/// `q'' = -omega^2 q - 2 gamma1 alpha1 gamma (-gamma2 + gamma3 d/dt) q`.
///
/// Self-acceleration requires both
/// `D = (g1 a1 g g3)^2 - omega^2 + 2 g1 a1 g g2 >= 0` and
/// `-g1 a1 g g3 + sqrt(D) >= 0`.
pub fn habitual_self_acceleration(p: &ModelParams) -> HabitualRegime {
    let friction = p.gamma1 * p.alpha1 * p.gamma * p.gamma3;
    let disc =
        friction * friction - p.omega * p.omega + 2.0 * p.gamma1 * p.alpha1 * p.gamma * p.gamma2;
    if disc >= 0.0 && -friction + disc.sqrt() >= 0.0 {
        HabitualRegime::SelfAccelerating
    } else {
        HabitualRegime::Stable
    }
}

/// Constants of the concentrated-memory solution
/// `q(t) = q_limit + exp(-decay_rate t) (c_cos cos(omega_g t) + c_sin sin(omega_g t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentratedMemory {
    pub omega_g: f64,
    pub decay_rate: f64,
    pub q_limit: f64,
    pub c_cos: f64,
    /// Fixed by `q'(0) = v0`: `c_sin = (v0 + decay_rate * c_cos) / omega_g`.
    pub c_sin: f64,
}

impl ConcentratedMemory {
    pub fn position(&self, t: f64) -> f64 {
        let (s, c) = (self.omega_g * t).sin_cos();
        self.q_limit + (-self.decay_rate * t).exp() * (self.c_cos * c + self.c_sin * s)
    }

    pub fn velocity(&self, t: f64) -> f64 {
        let (s, c) = (self.omega_g * t).sin_cos();
        let w = self.omega_g;
        let envelope = (-self.decay_rate * t).exp();
        envelope
            * (-self.decay_rate * (self.c_cos * c + self.c_sin * s)
                + w * (-self.c_cos * s + self.c_sin * c))
    }
}

pub fn concentrated_memory_constants(
    p: &ModelParams,
    init: &InitialState,
) -> Result<ConcentratedMemory> {
    let stiffening = 2.0 * p.gamma1 * p.alpha0 * p.gamma * p.gamma3;
    let decay_rate = p.gamma1 * p.alpha1 * p.gamma * p.gamma3;
    let omega_sq = p.omega * p.omega;
    let radicand = omega_sq + stiffening - decay_rate * decay_rate;
    if !(radicand > 0.0) {
        return Err(Error::OverdampedRegime { radicand });
    }
    let omega_g = radicand.sqrt();
    let q_limit = stiffening / (omega_sq + stiffening) * init.q0;
    let c_cos = init.q0 - q_limit;
    let c_sin = (init.v0 + decay_rate * c_cos) / omega_g;
    Ok(ConcentratedMemory {
        omega_g,
        decay_rate,
        q_limit,
        c_cos,
        c_sin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelBConstants {
    pub omega_gamma: f64,
    /// Constant term of the closed form, `(2 gamma / omega^2) v0`.
    pub q_limit: f64,
}

/// Checks the simplified law-B case `gamma0 = 1`, `alpha0 = 1`, `alpha1 = 0`.
pub(crate) fn require_reduced_b(p: &ModelParams) -> Result<()> {
    if p.gamma0 != 1.0 || p.alpha0 != 1.0 || p.alpha1 != 0.0 {
        return Err(Error::UnsupportedCase(format!(
            "closed form needs gamma0 = 1, alpha0 = 1, alpha1 = 0 (got {}, {}, {})",
            p.gamma0, p.alpha0, p.alpha1
        )));
    }
    Ok(())
}

pub fn model_b_constants(p: &ModelParams, init: &InitialState) -> Result<ModelBConstants> {
    require_reduced_b(p)?;
    let radicand = p.omega * p.omega - p.gamma * p.gamma;
    if !(radicand > 0.0) {
        return Err(Error::OverdampedRegime { radicand });
    }
    Ok(ModelBConstants {
        omega_gamma: radicand.sqrt(),
        q_limit: 2.0 * p.gamma / (p.omega * p.omega) * init.v0,
    })
}
