//! Complete reflection of a right-to-left wave by the oscillator.
//!
//! If the readout vanishes identically, `W(t) = -2 gamma int_0^t F_src + u01(t, x0)`
//! is annihilated by `alpha0 + alpha1 d/dt`, so `W = const0 exp(-alpha01 t)`
//! with `alpha01 = alpha0 / alpha1`. For an incident wave `u01 = u+(t + x/c)`
//! the field is then zero behind the oscillator (up to the transient) and the
//! mirror image `-u+(t - x/c + 2 x0 / c)` ahead of it.
//!
//! The converse (that complete reflection happens only for a single-frequency
//! incident wave at the eigenfrequency) is not proved here; [`resonance_check`]
//! encodes it as a classification and the lattice runs only probe the forward
//! direction.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::dynamics::SourceLaw;
use crate::error::{Error, Result};
use crate::field::{Profile, WaveInitialData};
use crate::lattice::{run_coupled_observed, LatticeConfig};
use crate::params::{validate_params, InitialState, ModelParams};
use crate::Drive;

/// Incident profile `s -> u+(s)` with its derivative.
#[derive(Clone)]
pub struct Incident {
    profile: Profile,
    derivative: Profile,
    second: Profile,
}

impl fmt::Debug for Incident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Incident(<fn>)")
    }
}

impl Incident {
    pub fn new<U, D, S>(profile: U, derivative: D, second: S) -> Self
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        S: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            profile: Arc::new(profile),
            derivative: Arc::new(derivative),
            second: Arc::new(second),
        }
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, |_| 0.0, |_| 0.0)
    }

    /// `u+(s) = amplitude sin(frequency (s - s0)) + offset`.
    pub fn sinusoid(amplitude: f64, frequency: f64, s0: f64, offset: f64) -> Self {
        let w = frequency;
        Self::new(
            move |s| amplitude * (w * (s - s0)).sin() + offset,
            move |s| amplitude * w * (w * (s - s0)).cos(),
            move |s| -amplitude * w * w * (w * (s - s0)).sin(),
        )
    }

    pub fn value(&self, s: f64) -> f64 {
        (self.profile)(s)
    }

    pub fn slope(&self, s: f64) -> f64 {
        (self.derivative)(s)
    }

    pub fn curvature(&self, s: f64) -> f64 {
        (self.second)(s)
    }

    /// Field data at `t = 0` for the wave `u+(t + x/c)`.
    pub fn initial_data(&self, c: f64) -> WaveInitialData {
        let (u, v, w) = (
            self.profile.clone(),
            self.derivative.clone(),
            self.profile.clone(),
        );
        WaveInitialData::zero()
            .with_displacement(move |x| u(x / c))
            .with_velocity_primitive(move |x| v(x / c), move |x| c * w(x / c))
    }
}

#[derive(Debug, Clone)]
pub struct ReflectionScenario {
    pub incident: Incident,
    pub const0: f64,
    alpha01: f64,
    pub params: ModelParams,
}

impl ReflectionScenario {
    /// `alpha01` is forced to `alpha0 / alpha1`; with `alpha1 = 0` only
    /// `const0 = 0` is annihilated.
    pub fn new(params: ModelParams, incident: Incident, const0: f64) -> Result<Self> {
        let params = validate_params(params)?;
        let alpha01 = if params.alpha1 != 0.0 {
            params.alpha0 / params.alpha1
        } else if const0 != 0.0 {
            return Err(Error::InvalidScenario(
                "const0 must vanish when alpha1 = 0".into(),
            ));
        } else {
            0.0
        };
        Ok(Self {
            incident,
            const0,
            alpha01,
            params,
        })
    }

    pub fn alpha01(&self) -> f64 {
        self.alpha01
    }

    pub fn transient(&self, t: f64) -> f64 {
        if self.const0 == 0.0 {
            0.0
        } else {
            self.const0 * (-self.alpha01 * t).exp()
        }
    }
}

/// The three-region field of a completely reflected incident wave.
pub fn reflected_field(sc: &ReflectionScenario, t: f64, x: f64) -> f64 {
    let p = &sc.params;
    let retarded = t - (x - p.x0).abs() / p.c;
    if retarded < 0.0 {
        return sc.incident.value(t + x / p.c);
    }
    if x <= p.x0 {
        sc.transient(retarded)
    } else {
        sc.transient(retarded) - sc.incident.value(t - x / p.c + 2.0 * p.x0 / p.c)
            + sc.incident.value(t + x / p.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resonance {
    CompleteReflection,
    NotComplete,
}

pub const RESONANCE_TOLERANCE: f64 = 1e-9;

/// Classifies the trigonometric part of `u01(., x0)` given as
/// `(angular frequency, amplitude)` pairs. Zero-frequency offsets and
/// zero-amplitude entries are ignored.
pub fn resonance_check(p: &ModelParams, spectrum: &[(f64, f64)]) -> Resonance {
    let mut active = spectrum
        .iter()
        .filter(|(w, a)| *w != 0.0 && *a != 0.0)
        .map(|(w, _)| w.abs());
    match (active.next(), active.next()) {
        (Some(w), None) if (w - p.omega).abs() <= RESONANCE_TOLERANCE * p.omega => {
            Resonance::CompleteReflection
        }
        _ => Resonance::NotComplete,
    }
}

/// Free oscillation `q = a_sin sin(omega t) + a_cos cos(omega t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeOscillation {
    pub a_sin: f64,
    pub a_cos: f64,
}

impl FreeOscillation {
    pub fn initial_state(&self, omega: f64) -> InitialState {
        InitialState::quiescent(self.a_cos, omega * self.a_sin)
    }
}

/// Picks the free oscillation that keeps `Q = 0` against the incident wave.
///
/// With `Q = 0` and `W(0) = u01(0, x0) - const0 = 0`, the readout stays zero
/// iff `W' = -2 gamma F_src + u01'` vanishes. For a resonant incident wave
/// `W'` is a sinusoid at `omega`, so `W'(0) = W''(0) = 0` suffices: a 2x2
/// linear system in `(a_sin, a_cos)`, since `F_src` and `F_src'` at zero are
/// linear in them (law A: `F = -gamma2 q + gamma3 q'`; law B with `Q = 0`:
/// `F = -gamma0 q`). The transient part of `u01` is excluded from the match.
pub fn phase_match(sc: &ReflectionScenario, law: SourceLaw) -> Result<FreeOscillation> {
    let p = &sc.params;
    let w = p.omega;
    let s0 = p.x0 / p.c;
    let target_f = (sc.incident.slope(s0) + sc.alpha01 * sc.const0) / (2.0 * p.gamma);
    let target_df =
        (sc.incident.curvature(s0) - sc.alpha01 * sc.alpha01 * sc.const0) / (2.0 * p.gamma);
    // Rows: F(0), F'(0); columns: a_sin, a_cos.
    let m = match law {
        SourceLaw::A => [
            [p.gamma3 * w, -p.gamma2],
            [-p.gamma2 * w, -p.gamma3 * w * w],
        ],
        SourceLaw::B => [[0.0, -p.gamma0], [-p.gamma0 * w, 0.0]],
    };
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(det.abs() > 0.0) || !det.is_finite() || p.gamma == 0.0 {
        return Err(Error::InvalidScenario(
            "oscillator cannot be phase-matched: coupling is degenerate".into(),
        ));
    }
    Ok(FreeOscillation {
        a_sin: (target_f * m[1][1] - m[0][1] * target_df) / det,
        a_cos: (m[0][0] * target_df - m[1][0] * target_f) / det,
    })
}

/// Lattice evidence for complete reflection.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionReport {
    pub t: Vec<f64>,
    pub readout: Vec<f64>,
    /// Largest `|u - reflected_field|` behind the oscillator at each step.
    pub shadow_max: Vec<f64>,
    pub max_readout: f64,
    pub max_shadow: f64,
    pub oscillator: FreeOscillation,
}

/// Runs the lattice with the incident wave as initial data and the
/// oscillator on its phase-matched free motion.
///
/// The shadow residual is taken over nodes with `x < x0` inside the light cone
/// of the source, at least two cells from its front, and out of reach of the
/// window ends.
pub fn verify_rejection(
    sc: &ReflectionScenario,
    law: SourceLaw,
    cfg: &LatticeConfig,
    horizon: f64,
) -> Result<RejectionReport> {
    let p = sc.params;
    let oscillator = phase_match(sc, law)?;
    let init = oscillator
        .initial_state(p.omega)
        .with_field(sc.incident.initial_data(p.c));
    let dx = cfg.dx();
    let x = cfg.nodes();
    let mut shadow_max = Vec::new();
    let hist = run_coupled_observed(&p, &init, law, &Drive::Zero, cfg, horizon, |_, t, u| {
        let mut worst = 0.0f64;
        for (&xj, &uj) in x.iter().zip(u) {
            let inside = t - (p.x0 - xj) / p.c >= 2.0 * dx / p.c;
            let clear = xj - cfg.x_min > p.c * t + 2.0 * dx;
            if xj < p.x0 && inside && clear {
                worst = worst.max((uj - reflected_field(sc, t, xj)).abs());
            }
        }
        shadow_max.push(worst);
    })?;
    let max_readout = hist.readout.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let max_shadow = shadow_max.iter().copied().fold(0.0, f64::max);
    Ok(RejectionReport {
        t: hist.t,
        readout: hist.readout,
        shadow_max,
        max_readout,
        max_shadow,
        oscillator,
    })
}

/// Default resolution for rejection runs: a few periods, 2 pi / (omega dx)
/// of about 60 cells per wavelength.
pub fn default_rejection_lattice(p: &ModelParams, horizon: f64) -> LatticeConfig {
    let dx = 2.0 * PI * p.c / (p.omega * 60.0);
    LatticeConfig::for_horizon(p, horizon, dx, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params() -> ModelParams {
        ModelParams {
            omega: 2.0,
            gamma: 0.3,
            gamma0: 1.0,
            alpha0: 1.0,
            x0: 0.4,
            ..ModelParams::default()
        }
    }

    fn resonant(p: ModelParams) -> ReflectionScenario {
        let s0 = p.x0 / p.c;
        ReflectionScenario::new(p, Incident::sinusoid(0.5, p.omega, s0, 0.0), 0.0).unwrap()
    }

    #[test]
    fn incident_trace_is_the_profile() {
        let p = params();
        let sc = resonant(p);
        let trace = sc.incident.initial_data(p.c).point_trace(p.x0, p.c);
        for k in 0..40 {
            let t = 0.31 * k as f64;
            let s = t + p.x0 / p.c;
            assert!((trace.value(t) - sc.incident.value(s)).abs() < 1e-14);
            assert!((trace.second_derivative(t, 1e-3) - sc.incident.curvature(s)).abs() < 1e-5);
        }
    }

    #[test]
    fn shadow_identity() {
        let sc = resonant(params());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let t: f64 = rng.gen_range(0.0..20.0);
            let x = sc.params.x0 - rng.gen_range(0.0..t);
            assert_eq!(reflected_field(&sc, t, x), 0.0);
        }
    }

    #[test]
    fn mirror_identity_and_continuity() {
        let p = ModelParams {
            alpha1: 0.5,
            ..params()
        };
        let sc = ReflectionScenario::new(p, Incident::sinusoid(1.0, 2.0, 0.1, 0.2), 0.7).unwrap();
        assert_eq!(sc.alpha01(), 2.0);
        for k in 0..50 {
            let t = 0.3 * k as f64;
            let x = p.x0 + 0.11 * k as f64 % t.max(1e-9);
            let r = t - (x - p.x0).abs() / p.c;
            if r >= 0.0 {
                let lhs = reflected_field(&sc, t, x)
                    + sc.incident.value(t - x / p.c + 2.0 * p.x0 / p.c)
                    - sc.incident.value(t + x / p.c);
                assert!((lhs - 0.7 * (-2.0 * r).exp()).abs() < 1e-12);
            }
            assert!((reflected_field(&sc, t, p.x0) - 0.7 * (-2.0 * t).exp()).abs() < 1e-15);
        }
        // Ahead of the front the incident wave is untouched.
        assert_eq!(
            reflected_field(&sc, 0.5, p.x0 + 3.0),
            sc.incident.value(0.5 + p.x0 + 3.0)
        );
    }

    #[test]
    fn annihilated_transient() {
        let p = ModelParams {
            alpha0: 0.8,
            alpha1: 0.4,
            ..params()
        };
        let sc = ReflectionScenario::new(p, Incident::zero(), 1.3).unwrap();
        for k in 0..20 {
            let t = 0.37 * k as f64;
            let value = sc.transient(t);
            let rate = -sc.alpha01() * value;
            assert!((p.alpha0 * value + p.alpha1 * rate).abs() < 1e-15);
        }
        assert!(ReflectionScenario::new(params(), Incident::zero(), 1.0).is_err());
    }

    #[test]
    fn resonance_classification() {
        let p = params();
        let w = p.omega;
        assert_eq!(
            resonance_check(&p, &[(w, 1.0)]),
            Resonance::CompleteReflection
        );
        assert_eq!(
            resonance_check(&p, &[(w, 1.0), (0.0, 3.0)]),
            Resonance::CompleteReflection
        );
        assert_eq!(
            resonance_check(&p, &[(w, 1.0), (2.0 * w, 0.1)]),
            Resonance::NotComplete
        );
        assert_eq!(
            resonance_check(&p, &[(0.999 * w, 1.0)]),
            Resonance::NotComplete
        );
        assert_eq!(resonance_check(&p, &[]), Resonance::NotComplete);
    }

    #[test]
    fn rejection_on_the_lattice() {
        for law in [SourceLaw::A, SourceLaw::B] {
            let p = ModelParams {
                gamma1: 1.0,
                gamma2: 0.4,
                gamma3: 0.7,
                ..params()
            };
            let horizon = 8.0;
            let cfg = default_rejection_lattice(&p, horizon);
            let on = verify_rejection(&resonant(p), law, &cfg, horizon).unwrap();
            let s0 = p.x0 / p.c;
            let off_sc =
                ReflectionScenario::new(p, Incident::sinusoid(0.5, 1.3 * p.omega, s0, 0.0), 0.0)
                    .unwrap();
            let off = verify_rejection(&off_sc, law, &cfg, horizon).unwrap();
            assert!(on.max_readout < 1e-2, "{law:?}: {}", on.max_readout);
            assert!(off.max_readout > 10.0 * on.max_readout);
            assert!(on.max_shadow < 1e-2);
        }
    }

    #[test]
    fn zero_incident_is_silent() {
        let p = params();
        let sc = ReflectionScenario::new(p, Incident::zero(), 0.0).unwrap();
        let cfg = default_rejection_lattice(&p, 3.0);
        let rep = verify_rejection(&sc, SourceLaw::B, &cfg, 3.0).unwrap();
        assert_eq!(rep.max_readout, 0.0);
        assert_eq!(rep.max_shadow, 0.0);
    }
}
