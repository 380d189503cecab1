//! Physical constants of the coupled oscillator/field system.

use crate::error::{Error, Result};
use crate::field::WaveInitialData;

/// All constants of the coupled system.
///
/// `gamma` couples the oscillator into the field equation (the source term is
/// `-4 gamma c delta(x - x0) F_src`), `gamma0..gamma3` enter the two coupling
/// laws and `alpha0`, `alpha1` weight the readout
/// `Q(t) = alpha0 u(t, x0) + alpha1 du/dt(t, x0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub gamma: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub c: f64,
    pub x0: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            omega: 1.0,
            gamma: 0.0,
            gamma0: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            gamma3: 0.0,
            alpha0: 1.0,
            alpha1: 0.0,
            c: 1.0,
            x0: 0.0,
        }
    }
}

impl ModelParams {
    pub fn fields(&self) -> [(&'static str, f64); 10] {
        [
            ("omega", self.omega),
            ("gamma", self.gamma),
            ("gamma0", self.gamma0),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
            ("alpha0", self.alpha0),
            ("alpha1", self.alpha1),
            ("c", self.c),
            ("x0", self.x0),
        ]
    }

    /// Sets a parameter by its field name. Returns `false` for unknown names.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "omega" => &mut self.omega,
            "gamma" => &mut self.gamma,
            "gamma0" => &mut self.gamma0,
            "gamma1" => &mut self.gamma1,
            "gamma2" => &mut self.gamma2,
            "gamma3" => &mut self.gamma3,
            "alpha0" => &mut self.alpha0,
            "alpha1" => &mut self.alpha1,
            "c" => &mut self.c,
            "x0" => &mut self.x0,
            _ => return false,
        };
        *slot = value;
        true
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.fields()
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| v)
    }

    pub fn validate(self) -> Result<Self> {
        validate_params(self)
    }

    /// `2 gamma1 alpha0 gamma gamma2`, the constant term of the wide-memory cubic.
    pub fn wide_memory_coupling(&self) -> f64 {
        2.0 * self.gamma1 * self.alpha0 * self.gamma * self.gamma2
    }

    /// `1 + 2 gamma gamma0 alpha1`, the effective mass factor of law B.
    pub fn mass_factor(&self) -> f64 {
        1.0 + 2.0 * self.gamma * self.gamma0 * self.alpha1
    }
}

/// Checks finiteness and the sign constraints `c > 0`, `omega > 0`.
pub fn validate_params(p: ModelParams) -> Result<ModelParams> {
    for (field, value) in p.fields() {
        if !value.is_finite() {
            return Err(Error::NonFiniteParameter { field, value });
        }
    }
    if p.c <= 0.0 {
        return Err(Error::NonPositiveWaveSpeed {
            field: "c",
            value: p.c,
        });
    }
    if p.omega <= 0.0 {
        return Err(Error::NonPositiveOmega {
            field: "omega",
            value: p.omega,
        });
    }
    Ok(p)
}

/// Oscillator initial data together with the initial state of the field.
#[derive(Debug, Clone, Default)]
pub struct InitialState {
    pub q0: f64,
    pub v0: f64,
    pub field: WaveInitialData,
}

impl InitialState {
    /// Oscillator displaced to `q0` with velocity `v0`, field at rest.
    pub fn quiescent(q0: f64, v0: f64) -> Self {
        Self {
            q0,
            v0,
            field: WaveInitialData::zero(),
        }
    }

    pub fn with_field(mut self, field: WaveInitialData) -> Self {
        self.field = field;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ModelParams {
        ModelParams {
            omega: 1.0,
            gamma: 1.0,
            gamma0: 1.0,
            gamma1: 1.0,
            gamma2: 1.0,
            gamma3: 1.0,
            alpha0: 1.0,
            alpha1: 0.0,
            c: 1.0,
            x0: 0.0,
        }
    }

    #[test]
    fn accepts_valid_parameters() {
        assert_eq!(validate_params(unit()), Ok(unit()));
    }

    #[test]
    fn rejects_zero_wave_speed() {
        let p = ModelParams { c: 0.0, ..unit() };
        assert!(matches!(
            validate_params(p),
            Err(Error::NonPositiveWaveSpeed { field: "c", .. })
        ));
    }

    #[test]
    fn rejects_nan_omega() {
        let p = ModelParams {
            omega: f64::NAN,
            ..unit()
        };
        assert!(matches!(
            validate_params(p),
            Err(Error::NonFiniteParameter { field: "omega", .. })
        ));
    }

    #[test]
    fn rejects_nonpositive_omega() {
        let p = ModelParams {
            omega: -1.0,
            ..unit()
        };
        assert!(matches!(
            validate_params(p),
            Err(Error::NonPositiveOmega { .. })
        ));
    }

    #[test]
    fn set_and_get_by_name() {
        let mut p = unit();
        assert!(p.set("gamma2", 0.25));
        assert_eq!(p.get("gamma2"), Some(0.25));
        assert!(!p.set("nope", 1.0));
        assert_eq!(p.get("nope"), None);
    }
}
