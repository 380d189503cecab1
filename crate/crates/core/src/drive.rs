//! External drives `f0(t)` acting directly on the oscillator.

use std::fmt;
use std::sync::Arc;

#[derive(Clone, Default)]
pub enum Drive {
    #[default]
    Zero,
    /// `amplitude * sin(omega t + phase)`
    Sinusoid {
        amplitude: f64,
        omega: f64,
        phase: f64,
    },
    /// `amplitude * exp(-((t - center) / width)^2 / 2)`
    GaussianPulse {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Drive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Drive::Zero => f.write_str("Zero"),
            Drive::Sinusoid {
                amplitude,
                omega,
                phase,
            } => f
                .debug_struct("Sinusoid")
                .field("amplitude", amplitude)
                .field("omega", omega)
                .field("phase", phase)
                .finish(),
            Drive::GaussianPulse {
                amplitude,
                center,
                width,
            } => f
                .debug_struct("GaussianPulse")
                .field("amplitude", amplitude)
                .field("center", center)
                .field("width", width)
                .finish(),
            Drive::Custom(_) => f.write_str("Custom(<fn>)"),
        }
    }
}

impl Drive {
    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Drive::Custom(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Drive::Zero)
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Drive::Zero => 0.0,
            Drive::Sinusoid {
                amplitude,
                omega,
                phase,
            } => amplitude * (omega * t + phase).sin(),
            Drive::GaussianPulse {
                amplitude,
                center,
                width,
            } => {
                let z = (t - center) / width;
                amplitude * (-0.5 * z * z).exp()
            }
            Drive::Custom(f) => f(t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        assert_eq!(Drive::Zero.value(3.0), 0.0);
        let s = Drive::Sinusoid {
            amplitude: 2.0,
            omega: 1.0,
            phase: 0.0,
        };
        assert!((s.value(std::f64::consts::FRAC_PI_2) - 2.0).abs() < 1e-15);
        let g = Drive::GaussianPulse {
            amplitude: 1.5,
            center: 4.0,
            width: 0.5,
        };
        assert_eq!(g.value(4.0), 1.5);
        assert!(g.value(10.0) < 1e-30);
        assert_eq!(Drive::custom(|t| 3.0 * t).value(2.0), 6.0);
    }
}
