use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wave speed `{field}` must be positive, got {value}")]
    NonPositiveWaveSpeed { field: &'static str, value: f64 },
    #[error("angular frequency `{field}` must be positive, got {value}")]
    NonPositiveOmega { field: &'static str, value: f64 },
    #[error("parameter `{field}` is not finite ({value})")]
    NonFiniteParameter { field: &'static str, value: f64 },

    #[error("cubic is degenerate: 2*gamma1*alpha0*gamma*gamma2 = 0")]
    DegenerateCubic,
    #[error("overdamped regime (radicand {radicand} <= 0) is not supported")]
    OverdampedRegime { radicand: f64 },
    #[error("unsupported parameter case: {0}")]
    UnsupportedCase(String),

    #[error("tau = {tau} sits exactly on a characteristic boundary")]
    BoundaryCase { tau: f64 },
    #[error("retarded time {requested} exceeds stored history (ends at {available})")]
    HistoryTooShort { requested: f64, available: f64 },
    #[error("spatial grid must be strictly increasing (index {index})")]
    NonMonotoneGrid { index: usize },

    #[error("invalid time step dt = {dt} (horizon {horizon})")]
    InvalidStep { dt: f64, horizon: f64 },
    #[error("trajectory blew up at t = {t} (|q| = {value:e})")]
    UnstableBlowup { t: f64, value: f64 },
    #[error("mass factor 1 + 2*gamma*gamma0*alpha1 = {factor} must be positive")]
    SingularMassFactor { factor: f64 },
    #[error("initial readout Q(0) cannot be solved: 1 + 2*gamma*gamma0*alpha1 = {factor}")]
    SingularInitialData { factor: f64 },

    #[error("Courant number {cfl} exceeds 1")]
    CflViolation { cfl: f64 },
    #[error("lattice window too narrow: distance {distance} to the nearest edge must exceed c*T = {reach}")]
    WindowTooNarrow { distance: f64, reach: f64 },
    #[error("lattice coupling system is singular at step {step}")]
    SingularCoupling { step: usize },
    #[error("invalid lattice configuration: {0}")]
    InvalidLattice(String),

    #[error("invalid reflection scenario: {0}")]
    InvalidScenario(String),
    #[error("convergence study needs at least 3 levels, got {0}")]
    TooFewLevels(usize),

    #[error("csv: {0}")]
    Csv(String),
}
