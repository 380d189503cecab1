//! Closed-form field machinery for the wave equation on the whole line with a
//! source concentrated at `x0`.
//!
//! For `u_tt = c^2 u_xx - 4 gamma c delta(x - x0) F_src(t) + f1(t, x)` the
//! solution splits into the free part `u01` (initial data plus distributed
//! forcing) and a retarded contribution that only depends on the running
//! integral of `F_src`:
//!
//! `u(t, x) = -2 gamma * int_0^{t_r} F_src * H(t_r) + u01(t, x)`,
//! `t_r = t - |x - x0| / c`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::params::ModelParams;
use crate::quadrature;

/// A callable profile `s -> value`.
pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// A callable `(t, x) -> value`.
pub type Primitive = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Unit step with `H(0) = 1`.
pub fn heaviside(xi: f64) -> f64 {
    if xi >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `H(x + c(t - tau) - x0) - H(x - c(t - tau) - x0)`, evaluated literally.
pub fn step_difference_resolved(t: f64, tau: f64, x: f64, p: &ModelParams) -> i8 {
    let lag = p.c * (t - tau);
    (heaviside(x + lag - p.x0) - heaviside(x - lag - p.x0)) as i8
}

/// Piecewise value of the step difference away from the two characteristic
/// boundaries `tau = t -+ |x - x0| / c`:
/// `1` before the retarded time, `0` between, `-1` after the advanced time.
pub fn step_difference(t: f64, tau: f64, x: f64, p: &ModelParams) -> Result<i8> {
    let c_tau = p.c * tau;
    let ct = p.c * t;
    let offset = x - p.x0;
    if c_tau == ct + offset || c_tau == ct - offset {
        return Err(Error::BoundaryCase { tau });
    }
    Ok(step_difference_resolved(t, tau, x, p))
}

/// Initial data of the free field: `u(0, .)`, `u_t(0, .)` and an optional
/// primitive (in `x`) of the distributed forcing `f1`. Missing profiles are
/// identically zero.
///
/// When an antiderivative of `v0` is supplied the d'Alembert integral is
/// evaluated through it; otherwise by adaptive quadrature, whose error is
/// not smooth in `t` and is amplified by the finite differences taken of
/// point traces.
#[derive(Clone, Default)]
pub struct WaveInitialData {
    pub u0: Option<Profile>,
    pub v0: Option<Profile>,
    pub v0_primitive: Option<Profile>,
    pub f1_primitive: Option<Primitive>,
}

impl fmt::Debug for WaveInitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WaveInitialData")
            .field("u0", &self.u0.as_ref().map(|_| "<fn>"))
            .field("v0", &self.v0.as_ref().map(|_| "<fn>"))
            .field("v0_primitive", &self.v0_primitive.as_ref().map(|_| "<fn>"))
            .field("f1_primitive", &self.f1_primitive.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl WaveInitialData {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new<U, V>(u0: U, v0: V) -> Self
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
        V: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            u0: Some(Arc::new(u0)),
            v0: Some(Arc::new(v0)),
            v0_primitive: None,
            f1_primitive: None,
        }
    }

    pub fn with_displacement<U>(mut self, u0: U) -> Self
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.u0 = Some(Arc::new(u0));
        self
    }

    pub fn with_velocity<V>(mut self, v0: V) -> Self
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.v0 = Some(Arc::new(v0));
        self.v0_primitive = None;
        self
    }

    /// Sets `u_t(0, .)` together with an antiderivative `primitive' = v0`.
    pub fn with_velocity_primitive<V, P>(mut self, v0: V, primitive: P) -> Self
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.v0 = Some(Arc::new(v0));
        self.v0_primitive = Some(Arc::new(primitive));
        self
    }

    pub fn with_forcing_primitive<P>(mut self, f1: P) -> Self
    where
        P: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.f1_primitive = Some(Arc::new(f1));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.u0.is_none() && self.v0.is_none() && self.f1_primitive.is_none()
    }

    pub fn displacement(&self, x: f64) -> f64 {
        self.u0.as_ref().map_or(0.0, |u| u(x))
    }

    pub fn velocity(&self, x: f64) -> f64 {
        self.v0.as_ref().map_or(0.0, |v| v(x))
    }

    /// `u01(., x0)` as a callable time trace.
    pub fn point_trace(&self, x0: f64, c: f64) -> PointTrace {
        if self.is_zero() {
            return PointTrace::zero();
        }
        let data = self.clone();
        PointTrace::new(move |t| u01(&data, t, x0, c))
    }
}

/// d'Alembert solution of the source-free problem:
/// `(u0(x + ct) + u0(x - ct)) / 2 + (1 / 2c) int_{x-ct}^{x+ct} v0`.
pub fn homogeneous_solution(data: &WaveInitialData, t: f64, x: f64, c: f64) -> f64 {
    let mut value = 0.0;
    if let Some(u0) = &data.u0 {
        value += 0.5 * (u0(x + c * t) + u0(x - c * t));
    }
    match (&data.v0_primitive, &data.v0) {
        (Some(prim), _) => value += (prim(x + c * t) - prim(x - c * t)) / (2.0 * c),
        (None, Some(v0)) => {
            value += quadrature::integrate(|xi| v0(xi), x - c * t, x + c * t) / (2.0 * c)
        }
        (None, None) => {}
    }
    value
}

/// Free field: the homogeneous solution plus the retarded contribution of the
/// distributed forcing through its primitive `F1`,
/// `(1 / 2c) int_0^t [F1(tau, x + c(t - tau)) - F1(tau, x - c(t - tau))] dtau`.
///
/// The result does not depend on which primitive is supplied.
pub fn u01(data: &WaveInitialData, t: f64, x: f64, c: f64) -> f64 {
    let mut value = homogeneous_solution(data, t, x, c);
    if let Some(f1) = &data.f1_primitive {
        let integrand = |tau: f64| {
            let reach = c * (t - tau);
            f1(tau, x + reach) - f1(tau, x - reach)
        };
        value += quadrature::integrate(integrand, 0.0, t) / (2.0 * c);
    }
    value
}

/// The free field evaluated at one point as a function of time, with the
/// central-difference derivatives the effective equations need.
#[derive(Clone, Default)]
pub struct PointTrace(Option<Profile>);

impl fmt::Debug for PointTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => f.write_str("PointTrace(zero)"),
            Some(_) => f.write_str("PointTrace(<fn>)"),
        }
    }
}

impl PointTrace {
    pub fn zero() -> Self {
        Self(None)
    }

    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self(Some(Arc::new(f)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    pub fn value(&self, t: f64) -> f64 {
        self.0.as_ref().map_or(0.0, |f| f(t))
    }

    pub fn derivative(&self, t: f64, h: f64) -> f64 {
        match &self.0 {
            None => 0.0,
            Some(f) => (f(t + h) - f(t - h)) / (2.0 * h),
        }
    }

    pub fn second_derivative(&self, t: f64, h: f64) -> f64 {
        match &self.0 {
            None => 0.0,
            Some(f) => (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h),
        }
    }

    pub fn third_derivative(&self, t: f64, h: f64) -> f64 {
        match &self.0 {
            None => 0.0,
            Some(f) => {
                (f(t + 2.0 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2.0 * h))
                    / (2.0 * h * h * h)
            }
        }
    }
}

/// Samples of `F_src` on a uniform grid `t_k = k dt` together with the
/// trapezoid-accumulated integral `int_0^{t_k} F_src`.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceHistory {
    dt: f64,
    f_src: Vec<f64>,
    cum_integral: Vec<f64>,
}

impl SourceHistory {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            f_src: Vec::new(),
            cum_integral: Vec::new(),
        }
    }

    pub fn from_samples(dt: f64, f_src: Vec<f64>) -> Self {
        let mut history = Self::new(dt);
        history.f_src.reserve(f_src.len());
        history.cum_integral.reserve(f_src.len());
        for f in f_src {
            history.push(f);
        }
        history
    }

    /// Appends the sample for the next grid time.
    pub fn push(&mut self, f: f64) {
        let next = match (self.f_src.last(), self.cum_integral.last()) {
            (Some(&prev), Some(&acc)) => acc + 0.5 * self.dt * (prev + f),
            _ => 0.0,
        };
        self.f_src.push(f);
        self.cum_integral.push(next);
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.f_src.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f_src.is_empty()
    }

    pub fn f_src(&self) -> &[f64] {
        &self.f_src
    }

    pub fn cum_integral(&self) -> &[f64] {
        &self.cum_integral
    }

    pub fn t_end(&self) -> f64 {
        self.len().saturating_sub(1) as f64 * self.dt
    }

    /// Linear interpolation of the cumulative integral; zero for `t <= 0`.
    pub fn integral_at(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        let t_end = self.t_end();
        if self.len() < 2 || t > t_end + 1e-9 * self.dt {
            return Err(Error::HistoryTooShort {
                requested: t,
                available: t_end,
            });
        }
        let last = self.len() - 1;
        let pos = (t / self.dt).min(last as f64);
        let k = (pos.floor() as usize).min(last - 1);
        let frac = pos - k as f64;
        let (lo, hi) = (self.cum_integral[k], self.cum_integral[k + 1]);
        Ok(lo + frac * (hi - lo))
    }
}

/// `u(t, x)` on an x-grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

impl FieldSnapshot {
    pub fn new(t: f64, x: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        check_increasing(&x)?;
        Ok(Self { t, x, u })
    }
}

fn check_increasing(x: &[f64]) -> Result<()> {
    match x.windows(2).position(|w| !(w[1] > w[0])) {
        Some(i) => Err(Error::NonMonotoneGrid { index: i + 1 }),
        None => Ok(()),
    }
}

/// Source contribution `-2 gamma int_0^{t_r} F_src` gated by `H(t_r)`.
pub fn retarded_source_term(src: &SourceHistory, t: f64, x: f64, p: &ModelParams) -> Result<f64> {
    let retarded = t - (x - p.x0).abs() / p.c;
    if heaviside(retarded) == 0.0 {
        return Ok(0.0);
    }
    Ok(-2.0 * p.gamma * src.integral_at(retarded)?)
}

/// Full field `u(t, x)` from a source history and free-field data.
pub fn retarded_field(
    src: &SourceHistory,
    data: &WaveInitialData,
    t: f64,
    x: f64,
    p: &ModelParams,
) -> Result<f64> {
    Ok(retarded_source_term(src, t, x, p)? + u01(data, t, x, p.c))
}

pub fn field_snapshot(
    src: &SourceHistory,
    data: &WaveInitialData,
    t: f64,
    x_grid: &[f64],
    p: &ModelParams,
) -> Result<FieldSnapshot> {
    field_snapshot_with(Execution::default(), src, data, t, x_grid, p)
}

pub fn field_snapshot_with(
    exec: Execution,
    src: &SourceHistory,
    data: &WaveInitialData,
    t: f64,
    x_grid: &[f64],
    p: &ModelParams,
) -> Result<FieldSnapshot> {
    check_increasing(x_grid)?;
    let u = exec::try_map(exec, x_grid, |&x| retarded_field(src, data, t, x, p))?;
    Ok(FieldSnapshot {
        t,
        x: x_grid.to_vec(),
        u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn unit_params() -> ModelParams {
        ModelParams {
            gamma: 0.7,
            c: 1.0,
            x0: 0.0,
            ..ModelParams::default()
        }
    }

    #[test]
    fn heaviside_convention() {
        assert_eq!(heaviside(0.0), 1.0);
        assert_eq!(heaviside(-1e-300), 0.0);
        assert_eq!(heaviside(5.0), 1.0);
    }

    #[test]
    fn step_difference_table() {
        let p = unit_params();
        assert_eq!(step_difference(2.0, 0.0, 0.0, &p), Ok(1));
        assert_eq!(step_difference(1.0, 2.0, 10.0, &p), Ok(0));
        assert_eq!(step_difference(0.0, 100.0, 1.0, &p), Ok(-1));
    }

    #[test]
    fn step_difference_boundary() {
        let p = unit_params();
        assert!(matches!(
            step_difference(2.0, 1.0, 1.0, &p),
            Err(Error::BoundaryCase { .. })
        ));
        assert!(matches!(
            step_difference(2.0, 3.0, 1.0, &p),
            Err(Error::BoundaryCase { .. })
        ));
        // With H(0) = 1: H(2) - H(0) at the retarded boundary, H(0) - H(2) at
        // the advanced one.
        assert_eq!(step_difference_resolved(2.0, 1.0, 1.0, &p), 0);
        assert_eq!(step_difference_resolved(2.0, 3.0, 1.0, &p), 0);
    }

    proptest! {
        #[test]
        fn step_difference_matches_piecewise(t in 0.0f64..10.0, tau in -5.0f64..15.0, x in -10.0f64..10.0, c in 0.2f64..3.0) {
            let p = ModelParams { c, x0: 0.3, ..unit_params() };
            let r = (x - p.x0).abs() / c;
            prop_assume!((tau - (t - r)).abs() > 1e-9 && (tau - (t + r)).abs() > 1e-9);
            let expected = if tau < t - r { 1 } else if tau < t + r { 0 } else { -1 };
            prop_assert_eq!(step_difference(t, tau, x, &p).unwrap(), expected);
        }
    }

    #[test]
    fn homogeneous_zero_data() {
        let d = WaveInitialData::zero();
        assert_eq!(homogeneous_solution(&d, 3.0, 1.0, 2.0), 0.0);
    }

    #[test]
    fn homogeneous_standing_wave() {
        let d = WaveInitialData::zero().with_displacement(f64::sin);
        for &(t, x) in &[(0.3, 1.0), (2.0, -0.4), (7.5, 3.3)] {
            assert_abs_diff_eq!(
                homogeneous_solution(&d, t, x, 1.0),
                0.5 * ((x + t).sin() + (x - t).sin()),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn homogeneous_unit_velocity() {
        let d = WaveInitialData::zero().with_velocity(|_| 1.0);
        assert_abs_diff_eq!(
            homogeneous_solution(&d, 2.5, 0.4, 1.0),
            2.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn u01_without_forcing_is_homogeneous() {
        let d = WaveInitialData::new(|x: f64| x.cos(), |x: f64| (-x * x).exp());
        assert_eq!(
            u01(&d, 1.3, 0.2, 1.5),
            homogeneous_solution(&d, 1.3, 0.2, 1.5)
        );
        assert_eq!(u01(&WaveInitialData::zero(), 1.0, 2.0, 1.0), 0.0);
    }

    #[test]
    fn u01_constant_forcing() {
        // F1(t, x) = x is a primitive of f1 = 1; the solution is t^2 / 2.
        let d = WaveInitialData::zero().with_forcing_primitive(|_, x| x);
        for &t in &[0.5, 1.0, 3.0] {
            assert_abs_diff_eq!(u01(&d, t, 0.7, 1.0), t * t / 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn u01_independent_of_primitive_choice() {
        let a = WaveInitialData::zero().with_forcing_primitive(|t, x| (t * x).sin());
        let b = WaveInitialData::zero()
            .with_forcing_primitive(|t, x| (t * x).sin() + t.exp() + 3.0 * t * t);
        for &(t, x) in &[(0.5, 0.1), (2.0, -1.0), (3.5, 2.2)] {
            assert_abs_diff_eq!(u01(&a, t, x, 1.3), u01(&b, t, x, 1.3), epsilon = 1e-9);
        }
    }

    #[test]
    fn source_history_trapezoid() {
        let s = SourceHistory::from_samples(0.5, vec![1.0, 3.0, 2.0]);
        assert_eq!(s.cum_integral(), &[0.0, 1.0, 2.25]);
        assert_eq!(s.integral_at(0.25).unwrap(), 0.5);
        assert_eq!(s.integral_at(-1.0).unwrap(), 0.0);
        assert_eq!(s.integral_at(1.0).unwrap(), 2.25);
        assert!(matches!(
            s.integral_at(1.2),
            Err(Error::HistoryTooShort { .. })
        ));
    }

    fn smooth_history(dt: f64, n: usize) -> SourceHistory {
        SourceHistory::from_samples(
            dt,
            (0..n).map(|k| (0.9 * k as f64 * dt).sin() + 0.2).collect(),
        )
    }

    #[test]
    fn causality_of_retarded_field() {
        let p = unit_params();
        let src = smooth_history(0.01, 1001);
        let d = WaveInitialData::zero().with_displacement(|x: f64| (-x * x).exp());
        for &(t, x) in &[(0.5, 2.0), (1.0, -3.0), (0.0, 0.5)] {
            assert_eq!(
                retarded_field(&src, &d, t, x, &p).unwrap(),
                u01(&d, t, x, p.c)
            );
        }
    }

    #[test]
    fn zero_source_leaves_free_field() {
        let p = unit_params();
        let src = SourceHistory::from_samples(0.1, vec![0.0; 101]);
        let d = WaveInitialData::zero().with_displacement(f64::sin);
        assert_eq!(
            retarded_field(&src, &d, 4.0, 1.0, &p).unwrap(),
            u01(&d, 4.0, 1.0, p.c)
        );
    }

    #[test]
    fn value_at_source_is_running_integral() {
        let p = unit_params();
        let src = smooth_history(0.01, 1001);
        let d = WaveInitialData::zero();
        for k in [0usize, 10, 500, 1000] {
            let t = k as f64 * 0.01;
            let u = retarded_field(&src, &d, t, p.x0, &p).unwrap();
            assert_abs_diff_eq!(u, -2.0 * p.gamma * src.cum_integral()[k], epsilon = 1e-14);
        }
    }

    #[test]
    fn history_too_short_is_reported() {
        let p = unit_params();
        let src = smooth_history(0.01, 101);
        assert!(matches!(
            retarded_field(&src, &WaveInitialData::zero(), 2.0, 0.5, &p),
            Err(Error::HistoryTooShort { .. })
        ));
    }

    #[test]
    fn propagation_identity() {
        let p = ModelParams {
            c: 2.0,
            x0: 1.0,
            ..unit_params()
        };
        let dt = 1e-3;
        let src = smooth_history(dt, 5001);
        let d = WaveInitialData::zero();
        for &(t, x) in &[(3.0, 2.5), (4.2, -3.0), (5.0, 1.0)] {
            let tr = t - (x - p.x0).abs() / p.c;
            let lhs = retarded_field(&src, &d, t, x, &p).unwrap();
            let rhs = retarded_field(&src, &d, tr, p.x0, &p).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn snapshot_single_point_and_zero() {
        let p = unit_params();
        let src = smooth_history(0.01, 501);
        let d = WaveInitialData::zero();
        let s = field_snapshot(&src, &d, 3.0, &[p.x0], &p).unwrap();
        assert_eq!(s.u, vec![retarded_field(&src, &d, 3.0, p.x0, &p).unwrap()]);

        let zero = SourceHistory::from_samples(0.01, vec![0.0; 501]);
        let grid: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
        let s = field_snapshot(&zero, &d, 3.0, &grid, &p).unwrap();
        assert!(s.u.iter().all(|&u| u == 0.0));
    }

    #[test]
    fn snapshot_symmetric_about_source() {
        let p = ModelParams {
            x0: 0.5,
            ..unit_params()
        };
        let src = smooth_history(0.01, 501);
        let grid: Vec<f64> = (0..101).map(|i| p.x0 - 5.0 + 0.1 * i as f64).collect();
        let s = field_snapshot(&src, &WaveInitialData::zero(), 4.0, &grid, &p).unwrap();
        for i in 0..grid.len() {
            assert_abs_diff_eq!(s.u[i], s.u[grid.len() - 1 - i], epsilon = 1e-12);
        }
    }

    #[test]
    fn snapshot_rejects_unsorted_grid() {
        let p = unit_params();
        let src = smooth_history(0.01, 11);
        assert!(matches!(
            field_snapshot(&src, &WaveInitialData::zero(), 0.05, &[0.0, 0.0], &p),
            Err(Error::NonMonotoneGrid { index: 1 })
        ));
    }

    proptest! {
        #[test]
        fn retarded_field_is_additive(a in -2.0f64..2.0, b in -2.0f64..2.0, t in 0.0f64..4.0, x in -3.0f64..3.0) {
            let p = unit_params();
            let n = 501;
            let fa: Vec<f64> = (0..n).map(|k| a * (0.01 * k as f64).cos()).collect();
            let fb: Vec<f64> = (0..n).map(|k| b * (0.02 * k as f64).sin()).collect();
            let sum: Vec<f64> = fa.iter().zip(&fb).map(|(x, y)| x + y).collect();
            let da = WaveInitialData::zero().with_displacement(move |x: f64| a * x.sin());
            let db = WaveInitialData::zero().with_displacement(move |x: f64| b * x.cos());
            let dsum = WaveInitialData::zero().with_displacement(move |x: f64| a * x.sin() + b * x.cos());
            let ua = retarded_field(&SourceHistory::from_samples(0.01, fa), &da, t, x, &p).unwrap();
            let ub = retarded_field(&SourceHistory::from_samples(0.01, fb), &db, t, x, &p).unwrap();
            let us = retarded_field(&SourceHistory::from_samples(0.01, sum), &dsum, t, x, &p).unwrap();
            prop_assert!((ua + ub - us).abs() < 1e-12);
        }
    }
}
