//! Brute-force discretisation of the full coupled system.
//!
//! The field obeys `u_tt = c^2 u_xx - 4 gamma c delta(x - x0) F_src + f1` on a
//! finite window with Dirichlet ends, advanced by the explicit leapfrog
//! scheme; the oscillator is advanced by Stormer-Verlet with the same step.
//!
//! At Courant number one the scheme propagates free waves exactly between
//! nodes, and a point deposit spreads over a checkerboard: a node inside
//! the discrete light cone sees every other past impulse. Splitting the
//! deposit equally over the two nodes around `x0` (the default grid puts
//! `x0` at a cell midpoint) fills both sublattices, so the field at
//! distance `(l + 1/2) dx` is a plain running sum of the source, accurate to
//! `O(dt^2)` against the retarded formula.
//!
//! The readout at step `n` is the interpolated field plus half of the
//! current step's own deposit, `U_n ~ -2 gamma int_0^{t_n} F_src + u01`,
//! and `dU/dt` is a centred difference with the not-yet-known `F_{n+1}`
//! extrapolated linearly. Both are affine in `F_n`, which in turn depends
//! on the readout (law B) or on `q_{n+1}` (law A through `q'`); the three
//! unknowns `(F_n, Q_n, q_{n+1})` are solved for together at each step.

use crate::drive::Drive;
use crate::dynamics::{PointHistory, SourceLaw};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::field::{homogeneous_solution, FieldSnapshot};
use crate::fit::pairwise_orders;
use crate::params::{validate_params, InitialState, ModelParams};

/// How the delta source is spread onto the grid.
/// `(node index, weight)` pairs.
type Stencil = Vec<(usize, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Deposition {
    /// Whole deposit on the nearest node, weight `1 / dx`; read out with a
    /// `(1, 2, 1) / 4` stencil around that node.
    NearestNode,
    /// Linear split over the two nodes bracketing `x0`, read out by linear
    /// interpolation.
    #[default]
    Hat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub dt: f64,
    pub deposition: Deposition,
}

impl LatticeConfig {
    /// Uniform grid with `x0` at the midpoint of a cell, covering at least
    /// `half_width` on each side, and `dt = cfl dx / c`.
    pub fn centered(x0: f64, half_width: f64, dx: f64, cfl: f64, c: f64) -> Self {
        let m = ((half_width / dx) + 0.5).ceil().max(1.0) as usize;
        let reach = (m as f64 - 0.5) * dx;
        Self {
            x_min: x0 - reach,
            x_max: x0 + reach,
            nx: 2 * m,
            dt: cfl * dx / c,
            deposition: Deposition::Hat,
        }
    }

    /// Centered grid wide enough that nothing reflected at the ends can
    /// return to `x0` before `horizon`.
    pub fn for_horizon(p: &ModelParams, horizon: f64, dx: f64, cfl: f64) -> Self {
        Self::centered(p.x0, p.c * horizon + 4.0 * dx, dx, cfl, p.c)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn cfl(&self, c: f64) -> f64 {
        c * self.dt / self.dx()
    }

    pub fn node(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.nx).map(|j| self.node(j)).collect()
    }

    /// Same window, spacing and step divided by `factor`.
    pub fn refined(&self, p: &ModelParams, factor: usize) -> Self {
        let dx = self.dx() / factor as f64;
        let half = (self.x_max - self.x_min) / 2.0;
        let mut cfg = Self::centered(p.x0, half, dx, self.cfl(p.c), p.c);
        cfg.deposition = self.deposition;
        cfg
    }

    pub fn validate(&self, p: &ModelParams, horizon: f64) -> Result<()> {
        if self.nx < 4 || !(self.x_max > self.x_min) || !(self.dt > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "need nx >= 4, x_max > x_min and dt > 0 (nx = {}, window [{}, {}], dt = {})",
                self.nx, self.x_min, self.x_max, self.dt
            )));
        }
        let cfl = self.cfl(p.c);
        if cfl > 1.0 + 1e-12 {
            return Err(Error::CflViolation { cfl });
        }
        let distance = (p.x0 - self.x_min).min(self.x_max - p.x0);
        let reach = p.c * horizon;
        if !(distance > reach) {
            return Err(Error::WindowTooNarrow { distance, reach });
        }
        Ok(())
    }

    /// Deposition weights (summing to one) and readout weights around `x0`.
    fn stencils(&self, x0: f64) -> (Stencil, Stencil) {
        let dx = self.dx();
        let pos = (x0 - self.x_min) / dx;
        match self.deposition {
            Deposition::NearestNode => {
                let j = pos.round() as usize;
                let read = vec![(j - 1, 0.25), (j, 0.5), (j + 1, 0.25)];
                (vec![(j, 1.0)], read)
            }
            Deposition::Hat => {
                let j = (pos.floor() as usize).min(self.nx - 2);
                let theta = pos - j as f64;
                let w = vec![(j, 1.0 - theta), (j + 1, theta)];
                (w.clone(), w)
            }
        }
    }
}

/// Result of a coupled lattice run.
#[derive(Debug, Clone)]
pub struct LatticeRun {
    pub history: PointHistory,
    pub snapshots: Vec<FieldSnapshot>,
}

/// Runs the coupled system to `horizon`, recording the field at the grid
/// steps nearest to `snapshot_times`.
pub fn run_coupled(
    p: &ModelParams,
    init: &InitialState,
    law: SourceLaw,
    drive: &Drive,
    cfg: &LatticeConfig,
    horizon: f64,
    snapshot_times: &[f64],
) -> Result<LatticeRun> {
    let steps: Vec<usize> = snapshot_times
        .iter()
        .map(|&t| (t / cfg.dt).round().max(0.0) as usize)
        .collect();
    let x = cfg.nodes();
    let mut snapshots = Vec::new();
    let history = run_coupled_observed(p, init, law, drive, cfg, horizon, |n, t, u| {
        for _ in steps.iter().filter(|&&s| s == n) {
            snapshots.push(FieldSnapshot {
                t,
                x: x.clone(),
                u: u.to_vec(),
            });
        }
    })?;
    Ok(LatticeRun { history, snapshots })
}

/// As [`run_coupled`], handing the field at every step `n` (time `t`) to
/// `observe`.
pub fn run_coupled_observed<O>(
    p: &ModelParams,
    init: &InitialState,
    law: SourceLaw,
    drive: &Drive,
    cfg: &LatticeConfig,
    horizon: f64,
    mut observe: O,
) -> Result<PointHistory>
where
    O: FnMut(usize, f64, &[f64]),
{
    let p = validate_params(*p)?;
    cfg.validate(&p, horizon)?;
    let steps = (horizon / cfg.dt).round() as usize;
    let dt = cfg.dt;
    let dx = cfg.dx();
    let nx = cfg.nx;
    let r2 = cfg.cfl(p.c).powi(2);
    let omega_sq = p.omega * p.omega;
    let readout_weight = law.readout_weight(&p);
    let (deposit, read) = cfg.stencils(p.x0);
    let interp = |u: &[f64]| read.iter().map(|&(j, w)| w * u[j]).sum::<f64>();

    // Change of the readout per unit F_src deposited at full weight.
    let unit = dt * dt * (-4.0 * p.gamma * p.c) / dx;
    let kappa: f64 = read
        .iter()
        .map(|&(j, r)| {
            r * deposit
                .iter()
                .filter(|d| d.0 == j)
                .map(|d| d.1)
                .sum::<f64>()
        })
        .sum::<f64>()
        * unit;

    let x = cfg.nodes();
    let data = &init.field;
    let forcing = |t: f64, xj: f64| match &data.f1_primitive {
        None => 0.0,
        Some(f1) => {
            let h = 1e-6 * dx.max(1e-3);
            (f1(t, xj + h) - f1(t, xj - h)) / (2.0 * h)
        }
    };
    let mut u_prev: Vec<f64> = x
        .iter()
        .map(|&xj| homogeneous_solution(data, -dt, xj, p.c))
        .collect();
    let mut u: Vec<f64> = x.iter().map(|&xj| data.displacement(xj)).collect();
    let mut u_next = vec![0.0; nx];
    u_prev[0] = 0.0;
    u_prev[nx - 1] = 0.0;
    u[0] = 0.0;
    u[nx - 1] = 0.0;

    let mut hist = PointHistory::with_capacity(dt, steps + 1);
    let (mut q_prev, mut q) = (f64::NAN, init.q0);
    let (mut f_prev, mut readout_prev) = (0.0, 0.0);

    for n in 0..=steps {
        let t = n as f64 * dt;
        observe(n, t, &u);

        // Field at n + 1 without the step-n deposit.
        for j in 1..nx - 1 {
            let lap = u[j + 1] - 2.0 * u[j] + u[j - 1];
            u_next[j] = 2.0 * u[j] - u_prev[j] + r2 * lap + dt * dt * forcing(t, x[j]);
        }
        u_next[0] = 0.0;
        u_next[nx - 1] = 0.0;
        let explicit = interp(&u_next);
        let field_now = interp(&u);

        // Readout affine in F_n: Q = a_q + b_q F.
        let weight = if n == 0 { 0.5 } else { 1.0 };
        let (a_u, b_u) = if n == 0 {
            (field_now, 0.0)
        } else {
            (field_now, 0.5 * kappa)
        };
        let (a_v, b_v) = if n == 0 {
            ((explicit - field_now) / dt, kappa / dt)
        } else {
            (
                (explicit - 0.5 * kappa * f_prev - readout_prev) / (2.0 * dt),
                kappa / dt,
            )
        };
        let a_q = p.alpha0 * a_u + p.alpha1 * a_v;
        let b_q = p.alpha0 * b_u + p.alpha1 * b_v;

        // Oscillator: q_{n+1} = a_x + c_x Q.
        let f0 = drive.value(t);
        let (a_x, c_x) = if n == 0 {
            let half = 0.5 * dt * dt;
            (
                q + dt * init.v0 + half * (-omega_sq * q + f0),
                half * readout_weight,
            )
        } else {
            (
                2.0 * q - q_prev + dt * dt * (-omega_sq * q + f0),
                dt * dt * readout_weight,
            )
        };

        // Source law: F = a_f + g_q Q + g_x q_{n+1}.
        let (a_f, g_q, g_x) = match law {
            SourceLaw::A if n == 0 => (-p.gamma2 * q + p.gamma3 * init.v0, 0.0, 0.0),
            SourceLaw::A => (
                -p.gamma2 * q - p.gamma3 * q_prev / (2.0 * dt),
                0.0,
                p.gamma3 / (2.0 * dt),
            ),
            SourceLaw::B => (-p.gamma0 * q, p.gamma0, 0.0),
        };

        let (f, readout, q_next) = solve_step(
            [[-b_q, 1.0, 0.0], [0.0, -c_x, 1.0], [1.0, -g_q, -g_x]],
            [a_q, a_x, a_f],
        )
        .ok_or(Error::SingularCoupling { step: n })?;

        let qdot = if n == 0 {
            init.v0
        } else {
            (q_next - q_prev) / (2.0 * dt)
        };
        if !q.is_finite() || q.abs() > crate::dynamics::BLOWUP_THRESHOLD {
            return Err(Error::UnstableBlowup { t, value: q.abs() });
        }
        hist.push(t, q, qdot, readout, f);

        for &(j, w) in &deposit {
            u_next[j] += weight * unit * w * f;
        }
        std::mem::swap(&mut u_prev, &mut u);
        std::mem::swap(&mut u, &mut u_next);
        q_prev = q;
        q = q_next;
        f_prev = f;
        readout_prev = a_u + b_u * f;
    }
    Ok(hist)
}

/// Cramer's rule for the per-step 3x3 system.
fn solve_step(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<(f64, f64, f64)> {
    let det = |a: [[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let column = |k: usize| {
        let mut a = m;
        for i in 0..3 {
            a[i][k] = rhs[i];
        }
        det(a) / d
    };
    Some((column(0), column(1), column(2)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub dt: f64,
    pub max_err: f64,
    /// `NaN` on the coarsest level.
    pub observed_order: f64,
}

/// Runs the lattice at `levels` successive halvings of `base` and compares
/// `q` against the effective equation integrated on the same time grid.
#[allow(clippy::too_many_arguments)]
pub fn convergence_study(
    exec: Execution,
    p: &ModelParams,
    init: &InitialState,
    law: SourceLaw,
    drive: &Drive,
    base: &LatticeConfig,
    horizon: f64,
    levels: usize,
) -> Result<Vec<ConvergenceRow>> {
    if levels < 3 {
        return Err(Error::TooFewLevels(levels));
    }
    let configs: Vec<LatticeConfig> = (0..levels).map(|k| base.refined(p, 1 << k)).collect();
    let errors = exec::try_map(exec, &configs, |cfg| {
        let run = run_coupled(p, init, law, drive, cfg, horizon, &[])?;
        let reference = match law {
            SourceLaw::A => crate::dynamics::integrate_model_a(p, init, drive, horizon, cfg.dt)?,
            SourceLaw::B => crate::dynamics::integrate_model_b(p, init, drive, horizon, cfg.dt)?,
        };
        Ok::<f64, Error>(max_gap(&run.history.q, &reference.q))
    })?;
    let dxs: Vec<f64> = configs.iter().map(LatticeConfig::dx).collect();
    let orders = pairwise_orders(&dxs, &errors);
    Ok(configs
        .iter()
        .enumerate()
        .map(|(k, cfg)| ConvergenceRow {
            dx: cfg.dx(),
            dt: cfg.dt,
            max_err: errors[k],
            observed_order: if k == 0 { f64::NAN } else { orders[k - 1] },
        })
        .collect())
}

pub(crate) fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
