//! Adaptive Simpson quadrature.

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const MAX_EVALUATIONS: usize = 1 << 20;

const MAX_DEPTH: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub evaluations: usize,
    /// False when the evaluation budget or depth limit cut refinement short.
    pub converged: bool,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Reversed bounds give the negated integral; `a == b` gives zero without
/// evaluating `f`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Quadrature
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Quadrature {
            value: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let mut state = State {
        f: &f,
        evaluations: 3,
        converged: true,
    };
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = state.refine(a, b, fa, fm, fb, whole, tol, MAX_DEPTH);
    Quadrature {
        value,
        evaluations: state.evaluations,
        converged: state.converged,
    }
}

/// Shorthand for [`adaptive_simpson`] at the default tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    adaptive_simpson(f, a, b, DEFAULT_TOLERANCE).value
}

struct State<'a, F> {
    f: &'a F,
    evaluations: usize,
    converged: bool,
}

impl<F: Fn(f64) -> f64> State<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        self.evaluations += 2;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        if depth == 0 || self.evaluations >= MAX_EVALUATIONS {
            self.converged = false;
            return left + right + delta / 15.0;
        }
        self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_exact() {
        let q = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12);
        assert_abs_diff_eq!(q.value, 0.0, epsilon = 1e-13);
        assert!(q.converged);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(|x| (3.0 * x).sin(), 0.0, 10.0);
        assert_abs_diff_eq!(v, (1.0 - 30f64.cos()) / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn reversed_and_empty_bounds() {
        assert_abs_diff_eq!(integrate(|x| x, 1.0, 0.0), -0.5, epsilon = 1e-14);
        assert_eq!(integrate(|_| panic!("not evaluated"), 2.0, 2.0), 0.0);
    }

    #[test]
    fn budget_is_respected() {
        let q = adaptive_simpson(|x| (1.0 / x.abs().max(1e-300)).sin(), -1.0, 1.0, 1e-15);
        assert!(q.evaluations <= MAX_EVALUATIONS + 2 * MAX_DEPTH as usize);
    }
}
