//! Continuous canonical noise distributions.
//!
//! A canonical noise distribution (CND) for a symmetric nontrivial
//! tradeoff function `f` is the symmetric continuous noise whose
//! shift-by-1 tradeoff equals `f` exactly.  The constructive route: the
//! cdf is linear on `[-1/2, 1/2]`, interpolating `c_f` to `1 - c_f`,
//! and extends outward by the recurrence `F(x) = f(F(x+1))`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::AuditReport;
use crate::rng::CounterRng;
use crate::tradeoff::TradeoffFunction;

/// Iteration cap for the cdf recurrence; beyond it the cdf saturates to
/// 0 or 1.  Sub-exponential tails make the cap unreachable for any
/// usable tradeoff function, it only guards degenerate inputs.
const RECURRENCE_CAP: i64 = 100_000;

type CdfFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A continuous CND: the tradeoff function it was built for, its fixed
/// point, and a cdf evaluator.  Values are immutable and all methods are
/// pure apart from `sample`, which owns its generator state via the seed.
#[derive(Clone)]
pub struct ContinuousCnd {
    f: TradeoffFunction,
    c_f: f64,
    cdf_fn: CdfFn,
    label: String,
}

impl std::fmt::Debug for ContinuousCnd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ContinuousCnd({})", self.label)
    }
}

impl ContinuousCnd {
    pub(crate) fn from_parts(
        f: TradeoffFunction,
        c_f: f64,
        cdf_fn: CdfFn,
        label: impl Into<String>,
    ) -> Self {
        ContinuousCnd {
            f,
            c_f,
            cdf_fn,
            label: label.into(),
        }
    }

    /// Build the CND for `f` by the linear-core recurrence.
    pub fn construct(f: TradeoffFunction) -> Result<Self> {
        if !f.symmetric() {
            return Err(Error::InvalidTradeoff(format!(
                "{}: a CND requires a symmetric tradeoff function",
                f.label()
            )));
        }
        if !f.nontrivial() {
            return Err(Error::InvalidTradeoff(format!(
                "{}: the identity tradeoff has no CND",
                f.label()
            )));
        }
        let c = f.fixed_point();
        let label = format!("cnd[{}]", f.label());
        let fi = f.clone();
        // Left half only; positive x mirror through symmetry so that
        // F(-x) = 1 - F(x) holds bit-for-bit.
        let left = move |x: f64| -> f64 {
            debug_assert!(x <= 0.0);
            if x >= -0.5 {
                return c * (0.5 - x) + (1.0 - c) * (x + 0.5);
            }
            let k = (-x - 0.5).ceil() as i64;
            if k > RECURRENCE_CAP {
                return 0.0;
            }
            let y = x + k as f64;
            let mut v = c * (0.5 - y) + (1.0 - c) * (y + 0.5);
            for _ in 0..k {
                if v <= 0.0 {
                    return 0.0;
                }
                v = fi.eval(v);
            }
            v
        };
        let cdf_fn = move |x: f64| -> f64 {
            if x == 0.0 {
                0.5
            } else if x < 0.0 {
                left(x)
            } else {
                1.0 - left(-x)
            }
        };
        Ok(ContinuousCnd::from_parts(f, c, Arc::new(cdf_fn), label))
    }

    pub fn tradeoff(&self) -> &TradeoffFunction {
        &self.f
    }

    pub fn c_f(&self) -> f64 {
        self.c_f
    }

    /// `log((1 - c_f)/c_f)`, infinite when `c_f = 0`.
    pub fn eps_f(&self) -> f64 {
        if self.c_f > 0.0 {
            ((1.0 - self.c_f) / self.c_f).ln()
        } else {
            f64::INFINITY
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Cdf at `x`; total on the reals, exactly 1/2 at zero.
    pub fn cdf(&self, x: f64) -> f64 {
        (self.cdf_fn)(x)
    }

    /// Generalized inverse `inf { x : F(x) >= u }` for `u` in (0,1),
    /// by doubling the bracket `[-1, 1]` until it straddles `u` and then
    /// bisecting (80 steps; at flat regions this lands on the left
    /// endpoint of the level set).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u <= 0.0 || u >= 1.0 {
            return Err(Error::param("u", format!("{u} must be in (0,1)")));
        }
        let mut lo = -1.0_f64;
        let mut hi = 1.0_f64;
        while self.cdf(lo) >= u && lo > -1e12 {
            lo *= 2.0;
        }
        while self.cdf(hi) < u && hi < 1e12 {
            hi *= 2.0;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) >= u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// `n` reproducible draws by inverse transform on a seeded counter
    /// generator.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut rng = CounterRng::new(seed);
        (0..n)
            .map(|_| {
                self.quantile(rng.next_unit())
                    .expect("unit draws are strictly inside (0,1)")
            })
            .collect()
    }

    /// `P(|N| <= t/2)` for integer `t`, from the iterates of `f`:
    /// `1 - 2 f^{ok}(c_f)` when `t = 2k+1`, `1 - 2 f^{ok}(1/2)` when
    /// `t = 2k`.  Agrees with `cdf(t/2) - cdf(-t/2)` and with the
    /// additive-noise anti-concentration bound, which a CND attains.
    pub fn concentration(&self, t: u32) -> f64 {
        let k = t / 2;
        let start = if t % 2 == 1 { self.c_f } else { 0.5 };
        1.0 - 2.0 * self.f.apply_iterated(start, k)
    }

    /// Audit the sub-exponential tail bounds
    /// `P(|N| > t) <= exp(-eps_f floor(t)) <= exp(-eps_f (t-1))` on a
    /// 1000-point grid over `[0, t_max]`, and the moment bounds
    /// `E|N|^n <= eps_f^{-n} e^{eps_f} n!` for `n <= n_max`, with
    /// `E|N|^n` computed by integrating `n x^{n-1} P(|N| > x)`.
    pub fn tail_and_moment_check(&self, t_max: f64, n_max: u32) -> AuditReport {
        let mut report = AuditReport::new(format!("sub-exponential bounds for {}", self.label));
        let eps = self.eps_f();
        if !eps.is_finite() {
            report.note("not applicable: c_f = 0, so eps_f is infinite".to_string());
            return report;
        }
        report.assume(format!("eps_f = log((1-c_f)/c_f) = {eps:.12}"));

        const GRID: usize = 1000;
        for i in 0..GRID {
            let t = t_max * i as f64 / (GRID - 1) as f64;
            let achieved = 2.0 * self.cdf(-t);
            report.push_upper(
                "tail: exp(-eps_f*floor(t))",
                None,
                Some(t),
                (-eps * t.floor()).exp(),
                achieved,
                1e-12,
            );
            report.push_upper(
                "tail: exp(-eps_f*(t-1))",
                None,
                Some(t),
                (-eps * (t - 1.0)).exp(),
                achieved,
                1e-12,
            );
        }

        for n in 1..=n_max {
            let moment = self.abs_moment(n, eps);
            let bound = eps.powi(-(n as i32)) * eps.exp() * factorial(n);
            report.push_upper(
                format!("moment: E|N|^{n}"),
                None,
                Some(n as f64),
                bound,
                moment,
                1e-9 * (1.0 + bound),
            );
        }
        report.note(format!(
            "the factorial moment bound is the Bernstein condition: \
             N is (2 e^eps_f / eps_f, 2 / eps_f) = ({:.6}, {:.6}) sub-exponential",
            2.0 * eps.exp() / eps,
            2.0 / eps
        ));
        report
    }

    // E|N|^n = int_0^inf n x^{n-1} P(|N|>x) dx, truncated where the
    // sub-exponential tail bound pushes the remainder below ~1e-14 and
    // integrated piecewise between the half-integer kinks of the cdf.
    fn abs_moment(&self, n: u32, eps: f64) -> f64 {
        let t1 = 1.0 + 14.0 * std::f64::consts::LN_10 / eps;
        let t_star = 1.0
            + (14.0 * std::f64::consts::LN_10 + (n as f64 - 1.0).max(0.0) * t1.max(2.0).ln()) / eps;
        let integrand =
            |x: f64| -> f64 { n as f64 * x.powi(n as i32 - 1) * 2.0 * self.cdf(-x) };
        let mut total = 0.0;
        let mut a = 0.0;
        while a < t_star {
            let b = (a + 0.5).min(t_star);
            total += adaptive_simpson(&integrand, a, b, 1e-10 * (b - a) / t_star);
            a = b;
        }
        total
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, fa, b, fb, fm, whole, tol, 40)
}

/// Reference cdf of `Tulap(0, exp(-eps), 0)`, the unique CND of pure
/// `eps`-DP, realized directly as discrete Laplace plus uniform on
/// `(-1/2, 1/2)`.  Serves as an independent oracle for the recurrence
/// construction.
pub fn tulap_cdf(eps: f64, x: f64) -> Result<f64> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::param("eps", format!("{eps} must be > 0")));
    }
    if x > 0.0 {
        return Ok(1.0 - tulap_cdf(eps, -x)?);
    }
    let b = (-eps).exp();
    // Only the discrete-Laplace atom at k = round(x) overlaps the
    // uniform window partially; everything below k contributes fully.
    let k = (x + 0.5).floor();
    if k < -1e7 {
        return Ok(0.0);
    }
    // P(K <= k-1) = b^{1-k}/(1+b) for k <= 0.
    let below = (eps * (k - 1.0)).exp() / (1.0 + b);
    let atom = (1.0 - b) / (1.0 + b) * (-eps * k.abs()).exp();
    Ok(below + atom * (x - k + 0.5))
}
