//! Tradeoff functions and their algebra.
//!
//! A tradeoff function maps specificity (one minus type I error) to the
//! smallest achievable type II error when testing one distribution
//! against another; it is convex, non-decreasing, and lies below the
//! diagonal.  This module provides the standard families
//! (`eps_delta`, `gdp`, shift families of log-concave distributions,
//! Cauchy-vs-Cauchy), pointwise composition, fixed points, scalar
//! summaries built from the fixed point, and exact ROC computation for
//! finitely supported distributions.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::discrete::DiscretePmf;
use crate::error::{Error, Result};
use crate::normal::{normal_cdf, normal_quantile};

/// Tolerance band for accepting slightly out-of-range specificity inputs.
const ALPHA_SLACK: f64 = 1e-12;

pub(crate) fn clamp_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha < -ALPHA_SLACK || alpha > 1.0 + ALPHA_SLACK {
        return Err(Error::param(
            "alpha",
            format!("{alpha} is outside [0,1] beyond round-off tolerance"),
        ));
    }
    Ok(alpha.clamp(0.0, 1.0))
}

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An evaluable tradeoff curve on `[0,1]`.
///
/// Values are immutable after construction and evaluation is pure, so a
/// `TradeoffFunction` can be shared freely across threads.
#[derive(Clone)]
pub struct TradeoffFunction {
    eval_fn: EvalFn,
    symmetric: bool,
    nontrivial: bool,
    closed_form_cf: Option<f64>,
    label: String,
}

impl std::fmt::Debug for TradeoffFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TradeoffFunction")
            .field("label", &self.label)
            .field("symmetric", &self.symmetric)
            .field("nontrivial", &self.nontrivial)
            .field("closed_form_cf", &self.closed_form_cf)
            .finish()
    }
}

impl TradeoffFunction {
    pub(crate) fn from_parts(
        eval_fn: EvalFn,
        symmetric: bool,
        nontrivial: bool,
        closed_form_cf: Option<f64>,
        label: impl Into<String>,
    ) -> Self {
        TradeoffFunction {
            eval_fn,
            symmetric,
            nontrivial,
            closed_form_cf,
            label: label.into(),
        }
    }

    /// The curve of `(eps, delta)`-DP:
    /// `max{0, 1-delta-e^eps+e^eps*alpha, e^-eps*(alpha-delta)}`.
    pub fn eps_delta(eps: f64, delta: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::param("eps", format!("{eps} must be >= 0")));
        }
        if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
            return Err(Error::param("delta", format!("{delta} must be in [0,1]")));
        }
        let e_pos = eps.exp();
        let e_neg = (-eps).exp();
        let eval = move |a: f64| -> f64 {
            if a >= 1.0 {
                return 1.0 - delta;
            }
            let mid = 1.0 - delta - e_pos * (1.0 - a);
            let low = e_neg * (a - delta);
            mid.max(low).max(0.0)
        };
        // Fixed point from the active linear piece: c = (1-delta)/(1+e^eps).
        let cf = (1.0 - delta) / (1.0 + e_pos);
        Ok(TradeoffFunction::from_parts(
            Arc::new(eval),
            true,
            eps > 0.0 || delta > 0.0,
            Some(cf),
            format!("eps_delta({eps},{delta})"),
        ))
    }

    /// The Gaussian-DP curve `G_mu(alpha) = Phi(Phi^{-1}(alpha) - mu)`.
    pub fn gdp(mu: f64) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::param("mu", format!("{mu} must be >= 0")));
        }
        let eval = move |a: f64| -> f64 {
            if a <= 0.0 {
                0.0
            } else if a >= 1.0 {
                1.0
            } else {
                normal_cdf(normal_quantile(a) - mu)
            }
        };
        Ok(TradeoffFunction::from_parts(
            Arc::new(eval),
            true,
            mu > 0.0,
            Some(normal_cdf(-mu / 2.0)),
            format!("gdp({mu})"),
        ))
    }

    /// The identity curve (perfect privacy).
    pub fn identity() -> Self {
        TradeoffFunction::from_parts(Arc::new(|a| a), true, false, Some(0.5), "identity")
    }

    /// The zero curve (no privacy); the tradeoff of two distributions
    /// with disjoint support.
    pub fn zero() -> Self {
        TradeoffFunction::from_parts(Arc::new(|_| 0.0), true, true, Some(0.0), "zero")
    }

    /// Evaluate at specificity `alpha`; panics if `alpha` is outside
    /// `[0,1]` by more than round-off tolerance.
    pub fn eval(&self, alpha: f64) -> f64 {
        let a = clamp_alpha(alpha).expect("tradeoff function evaluated outside [0,1]");
        (self.eval_fn)(a)
    }

    /// Evaluate, reporting out-of-range `alpha` as an error.
    pub fn try_eval(&self, alpha: f64) -> Result<f64> {
        Ok((self.eval_fn)(clamp_alpha(alpha)?))
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn nontrivial(&self) -> bool {
        self.nontrivial
    }

    pub fn closed_form_cf(&self) -> Option<f64> {
        self.closed_form_cf
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `k`-fold self-composition, evaluated pointwise in `O(k)`.
    ///
    /// The result deliberately carries no closed-form fixed point so that
    /// `fixed_point` on an iterate is an independent bisection route
    /// against [`TradeoffFunction::iterated_fixed_point`].
    pub fn iterate(&self, k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::param("k", format!("{k} must be >= 1")));
        }
        let inner = self.eval_fn.clone();
        let eval = move |a: f64| -> f64 {
            let mut v = a;
            for _ in 0..k {
                v = inner(v);
            }
            v
        };
        Ok(TradeoffFunction::from_parts(
            Arc::new(eval),
            self.symmetric,
            self.nontrivial,
            None,
            format!("{}^o{k}", self.label),
        ))
    }

    /// Apply the curve `k` times starting from `v`.
    pub fn apply_iterated(&self, v: f64, k: u32) -> f64 {
        let mut x = v;
        for _ in 0..k {
            x = (self.eval_fn)(x);
        }
        x
    }

    /// The unique `c` with `f(1-c) = c`, in `[0, 1/2]`.
    ///
    /// Uses the stored closed form when present, otherwise bisection on
    /// `h(c) = f(1-c) - c`, which is strictly decreasing; the interval
    /// `[0, 1/2]` is narrowed to width `1e-12` (at most 200 steps).
    pub fn fixed_point(&self) -> f64 {
        if let Some(c) = self.closed_form_cf {
            return c;
        }
        let h = |c: f64| (self.eval_fn)(1.0 - c) - c;
        let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
        if h(hi) >= 0.0 {
            return 0.5;
        }
        if h(lo) <= 0.0 {
            return 0.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo < 1e-12 {
                break;
            }
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Fixed point of the `t`-fold iterate via the parity formula:
    /// `f^{ok}(c_f)` for `t = 2k+1`, `f^{ok}(1/2)` for `t = 2k`.
    pub fn iterated_fixed_point(&self, t: u32) -> Result<f64> {
        if t < 1 {
            return Err(Error::param("t", format!("{t} must be >= 1")));
        }
        let k = t / 2;
        let start = if t % 2 == 1 { self.fixed_point() } else { 0.5 };
        Ok(self.apply_iterated(start, k))
    }

    /// Scalar summaries derived from the fixed point, together with the
    /// piecewise-linear envelope curves that sandwich `f`.
    pub fn summaries(&self) -> TradeoffSummaries {
        let c_f = self.fixed_point();
        let tv = 1.0 - 2.0 * c_f;
        let lower = TradeoffFunction::eps_delta(0.0, tv.clamp(0.0, 1.0))
            .expect("tv is always a valid delta");
        let (eps_f, upper) = if c_f > 0.0 {
            let eps = ((1.0 - c_f) / c_f).ln();
            (
                eps,
                TradeoffFunction::eps_delta(eps, 0.0).expect("eps_f is finite and nonnegative"),
            )
        } else {
            (f64::INFINITY, TradeoffFunction::zero())
        };
        TradeoffSummaries {
            c_f,
            tv,
            eps_f,
            lower,
            upper,
        }
    }

    /// Grid check of the defining properties: `f(0) = 0`, `f <= id`,
    /// monotone, and midpoint-convex, all within `tol`.
    pub fn validate_on_grid(&self, points: usize, tol: f64) -> Result<()> {
        let n = points.max(3);
        let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&a| (self.eval_fn)(a)).collect();
        if vals[0].abs() > tol {
            return Err(Error::InvalidTradeoff(format!(
                "{}: f(0) = {} != 0",
                self.label, vals[0]
            )));
        }
        for i in 0..n {
            if vals[i] > grid[i] + tol {
                return Err(Error::InvalidTradeoff(format!(
                    "{}: f({}) = {} exceeds the diagonal",
                    self.label, grid[i], vals[i]
                )));
            }
            if i > 0 && vals[i] < vals[i - 1] - tol {
                return Err(Error::InvalidTradeoff(format!(
                    "{}: decreasing near alpha = {}",
                    self.label, grid[i]
                )));
            }
        }
        for i in 0..n - 2 {
            let mid = (self.eval_fn)(0.5 * (grid[i] + grid[i + 2]));
            if mid > 0.5 * (vals[i] + vals[i + 2]) + tol {
                return Err(Error::InvalidTradeoff(format!(
                    "{}: convexity violated near alpha = {}",
                    self.label,
                    grid[i + 1]
                )));
            }
        }
        Ok(())
    }
}

/// Fixed-point-derived summaries of a symmetric tradeoff function:
/// the total-variation level `1 - 2 c_f`, the pure-DP level
/// `log((1-c_f)/c_f)`, and the two envelope curves
/// `f_{0,tv} <= f <= f_{eps_f,0}`.
pub struct TradeoffSummaries {
    pub c_f: f64,
    pub tv: f64,
    pub eps_f: f64,
    pub lower: TradeoffFunction,
    pub upper: TradeoffFunction,
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A one-parameter family `{f_t : t >= 0}` obtained by shifting a
/// symmetric log-concave base distribution: `f_t(a) = F(F^{-1}(a) - t)`.
/// Such families compose additively: `f_s o f_t = f_{s+t}`.
#[derive(Clone)]
pub struct TradeoffFamily {
    base_cdf: ScalarFn,
    base_quantile: ScalarFn,
    label: String,
}

impl std::fmt::Debug for TradeoffFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TradeoffFamily({})", self.label)
    }
}

impl TradeoffFamily {
    /// Build a family from a symmetric continuous base cdf and its
    /// generalized inverse.  The cdf is validated on a grid for symmetry
    /// (`F(-x) = 1 - F(x)`) and monotonicity.
    pub fn from_base(
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
        quantile: impl Fn(f64) -> f64 + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=320 {
            let x = -8.0 + i as f64 * 0.05;
            let v = cdf(x);
            if !(0.0..=1.0).contains(&v) || v + 1e-12 < prev {
                return Err(Error::InvalidDistribution(format!(
                    "{label}: base cdf not monotone into [0,1] at x = {x}"
                )));
            }
            prev = v;
            let sym = cdf(-x) - (1.0 - v);
            if sym.abs() > 1e-9 {
                return Err(Error::InvalidDistribution(format!(
                    "{label}: base cdf asymmetric at x = {x} (residual {sym:e})"
                )));
            }
        }
        if (cdf(0.0) - 0.5).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "{label}: base cdf has F(0) != 1/2"
            )));
        }
        Ok(TradeoffFamily {
            base_cdf: Arc::new(cdf),
            base_quantile: Arc::new(quantile),
            label,
        })
    }

    /// Standard normal base; `member(t)` equals the Gaussian-DP curve `G_t`.
    pub fn gaussian() -> Self {
        TradeoffFamily::from_base(normal_cdf, normal_quantile, "gaussian")
            .expect("the normal base always validates")
    }

    /// Standard Laplace base.
    pub fn laplace() -> Self {
        TradeoffFamily::from_base(
            |x| {
                if x <= 0.0 {
                    0.5 * x.exp()
                } else {
                    1.0 - 0.5 * (-x).exp()
                }
            },
            |u| {
                if u <= 0.5 {
                    (2.0 * u).ln()
                } else {
                    -(2.0 * (1.0 - u)).ln()
                }
            },
            "laplace",
        )
        .expect("the laplace base always validates")
    }

    /// Standard logistic base.
    pub fn logistic() -> Self {
        TradeoffFamily::from_base(
            |x| 1.0 / (1.0 + (-x).exp()),
            |u| (u / (1.0 - u)).ln(),
            "logistic",
        )
        .expect("the logistic base always validates")
    }

    /// Uniform base on (-1, 1); `member(t)` equals `f_{0, t/2}`.
    pub fn uniform() -> Self {
        TradeoffFamily::from_base(
            |x| (0.5 * (x + 1.0)).clamp(0.0, 1.0),
            |u| 2.0 * u - 1.0,
            "uniform",
        )
        .expect("the uniform base always validates")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Base cdf evaluated at `x`.
    pub fn base_cdf(&self, x: f64) -> f64 {
        (self.base_cdf)(x)
    }

    /// The member `f_t`; its fixed point is `F(-t/2)` in closed form.
    pub fn member(&self, t: f64) -> Result<TradeoffFunction> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::param("t", format!("{t} must be >= 0")));
        }
        let cdf = self.base_cdf.clone();
        let quantile = self.base_quantile.clone();
        let eval = move |a: f64| -> f64 {
            if a <= 0.0 {
                0.0
            } else if a >= 1.0 {
                1.0
            } else {
                cdf(quantile(a) - t).clamp(0.0, 1.0)
            }
        };
        Ok(TradeoffFunction::from_parts(
            Arc::new(eval),
            true,
            t > 0.0,
            Some((self.base_cdf)(-t / 2.0)),
            format!("{}[t={t}]", self.label),
        ))
    }

    /// Grid check of infinite divisibility: `f_0` is the identity,
    /// members are valid tradeoff curves, and `f_s o f_t = f_{s+t}` for
    /// sampled `s, t`, within `tol`.
    ///
    /// Member validity carries the real discriminating power: for any
    /// strictly increasing base cdf the shift formula composes
    /// additively by construction, but it only produces convex curves
    /// when the base is log-concave.
    pub fn check_divisible(&self, tol: f64) -> Result<()> {
        let alphas: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let f0 = self.member(0.0)?;
        for &a in &alphas {
            if (f0.eval(a) - a).abs() > tol {
                return Err(Error::InvalidTradeoff(format!(
                    "{}: f_0 differs from the identity at alpha = {a}",
                    self.label
                )));
            }
        }
        let ts = [0.25, 0.5, 1.0, 2.0];
        for &t in &ts {
            self.member(t)?.validate_on_grid(201, tol)?;
        }
        for &s in &ts {
            for &t in &ts {
                let fs = self.member(s)?;
                let ft = self.member(t)?;
                let fst = self.member(s + t)?;
                for &a in &alphas {
                    let lhs = fs.eval(ft.eval(a));
                    let rhs = fst.eval(a);
                    if (lhs - rhs).abs() > tol {
                        return Err(Error::InvalidTradeoff(format!(
                            "{}: f_{s} o f_{t} differs from f_{} at alpha = {a} by {:e}",
                            self.label,
                            s + t,
                            lhs - rhs
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact piecewise-linear tradeoff curve of a finite testing problem, as
/// vertices `(specificity, type II error)` from `(0,0)` to `(1, f(1))`.
#[derive(Clone, Debug, PartialEq)]
pub struct RocCurve {
    vertices: Vec<(f64, f64)>,
}

impl RocCurve {
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidDistribution(
                "an ROC curve needs at least two vertices".into(),
            ));
        }
        let first = vertices[0];
        if first.0.abs() > 1e-9 || first.1.abs() > 1e-9 {
            return Err(Error::InvalidDistribution(
                "ROC curve must start at (0,0)".into(),
            ));
        }
        for w in vertices.windows(2) {
            let ((a0, b0), (a1, b1)) = (w[0], w[1]);
            if a1 < a0 - 1e-12 || b1 < b0 - 1e-12 {
                return Err(Error::InvalidDistribution(
                    "ROC vertices must be non-decreasing in both coordinates".into(),
                ));
            }
        }
        for (a, b) in &vertices {
            if *b > *a + 1e-9 {
                return Err(Error::InvalidDistribution(format!(
                    "ROC curve rises above the diagonal at alpha = {a}"
                )));
            }
        }
        // Convexity: slopes must be non-decreasing (cross-product form).
        for w in vertices.windows(3) {
            let ((a0, b0), (a1, b1), (a2, b2)) = (w[0], w[1], w[2]);
            let cross = (b1 - b0) * (a2 - a1) - (b2 - b1) * (a1 - a0);
            if cross > 1e-9 {
                return Err(Error::InvalidDistribution(format!(
                    "ROC curve is concave near alpha = {a1}"
                )));
            }
        }
        Ok(RocCurve { vertices })
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    /// Piecewise-linear interpolation at specificity `alpha`.
    pub fn eval(&self, alpha: f64) -> f64 {
        let a = alpha.clamp(0.0, 1.0);
        let vs = &self.vertices;
        if a <= vs[0].0 {
            return vs[0].1;
        }
        if a >= vs[vs.len() - 1].0 {
            return vs[vs.len() - 1].1;
        }
        // First vertex with alpha >= a.
        let mut hi = match vs.binary_search_by(|v| v.0.partial_cmp(&a).unwrap()) {
            Ok(i) => return vs[i].1,
            Err(i) => i,
        };
        if hi == 0 {
            hi = 1;
        }
        let (a0, b0) = vs[hi - 1];
        let (a1, b1) = vs[hi];
        if a1 == a0 {
            return b0;
        }
        b0 + (b1 - b0) * (a - a0) / (a1 - a0)
    }

    /// The `c` with `curve(1-c) = c`, by bisection on the interpolant.
    pub fn fixed_point(&self) -> f64 {
        let h = |c: f64| self.eval(1.0 - c) - c;
        let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
        if h(hi) >= 0.0 {
            return 0.5;
        }
        if h(lo) <= 0.0 {
            return 0.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo < 1e-12 {
                break;
            }
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Result of checking whether an ROC curve lies above a tradeoff
/// function at every vertex; `worst_*` describe the vertex with the
/// smallest (possibly negative) margin `curve - f`.
#[derive(Clone, Debug)]
pub struct DominanceCheck {
    pub dominates: bool,
    pub worst_alpha: f64,
    pub worst_curve_value: f64,
    pub worst_f_value: f64,
    pub worst_margin: f64,
}

/// Check `curve >= f - tol` at every vertex.  Vertices suffice: the
/// curve is linear between them and `f` is convex, so a violation
/// anywhere implies one at a vertex.
pub fn dominates(curve: &RocCurve, f: &TradeoffFunction, tol: f64) -> DominanceCheck {
    let mut worst = DominanceCheck {
        dominates: true,
        worst_alpha: 0.0,
        worst_curve_value: 0.0,
        worst_f_value: 0.0,
        worst_margin: f64::INFINITY,
    };
    for &(a, b) in curve.vertices() {
        let fv = f.eval(a);
        let margin = b - fv;
        if margin < worst.worst_margin {
            worst.worst_alpha = a;
            worst.worst_curve_value = b;
            worst.worst_f_value = fv;
            worst.worst_margin = margin;
        }
    }
    worst.dominates = worst.worst_margin >= -tol;
    worst
}

fn validated_masses(p: &DiscretePmf) -> Result<Vec<f64>> {
    let mut masses = p.masses().to_vec();
    let mut total = 0.0;
    for m in &mut masses {
        if *m < -1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "pmf has negative mass {m}"
            )));
        }
        if *m < 0.0 {
            *m = 0.0;
        }
        total += *m;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "pmf total mass {total} deviates from 1 beyond tolerance"
        )));
    }
    for m in &mut masses {
        *m /= total;
    }
    Ok(masses)
}

/// Exact Neyman-Pearson tradeoff curve of two finitely supported
/// integer distributions, in the flipped convention (type II error as a
/// function of specificity).  Outcomes are orderd by likelihood ratio
/// `q/p`; tied ratios merge into a single linear segment, which is
/// precisely the effect of randomizing over the tied outcomes.
pub fn roc_discrete(p: &DiscretePmf, q: &DiscretePmf) -> Result<RocCurve> {
    let lo = p.lo().min(q.lo());
    let hi = p.hi().max(q.hi());
    let n = (hi - lo + 1) as usize;
    let pm = validated_masses(p)?;
    let qm = validated_masses(q)?;
    let mut pv = vec![0.0; n];
    let mut qv = vec![0.0; n];
    for (i, m) in pm.iter().enumerate() {
        pv[(p.lo() - lo) as usize + i] = *m;
    }
    for (i, m) in qm.iter().enumerate() {
        qv[(q.lo() - lo) as usize + i] = *m;
    }

    // Outcomes carrying mass, sorted by likelihood ratio ascending with
    // p = 0 outcomes (ratio +inf) last.
    let mut outcomes: Vec<(f64, f64)> = pv
        .iter()
        .zip(qv.iter())
        .filter(|(p, q)| **p > 0.0 || **q > 0.0)
        .map(|(&p, &q)| (p, q))
        .collect();
    outcomes.sort_by(|x, y| {
        let rx = if x.0 > 0.0 { x.1 / x.0 } else { f64::INFINITY };
        let ry = if y.0 > 0.0 { y.1 / y.0 } else { f64::INFINITY };
        rx.partial_cmp(&ry).unwrap()
    });

    let tied = |x: &(f64, f64), y: &(f64, f64)| -> bool {
        if x.0 == 0.0 || y.0 == 0.0 {
            return x.0 == 0.0 && y.0 == 0.0;
        }
        let (u, v) = (x.1 * y.0, y.1 * x.0);
        (u - v).abs() <= 1e-12 * (u + v) + f64::MIN_POSITIVE
    };

    let mut vertices = vec![(0.0, 0.0)];
    let (mut cum_p, mut cum_q) = (0.0_f64, 0.0_f64);
    let mut i = 0;
    while i < outcomes.len() {
        if outcomes[i].0 == 0.0 {
            break; // never accept zero-likelihood-under-p outcomes
        }
        let mut j = i;
        let (mut gp, mut gq) = (0.0, 0.0);
        while j < outcomes.len() && tied(&outcomes[i], &outcomes[j]) {
            gp += outcomes[j].0;
            gq += outcomes[j].1;
            j += 1;
        }
        cum_p += gp;
        cum_q += gq;
        vertices.push((cum_p.min(1.0), cum_q.min(1.0)));
        i = j;
    }
    if let Some(last) = vertices.last_mut() {
        last.0 = 1.0; // all p-mass is accounted for; pin the endpoint
    }
    RocCurve::new(vertices)
}

/// Total variation distance between two finitely supported integer
/// distributions: half the L1 distance.
pub fn tv_discrete(p: &DiscretePmf, q: &DiscretePmf) -> Result<f64> {
    let lo = p.lo().min(q.lo());
    let hi = p.hi().max(q.hi());
    let pm = validated_masses(p)?;
    let qm = validated_masses(q)?;
    let mut acc = 0.0;
    for x in lo..=hi {
        let a = if (p.lo()..=p.hi()).contains(&x) {
            pm[(x - p.lo()) as usize]
        } else {
            0.0
        };
        let b = if (q.lo()..=q.hi()).contains(&x) {
            qm[(x - q.lo()) as usize]
        } else {
            0.0
        };
        acc += (a - b).abs();
    }
    Ok(0.5 * acc)
}

/// The tradeoff curve `C_m = T(Cauchy(0,1), Cauchy(m,1))` with its
/// pure-DP envelope exponents.
///
/// `eps_l` is the exact log of the maximal likelihood ratio (so
/// `f_{eps_l,0} <= C_m`); `eps_u = log((1-c)/c)` is computed from the
/// fixed point of the numerically traced curve (`C_m <= f_{eps_u,0}`).
pub struct CauchyTradeoff {
    pub curve: TradeoffFunction,
    pub eps_l: f64,
    pub eps_u: f64,
}

// Type I / type II errors of the likelihood-ratio test {q/p >= lambda}
// for Cauchy(0,1) vs Cauchy(m,1).  The region is delimited by the roots
// of (1-lambda) x^2 + 2 lambda m x + (1 - lambda - lambda m^2).
fn cauchy_lr_errors(m: f64, lambda: f64) -> (f64, f64) {
    let f0 = |x: f64| 0.5 + x.atan() / PI;
    let fm = |x: f64| 0.5 + (x - m).atan() / PI;
    if (lambda - 1.0).abs() < 1e-14 {
        // Linear boundary: reject on (m/2, inf).
        return (1.0 - f0(m / 2.0), fm(m / 2.0));
    }
    let a = 1.0 - lambda;
    let disc = lambda * m * m - a * a;
    if disc <= 0.0 {
        return if lambda < 1.0 { (1.0, 0.0) } else { (0.0, 1.0) };
    }
    let qq = -(lambda * m + disc.sqrt());
    let r1 = qq / a;
    let r2 = (a - lambda * m * m) / qq;
    let (xlo, xhi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    if lambda < 1.0 {
        // Rejection region is the complement of [xlo, xhi].
        (f0(xlo) + 1.0 - f0(xhi), fm(xhi) - fm(xlo))
    } else {
        // Rejection region is [xlo, xhi].
        (f0(xhi) - f0(xlo), 1.0 - (fm(xhi) - fm(xlo)))
    }
}

pub fn cauchy_tradeoff(m: f64) -> Result<CauchyTradeoff> {
    if !m.is_finite() || m <= 0.0 {
        return Err(Error::param("m", format!("{m} must be > 0")));
    }
    let s = (m * m + 4.0).sqrt();
    let lam_max = (4.0 + (m + s) * (m + s)) / (4.0 + (m - s) * (m - s));
    let lam_min = 1.0 / lam_max;
    let eval = move |alpha: f64| -> f64 {
        if alpha <= 0.0 {
            return 0.0;
        }
        if alpha >= 1.0 {
            return 1.0;
        }
        let target = 1.0 - alpha; // type I error to hit
        let (mut lo, mut hi) = (lam_min, lam_max);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (t1, _) = cauchy_lr_errors(m, mid);
            if t1 > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lam = 0.5 * (lo + hi);
        let (t1, t2) = cauchy_lr_errors(m, lam);
        // First-order correction along the curve; d(beta)/d(alpha) = lambda.
        (t2 + lam * (t1 - target)).clamp(0.0, 1.0)
    };
    let curve = TradeoffFunction::from_parts(
        Arc::new(eval),
        true,
        true,
        None,
        format!("cauchy({m})"),
    );
    let eps_l = lam_max.ln();
    let c = curve.fixed_point();
    let eps_u = if c > 0.0 {
        ((1.0 - c) / c).ln()
    } else {
        f64::INFINITY
    };
    Ok(CauchyTradeoff { curve, eps_l, eps_u })
}
