//! Log-concave canonical noise distributions and stochastic-dominance
//! audits.
//!
//! An infinitely divisible family `{f_t}` has a unique log-concave CND
//! whose cdf is read off a single value per member: `F(-t) = f_t(1/2)`.
//! That noise is stochastically smallest among all rivals satisfying
//! `T(N', N'+t) >= f_t` for every `t`: `|N' - a|` dominates `|N|` for
//! every recentering `a`.  The audit here checks the cdf consequences of
//! that dominance on finite grids (necessary, not sufficient: no finite
//! procedure certifies the family-wide hypothesis for a black box).

use std::sync::Arc;

use crate::cnd::ContinuousCnd;
use crate::discrete::DiscretePmf;
use crate::error::{Error, Result};
use crate::report::AuditReport;
use crate::tradeoff::TradeoffFamily;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A competing noise distribution in one of three encodings.
#[derive(Clone)]
pub enum RivalNoise {
    /// Exact cdf as a closure (assumed continuous).
    Cdf { cdf: ScalarFn, label: String },
    /// Piecewise-linear cdf through `(x[i], f[i])` grid points.
    CdfGrid { x: Vec<f64>, f: Vec<f64>, label: String },
    /// Integer-supported pmf.
    Pmf { pmf: DiscretePmf, label: String },
    /// Empirical sample; cdf estimates carry a DKW confidence band.
    Samples { values: Vec<f64>, label: String },
}

impl std::fmt::Debug for RivalNoise {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RivalNoise({})", self.label())
    }
}

/// Two-sided DKW band at level 1e-3: sampling noise never produces a
/// spurious dominance violation.
fn dkw_band(n: usize) -> f64 {
    ((2.0f64 / 1e-3).ln() / (2.0 * n as f64)).sqrt()
}

impl RivalNoise {
    pub fn from_cdf(
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Self {
        RivalNoise::Cdf {
            cdf: Arc::new(cdf),
            label: label.into(),
        }
    }

    pub fn from_grid(x: Vec<f64>, f: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if x.len() != f.len() || x.len() < 2 {
            return Err(Error::InvalidDistribution(
                "cdf grid needs matching x/F arrays with at least two points".into(),
            ));
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidDistribution(
                    "cdf grid x values must be strictly increasing".into(),
                ));
            }
        }
        for w in f.windows(2) {
            if w[1] < w[0] - 1e-12 {
                return Err(Error::InvalidDistribution(
                    "cdf grid F values must be non-decreasing".into(),
                ));
            }
        }
        if f[0] < -1e-9 || f[f.len() - 1] > 1.0 + 1e-9 || f[0] > 1e-3 || f[f.len() - 1] < 1.0 - 1e-3
        {
            return Err(Error::InvalidDistribution(
                "cdf grid must start near 0 and end near 1".into(),
            ));
        }
        Ok(RivalNoise::CdfGrid {
            x,
            f,
            label: label.into(),
        })
    }

    pub fn from_pmf(pmf: DiscretePmf, label: impl Into<String>) -> Self {
        RivalNoise::Pmf {
            pmf,
            label: label.into(),
        }
    }

    pub fn from_samples(mut values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDistribution(
                "samples must be non-empty and finite".into(),
            ));
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(RivalNoise::Samples {
            values,
            label: label.into(),
        })
    }

    pub fn label(&self) -> &str {
        match self {
            RivalNoise::Cdf { label, .. }
            | RivalNoise::CdfGrid { label, .. }
            | RivalNoise::Pmf { label, .. }
            | RivalNoise::Samples { label, .. } => label,
        }
    }

    /// Confidence band attached to probability estimates (zero for exact
    /// encodings).
    pub fn band(&self) -> f64 {
        match self {
            RivalNoise::Samples { values, .. } => 2.0 * dkw_band(values.len()),
            _ => 0.0,
        }
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            RivalNoise::Cdf { cdf, .. } => cdf(x),
            RivalNoise::CdfGrid { x: xs, f, .. } => {
                if x <= xs[0] {
                    return f[0];
                }
                if x >= xs[xs.len() - 1] {
                    return f[f.len() - 1];
                }
                let i = xs.partition_point(|&v| v < x);
                let (x0, x1) = (xs[i - 1], xs[i]);
                let (f0, f1) = (f[i - 1], f[i]);
                f0 + (f1 - f0) * (x - x0) / (x1 - x0)
            }
            RivalNoise::Pmf { pmf, .. } => pmf.cdf(x.floor() as i64),
            RivalNoise::Samples { values, .. } => {
                values.partition_point(|&v| v <= x) as f64 / values.len() as f64
            }
        }
    }

    /// `P(x_lo < X <= x_hi)` with the open-left/closed-right convention
    /// (exact left limits for pmfs: `P(X <= y) = F(floor(y))`, so an
    /// atom sitting exactly on the open boundary is excluded).
    pub fn window_mass_open_left(&self, x_lo: f64, x_hi: f64) -> f64 {
        match self {
            RivalNoise::Pmf { pmf, .. } => {
                pmf.cdf(x_hi.floor() as i64) - pmf.cdf(x_lo.floor() as i64)
            }
            RivalNoise::Samples { values, .. } => {
                let hi = values.partition_point(|&v| v <= x_hi);
                let lo = values.partition_point(|&v| v <= x_lo);
                (hi - lo) as f64 / values.len() as f64
            }
            _ => self.cdf(x_hi) - self.cdf(x_lo),
        }
    }

    /// `P(|X - a| <= t)` (closed window; for continuous encodings this
    /// coincides with the open-left version).
    pub fn prob_abs_le(&self, a: f64, t: f64) -> f64 {
        match self {
            RivalNoise::Pmf { pmf, .. } => {
                let lo = (a - t).ceil() as i64;
                let hi = (a + t).floor() as i64;
                if hi < lo {
                    0.0
                } else {
                    pmf.cdf(hi) - if lo > pmf.lo() { pmf.cdf(lo - 1) } else { 0.0 }
                }
            }
            RivalNoise::Samples { values, .. } => {
                let hi = values.partition_point(|&v| v <= a + t);
                let lo = values.partition_point(|&v| v < a - t);
                (hi - lo) as f64 / values.len() as f64
            }
            _ => self.cdf(a + t) - self.cdf(a - t),
        }
    }

    /// Generalized inverse, used for default grid placement.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(1e-12, 1.0 - 1e-12);
        match self {
            RivalNoise::Samples { values, .. } => {
                let idx = ((values.len() as f64 * u).floor() as usize).min(values.len() - 1);
                values[idx]
            }
            RivalNoise::Pmf { pmf, .. } => {
                let mut acc = 0.0;
                for x in pmf.lo()..=pmf.hi() {
                    acc += pmf.mass_at(x);
                    if acc >= u {
                        return x as f64;
                    }
                }
                pmf.hi() as f64
            }
            _ => {
                let (mut lo, mut hi) = (-1.0f64, 1.0f64);
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
                hi
            }
        }
    }

    /// `E phi(|X - a|)` by summation (pmf, samples) or a Stieltjes sum
    /// over a fine cdf partition; returns `(value, truncated_mass)`.
    pub fn expect_phi(&self, a: f64, phi: &dyn Fn(f64) -> f64) -> (f64, f64) {
        match self {
            RivalNoise::Pmf { pmf, .. } => {
                let v = (pmf.lo()..=pmf.hi())
                    .map(|x| phi((x as f64 - a).abs()) * pmf.mass_at(x))
                    .sum();
                (v, pmf.truncated_mass())
            }
            RivalNoise::Samples { values, .. } => {
                let v = values.iter().map(|&s| phi((s - a).abs())).sum::<f64>()
                    / values.len() as f64;
                (v, 0.0)
            }
            _ => {
                let lo = self.quantile(1e-12);
                let hi = self.quantile(1.0 - 1e-12);
                let cells = 20_000;
                let h = (hi - lo) / cells as f64;
                let mut acc = 0.0;
                let mut prev = self.cdf(lo);
                for i in 0..cells {
                    let x1 = lo + (i + 1) as f64 * h;
                    let next = self.cdf(x1);
                    let mid = lo + (i as f64 + 0.5) * h;
                    acc += phi((mid - a).abs()) * (next - prev);
                    prev = next;
                }
                (acc, self.cdf(lo) + (1.0 - prev).max(0.0))
            }
        }
    }
}

/// Construct the log-concave CND of an infinitely divisible family via
/// `F(-t) = f_t(1/2)`; the result is a CND for the member `f_1`.
pub fn construct_logconcave_cnd(family: &TradeoffFamily) -> Result<ContinuousCnd> {
    family.check_divisible(1e-8)?;
    let f1 = family.member(1.0)?;
    let c1 = f1.fixed_point();
    let fam = family.clone();
    let cdf_fn = move |x: f64| -> f64 {
        if x == 0.0 {
            0.5
        } else if x < 0.0 {
            fam.member(-x).map(|f| f.eval(0.5)).unwrap_or(0.0)
        } else {
            1.0 - fam.member(x).map(|f| f.eval(0.5)).unwrap_or(0.0)
        }
    };
    Ok(ContinuousCnd::from_parts(
        f1,
        c1,
        Arc::new(cdf_fn),
        format!("logconcave-cnd[{}]", family.label()),
    ))
}

/// `c_{f_t}` of a divisible family without solving any fixed-point
/// equation: `c_{f_t} = f_{t/2}(1/2)`.
pub fn family_fixed_point(family: &TradeoffFamily, t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::param("t", format!("{t} must be > 0")));
    }
    Ok(family.member(t / 2.0)?.eval(0.5))
}

/// Grid audit of stochastic dominance: `P(|N| <= t) >= P(|rival - a| <= t)`
/// over the supplied (or default) center/radius grids, plus an optional
/// `E phi` comparison for a non-decreasing `phi`.
pub fn dominance_audit(
    cnd: &ContinuousCnd,
    rival: &RivalNoise,
    a_grid: &[f64],
    t_grid: &[f64],
    phi: Option<&dyn Fn(f64) -> f64>,
) -> Result<AuditReport> {
    let mut report = AuditReport::new(format!(
        "stochastic dominance: {} vs {}",
        cnd.label(),
        rival.label()
    ));
    report.assume(
        "rival is declared to satisfy T(N', N'+t) >= f_t for all t >= 0; \
         this audit checks necessary cdf consequences on a grid only",
    );
    let band = rival.band();
    if band > 0.0 {
        report.note(format!(
            "empirical rival: DKW band {band:.3e} at level 1e-3; \
             violations inside the band are not declared"
        ));
    }
    let tol = 1e-9 + band;

    // Default grids: centers at IQR multiples, radii up to the CND's
    // 1 - 1e-6 quantile.
    let owned_a: Vec<f64>;
    let a_grid = if a_grid.is_empty() {
        let iqr = (rival.quantile(0.75) - rival.quantile(0.25)).max(1e-6);
        owned_a = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
            .iter()
            .map(|m| m * iqr)
            .collect();
        &owned_a
    } else {
        a_grid
    };
    let owned_t: Vec<f64>;
    let t_grid = if t_grid.is_empty() {
        let t_hi = cnd.quantile(1.0 - 1e-6)?;
        owned_t = (0..=200).map(|i| t_hi * i as f64 / 200.0).collect();
        &owned_t
    } else {
        t_grid
    };

    for &a in a_grid {
        for &t in t_grid {
            if t < 0.0 {
                continue;
            }
            let own = cnd.cdf(t) - cnd.cdf(-t);
            let other = rival.prob_abs_le(a, t);
            report.push_upper(
                "P(|rival-a| <= t) <= P(|N| <= t)",
                Some(a),
                Some(t),
                own,
                other,
                tol,
            );
        }
    }

    if let Some(phi) = phi {
        // E phi(|N|) by Stieltjes sum over the CND quantile range.
        let lo = cnd.quantile(1e-12)?;
        let hi = cnd.quantile(1.0 - 1e-12)?;
        let cells = 20_000;
        let h = (hi - lo) / cells as f64;
        let mut own = 0.0;
        let mut prev = cnd.cdf(lo);
        for i in 0..cells {
            let next = cnd.cdf(lo + (i + 1) as f64 * h);
            let mid = lo + (i as f64 + 0.5) * h;
            own += phi(mid.abs()) * (next - prev);
            prev = next;
        }
        let own_trunc = cnd.cdf(lo) + (1.0 - prev).max(0.0);
        if own_trunc > 1e-9 {
            report.note(format!("own integration truncated mass {own_trunc:.3e}"));
        }
        for &a in a_grid {
            let (rv, trunc) = rival.expect_phi(a, phi);
            if trunc > 1e-9 {
                report.note(format!(
                    "rival integration truncated mass {trunc:.3e} at a = {a}"
                ));
            }
            report.push_lower(
                "E phi(|rival-a|) >= E phi(|N|)",
                Some(a),
                None,
                own,
                rv,
                tol + trunc,
            );
        }
    }
    Ok(report)
}
