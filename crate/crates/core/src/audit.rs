//! Anti-concentration audits for additive noise.
//!
//! The window bound: any noise with `T(N, N+1) >= f` satisfies
//! `sup_a P(-t/2 < N - a <= t/2) <= 1 - 2 f^{ok}(c_f)` for odd window
//! lengths `t = 2k+1` and `1 - 2 f^{ok}(1/2)` for even `t = 2k`.  A
//! grid violation is therefore a proof that the noise cannot satisfy
//! `f`-DP at sensitivity 1.  Canonical noise distributions attain the
//! bound exactly, which the ratio check exploits: no rival can place
//! more than `P(|N| <= t + 1/2)` of mass in any radius-`t` window.

use crate::cnd::ContinuousCnd;
use crate::error::{Error, Result};
use crate::logconcave::RivalNoise;
use crate::report::AuditReport;
use crate::tradeoff::TradeoffFunction;

/// A noise description under audit: a payload in any [`RivalNoise`]
/// encoding plus the sensitivity it is declared for.
#[derive(Clone, Debug)]
pub struct NoiseSpec {
    pub noise: RivalNoise,
    pub sensitivity: u32,
}

impl NoiseSpec {
    pub fn new(noise: RivalNoise, sensitivity: u32) -> Result<Self> {
        if sensitivity < 1 {
            return Err(Error::param("sensitivity", "must be >= 1"));
        }
        Ok(NoiseSpec { noise, sensitivity })
    }
}

/// Result of maximizing a window probability over candidate centers.
#[derive(Clone, Debug)]
pub struct SupRecord {
    pub sup: f64,
    pub argmax_a: f64,
    /// Confidence band when the noise is empirical, zero otherwise.
    pub band: f64,
}

fn default_centers(noise: &RivalNoise, t: f64) -> Vec<f64> {
    match noise {
        RivalNoise::Pmf { pmf, .. } => {
            // Window edges a +- t/2 cross atoms only when a moves through
            // half-integers, so the half-integer lattice attains the sup.
            let lo = pmf.lo() as f64 - 1.0;
            let hi = pmf.hi() as f64 + 1.0;
            let steps = ((hi - lo) * 2.0) as usize;
            (0..=steps).map(|i| lo + i as f64 * 0.5).collect()
        }
        _ => {
            // 2001 points over the central 99.9999% quantile range, plus
            // breakpoint-aligned candidates for grid cdfs.
            let q_lo = noise.quantile(5e-7);
            let q_hi = noise.quantile(1.0 - 5e-7);
            let mut centers: Vec<f64> = (0..=2000)
                .map(|i| q_lo + (q_hi - q_lo) * i as f64 / 2000.0)
                .collect();
            if let RivalNoise::CdfGrid { x, .. } = noise {
                for &xi in x {
                    centers.push(xi - t / 2.0);
                    centers.push(xi + t / 2.0);
                }
            }
            centers
        }
    }
}

/// `max_a P(-t/2 < N - a <= t/2)` over the supplied centers (or a
/// noise-adapted default grid when `a_grid` is empty), with exact left
/// limits at integer boundaries for pmf noise.
pub fn center_mass_sup(noise: &NoiseSpec, t: f64, a_grid: &[f64]) -> Result<SupRecord> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::param("t", format!("{t} must be > 0")));
    }
    let owned;
    let centers = if a_grid.is_empty() {
        owned = default_centers(&noise.noise, t);
        &owned
    } else {
        a_grid
    };
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for &a in centers {
        let mass = noise.noise.window_mass_open_left(a - t / 2.0, a + t / 2.0);
        if mass > best.0 {
            best = (mass, a);
        }
    }
    Ok(SupRecord {
        sup: best.0,
        argmax_a: best.1,
        band: noise.noise.band(),
    })
}

/// The anti-concentration bound for window length `t`:
/// `1 - 2 f^{ok}(c_f)` if `t = 2k+1`, `1 - 2 f^{ok}(1/2)` if `t = 2k`.
pub fn anti_bound(f: &TradeoffFunction, t: u32) -> Result<f64> {
    if t < 1 {
        return Err(Error::param("t", format!("{t} must be >= 1")));
    }
    if !f.symmetric() || !f.nontrivial() {
        return Err(Error::InvalidTradeoff(format!(
            "{}: the bound is stated for symmetric nontrivial tradeoff functions",
            f.label()
        )));
    }
    let k = t / 2;
    let start = if t % 2 == 1 { f.fixed_point() } else { 0.5 };
    Ok(1.0 - 2.0 * f.apply_iterated(start, k))
}

/// Compare the achieved window mass against the anti-concentration
/// bound for every integer window length up to `t_max`.  A violation
/// proves (contrapositive) that the noise cannot satisfy `f`-DP at
/// sensitivity 1.
pub fn audit_noise(
    noise: &NoiseSpec,
    f: &TradeoffFunction,
    t_max: u32,
    a_grid: &[f64],
) -> Result<AuditReport> {
    let mut report = AuditReport::new(format!(
        "anti-concentration of {} against {}",
        noise.noise.label(),
        f.label()
    ));
    report.assume(
        "bounds apply to additive noise at sensitivity 1; \
         a violated window length refutes the f-DP claim",
    );
    if noise.sensitivity != 1 {
        report.note(format!(
            "noise declares sensitivity {}, but the bound is stated at sensitivity 1",
            noise.sensitivity
        ));
    }
    if matches!(noise.noise, RivalNoise::Pmf { .. }) {
        report.note(
            "integer-supported noise: odd window lengths 2k+1 realize \
             sup over integer centers of P(|N-a| <= k)"
                .to_string(),
        );
    }
    for t in 1..=t_max {
        let bound = anti_bound(f, t)?;
        let rec = center_mass_sup(noise, t as f64, a_grid)?;
        report.push_upper(
            "window mass vs anti-concentration bound",
            Some(rec.argmax_a),
            Some(t as f64),
            bound,
            rec.sup,
            1e-9 + rec.band,
        );
    }
    Ok(report)
}

/// The radius-ratio consequence of CND optimality: for any rival with
/// `T(N', N'+1) >= f` and the CND `N` for `f`,
/// `sup_a P(-t < N'-a <= t) / P(|N| <= t+1/2) <= 1` for all `t >= 0`.
pub fn ratio_check(
    cnd: &ContinuousCnd,
    rival: &NoiseSpec,
    t_grid: &[f64],
    a_grid: &[f64],
) -> Result<AuditReport> {
    let mut report = AuditReport::new(format!(
        "window ratio of {} against {}",
        rival.noise.label(),
        cnd.label()
    ));
    report.assume("rival is declared to satisfy T(N', N'+1) >= f");
    for &t in t_grid {
        if !t.is_finite() || t < 0.0 {
            continue;
        }
        let denom = cnd.cdf(t + 0.5) - cnd.cdf(-(t + 0.5));
        if denom <= 1e-300 {
            report.note(format!("t = {t}: degenerate denominator, skipped"));
            continue;
        }
        let (num, argmax, band) = if t == 0.0 {
            (0.0, 0.0, rival.noise.band())
        } else {
            let rec = center_mass_sup(rival, 2.0 * t, a_grid)?;
            (rec.sup, rec.argmax_a, rec.band)
        };
        report.push_upper(
            "P(-t < N'-a <= t) / P(|N| <= t+1/2)",
            Some(argmax),
            Some(t),
            1.0,
            num / denom,
            1e-9 + band / denom,
        );
    }
    Ok(report)
}
