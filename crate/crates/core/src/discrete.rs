//! Integer-valued canonical noise distributions.
//!
//! A discrete CND for `f` at sensitivity `delta` is a symmetric
//! integer-supported noise whose cdf satisfies `f(F(t+delta)) = F(t)`
//! and whose shift tradeoffs dominate `f`.  One always exists by
//! rounding `delta` times a continuous CND; at sensitivity 1 it is
//! unique, with pmf `f^{o|x|}(1-c_f) - f^{o|x|}(c_f)`.

use crate::cnd::ContinuousCnd;
use crate::error::{Error, Result};
use crate::normal::normal_cdf;
use crate::report::AuditReport;
use crate::rng::CounterRng;
use crate::tradeoff::{dominates, roc_discrete, TradeoffFunction};

/// Per-side tail mass below which infinite supports are truncated.
const TAIL_EPS: f64 = 1e-15;
/// Hard cap on support radius during truncation walks.
const SUPPORT_CAP: i64 = 1_000_000;

/// A pmf on a contiguous integer range `[lo, hi]`.  When an infinite
/// tail has been truncated, the discarded mass is recorded and the
/// stored masses sum to `1 - truncated_mass`.
#[derive(Clone, Debug)]
pub struct DiscretePmf {
    lo: i64,
    mass: Vec<f64>,
    truncated_mass: f64,
    // Prefix sums; cum[i] = mass[0..=i] summed, so cdf is O(1).
    cum: Vec<f64>,
}

impl PartialEq for DiscretePmf {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo
            && self.mass == other.mass
            && self.truncated_mass == other.truncated_mass
    }
}

impl DiscretePmf {
    /// Validating constructor for externally supplied masses.
    pub fn new(lo: i64, mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::InvalidDistribution("empty pmf".into()));
        }
        let mut mass = mass;
        let mut total = 0.0;
        for m in &mut mass {
            if !m.is_finite() || *m < -1e-12 {
                return Err(Error::InvalidDistribution(format!(
                    "pmf mass {m} is negative or not finite"
                )));
            }
            *m = m.max(0.0);
            total += *m;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "pmf masses sum to {total}, not 1"
            )));
        }
        Ok(DiscretePmf::raw(lo, mass, (1.0 - total).max(0.0)))
    }

    pub(crate) fn raw(lo: i64, mass: Vec<f64>, truncated_mass: f64) -> Self {
        let mut cum = Vec::with_capacity(mass.len());
        let mut acc = 0.0;
        for m in &mass {
            acc += m;
            cum.push(acc);
        }
        DiscretePmf {
            lo,
            mass,
            truncated_mass,
            cum,
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.mass.len() as i64 - 1
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    pub fn mass_at(&self, x: i64) -> f64 {
        if x < self.lo || x > self.hi() {
            0.0
        } else {
            self.mass[(x - self.lo) as usize]
        }
    }

    /// Cdf `P(N <= x)`, attributing half the truncated mass to each tail.
    pub fn cdf(&self, x: i64) -> f64 {
        if x < self.lo {
            return 0.0;
        }
        if x >= self.hi() {
            return 1.0;
        }
        (0.5 * self.truncated_mass + self.cum[(x - self.lo) as usize]).min(1.0)
    }

    /// Mass of the closed window `[a-t, a+t]` (stored masses only).
    pub fn window_mass(&self, a: i64, t: i64) -> f64 {
        let lo = (a - t).max(self.lo);
        let hi = (a + t).min(self.hi());
        if hi < lo {
            return 0.0;
        }
        let upper = self.cum[(hi - self.lo) as usize];
        if lo == self.lo {
            upper
        } else {
            upper - self.cum[(lo - 1 - self.lo) as usize]
        }
    }

    /// The pmf of `N + t`.
    pub fn shift(&self, t: i64) -> DiscretePmf {
        DiscretePmf {
            lo: self.lo + t,
            mass: self.mass.clone(),
            truncated_mass: self.truncated_mass,
            cum: self.cum.clone(),
        }
    }

    /// Raw moment `sum x^k m(x)` for `k >= 1`.  Odd moments of an
    /// exactly symmetric pmf return exactly zero: terms are paired as
    /// `x^k (m(x) - m(-x))`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        if k < 1 {
            return Err(Error::param("k", format!("{k} must be >= 1")));
        }
        let r = self.lo.abs().max(self.hi().abs());
        let mut acc = 0.0;
        for x in 1..=r {
            let xk = (x as f64).powi(k as i32);
            if k % 2 == 1 {
                acc += xk * (self.mass_at(x) - self.mass_at(-x));
            } else {
                acc += xk * (self.mass_at(x) + self.mass_at(-x));
            }
        }
        Ok(acc)
    }

    /// Central second moment.
    pub fn variance(&self) -> f64 {
        let m1 = self.moment(1).unwrap();
        self.moment(2).unwrap() - m1 * m1
    }

    /// Reproducible inverse-cdf draws over the stored support.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<i64> {
        let total = self.cum[self.cum.len() - 1];
        let mut rng = CounterRng::new(seed);
        (0..n)
            .map(|_| {
                let u = rng.next_unit() * total;
                let idx = self.cum.partition_point(|&c| c < u);
                self.lo + idx.min(self.mass.len() - 1) as i64
            })
            .collect()
    }
}

/// A discrete CND: pmf, the tradeoff function it certifies, and the
/// sensitivity it was designed for.  `new` wraps a candidate without
/// checking anything; [`verify_discrete_cnd`] audits the defining
/// properties.
#[derive(Clone, Debug)]
pub struct DiscreteCnd {
    pmf: DiscretePmf,
    f: TradeoffFunction,
    delta: u32,
}

impl DiscreteCnd {
    pub fn new(pmf: DiscretePmf, f: TradeoffFunction, delta: u32) -> Result<Self> {
        if delta < 1 {
            return Err(Error::param("delta", "sensitivity must be >= 1"));
        }
        Ok(DiscreteCnd { pmf, f, delta })
    }

    pub fn pmf(&self) -> &DiscretePmf {
        &self.pmf
    }

    pub fn tradeoff(&self) -> &TradeoffFunction {
        &self.f
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn sample(&self, seed: u64, n: usize) -> Vec<i64> {
        self.pmf.sample(seed, n)
    }
}

/// Round `delta` times a continuous CND to the integers:
/// `P(N = x) = F_c((x+1/2)/delta) - F_c((x-1/2)/delta)`, the cdf
/// identity `F_N(t) = F_{delta N_c}(t + 1/2)`.
pub fn round_cnd(cnd: &ContinuousCnd, delta: u32) -> Result<DiscreteCnd> {
    if delta < 1 {
        return Err(Error::param("delta", "sensitivity must be >= 1"));
    }
    let d = delta as f64;
    let mut hi = 0i64;
    while cnd.cdf(-((hi as f64 + 0.5) / d)) >= TAIL_EPS && hi < SUPPORT_CAP {
        hi += 1;
    }
    let lo = -hi;
    let mut mass = Vec::with_capacity((2 * hi + 1) as usize);
    for x in lo..=hi {
        let m = cnd.cdf((x as f64 + 0.5) / d) - cnd.cdf((x as f64 - 0.5) / d);
        mass.push(m.max(0.0));
    }
    let truncated = 2.0 * cnd.cdf(-((hi as f64 + 0.5) / d));
    DiscreteCnd::new(
        DiscretePmf::raw(lo, mass, truncated),
        cnd.tradeoff().clone(),
        delta,
    )
}

/// The unique discrete CND at sensitivity 1:
/// `P(N = x) = f^{o|x|}(1 - c_f) - f^{o|x|}(c_f)`.
pub fn unique_sens1(f: &TradeoffFunction) -> Result<DiscreteCnd> {
    if !f.symmetric() || !f.nontrivial() {
        return Err(Error::InvalidTradeoff(format!(
            "{}: a discrete CND requires a symmetric nontrivial tradeoff function",
            f.label()
        )));
    }
    let c = f.fixed_point();
    let mut upper = 1.0 - c;
    let mut lower = c;
    let mut half = vec![upper - lower]; // mass at 0
    let mut tail = 2.0 * lower; // P(|N| >= 1) = 2 f^{o0}(c_f)
    while tail >= TAIL_EPS && (half.len() as i64) < SUPPORT_CAP {
        upper = f.eval(upper);
        lower = f.eval(lower);
        half.push((upper - lower).max(0.0));
        tail = 2.0 * lower;
    }
    let k = half.len() as i64 - 1;
    let mut mass = Vec::with_capacity((2 * k + 1) as usize);
    for x in -k..=k {
        mass.push(half[x.unsigned_abs() as usize]);
    }
    DiscreteCnd::new(DiscretePmf::raw(-k, mass, tail), f.clone(), 1)
}

/// Closed-form comparison distributions.
#[derive(Clone, Debug)]
pub enum NamedDistribution {
    /// `((e^eps - 1)/(e^eps + 1)) e^{-eps |x|}`: the geometric mechanism.
    DiscreteLaplace { eps: f64 },
    /// `Phi((x+1/2)/sigma) - Phi((x-1/2)/sigma)`: a rounded Gaussian.
    RoundedGaussian { sigma: f64 },
    /// `e^{-x^2/(2 sigma^2)}` normalized by the Jacobi theta sum
    /// `theta_3(0, e^{-1/(2 sigma^2)})`.
    DiscreteGaussian { sigma: f64 },
}

pub fn named_distribution(which: &NamedDistribution) -> Result<DiscretePmf> {
    match *which {
        NamedDistribution::DiscreteLaplace { eps } => {
            if !eps.is_finite() || eps <= 0.0 {
                return Err(Error::param("eps", format!("{eps} must be > 0")));
            }
            let b = (-eps).exp();
            let tail = |k: i64| 2.0 * (-eps * (k as f64 + 1.0)).exp() / (1.0 + b);
            let mut k = 0i64;
            while tail(k) >= TAIL_EPS && k < SUPPORT_CAP {
                k += 1;
            }
            let scale = (1.0 - b) / (1.0 + b);
            let mass = (-k..=k)
                .map(|x| scale * (-eps * x.abs() as f64).exp())
                .collect();
            Ok(DiscretePmf::raw(-k, mass, tail(k)))
        }
        NamedDistribution::RoundedGaussian { sigma } => {
            if !sigma.is_finite() || sigma <= 0.0 {
                return Err(Error::param("sigma", format!("{sigma} must be > 0")));
            }
            let tail = |k: i64| 2.0 * normal_cdf(-(k as f64 + 0.5) / sigma);
            let mut k = 0i64;
            while tail(k) >= TAIL_EPS && k < SUPPORT_CAP {
                k += 1;
            }
            let mass = (-k..=k)
                .map(|x| {
                    normal_cdf((x as f64 + 0.5) / sigma) - normal_cdf((x as f64 - 0.5) / sigma)
                })
                .collect();
            Ok(DiscretePmf::raw(-k, mass, tail(k)))
        }
        NamedDistribution::DiscreteGaussian { sigma } => {
            if !sigma.is_finite() || sigma <= 0.0 {
                return Err(Error::param("sigma", format!("{sigma} must be > 0")));
            }
            let s2 = 2.0 * sigma * sigma;
            // theta_3(0, e^{-1/(2 sigma^2)}) by truncated summation; the
            // terms decay like e^{-k^2/(2 sigma^2)}, so this radius adds
            // error far below double precision for sigma <= 10.
            let k3 = (10.0 * sigma + 20.0).ceil() as i64;
            let mut theta = 1.0;
            for k in 1..=k3 {
                theta += 2.0 * (-(k as f64) * (k as f64) / s2).exp();
            }
            let mut k = 0i64;
            while (-((k + 1) as f64) * ((k + 1) as f64) / s2).exp() / theta >= 1e-18
                && k < SUPPORT_CAP
            {
                k += 1;
            }
            let mass: Vec<f64> = (-k..=k)
                .map(|x| (-(x as f64) * (x as f64) / s2).exp() / theta)
                .collect();
            let total: f64 = mass.iter().sum();
            Ok(DiscretePmf::raw(-k, mass, (1.0 - total).max(0.0)))
        }
    }
}

/// Valid interval for `F(0)` of the sensitivity-2 pure-DP family:
/// `[2 e^eps / (3 e^eps + 1), (e^eps + 1)/(e^eps + 3)]`.
pub fn sens2_f0_interval(eps: f64) -> Result<(f64, f64)> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::param("eps", format!("{eps} must be > 0")));
    }
    let e = eps.exp();
    Ok((2.0 * e / (3.0 * e + 1.0), (e + 1.0) / (e + 3.0)))
}

/// The sensitivity-2 discrete CND family for pure `eps`-DP.  Symmetry
/// pins `F(-1) = 1 - F(0)` and the recurrence `f(F(t+2)) = F(t)` fixes
/// every other cdf value, leaving `F(0)` as the single degree of
/// freedom, valid exactly on [`sens2_f0_interval`].
pub fn sens2_pure_dp(eps: f64, f0: f64) -> Result<DiscreteCnd> {
    let (lo_b, hi_b) = sens2_f0_interval(eps)?;
    if !(lo_b..=hi_b).contains(&f0) {
        return Err(Error::param(
            "F0",
            format!("{f0} is outside the valid interval [{lo_b:.7}, {hi_b:.7}]"),
        ));
    }
    let f = TradeoffFunction::eps_delta(eps, 0.0)?;
    // Left cdf values F(0), F(-1), F(-2), ... via F(t) = f(F(t+2)).
    let mut left = vec![f0, 1.0 - f0];
    while *left.last().unwrap() >= 0.5 * TAIL_EPS && (left.len() as i64) < SUPPORT_CAP {
        let next = f.eval(left[left.len() - 2]);
        left.push(next);
    }
    let m = left.len() as i64 - 1; // we know F(-m) < tail threshold
    let cdf = |t: i64| -> f64 {
        if t >= 0 {
            1.0 - left[(t + 1) as usize] // F(t) = 1 - F(-t-1)
        } else {
            left[(-t) as usize]
        }
    };
    let (lo, hi) = (-(m - 1), m - 1);
    let mut mass = Vec::with_capacity((hi - lo + 1) as usize);
    for x in lo..=hi {
        let p = if x == lo {
            cdf(x) - left[m as usize]
        } else {
            cdf(x) - cdf(x - 1)
        };
        if p < -1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "implied mass at {x} is negative ({p:e})"
            )));
        }
        mass.push(p.max(0.0));
    }
    let truncated = 2.0 * left[m as usize];
    DiscreteCnd::new(DiscretePmf::raw(lo, mass, truncated), f, 2)
}

/// Check the three defining properties of a discrete CND: symmetry of
/// the pmf, the cdf recurrence at its sensitivity, and exact ROC
/// dominance for every shift `1..=delta`.
pub fn verify_discrete_cnd(cand: &DiscreteCnd) -> AuditReport {
    let mut report = AuditReport::new(format!(
        "discrete CND properties for {} at sensitivity {}",
        cand.tradeoff().label(),
        cand.delta()
    ));
    let pmf = cand.pmf();
    let f = cand.tradeoff();
    let tol = 1e-9 + pmf.truncated_mass();
    if pmf.truncated_mass() > 0.0 {
        report.note(format!(
            "support truncated; {:.3e} tail mass folded into tolerances",
            pmf.truncated_mass()
        ));
    }

    let r = pmf.lo().abs().max(pmf.hi().abs());
    let mut worst_sym = 0.0_f64;
    for x in 0..=r {
        worst_sym = worst_sym.max((pmf.mass_at(x) - pmf.mass_at(-x)).abs());
    }
    report.push_upper("symmetry: max |m(x) - m(-x)|", None, None, 0.0, worst_sym, 1e-12);

    let d = cand.delta() as i64;
    for t in (pmf.lo() - 1)..=pmf.hi() {
        let up = pmf.cdf(t + d);
        if up < 1.0 {
            let residual = (f.eval(up) - pmf.cdf(t)).abs();
            report.push_upper(
                "recurrence: |f(F(t+delta)) - F(t)|",
                None,
                Some(t as f64),
                0.0,
                residual,
                tol,
            );
        }
    }

    for t in 1..=d {
        match roc_discrete(pmf, &pmf.shift(t)) {
            Ok(curve) => {
                let check = dominates(&curve, f, tol);
                report.push_lower(
                    format!("roc dominance, shift {t}"),
                    Some(check.worst_alpha),
                    Some(t as f64),
                    check.worst_f_value,
                    check.worst_curve_value,
                    tol,
                );
            }
            Err(e) => {
                report.note(format!("roc computation failed for shift {t}: {e}"));
                report.push_lower(format!("roc dominance, shift {t}"), None, Some(t as f64), 0.0, -1.0, 0.0);
            }
        }
    }
    report
}

/// Stochastic-dominance audit of a sensitivity-1 discrete CND against a
/// rival integer noise: `P(|N| <= t) = 1 - 2 f^{ot}(c_f)` must dominate
/// `P(|rival - a| <= t)` for every integer center `a` and radius
/// `t <= t_max`; optionally compares `E phi(|.|)` for a non-decreasing
/// `phi`.
pub fn dominance_audit_discrete(
    dcnd: &DiscreteCnd,
    rival: &DiscretePmf,
    a_range: std::ops::RangeInclusive<i64>,
    t_max: u32,
    phi: Option<&dyn Fn(f64) -> f64>,
) -> Result<AuditReport> {
    if dcnd.delta() != 1 {
        return Err(Error::param(
            "dcnd",
            "stochastic optimality holds at sensitivity 1 only",
        ));
    }
    let f = dcnd.tradeoff();
    let mut report = AuditReport::new(format!(
        "discrete stochastic dominance: {} vs rival",
        f.label()
    ));
    report.assume("rival is declared to satisfy T(rival, rival+1) >= f; re-verified below");
    let tol = 1e-9 + rival.truncated_mass() + dcnd.pmf().truncated_mass();
    if rival.truncated_mass() > 0.0 {
        report.note(format!(
            "rival truncated mass {:.3e} folded into tolerances",
            rival.truncated_mass()
        ));
    }

    let rival_curve = roc_discrete(rival, &rival.shift(1))?;
    let rc = dominates(&rival_curve, f, tol);
    report.push_lower(
        "assumption: rival roc >= f",
        Some(rc.worst_alpha),
        None,
        rc.worst_f_value,
        rc.worst_curve_value,
        tol,
    );

    let c = f.fixed_point();
    let mut iterate = c;
    let mut bounds = Vec::with_capacity(t_max as usize + 1);
    for _ in 0..=t_max {
        bounds.push(1.0 - 2.0 * iterate);
        iterate = f.eval(iterate);
    }

    for a in a_range.clone() {
        for (t, bound) in bounds.iter().enumerate() {
            let achieved = rival.window_mass(a, t as i64);
            report.push_upper(
                "window mass: P(|rival-a| <= t)",
                Some(a as f64),
                Some(t as f64),
                *bound,
                achieved,
                tol,
            );
        }
    }

    if let Some(phi) = phi {
        let own: f64 = (dcnd.pmf().lo()..=dcnd.pmf().hi())
            .map(|x| phi(x.abs() as f64) * dcnd.pmf().mass_at(x))
            .sum();
        for a in a_range {
            let rival_val: f64 = (rival.lo()..=rival.hi())
                .map(|x| phi((x - a).abs() as f64) * rival.mass_at(x))
                .sum();
            report.push_lower(
                "E phi(|rival-a|) >= E phi(|N|)",
                Some(a as f64),
                None,
                own,
                rival_val,
                tol,
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, Normal};

    const E: f64 = std::f64::consts::E;

    fn f10() -> TradeoffFunction {
        TradeoffFunction::eps_delta(1.0, 0.0).unwrap()
    }

    fn g1() -> TradeoffFunction {
        TradeoffFunction::gdp(1.0).unwrap()
    }

    fn cnd(f: TradeoffFunction) -> ContinuousCnd {
        ContinuousCnd::construct(f).unwrap()
    }

    #[test]
    fn rounding_pure_dp_gives_the_discrete_laplace() {
        let dc = round_cnd(&cnd(f10()), 1).unwrap();
        let expect0 = (E - 1.0) / (E + 1.0);
        assert!((dc.pmf().mass_at(0) - expect0).abs() < 1e-10);
        for x in -10..=10i64 {
            let closed = expect0 * (-(x.abs() as f64)).exp();
            assert!((dc.pmf().mass_at(x) - closed).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn rounding_gdp_gives_the_rounded_gaussian() {
        let dc = round_cnd(&cnd(g1()), 1).unwrap();
        let n = Normal::new(0.0, 1.0).unwrap();
        for x in -8..=8i64 {
            let closed = n.cdf(x as f64 + 0.5) - n.cdf(x as f64 - 0.5);
            assert!((dc.pmf().mass_at(x) - closed).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn staircase_structure_at_sensitivity_6() {
        // Rounding the (1, 0.05)-DP CND at delta = 6.  The continuous cdf
        // is piecewise linear with kinks at the half-integers, which land
        // on x = 6j + 3 after scaling: masses are constant on the runs
        // {6j-2..6j+2} between those breakpoints and strictly decrease
        // from run to run.
        let f = TradeoffFunction::eps_delta(1.0, 0.05).unwrap();
        let dc = round_cnd(&cnd(f), 6).unwrap();
        let pmf = dc.pmf();
        for j in 0..=2i64 {
            let center = 6 * j;
            let level = pmf.mass_at(center);
            for x in center - 2..=center + 2 {
                assert!(
                    (pmf.mass_at(x) - level).abs() < 1e-9,
                    "block {j} not constant at x={x}"
                );
                assert!(
                    (pmf.mass_at(-x) - level).abs() < 1e-9,
                    "block {j} not symmetric at x={x}"
                );
            }
            if j > 0 {
                let prev = pmf.mass_at(6 * (j - 1));
                let step = pmf.mass_at(6 * j - 3);
                assert!(prev > step && step > level, "staircase not decreasing at j={j}");
            }
        }
        let report = verify_discrete_cnd(&dc);
        assert!(report.all_pass, "{}", report.render_table());
    }

    #[test]
    fn unique_sens1_matches_closed_forms() {
        let dc = unique_sens1(&f10()).unwrap();
        let c = 1.0 / (1.0 + E);
        assert!((dc.pmf().mass_at(0) - (1.0 - 2.0 * c)).abs() < 1e-14);
        for x in -20..=20i64 {
            let closed = (E - 1.0) / (E + 1.0) * (-(x.abs() as f64)).exp();
            assert!((dc.pmf().mass_at(x) - closed).abs() < 1e-10, "x={x}");
        }

        let dg = unique_sens1(&g1()).unwrap();
        let expect0 = 2.0 * normal_cdf(0.5) - 1.0;
        assert!((dg.pmf().mass_at(0) - expect0).abs() < 1e-10);

        assert!(unique_sens1(&TradeoffFunction::identity()).is_err());
    }

    #[test]
    fn rounding_and_recurrence_agree_at_sensitivity_1() {
        for f in [
            f10(),
            TradeoffFunction::eps_delta(1.0, 0.05).unwrap(),
            g1(),
            TradeoffFunction::eps_delta(0.0, 0.5).unwrap(),
        ] {
            let a = unique_sens1(&f).unwrap();
            let b = round_cnd(&cnd(f.clone()), 1).unwrap();
            let r = a.pmf().hi().max(b.pmf().hi());
            for x in -r..=r {
                assert!(
                    (a.pmf().mass_at(x) - b.pmf().mass_at(x)).abs() < 1e-9,
                    "{} x={x}",
                    f.label()
                );
            }
        }
    }

    #[test]
    fn cumulative_mass_matches_the_iterate_formula() {
        for f in [f10(), g1()] {
            let dc = unique_sens1(&f).unwrap();
            let c = f.fixed_point();
            for t in 0..=20u32 {
                let lhs = dc.pmf().window_mass(0, t as i64);
                let rhs = 1.0 - 2.0 * f.apply_iterated(c, t);
                assert!((lhs - rhs).abs() < 1e-10, "{} t={t}", f.label());
            }
        }
    }

    #[test]
    fn named_distributions() {
        let dl = named_distribution(&NamedDistribution::DiscreteLaplace { eps: 1.0 }).unwrap();
        assert!((dl.mass_at(0) - (E - 1.0) / (E + 1.0)).abs() < 1e-12);
        let total: f64 = dl.masses().iter().sum();
        assert!((total + dl.truncated_mass() - 1.0).abs() < 1e-12);

        let rg = named_distribution(&NamedDistribution::RoundedGaussian { sigma: 1.0 }).unwrap();
        assert!((rg.mass_at(0) - (2.0 * normal_cdf(0.5) - 1.0)).abs() < 1e-12);

        let dg = named_distribution(&NamedDistribution::DiscreteGaussian { sigma: 1.0 }).unwrap();
        let curve = roc_discrete(&dg, &dg.shift(1)).unwrap();
        let c = curve.fixed_point();
        assert!((c - 0.5 * (1.0 - dg.mass_at(0))).abs() < 1e-9);
        assert!((c - 0.301).abs() < 1e-3, "c={c}");

        assert!(named_distribution(&NamedDistribution::DiscreteLaplace { eps: 0.0 }).is_err());
        assert!(named_distribution(&NamedDistribution::RoundedGaussian { sigma: -1.0 }).is_err());
    }

    #[test]
    fn discrete_gaussian_fails_gdp_while_rounded_gaussian_attains_it() {
        let dg = named_distribution(&NamedDistribution::DiscreteGaussian { sigma: 1.0 }).unwrap();
        let bad = DiscreteCnd::new(dg, g1(), 1).unwrap();
        let report = verify_discrete_cnd(&bad);
        assert!(!report.all_pass);

        let good = unique_sens1(&g1()).unwrap();
        let report = verify_discrete_cnd(&good);
        assert!(report.all_pass, "{}", report.render_table());
    }

    #[test]
    fn sens2_interval_endpoints_and_construction() {
        let (lo, hi) = sens2_f0_interval(1.0).unwrap();
        assert!((lo - 0.5938455).abs() < 1e-6);
        assert!((hi - 0.6502446).abs() < 1e-6);

        let dc = sens2_pure_dp(1.0, 0.62).unwrap();
        assert_eq!(dc.delta(), 2);
        assert!((dc.pmf().mass_at(0) - 0.24).abs() < 1e-12);
        let report = verify_discrete_cnd(&dc);
        assert!(report.all_pass, "{}", report.render_table());

        assert!(sens2_pure_dp(1.0, 0.58).is_err());
        assert!(sens2_pure_dp(1.0, 0.66).is_err());
        assert!(sens2_pure_dp(-1.0, 0.62).is_err());
    }

    #[test]
    fn sens2_interval_is_sharp_against_the_definition() {
        // Re-derive the construction without the interval gate and check
        // that just outside the printed endpoints the result stops being
        // a discrete CND (dominance or nonnegativity breaks).
        fn force_build(eps: f64, f0: f64) -> Option<DiscreteCnd> {
            let f = TradeoffFunction::eps_delta(eps, 0.0).unwrap();
            let mut left = vec![f0, 1.0 - f0];
            while *left.last().unwrap() >= 1e-16 && left.len() < 200 {
                let next = f.eval(left[left.len() - 2]);
                left.push(next);
            }
            let m = left.len() as i64 - 1;
            let cdf = |t: i64| -> f64 {
                if t >= 0 {
                    1.0 - left[(t + 1) as usize]
                } else {
                    left[(-t) as usize]
                }
            };
            let (lo, hi) = (-(m - 1), m - 1);
            let mut mass = Vec::new();
            for x in lo..=hi {
                let p = if x == lo {
                    cdf(x) - left[m as usize]
                } else {
                    cdf(x) - cdf(x - 1)
                };
                if p < -1e-12 {
                    return None;
                }
                mass.push(p.max(0.0));
            }
            Some(
                DiscreteCnd::new(
                    DiscretePmf::raw(lo, mass, 2.0 * left[m as usize]),
                    f,
                    2,
                )
                .unwrap(),
            )
        }

        let (lo_b, hi_b) = sens2_f0_interval(1.0).unwrap();
        for f0 in [lo_b - 1e-3, hi_b + 1e-3] {
            match force_build(1.0, f0) {
                None => {} // negative implied mass: already not a pmf
                Some(dc) => {
                    let report = verify_discrete_cnd(&dc);
                    assert!(!report.all_pass, "F0={f0} wrongly verifies");
                }
            }
        }
        // And just inside, it verifies (matches the gated constructor).
        for f0 in [lo_b + 1e-3, hi_b - 1e-3] {
            let dc = force_build(1.0, f0).expect("inside the interval");
            assert!(verify_discrete_cnd(&dc).all_pass);
            let gated = sens2_pure_dp(1.0, f0).unwrap();
            for x in gated.pmf().lo()..=gated.pmf().hi() {
                assert!((gated.pmf().mass_at(x) - dc.pmf().mass_at(x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rounded_gaussian_roc_touches_gdp_at_every_vertex() {
        // Definition property: the shift-1 tradeoff of the discrete CND
        // agrees with f at rejection sets of the form (t, inf), i.e. at
        // every ROC vertex, and exceeds it in between.
        let dc = unique_sens1(&g1()).unwrap();
        let curve = roc_discrete(dc.pmf(), &dc.pmf().shift(1)).unwrap();
        let f = g1();
        for &(a, b) in curve.vertices() {
            assert!((b - f.eval(a)).abs() < 1e-9, "vertex at alpha={a}");
        }
        // Strictly above between vertices (piecewise-linear vs strictly
        // convex): check one midpoint.
        let vs = curve.vertices();
        let mid = 0.5 * (vs[vs.len() / 2].0 + vs[vs.len() / 2 + 1].0);
        assert!(curve.eval(mid) > f.eval(mid) + 1e-6);
    }

    #[test]
    fn verify_reports_recurrence_residuals_for_the_rounded_uniform() {
        // round(U(-1,1)) = {-1: 1/4, 0: 1/2, 1: 1/4} with f_{0,1/2}:
        // f(F(0)) = f(3/4) = 1/4 = F(-1) and f(F(-1)) = f(1/4) = 0 = F(-2).
        let pmf = DiscretePmf::new(-1, vec![0.25, 0.5, 0.25]).unwrap();
        let f = TradeoffFunction::eps_delta(0.0, 0.5).unwrap();
        let dc = DiscreteCnd::new(pmf, f.clone(), 1).unwrap();
        assert!((f.eval(0.75) - 0.25).abs() < 1e-15);
        assert_eq!(f.eval(0.25), 0.0);
        let report = verify_discrete_cnd(&dc);
        assert!(report.all_pass, "{}", report.render_table());
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.starts_with("recurrence") && c.achieved.abs() < 1e-12));
    }

    #[test]
    fn dominance_audit_self_comparison_is_tight() {
        let dc = unique_sens1(&f10()).unwrap();
        let rival = dc.pmf().clone();
        let report = dominance_audit_discrete(&dc, &rival, -3..=3, 5, None).unwrap();
        assert!(report.all_pass, "{}", report.render_table());
        // At a = 0 the windows coincide, so every margin there is ~0.
        for c in report
            .checks
            .iter()
            .filter(|c| c.name.starts_with("window") && c.a == Some(0.0))
        {
            assert!(c.margin.abs() < 1e-9, "t={:?} margin={}", c.t, c.margin);
        }
    }

    #[test]
    fn looser_rival_stays_dominated() {
        // Discrete Laplace at eps = 0.8 satisfies f_{1,0}-DP loosely.
        let dc = unique_sens1(&f10()).unwrap();
        let rival = named_distribution(&NamedDistribution::DiscreteLaplace { eps: 0.8 }).unwrap();
        let own = dc.pmf().window_mass(0, 1);
        let b = (-0.8_f64).exp();
        let rival_center = (1.0 - b) / (1.0 + b) * (1.0 + 2.0 * b);
        assert!((own - (1.0 - 2.0 * E.powi(-1) / (1.0 + E))).abs() < 1e-12);
        assert!((own - 0.802124).abs() < 1e-6);
        assert!((rival_center - 0.721393).abs() < 1e-6);
        assert!(own > rival_center);
        let report = dominance_audit_discrete(&dc, &rival, -5..=5, 8, Some(&|x| x * x)).unwrap();
        assert!(report.all_pass, "{}", report.render_table());
    }

    #[test]
    fn round_vs_floor_counterexample() {
        let round = DiscretePmf::new(-1, vec![0.25, 0.5, 0.25]).unwrap();
        let floor = DiscretePmf::new(-1, vec![0.5, 0.5]).unwrap();
        assert!((round.moment(2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(round.moment(1).unwrap(), 0.0);
        assert!((round.variance() - 0.5).abs() < 1e-15);
        assert!((floor.moment(2).unwrap() - 0.5).abs() < 1e-15);
        assert!((floor.variance() - 0.25).abs() < 1e-15);

        // The floor variant has smaller variance, yet integer-centered
        // dominance still holds: its center is not an integer.
        let f = TradeoffFunction::eps_delta(0.0, 0.5).unwrap();
        let dc = DiscreteCnd::new(round, f, 1).unwrap();
        let report = dominance_audit_discrete(&dc, &floor, -4..=4, 4, Some(&|x| x * x)).unwrap();
        assert!(report.all_pass, "{}", report.render_table());
        assert!(dc.pmf().variance() > floor.variance());
    }

    #[test]
    fn rounding_is_valid_at_every_sensitivity() {
        for f in [f10(), TradeoffFunction::eps_delta(1.0, 0.05).unwrap()] {
            let c = cnd(f.clone());
            for delta in [1u32, 2, 3, 6] {
                let dc = round_cnd(&c, delta).unwrap();
                assert_eq!(dc.delta(), delta);
                let report = verify_discrete_cnd(&dc);
                assert!(
                    report.all_pass,
                    "{} delta={delta}:\n{}",
                    f.label(),
                    report.render_table()
                );
            }
        }
        assert!(round_cnd(&cnd(f10()), 0).is_err());
    }

    #[test]
    fn convolution_postprocessed_rivals_stay_dominated() {
        // Adding independent symmetric integer noise to the discrete CND
        // is postprocessing, so the result still satisfies f-DP; the
        // dominance audit must pass against every such rival.
        let spreads = [
            vec![(0i64, 1.0)],
            vec![(-1i64, 0.25), (0, 0.5), (1, 0.25)],
            vec![(-2i64, 0.1), (0, 0.8), (2, 0.1)],
        ];
        for f in [f10(), g1()] {
            let dc = unique_sens1(&f).unwrap();
            let base = dc.pmf();
            for spread in &spreads {
                let lo = base.lo() - 2;
                let hi = base.hi() + 2;
                let mut mass = vec![0.0; (hi - lo + 1) as usize];
                for x in base.lo()..=base.hi() {
                    for (w, p) in spread {
                        mass[(x + w - lo) as usize] += base.mass_at(x) * p;
                    }
                }
                let rival = DiscretePmf::raw(lo, mass, base.truncated_mass());
                let radius = hi.abs().max(lo.abs());
                let report =
                    dominance_audit_discrete(&dc, &rival, -radius..=radius, radius as u32, None)
                        .unwrap();
                assert!(
                    report.all_pass,
                    "{} spread {:?}:\n{}",
                    f.label(),
                    spread,
                    report.render_table()
                );
            }
        }
    }

    #[test]
    fn sampling_discrete_is_reproducible_and_calibrated() {
        let dc = unique_sens1(&f10()).unwrap();
        assert!(dc.sample(3, 0).is_empty());
        let xs = dc.sample(3, 100_000);
        assert_eq!(xs, dc.sample(3, 100_000));
        let zero_frac = xs.iter().filter(|&&x| x == 0).count() as f64 / xs.len() as f64;
        assert!((zero_frac - 0.462117).abs() < 0.01, "{zero_frac}");

        let dg = unique_sens1(&g1()).unwrap();
        let xs = dg.sample(5, 100_000);
        let within1 = xs.iter().filter(|x| x.abs() <= 1).count() as f64 / xs.len() as f64;
        let expect = 1.0 - 2.0 * normal_cdf(-1.5);
        assert!((within1 - expect).abs() < 0.01, "{within1} vs {expect}");
    }

    #[test]
    fn moment_validation() {
        let p = DiscretePmf::new(-1, vec![0.25, 0.5, 0.25]).unwrap();
        assert!(p.moment(0).is_err());
        assert_eq!(p.moment(1).unwrap(), 0.0);
        assert_eq!(p.moment(3).unwrap(), 0.0);
    }

    #[test]
    fn pmf_validation() {
        assert!(DiscretePmf::new(0, vec![]).is_err());
        assert!(DiscretePmf::new(0, vec![0.5, -0.1, 0.6]).is_err());
        assert!(DiscretePmf::new(0, vec![0.5, 0.4]).is_err());
        let p = DiscretePmf::new(0, vec![0.5, 0.5]).unwrap();
        assert_eq!(p.cdf(-1), 0.0);
        assert_eq!(p.cdf(1), 1.0);
        assert!((p.cdf(0) - 0.5).abs() < 1e-15);
    }
}
