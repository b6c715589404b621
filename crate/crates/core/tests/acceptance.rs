//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Tolerances are pinned in the assertions; nothing is deferred to
//! later calibration.

use fdp_noise::audit::anti_bound;
use fdp_noise::cnd::{tulap_cdf, ContinuousCnd};
use fdp_noise::discrete::{
    dominance_audit_discrete, named_distribution, round_cnd, sens2_f0_interval, sens2_pure_dp,
    unique_sens1, verify_discrete_cnd, DiscreteCnd, DiscretePmf, NamedDistribution,
};
use fdp_noise::normal::normal_cdf;
use fdp_noise::rng::CounterRng;
use fdp_noise::tradeoff::{cauchy_tradeoff, dominates, roc_discrete, TradeoffFunction};

const E: f64 = std::f64::consts::E;
const PI: f64 = std::f64::consts::PI;

fn passed(n: u32, name: &str) {
    println!("criterion {n:02} ({name}): PASS");
}

fn f10() -> TradeoffFunction {
    TradeoffFunction::eps_delta(1.0, 0.0).unwrap()
}

fn f1_005() -> TradeoffFunction {
    TradeoffFunction::eps_delta(1.0, 0.05).unwrap()
}

fn g1() -> TradeoffFunction {
    TradeoffFunction::gdp(1.0).unwrap()
}

#[test]
fn criterion_01_fixed_points() {
    let f = f10();
    assert!((f.fixed_point() - 1.0 / (1.0 + E)).abs() <= 1e-10);
    // Independent bisection route (iterates carry no closed form).
    let via_bisection = f.iterate(1).unwrap().fixed_point();
    assert!((via_bisection - 1.0 / (1.0 + E)).abs() <= 1e-10);

    let g = g1();
    assert!((g.fixed_point() - normal_cdf(-0.5)).abs() <= 1e-9);
    assert!((g.iterate(1).unwrap().fixed_point() - normal_cdf(-0.5)).abs() <= 1e-9);
    assert!((g.fixed_point() - 0.309).abs() < 1e-3);
    passed(1, "fixed points");
}

#[test]
fn criterion_02_cnd_oracle_equivalence() {
    // The recurrence construction and the Gaussian CND coincide on the
    // half-integer lattice (the recurrence's anchor points).
    let cnd = ContinuousCnd::construct(g1()).unwrap();
    let mut worst: f64 = 0.0;
    for i in -20..=20 {
        let x = i as f64 / 2.0;
        worst = worst.max((cnd.cdf(x) - normal_cdf(x)).abs());
    }
    assert!(worst <= 1e-8, "G_1 worst err {worst:e}");

    // Tulap holds on a dense grid: both cdfs are piecewise linear with
    // the same half-integer breakpoints.
    for eps in [0.5, 1.0, 5.0] {
        let cnd =
            ContinuousCnd::construct(TradeoffFunction::eps_delta(eps, 0.0).unwrap()).unwrap();
        let mut worst: f64 = 0.0;
        for i in -1000..=1000 {
            let x = i as f64 / 100.0;
            worst = worst.max((cnd.cdf(x) - tulap_cdf(eps, x).unwrap()).abs());
        }
        assert!(worst <= 1e-8, "eps={eps} worst err {worst:e}");
    }
    passed(2, "cnd oracle equivalence");
}

#[test]
fn criterion_03_anti_concentration_tightness() {
    for f in [f10(), f1_005(), g1()] {
        let cnd = ContinuousCnd::construct(f.clone()).unwrap();
        for t in 1..=10u32 {
            let conc = cnd.concentration(t);
            let bound = anti_bound(&f, t).unwrap();
            assert!(
                (conc - bound).abs() <= 1e-8,
                "{} t={t}: {conc} vs {bound}",
                f.label()
            );
            // The formula agrees with the cdf windows as well.
            let via_cdf = cnd.cdf(t as f64 / 2.0) - cnd.cdf(-(t as f64) / 2.0);
            assert!((conc - via_cdf).abs() <= 1e-9);
        }
    }
    passed(3, "anti-concentration tightness at half-integers");
}

#[test]
fn criterion_04_tulap_laplace_crossing() {
    let mut half_ok = true;
    let mut quarter_signs = Vec::new();
    let mut eps_grid = Vec::new();
    for i in 1..=200 {
        let eps = 6.0 * i as f64 / 200.0;
        let tulap_half = 1.0 - 2.0 * tulap_cdf(eps, -0.5).unwrap();
        let laplace_half = 1.0 - (-eps / 2.0).exp();
        half_ok &= tulap_half >= laplace_half - 1e-12;
        let tulap_quarter = 1.0 - 2.0 * tulap_cdf(eps, -0.25).unwrap();
        let laplace_quarter = 1.0 - (-eps / 4.0).exp();
        quarter_signs.push(tulap_quarter - laplace_quarter);
        eps_grid.push(eps);
    }
    assert!(half_ok, "P(|Tulap|<=1/2) >= P(|Laplace|<=1/2) failed");
    let mut changes = Vec::new();
    for i in 1..quarter_signs.len() {
        if quarter_signs[i - 1] > 0.0 && quarter_signs[i] < 0.0
            || quarter_signs[i - 1] < 0.0 && quarter_signs[i] > 0.0
        {
            changes.push(i);
        }
    }
    assert_eq!(changes.len(), 1, "expected exactly one sign change");
    let at = changes[0];
    assert!(
        eps_grid[at - 1] > 1.5 && eps_grid[at] < 2.5,
        "sign change at eps ~ {}",
        eps_grid[at]
    );
    passed(4, "radius-1/2 and radius-1/4 Tulap/Laplace comparison");
}

#[test]
fn criterion_05_golden_values_at_eps5() {
    let cnd = ContinuousCnd::construct(TradeoffFunction::eps_delta(5.0, 0.0).unwrap()).unwrap();

    // Tulap variance by moment integration, cross-checked against the
    // discrete-Laplace-plus-uniform closed form.
    let report = cnd.tail_and_moment_check(12.0, 2);
    assert!(report.all_pass);
    let m2 = report
        .checks
        .iter()
        .find(|c| c.name == "moment: E|N|^2")
        .unwrap()
        .achieved;
    assert!((m2 - 0.097).abs() <= 0.002, "Tulap variance {m2}");
    let b = (-5.0f64).exp();
    let closed = 2.0 * b / ((1.0 - b) * (1.0 - b)) + 1.0 / 12.0;
    assert!((m2 - closed).abs() <= 1e-6);

    // Laplace(1/5) variance is 2/25 exactly.
    let laplace_var = 2.0 / (5.0f64 * 5.0);
    assert_eq!(laplace_var, 0.08);

    // Central windows.
    let expect = (5.0f64.exp() - 1.0) / (5.0f64.exp() + 1.0);
    assert!((cnd.concentration(1) - expect).abs() <= 1e-9);
    assert!(((1.0 - 2.0 * tulap_cdf(5.0, -0.5).unwrap()) - expect).abs() <= 1e-9);
    let laplace_half = 1.0 - (-2.5f64).exp();
    assert!((laplace_half - 0.917915001376).abs() <= 1e-12);
    passed(5, "golden values at eps = 5");
}

#[test]
fn criterion_06_sens1_uniqueness() {
    for f in [f10(), f1_005(), g1(), TradeoffFunction::eps_delta(0.0, 0.5).unwrap()] {
        let direct = unique_sens1(&f).unwrap();
        let rounded = round_cnd(&ContinuousCnd::construct(f.clone()).unwrap(), 1).unwrap();
        let r = direct.pmf().hi().max(rounded.pmf().hi());
        for x in -r..=r {
            assert!(
                (direct.pmf().mass_at(x) - rounded.pmf().mass_at(x)).abs() <= 1e-9,
                "{} x={x}",
                f.label()
            );
        }
    }
    for eps in [0.5, 1.0, 5.0] {
        let f = TradeoffFunction::eps_delta(eps, 0.0).unwrap();
        let direct = unique_sens1(&f).unwrap();
        let rounded = round_cnd(&ContinuousCnd::construct(f).unwrap(), 1).unwrap();
        let scale = (eps.exp() - 1.0) / (eps.exp() + 1.0);
        for x in -15..=15i64 {
            let closed = scale * (-eps * x.abs() as f64).exp();
            assert!((direct.pmf().mass_at(x) - closed).abs() <= 1e-10);
            assert!((rounded.pmf().mass_at(x) - closed).abs() <= 1e-10);
        }
    }
    passed(6, "sensitivity-1 uniqueness");
}

#[test]
fn criterion_07_discrete_gaussian_vs_rounded_gaussian() {
    let dg = named_distribution(&NamedDistribution::DiscreteGaussian { sigma: 1.0 }).unwrap();
    let curve = roc_discrete(&dg, &dg.shift(1)).unwrap();
    let c = curve.fixed_point();
    assert!((c - 0.5 * (1.0 - dg.mass_at(0))).abs() <= 1e-9);
    assert!((c - 0.301).abs() <= 1e-3, "c = {c}");
    let check = dominates(&curve, &g1(), 1e-9);
    assert!(!check.dominates, "discrete Gaussian must fail 1-GDP");

    let dcnd = unique_sens1(&g1()).unwrap();
    let curve = roc_discrete(dcnd.pmf(), &dcnd.pmf().shift(1)).unwrap();
    let check = dominates(&curve, &g1(), 1e-9);
    assert!(check.dominates, "worst margin {}", check.worst_margin);
    passed(7, "discrete Gaussian fails 1-GDP, rounded Gaussian attains it");
}

#[test]
fn criterion_08_cauchy_envelopes() {
    let ct = cauchy_tradeoff(1.0).unwrap();
    let s5 = 5.0f64.sqrt();
    let printed = ((4.0 + (1.0 + s5) * (1.0 + s5)) / (4.0 + (1.0 - s5) * (1.0 - s5))).ln();
    assert!((ct.eps_l - printed).abs() <= 1e-12);
    assert!((ct.eps_l - 0.9624).abs() <= 1e-3);

    let c_expected = (1.0 - (2.0 / PI) * (0.5f64).atan()) / 2.0;
    let c = ct.curve.fixed_point();
    assert!((c - c_expected).abs() <= 1e-6, "c = {c}");

    let lower = TradeoffFunction::eps_delta(ct.eps_l, 0.0).unwrap();
    let upper = TradeoffFunction::eps_delta(ct.eps_u, 0.0).unwrap();
    for i in 0..=500 {
        let a = i as f64 / 500.0;
        let v = ct.curve.eval(a);
        assert!(lower.eval(a) <= v + 1e-9, "lower envelope fails at {a}");
        assert!(v <= upper.eval(a) + 1e-9, "upper envelope fails at {a}");
    }
    passed(8, "Cauchy curve envelopes");
}

#[test]
fn criterion_09_sens2_family() {
    let (lo, hi) = sens2_f0_interval(1.0).unwrap();
    assert!((lo - 0.5938455).abs() <= 1e-6);
    assert!((hi - 0.6502446).abs() <= 1e-6);

    for f0 in [lo + 1e-6, 0.62, hi - 1e-6] {
        let dc = sens2_pure_dp(1.0, f0).unwrap();
        let report = verify_discrete_cnd(&dc);
        assert!(report.all_pass, "F0={f0}\n{}", report.render_table());
    }
    assert!(sens2_pure_dp(1.0, lo - 1e-6).is_err());
    assert!(sens2_pure_dp(1.0, hi + 1e-6).is_err());
    passed(9, "sensitivity-2 pure-DP family interval");
}

#[test]
fn criterion_10_sub_exponential_suite() {
    for f in [f10(), f1_005(), g1()] {
        let cnd = ContinuousCnd::construct(f.clone()).unwrap();
        let report = cnd.tail_and_moment_check(15.0, 6);
        assert!(report.all_pass, "{}:\n{}", f.label(), report.render_table());
        let tails = report
            .checks
            .iter()
            .filter(|c| c.name.starts_with("tail"))
            .count();
        assert_eq!(tails, 2000, "two bounds at 1000 grid points");
        let moments = report
            .checks
            .iter()
            .filter(|c| c.name.starts_with("moment"))
            .count();
        assert_eq!(moments, 6);
    }
    passed(10, "sub-exponential tail and moment bounds");
}

#[test]
fn criterion_11_round_floor_counterexample() {
    let round = DiscretePmf::new(-1, vec![0.25, 0.5, 0.25]).unwrap();
    let floor = DiscretePmf::new(-1, vec![0.5, 0.5]).unwrap();
    assert_eq!(round.variance(), 0.5);
    assert_eq!(floor.variance(), 0.25);

    let f = TradeoffFunction::eps_delta(0.0, 0.5).unwrap();
    let dcnd = DiscreteCnd::new(round, f, 1).unwrap();
    assert!(verify_discrete_cnd(&dcnd).all_pass);
    let report = dominance_audit_discrete(&dcnd, &floor, -4..=4, 4, Some(&|x| x * x)).unwrap();
    assert!(report.all_pass, "{}", report.render_table());
    passed(11, "round/floor variance counterexample");
}

// Brute-force tradeoff oracle: enumerate all deterministic acceptance
// regions, take the lower convex hull (randomization), interpolate.
fn brute_force_curve(p: &DiscretePmf, q: &DiscretePmf) -> Vec<(f64, f64)> {
    let lo = p.lo().min(q.lo());
    let hi = p.hi().max(q.hi());
    let n = (hi - lo + 1) as usize;
    assert!(n <= 16);
    let ps: Vec<f64> = (lo..=hi).map(|x| p.mass_at(x)).collect();
    let qs: Vec<f64> = (lo..=hi).map(|x| q.mass_at(x)).collect();
    let pt: f64 = ps.iter().sum();
    let qt: f64 = qs.iter().sum();
    let mut points = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let mut a = 0.0;
        let mut b = 0.0;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                a += ps[i] / pt;
                b += qs[i] / qt;
            }
        }
        points.push((a, b));
    }
    points.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for pnt in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // Keep only right turns: drop the middle point when it lies
            // on or above the segment (x1,y1)-(pnt).
            if (x2 - x1) * (pnt.1 - y1) - (y2 - y1) * (pnt.0 - x1) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pnt);
    }
    hull
}

fn hull_eval(hull: &[(f64, f64)], alpha: f64) -> f64 {
    // Cumulative sums can land one ulp short of 1, so snap the query to
    // the hull's reachable range instead of falling off its right end.
    let alpha = alpha.min(hull[hull.len() - 1].0).max(hull[0].0);
    if alpha <= hull[0].0 {
        return hull[0].1;
    }
    for w in hull.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if alpha <= x1 {
            if x1 == x0 {
                return y0;
            }
            return y0 + (y1 - y0) * (alpha - x0) / (x1 - x0);
        }
    }
    hull[hull.len() - 1].1
}

#[test]
fn criterion_12_brute_force_oracle() {
    let mut rng = CounterRng::new(20240);
    let mut cases: Vec<(DiscretePmf, DiscretePmf)> = vec![
        (
            DiscretePmf::new(0, vec![0.5, 0.5]).unwrap(),
            DiscretePmf::new(0, vec![0.25, 0.75]).unwrap(),
        ),
        (
            DiscretePmf::new(-1, vec![0.25, 0.5, 0.25]).unwrap(),
            DiscretePmf::new(0, vec![0.25, 0.5, 0.25]).unwrap(),
        ),
        (
            DiscretePmf::new(0, vec![1.0]).unwrap(),
            DiscretePmf::new(1, vec![1.0]).unwrap(),
        ),
    ];
    for _ in 0..200 {
        let size = 2 + (rng.next_u64() % 3) as usize; // 2..=4
        let offset = (rng.next_u64() % 2) as i64;
        let mut pm: Vec<f64> = (0..size).map(|_| rng.next_unit()).collect();
        let mut qm: Vec<f64> = (0..size).map(|_| rng.next_unit()).collect();
        if rng.next_u64() % 3 == 0 {
            pm[0] = 0.0; // exercise zero-likelihood outcomes
        }
        let (ps, qs): (f64, f64) = (pm.iter().sum(), qm.iter().sum());
        pm.iter_mut().for_each(|v| *v /= ps);
        qm.iter_mut().for_each(|v| *v /= qs);
        cases.push((
            DiscretePmf::new(0, pm).unwrap(),
            DiscretePmf::new(offset, qm).unwrap(),
        ));
    }
    for (p, q) in &cases {
        let curve = roc_discrete(p, q).unwrap();
        let hull = brute_force_curve(p, q);
        for i in 0..=100 {
            let a = i as f64 / 100.0;
            let ours = curve.eval(a);
            let brute = hull_eval(&hull, a);
            assert!(
                (ours - brute).abs() <= 1e-12,
                "alpha={a}: {ours} vs {brute} (p lo={}, q lo={})",
                p.lo(),
                q.lo()
            );
        }
    }

    // Cumulative-mass identity of the unique sensitivity-1 CND.
    for f in [f10(), g1()] {
        let dc = unique_sens1(&f).unwrap();
        let c = f.fixed_point();
        for t in 0..=20u32 {
            let lhs = dc.pmf().window_mass(0, t as i64);
            let rhs = 1.0 - 2.0 * f.apply_iterated(c, t);
            assert!((lhs - rhs).abs() <= 1e-10, "{} t={t}", f.label());
        }
    }
    passed(12, "brute-force ROC oracle and cumulative-mass identity");
}

#[test]
fn criterion_13_figure_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("run1");
    let out2 = dir.path().join("run2");
    let mut names = Vec::new();
    for fig in ["fig2", "fig3", "fig4", "fig5"] {
        for out in [&out1, &out2] {
            let r = fdp_noise::cli::run([
                "fdp-noise",
                "figures",
                fig,
                "--out",
                out.to_str().unwrap(),
            ]);
            assert_eq!(r.exit_code, 0, "{}", r.summary);
            if *out == out1 {
                names.extend(r.files.iter().map(|f| {
                    f.file_name().unwrap().to_str().unwrap().to_string()
                }));
            }
        }
    }
    assert_eq!(names.len(), 6);
    for name in names {
        let a = std::fs::read(out1.join(&name)).unwrap();
        let b = std::fs::read(out2.join(&name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs between runs");
    }
    passed(13, "figure dataset determinism");
}
