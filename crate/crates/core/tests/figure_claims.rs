//! Qualitative claims about the figure families at the caption parameters.
//! Numeric bounds were measured once at n = 3001 on the default window and
//! frozen here.

use qutrit_core::{
    alpha_time_grid, eta_family, find_critical_alpha, time_series, AlphaRange, ChainParams, CriticalSearch,
    QutritCoupling, SweepOptions, TimeGrid,
};

fn coupling() -> QutritCoupling {
    QutritCoupling::uniform(0.005).unwrap()
}

fn opts() -> SweepOptions {
    SweepOptions::with_workers(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn mean_at(gamma: f64, alpha: f64, eta: f64) -> f64 {
    let p = ChainParams::new(3001, gamma, alpha, eta).unwrap();
    time_series(&p, coupling(), &TimeGrid::default(), &opts()).unwrap().mean()
}

#[test]
fn critical_field_decays_below_strong_field_plateau() {
    let critical = time_series(&ChainParams::new(3001, 1.0, 0.5, 1.0).unwrap(), coupling(), &TimeGrid::default(), &opts()).unwrap();
    let strong = mean_at(1.0, 0.5, 1.2);
    assert!(critical.negativity.windows(2).take(20).all(|w| w[1] < w[0]));
    // measured 0.1352 vs 0.9508
    assert!(critical.mean() < 0.2 && strong > 0.9, "{} {strong}", critical.mean());
}

#[test]
fn negative_three_site_coupling_slows_the_critical_decay() {
    // measured 0.6374 at α = −0.5 against 0.1352 at α = +0.5
    let slow = mean_at(1.0, -0.5, 1.0);
    let fast = mean_at(1.0, 0.5, 1.0);
    assert!(slow > 2.0 * fast, "{slow} {fast}");
}

#[test]
fn weak_fields_fluctuate_about_similar_means() {
    for (gamma, alpha) in [(0.5, 0.5), (0.5, -0.5), (1.0, 0.0), (1.0, 0.5), (1.0, -0.5)] {
        let base = ChainParams::new(3001, gamma, alpha, 0.0).unwrap();
        let rs = eta_family(&base, coupling(), &TimeGrid::default(), &[0.0, 0.5], &opts()).unwrap();
        let (m0, m5) = (rs[0].mean(), rs[1].mean());
        // largest measured relative gap 0.022
        assert!((m0 - m5).abs() <= 0.05 * m0.min(m5), "gamma {gamma} alpha {alpha}: {m0} {m5}");
    }
}

#[test]
fn negativity_is_stable_at_the_critical_alpha() {
    let base = ChainParams::new(3001, 0.5, 0.0, 1.0).unwrap();
    let found = find_critical_alpha(&base, coupling(), &TimeGrid::default(), &CriticalSearch::default(), &opts()).unwrap();
    let at = mean_at(0.5, found.alpha, 1.0);
    assert_eq!(at, found.objective);
    for shift in [-0.1, 0.1] {
        assert!(at > mean_at(0.5, found.alpha + shift, 1.0));
    }
}

#[test]
fn late_time_ridge_sits_near_the_critical_alpha() {
    let base = ChainParams::new(3001, 1.0, 0.0, 1.0).unwrap();
    let range = AlphaRange::new(-1.0, 0.5, 61).unwrap();
    let grid = alpha_time_grid(&base, coupling(), &TimeGrid::default(), &range, &opts()).unwrap();
    let alphas = &grid.axes[0].values;
    let times = grid.times();
    let mut peaks: Vec<f64> = (0..times.len())
        .filter(|&j| times[j] >= 10.0)
        .map(|j| {
            let best = (0..alphas.len())
                .max_by(|&a, &b| grid.row(a)[j].total_cmp(&grid.row(b)[j]))
                .unwrap();
            alphas[best]
        })
        .collect();
    peaks.sort_by(f64::total_cmp);
    let median = peaks[peaks.len() / 2];
    assert!((median + 0.52).abs() <= 0.1, "median ridge position {median}");
}
