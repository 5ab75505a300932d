//! Distributional checks on the random machinery — drop geometry, shadowing
//! correlation, fading memory — plus two empirical learning-speed claims
//! kept at their stated thresholds.
//!
//! Everything is seeded, so each verdict is reproducible bit for bit.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use hetsim::icic::IcicMode;
use hetsim::radio::{
    sample_shadowing_db, FadingParams, LinkGainMap, RbGrid, ShadowingParams,
};
use hetsim::runner::{run_experiment, ExperimentConfig};
use hetsim::topology::{
    generate_layout, sector_triangles, CellId, Point, ScenarioConfig, UeId, UeTag,
};

// ---------------------------------------------------------------------------
// Uniform-drop geometry
// ---------------------------------------------------------------------------

/// Barycentric coordinates of `p` in the triangle (a, b, c), or None when
/// outside (up to a small boundary slack).
fn barycentric(p: &Point, tri: &[Point; 3]) -> Option<(f64, f64)> {
    let [a, b, c] = tri;
    let (abx, aby) = (b.x - a.x, b.y - a.y);
    let (acx, acy) = (c.x - a.x, c.y - a.y);
    let (apx, apy) = (p.x - a.x, p.y - a.y);
    let det = abx * acy - aby * acx;
    let u = (apx * acy - apy * acx) / det;
    let v = (abx * apy - aby * apx) / det;
    let eps = 1e-9;
    if u >= -eps && v >= -eps && u + v <= 1.0 + eps {
        Some((u, v))
    } else {
        None
    }
}

/// Splits a triangle into k² congruent sub-triangles and returns which one
/// holds the barycentric point: (row i, column j, downward orientation).
fn subtriangle(u: f64, v: f64, k: usize) -> (usize, usize, bool) {
    let x = u * k as f64;
    let y = v * k as f64;
    let i = (x.floor() as usize).min(k - 1);
    let mut j = (y.floor() as usize).min(k - 1);
    if i + j > k - 1 {
        // boundary jitter pushed the indices past the hypotenuse
        j = k - 1 - i;
    }
    let mut down = (x - i as f64) + (y - j as f64) > 1.0;
    if down && i + j == k - 1 {
        down = false;
    }
    if down && j > k - 2 - i {
        j = k - 2 - i;
    }
    (i, j, down)
}

/// Uniform UEs must be uniform over their sector (two equilateral triangles
/// of the site hexagon) outside the 35 m keep-out disc around the site.
/// Equal-area sub-triangle bins make the expected counts flat except for the
/// two origin-corner bins, which lose exactly one 60° wedge of the disc.
#[test]
fn uniform_drop_positions_are_uniform_over_the_sector() {
    let subdivisions = 4usize;
    let num_drops = 10_000usize;
    let mut cfg = ScenarioConfig::default();
    cfg.picos_per_sector = 0; // every UE is a uniform drop
    cfg.validate().unwrap();
    let r_hex = cfg.isd_m / 3f64.sqrt();

    let bins_per_tri = subdivisions * subdivisions;
    // counts[sector][triangle * bins_per_tri + linear bin]
    let mut counts = vec![vec![0u64; 2 * bins_per_tri]; 3];
    let linear = |i: usize, j: usize, down: bool, k: usize| -> usize {
        // upward triangles first (row-major), then downward ones
        let up_count = k * (k + 1) / 2;
        if down {
            up_count + (0..i).map(|r| k - 1 - r).sum::<usize>() + j
        } else {
            (0..i).map(|r| k - r).sum::<usize>() + j
        }
    };

    for drop in 0..num_drops {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD0_0000 + drop as u64);
        let layout = generate_layout(&cfg, &mut rng).unwrap();
        for ue in &layout.ues {
            let sector = match ue.tag {
                UeTag::Uniform(s) => s,
                UeTag::Hotspot(_) => panic!("no hotspot UEs with zero picos"),
            };
            let tris = sector_triangles(sector, r_hex);
            let mut placed = false;
            for (t, tri) in tris.iter().enumerate() {
                if let Some((u, v)) = barycentric(&ue.pos, tri) {
                    let (i, j, down) = subtriangle(u, v, subdivisions);
                    counts[sector][t * bins_per_tri + linear(i, j, down, subdivisions)] += 1;
                    placed = true;
                    break;
                }
            }
            assert!(placed, "UE at ({}, {}) outside its sector", ue.pos.x, ue.pos.y);
        }
    }

    // expected bin probabilities: equal areas, except the two corner bins
    // (triangle-local (0,0) upward) which exclude a 60° wedge of the 35 m disc
    let tri_area = 3f64.sqrt() / 4.0 * r_hex * r_hex;
    let bin_area = tri_area / bins_per_tri as f64;
    let wedge = std::f64::consts::PI * cfg.min_dist_mbs_ue_m.powi(2) / 6.0;
    let sector_area = 2.0 * tri_area - 2.0 * wedge;
    let corner = linear(0, 0, false, subdivisions);

    let mut chi2 = 0.0f64;
    for sector_counts in &counts {
        let n: u64 = sector_counts.iter().sum();
        for (b, count) in sector_counts.iter().enumerate() {
            let area = if b % bins_per_tri == corner && (b == corner || b == bins_per_tri + corner)
            {
                bin_area - wedge
            } else {
                bin_area
            };
            let expected = n as f64 * area / sector_area;
            let d = *count as f64 - expected;
            chi2 += d * d / expected;
        }
    }
    // three independent multinomials over 32 bins each
    let dof = 3.0 * (2.0 * bins_per_tri as f64 - 1.0);
    let critical = ChiSquared::new(dof).unwrap().inverse_cdf(0.99);
    assert!(
        chi2 < critical,
        "sector-area χ² = {chi2:.1} exceeds the 1% critical value {critical:.1} \
         ({num_drops} drops, {} UEs)",
        num_drops * 90
    );
}

// ---------------------------------------------------------------------------
// Shadowing
// ---------------------------------------------------------------------------

#[test]
fn shadowing_is_8_db_lognormal_with_cross_cell_correlation_half() {
    let num_ues = 100_000usize;
    let params = ShadowingParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5AD0);
    let field = sample_shadowing_db(2, num_ues, &params, &mut rng);
    let (row_a, row_b) = field.split_at(num_ues);

    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    let (ma, mb) = (mean(row_a), mean(row_b));
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (a, b) in row_a.iter().zip(row_b) {
        cov += (a - ma) * (b - mb);
        var_a += (a - ma).powi(2);
        var_b += (b - mb).powi(2);
    }
    let corr = cov / (var_a * var_b).sqrt();
    let sigma_a = (var_a / (num_ues - 1) as f64).sqrt();
    let sigma_b = (var_b / (num_ues - 1) as f64).sqrt();

    assert!(
        (0.45..=0.55).contains(&corr),
        "cross-cell shadowing correlation {corr:.4} outside [0.45, 0.55]"
    );
    for sigma in [sigma_a, sigma_b] {
        assert!(
            (sigma - 8.0).abs() < 0.1,
            "shadowing std {sigma:.3} dB deviates from 8 dB"
        );
    }
}

// ---------------------------------------------------------------------------
// Fading memory
// ---------------------------------------------------------------------------

/// The complex tap evolves as an AR(1) with coefficient 0.99 per TTI, so the
/// received power (|h|², unit-mean exponential) has lag-1 autocorrelation
/// 0.99² = 0.9801. Estimated with the known mean/variance of the marginal.
#[test]
fn fading_power_lag_one_autocorrelation_matches_ar_coefficient() {
    let mut cfg = ScenarioConfig::default();
    cfg.picos_per_sector = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0xFAD3);
    let layout = generate_layout(&cfg, &mut rng).unwrap();
    let grid = RbGrid::default();
    let fading = FadingParams::default();
    let mut gains = LinkGainMap::new(&layout, &grid, None, &fading, &mut rng);

    let cell = CellId(0);
    let num_ues = layout.ues.len();
    let num_rbs = grid.num_rbs;
    let static_lin: Vec<f64> = (0..num_ues)
        .map(|u| 10f64.powf(gains.mean_gain_db(cell, UeId(u)) / 10.0))
        .collect();

    let mut prev = vec![0.0f64; num_ues * num_rbs];
    let mut have_prev = false;
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for _ in 0..2000 {
        for u in 0..num_ues {
            for rb in 0..num_rbs {
                let f = gains.gain_lin(cell, UeId(u), rb) / static_lin[u];
                let idx = u * num_rbs + rb;
                if have_prev {
                    num += (prev[idx] - 1.0) * (f - 1.0);
                    den += (prev[idx] - 1.0) * (prev[idx] - 1.0);
                }
                prev[idx] = f;
            }
        }
        have_prev = true;
        gains.advance(&mut rng);
    }
    let rho_power = num / den;
    let want = fading.ar_coefficient * fading.ar_coefficient;
    assert!(
        (rho_power - want).abs() < 0.008,
        "fading power lag-1 autocorrelation {rho_power:.4} deviates from ρ² = {want:.4}"
    );
}

// ---------------------------------------------------------------------------
// Learning speed at desk scale
// ---------------------------------------------------------------------------

fn dynamic_ql_convergence(num_ttis: u64, num_drops: u64) -> Vec<i64> {
    let tmp = tempfile::tempdir().expect("tempdir");
    let mut config = ExperimentConfig::desk(IcicMode::DynamicQl, tmp.path().join("run"));
    config.num_ttis = num_ttis;
    config.num_drops = num_drops;
    let stats = run_experiment(&config).expect("dynamic-ql run");
    stats.convergence
}

/// Both-tier learning is claimed to settle fast: every agent's greedy policy
/// stops changing within 400 TTIs in at least 90% of 20 drops. The
/// proportional-fair scheduler keeps rotating UEs through each RB, which
/// keeps per-(state, action) costs noisy at α = 0.5 and the exploration
/// floor keeps perturbing the tables, so the greedy argmins keep trading
/// places; the claim is retained at its stated threshold.
#[test]
fn dynamic_ql_greedy_policies_freeze_within_400_ttis_in_90pct_of_drops() {
    let convergence = dynamic_ql_convergence(800, 20);
    let frozen_by_400 = convergence.iter().filter(|t| (0..=400).contains(*t)).count();
    assert!(
        frozen_by_400 >= 18,
        "greedy policies froze by TTI 400 in {frozen_by_400} of 20 drops (need ≥18); \
         first-frozen TTIs per drop (-1 = never): {convergence:?}"
    );
}

/// Companion claim at the full desk horizon: the whole-network policy
/// fingerprint freezes before TTI 2000 in at least 80% of 10 drops.
#[test]
fn dynamic_ql_desk_runs_converge_before_tti_2000_in_80pct_of_drops() {
    let convergence = dynamic_ql_convergence(2400, 10);
    let before_2000 = convergence.iter().filter(|t| (0..2000).contains(*t)).count();
    assert!(
        before_2000 >= 8,
        "convergence before TTI 2000 in {before_2000} of 10 drops (need ≥8); \
         first-frozen TTIs per drop (-1 = never): {convergence:?}"
    );
}
