//! Worked examples checked against independent brute-force routes.

use num_complex::Complex64;
use polynum::embed::{Geometry, TileParams, TileStatus};
use polynum::spectra::{enumerate_region, region_bounds, DEFAULT_BUDGET};
use polynum::stats::*;
use polynum::{ModulusContext, NumberSystem};

/// Base −2 digits by plain integer arithmetic.
fn negabinary(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while n != 0 {
        let a = n.rem_euclid(2);
        out.push(a);
        n = (n - a) / -2;
    }
    out
}

fn base_minus_two() -> NumberSystem {
    NumberSystem::from_i64s(&[2, 1], &[0, 1]).unwrap()
}

fn twin_dragon() -> NumberSystem {
    NumberSystem::from_i64s(&[2, 2, 1], &[0, 1]).unwrap()
}

#[test]
fn gaussian_region_matches_ellipse_filter() {
    let ns = twin_dragon();
    for t in [2f64.sqrt(), 3.0, 7.5, 20.0] {
        let mut got: Vec<Vec<i64>> = enumerate_region(ns.ctx(), &region_bounds(t, ns.ctx()).unwrap(), DEFAULT_BUDGET)
            .unwrap()
            .residues
            .iter()
            .map(residue_coeffs_i64)
            .collect();
        got.sort();
        let r = (2.0 * t) as i64 + 2;
        let mut want = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                if ((a - b) * (a - b) + b * b) as f64 <= t * t + 1e-9 {
                    want.push(vec![a, b]);
                }
            }
        }
        assert_eq!(got, want, "T = {t}");
        if t == 2f64.sqrt() {
            assert_eq!(got.len(), 9);
        }
    }
}

#[test]
fn mixed_cubic_region_matches_root_filter() {
    // (X+2)(X^2+2X+2): thresholds T^0.75 on the complex pair, T^1.5 on -2
    let ctx = std::sync::Arc::new(ModulusContext::from_i64s(&[4, 6, 4, 1]).unwrap());
    let t = 6.0;
    let region = region_bounds(t, &ctx).unwrap();
    let near = |x: f64, y: f64| (x - y).abs() < 1e-9;
    assert!(region.thresholds.iter().all(|&x| near(x, t.powf(0.75)) || near(x, t.powf(1.5))));
    assert!(region.thresholds.iter().any(|&x| near(x, t.powf(0.75))));
    assert!(region.thresholds.iter().any(|&x| near(x, t.powf(1.5))));

    let mut got: Vec<Vec<i64>> = enumerate_region(&ctx, &region, DEFAULT_BUDGET)
        .unwrap()
        .residues
        .iter()
        .map(residue_coeffs_i64)
        .collect();
    got.sort();
    let beta = Complex64::new(-1.0, 1.0);
    let eval = |c: &[i64], x: Complex64| c[0] as f64 + x * c[1] as f64 + x * x * c[2] as f64;
    let mut want = Vec::new();
    let r = 40;
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                let v = [a, b, c];
                let pair = eval(&v, beta).norm();
                let real = eval(&v, Complex64::new(-2.0, 0.0)).norm();
                if pair <= t.powf(0.75) * (1.0 + 1e-9) && real <= t.powf(1.5) * (1.0 + 1e-9) {
                    want.push(v.to_vec());
                }
            }
        }
    }
    assert!(want.iter().all(|v| v.iter().all(|c| c.abs() < r)), "oracle box too small");
    assert_eq!(got, want);
}

#[test]
fn clt_mean_small_base_minus_two() {
    // T = 2^6, P = Y: L = 6, C = 1 gives the window [2, 4]
    let ns = base_minus_two();
    let f = AdditiveFunction::sum_of_digits(&ns);
    let opts = HarnessOptions {
        truncation: 1.0,
        ..Default::default()
    };
    let p = SamplePoly::Exact(ResiduePoly::identity(ns.ctx()));
    let report = clt_harness(&p, &f, 64.0, &ns, &opts).unwrap();
    assert_eq!(report.window, (2, 4));

    let vals: Vec<f64> = (-64..=64i64)
        .map(|z| {
            let s: i64 = negabinary(z).iter().skip(2).take(3).sum();
            (s as f64 - 1.5) / 0.75f64.sqrt()
        })
        .collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    assert_eq!(report.sample_count, 129);
    assert!((report.moments[0] - mean).abs() < 1e-12);
    assert!((-0.2..=0.2).contains(&mean), "mean {mean}");
}

#[test]
fn clt_ks_shrinks_for_squares() {
    let ns = base_minus_two();
    let f = AdditiveFunction::sum_of_digits(&ns);
    let opts = HarnessOptions {
        truncation: 1.0,
        ..Default::default()
    };
    let p = SamplePoly::Exact(ResiduePoly::parse(ns.ctx(), "Y^2").unwrap());
    let small = clt_harness(&p, &f, 64.0, &ns, &opts).unwrap();
    let large = clt_harness(&p, &f, 1024.0, &ns, &opts).unwrap();
    assert!(large.ks < small.ks, "{} vs {}", large.ks, small.ks);
}

#[test]
fn clt_rejects_degenerate_function() {
    let ns = twin_dragon();
    let p = SamplePoly::Exact(ResiduePoly::parse(ns.ctx(), "Y^2").unwrap());
    let err = clt_harness(&p, &AdditiveFunction::zero(), 60.0, &ns, &HarnessOptions::default()).unwrap_err();
    assert!(err.to_string().contains("degenerate"), "{err}");
}

#[test]
fn pattern_frequencies_base_minus_two() {
    let ns = base_minus_two();
    let p = ResiduePoly::identity(ns.ctx());
    let t = 256.0;
    let mut digits: Vec<Vec<i64>> = (-256..=256i64).map(negabinary).collect();
    let at = |d: &Vec<i64>, l: usize| d.get(l).copied().unwrap_or(0);

    let single = pattern_count(&[5], &[1], &p, t, &ns, DEFAULT_BUDGET).unwrap();
    let oracle = digits.iter().filter(|d| at(d, 5) == 1).count() as u64;
    assert_eq!(single.count, oracle);
    assert_eq!(single.total, 513);
    let freq = single.count as f64 / single.total as f64;
    assert!((0.45..=0.55).contains(&freq), "{freq}");

    // position 9 needs T = 2^10 to lie inside typical expansions
    let t = 1024.0;
    digits = (-1024..=1024i64).map(negabinary).collect();
    let mut total = 0;
    for b1 in [0, 1] {
        for b2 in [0, 1] {
            let c = pattern_count(&[4, 9], &[b1, b2], &p, t, &ns, DEFAULT_BUDGET).unwrap();
            let oracle = digits.iter().filter(|d| at(d, 4) == b1 && at(d, 9) == b2).count() as u64;
            assert_eq!(c.count, oracle);
            assert!((c.count as f64 / c.total as f64 - 0.25).abs() <= 0.06);
            total += c.count;
        }
    }
    assert_eq!(total, 2049);
}

#[test]
fn weyl_sum_twin_dragon_squares() {
    // rational oracle: ⟨(1,0), B^{-6} φ(z^2)⟩ mod 1 summed over R(60) gives
    // |S|/#R = 0.35584039737 (the position is too low for strong decay)
    let ns = twin_dragon();
    let p = ResiduePoly::parse(ns.ctx(), "Y^2").unwrap();
    let w = weyl_sum(&[(vec![1, 0], 5)], &p, 60.0, &ns, DEFAULT_BUDGET).unwrap();
    assert_eq!(w.count, 11289);
    assert!((w.normalized - 0.355_840_397_37).abs() < 1e-9, "{}", w.normalized);
    let w = weyl_sum(&[(vec![1, 0], 8)], &p, 60.0, &ns, DEFAULT_BUDGET).unwrap();
    assert!((w.normalized - 0.126_033_604_94).abs() < 1e-9, "{}", w.normalized);
    assert!(w.normalized < 0.2);
}

#[test]
fn weyl_single_point_region() {
    let ns = base_minus_two();
    let p = ResiduePoly::parse(ns.ctx(), "Y^2+1").unwrap();
    // T = 1.5 → R(T) = {-1, 0, 1}; all squares plus one are 1 or 2
    let w = weyl_sum(&[(vec![1], 0)], &p, 1.5, &ns, DEFAULT_BUDGET).unwrap();
    assert_eq!(w.count, 3);
    let w = weyl_sum(&[(vec![1], 3)], &ResiduePoly::identity(ns.ctx()), 1.01, &ns, DEFAULT_BUDGET);
    assert!(w.unwrap().count == 3);
}

/// Geometric route to the border band: `x` is ambiguous when depth-`v` tile
/// points lie within `tol` of `x − z` for two different lattice points `z`.
struct Cloud {
    cells: std::collections::HashMap<(i64, i64), Vec<[f64; 2]>>,
    tol: f64,
}

impl Cloud {
    fn new(points: &[Vec<f64>], tol: f64) -> Self {
        let mut cells: std::collections::HashMap<(i64, i64), Vec<[f64; 2]>> = Default::default();
        for p in points {
            let key = ((p[0] / tol).floor() as i64, (p[1] / tol).floor() as i64);
            cells.entry(key).or_default().push([p[0], p[1]]);
        }
        Cloud { cells, tol }
    }

    fn near(&self, y: [f64; 2]) -> bool {
        let (kx, ky) = ((y[0] / self.tol).floor() as i64, (y[1] / self.tol).floor() as i64);
        (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                self.cells.get(&(kx + dx, ky + dy)).is_some_and(|ps| {
                    ps.iter()
                        .any(|p| (p[0] - y[0]).abs() <= self.tol && (p[1] - y[1]).abs() <= self.tol)
                })
            })
        })
    }

    fn ambiguous(&self, x: &[f64], rho: f64) -> bool {
        let (lo0, hi0) = ((x[0] - rho).floor() as i64, (x[0] + rho).ceil() as i64);
        let (lo1, hi1) = ((x[1] - rho).floor() as i64, (x[1] + rho).ceil() as i64);
        let mut hits = 0;
        for a in lo0..=hi0 {
            for b in lo1..=hi1 {
                if self.near([x[0] - a as f64, x[1] - b as f64]) {
                    hits += 1;
                }
            }
        }
        hits >= 2
    }
}

#[test]
fn border_hits_examples() {
    let ns = twin_dragon();
    let p = ResiduePoly::identity(ns.ctx());
    let all = border_hits(3, &p, 60.0, &ns, 0, DEFAULT_BUDGET).unwrap();
    assert_eq!(all.hits, all.total);

    let geom = Geometry::new(&ns);
    let r = border_hits(3, &p, 60.0, &ns, 10, DEFAULT_BUDGET).unwrap();
    assert!(r.ratio < 0.1, "{}", r.ratio);

    let v = 16;
    let points = geom.tile_points(v).unwrap();
    let diam = points.iter().map(|p| p[0].abs().max(p[1].abs())).fold(0.0, f64::max) * 2.0;
    let cloud = Cloud::new(&points, diam * 2f64.powf(-(v as f64) / 2.0));
    let (zs, _) = region_elements(&ns, 60.0, DEFAULT_BUDGET).unwrap();
    let oracle = zs
        .iter()
        .filter(|z| cloud.ambiguous(&geom.apply_power(&geom.phi(z), -3), geom.rho()))
        .count();
    assert!((oracle as f64 / zs.len() as f64) < 0.1, "{oracle} of {}", zs.len());

    // far beyond every expansion length the points crowd into the interior
    // of the tile around 0
    let far = border_hits(40, &p, 60.0, &ns, 10, DEFAULT_BUDGET).unwrap();
    let params = TileParams { depth: 10, ..Default::default() };
    let band = zs
        .iter()
        .filter(|z| {
            let x = geom.apply_power(&geom.phi(z), -40);
            geom.tile_membership(&x, &params).unwrap().status == TileStatus::BoundaryBand
        })
        .count() as u64;
    assert_eq!(far.hits, band);
    assert_eq!(far.hits, 0);
}

#[test]
fn etk_low_discrepancy_beats_identical_points() {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let kronecker: Vec<Vec<f64>> = (0..4096)
        .map(|i| vec![(i as f64 + 0.5) / 4096.0, (i as f64 * golden).fract()])
        .collect();
    let same = vec![vec![0.25, 0.75]; 4096];
    let a = etk_bound(&kronecker, 8).unwrap();
    let b = etk_bound(&same, 8).unwrap();
    assert!(a.bound < b.bound);
    assert_eq!(a.caveat, "up to an absolute constant");
}

#[test]
fn moment_profile_exact_on_presets() {
    let ns = NumberSystem::from_i64s(&[-5, 1], &[0, 1, 2, 3, 4]).unwrap();
    for f in [AdditiveFunction::sum_of_digits(&ns), AdditiveFunction::indicator(3).unwrap()] {
        let m = moment_profile(&f, 5f64.powi(4), &ns).unwrap();
        assert_eq!(m.last_position, 4);
        let (s1, s2): (f64, f64) = ns
            .digits()
            .iter()
            .map(|&a| (f.weight(a, 0), f.weight(a, 0).powi(2)))
            .fold((0.0, 0.0), |acc, w| (acc.0 + w.0, acc.1 + w.1));
        let var = s2 / 5.0 - (s1 / 5.0).powi(2);
        assert_eq!(m.variance, 5.0 * var);
        assert_eq!(m.variance, m.positions.iter().map(|p| p.variance).sum::<f64>());
    }
}
