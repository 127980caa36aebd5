//! Additive digit functions and the empirical side of the limit theorem:
//! moment profiles, truncated sums over `P(z)`, `z ∈ R(T)`, digit pattern
//! counts, Weyl sums, Erdős–Turán–Koksma bounds and border hits.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::embed::{EmbeddedVector, Exactness, Geometry, TileParams};
use crate::error::{Error, Result};
use crate::modulus::{ModulusContext, Residue};
use crate::numsys::NumberSystem;
use crate::parse::parse_poly_in;
use crate::poly::{big_to_f64, IntPoly};
use crate::spectra::{enumerate_region, region_bounds, DEFAULT_BUDGET};

pub const DEFAULT_TRUNCATION: f64 = 3.0;
pub const DEFAULT_BINS: usize = 64;
pub const DEFAULT_MOMENTS: usize = 4;
const HISTOGRAM_RANGE: f64 = 5.0;

/// Digit weights `f(a X^h)`. Positions past the explicit table use `default`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditiveFunction {
    pub name: String,
    default: BTreeMap<i64, f64>,
    by_position: Vec<BTreeMap<i64, f64>>,
}

impl AdditiveFunction {
    /// Position-independent weights; digits missing from `weights` weigh 0.
    pub fn new(name: &str, weights: BTreeMap<i64, f64>) -> Result<Self> {
        Self::with_positions(name, weights, Vec::new())
    }

    pub fn with_positions(
        name: &str,
        default: BTreeMap<i64, f64>,
        by_position: Vec<BTreeMap<i64, f64>>,
    ) -> Result<Self> {
        for table in std::iter::once(&default).chain(&by_position) {
            if table.get(&0).is_some_and(|w| *w != 0.0) {
                return Err(Error::InvalidParameter("weight of digit 0 must be 0".into()));
            }
            if table.values().any(|w| !w.is_finite()) {
                return Err(Error::InvalidParameter("weights must be finite".into()));
            }
        }
        Ok(AdditiveFunction {
            name: name.to_string(),
            default,
            by_position,
        })
    }

    pub fn sum_of_digits(ns: &NumberSystem) -> Self {
        let w = ns.digits().iter().map(|&a| (a, a as f64)).collect();
        AdditiveFunction {
            name: "sumdigits".into(),
            default: w,
            by_position: Vec::new(),
        }
    }

    /// Counts occurrences of digit `a0` (which must be nonzero).
    pub fn indicator(a0: i64) -> Result<Self> {
        if a0 == 0 {
            return Err(Error::InvalidParameter("indicator digit must be nonzero".into()));
        }
        Ok(AdditiveFunction {
            name: format!("indicator:{a0}"),
            default: BTreeMap::from([(a0, 1.0)]),
            by_position: Vec::new(),
        })
    }

    pub fn zero() -> Self {
        AdditiveFunction {
            name: "zero".into(),
            default: BTreeMap::new(),
            by_position: Vec::new(),
        }
    }

    pub fn weight(&self, a: i64, h: usize) -> f64 {
        let table = self.by_position.get(h).unwrap_or(&self.default);
        table.get(&a).copied().unwrap_or(0.0)
    }

    /// Uniform bound `W̄` on all weights.
    pub fn bound(&self) -> f64 {
        std::iter::once(&self.default)
            .chain(&self.by_position)
            .flat_map(|t| t.values())
            .fold(0.0, |m, w| m.max(w.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositionMoments {
    pub position: usize,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentProfile {
    pub positions: Vec<PositionMoments>,
    /// `M = Σ m_h`.
    pub mean: f64,
    /// `D² = Σ σ²_h`.
    pub variance: f64,
    /// Last position included.
    pub last_position: usize,
    pub degenerate: bool,
}

/// Moments over positions `0..=L`, `L = ⌊log_{|p(0)|} x⌋`.
pub fn moment_profile(f: &AdditiveFunction, x: f64, ns: &NumberSystem) -> Result<MomentProfile> {
    if x.is_nan() || x <= 1.0 {
        return Err(Error::InvalidParameter("x must exceed 1".into()));
    }
    let base = ns.digits().len() as f64;
    let mut l = (x.ln() / base.ln()).floor() as usize;
    // guard against ln rounding for exact powers
    while base.powi(l as i32 + 1) <= x {
        l += 1;
    }
    while l > 0 && base.powi(l as i32) > x {
        l -= 1;
    }
    Ok(moment_window(f, ns, 0, l))
}

/// Moments over positions `lo..=hi`.
pub fn moment_window(f: &AdditiveFunction, ns: &NumberSystem, lo: usize, hi: usize) -> MomentProfile {
    let k = ns.digits().len() as f64;
    let positions: Vec<PositionMoments> = (lo..=hi)
        .map(|h| {
            let s1: f64 = ns.digits().iter().map(|&a| f.weight(a, h)).sum();
            let s2: f64 = ns.digits().iter().map(|&a| f.weight(a, h).powi(2)).sum();
            let mean = s1 / k;
            PositionMoments {
                position: h,
                mean,
                variance: (s2 / k - mean * mean).max(0.0),
            }
        })
        .collect();
    let mean = positions.iter().map(|p| p.mean).sum();
    let variance: f64 = positions.iter().map(|p| p.variance).sum();
    MomentProfile {
        positions,
        mean,
        variance,
        last_position: hi,
        degenerate: variance <= 0.0,
    }
}

pub fn additive_value(g: &Residue, f: &AdditiveFunction, ns: &NumberSystem) -> Result<f64> {
    let e = ns.expand(g, None)?;
    Ok(e.digits.iter().enumerate().map(|(h, &a)| f.weight(a, h)).sum())
}

/// Sum of weights over positions `lo..=hi` only.
pub fn truncated_value(
    g: &Residue,
    f: &AdditiveFunction,
    ns: &NumberSystem,
    lo: usize,
    hi: usize,
) -> Result<f64> {
    let e = ns.expand(g, None)?;
    Ok(digits_value(&e.digits, f, lo, hi))
}

fn digits_value(digits: &[i64], f: &AdditiveFunction, lo: usize, hi: usize) -> f64 {
    digits
        .iter()
        .enumerate()
        .skip(lo)
        .take_while(|(h, _)| *h <= hi)
        .map(|(h, &a)| f.weight(a, h))
        .sum()
}

/// Polynomial in `Y` with coefficients in `Z[X]/(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResiduePoly {
    coeffs: Vec<Residue>,
}

impl ResiduePoly {
    pub fn new(coeffs: Vec<Residue>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidParameter("P must have degree at least 1".into()));
        }
        Ok(ResiduePoly { coeffs })
    }

    pub fn from_int_poly(ctx: &Arc<ModulusContext>, p: &IntPoly) -> Result<Self> {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| ctx.reduce(&IntPoly::constant(c.clone())))
                .collect(),
        )
    }

    /// Integer-coefficient polynomial text in `Y`, e.g. `"Y^2"` or `"0,0,1"`.
    pub fn parse(ctx: &Arc<ModulusContext>, text: &str) -> Result<Self> {
        Self::from_int_poly(ctx, &parse_poly_in(text, 'Y')?)
    }

    pub fn identity(ctx: &Arc<ModulusContext>) -> Self {
        ResiduePoly {
            coeffs: vec![ctx.zero(), ctx.one()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Residue] {
        &self.coeffs
    }

    pub fn eval(&self, z: &Residue) -> Result<Residue> {
        let mut acc = self.coeffs.last().cloned().expect("nonempty");
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(z)?.add(c)?;
        }
        Ok(acc)
    }
}

/// Polynomial in `Y` with real-vector coefficients (elements of `R^n`, acting
/// through the coefficient embedding).
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoly {
    pub coeffs: Vec<EmbeddedVector>,
}

impl RealPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `φ(P(z)) = Σ_i M(z^i) c_i` with `M` the multiplication matrix.
    pub fn eval(&self, z: &Residue) -> EmbeddedVector {
        let n = z.ctx().degree();
        let mut out = vec![0.0; n];
        let mut zi = z.ctx().one();
        for c in &self.coeffs {
            let m = zi.multiplication_matrix();
            for (i, o) in out.iter_mut().enumerate() {
                *o += m[i].iter().zip(c).map(|(a, b)| big_to_f64(a) * b).sum::<f64>();
            }
            zi = zi.mul(z).expect("same context");
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum SamplePoly {
    Exact(ResiduePoly),
    Real(RealPoly),
}

impl SamplePoly {
    pub fn degree(&self) -> usize {
        match self {
            SamplePoly::Exact(p) => p.degree(),
            SamplePoly::Real(p) => p.degree(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessOptions {
    /// Truncation constant `C`.
    pub truncation: f64,
    pub bins: usize,
    pub max_moment: usize,
    pub budget: u64,
    /// Also compute moments over `R(T^d)`.
    pub eta: bool,
    /// Depth used to take integer parts on the real-coefficient path.
    pub depth: u32,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions {
            truncation: DEFAULT_TRUNCATION,
            bins: DEFAULT_BINS,
            max_moment: DEFAULT_MOMENTS,
            budget: DEFAULT_BUDGET,
            eta: false,
            depth: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub sample_count: usize,
    pub ks: f64,
    /// `ξ_1 … ξ_k`.
    pub moments: Vec<f64>,
    pub histogram: Vec<HistogramBin>,
    /// Region points plus (real path) inexact integer parts.
    pub boundary_band: usize,
    /// `L = ⌊n · log_{|p(0)|} T⌋`.
    pub length_scale: usize,
    pub window: (usize, usize),
    pub m_profile: MomentProfile,
    pub eta_moments: Option<Vec<f64>>,
    #[serde(skip)]
    pub standardized: Vec<f64>,
}

/// Truncation window `[A, dL − A]` with `A = ⌈C ln L⌉`.
pub fn truncation_window(l: usize, d: usize, c: f64) -> Result<(usize, usize)> {
    let a = if l >= 2 { (c * (l as f64).ln()).ceil().max(0.0) as usize } else { 0 };
    let top = d * l;
    if top < 2 * a {
        return Err(Error::InvalidParameter(format!(
            "empty truncation window: L = {l}, d = {d}, A = {a}"
        )));
    }
    Ok((a, top - a))
}

/// Region elements of `R(T)` in enumeration order.
pub fn region_elements(ns: &NumberSystem, t: f64, budget: u64) -> Result<(Vec<Residue>, usize)> {
    let region = region_bounds(t, ns.ctx())?;
    let e = enumerate_region(ns.ctx(), &region, budget)?;
    Ok((e.residues, e.boundary_band))
}

/// `L = ⌊n · log_{|p(0)|} T⌋`, the typical expansion length over `R(T)`.
pub fn length_scale(ns: &NumberSystem, t: f64) -> usize {
    let n = ns.ctx().degree() as f64;
    let base = ns.digits().len() as f64;
    (n * t.ln() / base.ln() + 1e-12).floor().max(0.0) as usize
}

/// Digits of `P(z)` for every `z`, with the number of inexact integer parts
/// (always zero for exact coefficients).
fn sample_digits(ns: &NumberSystem, p: &SamplePoly, zs: &[Residue], depth: u32) -> Result<(Vec<Vec<i64>>, usize)> {
    match p {
        SamplePoly::Exact(p) => {
            let d: Result<Vec<Vec<i64>>> = zs
                .par_iter()
                .map(|z| Ok(ns.expand(&p.eval(z)?, None)?.digits))
                .collect();
            Ok((d?, 0))
        }
        SamplePoly::Real(p) => {
            let geom = Geometry::new(ns);
            let params = TileParams {
                depth,
                ..Default::default()
            };
            let d: Result<Vec<(Vec<i64>, bool)>> = zs
                .par_iter()
                .map(|z| {
                    let parts = geom.integer_fractional(&p.eval(z), &params)?;
                    let digits = ns.expand(&parts.integer_part, None)?.digits;
                    Ok((digits, parts.exactness == Exactness::BoundaryBand))
                })
                .collect();
            let d = d?;
            let band = d.iter().filter(|x| x.1).count();
            Ok((d.into_iter().map(|x| x.0).collect(), band))
        }
    }
}

/// Standardized truncated values `(f′(P(z)) − M′)/D′` over `z ∈ R(T)` and
/// their distance to the standard normal law.
pub fn clt_harness(
    p: &SamplePoly,
    f: &AdditiveFunction,
    t: f64,
    ns: &NumberSystem,
    opts: &HarnessOptions,
) -> Result<SampleReport> {
    let (zs, band) = region_elements(ns, t, opts.budget)?;
    if zs.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let d = p.degree();
    let l = length_scale(ns, t);
    let (lo, hi) = truncation_window(l, d, opts.truncation)?;
    let profile = moment_window(f, ns, lo, hi);
    if profile.degenerate {
        return Err(Error::DegenerateDeviation(profile.variance));
    }
    let dev = profile.variance.sqrt();
    let (digits, inexact) = sample_digits(ns, p, &zs, opts.depth)?;
    let standardized: Vec<f64> = digits
        .iter()
        .map(|ds| (digits_value(ds, f, lo, hi) - profile.mean) / dev)
        .collect();

    let eta_moments = if opts.eta {
        let (ws, _) = region_elements(ns, t.powi(d as i32), opts.budget)?;
        let vals: Result<Vec<f64>> = ws
            .par_iter()
            .map(|w| Ok((truncated_value(w, f, ns, lo, hi)? - profile.mean) / dev))
            .collect();
        Some(raw_moments(&vals?, opts.max_moment))
    } else {
        None
    };

    Ok(SampleReport {
        sample_count: standardized.len(),
        ks: ks_normal(&standardized),
        moments: raw_moments(&standardized, opts.max_moment),
        histogram: histogram(&standardized, opts.bins),
        boundary_band: band + inexact,
        length_scale: l,
        window: (lo, hi),
        m_profile: profile,
        eta_moments,
        standardized,
    })
}

/// `ξ_k = (1/S) Σ x^k`, `k = 1..=k_max`.
pub fn raw_moments(xs: &[f64], k_max: usize) -> Vec<f64> {
    let s = xs.len().max(1) as f64;
    (1..=k_max)
        .map(|k| xs.iter().map(|x| x.powi(k as i32)).sum::<f64>() / s)
        .collect()
}

/// Equal-width bins on `[−5, 5]`; values outside fall into the end bins.
pub fn histogram(xs: &[f64], bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let width = 2.0 * HISTOGRAM_RANGE / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in xs {
        let i = ((x + HISTOGRAM_RANGE) / width).floor();
        counts[(i.max(0.0) as usize).min(bins - 1)] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            left: -HISTOGRAM_RANGE + i as f64 * width,
            right: -HISTOGRAM_RANGE + (i + 1) as f64 * width,
            count,
        })
        .collect()
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov–Smirnov distance between the empirical law of `xs` and `N(0,1)`.
pub fn ks_normal(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[i] {
            j += 1;
        }
        let phi = normal_cdf(v[i]);
        d = d.max((phi - i as f64 / n).abs()).max(((j + 1) as f64 / n - phi).abs());
        i = j + 1;
    }
    d
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternCount {
    pub count: u64,
    pub total: u64,
    pub expected: f64,
    pub relative_error: f64,
    pub warning: Option<String>,
}

/// Number of `z ∈ R(T)` whose expansion of `P(z)` has digit `b_r` at position
/// `l_r` for every `r`.
pub fn pattern_count(
    positions: &[usize],
    digits: &[i64],
    p: &ResiduePoly,
    t: f64,
    ns: &NumberSystem,
    budget: u64,
) -> Result<PatternCount> {
    if positions.len() != digits.len() || positions.is_empty() {
        return Err(Error::InvalidParameter("positions and digits must pair up".into()));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("positions must increase".into()));
    }
    if let Some(&b) = digits.iter().find(|&&b| !ns.contains_digit(b)) {
        return Err(Error::DigitNotInSet(b));
    }
    let (zs, _) = region_elements(ns, t, budget)?;
    let (expansions, _) = sample_digits(ns, &SamplePoly::Exact(p.clone()), &zs, 0)?;
    let count = expansions
        .iter()
        .filter(|ds| {
            positions
                .iter()
                .zip(digits)
                .all(|(&l, &b)| ds.get(l).copied().unwrap_or(0) == b)
        })
        .count() as u64;
    let total = zs.len() as u64;
    let expected = total as f64 / (ns.digits().len() as f64).powi(positions.len() as i32);
    let top = p.degree() * length_scale(ns, t);
    let warning = (positions.last().copied().unwrap_or(0) >= top)
        .then(|| format!("position beyond typical expansion length {top}"));
    Ok(PatternCount {
        count,
        total,
        expected,
        relative_error: if expected > 0.0 { (count as f64 - expected).abs() / expected } else { 0.0 },
        warning,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylSum {
    pub re: f64,
    pub im: f64,
    pub normalized: f64,
    pub count: u64,
}

/// `Σ_z e(Σ_r ⟨h_r, B^{−l_r−1} φ(P(z))⟩)` over `z ∈ R(T)`, with the inner
/// products formed exactly and reduced mod 1.
pub fn weyl_sum(
    terms: &[(Vec<i64>, usize)],
    p: &ResiduePoly,
    t: f64,
    ns: &NumberSystem,
    budget: u64,
) -> Result<WeylSum> {
    let ctx = ns.ctx();
    let n = ctx.degree();
    if terms.iter().any(|(h, _)| h.len() != n) {
        return Err(Error::InvalidParameter(format!("frequency vectors must have length {n}")));
    }
    let functionals: Vec<(Vec<BigInt>, BigInt)> = terms
        .iter()
        .map(|(h, l)| inverse_power_functional(ctx, h, l + 1))
        .collect();
    let (zs, _) = region_elements(ns, t, budget)?;
    let phases: Result<Vec<f64>> = zs
        .par_iter()
        .map(|z| {
            let y = p.eval(z)?.coeffs();
            Ok(functionals
                .iter()
                .map(|(u, m)| {
                    let dot: BigInt = u.iter().zip(&y).map(|(a, b)| a * b).sum();
                    let r = dot.mod_floor(m);
                    big_to_f64(&r) / big_to_f64(m)
                })
                .sum::<f64>())
        })
        .collect();
    let (mut re, mut im) = (0.0, 0.0);
    for ph in phases? {
        let frac = ph - ph.floor();
        if frac == 0.0 {
            re += 1.0;
        } else {
            re += (2.0 * PI * frac).cos();
            im += (2.0 * PI * frac).sin();
        }
    }
    let count = zs.len() as u64;
    Ok(WeylSum {
        re,
        im,
        normalized: if count > 0 { re.hypot(im) / count as f64 } else { 0.0 },
        count,
    })
}

/// Row vector `u` and modulus `m > 0` with `⟨h, B^{−k} y⟩ ≡ ⟨u, y⟩ / m`.
fn inverse_power_functional(ctx: &ModulusContext, h: &[i64], k: usize) -> (Vec<BigInt>, BigInt) {
    let b_inv = crate::embed::rational_inverse(ctx.companion());
    let pow = crate::embed::mat_pow_rat(&b_inv, k);
    let n = h.len();
    let p0 = ctx.constant_term().clone();
    let mut m = num_traits::pow(p0, k);
    let mut u: Vec<BigInt> = (0..n)
        .map(|j| {
            let s = (0..n).fold(num_rational::BigRational::zero(), |acc, i| {
                acc + &pow[i][j] * BigInt::from(h[i])
            });
            let scaled = s * num_rational::BigRational::from_integer(m.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    if m.is_negative() {
        m = -m;
        for c in u.iter_mut() {
            *c = -&*c;
        }
    }
    (u, m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtkReport {
    pub bound: f64,
    pub frequencies: usize,
    pub caveat: &'static str,
}

/// `2/(H+1) + Σ_{0<‖h‖∞≤H} r(h)^{−1} |S^{−1} Σ_s e(⟨h, x_s⟩)|`,
/// `r(h) = ∏ max(1, |h_i|)`.
pub fn etk_bound(points: &[Vec<f64>], h_max: u32) -> Result<EtkReport> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    if h_max == 0 {
        return Err(Error::InvalidParameter("H must be at least 1".into()));
    }
    let n = points[0].len();
    let side = 2 * h_max as usize + 1;
    let total = side.pow(n as u32);
    let s = points.len() as f64;
    let terms: Vec<f64> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let mut rem = idx;
            let h: Vec<f64> = (0..n)
                .map(|_| {
                    let c = (rem % side) as i64 - h_max as i64;
                    rem /= side;
                    c as f64
                })
                .collect();
            if h.iter().all(|&c| c == 0.0) {
                return None;
            }
            let r: f64 = h.iter().map(|c| c.abs().max(1.0)).product();
            let (mut re, mut im) = (0.0, 0.0);
            for x in points {
                let ph: f64 = h.iter().zip(x).map(|(a, b)| a * b).sum();
                let ph = 2.0 * PI * (ph - ph.floor());
                re += ph.cos();
                im += ph.sin();
            }
            Some(re.hypot(im) / s / r)
        })
        .collect();
    Ok(EtkReport {
        bound: 2.0 / (h_max as f64 + 1.0) + terms.iter().sum::<f64>(),
        frequencies: terms.len(),
        caveat: "up to an absolute constant",
    })
}

/// `max |#{x ∈ [0,t)}/S − vol[0,t)|` over anchored boxes with corners on a
/// `resolution`-grid of the unit cube.
pub fn box_discrepancy(points: &[Vec<f64>], resolution: usize) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let n = points[0].len();
    let m = resolution.max(1);
    let total = m.pow(n as u32);
    let s = points.len() as f64;
    let worst = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut rem = idx;
            let corner: Vec<f64> = (0..n)
                .map(|_| {
                    let c = (rem % m + 1) as f64 / m as f64;
                    rem /= m;
                    c
                })
                .collect();
            let inside = points
                .iter()
                .filter(|x| x.iter().zip(&corner).all(|(a, b)| *a < *b))
                .count() as f64;
            let vol: f64 = corner.iter().product();
            (inside / s - vol).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BorderHits {
    pub hits: u64,
    pub total: u64,
    pub ratio: f64,
}

/// `F_l`: number of `z ∈ R(T)` for which `B^{−l−1} φ(P(z))`, taken modulo
/// `B^{−1} Z^n`, lies in the depth-`v` boundary band of the digit tiles.
pub fn border_hits(
    l: usize,
    p: &ResiduePoly,
    t: f64,
    ns: &NumberSystem,
    depth: u32,
    budget: u64,
) -> Result<BorderHits> {
    let geom = Geometry::new(ns);
    let (zs, _) = region_elements(ns, t, budget)?;
    let flags: Result<Vec<bool>> = zs
        .par_iter()
        .map(|z| geom.integer_part_ambiguous(&p.eval(z)?, -(l as i64), depth))
        .collect();
    let hits = flags?.into_iter().filter(|&b| b).count() as u64;
    let total = zs.len() as u64;
    Ok(BorderHits {
        hits,
        total,
        ratio: if total > 0 { hits as f64 / total as f64 } else { 0.0 },
    })
}

/// Coefficient vector of an exact residue as `i64`s (for reporting).
pub fn residue_coeffs_i64(r: &Residue) -> Vec<i64> {
    r.coeffs().iter().map(|c| c.to_i64().unwrap_or(i64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> NumberSystem {
        NumberSystem::from_i64s(&[2, 2, 1], &[0, 1]).unwrap()
    }

    #[test]
    fn profile_examples() {
        let dec = NumberSystem::from_i64s(&[-10, 1], &(0..10).collect::<Vec<_>>()).unwrap();
        let f = AdditiveFunction::sum_of_digits(&dec);
        let m = moment_profile(&f, 1000.0, &dec).unwrap();
        assert_eq!(m.last_position, 3);
        assert!(m.positions.iter().all(|p| p.mean == 4.5 && p.variance == 8.25));

        let z = moment_profile(&AdditiveFunction::zero(), 50.0, &dec).unwrap();
        assert_eq!((z.mean, z.variance, z.degenerate), (0.0, 0.0, true));

        let ns = gauss();
        let m = moment_profile(&AdditiveFunction::sum_of_digits(&ns), 1023.0, &ns).unwrap();
        assert_eq!(m.last_position, 9);
        assert_eq!((m.mean, m.variance), (5.0, 2.5));
    }

    #[test]
    fn additive_examples() {
        let ns = gauss();
        let f = AdditiveFunction::sum_of_digits(&ns);
        let g = ns.element(&[-1]);
        assert_eq!(additive_value(&g, &f, &ns).unwrap(), 4.0);
        assert_eq!(truncated_value(&g, &f, &ns, 0, 10).unwrap(), 4.0);
        assert_eq!(truncated_value(&g, &f, &ns, 1, 3).unwrap(), 2.0);
        assert_eq!(additive_value(&ns.element(&[0]), &f, &ns).unwrap(), 0.0);
    }

    #[test]
    fn weights_reject_zero_digit() {
        assert!(AdditiveFunction::new("bad", BTreeMap::from([(0, 1.0)])).is_err());
        assert!(AdditiveFunction::indicator(0).is_err());
    }

    #[test]
    fn residue_poly_eval() {
        let ns = gauss();
        let p = ResiduePoly::parse(ns.ctx(), "Y^2+1").unwrap();
        let z = ns.element(&[0, 1]);
        // X^2 + 1 = -2X - 1
        assert_eq!(p.eval(&z).unwrap(), ns.element(&[-1, -2]));
    }

    #[test]
    fn real_poly_matches_exact() {
        let ns = gauss();
        let p = RealPoly {
            coeffs: vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0]],
        };
        let z = ns.element(&[0, 1]);
        assert_eq!(p.eval(&z), vec![-1.0, -2.0]);
    }

    #[test]
    fn weyl_zero_frequency() {
        let ns = gauss();
        let p = ResiduePoly::identity(ns.ctx());
        let w = weyl_sum(&[(vec![0, 0], 3)], &p, 10.0, &ns, DEFAULT_BUDGET).unwrap();
        assert_eq!(w.re, w.count as f64);
        assert_eq!(w.normalized, 1.0);
    }

    #[test]
    fn functional_matches_rational_power() {
        let ns = gauss();
        let (u, m) = inverse_power_functional(ns.ctx(), &[1, 0], 1);
        // first row of B^{-1} is (-1, 1)
        let v = big_to_f64(&u[0]) / big_to_f64(&m);
        assert_eq!(v, -1.0);
        let v = big_to_f64(&u[1]) / big_to_f64(&m);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn ks_of_exact_quantiles_is_small() {
        let xs: Vec<f64> = (1..1000)
            .map(|i| {
                let p = i as f64 / 1000.0;
                // bisection for the normal quantile
                let (mut lo, mut hi) = (-10.0, 10.0);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if normal_cdf(mid) < p {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            })
            .collect();
        assert!(ks_normal(&xs) < 0.002);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_543).abs() < 1e-12);
    }

    #[test]
    fn etk_examples() {
        let zeros = vec![vec![0.0, 0.0]; 16];
        // Σ 1/r(h) over 0 < ‖h‖∞ ≤ H in two dimensions
        let weight = |h: f64| (1.0 + 2.0 * (1..=h as u32).map(|k| 1.0 / k as f64).sum::<f64>()).powi(2) - 1.0;
        let r = etk_bound(&zeros, 4).unwrap();
        assert!(r.bound >= weight(4.0) - 1e-9);
        assert_eq!(r.frequencies, 80);
        let single = vec![vec![0.3, 0.7]];
        let r = etk_bound(&single, 2).unwrap();
        assert!((r.bound - (2.0 / 3.0 + weight(2.0))).abs() < 1e-9);
        assert!(etk_bound(&[], 2).is_err());
    }

    #[test]
    fn truncation_window_shape() {
        assert_eq!(truncation_window(13, 2, 1.0).unwrap(), (3, 23));
        assert!(truncation_window(4, 1, 3.0).is_err());
    }
}
