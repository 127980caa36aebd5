//! Coefficient embedding `φ`, companion-matrix dynamics, the fundamental
//! domain `F = {Σ_{h≥1} B^{−h} φ(a_h)}` and the objects built on it.
//!
//! Integer parts are computed through the number system itself: for a point
//! `x`, take a lattice point `w` near `B^K x`; then `x ≈ B^{−K} w` and the
//! integer part of `B^{−K} w` is exactly `V^K(w)`. Every lattice corner of the
//! unit cell containing `B^K x` is tried; if they disagree the point lies in
//! the depth-`K` boundary band of the tiling `{F + z : z ∈ Z^n}`.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modulus::Residue;
use crate::numsys::NumberSystem;
use crate::poly::{big_to_f64, IntPoly};

pub type EmbeddedVector = Vec<f64>;

/// Number of cached matrix powers `B^{±k}`.
const CACHED_POWERS: usize = 65;

/// Cap on the number of depth-`v` tile points generated at once.
pub const POINT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TileParams {
    /// Digit depth `v`.
    pub depth: u32,
    /// Pixels per unit for rasterization.
    pub grid: u32,
    /// Urysohn smoothing constant `c_u`.
    pub c_u: f64,
    /// Samples per axis for Urysohn box averages.
    pub samples: u32,
}

impl Default for TileParams {
    fn default() -> Self {
        TileParams {
            depth: 12,
            grid: 512,
            c_u: 1.0,
            samples: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TileStatus {
    Inside,
    Outside,
    BoundaryBand,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TileMembership {
    pub status: TileStatus,
    /// First fractional digits `a_1 … a_v` (read from the lowest lattice
    /// corner).
    pub digits: Vec<i64>,
    /// Number of leading digits on which every in-tile corner agrees.
    pub digits_determined: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    BoundaryBand,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegerFractional {
    pub integer_part: Residue,
    pub fractional_part: EmbeddedVector,
    pub exactness: Exactness,
}

/// A candidate integer part together with the fractional digits it implies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    integer_part: Vec<BigInt>,
    digits: Vec<i64>,
}

/// Geometry of a number system: cached powers of the companion matrix and a
/// bounding radius for `F`.
#[derive(Clone, Debug)]
pub struct Geometry {
    ns: NumberSystem,
    n: usize,
    pow_pos: Vec<Vec<Vec<f64>>>,
    pow_neg: Vec<Vec<Vec<f64>>>,
    rho: f64,
    det: f64,
}

impl Geometry {
    pub fn new(ns: &NumberSystem) -> Self {
        let n = ns.ctx().degree();
        let b = integer_matrix(ns);
        let b_inv = rational_inverse(&b);
        let mut pos = vec![identity_int(n)];
        let mut neg = vec![identity_rat(n)];
        for k in 1..CACHED_POWERS {
            pos.push(mat_mul_int(&pos[k - 1], &b));
            neg.push(mat_mul_rat(&neg[k - 1], &b_inv));
        }
        let pow_pos: Vec<_> = pos.iter().map(|m| to_f64_int(m)).collect();
        let pow_neg: Vec<_> = neg.iter().map(|m| to_f64_rat(m)).collect();
        let det = big_to_f64(ns.ctx().abs_det());
        let rho = bounding_radius(ns, &pow_neg, &b_inv);
        Geometry {
            ns: ns.clone(),
            n,
            pow_pos,
            pow_neg,
            rho,
            det,
        }
    }

    pub fn number_system(&self) -> &NumberSystem {
        &self.ns
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sup-norm bound on every point of `F`.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn abs_det(&self) -> f64 {
        self.det
    }

    pub fn phi(&self, r: &Residue) -> EmbeddedVector {
        embed_phi(r)
    }

    /// `B^h x`, using exact rational powers of `B` rounded once to `f64`.
    pub fn apply_power(&self, x: &[f64], h: i64) -> EmbeddedVector {
        let k = h.unsigned_abs() as usize;
        let m = if k < CACHED_POWERS {
            if h >= 0 {
                self.pow_pos[k].clone()
            } else {
                self.pow_neg[k].clone()
            }
        } else {
            let b = integer_matrix(&self.ns);
            if h >= 0 {
                to_f64_int(&mat_pow_int(&b, k))
            } else {
                to_f64_rat(&mat_pow_rat(&rational_inverse(&b), k))
            }
        };
        mat_vec(&m, x)
    }

    /// Candidates for the integer part of a point given through its scaled
    /// image `s = B^k x`.
    fn candidates_scaled(&self, s: &[f64], k: usize, v: usize) -> Result<Vec<Candidate>> {
        if s.iter().any(|c| !c.is_finite() || c.abs() > 9.0e15) {
            return Err(Error::NoCandidate);
        }
        let base: Vec<i64> = s.iter().map(|c| c.floor() as i64).collect();
        let mut out = BTreeSet::new();
        for mask in 0..(1u32 << self.n) {
            let w: Vec<i64> = base
                .iter()
                .enumerate()
                .map(|(i, &b)| b + ((mask >> i) & 1) as i64)
                .collect();
            let (int_part, low) = self.ns.iterate(&IntPoly::from_i64s(&w), k);
            // fractional digit h is the digit of w at position k − h
            let digits = (1..=v.min(k)).map(|h| low[k - h]).collect();
            out.insert(Candidate {
                integer_part: int_part.padded(self.n),
                digits,
            });
        }
        Ok(out.into_iter().collect())
    }

    fn candidates(&self, x: &[f64], v: usize) -> Result<Vec<Candidate>> {
        let s = self.apply_power(x, v as i64);
        self.candidates_scaled(&s, v, v)
    }

    /// Tri-state membership of `x` in `F` at depth `v`, with the first `v`
    /// fractional digits.
    pub fn tile_membership(&self, x: &[f64], params: &TileParams) -> Result<TileMembership> {
        let v = params.depth as usize;
        if sup_norm(x) > self.rho {
            return Ok(TileMembership {
                status: TileStatus::Outside,
                digits: Vec::new(),
                digits_determined: 0,
            });
        }
        let cands = self.candidates(x, v)?;
        let inside: Vec<&Candidate> = cands
            .iter()
            .filter(|c| c.integer_part.iter().all(|z| z.is_zero()))
            .collect();
        let status = if inside.len() == cands.len() {
            TileStatus::Inside
        } else if inside.is_empty() {
            TileStatus::Outside
        } else {
            TileStatus::BoundaryBand
        };
        let digits = inside.first().map(|c| c.digits.clone()).unwrap_or_default();
        let digits_determined = (0..digits.len())
            .take_while(|&i| inside.iter().all(|c| c.digits[i] == digits[i]))
            .count();
        Ok(TileMembership {
            status,
            digits,
            digits_determined,
        })
    }

    /// Integer and fractional part of `γ` at depth `v`; ties in the boundary
    /// band resolve to the lexicographically smallest integer part.
    pub fn integer_fractional(&self, gamma: &[f64], params: &TileParams) -> Result<IntegerFractional> {
        let cands = self.candidates(gamma, params.depth as usize)?;
        let first = cands.first().ok_or(Error::NoCandidate)?;
        let exactness = if cands
            .iter()
            .all(|c| c.integer_part == first.integer_part)
        {
            Exactness::Exact
        } else {
            Exactness::BoundaryBand
        };
        let integer_part = self.ns.ctx().reduce(&IntPoly::new(first.integer_part.clone()));
        let z = embed_phi(&integer_part);
        let fractional_part = gamma.iter().zip(&z).map(|(g, z)| g - z).collect();
        Ok(IntegerFractional {
            integer_part,
            fractional_part,
            exactness,
        })
    }

    /// `B^{shift} φ(y)` for an exact element, accurate even for large negative
    /// shifts: the integer part is `V^{−shift}(y)` and the fractional part is
    /// summed from the digits just below it.
    pub fn scaled_point(&self, y: &Residue, shift: i64) -> EmbeddedVector {
        if shift >= 0 {
            let z = self.ns.ctx().reduce(&y.rep().shift(shift as usize));
            return embed_phi(&z);
        }
        let k = (-shift) as usize;
        let (int_part, low) = self.ns.iterate(y.rep(), k);
        let mut out: Vec<f64> = int_part.padded(self.n).iter().map(big_to_f64).collect();
        for h in 1..=k.min(CACHED_POWERS - 1) {
            let a = low[k - h] as f64;
            if a != 0.0 {
                for (o, row) in out.iter_mut().zip(&self.pow_neg[h]) {
                    *o += row[0] * a;
                }
            }
        }
        out
    }

    /// Whether the integer part of `B^{shift} φ(y)` is ambiguous at depth `v`.
    pub fn integer_part_ambiguous(&self, y: &Residue, shift: i64, v: u32) -> Result<bool> {
        let s = self.scaled_point(y, shift + v as i64);
        let cands = self.candidates_scaled(&s, v as usize, 0)?;
        Ok(cands
            .iter()
            .any(|c| c.integer_part != cands[0].integer_part))
    }

    /// `ψ_a`: 1 inside `F_a = B^{−1}(F + φ(a))`, 0 outside, ½ in the band.
    fn psi(&self, y: &[f64], a: i64, v: usize) -> Result<f64> {
        let by = self.apply_power(y, 1);
        let cands = self.candidates(&by, v)?;
        let target: Vec<BigInt> = (0..self.n)
            .map(|i| if i == 0 { BigInt::from(a) } else { BigInt::zero() })
            .collect();
        let hits = cands.iter().filter(|c| c.integer_part == target).count();
        Ok(if hits == cands.len() {
            1.0
        } else if hits == 0 {
            0.0
        } else {
            0.5
        })
    }

    /// `κ = 2 c_u |det B|^{−v}`.
    pub fn kappa(&self, params: &TileParams) -> f64 {
        2.0 * params.c_u * self.det.powi(-(params.depth as i32))
    }

    /// Urysohn function `u_a(x)`: box average of `ψ_a` over the `κ`-cube
    /// around `x` on a centred grid of `samples^n` points.
    pub fn urysohn_eval(&self, x: &[f64], a: i64, params: &TileParams) -> Result<f64> {
        if !self.ns.contains_digit(a) {
            return Err(Error::DigitNotInSet(a));
        }
        let kappa = self.kappa(params);
        if sup_norm(x) > self.rho + kappa {
            return Ok(0.0);
        }
        let s = params.samples.max(1) as usize;
        let total = s.pow(self.n as u32);
        let mut acc = 0.0;
        let mut y = vec![0.0; self.n];
        for idx in 0..total {
            let mut rem = idx;
            for (i, yi) in y.iter_mut().enumerate() {
                let t = rem % s;
                rem /= s;
                *yi = x[i] + kappa * ((t as f64 + 0.5) / s as f64 - 0.5);
            }
            acc += self.psi(&y, a, params.depth as usize)?;
        }
        Ok(acc / total as f64)
    }

    /// Integer lattice points `Σ_{h=1}^{v} B^{v−h} φ(a_h)`; the depth-`v` tile
    /// points are their images under `B^{−v}`.
    fn lattice_tile_points(&self, v: u32) -> Result<Vec<Vec<i64>>> {
        let count = (self.ns.digits().len() as f64).powi(v as i32);
        if count > POINT_BUDGET as f64 {
            return Err(Error::Budget {
                estimated: count,
                budget: POINT_BUDGET,
            });
        }
        let b = integer_matrix(&self.ns);
        let b: Vec<Vec<i64>> = b
            .iter()
            .map(|r| r.iter().map(|c| c.to_i64().unwrap_or(i64::MAX)).collect())
            .collect();
        let mut pts: Vec<Vec<i64>> = vec![vec![0; self.n]];
        for _ in 0..v {
            let mut next = Vec::with_capacity(pts.len() * self.ns.digits().len());
            for w in &pts {
                let bw: Option<Vec<i64>> = (0..self.n)
                    .map(|i| {
                        (0..self.n).try_fold(0i64, |acc, j| {
                            acc.checked_add(b[i][j].checked_mul(w[j])?)
                        })
                    })
                    .collect();
                let bw = bw.ok_or_else(|| Error::InvalidParameter("tile depth overflows".into()))?;
                for &a in self.ns.digits() {
                    let mut p = bw.clone();
                    p[0] = p[0]
                        .checked_add(a)
                        .ok_or_else(|| Error::InvalidParameter("tile depth overflows".into()))?;
                    next.push(p);
                }
            }
            pts = next;
        }
        Ok(pts)
    }

    /// All depth-`v` tile points, sorted.
    pub fn tile_points(&self, v: u32) -> Result<Vec<EmbeddedVector>> {
        let m = self.inverse_power(v);
        let mut pts: Vec<EmbeddedVector> = self
            .lattice_tile_points(v)?
            .iter()
            .map(|w| {
                let wf: Vec<f64> = w.iter().map(|&c| c as f64).collect();
                mat_vec(&m, &wf)
            })
            .collect();
        pts.sort_by(|a, b| cmp_vec(a, b));
        Ok(pts)
    }

    fn inverse_power(&self, v: u32) -> Vec<Vec<f64>> {
        if (v as usize) < CACHED_POWERS {
            self.pow_neg[v as usize].clone()
        } else {
            to_f64_rat(&mat_pow_rat(&rational_inverse(&integer_matrix(&self.ns)), v as usize))
        }
    }

    pub fn rasterize_tile(&self, params: &TileParams) -> Result<TileRaster> {
        let points = self.tile_points(params.depth)?;
        let grid = params.grid.max(1) as f64;
        let cells: BTreeSet<Vec<i64>> = points
            .iter()
            .map(|p| p.iter().map(|c| (c * grid).floor() as i64).collect())
            .collect();
        let area_estimate = cells.len() as f64 / grid.powi(self.n as i32);
        let max_sup = points.iter().map(|p| sup_norm(p)).fold(0.0, f64::max);
        Ok(TileRaster {
            dim: self.n,
            grid: params.grid,
            points,
            cells,
            area_estimate,
            max_sup_norm: max_sup,
        })
    }

    /// Box-counting statistics of `∂F` from a depth-`depth` point cloud at
    /// scales `2^{−s}`, `s ∈ scales`.
    pub fn boundary_stats(&self, depth: u32, scales: std::ops::RangeInclusive<u32>) -> Result<BoundaryStats> {
        if self.n != 2 {
            return Err(Error::InvalidParameter("boundary statistics need n = 2".into()));
        }
        let resolution = depth as f64 * self.det.log2() / self.n as f64;
        let needed_scale = *scales.end();
        if needed_scale as f64 > resolution - 1.0 {
            let needed = ((needed_scale as f64 + 1.0) * self.n as f64 / self.det.log2()).ceil() as u32;
            return Err(Error::InsufficientDepth {
                scale: needed_scale,
                needed,
            });
        }
        let pts: Vec<[f64; 2]> = self.tile_points(depth)?.iter().map(|p| [p[0], p[1]]).collect();
        let reach = (2.0 * self.rho).ceil() as i64 + 1;
        let translates: Vec<[i64; 2]> = (-reach..=reach)
            .flat_map(|a| (-reach..=reach).map(move |b| [a, b]))
            .filter(|z| *z != [0, 0])
            .collect();
        let scales: Vec<u32> = scales.collect();
        let counts = boundary_box_counts(&pts, &translates, &scales);
        let (slope, _) = fit_line(
            &scales.iter().map(|&s| s as f64).collect::<Vec<_>>(),
            &counts.iter().map(|&c| (c.max(1) as f64).log2()).collect::<Vec<_>>(),
        );
        let growth = slope.exp2();
        Ok(BoundaryStats {
            scales,
            boundary_boxes: counts,
            dimension_estimate: slope,
            mu_estimate: growth.powf(self.det.log2() / self.n as f64),
        })
    }
}

#[derive(Clone, Debug)]
pub struct TileRaster {
    pub dim: usize,
    pub grid: u32,
    pub points: Vec<EmbeddedVector>,
    pub cells: BTreeSet<Vec<i64>>,
    /// Covered cells divided by cells per unit volume.
    pub area_estimate: f64,
    pub max_sup_norm: f64,
}

impl TileRaster {
    /// Binary PPM (P6) image, white for covered cells; rows run from the
    /// largest second coordinate down.
    pub fn to_ppm(&self) -> Result<Vec<u8>> {
        if self.dim != 2 {
            return Err(Error::InvalidParameter("image output needs n = 2".into()));
        }
        let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for c in &self.cells {
            x0 = x0.min(c[0]);
            x1 = x1.max(c[0]);
            y0 = y0.min(c[1]);
            y1 = y1.max(c[1]);
        }
        if self.cells.is_empty() {
            (x0, x1, y0, y1) = (0, 0, 0, 0);
        }
        let w = (x1 - x0 + 1) as usize;
        let h = (y1 - y0 + 1) as usize;
        let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
        let header = out.len();
        out.resize(header + w * h * 3, 0);
        for c in &self.cells {
            let col = (c[0] - x0) as usize;
            let row = (y1 - c[1]) as usize;
            let off = header + (row * w + col) * 3;
            out[off..off + 3].copy_from_slice(&[255, 255, 255]);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryStats {
    pub scales: Vec<u32>,
    pub boundary_boxes: Vec<u64>,
    pub dimension_estimate: f64,
    pub mu_estimate: f64,
}

/// Boxes at scale `2^{−s}` meeting the cloud that touch (share a box or a
/// neighbouring box with) one of its integer translates.
pub fn boundary_box_counts(points: &[[f64; 2]], translates: &[[i64; 2]], scales: &[u32]) -> Vec<u64> {
    scales
        .iter()
        .map(|&s| {
            let f = (s as f64).exp2();
            let boxes: HashSet<(i64, i64)> = points
                .iter()
                .map(|p| ((p[0] * f).floor() as i64, (p[1] * f).floor() as i64))
                .collect();
            let (mut lo, mut hi) = ((i64::MAX, i64::MAX), (i64::MIN, i64::MIN));
            for &(i, j) in &boxes {
                lo = (lo.0.min(i), lo.1.min(j));
                hi = (hi.0.max(i), hi.1.max(j));
            }
            let step = 1i64 << s;
            let near: Vec<(i64, i64)> = translates
                .iter()
                .map(|z| (z[0] * step, z[1] * step))
                .filter(|&(dx, dy)| {
                    (hi.0 - lo.0 + 1) >= dx.abs() && (hi.1 - lo.1 + 1) >= dy.abs()
                })
                .collect();
            boxes
                .iter()
                .filter(|&&(i, j)| {
                    near.iter().any(|&(dx, dy)| {
                        (-1..=1).any(|a| (-1..=1).any(|b| boxes.contains(&(i + a - dx, j + b - dy))))
                    })
                })
                .count() as u64
        })
        .collect()
}

/// Least-squares slope and intercept.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

pub fn embed_phi(r: &Residue) -> EmbeddedVector {
    r.coeffs().iter().map(big_to_f64).collect()
}

pub fn sup_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, c| m.max(c.abs()))
}

fn cmp_vec(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// `ρ = 1.1 · Σ_{h=1}^{H} ‖B^{−h}‖₂ · max_a ‖φ(a)‖₂`, `H` chosen so the
/// remaining geometric tail is below `10^{−6}`.
fn bounding_radius(ns: &NumberSystem, cached: &[Vec<Vec<f64>>], b_inv: &[Vec<BigRational>]) -> f64 {
    let max_digit = ns.max_digit_abs() as f64;
    let r = ns
        .ctx()
        .roots()
        .iter()
        .map(|x| 1.0 / x.value.norm())
        .fold(0.0, f64::max);
    let inv = to_f64_rat(b_inv);
    let mut m = cached[0].clone();
    let mut sum = 0.0;
    for h in 1..100_000 {
        m = if h < cached.len() { cached[h].clone() } else { mat_mul_f64(&m, &inv) };
        let term = spectral_norm(&m) * max_digit;
        sum += term;
        if h >= 8 && r < 1.0 && term / (1.0 - r) < 1e-6 {
            break;
        }
    }
    1.1 * sum
}

fn spectral_norm(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut v = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..200 {
        let mv = mat_vec(m, &v);
        let mut mtmv = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                mtmv[j] += m[i][j] * mv[i];
            }
        }
        let norm = mtmv.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm / v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = mtmv.iter().map(|x| x / norm).collect();
    }
    lambda.sqrt()
}

fn integer_matrix(ns: &NumberSystem) -> Vec<Vec<BigInt>> {
    ns.ctx().companion().to_vec()
}

fn identity_int(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn identity_rat(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

fn mat_mul_int(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn mat_mul_rat(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn mat_mul_f64(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn mat_pow_int(b: &[Vec<BigInt>], k: usize) -> Vec<Vec<BigInt>> {
    (0..k).fold(identity_int(b.len()), |acc, _| mat_mul_int(&acc, b))
}

pub(crate) fn mat_pow_rat(b: &[Vec<BigRational>], k: usize) -> Vec<Vec<BigRational>> {
    (0..k).fold(identity_rat(b.len()), |acc, _| mat_mul_rat(&acc, b))
}

/// Exact inverse of an integer matrix by Gauss–Jordan over the rationals.
pub(crate) fn rational_inverse(m: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().cloned().map(BigRational::from_integer).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("companion matrix is invertible");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= p * &f;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn to_f64_int(m: &[Vec<BigInt>]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(big_to_f64).collect()).collect()
}

fn to_f64_rat(m: &[Vec<BigRational>]) -> Vec<Vec<f64>> {
    m.iter()
        .map(|r| r.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
        .collect()
}

fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}
