//! Derivative values at the roots of `p`, the house function, the length
//! predictor and the regions `R(T)`.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modulus::{ModulusContext, Residue, EPS_ROOT};

/// Default cap on the size of the coefficient bounding box.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Inflation applied to the coefficient bounding box before exact filtering.
const BOX_INFLATION: f64 = 1.01;

/// `B_jk(g)`: the `(j−1)`-st derivative of `g` at root `k`, one entry per
/// `(k, j)` pair of [`ModulusContext::b_index`].
#[derive(Clone, Debug, PartialEq)]
pub struct BVector {
    pub index: Vec<(usize, u32)>,
    pub values: Vec<Complex64>,
}

impl BVector {
    pub fn get(&self, root: usize, j: u32) -> Option<Complex64> {
        self.index
            .iter()
            .position(|&e| e == (root, j))
            .map(|i| self.values[i])
    }
}

pub fn b_values(g: &Residue) -> BVector {
    let ctx = g.ctx();
    let index = ctx.b_index();
    let values = index
        .iter()
        .map(|&(k, j)| {
            g.rep()
                .nth_derivative(j as usize - 1)
                .eval_complex(ctx.roots()[k].value)
        })
        .collect();
    BVector { index, values }
}

/// House `H(g) = max |B_jk(g)|` and length predictor
/// `M(g) = max log|B_jk(g)| / log|β_k|`, with entries of modulus at most one
/// contributing zero.
pub fn house_and_length(g: &Residue) -> Result<(f64, f64)> {
    if g.is_zero() {
        return Err(Error::ZeroElement);
    }
    let b = b_values(g);
    let roots = g.ctx().roots();
    let mut house = 0.0f64;
    let mut m = 0.0f64;
    for (&(k, _), v) in b.index.iter().zip(&b.values) {
        let abs = v.norm();
        house = house.max(abs);
        let base = roots[k].value.norm();
        if abs > 1.0 && base > 1.0 {
            m = m.max(abs.ln() / base.ln());
        }
    }
    Ok((house, m))
}

/// The box `R(T) = {g : |B_jk(g)| ≤ T_jk}`.
#[derive(Clone, Debug, Serialize)]
pub struct Region {
    pub t: f64,
    pub index: Vec<(usize, u32)>,
    pub thresholds: Vec<f64>,
}

/// Thresholds `T_jk = T^{n·log|β_k| / log|p(0)|}`, independent of `j`.
pub fn region_bounds(t: f64, ctx: &ModulusContext) -> Result<Region> {
    if t.is_nan() || t <= 1.0 || t.is_infinite() {
        return Err(Error::InvalidParameter(format!("T must exceed 1, got {t}")));
    }
    let det = ctx.abs_det().to_f64().unwrap_or(f64::INFINITY);
    if det <= 1.0 {
        return Err(Error::InvalidParameter(
            "|p(0)| must be at least 2 for region thresholds".into(),
        ));
    }
    let n = ctx.degree() as f64;
    let index = ctx.b_index();
    let thresholds = index
        .iter()
        .map(|&(k, _)| {
            let beta = ctx.roots()[k].value.norm();
            (t.ln() * n * beta.ln() / det.ln()).exp()
        })
        .collect();
    Ok(Region { t, index, thresholds })
}

/// Rows of the confluent Vandermonde matrix: entry `(r, i)` is the
/// `(j−1)`-st derivative of `X^i` at root `k`, for row `r = (k, j)`.
pub(crate) fn confluent_vandermonde(ctx: &ModulusContext) -> Vec<Vec<Complex64>> {
    let n = ctx.degree();
    ctx.b_index()
        .iter()
        .map(|&(k, j)| {
            let beta = ctx.roots()[k].value;
            let d = j as usize - 1;
            (0..n)
                .map(|i| {
                    if i < d {
                        Complex64::new(0.0, 0.0)
                    } else {
                        let falling: f64 = ((i - d + 1)..=i).map(|x| x as f64).product();
                        beta.powu((i - d) as u32) * falling
                    }
                })
                .collect()
        })
        .collect()
}

pub(crate) fn invert_complex(m: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let n = m.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut a: Vec<Vec<Complex64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { zero }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        let inv = a[col][col].inv();
        for v in a[col].iter_mut() {
            *v *= inv;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col];
                if f != zero {
                    for (v, p) in row.iter_mut().zip(&pivot) {
                        *v -= p * f;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Lattice points `c ∈ Z^n` whose B-vector satisfies `|B_r| ≤ bound_r`, in
/// lexicographic order of `(c_0, c_1, …)`.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    pub points: Vec<Vec<i64>>,
    /// Points accepted only thanks to the root-precision slack.
    pub boundary_band: usize,
}

/// Coefficient box half-widths from the inverse confluent Vandermonde matrix.
pub(crate) fn coefficient_box(ctx: &ModulusContext, bounds: &[f64]) -> Result<Vec<i64>> {
    let w = confluent_vandermonde(ctx);
    let winv = invert_complex(&w)
        .ok_or_else(|| Error::InvalidParameter("root-value matrix is singular".into()))?;
    winv.iter()
        .map(|row| {
            let b: f64 = row.iter().zip(bounds).map(|(c, t)| c.norm() * t).sum();
            let b = (b * BOX_INFLATION).floor();
            if b.is_finite() && b < 1e15 {
                Ok(b as i64)
            } else {
                Err(Error::Budget {
                    estimated: f64::INFINITY,
                    budget: 0,
                })
            }
        })
        .collect()
}

pub(crate) fn enumerate_bounded(
    ctx: &ModulusContext,
    bounds: &[f64],
    budget: u64,
) -> Result<Enumeration> {
    let n = ctx.degree();
    let half = coefficient_box(ctx, bounds).map_err(|e| match e {
        Error::Budget { estimated, .. } => Error::Budget { estimated, budget },
        other => other,
    })?;
    let volume: f64 = half.iter().map(|&h| (2 * h + 1) as f64).product();
    if volume > budget as f64 {
        return Err(Error::Budget {
            estimated: volume,
            budget,
        });
    }
    let w = confluent_vandermonde(ctx);

    let slices: Vec<Enumeration> = (-half[0]..=half[0])
        .into_par_iter()
        .map(|c0| {
            let mut out = Enumeration::default();
            let mut c: Vec<i64> = half.iter().map(|&h| -h).collect();
            c[0] = c0;
            loop {
                match classify(&w, &c, bounds) {
                    Membership::Inside => out.points.push(c.clone()),
                    Membership::Band => {
                        out.points.push(c.clone());
                        out.boundary_band += 1;
                    }
                    Membership::Outside => {}
                }
                // odometer over coordinates 1..n, last coordinate fastest
                let mut i = n;
                loop {
                    if i == 1 {
                        return out;
                    }
                    i -= 1;
                    if c[i] < half[i] {
                        c[i] += 1;
                        break;
                    }
                    c[i] = -half[i];
                }
            }
        })
        .collect();

    let mut all = Enumeration::default();
    for s in slices {
        all.boundary_band += s.boundary_band;
        all.points.extend(s.points);
    }
    Ok(all)
}

enum Membership {
    Inside,
    Band,
    Outside,
}

fn classify(w: &[Vec<Complex64>], c: &[i64], bounds: &[f64]) -> Membership {
    let mut band = false;
    for (row, &t) in w.iter().zip(bounds) {
        let v: Complex64 = row.iter().zip(c).map(|(x, &a)| x * a as f64).sum();
        let abs = v.norm();
        let slack = EPS_ROOT * (1.0 + abs);
        if abs > t + slack {
            return Membership::Outside;
        }
        if abs > t - slack {
            band = true;
        }
    }
    if band {
        Membership::Band
    } else {
        Membership::Inside
    }
}

/// The residues of `R(T)` in lexicographic coefficient order.
pub struct RegionEnumeration {
    pub residues: Vec<Residue>,
    pub boundary_band: usize,
}

pub fn enumerate_region(
    ctx: &Arc<ModulusContext>,
    region: &Region,
    budget: u64,
) -> Result<RegionEnumeration> {
    let e = enumerate_bounded(ctx, &region.thresholds, budget)?;
    let residues = e
        .points
        .iter()
        .map(|c| ctx.residue_from_i64s(c))
        .collect();
    Ok(RegionEnumeration {
        residues,
        boundary_band: e.boundary_band,
    })
}

/// Region points as raw coefficient vectors (no residue allocation).
pub fn enumerate_region_coeffs(
    ctx: &ModulusContext,
    region: &Region,
    budget: u64,
) -> Result<Enumeration> {
    enumerate_bounded(ctx, &region.thresholds, budget)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionCount {
    pub count: u64,
    /// `count / T^n`.
    pub normalized: f64,
    pub boundary_band: u64,
}

pub fn count_region(ctx: &ModulusContext, region: &Region, budget: u64) -> Result<RegionCount> {
    let e = enumerate_bounded(ctx, &region.thresholds, budget)?;
    let count = e.points.len() as u64;
    Ok(RegionCount {
        count,
        normalized: count as f64 / region.t.powi(ctx.degree() as i32),
        boundary_band: e.boundary_band as u64,
    })
}
