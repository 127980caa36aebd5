//! Simultaneous-iteration (Aberth–Ehrlich) root finder for squarefree integer
//! polynomials, followed by Newton polishing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{big_to_f64, IntPoly};

/// Relative residual target: `|f(β)| < ROOT_RESIDUAL · (1+|β|)^deg · ‖f‖∞`.
pub const ROOT_RESIDUAL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 2000;

/// All complex roots of a squarefree polynomial. Conjugate pairs are made
/// exactly conjugate and near-real roots are snapped to the real axis.
pub fn squarefree_roots(f: &IntPoly) -> Result<Vec<Complex64>> {
    let deg = match f.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(d) => d,
    };
    let coeffs: Vec<f64> = f.coeffs().iter().map(big_to_f64).collect();
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(c / lead, 0.0)).collect();

    if deg == 1 {
        return Ok(vec![-monic[0]]);
    }

    let mut roots = initial_guesses(&monic);
    let mut converged = false;
    let mut iterations = 0;
    for it in 0..MAX_ITERATIONS {
        iterations = it + 1;
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let z = roots[i];
            let (val, der) = eval_with_derivative(&monic, z);
            if val.norm() == 0.0 {
                continue;
            }
            let ratio = val / der;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| (z - roots[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                roots[i] = z - step;
                max_step = max_step.max(step.norm() / (1.0 + z.norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }

    for r in roots.iter_mut() {
        for _ in 0..4 {
            let (val, der) = eval_with_derivative(&monic, *r);
            if der.norm() == 0.0 {
                break;
            }
            let next = *r - val / der;
            if !next.is_finite() {
                break;
            }
            *r = next;
        }
    }

    let scale = coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs()));
    let worst = roots
        .iter()
        .map(|&r| f.eval_complex(r).norm() / ((1.0 + r.norm()).powi(deg as i32) * scale))
        .fold(0.0f64, f64::max);
    if !worst.is_finite() || worst >= ROOT_RESIDUAL {
        return Err(Error::RootsNotConverged {
            iterations: if converged { iterations } else { MAX_ITERATIONS },
            residual: worst,
        });
    }
    Ok(symmetrize(roots))
}

fn eval_with_derivative(monic: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut val = Complex64::new(0.0, 0.0);
    let mut der = Complex64::new(0.0, 0.0);
    for c in monic.iter().rev() {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

/// Points on a circle of radius given by the Cauchy bound, rotated off the
/// real axis so conjugate pairs separate.
fn initial_guesses(monic: &[Complex64]) -> Vec<Complex64> {
    let deg = monic.len() - 1;
    let bound = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let radius = bound.min(1e6) * 0.5 + 0.5;
    (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

fn symmetrize(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    let tol = 1e-9;
    let n = roots.len();
    let mut used = vec![false; n];
    let mut out = Vec::with_capacity(n);
    roots.sort_by(|a, b| b.im.total_cmp(&a.im));
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        let r = roots[i];
        if r.im.abs() <= tol * (1.0 + r.norm()) {
            out.push(Complex64::new(r.re, 0.0));
            continue;
        }
        let partner = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                (roots[a] - r.conj())
                    .norm()
                    .total_cmp(&(roots[b] - r.conj()).norm())
            });
        match partner {
            Some(j) if (roots[j] - r.conj()).norm() <= 1e-6 * (1.0 + r.norm()) => {
                used[j] = true;
                let re = 0.5 * (r.re + roots[j].re);
                let im = 0.5 * (r.im - roots[j].im).abs();
                out.push(Complex64::new(re, im));
                out.push(Complex64::new(re, -im));
            }
            _ => out.push(r),
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(b.im.total_cmp(&a.im)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-10
    }

    #[test]
    fn quadratic_gaussian_base() {
        let r = squarefree_roots(&IntPoly::from_i64s(&[2, 2, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert!(close(r[0], Complex64::new(-1.0, 1.0)));
        assert!(close(r[1], Complex64::new(-1.0, -1.0)));
        assert_eq!(r[0], r[1].conj());
    }

    #[test]
    fn linear() {
        let r = squarefree_roots(&IntPoly::from_i64s(&[2, 1])).unwrap();
        assert_eq!(r, vec![Complex64::new(-2.0, 0.0)]);
    }

    #[test]
    fn cubic_mixed() {
        // (X+2)(X^2+2X+2)
        let r = squarefree_roots(&IntPoly::from_i64s(&[4, 6, 4, 1])).unwrap();
        assert_eq!(r.len(), 3);
        assert!(close(r[0], Complex64::new(-2.0, 0.0)));
        assert_eq!(r[0].im, 0.0);
        assert!(close(r[1], Complex64::new(-1.0, 1.0)));
    }

    #[test]
    fn higher_degree_residuals() {
        let f = IntPoly::from_i64s(&[3, -1, 4, 1, -5, 9, 1]);
        let r = squarefree_roots(&f).unwrap();
        assert_eq!(r.len(), 6);
        for z in r {
            assert!(f.eval_complex(z).norm() < 1e-8 * (1.0 + z.norm()).powi(6));
        }
    }
}
