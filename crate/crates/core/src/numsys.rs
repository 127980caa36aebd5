//! Backward division, digit expansions and the number-system decision
//! procedure.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modulus::{ModulusContext, Residue, EPS_ROOT};
use crate::poly::IntPoly;
use crate::spectra::{enumerate_bounded, house_and_length, DEFAULT_BUDGET};

pub const DEFAULT_SEARCH_SLACK: f64 = 0.05;

/// Orbits longer than this inside the attractor box are reported as
/// inconclusive rather than walked forever.
const ORBIT_STEP_LIMIT: usize = 1_000_000;

/// A pair `(p, N)` whose digit set is a complete residue system modulo
/// `p(0)` containing zero.
#[derive(Clone, Debug)]
pub struct NumberSystem {
    ctx: Arc<ModulusContext>,
    digits: Vec<i64>,
    by_class: HashMap<BigInt, i64>,
    max_digit_abs: i64,
}

impl NumberSystem {
    pub fn new(ctx: Arc<ModulusContext>, digits: Vec<i64>) -> Result<Self> {
        let conds = digit_conditions(&ctx, &digits);
        if let Some(c) = conds.iter().find(|c| !c.passed) {
            return Err(Error::InvalidDigits(c.name.to_string()));
        }
        let modulus = ctx.abs_det().clone();
        let by_class = digits
            .iter()
            .map(|&d| (BigInt::from(d).mod_floor(&modulus), d))
            .collect();
        let max_digit_abs = digits.iter().map(|d| d.abs()).max().unwrap_or(0);
        Ok(NumberSystem {
            ctx,
            digits,
            by_class,
            max_digit_abs,
        })
    }

    pub fn from_i64s(p: &[i64], digits: &[i64]) -> Result<Self> {
        Self::new(ModulusContext::from_i64s(p)?, digits.to_vec())
    }

    /// The canonical digit set `{0, 1, …, |p(0)|−1}`.
    pub fn canonical(ctx: Arc<ModulusContext>) -> Result<Self> {
        let m = ctx
            .abs_det()
            .to_i64()
            .ok_or_else(|| Error::InvalidDigits("|p(0)| too large".into()))?;
        Self::new(ctx, (0..m).collect())
    }

    pub fn ctx(&self) -> &Arc<ModulusContext> {
        &self.ctx
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn max_digit_abs(&self) -> i64 {
        self.max_digit_abs
    }

    pub fn contains_digit(&self, d: i64) -> bool {
        self.digits.contains(&d)
    }

    pub fn element(&self, coeffs: &[i64]) -> Residue {
        self.ctx.residue_from_i64s(coeffs)
    }

    /// One step of the backward division map: the digit `a ≡ g(0) (mod p(0))`
    /// and `V(g) = (g − q·p − a)/X` with `q = (g(0) − a)/p(0)`.
    pub fn backward_divide(&self, g: &Residue) -> (i64, Residue) {
        let (a, _, next) = self.backward_divide_full(g.rep());
        (a, self.ctx.reduce(&next))
    }

    /// Backward division on a raw representative of degree `< n`, also
    /// returning the quotient `q`.
    pub fn backward_divide_full(&self, g: &IntPoly) -> (i64, BigInt, IntPoly) {
        let n = self.ctx.degree();
        let p = self.ctx.modulus();
        let g0 = g.coeff(0);
        let a = self.by_class[&g0.mod_floor(self.ctx.abs_det())];
        let q = (&g0 - a) / p.coeff(0);
        let next: Vec<BigInt> = (0..n)
            .map(|i| g.coeff(i + 1) - &q * p.coeff(i + 1))
            .collect();
        (a, q, IntPoly::new(next))
    }

    fn default_cap(&self, g: &Residue) -> usize {
        let m = house_and_length(g).map(|(_, m)| m).unwrap_or(0.0);
        let m = if m.is_finite() { m } else { 1e6 };
        64 * (self.ctx.degree() + m.ceil() as usize + 16)
    }

    /// Digit expansion of `g`. `step_cap = None` uses `64·(n + M(g) + 16)`.
    pub fn expand(&self, g: &Residue, step_cap: Option<usize>) -> Result<Expansion> {
        let cap = step_cap.unwrap_or_else(|| self.default_cap(g));
        let mut digits = Vec::new();
        let mut seen: HashSet<IntPoly> = HashSet::new();
        let mut state = g.rep().clone();
        while !state.is_zero() {
            if digits.len() >= cap {
                return Err(Error::StepCap {
                    cap,
                    state: coeff_strings(&state),
                });
            }
            if !seen.insert(state.clone()) {
                return Err(Error::Cycle {
                    state: coeff_strings(&state),
                    steps: digits.len(),
                });
            }
            let (a, _, next) = self.backward_divide_full(&state);
            digits.push(a);
            state = next;
        }
        Ok(Expansion { digits })
    }

    /// `Σ a_h X^h` reduced modulo `p`.
    pub fn evaluate(&self, e: &Expansion) -> Result<Residue> {
        if let Some(&d) = e.digits.iter().find(|&&d| !self.contains_digit(d)) {
            return Err(Error::DigitNotInSet(d));
        }
        Ok(self.ctx.reduce(&IntPoly::from_i64s(&e.digits)))
    }

    /// `V^k(g)` together with the `k` digits produced, lowest first.
    pub fn iterate(&self, g: &IntPoly, k: usize) -> (IntPoly, Vec<i64>) {
        let mut state = g.clone();
        let mut digits = Vec::with_capacity(k);
        for _ in 0..k {
            let (a, _, next) = self.backward_divide_full(&state);
            digits.push(a);
            state = next;
        }
        (state, digits)
    }
}

fn coeff_strings(p: &IntPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

/// Digits `a_0 … a_ℓ`; the expansion of zero is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Expansion {
    pub digits: Vec<i64>,
}

impl Expansion {
    /// `ℓ`, the index of the leading digit; `None` for the empty expansion.
    pub fn length(&self) -> Option<usize> {
        self.digits.len().checked_sub(1)
    }

    /// Digit at position `h`, zero beyond the leading digit.
    pub fn digit(&self, h: usize) -> i64 {
        self.digits.get(h).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub failed_condition: Option<String>,
    pub necessary_conditions: Vec<Condition>,
    pub witness_cycle: Vec<Vec<i64>>,
    pub states_explored: u64,
    /// States whose attractor membership fell inside the root-precision band.
    pub boundary_band: u64,
}

impl VerifyReport {
    pub fn inconclusive(conditions: Vec<Condition>, reason: String) -> Self {
        VerifyReport {
            verdict: Verdict::Inconclusive,
            failed_condition: Some(reason),
            necessary_conditions: conditions,
            witness_cycle: Vec::new(),
            states_explored: 0,
            boundary_band: 0,
        }
    }
}

fn digit_conditions(ctx: &ModulusContext, digits: &[i64]) -> Vec<Condition> {
    let modulus = ctx.abs_det();
    let mut classes = HashSet::new();
    let distinct_classes = !modulus.is_zero()
        && digits
            .iter()
            .all(|&d| classes.insert(BigInt::from(d).mod_floor(modulus)));
    let complete = distinct_classes && BigInt::from(digits.len()) == *modulus;
    vec![
        Condition {
            name: "zero_digit",
            passed: digits.contains(&0),
        },
        Condition {
            name: "complete_residue_system",
            passed: complete,
        },
    ]
}

/// Necessary conditions: zero is a digit, the digits form a complete residue
/// system modulo `p(0)`, and every root lies strictly outside the unit circle.
pub fn necessary_conditions(ctx: &ModulusContext, digits: &[i64]) -> Vec<Condition> {
    let mut conds = digit_conditions(ctx, digits);
    conds.push(Condition {
        name: "roots_outside_unit_circle",
        passed: ctx
            .roots()
            .iter()
            .all(|r| r.value.norm() > 1.0 + EPS_ROOT),
    });
    conds
}

/// Invariant attractor radii `R_jk = N̄·(j−1)!/(|β_k|−1)^j`, one per B-index
/// entry.
pub fn attractor_radii(ns: &NumberSystem) -> Vec<f64> {
    let ctx = ns.ctx();
    let nbar = ns.max_digit_abs() as f64;
    ctx.b_index()
        .iter()
        .map(|&(k, j)| {
            let beta = ctx.roots()[k].value.norm();
            let fact: f64 = (1..j).map(|x| x as f64).product();
            nbar * fact / (beta - 1.0).powi(j as i32)
        })
        .collect()
}

/// Decide whether `(p, N)` is a number system: check the necessary
/// conditions, then walk the `V`-orbit of every residue inside the inflated
/// attractor radii. Every periodic orbit of `V` lies inside those radii, so
/// the verdict is yes iff every such orbit reaches zero.
pub fn verify_number_system(
    p: &IntPoly,
    digits: &[i64],
    search_slack: f64,
    budget: u64,
) -> Result<VerifyReport> {
    let ctx = ModulusContext::new(p.clone())?;
    let conds = necessary_conditions(&ctx, digits);
    if let Some(failed) = conds.iter().find(|c| !c.passed) {
        return Ok(VerifyReport {
            verdict: Verdict::No,
            failed_condition: Some(failed.name.to_string()),
            necessary_conditions: conds,
            witness_cycle: Vec::new(),
            states_explored: 0,
            boundary_band: 0,
        });
    }
    let ns = NumberSystem::new(ctx, digits.to_vec())?;
    let radii: Vec<f64> = attractor_radii(&ns)
        .into_iter()
        .map(|r| r * (1.0 + search_slack))
        .collect();
    let box_points = enumerate_bounded(ns.ctx(), &radii, budget)?;

    let mut terminating: HashSet<IntPoly> = HashSet::new();
    terminating.insert(IntPoly::zero());
    let mut explored = 0u64;
    for start in &box_points.points {
        let mut path: Vec<IntPoly> = Vec::new();
        let mut on_path: HashMap<IntPoly, usize> = HashMap::new();
        let mut state = IntPoly::from_i64s(start);
        loop {
            if terminating.contains(&state) {
                terminating.extend(path.drain(..));
                break;
            }
            if let Some(&pos) = on_path.get(&state) {
                let witness = path[pos..]
                    .iter()
                    .map(|s| {
                        s.padded(ns.ctx().degree())
                            .iter()
                            .map(|c| c.to_i64().unwrap_or(i64::MAX))
                            .collect()
                    })
                    .collect();
                return Ok(VerifyReport {
                    verdict: Verdict::No,
                    failed_condition: None,
                    necessary_conditions: conds,
                    witness_cycle: witness,
                    states_explored: explored,
                    boundary_band: box_points.boundary_band as u64,
                });
            }
            if path.len() >= ORBIT_STEP_LIMIT {
                return Err(Error::Budget {
                    estimated: path.len() as f64,
                    budget: ORBIT_STEP_LIMIT as u64,
                });
            }
            explored += 1;
            on_path.insert(state.clone(), path.len());
            let (_, _, next) = ns.backward_divide_full(&state);
            path.push(state);
            state = next;
        }
    }
    Ok(VerifyReport {
        verdict: Verdict::Yes,
        failed_condition: None,
        necessary_conditions: conds,
        witness_cycle: Vec::new(),
        states_explored: explored,
        boundary_band: box_points.boundary_band as u64,
    })
}

/// [`verify_number_system`] with the default slack and budget.
pub fn verify(p: &IntPoly, digits: &[i64]) -> Result<VerifyReport> {
    verify_number_system(p, digits, DEFAULT_SEARCH_SLACK, DEFAULT_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> NumberSystem {
        NumberSystem::from_i64s(&[2, 2, 1], &[0, 1]).unwrap()
    }

    fn neg2() -> NumberSystem {
        NumberSystem::from_i64s(&[2, 1], &[0, 1]).unwrap()
    }

    #[test]
    fn backward_divide_examples() {
        let ns = gauss();
        let (a, next) = ns.backward_divide(&ns.element(&[0]));
        assert_eq!((a, next.is_zero()), (0, true));

        let (a, next) = ns.backward_divide(&ns.element(&[-1]));
        assert_eq!(a, 1);
        assert_eq!(next, ns.element(&[2, 1]));
        // −1 = 1 + (−1)(X²+2X+2) + X(X+2)
        let (_, q, _) = ns.backward_divide_full(&IntPoly::from_i64s(&[-1]));
        assert_eq!(q, BigInt::from(-1));

        let b = neg2();
        let (a, next) = b.backward_divide(&b.element(&[7]));
        assert_eq!((a, next), (1, b.element(&[-3])));
    }

    #[test]
    fn expand_examples() {
        let ns = gauss();
        assert_eq!(ns.expand(&ns.element(&[-1]), None).unwrap().digits, vec![1, 0, 1, 1, 1]);
        assert_eq!(ns.expand(&ns.element(&[]), None).unwrap().digits, Vec::<i64>::new());
        let b = neg2();
        assert_eq!(b.expand(&b.element(&[6]), None).unwrap().digits, vec![0, 1, 0, 1, 1]);
        let e = b.expand(&b.element(&[64]), None).unwrap();
        assert_eq!(e.digits, vec![0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(e.length(), Some(6));
    }

    #[test]
    fn expand_detects_cycles_and_caps() {
        let ns = NumberSystem::from_i64s(&[-2, 1], &[0, 1]).unwrap();
        assert!(matches!(
            ns.expand(&ns.element(&[-1]), None),
            Err(Error::Cycle { .. })
        ));
        let g = gauss();
        assert!(matches!(
            g.expand(&g.element(&[-1]), Some(3)),
            Err(Error::StepCap { cap: 3, .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let ns = gauss();
        let e = Expansion { digits: vec![1, 0, 1, 1, 1] };
        assert_eq!(ns.evaluate(&e).unwrap(), ns.element(&[-1]));
        assert!(ns.evaluate(&Expansion { digits: vec![] }).unwrap().is_zero());
        for &a in ns.digits() {
            assert_eq!(ns.evaluate(&Expansion { digits: vec![a] }).unwrap(), ns.element(&[a]));
        }
        assert_eq!(
            ns.evaluate(&Expansion { digits: vec![2] }),
            Err(Error::DigitNotInSet(2))
        );
    }

    #[test]
    fn digit_set_validation() {
        let ctx = ModulusContext::from_i64s(&[2, 2, 1]).unwrap();
        assert!(NumberSystem::new(ctx.clone(), vec![1, 2]).is_err());
        assert!(NumberSystem::new(ctx.clone(), vec![0, 2]).is_err());
        assert!(NumberSystem::new(ctx.clone(), vec![0, 1, 3]).is_err());
        assert!(NumberSystem::new(ctx, vec![0, -1]).is_ok());
    }

    #[test]
    fn verify_examples() {
        let v = verify(&IntPoly::from_i64s(&[2, 1]), &[0, 1]).unwrap();
        assert_eq!(v.verdict, Verdict::Yes);

        let v = verify(&IntPoly::from_i64s(&[-2, 1]), &[0, 1]).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert_eq!(v.witness_cycle, vec![vec![-1]]);

        let v = verify(&IntPoly::from_i64s(&[2, 2, 1]), &[0, 1]).unwrap();
        assert_eq!(v.verdict, Verdict::Yes);

        let v = verify(&IntPoly::from_i64s(&[2, -2, 1]), &[0, 1]).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert!(!v.witness_cycle.is_empty());
    }

    #[test]
    fn verify_reports_failed_conditions() {
        let v = verify(&IntPoly::from_i64s(&[2, 1]), &[1, 2]).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert_eq!(v.failed_condition.as_deref(), Some("zero_digit"));
        // X^2 + 1 has roots on the unit circle
        let v = verify(&IntPoly::from_i64s(&[1, 0, 1]), &[0]).unwrap();
        assert_eq!(v.failed_condition.as_deref(), Some("roots_outside_unit_circle"));
    }

    #[test]
    fn radii_values() {
        let r = attractor_radii(&gauss());
        for v in r {
            assert!((v - 1.0 / (2f64.sqrt() - 1.0)).abs() < 1e-12);
        }
    }
}
