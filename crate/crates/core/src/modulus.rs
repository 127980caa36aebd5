//! The quotient ring `Z[X]/(p)`: modulus context with cached spectral data,
//! canonical residues, companion matrix, norm and trace.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{squarefree_decompose, IntPoly};
use crate::roots::squarefree_roots;

/// Safety slack applied to every comparison against a root-derived bound.
pub const EPS_ROOT: f64 = 1e-9;

/// A root of `p` together with its multiplicity and the index of the
/// squarefree part it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: u32,
    pub part: usize,
}

#[derive(Debug)]
pub struct ModulusContext {
    p: IntPoly,
    n: usize,
    squarefree_parts: Vec<(IntPoly, u32)>,
    roots: Vec<Root>,
    companion: Vec<Vec<BigInt>>,
    abs_det: BigInt,
}

impl ModulusContext {
    pub fn new(p: IntPoly) -> Result<Arc<Self>> {
        let n = match p.degree() {
            None | Some(0) => return Err(Error::Constant),
            Some(d) => d,
        };
        if !p.is_monic() {
            return Err(Error::NotMonic(p.to_string()));
        }
        let squarefree_parts = squarefree_decompose(&p)?;
        let mut roots = Vec::with_capacity(n);
        for (i, (part, m)) in squarefree_parts.iter().enumerate() {
            for value in squarefree_roots(part)? {
                roots.push(Root {
                    value,
                    multiplicity: *m,
                    part: i,
                });
            }
        }
        let companion = companion_matrix(&p)?;
        let abs_det = p.coeff(0).abs();
        Ok(Arc::new(ModulusContext {
            p,
            n,
            squarefree_parts,
            roots,
            companion,
            abs_det,
        }))
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Arc<Self>> {
        Self::new(IntPoly::from_i64s(coeffs))
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn squarefree_parts(&self) -> &[(IntPoly, u32)] {
        &self.squarefree_parts
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn companion(&self) -> &[Vec<BigInt>] {
        &self.companion
    }

    /// `|p(0)| = |det B|`.
    pub fn abs_det(&self) -> &BigInt {
        &self.abs_det
    }

    /// `p(0)` with its sign.
    pub fn constant_term(&self) -> BigInt {
        self.p.coeff(0)
    }

    /// The `(root index, derivative order j ≥ 1)` pairs indexing a B-vector,
    /// `n` entries in total.
    pub fn b_index(&self) -> Vec<(usize, u32)> {
        self.roots
            .iter()
            .enumerate()
            .flat_map(|(k, r)| (1..=r.multiplicity).map(move |j| (k, j)))
            .collect()
    }

    pub fn reduce(self: &Arc<Self>, g: &IntPoly) -> Residue {
        let rep = g
            .div_rem_monic(&self.p)
            .expect("modulus is monic by construction")
            .1;
        Residue {
            rep,
            ctx: Arc::clone(self),
        }
    }

    pub fn residue_from_i64s(self: &Arc<Self>, coeffs: &[i64]) -> Residue {
        self.reduce(&IntPoly::from_i64s(coeffs))
    }

    pub fn zero(self: &Arc<Self>) -> Residue {
        Residue {
            rep: IntPoly::zero(),
            ctx: Arc::clone(self),
        }
    }

    pub fn one(self: &Arc<Self>) -> Residue {
        self.reduce(&IntPoly::one())
    }

    /// The class of `X`.
    pub fn x(self: &Arc<Self>) -> Residue {
        self.reduce(&IntPoly::monomial(BigInt::one(), 1))
    }

    fn same(&self, other: &ModulusContext) -> bool {
        std::ptr::eq(self, other) || self.p == other.p
    }
}

/// Companion matrix: ones on the subdiagonal, last column `−b_0 … −b_{n−1}`.
pub fn companion_matrix(p: &IntPoly) -> Result<Vec<Vec<BigInt>>> {
    if !p.is_monic() {
        return Err(Error::NotMonic(p.to_string()));
    }
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Err(Error::Constant);
    }
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 1..n {
        m[i][i - 1] = BigInt::one();
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[n - 1] = -p.coeff(i);
    }
    Ok(m)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Canonical representative of a class in `Z[X]/(p)`, degree `< n`.
#[derive(Clone)]
pub struct Residue {
    rep: IntPoly,
    ctx: Arc<ModulusContext>,
}

impl Residue {
    pub fn rep(&self) -> &IntPoly {
        &self.rep
    }

    pub fn ctx(&self) -> &Arc<ModulusContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Coefficient vector of length `n`.
    pub fn coeffs(&self) -> Vec<BigInt> {
        self.rep.padded(self.ctx.n)
    }

    fn check(&self, other: &Residue) -> Result<()> {
        if self.ctx.same(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(Residue {
            rep: &self.rep + &other.rep,
            ctx: Arc::clone(&self.ctx),
        })
    }

    pub fn sub(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(Residue {
            rep: &self.rep - &other.rep,
            ctx: Arc::clone(&self.ctx),
        })
    }

    pub fn mul(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(self.ctx.reduce(&(&self.rep * &other.rep)))
    }

    pub fn neg(&self) -> Residue {
        Residue {
            rep: -&self.rep,
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn pow(&self, e: u32) -> Residue {
        let mut acc = self.ctx.one();
        for _ in 0..e {
            acc = self.ctx.reduce(&(&acc.rep * &self.rep));
        }
        acc
    }

    /// Integer matrix of multiplication by `self` in the basis `1, X, …, X^{n−1}`
    /// (column `j` holds the coefficients of `self·X^j`).
    pub fn multiplication_matrix(&self) -> Vec<Vec<BigInt>> {
        let n = self.ctx.n;
        let x = self.ctx.x();
        let mut col = self.clone();
        let cols: Vec<Vec<BigInt>> = (0..n)
            .map(|_| {
                let c = col.coeffs();
                col = self.ctx.reduce(&(&col.rep * &x.rep));
                c
            })
            .collect();
        (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    /// `(N(r), Tr(r))` as determinant and trace of the multiplication matrix.
    pub fn norm_trace(&self) -> (BigInt, BigInt) {
        let m = self.multiplication_matrix();
        let trace = (0..m.len()).map(|i| m[i][i].clone()).sum();
        (determinant(&m), trace)
    }
}

impl PartialEq for Residue {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.rep == other.rep
    }
}

impl Eq for Residue {}

impl std::hash::Hash for Residue {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rep.hash(state);
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Residue({} mod {})", self.rep, self.ctx.p)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}
