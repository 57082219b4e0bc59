//! Matrices, vectors and polynomials over `Q_p`.
//!
//! Norms follow the sup convention: the norm of a matrix is the maximum
//! absolute value of its entries, an exact power of `p`. The characteristic
//! polynomial is computed by the division-free Berkowitz algorithm so no
//! precision is lost; eigenvalues in `Q_p` are obtained by Hensel lifting
//! simple residue roots, or verified from caller-supplied hints.

use thiserror::Error;

use crate::padic::{AbsValue, PadicError, PadicNumber, PrecisionContext};
use crate::residue::{ResidueElement, ResidueMatrix, ResiduePoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("context mismatch")]
    ContextMismatch(#[from] PadicError),
    #[error("matrix has an entry of negative valuation, reduction undefined")]
    NotIntegral,
    #[error("matrix is zero to the working precision")]
    ZeroMatrix,
    #[error("matrix is singular to the working precision")]
    SingularToPrecision,
    #[error("residue {0} is not a root of the reduced polynomial")]
    NotARoot(u64),
    #[error("residue {0} is not a simple root: the derivative vanishes mod p")]
    NotSimpleRoot(u64),
    #[error("eigenvalue hints failed verification: {0}")]
    HintMismatch(String),
}

/// Vector in `Q_p^n` with the sup norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicVector {
    entries: Vec<PadicNumber>,
}

impl PadicVector {
    pub fn new(entries: Vec<PadicNumber>) -> Self {
        assert!(!entries.is_empty());
        let p = entries[0].prime();
        assert!(entries.iter().all(|e| e.prime() == p), "context mismatch");
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[PadicNumber] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &PadicNumber {
        &self.entries[i]
    }

    /// `max_i |x_i|`, an exact power of `p` or a precision bound.
    pub fn sup_norm(&self) -> AbsValue {
        sup_of_abs(self.entries.iter().map(|e| e.abs_value()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.entries.iter().all(|e| e.is_precision_zero())
    }
}

pub(crate) fn sup_of_abs<I: Iterator<Item = AbsValue>>(iter: I) -> AbsValue {
    let mut exact: Option<i64> = None;
    let mut bound: Option<i64> = None;
    for a in iter {
        match a {
            AbsValue::Exact(e) => exact = Some(exact.map_or(e, |x| x.max(e))),
            AbsValue::AtMost(e) => bound = Some(bound.map_or(e, |x| x.max(e))),
        }
    }
    match (exact, bound) {
        (Some(e), Some(b)) if e >= b => AbsValue::Exact(e),
        (Some(_), Some(b)) => AbsValue::AtMost(b),
        (Some(e), None) => AbsValue::Exact(e),
        (None, Some(b)) => AbsValue::AtMost(b),
        (None, None) => panic!("sup of empty set"),
    }
}

/// Square matrix over `Q_p`, row-major, all entries in one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicMatrix {
    prime: u64,
    n: usize,
    entries: Vec<PadicNumber>,
}

impl PadicMatrix {
    pub fn new(n: usize, entries: Vec<PadicNumber>) -> Self {
        assert!(n >= 1);
        assert_eq!(entries.len(), n * n);
        let p = entries[0].prime();
        assert!(entries.iter().all(|e| e.prime() == p), "context mismatch");
        Self {
            prime: p,
            n,
            entries,
        }
    }

    pub fn zero(n: usize, ctx: &PrecisionContext) -> Self {
        Self::new(n, vec![PadicNumber::zero(ctx); n * n])
    }

    pub fn identity(n: usize, ctx: &PrecisionContext) -> Self {
        let mut m = Self::zero(n, ctx);
        let one = PadicNumber::one(ctx);
        for i in 0..n {
            m.set(i, i, one.clone());
        }
        m
    }

    pub fn diagonal(diag: &[PadicNumber], ctx: &PrecisionContext) -> Self {
        let mut m = Self::zero(diag.len(), ctx);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_integer_entries(n: usize, grid: &[i64], ctx: &PrecisionContext) -> Self {
        let entries = grid
            .iter()
            .map(|&v| PadicNumber::from_integer(v, ctx))
            .collect();
        Self::new(n, entries)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicNumber {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PadicNumber) {
        assert_eq!(v.prime(), self.prime, "context mismatch");
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[PadicNumber] {
        &self.entries
    }

    /// `max_{i,j} |a_ij|`, the Serre sup norm, as an exact power of `p`.
    pub fn sup_norm(&self) -> AbsValue {
        sup_of_abs(self.entries.iter().map(|e| e.abs_value()))
    }

    /// Scaling `lambda0` with `|lambda0| = p^{-m}` (so `‖lambda0 * A‖ = 1`
    /// when `‖A‖ = p^m`), and the normalized matrix.
    pub fn normalize(&self, ctx: &PrecisionContext) -> Result<(PadicNumber, Self), LinalgError> {
        match self.sup_norm() {
            AbsValue::Exact(m) => {
                let lambda0 = power_of_p(m, ctx)?;
                Ok((lambda0.clone(), self.scale(&lambda0)))
            }
            AbsValue::AtMost(_) => Err(LinalgError::ZeroMatrix),
        }
    }

    /// Entrywise reduction to `F_p`; requires every entry integral.
    pub fn reduce(&self) -> Result<ResidueMatrix, LinalgError> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for e in &self.entries {
            let r = e.residue().map_err(|err| match err {
                PadicError::NotIntegral => LinalgError::NotIntegral,
                other => LinalgError::ContextMismatch(other),
            })?;
            out.push(r.value());
        }
        Ok(ResidueMatrix::new(self.prime, self.n, out))
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.compat(other)?;
        Ok(Self::new(
            self.n,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.compat(other)?;
        Ok(Self::new(
            self.n,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        self.compat(other)?;
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.get(i, 0).mul(other.get(0, j));
                for k in 1..n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.push(acc);
            }
        }
        Ok(Self::new(n, out))
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        assert_eq!(c.prime(), self.prime, "context mismatch");
        Self::new(self.n, self.entries.iter().map(|e| c.mul(e)).collect())
    }

    pub fn apply(&self, x: &PadicVector) -> Result<PadicVector, LinalgError> {
        if x.dim() != self.n {
            return Err(LinalgError::DimensionMismatch(self.n, x.dim()));
        }
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut acc = self.get(i, 0).mul(x.get(0));
            for k in 1..self.n {
                acc = acc.add(&self.get(i, k).mul(x.get(k)));
            }
            out.push(acc);
        }
        Ok(PadicVector::new(out))
    }

    fn compat(&self, other: &Self) -> Result<(), LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch(self.n, other.n));
        }
        if self.prime != other.prime {
            return Err(LinalgError::ContextMismatch(PadicError::ContextMismatch(
                self.prime,
                other.prime,
            )));
        }
        Ok(())
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.entries.iter().all(|e| e.is_precision_zero())
    }

    /// True when every entry of `self - other` is indistinguishable from 0.
    pub fn eq_to_precision(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero_to_precision()).unwrap_or(false)
    }

    /// All entries strictly below the diagonal zero to precision.
    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_precision_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_precision_zero()))
    }

    /// Monic `det(xI - A)` by the Berkowitz algorithm (no divisions).
    pub fn charpoly(&self) -> PadicPoly {
        let n = self.n;
        let one = clone_one(self.get(0, 0));
        // Coefficients descending, leading first.
        let mut c: Vec<PadicNumber> = vec![one.clone(), self.get(0, 0).neg()];
        for r in 1..n {
            let d = self.get(r, r);
            let row: Vec<&PadicNumber> = (0..r).map(|j| self.get(r, j)).collect();
            let col: Vec<PadicNumber> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let mut t: Vec<PadicNumber> = Vec::with_capacity(r + 2);
            t.push(one.clone());
            t.push(d.neg());
            let mut w = col.clone();
            for _ in 2..r + 2 {
                let mut dot = row[0].mul(&w[0]);
                for j in 1..r {
                    dot = dot.add(&row[j].mul(&w[j]));
                }
                t.push(dot.neg());
                let mut nw = Vec::with_capacity(r);
                for i in 0..r {
                    let mut acc = self.get(i, 0).mul(&w[0]);
                    for j in 1..r {
                        acc = acc.add(&self.get(i, j).mul(&w[j]));
                    }
                    nw.push(acc);
                }
                w = nw;
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc: Option<PadicNumber> = None;
                for (j, cj) in c.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        let term = t[i - j].mul(cj);
                        acc = Some(match acc {
                            Some(a) => a.add(&term),
                            None => term,
                        });
                    }
                }
                next.push(acc.expect("toeplitz product nonempty"));
            }
            c = next;
        }
        c.reverse();
        PadicPoly::new(c)
    }

    /// Inverse by exact Gauss-Jordan elimination with maximal-norm pivoting
    /// (first row achieving the maximal norm wins ties). The result records
    /// its own guaranteed precision through the entry arithmetic.
    pub fn inverse(&self, ctx: &PrecisionContext) -> Result<Self, LinalgError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n, ctx);
        for col in 0..n {
            // Pick the row with the largest |entry| in this column.
            let mut best: Option<(usize, i64)> = None;
            for row in col..n {
                if let AbsValue::Exact(e) = a.get(row, col).abs_value() {
                    if best.map_or(true, |(_, be)| e > be) {
                        best = Some((row, e));
                    }
                }
            }
            let (prow, _) = best.ok_or(LinalgError::SingularToPrecision)?;
            if prow != col {
                for j in 0..n {
                    let t = a.get(prow, j).clone();
                    a.set(prow, j, a.get(col, j).clone());
                    a.set(col, j, t);
                    let t = inv.get(prow, j).clone();
                    inv.set(prow, j, inv.get(col, j).clone());
                    inv.set(col, j, t);
                }
            }
            let pivot_inv = a
                .get(col, col)
                .inv()
                .map_err(|_| LinalgError::SingularToPrecision)?;
            for j in 0..n {
                a.set(col, j, a.get(col, j).mul(&pivot_inv));
                inv.set(col, j, inv.get(col, j).mul(&pivot_inv));
            }
            for row in 0..n {
                if row == col || a.get(row, col).is_precision_zero() {
                    continue;
                }
                let f = a.get(row, col).clone();
                for j in 0..n {
                    a.set(row, j, a.get(row, j).sub(&f.mul(a.get(col, j))));
                    inv.set(row, j, inv.get(row, j).sub(&f.mul(inv.get(col, j))));
                }
            }
        }
        Ok(inv)
    }
}

fn clone_one(model: &PadicNumber) -> PadicNumber {
    let ctx = PrecisionContext::new(model.prime(), model.precision().max(1))
        .expect("prime validated at construction");
    PadicNumber::one(&ctx)
}

/// `p^e` as a PadicNumber in the given context.
pub fn power_of_p(e: i64, ctx: &PrecisionContext) -> Result<PadicNumber, LinalgError> {
    if e >= 0 {
        let mut n = num_bigint::BigInt::from(1);
        for _ in 0..e {
            n *= ctx.prime();
        }
        Ok(PadicNumber::from_bigint(&n, ctx))
    } else {
        let mut d = num_bigint::BigInt::from(1);
        for _ in 0..(-e) {
            d *= ctx.prime();
        }
        PadicNumber::from_big_rational(&num_bigint::BigInt::from(1), &d, ctx)
            .map_err(LinalgError::ContextMismatch)
    }
}

/// Polynomial over `Q_p`, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicPoly {
    coeffs: Vec<PadicNumber>,
}

impl PadicPoly {
    pub fn new(coeffs: Vec<PadicNumber>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn from_roots(roots: &[PadicNumber], ctx: &PrecisionContext) -> Self {
        let mut coeffs = vec![PadicNumber::one(ctx)];
        for r in roots {
            // Multiply by (x - r).
            let mut next = vec![PadicNumber::zero(ctx); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].add(&c.mul(&r.neg()));
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &PadicNumber) -> PadicNumber {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn eval_matrix(
        &self,
        m: &PadicMatrix,
        ctx: &PrecisionContext,
    ) -> Result<PadicMatrix, LinalgError> {
        let n = m.dim();
        let mut acc = PadicMatrix::identity(n, ctx).scale(self.coeffs.last().expect("nonempty"));
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(m)?;
            acc = acc.add(&PadicMatrix::identity(n, ctx).scale(c))?;
        }
        Ok(acc)
    }

    pub fn derivative(&self, ctx: &PrecisionContext) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![PadicNumber::zero(ctx)]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&PadicNumber::from_integer(i as i64, ctx)))
            .collect();
        Self::new(coeffs)
    }

    /// Coefficientwise reduction mod p; requires integral coefficients.
    pub fn reduce(&self) -> Result<ResiduePoly, LinalgError> {
        let p = self.coeffs[0].prime();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let r = c.residue().map_err(|err| match err {
                PadicError::NotIntegral => LinalgError::NotIntegral,
                other => LinalgError::ContextMismatch(other),
            })?;
            out.push(r.value());
        }
        Ok(ResiduePoly::new(p, out))
    }

    /// Coefficientwise equality to precision.
    pub fn eq_to_precision(&self, other: &Self) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a.eq_to_precision(b))
    }
}

/// Lift a simple residue root of a monic integral polynomial to `Z_p` by
/// Newton iteration. Quadratic convergence: the residual valuation at least
/// doubles each step, so `O(log N)` iterations reach full precision.
pub fn hensel_lift_root(
    f: &PadicPoly,
    r0: &ResidueElement,
    ctx: &PrecisionContext,
) -> Result<PadicNumber, LinalgError> {
    let reduced = f.reduce()?;
    if reduced.eval(r0.value()) != 0 {
        return Err(LinalgError::NotARoot(r0.value()));
    }
    if reduced.derivative().eval(r0.value()) == 0 {
        return Err(LinalgError::NotSimpleRoot(r0.value()));
    }
    let fp = f.derivative(ctx);
    let mut x = PadicNumber::from_integer(r0.value() as i64, ctx);
    // ceil(log2 N) + slack iterations suffice for quadratic convergence.
    let mut steps = 0usize;
    let max_steps = 2 * (64 - (ctx.precision() as u64).leading_zeros() as usize) + 4;
    loop {
        let fx = f.eval(&x);
        if fx.is_precision_zero() {
            break;
        }
        let dfx = fp.eval(&x);
        let delta = fx.div(&dfx).map_err(LinalgError::ContextMismatch)?;
        x = x.sub(&delta).truncate(ctx.precision());
        steps += 1;
        if steps > max_steps {
            // Residual valuation stalled: the root is not simple after all.
            return Err(LinalgError::NotSimpleRoot(r0.value()));
        }
    }
    Ok(x)
}

/// Outcome of the eigenvalue search over `Q_p`.
#[derive(Debug, Clone)]
pub enum EigenvalueResult {
    /// Eigenvalues with multiplicities; their product polynomial matches the
    /// characteristic polynomial to precision.
    AllFound {
        eigenvalues: Vec<(PadicNumber, usize)>,
        source: EigenvalueSource,
    },
    Undecided(UndecidedReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenvalueSource {
    Triangular,
    Hints,
    HenselLifted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UndecidedReason {
    /// The reduced characteristic polynomial has a repeated root in `F_p`,
    /// which defeats simple-root lifting.
    RepeatedResidueRoots(ResiduePoly),
    /// The reduced characteristic polynomial has a non-linear factor; roots
    /// in `Q_p` may or may not exist and no claim is made.
    NonSplitResidue(ResiduePoly),
}

impl std::fmt::Display for UndecidedReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UndecidedReason::RepeatedResidueRoots(p) => {
                write!(f, "reduced characteristic polynomial has repeated roots: {p}")
            }
            UndecidedReason::NonSplitResidue(p) => {
                write!(
                    f,
                    "reduced characteristic polynomial does not split into linear factors: {p}"
                )
            }
        }
    }
}

/// Eigenvalues of an integral matrix in `Q_p`: triangular fast path, hint
/// verification, or Hensel lifting of simple residue roots.
pub fn eigenvalues_in_k(
    a: &PadicMatrix,
    hints: Option<&[PadicNumber]>,
    ctx: &PrecisionContext,
) -> Result<EigenvalueResult, LinalgError> {
    let n = a.dim();
    if a.is_upper_triangular() || a.is_lower_triangular() {
        let mut eigenvalues: Vec<(PadicNumber, usize)> = Vec::new();
        for i in 0..n {
            let d = a.get(i, i).clone();
            match eigenvalues.iter_mut().find(|(l, _)| l.eq_to_precision(&d)) {
                Some((_, m)) => *m += 1,
                None => eigenvalues.push((d, 1)),
            }
        }
        return Ok(EigenvalueResult::AllFound {
            eigenvalues,
            source: EigenvalueSource::Triangular,
        });
    }
    let charpoly = a.charpoly();
    if let Some(hints) = hints {
        if hints.len() != n {
            return Err(LinalgError::HintMismatch(format!(
                "expected {n} hints, got {}",
                hints.len()
            )));
        }
        for (i, h) in hints.iter().enumerate() {
            if !charpoly.eval(h).is_precision_zero() {
                return Err(LinalgError::HintMismatch(format!(
                    "hint #{i} is not a root of the characteristic polynomial to precision"
                )));
            }
        }
        let product = PadicPoly::from_roots(hints, ctx);
        if !product.eq_to_precision(&charpoly) {
            return Err(LinalgError::HintMismatch(
                "product of (x - hint) does not reproduce the characteristic polynomial".into(),
            ));
        }
        let mut eigenvalues: Vec<(PadicNumber, usize)> = Vec::new();
        for h in hints {
            match eigenvalues.iter_mut().find(|(l, _)| l.eq_to_precision(h)) {
                Some((_, m)) => *m += 1,
                None => eigenvalues.push((h.clone(), 1)),
            }
        }
        return Ok(EigenvalueResult::AllFound {
            eigenvalues,
            source: EigenvalueSource::Hints,
        });
    }
    let reduced = charpoly.reduce()?;
    let roots = reduced.roots_in_fp();
    let total: usize = roots.iter().map(|(_, k)| k).sum();
    if total < n {
        return Ok(EigenvalueResult::Undecided(UndecidedReason::NonSplitResidue(
            reduced,
        )));
    }
    if roots.iter().any(|(_, k)| *k > 1) {
        return Ok(EigenvalueResult::Undecided(
            UndecidedReason::RepeatedResidueRoots(reduced),
        ));
    }
    let mut eigenvalues = Vec::with_capacity(n);
    for (r, _) in &roots {
        let lifted = hensel_lift_root(&charpoly, r, ctx)?;
        eigenvalues.push((lifted, 1usize));
    }
    Ok(EigenvalueResult::AllFound {
        eigenvalues,
        source: EigenvalueSource::HenselLifted,
    })
}
