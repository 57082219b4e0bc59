//! Linear and polynomial algebra over the residue field `F_p`.
//!
//! Everything here is exact arithmetic mod a small prime. The central
//! operation is the diagonalizability test: the minimal polynomial must be
//! squarefree and split into linear factors over `F_p`, and a verified
//! eigenbasis is produced in the affirmative case.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("brute-force search limited to n <= 4 and p <= 5 (got n = {n}, p = {p})")]
    TooLarge { n: usize, p: u64 },
}

/// An element of `F_p`, stored as its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueElement {
    prime: u64,
    value: u64,
}

impl ResidueElement {
    pub fn new(prime: u64, value: u64) -> Self {
        Self {
            prime,
            value: value % prime,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prime, other.prime);
        Self::new(self.prime, self.value + other.value)
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prime, other.prime);
        Self::new(self.prime, self.value + self.prime - other.value)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prime, other.prime);
        Self::new(self.prime, mul_mod(self.value, other.value, self.prime))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.prime, self.prime - self.value)
    }

    /// Inverse of a nonzero element, by Fermat's little theorem.
    pub fn inv(&self) -> Self {
        assert!(self.value != 0, "inverse of zero in F_p");
        Self::new(self.prime, pow_mod(self.value, self.prime - 2, self.prime))
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Polynomial over `F_p` in canonical form (no trailing zero coefficients).
/// Coefficients are ascending; the zero polynomial has an empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResiduePoly {
    prime: u64,
    coeffs: Vec<u64>,
}

impl ResiduePoly {
    pub fn new(prime: u64, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= prime;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { prime, coeffs }
    }

    pub fn zero(prime: u64) -> Self {
        Self {
            prime,
            coeffs: Vec::new(),
        }
    }

    pub fn one(prime: u64) -> Self {
        Self::new(prime, vec![1])
    }

    pub fn constant(prime: u64, c: u64) -> Self {
        Self::new(prime, vec![c])
    }

    /// The monomial `x - a`.
    pub fn linear_root(prime: u64, a: u64) -> Self {
        Self::new(prime, vec![(prime - a % prime) % prime, 1])
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + b) % self.prime;
        }
        Self::new(self.prime, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + self.prime - b) % self.prime;
        }
        Self::new(self.prime, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.prime);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.prime)) % self.prime;
            }
        }
        Self::new(self.prime, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| mul_mod(a, c, self.prime))
            .collect();
        Self::new(self.prime, coeffs)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = ResidueElement::new(self.prime, self.leading_coeff());
        self.scale(lc.inv().value())
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    pub fn divrem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let p = self.prime;
        let dd = div.coeffs.len() - 1;
        let lc_inv = ResidueElement::new(p, div.leading_coeff()).inv().value();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], lc_inv, p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dc) in div.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + p - mul_mod(c, dc, p)) % p;
            }
        }
        (Self::new(p, quot), Self::new(p, rem))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Result<Self, ResidueError> {
        if self.is_zero() && other.is_zero() {
            return Err(ResidueError::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.prime);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, (i as u64) % self.prime, self.prime))
            .collect();
        Self::new(self.prime, coeffs)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x, self.prime) + c) % self.prime;
        }
        acc
    }

    /// All roots in `F_p` with multiplicities, found by exhaustive
    /// evaluation; multiplicity by repeated division by `x - a`.
    pub fn roots_in_fp(&self) -> Vec<(ResidueElement, usize)> {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let mut roots = Vec::new();
        let mut f = self.clone();
        for a in 0..self.prime {
            let mut mult = 0usize;
            while !f.is_zero() && f.degree().is_some() && f.eval(a) == 0 {
                if f.degree() == Some(0) {
                    break;
                }
                let (q, r) = f.divrem(&Self::linear_root(self.prime, a));
                debug_assert!(r.is_zero());
                f = q;
                mult += 1;
            }
            if mult > 0 {
                roots.push((ResidueElement::new(self.prime, a), mult));
            }
        }
        roots
    }

    /// Evaluate the polynomial at a matrix argument by Horner's rule.
    pub fn eval_matrix(&self, m: &ResidueMatrix) -> ResidueMatrix {
        let n = m.dim();
        let mut acc = ResidueMatrix::zero(self.prime, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            for i in 0..n {
                acc.set(i, i, (acc.get(i, i) + c) % self.prime);
            }
        }
        acc
    }
}

impl fmt::Display for ResiduePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => {
                    if *c == 1 {
                        "x".to_string()
                    } else {
                        format!("{c}*x")
                    }
                }
                _ => {
                    if *c == 1 {
                        format!("x^{i}")
                    } else {
                        format!("{c}*x^{i}")
                    }
                }
            })
            .rev()
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Square matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    prime: u64,
    n: usize,
    entries: Vec<u64>,
}

/// Certificate that a residue matrix is diagonalizable: eigenvalues with
/// multiplicities, an explicit eigenbasis (columns of `basis`), and whether
/// the minimal polynomial splits over `F_p` (as opposed to only being
/// squarefree, i.e. diagonalizable over the algebraic closure).
#[derive(Debug, Clone)]
pub struct EigenbasisCertificate {
    pub eigenvalues: Vec<(ResidueElement, usize)>,
    /// Columns are eigenvectors, grouped by eigenvalue in order.
    pub basis: Vec<Vec<u64>>,
    pub squarefree_min_poly: bool,
}

/// Why a residue matrix fails to be diagonalizable over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonDiagWitness {
    /// A repeated factor of the minimal polynomial.
    RepeatedFactor(ResiduePoly),
    /// The non-linear part left after removing all roots in `F_p`; its
    /// irreducible factors all have degree at least 2.
    NonLinearFactor(ResiduePoly),
}

impl fmt::Display for NonDiagWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonDiagWitness::RepeatedFactor(p) => {
                write!(f, "repeated minimal-polynomial factor {p}")
            }
            NonDiagWitness::NonLinearFactor(p) => {
                write!(f, "irreducible factor of degree >= 2 dividing {p}")
            }
        }
    }
}

/// Result of the diagonalizability test.
#[derive(Debug, Clone)]
pub enum DiagResult {
    Yes(EigenbasisCertificate),
    No(NonDiagWitness),
}

impl DiagResult {
    pub fn is_yes(&self) -> bool {
        matches!(self, DiagResult::Yes(_))
    }
}

impl ResidueMatrix {
    pub fn new(prime: u64, n: usize, entries: Vec<u64>) -> Self {
        assert!(n >= 1, "matrices have dimension at least 1");
        assert_eq!(entries.len(), n * n);
        let entries = entries.into_iter().map(|e| e % prime).collect();
        Self { prime, n, entries }
    }

    pub fn zero(prime: u64, n: usize) -> Self {
        Self::new(prime, n, vec![0; n * n])
    }

    pub fn identity(prime: u64, n: usize) -> Self {
        let mut m = Self::zero(prime, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn diagonal(prime: u64, diag: &[u64]) -> Self {
        let mut m = Self::zero(prime, diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.n + j] = v % self.prime;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + b) % self.prime)
            .collect();
        Self::new(self.prime, self.n, entries)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + self.prime - b) % self.prime)
            .collect();
        Self::new(self.prime, self.n, entries)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] =
                        (out[i * n + j] + mul_mod(a, other.get(k, j), self.prime)) % self.prime;
                }
            }
        }
        Self::new(self.prime, n, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&a| mul_mod(a, c, self.prime))
            .collect();
        Self::new(self.prime, self.n, entries)
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.n {
                    acc = (acc + mul_mod(self.get(i, j), v[j], self.prime)) % self.prime;
                }
                acc
            })
            .collect()
    }

    /// `Some(nu)` when the matrix equals `nu * I`.
    pub fn is_scalar(&self) -> Option<ResidueElement> {
        let nu = self.get(0, 0);
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { nu } else { 0 };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(ResidueElement::new(self.prime, nu))
    }

    /// Row rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        rank_of_rows(
            self.prime,
            self.n,
            (0..self.n)
                .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
                .collect(),
        )
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Basis of the null space `{v : Mv = 0}`.
    pub fn null_space(&self) -> Vec<Vec<u64>> {
        let p = self.prime;
        let n = self.n;
        let mut rows: Vec<Vec<u64>> = (0..n)
            .map(|i| self.entries[i * n..(i + 1) * n].to_vec())
            .collect();
        // Reduced row echelon form.
        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for c in 0..n {
            if let Some(pr) = (r..n).find(|&i| rows[i][c] != 0) {
                rows.swap(r, pr);
                let inv = ResidueElement::new(p, rows[r][c]).inv().value();
                for x in rows[r].iter_mut() {
                    *x = mul_mod(*x, inv, p);
                }
                for i in 0..n {
                    if i != r && rows[i][c] != 0 {
                        let f = rows[i][c];
                        for j in 0..n {
                            let t = mul_mod(f, rows[r][j], p);
                            rows[i][j] = (rows[i][j] + p - t) % p;
                        }
                    }
                }
                pivot_cols.push(c);
                r += 1;
                if r == n {
                    break;
                }
            }
        }
        let mut basis = Vec::new();
        for free in 0..n {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - rows[ri][free] % p) % p;
            }
            basis.push(v);
        }
        basis
    }

    /// Characteristic polynomial `det(xI - M)` by the division-free
    /// Berkowitz algorithm.
    pub fn charpoly(&self) -> ResiduePoly {
        let p = self.prime;
        let n = self.n;
        // Coefficients descending: c[0] is the leading coefficient.
        let mut c: Vec<u64> = vec![1, (p - self.get(0, 0)) % p];
        for r in 1..n {
            // Leading (r+1)x(r+1) submatrix split into M (r x r), row, col, corner.
            let d = self.get(r, r);
            let row: Vec<u64> = (0..r).map(|j| self.get(r, j)).collect();
            let col: Vec<u64> = (0..r).map(|i| self.get(i, r)).collect();
            // Toeplitz column t: t0 = 1, t1 = -d, t_{k} = -row * M^{k-2} * col.
            let mut t = vec![0u64; r + 2];
            t[0] = 1;
            t[1] = (p - d) % p;
            let mut w = col.clone();
            for tk in t.iter_mut().skip(2) {
                let mut dot = 0u64;
                for j in 0..r {
                    dot = (dot + mul_mod(row[j], w[j], p)) % p;
                }
                *tk = (p - dot) % p;
                // w <- M * w over the leading r x r block.
                let mut nw = vec![0u64; r];
                for (i, slot) in nw.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for j in 0..r {
                        acc = (acc + mul_mod(self.get(i, j), w[j], p)) % p;
                    }
                    *slot = acc;
                }
                w = nw;
            }
            let mut next = vec![0u64; r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = 0u64;
                for (j, &cj) in c.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        acc = (acc + mul_mod(t[i - j], cj, p)) % p;
                    }
                }
                *slot = acc;
            }
            c = next;
        }
        c.reverse();
        ResiduePoly::new(p, c)
    }

    /// Monic minimal polynomial, found as the first linear dependence among
    /// `I, M, M^2, ...` viewed as vectors in `F_p^{n^2}`; verified by direct
    /// evaluation before returning.
    pub fn minimal_polynomial(&self) -> ResiduePoly {
        let p = self.prime;
        let dim = self.n * self.n;
        // Reduced rows with their expression in terms of the original powers.
        let mut rows: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new(); // (pivot, row, combo)
        let mut power = Self::identity(p, self.n);
        for k in 0..=self.n {
            let mut v = power.entries.clone();
            let mut combo = vec![0u64; k + 1];
            combo[k] = 1;
            // Reduce v against the stored rows.
            for (pc, row, rc) in &rows {
                if v[*pc] != 0 {
                    let f = v[*pc];
                    for j in 0..dim {
                        let t = mul_mod(f, row[j], p);
                        v[j] = (v[j] + p - t) % p;
                    }
                    for (j, &x) in rc.iter().enumerate() {
                        if j < combo.len() {
                            let t = mul_mod(f, x, p);
                            combo[j] = (combo[j] + p - t) % p;
                        } else if x != 0 {
                            unreachable!("combo longer than current degree");
                        }
                    }
                }
            }
            match v.iter().position(|&x| x != 0) {
                Some(pc) => {
                    let inv = ResidueElement::new(p, v[pc]).inv().value();
                    let row: Vec<u64> = v.iter().map(|&x| mul_mod(x, inv, p)).collect();
                    let rc: Vec<u64> = combo.iter().map(|&x| mul_mod(x, inv, p)).collect();
                    rows.push((pc, row, rc));
                }
                None => {
                    // M^k = -(combo without leading term); min poly is combo
                    // negated below degree k, monic at degree k.
                    let mut coeffs = vec![0u64; k + 1];
                    for (j, &x) in combo.iter().enumerate() {
                        coeffs[j] = x;
                    }
                    let m = ResiduePoly::new(p, coeffs).monic();
                    debug_assert!(m.eval_matrix(self).is_zero());
                    return m;
                }
            }
            power = power.mul(self);
        }
        unreachable!("Cayley-Hamilton guarantees dependence by degree n");
    }

    /// Diagonalizability over `F_p`: minimal polynomial squarefree and split.
    pub fn is_diagonalizable(&self) -> DiagResult {
        let p = self.prime;
        let m = self.minimal_polynomial();
        let md = m.derivative();
        let squarefree = if md.is_zero() {
            false
        } else {
            m.gcd(&md).expect("min poly nonzero").degree() == Some(0)
        };
        if !squarefree {
            let witness = if md.is_zero() {
                m.clone()
            } else {
                m.gcd(&md).expect("min poly nonzero")
            };
            return DiagResult::No(NonDiagWitness::RepeatedFactor(witness));
        }
        let roots = m.roots_in_fp();
        let root_degree: usize = roots.iter().map(|(_, k)| k).sum();
        if root_degree != m.degree().unwrap_or(0) {
            let mut rest = m.clone();
            for (r, k) in &roots {
                for _ in 0..*k {
                    let (q, rem) = rest.divrem(&ResiduePoly::linear_root(p, r.value()));
                    debug_assert!(rem.is_zero());
                    rest = q;
                }
            }
            return DiagResult::No(NonDiagWitness::NonLinearFactor(rest));
        }
        // Assemble and verify an eigenbasis.
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut eigenvalues = Vec::new();
        for (lambda, _) in &roots {
            let shifted = self.sub(&Self::identity(p, self.n).scale(lambda.value()));
            let space = shifted.null_space();
            eigenvalues.push((*lambda, space.len()));
            for v in space {
                debug_assert_eq!(
                    self.apply(&v),
                    v.iter()
                        .map(|&x| mul_mod(x, lambda.value(), p))
                        .collect::<Vec<_>>()
                );
                basis.push(v);
            }
        }
        if basis.len() != self.n {
            // Geometric multiplicities fall short: not diagonalizable even
            // though the minimal polynomial looked split (cannot happen when
            // it is squarefree, kept as a hard check).
            return DiagResult::No(NonDiagWitness::RepeatedFactor(m));
        }
        let basis_rows = basis.clone();
        debug_assert_eq!(rank_of_rows(p, self.n, basis_rows), self.n);
        DiagResult::Yes(EigenbasisCertificate {
            eigenvalues,
            basis,
            squarefree_min_poly: squarefree,
        })
    }

    /// Independent oracle: enumerate every eigenvector and test whether they
    /// span `F_p^n`. Search space bounded to `n <= 4`, `p <= 5`.
    pub fn brute_force_diagonalizable(&self) -> Result<bool, ResidueError> {
        let p = self.prime;
        let n = self.n;
        if n > 4 || p > 5 {
            return Err(ResidueError::TooLarge { n, p });
        }
        let total = (p as usize).pow(n as u32);
        let mut eigenvectors: Vec<Vec<u64>> = Vec::new();
        for code in 1..total {
            let mut v = vec![0u64; n];
            let mut c = code;
            for slot in v.iter_mut() {
                *slot = (c % p as usize) as u64;
                c /= p as usize;
            }
            let mv = self.apply(&v);
            // Eigenvector iff Mv = lambda v for a single lambda.
            let mut lambda = None;
            let mut ok = true;
            for i in 0..n {
                if v[i] != 0 {
                    let l = mul_mod(mv[i], ResidueElement::new(p, v[i]).inv().value(), p);
                    match lambda {
                        None => lambda = Some(l),
                        Some(prev) if prev != l => {
                            ok = false;
                            break;
                        }
                        _ => {}
                    }
                } else if mv[i] != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                eigenvectors.push(v);
            }
        }
        Ok(rank_of_rows(p, n, eigenvectors) == n)
    }
}

fn rank_of_rows(p: u64, width: usize, mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0usize;
    for c in 0..width {
        if let Some(pr) = (rank..rows.len()).find(|&i| rows[i][c] != 0) {
            rows.swap(rank, pr);
            let inv = ResidueElement::new(p, rows[rank][c]).inv().value();
            for x in rows[rank].iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            for i in 0..rows.len() {
                if i != rank && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..width {
                        let t = mul_mod(f, rows[rank][j], p);
                        rows[i][j] = (rows[i][j] + p - t) % p;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}
