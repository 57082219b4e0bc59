//! A gallery of concrete operators built on the Mahler basis, plus the
//! permutation and dilation families, sized for desk-scale experiments.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{LinalgError, PadicMatrix, PadicVector};
use crate::padic::{AbsValue, PadicNumber, PrecisionContext};
use crate::residue::ResidueMatrix;
use crate::spectral::random_padic;

#[derive(Debug, Error)]
pub enum GalleryError {
    #[error("identity violated: {0}")]
    IdentityViolated(String),
    #[error("multiplier {0} is not a unit mod {1}")]
    NotAUnit(u64, u64),
    #[error("dilation parameter must satisfy |a| <= 1")]
    NotIntegral,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The binomial polynomial `P_n(x) = x(x-1)...(x-n+1)/n!`, with exact
/// rational coefficients in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahlerPoly {
    pub degree: usize,
    pub coeffs: Vec<BigRational>,
}

impl MahlerPoly {
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, m: i64) -> BigRational {
        self.eval(&rat(m))
    }
}

pub fn mahler_poly(n: usize) -> MahlerPoly {
    // Falling factorial x(x-1)...(x-n+1), then divide by n!.
    let mut coeffs = vec![BigRational::one()];
    for k in 0..n {
        // multiply by (x - k)
        let mut next = vec![BigRational::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * rat(k as i64);
        }
        coeffs = next;
    }
    let mut factorial = BigRational::one();
    for k in 1..=n {
        factorial *= rat(k as i64);
    }
    for c in &mut coeffs {
        *c /= factorial.clone();
    }
    MahlerPoly { degree: n, coeffs }
}

/// `P_n(-1) = (-1)^n`; the evaluation is checked against the closed form.
pub fn mahler_shift_coeff(n: usize) -> BigRational {
    let value = mahler_poly(n).eval(&rat(-1));
    let expected = if n % 2 == 0 { rat(1) } else { rat(-1) };
    debug_assert_eq!(value, expected);
    value
}

#[derive(Debug, Clone)]
pub struct MahlerReport {
    pub max_n: usize,
    pub recurrence_checked: usize,
    pub shift_expansion_checked: usize,
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

fn poly_scale(a: &[BigRational], s: &BigRational) -> Vec<BigRational> {
    a.iter().map(|c| c * s).collect()
}

fn poly_shift_up(a: &[BigRational]) -> Vec<BigRational> {
    // multiply by t
    let mut out = vec![BigRational::zero()];
    out.extend_from_slice(a);
    out
}

fn poly_eq(a: &[BigRational], b: &[BigRational]) -> bool {
    let len = a.len().max(b.len());
    let zero = BigRational::zero();
    (0..len).all(|i| a.get(i).unwrap_or(&zero) == b.get(i).unwrap_or(&zero))
}

/// Compose `P(t-1)` by Horner in `(t-1)`.
fn poly_compose_t_minus_1(a: &[BigRational]) -> Vec<BigRational> {
    let mut acc: Vec<BigRational> = vec![];
    for c in a.iter().rev() {
        // acc = acc * (t - 1) + c
        let shifted = poly_shift_up(&acc);
        acc = poly_add(&shifted, &poly_scale(&acc, &rat(-1)));
        if acc.is_empty() {
            acc.push(c.clone());
        } else {
            acc[0] += c;
        }
    }
    acc
}

/// Verifies, coefficientwise and exactly, the recurrence
/// `t P_n = n P_n + (n+1) P_{n+1}` and the shift expansion
/// `P_n(t-1) = sum_j P_{n-j}(-1) P_j(t)` for all `n <= max_n`.
pub fn check_mahler_identities(max_n: usize) -> Result<MahlerReport, GalleryError> {
    let polys: Vec<MahlerPoly> = (0..=max_n + 1).map(mahler_poly).collect();
    let mut recurrence_checked = 0;
    let mut shift_expansion_checked = 0;
    for n in 0..=max_n {
        let lhs = poly_shift_up(&polys[n].coeffs);
        let rhs = poly_add(
            &poly_scale(&polys[n].coeffs, &rat(n as i64)),
            &poly_scale(&polys[n + 1].coeffs, &rat(n as i64 + 1)),
        );
        if !poly_eq(&lhs, &rhs) {
            return Err(GalleryError::IdentityViolated(format!(
                "t*P_{n} != {n}*P_{n} + {}*P_{}",
                n + 1,
                n + 1
            )));
        }
        recurrence_checked += 1;

        let lhs = poly_compose_t_minus_1(&polys[n].coeffs);
        let mut rhs: Vec<BigRational> = vec![];
        for j in 0..=n {
            rhs = poly_add(&rhs, &poly_scale(&polys[j].coeffs, &mahler_shift_coeff(n - j)));
        }
        if !poly_eq(&lhs, &rhs) {
            return Err(GalleryError::IdentityViolated(format!(
                "P_{n}(t-1) != sum_j P_(n-j)(-1) P_j(t)"
            )));
        }
        shift_expansion_checked += 1;
    }
    Ok(MahlerReport {
        max_n,
        recurrence_checked,
        shift_expansion_checked,
    })
}

/// `diag(0, 1, ..., m-1)`: the number operator truncated to the first `m`
/// Mahler basis vectors.
pub fn number_operator(m: usize, ctx: &PrecisionContext) -> PadicMatrix {
    let diag: Vec<PadicNumber> = (0..m as i64)
        .map(|i| PadicNumber::from_integer(i, ctx))
        .collect();
    PadicMatrix::diagonal(&diag, ctx)
}

/// Truncated raising/lowering pair: `a_plus e_n = (n+1) e_{n+1}`,
/// `a_minus e_n = e_{n-1}`.
pub fn ccr_pair(m: usize, ctx: &PrecisionContext) -> (PadicMatrix, PadicMatrix) {
    let mut plus = vec![0i64; m * m];
    let mut minus = vec![0i64; m * m];
    for n in 0..m - 1 {
        plus[(n + 1) * m + n] = n as i64 + 1;
        minus[n * m + (n + 1)] = 1;
    }
    (
        PadicMatrix::from_integer_entries(m, &plus, ctx),
        PadicMatrix::from_integer_entries(m, &minus, ctx),
    )
}

#[derive(Debug, Clone)]
pub struct CcrReport {
    pub commutator: PadicMatrix,
    /// Basis indices on which `[a_minus, a_plus] e_n = e_n` holds.
    pub identity_indices: usize,
    /// The truncation artifact: the commutator acts as `-(m-1)` on the last
    /// basis vector.
    pub boundary_defect: PadicNumber,
}

/// `[a_minus, a_plus]` on the truncation: the identity on `e_0..e_{m-2}`,
/// with a boundary defect on `e_{m-1}`.
pub fn ccr_commutator_report(m: usize, ctx: &PrecisionContext) -> Result<CcrReport, GalleryError> {
    let (plus, minus) = ccr_pair(m, ctx);
    let commutator = minus.mul(&plus)?.sub(&plus.mul(&minus)?)?;
    let one = PadicNumber::one(ctx);
    let zero = PadicNumber::zero(ctx);
    let mut identity_indices = 0;
    for n in 0..m - 1 {
        let ok = (0..m).all(|i| {
            let expect = if i == n { &one } else { &zero };
            commutator.get(i, n).eq_to_precision(expect)
        });
        if !ok {
            return Err(GalleryError::IdentityViolated(format!(
                "commutator is not the identity on basis vector {n}"
            )));
        }
        identity_indices += 1;
    }
    let boundary_defect = commutator.get(m - 1, m - 1).clone();
    Ok(CcrReport {
        commutator,
        identity_indices,
        boundary_defect,
    })
}

/// Integer grid of the bidiagonal multiplication operator: row `n` carries
/// `n` on the diagonal and `n+1` on the superdiagonal, truncated at `m*p`.
pub fn multiplication_grid(blocks: usize, p: u64) -> Vec<i64> {
    let size = blocks * p as usize;
    let mut grid = vec![0i64; size * size];
    for n in 0..size {
        grid[n * size + n] = n as i64;
        if n + 1 < size {
            grid[n * size + n + 1] = n as i64 + 1;
        }
    }
    grid
}

/// Bidiagonal matrix of multiplication by `t` in the Mahler basis,
/// truncated at `blocks * p` so the reduction is exactly block-diagonal.
pub fn multiplication_operator(blocks: usize, ctx: &PrecisionContext) -> PadicMatrix {
    let p = ctx.prime();
    let size = blocks * p as usize;
    PadicMatrix::from_integer_entries(size, &multiplication_grid(blocks, p), ctx)
}

/// Integer grid of the shift operator: lower-triangular with entries
/// `P_{i-j}(-1) = (-1)^{i-j}`.
pub fn shift_grid(m: usize) -> Vec<i64> {
    let mut grid = vec![0i64; m * m];
    for i in 0..m {
        for j in 0..=i {
            grid[i * m + j] = if (i - j) % 2 == 0 { 1 } else { -1 };
        }
    }
    grid
}

/// The shift `f(t) -> f(t-1)` in the Mahler basis, truncated to `m` terms.
pub fn shift_operator(m: usize, ctx: &PrecisionContext) -> PadicMatrix {
    PadicMatrix::from_integer_entries(m, &shift_grid(m), ctx)
}

/// The multiplication map `e -> alpha * e mod p^n` on root-of-unity
/// exponents, with its cycle decomposition.
#[derive(Debug, Clone)]
pub struct AffinePermutation {
    pub prime: u64,
    pub level: u32,
    pub alpha: u64,
    pub map: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
}

pub fn affine_permutation(alpha: u64, p: u64, n: u32) -> Result<AffinePermutation, GalleryError> {
    if alpha % p == 0 {
        return Err(GalleryError::NotAUnit(alpha, p.pow(n)));
    }
    let modulus = p.pow(n) as usize;
    let map: Vec<usize> = (0..modulus)
        .map(|e| (alpha as usize * e) % modulus)
        .collect();
    let mut seen = vec![false; modulus];
    let mut cycles = Vec::new();
    for start in 0..modulus {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut e = map[start];
        while e != start {
            seen[e] = true;
            cycle.push(e);
            e = map[e];
        }
        cycles.push(cycle);
    }
    Ok(AffinePermutation {
        prime: p,
        level: n,
        alpha,
        map,
        cycles,
    })
}

impl AffinePermutation {
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles.iter().map(|c| c.len()).collect();
        lengths.sort_unstable();
        lengths
    }

    /// The exponents divisible by `p` form a copy of the level-`(n-1)`
    /// permutation under `e -> e/p`.
    pub fn is_filtration_compatible_with(&self, lower: &AffinePermutation) -> bool {
        if lower.prime != self.prime || lower.level + 1 != self.level || lower.alpha != self.alpha {
            return false;
        }
        let p = self.prime as usize;
        self.map
            .iter()
            .enumerate()
            .filter(|(e, _)| e % p == 0)
            .all(|(e, &img)| img % p == 0 && lower.map[e / p] == img / p)
    }
}

/// Diagnosis of one cycle of the reduced level-`n` block: a length-`c`
/// cyclic permutation is diagonalizable over `F_p` iff `c | p-1` and over
/// the algebraic closure iff `p` does not divide `c`.
#[derive(Debug, Clone)]
pub struct CycleDiagnosis {
    pub length: usize,
    pub diagonalizable_over_fp: bool,
    pub diagonalizable_over_closure: bool,
}

/// The `p^n x p^n` zero-one matrix of the inverse permutation (the
/// reduction of the level-`n` block), with a per-cycle diagnosis.
pub fn a2_reduction_block(
    alpha: u64,
    p: u64,
    n: u32,
) -> Result<(ResidueMatrix, Vec<CycleDiagnosis>), GalleryError> {
    let perm = affine_permutation(alpha, p, n)?;
    let size = perm.map.len();
    let mut grid = vec![0u64; size * size];
    for (e, &img) in perm.map.iter().enumerate() {
        grid[e * size + img] = 1;
    }
    let matrix = ResidueMatrix::new(p, size, grid);
    let diagnoses = perm
        .cycles
        .iter()
        .map(|c| {
            let len = c.len() as u64;
            CycleDiagnosis {
                length: c.len(),
                diagonalizable_over_fp: (p - 1) % len == 0,
                diagonalizable_over_closure: len % p != 0,
            }
        })
        .collect();
    Ok((matrix, diagnoses))
}

/// Grid of the permutation matrix, for document emission.
pub fn a2_block_grid(alpha: u64, p: u64, n: u32) -> Result<Vec<i64>, GalleryError> {
    let perm = affine_permutation(alpha, p, n)?;
    let size = perm.map.len();
    let mut grid = vec![0i64; size * size];
    for (e, &img) in perm.map.iter().enumerate() {
        grid[e * size + img] = 1;
    }
    Ok(grid)
}

/// The `n x n` Jordan cell with `a` on the diagonal and `1` on the
/// superdiagonal: the operator being dilated.
pub fn jordan_cell(a: &PadicNumber, n: usize, ctx: &PrecisionContext) -> PadicMatrix {
    let mut m = PadicMatrix::zero(n, ctx);
    let one = PadicNumber::one(ctx);
    for i in 0..n {
        m.set(i, i, a.clone());
        if i + 1 < n {
            m.set(i, i + 1, one.clone());
        }
    }
    m
}

/// The `(n+1) x (n+1)` dilation: diagonal `a`, superdiagonal `1`, and `-1`
/// in the lower-left corner. Requires `|a| <= 1`.
pub fn dilation(a: &PadicNumber, n: usize, ctx: &PrecisionContext) -> Result<PadicMatrix, GalleryError> {
    match a.abs_value() {
        AbsValue::Exact(e) if e > 0 => return Err(GalleryError::NotIntegral),
        _ => {}
    }
    let mut m = jordan_cell(a, n + 1, ctx);
    m.set(n, 0, PadicNumber::one(ctx).neg());
    Ok(m)
}

/// Rational grid of the dilation for document emission; `a` is given as a
/// reduced fraction.
pub fn dilation_grid(a: &BigRational, n: usize) -> Vec<BigRational> {
    let size = n + 1;
    let mut grid = vec![BigRational::zero(); size * size];
    for i in 0..size {
        grid[i * size + i] = a.clone();
        if i + 1 < size {
            grid[i * size + i + 1] = BigRational::one();
        }
    }
    grid[n * size] = -BigRational::one();
    grid
}

/// Checks `P B (0, x) = A x` for `trials` random vectors `x`, where `A` is
/// the Jordan cell, `B` the dilation, and `P` the projection onto the last
/// `n` coordinates.
pub fn check_dilation_identity(
    a: &PadicNumber,
    n: usize,
    trials: usize,
    seed: u64,
    ctx: &PrecisionContext,
) -> Result<(), GalleryError> {
    let b = dilation(a, n, ctx)?;
    let cell = jordan_cell(a, n, ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let x = PadicVector::new(
            (0..n)
                .map(|_| random_padic(&mut rng, ctx, -2, 4))
                .collect(),
        );
        let mut lifted = vec![PadicNumber::zero(ctx)];
        lifted.extend(x.entries().iter().cloned());
        let bx = b.apply(&PadicVector::new(lifted))?;
        let ax = cell.apply(&x)?;
        let projected = PadicVector::new(bx.entries()[1..].to_vec());
        if !projected.sub(&ax).is_zero_to_precision() {
            return Err(GalleryError::IdentityViolated(format!(
                "dilation identity failed on trial {trial}"
            )));
        }
    }
    Ok(())
}

/// Sign-aware rational to integer for grids known to be integral.
pub fn rational_is_integer(r: &BigRational) -> Option<BigInt> {
    if r.denom().is_one() || r.denom().abs().is_one() {
        Some(r.numer().clone())
    } else {
        None
    }
}
