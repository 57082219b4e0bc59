//! Normality verdicts and constructive spectral decompositions.
//!
//! A matrix over `Q_p` with norm one is classified as Normal, NotNormal,
//! Degenerate or Undecided. Normal is verification-first: it is only
//! returned after the spectral idempotents have been constructed by
//! Lagrange interpolation in the matrix and every certificate flag
//! (idempotency, mutual annihilation, completeness, norm one, eigenvalue
//! equation) has been checked computationally.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{
    eigenvalues_in_k, power_of_p, EigenvalueResult, EigenvalueSource, LinalgError, PadicMatrix,
    PadicVector, UndecidedReason,
};
use crate::padic::{AbsValue, PadicNumber, PrecisionContext};
use crate::residue::{DiagResult, NonDiagWitness, ResidueElement, ResidueMatrix, ResiduePoly};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("operator norm is not 1; normalize first")]
    NormNotOne,
    #[error("matrix is zero to the working precision")]
    ZeroMatrix,
    #[error("eigenvalues #{0} and #{1} collide below the precision floor p^(-N/2)")]
    EigenvalueCollision(usize, usize),
    #[error("decomposition verification failed: {0}")]
    VerificationFailed(String),
    #[error("operator is not degenerate")]
    NotDegenerate,
    #[error("series still degenerate at the precision floor")]
    PrecisionExhausted,
    #[error("sample point #{0} lies on the spectrum to precision")]
    SampleOnSpectrum(usize),
    #[error("orthogonality violated: {0}")]
    OrthogonalityViolated(String),
    #[error("no function value supplied for eigenvalue #{0}")]
    MissingValue(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Computationally verified properties of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateFlags {
    /// `E_i^2 = E_i` for all i.
    pub idempotency: bool,
    /// `E_i E_j = 0` for i != j.
    pub mutual_annihilation: bool,
    /// `sum E_i = I`.
    pub completeness: bool,
    /// `‖E_i‖ = 1` for every nonzero `E_i`.
    pub norm_one: bool,
    /// `A E_i = E_i A = lambda_i E_i`.
    pub eigen_equation: bool,
}

impl CertificateFlags {
    pub fn all_verified(&self) -> bool {
        self.idempotency
            && self.mutual_annihilation
            && self.completeness
            && self.norm_one
            && self.eigen_equation
    }
}

/// Spectral decomposition with distinct eigenvalues, their multiplicities,
/// and one idempotent per eigenvalue, all flags verified.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<PadicNumber>,
    pub multiplicities: Vec<usize>,
    pub idempotents: Vec<PadicMatrix>,
    pub flags: CertificateFlags,
}

impl SpectralDecomposition {
    /// `E(Lambda) = sum_{i in indices} E_i`.
    pub fn projector(
        &self,
        indices: &[usize],
        ctx: &PrecisionContext,
    ) -> Result<PadicMatrix, SpectralError> {
        let n = self.idempotents[0].dim();
        let mut acc = PadicMatrix::zero(n, ctx);
        for &i in indices {
            acc = acc.add(&self.idempotents[i])?;
        }
        Ok(acc)
    }
}

/// Why an operator fails to be normal.
#[derive(Debug, Clone)]
pub enum NotNormalReason {
    /// The reduction mod p is not diagonalizable; carries the witness factor.
    NonDiagonalizableReduction(NonDiagWitness),
    /// The operator itself is not diagonalizable over `Q_p`: the product of
    /// `(A - lambda I)` over the distinct eigenvalues is nonzero.
    NonSquarefreeMinPoly,
    /// Eigenvalues were produced but could not be certified in `Q_p`.
    EigenvaluesNotCertifiedInK,
}

/// Result of peeling a degenerate operator: `A = g I + A0` where either
/// `A0` vanishes to precision (`scalar_case`) or the rescaled core
/// `lambda0 * A0` is non-degenerate of norm one.
#[derive(Debug, Clone)]
pub struct Proposition1Split {
    pub g: PadicNumber,
    pub a0: PadicMatrix,
    /// `‖lambda0 * A0‖ = 1`; absent in the scalar case.
    pub lambda0: Option<PadicNumber>,
    pub non_degenerate_core: Option<PadicMatrix>,
    pub scalar_case: bool,
    /// Scalar matrices are trivially normal: `E = I` with eigenvalue `g`.
    pub trivially_normal: bool,
    /// Number of peeling steps taken.
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Normal(SpectralDecomposition),
    NotNormal(NotNormalReason),
    Degenerate(Proposition1Split),
    Undecided(UndecidedReason),
}

/// Full verdict with raw evidence. The verdict applies to the normalized
/// operator `lambda0 * A`; `lambda0` is disclosed.
#[derive(Debug, Clone)]
pub struct NormalityReport {
    pub lambda0: PadicNumber,
    pub normalized: PadicMatrix,
    pub reduction: ResidueMatrix,
    pub residue_min_poly: ResiduePoly,
    pub eigenvalue_source: Option<EigenvalueSource>,
    pub verdict: Verdict,
}

/// `Some(nu)` when the reduction of the norm-one matrix `A` is `nu * I`.
pub fn is_degenerate(a: &PadicMatrix) -> Result<Option<ResidueElement>, SpectralError> {
    match a.sup_norm() {
        AbsValue::Exact(0) => {}
        _ => return Err(SpectralError::NormNotOne),
    }
    Ok(a.reduce()?.is_scalar())
}

/// Lagrange idempotents `E_i = prod_{j != i} (A - lambda_j I) / (lambda_i -
/// lambda_j)`, verified before returning. `eigenvalues` carries the distinct
/// eigenvalues with multiplicities.
pub fn spectral_idempotents(
    a: &PadicMatrix,
    eigenvalues: &[(PadicNumber, usize)],
    ctx: &PrecisionContext,
) -> Result<SpectralDecomposition, SpectralError> {
    let n = a.dim();
    let floor = ctx.precision() / 2;
    for i in 0..eigenvalues.len() {
        for j in i + 1..eigenvalues.len() {
            let diff = eigenvalues[i].0.sub(&eigenvalues[j].0);
            match diff.valuation() {
                Some(v) if v < floor => {}
                _ => return Err(SpectralError::EigenvalueCollision(i, j)),
            }
        }
    }
    let identity = PadicMatrix::identity(n, ctx);
    let mut idempotents = Vec::with_capacity(eigenvalues.len());
    for (i, (li, _)) in eigenvalues.iter().enumerate() {
        let mut e = identity.clone();
        for (j, (lj, _)) in eigenvalues.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom_inv = li.sub(lj).inv().map_err(LinalgError::ContextMismatch)?;
            let factor = a.sub(&identity.scale(lj))?.scale(&denom_inv);
            e = e.mul(&factor)?;
        }
        idempotents.push(e);
    }
    let lambdas: Vec<PadicNumber> = eigenvalues.iter().map(|(l, _)| l.clone()).collect();
    let mults: Vec<usize> = eigenvalues.iter().map(|(_, m)| *m).collect();
    let flags = verify_flags(a, &lambdas, &idempotents, ctx)?;
    if !flags.all_verified() {
        return Err(SpectralError::VerificationFailed(format!("{flags:?}")));
    }
    Ok(SpectralDecomposition {
        eigenvalues: lambdas,
        multiplicities: mults,
        idempotents,
        flags,
    })
}

fn verify_flags(
    a: &PadicMatrix,
    lambdas: &[PadicNumber],
    idempotents: &[PadicMatrix],
    ctx: &PrecisionContext,
) -> Result<CertificateFlags, SpectralError> {
    let n = a.dim();
    let identity = PadicMatrix::identity(n, ctx);
    let mut idempotency = true;
    let mut norm_one = true;
    let mut eigen_equation = true;
    for (e, l) in idempotents.iter().zip(lambdas) {
        if !e.mul(e)?.eq_to_precision(e) {
            idempotency = false;
        }
        if !e.is_zero_to_precision() && e.sup_norm() != AbsValue::Exact(0) {
            norm_one = false;
        }
        let le = e.scale(l);
        if !a.mul(e)?.eq_to_precision(&le) || !e.mul(a)?.eq_to_precision(&le) {
            eigen_equation = false;
        }
    }
    let mut mutual_annihilation = true;
    for i in 0..idempotents.len() {
        for j in 0..idempotents.len() {
            if i != j && !idempotents[i].mul(&idempotents[j])?.is_zero_to_precision() {
                mutual_annihilation = false;
            }
        }
    }
    let mut sum = PadicMatrix::zero(n, ctx);
    for e in idempotents {
        sum = sum.add(e)?;
    }
    let completeness = sum.eq_to_precision(&identity);
    Ok(CertificateFlags {
        idempotency,
        mutual_annihilation,
        completeness,
        norm_one,
        eigen_equation,
    })
}

/// `sum f(lambda_i) E_i`. Values are given as `(eigenvalue, value)` pairs.
pub fn function_calculus(
    decomp: &SpectralDecomposition,
    values: &[(PadicNumber, PadicNumber)],
    ctx: &PrecisionContext,
) -> Result<PadicMatrix, SpectralError> {
    let n = decomp.idempotents[0].dim();
    let mut acc = PadicMatrix::zero(n, ctx);
    for (i, (l, e)) in decomp.eigenvalues.iter().zip(&decomp.idempotents).enumerate() {
        let value = values
            .iter()
            .find(|(key, _)| key.eq_to_precision(l))
            .map(|(_, v)| v)
            .ok_or(SpectralError::MissingValue(i))?;
        acc = acc.add(&e.scale(value))?;
    }
    Ok(acc)
}

/// Summary of the randomized orthogonality checks.
#[derive(Debug, Clone)]
pub struct OrthogonalityReport {
    pub trials: usize,
    pub pair_checks: usize,
    pub vector_checks: usize,
}

fn random_unit(rng: &mut ChaCha8Rng, p: u64) -> u64 {
    loop {
        let u = rng.gen_range(1..p.pow(4.min(21)));
        if u % p != 0 {
            return u;
        }
    }
}

/// Random element with valuation in `[min_val, max_val]`.
pub fn random_padic(
    rng: &mut ChaCha8Rng,
    ctx: &PrecisionContext,
    min_val: i64,
    max_val: i64,
) -> PadicNumber {
    let v = rng.gen_range(min_val..=max_val);
    let u = random_unit(rng, ctx.prime());
    let unit = PadicNumber::from_integer(u as i64, ctx);
    let shift = power_of_p(v, ctx).expect("power of p");
    unit.mul(&shift)
}

/// Randomized check of the non-Archimedean orthogonality identity
/// `‖a1 E(L1) + a2 E(L2)‖ = max(|a1|, |a2|)` for disjoint nonempty index
/// sets, and of the vector identity `‖x‖ = max_L ‖E(L) x‖`.
pub fn check_orthogonality(
    decomp: &SpectralDecomposition,
    trials: usize,
    seed: u64,
    ctx: &PrecisionContext,
) -> Result<OrthogonalityReport, SpectralError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = decomp.idempotents.len();
    let n = decomp.idempotents[0].dim();
    let mut pair_checks = 0usize;
    let mut vector_checks = 0usize;
    for trial in 0..trials {
        if m >= 2 {
            // Random disjoint nonempty index sets.
            let (l1, l2) = loop {
                let mut l1 = Vec::new();
                let mut l2 = Vec::new();
                for i in 0..m {
                    match rng.gen_range(0..3) {
                        0 => l1.push(i),
                        1 => l2.push(i),
                        _ => {}
                    }
                }
                if !l1.is_empty() && !l2.is_empty() {
                    break (l1, l2);
                }
            };
            let a1 = if trial % 10 == 9 {
                PadicNumber::zero(ctx)
            } else {
                random_padic(&mut rng, ctx, -3, 3)
            };
            let a2 = random_padic(&mut rng, ctx, -3, 3);
            let combo = decomp
                .projector(&l1, ctx)?
                .scale(&a1)
                .add(&decomp.projector(&l2, ctx)?.scale(&a2))?;
            let expected = crate::linalg::sup_of_abs([a1.abs_value(), a2.abs_value()].into_iter());
            let got = combo.sup_norm();
            let ok = match (expected, got) {
                (AbsValue::Exact(e), AbsValue::Exact(g)) => e == g,
                // a1 = 0 contributes only its bound; the max is |a2|.
                (AbsValue::AtMost(_), _) => unreachable!("a2 is never precision-zero"),
                _ => false,
            };
            if !ok {
                return Err(SpectralError::OrthogonalityViolated(format!(
                    "trial {trial}: ‖a1·E({l1:?}) + a2·E({l2:?})‖ = {got:?}, expected {expected:?}"
                )));
            }
            pair_checks += 1;
        }
        // Vector identity over all nonempty index subsets.
        let x = PadicVector::new(
            (0..n)
                .map(|_| random_padic(&mut rng, ctx, -2, 4))
                .collect(),
        );
        let norm_x = match x.sup_norm() {
            AbsValue::Exact(e) => e,
            AbsValue::AtMost(_) => continue,
        };
        let mut best: Option<i64> = None;
        for mask in 1..(1usize << m) {
            let indices: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let px = decomp.projector(&indices, ctx)?.apply(&x)?;
            if let AbsValue::Exact(e) = px.sup_norm() {
                best = Some(best.map_or(e, |b| b.max(e)));
            }
        }
        if best != Some(norm_x) {
            return Err(SpectralError::OrthogonalityViolated(format!(
                "trial {trial}: max_L ‖E(L)x‖ = {best:?} but ‖x‖ = p^{norm_x}"
            )));
        }
        vector_checks += 1;
    }
    Ok(OrthogonalityReport {
        trials,
        pair_checks,
        vector_checks,
    })
}

/// Iterative peeling of a degenerate norm-one operator, following the
/// convergent-series construction: at each stage the residue scalar is
/// lifted to its canonical representative in `{0..p-1}` and subtracted.
pub fn proposition1_split(
    a: &PadicMatrix,
    ctx: &PrecisionContext,
) -> Result<Proposition1Split, SpectralError> {
    match a.sup_norm() {
        AbsValue::Exact(0) => {}
        _ => return Err(SpectralError::NormNotOne),
    }
    if a.reduce()?.is_scalar().is_none() {
        return Err(SpectralError::NotDegenerate);
    }
    let n = a.dim();
    let identity = PadicMatrix::identity(n, ctx);
    let mut g = PadicNumber::zero(ctx);
    // s_inv = (lambda_1 ... lambda_k)^{-1}, a growing positive power of p.
    let mut s_inv = PadicNumber::one(ctx);
    let mut current = a.clone();
    let mut steps = 0usize;
    loop {
        steps += 1;
        if s_inv.is_precision_zero() {
            return Err(SpectralError::PrecisionExhausted);
        }
        let nu = current
            .reduce()?
            .is_scalar()
            .expect("loop invariant: current is degenerate");
        let g_k = PadicNumber::from_integer(nu.value() as i64, ctx);
        g = g.add(&s_inv.mul(&g_k));
        let remainder = current.sub(&identity.scale(&g_k))?;
        match remainder.sup_norm() {
            AbsValue::AtMost(_) => {
                let a0 = a.sub(&identity.scale(&g))?;
                return Ok(Proposition1Split {
                    g,
                    a0,
                    lambda0: None,
                    non_degenerate_core: None,
                    scalar_case: true,
                    trivially_normal: true,
                    steps,
                });
            }
            AbsValue::Exact(m) => {
                debug_assert!(m < 0, "remainder norm must drop below 1");
                let lam = power_of_p(m, ctx)?; // the number p^m, |lam| = p^{-m} > 1
                s_inv = s_inv.mul(&power_of_p(-m, ctx)?);
                current = remainder.scale(&lam);
                if current.reduce()?.is_scalar().is_none() {
                    let a0 = a.sub(&identity.scale(&g))?;
                    let lambda0 = s_inv.inv().map_err(LinalgError::ContextMismatch)?;
                    return Ok(Proposition1Split {
                        g,
                        a0,
                        lambda0: Some(lambda0),
                        non_degenerate_core: Some(current),
                        scalar_case: false,
                        trivially_normal: false,
                        steps,
                    });
                }
            }
        }
    }
}

/// Per-sample resolvent data: `‖R_z‖ = p^norm_exp`, `dist(z, sigma) =
/// p^dist_exp`, so `‖R_z‖ * dist = p^(norm_exp + dist_exp)`.
#[derive(Debug, Clone)]
pub struct ResolventReport {
    pub samples: Vec<ResolventSample>,
    /// Exponent `k` of the smallest constant `p^k` that works.
    pub achieved_exponent: i64,
    pub bound_satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct ResolventSample {
    pub norm_exponent: i64,
    pub dist_exponent: i64,
}

/// Check `‖R_z(A)‖ <= C / dist(z, sigma(A))` at the given sample points.
pub fn resolvent_bound_check(
    a: &PadicMatrix,
    decomp: &SpectralDecomposition,
    sample_points: &[PadicNumber],
    c_bound: &BigRational,
    ctx: &PrecisionContext,
) -> Result<ResolventReport, SpectralError> {
    let n = a.dim();
    let identity = PadicMatrix::identity(n, ctx);
    let mut samples = Vec::with_capacity(sample_points.len());
    let mut achieved = i64::MIN;
    for (idx, z) in sample_points.iter().enumerate() {
        let mut dist: Option<i64> = None;
        for l in &decomp.eigenvalues {
            match z.sub(l).abs_value() {
                AbsValue::Exact(e) => dist = Some(dist.map_or(e, |d| d.min(e))),
                AbsValue::AtMost(_) => return Err(SpectralError::SampleOnSpectrum(idx)),
            }
        }
        let dist_exponent = dist.expect("decomposition has at least one eigenvalue");
        let shifted = a.sub(&identity.scale(z))?;
        let resolvent = shifted.inverse(ctx)?;
        let norm_exponent = match resolvent.sup_norm() {
            AbsValue::Exact(e) => e,
            AbsValue::AtMost(_) => {
                return Err(SpectralError::VerificationFailed(
                    "resolvent vanished to precision".into(),
                ))
            }
        };
        achieved = achieved.max(norm_exponent + dist_exponent);
        samples.push(ResolventSample {
            norm_exponent,
            dist_exponent,
        });
    }
    let bound_satisfied = power_exponent_le(ctx.prime(), achieved, c_bound);
    Ok(ResolventReport {
        samples,
        achieved_exponent: achieved,
        bound_satisfied,
    })
}

/// `p^k <= c`, exactly.
fn power_exponent_le(p: u64, k: i64, c: &BigRational) -> bool {
    let value = if k >= 0 {
        BigRational::from_integer(BigInt::from(p).pow(k as u32))
    } else {
        BigRational::new(BigInt::from(1), BigInt::from(p).pow((-k) as u32))
    };
    value <= *c
}

/// The full classification pipeline. The verdict applies to the normalized
/// operator; the scaling is disclosed in the report.
pub fn normality_verdict(
    a: &PadicMatrix,
    hints: Option<&[PadicNumber]>,
    ctx: &PrecisionContext,
) -> Result<NormalityReport, SpectralError> {
    let (lambda0, normalized) = a.normalize(ctx).map_err(|e| match e {
        LinalgError::ZeroMatrix => SpectralError::ZeroMatrix,
        other => SpectralError::Linalg(other),
    })?;
    let reduction = normalized.reduce()?;
    let residue_min_poly = reduction.minimal_polynomial();
    if reduction.is_scalar().is_some() {
        let split = proposition1_split(&normalized, ctx)?;
        return Ok(NormalityReport {
            lambda0,
            normalized,
            reduction,
            residue_min_poly,
            eigenvalue_source: None,
            verdict: Verdict::Degenerate(split),
        });
    }
    let (eigenvalues, source) = match eigenvalues_in_k(&normalized, hints, ctx)? {
        EigenvalueResult::AllFound {
            eigenvalues,
            source,
        } => (eigenvalues, source),
        EigenvalueResult::Undecided(reason) => {
            return Ok(NormalityReport {
                lambda0,
                normalized,
                reduction,
                residue_min_poly,
                eigenvalue_source: None,
                verdict: Verdict::Undecided(reason),
            });
        }
    };
    // Fast path: n distinct residues in F_p imply both the
    // squarefree condition over Q_p and diagonalizability of the reduction.
    let fast_path = {
        let all_simple = eigenvalues.iter().all(|(_, m)| *m == 1);
        let residues: Vec<u64> = eigenvalues
            .iter()
            .filter_map(|(l, _)| l.residue().ok().map(|r| r.value()))
            .collect();
        let mut sorted = residues.clone();
        sorted.sort_unstable();
        sorted.dedup();
        all_simple
            && residues.len() == eigenvalues.len()
            && sorted.len() == eigenvalues.len()
    };
    if !fast_path {
        if let DiagResult::No(witness) = reduction.is_diagonalizable() {
            return Ok(NormalityReport {
                lambda0,
                normalized,
                reduction,
                residue_min_poly,
                eigenvalue_source: Some(source),
                verdict: Verdict::NotNormal(NotNormalReason::NonDiagonalizableReduction(witness)),
            });
        }
        // A must itself be diagonalizable over Q_p: the product of
        // (A - lambda I) over the distinct eigenvalues is its squarefree
        // minimal polynomial candidate and must vanish.
        let identity = PadicMatrix::identity(normalized.dim(), ctx);
        let mut product = identity.clone();
        for (l, _) in &eigenvalues {
            product = product.mul(&normalized.sub(&identity.scale(l))?)?;
        }
        if !product.is_zero_to_precision() {
            return Ok(NormalityReport {
                lambda0,
                normalized,
                reduction,
                residue_min_poly,
                eigenvalue_source: Some(source),
                verdict: Verdict::NotNormal(NotNormalReason::NonSquarefreeMinPoly),
            });
        }
    }
    let decomp = spectral_idempotents(&normalized, &eigenvalues, ctx)?;
    Ok(NormalityReport {
        lambda0,
        normalized,
        reduction,
        residue_min_poly,
        eigenvalue_source: Some(source),
        verdict: Verdict::Normal(decomp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicError;

    fn ctx(p: u64) -> PrecisionContext {
        PrecisionContext::new(p, 32).unwrap()
    }

    fn int(v: i64, c: &PrecisionContext) -> PadicNumber {
        PadicNumber::from_integer(v, c)
    }

    #[test]
    fn degenerate_examples() {
        let c = ctx(5);
        // (1+5)I + 25*[[0,1],[1,0]]
        let a = PadicMatrix::from_integer_entries(2, &[6, 25, 25, 6], &c);
        assert_eq!(is_degenerate(&a).unwrap().map(|r| r.value()), Some(1));

        let b = PadicMatrix::from_integer_entries(2, &[0, 1, 0, 0], &c);
        assert_eq!(is_degenerate(&b).unwrap(), None);

        let id = PadicMatrix::identity(2, &c);
        assert_eq!(is_degenerate(&id).unwrap().map(|r| r.value()), Some(1));
    }

    #[test]
    fn degenerate_requires_norm_one() {
        let c = ctx(5);
        let a = PadicMatrix::from_integer_entries(2, &[5, 0, 0, 5], &c);
        assert!(matches!(
            is_degenerate(&a),
            Err(SpectralError::NormNotOne)
        ));
    }

    #[test]
    fn idempotents_swap_matrix() {
        let c = ctx(5);
        let a = PadicMatrix::from_integer_entries(2, &[0, 1, 1, 0], &c);
        let one = PadicNumber::one(&c);
        let eigs = vec![(one.clone(), 1usize), (one.neg(), 1usize)];
        let d = spectral_idempotents(&a, &eigs, &c).unwrap();
        let half = PadicNumber::from_rational(1, 2, &c).unwrap();
        // E_1 = [[1/2,1/2],[1/2,1/2]]
        for i in 0..2 {
            for j in 0..2 {
                assert!(d.idempotents[0].get(i, j).eq_to_precision(&half));
            }
        }
        assert_eq!(d.idempotents[0].sup_norm(), AbsValue::Exact(0));
        assert!(d.flags.all_verified());
    }

    #[test]
    fn idempotents_diagonal() {
        let c = ctx(5);
        let a = PadicMatrix::from_integer_entries(2, &[0, 0, 0, 1], &c);
        let eigs = vec![(int(0, &c), 1usize), (int(1, &c), 1usize)];
        let d = spectral_idempotents(&a, &eigs, &c).unwrap();
        assert!(d.idempotents[0].get(0, 0).eq_to_precision(&int(1, &c)));
        assert!(d.idempotents[1].get(1, 1).eq_to_precision(&int(1, &c)));
    }

    #[test]
    fn idempotents_detect_hidden_jordan() {
        let c = ctx(5);
        // Eigenvalue 1 with a genuine Jordan block: not diagonalizable.
        let a = PadicMatrix::from_integer_entries(3, &[0, 0, 0, 0, 1, 1, 0, 0, 1], &c);
        let eigs = vec![(int(0, &c), 1usize), (int(1, &c), 2usize)];
        assert!(matches!(
            spectral_idempotents(&a, &eigs, &c),
            Err(SpectralError::VerificationFailed(_))
        ));
    }

    #[test]
    fn eigenvalue_collision_detected() {
        let c = ctx(5);
        let close = int(1, &c).add(&crate::linalg::power_of_p(20, &c).unwrap());
        let a = PadicMatrix::diagonal(&[int(1, &c), close.clone()], &c);
        let eigs = vec![(int(1, &c), 1usize), (close, 1usize)];
        assert!(matches!(
            spectral_idempotents(&a, &eigs, &c),
            Err(SpectralError::EigenvalueCollision(0, 1))
        ));
    }

    #[test]
    fn function_calculus_identity_and_square() {
        let c = ctx(5);
        let a = PadicMatrix::from_integer_entries(2, &[0, 1, 1, 0], &c);
        let one = PadicNumber::one(&c);
        let eigs = vec![(one.clone(), 1usize), (one.neg(), 1usize)];
        let d = spectral_idempotents(&a, &eigs, &c).unwrap();

        // f = id reproduces A.
        let id_vals: Vec<(PadicNumber, PadicNumber)> = d
            .eigenvalues
            .iter()
            .map(|l| (l.clone(), l.clone()))
            .collect();
        assert!(function_calculus(&d, &id_vals, &c)
            .unwrap()
            .eq_to_precision(&a));

        // f = 1 gives the decomposition of unity.
        let one_vals: Vec<(PadicNumber, PadicNumber)> = d
            .eigenvalues
            .iter()
            .map(|l| (l.clone(), one.clone()))
            .collect();
        assert!(function_calculus(&d, &one_vals, &c)
            .unwrap()
            .eq_to_precision(&PadicMatrix::identity(2, &c)));

        // f(l) = l^2 matches A^2.
        let sq_vals: Vec<(PadicNumber, PadicNumber)> = d
            .eigenvalues
            .iter()
            .map(|l| (l.clone(), l.mul(l)))
            .collect();
        assert!(function_calculus(&d, &sq_vals, &c)
            .unwrap()
            .eq_to_precision(&a.mul(&a).unwrap()));
    }

    #[test]
    fn function_calculus_missing_value() {
        let c = ctx(5);
        let a = PadicMatrix::from_integer_entries(2, &[0, 0, 0, 1], &c);
        let eigs = vec![(int(0, &c), 1usize), (int(1, &c), 1usize)];
        let d = spectral_idempotents(&a, &eigs, &c).unwrap();
        assert!(matches!(
            function_calculus(&d, &[(int(0, &c), int(7, &c))], &c),
            Err(SpectralError::MissingValue(1))
        ));
    }

    #[test]
    fn orthogonality_passes_on_verified_decomposition() {
        let c = ctx(5);
        let a = PadicMatrix::diagonal(&[int(0, &c), int(1, &c), int(2, &c), int(3, &c)], &c);
        let eigs: Vec<(PadicNumber, usize)> =
            (0..4).map(|i| (int(i, &c), 1usize)).collect();
        let d = spectral_idempotents(&a, &eigs, &c).unwrap();
        let report = check_orthogonality(&d, 100, 7, &c).unwrap();
        assert_eq!(report.trials, 100);
        assert!(report.pair_checks > 0);
        assert!(report.vector_checks > 0);
    }

    #[test]
    fn split_pure_scalar() {
        let c = ctx(5);
        let a = PadicMatrix::identity(3, &c).scale(&int(7, &c));
        let s = proposition1_split(&a, &c).unwrap();
        assert!(s.scalar_case);
        assert!(s.trivially_normal);
        assert!(s.g.eq_to_precision(&int(7, &c)));
        assert!(s.a0.is_zero_to_precision());
    }

    #[test]
    fn split_one_step() {
        let c = ctx(5);
        // A = 31 I + 5 * [[0,1],[1,0]]
        let a = PadicMatrix::from_integer_entries(2, &[31, 5, 5, 31], &c);
        let s = proposition1_split(&a, &c).unwrap();
        assert!(!s.scalar_case);
        // Peeling stops at the first non-degenerate rescaled remainder:
        // A - 1*I = 5 * (6I + swap), whose reduction is not scalar.
        assert!(s.g.eq_to_precision(&int(1, &c)));
        let core = s.non_degenerate_core.as_ref().unwrap();
        let expected_core = PadicMatrix::from_integer_entries(2, &[6, 1, 1, 6], &c);
        assert!(core.eq_to_precision(&expected_core));
        // lambda0 = 1/5: |lambda0 * A0| = 1.
        let l0 = s.lambda0.as_ref().unwrap();
        assert_eq!(l0.valuation(), Some(-1));
        // Reconstruction A = gI + A0.
        let back = PadicMatrix::identity(2, &c)
            .scale(&s.g)
            .add(&s.a0)
            .unwrap();
        assert!(back.eq_to_precision(&a));
    }

    #[test]
    fn split_multi_step() {
        let c = ctx(5);
        // Nested scalars: A = (1 + 2*5 + 3*25) I + 125 * [[0,1],[0,0]]-ish core
        let g_true = 1 + 2 * 5 + 3 * 25;
        let mut a = PadicMatrix::identity(2, &c).scale(&int(g_true, &c));
        let core = PadicMatrix::from_integer_entries(2, &[0, 1, 2, 0], &c);
        a = a.add(&core.scale(&int(125, &c))).unwrap();
        let s = proposition1_split(&a, &c).unwrap();
        assert!(!s.scalar_case);
        assert!(s.steps >= 2);
        assert!(s.g.eq_to_precision(&int(g_true, &c)));
        assert!(s.non_degenerate_core.as_ref().unwrap().eq_to_precision(&core));
        let back = PadicMatrix::identity(2, &c)
            .scale(&s.g)
            .add(&s.a0)
            .unwrap();
        assert!(back.eq_to_precision(&a));
    }

    #[test]
    fn split_rejects_non_degenerate() {
        let c = ctx(5);
        let a = PadicMatrix::from_integer_entries(2, &[0, 1, 1, 0], &c);
        assert!(matches!(
            proposition1_split(&a, &c),
            Err(SpectralError::NotDegenerate)
        ));
    }

    #[test]
    fn resolvent_diag_example() {
        let c = ctx(5);
        let a = PadicMatrix::diagonal(&[int(0, &c), int(1, &c)], &c);
        let eigs = vec![(int(0, &c), 1usize), (int(1, &c), 1usize)];
        let d = spectral_idempotents(&a, &eigs, &c).unwrap();
        let z = int(5, &c);
        let one = BigRational::from_integer(BigInt::from(1));
        let report = resolvent_bound_check(&a, &d, &[z], &one, &c).unwrap();
        assert_eq!(report.samples[0].norm_exponent, 1); // ‖R_z‖ = 5
        assert_eq!(report.samples[0].dist_exponent, -1); // dist = 1/5
        assert_eq!(report.achieved_exponent, 0);
        assert!(report.bound_satisfied);
    }

    #[test]
    fn resolvent_far_point() {
        let c = ctx(5);
        let a = PadicMatrix::diagonal(&[int(0, &c), int(1, &c)], &c);
        let eigs = vec![(int(0, &c), 1usize), (int(1, &c), 1usize)];
        let d = spectral_idempotents(&a, &eigs, &c).unwrap();
        // |z| > 1: ‖R_z‖ = 1/|z| = 1/dist.
        let z = PadicNumber::from_rational(1, 5, &c).unwrap();
        let one = BigRational::from_integer(BigInt::from(1));
        let report = resolvent_bound_check(&a, &d, &[z], &one, &c).unwrap();
        assert_eq!(report.samples[0].norm_exponent, -1);
        assert_eq!(report.samples[0].dist_exponent, 1);
        assert!(report.bound_satisfied);
    }

    #[test]
    fn resolvent_on_spectrum_rejected() {
        let c = ctx(5);
        let a = PadicMatrix::diagonal(&[int(0, &c), int(1, &c)], &c);
        let eigs = vec![(int(0, &c), 1usize), (int(1, &c), 1usize)];
        let d = spectral_idempotents(&a, &eigs, &c).unwrap();
        assert!(matches!(
            resolvent_bound_check(&a, &d, &[int(1, &c)], &BigRational::from_integer(BigInt::from(1)), &c),
            Err(SpectralError::SampleOnSpectrum(0))
        ));
    }

    #[test]
    fn verdict_diag_normal() {
        let c = ctx(5);
        let a = PadicMatrix::diagonal(&[int(0, &c), int(1, &c), int(2, &c), int(3, &c)], &c);
        let report = normality_verdict(&a, None, &c).unwrap();
        match report.verdict {
            Verdict::Normal(d) => {
                assert_eq!(d.idempotents.len(), 4);
                // Coordinate projections.
                for (i, e) in d.idempotents.iter().enumerate() {
                    for r in 0..4 {
                        for cc in 0..4 {
                            let expect = if r == i && cc == i { 1 } else { 0 };
                            assert!(e.get(r, cc).eq_to_precision(&int(expect, &c)));
                        }
                    }
                }
            }
            other => panic!("expected Normal, got {other:?}"),
        }
    }

    #[test]
    fn verdict_swap_q2_not_normal_with_hints() {
        let c = ctx(2);
        let a = PadicMatrix::from_integer_entries(2, &[0, 1, 1, 0], &c);
        // Without hints: Undecided (repeated residue roots).
        let report = normality_verdict(&a, None, &c).unwrap();
        assert!(matches!(report.verdict, Verdict::Undecided(_)));
        // With hints: eigenvalues certified, but the reduction is a Jordan
        // block mod 2 -> NotNormal.
        let one = PadicNumber::one(&c);
        let hints = vec![one.clone(), one.neg()];
        let report = normality_verdict(&a, Some(&hints), &c).unwrap();
        assert!(matches!(
            report.verdict,
            Verdict::NotNormal(NotNormalReason::NonDiagonalizableReduction(_))
        ));
    }

    #[test]
    fn verdict_degenerate() {
        let c = ctx(5);
        let a = PadicMatrix::from_integer_entries(2, &[31, 5, 5, 31], &c);
        let report = normality_verdict(&a, None, &c).unwrap();
        assert!(matches!(report.verdict, Verdict::Degenerate(_)));
    }

    #[test]
    fn verdict_zero_matrix() {
        let c = ctx(5);
        let a = PadicMatrix::zero(2, &c);
        assert!(matches!(
            normality_verdict(&a, None, &c),
            Err(SpectralError::ZeroMatrix)
        ));
    }

    #[test]
    fn random_padic_stays_in_range() {
        let c = ctx(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = random_padic(&mut rng, &c, -2, 4);
            let v = x.valuation().unwrap();
            assert!((-2..=4).contains(&v));
        }
    }

    #[test]
    fn reconstruction_from_idempotents() {
        let c = ctx(7);
        let a = PadicMatrix::from_integer_entries(2, &[0, 1, 1, 0], &c);
        let report = normality_verdict(&a, None, &c).unwrap();
        let d = match report.verdict {
            Verdict::Normal(d) => d,
            other => panic!("expected Normal, got {other:?}"),
        };
        let mut sum = PadicMatrix::zero(2, &c);
        for (l, e) in d.eigenvalues.iter().zip(&d.idempotents) {
            sum = sum.add(&e.scale(l)).unwrap();
        }
        assert!(sum.eq_to_precision(&a));
    }

    #[test]
    fn context_error_converts() {
        // Exercise the From<LinalgError> path.
        let e: SpectralError = LinalgError::ContextMismatch(PadicError::ContextMismatch(2, 3)).into();
        assert!(matches!(e, SpectralError::Linalg(_)));
    }
}
