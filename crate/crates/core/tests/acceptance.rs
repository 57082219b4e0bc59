//! End-to-end acceptance suite. Each test covers one numbered criterion and
//! prints a single PASS line on success (visible with `--nocapture`).

use std::io::Write as _;
use std::process::{Command, Stdio};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_spectral::gallery::{
    check_dilation_identity, check_mahler_identities, ccr_commutator_report, dilation,
    mahler_shift_coeff, multiplication_operator, number_operator, shift_operator,
};
use padic_spectral::linalg::PadicMatrix;
use padic_spectral::padic::{
    rational_abs_exponent, AbsValue, PadicNumber, PrecisionContext,
};
use padic_spectral::residue::{DiagResult, ResidueMatrix};
use padic_spectral::spectral::{
    check_orthogonality, normality_verdict, proposition1_split, random_padic,
    resolvent_bound_check, spectral_idempotents, NotNormalReason, SpectralDecomposition, Verdict,
};

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn ctx(p: u64) -> PrecisionContext {
    PrecisionContext::new(p, 32).unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng) -> (i64, i64) {
    let num = loop {
        let v = rng.gen_range(-1_000_000i64..=1_000_000);
        if v != 0 {
            break v;
        }
    };
    let den = loop {
        let v = rng.gen_range(-1_000_000i64..=1_000_000);
        if v != 0 {
            break v;
        }
    };
    (num, den)
}

#[test]
fn criterion_01_ultrametric_suite() {
    for &p in &PRIMES {
        let c = ctx(p);
        let mut rng = ChaCha8Rng::seed_from_u64(101 + p);
        for _ in 0..1000 {
            let (an, ad) = random_rational(&mut rng);
            let (bn, bd) = random_rational(&mut rng);
            let x = PadicNumber::from_rational(an, ad, &c).unwrap();
            let y = PadicNumber::from_rational(bn, bd, &c).unwrap();
            let vx = x.valuation().unwrap();
            let vy = y.valuation().unwrap();
            match x.add(&y).valuation() {
                Some(vs) => {
                    assert!(vs >= vx.min(vy), "p={p}: v(x+y) < min");
                    if vx != vy {
                        assert_eq!(vs, vx.min(vy), "p={p}: strict triangle violated");
                    }
                }
                None => assert_eq!(vx, vy, "p={p}: cancellation needs equal valuations"),
            }
            assert_eq!(
                x.mul(&y).valuation().unwrap(),
                vx + vy,
                "p={p}: v(xy) != v(x)+v(y)"
            );
        }
    }
    println!("PASS: criterion 1 - ultrametric and multiplicativity, 1000 pairs per prime");
}

fn exhaustive_oracle_check(p: u64, n: usize) -> usize {
    let total = (p as u64).pow((n * n) as u32);
    let mut checked = 0;
    for code in 0..total {
        let mut rest = code;
        let mut entries = vec![0u64; n * n];
        for e in entries.iter_mut() {
            *e = rest % p;
            rest /= p;
        }
        let m = ResidueMatrix::new(p, n, entries);
        let fast = matches!(m.is_diagonalizable(), DiagResult::Yes(_));
        let slow = m.brute_force_diagonalizable().unwrap();
        assert_eq!(fast, slow, "oracle disagreement: p={p} n={n} code={code}");
        checked += 1;
    }
    checked
}

#[test]
fn criterion_02_diagonalizability_oracle() {
    let mut total = 0;
    for p in [2u64, 3] {
        total += exhaustive_oracle_check(p, 2);
        total += exhaustive_oracle_check(p, 3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..1000 {
        let entries: Vec<u64> = (0..16).map(|_| rng.gen_range(0..5)).collect();
        let m = ResidueMatrix::new(5, 4, entries);
        let fast = matches!(m.is_diagonalizable(), DiagResult::Yes(_));
        let slow = m.brute_force_diagonalizable().unwrap();
        assert_eq!(fast, slow, "oracle disagreement on random 4x4 over F_5");
        total += 1;
    }
    println!("PASS: criterion 2 - diagonalizability oracle agreement on {total} matrices");
}

#[test]
fn criterion_03_cayley_hamilton() {
    let mut checked = 0;
    for &p in &PRIMES {
        let c = ctx(p);
        let mut rng = ChaCha8Rng::seed_from_u64(303 + p);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let entries: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-100..=100)).collect();
            let m = PadicMatrix::from_integer_entries(n, &entries, &c);
            let chi = m.charpoly();
            assert!(
                chi.eval_matrix(&m, &c).unwrap().is_zero_to_precision(),
                "Cayley-Hamilton failed: p={p} n={n}"
            );
            checked += 1;
        }
    }
    println!("PASS: criterion 3 - Cayley-Hamilton on {checked} random integral matrices");
}

fn multiplication_normal_decomposition() -> (PadicMatrix, SpectralDecomposition, PrecisionContext)
{
    let c = ctx(3);
    let a = multiplication_operator(3, &c);
    let hints: Vec<PadicNumber> = (0..9).map(|i| PadicNumber::from_integer(i, &c)).collect();
    let report = normality_verdict(&a, Some(&hints), &c).unwrap();
    let Verdict::Normal(d) = report.verdict else {
        panic!("multiplication operator must be Normal, got {:?}", report.verdict);
    };
    (a, d, c)
}

#[test]
fn criterion_04_multiplication_operator() {
    let (a, d, _) = multiplication_normal_decomposition();
    assert!(d.flags.all_verified());
    // The reduction splits into three identical 3x3 blocks.
    let red = a.reduce().unwrap();
    for b in 1..3usize {
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(
                    red.get(i, j),
                    red.get(b * 3 + i, b * 3 + j),
                    "blocks differ"
                );
            }
        }
    }
    for i in 0..9 {
        for j in 0..9 {
            if i / 3 != j / 3 {
                assert_eq!(red.get(i, j), 0, "cross-block entry nonzero");
            }
        }
    }
    // Each block is diagonalizable with all residues distinct.
    let block_entries: Vec<u64> = (0..3)
        .flat_map(|i| (0..3).map(|j| red.get(i, j)).collect::<Vec<_>>())
        .collect();
    let block = ResidueMatrix::new(3, 3, block_entries);
    assert!(matches!(block.is_diagonalizable(), DiagResult::Yes(_)));
    println!("PASS: criterion 4 - multiplication operator (p=3, size 9) Normal with verified block reduction");
}

#[test]
fn criterion_05_shift_operator() {
    let c = ctx(3);
    for m in 3..=6 {
        let a = shift_operator(m, &c);
        let report = normality_verdict(&a, None, &c).unwrap();
        match report.verdict {
            Verdict::NotNormal(NotNormalReason::NonDiagonalizableReduction(_)) => {}
            other => panic!("shift operator size {m}: expected NotNormal, got {other:?}"),
        }
        // The residue minimal polynomial is the full power (x-1)^m.
        let x_minus_1 = padic_spectral::residue::ResiduePoly::new(3, vec![2, 1]);
        let mut power = padic_spectral::residue::ResiduePoly::new(3, vec![1]);
        for _ in 0..m {
            power = power.mul(&x_minus_1);
        }
        assert_eq!(report.residue_min_poly, power, "size {m}");
    }
    for &p in &PRIMES {
        for n in 0..=30 {
            let v = mahler_shift_coeff(n);
            assert_eq!(
                rational_abs_exponent(v.numer(), v.denom(), p),
                Some(0),
                "|P_{n}(-1)|_{p} != 1"
            );
        }
    }
    println!("PASS: criterion 5 - shift operator NotNormal with (x-1)^m witness; unit shift coefficients");
}

fn dilation_normal_decomposition() -> (PadicMatrix, SpectralDecomposition, PrecisionContext) {
    let c = ctx(7);
    let a = PadicNumber::zero(&c);
    let b = dilation(&a, 2, &c).unwrap();
    let report = normality_verdict(&b, None, &c).unwrap();
    let Verdict::Normal(d) = report.verdict else {
        panic!("dilation must be Normal, got {:?}", report.verdict);
    };
    (b, d, c)
}

#[test]
fn criterion_06_dilation() {
    let c = ctx(7);
    let a = PadicNumber::zero(&c);
    let b = dilation(&a, 2, &c).unwrap();
    // Exhaustive-search oracle for the reduction eigenvalues.
    let red = b.reduce().unwrap();
    let chi = red.charpoly();
    let mut by_search: Vec<u64> = (0..7).filter(|&x| chi.eval(x) == 0).collect();
    by_search.sort_unstable();
    assert_eq!(by_search, vec![3, 5, 6]);

    let (_, d, _) = dilation_normal_decomposition();
    let full_chi = b.charpoly();
    for l in &d.eigenvalues {
        assert!(
            full_chi.eval(l).is_precision_zero(),
            "lifted eigenvalue is not a charpoly root to precision 32"
        );
    }
    check_dilation_identity(&a, 2, 100, 606, &c).unwrap();
    println!("PASS: criterion 6 - dilation (a=0, n=2, p=7): eigenvalues {{3,5,6}}, Hensel lifts verified, identity on 100 vectors");
}

#[test]
fn criterion_07_spectral_certificates() {
    for (label, (a, d, c)) in [
        ("multiplication", multiplication_normal_decomposition()),
        ("dilation", dilation_normal_decomposition()),
    ] {
        assert!(d.flags.all_verified(), "{label}: flags");
        // Reconstruction sum lambda_i E_i = A.
        let mut sum = PadicMatrix::zero(a.dim(), &c);
        for (l, e) in d.eigenvalues.iter().zip(&d.idempotents) {
            sum = sum.add(&e.scale(l)).unwrap();
        }
        assert!(sum.eq_to_precision(&a), "{label}: reconstruction");
        let report = check_orthogonality(&d, 100, 707, &c).unwrap();
        assert_eq!(report.trials, 100, "{label}: trials");
        assert_eq!(report.pair_checks, 100, "{label}: pair checks");
        assert_eq!(report.vector_checks, 100, "{label}: vector checks");
    }
    println!("PASS: criterion 7 - certificate flags, reconstruction, and 100 orthogonality draws per operator");
}

#[test]
fn criterion_08_degenerate_roundtrip() {
    let mut checked = 0;
    for &p in &PRIMES {
        let c = ctx(p);
        let mut rng = ChaCha8Rng::seed_from_u64(808 + p);
        for _ in 0..25 {
            let n = rng.gen_range(2..=4);
            // Forward construction: A = (sum of digits g_k p^k) I + p^depth * core,
            // with a core whose reduction is not scalar.
            let depth = rng.gen_range(1..=5) as u32;
            let mut g_digits = vec![rng.gen_range(1..p) as i64];
            for _ in 1..depth {
                g_digits.push(rng.gen_range(0..p) as i64);
            }
            let core = loop {
                let entries: Vec<i64> =
                    (0..n * n).map(|_| rng.gen_range(0..p as i64)).collect();
                let m = PadicMatrix::from_integer_entries(n, &entries, &c);
                if m.sup_norm() == AbsValue::Exact(0)
                    && m.reduce().unwrap().is_scalar().is_none()
                {
                    break m;
                }
            };
            let g_value: i64 = g_digits
                .iter()
                .enumerate()
                .map(|(k, d)| d * (p as i64).pow(k as u32))
                .sum();
            let g = PadicNumber::from_integer(g_value, &c);
            let shift = PadicNumber::from_integer((p as i64).pow(depth), &c);
            let a = PadicMatrix::identity(n, &c)
                .scale(&g)
                .add(&core.scale(&shift))
                .unwrap();

            let split = proposition1_split(&a, &c).unwrap();
            // Roundtrip: ||A - (gI + A0)|| <= p^(-28).
            let back = PadicMatrix::identity(n, &c)
                .scale(&split.g)
                .add(&split.a0)
                .unwrap();
            match a.sub(&back).unwrap().sup_norm() {
                AbsValue::Exact(e) => assert!(e <= -28, "p={p}: residual p^{e}"),
                AbsValue::AtMost(e) => assert!(e <= -28, "p={p}: residual bound p^{e}"),
            }
            // Forward parameters are recovered exactly.
            assert!(!split.scalar_case, "p={p}: core lost");
            assert!(split.g.eq_to_precision(&g), "p={p}: g mismatch");
            assert!(
                split
                    .non_degenerate_core
                    .as_ref()
                    .unwrap()
                    .eq_to_precision(&core),
                "p={p}: core mismatch"
            );
            // Zero digits in g let one peeling step cross several levels.
            assert!(split.steps as u32 <= depth, "p={p}: step count");
            checked += 1;
        }
    }
    assert_eq!(checked, 100);
    println!("PASS: criterion 8 - degenerate split roundtrip on 100 synthesized operators, residual <= p^-28");
}

#[test]
fn criterion_09_resolvent_bound() {
    let mut max_achieved = i64::MIN;
    for (p, size) in [(5u64, 4usize), (7, 6)] {
        let c = ctx(p);
        let a = number_operator(size, &c);
        let eigs: Vec<(PadicNumber, usize)> = (0..size as i64)
            .map(|i| (PadicNumber::from_integer(i, &c), 1))
            .collect();
        let d = spectral_idempotents(&a, &eigs, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(909 + p);
        let mut points = Vec::new();
        while points.len() < 50 {
            let z = random_padic(&mut rng, &c, -3, 3);
            if d.eigenvalues.iter().all(|l| !z.sub(l).is_precision_zero()) {
                points.push(z);
            }
        }
        let one = BigRational::from_integer(BigInt::from(1));
        let report = resolvent_bound_check(&a, &d, &points, &one, &c).unwrap();
        assert!(report.bound_satisfied, "p={p}: C=1 violated");
        assert_eq!(report.samples.len(), 50);
        max_achieved = max_achieved.max(report.achieved_exponent);
    }
    println!(
        "PASS: criterion 9 - resolvent bound with C=1 over 50 samples per instance (achieved constant p^{max_achieved})"
    );
}

#[test]
fn criterion_10_mahler_and_ccr() {
    let report = check_mahler_identities(30).unwrap();
    assert_eq!(report.recurrence_checked, 31);
    assert_eq!(report.shift_expansion_checked, 31);
    let c = ctx(5);
    for m in 2..=20 {
        let r = ccr_commutator_report(m, &c).unwrap();
        assert_eq!(r.identity_indices, m - 1, "truncation {m}");
    }
    println!("PASS: criterion 10 - Mahler identities to n=30; CCR commutator identity for truncations to 20");
}

fn run_cli(args: &[&str], stdin: Option<&str>) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_padic-spectral"));
    cmd.args(args)
        .env_remove("PADIC_PRECISION")
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    if stdin.is_some() {
        cmd.stdin(Stdio::piped());
    }
    let mut child = cmd.spawn().expect("spawn CLI");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    let out = child.wait_with_output().expect("CLI exits");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn criterion_11_cli_golden_pipelines() {
    let cases: [(&[&str], &str, i32); 3] = [
        (
            &["example", "multiplication", "--blocks", "3", "--p", "3"],
            "verdict: Normal",
            0,
        ),
        (&["example", "shift", "--size", "4", "--p", "3"], "verdict: NotNormal", 1),
        (
            &["example", "dilation", "--a", "0", "--n", "2", "--p", "7"],
            "verdict: Normal",
            0,
        ),
    ];
    for (example_args, expected_verdict, expected_code) in cases {
        let (doc1, _, code) = run_cli(example_args, None);
        assert_eq!(code, 0, "{example_args:?} failed");
        let (doc2, _, _) = run_cli(example_args, None);
        assert_eq!(doc1, doc2, "{example_args:?} not byte-stable");
        let (out1, _, code1) = run_cli(&["normal", "-"], Some(&doc1));
        let (out2, _, code2) = run_cli(&["normal", "-"], Some(&doc1));
        assert_eq!(out1, out2, "{example_args:?} verdict not byte-stable");
        assert_eq!(code1, expected_code, "{example_args:?} exit code\n{out1}");
        assert_eq!(code2, expected_code);
        assert!(
            out1.contains(expected_verdict),
            "{example_args:?}: missing {expected_verdict:?} in\n{out1}"
        );
    }
    println!("PASS: criterion 11 - example|normal pipelines byte-identical with documented verdicts");
}
