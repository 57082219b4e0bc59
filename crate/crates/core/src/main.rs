//! Command-line front end: parse matrix documents, run verdicts and
//! decompositions, generate gallery examples, and emit certificates.
//!
//! Exit codes: 0 verified/Normal, 1 NotNormal, 2 precondition or parse
//! failure, 3 Undecided, 4 Degenerate.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use padic_spectral::doc::MatrixDocument;
use padic_spectral::gallery;
use padic_spectral::linalg::{eigenvalues_in_k, EigenvalueResult, PadicMatrix};
use padic_spectral::padic::{
    parse_rational, AbsValue, PadicNumber, PrecisionContext, DEFAULT_PRECISION,
};
use padic_spectral::spectral::{
    check_orthogonality, normality_verdict, proposition1_split, random_padic,
    resolvent_bound_check, NormalityReport, NotNormalReason, SpectralDecomposition, Verdict,
};

#[derive(Parser)]
#[command(
    name = "padic-spectral",
    about = "Exact p-adic matrix norms, reductions, eigenvalues and spectral certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sup-norm of the matrix and the normalizing scalar
    Norm(InputArgs),
    /// Print the residue matrix over F_p
    Reduce(ReduceArgs),
    /// Print the monic characteristic polynomial
    Charpoly(InputArgs),
    /// Find the eigenvalues in Q_p, or report why they are undecided
    Eigen(EigenArgs),
    /// Classify the operator and print the certificate
    Normal(NormalArgs),
    /// Re-verify a Normal operator with randomized orthogonality and
    /// resolvent checks
    Verify(VerifyArgs),
    /// Split an operator with scalar reduction into g*I + A0
    Split(InputArgs),
    /// Emit a gallery example as a matrix document
    Example(ExampleArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Matrix document path, or "-" for standard input
    file: String,
    /// Working precision; overrides PADIC_PRECISION and the document
    #[arg(long)]
    precision: Option<i64>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Rescale to norm one before reducing
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct EigenArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated rational eigenvalue hints; overrides the document
    #[arg(long)]
    hints: Option<String>,
}

#[derive(Args)]
struct NormalArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated rational eigenvalue hints; overrides the document
    #[arg(long)]
    hints: Option<String>,
    /// Emit the machine-readable certificate
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated rational eigenvalue hints; overrides the document
    #[arg(long)]
    hints: Option<String>,
    /// Number of randomized orthogonality trials
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// RNG seed; identical seeds give byte-identical output
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Resolvent constant, as a rational
    #[arg(long = "C", default_value = "1")]
    c_bound: String,
    /// Number of off-spectrum resolvent sample points
    #[arg(long, default_value_t = 50)]
    samples: usize,
}

#[derive(Args)]
struct ExampleArgs {
    /// One of: number, ccr, multiplication, shift, dilation, affine-block
    name: String,
    /// Prime of the coefficient field
    #[arg(long)]
    p: u64,
    /// Matrix size (number, ccr, shift)
    #[arg(long)]
    size: Option<usize>,
    /// Number of blocks (multiplication)
    #[arg(long)]
    blocks: Option<usize>,
    /// Dilated cell size (dilation)
    #[arg(long)]
    n: Option<usize>,
    /// Diagonal parameter of the dilation, as a rational
    #[arg(long)]
    a: Option<String>,
    /// Multiplier of the exponent permutation (affine-block)
    #[arg(long)]
    alpha: Option<u64>,
    /// Level of the exponent permutation (affine-block)
    #[arg(long, default_value_t = 1)]
    level: u32,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<u8, String> {
    match Cli::parse().command {
        Command::Norm(args) => cmd_norm(&args),
        Command::Reduce(args) => cmd_reduce(&args),
        Command::Charpoly(args) => cmd_charpoly(&args),
        Command::Eigen(args) => cmd_eigen(&args),
        Command::Normal(args) => cmd_normal(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Split(args) => cmd_split(&args),
        Command::Example(args) => cmd_example(&args),
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading standard input: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn resolve_precision(flag: Option<i64>, doc: Option<i64>) -> i64 {
    flag.or_else(|| {
        std::env::var("PADIC_PRECISION")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .or(doc)
    .unwrap_or(DEFAULT_PRECISION)
}

fn load(args: &InputArgs) -> Result<(MatrixDocument, PrecisionContext, PadicMatrix), String> {
    let text = read_input(&args.file)?;
    let doc = MatrixDocument::from_json(&text).map_err(|e| e.to_string())?;
    let precision = resolve_precision(args.precision, doc.precision);
    let ctx = PrecisionContext::new(doc.p, precision).map_err(|e| e.to_string())?;
    let matrix = doc.to_matrix(&ctx).map_err(|e| e.to_string())?;
    Ok((doc, ctx, matrix))
}

fn parse_hint_list(text: &str, ctx: &PrecisionContext) -> Result<Vec<PadicNumber>, String> {
    text.split(',')
        .map(|part| {
            let (num, den) =
                parse_rational(part).ok_or_else(|| format!("bad hint rational {part:?}"))?;
            PadicNumber::from_big_rational(&num, &den, ctx).map_err(|e| e.to_string())
        })
        .collect()
}

fn gather_hints(
    flag: &Option<String>,
    doc: &MatrixDocument,
    ctx: &PrecisionContext,
) -> Result<Option<Vec<PadicNumber>>, String> {
    if let Some(text) = flag {
        return Ok(Some(parse_hint_list(text, ctx)?));
    }
    doc.hint_numbers(ctx).map_err(|e| e.to_string())
}

/// `p^m` rendered as an exact rational.
fn power_string(p: u64, m: i64) -> String {
    if m >= 0 {
        BigInt::from(p).pow(m as u32).to_string()
    } else {
        format!("1/{}", BigInt::from(p).pow((-m) as u32))
    }
}

fn norm_string(p: u64, norm: AbsValue) -> String {
    match norm {
        AbsValue::Exact(m) => power_string(p, m),
        AbsValue::AtMost(m) => format!("<= {}", power_string(p, m)),
    }
}

fn cmd_norm(args: &InputArgs) -> Result<u8, String> {
    let (_, ctx, matrix) = load(args)?;
    println!("||A|| = {}", norm_string(ctx.prime(), matrix.sup_norm()));
    match matrix.normalize(&ctx) {
        Ok((lambda0, _)) => println!("lambda0 = {lambda0}"),
        Err(_) => println!("lambda0 = undefined (A = 0 to precision)"),
    }
    Ok(0)
}

fn cmd_reduce(args: &ReduceArgs) -> Result<u8, String> {
    let (_, ctx, matrix) = load(&args.input)?;
    let target = if args.normalize {
        matrix
            .normalize(&ctx)
            .map(|(_, m)| m)
            .map_err(|e| e.to_string())?
    } else {
        matrix
    };
    let reduced = target
        .reduce()
        .map_err(|_| "matrix has entries of norm > 1; pass --normalize to rescale".to_string())?;
    for i in 0..reduced.dim() {
        let row: Vec<String> = (0..reduced.dim())
            .map(|j| reduced.get(i, j).to_string())
            .collect();
        println!("{}", row.join(" "));
    }
    Ok(0)
}

fn cmd_charpoly(args: &InputArgs) -> Result<u8, String> {
    let (_, _, matrix) = load(args)?;
    let chi = matrix.charpoly();
    for (k, c) in chi.coeffs().iter().enumerate() {
        println!("lambda^{k}: {c}");
    }
    Ok(0)
}

fn cmd_eigen(args: &EigenArgs) -> Result<u8, String> {
    let (doc, ctx, matrix) = load(&args.input)?;
    let hints = gather_hints(&args.hints, &doc, &ctx)?;
    match eigenvalues_in_k(&matrix, hints.as_deref(), &ctx).map_err(|e| e.to_string())? {
        EigenvalueResult::AllFound {
            eigenvalues,
            source,
        } => {
            println!("eigenvalues found ({source:?})");
            for (l, m) in &eigenvalues {
                println!("lambda = {l}  (multiplicity {m})");
            }
            Ok(0)
        }
        EigenvalueResult::Undecided(reason) => {
            println!("undecided: {reason}");
            Ok(3)
        }
    }
}

fn report_to_json(report: &NormalityReport, ctx: &PrecisionContext) -> serde_json::Value {
    let mut out = json!({
        "p": ctx.prime(),
        "precision": ctx.precision(),
        "lambda0": report.lambda0.to_string(),
        "residue_min_poly": report.residue_min_poly.to_string(),
    });
    let obj = out.as_object_mut().expect("object");
    match &report.verdict {
        Verdict::Normal(d) => {
            obj.insert("verdict".into(), json!("Normal"));
            obj.insert(
                "eigenvalues".into(),
                json!(d
                    .eigenvalues
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()),
            );
            obj.insert("multiplicities".into(), json!(d.multiplicities));
            let idem: Vec<Vec<String>> = d
                .idempotents
                .iter()
                .map(|e| {
                    (0..e.dim())
                        .flat_map(|i| (0..e.dim()).map(move |j| (i, j)))
                        .map(|(i, j)| e.get(i, j).to_string())
                        .collect()
                })
                .collect();
            obj.insert("idempotents".into(), json!(idem));
            obj.insert(
                "flags".into(),
                json!({
                    "idempotency": d.flags.idempotency,
                    "mutual_annihilation": d.flags.mutual_annihilation,
                    "completeness": d.flags.completeness,
                    "norm_one": d.flags.norm_one,
                    "eigen_equation": d.flags.eigen_equation,
                }),
            );
        }
        Verdict::NotNormal(reason) => {
            obj.insert("verdict".into(), json!("NotNormal"));
            obj.insert("reason".into(), json!(format!("{reason:?}")));
        }
        Verdict::Degenerate(split) => {
            obj.insert("verdict".into(), json!("Degenerate"));
            obj.insert("g".into(), json!(split.g.to_string()));
            obj.insert("scalar_case".into(), json!(split.scalar_case));
        }
        Verdict::Undecided(reason) => {
            obj.insert("verdict".into(), json!("Undecided"));
            obj.insert("reason".into(), json!(reason.to_string()));
        }
    }
    out
}

fn print_human_verdict(report: &NormalityReport) {
    println!("lambda0 = {}", report.lambda0);
    println!("residue minimal polynomial: {}", report.residue_min_poly);
    match &report.verdict {
        Verdict::Normal(d) => {
            println!("verdict: Normal");
            for (l, m) in d.eigenvalues.iter().zip(&d.multiplicities) {
                println!("lambda = {l}  (multiplicity {m})");
            }
            println!(
                "flags: idempotency={} mutual_annihilation={} completeness={} norm_one={} eigen_equation={}",
                d.flags.idempotency,
                d.flags.mutual_annihilation,
                d.flags.completeness,
                d.flags.norm_one,
                d.flags.eigen_equation
            );
        }
        Verdict::NotNormal(reason) => {
            println!("verdict: NotNormal");
            match reason {
                NotNormalReason::NonDiagonalizableReduction(w) => {
                    println!("reason: reduction not diagonalizable, witness {w}");
                }
                NotNormalReason::NonSquarefreeMinPoly => {
                    println!("reason: operator not diagonalizable over Q_p");
                }
                NotNormalReason::EigenvaluesNotCertifiedInK => {
                    println!("reason: eigenvalues not certified in Q_p");
                }
            }
        }
        Verdict::Degenerate(split) => {
            println!("verdict: Degenerate");
            println!("A = g*I + A0 with g = {}", split.g);
            if split.scalar_case {
                println!("A0 = 0 to precision: A is scalar, trivially normal");
            } else if let Some(l0) = &split.lambda0 {
                println!("||lambda0 * A0|| = 1 with lambda0 = {l0}");
            }
        }
        Verdict::Undecided(reason) => {
            println!("verdict: Undecided");
            println!("reason: {reason}");
        }
    }
}

fn verdict_exit_code(verdict: &Verdict) -> u8 {
    match verdict {
        Verdict::Normal(_) => 0,
        Verdict::NotNormal(_) => 1,
        Verdict::Undecided(_) => 3,
        Verdict::Degenerate(_) => 4,
    }
}

fn cmd_normal(args: &NormalArgs) -> Result<u8, String> {
    let (doc, ctx, matrix) = load(&args.input)?;
    let hints = gather_hints(&args.hints, &doc, &ctx)?;
    let report = normality_verdict(&matrix, hints.as_deref(), &ctx).map_err(|e| e.to_string())?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report_to_json(&report, &ctx)).expect("serializes")
        );
    } else {
        print_human_verdict(&report);
    }
    Ok(verdict_exit_code(&report.verdict))
}

fn off_spectrum_samples(
    decomp: &SpectralDecomposition,
    count: usize,
    seed: u64,
    ctx: &PrecisionContext,
) -> Vec<PadicNumber> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = random_padic(&mut rng, ctx, -3, 3);
        let off = decomp
            .eigenvalues
            .iter()
            .all(|l| !z.sub(l).is_precision_zero());
        if off {
            out.push(z);
        }
    }
    out
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, String> {
    let (doc, ctx, matrix) = load(&args.input)?;
    let hints = gather_hints(&args.hints, &doc, &ctx)?;
    let report = normality_verdict(&matrix, hints.as_deref(), &ctx).map_err(|e| e.to_string())?;
    let Verdict::Normal(decomp) = &report.verdict else {
        return Err("operator is not Normal; nothing to verify".to_string());
    };
    let (_, normalized) = matrix.normalize(&ctx).map_err(|e| e.to_string())?;

    // Reconstruction sum lambda_i E_i = A.
    let mut sum = PadicMatrix::zero(matrix.dim(), &ctx);
    for (l, e) in decomp.eigenvalues.iter().zip(&decomp.idempotents) {
        sum = sum.add(&e.scale(l)).map_err(|e| e.to_string())?;
    }
    if !sum.eq_to_precision(&normalized) {
        return Err("reconstruction sum lambda_i E_i != A".to_string());
    }
    println!("reconstruction: ok");

    let orth =
        check_orthogonality(decomp, args.trials, args.seed, &ctx).map_err(|e| e.to_string())?;
    println!(
        "orthogonality: ok ({} pair checks, {} vector checks, seed {})",
        orth.pair_checks, orth.vector_checks, args.seed
    );

    let (c_num, c_den) =
        parse_rational(&args.c_bound).ok_or_else(|| format!("bad --C value {:?}", args.c_bound))?;
    let c_bound = BigRational::new(c_num, c_den);
    if args.samples > 0 {
        let points = off_spectrum_samples(decomp, args.samples, args.seed, &ctx);
        let resolvent = resolvent_bound_check(&normalized, decomp, &points, &c_bound, &ctx)
            .map_err(|e| e.to_string())?;
        println!(
            "resolvent: achieved constant {} over {} samples, bound {} {}",
            power_string(ctx.prime(), resolvent.achieved_exponent),
            args.samples,
            args.c_bound,
            if resolvent.bound_satisfied {
                "satisfied"
            } else {
                "violated"
            }
        );
        if !resolvent.bound_satisfied {
            return Ok(1);
        }
    }
    Ok(0)
}

fn cmd_split(args: &InputArgs) -> Result<u8, String> {
    let (_, ctx, matrix) = load(args)?;
    let split = proposition1_split(&matrix, &ctx).map_err(|e| e.to_string())?;
    println!("g = {}", split.g);
    println!("steps = {}", split.steps);
    if split.scalar_case {
        println!("scalar case: A = g*I to precision (trivially normal)");
    } else {
        println!(
            "lambda0 = {}",
            split.lambda0.as_ref().expect("non-scalar split")
        );
        println!("core = lambda0 * A0 has norm 1 and non-scalar reduction");
    }
    Ok(0)
}

fn cmd_example(args: &ExampleArgs) -> Result<u8, String> {
    let p = args.p;
    let need = |opt: Option<usize>, flag: &str| {
        opt.ok_or_else(|| format!("example {:?} requires --{flag}", args.name))
    };
    let doc = match args.name.as_str() {
        "number" => {
            let m = need(args.size, "size")?;
            let mut grid = vec![0i64; m * m];
            for i in 0..m {
                grid[i * m + i] = i as i64;
            }
            let mut doc = MatrixDocument::from_integer_grid(p, m, &grid);
            doc.hints = Some((0..m as i64).map(|i| i.to_string()).collect());
            doc
        }
        "ccr" => {
            // The truncated commutator [a_minus, a_plus]: the identity up to
            // a boundary defect of -(m-1) in the last slot.
            let m = need(args.size, "size")?;
            let mut grid = vec![0i64; m * m];
            for i in 0..m - 1 {
                grid[i * m + i] = 1;
            }
            grid[m * m - 1] = -(m as i64 - 1);
            MatrixDocument::from_integer_grid(p, m, &grid)
        }
        "multiplication" => {
            let blocks = need(args.blocks, "blocks")?;
            let grid = gallery::multiplication_grid(blocks, p);
            let size = blocks * p as usize;
            let mut doc = MatrixDocument::from_integer_grid(p, size, &grid);
            doc.hints = Some((0..size as i64).map(|i| i.to_string()).collect());
            doc
        }
        "shift" => {
            let m = need(args.size, "size")?;
            MatrixDocument::from_integer_grid(p, m, &gallery::shift_grid(m))
        }
        "dilation" => {
            let n = need(args.n, "n")?;
            let a_text = args
                .a
                .as_ref()
                .ok_or_else(|| "example \"dilation\" requires --a".to_string())?;
            let (num, den) =
                parse_rational(a_text).ok_or_else(|| format!("bad --a value {a_text:?}"))?;
            let a = BigRational::new(num, den);
            let grid = gallery::dilation_grid(&a, n);
            MatrixDocument::from_rational_grid(p, n + 1, &grid)
        }
        "affine-block" => {
            let alpha = args
                .alpha
                .ok_or_else(|| "example \"affine-block\" requires --alpha".to_string())?;
            let grid =
                gallery::a2_block_grid(alpha, p, args.level).map_err(|e| e.to_string())?;
            let size = (p as usize).pow(args.level);
            MatrixDocument::from_integer_grid(p, size, &grid)
        }
        other => return Err(format!("unknown example {other:?}")),
    };
    print!("{}", doc.to_json());
    Ok(0)
}
