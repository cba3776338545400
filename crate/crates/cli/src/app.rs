//! Command definitions and their execution.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use strength_core::derivspace::df_experiment;
use strength_core::descent::{blowup_bound, descend_forms, descend_tensors};
use strength_core::eqmine::{self, mine_equation, LocusSpec, MineParams};
use strength_core::harness::{self, PropSymParams, SuiteReport};
use strength_core::search::{
    prk_exact, quad_strength, strength_exact, Budget, DecompositionKind, QuadMode, Quadric, RankValue,
};
use strength_core::{Error, Extension, FieldCtx};

use crate::format::{self, CertFile, Tuple};

#[derive(Parser, Debug)]
#[command(name = "strength", version, about = "Exact strength and partition rank of small forms and tensors")]
pub struct Cli {
    /// Field specification: Q, GF(p), GF(q), GF(p^e) or GF(p^e;c0,...,ce).
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of linear solves in exact searches.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Input file.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Output file for the produced artifact; printed after the report otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact (collective) partition rank or strength with a certificate.
    Rank {
        #[arg(value_enum)]
        kind: RankKind,
        /// Field model for `quadric`.
        #[arg(long, value_enum, default_value_t = QuadModeArg::FiniteOdd)]
        mode: QuadModeArg,
    },
    /// Turn a certificate over an extension into one over the input's field.
    Descend {
        /// The extension field the certificate lives over.
        #[arg(long)]
        ext: String,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Interpolate an equation vanishing on a bounded-rank locus.
    Mine(MineArgs),
    /// Evaluate the explicit size and degree bounds.
    Bounds {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long)]
        r: u64,
        /// Comma-separated shape for the partition-rank count.
        #[arg(long)]
        shape: Option<String>,
    },
    /// Derivative space of a form and the generation experiment.
    Dspace,
    /// Run a seeded property suite.
    Verify(VerifyArgs),
    /// Reassemble a certificate against its tuple without searching.
    Check {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankKind {
    Prk,
    Strength,
    Quadric,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadModeArg {
    AlgClosed,
    RealDiagonal,
    FiniteOdd,
}

#[derive(clap::Args, Debug)]
pub struct MineArgs {
    /// Tuple length.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Number of terms; defaults to the number of partitions or splits.
    #[arg(long)]
    r: Option<usize>,
    /// Tensor shape, e.g. `2,3`.
    #[arg(long)]
    shape: Option<String>,
    /// Slot subsets of the terms, 1-based, e.g. `1;2,3`. Defaults to `{1}` for every term.
    #[arg(long)]
    partitions: Option<String>,
    /// Sample forms instead of tensors: number of variables.
    #[arg(long)]
    n: Option<usize>,
    /// Degree of the forms.
    #[arg(long)]
    d: Option<usize>,
    /// Degrees of the first factors, e.g. `1,1`. Defaults to 1 for every term.
    #[arg(long)]
    splits: Option<String>,
    #[arg(long)]
    degree_cap: usize,
    #[arg(long, default_value_t = 16)]
    margin: usize,
    #[arg(long, default_value_t = 1500)]
    max_monomials: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    PiIota,
    PropSym,
    Descent,
    CoeffExtract,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Number of random instances; prop-sym enumerates small families when omitted.
    #[arg(long)]
    count: Option<usize>,
    /// Base field of the descent suite.
    #[arg(long = "K", default_value = "GF(2)")]
    base: String,
    /// Extension degree of the descent suite.
    #[arg(long, default_value_t = 2)]
    e: u32,
    /// Tensor shape of the coefficient-extraction suite.
    #[arg(long, default_value = "2,2,2")]
    shape: String,
}

/// `key = value` lines in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report(Vec<(String, String)>);

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.0 {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// What a finished command hands back to the process.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Report,
    /// Artifact text for stdout when no `--out` was given.
    pub artifact: Option<String>,
}

/// A failure that ends the command.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub name: String,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), name: e.name().into(), message: e.to_string() }
    }
}

impl Failure {
    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: 3, name: "IO_ERROR".into(), message: format!("{}: {e}", path.display()) }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 3, name: "USAGE".into(), message: message.into() }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotADecomposition | Error::VerificationFailed | Error::IeMismatch | Error::Unsolvable(_) => EXIT_VERIFY,
        Error::BudgetExceeded | Error::CapExceeded(_) => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn input_path(cli: &Cli) -> Result<&Path, Failure> {
    cli.input.as_deref().ok_or_else(|| Failure::usage("--in is required"))
}

fn read_tuple(cli: &Cli) -> Result<Tuple, Failure> {
    let tuple = format::parse_tuple(&read(input_path(cli)?)?)?;
    if let Some(spec) = &cli.field {
        let f: FieldCtx = spec.parse()?;
        if &f != tuple.field() {
            return Err(Error::FieldMismatch.into());
        }
    }
    Ok(tuple)
}

fn field_or(cli: &Cli, default: &str) -> Result<FieldCtx, Failure> {
    Ok(cli.field.as_deref().unwrap_or(default).parse()?)
}

fn budget(cli: &Cli) -> Budget {
    cli.budget.map_or_else(Budget::default, |max_solves| Budget { max_solves })
}

/// Writes the artifact to `--out`, or hands it back for stdout.
fn emit(cli: &Cli, text: String) -> Result<Option<String>, Failure> {
    match &cli.out {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::io(p, e))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Failure::usage(format!("bad integer list `{s}`"))))
        .collect()
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::Rank { kind, mode } => cmd_rank(cli, *kind, *mode)?,
        Command::Descend { ext, cert } => cmd_descend(cli, ext, cert)?,
        Command::Mine(args) => cmd_mine(cli, args)?,
        Command::Bounds { d, m, r, shape } => cmd_bounds(*d, *m, *r, shape.as_deref())?,
        Command::Dspace => cmd_dspace(cli)?,
        Command::Verify(args) => cmd_verify(cli, args)?,
        Command::Check { cert } => cmd_check(cli, cert)?,
    };
    out.report.push("elapsed_ms", start.elapsed().as_millis());
    Ok(out)
}

fn cmd_rank(cli: &Cli, kind: RankKind, mode: QuadModeArg) -> Result<Outcome, Failure> {
    let tuple = read_tuple(cli)?;
    let mut report = Report::default();
    report.push("field", tuple.field());
    report.push("m", tuple.len());
    if kind == RankKind::Quadric {
        let Tuple::Forms(fs) = &tuple else {
            return Err(Error::NotQuadratic.into());
        };
        if fs.len() != 1 {
            return Err(Failure::usage("quadric mode takes a single form"));
        }
        let mode = match mode {
            QuadModeArg::AlgClosed => QuadMode::AlgClosed,
            QuadModeArg::RealDiagonal => QuadMode::RealDiagonal,
            QuadModeArg::FiniteOdd => QuadMode::FiniteOdd,
        };
        let value = quad_strength(&Quadric::Form(fs.forms()[0].clone()), mode)?;
        report.push("kind", "QUADRIC");
        report.push("mode", format!("{mode:?}"));
        report.push("value", value);
        return Ok(Outcome { code: EXIT_OK, report, artifact: None });
    }
    let b = budget(cli);
    let (dkind, cert, d) = match (&tuple, kind) {
        (Tuple::Tensors(ts), RankKind::Prk) => (DecompositionKind::Partition, prk_exact(ts, b)?, ts.order()),
        (Tuple::Forms(fs), RankKind::Strength) => (DecompositionKind::Strength, strength_exact(fs, b)?, fs.degree()),
        (Tuple::Forms(_), _) => return Err(Failure::usage("partition rank needs a tensor file")),
        (Tuple::Tensors(_), _) => return Err(Failure::usage("strength needs a form file")),
    };
    report.push("kind", if dkind == DecompositionKind::Strength { "STRENGTH" } else { "PARTITION" });
    report.push("value", cert.value);
    report.push("exhaustive", u8::from(cert.exhaustive));
    report.push("budget_hit", u8::from(cert.budget_hit));
    report.push("max_solves", b.max_solves);
    if let Some(w) = &cert.witness {
        let c: Vec<String> = w.coeffs.iter().map(|x| tuple.field().format_elem(x)).collect();
        report.push("coeffs", c.join(" "));
    }
    if dkind == DecompositionKind::Strength && !tuple.field().char_exceeds(d) {
        report.push("flags", "OUTSIDE_THEOREM_HYPOTHESES");
    }
    let text = format::write_cert(&CertFile::from_certificate(dkind, &cert), tuple.field(), tuple.len());
    let artifact = emit(cli, text)?;
    let code = if cert.budget_hit { EXIT_BUDGET } else { EXIT_OK };
    Ok(Outcome { code, report, artifact })
}

fn cmd_descend(cli: &Cli, ext: &str, cert_path: &Path) -> Result<Outcome, Failure> {
    let tuple = read_tuple(cli)?;
    let l: FieldCtx = ext.parse()?;
    let extension = Extension::new(tuple.field(), &l)?;
    let cert = format::parse_cert(&read(cert_path)?, &l, tuple.len())?;
    let Some(w) = &cert.witness else {
        return Err(Failure::usage("certificate has no decomposition to descend"));
    };
    let out = match &tuple {
        Tuple::Tensors(ts) => descend_tensors(ts, &extension, w)?,
        Tuple::Forms(fs) => descend_forms(fs, &extension, w)?,
    };
    let e = extension.degree() as u64;
    let mut report = Report::default();
    report.push("base", tuple.field());
    report.push("ext", &l);
    report.push("ext_degree", e);
    report.push("terms_in", w.len());
    report.push("terms_out", out.len());
    report.push("bound", blowup_bound(e, w.len() as u64));
    let file = CertFile { kind: out.kind(), value: RankValue::Finite(out.len()), exhaustive: false, witness: Some(out) };
    let artifact = emit(cli, format::write_cert(&file, tuple.field(), tuple.len()))?;
    Ok(Outcome { code: EXIT_OK, report, artifact })
}

fn locus(field: &FieldCtx, args: &MineArgs) -> Result<LocusSpec, Failure> {
    if args.n.is_some() || args.splits.is_some() {
        let n = args.n.ok_or_else(|| Failure::usage("--n is required for form loci"))?;
        let d = args.d.ok_or_else(|| Failure::usage("--d is required for form loci"))?;
        let splits = match &args.splits {
            Some(s) => parse_list(s)?,
            None => vec![1; args.r.ok_or_else(|| Failure::usage("--r or --splits is required"))?],
        };
        if args.r.is_some_and(|r| r != splits.len()) {
            return Err(Failure::usage("--r disagrees with --splits"));
        }
        return Ok(LocusSpec::form(field, args.m, n, d, splits)?);
    }
    let shape = parse_list(args.shape.as_deref().ok_or_else(|| Failure::usage("--shape is required"))?)?;
    let partitions: Vec<Vec<usize>> = match &args.partitions {
        Some(p) => p
            .split(';')
            .map(|s| {
                let slots = parse_list(s)?;
                if slots.contains(&0) {
                    return Err(Failure::usage("partition slots are 1-based"));
                }
                Ok(slots.into_iter().map(|j| j - 1).collect())
            })
            .collect::<Result<_, Failure>>()?,
        None => vec![vec![0]; args.r.ok_or_else(|| Failure::usage("--r or --partitions is required"))?],
    };
    if args.r.is_some_and(|r| r != partitions.len()) {
        return Err(Failure::usage("--r disagrees with --partitions"));
    }
    Ok(LocusSpec::tensor(field, args.m, shape, partitions)?)
}

fn cmd_mine(cli: &Cli, args: &MineArgs) -> Result<Outcome, Failure> {
    let field = field_or(cli, "GF(101)")?;
    let spec = locus(&field, args)?;
    let params =
        MineParams { degree_cap: args.degree_cap, margin: args.margin, seed: cli.seed, max_monomials: args.max_monomials };
    let mut report = Report::default();
    report.push("field", &field);
    report.push("coordinates", spec.dim());
    report.push("r", spec.r());
    report.push("degree_cap", args.degree_cap);
    report.push("seed", cli.seed);
    match mine_equation(&spec, params)? {
        None => {
            report.push("status", "NONE_FOUND");
            Ok(Outcome { code: EXIT_OK, report, artifact: None })
        }
        Some(eq) => {
            report.push("status", "FOUND");
            report.push("degree", eq.polynomial.degree());
            report.push("kernel_dim", eq.kernel_dim());
            report.push("samples_used", eq.samples_used);
            report.push("verification_samples", eq.verification_samples);
            let text = format!(
                "# mined equation, vanishing on every sample drawn\n# seed = {}\n# samples = {}\n# verification_samples = {}\n# kernel_dim = {}\n{}",
                eq.seed,
                eq.samples_used,
                eq.verification_samples,
                eq.kernel_dim(),
                format::write_form(&eq.polynomial)
            );
            let artifact = emit(cli, text)?;
            Ok(Outcome { code: EXIT_OK, report, artifact })
        }
    }
}

/// `log2` of a decimal integer string, accurate to double precision.
fn log2_decimal(s: &str) -> f64 {
    let head: f64 = s[..s.len().min(17)].parse().unwrap_or(0.0);
    head.log2() + (s.len().saturating_sub(17)) as f64 * std::f64::consts::LOG2_10
}

fn cmd_bounds(d: u32, m: u64, r: u64, shape: Option<&str>) -> Result<Outcome, Failure> {
    if d < 2 || m < 1 {
        return Err(Failure::usage("bounds need d >= 2 and m >= 1"));
    }
    let mut report = Report::default();
    let n = eqmine::min_n(d, m, r);
    report.push("d", d);
    report.push("m", m);
    report.push("r", r);
    report.push("min_n", n);
    let shape = match shape {
        Some(s) => parse_list(s)?,
        None => vec![n as usize; d as usize],
    };
    if shape.len() != d as usize {
        return Err(Failure::usage("--shape must have d entries"));
    }
    let dims: Vec<String> = shape.iter().map(|x| x.to_string()).collect();
    report.push("prk_bound_shape", dims.join(","));
    report.push("prk_bound", eqmine::prk_bound(m, &shape));
    match eqmine::degree_bound(d, m, r) {
        Ok(b) => {
            let digits = b.degree.to_string();
            report.push("degree_bound_n", b.n);
            report.push("degree_bound_log2", format!("{:.4}", log2_decimal(&digits)));
            report.push("degree_bound", digits);
        }
        Err(e) => {
            report.push("degree_bound_n", eqmine::degree_bound_n(d, m, r));
            report.push("degree_bound", e.name());
        }
    }
    Ok(Outcome { code: EXIT_OK, report, artifact: None })
}

fn cmd_dspace(cli: &Cli) -> Result<Outcome, Failure> {
    let Tuple::Forms(fs) = read_tuple(cli)? else {
        return Err(Failure::usage("dspace needs a form file"));
    };
    if fs.len() != 1 {
        return Err(Failure::usage("dspace takes a single form"));
    }
    let f = &fs.forms()[0];
    let ds = strength_core::derivspace::dspace(f);
    let rep = df_experiment(f, budget(cli))?;
    let mut report = Report::default();
    report.push("field", f.field());
    report.push("dim", ds.dim());
    for (deg, forms) in ds.by_degree.iter().rev() {
        report.push(format!("dim_degree_{deg}"), forms.len());
    }
    report.push("member", u8::from(rep.member));
    report.push("generators", rep.generators.len());
    match rep.strength {
        Some(s) => report.push("strength", s),
        None => report.push("strength", "UNAVAILABLE"),
    }
    if rep.outside_hypotheses {
        report.push("flags", "OUTSIDE_THEOREM_HYPOTHESES");
    }
    let text: String = ds.basis.iter().map(format::write_form).collect();
    let artifact = emit(cli, text)?;
    Ok(Outcome { code: EXIT_OK, report, artifact })
}

fn push_suite(report: &mut Report, prefix: &str, s: &SuiteReport) {
    let status = if !s.ok() {
        "FAIL"
    } else if s.passed == 0 && s.skipped_char > 0 {
        "SKIPPED_CHAR"
    } else {
        "PASS"
    };
    report.push(format!("{prefix}status"), status);
    report.push(format!("{prefix}passed"), s.passed);
    report.push(format!("{prefix}failed"), s.failed);
    report.push(format!("{prefix}skipped_char"), s.skipped_char);
    report.push(format!("{prefix}inconclusive"), s.inconclusive);
    report.push(format!("{prefix}exhaustive"), u8::from(s.exhaustive));
    for (i, f) in s.failures.iter().take(5).enumerate() {
        report.push(format!("{prefix}failure_{}", i + 1), f);
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome, Failure> {
    let mut report = Report::default();
    let suites: Vec<(String, SuiteReport)> = match args.suite {
        Suite::PiIota => {
            let field = field_or(cli, "GF(5)")?;
            report.push("suite", "pi-iota");
            report.push("field", &field);
            let count = args.count.unwrap_or(100);
            vec![(String::new(), harness::verify_pi_iota(&field, args.d, args.n, count, cli.seed))]
        }
        Suite::PropSym => {
            let field = field_or(cli, "GF(5)")?;
            report.push("suite", "prop-sym");
            report.push("field", &field);
            let p = PropSymParams {
                d: args.d,
                n: args.n,
                count: args.count,
                exhaustive_limit: 1 << 12,
                seed: cli.seed,
                budget: budget(cli),
            };
            let (a, b) = harness::verify_prop_sym(&field, p)?;
            vec![("ineq1.".into(), a), ("ineq2.".into(), b)]
        }
        Suite::Descent => {
            let base: FieldCtx = args.base.parse()?;
            report.push("suite", "descent");
            report.push("base", &base);
            report.push("e", args.e);
            let count = args.count.unwrap_or(50);
            vec![(String::new(), harness::verify_descent(&base, args.e, count, cli.seed, budget(cli))?)]
        }
        Suite::CoeffExtract => {
            let field = field_or(cli, "GF(5)")?;
            let shape = parse_list(&args.shape)?;
            report.push("suite", "coeff-extract");
            report.push("field", &field);
            let count = args.count.unwrap_or(100);
            vec![(String::new(), harness::verify_coeff_extract(&field, &shape, count, cli.seed)?)]
        }
    };
    report.push("seed", cli.seed);
    let mut code = EXIT_OK;
    for (prefix, s) in &suites {
        push_suite(&mut report, prefix, s);
        if !s.ok() {
            code = EXIT_VERIFY;
        }
    }
    Ok(Outcome { code, report, artifact: None })
}

fn cmd_check(cli: &Cli, cert_path: &Path) -> Result<Outcome, Failure> {
    let tuple = read_tuple(cli)?;
    let cert = format::parse_cert(&read(cert_path)?, tuple.field(), tuple.len())?;
    let mut report = Report::default();
    let verdict: Result<(), String> = (|| {
        let kind_ok = matches!(
            (&tuple, cert.kind),
            (Tuple::Tensors(_), DecompositionKind::Partition) | (Tuple::Forms(_), DecompositionKind::Strength)
        );
        if !kind_ok {
            return Err("certificate kind does not match the tuple".into());
        }
        match (&cert.witness, cert.value) {
            (Some(w), RankValue::Finite(v)) => {
                if w.len() != v {
                    return Err(format!("value {v} but {} terms", w.len()));
                }
                let r = match &tuple {
                    Tuple::Tensors(ts) => w.verify_tensors(ts),
                    Tuple::Forms(fs) => w.verify_forms(fs),
                };
                r.map_err(|e| e.to_string())
            }
            (Some(_), RankValue::Infinite) => Err("infinite value with a witness".into()),
            (None, RankValue::Finite(0)) => {
                let zero = match &tuple {
                    Tuple::Tensors(ts) => ts.len() == 1 && ts.tensors()[0].is_zero(),
                    Tuple::Forms(fs) => fs.len() == 1 && fs.forms()[0].is_zero(),
                };
                zero.then_some(()).ok_or_else(|| "value 0 for a nonzero input".into())
            }
            (None, RankValue::Infinite) => {
                let linear = match &tuple {
                    Tuple::Tensors(ts) => ts.len() == 1 && ts.order() == 1 && !ts.tensors()[0].is_zero(),
                    Tuple::Forms(fs) => fs.len() == 1 && fs.degree() == 1 && !fs.forms()[0].is_zero(),
                };
                linear.then_some(()).ok_or_else(|| "infinite value for a non-linear input".into())
            }
            (None, RankValue::Finite(v)) => Err(format!("value {v} without a witness")),
        }
    })();
    Ok(match verdict {
        Ok(()) => {
            report.push("check", "PASS");
            report.push("value", cert.value);
            Outcome { code: EXIT_OK, report, artifact: None }
        }
        Err(reason) => {
            report.push("check", "FAIL");
            report.push("reason", reason);
            Outcome { code: EXIT_VERIFY, report, artifact: None }
        }
    })
}
