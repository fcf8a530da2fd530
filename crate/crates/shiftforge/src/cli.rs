//! The `shiftforge` command line.
//!
//! Exit status: 0 when the command ran (mathematical "no" answers are
//! printed, not signalled), 2 for unreadable or malformed input, 3 for
//! precondition and domain errors, 4 when an enumeration or expansion cap
//! is exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use shiftforge_core::amplify::{amplify, choose_d, gap_alpha, GapParams};
use shiftforge_core::hn::{build_instance, default_gamma, reduce, HnInstance, HnOutcome};
use shiftforge_core::max3lin::{build_q_s, gen_max3lin};
use shiftforge_core::quadratize::{
    normalize_constants, quadratize_circuits, quadratize_sparse, Normalization, Provenance, Quadratized,
};
use shiftforge_core::search::{DomainMode, Metric, Restriction, SearchDomain};
use shiftforge_core::{Error as CoreError, RingElement, RingSpec, DEFAULT_POINT_CAP, DEFAULT_TERM_CAP};

use crate::format::{self, FormatError, Report, SystemBody, SystemFile};
use crate::parallel;

pub const TERM_CAP_VAR: &str = "SHIFTFORGE_TERM_CAP";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Format { .. } | CliError::Input(_) => 2,
            CliError::Core(e) if e.is_cap_exceeded() => 4,
            CliError::Core(
                CoreError::Parse { .. }
                | CoreError::InvalidCircuit(_)
                | CoreError::InvalidRow { .. }
                | CoreError::InvalidModulus(_)
                | CoreError::ArityMismatch { .. }
                | CoreError::IndexOutOfRange { .. },
            ) => 2,
            CliError::Core(_) => 3,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "shiftforge", version, about = "Exact reductions to and oracles for sparsifying shifts")]
pub struct Cli {
    /// Worker threads for enumerations.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DomainArgs {
    /// Every element of a finite ring.
    #[arg(long)]
    pub exhaustive: bool,
    /// Integers in [-B, B].
    #[arg(long = "box", value_name = "B")]
    pub box_bound: Option<u64>,
}

impl DomainArgs {
    fn domain(&self) -> SearchDomain {
        match self.box_bound {
            Some(b) => SearchDomain::integer_box(b),
            None => SearchDomain::new(DomainMode::ExhaustiveFinite),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the number of monomials.
    Sparsity { poly: PathBuf },
    /// Print or write P(X + a).
    Shift {
        poly: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_name = "a1,...")]
        by: String,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Lower a system to quadratic binomial and affine equations.
    Quadratize {
        system: PathBuf,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Keep a single constant-bearing equation.
    Normalize {
        system: PathBuf,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Build the shift instance of a system over the integers.
    ReduceHn {
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(short = 'o')]
        output: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Build the quadratic polynomial of a Max-3Lin instance.
    ReduceMax3lin {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        e0: Option<String>,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Multiply disjoint copies of a polynomial.
    Amplify {
        poly: PathBuf,
        #[arg(long)]
        copies: usize,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Minimum sparsity over a family of shifts.
    SearchShift {
        poly: PathBuf,
        #[command(flatten)]
        domain: DomainArgs,
        /// First coordinate is minus the sum of the others.
        #[arg(long, conflicts_with = "support_last")]
        zero_sum: bool,
        /// Only the last n coordinates may be nonzero.
        #[arg(long, value_name = "n")]
        support_last: Option<usize>,
        /// Count only non-constant monomials.
        #[arg(long)]
        nonconstant: bool,
        /// Witness map of a reduced instance; W stays unshifted.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Least solution of a system in a domain.
    Solve {
        system: PathBuf,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Maximum number of simultaneously satisfied rows.
    Maxsat {
        file: PathBuf,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Check the solution/shift correspondence in a box.
    VerifyHn {
        system: PathBuf,
        #[arg(long = "box", value_name = "B")]
        box_bound: u64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
    },
    /// Check min non-constant sparsity against 4m - maxsat.
    VerifyMax3lin { file: PathBuf },
    /// Exact gap parameters.
    GapParams {
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        delta: String,
        #[arg(short = 'm')]
        m: u64,
        #[arg(long, requires = "sigma")]
        target_gap: Option<String>,
        #[arg(long, requires = "target_gap")]
        sigma: Option<usize>,
    },
    /// Generate a random, optionally planted, Max-3Lin instance.
    GenMax3lin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        ring: String,
        #[arg(long)]
        planted: bool,
        #[arg(long, default_value_t = 0)]
        noise: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o')]
        output: PathBuf,
    },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn parsed<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, FormatError>) -> CliResult<T> {
    let text = read(path)?;
    f(&text).map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}

pub fn term_cap() -> CliResult<usize> {
    match std::env::var(TERM_CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Input(format!("{TERM_CAP_VAR}: invalid cap '{v}'"))),
        Err(_) => Ok(DEFAULT_TERM_CAP),
    }
}

fn rational(what: &str, s: &str) -> CliResult<BigRational> {
    RingElement::parse(RingSpec::Rationals, s)
        .map(|e| e.to_rational())
        .map_err(|_| CliError::Input(format!("--{what}: invalid rational '{s}'")))
}

fn gamma_arg(g: &Option<String>) -> CliResult<RingElement> {
    match g {
        Some(s) => Ok(RingElement::parse(RingSpec::Integers, s)?),
        None => Ok(default_gamma()),
    }
}

fn opt_vector(v: &Option<Vec<RingElement>>) -> String {
    v.as_deref().map_or_else(|| "NONE".into(), format::format_vector)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "NONE".into(), |x| x.to_string())
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs a parsed command, writing its report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let jobs = cli.jobs.unwrap_or_else(default_jobs).max(1);
    let text = run_command(&cli.command, jobs)?;
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
}

fn run_command(cmd: &Command, jobs: usize) -> CliResult<String> {
    match cmd {
        Command::Sparsity { poly } => {
            let p = parsed(poly, format::parse_poly)?;
            Ok(format!("{}\n", p.sparsity()))
        }
        Command::Shift { poly, by, output } => {
            let mut f = parsed(poly, format::parse_poly_file)?;
            let a = format::parse_vector(f.poly.ring(), by)?;
            let cap = term_cap()?;
            let bound = f.poly.shift_bound();
            if bound > cap as u128 {
                return Err(CoreError::TermCapExceeded { needed: bound, cap }.into());
            }
            f.poly = f.poly.shift(&a)?;
            let text = format::write_poly_file(&f);
            match output {
                Some(o) => {
                    write(o, &text)?;
                    Ok(format!("sparsity {}\n", f.poly.sparsity()))
                }
                None => Ok(text),
            }
        }
        Command::Quadratize { system, output } => {
            let f = parsed(system, format::parse_system)?;
            let Quadratized { system: t, recipe } = match &f.body {
                SystemBody::Sparse(s) => quadratize_sparse(s)?,
                SystemBody::Circuits { circuits, names } => quadratize_circuits(circuits, names)?,
            };
            let mut r = Report::new();
            r.push("variables", t.nvars()).push("auxiliary", t.nvars() - t.x_count());
            r.push("equations", t.equations().len());
            let file = SystemFile { body: SystemBody::Sparse(t), recipe: Some(recipe), trivially_solvable: false };
            write(output, &format::write_system(&file))?;
            Ok(r.to_string())
        }
        Command::Normalize { system, output } => {
            let f = parsed(system, format::parse_system)?;
            let SystemBody::Sparse(s) = &f.body else {
                return Err(CoreError::Precondition("normalize takes a quadratized system, not circuits".into()).into());
            };
            let n = normalize_constants(s)?;
            let trivial = n.is_trivially_solvable();
            let file = SystemFile {
                body: SystemBody::Sparse(n.system().clone()),
                recipe: f.recipe.clone(),
                trivially_solvable: trivial,
            };
            write(output, &format::write_system(&file))?;
            let mut r = Report::new();
            r.push("status", if trivial { "trivially-solvable" } else { "normalized" });
            r.push("equations", n.system().equations().len());
            Ok(r.to_string())
        }
        Command::ReduceHn { system, gamma, output, witness } => {
            let f = parsed(system, format::parse_system)?;
            let gamma = gamma_arg(gamma)?;
            let mut r = Report::new();
            match reduce_file(&f, &gamma)? {
                Reduced::Trivial(cert) => {
                    r.push("status", "trivially-solvable").push("certificate", format::format_vector(&cert));
                }
                Reduced::Instance(inst) => {
                    write(output, &format::write_poly(inst.polynomial()))?;
                    write(witness, &format::write_witness(inst.witness()))?;
                    r.push("status", "instance");
                    r.push("sigma", inst.sigma()).push("sparsity_bound", inst.sparsity_bound());
                    r.push("n", inst.n()).push("t", inst.t()).push("degree", inst.polynomial().degree());
                }
            }
            Ok(r.to_string())
        }
        Command::ReduceMax3lin { file, e0, output } => {
            let l = parsed(file, format::parse_max3lin)?.system;
            let e0 = match e0 {
                Some(s) => RingElement::parse(l.ring(), s)?,
                None => l.ring().one(),
            };
            let q = build_q_s(&l, &e0)?;
            write(output, &format::write_poly(q.polynomial()))?;
            let mut r = Report::new();
            r.push("w", q.w()).push("sparsity", q.polynomial().sparsity());
            Ok(r.to_string())
        }
        Command::Amplify { poly, copies, output } => {
            let p = parsed(poly, format::parse_poly)?;
            let amp = amplify(&p, *copies, term_cap()?)?;
            let file = format::PolyFile {
                poly: amp.polynomial().clone(),
                copies: Some(format::CopiesHeader { d: amp.copies(), base_nvars: amp.base_nvars() }),
            };
            write(output, &format::write_poly_file(&file))?;
            let mut r = Report::new();
            r.push("copies", amp.copies()).push("sparsity", amp.polynomial().sparsity());
            r.push("expected_sparsity", amp.expected_sparsity()).push("degree", amp.polynomial().degree());
            Ok(r.to_string())
        }
        Command::SearchShift { poly, domain, zero_sum, support_last, nonconstant, witness } => {
            let p = parsed(poly, format::parse_poly)?;
            let mut dom = domain.domain();
            if *zero_sum {
                dom = dom.restricted(Restriction::ZeroSumFirstCoordinate);
            }
            if let Some(n) = support_last {
                dom = dom.restricted(Restriction::SupportedOnLastN(*n));
            }
            if let Some(w) = witness {
                let w = parsed(w, format::parse_witness)?;
                let contiguous = w.x0 == 0 && w.xprime.iter().copied().eq(1..=w.xprime.len());
                if !contiguous || w.xprime.len() + 1 + w.wvars.len() != p.nvars() {
                    return Err(CoreError::Precondition("witness map does not match the polynomial".into()).into());
                }
                dom = dom.leading(w.xprime.len() + 1);
            }
            let metric = if *nonconstant { Metric::Nonconstant } else { Metric::Total };
            let rep = parallel::search_min_sparsity(&p, &dom, metric, jobs)?;
            let violations = match (&rep.witness, rep.min_sparsity) {
                (Some(a), Some(v)) => usize::from(metric.measure(&p.shift(a)?) != v),
                _ => 0,
            };
            let mut r = Report::new();
            r.push("min_sparsity", opt(rep.min_sparsity)).push("witness", opt_vector(&rep.witness));
            r.push("points", rep.points).push("complete", rep.complete).push("violations", violations);
            Ok(r.to_string())
        }
        Command::Solve { system, domain } => {
            let f = parsed(system, format::parse_system)?;
            let nvars = match &f.body {
                SystemBody::Sparse(s) => s.nvars(),
                SystemBody::Circuits { names, .. } => names.len(),
            };
            let rep = parallel::solve(f.input(), nvars, &domain.domain(), jobs)?;
            let mut r = Report::new();
            r.push("solution", opt_vector(&rep.solution)).push("points", rep.points).push("complete", rep.complete);
            Ok(r.to_string())
        }
        Command::Maxsat { file, domain } => {
            let l = parsed(file, format::parse_max3lin)?.system;
            let rep = parallel::maxsat(&l, &domain.domain(), jobs)?;
            let mut r = Report::new();
            r.push("maxsat", opt(rep.max_satisfied)).push("m", l.m()).push("witness", opt_vector(&rep.witness));
            r.push("points", rep.points).push("complete", rep.complete);
            Ok(r.to_string())
        }
        Command::VerifyHn { system, box_bound, gamma } => {
            let f = parsed(system, format::parse_system)?;
            let gamma = gamma_arg(gamma)?;
            let rep = parallel::verify_hn_roundtrip(f.input(), &gamma, *box_bound, DEFAULT_POINT_CAP, jobs)?;
            let mut r = Report::new();
            if let Some(cert) = &rep.certificate {
                r.push("status", "trivially-solvable").push("certificate", format::format_vector(cert));
            } else {
                r.push("status", if rep.consistent() { "consistent" } else { "inconsistent" });
                r.push("sigma", rep.sigma);
            }
            r.push("solutions", rep.solutions.hits).push("solution_points", rep.solutions.points);
            r.push("sparsifying_shifts", rep.shifts.hits).push("shift_points", rep.shifts.points);
            r.push("violations", rep.violations().count());
            for v in rep.violations() {
                r.push("violation", v);
            }
            Ok(r.to_string())
        }
        Command::VerifyMax3lin { file } => {
            let l = parsed(file, format::parse_max3lin)?.system;
            let rep = parallel::verify_max3lin(&l, DEFAULT_POINT_CAP, jobs)?;
            let mut r = Report::new();
            r.push("m", rep.m).push("maxsat", opt(rep.maxsat.max_satisfied)).push("expected", opt(rep.expected()));
            r.push("min_sparsity", opt(rep.min_nonconstant.min_sparsity));
            r.push("witness", opt_vector(&rep.min_nonconstant.witness));
            r.push("points", rep.min_nonconstant.points).push("complete", rep.min_nonconstant.complete);
            r.push("holds", rep.holds()).push("violations", usize::from(!rep.holds()));
            Ok(r.to_string())
        }
        Command::GapParams { epsilon, delta, m, target_gap, sigma } => {
            let (eps, del) = (rational("epsilon", epsilon)?, rational("delta", delta)?);
            let a = gap_alpha(&eps, &del, *m)?;
            let mut r = Report::new();
            r.push("alpha", &a.alpha).push("gap", a.has_gap);
            if let (Some(g), Some(s)) = (target_gap, sigma) {
                let d = choose_d(*s, &rational("target-gap", g)?)?;
                let hn = GapParams::hn(*s, d)?;
                let lin = GapParams::max3lin(&eps, &del, *m, d)?;
                r.push("d", d).push("hn_alpha", &hn.alpha).push("hn_t_yes", &hn.t_yes).push("hn_t_no", &hn.t_no);
                r.push("max3lin_t_yes", &lin.t_yes).push("max3lin_t_no", &lin.t_no);
            }
            Ok(r.to_string())
        }
        Command::GenMax3lin { n, m, ring, planted, noise, seed, output } => {
            let ring: RingSpec = ring.parse()?;
            let g = gen_max3lin(*n, *m, ring, *planted, *noise, *seed)?;
            let satisfied = match &g.planted {
                Some(x) => Some(g.system.count_satisfied(x)?),
                None => None,
            };
            write(output, &format::write_max3lin(&g.clone().into()))?;
            let mut r = Report::new();
            r.push("seed", g.seed).push("rows", g.system.m()).push("planted_satisfied", opt(satisfied));
            Ok(r.to_string())
        }
    }
}

enum Reduced {
    Trivial(Vec<RingElement>),
    Instance(Box<HnInstance>),
}

/// Builds the instance from whatever stage the file is at: raw systems
/// and circuits run the whole pipeline, quadratized systems are
/// normalized first, normalized systems are used as they are.
fn reduce_file(f: &SystemFile, gamma: &RingElement) -> CliResult<Reduced> {
    let zeros = |k: usize| vec![f.ring().zero(); k];
    if f.trivially_solvable {
        let k = match &f.body {
            SystemBody::Sparse(s) => s.nvars(),
            SystemBody::Circuits { names, .. } => names.len(),
        };
        return Ok(Reduced::Trivial(zeros(k)));
    }
    let normalized = match (&f.body, f.provenance()) {
        (SystemBody::Sparse(s), Some(Provenance::Normalized)) => Some(s.clone()),
        (SystemBody::Sparse(s), Some(Provenance::QuadratizedSparse | Provenance::QuadratizedCircuit)) => {
            match normalize_constants(s)? {
                Normalization::TriviallySolvable(t) => return Ok(Reduced::Trivial(zeros(t.nvars()))),
                Normalization::Normalized(t) => Some(t),
            }
        }
        _ => None,
    };
    match normalized {
        Some(t) => Ok(Reduced::Instance(Box::new(build_instance(&t, gamma)?))),
        None => match reduce(f.input(), gamma)? {
            HnOutcome::TriviallySolvable { certificate } => Ok(Reduced::Trivial(certificate)),
            HnOutcome::Instance(r) => Ok(Reduced::Instance(Box::new(r.instance))),
        },
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with(args: impl IntoIterator<Item = String>, out: &mut dyn Write, errout: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(errout, "{e}") };
            return u8::try_from(code).unwrap_or(2);
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(errout, "error: {e}");
            e.exit_code()
        }
    }
}
