use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand};

use typewriter_core::channel::{monte_carlo_pe, SimResult};
use typewriter_core::construction::{
    enumerate_spectrum, enumerate_spectrum_direct, sample_random_g, union_bound_pe, GeneratorPlus,
};
use typewriter_core::curves::{
    c0, capacity, curves_to_csv, plot_script, sample_curves, BoundConstants,
};
use typewriter_core::expurgated::{
    alpha, circulant_eigenvalues, e_ex2, ex_exponent_inf, q_form_exact, rho_bar, shannon_code2,
    ExactDistribution,
};
use typewriter_core::lp::lovasz::qprime;
use typewriter_core::lp::{
    brute_force_max_code, composite_bound, first_root, lovasz_bound, lp_solve_lambda,
    mrrw_certificate, mrrw_search, MrrwOutcome,
};
use typewriter_core::verify;
use typewriter_core::word::{Code, ExtendedWeight};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const FIGURE_SAMPLES: usize = 161;

#[derive(Debug, Parser)]
#[command(name = "typewriter", version, about = "Reliability-function bounds for the 5-input typewriter channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the five bound curves into a CSV table.
    Curves(CurvesArgs),
    /// Write the Figure 1 table and a matplotlib script into a directory.
    Figure1(Figure1Args),
    /// Expurgated-exponent quantities at a given rho or rate.
    Expurgated(ExpurgatedArgs),
    /// Sample a G+ code and report its weight spectrum and union bound.
    Gv(GvArgs),
    /// Solve the Krawtchouk program (or build a Christoffel-Darboux certificate).
    Lp(LpArgs),
    /// Exact maximum code size for tiny lengths.
    Maxcode(MaxcodeArgs),
    /// Monte Carlo block error rate of a code under ML decoding.
    Simulate(SimulateArgs),
    /// Run the property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct CurvesArgs {
    /// Lowest rate in bits; defaults to log sqrt 5.
    #[arg(long)]
    rmin: Option<f64>,
    /// Highest rate in bits; defaults to log(5/2).
    #[arg(long)]
    rmax: Option<f64>,
    #[arg(long, default_value_t = FIGURE_SAMPLES)]
    samples: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Figure1Args {
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ExpurgatedArgs {
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
}

#[derive(Debug, Args)]
struct GvArgs {
    /// Inner length; the code has length 2n.
    #[arg(long)]
    n: usize,
    /// Rows of the random block G.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Weigh every codeword directly instead of using the case analysis.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LpArgs {
    #[arg(long)]
    n: usize,
    /// Minimum distance; `inf` for zero-error codes.
    #[arg(long)]
    d: ExtendedWeight,
    /// Use a Christoffel-Darboux certificate instead of the simplex.
    #[arg(long)]
    mrrw: bool,
    /// Certificate degree; searched when absent.
    #[arg(long, requires = "mrrw")]
    t: Option<usize>,
    /// Certificate node; defaults to min(d, first root of K_t).
    #[arg(long, requires = "t")]
    a: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MaxcodeArgs {
    #[arg(long)]
    n: usize,
    /// Minimum distance; `inf` for zero-error codes.
    #[arg(long)]
    d: ExtendedWeight,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Code file, one base-5 word per line.
    #[arg(long)]
    code: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(verify::suite_names()))]
    suite: Option<String>,
}

/// `# typewriter <version> <command> key=value ...`; output paths are left
/// out so artifacts depend only on the computation.
fn provenance(command: &str, config: &[(&str, String)]) -> String {
    let mut line = format!("# typewriter {VERSION} {command}");
    for (k, v) in config {
        let _ = write!(line, " {k}={v}");
    }
    line.push('\n');
    line
}

fn emit(artifact: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, artifact).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{artifact}"),
    }
    Ok(())
}

fn curves(args: &CurvesArgs) -> Result<()> {
    let rmin = args.rmin.unwrap_or_else(c0);
    let rmax = args.rmax.unwrap_or_else(capacity);
    let curves = sample_curves(rmin, rmax, args.samples)?;
    let config = [
        ("rmin", rmin.to_string()),
        ("rmax", rmax.to_string()),
        ("samples", args.samples.to_string()),
    ];
    let text = provenance("curves", &config) + &curves_to_csv(&curves);
    emit(&text, args.out.as_deref())
}

fn figure1(args: &Figure1Args) -> Result<()> {
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let curves = sample_curves(c0(), capacity(), FIGURE_SAMPLES)?;
    let config = [
        ("rmin", c0().to_string()),
        ("rmax", capacity().to_string()),
        ("samples", FIGURE_SAMPLES.to_string()),
    ];
    let csv = provenance("figure1", &config) + &curves_to_csv(&curves);
    emit(&csv, Some(&args.out_dir.join("figure1.csv")))?;
    let script = provenance("figure1", &config) + &plot_script("figure1.csv");
    emit(&script, Some(&args.out_dir.join("figure1.py")))?;
    let k = BoundConstants::get();
    println!("C0 = {:.9}", k.c0);
    println!("C = {:.9}", k.c);
    println!("R* = {:.9}", k.r_star);
    Ok(())
}

fn expurgated(args: &ExpurgatedArgs) -> Result<()> {
    let mut out = String::new();
    let rb = rho_bar();
    match (args.rho, args.rate) {
        (Some(rho), None) => {
            if !(rho >= 1.0) {
                bail!("rho = {rho} must be at least 1");
            }
            out += &provenance("expurgated", &[("rho", rho.to_string())]);
            let eig = circulant_eigenvalues(rho);
            let _ = writeln!(out, "rho = {rho}");
            let _ = writeln!(out, "rho_bar = {rb:.12}");
            let _ = writeln!(out, "alpha = {:.12}", alpha(rho));
            let eig_text: Vec<String> = eig.iter().map(|v| format!("{v:.12}")).collect();
            let _ = writeln!(out, "eigenvalues = {}", eig_text.join(" "));
            let min = eig.iter().cloned().fold(f64::MAX, f64::min);
            let _ = writeln!(out, "positive_semidefinite = {}", min >= -1e-12);
            let _ = writeln!(out, "E_x_inf = {:.12}", ex_exponent_inf(rho));
            let q2 = q_form_exact(&ExactDistribution::on_code(&shannon_code2()?)?);
            match q2.as_constant() {
                Some(v) => {
                    let _ = writeln!(out, "Q2_shannon_code = {v}");
                    let value = *v.numer() as f64 / *v.denom() as f64;
                    let _ = writeln!(out, "shannon_code_exponent = {:.12}", -(rho / 2.0) * value.log2());
                }
                None => {
                    let _ = writeln!(out, "Q2_shannon_code = {:.12}", q2.eval(alpha(rho)));
                }
            }
        }
        (None, Some(rate)) => {
            out += &provenance("expurgated", &[("rate", rate.to_string())]);
            let _ = writeln!(out, "rate = {rate}");
            let _ = writeln!(out, "rho_bar = {rb:.12}");
            let _ = writeln!(out, "E_ex2 = {:.12}", e_ex2(rate)?);
        }
        _ => unreachable!("clap enforces exactly one of --rho and --rate"),
    }
    print!("{out}");
    Ok(())
}

fn gv(args: &GvArgs) -> Result<()> {
    let g = sample_random_g(args.n, args.k, args.seed)?;
    let gp = GeneratorPlus::new(g.clone());
    let spectrum = if args.exhaustive {
        enumerate_spectrum_direct(&gp)?
    } else {
        enumerate_spectrum(&gp)?
    };
    let bound = union_bound_pe(&spectrum);
    let config = [
        ("n", args.n.to_string()),
        ("k", args.k.to_string()),
        ("seed", args.seed.to_string()),
        ("exhaustive", args.exhaustive.to_string()),
    ];
    let mut text = provenance("gv", &config);
    for r in 0..g.rows {
        let row: String = (0..g.cols).map(|c| char::from(b'0' + g.get(r, c))).collect();
        let _ = writeln!(text, "# G {row}");
    }
    let _ = writeln!(text, "# union_bound_pe = {bound:.12e}");
    text += &spectrum.to_csv();
    emit(&text, args.out.as_deref())?;
    if args.out.is_some() {
        println!("union_bound_pe = {bound:.12e}");
    }
    Ok(())
}

fn lp(args: &LpArgs) -> Result<()> {
    let n = args.n;
    let mut config = vec![("n", n.to_string()), ("d", args.d.to_string())];
    if args.mrrw {
        config.push(("mrrw", "true".into()));
        if let Some(t) = args.t {
            config.push(("t", t.to_string()));
        }
        if let Some(a) = args.a {
            config.push(("a", a.to_string()));
        }
    }
    let mut text = provenance("lp", &config);
    let d = match args.d {
        ExtendedWeight::Finite(0) => bail!("minimum distance must be at least 1"),
        ExtendedWeight::Finite(d) if (d as usize) <= n => d as usize,
        _ => {
            // no finite-distance constraint applies: the Lovász bound alone
            let bound = composite_bound(n, args.d)?;
            let _ = writeln!(text, "# no Krawtchouk program: d exceeds every finite weight on the support of g");
            let _ = writeln!(text, "lovasz {:.16e}", lovasz_bound(n, 5)?);
            let _ = writeln!(text, "bound {bound:.16e}");
            emit(&text, args.out.as_deref())?;
            if args.out.is_some() {
                println!("bound = {bound}");
            }
            return Ok(());
        }
    };
    let qp = qprime(5);
    let sol = if args.mrrw {
        match args.t {
            Some(t) => {
                let a = match args.a {
                    Some(a) => a,
                    None => (first_root(n, qp, t)? * (1.0 - 1e-9)).min(d as f64),
                };
                match mrrw_certificate(n, d, qp, t, a)? {
                    MrrwOutcome::Certificate(sol) => sol,
                    MrrwOutcome::Failed(f) => bail!("t = {t}, a = {a} gives no certificate: {f}"),
                }
            }
            None => mrrw_search(n, d, qp)?,
        }
    } else {
        lp_solve_lambda(n, d, qp)?
    };
    let lovasz = lovasz_bound(n, 5)?;
    let bound = lovasz * sol.objective;
    text += &sol.to_text();
    let _ = writeln!(text, "# lovasz {lovasz:.16e}");
    let _ = writeln!(text, "# bound {bound:.16e}");
    emit(&text, args.out.as_deref())?;
    println!("bound = {bound}");
    Ok(())
}

fn maxcode(args: &MaxcodeArgs) -> Result<()> {
    let best = brute_force_max_code(args.n, args.d)?;
    let config = [("n", args.n.to_string()), ("d", args.d.to_string())];
    let mut text = provenance("maxcode", &config);
    let _ = writeln!(text, "# size {}", best.size);
    text += &best.code.to_text();
    println!("size = {}", best.size);
    emit(&text, args.out.as_deref())
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let raw = fs::read_to_string(&args.code)
        .with_context(|| format!("reading {}", args.code.display()))?;
    let code = Code::from_text(&raw).with_context(|| format!("parsing {}", args.code.display()))?;
    let result = monte_carlo_pe(&code, args.trials, args.seed)?;
    let name = args
        .code
        .file_name()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let config = [
        ("code", name),
        ("trials", args.trials.to_string()),
        ("seed", args.seed.to_string()),
    ];
    let text = provenance("simulate", &config)
        + SimResult::CSV_HEADER
        + "\n"
        + &result.to_csv_row()
        + "\n";
    emit(&text, args.out.as_deref())
}

fn run_verify(args: &VerifyArgs) -> Result<bool> {
    let results = verify::run(args.suite.as_deref())?;
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        println!("{r}");
    }
    println!("{} checks, {} passed, {failed} failed", results.len(), results.len() - failed);
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("typewriter {VERSION}: {:?}", cli.command);
    let result = match &cli.command {
        Command::Curves(a) => curves(a).map(|_| true),
        Command::Figure1(a) => figure1(a).map(|_| true),
        Command::Expurgated(a) => expurgated(a).map(|_| true),
        Command::Gv(a) => gv(a).map(|_| true),
        Command::Lp(a) => lp(a).map(|_| true),
        Command::Maxcode(a) => maxcode(a).map(|_| true),
        Command::Simulate(a) => simulate(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
