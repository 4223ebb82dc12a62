use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qkzlab::harness::{self, Suite, VerifyConfig};
use qkzlab::qkz::{self, Basis, Bounds, Mode};
use qkzlab::tsscpp::{self, Method, WeightSpec};
use qkzlab::{Error, ExactPoly, Var};

#[derive(Parser)]
#[command(name = "qkzlab", version, about = "TSSCPP generating polynomials and qKZ components in exact arithmetic")]
struct Cli {
    /// Print machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted TSSCPP generating polynomial.
    Tsscpp(TsscppArgs),
    /// qKZ components in one basis.
    Components(ComponentArgs),
    /// Sum and refined sum of the homogeneous components.
    SumRules {
        #[arg(long)]
        n: usize,
    },
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TsscppArgs {
    #[arg(long)]
    n: usize,
    /// Use the modified paths (extra step at the bottom, weight t0).
    #[arg(long)]
    modified: bool,
    /// Set every slice weight t1.. to tau.
    #[arg(long)]
    tau: bool,
    /// Set t0 to t (modified only).
    #[arg(long)]
    t: bool,
    #[arg(long, value_enum, default_value_t = MethodArg::Lgv)]
    method: MethodArg,
    /// List the path configurations instead of the polynomial.
    #[arg(long)]
    list: bool,
    /// Largest size for direct enumeration.
    #[arg(long, default_value_t = 7)]
    max_direct_n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Lgv,
    Extract,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Lgv => Method::Lgv,
            MethodArg::Extract => Method::Extract,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Sequence,
    #[value(name = "link_pattern", alias = "link-pattern")]
    LinkPattern,
    Spin,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Symbolic,
    Homogeneous,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, default_value_t = Bounds::default().max_symbolic_n)]
    max_symbolic_n: usize,
    #[arg(long, default_value_t = Bounds::default().max_homogeneous_n)]
    max_homogeneous_n: usize,
    #[arg(long, default_value_t = Bounds::default().max_damnint_n)]
    max_damnint_n: usize,
    #[arg(long, default_value_t = Bounds::default().max_integident_n)]
    max_integident_n: usize,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        Bounds {
            max_symbolic_n: self.max_symbolic_n,
            max_homogeneous_n: self.max_homogeneous_n,
            max_damnint_n: self.max_damnint_n,
            max_integident_n: self.max_integident_n,
        }
    }
}

#[derive(Args)]
struct ComponentArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = BasisArg::LinkPattern)]
    basis: BasisArg,
    #[arg(long, value_enum, conflicts_with_all = ["symbolic", "homogeneous"])]
    mode: Option<ModeArg>,
    /// Same as `--mode symbolic`.
    #[arg(long, conflicts_with = "homogeneous")]
    symbolic: bool,
    /// Same as `--mode homogeneous` (the default).
    #[arg(long)]
    homogeneous: bool,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long, default_value_t = VerifyConfig::default().max_n)]
    max_n: usize,
    #[command(flatten)]
    bounds: BoundArgs,
    #[arg(long, default_value_t = VerifyConfig::default().max_tsscpp_symbolic_n)]
    max_tsscpp_symbolic_n: usize,
    #[arg(long, default_value_t = VerifyConfig::default().max_schur_n)]
    max_schur_n: usize,
    /// Omit per-check timings from the JSON report.
    #[arg(long)]
    no_timing: bool,
}

fn threads_from_env() -> Result<Option<usize>, Error> {
    match std::env::var("QKZLAB_THREADS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Error::Parse(format!("QKZLAB_THREADS must be a positive integer, got {s:?}"))),
        _ => Ok(None),
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn run_tsscpp(a: &TsscppArgs, as_json: bool) -> Result<ExitCode, Error> {
    let method: Method = a.method.into();
    if a.n > a.max_direct_n && (a.list || method == Method::Direct) {
        return Err(Error::ResourceBound { what: "direct enumeration size", n: a.n, max: a.max_direct_n, flag: "--max-direct-n" });
    }
    if a.list {
        let configs: Vec<serde_json::Value> =
            tsscpp::enumerate_nilp(a.n, a.modified).iter().map(|c| c.to_json()).collect();
        print_json(&serde_json::Value::Array(configs));
        return Ok(ExitCode::SUCCESS);
    }
    let mut weights = WeightSpec::symbolic(a.n);
    if a.tau {
        let tau = ExactPoly::var(Var::TAU);
        let t0 = if a.t { ExactPoly::var(Var::T) } else { ExactPoly::var(Var::t(0)) };
        weights = WeightSpec::specialized(a.n, t0, tau);
    } else if a.t {
        let mut slices: Vec<ExactPoly> = (0..weights.len()).map(|k| weights.slice(k).clone()).collect();
        slices[0] = ExactPoly::var(Var::T);
        weights = WeightSpec::new(slices);
    }
    let p = tsscpp::gen_poly(a.n, &weights, method, a.modified);
    if as_json {
        print_json(&json!({ "n": a.n, "modified": a.modified, "method": method.to_string(), "polynomial": p.to_string() }));
    } else {
        println!("{p}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run_components(a: &ComponentArgs) -> Result<ExitCode, Error> {
    let mode = match (a.mode, a.symbolic) {
        (Some(ModeArg::Symbolic), _) | (None, true) => Mode::Symbolic,
        _ => Mode::Homogeneous,
    };
    let basis = match a.basis {
        BasisArg::Sequence => Basis::Sequence,
        BasisArg::LinkPattern => Basis::LinkPattern,
        BasisArg::Spin => Basis::Spin,
    };
    let v = harness::components(a.n, basis, mode, &a.bounds.bounds())?;
    print_json(&v.to_json());
    eprintln!("{} {basis} components, {mode}, n = {}", v.entries.len(), a.n);
    Ok(ExitCode::SUCCESS)
}

fn run_sum_rules(n: usize, as_json: bool) -> Result<ExitCode, Error> {
    let (sum, refined) = qkz::sum_rules(n);
    if as_json {
        print_json(&json!({ "n": n, "sum": sum.to_string(), "refined": refined.to_string() }));
    } else {
        println!("sum: {sum}");
        println!("refined: {refined}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(a: &VerifyArgs) -> Result<ExitCode, Error> {
    let cfg = VerifyConfig {
        max_n: a.max_n,
        bounds: a.bounds.bounds(),
        max_tsscpp_symbolic_n: a.max_tsscpp_symbolic_n,
        max_schur_n: a.max_schur_n,
        threads: threads_from_env()?,
    };
    let report = harness::run_suite(a.suite, &cfg);
    print_json(&report.to_json(!a.no_timing));
    eprint!("{}", report.summary());
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tsscpp(a) => run_tsscpp(a, cli.json),
        Command::Components(a) => run_components(a),
        Command::SumRules { n } => run_sum_rules(*n, cli.json),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e @ Error::ResourceBound { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
