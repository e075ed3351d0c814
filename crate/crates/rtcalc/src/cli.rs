//! Argument parsing and the `eval`, `verify` and `sweep` commands.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 numerical residual failure. Errors are reported on stderr as one JSON
//! object per line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rtcalc_core::invariant::{self as inv, InvariantError};
use rtcalc_core::qarith::{GlobalParams, DEFAULT_MAX_R};
use rtcalc_core::repr::ModuleLabel;
use rtcalc_core::tangle::{catalog, ColoredBraid};
use rtcalc_core::{Tolerances, C64};
use serde_json::json;

use crate::complex::{format_complex, parse_complex};
use crate::format::{FormatError, InputFile, ResultJson};
use crate::sweep::{parse_grid, sweep};
use crate::verify::{self, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_RESIDUAL: i32 = 3;

const COMPLEX_HELP: &str = "complex numbers are written a+bi or [a,b]";

#[derive(Parser, Debug)]
#[command(name = "rtcalc", version, about = "Renormalized quantum invariants of links from the unrolled quantum group of sl2")]
pub struct Cli {
    /// Largest accepted r.
    #[arg(long, env = "RTCALC_MAX_R", default_value_t = DEFAULT_MAX_R, global = true, hide = true)]
    max_r: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate F′_η of a catalog link or a diagram/braid file.
    Eval(EvalArgs),
    /// Run every verification suite at one r.
    Verify(VerifyArgs),
    /// Evaluate F′_η over a grid of α and η.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Out {
    Json,
    Text,
    Csv,
}

#[derive(Args, Debug)]
#[group(id = "input", required = true, multiple = false)]
struct Input {
    /// unknot, hopf, trefoil, figure8 or connectsum(a,b).
    #[arg(long, group = "input")]
    catalog: Option<String>,
    /// JSON diagram or braid file.
    #[arg(long, group = "input")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Common {
    /// Root order r ≥ 2; q = exp(iπ/r). Required with --catalog.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    r: Option<u32>,
    /// Allowed deviation of the cut tangle from a scalar.
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Out::Json)]
    out: Out,
}

#[derive(Args, Debug)]
#[command(after_help = COMPLEX_HELP)]
struct EvalArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    common: Common,
    /// Color V(α) of the first component of a catalog link.
    #[arg(long, value_parser = parse_complex)]
    alpha: Option<C64>,
    /// Color V(β) of the remaining components (default α).
    #[arg(long, value_parser = parse_complex)]
    beta: Option<C64>,
    #[arg(long, value_parser = parse_complex, default_value = "0.37")]
    eta: C64,
    /// Component to cut along, 0-based (default: first generic one).
    #[arg(long)]
    cut: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..), default_value_t = 2)]
    r: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    /// Run only suites whose name contains this text (repeatable).
    #[arg(long)]
    suite: Vec<String>,
    #[arg(long, value_enum, default_value_t = Out::Text)]
    out: Out,
}

#[derive(Args, Debug)]
#[command(after_help = "grids are comma lists of complex numbers or start:stop:step; complex numbers are written a+bi or [a,b]")]
struct SweepArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    common: Common,
    /// Grid of α for the first component.
    #[arg(long)]
    alpha: String,
    #[arg(long, value_parser = parse_complex)]
    beta: Option<C64>,
    /// Grid of η.
    #[arg(long, default_value = "0.37")]
    eta: String,
    #[arg(long)]
    cut: Option<usize>,
    /// Random seed; sweeps are deterministic and do not use it.
    #[arg(long, hide = true)]
    seed: Option<u64>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("{s:?} is not a positive number")),
    }
}

struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_DOMAIN, kind: "usage", message: message.into() }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        let kind = inv::error_kind(&e);
        let code = if kind == "residual" { EXIT_RESIDUAL } else { EXIT_DOMAIN };
        Failure { code, kind, message: e.to_string() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure { code: EXIT_DOMAIN, kind: "domain", message: e.to_string() }
    }
}

fn diagnostic(err: &mut dyn Write, kind: &str, message: &str) {
    let _ = writeln!(err, "{}", json!({ "error": kind, "message": message }));
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            diagnostic(err, "usage", e.render().to_string().trim());
            return EXIT_DOMAIN;
        }
    };
    let res = match &cli.command {
        Command::Eval(a) => cmd_eval(a, cli.max_r, out),
        Command::Verify(a) => cmd_verify(a, cli.max_r, out),
        Command::Sweep(a) => cmd_sweep(a, cli.max_r, out),
    };
    match res {
        Ok(code) => code,
        Err(f) => {
            diagnostic(err, f.kind, &f.message);
            f.code
        }
    }
}

fn tolerances(tol: Option<f64>) -> Tolerances {
    let mut t = Tolerances::default();
    if let Some(x) = tol {
        t.scalar_residual = x;
    }
    t
}

fn params(r: Option<u32>, max_r: u32) -> Result<GlobalParams, Failure> {
    let r = r.ok_or_else(|| Failure::usage("--r is required"))?;
    GlobalParams::with_max_r(r, max_r).map_err(|e| Failure::usage(e.to_string()))
}

fn catalog_link(params: GlobalParams, name: &str, alpha: C64, beta: Option<C64>) -> Result<ColoredBraid, InvariantError> {
    let braid = catalog(name)?;
    let mut labels = vec![ModuleLabel::Verma(alpha)];
    if let Some(b) = beta {
        labels.push(ModuleLabel::Verma(b));
    }
    Ok(ColoredBraid::by_components(params, braid, &labels)?)
}

enum Loaded {
    Link(ColoredBraid, Option<usize>),
    Diagram(rtcalc_core::tangle::TangleDiagram),
}

fn load_file(path: &PathBuf, r: Option<u32>, max_r: u32) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    match InputFile::parse(&text)? {
        InputFile::Braid(b) => Ok(Loaded::Link(b.to_colored(r, max_r)?, b.cut)),
        InputFile::Diagram(d) => {
            if let Some(r) = r.filter(|&r| r != d.r) {
                return Err(Failure::usage(format!("--r {r} differs from the diagram's r = {}", d.r)));
            }
            Ok(Loaded::Diagram(d.to_diagram(max_r)?))
        }
    }
}

fn cmd_eval(a: &EvalArgs, max_r: u32, out: &mut dyn Write) -> Result<i32, Failure> {
    let tol = tolerances(a.common.tol);
    let result = match (&a.input.catalog, &a.input.file) {
        (Some(name), _) => {
            let params = params(a.common.r, max_r)?;
            let alpha = a.alpha.ok_or_else(|| Failure::usage("--alpha is required with --catalog"))?;
            let link = catalog_link(params, name, alpha, a.beta)?;
            inv::renormalized(&link, a.eta, a.cut, &tol)?
        }
        (None, Some(path)) => match load_file(path, a.common.r, max_r)? {
            Loaded::Link(link, file_cut) => inv::renormalized(&link, a.eta, a.cut.or(file_cut), &tol)?,
            Loaded::Diagram(d) => {
                if a.cut.is_some() {
                    return Err(Failure::usage("--cut applies to braid input; diagrams are supplied pre-cut"));
                }
                inv::renormalized_tangle(&d, a.eta, &tol)?
            }
        },
        (None, None) => return Err(Failure::usage("one of --catalog or --file is required")),
    };
    let rj = ResultJson::from(&result);
    let text = match a.common.out {
        Out::Json => format!("{}\n", serde_json::to_string(&rj).expect("result serializes")),
        Out::Csv => format!(
            "value,eta,cut,residual,r,hash\n{},{},{},{:e},{},{}\n",
            format_complex(result.value),
            format_complex(result.eta),
            rj.cut,
            rj.residual,
            rj.r,
            rj.hash
        ),
        Out::Text => {
            let comp = result.cut_component.map(|k| format!(" (component {k})")).unwrap_or_default();
            format!(
                "F′_η = {}\nη = {}\ncut along {} = {}{comp}\n⟨F(T)⟩ = {}\nscalar residual = {:e}\nr = {}\nhash = {}\n",
                format_complex(result.value),
                format_complex(result.eta),
                rj.cut,
                result.cut_color,
                format_complex(result.tangle_scalar),
                rj.residual,
                rj.r,
                rj.hash
            )
        }
    };
    let _ = out.write_all(text.as_bytes());
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, max_r: u32, out: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = VerifyConfig { r: a.r, seed: a.seed, tol: tolerances(a.tol), max_r };
    let filter = |name: &str| a.suite.is_empty() || a.suite.iter().any(|s| name.contains(s.as_str()));
    let reports = verify::run(&cfg, filter).map_err(|e| Failure::usage(e.to_string()))?;
    if reports.is_empty() {
        return Err(Failure::usage("no suite matches the --suite filter"));
    }
    let failed = reports.iter().filter(|s| !s.passed).count();
    let text = match a.out {
        Out::Json => {
            let v = json!({ "r": a.r, "seed": a.seed, "passed": failed == 0, "suites": reports });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("report serializes"))
        }
        Out::Csv => {
            let mut s = String::from("suite,cases,max_residual,tol,passed\n");
            for r in &reports {
                s.push_str(&format!("{},{},{:e},{:e},{}\n", r.name, r.cases, r.max_residual, r.tol, r.passed));
            }
            s
        }
        Out::Text => {
            let mut s = format!("verify r = {} seed = {}\n", a.r, a.seed);
            for r in &reports {
                s.push_str(&format!(
                    "{} {:<20} {:>4} cases  max residual {:.3e}  tol {:.0e}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.cases,
                    r.max_residual,
                    r.tol
                ));
                if let Some(n) = &r.note {
                    s.push_str(&format!("  ({n})"));
                }
                s.push('\n');
            }
            s.push_str(&format!("{} of {} suites passed\n", reports.len() - failed, reports.len()));
            s
        }
    };
    let _ = out.write_all(text.as_bytes());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_sweep(a: &SweepArgs, max_r: u32, out: &mut dyn Write) -> Result<i32, Failure> {
    let tol = tolerances(a.common.tol);
    let alphas = parse_grid(&a.alpha).map_err(Failure::usage)?;
    let etas = parse_grid(&a.eta).map_err(Failure::usage)?;
    let (params, table) = match (&a.input.catalog, &a.input.file) {
        (Some(name), _) => {
            let params = params(a.common.r, max_r)?;
            catalog(name).map_err(InvariantError::from)?;
            let t = sweep(&params, &alphas, &etas, a.cut, &tol, |al| catalog_link(params, name, al, a.beta));
            (params, t)
        }
        (None, Some(path)) => match load_file(path, a.common.r, max_r)? {
            // the first strand's color is replaced by V(α) on its whole component
            Loaded::Link(link, file_cut) => {
                let params = link.params;
                let comp = link.braid.component_of_strands();
                let t = sweep(&params, &alphas, &etas, a.cut.or(file_cut), &tol, |al| {
                    let labels: Vec<ModuleLabel> = (0..link.components().len())
                        .map(|k| if k == comp[0] { ModuleLabel::Verma(al) } else { link.component_label(k).cloned().expect("component") })
                        .collect();
                    Ok(ColoredBraid::by_components(params, link.braid.clone(), &labels)?)
                });
                (params, t)
            }
            Loaded::Diagram(_) => return Err(Failure::usage("sweep takes a catalog name or a braid file")),
        },
        (None, None) => return Err(Failure::usage("one of --catalog or --file is required")),
    };
    if table.ok_rows() == 0 {
        return Err(Failure::usage("every grid point is guarded or failed"));
    }
    let text = match a.common.out {
        Out::Json => format!("{}\n", serde_json::to_string_pretty(&table).expect("table serializes")),
        Out::Csv => table.to_csv(),
        Out::Text => table.to_text(),
    };
    let _ = out.write_all(text.as_bytes());
    if let Some(x) = table.eta_ratio_residual {
        if x > 1e-9 {
            return Err(Failure {
                code: EXIT_RESIDUAL,
                kind: "residual",
                message: format!("η columns deviate from the sin-ratio by {x:e} at r = {}", params.r()),
            });
        }
    }
    Ok(EXIT_OK)
}
