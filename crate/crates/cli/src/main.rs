use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use anisoperim::anisotropy::{check_generalized_graph, check_partial_monotonicity, restriction_gap_sup, SamplerParams};
use anisoperim::casebook::{self, fmt_num, Format, RowStatus};
use anisoperim::descriptors::{parse_windows, CandidateDesc, NormDesc, ScenarioDesc, SetDesc};
use anisoperim::geometry::{perimeter, slice_check, Window};
use anisoperim::varmin::{minimize_G, verify_minimality, Status, VerifyMethod};
use anisoperim::Anisotropy;

/// Anisotropic perimeters, area functionals and minimality checks.
///
/// Exit status: 0 on success, 1 when a verification or scenario fails,
/// 2 on usage or configuration errors. The only environment variable read is
/// ANISOPERIM_THREADS, which caps the worker threads.
#[derive(Parser)]
#[command(name = "anisoperim", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a norm, its dual, or check a structural predicate.
    Norm(NormArgs),
    /// Exact perimeter of a polyhedral set inside a window.
    Perim(PerimArgs),
    /// Horizontal and vertical slicing identities of a polyhedral set.
    Slice(SliceArgs),
    /// Minimize the discrete area functional with Dirichlet collar data.
    Gmin(GminArgs),
    /// Check a digitized candidate set for minimality on cell windows.
    Verify(VerifyArgs),
    /// Run the registered worked examples.
    Casebook(CasebookArgs),
}

#[derive(Args)]
struct NormArgs {
    /// JSON norm descriptor.
    #[arg(long)]
    config: PathBuf,
    /// Evaluate Φ at a comma-separated vector.
    #[arg(long, allow_hyphen_values = true)]
    eval: Option<String>,
    /// Evaluate the dual norm Φ° at a comma-separated vector.
    #[arg(long, allow_hyphen_values = true)]
    dual: Option<String>,
    /// Check a structural predicate; prints a JSON report, exit 1 if it fails.
    #[arg(long, value_enum)]
    check: Option<Check>,
    /// Ambient dimension for descriptors that leave it open.
    #[arg(long)]
    dim: Option<usize>,
    /// Seed for sampled predicate checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Graph,
    Monotone,
    Gap,
}

#[derive(Args)]
struct PerimArgs {
    /// JSON set descriptor.
    #[arg(long)]
    set: PathBuf,
    /// JSON norm descriptor.
    #[arg(long)]
    norm: PathBuf,
    /// Window as "lo1,lo2,...:hi1,hi2,..."; defaults to the set's window.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

#[derive(Args)]
struct SliceArgs {
    /// JSON set descriptor.
    #[arg(long)]
    set: PathBuf,
    /// JSON norm descriptor.
    #[arg(long)]
    norm: PathBuf,
    /// Window as "lo1,lo2,...:hi1,hi2,..."; defaults to the set's window.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

#[derive(Args)]
struct GminArgs {
    /// JSON scenario: norm, lattice, collar and solver settings.
    #[arg(long)]
    scenario: PathBuf,
    /// CSV output with header x,y,u; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON candidate: a lattice and a set to digitize on it.
    #[arg(long)]
    candidate: PathBuf,
    /// JSON norm descriptor (dimension 2 for planar, 3 for axisymmetric lattices).
    #[arg(long)]
    norm: PathBuf,
    /// "i,j,nx,ny;..." in interior cells, "tile:NXxNY[:step]", or "all".
    #[arg(long, default_value = "all")]
    windows: String,
    /// brute, relaxed or sections.
    #[arg(long, default_value = "brute")]
    method: String,
}

#[derive(Args)]
struct CasebookArgs {
    /// "all" or a comma-separated list of scenario ids.
    #[arg(long, default_value = "all")]
    run: String,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv, json or md.
    #[arg(long, default_value = "csv")]
    format: String,
    /// List scenario ids and titles, then exit.
    #[arg(long)]
    list: bool,
    /// Write 0 in the seconds column so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

/// An error with its exit status.
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail { code: 2, msg: msg.into() }
    }
}

impl From<anisoperim::Error> for Fail {
    fn from(e: anisoperim::Error) -> Self {
        let code = match e {
            anisoperim::Error::NotConverged { .. } => 1,
            _ => 2,
        };
        Fail { code, msg: e.to_string() }
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let text = fs::read_to_string(path).map_err(|e| Fail::usage(format!("cannot read {}: {e}", path.display())))?;
    // syntax errors carry a position; shape errors from tagged enums do not
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
        Fail::usage(format!("malformed JSON in {} at line {} column {}: {e}", path.display(), e.line(), e.column()))
    })?;
    serde_json::from_value(value).map_err(|e| Fail::usage(format!("invalid descriptor in {}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_vec(s: &str) -> Res<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Fail::usage(format!("cannot parse {x:?} in vector {s:?}"))))
        .collect()
}

fn parse_window(s: &str) -> Res<Window> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| Fail::usage(format!("window {s:?} must look like lo,...:hi,...")))?;
    Ok(Window::new(parse_vec(lo)?, parse_vec(hi)?)?)
}

fn dims_agree(norm_dim: usize, what: &str, dim: usize) -> Res<()> {
    if norm_dim != dim {
        return Err(Fail::usage(format!(
            "dimension mismatch: norm has dimension {norm_dim}, {what} has dimension {dim}"
        )));
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn norm_cmd(a: NormArgs) -> Res<u8> {
    let desc: NormDesc = read_json(&a.config)?;
    let guess = a.dim.or_else(|| a.eval.as_ref().or(a.dual.as_ref()).map(|s| s.split(',').count()));
    let norm = desc.build(guess).map_err(|e| match e {
        anisoperim::Error::Invalid(m) if guess.is_none() => Fail::usage(format!("{m}; or pass --dim")),
        e => e.into(),
    })?;
    let mut code = 0;
    if let Some(s) = &a.eval {
        let x = parse_vec(s)?;
        dims_agree(norm.dim(), "vector", x.len())?;
        println!("{}", fmt_num(norm.try_eval(&x)?));
    }
    if let Some(s) = &a.dual {
        let y = parse_vec(s)?;
        dims_agree(norm.dim(), "vector", y.len())?;
        println!("{}", fmt_num(norm.try_eval_dual(&y)?));
    }
    if let Some(c) = a.check {
        let p = SamplerParams { seed: a.seed, ..SamplerParams::default() };
        match c {
            Check::Graph | Check::Monotone => {
                let r = match c {
                    Check::Graph => check_generalized_graph(&norm, &p)?,
                    _ => check_partial_monotonicity(&norm, &p)?,
                };
                print!("{}", json(&r));
                if !r.holds() {
                    code = 1;
                }
            }
            Check::Gap => print!("{}", json(&restriction_gap_sup(&norm, &p)?)),
        }
    }
    if a.eval.is_none() && a.dual.is_none() && a.check.is_none() {
        print!("{}", json(&NormDesc::describe(&norm)));
    }
    Ok(code)
}

fn load_set_and_norm(set: &Path, norm: &Path, window: Option<&str>) -> Res<(anisoperim::geometry::PolyhedralSet, Anisotropy, Window)> {
    let sd: SetDesc = read_json(set)?;
    let nd: NormDesc = read_json(norm)?;
    let window = window.map(parse_window).transpose()?;
    let dim = sd.dim().or(window.as_ref().map(Window::dim));
    let norm = nd.build(dim)?;
    if let Some(d) = dim {
        dims_agree(norm.dim(), "set", d)?;
    }
    let set = sd.build(None)?;
    dims_agree(norm.dim(), "set", set.dim())?;
    let window = window.unwrap_or_else(|| set.bound().clone());
    dims_agree(norm.dim(), "window", window.dim())?;
    Ok((set, norm, window))
}

fn perim_cmd(a: PerimArgs) -> Res<u8> {
    let (set, norm, window) = load_set_and_norm(&a.set, &a.norm, a.window.as_deref())?;
    println!("{}", fmt_num(perimeter(&set, &norm, &window)?));
    Ok(0)
}

fn slice_cmd(a: SliceArgs) -> Res<u8> {
    let (set, norm, window) = load_set_and_norm(&a.set, &a.norm, a.window.as_deref())?;
    let r = slice_check(&set, &norm, &window)?;
    println!("horizontal {} {}", fmt_num(r.lhs_horizontal), fmt_num(r.rhs_horizontal));
    println!("vertical {} {}", fmt_num(r.lhs_vertical), fmt_num(r.rhs_vertical));
    println!("max_relative_error {}", fmt_num(r.max_relative_error()));
    Ok(0)
}

fn gmin_cmd(a: GminArgs) -> Res<u8> {
    let sc: ScenarioDesc = read_json(&a.scenario)?;
    let (norm, data, params) = sc.build()?;
    let sol = minimize_G(&norm, &data, &params)?;
    write_out(a.out.as_deref(), &sol.u.to_csv())?;
    if a.out.is_some() {
        println!("energy {}", fmt_num(sol.energy));
        println!("lower_bound {}", fmt_num(sol.lower_bound));
        println!("gap {}", fmt_num(sol.gap));
        println!("iterations {}", sol.iterations);
    }
    Ok(0)
}

fn verify_cmd(a: VerifyArgs) -> Res<u8> {
    let method: VerifyMethod = a.method.parse().map_err(|e: anisoperim::Error| Fail::usage(e.to_string()))?;
    let cd: CandidateDesc = read_json(&a.candidate)?;
    let nd: NormDesc = read_json(&a.norm)?;
    let lattice = cd.lattice.build()?;
    let want = match lattice.geometry {
        anisoperim::varmin::Geometry::Planar => 2,
        anisoperim::varmin::Geometry::Axisymmetric => 3,
    };
    if let Some(d) = cd.set.dim() {
        dims_agree(want, "candidate set", d)?;
    }
    let norm = nd.build(Some(want))?;
    dims_agree(norm.dim(), "lattice embedding", want)?;
    let cand = cd.build()?;
    let windows = parse_windows(&a.windows, &lattice)?;
    let v = verify_minimality(&cand, &norm, &windows, method)?;
    print!("{}", json(&v));
    Ok(if v.status == Status::CertifiedAtScale { 0 } else { 1 })
}

fn casebook_cmd(a: CasebookArgs) -> Res<u8> {
    if a.list {
        for s in casebook::registry() {
            println!("{}\t{}", s.id, s.title);
        }
        return Ok(0);
    }
    let format: Format = a.format.parse().map_err(|e: anisoperim::Error| Fail::usage(e.to_string()))?;
    let rows = casebook::run(&a.run)?;
    write_out(a.out.as_deref(), &casebook::emit(&rows, format, !a.no_timing)?)?;
    let failed: Vec<&str> = rows.iter().filter(|r| r.status == RowStatus::Fail).map(|r| r.id.as_str()).collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("failed: {}", failed.join(", "));
        Ok(1)
    }
}

fn threads() -> Res<()> {
    let Ok(v) = std::env::var("ANISOPERIM_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Fail::usage(format!("ANISOPERIM_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Fail::usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = threads().and_then(|_| match cli.cmd {
        Cmd::Norm(a) => norm_cmd(a),
        Cmd::Perim(a) => perim_cmd(a),
        Cmd::Slice(a) => slice_cmd(a),
        Cmd::Gmin(a) => gmin_cmd(a),
        Cmd::Verify(a) => verify_cmd(a),
        Cmd::Casebook(a) => casebook_cmd(a),
    });
    match res {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
