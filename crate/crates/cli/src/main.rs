//! Command-line front end: every library computation as a reproducible,
//! scriptable subcommand.
//!
//! Conventions: data goes to standard output, diagnostics to standard error.
//! CSV uses `.` as the decimal mark, `,` as the separator, a header row, and
//! LF line endings; word fields are always double-quoted because word text
//! contains commas. Identical flags produce byte-identical output.
//!
//! Exit codes: 0 success, 1 failed selftest criteria, 2 domain or parse
//! error, 3 numeric error, 4 enumeration cap exceeded, 64 usage error.

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use freeharm::error::{Error, Result};
use freeharm::group_algebra::AlgebraElement;
use freeharm::primtop::{
    is_continuous_function, parse_set_spec, specializes, ContinuityDescriptor, DescriptorPiece,
    PieceFun, PrimPoint, PrimSet,
};
use freeharm::radial::{
    classify_parameter, is_positive_definite_on_ball, p_eval, power_function, spectrum_edge,
    spherical_function,
};
use freeharm::selftest::{run as run_selftest, SelftestConfig};
use freeharm::spectra::{moment, radial_jacobi_matrix, spectral_histogram_distance, SpectralMeasure};
use freeharm::words::{sphere, Rank, DEFAULT_ENUMERATION_CAP};

#[derive(Parser)]
#[command(
    name = "freeharm",
    version,
    about = "Radial harmonic analysis on finitely generated free groups"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Number of free generators (default 2).
    #[arg(long, global = true)]
    l: Option<usize>,
    /// Walk parameter; must equal 1/(2l). Alternative to --l.
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Gauss-Legendre nodes per quadrature panel (minimum 64).
    #[arg(long, global = true, default_value_t = 512)]
    nodes: usize,
    /// Cap on the number of enumerated words.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Tolerance override for positivity checks (must be positive).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    output: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the words of length n.
    Sphere {
        /// Sphere radius.
        #[arg(long)]
        n: usize,
    },
    /// Convolve two algebra elements given as JSON files.
    Convolve {
        /// Left factor (JSON file).
        #[arg(long)]
        lhs: PathBuf,
        /// Right factor (JSON file).
        #[arg(long)]
        rhs: PathBuf,
    },
    /// Project an algebra element (JSON file) onto its radial part.
    Radialize {
        /// Input element (JSON file).
        #[arg(long)]
        input: PathBuf,
    },
    /// Tabulate the spherical polynomials p_0..p_n at a parameter.
    Pn {
        /// Evaluation parameter.
        #[arg(long)]
        c: f64,
        /// Largest index to tabulate.
        #[arg(long)]
        n: usize,
    },
    /// Classify a (possibly complex) spherical parameter.
    Classify {
        /// Real part of the parameter.
        #[arg(long)]
        c: f64,
        /// Imaginary part of the parameter.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
    },
    /// Certify positive definiteness on a ball via the Gram matrix.
    Pdcheck(PdcheckArgs),
    /// Emit a spectral measure: density grid plus atom rows.
    Measure {
        /// Haagerup parameter in [-1, 1]; 0 selects the Kesten measure.
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        /// Number of density grid points (midpoints, interior to the support).
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Moment table of a spectral measure against the exact powers.
    Moments {
        /// Haagerup parameter in [-1, 1].
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        /// Largest moment order.
        #[arg(long)]
        n: usize,
    },
    /// Emit the truncated Jacobi matrix of the averaged walk operator.
    Jacobi {
        /// Truncation dimension (at least 2).
        #[arg(long)]
        n: usize,
    },
    /// Distance between the truncation spectrum and the limit law.
    Histdist {
        /// Truncation dimension (at least 100).
        #[arg(long)]
        n: usize,
        /// Number of histogram bins.
        #[arg(long, default_value_t = 40)]
        bins: usize,
    },
    /// Operations on the primitive ideal space.
    #[command(subcommand)]
    Topology(TopologyCommand),
    /// Run the embedded acceptance criteria (exit 1 on failure).
    Selftest,
}

#[derive(Args)]
#[command(group(ArgGroup::new("family").required(true).args(["c", "u"])))]
struct PdcheckArgs {
    /// Check the spherical function of parameter c.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Check the length-exponential function u^|g|.
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,
    /// Ball radius for the Gram matrix.
    #[arg(long, default_value_t = 3)]
    radius: usize,
}

#[derive(Subcommand)]
enum TopologyCommand {
    /// Closure of a set given in the mini-language
    /// (comma-separated bot, char+, char-, point:T, interval:(A,B]).
    Closure {
        /// Set to close, in the mini-language.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// Does the first point specialize to the second
    /// (second in the closure of the first)?
    Specializes {
        /// Source point (bot, char+, char-, or point:T).
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Target point.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Decide whether a piecewise descriptor defines a continuous function.
    Continuity {
        /// Value at the collapsed interval class.
        #[arg(long, allow_hyphen_values = true)]
        bot: f64,
        /// Value at the +1 character.
        #[arg(long, allow_hyphen_values = true)]
        plus: f64,
        /// Value at the -1 character.
        #[arg(long, allow_hyphen_values = true)]
        minus: f64,
        /// Piece specs "(LO,HI):const:V", "(LO,HI):affine:B,M" or
        /// "(LO,HI):samples:V1,V2,..."; bounds may use the tokens s and -s
        /// for the spectral edge. Pieces must tile (-1,-s) and (s,1).
        #[arg(long = "piece", allow_hyphen_values = true)]
        pieces: Vec<String>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match dispatch(&cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numeric(_) => 3,
        Error::CapExceeded { .. } => 4,
        _ => 2,
    }
}

fn resolve_rank(config: &ConfigArgs) -> Result<Rank> {
    let l = match (config.l, config.r) {
        (Some(l), None) => l,
        (None, None) => 2,
        (Some(l), Some(r)) => {
            let expected = 1.0 / (2.0 * l as f64);
            if (r - expected).abs() > 1e-12 {
                return Err(Error::domain(format!(
                    "--r {r} is inconsistent with --l {l} (expected {expected})"
                )));
            }
            l
        }
        (None, Some(r)) => {
            if !(r > 0.0 && r <= 0.5) {
                return Err(Error::domain(format!("--r {r} outside (0, 1/2]")));
            }
            let l = (1.0 / (2.0 * r)).round();
            if (1.0 / (2.0 * l) - r).abs() > 1e-12 {
                return Err(Error::domain(format!(
                    "--r {r} is not 1/(2l) for any whole number of generators"
                )));
            }
            l as usize
        }
    };
    Rank::new(l)
}

fn validate_config(config: &ConfigArgs) -> Result<()> {
    if config.nodes < 64 {
        return Err(Error::domain(format!(
            "--nodes {} below the minimum of 64",
            config.nodes
        )));
    }
    if let Some(tol) = config.tol {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(Error::domain(format!("--tol {tol} must be positive")));
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<()> {
    validate_config(&cli.config)?;
    let config = &cli.config;
    match &cli.command {
        Command::Sphere { n } => cmd_sphere(config, *n),
        Command::Convolve { lhs, rhs } => cmd_convolve(config, lhs, rhs),
        Command::Radialize { input } => cmd_radialize(config, input),
        Command::Pn { c, n } => cmd_pn(config, *c, *n),
        Command::Classify { c, im } => cmd_classify(config, *c, *im),
        Command::Pdcheck(args) => cmd_pdcheck(config, args),
        Command::Measure { u, points } => cmd_measure(config, *u, *points),
        Command::Moments { u, n } => cmd_moments(config, *u, *n),
        Command::Jacobi { n } => cmd_jacobi(config, *n),
        Command::Histdist { n, bins } => cmd_histdist(config, *n, *bins),
        Command::Topology(topology) => cmd_topology(config, topology),
        Command::Selftest => cmd_selftest(config),
    }
}

// --------------------------------------------------------------------------
// Output helpers
// --------------------------------------------------------------------------

/// A word field is always quoted: word text contains the CSV separator.
fn csv_word(text: &str) -> String {
    format!("\"{}\"", text.replace('"', "\"\""))
}

fn emit(buffer: String) -> Result<()> {
    print!("{buffer}");
    Ok(())
}

fn emit_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string(value)
        .map_err(|e| Error::numeric(format!("serialization failed: {e}")))?;
    emit(format!("{text}\n"))
}

fn read_element(path: &Path) -> Result<AlgebraElement> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
    AlgebraElement::from_json_str(&text)
}

/// Element terms as (text, numerator, denominator) rows sorted by word text,
/// the same order the JSON form uses.
fn element_rows(element: &AlgebraElement) -> Vec<(String, String, String)> {
    let mut rows: Vec<(String, String, String)> = element
        .terms()
        .map(|(w, c)| (w.text(), c.numer().to_string(), c.denom().to_string()))
        .collect();
    rows.sort();
    rows
}

// --------------------------------------------------------------------------
// Subcommands
// --------------------------------------------------------------------------

#[derive(Serialize)]
struct SphereOut {
    l: usize,
    n: usize,
    words: Vec<String>,
}

fn cmd_sphere(config: &ConfigArgs, n: usize) -> Result<()> {
    let rank = resolve_rank(config)?;
    let words: Vec<String> = sphere(rank, n, config.cap)?
        .iter()
        .map(|w| w.text())
        .collect();
    match config.output {
        Format::Json => emit_json(&SphereOut {
            l: rank.l(),
            n,
            words,
        }),
        Format::Csv => {
            let mut out = String::from("index,word\n");
            for (index, word) in words.iter().enumerate() {
                out.push_str(&format!("{index},{}\n", csv_word(word)));
            }
            emit(out)
        }
    }
}

fn emit_element(config: &ConfigArgs, element: &AlgebraElement) -> Result<()> {
    match config.output {
        Format::Json => emit(format!("{}\n", element.to_json_string())),
        Format::Csv => {
            let mut out = String::from("word,num,den\n");
            for (word, num, den) in element_rows(element) {
                out.push_str(&format!("{},{num},{den}\n", csv_word(&word)));
            }
            emit(out)
        }
    }
}

fn cmd_convolve(config: &ConfigArgs, lhs: &Path, rhs: &Path) -> Result<()> {
    let product = read_element(lhs)?.convolve(&read_element(rhs)?)?;
    emit_element(config, &product)
}

fn cmd_radialize(config: &ConfigArgs, input: &Path) -> Result<()> {
    let radial = read_element(input)?.radialize();
    match config.output {
        Format::Json => emit(format!("{}\n", radial.to_json_string())),
        Format::Csv => {
            let mut out = String::from("n,num,den\n");
            for (n, coeff) in radial.coeffs().iter().enumerate() {
                out.push_str(&format!("{n},{},{}\n", coeff.numer(), coeff.denom()));
            }
            emit(out)
        }
    }
}

#[derive(Serialize)]
struct PnOut {
    l: usize,
    c: f64,
    values: Vec<f64>,
}

fn cmd_pn(config: &ConfigArgs, c: f64, n: usize) -> Result<()> {
    let rank = resolve_rank(config)?;
    if !c.is_finite() {
        return Err(Error::domain("--c must be finite"));
    }
    let values: Vec<f64> = (0..=n).map(|k| p_eval(rank, k, c)).collect();
    match config.output {
        Format::Json => emit_json(&PnOut {
            l: rank.l(),
            c,
            values,
        }),
        Format::Csv => {
            let mut out = String::from("n,c,p_n(c)\n");
            for (k, value) in values.iter().enumerate() {
                out.push_str(&format!("{k},{c},{value}\n"));
            }
            emit(out)
        }
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    l: usize,
    re: f64,
    im: f64,
    l1_bounded: bool,
    cstar_bounded: bool,
    positive_definite: bool,
    series: String,
}

fn cmd_classify(config: &ConfigArgs, c: f64, im: f64) -> Result<()> {
    let rank = resolve_rank(config)?;
    let class = classify_parameter(rank, Complex64::new(c, im))?;
    let row = ClassifyOut {
        l: rank.l(),
        re: c,
        im,
        l1_bounded: class.l1_bounded,
        cstar_bounded: class.cstar_bounded,
        positive_definite: class.positive_definite,
        series: class.series.to_string(),
    };
    match config.output {
        Format::Json => emit_json(&row),
        Format::Csv => emit(format!(
            "re,im,l1_bounded,cstar_bounded,positive_definite,series\n{},{},{},{},{},{}\n",
            row.re, row.im, row.l1_bounded, row.cstar_bounded, row.positive_definite, row.series
        )),
    }
}

#[derive(Serialize)]
struct PdcheckOut {
    l: usize,
    family: &'static str,
    parameter: f64,
    radius: usize,
    dimension: usize,
    min_eigenvalue: f64,
    tolerance: f64,
    positive: bool,
}

fn cmd_pdcheck(config: &ConfigArgs, args: &PdcheckArgs) -> Result<()> {
    let rank = resolve_rank(config)?;
    let (family, parameter) = match (args.c, args.u) {
        (Some(c), None) => ("spherical", c),
        (None, Some(u)) => ("power", u),
        _ => unreachable!("the flag group admits exactly one of --c/--u"),
    };
    if !parameter.is_finite() {
        return Err(Error::domain("parameter must be finite"));
    }
    let report = if family == "spherical" {
        is_positive_definite_on_ball(
            rank,
            spherical_function(rank, parameter),
            args.radius,
            config.cap,
            config.tol,
        )?
    } else {
        is_positive_definite_on_ball(
            rank,
            power_function(parameter),
            args.radius,
            config.cap,
            config.tol,
        )?
    };
    let row = PdcheckOut {
        l: rank.l(),
        family,
        parameter,
        radius: args.radius,
        dimension: report.dimension,
        min_eigenvalue: report.min_eigenvalue,
        tolerance: report.tolerance,
        positive: report.positive,
    };
    match config.output {
        Format::Json => emit_json(&row),
        Format::Csv => emit(format!(
            "family,parameter,radius,dimension,min_eigenvalue,tolerance,positive\n\
             {},{},{},{},{},{},{}\n",
            row.family,
            row.parameter,
            row.radius,
            row.dimension,
            row.min_eigenvalue,
            row.tolerance,
            row.positive
        )),
    }
}

#[derive(Serialize)]
struct MeasureOut {
    l: usize,
    u: f64,
    support_edge: f64,
    density: Vec<DensityRow>,
    atoms: Vec<AtomRow>,
}

#[derive(Serialize)]
struct DensityRow {
    t: f64,
    density: f64,
}

#[derive(Serialize)]
struct AtomRow {
    t: f64,
    mass: f64,
}

fn cmd_measure(config: &ConfigArgs, u: f64, points: usize) -> Result<()> {
    let rank = resolve_rank(config)?;
    let measure = SpectralMeasure::haagerup(rank, u)?;
    let edge = measure.support_edge();
    // Midpoint grid, strictly interior: the density can diverge at the
    // support edge when the parameter is critical.
    let density: Vec<DensityRow> = (0..points)
        .map(|j| {
            let t = edge * (2.0 * (j as f64 + 0.5) / points as f64 - 1.0);
            DensityRow {
                t,
                density: measure.density(t),
            }
        })
        .collect();
    let atoms: Vec<AtomRow> = measure
        .atoms()
        .iter()
        .map(|&(t, mass)| AtomRow { t, mass })
        .collect();
    match config.output {
        Format::Json => emit_json(&MeasureOut {
            l: rank.l(),
            u,
            support_edge: edge,
            density,
            atoms,
        }),
        Format::Csv => {
            let mut out = String::from("t,density,atom,mass\n");
            for row in &density {
                out.push_str(&format!("{},{},0,0\n", row.t, row.density));
            }
            for atom in &atoms {
                out.push_str(&format!("{},0,1,{}\n", atom.t, atom.mass));
            }
            emit(out)
        }
    }
}

#[derive(Serialize)]
struct MomentsOut {
    l: usize,
    u: f64,
    rows: Vec<MomentRow>,
}

#[derive(Serialize)]
struct MomentRow {
    u: f64,
    n: usize,
    moment: f64,
    expected: f64,
    abs_error: f64,
}

fn cmd_moments(config: &ConfigArgs, u: f64, n_max: usize) -> Result<()> {
    let rank = resolve_rank(config)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let value = moment(rank, u, n, config.nodes)?;
        let expected = u.powi(n as i32);
        rows.push(MomentRow {
            u,
            n,
            moment: value,
            expected,
            abs_error: (value - expected).abs(),
        });
    }
    match config.output {
        Format::Json => emit_json(&MomentsOut {
            l: rank.l(),
            u,
            rows,
        }),
        Format::Csv => {
            let mut out = String::from("u,n,moment,expected,abs_error\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.u, row.n, row.moment, row.expected, row.abs_error
                ));
            }
            emit(out)
        }
    }
}

#[derive(Serialize)]
struct JacobiOut {
    l: usize,
    dimension: usize,
    diagonal: Vec<f64>,
    offdiagonal: Vec<f64>,
}

fn cmd_jacobi(config: &ConfigArgs, n: usize) -> Result<()> {
    let rank = resolve_rank(config)?;
    let matrix = radial_jacobi_matrix(rank, n)?;
    match config.output {
        Format::Json => emit_json(&JacobiOut {
            l: rank.l(),
            dimension: matrix.dimension(),
            diagonal: matrix.diagonal().to_vec(),
            offdiagonal: matrix.offdiagonal().to_vec(),
        }),
        Format::Csv => {
            let mut out = String::from("index,diagonal,offdiagonal\n");
            for (index, diag) in matrix.diagonal().iter().enumerate() {
                match matrix.offdiagonal().get(index) {
                    Some(off) => out.push_str(&format!("{index},{diag},{off}\n")),
                    None => out.push_str(&format!("{index},{diag},\n")),
                }
            }
            emit(out)
        }
    }
}

#[derive(Serialize)]
struct HistdistOut {
    l: usize,
    n: usize,
    bins: usize,
    nodes: usize,
    distance: f64,
}

fn cmd_histdist(config: &ConfigArgs, n: usize, bins: usize) -> Result<()> {
    let rank = resolve_rank(config)?;
    if bins == 0 {
        return Err(Error::domain("--bins must be at least 1"));
    }
    let distance = spectral_histogram_distance(rank, n, bins, config.nodes)?;
    match config.output {
        Format::Json => emit_json(&HistdistOut {
            l: rank.l(),
            n,
            bins,
            nodes: config.nodes,
            distance,
        }),
        Format::Csv => emit(format!(
            "n,bins,nodes,distance\n{n},{bins},{},{distance}\n",
            config.nodes
        )),
    }
}

// --------------------------------------------------------------------------
// Topology subcommands (mini-language in, mini-language out)
// --------------------------------------------------------------------------

fn single_point(rank: Rank, spec: &str) -> Result<PrimPoint> {
    let set = parse_set_spec(rank, spec)?;
    let mut found: Vec<PrimPoint> = Vec::new();
    if set.has_bot() {
        found.push(PrimPoint::Bot);
    }
    if set.has_char_plus() {
        found.push(PrimPoint::CharPlus);
    }
    if set.has_char_minus() {
        found.push(PrimPoint::CharMinus);
    }
    for piece in set.pieces() {
        if !piece.is_point() {
            return Err(Error::domain(format!(
                "'{spec}' is an interval, not a single point"
            )));
        }
        found.push(PrimPoint::Sph(piece.lo));
    }
    match found.as_slice() {
        [point] => Ok(*point),
        _ => Err(Error::domain(format!(
            "'{spec}' does not denote exactly one point"
        ))),
    }
}

/// Interval bound in a piece spec: a float, or `s` / `-s` for the exact
/// spectral edge (not expressible as a short decimal).
fn parse_bound(rank: Rank, token: &str) -> Result<f64> {
    match token.trim() {
        "s" => Ok(spectrum_edge(rank)),
        "-s" => Ok(-spectrum_edge(rank)),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::parse(format!("bad interval bound '{other}'"))),
    }
}

fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(format!("bad number '{}'", part.trim())))
        })
        .collect()
}

/// Piece spec `(LO,HI):const:V` | `(LO,HI):affine:B,M` | `(LO,HI):samples:...`.
fn parse_piece(rank: Rank, spec: &str) -> Result<DescriptorPiece> {
    let spec = spec.trim();
    let malformed = || Error::parse(format!("malformed piece '{spec}'"));
    let rest = spec.strip_prefix('(').ok_or_else(malformed)?;
    let close = rest.find(')').ok_or_else(malformed)?;
    let bounds: Vec<&str> = rest[..close].split(',').collect();
    if bounds.len() != 2 {
        return Err(malformed());
    }
    let lo = parse_bound(rank, bounds[0])?;
    let hi = parse_bound(rank, bounds[1])?;
    let fun_spec = rest[close + 1..].strip_prefix(':').ok_or_else(malformed)?;
    let (kind, args) = fun_spec.split_once(':').ok_or_else(malformed)?;
    let fun = match kind {
        "const" => {
            let values = parse_floats(args)?;
            if values.len() != 1 {
                return Err(malformed());
            }
            PieceFun::Const(values[0])
        }
        "affine" => {
            let values = parse_floats(args)?;
            if values.len() != 2 {
                return Err(malformed());
            }
            PieceFun::Affine {
                intercept: values[0],
                slope: values[1],
            }
        }
        "samples" => {
            let values = parse_floats(args)?;
            if values.len() < 2 {
                return Err(Error::parse(format!(
                    "piece '{spec}' needs at least two samples"
                )));
            }
            PieceFun::Samples(values)
        }
        _ => return Err(malformed()),
    };
    Ok(DescriptorPiece { lo, hi, fun })
}

fn cmd_topology(config: &ConfigArgs, command: &TopologyCommand) -> Result<()> {
    let rank = resolve_rank(config)?;
    match command {
        TopologyCommand::Closure { set } => {
            let closed: PrimSet = parse_set_spec(rank, set)?.closure();
            emit(format!("{closed}\n"))
        }
        TopologyCommand::Specializes { from, to } => {
            let from = single_point(rank, from)?;
            let to = single_point(rank, to)?;
            emit(format!("{}\n", specializes(rank, from, to)?))
        }
        TopologyCommand::Continuity {
            bot,
            plus,
            minus,
            pieces,
        } => {
            let descriptor = ContinuityDescriptor {
                value_at_bot: *bot,
                value_at_plus: *plus,
                value_at_minus: *minus,
                pieces: pieces
                    .iter()
                    .map(|spec| parse_piece(rank, spec))
                    .collect::<Result<Vec<_>>>()?,
            };
            let report = is_continuous_function(rank, &descriptor)?;
            match report.certificate {
                None => emit("continuous\n".to_string()),
                Some(certificate) => emit(format!("discontinuous: {certificate}\n")),
            }
        }
    }
}

fn cmd_selftest(config: &ConfigArgs) -> Result<()> {
    let selftest_config = SelftestConfig {
        nodes: config.nodes,
        seed: config.seed,
        cap: config.cap,
    };
    let report = run_selftest(&selftest_config)?;
    emit(report.render())?;
    if !report.passed {
        std::process::exit(1);
    }
    Ok(())
}
