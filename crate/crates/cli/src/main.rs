//! Command-line front end: exact three-distance / three-gap analysis,
//! Farey utilities, temperament ladders, SVG plots, and engine-vs-oracle
//! verification.
//!
//! Exit codes: 0 success (and `verify` agreement), 1 `verify` mismatch,
//! 2 validation errors, 3 insufficient precision, 4 search cap exceeded or
//! degenerate rational input.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use steinhaus::{
    brute_gaps, brute_lengths, decompose, empirical_frequencies, farey_iter, farey_neighbors,
    gap_structure, hits, render_partition_strip, render_un_map, temperament_report,
    DistancePartition, Error, GapStructure, Neighbors, Rational, RealValue, UnMapSpec,
    DEFAULT_PRECISION_BITS, DEFAULT_SCAN_CAP, FAREY_SEQUENCE_CAP,
};

#[derive(Parser)]
#[command(name = "steinhaus", version, about = "Exact three-distance and three-gap analysis of circle rotations", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for analysis commands
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Precision (bits) for named constants like log2_3_frac
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_BITS)]
    precision_bits: u32,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Three-distance decomposition of the circle at order n
    Decompose(DecomposeArgs),
    /// Three-gap structure of return times below beta
    Gaps(GapsArgs),
    /// Farey sequence F_n, or the pair surrounding a value
    Farey(FareyArgs),
    /// Temperament ladder rows for a generator
    Temperament(TemperamentArgs),
    /// SVG map of all lines h = i*alpha - j over the unit square
    PlotUn(PlotUnArgs),
    /// SVG strip of one partition with rank and length labels
    PlotStrip(PlotStripArgs),
    /// Engine-vs-oracle comparison; exits 0 iff they agree
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    /// alpha: p/q, decimal, or named constant (phi_frac, sqrt2_frac, log2_3_frac)
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    n: u64,
}

#[derive(Args)]
struct GapsArgs {
    #[arg(long)]
    alpha: String,
    /// beta: p/q or decimal in (0,1)
    #[arg(long)]
    beta: String,
    /// Also census realized gaps among the first N indices
    #[arg(long)]
    census: Option<u64>,
    /// Cap for the minimal-return-index search
    #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
    scan_cap: u64,
}

#[derive(Args)]
struct FareyArgs {
    #[arg(long)]
    n: u64,
    /// Report the F_n pair surrounding this value instead of listing F_n
    #[arg(long)]
    neighbors: Option<String>,
    /// Enumeration refusal threshold
    #[arg(long, default_value_t = FAREY_SEQUENCE_CAP)]
    cap: u64,
}

#[derive(Args)]
struct TemperamentArgs {
    #[arg(long)]
    generator: String,
    /// Comma-separated note counts, e.g. 2,3,5,7,12,17
    #[arg(long, value_delimiter = ',')]
    counts: Vec<u64>,
}

#[derive(Args)]
struct PlotUnArgs {
    #[arg(long)]
    n: u64,
    /// Dashed verticals at interior members of F_{n-1}
    #[arg(long)]
    farey_verticals: bool,
    #[arg(long, default_value_t = 640)]
    width: u64,
    #[arg(long, default_value_t = 640)]
    height: u64,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct PlotStripArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Exact rational alpha (the oracle refuses approximations)
    #[arg(long)]
    alpha: String,
    /// Three-distance mode: order n
    #[arg(long)]
    n: Option<u64>,
    /// Three-gap mode: beta threshold
    #[arg(long)]
    beta: Option<String>,
    /// Three-gap mode: hit horizon
    #[arg(long, short = 'N')]
    horizon: Option<u64>,
}

fn main() -> ExitCode {
    // die quietly when a pipe consumer closes early instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error[{}]: {err}", error_slug(&err));
            exit_code_for(&err)
        }
    }
}

fn error_slug(err: &Error) -> &'static str {
    match err {
        Error::Parse(_) => "parse-error",
        Error::AlphaOutOfRange => "alpha-out-of-range",
        Error::PrecisionInsufficient(_) => "precision-insufficient",
        Error::FareySizeCap { .. } => "farey-size-cap",
        Error::IndexOutOfRange { .. } => "index-out-of-range",
        Error::GapSearchCapExceeded(_) => "gap-search-cap-exceeded",
        Error::RationalAlphaDegenerate => "rational-alpha-degenerate",
        Error::NotAHit(_) => "not-a-hit",
        Error::ApproximateInputRefused => "approximate-input-refused",
        Error::InvalidArgument(_) => "invalid-argument",
    }
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::PrecisionInsufficient(_) => ExitCode::from(3),
        Error::GapSearchCapExceeded(_) | Error::RationalAlphaDegenerate => ExitCode::from(4),
        _ => ExitCode::from(2),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Decompose(args) => cmd_decompose(cli, args),
        Command::Gaps(args) => cmd_gaps(cli, args),
        Command::Farey(args) => cmd_farey(cli, args),
        Command::Temperament(args) => cmd_temperament(cli, args),
        Command::PlotUn(args) => cmd_plot_un(args),
        Command::PlotStrip(args) => cmd_plot_strip(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
    }
}

fn parse_alpha(cli: &Cli, spec: &str) -> Result<RealValue, Error> {
    RealValue::parse(spec, cli.precision_bits)
}

fn parse_beta(spec: &str) -> Result<Rational, Error> {
    let beta = Rational::parse(spec)?;
    if !beta.is_proper() {
        return Err(Error::InvalidArgument(format!("beta must be in (0,1), got {beta}")));
    }
    Ok(beta)
}

fn emit(value: &serde_json::Value) {
    println!("{value}");
}

fn display(r: &Rational) -> String {
    r.to_decimal_string(6)
}

fn cmd_decompose(cli: &Cli, args: &DecomposeArgs) -> Result<ExitCode, Error> {
    let alpha = parse_alpha(cli, &args.alpha)?;
    let partition = decompose(&alpha, args.n)?;
    match cli.format {
        Format::Json => {
            let mut value = serde_json::to_value(&partition).expect("serializable");
            if let DistancePartition::General(g) = &partition {
                value["s_display"] = json!(display(g.s()));
                value["t_display"] = json!(display(g.t()));
            }
            value["alpha"] = serde_json::to_value(&alpha).expect("serializable");
            emit(&value);
        }
        Format::Text => match &partition {
            DistancePartition::Uniform(u) => {
                println!("case: uniform");
                println!("alpha is a member of F_{}; {} intervals of 1/{}", u.n(), u.q(), u.q());
            }
            DistancePartition::General(g) => {
                let pair = g.pair();
                println!("case: general (n = {})", g.n());
                println!(
                    "farey pair: {}/{} < alpha < {}/{}",
                    pair.a(), pair.b(), pair.c(), pair.d()
                );
                println!("s   = {} ~ {}  x{}", g.s(), display(g.s()), g.count_s());
                println!("t   = {} ~ {}  x{}", g.t(), display(g.t()), g.count_t());
                let st = g.s_plus_t();
                println!("s+t = {} ~ {}  x{}", st, display(&st), g.count_st());
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gaps(cli: &Cli, args: &GapsArgs) -> Result<ExitCode, Error> {
    let alpha = parse_alpha(cli, &args.alpha)?;
    let beta = parse_beta(&args.beta)?;
    let structure = gap_structure(&alpha, &beta, args.scan_cap)?;
    let census = args
        .census
        .map(|horizon| empirical_frequencies(&alpha, &beta, horizon))
        .transpose()?;
    match cli.format {
        Format::Json => {
            let mut value = serde_json::to_value(&structure).expect("serializable");
            value["alpha"] = serde_json::to_value(&alpha).expect("serializable");
            let freq_display: serde_json::Map<String, serde_json::Value> = structure
                .frequencies()
                .iter()
                .map(|(gap, freq)| (gap.to_string(), json!(display(freq))))
                .collect();
            value["freqs_display"] = json!(freq_display);
            if let Some(census) = &census {
                let measured: serde_json::Map<String, serde_json::Value> = census
                    .iter()
                    .map(|(gap, density)| {
                        (gap.to_string(), json!({
                            "density": density.to_string(),
                            "display": display(density),
                        }))
                    })
                    .collect();
                value["census"] = json!(measured);
            }
            emit(&value);
        }
        Format::Text => {
            match &structure {
                GapStructure::Wide(w) => {
                    println!("case: wide (beta = {} >= max(alpha, 1-alpha))", w.beta());
                    println!("gap 1: frequency {} ~ {}", w.freq_1(), display(w.freq_1()));
                    println!("gap 2: frequency {} ~ {}", w.freq_2(), display(w.freq_2()));
                }
                GapStructure::Narrow(n) => {
                    println!("case: narrow (b = {}, d = {})", n.b(), n.d());
                    println!("s = {} ~ {}", n.s(), display(n.s()));
                    println!("t = {} ~ {}", n.t(), display(n.t()));
                    for (gap, freq) in structure.frequencies() {
                        println!("gap {gap}: frequency {} ~ {}", freq, display(&freq));
                    }
                }
            }
            if let Some(census) = &census {
                println!("census over {} indices:", args.census.unwrap());
                for (gap, density) in census {
                    println!("gap {gap}: density {} ~ {}", density, display(density));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_farey(cli: &Cli, args: &FareyArgs) -> Result<ExitCode, Error> {
    if let Some(spec) = &args.neighbors {
        let alpha = parse_alpha(cli, spec)?;
        let neighbors = farey_neighbors(&alpha, args.n)?;
        match cli.format {
            Format::Json => {
                let value = match &neighbors {
                    Neighbors::ExactMember(m) => json!({
                        "case": "member",
                        "member": m.to_string(),
                        "n": args.n,
                    }),
                    Neighbors::Pair(p) => json!({
                        "case": "pair",
                        "pair": {"a": p.a(), "b": p.b(), "c": p.c(), "d": p.d()},
                        "n": args.n,
                    }),
                };
                emit(&value);
            }
            Format::Text => match &neighbors {
                Neighbors::ExactMember(m) => println!("{m} is a member of F_{}", args.n),
                Neighbors::Pair(p) => println!(
                    "{}/{} < {} < {}/{} in F_{}",
                    p.a(), p.b(), spec, p.c(), p.d(), args.n
                ),
            },
        }
        return Ok(ExitCode::SUCCESS);
    }
    // stream in both formats: |F_n| grows quadratically and the cap may
    // allow tens of millions of members
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match cli.format {
        Format::Json => {
            write!(lock, "{{\"n\":{},\"members\":[", args.n).expect("stdout");
            for (i, member) in farey_iter(args.n, args.cap)?.enumerate() {
                let sep = if i == 0 { "" } else { "," };
                write!(lock, "{sep}\"{member}\"").expect("stdout");
            }
            writeln!(lock, "]}}").expect("stdout");
        }
        Format::Text => {
            for member in farey_iter(args.n, args.cap)? {
                writeln!(lock, "{member}").expect("stdout");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_temperament(cli: &Cli, args: &TemperamentArgs) -> Result<ExitCode, Error> {
    let generator = parse_alpha(cli, &args.generator)?;
    let report = temperament_report(&generator, &args.counts)?;
    match cli.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = report
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "notes": row.notes,
                        "ranks_in_position_order": row.ranks_in_position_order,
                        "lengths": row.lengths.iter().map(|(len, mult)| json!({
                            "length": len.to_string(),
                            "display": len.to_decimal_string(3),
                            "count": mult,
                        })).collect::<Vec<_>>(),
                        "two_length": row.two_length,
                    })
                })
                .collect();
            emit(&json!({
                "generator": report.generator.to_string(),
                "rows": rows,
                "convergent_denominators": report.convergent_denominators,
            }));
        }
        Format::Text => {
            for row in &report.rows {
                let lengths: Vec<String> = row
                    .lengths
                    .iter()
                    .map(|(len, mult)| format!("{} x{}", len.to_decimal_string(3), mult))
                    .collect();
                println!(
                    "{:>3} notes: {}{}",
                    row.notes,
                    lengths.join(", "),
                    if row.two_length { "  [two lengths]" } else { "" }
                );
            }
            println!(
                "convergent denominators: {:?}",
                report.convergent_denominators
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_svg(svg: &str, out: &Option<std::path::PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, svg)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{svg}");
            Ok(())
        }
    }
}

fn cmd_plot_un(args: &PlotUnArgs) -> Result<ExitCode, Error> {
    let spec = UnMapSpec::new(args.n, args.farey_verticals, args.width, args.height)?;
    write_svg(&render_un_map(&spec), &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_plot_strip(cli: &Cli, args: &PlotStripArgs) -> Result<ExitCode, Error> {
    let alpha = parse_alpha(cli, &args.alpha)?;
    write_svg(&render_partition_strip(&alpha, args.n)?, &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode, Error> {
    let alpha = parse_alpha(cli, &args.alpha)?;
    match (args.n, &args.beta, args.horizon) {
        (Some(n), None, None) => verify_distance(cli, &alpha, n),
        (None, Some(beta), Some(horizon)) => {
            verify_gaps(cli, &alpha, &parse_beta(beta)?, horizon)
        }
        _ => Err(Error::InvalidArgument(
            "use either --n (distance mode) or --beta with -N (gap mode)".into(),
        )),
    }
}

fn verify_distance(cli: &Cli, alpha: &RealValue, n: u64) -> Result<ExitCode, Error> {
    let engine = decompose(alpha, n)?.census();
    let oracle = brute_lengths(alpha, n)?;
    let agree = engine == oracle;
    let census_json = |census: &steinhaus::LengthCensus| -> serde_json::Value {
        json!(census
            .entries()
            .map(|(len, mult)| json!({
                "length": len.to_string(),
                "display": display(len),
                "count": mult,
            }))
            .collect::<Vec<_>>())
    };
    match cli.format {
        Format::Json => emit(&json!({
            "mode": "distance",
            "alpha": alpha.approx().to_string(),
            "n": n,
            "engine": census_json(&engine),
            "oracle": census_json(&oracle),
            "match": agree,
        })),
        Format::Text => {
            println!("three-distance verify: alpha = {}, n = {n}", alpha.approx());
            for (len, mult) in engine.entries() {
                println!("  engine  {} ~ {}  x{mult}", len, display(len));
            }
            for (len, mult) in oracle.entries() {
                println!("  oracle  {} ~ {}  x{mult}", len, display(len));
            }
            println!("{}", if agree { "MATCH" } else { "MISMATCH" });
        }
    }
    Ok(if agree { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn verify_gaps(
    cli: &Cli,
    alpha: &RealValue,
    beta: &Rational,
    horizon: u64,
) -> Result<ExitCode, Error> {
    let structure = gap_structure(alpha, beta, DEFAULT_SCAN_CAP)?;
    let predicted = structure.gap_set();
    let engine_hits = hits(alpha, beta, horizon.saturating_sub(1))?;
    let mut engine_census = std::collections::BTreeMap::new();
    for w in engine_hits.windows(2) {
        *engine_census.entry(w[1] - w[0]).or_insert(0u64) += 1;
    }
    let oracle_census = brute_gaps(alpha, beta, horizon)?;
    let census_match = engine_census == oracle_census;
    let subset = oracle_census.keys().all(|g| predicted.contains(g));
    // every realized gap must also classify correctly from its position
    let mut classified = true;
    if let GapStructure::Narrow(narrow) = &structure {
        for w in engine_hits.windows(2) {
            let (pos, _) = alpha.frac_multiple(w[0])?;
            if narrow.gap_after(&pos)? != w[1] - w[0] {
                classified = false;
            }
        }
    }
    let agree = census_match && subset && classified;
    let census_json = |census: &std::collections::BTreeMap<u64, u64>| -> serde_json::Value {
        json!(census
            .iter()
            .map(|(gap, count)| (gap.to_string(), json!(count)))
            .collect::<serde_json::Map<_, _>>())
    };
    match cli.format {
        Format::Json => emit(&json!({
            "mode": "gaps",
            "alpha": alpha.approx().to_string(),
            "beta": beta.to_string(),
            "horizon": horizon,
            "predicted_gap_set": predicted,
            "engine_census": census_json(&engine_census),
            "oracle_census": census_json(&oracle_census),
            "match": agree,
        })),
        Format::Text => {
            println!(
                "three-gap verify: alpha = {}, beta = {beta}, horizon = {horizon}",
                alpha.approx()
            );
            println!("  predicted gap set: {predicted:?}");
            println!("  engine census:     {engine_census:?}");
            println!("  oracle census:     {oracle_census:?}");
            println!("{}", if agree { "MATCH" } else { "MISMATCH" });
        }
    }
    Ok(if agree { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
