//! Command-line front end.
//!
//! Exit statuses: 0 success or certified, 1 usage/parse/construction error,
//! 2 orthogonality failure, 3 nontrivial first measurement found.

pub mod document;

use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::compare::{comparison_table, tripartite_grid, Params, CSV_HEADER};
use crate::constructions::{compose_multipartite, lemma1_set, lemma2_set, theorem1_set};
use crate::state::{party_label, StateSet, SystemShape};
use crate::verifier::{
    check_first_round_triviality, check_orthogonality, Certificate, Conclusion,
    TrivialityVerdict,
};
use document::{CertificateDocument, StateSetDocument, TimingEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_ORTHOGONAL: i32 = 2;
pub const EXIT_NONTRIVIAL: i32 = 3;

pub fn exit_status(conclusion: Conclusion) -> i32 {
    match conclusion {
        Conclusion::CertifiedFirstRoundTrivial => EXIT_OK,
        Conclusion::OrthogonalityFailed => EXIT_NOT_ORTHOGONAL,
        Conclusion::NontrivialMeasurementExists => EXIT_NONTRIVIAL,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nonlocal-sets",
    version,
    about = "Construct nonlocal sets of orthogonal product states and certify them exactly"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a state set and write it as a JSON document.
    Construct(ConstructArgs),
    /// Certify a state set read from a file or built in.
    Verify(VerifyArgs),
    /// Compare set sizes against earlier constructions.
    Compare(CompareArgs),
    /// Construct and certify every set in a parameter range.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// 3d-2 states on (d,d,d); needs --d
    Lemma1,
    /// 3d+4 states on (d,d+1,d+2); needs --d
    Lemma2,
    /// 2(n2+n3-1)-n1 states on (n1,n2,n3); needs --dims
    Theorem1,
    /// block composition for n = 3 or n > 6 parties; needs --dims
    Multipartite,
    /// full computational product basis; needs --dims
    Basis,
}

#[derive(Debug, Clone, Args)]
pub struct BuiltinParams {
    /// Local dimension for lemma1/lemma2.
    #[arg(long)]
    pub d: Option<usize>,
    /// Comma-separated local dimensions, e.g. 3,4,5.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    pub kind: Construction,
    #[command(flatten)]
    pub params: BuiltinParams,
    /// Output path; the document goes to standard output when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyFormat {
    Text,
    Machine,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// State-set document to verify.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    /// Verify a built-in construction instead of a file.
    #[arg(long)]
    pub builtin: Option<Construction>,
    #[command(flatten)]
    pub params: BuiltinParams,
    #[arg(long, value_enum, default_value = "text")]
    pub format: VerifyFormat,
    /// Worker threads; defaults to the number of available CPUs.
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Omit wall-clock timings so output is reproducible.
    #[arg(long)]
    pub no_timing: bool,
    /// Also write the certificate document to this path.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Tripartite,
    Multipartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub family: Family,
    /// Tripartite: every 3 <= n1 <= n2 <= n3 <= MAX.
    #[arg(long)]
    pub max: Option<u64>,
    /// Tripartite: one explicit n1,n2,n3 tuple (repeatable).
    #[arg(long, value_delimiter = ',', num_args = 1, action = clap::ArgAction::Append)]
    pub dims: Vec<u64>,
    /// Multipartite: party counts, e.g. 7..12.
    #[arg(long, value_parser = parse_range)]
    pub n: Option<RangeInclusive<u64>>,
    /// Multipartite: local dimensions, e.g. 3..5.
    #[arg(long, value_parser = parse_range)]
    pub d: Option<RangeInclusive<u64>>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TableFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Lemma1,
    Lemma2,
    Theorem1,
    Multipartite,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub kind: SweepKind,
    /// lemma1/lemma2: range of d; multipartite: range of the uniform local dimension.
    #[arg(long, value_parser = parse_range)]
    pub d: Option<RangeInclusive<u64>>,
    /// theorem1: every 3 <= n1 <= n2 <= n3 <= MAX.
    #[arg(long)]
    pub max: Option<u64>,
    /// multipartite: range of party counts.
    #[arg(long, value_parser = parse_range)]
    pub n: Option<RangeInclusive<u64>>,
    #[arg(long)]
    pub parallelism: Option<usize>,
}

/// Parses `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|e| format!("invalid integer {t:?}: {e}"))
    };
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(a..=b)
        }
        None => {
            let a = parse(s)?;
            Ok(a..=a)
        }
    }
}

/// Builds a construction by name.
pub fn build(kind: Construction, params: &BuiltinParams) -> Result<StateSet, String> {
    let need_d = || params.d.ok_or_else(|| format!("{kind:?} needs --d"));
    let need_dims = || params.dims.clone().ok_or_else(|| format!("{kind:?} needs --dims"));
    let set = match kind {
        Construction::Lemma1 => lemma1_set(need_d()?),
        Construction::Lemma2 => lemma2_set(need_d()?),
        Construction::Theorem1 => {
            let dims = need_dims()?;
            let [a, b, c] = dims[..] else {
                return Err(format!("theorem1 needs exactly 3 dims, got {}", dims.len()));
            };
            theorem1_set(a, b, c)
        }
        Construction::Multipartite => {
            SystemShape::new(need_dims()?).and_then(|s| compose_multipartite(&s, None))
        }
        Construction::Basis => {
            SystemShape::new(need_dims()?).and_then(|s| StateSet::computational_basis(&s))
        }
    };
    set.map_err(|e| e.to_string())
}

fn thread_pool(parallelism: Option<usize>) -> Result<rayon::ThreadPool, String> {
    let threads = match parallelism {
        Some(0) => return Err("--parallelism must be positive".into()),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())
}

fn micros(start: Instant) -> u64 {
    start.elapsed().as_micros() as u64
}

/// Runs every check on `set`, timing each stage.
pub fn certify_timed(set: &StateSet) -> (Certificate, TimingEntry) {
    let start = Instant::now();
    let orthogonality = check_orthogonality(set);
    let orthogonality_us = micros(start);
    let timed: Vec<(TrivialityVerdict, u64)> = (0..set.shape().parties())
        .into_par_iter()
        .map(|p| {
            let t = Instant::now();
            let v = check_first_round_triviality(set, p).expect("party index is in range");
            (v, micros(t))
        })
        .collect();
    let (verdicts, parties_us): (Vec<_>, Vec<_>) = timed.into_iter().unzip();
    let cert = Certificate::new(set, orthogonality, verdicts);
    let timing = TimingEntry {
        orthogonality_us,
        parties_us,
        total_us: micros(start),
    };
    (cert, timing)
}

fn render_text(cert: &Certificate, timing: Option<&TimingEntry>) -> String {
    let n = cert.shape.parties();
    let mut s = String::new();
    let _ = writeln!(s, "set: {}", cert.provenance);
    let _ = writeln!(s, "shape: {}, {} states", cert.shape, cert.cardinality);
    if cert.orthogonality.is_orthogonal() {
        let pairs = cert.cardinality * cert.cardinality.saturating_sub(1) / 2;
        let _ = writeln!(s, "orthogonality: ok ({pairs} pairs)");
    } else {
        let _ = writeln!(
            s,
            "orthogonality: FAILED ({} overlapping pairs)",
            cert.orthogonality.violations.len()
        );
        for v in &cert.orthogonality.violations {
            let _ = writeln!(
                s,
                "  {} / {}: overlap {}",
                v.first_label, v.second_label, v.overlap
            );
        }
    }
    for v in &cert.verdicts {
        let _ = writeln!(
            s,
            "party {}: dim {}, {} constraint rows, solution dim {} -> {}",
            party_label(v.party, n),
            v.local_dim,
            v.constraint_rows,
            v.solution_dim,
            v.verdict
        );
        if let Some(w) = &v.witness {
            let _ = writeln!(s, "  witness:");
            for line in w.to_string().lines() {
                let _ = writeln!(s, "    {line}");
            }
        }
    }
    if let Some(t) = timing {
        let _ = writeln!(
            s,
            "timing: orthogonality {} us, parties {:?} us, total {} us",
            t.orthogonality_us, t.parties_us, t.total_us
        );
    }
    let _ = writeln!(s, "conclusion: {}", cert.conclusion);
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn cmd_construct(args: &ConstructArgs, out: &mut dyn Write) -> Result<i32, String> {
    let set = build(args.kind, &args.params)?;
    let json = StateSetDocument::from_set(&set)
        .map_err(|e| e.to_string())?
        .to_json();
    let summary = format!("{}: {} states on {}", set.provenance(), set.len(), set.shape());
    match &args.out {
        Some(path) => {
            write_file(path, &json)?;
            writeln!(out, "{summary}").map_err(|e| e.to_string())?;
        }
        None => out.write_all(json.as_bytes()).map_err(|e| e.to_string())?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, String> {
    let set = match (&args.input, args.builtin) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            document::parse_state_set(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, Some(kind)) => build(kind, &args.params)?,
        (None, None) => return Err("give an input file or --builtin".into()),
    };
    if set.is_empty() {
        return Err("state set is empty".into());
    }
    let pool = thread_pool(args.parallelism)?;
    let (cert, timing) = pool.install(|| certify_timed(&set));
    let timing = (!args.no_timing).then_some(timing);
    let doc = CertificateDocument::from_certificate(&cert, timing.clone())
        .map_err(|e| e.to_string())?;
    let json = doc.to_json();
    if let Some(path) = &args.out {
        write_file(path, &json)?;
    }
    let rendered = match args.format {
        VerifyFormat::Text => render_text(&cert, timing.as_ref()),
        VerifyFormat::Machine => json,
    };
    out.write_all(rendered.as_bytes()).map_err(|e| e.to_string())?;
    Ok(exit_status(cert.conclusion))
}

fn compare_grid(args: &CompareArgs) -> Result<Vec<Params>, String> {
    match args.family {
        Family::Tripartite => {
            let mut grid = args.max.map(tripartite_grid).unwrap_or_default();
            if !args.dims.len().is_multiple_of(3) {
                return Err("--dims takes n1,n2,n3 triples".into());
            }
            grid.extend(
                args.dims
                    .chunks(3)
                    .map(|c| Params::Tripartite(c[0], c[1], c[2])),
            );
            if args.max.is_none() && args.dims.is_empty() {
                return Err("tripartite comparison needs --max or --dims".into());
            }
            Ok(grid)
        }
        Family::Multipartite => {
            let (Some(ns), Some(ds)) = (&args.n, &args.d) else {
                return Err("multipartite comparison needs --n and --d".into());
            };
            Ok(ns
                .clone()
                .flat_map(|n| ds.clone().map(move |d| Params::Multipartite { n, d }))
                .collect())
        }
    }
}

fn cmd_compare(args: &CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let grid = compare_grid(args)?;
    let rows = comparison_table(&grid);
    let mut s = String::new();
    match args.format {
        TableFormat::Csv => {
            let _ = writeln!(s, "{CSV_HEADER}");
        }
        TableFormat::Text => {
            let _ = writeln!(
                s,
                "{:<10} {:>6} {:>6} {:<12} {:>9}",
                "params", "ours", "prior", "prior_label", "advantage"
            );
        }
    }
    let mut status = EXIT_OK;
    for (params, row) in grid.iter().zip(&rows) {
        match row {
            Ok(r) => {
                let _ = match args.format {
                    TableFormat::Csv => writeln!(s, "{}", r.csv_line()),
                    TableFormat::Text => writeln!(
                        s,
                        "{:<10} {:>6} {:>6} {:<12} {:>9}",
                        r.params.to_string(),
                        r.ours,
                        r.prior,
                        r.prior_label,
                        r.advantage
                    ),
                };
            }
            Err(e) => {
                status = EXIT_USAGE;
                let _ = writeln!(err, "{params}: {e}");
            }
        }
    }
    out.write_all(s.as_bytes()).map_err(|e| e.to_string())?;
    Ok(status)
}

struct SweepItem {
    name: String,
    kind: Construction,
    params: BuiltinParams,
}

fn sweep_items(args: &SweepArgs) -> Result<Vec<SweepItem>, String> {
    let item = |name: String, kind, d: Option<usize>, dims: Option<Vec<usize>>| SweepItem {
        name,
        kind,
        params: BuiltinParams { d, dims },
    };
    let range = |r: &Option<RangeInclusive<u64>>, flag: &str| {
        r.clone()
            .ok_or_else(|| format!("{:?} sweep needs --{flag}", args.kind))
    };
    Ok(match args.kind {
        SweepKind::Lemma1 | SweepKind::Lemma2 => {
            let kind = if args.kind == SweepKind::Lemma1 {
                Construction::Lemma1
            } else {
                Construction::Lemma2
            };
            range(&args.d, "d")?
                .map(|d| {
                    let name = format!("{} d={d}", if kind == Construction::Lemma1 { "lemma1" } else { "lemma2" });
                    item(name, kind, Some(d as usize), None)
                })
                .collect()
        }
        SweepKind::Theorem1 => {
            let max = args.max.ok_or("theorem1 sweep needs --max")?;
            tripartite_grid(max)
                .into_iter()
                .map(|p| {
                    let Params::Tripartite(a, b, c) = p else { unreachable!() };
                    let dims = vec![a as usize, b as usize, c as usize];
                    item(format!("theorem1 dims={a},{b},{c}"), Construction::Theorem1, None, Some(dims))
                })
                .collect()
        }
        SweepKind::Multipartite => {
            let ns = range(&args.n, "n")?;
            let ds = range(&args.d, "d")?;
            ns.flat_map(|n| {
                ds.clone().map(move |d| {
                    item(
                        format!("multipartite n={n} d={d}"),
                        Construction::Multipartite,
                        None,
                        Some(vec![d as usize; n as usize]),
                    )
                })
            })
            .collect()
        }
    })
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<i32, String> {
    let items = sweep_items(args)?;
    let pool = thread_pool(args.parallelism)?;
    let results: Vec<Result<(usize, Conclusion), String>> = pool.install(|| {
        items
            .par_iter()
            .map(|it| {
                let set = build(it.kind, &it.params)?;
                let (cert, _) = certify_timed(&set);
                Ok((set.len(), cert.conclusion))
            })
            .collect()
    });

    let mut s = String::new();
    let mut status = EXIT_OK;
    let mut failures = Vec::new();
    for (it, r) in items.iter().zip(&results) {
        match r {
            Ok((len, conclusion)) => {
                let _ = writeln!(s, "{}: {len} states, {conclusion}", it.name);
                if *conclusion != Conclusion::CertifiedFirstRoundTrivial {
                    failures.push(it.name.clone());
                    status = status.max(exit_status(*conclusion));
                }
            }
            Err(e) => {
                let _ = writeln!(s, "{}: construction error: {e}", it.name);
                failures.push(it.name.clone());
                if status == EXIT_OK {
                    status = EXIT_USAGE;
                }
            }
        }
    }
    let _ = writeln!(
        s,
        "summary: {} sets, {} certified, {} failed",
        items.len(),
        items.len() - failures.len(),
        failures.len()
    );
    for f in &failures {
        let _ = writeln!(s, "failed: {f}");
    }
    out.write_all(s.as_bytes()).map_err(|e| e.to_string())?;
    Ok(status)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match &cli.command {
        Command::Construct(a) => cmd_construct(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Compare(a) => cmd_compare(a, out, err),
        Command::Sweep(a) => cmd_sweep(a, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..6").unwrap(), 3..=6);
        assert_eq!(parse_range("3..=6").unwrap(), 3..=6);
        assert_eq!(parse_range("4").unwrap(), 4..=4);
        assert!(parse_range("6..3").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn builtin_requires_params() {
        let none = BuiltinParams { d: None, dims: None };
        assert!(build(Construction::Lemma1, &none).is_err());
        let dims = BuiltinParams {
            d: None,
            dims: Some(vec![3, 4]),
        };
        assert!(build(Construction::Theorem1, &dims).is_err());
    }
}
