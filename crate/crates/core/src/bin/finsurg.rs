use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use finsurg::catalog::{Catalog, MatchResult};
use finsurg::knot_invariants::{cable_alexander, torsion_values, torus_alexander, AlexanderPoly, TSequence};
use finsurg::output::{candidate_records, d_records, render_candidates, render_d_table, Format};
use finsurg::search::{search, verify_candidate, SearchConfig, SearchMode, DEFAULT_PRUNE_THRESHOLD};
use finsurg::verify::{run_suite, Suite, VerifyOptions};
use finsurg::{d_lens_table, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "finsurg", version, about = "Correction terms and the search for T-, O- and I-type surgeries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print d(L(p,q), i) for i = 0..p.
    DLens {
        p: u64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Search all slopes up to --p-max and match candidates against the catalog.
    Search(SearchArgs),
    /// Run self-check suites.
    Verify(VerifyArgs),
    /// Torsion coefficients, genus and admissibility of a knot.
    Tseq(TseqArgs),
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 230)]
    p_max: u64,
    #[arg(long, value_enum, default_value = "pruned")]
    mode: ModeArg,
    /// p above which the pruned search only scans the a-windows.
    #[arg(long, default_value_t = DEFAULT_PRUNE_THRESHOLD)]
    prune_threshold: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    #[arg(long, env = "FINSURG_JOBS")]
    jobs: Option<usize>,
    /// Knot catalog file to match against instead of the built-in one.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run; repeat for several. All suites by default.
    #[arg(long, value_enum)]
    suite: Vec<SuiteArg>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Slopes sampled by the progression suite.
    #[arg(long, default_value_t = 120)]
    samples: usize,
    #[arg(long, default_value_t = 230)]
    p_max: u64,
    #[arg(long, env = "FINSURG_JOBS")]
    jobs: Option<usize>,
    /// Knot catalog file for the reconcile suite.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TseqArgs {
    /// Coefficients a0,a1,..,ag of the symmetrized polynomial.
    #[arg(long, allow_hyphen_values = true)]
    alexander: Option<String>,
    /// r,s
    #[arg(long)]
    torus: Option<String>,
    /// p1,q1,p2,q2
    #[arg(long)]
    cable: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Table => Format::Table,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Pruned,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    LensTables,
    Lemma42,
    Pruning,
    Progression,
    Reconcile,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::LensTables => Suite::LensTables,
            SuiteArg::Lemma42 => Suite::Lemma42,
            SuiteArg::Pruning => Suite::Pruning,
            SuiteArg::Progression => Suite::Progression,
            SuiteArg::Reconcile => Suite::Reconcile,
        }
    }
}

/// A failed command: exit code and message for stderr.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Overflow => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.cmd {
        Cmd::DLens { p, q, format } => cmd_d_lens(p, q, format.into()),
        Cmd::Search(args) => cmd_search(&args),
        Cmd::Verify(args) => cmd_verify(&args),
        Cmd::Tseq(args) => cmd_tseq(&args),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_INTERNAL);
            }
            ExitCode::SUCCESS
        }
        Err(Failure(code, msg)) => {
            eprintln!("finsurg: {msg}");
            ExitCode::from(code)
        }
    }
}

fn cmd_d_lens(p: u64, q: i64, format: Format) -> Result<String, Failure> {
    let table = d_lens_table(p, q)?;
    Ok(render_d_table(&d_records(&table), format))
}

fn cmd_search(args: &SearchArgs) -> Result<String, Failure> {
    let mode = match args.mode {
        ModeArg::Full => SearchMode::FullScan,
        ModeArg::Pruned => SearchMode::Pruned { threshold: args.prune_threshold },
    };
    let config = SearchConfig { p_max: args.p_max, mode, jobs: args.jobs };
    let cands = search(&config)?;
    for c in &cands {
        if !verify_candidate(c)? {
            return Err(Failure(EXIT_INTERNAL, format!("candidate {}/{} failed the Δ recheck", c.p(), c.q())));
        }
    }
    let loaded = load_catalog(args.catalog.as_deref())?;
    let catalog: &Catalog = match &loaded {
        Some(c) => c,
        None => Catalog::embedded(),
    };
    for c in &cands {
        if catalog.match_candidate(c) == MatchResult::Unexpected {
            eprintln!("finsurg: warning: {}/{} t=({}) matches no catalog row", c.p(), c.q(), c.t);
        }
    }
    Ok(render_candidates(&candidate_records(&cands, catalog), args.format.into()))
}

fn load_catalog(path: Option<&Path>) -> Result<Option<Arc<Catalog>>, Failure> {
    Ok(match path {
        Some(p) => Some(Arc::new(Catalog::load(p)?)),
        None => None,
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<String, Failure> {
    let suites: Vec<Suite> =
        if args.suite.is_empty() { Suite::ALL.to_vec() } else { args.suite.iter().map(|&s| s.into()).collect() };
    let opts = VerifyOptions {
        seed: args.seed,
        samples: args.samples,
        p_max: args.p_max,
        jobs: args.jobs,
        catalog: load_catalog(args.catalog.as_deref())?,
    };
    let mut out = String::new();
    let mut failed = false;
    for suite in suites {
        let report = run_suite(suite, &opts)?;
        failed |= !report.passed();
        out.push_str(&format!("{report} ({:.2?})\n", report.elapsed));
    }
    if failed {
        print!("{out}");
        return Err(Failure(EXIT_VERIFY, "verification failed".into()));
    }
    Ok(out)
}

fn parse_list(s: &str, n: usize, what: &str) -> Result<Vec<i64>, Failure> {
    let vals: Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
    match vals {
        Ok(v) if n == 0 || v.len() == n => Ok(v),
        _ => Err(Failure(
            EXIT_USAGE,
            format!(
                "--{what} expects {} comma-separated integers, got {s:?}",
                if n == 0 { "some".to_string() } else { n.to_string() }
            ),
        )),
    }
}

fn unsigned(v: &[i64], what: &str) -> Result<Vec<u64>, Failure> {
    v.iter()
        .map(|&x| u64::try_from(x).map_err(|_| Failure(EXIT_USAGE, format!("--{what} parameters must be nonnegative"))))
        .collect()
}

fn cmd_tseq(args: &TseqArgs) -> Result<String, Failure> {
    let poly: AlexanderPoly = if let Some(s) = &args.alexander {
        AlexanderPoly::new(parse_list(s, 0, "alexander")?)?
    } else if let Some(s) = &args.torus {
        let v = unsigned(&parse_list(s, 2, "torus")?, "torus")?;
        torus_alexander(v[0], v[1])?
    } else if let Some(s) = &args.cable {
        let v = unsigned(&parse_list(s, 4, "cable")?, "cable")?;
        cable_alexander(v[0], v[1], v[2], v[3])?
    } else {
        unreachable!("clap requires one of the group")
    };
    let raw = torsion_values(&poly);
    let g = poly.degree();
    let listed: Vec<String> = raw.iter().map(|t| t.to_string()).collect();
    let verdict = match TSequence::new(&raw) {
        Ok(_) => "admissible".to_string(),
        Err(e) => format!("not admissible: {e}"),
    };
    Ok(format!("t: {}; g={g}; {verdict}\n", listed.join(",")))
}
