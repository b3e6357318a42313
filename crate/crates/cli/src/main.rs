//! Command-line surface for the grammar q-gram pipeline: compress and
//! expand grammar files, count q-grams with any of the four counting
//! strategies, run the kernel and discovery applications, and time the
//! strategies against each other.

use std::fmt::Write as _;
use std::fs;
use std::hint::black_box;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use slpgram::{
    build_weighted_text, count_naive, count_sa, count_slp, count_weighted_naive,
    count_weighted_sa, discover_optimal_qgram, escape_qgram, fibonacci_slp, materialize,
    repair_compress, score_chi_square, score_support_difference, spectrum_kernel_slp, Backend,
    Objective, Slp,
};

/// Largest string a CLI command will materialize in memory, 4 GiB. A
/// grammar can derive far more; refusing early beats dying on allocation.
const EXPAND_LIMIT: u64 = 1 << 32;

#[derive(Parser)]
#[command(
    name = "slpgram",
    version,
    about = "q-gram counting on grammar-compressed strings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compress raw bytes into a grammar file (prints n and |T| to stderr)
    Compress {
        input: PathBuf,
        /// Output path; standard output when omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Expand a grammar file back into the bytes it derives
    Decompress {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count q-gram frequencies, writing one `qgram<TAB>count` line each
    Count {
        input: PathBuf,
        /// q-gram length
        #[arg(short, long)]
        q: usize,
        /// Counting strategy; smp/ssa run on grammars, nmp/nsa on raw bytes
        #[arg(long, value_enum)]
        algo: Algo,
        /// Input interpretation; auto sniffs the `SLP ` magic prefix
        #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
        format: FormatArg,
        /// Let nmp/nsa expand a grammar input instead of refusing
        #[arg(long)]
        expand: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// q-gram spectrum kernel of two grammar files (one integer line)
    Kernel {
        slp1: PathBuf,
        slp2: PathBuf,
        #[arg(short, long)]
        q: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find the q-gram separating two directories of grammar files best
    Discover {
        dir1: PathBuf,
        dir2: PathBuf,
        #[arg(short, long)]
        q: usize,
        /// Scoring function over per-set supports
        #[arg(long, value_enum, default_value_t = ScorerArg::Diff)]
        scorer: ScorerArg,
        /// Whether the best score is the largest or the smallest
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Max)]
        objective: ObjectiveArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the grammar of the i-th Fibonacci string
    Genfib {
        i: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time counting strategies over a grid of q values, as a TSV report
    Bench {
        input: PathBuf,
        /// Comma-separated q values
        #[arg(short, long, value_delimiter = ',', required = true)]
        q: Vec<usize>,
        /// Comma-separated strategies to time
        #[arg(long, value_delimiter = ',', default_value = "nmp,nsa,smp,ssa")]
        algos: Vec<Algo>,
        /// Timed runs per cell; the mean is reported
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
        format: FormatArg,
        /// Include grammar parse time in smp/ssa cells (grammar inputs only)
        #[arg(long)]
        time_parse: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// The four counting strategies: plain-text and grammar-reduction variants
/// of the hashing and suffix-array counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    /// Hash every window of the raw text
    Nmp,
    /// Suffix-array run scan over the raw text
    Nsa,
    /// Grammar reduction, then hash the weighted text
    Smp,
    /// Grammar reduction, then scan the weighted text's suffix array
    Ssa,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Nmp => "nmp",
            Algo::Nsa => "nsa",
            Algo::Smp => "smp",
            Algo::Ssa => "ssa",
        }
    }

    fn needs_grammar(self) -> bool {
        matches!(self, Algo::Smp | Algo::Ssa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Grammar if the file starts with `SLP `, raw bytes otherwise
    Auto,
    /// Treat the input as raw bytes even if it looks like a grammar
    Raw,
    /// Require the grammar text format
    Slp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScorerArg {
    /// Support-rate difference s1/m1 - s2/m2
    Diff,
    /// Chi-squared statistic of the 2x2 presence table
    Chi2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Compress { input, output } => cmd_compress(&input, output.as_deref()),
        Cmd::Decompress { input, output } => cmd_decompress(&input, output.as_deref()),
        Cmd::Count {
            input,
            q,
            algo,
            format,
            expand,
            output,
        } => cmd_count(&input, q, algo, format, expand, output.as_deref()),
        Cmd::Kernel {
            slp1,
            slp2,
            q,
            output,
        } => cmd_kernel(&slp1, &slp2, q, output.as_deref()),
        Cmd::Discover {
            dir1,
            dir2,
            q,
            scorer,
            objective,
            output,
        } => cmd_discover(&dir1, &dir2, q, scorer, objective, output.as_deref()),
        Cmd::Genfib { i, output } => cmd_genfib(i, output.as_deref()),
        Cmd::Bench {
            input,
            q,
            algos,
            repeats,
            format,
            time_parse,
            output,
        } => cmd_bench(&input, &q, &algos, repeats, format, time_parse, output.as_deref()),
    }
}

fn cmd_compress(input: &Path, output: Option<&Path>) -> Result<()> {
    let data = read_bytes(input)?;
    if data.is_empty() {
        bail!("cannot compress an empty file: no grammar derives the empty string");
    }
    let slp = repair_compress(&data);
    eprintln!("n={} |T|={}", slp.num_rules(), slp.text_len());
    write_output(output, slp.to_text().as_bytes())
}

fn cmd_decompress(input: &Path, output: Option<&Path>) -> Result<()> {
    let slp = read_slp(input)?;
    let text = slp.expand(EXPAND_LIMIT)?;
    write_output(output, &text)
}

fn cmd_count(
    input: &Path,
    q: usize,
    algo: Algo,
    format: FormatArg,
    expand: bool,
    output: Option<&Path>,
) -> Result<()> {
    let data = read_bytes(input)?;
    let table = if is_grammar(format, &data) {
        let slp = parse_slp(&data, input)?;
        match algo {
            Algo::Smp => count_slp(&slp, q, Backend::Naive)?,
            Algo::Ssa => count_slp(&slp, q, Backend::Sa)?,
            Algo::Nmp | Algo::Nsa => {
                if !expand {
                    bail!(
                        "{} runs on raw text; pass --expand to materialize the grammar first",
                        algo.name()
                    );
                }
                let text = slp.expand(EXPAND_LIMIT)?;
                count_plain(&text, q, algo)?
            }
        }
    } else {
        if algo.needs_grammar() {
            bail!(
                "{} runs on a grammar; compress the input first or choose nmp/nsa",
                algo.name()
            );
        }
        count_plain(&data, q, algo)?
    };
    write_output(output, table.to_tsv().as_bytes())
}

fn count_plain(text: &[u8], q: usize, algo: Algo) -> Result<slpgram::FreqTable> {
    Ok(match algo {
        Algo::Nmp => count_naive(text, q)?,
        Algo::Nsa => materialize(&count_sa(text, q)?, text, q)?,
        _ => unreachable!("grammar strategies never reach the plain counter"),
    })
}

fn cmd_kernel(slp1: &Path, slp2: &Path, q: usize, output: Option<&Path>) -> Result<()> {
    let a = read_slp(slp1)?;
    let b = read_slp(slp2)?;
    let kernel = spectrum_kernel_slp(&a, &b, q)?;
    write_output(output, format!("{kernel}\n").as_bytes())
}

fn cmd_discover(
    dir1: &Path,
    dir2: &Path,
    q: usize,
    scorer: ScorerArg,
    objective: ObjectiveArg,
    output: Option<&Path>,
) -> Result<()> {
    let set1 = read_grammar_dir(dir1)?;
    let set2 = read_grammar_dir(dir2)?;
    let objective = match objective {
        ObjectiveArg::Max => Objective::Max,
        ObjectiveArg::Min => Objective::Min,
    };
    let hit = match scorer {
        ScorerArg::Diff => {
            discover_optimal_qgram(&set1, &set2, q, score_support_difference, objective)?
        }
        ScorerArg::Chi2 => discover_optimal_qgram(&set1, &set2, q, score_chi_square, objective)?,
    };
    let line = format!(
        "{}\t{}\t{}\t{}\t{}\t{:.6}\n",
        escape_qgram(&hit.qgram),
        hit.support1,
        hit.support2,
        hit.freq1,
        hit.freq2,
        hit.score
    );
    write_output(output, line.as_bytes())
}

fn cmd_genfib(i: usize, output: Option<&Path>) -> Result<()> {
    if i == 0 {
        bail!("Fibonacci strings are indexed from 1");
    }
    let slp = fibonacci_slp(i)?;
    write_output(output, slp.to_text().as_bytes())
}

const BENCH_HEADER: &str = "input\talgo\tq\tn\tT_len\tz_len\tz_ratio\tmean_secs\trepeats\n";

fn cmd_bench(
    input: &Path,
    q_list: &[usize],
    algos: &[Algo],
    repeats: usize,
    format: FormatArg,
    time_parse: bool,
    output: Option<&Path>,
) -> Result<()> {
    if repeats < 3 {
        bail!("repeats must be at least 3 for a stable mean");
    }
    if algos.is_empty() {
        bail!("no strategies selected");
    }

    // Everything an algorithm needs is prepared here, outside every timed
    // region: timings cover counting work only, never I/O or setup.
    let data = read_bytes(input)?;
    let (slp, grammar_text) = if is_grammar(format, &data) {
        let text = String::from_utf8(data).context("grammar files must be UTF-8")?;
        let slp: Slp = text
            .parse()
            .with_context(|| format!("parsing grammar {}", input.display()))?;
        (slp, Some(text))
    } else {
        if data.is_empty() {
            bail!("cannot bench an empty input");
        }
        let slp = repair_compress(&data);
        eprintln!(
            "compressed raw input for the grammar strategies: n={} |T|={}",
            slp.num_rules(),
            slp.text_len()
        );
        (slp, None)
    };
    let text = match &grammar_text {
        Some(_) => slp.expand(EXPAND_LIMIT)?,
        None => read_bytes(input)?,
    };

    let n = slp.num_rules();
    let t_len = text.len();
    let input_name = input.display().to_string();
    let timed_parse = if time_parse { grammar_text.as_deref() } else { None };

    let mut report = String::from(BENCH_HEADER);
    for &q in q_list {
        // The reduction size columns describe the (input, q) cell; q = 1
        // has no reduction, reported as size 0.
        let z_len = if q >= 2 {
            build_weighted_text(&slp, q)?.len()
        } else {
            0
        };
        let z_ratio = z_len as f64 / t_len as f64;
        for &algo in algos {
            let mean = time_cell(&text, &slp, timed_parse, q, algo, repeats)?;
            let _ = writeln!(
                report,
                "{input_name}\t{}\t{q}\t{n}\t{t_len}\t{z_len}\t{z_ratio:.6}\t{mean:.6}\t{repeats}",
                algo.name()
            );
        }
    }
    write_output(output, report.as_bytes())
}

/// Mean wall time of `repeats` runs of one (strategy, q) cell. Results are
/// routed through `black_box` so the optimizer cannot skip the work.
fn time_cell(
    text: &[u8],
    slp: &Slp,
    timed_parse: Option<&str>,
    q: usize,
    algo: Algo,
    repeats: usize,
) -> Result<f64> {
    let run: Box<dyn Fn() -> Result<()>> = match algo {
        Algo::Nmp => Box::new(|| {
            black_box(count_naive(black_box(text), q)?);
            Ok(())
        }),
        Algo::Nsa => Box::new(|| {
            black_box(count_sa(black_box(text), q)?);
            Ok(())
        }),
        Algo::Smp | Algo::Ssa => {
            let backend = if algo == Algo::Smp { Backend::Naive } else { Backend::Sa };
            Box::new(move || {
                let reparsed: Option<Slp> = match timed_parse {
                    Some(src) => Some(src.parse()?),
                    None => None,
                };
                let slp = reparsed.as_ref().unwrap_or(slp);
                if q >= 2 {
                    let wt = build_weighted_text(black_box(slp), q)?;
                    match backend {
                        Backend::Naive => {
                            black_box(count_weighted_naive(&wt, q)?);
                        }
                        Backend::Sa => {
                            black_box(count_weighted_sa(&wt, q)?);
                        }
                    }
                } else {
                    black_box(count_slp(black_box(slp), q, backend)?);
                }
                Ok(())
            })
        }
    };
    let mut total = 0.0;
    for _ in 0..repeats {
        let started = Instant::now();
        run()?;
        total += started.elapsed().as_secs_f64();
    }
    Ok(total / repeats as f64)
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn read_slp(path: &Path) -> Result<Slp> {
    let data = read_bytes(path)?;
    parse_slp(&data, path)
}

fn parse_slp(data: &[u8], path: &Path) -> Result<Slp> {
    let text = std::str::from_utf8(data)
        .with_context(|| format!("grammar {} must be UTF-8", path.display()))?;
    text.parse()
        .with_context(|| format!("parsing grammar {}", path.display()))
}

/// Grammar files in a directory, in file-name order so results never
/// depend on readdir order.
fn read_grammar_dir(dir: &Path) -> Result<Vec<Slp>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .map(|entry| Ok(entry?.path()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("{} contains no grammar files", dir.display());
    }
    paths.iter().map(|p| read_slp(p)).collect()
}

fn is_grammar(format: FormatArg, data: &[u8]) -> bool {
    match format {
        FormatArg::Auto => data.starts_with(b"SLP "),
        FormatArg::Raw => false,
        FormatArg::Slp => true,
    }
}

fn write_output(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
