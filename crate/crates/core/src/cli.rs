//! The `chipfire` command line. [`run`] takes the argument vector and the
//! two output streams and returns the exit code: 0 on success, 1 when a
//! verification fails, 2 on usage, parse, or input errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::gonality::{gonality_table, GONALITY_HEADER};
use crate::graph::{Divisor, Graph};
use crate::io::{parse_divisor, parse_graph};
use crate::metric::{
    metric_experiment, metric_rank, EdgeLengths, DEFAULT_VERTEX_CAP, TRIAL_HEADER,
};
use crate::rank::{rank, rank_complete_fast, RankResult};
use crate::reduction::reduce;
use crate::sequences::verify_claim;

/// Largest `d` the gonality commands run without `--slow`.
const GONALITY_FAST_LIMIT: usize = 6;
/// Largest `d` `verify-claim` runs without `--slow`.
const CLAIM_FAST_LIMIT: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "chipfire",
    version,
    about = "Divisors, ranks and gonality on graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce a divisor at a vertex; prints the reduced divisor and the firing script.
    Reduce {
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        #[arg(short = 'D', long = "divisor")]
        divisor: PathBuf,
        #[arg(short = 'v', long = "vertex")]
        vertex: usize,
    },
    /// Rank of a divisor, with a test divisor certifying it.
    Rank {
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        #[arg(short = 'D', long = "divisor")]
        divisor: PathBuf,
        /// Use the chip-subtraction algorithm (complete graphs only) and print its trace.
        #[arg(long)]
        fast_complete: bool,
    },
    /// Gonality table of K_d: closed form against exhaustive search.
    Gonality {
        #[arg(short = 'd', long = "d")]
        d: usize,
        /// Last rank in the table; defaults to the genus.
        #[arg(long)]
        max_r: Option<i64>,
        #[arg(long)]
        slow: bool,
    },
    /// Checks the gonality closed form for every r up to g + 2.
    VerifyTheorem {
        #[arg(short = 'd', long = "d")]
        d: usize,
        #[arg(long)]
        slow: bool,
    },
    /// Exhaustive check of the sequence inequality min(t1, t2) <= k(k+1)/2.
    VerifyClaim {
        #[arg(short = 'd', long = "d")]
        d: usize,
        /// A single k; all 1 <= k <= d-3 when omitted.
        #[arg(short = 'k', long = "k")]
        k: Option<i64>,
        #[arg(long)]
        slow: bool,
    },
    /// Rank of a divisor on the metric graph given by the length column.
    MetricRank {
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        #[arg(short = 'D', long = "divisor")]
        divisor: PathBuf,
        /// Maximum number of vertices after subdivision.
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Seeded metric batteries on K_d with random lengths in 1..=3.
    MetricExperiment {
        #[arg(short = 'd', long = "d")]
        d: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
}

/// Whether the command's checks passed, plus the text to print.
struct Outcome {
    ok: bool,
    text: String,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Outcome { ok: true, text }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            if out.write_all(outcome.text.as_bytes()).is_err() {
                return 2;
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Internal(_) => 1,
                _ => 2,
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load(graph: &Path, divisor: &Path) -> Result<(Graph, EdgeLengths, Divisor)> {
    let (g, lengths) = parse_graph(&read(graph)?)?;
    let d = parse_divisor(&read(divisor)?, Some(g.n_vertices()))?;
    Ok((g, lengths, d))
}

fn require_fast(d: usize, limit: usize, slow: bool) -> Result<()> {
    if d > limit && !slow {
        return Err(Error::InvalidArgument(format!(
            "d = {d} > {limit} needs --slow"
        )));
    }
    Ok(())
}

fn rank_text(result: &RankResult) -> String {
    let mut text = format!("rank {}\n", result.rank);
    match &result.negative_witness {
        Some(e) => text += &format!("witness {e}\n"),
        None if result.riemann_roch_shortcut => text += "witness riemann-roch\n",
        None => text += "witness none\n",
    }
    for line in result.trace_lines() {
        text += &format!("trace {line}\n");
    }
    text
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Reduce {
            graph,
            divisor,
            vertex,
        } => {
            let (g, _, d) = load(&graph, &divisor)?;
            let r = reduce(&g, &d, vertex)?;
            Ok(Outcome::pass(format!(
                "divisor {}\nscript {}\n",
                r.divisor, r.script
            )))
        }
        Command::Rank {
            graph,
            divisor,
            fast_complete,
        } => {
            let (g, lengths, d) = load(&graph, &divisor)?;
            if !lengths.is_unit() {
                return Err(Error::InvalidArgument(
                    "edge lengths given; use metric-rank".into(),
                ));
            }
            let result = if fast_complete {
                rank_complete_fast(&g, &d)?
            } else {
                rank(&g, &d)?
            };
            Ok(Outcome::pass(rank_text(&result)))
        }
        Command::Gonality { d, max_r, slow } => {
            require_fast(d, GONALITY_FAST_LIMIT, slow)?;
            let g = ((d.max(2) - 1) * (d.max(2) - 2) / 2) as i64;
            let rows = gonality_table(d, max_r.unwrap_or(g.max(1)))?;
            let mut text = format!("{GONALITY_HEADER}\n");
            for row in &rows {
                text += &row.csv();
                text.push('\n');
            }
            Ok(Outcome {
                ok: rows.iter().all(|r| r.agrees()),
                text,
            })
        }
        Command::VerifyTheorem { d, slow } => {
            require_fast(d, GONALITY_FAST_LIMIT, slow)?;
            let g = ((d.max(2) - 1) * (d.max(2) - 2) / 2) as i64;
            let rows = gonality_table(d, g + 2)?;
            let mut text = format!("{GONALITY_HEADER},witness_rank,status\n");
            for row in &rows {
                let status = if row.agrees() { "pass" } else { "fail" };
                text += &format!("{},{},{status}\n", row.csv(), row.witness_rank);
            }
            let failures = rows.iter().filter(|r| !r.agrees()).count();
            text += &format!("d {d} rows {} failures {failures}\n", rows.len());
            Ok(Outcome {
                ok: failures == 0,
                text,
            })
        }
        Command::VerifyClaim { d, k, slow } => {
            require_fast(d, CLAIM_FAST_LIMIT, slow)?;
            let ks: Vec<i64> = match k {
                Some(k) => vec![k],
                None => (1..=d as i64 - 3).collect(),
            };
            if ks.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "no k with 1 <= k <= d-3 for d = {d}"
                )));
            }
            let mut ok = true;
            let mut text = String::new();
            for k in ks {
                let report = verify_claim(d, k)?;
                ok &= report.is_clean();
                text += &report.summary_line();
                text.push('\n');
            }
            Ok(Outcome { ok, text })
        }
        Command::MetricRank {
            graph,
            divisor,
            cap,
        } => {
            let (g, lengths, d) = load(&graph, &divisor)?;
            let result = metric_rank(&g, &lengths, &d, cap)?;
            let mut text = format!("rank {}\n", result.rank);
            // The witness lives on the subdivision; only its original part is shown.
            match &result.negative_witness {
                Some(e) => {
                    let original = Divisor::new(e.coeffs()[..g.n_vertices()].to_vec());
                    text += &format!("witness {original}\n");
                }
                None if result.riemann_roch_shortcut => text += "witness riemann-roch\n",
                None => text += "witness none\n",
            }
            Ok(Outcome::pass(text))
        }
        Command::MetricExperiment {
            d,
            trials,
            seed,
            cap,
        } => {
            let rows = metric_experiment(d, trials, seed, cap)?;
            let mut text = format!("{TRIAL_HEADER}\n");
            for row in &rows {
                text += &row.csv_row();
                text.push('\n');
            }
            let failures = rows.iter().filter(|r| !r.passed()).count();
            text += &format!("trials {} failures {failures}\n", rows.len());
            Ok(Outcome {
                ok: failures == 0,
                text,
            })
        }
    }
}
