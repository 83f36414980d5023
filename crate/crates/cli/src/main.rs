//! `rotkit`: rotation distance bounds, witness sequences, and exact solving
//! for ordered binary trees, as a single subcommand-style binary.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 input or usage error,
//! 3 resource limit exceeded.

use std::fs;
use std::io;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rotkit_core::{
    approx_sequence, catalan, diameter, distance_bounds, enumerate_trees, exact_distance,
    refined_upper, ApproxError, OracleError, OrderedBinaryTree, RefinedConfig, RotationSequence,
    Side, DEFAULT_STATE_LIMIT, MAX_ENUMERATION_SIZE,
};

#[derive(Parser)]
#[command(
    name = "rotkit",
    version,
    about = "Rotation distance bounds, witness sequences, and exact oracles for ordered binary trees",
    after_help = "Tree files use the grammar TREE := \".\" | \"(\" TREE \",\" TREE \")\"; pass \"-\" to read one input from stdin.\nROTKIT_STATE_LIMIT overrides the default oracle state budget."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print n, e, and the lower/upper distance bounds for a tree pair
    Bounds {
        /// Tree file, or "-" for stdin
        file_s: String,
        /// Tree file, or "-" for stdin
        file_t: String,
        #[arg(long)]
        json: bool,
        /// Also compute the refined upper bound from per-piece estimates
        #[arg(long)]
        refined: bool,
        /// Solve pieces up to this size exactly (refined mode)
        #[arg(long, default_value_t = 10)]
        exact_threshold: u32,
        /// Oracle state budget; defaults to ROTKIT_STATE_LIMIT or 2000000
        #[arg(long)]
        state_limit: Option<usize>,
    },
    /// Print a witness rotation sequence realizing the upper bound
    Sequence {
        file_s: String,
        file_t: String,
        #[arg(long)]
        json: bool,
    },
    /// Check that a rotation sequence transforms S exactly into T
    Verify {
        file_s: String,
        file_t: String,
        /// Whitespace-separated rotation ops, e.g. "R@ L@LR"
        seq_file: String,
    },
    /// Exact rotation distance by bidirectional breadth-first search
    Exact {
        file_s: String,
        file_t: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        state_limit: Option<usize>,
    },
    /// Generate a tree and print its canonical text
    Gen {
        /// Internal node count
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Shape::Random)]
        shape: Shape,
    },
    /// Enumerate all tree shapes of a given size
    #[command(name = "enum")]
    Enumerate {
        #[arg(long)]
        n: u32,
        /// Print only the number of shapes
        #[arg(long)]
        count_only: bool,
    },
    /// Largest exact distance among all pairs of a given size
    Diameter {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        state_limit: Option<usize>,
    },
    /// Per-size mean wall time of bounds + witness over random pairs
    Bench {
        #[arg(long)]
        min_n: u32,
        #[arg(long)]
        max_n: u32,
        #[arg(long, default_value_t = 5)]
        samples: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Random,
    LeftComb,
    RightComb,
}

enum CliError {
    /// Bad input or usage: exit 2.
    Input(String),
    /// Verification mismatch: exit 1.
    Mismatch(String),
    /// Resource limit exceeded: exit 3.
    Limit(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Input(_) => 2,
            CliError::Limit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Mismatch(m) | CliError::Limit(m) => m,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::StateLimitExceeded { .. } | OracleError::EnumerationTooLarge { .. } => {
                CliError::Limit(e.to_string())
            }
            OracleError::LeafCount(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<ApproxError> for CliError {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::Oracle(o) => o.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rotkit: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Reads a file argument, treating `-` as standard input (at most once).
fn read_source(path: &str, stdin_used: &mut bool) -> Result<String, CliError> {
    if path == "-" {
        if *stdin_used {
            return Err(CliError::Input(
                "standard input may be used for at most one input".into(),
            ));
        }
        *stdin_used = true;
        io::read_to_string(io::stdin())
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("reading {path}: {e}")))
    }
}

fn read_tree(path: &str, stdin_used: &mut bool) -> Result<OrderedBinaryTree, CliError> {
    let text = read_source(path, stdin_used)?;
    OrderedBinaryTree::parse(text.trim())
        .map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn read_tree_pair(
    file_s: &str,
    file_t: &str,
) -> Result<(OrderedBinaryTree, OrderedBinaryTree), CliError> {
    let mut stdin_used = false;
    let s = read_tree(file_s, &mut stdin_used)?;
    let t = read_tree(file_t, &mut stdin_used)?;
    Ok((s, t))
}

fn resolve_state_limit(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(limit) = flag {
        return Ok(limit);
    }
    match std::env::var("ROTKIT_STATE_LIMIT") {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("invalid ROTKIT_STATE_LIMIT value {value:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_STATE_LIMIT),
        Err(e) => Err(CliError::Input(format!("ROTKIT_STATE_LIMIT: {e}"))),
    }
}

#[derive(Serialize)]
struct Report {
    n: u32,
    e: u32,
    lower: u32,
    upper: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    refined: Option<RefinedReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sequence: Option<Vec<OpReport>>,
}

#[derive(Serialize)]
struct RefinedReport {
    value: u32,
    is_exact: bool,
}

#[derive(Serialize)]
struct OpReport {
    dir: char,
    path: String,
}

fn print_json(report: &Report) {
    println!(
        "{}",
        serde_json::to_string(report).expect("report serializes")
    );
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Bounds {
            file_s,
            file_t,
            json,
            refined,
            exact_threshold,
            state_limit,
        } => {
            let (s, t) = read_tree_pair(&file_s, &file_t)?;
            let bounds = distance_bounds(&s, &t).map_err(|e| CliError::Input(e.to_string()))?;
            let refined_value = if refined {
                let config = RefinedConfig {
                    exact_threshold,
                    state_limit: resolve_state_limit(state_limit)?,
                    ..RefinedConfig::default()
                };
                Some(refined_upper(&s, &t, &config)?)
            } else {
                None
            };
            if json {
                print_json(&Report {
                    n: bounds.n,
                    e: bounds.e,
                    lower: bounds.lower,
                    upper: bounds.upper,
                    refined: refined_value.map(|r| RefinedReport {
                        value: r.value,
                        is_exact: r.is_exact,
                    }),
                    exact: None,
                    sequence: None,
                });
            } else {
                let mut line = format!(
                    "n={} e={} lower={} upper={}",
                    bounds.n, bounds.e, bounds.lower, bounds.upper
                );
                if let Some(r) = refined_value {
                    line.push_str(&format!(" refined={} is_exact={}", r.value, r.is_exact));
                }
                println!("{line}");
            }
            Ok(())
        }

        Command::Sequence {
            file_s,
            file_t,
            json,
        } => {
            let (s, t) = read_tree_pair(&file_s, &file_t)?;
            let bounds = distance_bounds(&s, &t).map_err(|e| CliError::Input(e.to_string()))?;
            let seq = approx_sequence(&s, &t).map_err(|e| CliError::Input(e.to_string()))?;
            if json {
                print_json(&Report {
                    n: bounds.n,
                    e: bounds.e,
                    lower: bounds.lower,
                    upper: bounds.upper,
                    refined: None,
                    exact: None,
                    sequence: Some(
                        seq.ops()
                            .iter()
                            .map(|op| OpReport {
                                dir: op.dir.letter(),
                                path: op.path.to_string(),
                            })
                            .collect(),
                    ),
                });
            } else {
                if !seq.is_empty() {
                    println!("{seq}");
                }
                println!("length={}", seq.len());
            }
            Ok(())
        }

        Command::Verify {
            file_s,
            file_t,
            seq_file,
        } => {
            let mut stdin_used = false;
            let s = read_tree(&file_s, &mut stdin_used)?;
            let t = read_tree(&file_t, &mut stdin_used)?;
            let seq_text = read_source(&seq_file, &mut stdin_used)?;
            let seq = RotationSequence::parse(&seq_text)
                .map_err(|e| CliError::Input(format!("{seq_file}: {e}")))?;
            let result = s
                .apply_sequence(&seq)
                .map_err(|e| CliError::Input(format!("sequence does not apply: {e}")))?;
            if result == t {
                println!("verified length={}", seq.len());
                Ok(())
            } else {
                Err(CliError::Mismatch(divergence_report(&result, &t)))
            }
        }

        Command::Exact {
            file_s,
            file_t,
            json,
            state_limit,
        } => {
            let (s, t) = read_tree_pair(&file_s, &file_t)?;
            let limit = resolve_state_limit(state_limit)?;
            let bounds = distance_bounds(&s, &t).map_err(|e| CliError::Input(e.to_string()))?;
            let exact = exact_distance(&s, &t, limit)?;
            if json {
                print_json(&Report {
                    n: bounds.n,
                    e: bounds.e,
                    lower: bounds.lower,
                    upper: bounds.upper,
                    refined: None,
                    exact: Some(exact),
                    sequence: None,
                });
            } else {
                println!("exact={exact}");
            }
            Ok(())
        }

        Command::Gen { n, seed, shape } => {
            let tree = match shape {
                Shape::Random => OrderedBinaryTree::random(n, seed),
                Shape::LeftComb => OrderedBinaryTree::comb(n, Side::Left),
                Shape::RightComb => OrderedBinaryTree::comb(n, Side::Right),
            };
            println!("{tree}");
            Ok(())
        }

        Command::Enumerate { n, count_only } => {
            if n > MAX_ENUMERATION_SIZE {
                return Err(OracleError::EnumerationTooLarge {
                    n,
                    max: MAX_ENUMERATION_SIZE,
                }
                .into());
            }
            if count_only {
                println!("{}", catalan(n));
            } else {
                for tree in enumerate_trees(n)? {
                    println!("{tree}");
                }
            }
            Ok(())
        }

        Command::Diameter { n, state_limit } => {
            let limit = resolve_state_limit(state_limit)?;
            let (d, (a, b)) = diameter(n, limit)?;
            println!("diameter={d} s={a} t={b}");
            Ok(())
        }

        Command::Bench {
            min_n,
            max_n,
            samples,
            seed,
        } => {
            if min_n > max_n {
                return Err(CliError::Input("--min-n must not exceed --max-n".into()));
            }
            if samples == 0 {
                return Err(CliError::Input("--samples must be positive".into()));
            }
            let mut sizes = Vec::new();
            let mut n = min_n;
            while n < max_n {
                sizes.push(n);
                n = n.saturating_mul(2);
            }
            sizes.push(max_n);
            for n in sizes {
                let mut times_ns: Vec<u128> = Vec::with_capacity(samples as usize);
                for sample in 0..u64::from(samples) {
                    let s = OrderedBinaryTree::random(n, seed ^ (2 * sample));
                    let t = OrderedBinaryTree::random(n, seed ^ (2 * sample + 1));
                    let start = Instant::now();
                    let bounds = distance_bounds(&s, &t).expect("same size");
                    let seq = approx_sequence(&s, &t).expect("same size");
                    times_ns.push(start.elapsed().as_nanos());
                    std::hint::black_box((bounds, seq.len()));
                }
                times_ns.sort_unstable();
                let mean = times_ns.iter().sum::<u128>() / times_ns.len() as u128;
                let median = times_ns[times_ns.len() / 2];
                println!("n={n} samples={samples} mean_ns={mean} median_ns={median}");
            }
            Ok(())
        }
    }
}

/// Describes the first divergence between the sequence result and the target.
fn divergence_report(result: &OrderedBinaryTree, target: &OrderedBinaryTree) -> String {
    let got = result.to_text();
    let want = target.to_text();
    let at = got
        .bytes()
        .zip(want.bytes())
        .position(|(a, b)| a != b)
        .unwrap_or_else(|| got.len().min(want.len()));
    let window = |s: &str| {
        let lo = at.saturating_sub(20);
        let hi = (at + 20).min(s.len());
        format!(
            "{}{}{}",
            if lo > 0 { "..." } else { "" },
            &s[lo..hi],
            if hi < s.len() { "..." } else { "" }
        )
    };
    format!(
        "sequence result does not match target: first divergence at byte {at}: got {}, want {}",
        window(&got),
        window(&want)
    )
}
