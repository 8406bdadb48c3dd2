//! Command-line front end. Exit codes: 0 for success (or a true `check`),
//! 1 for a false `check` or a failed `verify`, 2 for usage and input errors,
//! 3 for a tripped guard.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::enumeration::{enumerate_src, oeis_crosscheck, CountTable};
use crate::error::{Error, Result};
use crate::firing::{apply_sequence, ChipConfig, FiringSequence};
use crate::graph::{Graph, Tree};
use crate::selfreach::{is_self_reachable_general, is_self_reachable_tree, reach_witness, reachable_set};
use crate::verify::{verify_suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "chipfire",
    version,
    about = "Chip-firing on graphs: self-reachability, witnesses, and counting on trees"
)]
pub struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Largest tree (by vertex count) the exhaustive subtree scan accepts;
    /// the subset count grows exponentially beyond it.
    #[arg(long, global = true, default_value_t = crate::DEFAULT_SUBTREE_GUARD)]
    pub subtree_guard: usize,

    /// Cap on distinct configurations explored by reachability search and
    /// enumeration.
    #[arg(long, global = true, default_value_t = crate::DEFAULT_STATE_GUARD)]
    pub state_guard: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a configuration can return to itself by legal fires
    /// (exit 0 if so, 1 if not).
    Check {
        /// Graph file (`n <count>` header, one `u v` edge per line).
        graph: PathBuf,
        /// Chip configuration, e.g. "1,0,1".
        config: String,
    },
    /// Apply a firing sequence and print the resulting configuration.
    Fire {
        graph: PathBuf,
        config: String,
        /// Vertices to fire in order, e.g. "0,2,1"; empty string for none.
        sequence: String,
    },
    /// Construct a firing sequence taking one self-reachable configuration
    /// to another of equal total (trees only).
    Witness {
        graph: PathBuf,
        from: String,
        to: String,
    },
    /// List every configuration reachable by nonempty legal firing, one per
    /// line.
    Reach { graph: PathBuf, config: String },
    /// Count self-reachable configurations with this chip total on a tree
    /// with this many vertices (the count is shape-independent).
    Count { chips: usize, vertices: usize },
    /// List the self-reachable configurations with a given chip total on a
    /// tree.
    Enumerate { graph: PathBuf, chips: usize },
    /// Generate a uniform random labeled tree and print it in graph format.
    GenTree {
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the exhaustive oracle-equivalence and randomized property suites.
    Verify {
        /// Largest vertex count for the exhaustive sweeps (1..=7).
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Largest chip total for the exhaustive sweeps.
        #[arg(long, default_value_t = 6)]
        max_chips: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Iterations per randomized suite.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// Print the table of counts by chips and vertices, with both
    /// antidiagonal readings for sequence-database lookups.
    OeisTable { depth: usize },
}

/// Dispatches and converts errors to the exit-code contract. All output goes
/// to stdout; errors print one `error: ...` line on stderr.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::GuardExceeded { .. } => 3,
                _ => 2,
            }
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    Graph::from_str(&text)
}

fn read_tree(path: &Path) -> Result<Tree> {
    Tree::new(read_graph(path)?)
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Check { graph, config } => {
            let g = read_graph(&graph)?;
            let c = ChipConfig::from_str(&config)?;
            let yes = match Tree::new(g.clone()) {
                Ok(t) => is_self_reachable_tree(&t, &c)?,
                Err(_) => is_self_reachable_general(&g, &c)?,
            };
            if cli.json {
                println!("{}", json!({ "self_reachable": yes }));
            } else if yes {
                println!("self-reachable");
            } else {
                println!("not self-reachable");
            }
            Ok(if yes { 0 } else { 1 })
        }
        Command::Fire {
            graph,
            config,
            sequence,
        } => {
            let g = read_graph(&graph)?;
            let c = ChipConfig::from_str(&config)?;
            let seq = FiringSequence::from_str(&sequence)?;
            let result = apply_sequence(&g, &c, &seq)?;
            if cli.json {
                println!("{}", json!({ "result": result.to_string() }));
            } else {
                println!("{result}");
            }
            Ok(0)
        }
        Command::Witness { graph, from, to } => {
            let t = read_tree(&graph)?;
            let from = ChipConfig::from_str(&from)?;
            let to = ChipConfig::from_str(&to)?;
            let w = reach_witness(&t, &from, &to)?;
            if cli.json {
                println!("{}", serde_json::to_string(&w).expect("witness serializes"));
            } else {
                println!("{}", w.seq());
            }
            Ok(0)
        }
        Command::Reach { graph, config } => {
            let g = read_graph(&graph)?;
            let c = ChipConfig::from_str(&config)?;
            let reached = reachable_set(&g, &c, cli.state_guard)?;
            if cli.json {
                let items: Vec<String> = reached.iter().map(|x| x.to_string()).collect();
                println!("{}", serde_json::to_string(&items).expect("strings serialize"));
            } else {
                for x in &reached {
                    println!("{x}");
                }
            }
            Ok(0)
        }
        Command::Count { chips, vertices } => {
            if vertices == 0 {
                return Err(Error::Usage("vertices must be at least 1".into()));
            }
            let count = CountTable::new().count(chips, vertices);
            if cli.json {
                println!("{}", json!({ "count": count.to_string() }));
            } else {
                println!("{count}");
            }
            Ok(0)
        }
        Command::Enumerate { graph, chips } => {
            let t = read_tree(&graph)?;
            let configs = enumerate_src(&t, chips, cli.state_guard)?;
            if cli.json {
                let items: Vec<String> = configs.iter().map(|x| x.to_string()).collect();
                println!("{}", serde_json::to_string(&items).expect("strings serialize"));
            } else {
                for x in &configs {
                    println!("{x}");
                }
            }
            Ok(0)
        }
        Command::GenTree { vertices, seed } => {
            let t = Tree::random(vertices, seed)?;
            if cli.json {
                println!("{}", json!({ "graph": t.graph().to_string() }));
            } else {
                print!("{t}");
            }
            Ok(0)
        }
        Command::Verify {
            max_n,
            max_chips,
            seed,
            cases,
        } => {
            let opts = VerifyOptions {
                max_n,
                max_chips,
                seed,
                cases,
                subtree_guard: cli.subtree_guard,
                state_guard: cli.state_guard,
            };
            let report = verify_suite(&opts)?;
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("report serializes"));
            } else {
                print!("{report}");
            }
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::OeisTable { depth } => {
            if depth == 0 {
                return Err(Error::Usage("depth must be at least 1".into()));
            }
            let report = oeis_crosscheck(depth);
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("report serializes"));
            } else {
                print!("{report}");
            }
            Ok(0)
        }
    }
}
