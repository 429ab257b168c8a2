//! The `mahlerlab` command line.
//!
//! Exit codes: 0 when every selected check passes, 1 when any fails, 2 for
//! usage, configuration and lookup errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::compute::{compute, QUANTITIES};
use crate::config::{parse_u64, OutputFormat, Overrides, RunConfig};
use crate::error::Error;
use crate::registry::{registry, render, run_all, run_check, summarize};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mahlerlab", version, about = "Verify Mahler measure, L-value and hypergeometric identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one named check, or every check with --all.
    Verify {
        /// Check id, e.g. thm-1.1 or wz-pair-1.
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        all: bool,
        /// Comma-separated tags: a kind (exact, high-precision,
        /// statistical), a topic, or an id.
        #[arg(long, value_delimiter = ',', requires = "all")]
        filter: Vec<String>,
        #[command(flatten)]
        common: Common,
        /// Record wall-clock times in JSON and CSV reports.
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate a single quantity, e.g. `compute zeta 3 --digits 30`.
    Compute {
        quantity: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// List check ids, or quantities with --quantities.
    List {
        #[arg(long)]
        quantities: bool,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Working precision in bits (32 to 4096).
    #[arg(long)]
    precision: Option<u32>,
    /// QMC shift seed, decimal or 0x-hex.
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
    /// QMC lattice size, a power of two.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Directory for cached q-expansion coefficients.
    #[arg(long, env = crate::config::CACHE_ENV)]
    cache: Option<PathBuf>,
    /// Decimal digits shown for computed values.
    #[arg(long)]
    digits: Option<usize>,
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    parse_u64(s).map_err(|e| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Common {
    fn resolve(&self, filter: Option<Vec<String>>, timing: Option<bool>) -> crate::Result<RunConfig> {
        let o = Overrides {
            precision: self.precision,
            seed: self.seed,
            samples: self.samples,
            filter,
            format: self.format,
            cache: self.cache.clone(),
            digits: self.digits,
            timing,
        };
        // The cache flag already absorbs the environment variable.
        let text = match &self.config {
            Some(p) => Some(std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?),
            None => None,
        };
        RunConfig::layered(text.as_deref(), None, &o)
    }
}

/// Runs the command line `argv` (program name first), writing reports to
/// `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let usage = |err: &mut dyn Write, e: &Error| {
        let _ = writeln!(err, "mahlerlab: {e}");
        EXIT_USAGE
    };
    match cli.command {
        Command::Verify { id, all, filter, common, timing } => {
            let cfg = match common.resolve((!filter.is_empty()).then_some(filter), timing.then_some(true)) {
                Ok(c) => c,
                Err(e) => return usage(err, &e),
            };
            let results = match (id, all) {
                (Some(id), false) => match run_check(&id, &cfg) {
                    Ok(r) => vec![r],
                    Err(e) => return usage(err, &e),
                },
                (None, true) => match run_all(&cfg) {
                    Ok(r) => r,
                    Err(e) => return usage(err, &e),
                },
                _ => return usage(err, &Error::InvalidArgument("give a check id or --all".into())),
            };
            if results.is_empty() {
                return usage(err, &Error::InvalidArgument(format!("filter {:?} selects no checks", cfg.filter)));
            }
            let _ = out.write_all(render(&results, cfg.format, cfg.timing).as_bytes());
            if summarize(&results).failed == 0 {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Command::Compute { quantity, args, common } => {
            let cfg = match common.resolve(None, None) {
                Ok(c) => c,
                Err(e) => return usage(err, &e),
            };
            match compute(&quantity, &args, &cfg) {
                Ok(c) => {
                    match cfg.format {
                        OutputFormat::Json => {
                            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&c).expect("serializable"));
                        }
                        _ => {
                            let _ = writeln!(out, "{}", c.value);
                            let _ = writeln!(out, "# route: {}; error estimate {:.1e}", c.route, c.error_estimate);
                        }
                    }
                    EXIT_PASS
                }
                Err(e @ (Error::NotFound { .. } | Error::InvalidArgument(_) | Error::Parse(_))) => usage(err, &e),
                Err(e) => {
                    let _ = writeln!(err, "mahlerlab: {e}");
                    EXIT_FAIL
                }
            }
        }
        Command::List { quantities } => {
            if quantities {
                for (u, d) in QUANTITIES {
                    let _ = writeln!(out, "{u:<22} {d}");
                }
            } else {
                for c in registry() {
                    let alias = if c.aliases.is_empty() { String::new() } else { format!(" (= {})", c.aliases.join(", ")) };
                    let _ = writeln!(out, "{:<18} {:<14} {}{alias}", c.id, c.kind.tag(), c.description);
                }
            }
            EXIT_PASS
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("mahlerlab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["verify", "wz-pair-2"]).0, EXIT_PASS);
        let (code, _, err) = call(&["verify", "eq-9.9"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("did you mean"), "{err}");
        assert_eq!(call(&["verify"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "thm-1.1", "--precision", "8"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "thm-1.1", "--all"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "--all", "--filter", "nothing-matches"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "wz-pair-1", "--samples", "1000"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "ff-4.1"]).0, EXIT_FAIL);
        assert_eq!(call(&["compute", "nosuch"]).0, EXIT_USAGE);
        assert_eq!(call(&["compute", "zeta"]).0, EXIT_USAGE);
        assert_eq!(call(&["compute", "K", "2"]).0, EXIT_FAIL);
        assert_eq!(call(&["--help"]).0, EXIT_PASS);
    }

    #[test]
    fn compute_output() {
        let (code, out, _) = call(&["compute", "zeta", "3", "--digits", "30"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("1.202056903159594285399738161511"));
        let (_, out, _) = call(&["compute", "ap", "7"]);
        assert_eq!(out.lines().next(), Some("24"));
        let (_, out, _) = call(&["compute", "count", "5", "2", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["quantity"], "count 5 2");
    }

    #[test]
    fn seeds_and_listing() {
        let (code, out, _) = call(&["verify", "wz-pair-1", "--seed", "0x10", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("schema,id"));
        let (_, out, _) = call(&["list"]);
        assert_eq!(out.lines().count(), registry().len());
    }
}
