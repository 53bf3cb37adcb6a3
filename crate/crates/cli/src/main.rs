use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use laocoon_cli::bench::bench;
use laocoon_cli::config::{load_config, write_config};
use laocoon_cli::runner::{parse_votes, random_votes, report_text, run_election, write_outputs, RunOptions};
use laocoon_cli::scenario::{load_scenario, run_scenario};
use laocoon_cli::verify::verify_board_file;
use laocoon_core::protocol::{Election, ElectionConfig};

#[derive(Parser)]
#[command(name = "laocoon", version, about = "Receipt-free voting simulation harness")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Election config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Overrides the config's mix window.
    #[arg(long)]
    mix_window: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Post the setup entries and write the board, or print a config template.
    Setup {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "board.txt")]
        board: PathBuf,
        /// Print a config file with every key instead.
        #[arg(long)]
        template: bool,
    },
    /// Run a whole election and write the board and tally report.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "board.txt")]
        board: PathBuf,
        #[arg(long, default_value = "report.txt")]
        report: PathBuf,
        /// Comma-separated choices, `-` to abstain; random when omitted.
        #[arg(long)]
        votes: Option<String>,
        /// Candidates open transactions on one thread each.
        #[arg(long)]
        concurrent: bool,
    },
    /// Run scenario files and check their expectations.
    Scenario {
        files: Vec<PathBuf>,
        /// Overrides each scenario's own seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a board file and re-run the tally from it.
    Verify {
        #[arg(long, default_value = "board.txt")]
        board: PathBuf,
    },
    /// Instrument one election and compare costs with the published table.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Also write the report as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run an election with the audit extension and report voter verdicts.
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "board.txt")]
        board: PathBuf,
    },
}

fn config(c: &Common) -> Result<ElectionConfig, String> {
    let mut cfg = match &c.config {
        Some(p) => load_config(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => ElectionConfig::default(),
    };
    if let Some(w) = c.mix_window {
        cfg.mix_window = w;
    }
    cfg.validate_structure().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn votes_for(cfg: &ElectionConfig, votes: &Option<String>, seed: u64) -> Result<Vec<Option<String>>, String> {
    match votes {
        None => Ok(random_votes(&cfg.candidates, cfg.num_voters, seed)),
        Some(s) => {
            let v = parse_votes(s);
            if v.len() > cfg.num_voters {
                return Err(format!("{} votes for {} voters", v.len(), cfg.num_voters));
            }
            Ok(v)
        }
    }
}

/// `Ok(true)` maps to exit 0, `Ok(false)` to 1, errors to 2.
fn dispatch(cmd: Cmd) -> Result<bool, String> {
    match cmd {
        Cmd::Setup { common, board, template } => {
            let cfg = config(&common)?;
            if template {
                print!("{}", write_config(&cfg));
                return Ok(true);
            }
            let mut e = Election::new(cfg, common.seed).map_err(|e| e.to_string())?;
            e.setup().map_err(|e| e.to_string())?;
            e.board().persist(&board).map_err(|e| e.to_string())?;
            println!("{} setup entries written to {}", e.board().len(), board.display());
            Ok(true)
        }
        Cmd::Run {
            common,
            board,
            report,
            votes,
            concurrent,
        } => {
            let cfg = config(&common)?;
            let votes = votes_for(&cfg, &votes, common.seed)?;
            let out = run_election(&cfg, &votes, common.seed, RunOptions { concurrent }).map_err(|e| e.to_string())?;
            write_outputs(&out, &board, &report).map_err(|e| e.to_string())?;
            print!("{}", report_text(&out.report));
            Ok(true)
        }
        Cmd::Scenario { files, seed } => {
            if files.is_empty() {
                return Err("no scenario files given".into());
            }
            let mut all = true;
            for f in files {
                let s = load_scenario(&f).map_err(|e| format!("{}: {e}", f.display()))?;
                let run = run_scenario(&s, seed.or(s.seed).unwrap_or(1));
                println!("{}: {}", s.name, run.result);
                all &= run.result.passed();
            }
            Ok(all)
        }
        Cmd::Verify { board } => {
            let v = verify_board_file(&board).map_err(|e| format!("{}: {e}", board.display()))?;
            print!("{}", v.summary());
            Ok(v.accepted)
        }
        Cmd::Bench { common, json } => {
            let cfg = config(&common)?;
            let r = bench(&cfg, common.seed).map_err(|e| e.to_string())?;
            print!("{}", r.to_text());
            if let Some(p) = json {
                std::fs::write(&p, r.to_json()).map_err(|e| format!("{}: {e}", p.display()))?;
            }
            Ok(r.all_match_derived)
        }
        Cmd::Audit { common, board } => {
            let mut cfg = config(&common)?;
            cfg.audit_enabled = true;
            let votes = random_votes(&cfg.candidates, cfg.num_voters, common.seed);
            let out = run_election(&cfg, &votes, common.seed, RunOptions::default()).map_err(|e| e.to_string())?;
            out.election.board().persist(&board).map_err(|e| e.to_string())?;
            let failed = out.verdicts.iter().filter(|v| !v.verified).count();
            println!("{} verdicts, {} verified, {} claims", out.verdicts.len(), out.verdicts.len() - failed, failed);
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
