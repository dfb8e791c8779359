use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use patience::batch::{parse_seed_range, run_batch};
use patience::dealers::{resolve_deal, DealSpec};
use patience::moves::{format_solution, parse_solution};
use patience::{
    max_score_deal, solve_deal, verify_solution, Deal, Error, ForcePolicy, GameId, GameParams, SearchConfig,
    SearchStats, StockPolicy, Strategy, Verdict,
};

const EXIT_USAGE: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(name = "patience", version, about = "Exhaustive solver for Freecell, King Albert, Klondike and Montana")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a deal. Exit 0 solvable, 1 unsolvable, 2 limits reached.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        deal: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Write the solution here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print a deal in the text format.
    Deal {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        deal: String,
    },
    /// Replay a solution file. Exit 0 if it wins the deal, 1 if not.
    Verify {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        deal: String,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Solve every seeded deal in an inclusive range and report counts.
    Batch {
        #[command(flatten)]
        game: GameArgs,
        /// Inclusive range, e.g. 1..100.
        #[arg(long)]
        seeds: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Highest Klondike score reachable from a deal.
    Maxscore {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        deal: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args)]
struct GameArgs {
    #[arg(long)]
    game: String,
    /// Freecell only.
    #[arg(long)]
    cells: Option<u8>,
    #[arg(long)]
    ranks: Option<u8>,
    /// Klondike only: circular or reserve.
    #[arg(long)]
    stock: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    /// safe, optimistic or off.
    #[arg(long, default_value = "safe")]
    force: String,
    /// bfs or dfs.
    #[arg(long, default_value = "dfs")]
    strategy: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 500_000_000)]
    max_states: u64,
    #[arg(long, default_value_t = 600.0)]
    max_seconds: f64,
    #[arg(long, value_enum, default_value_t = StatsFormat::Text)]
    stats: StatsFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatsFormat {
    Text,
    Kv,
}

/// Errors carry their exit status.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Usage(_) => EXIT_USAGE,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

impl GameArgs {
    fn params(&self) -> Result<GameParams, Failure> {
        let game: GameId = self.game.parse()?;
        let mut p = GameParams::new(game);
        if let Some(r) = self.ranks {
            p = p.with_ranks(r);
        }
        if let Some(c) = self.cells {
            if game != GameId::Freecell {
                return Err(usage(format!("--cells applies to freecell, not {game}")));
            }
            p = p.with_cells(c);
        }
        if let Some(s) = &self.stock {
            if game != GameId::Klondike {
                return Err(usage(format!("--stock applies to klondike, not {game}")));
            }
            p = p.with_stock(s.parse()?);
        }
        p.validate()?;
        Ok(p)
    }

    /// Resolves the deal and fills in parameters a deal file fixes.
    fn deal(&self, spec: &str) -> Result<(Deal, GameParams), Failure> {
        let mut params = self.params()?;
        let spec: DealSpec = spec.parse().map_err(|e: patience::ParseError| usage(e.to_string()))?;
        if let DealSpec::Ms(_) = spec {
            if self.ranks.is_some_and(|r| r != 13) {
                return Err(usage("ms: deals use the full deck"));
            }
        }
        if let DealSpec::File(path) = &spec {
            let text = std::fs::read_to_string(path).map_err(Error::from)?;
            let deal: Deal = text.parse().map_err(Error::from)?;
            if deal.game != params.game {
                return Err(usage(format!("deal file is for {}, not {}", deal.game, params.game)));
            }
            match self.ranks {
                Some(r) if r != deal.ranks => {
                    return Err(usage(format!("--ranks {r} contradicts the deal file's {}", deal.ranks)))
                }
                _ => params = params.with_ranks(deal.ranks),
            }
            if self.cells.is_none() {
                if let Some(c) = deal.cells {
                    params = params.with_cells(c);
                }
            }
            params.validate()?;
            return Ok((deal, params));
        }
        let deal = resolve_deal(&spec, &params)?;
        Ok((deal, params))
    }
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig, Failure> {
        let force: ForcePolicy = self.force.parse()?;
        let strategy: Strategy = self.strategy.parse()?;
        let config = SearchConfig {
            strategy,
            force,
            max_states: self.max_states,
            max_seconds: self.max_seconds,
            workers: self.workers,
            ..SearchConfig::default()
        };
        config.validate()?;
        Ok(config)
    }

    fn report(&self, verdict: Option<Verdict>, stats: &SearchStats) {
        match self.stats {
            StatsFormat::Kv => {
                let v = verdict.map(|v| format!("verdict={v} ")).unwrap_or_default();
                eprintln!("{v}{}", stats.to_kv());
            }
            StatsFormat::Text => {
                if let Some(v) = verdict {
                    eprintln!("{v}");
                }
                eprintln!(
                    "{} states stored, {} expanded, peak frontier {}, {:.2}s",
                    stats.states_stored,
                    stats.states_expanded,
                    stats.max_frontier,
                    stats.elapsed.as_secs_f64()
                );
                if let Some(p) = stats.solution_ply {
                    eprintln!("solution: {p} moves plus forced moves");
                }
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            game,
            deal,
            search,
            output,
        } => {
            let (deal, params) = game.deal(&deal)?;
            let config = search.config()?;
            let out = solve_deal(&deal, &params, &config)?;
            search.report(Some(out.verdict), &out.stats);
            match out.verdict {
                Verdict::Solvable => {
                    let sol = out.solution.expect("solvable outcome carries a solution");
                    verify_solution(&deal, &params, &sol)
                        .map_err(|e| Failure(EXIT_INTERNAL, format!("solution failed to verify: {e}")))?;
                    let text = format_solution(&sol, &[format!("{} {}", params.game, deal_label(&params))]);
                    match output {
                        Some(path) => std::fs::write(path, text).map_err(Error::from)?,
                        None => print!("{text}"),
                    }
                    Ok(0)
                }
                Verdict::Unsolvable => Ok(1),
                Verdict::ResourceExhausted => Ok(2),
            }
        }
        Command::Deal { game, deal } => {
            let (deal, _) = game.deal(&deal)?;
            print!("{deal}");
            Ok(0)
        }
        Command::Verify { game, deal, solution } => {
            let (deal, params) = game.deal(&deal)?;
            let text = std::fs::read_to_string(solution).map_err(Error::from)?;
            let moves = parse_solution(&text).map_err(Error::from)?;
            match verify_solution(&deal, &params, &moves) {
                Ok(()) => {
                    println!("valid: {} moves", moves.len());
                    Ok(0)
                }
                Err(patience::VerifyError::Deal(e)) => Err(e.into()),
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(1)
                }
            }
        }
        Command::Batch { game, seeds, search } => {
            let params = game.params()?;
            let seeds = parse_seed_range(&seeds)?;
            let config = search.config()?;
            let report = run_batch(&params, seeds, &config)?;
            match search.stats {
                StatsFormat::Text => print!("{}", report.to_text()),
                StatsFormat::Kv => print!("{}", report.to_kv()),
            }
            Ok(0)
        }
        Command::Maxscore { game, deal, search } => {
            let (deal, params) = game.deal(&deal)?;
            if params.game != GameId::Klondike {
                return Err(usage(format!("maxscore is for klondike, not {}", params.game)));
            }
            let config = search.config()?;
            let out = max_score_deal(&deal, &params, &config)?;
            search.report(None, &out.stats);
            let bound = if out.exact { "exact" } else { "lower bound" };
            match search.stats {
                StatsFormat::Text => println!("max score {} of {} ({bound})", out.score, 4 * params.ranks as u32),
                StatsFormat::Kv => println!("max_score={} exact={}", out.score, out.exact),
            }
            Ok(0)
        }
    }
}

fn deal_label(p: &GameParams) -> String {
    let mut s = format!("ranks={}", p.ranks);
    if p.game == GameId::Freecell {
        s.push_str(&format!(" cells={}", p.cells));
    }
    if p.game == GameId::Klondike && p.stock == StockPolicy::Reserve {
        s.push_str(" stock=reserve");
    }
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
