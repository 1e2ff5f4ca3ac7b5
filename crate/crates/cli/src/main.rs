use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qgame_cli::commands::{self, Finished, Report};
use qgame_cli::error::CliError;
use qgame_cli::render::Renderer;
use qgame_core::game::Player;
use rand::Rng;

#[derive(Parser)]
#[command(name = "qgame", version, about = "Analyze static two-player quantum games")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Render entries close to small rationals as fractions.
    #[arg(long, global = true)]
    exact_fractions: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a game file condition by condition.
    Validate { game: PathBuf },
    /// Print a player's payoff tensor as a flattened grid.
    Tensor {
        game: PathBuf,
        #[arg(value_parser = parse_player)]
        player: Player,
        /// Compare against the bundled reference tensors (built-in game only).
        #[arg(long)]
        check_fixture: bool,
    },
    /// Expected payoffs of a strategy pair.
    Payoff {
        game: PathBuf,
        strategy_i: PathBuf,
        strategy_ii: PathBuf,
    },
    /// Best response of `player` against the opponent's fixed strategy.
    BestResponse {
        game: PathBuf,
        opponent: PathBuf,
        #[arg(value_parser = parse_player)]
        player: Player,
        /// Target certified duality gap.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Decide whether a strategy pair is an ε-Nash equilibrium.
    VerifyNash {
        game: PathBuf,
        strategy_i: PathBuf,
        strategy_ii: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Play repeated rounds with a sampled referee measurement.
    Simulate {
        game: PathBuf,
        povm: PathBuf,
        strategy_i: PathBuf,
        strategy_ii: PathBuf,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        rounds: u64,
        /// Generator seed; a random one is drawn and printed when omitted.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Payoff table of the pure shift strategies.
    Classical { game: PathBuf },
}

fn parse_player(s: &str) -> Result<Player, String> {
    s.parse().map_err(|e: qgame_core::Error| e.to_string())
}

fn emit<R: Report>(done: Finished<R>, format: Format, renderer: &Renderer) -> Result<u8, CliError> {
    match format {
        Format::Text => print!("{}", done.report.text(renderer)),
        Format::Json => {
            let json = serde_json::to_string_pretty(&done.report)
                .map_err(|e| CliError::CrossCheck(format!("report is not serializable: {e}")))?;
            println!("{json}");
        }
    }
    Ok(done.code)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let r = Renderer {
        exact_fractions: cli.exact_fractions,
    };
    let f = cli.format;
    match cli.command {
        Command::Validate { game } => emit(commands::validate(&game)?, f, &r),
        Command::Tensor {
            game,
            player,
            check_fixture,
        } => emit(commands::tensor(&game, player, check_fixture)?, f, &r),
        Command::Payoff {
            game,
            strategy_i,
            strategy_ii,
        } => emit(commands::payoff(&game, &strategy_i, &strategy_ii)?, f, &r),
        Command::BestResponse {
            game,
            opponent,
            player,
            tol,
            max_iters,
        } => emit(commands::best_response_cmd(&game, &opponent, player, tol, max_iters)?, f, &r),
        Command::VerifyNash {
            game,
            strategy_i,
            strategy_ii,
            epsilon,
            tol,
            max_iters,
        } => emit(
            commands::verify_nash_cmd(&game, &strategy_i, &strategy_ii, epsilon, tol, max_iters)?,
            f,
            &r,
        ),
        Command::Simulate {
            game,
            povm,
            strategy_i,
            strategy_ii,
            rounds,
            seed,
        } => {
            let seed = seed.unwrap_or_else(|| rand::rng().random());
            let rounds = usize::try_from(rounds).map_err(|_| CliError::Parse("--rounds too large".into()))?;
            emit(commands::simulate(&game, &povm, &strategy_i, &strategy_ii, rounds, seed)?, f, &r)
        }
        Command::Classical { game } => emit(commands::classical(&game)?, f, &r),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qgame: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
