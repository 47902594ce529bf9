mod args;
mod run;

use std::process::ExitCode;

use anyhow::Result;
use clap::{CommandFactory, Parser};

use args::{Cli, Command, Common};
use run::Output;

const EXIT_TOLERANCE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::VerifyScalar(a) => &a.common,
        Command::VerifyElastic(a) => &a.common,
        Command::Field(a) => &a.common,
        Command::Green(a) | Command::Correlation(a) => &a.common,
        Command::Projector(a) => &a.common,
    }
}

fn dispatch(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::VerifyScalar(a) => run::verify_scalar(a),
        Command::VerifyElastic(a) => run::verify_elastic(a),
        Command::Field(a) => run::field(a),
        Command::Green(a) => run::green(a),
        Command::Correlation(a) => run::correlation(a),
        Command::Projector(a) => run::projector(a),
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    if let Some(path) = &cli.check {
        return run::check(path);
    }
    let Some(cmd) = &cli.command else {
        Cli::command().print_help()?;
        anyhow::bail!("no command given");
    };
    let common = common(cmd);
    if common.dump_config {
        eprintln!("{}", serde_json::to_string_pretty(cli)?);
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.threads {
        pool = pool.num_threads(n);
    }
    let output = pool.build()?.install(|| dispatch(cmd))?;
    let text = output.render(common.format)?;
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(output.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_TOLERANCE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
