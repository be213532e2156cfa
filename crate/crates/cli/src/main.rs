use std::process::ExitCode;

use clap::Parser;

use gitbot_cli::{
    evaluate_dataset, format_output, read_dataset_input, resolve_model, run_analysis, synthesize,
    train_options, train_summary, verdict_counts, with_default_subcommand, Cli, Command,
};
use gitbot_core::evaluation::{train_pipeline, EvaluationError};
use gitbot_core::save_model;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse_from(with_default_subcommand(std::env::args_os())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Analyze(args) => {
            let model = resolve_model(args.model.as_deref())?;
            let outcome = run_analysis(&args, &model)?;
            log::info!("verdicts: {:?}", verdict_counts(&outcome.rows));
            print!(
                "{}",
                format_output(&outcome.rows, args.format(), args.verbose)
            );
            for (repo, e) in &outcome.errors {
                eprintln!("error: {}: {e:#}", repo.display());
            }
            Ok(ExitCode::from(outcome.exit_code() as u8))
        }
        Command::Train(args) => {
            let dataset = read_dataset_input(&args.input, args.min_commits)?;
            let outcome = match train_pipeline(&dataset, &train_options(&args)) {
                Ok(o) => o,
                Err(EvaluationError::SingleClassData) => {
                    anyhow::bail!("training data must contain both bots and humans")
                }
                Err(e) => return Err(e.into()),
            };
            save_model(&outcome.model, &args.output)?;
            print!("{}", train_summary(&dataset, &outcome));
            println!("model written to {}", args.output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Evaluate(args) => {
            let model = resolve_model(args.model.as_deref())?;
            let dataset = read_dataset_input(&args.input, model.feature_config.min_messages)?;
            let holdout = args.holdout_seed.map(|s| (s, args.train_fraction));
            print!("{}", evaluate_dataset(&model, &dataset, holdout)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Synthesize(args) => {
            let dataset = synthesize(&args)?;
            println!(
                "wrote {} contributors to {}",
                dataset.len(),
                args.output.display()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
