mod args;
mod commands;

use clap::Parser;

/// Leading variant name of a core error's Debug form, e.g. "StepTooCoarse".
fn variant_name(err: &annealab::Error) -> String {
    let debug = format!("{err:?}");
    debug
        .chars()
        .take_while(|c| c.is_alphanumeric())
        .collect()
}

fn main() {
    let cli = args::Cli::parse();
    let (name, result) = match cli.command {
        args::Command::GapScan(a) => ("gap-scan", commands::gap_scan(a)),
        args::Command::Evolve(a) => ("evolve", commands::evolve(a)),
        args::Command::Tomo(a) => ("tomo", commands::tomo(a)),
        args::Command::Partition(a) => ("partition", commands::partition(a)),
        args::Command::Ledger(a) => ("ledger", commands::ledger(a)),
    };
    if let Err(err) = result {
        match err.downcast_ref::<annealab::Error>() {
            Some(core) => eprintln!("{name}: {} ({core})", variant_name(core)),
            None => eprintln!("{name}: {err:#}"),
        }
        std::process::exit(1);
    }
}
