//! Experiment runner for the moving-centre monotonicity checks in
//! `monoform-core`: flag and file configuration, CSV/SVG artifacts and
//! machine-readable verdicts.

pub mod config;
pub mod output;
pub mod run;

use std::path::Path;

use clap::{Arg, ArgAction, ArgMatches};

use config::{Command, ConfigError, ExperimentConfig, Kind, Source, KEYS};

/// Argument parser with one subcommand per experiment and one flag per
/// schema key that applies to it.
pub fn cli() -> clap::Command {
    let mut root = clap::Command::new("monoform")
        .about("Moving-centre monotonicity experiments")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in Command::ALL {
        let mut sub = clap::Command::new(cmd.name())
            .about(cmd.about())
            .arg(
                Arg::new("config")
                    .long("config")
                    .value_name("PATH")
                    .help("key = value file; flags override it"),
            )
            .arg(
                Arg::new("print-config")
                    .long("print-config")
                    .action(ArgAction::SetTrue)
                    .help("Print the canonical config and exit"),
            );
        for key in KEYS.iter().filter(|k| k.applies(cmd)) {
            let arg = Arg::new(key.name).long(key.name).help(key.help);
            sub = sub.arg(match key.kind {
                Kind::Flag => arg.action(ArgAction::SetTrue),
                _ => arg.allow_hyphen_values(true),
            });
        }
        root = root.subcommand(sub);
    }
    root
}

/// The command's config file (if any) overlaid with its flags.
pub fn config_from_matches(name: &str, m: &ArgMatches) -> Result<ExperimentConfig, ConfigError> {
    let command = Command::from_name(name).expect("subcommands come from Command::ALL");
    let mut cfg = ExperimentConfig::new(command);
    if let Some(path) = m.get_one::<String>("config") {
        let text = std::fs::read_to_string(Path::new(path)).map_err(|e| {
            ConfigError::new(None, Some("config"), format!("cannot read {path}: {e}"))
        })?;
        cfg.apply_text(&text)?;
    }
    for key in KEYS.iter().filter(|k| k.applies(command)) {
        match key.kind {
            Kind::Flag => {
                if m.get_flag(key.name) {
                    cfg.set(key.name, "true", Source::Flag)?;
                }
            }
            _ => {
                if let Some(raw) = m.get_one::<String>(key.name) {
                    cfg.set(key.name, raw, Source::Flag)?;
                }
            }
        }
    }
    Ok(cfg)
}
