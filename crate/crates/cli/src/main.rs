use std::fs::File;
use std::io::BufWriter;
use std::process::ExitCode;

use clap::error::ErrorKind;

use monoform::output::{render_svg, write_csv};
use monoform::run::run;
use monoform::{cli, config_from_matches};

const CONFIG_ERROR: u8 = 3;

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(CONFIG_ERROR),
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let cfg = match config_from_matches(name, sub) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    if sub.get_flag("print-config") {
        print!("{}", cfg.canonical());
        return ExitCode::SUCCESS;
    }
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Some(path) = cfg.path("out-csv") {
        let written = File::create(path)
            .map_err(csv::Error::from)
            .and_then(|f| write_csv(&outcome.table, BufWriter::new(f)));
        if let Err(e) = written {
            eprintln!("writing {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    }
    if let Some(path) = cfg.path("out-svg") {
        if let Err(e) = std::fs::write(path, render_svg(&outcome.plot)) {
            eprintln!("writing {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    }
    let record = &outcome.record;
    for c in &record.checks {
        let at = c.worst_at.map_or(String::new(), |x| format!(" at {x:e}"));
        eprintln!(
            "{} {}: worst {:.3e}{at} (tolerance {:.1e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.worst,
            c.tolerance
        );
    }
    println!(
        "{}",
        serde_json::to_string(record).expect("verdict serializes")
    );
    if record.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
