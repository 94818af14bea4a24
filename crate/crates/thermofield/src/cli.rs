//! Command-line driver.
//!
//! ```text
//! thermofield <subcommand> --config PATH [--out PREFIX] [--quiet]
//!
//! simulate         integrate the configured run; writes PREFIX.timeseries.csv
//!                  and PREFIX.final.ckpt
//! study-n          mode-refinement study over n_list; writes PREFIX.study.csv
//! study-eps        regularization study over eps_list; writes PREFIX.study.csv
//! study-contdep    perturbation study over delta_list; writes PREFIX.study.csv
//! check-potential  audit the regularized potential; writes PREFIX.potential.csv
//! ```
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 numerical
//! blow-up (partial outputs are still written), 3 I/O failure.

use std::fs;

use crate::config::{parse_config, RunConfig};
use crate::io::{potential_csv, save_checkpoint, study_csv, timeseries_csv};
use crate::potential::check_potential;
use crate::study::{run_contdep_study, run_eps_study, run_n_study, StudyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BLOW_UP: i32 = 2;
pub const EXIT_IO: i32 = 3;

const USAGE: &str = "usage: thermofield <simulate|study-n|study-eps|study-contdep|check-potential> \
                     --config PATH [--out PREFIX] [--quiet]";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Task {
    Simulate,
    StudyN,
    StudyEps,
    StudyContdep,
    CheckPotential,
}

#[derive(Debug)]
struct CliArgs {
    task: Task,
    config_path: String,
    out_prefix: Option<String>,
    quiet: bool,
}

fn parse_args(args: &[String]) -> Result<CliArgs, String> {
    let mut it = args.iter();
    let task = match it.next().map(String::as_str) {
        Some("simulate") => Task::Simulate,
        Some("study-n") => Task::StudyN,
        Some("study-eps") => Task::StudyEps,
        Some("study-contdep") => Task::StudyContdep,
        Some("check-potential") => Task::CheckPotential,
        Some(other) => return Err(format!("unknown subcommand `{other}`\n{USAGE}")),
        None => return Err(USAGE.to_string()),
    };
    let mut config_path = None;
    let mut out_prefix = None;
    let mut quiet = false;
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => match it.next() {
                Some(p) => config_path = Some(p.clone()),
                None => return Err(format!("--config needs a path\n{USAGE}")),
            },
            "--out" => match it.next() {
                Some(p) => out_prefix = Some(p.clone()),
                None => return Err(format!("--out needs a prefix\n{USAGE}")),
            },
            "--quiet" => quiet = true,
            other => return Err(format!("unknown argument `{other}`\n{USAGE}")),
        }
    }
    let Some(config_path) = config_path else {
        return Err(format!("--config is required\n{USAGE}"));
    };
    Ok(CliArgs { task, config_path, out_prefix, quiet })
}

fn write_file(path: &str, contents: &str, quiet: bool) -> Result<(), i32> {
    if let Err(e) = fs::write(path, contents) {
        eprintln!("error: cannot write {path}: {e}");
        return Err(EXIT_IO);
    }
    if !quiet {
        println!("wrote {path}");
    }
    Ok(())
}

fn run_simulate(cfg: &RunConfig, prefix: &str, quiet: bool) -> i32 {
    let setup = cfg.setup();
    let (basis, traj) = match setup.run() {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if !quiet {
        for w in &traj.warnings {
            eprintln!("warning: {w}");
        }
    }
    let ts_path = format!("{prefix}.timeseries.csv");
    if let Err(code) = write_file(&ts_path, &timeseries_csv(&traj.records), quiet) {
        return code;
    }
    let ckpt_path = format!("{prefix}.final.ckpt");
    let ckpt = save_checkpoint(&basis, traj.final_state(), setup.params.yosida.eps);
    if let Err(code) = write_file(&ckpt_path, &ckpt, quiet) {
        return code;
    }
    match &traj.blow_up {
        None => EXIT_OK,
        Some(info) => {
            eprintln!(
                "error: blow-up at step {} (t = {:.6e}): {}; partial outputs written",
                info.step, info.t, info.reason
            );
            EXIT_BLOW_UP
        }
    }
}

fn run_study(
    report: Result<StudyReport, crate::study::StudyError>,
    prefix: &str,
    quiet: bool,
) -> i32 {
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let path = format!("{prefix}.study.csv");
    if let Err(code) = write_file(&path, &study_csv(&report), quiet) {
        return code;
    }
    if report.any_blow_up() {
        eprintln!("error: at least one member run blew up; see {path}");
        EXIT_BLOW_UP
    } else {
        EXIT_OK
    }
}

fn run_check_potential(cfg: &RunConfig, prefix: &str, quiet: bool) -> i32 {
    let params = &cfg.setup().params;
    let checks = match check_potential(&params.potential, &params.yosida, (-5.0, 5.0), 10001) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if !quiet {
        for c in checks.iter().filter(|c| c.worst_violation > 1e-9) {
            eprintln!(
                "warning: property {} breached by {:.3e} at r = {:.6e}",
                c.property, c.worst_violation, c.arg_at_worst
            );
        }
    }
    let path = format!("{prefix}.potential.csv");
    match write_file(&path, &potential_csv(&checks), quiet) {
        Ok(()) => EXIT_OK,
        Err(code) => code,
    }
}

/// Run one CLI invocation (`args` excludes the program name) and return the
/// process exit code.
pub fn cli_main(args: &[String]) -> i32 {
    let cli = match parse_args(args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_CONFIG;
        }
    };
    let text = match fs::read_to_string(&cli.config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config_path);
            return EXIT_IO;
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let prefix = cli.out_prefix.as_deref().unwrap_or(&cfg.out_prefix).to_string();
    match cli.task {
        Task::Simulate => run_simulate(&cfg, &prefix, cli.quiet),
        Task::StudyN => run_study(run_n_study(&cfg.study), &prefix, cli.quiet),
        Task::StudyEps => run_study(run_eps_study(&cfg.study), &prefix, cli.quiet),
        Task::StudyContdep => run_study(run_contdep_study(&cfg.study), &prefix, cli.quiet),
        Task::CheckPotential => run_check_potential(&cfg, &prefix, cli.quiet),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(parts: &[&str]) -> Vec<String> {
        parts.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn args_require_a_subcommand_and_config() {
        assert!(parse_args(&[]).is_err());
        assert!(parse_args(&strs(&["simulate"])).is_err());
        assert!(parse_args(&strs(&["frobnicate", "--config", "x"])).is_err());
        let ok = parse_args(&strs(&["simulate", "--config", "x.cfg"])).unwrap();
        assert_eq!(ok.task, Task::Simulate);
        assert_eq!(ok.config_path, "x.cfg");
        assert!(ok.out_prefix.is_none());
        assert!(!ok.quiet);
    }

    #[test]
    fn flags_parse_in_any_order() {
        let ok =
            parse_args(&strs(&["study-eps", "--quiet", "--out", "p", "--config", "c"])).unwrap();
        assert_eq!(ok.task, Task::StudyEps);
        assert_eq!(ok.out_prefix.as_deref(), Some("p"));
        assert!(ok.quiet);
    }

    #[test]
    fn missing_config_file_is_an_io_error() {
        let code = cli_main(&strs(&[
            "simulate",
            "--config",
            "/nonexistent/definitely-missing.cfg",
            "--quiet",
        ]));
        assert_eq!(code, EXIT_IO);
    }
}
