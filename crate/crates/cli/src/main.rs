//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! error.

mod figure;
mod fmt;
mod sweep;
mod verify;

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use telefid_core::qmeasure::{self, CorrelationReport};
use telefid_core::qstate::{bell_phi_plus, rho_d, rho_dd, sigma_r, sigma_rr};
use telefid_core::wmrwm::Variant;

use fmt::sig12;
use sweep::SweepConfig;

#[derive(Parser)]
#[command(
    name = "telefid",
    about = "Two-qubit entanglement, teleportation fidelity, and classical correlation \
             under amplitude damping, with weak-measurement protection",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report all correlation quantifiers of one state.
    ///
    /// STATE is one of: bell | rho_d:D | rho_dd:D | sigma_r:D,P,Q |
    /// sigma_rr:D,P,Q
    Measure {
        state: String,
        /// Also write the report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sweep the damping strength and write one CSV.
    Sweep {
        /// 1: second qubit damped; 2: both qubits damped.
        #[arg(long)]
        scenario: u8,
        /// Protect with weak measurement + optimized reverse measurement.
        #[arg(long)]
        wmrwm: bool,
        /// Weak-measurement strength (protected sweeps only).
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        /// Optimization target for protected sweeps: tf | c | both.
        #[arg(long, default_value = "both")]
        variant: String,
        #[arg(long, default_value_t = 0.0)]
        d_start: f64,
        #[arg(long, default_value_t = 1.0)]
        d_end: f64,
        /// Number of damping grid points (at least 2).
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        /// Reserved; sweeps are deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every invariant check and the published-formula audit.
    Verify {
        /// Write the discrepancy records as a JSON array to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the data and plot script of one comparison figure.
    Figure {
        /// Figure number: 1, 2, or 3.
        id: u8,
        #[arg(long)]
        out: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(3),
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, content)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

const MEASURE_USAGE: &str = "state spec must be one of:\n  \
bell\n  rho_d:D          (0 <= D <= 1)\n  rho_dd:D         (symmetric damping on both qubits)\n  \
sigma_r:D,P,Q    (protected second qubit)\n  sigma_rr:D,P,Q   (protected pair, symmetric strengths)";

fn parse_floats(text: &str, n: usize) -> Option<Vec<f64>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != n {
        return None;
    }
    parts.iter().map(|s| s.trim().parse::<f64>().ok()).collect()
}

/// Build the requested state; the probability is present for post-selected
/// states.
fn parse_state(spec: &str) -> Result<(telefid_core::DensityMatrix, Option<f64>), CliError> {
    let usage = |msg: String| CliError::Usage(format!("{msg}\n{MEASURE_USAGE}"));
    let (kind, args) = match spec.split_once(':') {
        Some((k, a)) => (k, a),
        None => (spec, ""),
    };
    let built = match kind {
        "bell" if args.is_empty() => Ok((bell_phi_plus(), None)),
        "rho_d" => match parse_floats(args, 1) {
            Some(v) => rho_d(v[0]).map(|s| (s, None)),
            None => return Err(usage(format!("rho_d takes one parameter, got '{args}'"))),
        },
        "rho_dd" => match parse_floats(args, 1) {
            Some(v) => rho_dd(v[0], v[0]).map(|s| (s, None)),
            None => return Err(usage(format!("rho_dd takes one parameter, got '{args}'"))),
        },
        "sigma_r" => match parse_floats(args, 3) {
            Some(v) => sigma_r(v[0], v[1], v[2]).map(|o| (o.state, Some(o.probability))),
            None => return Err(usage(format!("sigma_r takes D,P,Q, got '{args}'"))),
        },
        "sigma_rr" => match parse_floats(args, 3) {
            Some(v) => sigma_rr(v[0], v[1], v[2]).map(|o| (o.state, Some(o.probability))),
            None => return Err(usage(format!("sigma_rr takes D,P,Q, got '{args}'"))),
        },
        other => return Err(usage(format!("unknown state '{other}'"))),
    };
    built.map_err(|e| usage(format!("cannot build state: {e}")))
}

fn report_json(report: &CorrelationReport, success_prob: Option<f64>) -> serde_json::Value {
    let mut obj = serde_json::json!({
        "concurrence": report.concurrence,
        "fef": report.fef,
        "tf": report.tf,
        "entropy_a": report.entropy_a,
        "entropy_b": report.entropy_b,
        "entropy_ab": report.entropy_ab,
        "mutual_info": report.mutual_info,
        "cc": report.cc,
        "cc_theta": report.cc_argmax.theta,
        "cc_phi": report.cc_argmax.phi,
    });
    if let Some(p) = success_prob {
        obj["success_prob"] = serde_json::json!(p);
    }
    obj
}

fn cmd_measure(spec: &str, json: Option<&Path>) -> Result<(), CliError> {
    let (state, success_prob) = parse_state(spec)?;
    let report = qmeasure::report(&state);
    println!("state        = {spec}");
    println!("concurrence  = {}", sig12(report.concurrence));
    println!("fef          = {}", sig12(report.fef));
    println!("tf           = {}", sig12(report.tf));
    println!("entropy_a    = {}", sig12(report.entropy_a));
    println!("entropy_b    = {}", sig12(report.entropy_b));
    println!("entropy_ab   = {}", sig12(report.entropy_ab));
    println!("mutual_info  = {}", sig12(report.mutual_info));
    println!("cc           = {}", sig12(report.cc));
    println!("cc_theta     = {}", sig12(report.cc_argmax.theta));
    println!("cc_phi       = {}", sig12(report.cc_argmax.phi));
    if let Some(p) = success_prob {
        println!("success_prob = {}", sig12(p));
    }
    if let Some(path) = json {
        let value = report_json(&report, success_prob);
        write_file(path, &serde_json::to_string_pretty(&value).expect("serializable"))?;
    }
    Ok(())
}

fn cmd_sweep(cfg: &SweepConfig) -> Result<(), CliError> {
    cfg.validate().map_err(CliError::Usage)?;
    let csv = sweep::sweep_csv(cfg)
        .map_err(|e| CliError::Usage(format!("sweep failed: {e}")))?;
    write_file(&cfg.output_path, &csv)?;
    println!(
        "wrote {} rows to {} (seed {})",
        csv.lines().count() - 1,
        cfg.output_path.display(),
        cfg.seed
    );
    Ok(())
}

fn cmd_verify(json: Option<&Path>) -> Result<bool, CliError> {
    let report = verify::run_verify();
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {} — {}", c.name, c.detail);
    }
    for r in &report.discrepancies {
        let paper = match &r.paper_value {
            verify::PaperValue::Number(x) => sig12(*x),
            verify::PaperValue::Text(t) => format!("\"{t}\""),
        };
        println!(
            "DISCREPANCY [{:?}] {} — published {} vs computed {} ({})",
            r.severity,
            r.claim_id,
            paper,
            sig12(r.computed_value),
            r.location
        );
    }
    let tag = if report.allowlist_ok { "PASS" } else { "FAIL" };
    println!("{tag} discrepancy allowlist — {}", report.allowlist_detail);

    if let Some(path) = json {
        let payload =
            serde_json::to_string_pretty(&report.discrepancies).expect("serializable");
        write_file(path, &payload)?;
    }
    let passed = report.passed();
    println!(
        "verify: {} ({} checks, {} known discrepancies)",
        if passed { "OK" } else { "FAILED" },
        report.checks.len(),
        report.discrepancies.len()
    );
    Ok(passed)
}

fn cmd_figure(id: u8, out_dir: &Path) -> Result<(), CliError> {
    if !(1..=3).contains(&id) {
        return Err(CliError::Usage(format!("figure id must be 1, 2, or 3, got {id}")));
    }
    let files = figure::figure_files(id)
        .map_err(|e| CliError::Usage(format!("figure generation failed: {e}")))?;
    for (name, content) in &files {
        write_file(&out_dir.join(name), content)?;
    }
    println!("wrote {} files to {}", files.len(), out_dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Measure { state, json } => {
            cmd_measure(&state, json.as_deref()).map(|_| true)
        }
        Command::Sweep {
            scenario,
            wmrwm,
            p,
            variant,
            d_start,
            d_end,
            steps,
            out,
            seed,
        } => {
            let variants = if !wmrwm {
                vec![Variant::None]
            } else {
                match variant.as_str() {
                    "tf" => vec![Variant::TfMax],
                    "c" => vec![Variant::CMax],
                    "both" => vec![Variant::TfMax, Variant::CMax],
                    other => {
                        return Err(CliError::Usage(format!(
                            "variant must be tf, c, or both; got '{other}'"
                        )))
                    }
                }
            };
            let cfg = SweepConfig {
                scenario,
                wmrwm,
                d_start,
                d_end,
                d_steps: steps,
                p,
                variants,
                seed,
                output_path: out,
            };
            cmd_sweep(&cfg).map(|_| true)
        }
        Command::Verify { json } => cmd_verify(json.as_deref()),
        Command::Figure { id, out } => cmd_figure(id, &out).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("usage error: {msg}"),
                CliError::Io(msg) => eprintln!("i/o error: {msg}"),
            }
            e.exit_code()
        }
    }
}
