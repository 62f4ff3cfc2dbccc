//! The `archlint` command line.
//!
//! Exit status: 0 when nothing at or above the `--fail-on` level was found,
//! 1 when something was (or a refactoring plan failed), 2 for usage, input
//! and I/O errors.

mod config;
pub mod render;
pub mod scaffold;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::annotations::{scan_tree, CodeModel, ScanConfig};
use crate::arch_model::{parse_architecture, serialize_architecture, ArchitectureModel, ElementRef};
use crate::conformance::{run_all, ConformanceReport, Fingerprint};
use crate::diagnostics::{Finding, Severity};
use crate::refactor::{apply_plan, connector_usages, lookup, parse_plan};
use crate::smells::{run_smells, SmellConfig};

pub use config::{load_config_file, CliConfig, FailOn, Format};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "archlint",
    version,
    about = "Check architecture annotations in source code against a component-and-connector architecture description"
)]
struct Cli {
    /// Architecture description (`.arch`).
    #[arg(long, global = true, value_name = "FILE")]
    arch: Option<PathBuf>,
    /// Source root to scan; may be repeated.
    #[arg(long = "src", global = true, value_name = "DIR")]
    src: Vec<PathBuf>,
    /// `key = value` settings file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[arg(long = "fail-on", global = true, value_enum, default_value = "error")]
    fail_on: FailOn,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the conformance checks.
    Check,
    /// Dump every extracted annotation.
    Extract,
    /// Report architectural smells.
    Smells,
    /// List the annotations that refer to an architecture element.
    Lookup {
        /// `Comp`, `Comp.part`, `Comp#port`, `Comp/connector` or `/connector`.
        element: String,
    },
    /// Apply a refactoring plan to the architecture description.
    Refactor {
        #[arg(long, value_name = "FILE")]
        plan: PathBuf,
        /// Overwrite the architecture file instead of writing `<name>.refactored.arch`.
        #[arg(long = "in-place")]
        in_place: bool,
        /// Directory for the refactored description and impact report.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Generate annotated code frames from the architecture description.
    Scaffold {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

/// A reason to stop with a given exit status.
struct Stop {
    status: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Stop {
    Stop {
        status: EXIT_USAGE,
        message: message.into(),
    }
}

struct Outcome {
    status: i32,
    stdout: String,
}

/// Runs the command line in-process and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let status = if err.use_stderr() { EXIT_USAGE } else { EXIT_CLEAN };
            let text = err.render().to_string();
            let _ = if err.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return status;
        }
    };
    match execute(cli) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            outcome.status
        }
        Err(stop) => {
            let _ = writeln!(stderr, "archlint: {}", stop.message);
            stop.status
        }
    }
}

fn build_config(cli: &Cli) -> Result<CliConfig, Stop> {
    let mut scan = ScanConfig::default();
    let mut smells = SmellConfig::default();
    if let Some(path) = &cli.config {
        load_config_file(path, &mut scan, &mut smells).map_err(usage)?;
    }
    Ok(CliConfig {
        arch: cli.arch.clone(),
        roots: cli.src.clone(),
        scan,
        smells,
        format: cli.format,
        fail_on: cli.fail_on,
    })
}

fn load_arch(config: &CliConfig) -> Result<ArchitectureModel, Stop> {
    let path = config.arch.as_ref().ok_or_else(|| usage("--arch is required"))?;
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read `{}`: {e}", path.display())))?;
    parse_architecture(&text).map_err(|e| usage(format!("{}:{e}", path.display())))
}

fn scan(config: &CliConfig) -> Result<CodeModel, Stop> {
    if config.roots.is_empty() {
        return Err(usage("at least one --src directory is required"));
    }
    scan_tree(&config.roots, &config.scan).map_err(|e| usage(e.to_string()))
}

fn status_for(findings: &[Finding], fail_on: FailOn) -> i32 {
    let threshold = match fail_on {
        FailOn::Error => Severity::Error,
        FailOn::Warning => Severity::Warning,
    };
    if findings.iter().any(|f| f.severity >= threshold) {
        EXIT_FINDINGS
    } else {
        EXIT_CLEAN
    }
}

fn render_report(command: &str, report: &ConformanceReport, config: &CliConfig) -> Outcome {
    Outcome {
        status: status_for(&report.findings, config.fail_on),
        stdout: match config.format {
            Format::Text => render::findings_text(&report.findings),
            Format::Json => render::to_json(&render::report_json(command, report)),
        },
    }
}

fn execute(cli: Cli) -> Result<Outcome, Stop> {
    let config = build_config(&cli)?;
    match cli.command {
        Command::Check => {
            let arch = load_arch(&config)?;
            let code = scan(&config)?;
            Ok(render_report("check", &run_all(&arch, &code), &config))
        }
        Command::Smells => {
            let arch = load_arch(&config)?;
            let code = scan(&config)?;
            let findings = run_smells(&arch, &code, &config.smells);
            let report = ConformanceReport::new(findings, Fingerprint::of(&arch, &code));
            Ok(render_report("smells", &report, &config))
        }
        Command::Extract => {
            let code = scan(&config)?;
            let stdout = match config.format {
                Format::Text => render::extract_text(&code),
                Format::Json => render::to_json(&render::extract_json(&code)),
            };
            Ok(Outcome {
                status: EXIT_CLEAN,
                stdout,
            })
        }
        Command::Lookup { element } => cmd_lookup(&config, &element),
        Command::Refactor { plan, in_place, out } => cmd_refactor(&config, &plan, in_place, out.as_deref()),
        Command::Scaffold { out } => cmd_scaffold(&config, &out),
    }
}

fn cmd_lookup(config: &CliConfig, element: &str) -> Result<Outcome, Stop> {
    let arch = load_arch(config)?;
    let element: ElementRef = element.parse().map_err(|e| usage(format!("`{element}`: {e}")))?;
    if !arch.contains(&element) {
        return Err(usage(format!("`{element}` is not declared in the architecture")));
    }
    let code = scan(config)?;
    let stdout = if matches!(element, ElementRef::Connector { .. }) {
        let usages = connector_usages(&arch, &code, &element).map_err(|e| usage(e.to_string()))?;
        match config.format {
            Format::Text => render::usages_text(&usages),
            Format::Json => render::to_json(&render::usages_json(&element, &usages)),
        }
    } else {
        let found = lookup(&arch, &code, &element);
        match config.format {
            Format::Text => render::instances_text(&found),
            Format::Json => render::to_json(&render::lookup_json(&element, &found)),
        }
    };
    Ok(Outcome {
        status: EXIT_CLEAN,
        stdout,
    })
}

fn cmd_refactor(config: &CliConfig, plan_path: &Path, in_place: bool, out: Option<&Path>) -> Result<Outcome, Stop> {
    let arch = load_arch(config)?;
    let arch_path = config.arch.as_ref().expect("load_arch checked --arch");
    let text =
        fs::read_to_string(plan_path).map_err(|e| usage(format!("cannot read `{}`: {e}", plan_path.display())))?;
    let plan = parse_plan(&text).map_err(|e| usage(format!("{}:{e}", plan_path.display())))?;
    let code = if config.roots.is_empty() {
        CodeModel::default()
    } else {
        scan(config)?
    };
    let (model, impact) = apply_plan(&arch, &plan, &code).map_err(|e| Stop {
        status: EXIT_FINDINGS,
        message: format!("{}: {e}", e.code()),
    })?;

    let stem = arch_path
        .file_stem()
        .map_or_else(|| "architecture".into(), |s| s.to_string_lossy().into_owned());
    let dir = match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create `{}`: {e}", dir.display())))?;
            dir.to_path_buf()
        }
        None => arch_path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let target = if in_place {
        arch_path.clone()
    } else {
        dir.join(format!("{stem}.refactored.arch"))
    };
    let impact_path = dir.join(format!("{stem}.impact.json"));
    let output = target.display().to_string();
    let json = render::to_json(&render::impact_json(&impact, &output));
    let write = |path: &Path, text: &str| {
        fs::write(path, text).map_err(|e| usage(format!("cannot write `{}`: {e}", path.display())))
    };
    write(&target, &serialize_architecture(&model))?;
    write(&impact_path, &json)?;

    Ok(Outcome {
        status: EXIT_CLEAN,
        stdout: match config.format {
            Format::Text => format!("wrote {output}\n{}", render::impact_text(&impact)),
            Format::Json => json,
        },
    })
}

fn cmd_scaffold(config: &CliConfig, out: &Path) -> Result<Outcome, Stop> {
    let arch = load_arch(config)?;
    let files = scaffold::scaffold_with_sigil(&arch, &config.scan.sigil);
    fs::create_dir_all(out).map_err(|e| usage(format!("cannot create `{}`: {e}", out.display())))?;
    let mut stdout = String::new();
    for (name, text) in &files {
        let path = out.join(name);
        fs::write(&path, text).map_err(|e| usage(format!("cannot write `{}`: {e}", path.display())))?;
        stdout.push_str(&format!("{}\n", path.display()));
    }
    Ok(Outcome {
        status: EXIT_CLEAN,
        stdout,
    })
}
