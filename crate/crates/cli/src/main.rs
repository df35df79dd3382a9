use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nanofiber_cli::config::{parse_range, Format, SweepSpec};
use nanofiber_cli::figures::figure;
use nanofiber_cli::plot::render_svg;
use nanofiber_cli::table::{read_file, write_file};
use nanofiber_cli::{run_sweep, CliError, CliResult, Table};
use nanofiber_core::fiber::{size_parameter, solve_beta_if_resolved, supported_modes};
use nanofiber_core::{FiberGeometry, PhysicalConstants};

#[derive(Parser)]
#[command(name = "nanofiber-emission", version, about = "Spontaneous emission of a rubidium-87 atom near an optical nanofiber")]
struct Cli {
    /// Faster radiation-mode quadrature (relative tolerance 1e-4 instead of 1e-6).
    #[arg(long, global = true)]
    coarse: bool,
    /// Worker threads for the sweep grid (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a one-dimensional sweep described by a `key = value` config file.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Swept variable: radial_distance, fiber_radius, phi_Q or theta_Q.
        #[arg(long)]
        var: Option<String>,
        /// `start,stop,points` in boundary units (r/a, nm or multiples of pi).
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        /// Any config key, as `key=value`; may be repeated.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the dataset (CSV and JSON) and an SVG plot for one named figure.
    Figure {
        /// fig2 .. fig21
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// List guided modes supported by a fiber and their propagation constants.
    Modes {
        /// Fiber radius in nm.
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 780.0)]
        wavelength: f64,
        #[arg(long, default_value_t = 1.4537)]
        n1: f64,
        #[arg(long, default_value_t = 1.0)]
        n2: f64,
    },
}

fn emit(table: &Table, format: Format, out: Option<&Path>) -> CliResult<()> {
    let text = match format {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()?,
    };
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep(
    config: Option<&Path>,
    var: Option<&str>,
    range: Option<&str>,
    overrides: &[String],
    out: Option<&Path>,
    coarse: bool,
) -> CliResult<()> {
    let mut spec = match config {
        Some(path) => SweepSpec::parse(&read_file(path)?)?,
        None => SweepSpec::default(),
    };
    let invalid = CliError::InvalidSpec;
    for item in overrides {
        let (k, v) = item.split_once('=').ok_or_else(|| invalid(format!("`--set {item}` is not key=value")))?;
        spec.set(k.trim(), v.trim()).map_err(invalid)?;
    }
    if let Some(v) = var {
        spec.variable = v.parse().map_err(invalid)?;
    }
    if let Some(r) = range {
        (spec.start, spec.stop, spec.points) = parse_range(r).map_err(invalid)?;
    }
    spec.coarse |= coarse;
    if out.is_some_and(|p| p.extension().is_some_and(|e| e == "json")) {
        spec.format = Format::Json;
    }
    let table = run_sweep(&spec)?;
    emit(&table, spec.format, out)
}

fn figure_command(name: &str, dir: &Path, coarse: bool) -> CliResult<()> {
    let panels = figure(name)?;
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    for mut panel in panels {
        panel.spec.coarse |= coarse;
        let table = run_sweep(&panel.spec)?;
        write_file(&dir.join(format!("{}.csv", panel.stem)), &table.to_csv()?)?;
        write_file(&dir.join(format!("{}.json", panel.stem)), &table.to_json()?)?;
        write_file(&dir.join(format!("{}.svg", panel.stem)), &render_svg(&table, &panel.title, &panel.y_label))?;
        eprintln!("wrote {}/{}.{{csv,json,svg}} ({} rows)", dir.display(), panel.stem, table.rows.len());
    }
    Ok(())
}

fn modes(radius: f64, wavelength: f64, n1: f64, n2: f64) -> CliResult<()> {
    let geom = FiberGeometry::new(radius * 1e-9, n1, n2)?;
    let constants = PhysicalConstants::with_wavelength(wavelength * 1e-9);
    let omega = constants.omega0;
    println!("# radius_nm = {radius}, wavelength_nm = {wavelength}, n1 = {n1}, n2 = {n2}");
    println!("# V = {:.6}", size_parameter(&geom, omega));
    println!("mode,beta_over_k0,beta_per_um,group_index");
    for kind in supported_modes(&geom, omega) {
        match solve_beta_if_resolved(&geom, omega, kind)? {
            Some(sol) => println!(
                "{kind},{:.9},{:.9},{:.9}",
                sol.beta / constants.k0(),
                sol.beta * 1e-6,
                sol.beta_prime * constants.c
            ),
            None => println!("{kind},unresolved,unresolved,unresolved"),
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::InvalidSpec(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Sweep { config, var, range, overrides, out } => sweep(
            config.as_deref(),
            var.as_deref(),
            range.as_deref(),
            overrides,
            out.as_deref(),
            cli.coarse,
        ),
        Command::Figure { name, out } => figure_command(name, out, cli.coarse),
        Command::Modes { radius, wavelength, n1, n2 } => modes(*radius, *wavelength, *n1, *n2),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
