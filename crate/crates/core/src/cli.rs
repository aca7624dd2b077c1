//! Command-line front end: subcommand dispatch, flag handling, and file
//! output with the documented exit codes (0 success, 1 validation error,
//! 2 computation error).

use std::path::Path;

use crate::atom::{evolve_to_steady_state, solve_steady_state, DensityMatrix, EvolveOptions};
use crate::config::{load_config_with_overrides, OutputFormat, RunConfig, PRESET_NAMES};
use crate::output::{
    atomic_write, density_to_csv, density_to_json, peaks_to_csv, peaks_to_json, report_to_csv,
    report_to_json, spectrum_to_csv, spectrum_to_json,
};
use crate::plot::{render_spectrum_svg, PlotColumn};
use crate::spectra::{find_peaks, linewidth_report, sweep};
use crate::AtomParams;

const USAGE: &str = "\
usage: tripodcav <subcommand> [flags]

subcommands:
  chi        sweep the medium susceptibility over the detuning grid
  transmit   sweep the cavity transmission over the detuning grid
  peaks      locate transmission peaks and their FWHM linewidths
  ratio      compare single- vs double-dark cavity linewidths
  steady     solve the atomic steady state

flags:
  --config PATH     JSON configuration file, or a preset name
                    (fig2a fig2b fig2c fig2d fig4a fig4b fig4c fig4d)
  --out PATH        data output file (stdout when omitted)
  --format FMT      csv or json (default csv)
  --plot PATH       also render an SVG plot of the swept quantity
  --oracle          steady: integrate in time instead of the linear solve
  --set KEY=VALUE   dotted-path config override, repeatable
                    (example: --set atom.delta2=3.0)
";

const PEAK_HEIGHT_FRACTION: f64 = 0.1;

struct ParsedArgs {
    subcommand: String,
    config: Option<String>,
    out: Option<String>,
    format: Option<OutputFormat>,
    plot: Option<String>,
    oracle: bool,
    sets: Vec<(String, String)>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Validation(String, String),
    Parse(String),
    Compute(String, String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Validation(..) | CliError::Parse(_) => 1,
            CliError::Compute(..) | CliError::Io(_) => 2,
        }
    }

    fn report(&self) -> String {
        match self {
            CliError::Usage(msg) => format!("error: Usage: {msg}"),
            CliError::Validation(kind, msg) => format!("error: {kind}: {msg}"),
            CliError::Parse(msg) => format!("error: ParseError: {msg}"),
            CliError::Compute(kind, msg) => format!("error: {kind}: {msg}"),
            CliError::Io(msg) => format!("error: Io: {msg}"),
        }
    }
}

fn parse_args<S: AsRef<str>>(args: &[S]) -> Result<ParsedArgs, CliError> {
    let mut iter = args.iter().map(|s| s.as_ref());
    let subcommand = match iter.next() {
        Some(s) => s.to_string(),
        None => return Err(CliError::Usage("missing subcommand".to_string())),
    };
    let mut parsed = ParsedArgs {
        subcommand,
        config: None,
        out: None,
        format: None,
        plot: None,
        oracle: false,
        sets: Vec::new(),
    };
    while let Some(flag) = iter.next() {
        let mut value_for = |name: &str| {
            iter.next()
                .map(str::to_string)
                .ok_or_else(|| CliError::Usage(format!("{name} requires a value")))
        };
        match flag {
            "--config" => parsed.config = Some(value_for("--config")?),
            "--out" => parsed.out = Some(value_for("--out")?),
            "--plot" => parsed.plot = Some(value_for("--plot")?),
            "--format" => {
                let v = value_for("--format")?;
                parsed.format = Some(match v.as_str() {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => {
                        return Err(CliError::Usage(format!(
                            "--format must be csv or json (got {other})"
                        )))
                    }
                });
            }
            "--oracle" => parsed.oracle = true,
            "--set" => {
                let v = value_for("--set")?;
                let (key, value) = v
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE (got {v})")))?;
                parsed.sets.push((key.to_string(), value.to_string()));
            }
            other => return Err(CliError::Usage(format!("unknown flag {other}"))),
        }
    }
    Ok(parsed)
}

fn load(parsed: &ParsedArgs) -> Result<RunConfig, CliError> {
    let base_text: String = match &parsed.config {
        None => "{}".to_string(),
        Some(source) if PRESET_NAMES.contains(&source.as_str()) => source.clone(),
        Some(path) => std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation("ValidationError".into(), format!("cannot read {path}: {e}"))
        })?,
    };
    let mut config = load_config_with_overrides(&base_text, &parsed.sets).map_err(|e| match e {
        crate::config::ConfigError::Parse { .. } => CliError::Parse(e.to_string()),
        other => CliError::Validation("ValidationError".into(), other.to_string()),
    })?;
    if parsed.out.is_some() {
        config.output.path = parsed.out.clone();
    }
    if let Some(format) = parsed.format {
        config.output.format = format;
    }
    if parsed.plot.is_some() {
        config.output.plot_path = parsed.plot.clone();
    }
    Ok(config)
}

fn emit(text: &str, path: Option<&str>) -> Result<(), CliError> {
    match path {
        Some(p) => atomic_write(Path::new(p), text)
            .map_err(|e| CliError::Io(format!("cannot write {p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_plot_if_requested(
    config: &RunConfig,
    spectrum: &crate::spectra::Spectrum,
    columns: &[PlotColumn],
) -> Result<(), CliError> {
    let Some(plot_path) = &config.output.plot_path else {
        return Ok(());
    };
    let svg = render_spectrum_svg(spectrum, columns, config.output.normalize_peak)
        .map_err(|e| CliError::Validation("ValidationError".into(), e.to_string()))?;
    atomic_write(Path::new(plot_path), &svg)
        .map_err(|e| CliError::Io(format!("cannot write {plot_path}: {e}")))
}

/// The single-dark reference configuration for `ratio`: the same atom with
/// the second control off and both control detunings at resonance.
pub fn single_dark_reference(p: &AtomParams) -> AtomParams {
    AtomParams {
        omega2: 0.0,
        delta1: 0.0,
        delta2: 0.0,
        ..*p
    }
}

fn compute_error(kind: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Compute(kind.to_string(), err.to_string())
}

fn spectra_error(e: crate::spectra::SpectraError) -> CliError {
    use crate::spectra::SpectraError;
    let kind = match &e {
        SpectraError::NonFinite(_) => "NonFinite",
        SpectraError::Cavity(_) => "CavityError",
        SpectraError::TooCoarse { .. } => "TooCoarse",
        SpectraError::MissingPeak { .. } => "MissingPeak",
    };
    compute_error(kind, e)
}

fn atom_error(e: crate::atom::AtomError) -> CliError {
    use crate::atom::AtomError;
    let kind = match &e {
        AtomError::DegenerateSteadyState { .. } => "DegenerateSteadyState",
        AtomError::SingularWindow { .. } => "SingularWindow",
        AtomError::NotConverged { .. } => "NotConverged",
        AtomError::InvalidStep { .. } => "InvalidStep",
        AtomError::InvalidDensityMatrix { .. } => "InvalidDensityMatrix",
    };
    compute_error(kind, e)
}

fn run_subcommand(parsed: &ParsedArgs) -> Result<(), CliError> {
    let config = load(parsed)?;
    let format = config.output.format;
    let out_path = config.output.path.as_deref();
    match parsed.subcommand.as_str() {
        "chi" | "transmit" => {
            let spectrum = sweep(&config.scan, &config.atom, &config.model, &config.cavity)
                .map_err(spectra_error)?;
            let data = match format {
                OutputFormat::Csv => spectrum_to_csv(&spectrum),
                OutputFormat::Json => spectrum_to_json(&spectrum),
            };
            emit(&data, out_path)?;
            let columns: &[PlotColumn] = if parsed.subcommand == "chi" {
                &[PlotColumn::ChiRe, PlotColumn::ChiIm]
            } else {
                &[PlotColumn::Transmission]
            };
            render_plot_if_requested(&config, &spectrum, columns)
        }
        "peaks" => {
            let spectrum = sweep(&config.scan, &config.atom, &config.model, &config.cavity)
                .map_err(spectra_error)?;
            let peaks = find_peaks(&spectrum, PEAK_HEIGHT_FRACTION).map_err(spectra_error)?;
            let data = match format {
                OutputFormat::Csv => peaks_to_csv(&peaks),
                OutputFormat::Json => peaks_to_json(&peaks),
            };
            emit(&data, out_path)?;
            render_plot_if_requested(&config, &spectrum, &[PlotColumn::Transmission])
        }
        "ratio" => {
            let single = single_dark_reference(&config.atom);
            let report = linewidth_report(
                &single,
                &config.atom,
                &config.model,
                &config.cavity,
                &config.scan,
            )
            .map_err(spectra_error)?;
            let data = match format {
                OutputFormat::Csv => report_to_csv(&report),
                OutputFormat::Json => report_to_json(&report),
            };
            emit(&data, out_path)
        }
        "steady" => {
            let rho = if parsed.oracle {
                let opts = EvolveOptions::suggested(&config.atom);
                evolve_to_steady_state(&config.atom, &DensityMatrix::pure(1), &opts)
                    .map_err(atom_error)?
            } else {
                solve_steady_state(&config.atom).map_err(atom_error)?
            };
            let data = match format {
                OutputFormat::Csv => density_to_csv(&rho),
                OutputFormat::Json => density_to_json(&rho),
            };
            emit(&data, out_path)
        }
        other => Err(CliError::Usage(format!("unknown subcommand {other}"))),
    }
}

/// Entry point for the binary: returns the process exit code.
pub fn run_cli<S: AsRef<str>>(args: &[S]) -> i32 {
    if args.is_empty() || args[0].as_ref() == "--help" || args[0].as_ref() == "help" {
        print!("{USAGE}");
        return if args.is_empty() { 1 } else { 0 };
    }
    match parse_args(args) {
        Err(e) => {
            eprintln!("{}", e.report());
            eprint!("{USAGE}");
            e.exit_code()
        }
        Ok(parsed) => match run_subcommand(&parsed) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("{}", e.report());
                e.exit_code()
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_collects_flags_and_sets() {
        let args = [
            "transmit",
            "--config",
            "fig4a",
            "--out",
            "x.csv",
            "--format",
            "json",
            "--set",
            "atom.omega2=0.2",
            "--set",
            "cavity.r=0.9",
            "--oracle",
        ];
        let p = parse_args(&args).unwrap();
        assert_eq!(p.subcommand, "transmit");
        assert_eq!(p.config.as_deref(), Some("fig4a"));
        assert_eq!(p.out.as_deref(), Some("x.csv"));
        assert_eq!(p.format, Some(OutputFormat::Json));
        assert!(p.oracle);
        assert_eq!(p.sets.len(), 2);
        assert_eq!(p.sets[0], ("atom.omega2".to_string(), "0.2".to_string()));
    }

    #[test]
    fn parse_rejects_unknown_flag_and_bad_format() {
        assert!(matches!(
            parse_args(&["chi", "--bogus"]),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse_args(&["chi", "--format", "xml"]),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse_args(&["chi", "--set", "novalue"]),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn single_dark_reference_mirrors_the_atom() {
        let p = AtomParams::default();
        let s = single_dark_reference(&p);
        assert_eq!(s.omega2, 0.0);
        assert_eq!(s.delta1, 0.0);
        assert_eq!(s.delta2, 0.0);
        assert_eq!(s.omega1, p.omega1);
        assert_eq!(s.g, p.g);
    }
}
