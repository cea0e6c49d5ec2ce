use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use alghyp::atlas::{atlas_csv, AtlasError};
use alghyp::config::{parse_config, resolve, ConfigError, RunConfig};
use alghyp::report::{GenusRow, GenusSection, RunReport};
use alghyp_core::criteria::{classify, known_hypersurface_status, VerdictKind};
use alghyp_core::curves::{
    best_scroll_bound, enumerate_curve_types, genus_bound_basic, min_genus_bound, CurveProfile,
};
use alghyp_core::model::{build_instance, VarietyInstance};

#[derive(Parser)]
#[command(
    name = "alghyp",
    about = "Decides algebraic hyperbolicity of very general complete intersections and \
             bundle zero loci on products of projective spaces, with exact rational \
             certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (atlas mode always emits CSV).
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Maximum number of atlas rows before aborting with exit code 3.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    row_cap: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the instance described by a config file.
    Classify { config: PathBuf },
    /// Print per-type genus lower bounds for the config's curve profile.
    GenusBound { config: PathBuf },
    /// Sweep the config's atlas grid and emit one CSV row per instance.
    Atlas { config: PathBuf },
    /// Print the recorded hypersurface statuses for one ambient dimension.
    KnownTable {
        #[arg(long)]
        n: u32,
        /// Largest degree to list (default 3n).
        #[arg(long)]
        d_max: Option<i64>,
    },
}

enum AppError {
    /// Bad user input: exit code 2.
    Input(String),
    /// Resource limit: exit code 3.
    Limit(String),
}

impl AppError {
    fn message(&self) -> &str {
        match self {
            AppError::Input(m) | AppError::Limit(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            AppError::Input(_) => 2,
            AppError::Limit(_) => 3,
        }
    }
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Input(e.to_string())
    }
}

impl From<alghyp_core::ModelError> for AppError {
    fn from(e: alghyp_core::ModelError) -> Self {
        AppError::Input(e.to_string())
    }
}

impl From<alghyp_core::CriteriaError> for AppError {
    fn from(e: alghyp_core::CriteriaError) -> Self {
        AppError::Input(e.to_string())
    }
}

impl From<alghyp_core::CurvesError> for AppError {
    fn from(e: alghyp_core::CurvesError) -> Self {
        AppError::Input(e.to_string())
    }
}

impl From<AtlasError> for AppError {
    fn from(e: AtlasError) -> Self {
        match e {
            AtlasError::RowCap { .. } => AppError::Limit(e.to_string()),
            AtlasError::Internal(_) => AppError::Input(e.to_string()),
        }
    }
}

fn load_config(path: &PathBuf) -> Result<RunConfig, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_config(&text)?)
}

fn build_from_config(cfg: &RunConfig) -> Result<(VarietyInstance, Option<Vec<u32>>), AppError> {
    let resolved = resolve(cfg)?;
    let inst = build_instance(&resolved.ambient, resolved.bundle)?;
    Ok((inst, resolved.profile))
}

/// Summary-only genus section for `classify` runs that carry a curve profile.
fn genus_summary(
    inst: &VarietyInstance,
    profile: &[u32],
    certified: bool,
) -> Result<Option<GenusSection>, AppError> {
    let prof = CurveProfile::new(profile.to_vec())?;
    if !certified {
        return Ok(Some(GenusSection {
            profile: profile.to_vec(),
            rows: Vec::new(),
            summary: None,
            certified: false,
        }));
    }
    let summary = min_genus_bound(inst, &prof)?;
    Ok(Some(GenusSection {
        profile: profile.to_vec(),
        rows: Vec::new(),
        summary: Some(summary),
        certified: true,
    }))
}

/// Full per-type table plus summary for the `genus-bound` subcommand.
fn genus_table(
    inst: &VarietyInstance,
    profile: &[u32],
    certified: bool,
) -> Result<GenusSection, AppError> {
    let prof = CurveProfile::new(profile.to_vec())?;
    let budget = inst.dim() - inst.rank() - 1;
    let mut rows = Vec::new();
    for ty in enumerate_curve_types(inst.dim(), inst.rank(), inst.factor_count())? {
        let direct = genus_bound_basic(inst, &prof, &ty)?;
        let scroll = match ty.extremal_factor(budget) {
            Some(r) => best_scroll_bound(inst, r, &prof)?,
            None => None,
        };
        rows.push(GenusRow { ty, direct, scroll });
    }
    let summary = if certified {
        Some(min_genus_bound(inst, &prof)?)
    } else {
        None
    };
    Ok(GenusSection {
        profile: profile.to_vec(),
        rows,
        summary,
        certified,
    })
}

fn render_report(report: &RunReport, format: Format) -> Result<String, AppError> {
    match format {
        Format::Text => Ok(report.to_text()),
        Format::Json => Ok(format!("{:#}\n", report.to_json())),
        Format::Csv => Err(AppError::Input(
            "csv output is reserved for atlas mode".into(),
        )),
    }
}

fn run_classify(path: &PathBuf, format: Format) -> Result<String, AppError> {
    let cfg = load_config(path)?;
    let (inst, profile) = build_from_config(&cfg)?;
    let verdict = classify(&inst)?;
    let genus = match profile {
        Some(e) => genus_summary(&inst, &e, verdict.kind == VerdictKind::Hyperbolic)?,
        None => None,
    };
    render_report(
        &RunReport {
            instance: inst,
            verdict,
            genus,
        },
        format,
    )
}

fn run_genus_bound(path: &PathBuf, format: Format) -> Result<String, AppError> {
    let cfg = load_config(path)?;
    let (inst, profile) = build_from_config(&cfg)?;
    let profile = profile.ok_or_else(|| {
        AppError::Input("genus-bound requires a [curve] section with a profile e".into())
    })?;
    let verdict = classify(&inst)?;
    let genus = genus_table(&inst, &profile, verdict.kind == VerdictKind::Hyperbolic)?;
    render_report(
        &RunReport {
            instance: inst,
            verdict,
            genus: Some(genus),
        },
        format,
    )
}

fn run_atlas(path: &PathBuf, format: Format, row_cap: u64) -> Result<String, AppError> {
    let cfg = load_config(path)?;
    let atlas = cfg
        .atlas
        .as_ref()
        .ok_or_else(|| AppError::Input("atlas requires an [atlas] section".into()))?;
    if format != Format::Csv && format != Format::Text {
        return Err(AppError::Input("atlas output is CSV only".into()));
    }
    Ok(atlas_csv(atlas, row_cap)?)
}

fn run_known_table(n: u32, d_max: Option<i64>, format: Format) -> Result<String, AppError> {
    let d_max = d_max.unwrap_or(3 * i64::from(n));
    if d_max < 1 {
        return Err(AppError::Input("d_max must be >= 1".into()));
    }
    let mut statuses = Vec::new();
    for d in 1..=d_max {
        statuses.push((d, known_hypersurface_status(n, d)?));
    }
    match format {
        Format::Text => {
            let mut out = format!("known hypersurface statuses in P^{n}:\n");
            for (d, s) in &statuses {
                out.push_str(&format!("  d = {d}: {s}\n"));
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<_> = statuses
                .iter()
                .map(|(d, s)| json!({ "n": n, "d": d, "status": s.to_string() }))
                .collect();
            Ok(format!("{:#}\n", json!(rows)))
        }
        Format::Csv => {
            let mut out = String::from("n,d,status\n");
            for (d, s) in &statuses {
                out.push_str(&format!("{n},{d},{s}\n"));
            }
            Ok(out)
        }
    }
}

fn run(cli: &Cli) -> Result<String, AppError> {
    match &cli.command {
        Command::Classify { config } => run_classify(config, cli.format),
        Command::GenusBound { config } => run_genus_bound(config, cli.format),
        Command::Atlas { config } => run_atlas(config, cli.format, cli.row_cap),
        Command::KnownTable { n, d_max } => run_known_table(*n, *d_max, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, &output) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{output}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
