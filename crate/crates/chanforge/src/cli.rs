//! Batch command-line front end: `trace`, `synth`, `fullsim`, `compare`,
//! `capacity`, `sweep`.
//!
//! Every command is a pure function of its inputs; identical inputs give
//! byte-identical outputs. Per-receiver work parallelizes behind `--jobs N`
//! (output ordering independent of N); `CHANFORGE_NO_PARALLEL=1` forces
//! serial mode. Exit codes: 0 ok, 2 validation, 3 I/O, 4 internal numeric
//! failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::Digest;

use crate::analysis::{
    self, capacity_curve, channel_error, distance_sweep, CapacityCurve, Normalization, SweepConfig,
};
use crate::array_geom::ArrayConfig;
use crate::canonical;
use crate::canyon_tracer::{trace_pair_with_paths, Scene};
use crate::channel_synth::{
    full_array_channel, geometric_channel, read_channel_set, write_channel_set, ChannelMatrix,
    FullAmplitude,
};
use crate::error::{Error, Result};
use crate::ray_model::{parse_rays, summary_sidecar_path, without_los, write_rays};

#[derive(Parser, Debug)]
#[command(
    name = "chanforge",
    version,
    about = "Deterministic mmWave MIMO channel construction and comparison"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace an urban-canyon scene into rays.csv + summary sidecar
    Trace(TraceArgs),
    /// Build geometric channels from a ray file (no re-trace needed)
    Synth(SynthArgs),
    /// Build per-element full channels from a scene (re-run per array size)
    Fullsim(FullsimArgs),
    /// Compare a channel set against a reference set (errors.csv)
    Compare(CompareArgs),
    /// Capacity curves over an SNR grid (capacity.csv)
    Capacity(CapacityArgs),
    /// Distance sweep: trace, synthesize both channels, compare (sweep.csv)
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct SceneOpt {
    /// Scene JSON; the documented default canyon when omitted
    #[arg(long)]
    scene: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ArrayOpts {
    /// TX array descriptor `ula:<n>:<spacing_wl>:<axis>`, axis x|y|z|<ux,uy,uz>
    #[arg(long, default_value = "ula:4:0.5:y")]
    array_tx: String,
    /// RX array descriptor, same syntax
    #[arg(long, default_value = "ula:4:0.5:y")]
    array_rx: String,
}

impl ArrayOpts {
    fn parse(&self) -> Result<(ArrayConfig, ArrayConfig)> {
        Ok((
            ArrayConfig::parse_descriptor(&self.array_tx)?,
            ArrayConfig::parse_descriptor(&self.array_rx)?,
        ))
    }
}

#[derive(Args, Debug)]
struct ManifestOpt {
    /// Write a run manifest (tool version, argv, input hashes) to this path
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    scene: SceneOpt,
    /// Output ray CSV (summary sidecar written alongside)
    #[arg(long)]
    out: PathBuf,
    /// Exclude the line-of-sight ray from the output
    #[arg(long)]
    drop_los: bool,
    /// Worker threads for per-receiver parallelism
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    manifest: ManifestOpt,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Input ray CSV (with summary sidecar next to it)
    rays: PathBuf,
    #[command(flatten)]
    arrays: ArrayOpts,
    /// Keep only the L most prominent rays per pair (default: all)
    #[arg(long)]
    top_l: Option<usize>,
    /// Output channel-set JSON
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    manifest: ManifestOpt,
}

#[derive(Args, Debug)]
struct FullsimArgs {
    #[command(flatten)]
    scene: SceneOpt,
    #[command(flatten)]
    arrays: ArrayOpts,
    /// Use the center-path amplitude with per-element phases
    #[arg(long)]
    phase_only_full: bool,
    /// Exclude the line-of-sight path
    #[arg(long)]
    drop_los: bool,
    /// Worker threads for per-receiver parallelism
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output channel-set JSON
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    manifest: ManifestOpt,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Channel set under test
    channels: PathBuf,
    /// Reference channel set (denominator of the relative error)
    reference: PathBuf,
    /// Apply optimal global-phase alignment (`false` repeats the raw error)
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    align_phase: bool,
    /// Output errors CSV
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    manifest: ManifestOpt,
}

#[derive(Args, Debug)]
struct CapacityArgs {
    /// Channel-set JSON files, processed in order
    #[arg(required = true)]
    channels: Vec<PathBuf>,
    /// SNR grid in dB as `lo:hi:step`
    #[arg(long, default_value = "-10:30:5")]
    snr_db: String,
    /// Channel normalization: `raw` or `frob`
    #[arg(long, default_value = "frob", value_parser = parse_normalization)]
    normalize: Normalization,
    /// Output capacity CSV
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    manifest: ManifestOpt,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    scene: SceneOpt,
    /// Comma-separated distances in meters, strictly ascending
    #[arg(long)]
    distances: String,
    #[command(flatten)]
    arrays: ArrayOpts,
    /// Keep only the L most prominent rays per pair (default: all)
    #[arg(long)]
    top_l: Option<usize>,
    /// SNR grid in dB as `lo:hi:step`
    #[arg(long, default_value = "-10:30:5")]
    snr_db: String,
    /// Channel normalization: `raw` or `frob`
    #[arg(long, default_value = "frob", value_parser = parse_normalization)]
    normalize: Normalization,
    /// Exclude the line-of-sight ray (NLOS study)
    #[arg(long)]
    drop_los: bool,
    /// Use the center-path amplitude with per-element phases
    #[arg(long)]
    phase_only_full: bool,
    /// Worker threads for per-distance parallelism
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output sweep CSV
    #[arg(long)]
    out: PathBuf,
    /// Also write the per-distance capacity curves to this CSV
    #[arg(long)]
    capacity_out: Option<PathBuf>,
    #[command(flatten)]
    manifest: ManifestOpt,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(argv.iter()) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let command_line: Vec<String> = argv
        .iter()
        .map(|s| s.to_string_lossy().into_owned())
        .collect();
    match dispatch(cli, command_line) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: Cli, command_line: Vec<String>) -> Result<()> {
    match cli.command {
        Command::Trace(args) => cmd_trace(args, command_line),
        Command::Synth(args) => cmd_synth(args, command_line),
        Command::Fullsim(args) => cmd_fullsim(args, command_line),
        Command::Compare(args) => cmd_compare(args, command_line),
        Command::Capacity(args) => cmd_capacity(args, command_line),
        Command::Sweep(args) => cmd_sweep(args, command_line),
    }
}

/// Reproducibility sidecar: identical inputs reproduce identical outputs;
/// only the timestamp may differ between runs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command_line: Vec<String>,
    /// SHA-256 of the canonical scene JSON, when a scene participated.
    pub scene_sha256: Option<String>,
    /// SHA-256 per input file path.
    pub input_sha256: BTreeMap<String, String>,
    pub unix_time_s: u64,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(sha2::Sha256::digest(bytes))
}

fn hash_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

fn write_manifest(
    opt: &ManifestOpt,
    command_line: Vec<String>,
    scene: Option<&Scene>,
    input_files: &[&Path],
) -> Result<()> {
    let Some(path) = &opt.manifest else {
        return Ok(());
    };
    let mut input_sha256 = BTreeMap::new();
    for file in input_files {
        input_sha256.insert(file.display().to_string(), hash_file(file)?);
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command_line,
        scene_sha256: scene.map(|s| sha256_hex(s.canonical_json().as_bytes())),
        input_sha256,
        unix_time_s: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    canonical::write_json_file(path, &manifest)
}

fn load_scene(opt: &SceneOpt) -> Result<Scene> {
    match &opt.scene {
        Some(path) => Scene::from_json_file(path),
        None => Ok(Scene::default_scene()),
    }
}

fn effective_jobs(jobs: usize) -> usize {
    if std::env::var("CHANFORGE_NO_PARALLEL").as_deref() == Ok("1") {
        1
    } else {
        jobs.max(1)
    }
}

/// Runs `f` inside a rayon pool of the requested width so that per-item
/// parallelism in the library is bounded by `--jobs`.
fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(effective_jobs(jobs))
        .build()
        .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn parse_normalization(s: &str) -> std::result::Result<Normalization, String> {
    match s {
        "raw" => Ok(Normalization::Raw),
        "frob" | "frobenius" => Ok(Normalization::Frobenius),
        other => Err(format!(
            "normalization must be `raw` or `frob`, got `{other}`"
        )),
    }
}

/// `lo:hi:step` in dB, inclusive of `hi` when the grid lands on it.
fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Arg(format!("SNR grid must be `lo:hi:step`, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let step: f64 = parts[2].parse().map_err(|_| bad())?;
    if !step.is_finite() || step <= 0.0 || hi < lo || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    let mut grid = Vec::new();
    let mut k = 0u32;
    loop {
        let v = lo + step * k as f64;
        if v > hi + step * 1e-9 {
            break;
        }
        grid.push(v);
        k += 1;
    }
    Ok(grid)
}

fn parse_distances(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Arg(format!("bad distance `{t}` in `{s}`")))
        })
        .collect()
}

fn cmd_trace(args: TraceArgs, command_line: Vec<String>) -> Result<()> {
    let scene = load_scene(&args.scene)?;
    scene.validate()?;
    let records = with_jobs(args.jobs, || {
        use rayon::prelude::*;
        scene
            .rx_list
            .par_iter()
            .map(|(rx_id, _)| {
                let (record, _) = trace_pair_with_paths(&scene, rx_id)?;
                if args.drop_los {
                    without_los(&record)
                } else {
                    Ok(record)
                }
            })
            .collect::<Result<Vec<_>>>()
    })??;
    write_rays(&records, &args.out)?;
    write_manifest(&args.manifest, command_line, Some(&scene), &[])
}

fn cmd_synth(args: SynthArgs, command_line: Vec<String>) -> Result<()> {
    let (tx_cfg, rx_cfg) = args.arrays.parse()?;
    let records = parse_rays(&args.rays)?;
    let channels: Vec<ChannelMatrix> = records
        .iter()
        .map(|record| {
            let l = args.top_l.unwrap_or(record.rays.len());
            geometric_channel(record, &tx_cfg, &rx_cfg, l)
        })
        .collect();
    write_channel_set(&channels, &args.out)?;
    let sidecar = summary_sidecar_path(&args.rays);
    write_manifest(
        &args.manifest,
        command_line,
        None,
        &[args.rays.as_path(), sidecar.as_path()],
    )
}

fn cmd_fullsim(args: FullsimArgs, command_line: Vec<String>) -> Result<()> {
    let scene = load_scene(&args.scene)?;
    scene.validate()?;
    let (tx_cfg, rx_cfg) = args.arrays.parse()?;
    let amplitude = if args.phase_only_full {
        FullAmplitude::CenterReference
    } else {
        FullAmplitude::PerElement
    };
    let channels = with_jobs(args.jobs, || {
        use rayon::prelude::*;
        scene
            .rx_list
            .par_iter()
            .map(|(rx_id, rx_pos)| {
                let mut paths = crate::canyon_tracer::trace_paths(&scene, *rx_pos);
                if args.drop_los {
                    paths.retain(|p| p.order() > 0);
                }
                full_array_channel(
                    &paths,
                    &tx_cfg.at(scene.tx),
                    &rx_cfg.at(*rx_pos),
                    scene.frequency_hz,
                    amplitude,
                    ("TX", rx_id),
                )
            })
            .collect::<Result<Vec<_>>>()
    })??;
    write_channel_set(&channels, &args.out)?;
    write_manifest(&args.manifest, command_line, Some(&scene), &[])
}

fn cmd_compare(args: CompareArgs, command_line: Vec<String>) -> Result<()> {
    let candidates = read_channel_set(&args.channels)?;
    let references = read_channel_set(&args.reference)?;
    let mut reports = Vec::with_capacity(candidates.len());
    for candidate in &candidates {
        let reference = references
            .iter()
            .find(|r| r.pair == candidate.pair)
            .ok_or_else(|| {
                Error::Mismatch(format!(
                    "pair {} missing from reference set {}",
                    candidate.pair_key(),
                    args.reference.display()
                ))
            })?;
        let mut report = channel_error(candidate, reference)?;
        if !args.align_phase {
            report.aligned_error_pct = report.raw_error_pct;
        }
        reports.push(report);
    }
    analysis::write_errors_csv(&reports, &args.out)?;
    write_manifest(
        &args.manifest,
        command_line,
        None,
        &[args.channels.as_path(), args.reference.as_path()],
    )
}

fn cmd_capacity(args: CapacityArgs, command_line: Vec<String>) -> Result<()> {
    let grid = parse_snr_grid(&args.snr_db)?;
    let mut curves: Vec<CapacityCurve> = Vec::new();
    for file in &args.channels {
        for channel in read_channel_set(file)? {
            curves.push(capacity_curve(&channel, &grid, args.normalize)?);
        }
    }
    analysis::write_capacity_csv(&curves, &args.out)?;
    let inputs: Vec<&Path> = args.channels.iter().map(PathBuf::as_path).collect();
    write_manifest(&args.manifest, command_line, None, &inputs)
}

fn cmd_sweep(args: SweepArgs, command_line: Vec<String>) -> Result<()> {
    let scene = load_scene(&args.scene)?;
    let (tx_array, rx_array) = args.arrays.parse()?;
    let config = SweepConfig {
        scene: scene.clone(),
        distances_m: parse_distances(&args.distances)?,
        tx_array,
        rx_array,
        top_l: args.top_l,
        snr_db: parse_snr_grid(&args.snr_db)?,
        normalization: args.normalize,
        drop_los: args.drop_los,
        full_amplitude: if args.phase_only_full {
            FullAmplitude::CenterReference
        } else {
            FullAmplitude::PerElement
        },
    };
    let points = with_jobs(args.jobs, || distance_sweep(&config))??;
    analysis::write_sweep_csv(&points, &args.out)?;
    if let Some(capacity_out) = &args.capacity_out {
        let curves: Vec<CapacityCurve> = points
            .iter()
            .flat_map(|p| [p.capacity_geometric.clone(), p.capacity_full.clone()])
            .collect();
        analysis::write_capacity_csv(&curves, capacity_out)?;
    }
    write_manifest(&args.manifest, command_line, Some(&scene), &[])
}
