//! Per-ray propagation data and per-pair summaries, with file I/O.
//!
//! A [`Ray`] is one propagation path between a transmitter and a receiver:
//! complex amplitude gain (phase included), delay, departure and arrival
//! angles, and optional bounce geometry. A [`PairRecord`] collects all rays
//! of one (tx, rx) pair together with the pair summaries: power-weighted
//! mean time of arrival and total transmitted/received power.
//!
//! File layout: a ray CSV (schema below) plus a sidecar JSON keyed by
//! `"tx_id:rx_id"` carrying the pair summaries. `write_rays` produces a
//! canonical serialization; parsing it back reproduces every value exactly
//! and re-serialization is byte-identical.
//!
//! ```text
//! tx_id,rx_id,ray_idx,gain_re,gain_im,delay_ns,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg,n_bounces,path_length_m,interactions
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::canonical::{self, fmt_f64, fmt_f64_shifted, parse_f64, parse_f64_shifted};
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::SPEED_OF_LIGHT_M_S;

pub const RAY_CSV_HEADER: &str = "tx_id,rx_id,ray_idx,gain_re,gain_im,delay_ns,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg,n_bounces,path_length_m,interactions";

/// One propagation path.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    /// Complex amplitude gain (dimensionless; phase included).
    pub gain: Complex64,
    /// Time of arrival in seconds.
    pub delay_s: f64,
    /// Departure azimuth in degrees, in (-180, 180].
    pub aod_az_deg: f64,
    /// Departure elevation in degrees, in [-90, 90].
    pub aod_el_deg: f64,
    /// Arrival azimuth in degrees, in (-180, 180].
    pub aoa_az_deg: f64,
    /// Arrival elevation in degrees, in [-90, 90].
    pub aoa_el_deg: f64,
    /// Number of specular bounces along the path.
    pub n_bounces: usize,
    /// Geometric path length in meters, when known.
    pub path_length_m: Option<f64>,
    /// Bounce points in path order, when known; length equals `n_bounces`.
    pub interactions: Option<Vec<Vec3>>,
}

impl Ray {
    /// Checks the per-ray invariants; `Err((field, message))` on violation.
    pub fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        let finite = |v: f64| v.is_finite();
        if !finite(self.gain.re) || !finite(self.gain.im) {
            return Err(("gain", "gain must be finite".into()));
        }
        if !finite(self.delay_s) || self.delay_s < 0.0 {
            return Err((
                "delay_s",
                format!("delay must be >= 0, got {}", self.delay_s),
            ));
        }
        for (field, v) in [
            ("aod_az_deg", self.aod_az_deg),
            ("aoa_az_deg", self.aoa_az_deg),
        ] {
            if !finite(v) || v <= -180.0 || v > 180.0 {
                return Err((field, format!("azimuth must lie in (-180, 180], got {v}")));
            }
        }
        for (field, v) in [
            ("aod_el_deg", self.aod_el_deg),
            ("aoa_el_deg", self.aoa_el_deg),
        ] {
            if !finite(v) || !(-90.0..=90.0).contains(&v) {
                return Err((field, format!("elevation must lie in [-90, 90], got {v}")));
            }
        }
        if let Some(len) = self.path_length_m {
            if !finite(len) || len <= 0.0 {
                return Err((
                    "path_length_m",
                    format!("path length must be > 0, got {len}"),
                ));
            }
            let implied = self.delay_s * SPEED_OF_LIGHT_M_S;
            if ((len - implied) / len).abs() >= 1e-6 {
                return Err((
                    "path_length_m",
                    format!("path length {len} m inconsistent with delay ({implied} m implied)"),
                ));
            }
        }
        if let Some(points) = &self.interactions {
            if points.len() != self.n_bounces {
                return Err((
                    "interactions",
                    format!(
                        "{} interaction points for {} bounces",
                        points.len(),
                        self.n_bounces
                    ),
                ));
            }
            if points
                .iter()
                .any(|p| !finite(p.x) || !finite(p.y) || !finite(p.z))
            {
                return Err(("interactions", "interaction points must be finite".into()));
            }
        }
        Ok(())
    }

    /// |gain|^2, the ray's power weight.
    pub fn power(&self) -> f64 {
        self.gain.norm_sqr()
    }
}

/// All rays and summary quantities for one (tx, rx) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRecord {
    pub tx_id: String,
    pub rx_id: String,
    /// Rays in their recorded order (index origin 1 in files).
    pub rays: Vec<Ray>,
    /// Power-weighted mean time of arrival in seconds (0 for no power).
    pub mean_toa_s: f64,
    /// Total transmitted power in watts.
    pub p_tx_w: f64,
    /// Total received power in watts; equals `p_tx_w · Σ|gain|²`.
    pub p_rx_w: f64,
    pub frequency_hz: f64,
}

/// Σ|gain|² in ray order.
fn power_sum(rays: &[Ray]) -> f64 {
    rays.iter().map(Ray::power).sum()
}

/// Power-weighted mean delay Σ|gain|²·τ / Σ|gain|², 0 when no power.
fn weighted_mean_toa(rays: &[Ray]) -> f64 {
    let total = power_sum(rays);
    if total == 0.0 {
        return 0.0;
    }
    let weighted: f64 = rays.iter().map(|r| r.power() * r.delay_s).sum();
    weighted / total
}

impl PairRecord {
    /// Builds a record from validated rays, computing the summaries.
    pub fn from_rays(
        tx_id: impl Into<String>,
        rx_id: impl Into<String>,
        rays: Vec<Ray>,
        p_tx_w: f64,
        frequency_hz: f64,
    ) -> Result<PairRecord> {
        let tx_id = tx_id.into();
        let rx_id = rx_id.into();
        validate_id(&tx_id)?;
        validate_id(&rx_id)?;
        if !p_tx_w.is_finite() || p_tx_w < 0.0 {
            return Err(Error::Invariant {
                pair: format!("{tx_id}:{rx_id}"),
                field: "p_tx_w",
                msg: format!("transmit power must be finite and >= 0, got {p_tx_w}"),
            });
        }
        if !frequency_hz.is_finite() || frequency_hz <= 0.0 {
            return Err(Error::Invariant {
                pair: format!("{tx_id}:{rx_id}"),
                field: "frequency_hz",
                msg: format!("frequency must be positive, got {frequency_hz}"),
            });
        }
        for ray in &rays {
            if let Err((field, msg)) = ray.validate() {
                return Err(Error::Invariant {
                    pair: format!("{tx_id}:{rx_id}"),
                    field,
                    msg,
                });
            }
        }
        Ok(Self::from_validated(
            tx_id,
            rx_id,
            rays,
            p_tx_w,
            frequency_hz,
        ))
    }

    fn from_validated(
        tx_id: String,
        rx_id: String,
        rays: Vec<Ray>,
        p_tx_w: f64,
        frequency_hz: f64,
    ) -> PairRecord {
        let mean_toa_s = weighted_mean_toa(&rays);
        let p_rx_w = p_tx_w * power_sum(&rays);
        PairRecord {
            tx_id,
            rx_id,
            rays,
            mean_toa_s,
            p_tx_w,
            p_rx_w,
            frequency_hz,
        }
    }

    /// `"tx_id:rx_id"`, the key used in summary sidecars and output CSVs.
    pub fn pair_key(&self) -> String {
        format!("{}:{}", self.tx_id, self.rx_id)
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT_M_S / self.frequency_hz
    }
}

/// Returns a copy keeping only the `l` most prominent rays.
///
/// Prominence is |gain|; ties break toward smaller delay, then original
/// position. Kept rays stay in their original relative order and the pair
/// summaries are recomputed over them.
pub fn select_top_l(record: &PairRecord, l: usize) -> PairRecord {
    let rays = &record.rays;
    let mut order: Vec<usize> = (0..rays.len()).collect();
    order.sort_by(|&a, &b| {
        rays[b]
            .gain
            .norm()
            .partial_cmp(&rays[a].gain.norm())
            .expect("validated gains are finite")
            .then(
                rays[a]
                    .delay_s
                    .partial_cmp(&rays[b].delay_s)
                    .expect("validated delays are finite"),
            )
            .then(a.cmp(&b))
    });
    let mut keep: Vec<usize> = order.into_iter().take(l).collect();
    keep.sort_unstable();
    let kept: Vec<Ray> = keep.into_iter().map(|i| rays[i].clone()).collect();
    PairRecord::from_validated(
        record.tx_id.clone(),
        record.rx_id.clone(),
        kept,
        record.p_tx_w,
        record.frequency_hz,
    )
}

/// Copy of the record with the line-of-sight (zero-bounce) rays removed
/// and summaries recomputed; the NLOS view of a pair.
pub fn without_los(record: &PairRecord) -> Result<PairRecord> {
    let rays: Vec<Ray> = record
        .rays
        .iter()
        .filter(|r| r.n_bounces > 0)
        .cloned()
        .collect();
    PairRecord::from_rays(
        record.tx_id.clone(),
        record.rx_id.clone(),
        rays,
        record.p_tx_w,
        record.frequency_hz,
    )
}

fn validate_id(id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(Error::Arg(format!(
            "identifier `{id}` must be nonempty and use only [A-Za-z0-9_.-]"
        )))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairSummary {
    mean_toa_s: f64,
    p_tx_w: f64,
    p_rx_w: f64,
    frequency_hz: f64,
}

/// Sidecar path for a ray CSV: `rays.csv` → `rays.summary.json`.
pub fn summary_sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("summary.json")
}

fn rel_mismatch(claimed: f64, recomputed: f64) -> bool {
    if recomputed == 0.0 {
        claimed != 0.0
    } else {
        ((claimed - recomputed) / recomputed).abs() >= 1e-9
    }
}

/// Reads a ray CSV and its summary sidecar into grouped, validated records.
///
/// Rays are grouped by (tx_id, rx_id) in order of first appearance with the
/// file's ray order preserved; pairs that appear only in the sidecar load as
/// zero-ray records. Summaries are recomputed and checked to 1e-9 relative.
pub fn parse_rays(path: &Path) -> Result<Vec<PairRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let path_str = path.display().to_string();
    let malformed = |line: usize, msg: String| Error::MalformedRow {
        path: path_str.clone(),
        line,
        msg,
    };

    let mut lines = text.lines().enumerate();
    let header = match lines.next() {
        Some((_, h)) => h.trim_end_matches('\r'),
        None => return Err(malformed(1, "missing header".into())),
    };
    if header != RAY_CSV_HEADER {
        return Err(malformed(
            1,
            format!("unexpected header (unknown or missing columns): `{header}`"),
        ));
    }

    let mut pair_order: Vec<(String, String)> = Vec::new();
    let mut pair_rays: HashMap<(String, String), Vec<Ray>> = HashMap::new();
    let mut seen_idx: HashSet<(String, String, u64)> = HashSet::new();

    for (i, raw_line) in lines {
        let line_no = i + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 13 {
            return Err(malformed(
                line_no,
                format!("expected 13 columns, found {}", fields.len()),
            ));
        }
        let tx_id = fields[0].to_string();
        let rx_id = fields[1].to_string();
        validate_id(&tx_id).map_err(|e| malformed(line_no, e.to_string()))?;
        validate_id(&rx_id).map_err(|e| malformed(line_no, e.to_string()))?;

        let ray_idx: u64 = fields[2]
            .parse()
            .map_err(|_| malformed(line_no, format!("bad ray_idx `{}`", fields[2])))?;
        if !seen_idx.insert((tx_id.clone(), rx_id.clone(), ray_idx)) {
            return Err(malformed(
                line_no,
                format!("duplicate ray index {ray_idx} for pair {tx_id}:{rx_id}"),
            ));
        }

        let num = |col: usize, name: &str| -> Result<f64> {
            parse_f64(fields[col])
                .ok_or_else(|| malformed(line_no, format!("bad {name} `{}`", fields[col])))
        };
        let gain = Complex64::new(num(3, "gain_re")?, num(4, "gain_im")?);
        let delay_s = parse_f64_shifted(fields[5], -9)
            .filter(|v| v.is_finite())
            .ok_or_else(|| malformed(line_no, format!("bad delay_ns `{}`", fields[5])))?;
        let aod_az_deg = num(6, "aod_az_deg")?;
        let aod_el_deg = num(7, "aod_el_deg")?;
        let aoa_az_deg = num(8, "aoa_az_deg")?;
        let aoa_el_deg = num(9, "aoa_el_deg")?;
        let n_bounces: usize = fields[10]
            .parse()
            .map_err(|_| malformed(line_no, format!("bad n_bounces `{}`", fields[10])))?;
        let path_length_m = if fields[11].is_empty() {
            None
        } else {
            Some(num(11, "path_length_m")?)
        };
        let interactions = if fields[12].is_empty() {
            None
        } else {
            let mut points = Vec::new();
            for triple in fields[12].split(';') {
                let coords: Vec<f64> = triple
                    .split_whitespace()
                    .map(parse_f64)
                    .collect::<Option<_>>()
                    .ok_or_else(|| {
                        malformed(line_no, format!("bad interactions `{}`", fields[12]))
                    })?;
                if coords.len() != 3 {
                    return Err(malformed(
                        line_no,
                        format!("interaction point needs 3 coordinates in `{}`", fields[12]),
                    ));
                }
                points.push(Vec3::new(coords[0], coords[1], coords[2]));
            }
            Some(points)
        };

        let ray = Ray {
            gain,
            delay_s,
            aod_az_deg,
            aod_el_deg,
            aoa_az_deg,
            aoa_el_deg,
            n_bounces,
            path_length_m,
            interactions,
        };
        if let Err((field, msg)) = ray.validate() {
            return Err(Error::Invariant {
                pair: format!("{tx_id}:{rx_id}"),
                field,
                msg: format!("{msg} (line {line_no})"),
            });
        }

        let key = (tx_id, rx_id);
        if !pair_rays.contains_key(&key) {
            pair_order.push(key.clone());
        }
        pair_rays.entry(key).or_default().push(ray);
    }

    let sidecar = summary_sidecar_path(path);
    let summaries: BTreeMap<String, PairSummary> = canonical::read_json_file(&sidecar)?;

    let mut records = Vec::new();
    let mut consumed: HashSet<String> = HashSet::new();
    for (tx_id, rx_id) in pair_order {
        let key = format!("{tx_id}:{rx_id}");
        let summary = summaries.get(&key).ok_or_else(|| Error::Invariant {
            pair: key.clone(),
            field: "summary",
            msg: format!("no entry in {}", sidecar.display()),
        })?;
        consumed.insert(key.clone());
        let rays = pair_rays.remove(&(tx_id.clone(), rx_id.clone())).unwrap();
        records.push(build_checked_record(tx_id, rx_id, rays, summary, &key)?);
    }
    // pairs present only in the sidecar are zero-ray records
    for (key, summary) in &summaries {
        if consumed.contains(key) {
            continue;
        }
        let (tx_id, rx_id) = key.split_once(':').ok_or_else(|| Error::Invariant {
            pair: key.clone(),
            field: "summary",
            msg: "summary key must be `tx_id:rx_id`".into(),
        })?;
        records.push(build_checked_record(
            tx_id.to_string(),
            rx_id.to_string(),
            Vec::new(),
            summary,
            key,
        )?);
    }
    Ok(records)
}

fn build_checked_record(
    tx_id: String,
    rx_id: String,
    rays: Vec<Ray>,
    summary: &PairSummary,
    key: &str,
) -> Result<PairRecord> {
    let record = PairRecord::from_rays(tx_id, rx_id, rays, summary.p_tx_w, summary.frequency_hz)?;
    if rel_mismatch(summary.mean_toa_s, record.mean_toa_s) {
        return Err(Error::Invariant {
            pair: key.to_string(),
            field: "mean_toa_s",
            msg: format!(
                "declared {} but recomputed {}",
                summary.mean_toa_s, record.mean_toa_s
            ),
        });
    }
    if rel_mismatch(summary.p_rx_w, record.p_rx_w) {
        return Err(Error::Invariant {
            pair: key.to_string(),
            field: "p_rx_w",
            msg: format!(
                "declared {} but recomputed {}",
                summary.p_rx_w, record.p_rx_w
            ),
        });
    }
    Ok(record)
}

/// Writes records to a ray CSV plus summary sidecar in canonical form.
///
/// `parse_rays` on the result reproduces every field exactly, and
/// re-serializing parses back byte-identically.
pub fn write_rays(records: &[PairRecord], path: &Path) -> Result<()> {
    let mut seen: HashSet<String> = HashSet::new();
    for r in records {
        if !seen.insert(r.pair_key()) {
            return Err(Error::Invariant {
                pair: r.pair_key(),
                field: "pair",
                msg: "duplicate (tx_id, rx_id) record".into(),
            });
        }
    }

    let mut csv = String::from(RAY_CSV_HEADER);
    csv.push('\n');
    for record in records {
        for (i, ray) in record.rays.iter().enumerate() {
            let path_len = ray.path_length_m.map(fmt_f64).unwrap_or_default();
            let interactions = ray
                .interactions
                .as_ref()
                .map(|points| {
                    points
                        .iter()
                        .map(|p| format!("{} {} {}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z)))
                        .collect::<Vec<_>>()
                        .join(";")
                })
                .unwrap_or_default();
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                record.tx_id,
                record.rx_id,
                i + 1,
                fmt_f64(ray.gain.re),
                fmt_f64(ray.gain.im),
                fmt_f64_shifted(ray.delay_s, 9),
                fmt_f64(ray.aod_az_deg),
                fmt_f64(ray.aod_el_deg),
                fmt_f64(ray.aoa_az_deg),
                fmt_f64(ray.aoa_el_deg),
                ray.n_bounces,
                path_len,
                interactions,
            ));
        }
    }

    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(csv.as_bytes())
        .map_err(|e| Error::io(path, e))?;

    let summaries: BTreeMap<String, PairSummary> = records
        .iter()
        .map(|r| {
            (
                r.pair_key(),
                PairSummary {
                    mean_toa_s: r.mean_toa_s,
                    p_tx_w: r.p_tx_w,
                    p_rx_w: r.p_rx_w,
                    frequency_hz: r.frequency_hz,
                },
            )
        })
        .collect();
    canonical::write_json_file(&summary_sidecar_path(path), &summaries)
}
