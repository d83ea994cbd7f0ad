//! The two MIMO channel constructions under comparison.
//!
//! `geometric_channel` builds the narrowband geometric channel from per-ray
//! data: a sum over the L most prominent rays of the complex gain times the
//! outer product of receive and transmit steering vectors, scaled by
//! √(N_tx·N_rx). Far-field plane waves are assumed per ray.
//!
//! `full_array_channel` is the per-element reference: every entry is the
//! coherent sum over paths of Γ^order·(λ/4πd)·e^{-j2πd/λ} with d the exact
//! specular path length between that element pair, obtained by mirroring
//! the TX element through the path's reflection planes. No plane-wave
//! approximation anywhere.
//!
//! `fresnel_error_bound` quantifies how far apart the two can be for a
//! single line-of-sight path: a plane-wave truncation bound driven by the
//! array apertures and the TX-RX distance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

use crate::array_geom::{element_positions, steering_vector, ArrayConfig, Direction};
use crate::canonical;
use crate::canyon_tracer::TracedPath;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::ray_model::{select_top_l, PairRecord};
use crate::SPEED_OF_LIGHT_M_S;

/// Which construction produced a channel matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelMethod {
    Geometric,
    Full,
}

impl ChannelMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelMethod::Geometric => "geometric",
            ChannelMethod::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Result<ChannelMethod> {
        match s {
            "geometric" => Ok(ChannelMethod::Geometric),
            "full" => Ok(ChannelMethod::Full),
            other => Err(Error::Arg(format!("unknown channel method `{other}`"))),
        }
    }
}

impl std::fmt::Display for ChannelMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Amplitude convention of the full per-element construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FullAmplitude {
    /// λ/(4π·d_pq) per element pair (default).
    PerElement,
    /// Per-element phase but the center path amplitude λ/(4π·length).
    CenterReference,
}

/// Dense N_rx × N_tx channel matrix with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub entries: CMatrix,
    pub method: ChannelMethod,
    /// Array geometries, when the matrix was synthesized in-process.
    pub tx_cfg: Option<ArrayConfig>,
    pub rx_cfg: Option<ArrayConfig>,
    pub frequency_hz: f64,
    pub pair: (String, String),
}

impl ChannelMatrix {
    pub fn n_rx(&self) -> usize {
        self.entries.n_rows()
    }

    pub fn n_tx(&self) -> usize {
        self.entries.n_cols()
    }

    pub fn pair_key(&self) -> String {
        format!("{}:{}", self.pair.0, self.pair.1)
    }
}

/// Narrowband geometric channel over the `l` most prominent rays:
/// `√(N_tx·N_rx) · Σ_ℓ α_ℓ · a_r(φ_ℓ^A, θ_ℓ^A) · a_t^H(φ_ℓ^D, θ_ℓ^D)`.
///
/// The zero matrix when no ray survives the selection.
pub fn geometric_channel(
    record: &PairRecord,
    tx_cfg: &ArrayConfig,
    rx_cfg: &ArrayConfig,
    l: usize,
) -> ChannelMatrix {
    let selected = select_top_l(record, l);
    let wavelength = record.wavelength_m();
    let scale = ((tx_cfg.n_elements * rx_cfg.n_elements) as f64).sqrt();
    let mut entries = CMatrix::zeros(rx_cfg.n_elements, tx_cfg.n_elements);
    for ray in &selected.rays {
        let aoa = Direction::from_degrees(ray.aoa_az_deg, ray.aoa_el_deg)
            .expect("validated ray angles are in range");
        let aod = Direction::from_degrees(ray.aod_az_deg, ray.aod_el_deg)
            .expect("validated ray angles are in range");
        let a_r = steering_vector(rx_cfg, aoa, wavelength);
        let a_t = steering_vector(tx_cfg, aod, wavelength);
        let coeff = ray.gain * scale;
        for (p, rp) in a_r.iter().enumerate() {
            for (q, tq) in a_t.iter().enumerate() {
                entries.add_to(p, q, coeff * rp * tq.conj());
            }
        }
    }
    ChannelMatrix {
        entries,
        method: ChannelMethod::Geometric,
        tx_cfg: Some(tx_cfg.clone()),
        rx_cfg: Some(rx_cfg.clone()),
        frequency_hz: record.frequency_hz,
        pair: (record.tx_id.clone(), record.rx_id.clone()),
    }
}

/// Per-element spherical-wave channel over explicit path geometry.
///
/// Entry (p, q) sums Γ^order·amp·e^{-j2π·d_pq/λ} over paths, where d_pq is
/// the distance from the mirrored TX element q to RX element p. Summation
/// order is fixed (path, then p, then q) so results are bit-deterministic.
pub fn full_array_channel(
    paths: &[TracedPath],
    tx_cfg: &ArrayConfig,
    rx_cfg: &ArrayConfig,
    frequency_hz: f64,
    amplitude: FullAmplitude,
    pair: (&str, &str),
) -> Result<ChannelMatrix> {
    if !frequency_hz.is_finite() || frequency_hz <= 0.0 {
        return Err(Error::Arg(format!(
            "frequency must be positive, got {frequency_hz}"
        )));
    }
    let wavelength = SPEED_OF_LIGHT_M_S / frequency_hz;
    let tx_pos = element_positions(tx_cfg, wavelength);
    let rx_pos = element_positions(rx_cfg, wavelength);
    let mut entries = CMatrix::zeros(rx_cfg.n_elements, tx_cfg.n_elements);

    for path in paths {
        if path.points.len() != path.order() + 2 {
            return Err(Error::Arg(format!(
                "path with sequence {:?} lacks interaction geometry ({} points for order {})",
                path.plane_sequence(),
                path.points.len(),
                path.order()
            )));
        }
        let images: Vec<_> = tx_pos.iter().map(|&t| path.image_of(t)).collect();
        let center_amp = wavelength / (4.0 * PI * path.length_m);
        for (p, &rp) in rx_pos.iter().enumerate() {
            for (q, image_q) in images.iter().enumerate() {
                let d_pq = image_q.distance(rp);
                let amp = match amplitude {
                    FullAmplitude::PerElement => wavelength / (4.0 * PI * d_pq),
                    FullAmplitude::CenterReference => center_amp,
                };
                let term = path.reflection_product
                    * Complex64::from_polar(amp, -2.0 * PI * d_pq / wavelength);
                entries.add_to(p, q, term);
            }
        }
    }

    Ok(ChannelMatrix {
        entries,
        method: ChannelMethod::Full,
        tx_cfg: Some(tx_cfg.clone()),
        rx_cfg: Some(rx_cfg.clone()),
        frequency_hz,
        pair: (pair.0.to_string(), pair.1.to_string()),
    })
}

/// Upper bound on the phase-aligned relative Frobenius error between the
/// full and geometric constructions of a single line-of-sight path:
/// `2·sin(min(π, π·(A_t + A_r)²/(2·λ·d))/2)` with A the full apertures.
///
/// Requires the distance to exceed the summed apertures.
pub fn fresnel_error_bound(
    tx_cfg: &ArrayConfig,
    rx_cfg: &ArrayConfig,
    distance_m: f64,
    wavelength_m: f64,
) -> Result<f64> {
    let aperture_sum = tx_cfg.aperture_m(wavelength_m) + rx_cfg.aperture_m(wavelength_m);
    if !distance_m.is_finite() || distance_m <= aperture_sum {
        return Err(Error::Arg(format!(
            "distance {distance_m} m must exceed the summed apertures {aperture_sum} m"
        )));
    }
    let phase = (PI * aperture_sum * aperture_sum / (2.0 * wavelength_m * distance_m)).min(PI);
    Ok(2.0 * (phase / 2.0).sin())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelJson {
    pair: [String; 2],
    method: String,
    n_rx: usize,
    n_tx: usize,
    frequency_hz: f64,
    entries_re: Vec<Vec<f64>>,
    entries_im: Vec<Vec<f64>>,
}

/// Writes a channel set as a JSON array (row-major entries, canonical
/// 17-significant-digit floats).
pub fn write_channel_set(channels: &[ChannelMatrix], path: &Path) -> Result<()> {
    let records: Vec<ChannelJson> = channels
        .iter()
        .map(|ch| {
            let (n_rx, n_tx) = (ch.n_rx(), ch.n_tx());
            let row = |r: usize, f: fn(Complex64) -> f64| -> Vec<f64> {
                (0..n_tx).map(|c| f(ch.entries.get(r, c))).collect()
            };
            ChannelJson {
                pair: [ch.pair.0.clone(), ch.pair.1.clone()],
                method: ch.method.as_str().to_string(),
                n_rx,
                n_tx,
                frequency_hz: ch.frequency_hz,
                entries_re: (0..n_rx).map(|r| row(r, |z| z.re)).collect(),
                entries_im: (0..n_rx).map(|r| row(r, |z| z.im)).collect(),
            }
        })
        .collect();
    canonical::write_json_file(path, &records)
}

/// Reads a channel set. Array geometries are not stored in the file, so the
/// loaded matrices carry `None` configs; dimensions come from the entries.
pub fn read_channel_set(path: &Path) -> Result<Vec<ChannelMatrix>> {
    let records: Vec<ChannelJson> = canonical::read_json_file(path)?;
    records
        .into_iter()
        .map(|r| {
            let dims_ok = r.entries_re.len() == r.n_rx
                && r.entries_im.len() == r.n_rx
                && r.entries_re.iter().all(|row| row.len() == r.n_tx)
                && r.entries_im.iter().all(|row| row.len() == r.n_tx);
            if !dims_ok {
                return Err(Error::Json {
                    path: path.to_path_buf(),
                    msg: format!(
                        "channel {}:{} entries do not match declared {}x{}",
                        r.pair[0], r.pair[1], r.n_rx, r.n_tx
                    ),
                });
            }
            let entries = CMatrix::from_fn(r.n_rx, r.n_tx, |i, j| {
                Complex64::new(r.entries_re[i][j], r.entries_im[i][j])
            });
            Ok(ChannelMatrix {
                entries,
                method: ChannelMethod::parse(&r.method)?,
                tx_cfg: None,
                rx_cfg: None,
                frequency_hz: r.frequency_hz,
                pair: (r.pair[0].clone(), r.pair[1].clone()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{channel_error, singular_values};
    use crate::canyon_tracer::{trace_paths, Scene};
    use crate::geom::Vec3;
    use crate::ray_model::Ray;

    fn ula(n: usize, axis: Vec3) -> ArrayConfig {
        ArrayConfig::new(n, 0.5, axis, Vec3::ZERO).unwrap()
    }

    fn y_axis() -> Vec3 {
        Vec3::new(0.0, 1.0, 0.0)
    }

    fn ray_with_angles(gain: Complex64, aod_az: f64, aoa_az: f64) -> Ray {
        Ray {
            gain,
            delay_s: 1e-7,
            aod_az_deg: aod_az,
            aod_el_deg: 0.0,
            aoa_az_deg: aoa_az,
            aoa_el_deg: 0.0,
            n_bounces: 0,
            path_length_m: None,
            interactions: None,
        }
    }

    fn record_of(rays: Vec<Ray>) -> PairRecord {
        PairRecord::from_rays("TX", "RX", rays, 1.0, 60e9).unwrap()
    }

    fn sv_of(ch: &ChannelMatrix) -> Vec<f64> {
        singular_values(&ch.entries).unwrap()
    }

    #[test]
    fn zero_l_gives_zero_matrix() {
        let record = record_of(vec![ray_with_angles(Complex64::new(1.0, 0.0), 0.0, 0.0)]);
        let ch = geometric_channel(&record, &ula(4, y_axis()), &ula(4, y_axis()), 0);
        assert_eq!(ch.entries.fro_norm(), 0.0);
        assert_eq!(ch.n_rx(), 4);
        assert_eq!(ch.n_tx(), 4);
    }

    #[test]
    fn single_broadside_ray_is_all_ones() {
        // α = 1, both 4-element arrays broadside: √16·(1/2)·(1/2) = 1 per entry
        let record = record_of(vec![ray_with_angles(Complex64::new(1.0, 0.0), 0.0, 0.0)]);
        let ch = geometric_channel(&record, &ula(4, y_axis()), &ula(4, y_axis()), 1);
        for p in 0..4 {
            for q in 0..4 {
                assert!((ch.entries.get(p, q) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
            }
        }
        assert!((ch.entries.fro_norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_path_channel_is_rank_one_with_norm_law() {
        let alpha = Complex64::new(0.3, -1.2);
        let record = record_of(vec![ray_with_angles(alpha, 37.0, -12.0)]);
        let ch = geometric_channel(&record, &ula(4, y_axis()), &ula(4, y_axis()), 1);
        // ‖H‖_F = √(N_tx·N_rx)·|α|
        let expect = 4.0 * alpha.norm();
        assert!((ch.entries.fro_norm() - expect).abs() < 1e-12 * expect);
        let sv = sv_of(&ch);
        assert!(sv[1] / sv[0] < 1e-10, "σ2/σ1 = {}", sv[1] / sv[0]);
    }

    #[test]
    fn dirichlet_orthogonal_rays_give_equal_singular_values() {
        // two rays whose steering pairs sit on Dirichlet zeros: sin az of 0
        // and 0.5 with N=4, λ/2 spacing
        let az2 = 0.5_f64.asin().to_degrees();
        let record = record_of(vec![
            ray_with_angles(Complex64::new(1.0, 0.0), 0.0, 0.0),
            ray_with_angles(Complex64::new(0.0, 1.0), az2, az2),
        ]);
        let ch = geometric_channel(&record, &ula(4, y_axis()), &ula(4, y_axis()), 2);
        let sv = sv_of(&ch);
        assert!((sv[0] - 4.0).abs() < 1e-10, "σ1 = {}", sv[0]);
        assert!((sv[1] - 4.0).abs() < 1e-10, "σ2 = {}", sv[1]);
    }

    #[test]
    fn coincident_rays_stay_rank_one() {
        let record = record_of(vec![
            ray_with_angles(Complex64::new(1.0, 0.0), 25.0, -40.0),
            ray_with_angles(Complex64::new(0.5, 0.5), 25.0, -40.0),
        ]);
        let ch = geometric_channel(&record, &ula(4, y_axis()), &ula(4, y_axis()), 2);
        let sv = sv_of(&ch);
        assert!(sv[1] / sv[0] < 1e-10);
    }

    #[test]
    fn channel_is_additive_over_appended_rays() {
        let rays = [
            ray_with_angles(Complex64::new(1.0, 0.2), 10.0, -5.0),
            ray_with_angles(Complex64::new(-0.3, 0.9), 80.0, 44.0),
            ray_with_angles(Complex64::new(0.05, -0.6), -120.0, 3.0),
        ];
        let tx = ula(3, y_axis());
        let rx = ula(5, y_axis());
        for k in 0..rays.len() {
            let prefix = record_of(rays[..k].to_vec());
            let with_next = record_of(rays[..k + 1].to_vec());
            let single = record_of(vec![rays[k].clone()]);
            let h_prefix = geometric_channel(&prefix, &tx, &rx, k);
            let h_next = geometric_channel(&with_next, &tx, &rx, k + 1);
            let h_single = geometric_channel(&single, &tx, &rx, 1);
            for p in 0..5 {
                for q in 0..3 {
                    // same summation order: bitwise equality
                    assert_eq!(
                        h_next.entries.get(p, q),
                        h_prefix.entries.get(p, q) + h_single.entries.get(p, q)
                    );
                }
            }
        }
    }

    #[test]
    fn global_gain_phase_rotates_the_channel() {
        let rays = vec![
            ray_with_angles(Complex64::new(1.0, 0.2), 10.0, -5.0),
            ray_with_angles(Complex64::new(-0.3, 0.9), 80.0, 44.0),
        ];
        let theta = 0.7;
        let rot = Complex64::from_polar(1.0, theta);
        let rotated: Vec<Ray> = rays
            .iter()
            .map(|r| {
                let mut r2 = r.clone();
                r2.gain *= rot;
                r2
            })
            .collect();
        let tx = ula(4, y_axis());
        let rx = ula(4, y_axis());
        let h = geometric_channel(&record_of(rays), &tx, &rx, 2);
        let h_rot = geometric_channel(&record_of(rotated), &tx, &rx, 2);
        let diff = h_rot.entries.sub(&h.entries.scaled(rot)).fro_norm();
        assert!(diff < 1e-13 * h.entries.fro_norm());
    }

    /// LOS-only scene with TX at the canyon axis and RX `d` meters along it.
    fn los_scene(d: f64) -> (Scene, Vec3) {
        let rx = Vec3::new(d, 10.0, 10.0);
        let scene = Scene {
            wall_y0: 0.0,
            wall_y1: 20.0,
            wall_height_m: 40.0,
            ground: true,
            tx: Vec3::new(0.0, 10.0, 10.0),
            rx_list: vec![("RX1".into(), rx)],
            frequency_hz: 60e9,
            refl_coeff: Complex64::new(-0.8, 0.0),
            max_order: 0,
        };
        (scene, rx)
    }

    #[test]
    fn full_channel_reduces_to_ray_sum_for_single_elements() {
        let (scene, rx) = los_scene(40.0);
        let mut multi = scene.clone();
        multi.max_order = 2;
        let paths = trace_paths(&multi, rx);
        assert!(paths.len() > 1);
        let tx_cfg = ula(1, y_axis()).at(scene.tx);
        let rx_cfg = ula(1, y_axis()).at(rx);
        let ch = full_array_channel(
            &paths,
            &tx_cfg,
            &rx_cfg,
            scene.frequency_hz,
            FullAmplitude::PerElement,
            ("TX", "RX1"),
        )
        .unwrap();
        let ray_sum: Complex64 = paths.iter().map(|p| p.gain).sum();
        assert!((ch.entries.get(0, 0) - ray_sum).norm() < 1e-15 * ray_sum.norm());
    }

    #[test]
    fn endfire_collinear_elements_have_linear_phase_steps() {
        // arrays along the LOS axis: d_pq = d - s·q + s·p exactly, so the
        // phase ratio between adjacent TX elements is e^{+j·2π·s/λ}
        let (scene, rx) = los_scene(25.0);
        let x_axis = Vec3::new(1.0, 0.0, 0.0);
        let tx_cfg = ula(2, x_axis).at(scene.tx);
        let rx_cfg = ula(2, x_axis).at(rx);
        let paths = trace_paths(&scene, rx);
        assert_eq!(paths.len(), 1);
        let ch = full_array_channel(
            &paths,
            &tx_cfg,
            &rx_cfg,
            scene.frequency_hz,
            FullAmplitude::CenterReference,
            ("TX", "RX1"),
        )
        .unwrap();
        let wl = scene.wavelength_m();
        let expected_step = Complex64::from_polar(1.0, 2.0 * PI * 0.5); // s = λ/2
        for p in 0..2 {
            let ratio = ch.entries.get(p, 1) / ch.entries.get(p, 0);
            assert!((ratio - expected_step).norm() < 1e-9, "ratio {ratio}");
        }
        // and the (p,q) distance is linear: check against the formula
        let d = 25.0;
        let s = 0.5 * wl;
        for p in 0..2 {
            for q in 0..2 {
                let d_pq = paths[0]
                    .image_of(tx_cfg.reference + x_axis * (q as f64 * s))
                    .distance(rx_cfg.reference + x_axis * (p as f64 * s));
                let formula = d - s * q as f64 + s * p as f64;
                assert!((d_pq - formula).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn far_field_error_shrinks_with_distance_and_respects_bound() {
        let distances = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0];
        let mut last = f64::INFINITY;
        for &d in &distances {
            let (scene, rx) = los_scene(d);
            let wl = scene.wavelength_m();
            let tx_cfg = ula(4, y_axis()).at(scene.tx);
            let rx_cfg = ula(4, y_axis()).at(rx);
            let paths = trace_paths(&scene, rx);
            let record = crate::canyon_tracer::trace_pair(&scene, "RX1").unwrap();
            let geo = geometric_channel(&record, &tx_cfg, &rx_cfg, 1);
            let full = full_array_channel(
                &paths,
                &tx_cfg,
                &rx_cfg,
                scene.frequency_hz,
                FullAmplitude::PerElement,
                ("TX", "RX1"),
            )
            .unwrap();
            let report = channel_error(&geo, &full).unwrap();
            let bound = fresnel_error_bound(&tx_cfg, &rx_cfg, d, wl).unwrap();
            let aligned = report.aligned_error_pct / 100.0;
            assert!(
                aligned <= bound * (1.0 + 1e-6),
                "d = {d}: aligned {aligned} exceeds bound {bound}"
            );
            assert!(aligned <= last, "error must not grow with distance");
            last = aligned;
        }
    }

    #[test]
    fn fresnel_bound_examples() {
        let wl = 0.005;
        let single = ula(1, y_axis());
        let four = ula(4, y_axis());
        // zero apertures → zero bound
        assert_eq!(fresnel_error_bound(&single, &single, 1.0, wl).unwrap(), 0.0);
        // 4-element λ/2 arrays: A_t = A_r = 1.5λ; at 1 m the phase term is
        // π·(3λ)²/(2λ·1) ≈ 0.0707 rad and the bound ≈ 0.0707
        let b1 = fresnel_error_bound(&four, &four, 1.0, wl).unwrap();
        assert!((b1 - 0.0707).abs() < 1e-4, "bound {b1}");
        // 1/d scaling
        let b100 = fresnel_error_bound(&four, &four, 100.0, wl).unwrap();
        assert!((b100 - 7.07e-4).abs() < 1e-6, "bound {b100}");
        assert!((b1 / b100 - 100.0).abs() < 0.1);
        // saturates at 2 when the phase term exceeds π
        let big = ula(64, y_axis());
        let sat = fresnel_error_bound(&big, &big, 1.0, wl).unwrap();
        assert_eq!(sat, 2.0);
        // distance must exceed the aperture sum
        assert!(fresnel_error_bound(&four, &four, 0.01, wl).is_err());
    }

    #[test]
    fn channel_set_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("channels.json");
        let record = record_of(vec![ray_with_angles(
            Complex64::new(0.5, -0.25),
            30.0,
            -60.0,
        )]);
        let ch = geometric_channel(&record, &ula(2, y_axis()), &ula(3, y_axis()), 1);
        write_channel_set(std::slice::from_ref(&ch), &path).unwrap();
        let loaded = read_channel_set(&path).unwrap();
        assert_eq!(loaded.len(), 1);
        assert_eq!(loaded[0].entries, ch.entries);
        assert_eq!(loaded[0].method, ChannelMethod::Geometric);
        assert_eq!(loaded[0].pair, ch.pair);
        assert_eq!(loaded[0].frequency_hz, ch.frequency_hz);
        assert!(loaded[0].tx_cfg.is_none());
    }

    #[test]
    fn channel_set_rejects_inconsistent_dims() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("channels.json");
        std::fs::write(
            &path,
            r#"[{"pair":["a","b"],"method":"full","n_rx":2,"n_tx":1,"frequency_hz":6e10,"entries_re":[[1.0]],"entries_im":[[0.0]]}]"#,
        )
        .unwrap();
        assert!(matches!(
            read_channel_set(&path).unwrap_err(),
            Error::Json { .. }
        ));
    }

    #[test]
    fn full_channel_requires_interaction_geometry() {
        let (scene, rx) = los_scene(10.0);
        let mut path = trace_paths(&scene, rx).remove(0);
        path.planes = vec![scene.planes()[0]]; // claims order 1, 2 points
        let err = full_array_channel(
            &[path],
            &ula(2, y_axis()),
            &ula(2, y_axis()),
            60e9,
            FullAmplitude::PerElement,
            ("TX", "RX1"),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
