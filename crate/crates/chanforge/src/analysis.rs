//! Numerical comparison of the two channel constructions: relative
//! Frobenius error with optimal global-phase alignment, equal-power log-det
//! capacity backed by a self-contained complex Jacobi eigensolver, and the
//! distance-sweep harness that ties tracing, synthesis and comparison
//! together.

use num_complex::Complex64;
use rayon::prelude::*;
use std::io::Write as _;
use std::path::Path;

use crate::array_geom::ArrayConfig;
use crate::canyon_tracer::{trace_pair_with_paths, Scene};
use crate::channel_synth::{
    fresnel_error_bound, full_array_channel, geometric_channel, ChannelMatrix, FullAmplitude,
};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Error between a channel and its reference, in percent of the reference's
/// Frobenius norm, before and after optimal global-phase alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub pair: String,
    pub raw_error_pct: f64,
    pub aligned_error_pct: f64,
    /// Transmitter-receiver distance, when the caller knows the geometry.
    pub tx_rx_distance_m: Option<f64>,
    /// Whether a line-of-sight ray contributed, when known.
    pub los: Option<bool>,
}

/// Channel capacity normalization mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Use the channel entries as-is.
    Raw,
    /// Scale so that ‖H‖_F² = N_tx·N_rx (structure comparison).
    Frobenius,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Raw => "raw",
            Normalization::Frobenius => "frobenius",
        }
    }
}

/// Capacity over an SNR grid for one channel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityCurve {
    pub pair: String,
    pub method: crate::channel_synth::ChannelMethod,
    pub snr_db: Vec<f64>,
    pub capacity_bps_hz: Vec<f64>,
    pub normalization: Normalization,
}

/// The SNR grid used for low/high-SNR agreement studies: -10..30 dB step 5.
pub fn default_snr_grid_db() -> Vec<f64> {
    (0..=8).map(|k| -10.0 + 5.0 * k as f64).collect()
}

/// Eigenvalues of a complex Hermitian matrix, ascending, via cyclic
/// two-sided Jacobi rotations.
///
/// Terminates when the off-diagonal Frobenius mass falls below
/// 1e-13·‖g‖_F; refuses non-Hermitian input (1e-12·‖g‖_max entry check)
/// and failure to converge within 100 sweeps.
pub fn hermitian_eigenvalues(g: &CMatrix) -> Result<Vec<f64>> {
    let n = g.n_rows();
    if g.n_cols() != n {
        return Err(Error::Numeric(format!(
            "eigensolver needs a square matrix, got {}x{}",
            n,
            g.n_cols()
        )));
    }
    let max_abs = g.max_abs();
    for i in 0..n {
        for j in 0..n {
            if (g.get(i, j) - g.get(j, i).conj()).norm() > 1e-12 * max_abs {
                return Err(Error::Numeric(format!(
                    "matrix is not Hermitian at ({i}, {j})"
                )));
            }
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let fro = g.fro_norm();
    if fro == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = 1e-13 * fro;

    let mut a = g.clone();
    let off_mass = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _sweep in 0..100 {
        if off_mass(&a) < target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let m = apq.norm();
                if m == 0.0 {
                    continue;
                }
                let phi = apq.arg();
                let e_pos = Complex64::from_polar(1.0, phi);
                let e_neg = e_pos.conj();
                let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * m);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A ← A·J, touching columns p and q
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * c - aiq * e_neg * s);
                    a.set(i, q, aip * e_pos * s + aiq * c);
                }
                // A ← J^H·A, touching rows p and q
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * c - aqj * e_pos * s);
                    a.set(q, j, apj * e_neg * s + aqj * c);
                }
                // the rotation annihilates (p, q) analytically
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
                a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
            }
        }
    }
    if !converged && off_mass(&a) >= target {
        return Err(Error::Numeric(
            "Jacobi eigensolver failed to converge within 100 sweeps".into(),
        ));
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(eig)
}

/// Singular values, descending, via one-sided Jacobi (Hestenes) column
/// orthogonalization.
///
/// Unlike the eigenvalues of H·H^H, whose rounding floor squares to
/// ~√ε·σ₁ for the small singular values, this route keeps componentwise
/// relative accuracy — the numerical-rank checks (σ₂/σ₁ thresholds well
/// below 1e-8) depend on it.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let n_sv = m.n_rows().min(m.n_cols());
    if n_sv == 0 {
        return Ok(Vec::new());
    }
    // orthogonalize the shorter side's columns
    let mut a = if m.n_rows() >= m.n_cols() {
        m.clone()
    } else {
        m.hermitian()
    };
    let rows = a.n_rows();
    let cols = a.n_cols();
    let tol = 1e-14;
    let mut converged = false;
    for _sweep in 0..100 {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let mut sq_i = 0.0;
                let mut sq_j = 0.0;
                let mut inner = Complex64::new(0.0, 0.0);
                for r in 0..rows {
                    let ci = a.get(r, i);
                    let cj = a.get(r, j);
                    sq_i += ci.norm_sqr();
                    sq_j += cj.norm_sqr();
                    inner += ci.conj() * cj;
                }
                if inner.norm() <= tol * (sq_i.sqrt() * sq_j.sqrt()) {
                    continue;
                }
                rotated = true;
                let phi = inner.arg();
                let e_pos = Complex64::from_polar(1.0, phi);
                let e_neg = e_pos.conj();
                let tau = (sq_j - sq_i) / (2.0 * inner.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..rows {
                    let ci = a.get(r, i);
                    let cj = a.get(r, j);
                    a.set(r, i, ci * c - cj * e_neg * s);
                    a.set(r, j, ci * e_pos * s + cj * c);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(
            "one-sided Jacobi SVD failed to converge within 100 sweeps".into(),
        ));
    }
    let mut sv: Vec<f64> = (0..cols)
        .map(|j| {
            (0..rows)
                .map(|r| a.get(r, j).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).expect("norms are finite"));
    sv.truncate(n_sv);
    Ok(sv)
}

/// Eigenvalues of H̃·H̃^H after the requested normalization.
fn normalized_gram_eigenvalues(
    h: &ChannelMatrix,
    normalization: Normalization,
) -> Result<Vec<f64>> {
    let fro = h.entries.fro_norm();
    let scaled;
    let entries = match normalization {
        Normalization::Raw => &h.entries,
        Normalization::Frobenius => {
            if fro == 0.0 {
                &h.entries
            } else {
                let factor = ((h.n_tx() * h.n_rx()) as f64).sqrt() / fro;
                scaled = h.entries.scaled(Complex64::new(factor, 0.0));
                &scaled
            }
        }
    };
    hermitian_eigenvalues(&entries.gram())
}

fn logdet_capacity(eigenvalues: &[f64], snr_linear: f64, n_tx: usize) -> f64 {
    let c = snr_linear / n_tx as f64;
    eigenvalues
        .iter()
        .map(|&l| (1.0 + c * l.max(0.0)).log2())
        .sum()
}

/// Equal-power log-det capacity in bits/s/Hz:
/// `Σ log₂(1 + (snr/N_tx)·λ_i)` over the eigenvalues of H̃·H̃^H.
pub fn capacity(h: &ChannelMatrix, snr_linear: f64, normalization: Normalization) -> Result<f64> {
    if !snr_linear.is_finite() || snr_linear < 0.0 {
        return Err(Error::Arg(format!(
            "snr must be nonnegative, got {snr_linear}"
        )));
    }
    let eig = normalized_gram_eigenvalues(h, normalization)?;
    Ok(logdet_capacity(&eig, snr_linear, h.n_tx()))
}

/// Capacity over an SNR grid (decibels). The eigendecomposition is shared
/// across the grid.
pub fn capacity_curve(
    h: &ChannelMatrix,
    snr_db: &[f64],
    normalization: Normalization,
) -> Result<CapacityCurve> {
    let eig = normalized_gram_eigenvalues(h, normalization)?;
    let capacity_bps_hz = snr_db
        .iter()
        .map(|&db| logdet_capacity(&eig, 10f64.powf(db / 10.0), h.n_tx()))
        .collect();
    Ok(CapacityCurve {
        pair: h.pair_key(),
        method: h.method,
        snr_db: snr_db.to_vec(),
        capacity_bps_hz,
        normalization,
    })
}

/// Relative Frobenius error of `a` against the reference `b`, in percent,
/// raw and after the optimal global-phase alignment
/// `θ* = arg trace(b^H a)`.
pub fn channel_error(a: &ChannelMatrix, b: &ChannelMatrix) -> Result<ErrorReport> {
    if a.n_rx() != b.n_rx() || a.n_tx() != b.n_tx() {
        return Err(Error::Mismatch(format!(
            "channel dimensions differ: {}x{} vs {}x{}",
            a.n_rx(),
            a.n_tx(),
            b.n_rx(),
            b.n_tx()
        )));
    }
    if a.pair != b.pair {
        return Err(Error::Mismatch(format!(
            "pair ids differ: {} vs {}",
            a.pair_key(),
            b.pair_key()
        )));
    }
    let ref_norm = b.entries.fro_norm();
    if ref_norm == 0.0 {
        return Err(Error::Mismatch(
            "reference channel has zero Frobenius norm".into(),
        ));
    }
    let raw = 100.0 * a.entries.sub(&b.entries).fro_norm() / ref_norm;
    let theta = b.entries.fro_inner(&a.entries).arg();
    let aligned_entries = a.entries.scaled(Complex64::from_polar(1.0, -theta));
    // optimal alignment cannot exceed the raw error; guard rounding noise
    let aligned = (100.0 * aligned_entries.sub(&b.entries).fro_norm() / ref_norm).min(raw);
    Ok(ErrorReport {
        pair: a.pair_key(),
        raw_error_pct: raw,
        aligned_error_pct: aligned,
        tx_rx_distance_m: None,
        los: None,
    })
}

/// Inputs of [`distance_sweep`].
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Scene whose walls, transmitter and frequency to use; its receiver
    /// list is replaced by sweep receivers on the canyon axis.
    pub scene: Scene,
    /// Strictly ascending positive distances in meters.
    pub distances_m: Vec<f64>,
    pub tx_array: ArrayConfig,
    pub rx_array: ArrayConfig,
    /// Number of rays for the geometric construction; `None` keeps all.
    pub top_l: Option<usize>,
    pub snr_db: Vec<f64>,
    pub normalization: Normalization,
    /// Exclude the order-0 ray (NLOS study).
    pub drop_los: bool,
    pub full_amplitude: FullAmplitude,
}

/// One sweep distance: error report plus both capacity curves and the
/// plane-wave error bound at that range.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub distance_m: f64,
    pub error: ErrorReport,
    pub capacity_geometric: CapacityCurve,
    pub capacity_full: CapacityCurve,
    pub fresnel_bound: f64,
}

/// Places a receiver on the canyon axis at each distance, traces it, builds
/// both channel constructions and compares them. Points are independent and
/// evaluate in parallel; the output is ordered by distance.
pub fn distance_sweep(config: &SweepConfig) -> Result<Vec<SweepPoint>> {
    if config.distances_m.is_empty() {
        return Err(Error::Arg("sweep needs at least one distance".into()));
    }
    let ascending = config.distances_m.windows(2).all(|w| w[0] < w[1]);
    if config.distances_m.iter().any(|d| !d.is_finite())
        || config.distances_m[0] <= 0.0
        || !ascending
    {
        return Err(Error::Arg(
            "sweep distances must be positive and strictly ascending".into(),
        ));
    }
    let axis_y = 0.5 * (config.scene.wall_y0 + config.scene.wall_y1);

    config
        .distances_m
        .par_iter()
        .enumerate()
        .map(|(idx, &distance)| {
            let rx_id = format!("RX{}", idx + 1);
            let rx_pos =
                crate::geom::Vec3::new(config.scene.tx.x + distance, axis_y, config.scene.tx.z);
            let scene = Scene {
                rx_list: vec![(rx_id.clone(), rx_pos)],
                ..config.scene.clone()
            };
            scene.validate()?;
            sweep_point(config, &scene, &rx_id, rx_pos)
        })
        .collect()
}

fn sweep_point(
    config: &SweepConfig,
    scene: &Scene,
    rx_id: &str,
    rx_pos: crate::geom::Vec3,
) -> Result<SweepPoint> {
    let (record, paths) = trace_pair_with_paths(scene, rx_id)?;
    let (record, paths) = if config.drop_los {
        let kept_paths: Vec<_> = paths.into_iter().filter(|p| p.order() > 0).collect();
        (crate::ray_model::without_los(&record)?, kept_paths)
    } else {
        (record, paths)
    };

    let tx_cfg = config.tx_array.at(scene.tx);
    let rx_cfg = config.rx_array.at(rx_pos);
    let l = config.top_l.unwrap_or(record.rays.len());
    let geometric = geometric_channel(&record, &tx_cfg, &rx_cfg, l);
    let full = full_array_channel(
        &paths,
        &tx_cfg,
        &rx_cfg,
        scene.frequency_hz,
        config.full_amplitude,
        (&record.tx_id, &record.rx_id),
    )?;

    let distance = scene.tx.distance(rx_pos);
    let mut error = channel_error(&geometric, &full)?;
    error.tx_rx_distance_m = Some(distance);
    error.los = Some(record.rays.iter().any(|r| r.n_bounces == 0));

    let capacity_geometric = capacity_curve(&geometric, &config.snr_db, config.normalization)?;
    let capacity_full = capacity_curve(&full, &config.snr_db, config.normalization)?;
    let fresnel_bound = fresnel_error_bound(&tx_cfg, &rx_cfg, distance, scene.wavelength_m())?;

    Ok(SweepPoint {
        distance_m: distance,
        error,
        capacity_geometric,
        capacity_full,
        fresnel_bound,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

fn opt_cell<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// `errors.csv`: `pair,distance_m,los,raw_error_pct,aligned_error_pct`.
pub fn write_errors_csv(reports: &[ErrorReport], path: &Path) -> Result<()> {
    let mut text = String::from("pair,distance_m,los,raw_error_pct,aligned_error_pct\n");
    for r in reports {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            r.pair,
            opt_cell(&r.tx_rx_distance_m),
            opt_cell(&r.los),
            r.raw_error_pct,
            r.aligned_error_pct
        ));
    }
    write_text(path, &text)
}

/// `capacity.csv`: `pair,method,snr_db,capacity_bps_hz`, one row per grid
/// point per curve.
pub fn write_capacity_csv(curves: &[CapacityCurve], path: &Path) -> Result<()> {
    let mut text = String::from("pair,method,snr_db,capacity_bps_hz\n");
    for curve in curves {
        for (snr, cap) in curve.snr_db.iter().zip(&curve.capacity_bps_hz) {
            text.push_str(&format!(
                "{},{},{},{}\n",
                curve.pair,
                curve.method.as_str(),
                snr,
                cap
            ));
        }
    }
    write_text(path, &text)
}

/// `sweep.csv`: error rows with the plane-wave bound alongside.
pub fn write_sweep_csv(points: &[SweepPoint], path: &Path) -> Result<()> {
    let mut text =
        String::from("pair,distance_m,los,raw_error_pct,aligned_error_pct,fresnel_bound_pct\n");
    for p in points {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.error.pair,
            opt_cell(&p.error.tx_rx_distance_m),
            opt_cell(&p.error.los),
            p.error.raw_error_pct,
            p.error.aligned_error_pct,
            100.0 * p.fresnel_bound
        ));
    }
    write_text(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel_synth::ChannelMethod;
    use crate::geom::Vec3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn channel_of(entries: CMatrix) -> ChannelMatrix {
        ChannelMatrix {
            entries,
            method: ChannelMethod::Geometric,
            tx_cfg: None,
            rx_cfg: None,
            frequency_hz: 60e9,
            pair: ("TX".into(), "RX".into()),
        }
    }

    /// Test oracle: determinant via LU elimination with partial pivoting.
    fn lu_det(m: &CMatrix) -> Complex64 {
        let n = m.n_rows();
        let mut a: Vec<Vec<Complex64>> = (0..n)
            .map(|i| (0..n).map(|j| m.get(i, j)).collect())
            .collect();
        let mut det = c(1.0, 0.0);
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| a[i][k].norm().partial_cmp(&a[j][k].norm()).unwrap())
                .unwrap();
            if a[pivot][k].norm() == 0.0 {
                return c(0.0, 0.0);
            }
            if pivot != k {
                a.swap(pivot, k);
                det = -det;
            }
            det *= a[k][k];
            for i in (k + 1)..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    let sub = f * a[k][j];
                    a[i][j] -= sub;
                }
            }
        }
        det
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let mut g = CMatrix::zeros(n, n);
        for i in 0..n {
            g.set(i, i, c(rng.gen_range(-3.0..3.0), 0.0));
            for j in (i + 1)..n {
                let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                g.set(i, j, z);
                g.set(j, i, z.conj());
            }
        }
        g
    }

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let mut g = CMatrix::zeros(3, 3);
        g.set(0, 0, c(3.0, 0.0));
        g.set(1, 1, c(1.0, 0.0));
        g.set(2, 2, c(2.0, 0.0));
        assert_eq!(hermitian_eigenvalues(&g).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigenvalues_of_two_by_two_with_imaginary_coupling() {
        // [[2, j], [-j, 2]] has eigenvalues {1, 3}
        let g = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ]);
        let eig = hermitian_eigenvalues(&g).unwrap();
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_zero_matrix() {
        let g = CMatrix::zeros(5, 5);
        assert_eq!(hermitian_eigenvalues(&g).unwrap(), vec![0.0; 5]);
    }

    #[test]
    fn eigensolver_rejects_non_hermitian() {
        let g = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert!(matches!(
            hermitian_eigenvalues(&g).unwrap_err(),
            Error::Numeric(_)
        ));
    }

    #[test]
    fn eigenvalue_trace_and_determinant_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=8 {
            let g = random_hermitian(&mut rng, n);
            let eig = hermitian_eigenvalues(&g).unwrap();
            let trace: f64 = (0..n).map(|i| g.get(i, i).re).sum();
            let sum: f64 = eig.iter().sum();
            assert!(
                (sum - trace).abs() <= 1e-9 * trace.abs().max(1.0),
                "n={n}: eig sum {sum} vs trace {trace}"
            );
            let det = lu_det(&g);
            let prod: f64 = eig.iter().product();
            assert!(
                (prod - det.re).abs() <= 1e-9 * det.norm().max(1.0),
                "n={n}: eig prod {prod} vs det {det}"
            );
            assert!(det.im.abs() < 1e-9 * det.norm().max(1.0));
        }
    }

    #[test]
    fn capacity_of_zero_channel_is_zero() {
        let h = channel_of(CMatrix::zeros(3, 2));
        assert_eq!(capacity(&h, 10.0, Normalization::Raw).unwrap(), 0.0);
        assert_eq!(capacity(&h, 10.0, Normalization::Frobenius).unwrap(), 0.0);
    }

    #[test]
    fn capacity_of_identity_matches_closed_form() {
        // H = I₂, snr 3, raw: 2·log₂(1 + 3/2)
        let h = channel_of(CMatrix::identity(2));
        let cap = capacity(&h, 3.0, Normalization::Raw).unwrap();
        assert!((cap - 2.0 * 2.5_f64.log2()).abs() < 1e-12);
        assert_eq!(capacity(&h, 0.0, Normalization::Raw).unwrap(), 0.0);
    }

    #[test]
    fn rank_one_frobenius_capacity_matches_closed_form() {
        // single dyad, any overall gain: after Frobenius normalization the
        // only eigenvalue is N_tx·N_rx, so C = log₂(1 + snr·N_rx)
        let mut entries = CMatrix::zeros(4, 4);
        for p in 0..4 {
            for q in 0..4 {
                entries.set(p, q, c(0.37, -0.11));
            }
        }
        let h = channel_of(entries);
        let cap = capacity(&h, 1.0, Normalization::Frobenius).unwrap();
        assert!((cap - 5.0_f64.log2()).abs() < 1e-10, "cap = {cap}");
    }

    #[test]
    fn capacity_is_monotone_in_snr() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut entries = CMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                entries.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
        }
        let h = channel_of(entries);
        let mut last = -1.0;
        for db in &default_snr_grid_db() {
            let cap = capacity(&h, 10f64.powf(db / 10.0), Normalization::Frobenius).unwrap();
            assert!(cap >= last);
            last = cap;
        }
    }

    #[test]
    fn capacity_matches_logdet_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=6);
            let mut entries = CMatrix::zeros(n, m);
            for i in 0..n {
                for j in 0..m {
                    entries.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                }
            }
            let h = channel_of(entries.clone());
            let snr = rng.gen_range(0.0..50.0);
            let cap = capacity(&h, snr, Normalization::Raw).unwrap();
            // oracle: log₂|det(I + (snr/N_tx)·G)| by LU elimination
            let g = entries.gram();
            let coeff = snr / m as f64;
            let mut a = CMatrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    a.add_to(i, j, g.get(i, j) * coeff);
                }
            }
            let oracle = lu_det(&a).norm().log2();
            assert!(
                (cap - oracle).abs() <= 1e-9 * oracle.abs().max(1.0),
                "cap {cap} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn frobenius_capacity_is_extremal_for_equal_and_rank_one_spectra() {
        // same Frobenius norm, different spread: equal singular values beat
        // everything, rank-1 loses to everything
        let equal = channel_of(CMatrix::identity(4));
        let mut spread_entries = CMatrix::zeros(4, 4);
        for (i, v) in [1.6, 1.0, 0.8, 0.2].iter().enumerate() {
            spread_entries.set(i, i, c(*v, 0.0));
        }
        let spread = channel_of(spread_entries);
        let mut rank1_entries = CMatrix::zeros(4, 4);
        rank1_entries.set(0, 0, c(2.0, 0.0));
        let rank1 = channel_of(rank1_entries);
        let snr = 10.0;
        let cap_equal = capacity(&equal, snr, Normalization::Frobenius).unwrap();
        let cap_spread = capacity(&spread, snr, Normalization::Frobenius).unwrap();
        let cap_rank1 = capacity(&rank1, snr, Normalization::Frobenius).unwrap();
        assert!(cap_equal > cap_spread && cap_spread > cap_rank1);
    }

    #[test]
    fn error_of_identical_channels_is_zero() {
        let a = channel_of(CMatrix::identity(3));
        let report = channel_error(&a, &a.clone()).unwrap();
        assert_eq!(report.raw_error_pct, 0.0);
        assert_eq!(report.aligned_error_pct, 0.0);
    }

    #[test]
    fn pure_phase_offset_aligns_to_zero() {
        // a = e^{jπ/4}·b: raw = 100·2·sin(π/8), aligned = 0
        let b = channel_of(CMatrix::identity(2));
        let rot = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let a = channel_of(b.entries.scaled(rot));
        let report = channel_error(&a, &b).unwrap();
        assert!((report.raw_error_pct - 76.53668647301795).abs() < 1e-9);
        assert!(report.aligned_error_pct < 1e-10);
    }

    #[test]
    fn magnitude_error_survives_alignment() {
        let b = channel_of(CMatrix::identity(2));
        let a = channel_of(b.entries.scaled(c(2.0, 0.0)));
        let report = channel_error(&a, &b).unwrap();
        assert!((report.raw_error_pct - 100.0).abs() < 1e-12);
        assert!((report.aligned_error_pct - 100.0).abs() < 1e-12);
    }

    #[test]
    fn error_is_invariant_under_common_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let make = |scale: Complex64| {
            let mut ea = CMatrix::zeros(3, 3);
            let mut eb = CMatrix::zeros(3, 3);
            let mut r2 = ChaCha8Rng::seed_from_u64(99);
            for i in 0..3 {
                for j in 0..3 {
                    ea.set(
                        i,
                        j,
                        c(r2.gen_range(-1.0..1.0), r2.gen_range(-1.0..1.0)) * scale,
                    );
                    eb.set(
                        i,
                        j,
                        c(r2.gen_range(-1.0..1.0), r2.gen_range(-1.0..1.0)) * scale,
                    );
                }
            }
            (channel_of(ea), channel_of(eb))
        };
        let (a0, b0) = make(c(1.0, 0.0));
        let base = channel_error(&a0, &b0).unwrap();
        for _ in 0..5 {
            let scale = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if scale.norm() < 1e-3 {
                continue;
            }
            let (a, b) = make(scale);
            let report = channel_error(&a, &b).unwrap();
            assert!((report.raw_error_pct - base.raw_error_pct).abs() < 1e-12 * base.raw_error_pct);
            assert!(
                (report.aligned_error_pct - base.aligned_error_pct).abs()
                    < 1e-12 * base.aligned_error_pct.max(1.0)
            );
        }
    }

    #[test]
    fn analytic_alignment_beats_one_degree_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=5);
            let mut ea = CMatrix::zeros(n, m);
            let mut eb = CMatrix::zeros(n, m);
            for i in 0..n {
                for j in 0..m {
                    ea.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                    eb.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                }
            }
            let a = channel_of(ea.clone());
            let b = channel_of(eb.clone());
            let report = channel_error(&a, &b).unwrap();
            let ref_norm = eb.fro_norm();
            for k in 0..360 {
                let theta = (k as f64).to_radians();
                let err = 100.0
                    * ea.scaled(Complex64::from_polar(1.0, -theta))
                        .sub(&eb)
                        .fro_norm()
                    / ref_norm;
                assert!(
                    report.aligned_error_pct <= err + 1e-12,
                    "analytic {} vs grid {} at {}°",
                    report.aligned_error_pct,
                    err,
                    k
                );
            }
        }
    }

    #[test]
    fn error_requires_matching_dims_and_pair() {
        let a = channel_of(CMatrix::identity(2));
        let b = channel_of(CMatrix::identity(3));
        assert!(channel_error(&a, &b).is_err());
        let mut b2 = channel_of(CMatrix::identity(2));
        b2.pair = ("TX".into(), "OTHER".into());
        assert!(channel_error(&a, &b2).is_err());
        let zero = channel_of(CMatrix::zeros(2, 2));
        assert!(channel_error(&a, &zero).is_err());
    }

    fn los_sweep_config(distances: Vec<f64>) -> SweepConfig {
        let scene = Scene {
            max_order: 0,
            ..Scene::default_scene()
        };
        let y = Vec3::new(0.0, 1.0, 0.0);
        SweepConfig {
            scene,
            distances_m: distances,
            tx_array: ArrayConfig::new(4, 0.5, y, Vec3::ZERO).unwrap(),
            rx_array: ArrayConfig::new(4, 0.5, y, Vec3::ZERO).unwrap(),
            top_l: None,
            snr_db: default_snr_grid_db(),
            normalization: Normalization::Frobenius,
            drop_los: false,
            full_amplitude: FullAmplitude::PerElement,
        }
    }

    #[test]
    fn single_distance_sweep_matches_direct_composition() {
        let config = los_sweep_config(vec![25.0]);
        let points = distance_sweep(&config).unwrap();
        assert_eq!(points.len(), 1);
        let p = &points[0];
        assert_eq!(p.distance_m, 25.0);
        assert_eq!(p.error.los, Some(true));

        // recompute by hand through the library surface
        let rx_pos = Vec3::new(25.0, 10.0, 10.0);
        let scene = Scene {
            rx_list: vec![("RX1".into(), rx_pos)],
            ..config.scene.clone()
        };
        let (record, paths) = trace_pair_with_paths(&scene, "RX1").unwrap();
        let tx_cfg = config.tx_array.at(scene.tx);
        let rx_cfg = config.rx_array.at(rx_pos);
        let geo = geometric_channel(&record, &tx_cfg, &rx_cfg, record.rays.len());
        let full = full_array_channel(
            &paths,
            &tx_cfg,
            &rx_cfg,
            scene.frequency_hz,
            FullAmplitude::PerElement,
            ("TX", "RX1"),
        )
        .unwrap();
        let direct = channel_error(&geo, &full).unwrap();
        assert_eq!(p.error.raw_error_pct, direct.raw_error_pct);
        assert_eq!(p.error.aligned_error_pct, direct.aligned_error_pct);
    }

    #[test]
    fn los_only_sweep_errors_decrease_and_respect_bound() {
        let config = los_sweep_config(vec![1.0, 10.0, 100.0]);
        let points = distance_sweep(&config).unwrap();
        assert_eq!(points.len(), 3);
        for w in points.windows(2) {
            assert!(
                w[1].error.aligned_error_pct < w[0].error.aligned_error_pct,
                "aligned error must strictly decrease on the LOS ladder"
            );
        }
        for p in &points {
            assert!(p.error.aligned_error_pct / 100.0 <= p.fresnel_bound * (1.0 + 1e-6));
        }
    }

    #[test]
    fn sweep_rejects_unsorted_distances() {
        let config = los_sweep_config(vec![10.0, 5.0]);
        assert!(distance_sweep(&config).is_err());
        let config = los_sweep_config(vec![]);
        assert!(distance_sweep(&config).is_err());
        let config = los_sweep_config(vec![-1.0, 5.0]);
        assert!(distance_sweep(&config).is_err());
    }

    #[test]
    fn csv_emitters_write_expected_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let config = los_sweep_config(vec![5.0, 50.0]);
        let points = distance_sweep(&config).unwrap();

        let sweep_path = dir.path().join("sweep.csv");
        write_sweep_csv(&points, &sweep_path).unwrap();
        let text = std::fs::read_to_string(&sweep_path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "pair,distance_m,los,raw_error_pct,aligned_error_pct,fresnel_bound_pct"
        );
        assert_eq!(lines.count(), 2);

        let err_path = dir.path().join("errors.csv");
        write_errors_csv(
            &points.iter().map(|p| p.error.clone()).collect::<Vec<_>>(),
            &err_path,
        )
        .unwrap();
        let text = std::fs::read_to_string(&err_path).unwrap();
        assert!(text.starts_with("pair,distance_m,los,raw_error_pct,aligned_error_pct\n"));
        assert!(text.contains("TX:RX1,5,true,"));

        let cap_path = dir.path().join("capacity.csv");
        let curves: Vec<CapacityCurve> = points
            .iter()
            .flat_map(|p| [p.capacity_geometric.clone(), p.capacity_full.clone()])
            .collect();
        write_capacity_csv(&curves, &cap_path).unwrap();
        let text = std::fs::read_to_string(&cap_path).unwrap();
        // 2 distances × 2 methods × 9 SNR points + header
        assert_eq!(text.lines().count(), 1 + 2 * 2 * 9);
        assert!(text.contains("TX:RX1,geometric,-10,"));
        assert!(text.contains("TX:RX1,full,30,"));
    }
}
