//! Uniform linear array geometry and steering vectors.
//!
//! Conventions fixed here and relied on by the channel constructions:
//!
//! * azimuth is measured from +x in the xy-plane, elevation from the
//!   horizontal plane, so the unit vector of a direction is
//!   `(cos el · cos az, cos el · sin az, sin el)`;
//! * steering component k is `(1/√n) · exp(-j·(2π/λ)·<p_k - reference, u>)`
//!   with `u` the propagation direction (away from TX for departure,
//!   toward RX for arrival);
//! * element 0 sits at the array's reference point and serves as the
//!   phase reference.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Uniform linear array: `n_elements` isotropic elements spaced
/// `spacing_wl` wavelengths apart along `axis`, element 0 at `reference`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayConfig {
    pub n_elements: usize,
    pub spacing_wl: f64,
    pub axis: Vec3,
    pub reference: Vec3,
}

impl ArrayConfig {
    /// Validates the ULA invariants: n ≥ 1, spacing > 0, |axis| = 1.
    pub fn new(n_elements: usize, spacing_wl: f64, axis: Vec3, reference: Vec3) -> Result<Self> {
        if n_elements < 1 {
            return Err(Error::Arg("array needs at least one element".into()));
        }
        if !spacing_wl.is_finite() || spacing_wl <= 0.0 {
            return Err(Error::Arg(format!(
                "element spacing must be positive, got {spacing_wl}"
            )));
        }
        if (axis.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Arg(format!(
                "array axis must be a unit vector, |axis| = {}",
                axis.norm()
            )));
        }
        Ok(ArrayConfig {
            n_elements,
            spacing_wl,
            axis,
            reference,
        })
    }

    /// Full aperture (distance from first to last element) in meters.
    pub fn aperture_m(&self, wavelength_m: f64) -> f64 {
        (self.n_elements - 1) as f64 * self.spacing_wl * wavelength_m
    }

    /// Same array geometry anchored at a different reference point.
    pub fn at(&self, reference: Vec3) -> ArrayConfig {
        ArrayConfig {
            reference,
            ..self.clone()
        }
    }

    /// Parses the CLI descriptor `ula:<n>:<spacing_wl>:<axis>` where axis is
    /// one of `x`, `y`, `z` or `<ux,uy,uz>`. The reference point is the
    /// origin; anchor with [`ArrayConfig::at`].
    pub fn parse_descriptor(s: &str) -> Result<ArrayConfig> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 || parts[0] != "ula" {
            return Err(Error::Arg(format!(
                "array descriptor must be `ula:<n>:<spacing_wl>:<axis>`, got `{s}`"
            )));
        }
        let n: usize = parts[1]
            .parse()
            .map_err(|_| Error::Arg(format!("bad element count `{}` in `{s}`", parts[1])))?;
        let spacing: f64 = parts[2]
            .parse()
            .map_err(|_| Error::Arg(format!("bad spacing `{}` in `{s}`", parts[2])))?;
        let axis = match parts[3] {
            "x" => Vec3::new(1.0, 0.0, 0.0),
            "y" => Vec3::new(0.0, 1.0, 0.0),
            "z" => Vec3::new(0.0, 0.0, 1.0),
            other => {
                let inner = other
                    .strip_prefix('<')
                    .and_then(|t| t.strip_suffix('>'))
                    .ok_or_else(|| Error::Arg(format!("bad axis `{other}` in `{s}`")))?;
                let comps: Vec<f64> = inner
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Arg(format!("bad axis `{other}` in `{s}`")))?;
                if comps.len() != 3 {
                    return Err(Error::Arg(format!("axis needs 3 components in `{s}`")));
                }
                Vec3::new(comps[0], comps[1], comps[2])
                    .normalized()
                    .ok_or_else(|| Error::Arg(format!("axis must be nonzero in `{s}`")))?
            }
        };
        ArrayConfig::new(n, spacing, axis, Vec3::ZERO)
    }
}

/// A propagation direction given as azimuth/elevation in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    az_rad: f64,
    el_rad: f64,
}

impl Direction {
    /// Azimuth is wrapped into (-π, π]; elevation must lie in [-π/2, π/2].
    pub fn new(az_rad: f64, el_rad: f64) -> Result<Direction> {
        if !(-PI / 2.0..=PI / 2.0).contains(&el_rad) {
            return Err(Error::Arg(format!(
                "elevation {el_rad} rad outside [-pi/2, pi/2]"
            )));
        }
        let mut az = az_rad.rem_euclid(2.0 * PI); // [0, 2π)
        if az > PI {
            az -= 2.0 * PI;
        }
        Ok(Direction { az_rad: az, el_rad })
    }

    pub fn from_degrees(az_deg: f64, el_deg: f64) -> Result<Direction> {
        Direction::new(az_deg.to_radians(), el_deg.to_radians())
    }

    /// Direction of a (nonzero) vector.
    pub fn from_vector(v: Vec3) -> Result<Direction> {
        let u = v
            .normalized()
            .ok_or_else(|| Error::Arg("zero vector has no direction".into()))?;
        let el = u.z.clamp(-1.0, 1.0).asin();
        let az = if u.x == 0.0 && u.y == 0.0 {
            0.0
        } else {
            u.y.atan2(u.x)
        };
        Direction::new(az, el)
    }

    pub fn az_rad(&self) -> f64 {
        self.az_rad
    }

    pub fn el_rad(&self) -> f64 {
        self.el_rad
    }

    pub fn az_deg(&self) -> f64 {
        self.az_rad.to_degrees()
    }

    pub fn el_deg(&self) -> f64 {
        self.el_rad.to_degrees()
    }

    /// Unit vector (cos el · cos az, cos el · sin az, sin el).
    pub fn unit_vector(&self) -> Vec3 {
        let (sa, ca) = self.az_rad.sin_cos();
        let (se, ce) = self.el_rad.sin_cos();
        Vec3::new(ce * ca, ce * sa, se)
    }
}

/// Element positions `reference + k · spacing_wl · λ · axis`, k = 0..n-1.
pub fn element_positions(cfg: &ArrayConfig, wavelength_m: f64) -> Vec<Vec3> {
    assert!(wavelength_m > 0.0, "wavelength must be positive");
    let step = cfg.spacing_wl * wavelength_m;
    (0..cfg.n_elements)
        .map(|k| cfg.reference + cfg.axis * (k as f64 * step))
        .collect()
}

/// Unit-norm steering vector of the array toward `dir`:
/// component k is `(1/√n) · exp(-j·(2π/λ)·<p_k - reference, u(dir)>)`.
pub fn steering_vector(cfg: &ArrayConfig, dir: Direction, wavelength_m: f64) -> Vec<Complex64> {
    assert!(wavelength_m > 0.0, "wavelength must be positive");
    let u = dir.unit_vector();
    let norm = 1.0 / (cfg.n_elements as f64).sqrt();
    // <p_k - reference, u> = k · spacing · λ · <axis, u>
    let phase_step = -2.0 * PI * cfg.spacing_wl * cfg.axis.dot(u);
    (0..cfg.n_elements)
        .map(|k| Complex64::from_polar(norm, phase_step * k as f64))
        .collect()
}
