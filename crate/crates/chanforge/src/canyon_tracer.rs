//! Deterministic image-source ray tracer for an urban-canyon scene.
//!
//! The scene is two parallel walls (planes of constant y, infinite in x,
//! bounded in z by the wall height) plus an optional infinite ground plane
//! at z = 0. Specular paths are found by mirroring the transmitter through
//! a sequence of planes and intersecting the straight image-receiver line
//! with each plane in reverse. No diffraction, no obstruction testing; a
//! single complex reflection coefficient applies per bounce.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

use crate::array_geom::Direction;
use crate::canonical;
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::ray_model::{PairRecord, Ray};
use crate::SPEED_OF_LIGHT_M_S;

/// Names the reflecting planes of the canyon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneId {
    WallY0,
    WallY1,
    Ground,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PlaneAxis {
    Y,
    Z,
}

/// One reflecting plane: constant-y wall or the constant-z ground.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub id: PlaneId,
    axis: PlaneAxis,
    offset: f64,
}

impl Plane {
    fn wall(id: PlaneId, y: f64) -> Plane {
        Plane {
            id,
            axis: PlaneAxis::Y,
            offset: y,
        }
    }

    fn ground() -> Plane {
        Plane {
            id: PlaneId::Ground,
            axis: PlaneAxis::Z,
            offset: 0.0,
        }
    }

    /// Signed coordinate of `p` relative to the plane.
    fn signed_coord(&self, p: Vec3) -> f64 {
        match self.axis {
            PlaneAxis::Y => p.y - self.offset,
            PlaneAxis::Z => p.z - self.offset,
        }
    }

    /// Mirror image of `p` across the plane.
    pub fn mirror(&self, p: Vec3) -> Vec3 {
        match self.axis {
            PlaneAxis::Y => Vec3::new(p.x, 2.0 * self.offset - p.y, p.z),
            PlaneAxis::Z => Vec3::new(p.x, p.y, 2.0 * self.offset - p.z),
        }
    }

    /// Unit normal.
    pub fn normal(&self) -> Vec3 {
        match self.axis {
            PlaneAxis::Y => Vec3::new(0.0, 1.0, 0.0),
            PlaneAxis::Z => Vec3::new(0.0, 0.0, 1.0),
        }
    }

    /// Two orthonormal in-plane directions.
    pub fn in_plane_axes(&self) -> [Vec3; 2] {
        match self.axis {
            PlaneAxis::Y => [Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 1.0)],
            PlaneAxis::Z => [Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)],
        }
    }

    /// The plane point at in-plane coordinates (u, v).
    pub fn point_at(&self, u: f64, v: f64) -> Vec3 {
        let [eu, ev] = self.in_plane_axes();
        self.normal() * self.offset + eu * u + ev * v
    }
}

/// Urban-canyon scene description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub wall_y0: f64,
    pub wall_y1: f64,
    pub wall_height_m: f64,
    pub ground: bool,
    pub tx: Vec3,
    pub rx_list: Vec<(String, Vec3)>,
    pub frequency_hz: f64,
    pub refl_coeff: Complex64,
    pub max_order: usize,
}

impl Scene {
    /// Documented default: walls at y = 0 and y = 20 m, 40 m high, ground
    /// included, TX at (0, 10, 10), 60 GHz, Γ = -0.8, up to 2 bounces,
    /// ten receivers along the canyon axis from 5 m to 200 m.
    pub fn default_scene() -> Scene {
        let rx_list = (0..10)
            .map(|k| {
                let x = 5.0 + 195.0 * k as f64 / 9.0;
                (format!("RX{}", k + 1), Vec3::new(x, 10.0, 10.0))
            })
            .collect();
        Scene {
            wall_y0: 0.0,
            wall_y1: 20.0,
            wall_height_m: 40.0,
            ground: true,
            tx: Vec3::new(0.0, 10.0, 10.0),
            rx_list,
            frequency_hz: 60e9,
            refl_coeff: Complex64::new(-0.8, 0.0),
            max_order: 2,
        }
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT_M_S / self.frequency_hz
    }

    /// Reflecting planes in canonical order: wall y0, wall y1, then ground.
    pub fn planes(&self) -> Vec<Plane> {
        let mut planes = vec![
            Plane::wall(PlaneId::WallY0, self.wall_y0),
            Plane::wall(PlaneId::WallY1, self.wall_y1),
        ];
        if self.ground {
            planes.push(Plane::ground());
        }
        planes
    }

    fn inside_canyon(&self, p: Vec3) -> bool {
        p.y > self.wall_y0 && p.y < self.wall_y1 && p.z > 0.0 && p.z < self.wall_height_m
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Scene(msg));
        if !self.wall_y0.is_finite() || !self.wall_y1.is_finite() || self.wall_y0 >= self.wall_y1 {
            return fail(format!(
                "wall_y0 ({}) must be below wall_y1 ({})",
                self.wall_y0, self.wall_y1
            ));
        }
        if !self.wall_height_m.is_finite() || self.wall_height_m <= 0.0 {
            return fail(format!(
                "wall_height_m must be positive, got {}",
                self.wall_height_m
            ));
        }
        if !self.frequency_hz.is_finite() || self.frequency_hz <= 0.0 {
            return fail(format!(
                "frequency_hz must be positive, got {}",
                self.frequency_hz
            ));
        }
        if self.refl_coeff.norm() > 1.0 {
            return fail(format!(
                "reflection coefficient magnitude {} exceeds 1",
                self.refl_coeff.norm()
            ));
        }
        if !self.inside_canyon(self.tx) {
            return fail(format!(
                "tx {:?} is not strictly inside the canyon",
                self.tx.as_array()
            ));
        }
        if self.rx_list.is_empty() {
            return fail("scene needs at least one receiver".into());
        }
        let mut seen = std::collections::HashSet::new();
        for (id, pos) in &self.rx_list {
            if id.is_empty() || !seen.insert(id.clone()) {
                return fail(format!("receiver id `{id}` is empty or duplicated"));
            }
            if !self.inside_canyon(*pos) {
                return fail(format!(
                    "rx `{id}` {:?} is not strictly inside the canyon",
                    pos.as_array()
                ));
            }
        }
        Ok(())
    }

    pub fn rx_position(&self, rx_id: &str) -> Result<Vec3> {
        self.rx_list
            .iter()
            .find(|(id, _)| id == rx_id)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::Scene(format!("receiver `{rx_id}` not present in scene")))
    }

    pub fn from_json_file(path: &Path) -> Result<Scene> {
        let json: SceneJson = canonical::read_json_file(path)?;
        let scene = json.into_scene();
        scene.validate()?;
        Ok(scene)
    }

    pub fn to_json_file(&self, path: &Path) -> Result<()> {
        canonical::write_json_file(path, &SceneJson::from_scene(self))
    }

    /// Canonical JSON form of the scene (the `from_json_file` schema);
    /// stable input for hashing and fingerprints.
    pub fn canonical_json(&self) -> String {
        canonical::to_canonical_json(&SceneJson::from_scene(self))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneRxJson {
    id: String,
    pos: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneJson {
    wall_y0: f64,
    wall_y1: f64,
    wall_height_m: f64,
    ground: bool,
    tx: [f64; 3],
    rx: Vec<SceneRxJson>,
    frequency_hz: f64,
    refl_coeff: [f64; 2],
    max_order: usize,
}

impl SceneJson {
    fn into_scene(self) -> Scene {
        Scene {
            wall_y0: self.wall_y0,
            wall_y1: self.wall_y1,
            wall_height_m: self.wall_height_m,
            ground: self.ground,
            tx: Vec3::from_array(self.tx),
            rx_list: self
                .rx
                .into_iter()
                .map(|r| (r.id, Vec3::from_array(r.pos)))
                .collect(),
            frequency_hz: self.frequency_hz,
            refl_coeff: Complex64::new(self.refl_coeff[0], self.refl_coeff[1]),
            max_order: self.max_order,
        }
    }

    fn from_scene(scene: &Scene) -> SceneJson {
        SceneJson {
            wall_y0: scene.wall_y0,
            wall_y1: scene.wall_y1,
            wall_height_m: scene.wall_height_m,
            ground: scene.ground,
            tx: scene.tx.as_array(),
            rx: scene
                .rx_list
                .iter()
                .map(|(id, p)| SceneRxJson {
                    id: id.clone(),
                    pos: p.as_array(),
                })
                .collect(),
            frequency_hz: scene.frequency_hz,
            refl_coeff: [scene.refl_coeff.re, scene.refl_coeff.im],
            max_order: scene.max_order,
        }
    }
}

/// One specular path with its full geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedPath {
    /// Reflecting planes in bounce order (empty for line of sight).
    pub planes: Vec<Plane>,
    /// TX, interaction points in order, RX.
    pub points: Vec<Vec3>,
    pub length_m: f64,
    pub aod: Direction,
    pub aoa: Direction,
    /// Γ^order · (λ/(4π·length)) · exp(-j·2π·length/λ).
    pub gain: Complex64,
    /// Γ^order, kept for per-element re-evaluation of the path.
    pub reflection_product: Complex64,
}

impl TracedPath {
    pub fn order(&self) -> usize {
        self.planes.len()
    }

    pub fn plane_sequence(&self) -> Vec<PlaneId> {
        self.planes.iter().map(|p| p.id).collect()
    }

    /// Mirror of an arbitrary TX-side point through this path's planes, in
    /// bounce order. The distance from this image to an RX-side point is the
    /// exact unfolded path length through the same reflection sequence.
    pub fn image_of(&self, p: Vec3) -> Vec3 {
        self.planes.iter().fold(p, |acc, plane| plane.mirror(acc))
    }

    /// Sum of polyline segment lengths.
    pub fn segment_length_sum(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }
}

/// All plane sequences of the given bounce order with no immediate
/// repetition, in lexicographic order of the scene's plane list. Order 0
/// yields the single empty sequence (the line-of-sight candidate).
pub fn enumerate_image_sequences(scene: &Scene, order: usize) -> Vec<Vec<Plane>> {
    let planes = scene.planes();
    let mut out = Vec::new();
    let mut current: Vec<Plane> = Vec::with_capacity(order);
    fn recurse(
        planes: &[Plane],
        order: usize,
        current: &mut Vec<Plane>,
        out: &mut Vec<Vec<Plane>>,
    ) {
        if current.len() == order {
            out.push(current.clone());
            return;
        }
        for plane in planes {
            if current.last().map(|p| p.id) == Some(plane.id) {
                continue;
            }
            current.push(*plane);
            recurse(planes, order, current, out);
            current.pop();
        }
    }
    recurse(&planes, order, &mut current, &mut out);
    out
}

/// Constructs the specular path for one plane sequence via the image-source
/// method. Returns `None` when the unfolded line misses a plane segment or
/// an interaction point falls outside the wall extents.
pub fn specular_path(scene: &Scene, rx: Vec3, seq: &[Plane]) -> Option<TracedPath> {
    // forward mirror chain: images[j] = tx mirrored through seq[0..j]
    let mut images = Vec::with_capacity(seq.len() + 1);
    images.push(scene.tx);
    for plane in seq {
        images.push(plane.mirror(*images.last().unwrap()));
    }

    // backward recovery of interaction points
    let mut interactions = vec![Vec3::ZERO; seq.len()];
    let mut target = rx;
    for (j, plane) in seq.iter().enumerate().rev() {
        let image = images[j + 1];
        let c_image = plane.signed_coord(image);
        let c_target = plane.signed_coord(target);
        // the segment must properly cross the plane
        if c_image * c_target >= 0.0 {
            return None;
        }
        let t = c_image / (c_image - c_target);
        if !(t > 0.0 && t < 1.0) {
            return None;
        }
        let point = image + (target - image) * t;
        if matches!(plane.id, PlaneId::WallY0 | PlaneId::WallY1)
            && !(0.0..=scene.wall_height_m).contains(&point.z)
        {
            return None;
        }
        interactions[j] = point;
        target = point;
    }

    let mut points = Vec::with_capacity(seq.len() + 2);
    points.push(scene.tx);
    points.extend_from_slice(&interactions);
    points.push(rx);

    let length_m = images.last().unwrap().distance(rx);
    if !length_m.is_finite() || length_m <= 0.0 {
        return None;
    }
    let aod = Direction::from_vector(points[1] - points[0]).ok()?;
    let aoa = Direction::from_vector(points[points.len() - 1] - points[points.len() - 2]).ok()?;

    let wavelength = scene.wavelength_m();
    let reflection_product = scene.refl_coeff.powu(seq.len() as u32);
    let amplitude = wavelength / (4.0 * PI * length_m);
    let gain =
        reflection_product * Complex64::from_polar(amplitude, -2.0 * PI * length_m / wavelength);

    Some(TracedPath {
        planes: seq.to_vec(),
        points,
        length_m,
        aod,
        aoa,
        gain,
        reflection_product,
    })
}

/// All valid specular paths to `rx` for orders 0..=max_order, sorted by
/// |gain| descending with ties broken by delay ascending.
pub fn trace_paths(scene: &Scene, rx: Vec3) -> Vec<TracedPath> {
    let mut paths = Vec::new();
    for order in 0..=scene.max_order {
        for seq in enumerate_image_sequences(scene, order) {
            if let Some(path) = specular_path(scene, rx, &seq) {
                paths.push(path);
            }
        }
    }
    paths.sort_by(|a, b| {
        b.gain
            .norm()
            .partial_cmp(&a.gain.norm())
            .expect("gains are finite")
            .then(
                a.length_m
                    .partial_cmp(&b.length_m)
                    .expect("lengths are finite"),
            )
    });
    paths
}

/// Traces one receiver and assembles the pair record the post-processing
/// stage consumes. Transmit power is fixed at 1 W.
pub fn trace_pair(scene: &Scene, rx_id: &str) -> Result<PairRecord> {
    let (record, _) = trace_pair_with_paths(scene, rx_id)?;
    Ok(record)
}

/// As [`trace_pair`], additionally returning the traced geometry in the
/// same order as the record's rays.
pub fn trace_pair_with_paths(scene: &Scene, rx_id: &str) -> Result<(PairRecord, Vec<TracedPath>)> {
    let rx = scene.rx_position(rx_id)?;
    let paths = trace_paths(scene, rx);
    let rays = paths.iter().map(path_to_ray).collect();
    let record = PairRecord::from_rays("TX", rx_id, rays, 1.0, scene.frequency_hz)?;
    Ok((record, paths))
}

fn path_to_ray(path: &TracedPath) -> Ray {
    let inner = &path.points[1..path.points.len() - 1];
    Ray {
        gain: path.gain,
        delay_s: path.length_m / SPEED_OF_LIGHT_M_S,
        aod_az_deg: path.aod.az_deg(),
        aod_el_deg: path.aod.el_deg(),
        aoa_az_deg: path.aoa.az_deg(),
        aoa_el_deg: path.aoa.el_deg(),
        n_bounces: path.order(),
        path_length_m: Some(path.length_m),
        interactions: if inner.is_empty() {
            None
        } else {
            Some(inner.to_vec())
        },
    }
}

/// Largest deviation from the specular law over the path's bounces, in
/// radians, measured on the recovered polyline (not on the construction).
pub fn specular_deviation_rad(path: &TracedPath) -> f64 {
    let mut worst: f64 = 0.0;
    for (j, plane) in path.planes.iter().enumerate() {
        let q = path.points[j + 1];
        let incident = (q - path.points[j]).normalized().expect("nonzero segment");
        let outgoing = (path.points[j + 2] - q)
            .normalized()
            .expect("nonzero segment");
        let n = plane.normal();
        let reflected = incident - n * (2.0 * incident.dot(n));
        // chord-based angle: acos of a near-unit dot cannot resolve 1e-9 rad
        let chord = (reflected - outgoing).norm();
        worst = worst.max(2.0 * (0.5 * chord).clamp(-1.0, 1.0).asin());
    }
    worst
}

/// Euclidean norm of the numerical gradient of total path length with
/// respect to in-plane perturbations of every interaction point
/// (Fermat's-principle stationarity diagnostic). Central differences; the
/// step follows the shortest segment so short paths stay resolvable.
pub fn fermat_gradient_norm(path: &TracedPath) -> f64 {
    let min_seg = path
        .points
        .windows(2)
        .map(|w| w[0].distance(w[1]))
        .fold(f64::INFINITY, f64::min);
    let h = 1e-4 * min_seg.clamp(1e-3, 1.0);
    let length_with = |idx: usize, offset: Vec3| -> f64 {
        let mut pts = path.points.clone();
        pts[idx + 1] = pts[idx + 1] + offset;
        pts.windows(2).map(|w| w[0].distance(w[1])).sum()
    };
    let mut sq_sum = 0.0;
    for (j, plane) in path.planes.iter().enumerate() {
        for axis in plane.in_plane_axes() {
            let plus = length_with(j, axis * h);
            let minus = length_with(j, axis * (-h));
            let g = (plus - minus) / (2.0 * h);
            sq_sum += g * g;
        }
    }
    sq_sum.sqrt()
}
