//! Uniform linear arrays and steering vectors.
//!
//! Shows the element layout of a ULA, the per-element phases of steering
//! vectors for broadside and endfire directions, and the Dirichlet-kernel
//! orthogonality between directions spaced by 2/N in sin(azimuth).
//!
//! ```bash
//! cargo run -p chanforge --example steering_patterns
//! ```

use chanforge::array_geom::{element_positions, steering_vector, ArrayConfig, Direction};
use chanforge::geom::Vec3;
use num_complex::Complex64;

fn main() {
    let wavelength = chanforge::SPEED_OF_LIGHT_M_S / 60e9;
    let cfg = ArrayConfig::parse_descriptor("ula:4:0.5:y").unwrap();

    println!(
        "4-element λ/2 ULA along y at 60 GHz (λ = {:.4} mm)",
        wavelength * 1e3
    );
    println!("element positions (mm):");
    for (k, p) in element_positions(&cfg, wavelength).iter().enumerate() {
        println!(
            "  element {k}: ({:.3}, {:.3}, {:.3})",
            p.x * 1e3,
            p.y * 1e3,
            p.z * 1e3
        );
    }
    println!("aperture: {:.3} mm\n", cfg.aperture_m(wavelength) * 1e3);

    for (label, az_deg) in [("broadside (az = 0°)", 0.0), ("endfire (az = 90°)", 90.0)] {
        let dir = Direction::from_degrees(az_deg, 0.0).unwrap();
        let a = steering_vector(&cfg, dir, wavelength);
        println!("steering vector, {label}:");
        for (k, z) in a.iter().enumerate() {
            println!(
                "  a[{k}] = {:+.4} {:+.4}j  (|a| = {:.4}, phase {:+7.2}°)",
                z.re,
                z.im,
                z.norm(),
                z.arg().to_degrees()
            );
        }
        println!();
    }

    println!("|a(0)^H a(az)| vs sin(az) — zeros at multiples of 2/N = 0.5:");
    let a0 = steering_vector(&cfg, Direction::new(0.0, 0.0).unwrap(), wavelength);
    for i in 0..=10 {
        let sin_az = i as f64 * 0.1;
        let dir = Direction::new(sin_az.asin(), 0.0).unwrap();
        let a = steering_vector(&cfg, dir, wavelength);
        let inner: Complex64 = a0.iter().zip(&a).map(|(x, y)| x.conj() * y).sum();
        let bar = "#".repeat((inner.norm() * 40.0).round() as usize);
        println!("  sin(az) = {sin_az:.1}: {:.4}  {bar}", inner.norm());
    }

    // the reference point only contributes a global phase
    let moved = cfg.at(Vec3::new(3.0, -2.0, 1.0));
    let dir = Direction::from_degrees(35.0, 10.0).unwrap();
    let a = steering_vector(&cfg, dir, wavelength);
    let b = steering_vector(&moved, dir, wavelength);
    let ratio = b[0] / a[0];
    println!(
        "\nafter translating the array reference: component ratio |r| = {:.12} (global phase only)",
        ratio.norm()
    );
}
