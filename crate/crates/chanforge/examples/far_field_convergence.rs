//! Far-field convergence of the plane-wave model.
//!
//! For a single line-of-sight path, the geometric channel converges to the
//! per-element reference as the distance grows. The phase-aligned error is
//! bounded by the aperture-driven plane-wave bound, which falls off as 1/d.
//!
//! ```bash
//! cargo run -p chanforge --example far_field_convergence
//! ```

use chanforge::analysis::channel_error;
use chanforge::array_geom::ArrayConfig;
use chanforge::canyon_tracer::{trace_pair_with_paths, Scene};
use chanforge::channel_synth::{
    fresnel_error_bound, full_array_channel, geometric_channel, FullAmplitude,
};
use chanforge::geom::Vec3;

fn main() {
    let array = ArrayConfig::parse_descriptor("ula:4:0.5:y").unwrap();
    let wavelength = chanforge::SPEED_OF_LIGHT_M_S / 60e9;
    println!(
        "single LOS path, 60 GHz, two 4-element λ/2 ULAs (aperture {:.1} mm each)",
        array.aperture_m(wavelength) * 1e3
    );
    println!(
        "{:>9} {:>16} {:>16} {:>8}",
        "d (m)", "aligned error %", "bound %", "margin"
    );
    for d in [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        let rx_pos = Vec3::new(d, 10.0, 10.0);
        let scene = Scene {
            rx_list: vec![("RX1".into(), rx_pos)],
            max_order: 0,
            ..Scene::default_scene()
        };
        let (record, paths) = trace_pair_with_paths(&scene, "RX1").unwrap();
        let tx_cfg = array.at(scene.tx);
        let rx_cfg = array.at(rx_pos);
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
        let bound = fresnel_error_bound(&tx_cfg, &rx_cfg, d, wavelength).unwrap();
        println!(
            "{d:>9.1} {:>16.5} {:>16.5} {:>7.1}x",
            report.aligned_error_pct,
            bound * 100.0,
            bound * 100.0 / report.aligned_error_pct
        );
    }
    println!("\nthe bound (and the error) scale as 1/distance once the arrays are small against d");
}
