//! Image-source ray tracing in the urban canyon.
//!
//! Traces the default scene's nearest receiver, printing every specular
//! path with its bounce sequence, geometry and gain, plus the diagnostics
//! the tracer is tested against (specular law, Fermat stationarity).
//!
//! ```bash
//! cargo run -p chanforge --example trace_canyon
//! ```

use chanforge::canyon_tracer::{
    enumerate_image_sequences, fermat_gradient_norm, specular_deviation_rad, trace_pair_with_paths,
    Scene,
};

fn main() {
    let scene = Scene::default_scene();
    println!(
        "canyon: walls y = {} and {} m, height {} m, ground {}, Γ = {:+.1}{:+.1}j, {} GHz",
        scene.wall_y0,
        scene.wall_y1,
        scene.wall_height_m,
        scene.ground,
        scene.refl_coeff.re,
        scene.refl_coeff.im,
        scene.frequency_hz / 1e9
    );
    for order in 0..=scene.max_order {
        println!(
            "  candidate reflection sequences of order {order}: {}",
            enumerate_image_sequences(&scene, order).len()
        );
    }

    let rx_id = &scene.rx_list[0].0;
    let (record, paths) = trace_pair_with_paths(&scene, rx_id).unwrap();
    println!(
        "\npair {}: {} valid paths, P_rx/P_tx = {:.3e}, mean ToA = {:.3} ns",
        record.pair_key(),
        record.rays.len(),
        record.p_rx_w / record.p_tx_w,
        record.mean_toa_s * 1e9
    );
    println!(
        "{:<22} {:>9} {:>9} {:>11} {:>9} {:>9}  diagnostics",
        "bounce sequence", "len (m)", "ToA (ns)", "|gain|", "AoD az°", "AoA az°"
    );
    for path in &paths {
        println!(
            "{:<22} {:>9.4} {:>9.3} {:>11.3e} {:>9.2} {:>9.2}  specular {:.1e} rad, fermat {:.1e}",
            format!("{:?}", path.plane_sequence()),
            path.length_m,
            path.length_m / chanforge::SPEED_OF_LIGHT_M_S * 1e9,
            path.gain.norm(),
            path.aod.az_deg(),
            path.aoa.az_deg(),
            specular_deviation_rad(path),
            fermat_gradient_norm(path),
        );
    }

    println!("\nper-ray record rows feed rays.csv; try the CLI:");
    println!("  chanforge trace --out rays.csv");
}
