//! Export per-exposure gradient-energy maps and the two aggregate energy
//! metrics as grayscale PNGs.
//!
//! Run with: cargo run --example export_energy_maps

use std::path::Path;

use hdr_retarget::{
    aggregate_energy_laplacian, aggregate_energy_weighted, gradient_energy, laplacian_map,
    render_energy_visualization, synthetic, to_luminance, weights_from_average_energy, EnergyMap,
};

fn main() -> hdr_retarget::Result<()> {
    let out_dir = Path::new("target/examples");
    std::fs::create_dir_all(out_dir)?;

    let stack = synthetic::bracketed_stack(200, 150, 3);

    let mut energies: Vec<EnergyMap> = Vec::new();
    let mut laplacians: Vec<EnergyMap> = Vec::new();
    for (i, img) in stack.images().iter().enumerate() {
        let lum = to_luminance(img);
        let e = gradient_energy(&lum)?;
        render_energy_visualization(&e, &out_dir.join(format!("energy_{i}.png")))?;
        laplacians.push(laplacian_map(&lum)?);
        energies.push(e);
    }

    let alphas = weights_from_average_energy(&energies)?;
    let avg = aggregate_energy_weighted(&energies, &alphas)?;
    render_energy_visualization(&avg, &out_dir.join("aggregate_avg.png"))?;

    let lap = aggregate_energy_laplacian(&energies, &laplacians)?;
    render_energy_visualization(&lap, &out_dir.join("aggregate_laplacian.png"))?;

    println!("wrote energy maps to {}", out_dir.display());
    Ok(())
}
