//! Run every strategy on one scene and print the energy-preservation CSV
//! (average gradient energy per pixel of the fused preview after each
//! seam, plus a final summary row per strategy).
//!
//! Run with: cargo run --example compare_strategies

use hdr_retarget::{
    average_energy_per_pixel, energy_curve_csv, gradient_energy, retarget, synthetic,
    to_luminance, Axis, FusionConfig, RetargetPlan, Strategy, StrategyRun,
};

fn main() -> hdr_retarget::Result<()> {
    let stack = synthetic::bracketed_stack(120, 90, 42);
    let target = (stack.width() as f64 * 0.7).round() as usize;
    let fusion = FusionConfig::default();

    let mut runs = Vec::new();
    for strategy in Strategy::ALL {
        let plan = RetargetPlan::new(strategy, Axis::Horizontal, target);
        let out = retarget(&stack, &plan, &fusion)?;
        let final_energy = average_energy_per_pixel(&gradient_energy(&to_luminance(&out.image))?);
        runs.push(StrategyRun {
            strategy,
            trace: out.trace,
            final_energy,
        });
    }

    print!("{}", energy_curve_csv(&runs)?);
    Ok(())
}
