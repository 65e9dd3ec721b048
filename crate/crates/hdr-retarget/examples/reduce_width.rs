//! Shrink a bracketed stack 30% in width with the Laplacian-weighted
//! aggregate strategy and save the fused result.
//!
//! Run with: cargo run --example reduce_width

use std::path::Path;

use hdr_retarget::{retarget, save_image, synthetic, Axis, FusionConfig, RetargetPlan, Strategy};

fn main() -> hdr_retarget::Result<()> {
    let out_dir = Path::new("target/examples");
    std::fs::create_dir_all(out_dir)?;

    let stack = synthetic::bracketed_stack(200, 150, 11);
    let target = (stack.width() as f64 * 0.7).round() as usize;
    let plan = RetargetPlan::new(Strategy::AggLaplacian, Axis::Horizontal, target);

    let out = retarget(&stack, &plan, &FusionConfig::default())?;
    let path = out_dir.join("reduced.png");
    save_image(&out.image, &path)?;
    println!(
        "carved {} seams ({} -> {} px wide), wrote {}",
        out.trace.steps.len(),
        stack.width(),
        out.image.width(),
        path.display()
    );
    Ok(())
}
