//! Enlarge a bracketed stack 70% in width. Seams are planned by simulated
//! successive removal so no seam is ever duplicated.
//!
//! Run with: cargo run --example enlarge_width

use std::path::Path;

use hdr_retarget::{
    plan_insertion_seams, retarget, save_image, synthetic, Axis, FusionConfig, RetargetPlan,
    Strategy,
};

fn main() -> hdr_retarget::Result<()> {
    let out_dir = Path::new("target/examples");
    std::fs::create_dir_all(out_dir)?;

    let stack = synthetic::bracketed_stack(160, 120, 23);
    let target = (stack.width() as f64 * 1.7).round() as usize;
    let plan = RetargetPlan::new(Strategy::AggAvg, Axis::Horizontal, target);
    let fusion = FusionConfig::default();

    let seams = plan_insertion_seams(&stack, &plan, &fusion)?;
    println!("planned {} pairwise-disjoint insertion seams", seams.len());

    let out = retarget(&stack, &plan, &fusion)?;
    let path = out_dir.join("enlarged.png");
    save_image(&out.image, &path)?;
    println!(
        "{} -> {} px wide, wrote {}",
        stack.width(),
        out.image.width(),
        path.display()
    );
    Ok(())
}
