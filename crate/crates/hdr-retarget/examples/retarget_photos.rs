//! Retarget a real exposure stack from disk. Pass a directory of
//! registered PNG/JPEG exposures (or a manifest file) and an output path.
//!
//! Run with: cargo run --example retarget_photos -- <stack-dir> <out.png>

use hdr_retarget::{load_stack, retarget, save_image, Axis, FusionConfig, RetargetPlan, Strategy};

fn main() -> hdr_retarget::Result<()> {
    let mut args = std::env::args().skip(1);
    let (input, output) = match (args.next(), args.next()) {
        (Some(i), Some(o)) => (i, o),
        _ => {
            eprintln!("usage: retarget_photos <stack-dir-or-manifest> <out.png>");
            std::process::exit(2);
        }
    };

    let stack = load_stack(input.as_ref())?;
    let target = (stack.width() as f64 * 0.7).round() as usize;
    let plan = RetargetPlan::new(Strategy::AggLaplacian, Axis::Horizontal, target);
    let out = retarget(&stack, &plan, &FusionConfig::default())?;
    save_image(&out.image, output.as_ref())?;
    println!(
        "retargeted {} exposures {}x{} -> {}x{}, wrote {}",
        stack.len(),
        stack.width(),
        stack.height(),
        out.image.width(),
        out.image.height(),
        output
    );
    Ok(())
}
