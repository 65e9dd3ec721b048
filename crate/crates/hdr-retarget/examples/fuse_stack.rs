//! Fuse a synthetic bracketed stack into one high-contrast LDR image.
//!
//! Run with: cargo run --example fuse_stack

use std::path::Path;

use hdr_retarget::{fuse_stack, save_image, synthetic, FusionConfig};

fn main() -> hdr_retarget::Result<()> {
    let out_dir = Path::new("target/examples");
    std::fs::create_dir_all(out_dir)?;

    let stack = synthetic::bracketed_stack(240, 180, 7);
    for (img, label) in stack.images().iter().zip(stack.labels()) {
        save_image(img, &out_dir.join(format!("{label}.png")))?;
    }

    let fused = fuse_stack(&stack, &FusionConfig::default())?;
    let path = out_dir.join("fused.png");
    save_image(&fused, &path)?;
    println!("wrote {} and the input exposures next to it", path.display());
    Ok(())
}
