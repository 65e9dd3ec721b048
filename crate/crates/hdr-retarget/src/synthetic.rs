//! Seeded synthetic HDR scenes and bracketed exposure stacks.
//!
//! Used by the examples and the acceptance tests so the crate is fully
//! exercisable without shipping photographs. The generated radiance maps
//! contain structured bright and dark regions whose texture only survives
//! in some of the exposures, which is exactly the situation the stack
//! strategies are built for.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::Grid;
use crate::stack_io::{ImageStack, Rgb, RgbImage};

/// Scene radiance in linear units; values span several orders of
/// magnitude across bright and dark regions.
pub fn radiance_scene(width: usize, height: usize, seed: u64) -> Grid<Rgb> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // background: smooth horizontal illumination gradient
    let base_lo = 0.02 + rng.gen::<f64>() * 0.02;
    let base_hi = 0.3 + rng.gen::<f64>() * 0.2;

    // a bright window-like region with fine texture, and a dark region
    // with its own texture; each exposure clips one of them away
    let bright = region(&mut rng, width, height);
    let dark = region(&mut rng, width, height);
    let bright_level = 4.0 + rng.gen::<f64>() * 4.0;
    let dark_level = 0.004 + rng.gen::<f64>() * 0.004;
    let freq_b = 0.5 + rng.gen::<f64>() * 0.6;
    let freq_d = 0.5 + rng.gen::<f64>() * 0.6;
    let tint: [f64; 3] = [
        0.9 + rng.gen::<f64>() * 0.1,
        0.9 + rng.gen::<f64>() * 0.1,
        0.9 + rng.gen::<f64>() * 0.1,
    ];

    // perfectly flat left margin: like a clear sky, it is the first thing
    // every strategy carves away, and carves identically
    let margin = (width as f64 * 0.12) as usize;

    Grid::from_fn(width, height, |x, y| {
        let (xf, yf) = (x as f64, y as f64);
        if x < margin {
            return [base_lo * tint[0], base_lo * tint[1], base_lo * tint[2]];
        }
        let t = (xf - margin as f64) / (width - 1 - margin) as f64;
        let mut l = base_lo + (base_hi - base_lo) * t;
        // mild mid-tone texture outside the margin
        l *= 1.0 + 0.15 * ((xf * 0.35).sin() * (yf * 0.27).cos());
        if bright.contains(x, y) {
            let t = 1.0 + 0.5 * ((xf * freq_b).sin() + (yf * freq_b * 0.8).cos());
            l = bright_level * t.max(0.1);
        } else if dark.contains(x, y) {
            let t = 1.0 + 0.6 * ((xf * freq_d).cos() + (yf * freq_d * 1.1).sin());
            l = dark_level * t.max(0.1);
        }
        [l * tint[0], l * tint[1], l * tint[2]]
    })
}

#[derive(Debug, Clone, Copy)]
struct Region {
    x0: usize,
    y0: usize,
    x1: usize,
    y1: usize,
}

impl Region {
    fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }
}

fn region(rng: &mut ChaCha8Rng, width: usize, height: usize) -> Region {
    let w = width / 4 + rng.gen_range(0..width / 4).max(1);
    let h = height / 4 + rng.gen_range(0..height / 4).max(1);
    // keep the structured regions off the smooth left margin
    let lo = (width / 5).min(width - w - 1);
    let x0 = rng.gen_range(lo..width - w);
    let y0 = rng.gen_range(0..height - h);
    Region {
        x0,
        y0,
        x1: x0 + w,
        y1: y0 + h,
    }
}

/// Simulates one LDR exposure of a radiance map: scale by the exposure
/// factor, clip to [0, 1], then apply gamma-2.2 encoding.
pub fn expose(radiance: &Grid<Rgb>, exposure: f64) -> RgbImage {
    radiance.map(|px| {
        let mut out = [0.0; 3];
        for (o, &v) in out.iter_mut().zip(&px) {
            *o = (v * exposure).clamp(0.0, 1.0).powf(1.0 / 2.2);
        }
        out
    })
}

/// Default exposure factors spanning the generated radiance range.
pub const DEFAULT_EXPOSURES: [f64; 3] = [0.25, 2.0, 16.0];

/// A seeded bracketed stack of the synthetic scene.
pub fn bracketed_stack(width: usize, height: usize, seed: u64) -> ImageStack {
    let radiance = radiance_scene(width, height, seed);
    let images = DEFAULT_EXPOSURES
        .iter()
        .map(|&t| expose(&radiance, t))
        .collect();
    let labels = DEFAULT_EXPOSURES
        .iter()
        .map(|t| format!("exposure_{t}"))
        .collect();
    ImageStack::new(images, labels).expect("generated stack is always consistent")
}
