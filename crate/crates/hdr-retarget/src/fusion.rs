//! Exposure fusion: quality-weighted Laplacian-pyramid blending of an
//! exposure stack into a single high-contrast LDR image.

use rayon::prelude::*;

use crate::energy::laplacian_abs;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::stack_io::{ImageStack, Rgb, RgbImage, to_luminance};

/// Floor applied to raw quality weights so flat stacks stay well defined.
pub const WEIGHT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct FusionConfig {
    pub exponent_contrast: f64,
    pub exponent_saturation: f64,
    pub exponent_wellexposed: f64,
    pub wellexposed_sigma: f64,
    /// Pyramid depth; `None` selects floor(log2(min(W, H))).
    pub pyramid_levels: Option<usize>,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            exponent_contrast: 1.0,
            exponent_saturation: 1.0,
            exponent_wellexposed: 1.0,
            wellexposed_sigma: 0.2,
            pyramid_levels: None,
        }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.wellexposed_sigma <= 0.0 {
            return Err(Error::InvalidConfig("sigma must be positive".into()));
        }
        if [
            self.exponent_contrast,
            self.exponent_saturation,
            self.exponent_wellexposed,
        ]
        .iter()
        .any(|e| *e < 0.0 || !e.is_finite())
        {
            return Err(Error::InvalidConfig(
                "fusion exponents must be finite and nonnegative".into(),
            ));
        }
        if self.pyramid_levels == Some(0) {
            return Err(Error::InvalidConfig("pyramid_levels must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-image quality weight maps.
pub type WeightMapStack = Vec<Grid<f64>>;

/// Unnormalized Mertens-style quality weights: contrast (|Laplacian| of
/// luminance), saturation (per-pixel std-dev over R, G, B) and
/// well-exposedness (Gaussian bump around mid-gray per channel), each
/// raised to its configured exponent, floored at [`WEIGHT_FLOOR`].
pub fn quality_weights(stack: &ImageStack, cfg: &FusionConfig) -> WeightMapStack {
    stack
        .images()
        .par_iter()
        .map(|img| quality_weight(img, cfg))
        .collect()
}

fn quality_weight(img: &RgbImage, cfg: &FusionConfig) -> Grid<f64> {
    let contrast = laplacian_abs(&to_luminance(img));
    let two_sigma_sq = 2.0 * cfg.wellexposed_sigma * cfg.wellexposed_sigma;
    Grid::from_fn(img.width(), img.height(), |x, y| {
        let [r, g, b] = img.get(x, y);
        let mean = (r + g + b) / 3.0;
        let sat = (((r - mean).powi(2) + (g - mean).powi(2) + (b - mean).powi(2)) / 3.0).sqrt();
        let wexp = [r, g, b]
            .iter()
            .map(|c| (-((c - 0.5).powi(2)) / two_sigma_sq).exp())
            .product::<f64>();
        let w = contrast.get(x, y).powf(cfg.exponent_contrast)
            * sat.powf(cfg.exponent_saturation)
            * wexp.powf(cfg.exponent_wellexposed);
        w.max(WEIGHT_FLOOR)
    })
}

/// Rescales the weights to a per-pixel partition of unity; pixels where
/// every weight sits at the floor become uniform 1/N.
pub fn normalize_weights(weights: &WeightMapStack) -> Result<WeightMapStack> {
    if weights.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = weights.len();
    let (w, h) = (weights[0].width(), weights[0].height());
    let mut out = vec![Grid::new(w, h, 0.0); n];
    for y in 0..h {
        for x in 0..w {
            let sum: f64 = weights.iter().map(|m| m.get(x, y)).sum();
            if sum <= n as f64 * WEIGHT_FLOOR {
                for m in out.iter_mut() {
                    m.set(x, y, 1.0 / n as f64);
                }
            } else {
                for (m, src) in out.iter_mut().zip(weights) {
                    m.set(x, y, src.get(x, y) / sum);
                }
            }
        }
    }
    Ok(out)
}

/// Pixel arithmetic needed by the pyramid code; implemented for scalar
/// and RGB grids.
pub trait PixelArith: Copy {
    const ZERO: Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, k: f64) -> Self;
}

impl PixelArith for f64 {
    const ZERO: Self = 0.0;
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
}

impl PixelArith for Rgb {
    const ZERO: Self = [0.0; 3];
    fn add(self, o: Self) -> Self {
        [self[0] + o[0], self[1] + o[1], self[2] + o[2]]
    }
    fn sub(self, o: Self) -> Self {
        [self[0] - o[0], self[1] - o[1], self[2] - o[2]]
    }
    fn scale(self, k: f64) -> Self {
        [self[0] * k, self[1] * k, self[2] * k]
    }
}

/// Deepest admissible pyramid for a given size: floor(log2(min(W, H))).
pub fn auto_levels(width: usize, height: usize) -> usize {
    let m = width.min(height).max(1);
    ((usize::BITS - 1 - m.leading_zeros()) as usize).max(1)
}

const BINOMIAL: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

fn blur<T: PixelArith>(img: &Grid<T>) -> Grid<T> {
    let (w, h) = (img.width(), img.height());
    // horizontal pass
    let hpass = Grid::from_fn(w, h, |x, y| {
        let mut acc = T::ZERO;
        for (i, &k) in BINOMIAL.iter().enumerate() {
            let sx = x as isize + i as isize - 2;
            acc = acc.add(img.get_clamped(sx, y as isize).scale(k));
        }
        acc
    });
    Grid::from_fn(w, h, |x, y| {
        let mut acc = T::ZERO;
        for (i, &k) in BINOMIAL.iter().enumerate() {
            let sy = y as isize + i as isize - 2;
            acc = acc.add(hpass.get_clamped(x as isize, sy).scale(k));
        }
        acc
    })
}

fn decimate<T: PixelArith>(img: &Grid<T>) -> Grid<T> {
    let w = img.width().div_ceil(2);
    let h = img.height().div_ceil(2);
    Grid::from_fn(w, h, |x, y| img.get(2 * x, 2 * y))
}

/// Bilinear resize to an exact target size (align-corners sampling).
fn upsample<T: PixelArith>(img: &Grid<T>, tw: usize, th: usize) -> Grid<T> {
    let (w, h) = (img.width(), img.height());
    let fx = if tw > 1 { (w - 1) as f64 / (tw - 1) as f64 } else { 0.0 };
    let fy = if th > 1 { (h - 1) as f64 / (th - 1) as f64 } else { 0.0 };
    Grid::from_fn(tw, th, |x, y| {
        let sx = x as f64 * fx;
        let sy = y as f64 * fy;
        let x0 = sx.floor() as usize;
        let y0 = sy.floor() as usize;
        let x1 = (x0 + 1).min(w - 1);
        let y1 = (y0 + 1).min(h - 1);
        let ax = sx - x0 as f64;
        let ay = sy - y0 as f64;
        let top = img.get(x0, y0).scale(1.0 - ax).add(img.get(x1, y0).scale(ax));
        let bot = img.get(x0, y1).scale(1.0 - ax).add(img.get(x1, y1).scale(ax));
        top.scale(1.0 - ay).add(bot.scale(ay))
    })
}

/// Gaussian pyramid: level 0 is the input, each next level is the 5-tap
/// binomial blur decimated by 2 (ceil halving).
pub fn gaussian_pyramid<T: PixelArith>(img: &Grid<T>, levels: usize) -> Result<Vec<Grid<T>>> {
    let max = auto_levels(img.width(), img.height());
    if levels > max {
        return Err(Error::TooManyLevels {
            requested: levels,
            max,
        });
    }
    let mut pyr = Vec::with_capacity(levels);
    pyr.push(img.clone());
    for _ in 1..levels {
        let next = decimate(&blur(pyr.last().unwrap()));
        pyr.push(next);
    }
    Ok(pyr)
}

/// Band-pass pyramid: L_l = G_l - upsample(G_{l+1}); the top level is the
/// coarsest Gaussian level itself.
pub fn laplacian_pyramid<T: PixelArith>(img: &Grid<T>, levels: usize) -> Result<Vec<Grid<T>>> {
    let gauss = gaussian_pyramid(img, levels)?;
    let mut pyr = Vec::with_capacity(levels);
    for l in 0..levels - 1 {
        let up = upsample(&gauss[l + 1], gauss[l].width(), gauss[l].height());
        pyr.push(Grid::from_fn(gauss[l].width(), gauss[l].height(), |x, y| {
            gauss[l].get(x, y).sub(up.get(x, y))
        }));
    }
    pyr.push(gauss[levels - 1].clone());
    Ok(pyr)
}

/// Rebuilds the image a Laplacian pyramid was taken from.
pub fn collapse_pyramid<T: PixelArith>(pyr: &[Grid<T>]) -> Grid<T> {
    let mut acc = pyr.last().expect("non-empty pyramid").clone();
    for level in pyr.iter().rev().skip(1) {
        let up = upsample(&acc, level.width(), level.height());
        acc = Grid::from_fn(level.width(), level.height(), |x, y| {
            level.get(x, y).add(up.get(x, y))
        });
    }
    acc
}

/// Fusion output plus the largest out-of-range channel excursion observed
/// before the final clamp.
pub struct FusedImage {
    pub image: RgbImage,
    pub overshoot: f64,
}

pub fn fuse_stack(stack: &ImageStack, cfg: &FusionConfig) -> Result<RgbImage> {
    Ok(fuse_stack_detailed(stack, cfg)?.image)
}

pub fn fuse_stack_detailed(stack: &ImageStack, cfg: &FusionConfig) -> Result<FusedImage> {
    cfg.validate()?;
    let levels = match cfg.pyramid_levels {
        Some(l) => {
            let max = auto_levels(stack.width(), stack.height());
            if l > max {
                return Err(Error::TooManyLevels {
                    requested: l,
                    max,
                });
            }
            l
        }
        None => auto_levels(stack.width(), stack.height()),
    };

    let weights = normalize_weights(&quality_weights(stack, cfg))?;
    let pyramids: Vec<(Vec<Grid<f64>>, Vec<Grid<Rgb>>)> = stack
        .images()
        .par_iter()
        .zip(&weights)
        .map(|(img, w)| {
            let wp = gaussian_pyramid(w, levels)?;
            let lp = laplacian_pyramid(img, levels)?;
            Ok((wp, lp))
        })
        .collect::<Result<_>>()?;

    // blend level by level; image-index summation order is fixed so the
    // result does not depend on thread count
    let mut blended: Vec<Grid<Rgb>> = Vec::with_capacity(levels);
    for l in 0..levels {
        let (w, h) = (pyramids[0].1[l].width(), pyramids[0].1[l].height());
        blended.push(Grid::from_fn(w, h, |x, y| {
            let mut acc = Rgb::ZERO;
            for (wp, lp) in &pyramids {
                acc = acc.add(lp[l].get(x, y).scale(wp[l].get(x, y)));
            }
            acc
        }));
    }

    let raw = collapse_pyramid(&blended);
    let mut overshoot = 0.0f64;
    let image = raw.map(|px| {
        let mut out = px;
        for c in &mut out {
            *c = c.clamp(0.0, 1.0);
        }
        out
    });
    for px in raw.data() {
        for &c in px {
            if c < 0.0 {
                overshoot = overshoot.max(-c);
            } else if c > 1.0 {
                overshoot = overshoot.max(c - 1.0);
            }
        }
    }
    Ok(FusedImage { image, overshoot })
}
