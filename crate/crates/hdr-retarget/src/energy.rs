//! Gradient energy, Laplacian maps, and the aggregate energy metrics that
//! combine per-exposure energies into a single map.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::stack_io::LuminanceImage;

pub type EnergyMap = Grid<f64>;

/// E(x, y) = |dI/dx| + |dI/dy|, central differences in the interior and
/// one-sided differences at the borders.
pub fn gradient_energy(img: &LuminanceImage) -> Result<EnergyMap> {
    let (w, h) = (img.width(), img.height());
    if w < 2 || h < 2 {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            min: 2,
        });
    }
    Ok(Grid::from_fn(w, h, |x, y| {
        let dx = if x == 0 {
            img.get(1, y) - img.get(0, y)
        } else if x == w - 1 {
            img.get(w - 1, y) - img.get(w - 2, y)
        } else {
            (img.get(x + 1, y) - img.get(x - 1, y)) / 2.0
        };
        let dy = if y == 0 {
            img.get(x, 1) - img.get(x, 0)
        } else if y == h - 1 {
            img.get(x, h - 1) - img.get(x, h - 2)
        } else {
            (img.get(x, y + 1) - img.get(x, y - 1)) / 2.0
        };
        dx.abs() + dy.abs()
    }))
}

/// |4-neighbor Laplacian| with replicate borders. Absolute value keeps the
/// map usable as a nonnegative weight.
pub fn laplacian_map(img: &LuminanceImage) -> Result<EnergyMap> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            min: 3,
        });
    }
    Ok(laplacian_abs(img))
}

/// Same kernel as [`laplacian_map`] but tolerant of tiny images; fusion
/// weights need this on post-carving sizes below 3.
pub(crate) fn laplacian_abs(img: &LuminanceImage) -> EnergyMap {
    Grid::from_fn(img.width(), img.height(), |x, y| {
        let (xi, yi) = (x as isize, y as isize);
        let lap = img.get_clamped(xi - 1, yi)
            + img.get_clamped(xi + 1, yi)
            + img.get_clamped(xi, yi - 1)
            + img.get_clamped(xi, yi + 1)
            - 4.0 * img.get(x, y);
        lap.abs()
    })
}

pub fn average_energy_per_pixel(e: &EnergyMap) -> f64 {
    let n = (e.width() * e.height()) as f64;
    e.data().iter().sum::<f64>() / n
}

/// Nonnegative per-image weights normalized to sum 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    alphas: Vec<f64>,
}

impl WeightVector {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::EmptyInput);
        }
        if alphas.iter().any(|&a| a < 0.0 || !a.is_finite()) {
            return Err(Error::InvalidConfig(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "weights must sum to 1, got {sum}"
            )));
        }
        Ok(Self { alphas })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }
}

/// alpha_i proportional to the average energy per pixel of E_i, normalized
/// to sum 1. An all-flat stack falls back to uniform weights.
pub fn weights_from_average_energy(energies: &[EnergyMap]) -> Result<WeightVector> {
    if energies.is_empty() {
        return Err(Error::EmptyInput);
    }
    let raw: Vec<f64> = energies.iter().map(average_energy_per_pixel).collect();
    let sum: f64 = raw.iter().sum();
    let n = raw.len();
    if sum <= 0.0 {
        return WeightVector::new(vec![1.0 / n as f64; n]);
    }
    WeightVector::new(raw.iter().map(|a| a / sum).collect())
}

fn check_same_dims(maps: &[&EnergyMap]) -> Result<()> {
    let (w, h) = (maps[0].width(), maps[0].height());
    for m in maps {
        if m.width() != w || m.height() != h {
            return Err(Error::DimensionMismatch(format!(
                "energy map {}x{} vs {}x{}",
                m.width(),
                m.height(),
                w,
                h
            )));
        }
    }
    Ok(())
}

/// Per-pixel convex combination of the energy maps: E = sum_i alpha_i E_i.
pub fn aggregate_energy_weighted(
    energies: &[EnergyMap],
    alphas: &WeightVector,
) -> Result<EnergyMap> {
    if energies.is_empty() {
        return Err(Error::EmptyInput);
    }
    if energies.len() != alphas.len() {
        return Err(Error::LengthMismatch(energies.len(), alphas.len()));
    }
    check_same_dims(&energies.iter().collect::<Vec<_>>())?;
    let (w, h) = (energies[0].width(), energies[0].height());
    Ok(Grid::from_fn(w, h, |x, y| {
        energies
            .iter()
            .zip(alphas.alphas())
            .map(|(e, &a)| a * e.get(x, y))
            .sum()
    }))
}

/// Laplacian-weighted aggregate: at every pixel the Laplacian magnitudes
/// are normalized to a partition of unity and used to mix the per-image
/// energies. Pixels where every Laplacian is zero mix uniformly.
pub fn aggregate_energy_laplacian(
    energies: &[EnergyMap],
    laplacians: &[EnergyMap],
) -> Result<EnergyMap> {
    if energies.is_empty() {
        return Err(Error::EmptyInput);
    }
    if energies.len() != laplacians.len() {
        return Err(Error::LengthMismatch(energies.len(), laplacians.len()));
    }
    let all: Vec<&EnergyMap> = energies.iter().chain(laplacians.iter()).collect();
    check_same_dims(&all)?;
    let n = energies.len() as f64;
    let (w, h) = (energies[0].width(), energies[0].height());
    Ok(Grid::from_fn(w, h, |x, y| {
        let denom: f64 = laplacians.iter().map(|l| l.get(x, y)).sum();
        if denom > 0.0 {
            energies
                .iter()
                .zip(laplacians)
                .map(|(e, l)| l.get(x, y) / denom * e.get(x, y))
                .sum()
        } else {
            energies.iter().map(|e| e.get(x, y)).sum::<f64>() / n
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Direct per-pixel evaluation of the decided stencil, written
    // independently of the production loop.
    fn gradient_oracle(img: &LuminanceImage, x: usize, y: usize) -> f64 {
        let (w, h) = (img.width(), img.height());
        let v = |x: usize, y: usize| img.get(x, y);
        let dx = match x {
            0 => v(1, y) - v(0, y),
            x if x == w - 1 => v(w - 1, y) - v(w - 2, y),
            _ => (v(x + 1, y) - v(x - 1, y)) / 2.0,
        };
        let dy = match y {
            0 => v(x, 1) - v(x, 0),
            y if y == h - 1 => v(x, h - 1) - v(x, h - 2),
            _ => (v(x, y + 1) - v(x, y - 1)) / 2.0,
        };
        dx.abs() + dy.abs()
    }

    fn pseudo_random_image(w: usize, h: usize, seed: u64) -> LuminanceImage {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        Grid::from_fn(w, h, |_, _| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        })
    }

    #[test]
    fn constant_image_has_zero_energy() {
        let img = Grid::new(4, 4, 0.3);
        let e = gradient_energy(&img).unwrap();
        assert!(e.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn horizontal_ramp_energy_is_uniform() {
        let delta = 0.1;
        let img = Grid::from_fn(3, 3, |x, _| x as f64 * delta);
        let e = gradient_energy(&img).unwrap();
        for &v in e.data() {
            assert!((v - delta).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_difference_oracle() {
        let img = pseudo_random_image(5, 5, 7);
        let e = gradient_energy(&img).unwrap();
        for y in 0..5 {
            for x in 0..5 {
                assert_eq!(e.get(x, y), gradient_oracle(&img, x, y));
            }
        }
    }

    #[test]
    fn gradient_invariant_under_offset() {
        let img = pseudo_random_image(6, 4, 3).map(|v| v * 0.5);
        let shifted = img.map(|v| v + 0.25);
        let a = gradient_energy(&img).unwrap();
        let b = gradient_energy(&shifted).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_of_transpose_is_transpose_of_gradient() {
        let img = pseudo_random_image(5, 5, 11);
        let a = gradient_energy(&img.transpose()).unwrap();
        let b = gradient_energy(&img).unwrap().transpose();
        for (x, y) in a.data().iter().zip(b.data()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_rejects_tiny_images() {
        let img = Grid::new(1, 5, 0.0);
        assert!(matches!(
            gradient_energy(&img).unwrap_err(),
            Error::ImageTooSmall { .. }
        ));
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let img = Grid::new(3, 3, 0.7);
        let l = laplacian_map(&img).unwrap();
        assert!(l.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn laplacian_of_single_bright_pixel() {
        let mut img = Grid::new(3, 3, 0.0);
        img.set(1, 1, 1.0);
        let l = laplacian_map(&img).unwrap();
        assert_eq!(l.get(1, 1), 4.0);
    }

    #[test]
    fn laplacian_matches_convolution_oracle() {
        let img = pseudo_random_image(5, 5, 21);
        let l = laplacian_map(&img).unwrap();
        for y in 0..5isize {
            for x in 0..5isize {
                let expected = (img.get_clamped(x - 1, y)
                    + img.get_clamped(x + 1, y)
                    + img.get_clamped(x, y - 1)
                    + img.get_clamped(x, y + 1)
                    - 4.0 * img.get(x as usize, y as usize))
                .abs();
                assert_eq!(l.get(x as usize, y as usize), expected);
            }
        }
    }

    #[test]
    fn average_energy_examples() {
        let m = Grid::from_raw(3, 3, vec![1., 2., 3., 4., 1., 6., 7., 8., 1.]);
        assert!((average_energy_per_pixel(&m) - 33.0 / 9.0).abs() < 1e-12);
        assert_eq!(average_energy_per_pixel(&Grid::new(4, 2, 0.0)), 0.0);
        assert!((average_energy_per_pixel(&Grid::new(4, 2, 2.5)) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn weighted_aggregate_examples() {
        let e1 = Grid::new(2, 2, 2.0);
        let e2 = Grid::new(2, 2, 4.0);
        let w = WeightVector::new(vec![0.25, 0.75]).unwrap();
        let agg = aggregate_energy_weighted(&[e1.clone(), e2], &w).unwrap();
        assert!(agg.data().iter().all(|&v| (v - 3.5).abs() < 1e-12));

        let identity = WeightVector::new(vec![1.0, 0.0]).unwrap();
        let e2 = Grid::new(2, 2, 9.0);
        let agg = aggregate_energy_weighted(&[e1.clone(), e2], &identity).unwrap();
        assert_eq!(agg, e1);
    }

    #[test]
    fn weighted_aggregate_is_convex() {
        let e1 = pseudo_random_image(4, 4, 1);
        let e2 = pseudo_random_image(4, 4, 2);
        let e3 = pseudo_random_image(4, 4, 3);
        let w = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let agg = aggregate_energy_weighted(&[e1.clone(), e2.clone(), e3.clone()], &w).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                let vals = [e1.get(x, y), e2.get(x, y), e3.get(x, y)];
                let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let v = agg.get(x, y);
                assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn weights_from_averages() {
        let e1 = Grid::new(2, 2, 2.0);
        let e2 = Grid::new(2, 2, 6.0);
        let w = weights_from_average_energy(&[e1, e2]).unwrap();
        assert!((w.alphas()[0] - 0.25).abs() < 1e-12);
        assert!((w.alphas()[1] - 0.75).abs() < 1e-12);

        let single = weights_from_average_energy(&[Grid::new(2, 2, 3.0)]).unwrap();
        assert_eq!(single.alphas(), &[1.0]);

        let flat = weights_from_average_energy(&vec![Grid::new(2, 2, 0.0); 3]).unwrap();
        for &a in flat.alphas() {
            assert!((a - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_from_averages_combined_matches_direct_evaluation() {
        let e1 = Grid::new(2, 2, 2.0);
        let e2 = Grid::new(2, 2, 6.0);
        let w = weights_from_average_energy(&[e1.clone(), e2.clone()]).unwrap();
        let agg = aggregate_energy_weighted(&[e1, e2], &w).unwrap();
        assert!(agg.data().iter().all(|&v| (v - 5.0).abs() < 1e-12));
    }

    #[test]
    fn laplacian_aggregate_examples() {
        let e = [Grid::new(1, 1, 2.0), Grid::new(1, 1, 4.0)];
        let l = [Grid::new(1, 1, 1.0), Grid::new(1, 1, 3.0)];
        let agg = aggregate_energy_laplacian(&e, &l).unwrap();
        assert!((agg.get(0, 0) - 3.5).abs() < 1e-12);

        let zeros = [Grid::new(1, 1, 0.0), Grid::new(1, 1, 0.0)];
        let agg = aggregate_energy_laplacian(&e, &zeros).unwrap();
        assert!((agg.get(0, 0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn laplacian_aggregate_matches_scalar_oracle() {
        let energies: Vec<EnergyMap> = (0..3).map(|i| pseudo_random_image(4, 4, 40 + i)).collect();
        let laps: Vec<EnergyMap> = (0..3).map(|i| pseudo_random_image(4, 4, 50 + i)).collect();
        let agg = aggregate_energy_laplacian(&energies, &laps).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                let denom: f64 = laps.iter().map(|l| l.get(x, y)).sum();
                let mut expected = 0.0;
                for i in 0..3 {
                    expected += laps[i].get(x, y) / denom * energies[i].get(x, y);
                }
                assert!((agg.get(x, y) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identical_laplacians_reduce_to_mean() {
        let energies: Vec<EnergyMap> = (0..3).map(|i| pseudo_random_image(4, 4, 60 + i)).collect();
        let lap = pseudo_random_image(4, 4, 70).map(|v| v + 0.1);
        let agg = aggregate_energy_laplacian(&energies, &[lap.clone(), lap.clone(), lap]).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                let mean = energies.iter().map(|e| e.get(x, y)).sum::<f64>() / 3.0;
                assert!((agg.get(x, y) - mean).abs() < 1e-12);
            }
        }
    }
}
