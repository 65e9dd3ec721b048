//! Loading, validating and saving exposure stacks.
//!
//! Images are held as normalized `f64` values in `[0, 1]`; 8-bit
//! quantization happens only at the I/O boundary.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;

pub type Rgb = [f64; 3];
pub type RgbImage = Grid<Rgb>;
pub type LuminanceImage = Grid<f64>;

/// A registered set of differently exposed LDR images of one scene.
#[derive(Debug, Clone)]
pub struct ImageStack {
    images: Vec<RgbImage>,
    labels: Vec<String>,
}

impl ImageStack {
    pub fn new(images: Vec<RgbImage>, labels: Vec<String>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::EmptyInput);
        }
        if labels.len() != images.len() {
            return Err(Error::LengthMismatch(labels.len(), images.len()));
        }
        let (w, h) = (images[0].width(), images[0].height());
        for (img, label) in images.iter().zip(&labels) {
            if img.width() != w || img.height() != h {
                return Err(Error::DimensionMismatch(format!(
                    "`{}` is {}x{}, expected {}x{}",
                    label,
                    img.width(),
                    img.height(),
                    w,
                    h
                )));
            }
        }
        Ok(Self { images, labels })
    }

    pub fn from_images(images: Vec<RgbImage>) -> Result<Self> {
        let labels = (0..images.len()).map(|i| format!("image_{i}")).collect();
        Self::new(images, labels)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn width(&self) -> usize {
        self.images[0].width()
    }

    pub fn height(&self) -> usize {
        self.images[0].height()
    }

    pub fn images(&self) -> &[RgbImage] {
        &self.images
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn transpose(&self) -> ImageStack {
        ImageStack {
            images: self.images.iter().map(|i| i.transpose()).collect(),
            labels: self.labels.clone(),
        }
    }
}

fn is_stack_image(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref(),
        Some("png") | Some("jpg") | Some("jpeg")
    )
}

/// Loads an exposure stack from a directory of PNG/JPEG files or from a
/// manifest file listing one relative image path per line (`#` comments
/// ignored). Directory stacks are ordered by filename.
pub fn load_stack(source: &Path) -> Result<ImageStack> {
    let paths: Vec<PathBuf> = if source.is_dir() {
        let mut paths: Vec<PathBuf> = fs::read_dir(source)?
            .collect::<std::io::Result<Vec<_>>>()?
            .into_iter()
            .map(|e| e.path())
            .filter(|p| p.is_file() && is_stack_image(p))
            .collect();
        paths.sort();
        paths
    } else {
        let base = source.parent().unwrap_or(Path::new(".")).to_path_buf();
        fs::read_to_string(source)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| base.join(l))
            .collect()
    };

    if paths.is_empty() {
        return Err(Error::EmptyStack(source.to_path_buf()));
    }

    let images = paths
        .par_iter()
        .map(|p| decode_image(p))
        .collect::<Result<Vec<_>>>()?;
    let labels = paths
        .iter()
        .map(|p| {
            p.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    ImageStack::new(images, labels)
}

fn decode_image(path: &Path) -> Result<RgbImage> {
    let decoded = image::open(path)
        .map_err(|source| Error::Decode {
            path: path.to_path_buf(),
            source,
        })?
        .to_rgb8();
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    Ok(Grid::from_fn(w, h, |x, y| {
        let p = decoded.get_pixel(x as u32, y as u32);
        [
            p[0] as f64 / 255.0,
            p[1] as f64 / 255.0,
            p[2] as f64 / 255.0,
        ]
    }))
}

/// Writes an image as 8-bit RGB PNG; values are quantized by
/// `round(v * 255)` and clamped to `[0, 255]`.
pub fn save_image(img: &RgbImage, path: &Path) -> Result<()> {
    let mut out = image::RgbImage::new(img.width() as u32, img.height() as u32);
    for y in 0..img.height() {
        for x in 0..img.width() {
            let p = img.get(x, y);
            out.put_pixel(
                x as u32,
                y as u32,
                image::Rgb([quantize(p[0]), quantize(p[1]), quantize(p[2])]),
            );
        }
    }
    out.save(path)?;
    Ok(())
}

fn quantize(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

/// Rec. 601 luma: Y = 0.299 R + 0.587 G + 0.114 B.
pub fn to_luminance(img: &RgbImage) -> LuminanceImage {
    img.map(|[r, g, b]| 0.299 * r + 0.587 * g + 0.114 * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luminance_coefficients() {
        let img = Grid::from_raw(3, 1, vec![[1.0, 1.0, 1.0], [0.0, 1.0, 0.0], [0.4, 0.4, 0.4]]);
        let lum = to_luminance(&img);
        assert!((lum.get(0, 0) - 1.0).abs() < 1e-12);
        assert!((lum.get(1, 0) - 0.587).abs() < 1e-12);
        assert!((lum.get(2, 0) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn luminance_within_channel_bounds() {
        let img = Grid::from_raw(2, 1, vec![[0.1, 0.7, 0.3], [0.9, 0.2, 0.5]]);
        let lum = to_luminance(&img);
        for x in 0..2 {
            let [r, g, b] = img.get(x, 0);
            let lo = r.min(g).min(b);
            let hi = r.max(g).max(b);
            assert!(lum.get(x, 0) >= lo && lum.get(x, 0) <= hi);
        }
    }

    #[test]
    fn quantization_rules() {
        assert_eq!(quantize(1.0), 255);
        assert_eq!(quantize(0.5), 128); // round half up
        assert_eq!(quantize(1.2), 255); // clamped
        assert_eq!(quantize(0.0), 0);
        assert_eq!(quantize(-0.1), 0);
    }

    #[test]
    fn stack_rejects_dimension_mismatch() {
        let a = Grid::new(3, 2, [0.0; 3]);
        let b = Grid::new(3, 3, [0.0; 3]);
        let err = ImageStack::from_images(vec![a, b]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn save_load_roundtrip_within_quantization() {
        let dir = tempfile::tempdir().unwrap();
        let img = Grid::from_fn(8, 5, |x, y| {
            let v = (x as f64 * 0.13 + y as f64 * 0.07).fract();
            [v, (v * 0.5).fract(), 1.0 - v]
        });
        let path = dir.path().join("img.png");
        save_image(&img, &path).unwrap();
        let back = decode_image(&path).unwrap();
        for y in 0..5 {
            for x in 0..8 {
                let a = img.get(x, y);
                let b = back.get(x, y);
                for c in 0..3 {
                    assert!((a[c] - b[c]).abs() <= 1.0 / 510.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn directory_stack_ordered_and_validated() {
        let dir = tempfile::tempdir().unwrap();
        for (i, name) in ["b.png", "a.png", "c.png"].iter().enumerate() {
            let img = Grid::new(4, 3, [i as f64 / 10.0; 3]);
            save_image(&img, &dir.path().join(name)).unwrap();
        }
        let stack = load_stack(dir.path()).unwrap();
        assert_eq!(stack.len(), 3);
        assert_eq!(stack.labels(), &["a.png", "b.png", "c.png"]);
        assert_eq!(stack.width(), 4);
        assert_eq!(stack.height(), 3);
    }

    #[test]
    fn manifest_stack_keeps_manifest_order() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["z.png", "a.png"] {
            save_image(&Grid::new(2, 2, [0.5; 3]), &dir.path().join(name)).unwrap();
        }
        let manifest = dir.path().join("stack.txt");
        fs::write(&manifest, "# exposure order\nz.png\na.png\n").unwrap();
        let stack = load_stack(&manifest).unwrap();
        assert_eq!(stack.labels(), &["z.png", "a.png"]);
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            load_stack(dir.path()).unwrap_err(),
            Error::EmptyStack(_)
        ));
    }

    #[test]
    fn mismatched_stack_files_rejected() {
        let dir = tempfile::tempdir().unwrap();
        save_image(&Grid::new(4, 3, [0.1; 3]), &dir.path().join("a.png")).unwrap();
        save_image(&Grid::new(4, 4, [0.1; 3]), &dir.path().join("b.png")).unwrap();
        assert!(matches!(
            load_stack(dir.path()).unwrap_err(),
            Error::DimensionMismatch(_)
        ));
    }
}
