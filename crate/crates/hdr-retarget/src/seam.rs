//! Dynamic-programming seam search plus seam removal/insertion.
//!
//! Everything here works on vertical seams (one column index per row);
//! horizontal resizing goes through [`Grid::transpose`] at the strategy
//! level so there is a single DP code path.

use crate::energy::EnergyMap;
use crate::error::{Error, Result};
use crate::grid::{Blend, Grid};

/// A connected top-to-bottom pixel path and its energy in the map it was
/// found in.
#[derive(Debug, Clone, PartialEq)]
pub struct Seam {
    /// One column index per row, top to bottom.
    pub columns: Vec<usize>,
    /// Sum of the source energy values along the path.
    pub energy: f64,
}

impl Seam {
    pub fn height(&self) -> usize {
        self.columns.len()
    }

    fn check_dims(&self, width: usize, height: usize) -> Result<()> {
        if self.columns.len() != height {
            return Err(Error::DimensionMismatch(format!(
                "seam height {} vs image height {}",
                self.columns.len(),
                height
            )));
        }
        if let Some(&c) = self.columns.iter().find(|&&c| c >= width) {
            return Err(Error::DimensionMismatch(format!(
                "seam column {c} out of range for width {width}"
            )));
        }
        Ok(())
    }
}

pub type CumulativeEnergyMap = Grid<f64>;

/// DP table: M(0,c) = E(0,c); M(r,c) = E(r,c) + min of the up-to-three
/// admissible predecessors in row r-1.
pub fn cumulative_energy(e: &EnergyMap) -> CumulativeEnergyMap {
    let (w, h) = (e.width(), e.height());
    let mut m = e.clone();
    for y in 1..h {
        for x in 0..w {
            let mut best = m.get(x, y - 1);
            if x > 0 {
                best = best.min(m.get(x - 1, y - 1));
            }
            if x + 1 < w {
                best = best.min(m.get(x + 1, y - 1));
            }
            m.set(x, y, e.get(x, y) + best);
        }
    }
    m
}

/// Walks the DP table from the bottom-row argmin upward, always taking the
/// admissible predecessor with minimal cumulative cost. Ties break leftmost.
pub fn backtrack_min_seam(m: &CumulativeEnergyMap, e: &EnergyMap) -> Seam {
    let (w, h) = (m.width(), m.height());
    let mut columns = vec![0usize; h];

    let mut x = argmin_row(m, h - 1, 0, w);
    columns[h - 1] = x;
    for y in (0..h - 1).rev() {
        let lo = x.saturating_sub(1);
        let hi = (x + 2).min(w);
        x = argmin_row(m, y, lo, hi);
        columns[y] = x;
    }

    let energy = columns
        .iter()
        .enumerate()
        .map(|(y, &c)| e.get(c, y))
        .sum();
    Seam { columns, energy }
}

fn argmin_row(m: &Grid<f64>, y: usize, lo: usize, hi: usize) -> usize {
    let mut best = lo;
    let mut best_v = m.get(lo, y);
    for x in lo + 1..hi {
        let v = m.get(x, y);
        if v < best_v {
            best = x;
            best_v = v;
        }
    }
    best
}

/// Minimum-energy vertical seam of an energy map.
pub fn min_seam(e: &EnergyMap) -> Seam {
    let m = cumulative_energy(e);
    backtrack_min_seam(&m, e)
}

/// Energy of a seam's coordinates evaluated in an arbitrary map — the
/// replica-seam energy used by the total-energy selector.
pub fn seam_energy_in(s: &Seam, e: &EnergyMap) -> Result<f64> {
    s.check_dims(e.width(), e.height())?;
    Ok(s.columns
        .iter()
        .enumerate()
        .map(|(y, &c)| e.get(c, y))
        .sum())
}

/// Removes one seam; every row loses the seam pixel and shifts the pixels
/// right of it left by one.
pub fn remove_seam<T: Copy>(img: &Grid<T>, s: &Seam) -> Result<Grid<T>> {
    let (w, h) = (img.width(), img.height());
    s.check_dims(w, h)?;
    if w < 2 {
        return Err(Error::WidthTooSmall(w));
    }
    let mut data = Vec::with_capacity((w - 1) * h);
    for (y, row) in img.rows().enumerate() {
        let c = s.columns[y];
        data.extend_from_slice(&row[..c]);
        data.extend_from_slice(&row[c + 1..]);
    }
    Ok(Grid::from_raw(w - 1, h, data))
}

/// Inserts one seam: a new pixel appears immediately right of the seam
/// column, valued as the midpoint of the seam pixel and its right
/// neighbor (the seam pixel itself at the right border).
pub fn insert_seam<T: Blend>(img: &Grid<T>, s: &Seam) -> Result<Grid<T>> {
    let (w, h) = (img.width(), img.height());
    s.check_dims(w, h)?;
    let mut data = Vec::with_capacity((w + 1) * h);
    for (y, row) in img.rows().enumerate() {
        let c = s.columns[y];
        data.extend_from_slice(&row[..=c]);
        data.push(T::midpoint(row[c], row[(c + 1).min(w - 1)]));
        data.extend_from_slice(&row[c + 1..]);
    }
    Ok(Grid::from_raw(w + 1, h, data))
}

/// Inserts a batch of seams in one pass. The seams must be pairwise
/// disjoint per row (as produced by insertion planning); new pixels are
/// synthesized from the original neighbors.
pub fn insert_seams<T: Blend>(img: &Grid<T>, seams: &[Seam]) -> Result<Grid<T>> {
    let (w, h) = (img.width(), img.height());
    for s in seams {
        s.check_dims(w, h)?;
    }
    let k = seams.len();
    let mut data = Vec::with_capacity((w + k) * h);
    let mut marks = vec![false; w];
    for (y, row) in img.rows().enumerate() {
        marks.iter_mut().for_each(|m| *m = false);
        for s in seams {
            let c = s.columns[y];
            if marks[c] {
                return Err(Error::InvalidPlan(format!(
                    "insertion seams overlap at row {y}, column {c}"
                )));
            }
            marks[c] = true;
        }
        for (c, &px) in row.iter().enumerate() {
            data.push(px);
            if marks[c] {
                data.push(T::midpoint(px, row[(c + 1).min(w - 1)]));
            }
        }
    }
    Ok(Grid::from_raw(w + k, h, data))
}
