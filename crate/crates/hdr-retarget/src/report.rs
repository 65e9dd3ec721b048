//! CSV energy-preservation reporting and energy-map visualization.

use std::path::Path;

use crate::energy::EnergyMap;
use crate::error::{Error, Result};
use crate::strategies::{Strategy, StrategyTrace};

/// One finished strategy run, ready to be reported.
#[derive(Debug, Clone)]
pub struct StrategyRun {
    pub strategy: Strategy,
    pub trace: StrategyTrace,
    /// Average gradient energy per pixel of the final fused output.
    pub final_energy: f64,
}

pub const CSV_HEADER: &str = "strategy,seams_processed,avg_energy_per_pixel";

/// Renders the energy curves as CSV: one row per step per strategy, then
/// one `strategy,final,<value>` summary row per strategy. Values use
/// round-trip `f64` formatting. LF line endings.
pub fn energy_curve_csv(runs: &[StrategyRun]) -> Result<String> {
    if runs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let steps = runs[0].trace.steps.len();
    for run in runs {
        if run.trace.steps.len() != steps {
            return Err(Error::InconsistentTraces(format!(
                "{} has {} steps, expected {}",
                run.strategy.id(),
                run.trace.steps.len(),
                steps
            )));
        }
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for run in runs {
        for step in &run.trace.steps {
            let avg = step.avg_energy_per_pixel.ok_or_else(|| {
                Error::InconsistentTraces(format!(
                    "{} step {} has no energy sample (light trace?)",
                    run.strategy.id(),
                    step.step
                ))
            })?;
            out.push_str(&format!("{},{},{}\n", run.strategy.id(), step.step, avg));
        }
        out.push_str(&format!("{},final,{}\n", run.strategy.id(), run.final_energy));
    }
    Ok(out)
}

/// Writes an energy map as grayscale PNG, linearly rescaled so the map
/// maximum becomes 255; an all-zero map renders black.
pub fn render_energy_visualization(e: &EnergyMap, path: &Path) -> Result<()> {
    let max = e.data().iter().cloned().fold(0.0f64, f64::max);
    let mut out = image::GrayImage::new(e.width() as u32, e.height() as u32);
    for y in 0..e.height() {
        for x in 0..e.width() {
            let v = if max > 0.0 {
                (e.get(x, y) / max * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            };
            out.put_pixel(x as u32, y as u32, image::Luma([v]));
        }
    }
    out.save(path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::strategies::{SeamSource, TraceStep};

    fn run_with_steps(strategy: Strategy, values: &[f64], final_energy: f64) -> StrategyRun {
        StrategyRun {
            strategy,
            trace: StrategyTrace {
                steps: values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| TraceStep {
                        step: i + 1,
                        source: SeamSource::Aggregate,
                        seam_energy: 0.0,
                        avg_energy_per_pixel: Some(v),
                    })
                    .collect(),
                fused_overshoot: 0.0,
            },
            final_energy,
        }
    }

    #[test]
    fn header_and_row_layout() {
        let run = run_with_steps(Strategy::Direct, &[0.5, 0.25], 0.125);
        let csv = energy_curve_csv(&[run]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "strategy,seams_processed,avg_energy_per_pixel");
        assert_eq!(lines[1], "direct,1,0.5");
        assert_eq!(lines[2], "direct,2,0.25");
        assert_eq!(lines[3], "direct,final,0.125");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn zero_seam_run_has_only_summary_rows() {
        let runs = vec![
            run_with_steps(Strategy::Direct, &[], 1.5),
            run_with_steps(Strategy::AggAvg, &[], 2.5),
        ];
        let csv = energy_curve_csv(&runs).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "direct,final,1.5");
        assert_eq!(lines[2], "agg-avg,final,2.5");
    }

    #[test]
    fn values_roundtrip_exactly() {
        let vals = [0.1 + 0.2, std::f64::consts::PI, 1.0 / 3.0];
        let run = run_with_steps(Strategy::StatMedian, &vals, 2.0 / 7.0);
        let csv = energy_curve_csv(&[run]).unwrap();
        for (line, &expected) in csv.lines().skip(1).zip(vals.iter()) {
            let printed: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
            assert_eq!(printed, expected);
        }
        let last = csv.lines().last().unwrap();
        let printed: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(printed, 2.0 / 7.0);
    }

    #[test]
    fn mismatched_step_counts_rejected() {
        let runs = vec![
            run_with_steps(Strategy::Direct, &[1.0], 0.0),
            run_with_steps(Strategy::AggAvg, &[1.0, 2.0], 0.0),
        ];
        assert!(matches!(
            energy_curve_csv(&runs).unwrap_err(),
            Error::InconsistentTraces(_)
        ));
    }

    #[test]
    fn energy_visualization_rescale_rules() {
        let dir = tempfile::tempdir().unwrap();

        let zero = Grid::new(3, 2, 0.0);
        let p = dir.path().join("zero.png");
        render_energy_visualization(&zero, &p).unwrap();
        let img = image::open(&p).unwrap().to_luma8();
        assert!(img.pixels().all(|p| p[0] == 0));

        let constant = Grid::new(3, 2, 7.3);
        let p = dir.path().join("const.png");
        render_energy_visualization(&constant, &p).unwrap();
        let img = image::open(&p).unwrap().to_luma8();
        assert!(img.pixels().all(|p| p[0] == 255));

        let mut mixed = Grid::new(2, 1, 1.0);
        mixed.set(1, 0, 4.0);
        let p = dir.path().join("mixed.png");
        render_energy_visualization(&mixed, &p).unwrap();
        let img = image::open(&p).unwrap().to_luma8();
        assert_eq!(img.get_pixel(1, 0)[0], 255);
        assert_eq!(img.get_pixel(0, 0)[0], 64);
    }
}
