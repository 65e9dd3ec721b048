//! The retargeting pipelines: direct (fuse, then carve), statistical
//! (carve the whole stack with a per-step seam vote), and aggregate-energy
//! (carve the stack against one combined energy map), each for reduction
//! and enlargement.

use rayon::prelude::*;

use crate::energy::{
    aggregate_energy_laplacian, aggregate_energy_weighted, average_energy_per_pixel,
    gradient_energy, laplacian_abs, weights_from_average_energy, EnergyMap,
};
use crate::error::{Error, Result};
use crate::fusion::{fuse_stack_detailed, FusionConfig};
use crate::seam::{insert_seams, min_seam, remove_seam, seam_energy_in, Seam};
use crate::stack_io::{to_luminance, ImageStack, RgbImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Direct,
    StatMin,
    StatMedian,
    StatTotal,
    AggAvg,
    AggLaplacian,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::Direct,
        Strategy::StatMin,
        Strategy::StatMedian,
        Strategy::StatTotal,
        Strategy::AggAvg,
        Strategy::AggLaplacian,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Strategy::Direct => "direct",
            Strategy::StatMin => "stat-min",
            Strategy::StatMedian => "stat-median",
            Strategy::StatTotal => "stat-total",
            Strategy::AggAvg => "agg-avg",
            Strategy::AggLaplacian => "agg-laplacian",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.id() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown strategy `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Change the width (vertical seams).
    Horizontal,
    /// Change the height (vertical seams on the transpose).
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Reduce,
    Enlarge,
}

/// How much bookkeeping a retargeting run performs per step.
/// `Full` fuses the working stack after every seam to sample the energy
/// curve; `Light` skips that and only records seam energies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMode {
    Full,
    Light,
}

#[derive(Debug, Clone)]
pub struct RetargetPlan {
    pub strategy: Strategy,
    pub axis: Axis,
    pub target_size: usize,
    pub trace_mode: TraceMode,
}

impl RetargetPlan {
    pub fn new(strategy: Strategy, axis: Axis, target_size: usize) -> Self {
        Self {
            strategy,
            axis,
            target_size,
            trace_mode: TraceMode::Full,
        }
    }

    pub fn with_trace_mode(mut self, mode: TraceMode) -> Self {
        self.trace_mode = mode;
        self
    }

    pub fn seam_count(&self, current: usize) -> usize {
        self.target_size.abs_diff(current)
    }

    pub fn direction(&self, current: usize) -> Direction {
        if self.target_size < current {
            Direction::Reduce
        } else {
            Direction::Enlarge
        }
    }
}

/// Which map a step's seam came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeamSource {
    Image(usize),
    Aggregate,
}

#[derive(Debug, Clone)]
pub struct TraceStep {
    /// 1-based, contiguous.
    pub step: usize,
    pub source: SeamSource,
    /// Energy of the chosen seam in the map it was selected from.
    pub seam_energy: f64,
    /// Average gradient energy per pixel of the fused working preview
    /// after this step; `None` under [`TraceMode::Light`].
    pub avg_energy_per_pixel: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct StrategyTrace {
    pub steps: Vec<TraceStep>,
    /// Largest pre-clamp out-of-range excursion of the final fusion.
    pub fused_overshoot: f64,
}

#[derive(Debug, Clone)]
pub struct RetargetOutput {
    /// Final fused image at the target size.
    pub image: RgbImage,
    /// The carved/enlarged stack before fusion; `None` for the direct
    /// strategy, which fuses before it carves.
    pub carved_stack: Option<ImageStack>,
    pub trace: StrategyTrace,
}

/// Index of the seam with minimal energy; ties break to the lowest index.
pub fn select_seam_min(seams: &[Seam]) -> Result<usize> {
    if seams.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut best = 0;
    for (i, s) in seams.iter().enumerate().skip(1) {
        if s.energy < seams[best].energy {
            best = i;
        }
    }
    Ok(best)
}

/// Index of the seam whose energy is the lower median (the ceil(N/2)-th
/// smallest). Stable in the original order for equal energies.
pub fn select_seam_median(seams: &[Seam]) -> Result<usize> {
    if seams.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut order: Vec<usize> = (0..seams.len()).collect();
    order.sort_by(|&a, &b| seams[a].energy.total_cmp(&seams[b].energy));
    Ok(order[(seams.len() + 1) / 2 - 1])
}

/// Index minimizing the total replica-seam energy: for candidate j,
/// E_j = sum over images i of the energy of seam j's coordinates in E_i.
pub fn select_seam_total_min(seams: &[Seam], energies: &[EnergyMap]) -> Result<usize> {
    if seams.is_empty() {
        return Err(Error::EmptyInput);
    }
    if seams.len() != energies.len() {
        return Err(Error::LengthMismatch(seams.len(), energies.len()));
    }
    let mut best = 0;
    let mut best_total = f64::INFINITY;
    for (j, s) in seams.iter().enumerate() {
        let mut total = 0.0;
        for e in energies {
            total += seam_energy_in(s, e)?;
        }
        if total < best_total {
            best_total = total;
            best = j;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy)]
enum SelectionMode {
    Min,
    Median,
    TotalMin,
    AggAvg,
    AggLaplacian,
}

impl SelectionMode {
    fn for_strategy(strategy: Strategy) -> Option<SelectionMode> {
        match strategy {
            Strategy::Direct => None,
            Strategy::StatMin => Some(SelectionMode::Min),
            Strategy::StatMedian => Some(SelectionMode::Median),
            Strategy::StatTotal => Some(SelectionMode::TotalMin),
            Strategy::AggAvg => Some(SelectionMode::AggAvg),
            Strategy::AggLaplacian => Some(SelectionMode::AggLaplacian),
        }
    }
}

/// Working state of one retargeting run in the axis-normalized frame
/// (seams are always vertical here).
#[derive(Debug, Clone)]
enum Ctx {
    /// Direct strategy carves the already-fused image.
    Direct(RgbImage),
    /// Stack strategies carve all exposures in lockstep.
    Stack(Vec<RgbImage>, SelectionMode),
}

impl Ctx {
    fn width(&self) -> usize {
        match self {
            Ctx::Direct(img) => img.width(),
            Ctx::Stack(images, _) => images[0].width(),
        }
    }

    fn height(&self) -> usize {
        match self {
            Ctx::Direct(img) => img.height(),
            Ctx::Stack(images, _) => images[0].height(),
        }
    }

    fn choose_seam(&self) -> Result<(Seam, SeamSource)> {
        match self {
            Ctx::Direct(img) => {
                let e = gradient_energy(&to_luminance(img))?;
                Ok((min_seam(&e), SeamSource::Aggregate))
            }
            Ctx::Stack(images, mode) => {
                let energies: Vec<EnergyMap> = images
                    .par_iter()
                    .map(|img| gradient_energy(&to_luminance(img)))
                    .collect::<Result<_>>()?;
                match mode {
                    SelectionMode::Min | SelectionMode::Median | SelectionMode::TotalMin => {
                        let seams: Vec<Seam> = energies.par_iter().map(min_seam).collect();
                        let idx = match mode {
                            SelectionMode::Min => select_seam_min(&seams)?,
                            SelectionMode::Median => select_seam_median(&seams)?,
                            SelectionMode::TotalMin => select_seam_total_min(&seams, &energies)?,
                            _ => unreachable!(),
                        };
                        Ok((seams[idx].clone(), SeamSource::Image(idx)))
                    }
                    SelectionMode::AggAvg => {
                        let alphas = weights_from_average_energy(&energies)?;
                        let agg = aggregate_energy_weighted(&energies, &alphas)?;
                        Ok((min_seam(&agg), SeamSource::Aggregate))
                    }
                    SelectionMode::AggLaplacian => {
                        let laps: Vec<EnergyMap> = images
                            .par_iter()
                            .map(|img| laplacian_abs(&to_luminance(img)))
                            .collect();
                        let agg = aggregate_energy_laplacian(&energies, &laps)?;
                        Ok((min_seam(&agg), SeamSource::Aggregate))
                    }
                }
            }
        }
    }

    fn remove(&mut self, s: &Seam) -> Result<()> {
        match self {
            Ctx::Direct(img) => {
                *img = remove_seam(img, s)?;
            }
            Ctx::Stack(images, _) => {
                let carved: Vec<RgbImage> = images
                    .par_iter()
                    .map(|img| remove_seam(img, s))
                    .collect::<Result<_>>()?;
                *images = carved;
            }
        }
        Ok(())
    }

    fn insert(&mut self, seams: &[Seam]) -> Result<()> {
        match self {
            Ctx::Direct(img) => {
                *img = insert_seams(img, seams)?;
            }
            Ctx::Stack(images, _) => {
                let grown: Vec<RgbImage> = images
                    .par_iter()
                    .map(|img| insert_seams(img, seams))
                    .collect::<Result<_>>()?;
                *images = grown;
            }
        }
        Ok(())
    }

    /// Average gradient energy per pixel of the fused working preview.
    fn preview_energy(&self, fusion: &FusionConfig, labels: &[String]) -> Result<f64> {
        let fused = match self {
            Ctx::Direct(img) => img.clone(),
            Ctx::Stack(images, _) => {
                let stack = ImageStack::new(images.clone(), labels.to_vec())?;
                fuse_stack_detailed(&stack, fusion)?.image
            }
        };
        Ok(average_energy_per_pixel(&gradient_energy(&to_luminance(
            &fused,
        ))?))
    }
}

fn run_reduce(
    ctx: &mut Ctx,
    k: usize,
    plan: &RetargetPlan,
    fusion: &FusionConfig,
    labels: &[String],
) -> Result<Vec<TraceStep>> {
    let mut steps = Vec::with_capacity(k);
    for step in 1..=k {
        let (seam, source) = ctx.choose_seam()?;
        ctx.remove(&seam)?;
        let avg = match plan.trace_mode {
            TraceMode::Full => Some(ctx.preview_energy(fusion, labels)?),
            TraceMode::Light => None,
        };
        steps.push(TraceStep {
            step,
            source,
            seam_energy: seam.energy,
            avg_energy_per_pixel: avg,
        });
    }
    Ok(steps)
}

/// Plans `k` insertion seams by simulated successive removal on a clone of
/// the working state, mapping each chosen seam back to original-image
/// coordinates. The returned seams are pairwise disjoint in every row.
fn plan_seams(
    ctx: &Ctx,
    k: usize,
    plan: &RetargetPlan,
    fusion: &FusionConfig,
    labels: &[String],
) -> Result<(Vec<Seam>, Vec<TraceStep>)> {
    let (w, h) = (ctx.width(), ctx.height());
    if k >= w {
        return Err(Error::TooManySeams {
            requested: k,
            width: w,
        });
    }
    let mut sim = ctx.clone();
    // per-row map from working column to original column
    let mut maps: Vec<Vec<usize>> = vec![(0..w).collect(); h];
    let mut planned = Vec::with_capacity(k);
    let mut steps = Vec::with_capacity(k);
    for step in 1..=k {
        let (seam, source) = sim.choose_seam()?;
        let columns: Vec<usize> = seam
            .columns
            .iter()
            .enumerate()
            .map(|(y, &c)| maps[y][c])
            .collect();
        for (y, &c) in seam.columns.iter().enumerate() {
            maps[y].remove(c);
        }
        planned.push(Seam {
            columns,
            energy: seam.energy,
        });
        sim.remove(&seam)?;
        let avg = match plan.trace_mode {
            TraceMode::Full => Some(sim.preview_energy(fusion, labels)?),
            TraceMode::Light => None,
        };
        steps.push(TraceStep {
            step,
            source,
            seam_energy: seam.energy,
            avg_energy_per_pixel: avg,
        });
    }
    Ok((planned, steps))
}

/// Insertion seams a plan would use, in original coordinates of the
/// axis-normalized frame (vertical seams; height-change plans are
/// expressed on the transposed stack).
pub fn plan_insertion_seams(
    stack: &ImageStack,
    plan: &RetargetPlan,
    fusion: &FusionConfig,
) -> Result<Vec<Seam>> {
    fusion.validate()?;
    let work = match plan.axis {
        Axis::Horizontal => stack.clone(),
        Axis::Vertical => stack.transpose(),
    };
    let k = plan.seam_count(work.width());
    let ctx = make_ctx(&work, plan.strategy, fusion)?;
    let light = plan.clone().with_trace_mode(TraceMode::Light);
    let (seams, _) = plan_seams(&ctx, k, &light, fusion, work.labels())?;
    Ok(seams)
}

fn make_ctx(work: &ImageStack, strategy: Strategy, fusion: &FusionConfig) -> Result<Ctx> {
    Ok(match SelectionMode::for_strategy(strategy) {
        None => Ctx::Direct(fuse_stack_detailed(work, fusion)?.image),
        Some(mode) => Ctx::Stack(work.images().to_vec(), mode),
    })
}

/// Runs one full retargeting pipeline and returns the fused image at the
/// target size together with the per-step trace.
pub fn retarget(
    stack: &ImageStack,
    plan: &RetargetPlan,
    fusion: &FusionConfig,
) -> Result<RetargetOutput> {
    fusion.validate()?;
    let work = match plan.axis {
        Axis::Horizontal => stack.clone(),
        Axis::Vertical => stack.transpose(),
    };
    let current = work.width();
    let direction = plan.direction(current);
    let k = plan.seam_count(current);
    if direction == Direction::Reduce && plan.target_size < 2 {
        return Err(Error::InvalidPlan(format!(
            "reduce target {} is below the minimum width of 2",
            plan.target_size
        )));
    }

    let labels = work.labels().to_vec();
    let mut ctx = make_ctx(&work, plan.strategy, fusion)?;
    let direct_overshoot = match &ctx {
        Ctx::Direct(_) => fuse_stack_detailed(&work, fusion)?.overshoot,
        Ctx::Stack(..) => 0.0,
    };

    let steps = match direction {
        Direction::Reduce => run_reduce(&mut ctx, k, plan, fusion, &labels)?,
        Direction::Enlarge => {
            let (seams, steps) = plan_seams(&ctx, k, plan, fusion, &labels)?;
            ctx.insert(&seams)?;
            steps
        }
    };

    let (image, carved_stack, overshoot) = match ctx {
        Ctx::Direct(img) => (img, None, direct_overshoot),
        Ctx::Stack(images, _) => {
            let carved = ImageStack::new(images, labels)?;
            let fused = fuse_stack_detailed(&carved, fusion)?;
            (fused.image, Some(carved), fused.overshoot)
        }
    };

    let (image, carved_stack) = match plan.axis {
        Axis::Horizontal => (image, carved_stack),
        Axis::Vertical => (image.transpose(), carved_stack.map(|s| s.transpose())),
    };

    debug_assert_eq!(
        match plan.axis {
            Axis::Horizontal => image.width(),
            Axis::Vertical => image.height(),
        },
        plan.target_size
    );

    Ok(RetargetOutput {
        image,
        carved_stack,
        trace: StrategyTrace {
            steps,
            fused_overshoot: overshoot,
        },
    })
}

/// Plain recompute-energy seam carving of a single image — the operation
/// the direct strategy applies after fusion. Exposed for comparisons
/// against the stack strategies' pre-fusion results.
pub fn carve_image(img: &RgbImage, seams: usize) -> Result<RgbImage> {
    let mut out = img.clone();
    for _ in 0..seams {
        let e = gradient_energy(&to_luminance(&out))?;
        out = remove_seam(&out, &min_seam(&e))?;
    }
    Ok(out)
}
