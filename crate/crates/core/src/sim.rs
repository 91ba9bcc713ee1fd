//! Monte-Carlo FER and complexity sweeps.
//!
//! Frame `j` of a point draws its data and noise from a ChaCha8 generator
//! seeded with the sweep seed and switched to stream `j`, so every result
//! is independent of the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{awgn_transmit, ebn0_to_sigma};
use crate::code::PacCodeSpec;
use crate::construction::{build_tables, ConstructionTables, ThresholdCombine};
use crate::decoder::{Counters, DecodeOptions, DecodeResult, DecoderKind};
use crate::error::{Error, Result};
use crate::precoder::pac_encode;

pub const CSV_HEADER: &str =
    "ebn0_db,frames,errors,fer,avg_cycles,avg_stack_used,avg_fg_ops,avg_total_insertions";

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub spec: PacCodeSpec,
    pub decoder: DecoderKind,
    pub options: DecodeOptions,
    pub ebn0_db: Vec<f64>,
    /// Pruning parameter per point; a single value applies to every point.
    /// Ignored by the conventional stack decoder.
    pub p_th: Vec<f64>,
    pub threshold_combine: ThresholdCombine,
    pub min_frames: usize,
    pub min_errors: usize,
    pub max_frames: usize,
    pub seed: u64,
    /// Zero means all available cores.
    pub workers: usize,
    /// Transmit the all-zero data word instead of random data.
    pub all_zero: bool,
}

impl SweepConfig {
    pub fn new(spec: PacCodeSpec, decoder: DecoderKind, options: DecodeOptions) -> Self {
        Self {
            spec,
            decoder,
            options,
            ebn0_db: Vec::new(),
            p_th: Vec::new(),
            threshold_combine: ThresholdCombine::default(),
            min_frames: 1,
            min_errors: 400,
            max_frames: 1_000_000,
            seed: 0,
            workers: 0,
            all_zero: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ebn0_db.is_empty() {
            return Err(Error::Config("empty Eb/N0 grid".into()));
        }
        if self.min_frames == 0 {
            return Err(Error::Config("min_frames must be at least one".into()));
        }
        if self.max_frames < self.min_frames {
            return Err(Error::Config("max_frames is below min_frames".into()));
        }
        if self.decoder.prunes() {
            match self.p_th.len() {
                1 => {}
                l if l == self.ebn0_db.len() => {}
                0 => return Err(Error::Config("pruning decoder needs a P_th".into())),
                l => {
                    return Err(Error::Config(format!(
                        "{l} P_th values for {} Eb/N0 points",
                        self.ebn0_db.len()
                    )))
                }
            }
        }
        if let Some(&p) = self.p_th.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::OutOfRange { name: "P_th", value: p });
        }
        Ok(())
    }

    /// Rate used for the noise level; an all-frozen code is treated as
    /// carrying one bit.
    pub fn effective_rate(&self) -> f64 {
        self.spec.k().max(1) as f64 / self.spec.len() as f64
    }

    fn p_th_at(&self, point: usize) -> Option<f64> {
        if !self.decoder.prunes() {
            return None;
        }
        match self.p_th.len() {
            1 => Some(self.p_th[0]),
            _ => self.p_th.get(point).copied(),
        }
    }

    /// Tables used at grid point `point`.
    pub fn tables_at(&self, point: usize) -> Result<ConstructionTables> {
        let sigma = ebn0_to_sigma(self.ebn0_db[point], self.effective_rate())?;
        build_tables(sigma, self.spec.n(), self.p_th_at(point), self.threshold_combine)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointReport {
    pub ebn0_db: f64,
    pub frames: usize,
    pub frame_errors: usize,
    pub fer: f64,
    pub avg_cycles: f64,
    pub avg_stack_used: f64,
    pub avg_fg_ops: f64,
    pub avg_total_insertions: f64,
}

impl PointReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{:.4},{},{},{:.6e},{:.6},{:.6},{:.6},{:.6}",
            self.ebn0_db,
            self.frames,
            self.frame_errors,
            self.fer,
            self.avg_cycles,
            self.avg_stack_used,
            self.avg_fg_ops,
            self.avg_total_insertions
        )
    }
}

pub fn to_csv(reports: &[PointReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Outcome of one simulated frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutcome {
    pub data: Vec<u8>,
    pub result: DecodeResult,
    pub error: bool,
}

/// Generator of frame `frame` under `seed`.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// Simulates one frame: draws data, encodes, transmits at `sigma` and
/// decodes with `decoder`. Two decoders given the same seed and frame see
/// the same data and noise.
#[allow(clippy::too_many_arguments)]
pub fn simulate_frame(
    spec: &PacCodeSpec,
    tables: &ConstructionTables,
    decoder: DecoderKind,
    options: &DecodeOptions,
    sigma: f64,
    seed: u64,
    frame: u64,
    all_zero: bool,
) -> Result<FrameOutcome> {
    let mut rng = frame_rng(seed, frame);
    let data: Vec<u8> = if all_zero {
        vec![0; spec.k()]
    } else {
        (0..spec.k()).map(|_| rng.gen_range(0..2u8)).collect()
    };
    let x = pac_encode(&data, spec)?;
    let llrs = awgn_transmit(&x, sigma, &mut rng)?;
    let result = decoder.decode(spec, tables, &llrs, options)?;
    let error = result.d_hat.as_deref() != Some(data.as_slice());
    Ok(FrameOutcome { data, result, error })
}

fn batch_size(workers: usize) -> usize {
    (workers.max(1) * 64).min(4096)
}

/// Runs the sweep. At each point frames are decoded in parallel batches and
/// then scanned in index order; the point stops at the first frame count
/// that reaches `min_frames` and either `min_errors` errors or `max_frames`.
pub fn run_fer(config: &SweepConfig) -> Result<Vec<PointReport>> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if config.workers > 0 {
        builder = builder.num_threads(config.workers);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let batch = batch_size(pool.current_num_threads());

    let mut reports = Vec::with_capacity(config.ebn0_db.len());
    for point in 0..config.ebn0_db.len() {
        let ebn0 = config.ebn0_db[point];
        let sigma = ebn0_to_sigma(ebn0, config.effective_rate())?;
        let tables = config.tables_at(point)?;

        let mut frames = 0usize;
        let mut errors = 0usize;
        let mut sums = Counters::default();
        'point: loop {
            let start = frames as u64;
            let end = (frames + batch).min(config.max_frames) as u64;
            let outcomes: Vec<(bool, Counters)> = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|j| {
                        simulate_frame(
                            &config.spec,
                            &tables,
                            config.decoder,
                            &config.options,
                            sigma,
                            config.seed,
                            j,
                            config.all_zero,
                        )
                        .map(|o| (o.error, o.result.counters))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            for (error, c) in outcomes {
                frames += 1;
                errors += error as usize;
                sums.cycles += c.cycles;
                sums.stack_used += c.stack_used;
                sums.fg_ops += c.fg_ops;
                sums.total_insertions += c.total_insertions;
                if frames >= config.min_frames
                    && (errors >= config.min_errors || frames >= config.max_frames)
                {
                    break 'point;
                }
            }
        }
        let f = frames as f64;
        reports.push(PointReport {
            ebn0_db: ebn0,
            frames,
            frame_errors: errors,
            fer: errors as f64 / f,
            avg_cycles: sums.cycles as f64 / f,
            avg_stack_used: sums.stack_used as f64 / f,
            avg_fg_ops: sums.fg_ops as f64 / f,
            avg_total_insertions: sums.total_insertions as f64 / f,
        });
    }
    Ok(reports)
}
