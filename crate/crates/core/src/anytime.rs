//! Anytime improvement loop: greedy orders first, then repeated nested
//! dissection with varying cutter parameters, printing each strictly better
//! decomposition at a throttled rate.

use std::io::Write;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::decomposition::{validate_td, TreeDecomposition};
use crate::elimination::{min_degree_order_until, min_fill_order_until, order_to_td};
use crate::flowcutter::{CutterConfig, SeparatorMode};
use crate::graph::Graph;
use crate::io::write_td;
use crate::multilevel::NestedDissection;

pub const CUTTER_SCHEDULE: [usize; 4] = [1, 2, 4, 8];
pub const BALANCE_SCHEDULE: [f64; 5] = [0.1, 0.2, 0.25, 0.33, 0.4];
pub const DEFAULT_LARGE_THRESHOLD: usize = 500_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Auto,
    FlowCutter,
    MinDegree,
    MinFill,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Mode::Auto),
            "flowcutter" => Ok(Mode::FlowCutter),
            "min-degree" | "min_degree" => Ok(Mode::MinDegree),
            "min-fill" | "min_fill" => Ok(Mode::MinFill),
            _ => Err(format!("unknown mode {s:?} (auto, flowcutter, min-degree, min-fill)")),
        }
    }
}

impl FromStr for SeparatorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "node" | "nodes" => Ok(SeparatorMode::NodeCapacities),
            "edge" | "edges" => Ok(SeparatorMode::EdgeCutEndpoints),
            _ => Err(format!("unknown separator mode {s:?} (node, edge)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub max_seconds: u64,
    pub output_interval_seconds: u64,
    pub mode: Mode,
    /// Overrides the size-based choice between node and edge separators.
    pub separator_mode: Option<SeparatorMode>,
    pub large_instance_edge_threshold: usize,
    /// Validate every decomposition before it replaces the best one.
    pub validate: bool,
    /// Stop after this many nested-dissection runs.
    pub max_iterations: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            max_seconds: 1800,
            output_interval_seconds: 30,
            mode: Mode::Auto,
            separator_mode: None,
            large_instance_edge_threshold: DEFAULT_LARGE_THRESHOLD,
            validate: false,
            max_iterations: None,
        }
    }
}

impl RunConfig {
    pub fn check(&self) -> Result<(), RunError> {
        if self.max_seconds == 0 {
            return Err(RunError::Config("max seconds must be positive".into()));
        }
        if self.output_interval_seconds > self.max_seconds {
            return Err(RunError::Config(format!(
                "output interval {} exceeds max seconds {}",
                self.output_interval_seconds, self.max_seconds
            )));
        }
        Ok(())
    }

    fn is_large(&self, g: &Graph) -> bool {
        g.edge_count() > self.large_instance_edge_threshold
    }

    pub fn separator_mode_for(&self, g: &Graph) -> SeparatorMode {
        self.separator_mode.unwrap_or(if self.is_large(g) {
            SeparatorMode::EdgeCutEndpoints
        } else {
            SeparatorMode::NodeCapacities
        })
    }

    /// Cutter parameters of nested-dissection run `i`.
    pub fn schedule(&self, g: &Graph, i: usize) -> CutterConfig {
        CutterConfig {
            cutter_count: CUTTER_SCHEDULE[i % CUTTER_SCHEDULE.len()],
            min_balance: BALANCE_SCHEDULE[i % BALANCE_SCHEDULE.len()],
            seed: self.seed.wrapping_add(i as u64),
            separator_mode: self.separator_mode_for(g),
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestSolution {
    pub td: TreeDecomposition,
    pub width: usize,
    /// Time since the start of the run.
    pub found_after: Duration,
    pub producer: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The chosen mode has nothing more to try.
    Exhausted,
    /// The best width matches a trivial lower bound.
    Optimal,
    IterationLimit,
    Deadline,
    Signal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub best: BestSolution,
    pub iterations: usize,
    pub emissions: usize,
    pub stop: StopReason,
}

struct Driver<'a> {
    graph: &'a Graph,
    cfg: &'a RunConfig,
    stop: &'a AtomicBool,
    out: &'a mut dyn Write,
    start: Instant,
    deadline: Instant,
    interval: Duration,
    best: BestSolution,
    last_emit: Option<Instant>,
    pending: bool,
    emissions: usize,
    lower_bound: usize,
}

impl Driver<'_> {
    fn stop_reason(&self) -> Option<StopReason> {
        if self.stop.load(Ordering::Relaxed) {
            Some(StopReason::Signal)
        } else if Instant::now() >= self.deadline {
            Some(StopReason::Deadline)
        } else if self.best.width <= self.lower_bound {
            Some(StopReason::Optimal)
        } else {
            None
        }
    }

    fn offer(&mut self, td: TreeDecomposition, producer: String) -> Result<(), RunError> {
        let width = td.width();
        if width >= self.best.width {
            return Ok(());
        }
        if self.cfg.validate {
            validate_td(self.graph, &td).map_err(|v| RunError::Invariant(format!("{producer}: {v}")))?;
        }
        self.best = BestSolution { td, width, found_after: self.start.elapsed(), producer };
        self.pending = true;
        Ok(())
    }

    fn emission_due(&self) -> bool {
        self.pending && self.last_emit.is_none_or(|t| t.elapsed() >= self.interval)
    }

    fn emit(&mut self) -> Result<(), RunError> {
        let text = write_td(&self.best.td, self.graph.node_count());
        self.out.write_all(text.as_bytes())?;
        self.out.flush()?;
        self.last_emit = Some(Instant::now());
        self.pending = false;
        self.emissions += 1;
        Ok(())
    }

    fn maybe_emit(&mut self) -> Result<(), RunError> {
        if self.emission_due() {
            self.emit()?;
        }
        Ok(())
    }

    fn greedy(&mut self, min_fill: bool) -> Result<(), RunError> {
        let stop = self.stop;
        let deadline = self.deadline;
        let abort = || stop.load(Ordering::Relaxed) || Instant::now() >= deadline;
        let order = if min_fill {
            min_fill_order_until(self.graph, &abort)
        } else {
            min_degree_order_until(self.graph, &abort)
        };
        if let Some(o) = order {
            let name = if min_fill { "min-fill" } else { "min-degree" };
            self.offer(order_to_td(self.graph, &o), name.to_string())?;
            self.maybe_emit()?;
        }
        Ok(())
    }

    /// One nested-dissection run. The live state is materialized only when
    /// it is about to be printed or the run ends, as its width never grows.
    fn dissect(&mut self, i: usize) -> Result<Option<StopReason>, RunError> {
        let cutter = self.cfg.schedule(self.graph, i);
        let producer = format!(
            "nested dissection, {} cutters, balance {}, seed {}",
            cutter.cutter_count, cutter.min_balance, cutter.seed
        );
        let mut nd = NestedDissection::new(self.graph, cutter)
            .map_err(|e| RunError::Invariant(format!("cutter configuration rejected: {e}")))?;
        let mut stopped = None;
        loop {
            let improved = nd.width() < self.best.width;
            if improved && (self.last_emit.is_none_or(|t| t.elapsed() >= self.interval)) {
                self.offer(nd.decomposition(), producer.clone())?;
                self.emit()?;
            }
            if nd.is_finished() {
                break;
            }
            if let Some(r) = self.stop_reason() {
                stopped = Some(r);
                break;
            }
            nd.step();
        }
        if nd.width() < self.best.width {
            self.offer(nd.decomposition(), producer)?;
        }
        self.maybe_emit()?;
        Ok(stopped)
    }

    fn run(&mut self) -> Result<(usize, StopReason), RunError> {
        let mode = self.cfg.mode;
        if mode == Mode::MinDegree || (mode == Mode::Auto && !self.cfg.is_large(self.graph)) {
            self.greedy(false)?;
        }
        if mode == Mode::MinFill || (mode == Mode::Auto && !self.cfg.is_large(self.graph)) {
            if let Some(r) = self.stop_reason() {
                return Ok((0, r));
            }
            self.greedy(true)?;
        }
        if let Some(r) = self.stop_reason() {
            return Ok((0, r));
        }
        if matches!(mode, Mode::MinDegree | Mode::MinFill) {
            return Ok((0, StopReason::Exhausted));
        }
        let mut i = 0;
        loop {
            if self.cfg.max_iterations.is_some_and(|cap| i >= cap) {
                return Ok((i, StopReason::IterationLimit));
            }
            if let Some(r) = self.dissect(i)? {
                return Ok((i, r));
            }
            i += 1;
            if let Some(r) = self.stop_reason() {
                return Ok((i, r));
            }
        }
    }
}

/// Runs until the mode is exhausted, the deadline passes, `stop` is set or
/// the iteration cap is reached, then prints the best decomposition one
/// last time. Every document written to `out` is complete.
pub fn run(g: &Graph, cfg: &RunConfig, stop: &AtomicBool, out: &mut dyn Write) -> Result<RunSummary, RunError> {
    cfg.check()?;
    let start = Instant::now();
    let trivial = TreeDecomposition::single_bag(g.node_count());
    let mut driver = Driver {
        graph: g,
        cfg,
        stop,
        out,
        start,
        deadline: start + Duration::from_secs(cfg.max_seconds),
        interval: Duration::from_secs(cfg.output_interval_seconds),
        best: BestSolution { width: trivial.width(), td: trivial, found_after: Duration::ZERO, producer: "single bag".into() },
        last_emit: None,
        pending: false,
        emissions: 0,
        lower_bound: g.degeneracy(),
    };
    let (iterations, stop_reason) = driver.run()?;
    driver.emit()?;
    Ok(RunSummary { best: driver.best, iterations, emissions: driver.emissions, stop: stop_reason })
}
