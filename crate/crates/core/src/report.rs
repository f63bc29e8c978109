//! The combined analysis behind the `analyze` command.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::counts::{
    gain_tightness_check_with, maxwell_check_with, rank_graded_sparsity_check_with, Condition, CountReport, Gates,
};
use crate::document::OrbitGraphDocument;
use crate::error::{Error, Result};
use crate::rigidity::{
    build_rigidity_matrix, flex_basis_of, generic_rank_with, stress_basis_of, target_rank, Arithmetic, DEFAULT_TRIALS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub trials: usize,
    pub seed: u64,
    pub arithmetic: Arithmetic,
    pub allow_degenerate: bool,
    pub gates: Gates,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
            arithmetic: Arithmetic::Exact,
            allow_degenerate: false,
            gates: Gates::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountOutcome {
    Ran(CountReport),
    Skipped(String),
}

impl CountOutcome {
    pub fn passed(&self) -> Option<bool> {
        match self {
            CountOutcome::Ran(r) => Some(r.pass),
            CountOutcome::Skipped(_) => None,
        }
    }

    fn label(&self) -> String {
        match self {
            CountOutcome::Ran(r) if r.pass => "pass".into(),
            CountOutcome::Ran(_) => "fail".into(),
            CountOutcome::Skipped(why) => format!("skipped: {why}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub dim: usize,
    pub vertices: usize,
    pub edges: usize,
    /// Rank at the given positions, or the sampled generic rank without them.
    pub rank: usize,
    pub target: usize,
    pub rigid: bool,
    pub has_positions: bool,
    pub degenerate: bool,
    pub generic_rank: usize,
    pub flex_dimension: usize,
    pub stress_dimension: usize,
    pub options: AnalyzeOptions,
    pub counts: Vec<(Condition, CountOutcome)>,
    pub timing: Vec<(&'static str, Duration)>,
}

impl AnalysisReport {
    pub fn generically_rigid(&self) -> bool {
        self.generic_rank == self.target
    }

    pub fn count(&self, condition: Condition) -> Option<&CountOutcome> {
        self.counts.iter().find(|(c, _)| *c == condition).map(|(_, o)| o)
    }

    /// Flat `key=value` lines with stable keys.
    pub fn to_kv(&self, include_timing: bool) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("name", self.name.clone().unwrap_or_default());
        kv("dim", self.dim.to_string());
        kv("vertices", self.vertices.to_string());
        kv("edges", self.edges.to_string());
        kv("rank_source", if self.has_positions { "positions" } else { "generic" }.into());
        kv("rank", self.rank.to_string());
        kv("target_rank", self.target.to_string());
        kv("rigid", self.rigid.to_string());
        kv("flex_dimension", self.flex_dimension.to_string());
        kv("stress_dimension", self.stress_dimension.to_string());
        kv("generic_rank", self.generic_rank.to_string());
        kv("generically_rigid", self.generically_rigid().to_string());
        kv("degenerate", self.degenerate.to_string());
        kv("arithmetic", arithmetic_name(self.options.arithmetic).into());
        kv("trials", self.options.trials.to_string());
        kv("seed", self.options.seed.to_string());
        for (c, outcome) in &self.counts {
            kv(&format!("count.{c}"), outcome.label());
            if let CountOutcome::Ran(r) = outcome {
                kv(&format!("count.{c}.violations"), r.violation_count.to_string());
            }
        }
        if include_timing {
            for (stage, t) in &self.timing {
                kv(&format!("time.{stage}_ms"), format!("{:.3}", t.as_secs_f64() * 1e3));
            }
        }
        out
    }

    /// Human-readable summary.
    pub fn to_text(&self, include_timing: bool) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "{name}");
        }
        let _ = writeln!(out, "  graph:       d={}, {} vertices, {} edges", self.dim, self.vertices, self.edges);
        let source = if self.has_positions { "at given positions" } else { "generic, sampled" };
        let _ = writeln!(out, "  rank:        {}/{} ({source})", self.rank, self.target);
        let verdict = if self.rigid { "rigid" } else { "flexible" };
        let _ = writeln!(out, "  verdict:     {verdict}");
        if self.degenerate {
            let _ = writeln!(out, "  warning:     coincident positions; rank is geometric, not generic");
        }
        let _ = writeln!(out, "  flexes:      {}", self.flex_dimension);
        let _ = writeln!(out, "  stresses:    {}", self.stress_dimension);
        let _ = writeln!(
            out,
            "  generic:     rank {}/{} over {} trial(s), seed {}",
            self.generic_rank, self.target, self.options.trials, self.options.seed
        );
        for (c, outcome) in &self.counts {
            let _ = writeln!(out, "  {:<16}{}", format!("{c}:"), outcome.label());
            if let CountOutcome::Ran(r) = outcome {
                for v in r.violations.iter().take(5) {
                    let rank = v.gain_rank.map(|k| format!(", gain rank {k}")).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "      vertices {:?} edges {:?}: {} vs bound {}{rank}",
                        v.vertices, v.edges, v.measured, v.bound
                    );
                }
                if r.violation_count > 5 {
                    let _ = writeln!(out, "      ... {} violations in total", r.violation_count);
                }
            }
        }
        if include_timing {
            for (stage, t) in &self.timing {
                let _ = writeln!(out, "  time {stage}: {:.3} ms", t.as_secs_f64() * 1e3);
            }
        }
        out
    }
}

fn arithmetic_name(a: Arithmetic) -> &'static str {
    match a {
        Arithmetic::Exact => "exact",
        Arithmetic::Float => "float",
    }
}

fn timed<T>(timing: &mut Vec<(&'static str, Duration)>, stage: &'static str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timing.push((stage, start.elapsed()));
    out
}

pub fn analyze(doc: &OrbitGraphDocument, options: &AnalyzeOptions) -> Result<AnalysisReport> {
    let graph = doc.graph()?;
    graph.ensure_connected()?;
    let framework = doc.framework(options.allow_degenerate)?;
    let d = graph.dim();
    let n = graph.vertex_count();
    let target = target_rank(d, n);
    let mut timing = Vec::new();

    let generic_rank = timed(&mut timing, "generic_rank", || {
        generic_rank_with(&graph, options.trials, options.seed, options.arithmetic)
    })?;

    let (rank, flex_dimension, stress_dimension, degenerate) = match &framework {
        Some(f) => timed(&mut timing, "rigidity", || -> Result<_> {
            let m = build_rigidity_matrix(f)?;
            let rank = m.rank_with(options.arithmetic);
            let (flexes, stresses) = match options.arithmetic {
                Arithmetic::Exact => (flex_basis_of(&m).dimension(), stress_basis_of(&m).dimension()),
                Arithmetic::Float => ((d * n).saturating_sub(rank + d), graph.edge_count() - rank),
            };
            Ok((rank, flexes, stresses, f.is_degenerate()))
        })?,
        None => (
            generic_rank,
            (d * n).saturating_sub(generic_rank + d),
            graph.edge_count() - generic_rank,
            false,
        ),
    };

    let mut counts = Vec::new();
    let maxwell = timed(&mut timing, "maxwell", || maxwell_check_with(&graph, options.gates));
    counts.push((Condition::Maxwell, CountOutcome::Ran(maxwell)));
    let gated = |r: Result<CountReport>| match r {
        Ok(report) => Ok(CountOutcome::Ran(report)),
        Err(Error::GateExceeded { .. }) => Ok(CountOutcome::Skipped("gate".into())),
        Err(e) => Err(e),
    };
    let tightness = timed(&mut timing, "gain_tightness", || {
        gated(gain_tightness_check_with(&graph, options.gates))
    })?;
    counts.push((Condition::GainTightness, tightness));
    let graded = timed(&mut timing, "rank_graded", || {
        gated(rank_graded_sparsity_check_with(&graph, options.gates))
    })?;
    counts.push((Condition::RankGraded, graded));

    Ok(AnalysisReport {
        name: doc.name.clone(),
        dim: d,
        vertices: n,
        edges: graph.edge_count(),
        rank,
        target,
        rigid: rank == target,
        has_positions: framework.is_some(),
        degenerate,
        generic_rank,
        flex_dimension,
        stress_dimension,
        options: *options,
        counts,
        timing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::parse;

    const E1: &str = "\
name e1
dim 2
vertices 4
position 0 1/7 2/9
position 1 3/5 1/8
position 2 5/6 4/7
position 3 2/9 3/4
edge 0 1 0 0
edge 1 2 0 0
edge 2 3 0 0
edge 0 3 0 0
edge 2 0 1 0
edge 0 3 0 1
";

    #[test]
    fn rigid_example() {
        let r = analyze(&parse(E1).unwrap(), &AnalyzeOptions::default()).unwrap();
        assert!(r.rigid);
        assert_eq!((r.rank, r.target, r.flex_dimension, r.stress_dimension), (6, 6, 0, 0));
        assert!(r.counts.iter().all(|(_, o)| o.passed() == Some(true)));
        let kv = r.to_kv(false);
        assert!(kv.contains("rank=6\n") && kv.contains("rigid=true\n") && kv.contains("count.maxwell=pass\n"));
        assert!(!kv.contains("time."));
        assert!(r.to_kv(true).contains("time.generic_rank_ms="));
    }

    #[test]
    fn gates_skip_counts() {
        let options = AnalyzeOptions {
            gates: Gates {
                max_vertices: 2,
                max_edges: 3,
            },
            ..Default::default()
        };
        let r = analyze(&parse(E1).unwrap(), &options).unwrap();
        assert_eq!(r.count(Condition::Maxwell).unwrap().passed(), Some(true));
        assert_eq!(r.count(Condition::GainTightness), Some(&CountOutcome::Skipped("gate".into())));
        assert!(r.to_kv(false).contains("count.rank_graded=skipped: gate\n"));
    }

    #[test]
    fn float_mode_and_no_positions() {
        let doc = parse(E1).unwrap();
        let options = AnalyzeOptions {
            arithmetic: Arithmetic::Float,
            ..Default::default()
        };
        assert_eq!(analyze(&doc, &options).unwrap().rank, 6);
        let mut bare = doc.clone();
        bare.positions = None;
        let r = analyze(&bare, &AnalyzeOptions::default()).unwrap();
        assert!(!r.has_positions && r.rigid && r.rank == 6);
    }

    #[test]
    fn disconnected_is_an_error() {
        let doc = parse("dim 2\nvertices 2\n").unwrap();
        assert_eq!(analyze(&doc, &AnalyzeOptions::default()), Err(Error::Disconnected));
    }
}
