//! Executable measurement-assisted protocols: ground-state synthesis,
//! anyon pair creation, transport, braiding, fusion, and interferometry.
//!
//! Protocols are written against [`ProtocolRun`], which owns the evolving
//! state, resolves measurement outcomes according to the configured
//! [`OutcomePolicy`], and records a transcript. Under the enumerate policy a
//! protocol is replayed once per outcome prefix, exploring the full branch
//! tree.

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::QdError;
use crate::group::FiniteGroup;
use crate::lattice::{Face, LatticeGeometry, Vertex};
use crate::state::{LocalBasis, OutcomePolicy, SparseState};

pub mod electric;
pub mod ground_state;
pub mod interferometry;
pub mod magnetic;

pub use electric::*;
pub use ground_state::*;
pub use interferometry::*;
pub use magnetic::*;

/// One transcript entry: an operation, the sites it touched, and (for
/// measurements) the outcome and its Born probability.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub op: String,
    pub sites: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome_label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
}

/// Operation counters for resource reporting.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct OpCounts {
    pub single: usize,
    pub controlled: usize,
    pub measurements: usize,
    pub peak_support: usize,
}

/// Location (and bookkeeping) of a created excitation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum AnyonHandle {
    /// Magnetic flux at `face`, valued with respect to `base`.
    Magnetic { face: Face, base: Vertex, class: usize },
    /// Electric charge at `vertex` whose pair string ends on `string_edge`.
    Electric { vertex: Vertex, string_edge: usize, irrep: usize },
    /// Dyon at (vertex, face).
    Dyonic { vertex: Vertex, face: Face, class: usize },
}

/// Result of running a protocol to completion on one branch.
#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub state: SparseState,
    pub transcript: Vec<TranscriptEntry>,
    pub counts: OpCounts,
    /// Product of the Born probabilities of all measurement outcomes on
    /// this branch.
    pub branch_probability: f64,
}

/// Execution context handed to protocol bodies.
pub struct ProtocolRun {
    pub state: SparseState,
    pub geom: Arc<LatticeGeometry>,
    pub transcript: Vec<TranscriptEntry>,
    pub counts: OpCounts,
    pub branch_probability: f64,
    mode: RunMode,
}

enum RunMode {
    Sample(ChaCha8Rng),
    Postselect(usize),
    /// Replay with a forced outcome prefix; once past the prefix, take the
    /// first outcome with nonzero probability and report the alternatives.
    Replay { prefix: Vec<usize>, cursor: usize, fresh: Vec<(usize, Vec<usize>)> },
}

impl ProtocolRun {
    pub fn new(
        state: SparseState,
        geom: Arc<LatticeGeometry>,
        policy: OutcomePolicy,
    ) -> ProtocolRun {
        let mode = match policy {
            OutcomePolicy::Sample { seed } => RunMode::Sample(ChaCha8Rng::seed_from_u64(seed)),
            OutcomePolicy::Postselect { outcome } => RunMode::Postselect(outcome),
            OutcomePolicy::Enumerate => {
                RunMode::Replay { prefix: Vec::new(), cursor: 0, fresh: Vec::new() }
            }
        };
        ProtocolRun {
            state,
            geom,
            transcript: Vec::new(),
            counts: OpCounts::default(),
            branch_probability: 1.0,
            mode,
        }
    }

    fn with_prefix(
        state: SparseState,
        geom: Arc<LatticeGeometry>,
        prefix: Vec<usize>,
    ) -> ProtocolRun {
        ProtocolRun {
            state,
            geom,
            transcript: Vec::new(),
            counts: OpCounts::default(),
            branch_probability: 1.0,
            mode: RunMode::Replay { prefix, cursor: 0, fresh: Vec::new() },
        }
    }

    pub fn group(&self) -> Arc<FiniteGroup> {
        self.state.group.clone()
    }

    fn note_support(&mut self) {
        self.counts.peak_support = self.counts.peak_support.max(self.state.support());
    }

    pub fn record(&mut self, op: &str, sites: &[usize]) {
        self.transcript.push(TranscriptEntry {
            op: op.into(),
            sites: sites.to_vec(),
            outcome: None,
            outcome_label: None,
            probability: None,
        });
    }

    pub fn apply_single(
        &mut self,
        op: &str,
        site: usize,
        u: &[Vec<Complex64>],
    ) -> Result<(), QdError> {
        self.state.apply_single(site, u)?;
        self.counts.single += 1;
        self.record(op, &[site]);
        self.note_support();
        Ok(())
    }

    pub fn apply_controlled(
        &mut self,
        op: &str,
        control: usize,
        target: usize,
        family: &[Vec<Vec<Complex64>>],
    ) -> Result<(), QdError> {
        self.state.apply_controlled(control, target, family)?;
        self.counts.controlled += 1;
        self.record(op, &[control, target]);
        self.note_support();
        Ok(())
    }

    pub fn swap(&mut self, op: &str, a: usize, b: usize) -> Result<(), QdError> {
        self.state.swap_sites(a, b)?;
        self.counts.controlled += 1;
        self.record(op, &[a, b]);
        Ok(())
    }

    /// Measure `site` in `basis`, resolving the outcome per the policy.
    pub fn measure(
        &mut self,
        op: &str,
        site: usize,
        basis: &LocalBasis,
    ) -> Result<usize, QdError> {
        let probs = self.state.measure_probs(site, basis);
        let outcome = match &mut self.mode {
            RunMode::Sample(rng) => {
                let dist = WeightedIndex::new(&probs)
                    .map_err(|e| QdError::Protocol(format!("bad outcome distribution: {e}")))?;
                dist.sample(rng)
            }
            RunMode::Postselect(o) => {
                let o = *o;
                if o >= probs.len() || probs[o] < 1e-12 {
                    return Err(QdError::ImpossibleOutcome {
                        outcome: o,
                        probability: probs.get(o).copied().unwrap_or(0.0),
                    });
                }
                o
            }
            RunMode::Replay { prefix, cursor, fresh } => {
                if *cursor < prefix.len() {
                    let o = prefix[*cursor];
                    *cursor += 1;
                    if probs[o] < 1e-12 {
                        return Err(QdError::ImpossibleOutcome { outcome: o, probability: probs[o] });
                    }
                    o
                } else {
                    let mut nonzero = (0..probs.len()).filter(|&o| probs[o] >= 1e-12);
                    let first = nonzero.next().ok_or_else(|| {
                        QdError::Protocol("measurement with no nonzero outcome".into())
                    })?;
                    let decided = *cursor;
                    for alt in nonzero {
                        fresh.push((decided, vec![alt]));
                    }
                    *cursor += 1;
                    prefix.push(first);
                    first
                }
            }
        };
        let prob = self.state.collapse(site, basis, outcome)?;
        self.branch_probability *= prob;
        self.counts.measurements += 1;
        self.transcript.push(TranscriptEntry {
            op: op.into(),
            sites: vec![site],
            outcome: Some(outcome),
            outcome_label: Some(basis.outcome_labels[outcome].clone()),
            probability: Some(prob),
        });
        self.note_support();
        Ok(outcome)
    }

    /// Draw from an explicit discrete distribution (used by resampling loops
    /// that are not single-site projective measurements).
    pub fn choose(&mut self, op: &str, probs: &[f64]) -> Result<usize, QdError> {
        let outcome = match &mut self.mode {
            RunMode::Sample(rng) => {
                let dist = WeightedIndex::new(probs)
                    .map_err(|e| QdError::Protocol(format!("bad outcome distribution: {e}")))?;
                dist.sample(rng)
            }
            RunMode::Postselect(o) => {
                let o = *o;
                if o >= probs.len() || probs[o] < 1e-12 {
                    return Err(QdError::ImpossibleOutcome {
                        outcome: o,
                        probability: probs.get(o).copied().unwrap_or(0.0),
                    });
                }
                o
            }
            RunMode::Replay { prefix, cursor, fresh } => {
                if *cursor < prefix.len() {
                    let o = prefix[*cursor];
                    *cursor += 1;
                    o
                } else {
                    let mut nonzero = (0..probs.len()).filter(|&o| probs[o] >= 1e-12);
                    let first = nonzero.next().ok_or_else(|| {
                        QdError::Protocol("choice with no nonzero outcome".into())
                    })?;
                    let decided = *cursor;
                    for alt in nonzero {
                        fresh.push((decided, vec![alt]));
                    }
                    *cursor += 1;
                    prefix.push(first);
                    first
                }
            }
        };
        self.branch_probability *= probs[outcome];
        self.counts.measurements += 1;
        self.transcript.push(TranscriptEntry {
            op: op.into(),
            sites: vec![],
            outcome: Some(outcome),
            outcome_label: None,
            probability: Some(probs[outcome]),
        });
        Ok(outcome)
    }

    pub fn into_result(self) -> ProtocolResult {
        ProtocolResult {
            state: self.state,
            transcript: self.transcript,
            counts: self.counts,
            branch_probability: self.branch_probability,
        }
    }
}

/// One enumerated branch of a protocol run.
#[derive(Debug)]
pub struct Branch<T> {
    pub outcomes: Vec<usize>,
    pub probability: f64,
    pub result: T,
    pub protocol: ProtocolResult,
}

/// Run a protocol under a policy. Sample and postselect yield one branch;
/// enumerate explores the whole outcome tree depth-first by replaying the
/// protocol with forced prefixes.
pub fn run_protocol<T>(
    initial: &SparseState,
    geom: &Arc<LatticeGeometry>,
    policy: OutcomePolicy,
    body: impl Fn(&mut ProtocolRun) -> Result<T, QdError>,
) -> Result<Vec<Branch<T>>, QdError> {
    match policy {
        OutcomePolicy::Sample { .. } | OutcomePolicy::Postselect { .. } => {
            let mut run = ProtocolRun::new(initial.clone(), geom.clone(), policy);
            let result = body(&mut run)?;
            let prefix = run
                .transcript
                .iter()
                .filter_map(|t| t.outcome)
                .collect::<Vec<_>>();
            let probability = run.branch_probability;
            Ok(vec![Branch { outcomes: prefix, probability, result, protocol: run.into_result() }])
        }
        OutcomePolicy::Enumerate => {
            let mut pending: Vec<Vec<usize>> = vec![Vec::new()];
            let mut branches = Vec::new();
            while let Some(prefix) = pending.pop() {
                let mut run = ProtocolRun::with_prefix(initial.clone(), geom.clone(), prefix);
                let result = body(&mut run)?;
                let (taken, fresh) = match run.mode {
                    RunMode::Replay { ref prefix, ref fresh, .. } => {
                        (prefix.clone(), fresh.clone())
                    }
                    _ => unreachable!(),
                };
                for (decided, alts) in fresh {
                    let mut alt_prefix: Vec<usize> = taken[..decided].to_vec();
                    alt_prefix.extend(alts);
                    pending.push(alt_prefix);
                }
                let probability = run.branch_probability;
                branches.push(Branch {
                    outcomes: taken,
                    probability,
                    result,
                    protocol: run.into_result(),
                });
            }
            Ok(branches)
        }
    }
}
