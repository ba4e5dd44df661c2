//! Optimal solver for identical machines with incompatibility cliques and
//! unit weights: round-robin placement of the padded job set, then a
//! layer-wise matching repair pass per machine.
//!
//! Jobs are arranged in an m × b grid (machine × layer). Internally a layer
//! counts positions from the end of a machine's sequence: the grid stores
//! first-executed slots first, and a job in the q-th slot from the end
//! contributes q times its processing time to the total, which is how all
//! costs here are computed.

use crate::model::{evaluate, Instance, Schedule};
use crate::netopt::max_bipartite_matching;
use crate::SolveError;
use std::collections::{BTreeMap, BTreeSet};

/// The job set after every clique is filled up to one job per machine with
/// zero-time placeholders, so the grid is exactly m × b.
#[derive(Debug, Clone)]
pub struct PaddedInstance {
    pub machines: usize,
    /// One layer per clique.
    pub layers: usize,
    /// Every job id (real and placeholder) with its time and clique.
    pub time_of: BTreeMap<u32, u64>,
    pub clique_of: BTreeMap<u32, usize>,
    pub dummies: BTreeSet<u32>,
}

/// Machine × layer grid of job ids; `slots[machine][0]` executes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredSchedule {
    pub slots: Vec<Vec<u32>>,
}

impl LayeredSchedule {
    /// Total completion time: a job in the q-th slot from the end of its
    /// machine contributes q·p.
    pub fn objective(&self, padded: &PaddedInstance) -> u64 {
        let layers = padded.layers;
        let mut total = 0u64;
        for row in &self.slots {
            for (g, id) in row.iter().enumerate() {
                let q = (layers - g) as u64;
                total += q * padded.time_of[id];
            }
        }
        total
    }

    /// Job multiset of one layer over machines `from..`.
    #[cfg(test)]
    fn layer_multiset(&self, layer: usize, from: usize) -> BTreeMap<u32, usize> {
        let mut counts = BTreeMap::new();
        for row in &self.slots[from..] {
            *counts.entry(row[layer]).or_insert(0) += 1;
        }
        counts
    }
}

/// Fill every clique up to exactly `machines` jobs with zero-time
/// placeholders. Placeholder ids continue after the largest real id.
pub fn pad_cliques(instance: &Instance) -> Result<PaddedInstance, SolveError> {
    let machines = instance.machines();
    let mut time_of = BTreeMap::new();
    let mut clique_of = BTreeMap::new();
    let mut dummies = BTreeSet::new();
    let mut sizes = vec![0usize; instance.cliques()];
    for job in instance.jobs() {
        let p = job.time(0).finite().expect("identical instances have finite times");
        time_of.insert(job.id, p);
        clique_of.insert(job.id, job.clique);
        sizes[job.clique] += 1;
    }
    for (clique, &size) in sizes.iter().enumerate() {
        if size > machines {
            return Err(SolveError::CliqueTooLarge { clique, size });
        }
    }
    let mut next_id = instance.jobs().iter().map(|j| j.id).max().map_or(0, |id| id + 1);
    for (clique, &size) in sizes.iter().enumerate() {
        for _ in size..machines {
            time_of.insert(next_id, 0);
            clique_of.insert(next_id, clique);
            dummies.insert(next_id);
            next_id += 1;
        }
    }
    Ok(PaddedInstance {
        machines,
        layers: instance.cliques(),
        time_of,
        clique_of,
        dummies,
    })
}

/// Sort jobs by non-increasing time and deal them out round-robin: the s-th
/// job (1-based) goes to machine (s−1) mod m at the ⌈s/m⌉-th slot from the
/// end. Zero-time placeholders land in the earliest slots. The result is the
/// clique-free optimum arrangement.
pub fn round_robin(padded: &PaddedInstance) -> LayeredSchedule {
    let m = padded.machines;
    let b = padded.layers;
    let mut order: Vec<u32> = padded.time_of.keys().copied().collect();
    order.sort_by(|a, b| padded.time_of[b].cmp(&padded.time_of[a]).then(a.cmp(b)));
    assert_eq!(order.len(), m * b, "padding must square the grid");
    let mut slots = vec![vec![u32::MAX; b]; m];
    for (s0, id) in order.into_iter().enumerate() {
        let machine = s0 % m;
        let q = s0 / m + 1;
        slots[machine][b - q] = id;
    }
    LayeredSchedule { slots }
}

/// The repair pass failed to match cliques to layers. The layer structure
/// guarantees a perfect matching, so this signals a bug, never bad input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchingFailed;

impl std::fmt::Display for MatchingFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "clique-layer matching failed; the layer structure should forbid this")
    }
}

impl std::error::Error for MatchingFailed {}

/// Make machine `i` (0-based) hold one job of every clique by swapping jobs
/// within layers among machines i..m. Machines before `i` are untouched and
/// must already be conflict-free; per-layer job multisets over machines i..m
/// and the total completion time are preserved.
pub fn incompatibility_solving(
    i: usize,
    schedule: &LayeredSchedule,
    padded: &PaddedInstance,
) -> Result<LayeredSchedule, MatchingFailed> {
    let b = padded.layers;
    let mut edge_set = BTreeSet::new();
    for row in &schedule.slots[i..] {
        for (layer, id) in row.iter().enumerate() {
            edge_set.insert((padded.clique_of[id], layer));
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    let matching = max_bipartite_matching(b, b, &edges);

    let mut result = schedule.clone();
    for (clique, layer) in matching.iter().enumerate() {
        let layer = layer.ok_or(MatchingFailed)?;
        // Lowest machine index holding a job of this clique in the layer.
        let source = (i..result.slots.len())
            .find(|&machine| padded.clique_of[&result.slots[machine][layer]] == clique)
            .ok_or(MatchingFailed)?;
        let moved = result.slots[source][layer];
        result.slots[source][layer] = result.slots[i][layer];
        result.slots[i][layer] = moved;
    }

    let mut seen = BTreeSet::new();
    for id in &result.slots[i] {
        if !seen.insert(padded.clique_of[id]) {
            return Err(MatchingFailed);
        }
    }
    Ok(result)
}

/// Exact solver for identical machines, unit weights, no eligibility
/// restrictions: pad, round-robin, repair machines left to right, strip the
/// placeholders. The objective equals the clique-free round-robin optimum.
pub fn solve_identical(instance: &Instance) -> Result<Schedule, SolveError> {
    if !instance.is_identical() {
        return Err(SolveError::NotApplicable("machines are not identical".into()));
    }
    if instance.has_restrictions() {
        return Err(SolveError::NotApplicable("eligibility restrictions present".into()));
    }
    if !instance.unit_weights() {
        return Err(SolveError::NotApplicable("weights are not all 1".into()));
    }
    let padded = pad_cliques(instance)?;
    let mut layered = round_robin(&padded);
    let target = layered.objective(&padded);
    for i in 0..padded.machines {
        layered = incompatibility_solving(i, &layered, &padded)
            .expect("layer structure guarantees a perfect matching");
    }
    assert_eq!(
        layered.objective(&padded),
        target,
        "repair must not change the total completion time"
    );

    let mut assignment = BTreeMap::new();
    for (machine, row) in layered.slots.iter().enumerate() {
        for id in row {
            if !padded.dummies.contains(id) {
                assignment.insert(*id, machine);
            }
        }
    }
    let objective = evaluate(instance, &assignment).expect("repaired grid places every job");
    assert_eq!(objective, target, "grid cost and per-machine evaluation must agree");
    Ok(Schedule { assignment, objective })
}
