//! Flow-network-based exact solvers: unit times on unrelated machines, two
//! cliques with two processing times, and clique-uniform times with job
//! eligibility.

use crate::model::{evaluate, Instance, Schedule};
use crate::netopt::{FlowNetwork, FlowResult};
use crate::SolveError;
use std::collections::BTreeMap;

/// Arc bookkeeping for the position network, for decoding flows.
pub struct UnitNetworkMeta {
    /// Arc (s, s') carrying the placement budget c.
    pub budget_arc: usize,
    /// `position_arcs[i][j]` = arc (s', (machine i, position j+1)).
    pub position_arcs: Vec<Vec<usize>>,
    /// (machine, job index, arc id) for each clique-slot-to-job arc.
    pub placement_arcs: Vec<(usize, usize, usize)>,
}

/// Shared topology of the position network: s → s' → (machine, position) →
/// machine → (machine, clique) → job → t. The closures control per-position
/// costs, which placements exist and at what cost, and a per-job exit cost.
fn build_position_network(
    instance: &Instance,
    c: u64,
    position_cost: impl Fn(u64) -> u64,
    placement_cost: impl Fn(usize, usize) -> Option<u64>,
    exit_cost: impl Fn(usize) -> u64,
) -> (FlowNetwork, UnitNetworkMeta) {
    let m = instance.machines();
    let n = instance.jobs().len();
    let b = instance.cliques();
    // Node layout: s, s', m·n positions, m machines, m·b clique slots,
    // n jobs, t.
    let source = 0;
    let s_prime = 1;
    let position_node = |i: usize, j: usize| 2 + i * n + j;
    let machine_node = |i: usize| 2 + m * n + i;
    let slot_node = |i: usize, k: usize| 2 + m * n + m + i * b + k;
    let job_node = |v: usize| 2 + m * n + m + m * b + v;
    let sink = 2 + m * n + m + m * b + n;
    let mut network = FlowNetwork::new(sink + 1, source, sink);

    let budget_arc = network.add_arc(source, s_prime, c, 0);
    let mut position_arcs = vec![Vec::with_capacity(n); m];
    for i in 0..m {
        for j in 0..n {
            let arc = network.add_arc(s_prime, position_node(i, j), 1, position_cost(j as u64 + 1));
            position_arcs[i].push(arc);
            network.add_arc(position_node(i, j), machine_node(i), 1, 0);
        }
        for k in 0..b {
            network.add_arc(machine_node(i), slot_node(i, k), 1, 0);
        }
    }
    let mut placement_arcs = Vec::new();
    for (v, job) in instance.jobs().iter().enumerate() {
        for i in 0..m {
            if let Some(cost) = placement_cost(v, i) {
                let arc = network.add_arc(slot_node(i, job.clique), job_node(v), 1, cost);
                placement_arcs.push((i, v, arc));
            }
        }
        network.add_arc(job_node(v), sink, 1, exit_cost(v));
    }
    (network, UnitNetworkMeta { budget_arc, position_arcs, placement_arcs })
}

/// The position network with the printed costs: position j costs j, the
/// slot-to-job arc costs p−1 and exists only for finite placements, and the
/// budget arc (s, s') carries capacity `c`.
pub fn build_unit_network(instance: &Instance, c: u64) -> (FlowNetwork, UnitNetworkMeta) {
    build_position_network(
        instance,
        c,
        |j| j,
        |v, i| instance.effective_time(v, i).map(|p| p - 1),
        |_| 0,
    )
}

fn assignment_from_flow(
    instance: &Instance,
    meta: &UnitNetworkMeta,
    result: &FlowResult,
) -> BTreeMap<u32, usize> {
    let mut assignment = BTreeMap::new();
    for &(machine, v, arc) in &meta.placement_arcs {
        if result.arc_flow[arc] == 1 {
            assignment.insert(instance.jobs()[v].id, machine);
        }
    }
    assignment
}

/// Exact solver for unit processing times on unrelated machines, where every
/// placement is either allowed (time 1) or forbidden. Min-cost max-flow on
/// the position network with budget n; infeasible when the flow cannot
/// route every job.
pub fn solve_unit_unrelated(instance: &Instance) -> Result<Schedule, SolveError> {
    if !instance.unit_weights() {
        return Err(SolveError::NotApplicable("weights are not all 1".into()));
    }
    let all_unit = (0..instance.jobs().len()).all(|v| {
        (0..instance.machines()).all(|i| instance.effective_time(v, i).map_or(true, |p| p == 1))
    });
    if !all_unit {
        return Err(SolveError::NotApplicable(
            "a finite processing time differs from 1".into(),
        ));
    }
    let n = instance.jobs().len() as u64;
    let (network, meta) = build_unit_network(instance, n);
    let result = network.min_cost_max_flow(None);
    if result.value < n {
        return Err(SolveError::Infeasible);
    }
    // Cost-minimality uses the cheap positions of each machine first.
    for arcs in &meta.position_arcs {
        let mut seen_unused = false;
        for &arc in arcs {
            if result.arc_flow[arc] == 0 {
                seen_unused = true;
            } else {
                assert!(!seen_unused, "used positions must form a prefix per machine");
            }
        }
    }
    let assignment = assignment_from_flow(instance, &meta, &result);
    let objective = evaluate(instance, &assignment).expect("flow only uses finite placements");
    assert_eq!(objective, result.cost, "position costs must equal the evaluated objective");
    Ok(Schedule { assignment, objective })
}

/// Exact solver for exactly two cliques where every processing time is one
/// of two finite values p1 ≤ p2.
///
/// For each guess of how many jobs run at p1: a position-network flow places
/// those jobs (maximally spread, preferring jobs that have no p2 placement),
/// then a second min-cost flow places every remaining job at a p2 placement,
/// pricing each machine by its exact marginal completion-time increase. Each
/// completed candidate is evaluated exactly and the cheapest wins, ties to
/// the smaller guess.
pub fn solve_two_cliques_two_times(instance: &Instance) -> Result<Schedule, SolveError> {
    if !instance.unit_weights() {
        return Err(SolveError::NotApplicable("weights are not all 1".into()));
    }
    if instance.cliques() != 2 {
        return Err(SolveError::NotApplicable("needs exactly two cliques".into()));
    }
    let m = instance.machines();
    let n = instance.jobs().len();
    for v in 0..n {
        for i in 0..m {
            if instance.effective_time(v, i).is_none() {
                return Err(SolveError::NotApplicable(
                    "needs every placement allowed with a finite time".into(),
                ));
            }
        }
    }
    let times = instance.distinct_effective_times();
    if times.len() > 2 {
        return Err(SolveError::NotApplicable("more than two distinct times".into()));
    }
    if n == 0 {
        return Ok(Schedule { assignment: BTreeMap::new(), objective: 0 });
    }
    let p1 = times[0];
    let p2 = *times.last().unwrap();

    let members = instance.clique_members();
    if members.iter().any(|c| c.len() > m) {
        return Err(SolveError::Infeasible);
    }

    let has_p2 = |v: usize| (0..m).any(|i| instance.effective_time(v, i) == Some(p2));
    // Position costs dominate; the unit exit costs then prefer placing jobs
    // that could not run at p2 anywhere.
    let scale = n as u64 + 1;

    fn consider(instance: &Instance, best: &mut Option<Schedule>, assignment: BTreeMap<u32, usize>) {
        let mut per_machine = vec![0usize; instance.machines()];
        for &machine in assignment.values() {
            per_machine[machine] += 1;
        }
        assert!(per_machine.iter().all(|&c| c <= 2), "two cliques allow at most two jobs");
        let objective =
            evaluate(instance, &assignment).expect("candidates use finite placements");
        if best.as_ref().map_or(true, |b| objective < b.objective) {
            *best = Some(Schedule { assignment, objective });
        }
    }
    let mut best: Option<Schedule> = None;

    for n1 in 0..=n {
        let (network, meta) = build_position_network(
            instance,
            n1 as u64,
            |j| j * scale,
            |v, i| (instance.effective_time(v, i) == Some(p1)).then_some(0),
            |v| u64::from(has_p2(v)),
        );
        let placed = network.min_cost_max_flow(None);
        if placed.value < n1 as u64 {
            continue;
        }
        let first = assignment_from_flow(instance, &meta, &placed);
        match complete_at_second_time(instance, &first, p1, p2) {
            Some(full) => consider(instance, &mut best, full),
            None => continue,
        }
    }

    // Safety net: a plain clique-by-clique spread is always feasible here,
    // so infeasibility is never reported for these instances.
    if best.is_none() {
        let mut assignment = BTreeMap::new();
        for member_list in &members {
            for (slot, &v) in member_list.iter().enumerate() {
                assignment.insert(instance.jobs()[v].id, slot);
            }
        }
        consider(instance, &mut best, assignment);
    }
    best.ok_or(SolveError::Infeasible)
}

/// Place every job not in `first` on a machine where its time is `p2`,
/// minimizing the exact marginal cost: p2 then 2·p2 on machines the first
/// phase left empty, p1 + p2 on machines holding one first-phase job.
fn complete_at_second_time(
    instance: &Instance,
    first: &BTreeMap<u32, usize>,
    p1: u64,
    p2: u64,
) -> Option<BTreeMap<u32, usize>> {
    let m = instance.machines();
    let b = instance.cliques();
    let remaining: Vec<usize> = instance
        .jobs()
        .iter()
        .enumerate()
        .filter(|(_, job)| !first.contains_key(&job.id))
        .map(|(v, _)| v)
        .collect();
    if remaining.is_empty() {
        return Some(first.clone());
    }

    let mut slot_used = vec![vec![false; b]; m];
    let mut load = vec![0usize; m];
    for (&id, &machine) in first {
        let v = instance.job_index(id).expect("first-phase jobs exist");
        slot_used[machine][instance.jobs()[v].clique] = true;
        load[machine] += 1;
    }

    // Nodes: s, remaining jobs, m·b slots, m machines, t.
    let source = 0;
    let job_node = |r: usize| 1 + r;
    let slot_node = |i: usize, k: usize| 1 + remaining.len() + i * b + k;
    let machine_node = |i: usize| 1 + remaining.len() + m * b + i;
    let sink = 1 + remaining.len() + m * b + m;
    let mut network = FlowNetwork::new(sink + 1, source, sink);

    let mut job_arcs = Vec::new();
    for (r, &v) in remaining.iter().enumerate() {
        network.add_arc(source, job_node(r), 1, 0);
        let clique = instance.jobs()[v].clique;
        for i in 0..m {
            if instance.effective_time(v, i) == Some(p2) && !slot_used[i][clique] {
                let arc = network.add_arc(job_node(r), slot_node(i, clique), 1, 0);
                job_arcs.push((r, i, arc));
            }
        }
    }
    for i in 0..m {
        for k in 0..b {
            if !slot_used[i][k] {
                network.add_arc(slot_node(i, k), machine_node(i), 1, 0);
            }
        }
        match load[i] {
            0 => {
                network.add_arc(machine_node(i), sink, 1, p2);
                network.add_arc(machine_node(i), sink, 1, 2 * p2);
            }
            1 => {
                network.add_arc(machine_node(i), sink, 1, p1 + p2);
            }
            _ => {}
        }
    }

    let result = network.min_cost_max_flow(None);
    if result.value < remaining.len() as u64 {
        return None;
    }
    let mut assignment = first.clone();
    for &(r, machine, arc) in &job_arcs {
        if result.arc_flow[arc] == 1 {
            assignment.insert(instance.jobs()[remaining[r]].id, machine);
        }
    }
    Some(assignment)
}

/// Exact solver for instances where all jobs of a clique share one
/// processing-time vector; per-job eligibility is allowed. One min-cost
/// max-flow: jobs feed per-machine clique slots, then per-machine positions
/// priced by position × clique time.
pub fn solve_clique_copies(instance: &Instance) -> Result<Schedule, SolveError> {
    if !instance.unit_weights() {
        return Err(SolveError::NotApplicable("weights are not all 1".into()));
    }
    let m = instance.machines();
    let b = instance.cliques();
    let n = instance.jobs().len();
    let members = instance.clique_members();
    for member_list in &members {
        for pair in member_list.windows(2) {
            if instance.jobs()[pair[0]].times() != instance.jobs()[pair[1]].times() {
                return Err(SolveError::NotApplicable(
                    "jobs within a clique have different time vectors".into(),
                ));
            }
        }
    }
    if n == 0 {
        return Ok(Schedule { assignment: BTreeMap::new(), objective: 0 });
    }

    // Nodes: s, n jobs, m·b slot entries, m·b slot exits, m·b positions, t.
    let source = 0;
    let job_node = |v: usize| 1 + v;
    let slot_in = |i: usize, k: usize| 1 + n + i * b + k;
    let slot_out = |i: usize, k: usize| 1 + n + m * b + i * b + k;
    let position_node = |i: usize, q: usize| 1 + n + 2 * m * b + i * b + q;
    let sink = 1 + n + 3 * m * b;
    let mut network = FlowNetwork::new(sink + 1, source, sink);

    let mut job_arcs = Vec::new();
    for v in 0..n {
        network.add_arc(source, job_node(v), 1, 0);
        let clique = instance.jobs()[v].clique;
        for i in 0..m {
            if instance.effective_time(v, i).is_some() {
                let arc = network.add_arc(job_node(v), slot_in(i, clique), 1, 0);
                job_arcs.push((v, i, arc));
            }
        }
    }
    for i in 0..m {
        for k in 0..b {
            network.add_arc(slot_in(i, k), slot_out(i, k), 1, 0);
            let time = members[k]
                .first()
                .and_then(|&v| instance.jobs()[v].time(i).finite());
            if let Some(p) = time {
                for q in 0..b {
                    network.add_arc(slot_out(i, k), position_node(i, q), 1, (q as u64 + 1) * p);
                }
            }
        }
        for q in 0..b {
            network.add_arc(position_node(i, q), sink, 1, 0);
        }
    }

    let result = network.min_cost_max_flow(None);
    if result.value < n as u64 {
        return Err(SolveError::Infeasible);
    }
    let mut assignment = BTreeMap::new();
    for &(v, machine, arc) in &job_arcs {
        if result.arc_flow[arc] == 1 {
            assignment.insert(instance.jobs()[v].id, machine);
        }
    }
    let objective = evaluate(instance, &assignment).expect("flow only uses finite placements");
    assert_eq!(
        objective, result.cost,
        "position pricing must equal the evaluated objective"
    );
    Ok(Schedule { assignment, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{JobSpec, ProcTime};
    use crate::oracle::oracle_optimum;
    use crate::Budget;
    use proptest::prelude::*;

    fn unit_instance(machines: usize, cliques: usize, rows: &[(u32, usize, &[bool])]) -> Instance {
        let jobs = rows
            .iter()
            .map(|&(id, clique, finite)| {
                let times = finite
                    .iter()
                    .map(|&f| if f { ProcTime::Finite(1) } else { ProcTime::Infinite })
                    .collect();
                JobSpec::new(id, 1, clique, times, None)
            })
            .collect();
        Instance::new(machines, false, cliques, jobs, BTreeMap::new()).unwrap()
    }

    #[test]
    fn unit_network_single_job() {
        let instance = unit_instance(1, 1, &[(1, 0, &[true])]);
        let (network, _) = build_unit_network(&instance, 1);
        let result = network.min_cost_max_flow(None);
        assert_eq!(result.value, 1);
        assert_eq!(result.cost, 1);
    }

    #[test]
    fn unit_network_three_jobs_two_machines() {
        let instance = unit_instance(
            2,
            3,
            &[(1, 0, &[true, true]), (2, 1, &[true, true]), (3, 2, &[true, true])],
        );
        let (network, _) = build_unit_network(&instance, 3);
        let result = network.min_cost_max_flow(None);
        assert_eq!(result.value, 3);
        // Two machines at position 1, one at position 2.
        assert_eq!(result.cost, 4);
    }

    #[test]
    fn unit_network_clique_slot_blocks_second_job() {
        let instance = unit_instance(1, 1, &[(1, 0, &[true]), (2, 0, &[true])]);
        let (network, _) = build_unit_network(&instance, 2);
        let result = network.min_cost_max_flow(None);
        assert_eq!(result.value, 1);
    }

    #[test]
    fn unit_solver_chain_on_one_machine() {
        let rows: Vec<(u32, usize, &[bool])> =
            (0..4).map(|v| (v as u32 + 1, v, [true].as_slice())).collect();
        let instance = unit_instance(1, 4, &rows);
        let schedule = solve_unit_unrelated(&instance).unwrap();
        assert_eq!(schedule.objective, 10);
    }

    #[test]
    fn unit_solver_respects_forbidden_machine() {
        let instance = unit_instance(
            2,
            3,
            &[(1, 0, &[true, true]), (2, 1, &[true, true]), (3, 2, &[true, false])],
        );
        let schedule = solve_unit_unrelated(&instance).unwrap();
        assert_eq!(schedule.objective, 4);
        assert_eq!(schedule.assignment[&3], 0);
    }

    #[test]
    fn unit_solver_reports_infeasible() {
        let instance = unit_instance(2, 1, &[(1, 0, &[true, false]), (2, 0, &[true, false])]);
        assert_eq!(solve_unit_unrelated(&instance), Err(SolveError::Infeasible));
    }

    fn two_clique_instance(rows: &[(u32, usize, &[u64])]) -> Instance {
        let machines = rows[0].2.len();
        let jobs = rows
            .iter()
            .map(|&(id, clique, times)| {
                JobSpec::new(
                    id,
                    1,
                    clique,
                    times.iter().map(|&p| ProcTime::Finite(p)).collect(),
                    None,
                )
            })
            .collect();
        Instance::new(machines, false, 2, jobs, BTreeMap::new()).unwrap()
    }

    #[test]
    fn two_two_spreads_singleton_cliques() {
        let instance = two_clique_instance(&[(1, 0, &[3, 3]), (2, 1, &[3, 3])]);
        let schedule = solve_two_cliques_two_times(&instance).unwrap();
        assert_eq!(schedule.objective, 6);
    }

    #[test]
    fn two_two_forced_slow_job() {
        // Job 2 runs at the slow time everywhere; it contributes exactly p2.
        let instance = two_clique_instance(&[(1, 0, &[2, 5]), (2, 1, &[5, 5])]);
        let schedule = solve_two_cliques_two_times(&instance).unwrap();
        assert_eq!(schedule.objective, 7);
    }

    #[test]
    fn two_two_completion_needs_cost_awareness() {
        // Jobs 1 and 3 share a clique; placing job 2 next to job 1 (after
        // job 1 lands on its fast machine) beats keeping machine 2 short.
        let instance =
            two_clique_instance(&[(1, 0, &[2, 1]), (2, 1, &[2, 2]), (3, 0, &[2, 2])]);
        let schedule = solve_two_cliques_two_times(&instance).unwrap();
        assert_eq!(schedule.objective, 6);
    }

    #[test]
    fn two_two_matches_oracle_on_dense_pair() {
        let instance = two_clique_instance(&[
            (1, 0, &[1, 4]),
            (2, 0, &[4, 4]),
            (3, 1, &[4, 1]),
            (4, 1, &[1, 4]),
        ]);
        let fast = solve_two_cliques_two_times(&instance).unwrap();
        let slow = oracle_optimum(&instance, Budget::default()).unwrap();
        assert_eq!(fast.objective, slow.objective);
    }

    #[test]
    fn two_two_never_beaten_by_fixed_count_optima() {
        // For every count of fast placements, brute-force the best schedule
        // with exactly that count; the solver must match the global best.
        let instance = two_clique_instance(&[
            (1, 0, &[1, 3]),
            (2, 0, &[3, 3]),
            (3, 1, &[3, 1]),
            (4, 1, &[3, 3]),
        ]);
        let solved = solve_two_cliques_two_times(&instance).unwrap();
        let m = instance.machines();
        let n = instance.jobs().len();
        let mut best_by_count: Vec<Option<u64>> = vec![None; n + 1];
        let mut assignment = BTreeMap::new();
        enumerate(&instance, 0, m, &mut assignment, &mut best_by_count);
        let global = best_by_count.iter().flatten().min().copied().unwrap();
        assert_eq!(solved.objective, global);
        for fixed in best_by_count.iter().flatten() {
            assert!(solved.objective <= *fixed);
        }

        fn enumerate(
            instance: &Instance,
            v: usize,
            m: usize,
            assignment: &mut BTreeMap<u32, usize>,
            best: &mut [Option<u64>],
        ) {
            if v == instance.jobs().len() {
                let fast_count = assignment
                    .iter()
                    .filter(|(id, &i)| {
                        let idx = instance.job_index(**id).unwrap();
                        instance.effective_time(idx, i) == Some(1)
                    })
                    .count();
                let cost = evaluate(instance, assignment).unwrap();
                let slot = &mut best[fast_count];
                *slot = Some(slot.map_or(cost, |c| c.min(cost)));
                return;
            }
            let clique = instance.jobs()[v].clique;
            for i in 0..m {
                let clash = assignment.iter().any(|(id, &mach)| {
                    mach == i
                        && instance.jobs()[instance.job_index(*id).unwrap()].clique == clique
                });
                if clash {
                    continue;
                }
                assignment.insert(instance.jobs()[v].id, i);
                enumerate(instance, v + 1, m, assignment, best);
                assignment.remove(&instance.jobs()[v].id);
            }
        }
    }

    /// Every two-clique instance with two jobs per clique on two machines
    /// and times in {1, 2}: 256 time matrices, checked against brute force.
    #[test]
    fn two_two_exhaustive_two_machines() {
        for mask in 0u32..256 {
            let times: Vec<Vec<u64>> = (0..4)
                .map(|v| {
                    (0..2)
                        .map(|i| if mask >> (2 * v + i) & 1 == 1 { 2 } else { 1 })
                        .collect()
                })
                .collect();
            let rows: Vec<(u32, usize, &[u64])> = times
                .iter()
                .enumerate()
                .map(|(v, t)| (v as u32 + 1, v / 2, t.as_slice()))
                .collect();
            let instance = two_clique_instance(&rows);
            let fast = solve_two_cliques_two_times(&instance).unwrap();
            let slow = oracle_optimum(&instance, Budget::default()).unwrap();
            assert_eq!(fast.objective, slow.objective, "mask {mask}");
        }
    }

    /// Heavier sweep kept out of the default run: all 3-machine instances
    /// with clique sizes (3, 2), times in {p1, p2} for several pairs.
    #[test]
    #[ignore]
    fn two_two_exhaustive_three_machines() {
        for &(p1, p2) in &[(1u64, 2u64), (1, 3), (2, 3), (3, 3)] {
            for mask in 0u64..(1 << 15) {
                let times: Vec<Vec<u64>> = (0..5)
                    .map(|v| {
                        (0..3)
                            .map(|i| if mask >> (3 * v + i) & 1 == 1 { p2 } else { p1 })
                            .collect()
                    })
                    .collect();
                let rows: Vec<(u32, usize, &[u64])> = times
                    .iter()
                    .enumerate()
                    .map(|(v, t)| (v as u32 + 1, usize::from(v >= 3), t.as_slice()))
                    .collect();
                let instance = two_clique_instance(&rows);
                let fast = solve_two_cliques_two_times(&instance).unwrap();
                let slow = oracle_optimum(&instance, Budget::default()).unwrap();
                assert_eq!(fast.objective, slow.objective, "p1={p1} p2={p2} mask={mask}");
            }
        }
    }

    /// Randomized sweep at larger sizes, kept out of the default run.
    #[test]
    #[ignore]
    fn two_two_random_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_260_820);
        for round in 0..20_000 {
            let machines = rng.gen_range(1..=4);
            let size_a = rng.gen_range(1..=machines);
            let size_b = rng.gen_range(1..=machines);
            let p1 = rng.gen_range(1..=5);
            let p2 = p1 + rng.gen_range(0..=4);
            let times: Vec<Vec<u64>> = (0..size_a + size_b)
                .map(|_| (0..machines).map(|_| if rng.gen() { p2 } else { p1 }).collect())
                .collect();
            let rows: Vec<(u32, usize, &[u64])> = times
                .iter()
                .enumerate()
                .map(|(v, t)| (v as u32 + 1, usize::from(v >= size_a), t.as_slice()))
                .collect();
            let instance = two_clique_instance(&rows);
            let fast = solve_two_cliques_two_times(&instance).unwrap();
            let slow = oracle_optimum(&instance, Budget::default()).unwrap();
            assert_eq!(fast.objective, slow.objective, "round {round}");
        }
    }

    fn copies_instance(
        machines: usize,
        clique_times: &[&[Option<u64>]],
        copies: &[usize],
        eligible: &[Option<&[usize]>],
    ) -> Instance {
        let mut jobs = Vec::new();
        let mut id = 1u32;
        let mut job_pos = 0usize;
        for (k, &count) in copies.iter().enumerate() {
            for _ in 0..count {
                let times = clique_times[k]
                    .iter()
                    .map(|t| t.map_or(ProcTime::Infinite, ProcTime::Finite))
                    .collect();
                let elig = eligible[job_pos].map(|ms| ms.iter().copied().collect());
                jobs.push(JobSpec::new(id, 1, k, times, elig));
                id += 1;
                job_pos += 1;
            }
        }
        Instance::new(machines, false, copies.len(), jobs, BTreeMap::new()).unwrap()
    }

    #[test]
    fn copies_split_across_speeds() {
        let instance = copies_instance(
            2,
            &[&[Some(1), Some(2)]],
            &[2],
            &[None, None],
        );
        let schedule = solve_clique_copies(&instance).unwrap();
        assert_eq!(schedule.objective, 3);
    }

    #[test]
    fn copies_with_pinned_machines() {
        let instance = copies_instance(
            3,
            &[&[Some(4), Some(4), Some(4)]],
            &[3],
            &[Some(&[0]), Some(&[1]), Some(&[2])],
        );
        let schedule = solve_clique_copies(&instance).unwrap();
        assert_eq!(schedule.objective, 12);
    }

    #[test]
    fn copies_overflow_is_infeasible() {
        let instance = copies_instance(1, &[&[Some(2)]], &[2], &[None, None]);
        assert_eq!(solve_clique_copies(&instance), Err(SolveError::Infeasible));
    }

    proptest! {
        #[test]
        fn unit_solver_matches_oracle(
            machines in 1usize..4,
            mask in proptest::collection::vec(
                (proptest::collection::vec(any::<bool>(), 4), 0usize..4),
                1..7,
            )
        ) {
            let rows: Vec<(u32, usize, Vec<bool>)> = mask
                .iter()
                .enumerate()
                .map(|(v, (finite, clique))| {
                    (v as u32 + 1, *clique, finite[..machines].to_vec())
                })
                .collect();
            let borrowed: Vec<(u32, usize, &[bool])> =
                rows.iter().map(|(id, k, f)| (*id, *k, f.as_slice())).collect();
            let instance = unit_instance(machines, 4, &borrowed);
            let fast = solve_unit_unrelated(&instance);
            let slow = oracle_optimum(&instance, Budget::default());
            match (fast, slow) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a.objective, b.objective);
                    prop_assert!(crate::model::validate(&instance, &a).is_feasible());
                }
                (Err(SolveError::Infeasible), Err(SolveError::Infeasible)) => {}
                (a, b) => prop_assert!(false, "disagree: {:?} vs {:?}", a, b),
            }
        }

        #[test]
        fn two_two_matches_oracle(
            machines in 1usize..4,
            picks in proptest::collection::vec((any::<bool>(), 0usize..2), 1..7),
            p1 in 1u64..4,
            extra in 0u64..4,
        ) {
            let p2 = p1 + extra;
            let mut sizes = [0usize; 2];
            let mut rows = Vec::new();
            for (v, (fast_first, clique)) in picks.iter().enumerate() {
                if sizes[*clique] >= machines {
                    continue;
                }
                sizes[*clique] += 1;
                let times: Vec<u64> = (0..machines)
                    .map(|i| if *fast_first == (i % 2 == 0) { p1 } else { p2 })
                    .collect();
                rows.push((v as u32 + 1, *clique, times));
            }
            prop_assume!(!rows.is_empty());
            let borrowed: Vec<(u32, usize, &[u64])> =
                rows.iter().map(|(id, k, t)| (*id, *k, t.as_slice())).collect();
            let instance = two_clique_instance(&borrowed);
            let fast = solve_two_cliques_two_times(&instance).unwrap();
            let slow = oracle_optimum(&instance, Budget::default()).unwrap();
            prop_assert_eq!(fast.objective, slow.objective);
            prop_assert!(crate::model::validate(&instance, &fast).is_feasible());
        }

        #[test]
        fn copies_match_oracle(
            machines in 1usize..4,
            copies in proptest::collection::vec(1usize..4, 1..3),
            raw_times in proptest::collection::vec(
                proptest::collection::vec(proptest::option::of(1u64..6), 3),
                3,
            )
        ) {
            let clique_times: Vec<Vec<Option<u64>>> = raw_times
                .iter()
                .take(copies.len())
                .map(|row| row[..machines].to_vec())
                .collect();
            let borrowed: Vec<&[Option<u64>]> =
                clique_times.iter().map(|r| r.as_slice()).collect();
            let total: usize = copies.iter().sum();
            let eligible = vec![None; total];
            let instance = copies_instance(machines, &borrowed, &copies, &eligible);
            let fast = solve_clique_copies(&instance);
            let slow = oracle_optimum(&instance, Budget::default());
            match (fast, slow) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a.objective, b.objective);
                    prop_assert!(crate::model::validate(&instance, &a).is_feasible());
                }
                (Err(SolveError::Infeasible), Err(SolveError::Infeasible)) => {}
                (a, b) => prop_assert!(false, "disagree: {:?} vs {:?}", a, b),
            }
        }
    }
}
