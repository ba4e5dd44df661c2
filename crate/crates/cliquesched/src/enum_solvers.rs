//! Enumeration-based exact solvers: machine-configuration search for
//! identical machines with clique eligibility, and a division dynamic
//! program for unrelated machines with few distinct processing times.

use crate::model::{evaluate, Instance, Schedule};
use crate::netopt::{max_bipartite_matching, min_cost_perfect_matching};
use crate::{Budget, BudgetMeter, SolveError};
use std::collections::BTreeMap;

/// An ordered selection of distinct cliques run by one machine; entry 0 is
/// the job executed last.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MachineConfiguration {
    pub cliques: Vec<usize>,
}

/// All ordered subsets of `0..b`, shortest first, lexicographic within a
/// length. There are Σ_{i=0}^{b} C(b,i)·i! of them.
pub fn enumerate_machine_configurations(b: usize) -> Vec<MachineConfiguration> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    let mut used = vec![false; b];
    for len in 0..=b {
        extend(b, len, &mut prefix, &mut used, &mut out);
    }
    return out;

    fn extend(
        b: usize,
        len: usize,
        prefix: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<MachineConfiguration>,
    ) {
        if prefix.len() == len {
            out.push(MachineConfiguration { cliques: prefix.clone() });
            return;
        }
        for k in 0..b {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                extend(b, len, prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
}

fn binomial_saturating(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut result: u128 = 1;
    for i in 0..k {
        result = result
            .checked_mul(n - i)
            .map_or(u128::MAX, |r| r / (i + 1));
        if result == u128::MAX {
            return u128::MAX;
        }
    }
    result
}

/// Exact solver for identical machines with per-clique eligibility: try
/// every multiset of m machine configurations whose slot counts match the
/// clique sizes, check machines can be matched to configurations under the
/// eligibility sets, then place jobs into slots by a min-cost matching with
/// cost position × processing time.
pub fn solve_fixed_bags(instance: &Instance, budget: Budget) -> Result<Schedule, SolveError> {
    if !instance.is_identical() {
        return Err(SolveError::NotApplicable("machines are not identical".into()));
    }
    if !instance.unit_weights() {
        return Err(SolveError::NotApplicable("weights are not all 1".into()));
    }
    if instance.jobs().iter().any(|job| job.eligible.is_some()) {
        return Err(SolveError::NotApplicable(
            "per-job eligibility is not supported, only per-clique".into(),
        ));
    }
    let m = instance.machines();
    let b = instance.cliques();
    if instance.jobs().iter().any(|job| job.time(0).finite().is_none()) {
        return Err(SolveError::Infeasible);
    }

    let configurations = enumerate_machine_configurations(b);
    let f = configurations.len() as u128;
    let multisets = binomial_saturating(m as u128 + f - 1, f - 1);
    if multisets > budget.states as u128 {
        return Err(SolveError::BudgetExceeded);
    }
    let mut meter = BudgetMeter::new(budget);

    let members = instance.clique_members();
    let sizes: Vec<usize> = members.iter().map(|c| c.len()).collect();
    let machine_ok: Vec<Vec<bool>> = (0..m)
        .map(|i| {
            configurations
                .iter()
                .map(|config| {
                    config.cliques.iter().all(|&k| {
                        instance.clique_eligible(k).map_or(true, |set| set.contains(&i))
                    })
                })
                .collect()
        })
        .collect();

    let mut best: Option<Schedule> = None;
    let mut counts = vec![0usize; configurations.len()];
    let mut explored: u128 = 0;
    choose(
        instance,
        &configurations,
        &machine_ok,
        &sizes,
        &mut counts,
        0,
        m,
        &mut meter,
        &mut explored,
        &mut best,
    )?;
    assert!(explored <= multisets, "enumeration exceeded the multiset count");
    return best.ok_or(SolveError::Infeasible);

    #[allow(clippy::too_many_arguments)]
    fn choose(
        instance: &Instance,
        configurations: &[MachineConfiguration],
        machine_ok: &[Vec<bool>],
        sizes: &[usize],
        counts: &mut Vec<usize>,
        index: usize,
        left: usize,
        meter: &mut BudgetMeter,
        explored: &mut u128,
        best: &mut Option<Schedule>,
    ) -> Result<(), SolveError> {
        if index == configurations.len() {
            if left != 0 {
                return Ok(());
            }
            *explored += 1;
            if !meter.spend(1) {
                return Err(SolveError::BudgetExceeded);
            }
            evaluate_multiset(instance, configurations, machine_ok, sizes, counts, best);
            return Ok(());
        }
        if index + 1 == configurations.len() {
            counts[index] = left;
            let r = choose(
                instance, configurations, machine_ok, sizes, counts, index + 1, 0, meter,
                explored, best,
            );
            counts[index] = 0;
            return r;
        }
        for take in 0..=left {
            counts[index] = take;
            choose(
                instance,
                configurations,
                machine_ok,
                sizes,
                counts,
                index + 1,
                left - take,
                meter,
                explored,
                best,
            )?;
            counts[index] = 0;
        }
        Ok(())
    }
}

fn evaluate_multiset(
    instance: &Instance,
    configurations: &[MachineConfiguration],
    machine_ok: &[Vec<bool>],
    sizes: &[usize],
    counts: &[usize],
    best: &mut Option<Schedule>,
) {
    let m = instance.machines();
    let b = instance.cliques();
    // Slot counts per clique must match the clique sizes exactly.
    let mut slots_per_clique = vec![0usize; b];
    for (c, &count) in counts.iter().enumerate() {
        for &k in &configurations[c].cliques {
            slots_per_clique[k] += count;
        }
    }
    if slots_per_clique != sizes {
        return;
    }

    // Expand the multiset into m configuration instances and match machines
    // to them under the eligibility sets.
    let mut instances = Vec::with_capacity(m);
    for (c, &count) in counts.iter().enumerate() {
        for _ in 0..count {
            instances.push(c);
        }
    }
    let mut edges = Vec::new();
    for i in 0..m {
        for (inst, &c) in instances.iter().enumerate() {
            if machine_ok[i][c] {
                edges.push((i, inst));
            }
        }
    }
    let matched = max_bipartite_matching(m, instances.len(), &edges);
    if matched.iter().filter(|assignment| assignment.is_some()).count() < m {
        return;
    }
    let mut machine_of_instance = vec![usize::MAX; instances.len()];
    for (i, assignment) in matched.iter().enumerate() {
        machine_of_instance[assignment.unwrap()] = i;
    }

    // Slots: (instance, position from end, clique); jobs matched by clique
    // with cost position × processing time.
    let mut slots = Vec::new();
    for (inst, &c) in instances.iter().enumerate() {
        for (idx, &k) in configurations[c].cliques.iter().enumerate() {
            slots.push((inst, idx as u64 + 1, k));
        }
    }
    let jobs = instance.jobs();
    let mut cost_edges = Vec::new();
    for (v, job) in jobs.iter().enumerate() {
        let p = job.time(0).finite().expect("infinite rows rejected earlier");
        for (s, &(_, position, k)) in slots.iter().enumerate() {
            if k == job.clique {
                cost_edges.push((v, s, position * p));
            }
        }
    }
    let Some((pairing, _)) = min_cost_perfect_matching(jobs.len(), slots.len(), &cost_edges)
    else {
        return;
    };
    let mut assignment = BTreeMap::new();
    for (v, &s) in pairing.iter().enumerate() {
        assignment.insert(jobs[v].id, machine_of_instance[slots[s].0]);
    }
    let objective = evaluate(instance, &assignment).expect("slots only use finite placements");
    if best.as_ref().map_or(true, |b| objective < b.objective) {
        *best = Some(Schedule { assignment, objective });
    }
}

/// Counts of jobs per machine and distinct processing-time value; two
/// partial schedules with the same division have the same cost.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Division {
    pub counts: Vec<Vec<u32>>,
}

impl Division {
    fn zero(machines: usize, values: usize) -> Self {
        Division { counts: vec![vec![0; values]; machines] }
    }

    /// Total completion time of any schedule realizing these counts, using
    /// shortest-first execution per machine: the q-th-from-last job's time
    /// is paid q times.
    pub fn cost(&self, values: &[u64]) -> u64 {
        let mut total = 0u64;
        for machine in &self.counts {
            let q: u32 = machine.iter().sum();
            let mut remaining = q as u64;
            for (v, &count) in machine.iter().enumerate() {
                for _ in 0..count {
                    total += remaining * values[v];
                    remaining -= 1;
                }
            }
        }
        total
    }
}

/// Exact dynamic program over divisions for unrelated machines whose finite
/// times come from a small set. Cliques are processed in index order; each
/// stored division is extended by every injective placement of the clique's
/// jobs, then divisions are deduplicated keeping one witness assignment.
pub fn solve_dp_unrelated(instance: &Instance, budget: Budget) -> Result<Schedule, SolveError> {
    if !instance.unit_weights() {
        return Err(SolveError::NotApplicable("weights are not all 1".into()));
    }
    let m = instance.machines();
    let values = instance.distinct_effective_times();
    let value_index: BTreeMap<u64, usize> =
        values.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut meter = BudgetMeter::new(budget);

    let mut states: BTreeMap<Division, BTreeMap<u32, usize>> = BTreeMap::new();
    states.insert(Division::zero(m, values.len()), BTreeMap::new());

    for members in instance.clique_members() {
        if members.is_empty() {
            continue;
        }
        if members.len() > m {
            return Err(SolveError::Infeasible);
        }
        let mut next: BTreeMap<Division, BTreeMap<u32, usize>> = BTreeMap::new();
        for (division, witness) in &states {
            let mut used = vec![false; m];
            place(
                instance,
                &members,
                0,
                &mut used,
                &mut division.clone(),
                &mut witness.clone(),
                &value_index,
                &mut next,
                &mut meter,
            )?;
        }
        if next.is_empty() {
            return Err(SolveError::Infeasible);
        }
        states = next;
    }

    let (division, witness) = states
        .iter()
        .min_by_key(|(division, _)| (division.cost(&values), (*division).clone()))
        .expect("the initial state always survives");
    let objective = evaluate(instance, witness).expect("witnesses use finite placements");
    assert_eq!(objective, division.cost(&values), "division cost identity");
    return Ok(Schedule { assignment: witness.clone(), objective });

    #[allow(clippy::too_many_arguments)]
    fn place(
        instance: &Instance,
        members: &[usize],
        next_job: usize,
        used: &mut [bool],
        division: &mut Division,
        witness: &mut BTreeMap<u32, usize>,
        value_index: &BTreeMap<u64, usize>,
        out: &mut BTreeMap<Division, BTreeMap<u32, usize>>,
        meter: &mut BudgetMeter,
    ) -> Result<(), SolveError> {
        if next_job == members.len() {
            match out.entry(division.clone()) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(witness.clone());
                }
                std::collections::btree_map::Entry::Occupied(slot) => {
                    // Equal divisions are cost-equivalent; spot-check the
                    // witnesses in debug builds.
                    debug_assert_eq!(
                        evaluate(instance, slot.get()),
                        evaluate(instance, witness),
                        "equal divisions must have equal cost"
                    );
                }
            }
            return Ok(());
        }
        let v = members[next_job];
        for i in 0..instance.machines() {
            if used[i] || !instance.allowed(v, i) {
                continue;
            }
            if !meter.spend(1) {
                return Err(SolveError::BudgetExceeded);
            }
            let value = value_index[&instance.effective_time(v, i).unwrap()];
            used[i] = true;
            division.counts[i][value] += 1;
            witness.insert(instance.jobs()[v].id, i);
            place(
                instance, members, next_job + 1, used, division, witness, value_index, out,
                meter,
            )?;
            witness.remove(&instance.jobs()[v].id);
            division.counts[i][value] -= 1;
            used[i] = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{JobSpec, ProcTime};
    use crate::oracle::oracle_optimum;
    use proptest::prelude::*;

    fn factorial(n: u128) -> u128 {
        (1..=n).product()
    }

    #[test]
    fn configuration_counts_follow_the_formula() {
        for b in 0..=6usize {
            let configs = enumerate_machine_configurations(b);
            let expected: u128 = (0..=b as u128)
                .map(|i| binomial_saturating(b as u128, i) * factorial(i))
                .sum();
            assert_eq!(configs.len() as u128, expected, "b = {b}");
            let mut seen = configs.clone();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), configs.len(), "configurations must be distinct");
        }
    }

    #[test]
    fn configurations_for_two_cliques() {
        let configs = enumerate_machine_configurations(2);
        let listed: Vec<Vec<usize>> = configs.into_iter().map(|c| c.cliques).collect();
        assert_eq!(listed, vec![vec![], vec![0], vec![1], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn sixteen_configurations_for_three_cliques() {
        assert_eq!(enumerate_machine_configurations(3).len(), 16);
    }

    fn identical_instance(
        machines: usize,
        cliques: usize,
        jobs: &[(u32, usize, u64)],
        clique_eligible: &[(usize, &[usize])],
    ) -> Instance {
        let specs = jobs
            .iter()
            .map(|&(id, clique, p)| JobSpec::uniform(id, 1, clique, p, machines))
            .collect();
        let eligibility = clique_eligible
            .iter()
            .map(|&(k, ms)| (k, ms.iter().copied().collect()))
            .collect();
        Instance::new(machines, true, cliques, specs, eligibility).unwrap()
    }

    #[test]
    fn fixed_bags_spreads_unit_clique() {
        let jobs: Vec<(u32, usize, u64)> = (0..3).map(|v| (v + 1, 0, 1)).collect();
        let instance = identical_instance(3, 1, &jobs, &[]);
        let schedule = solve_fixed_bags(&instance, Budget::default()).unwrap();
        assert_eq!(schedule.objective, 3);
    }

    #[test]
    fn fixed_bags_respects_clique_eligibility() {
        // Clique 0 may only use machine 0; its two jobs exceed that.
        let instance = identical_instance(2, 1, &[(1, 0, 1), (2, 0, 1)], &[(0, &[0])]);
        assert_eq!(
            solve_fixed_bags(&instance, Budget::default()),
            Err(SolveError::Infeasible)
        );
    }

    #[test]
    fn fixed_bags_eligible_nowhere_is_infeasible() {
        let instance = identical_instance(2, 1, &[(1, 0, 1)], &[(0, &[])]);
        assert_eq!(
            solve_fixed_bags(&instance, Budget::default()),
            Err(SolveError::Infeasible)
        );
    }

    #[test]
    fn fixed_bags_tiny_budget_is_reported() {
        let instance = identical_instance(2, 2, &[(1, 0, 1), (2, 1, 2)], &[]);
        assert_eq!(
            solve_fixed_bags(&instance, Budget::new(3)),
            Err(SolveError::BudgetExceeded)
        );
    }

    #[test]
    fn fixed_bags_orders_mixed_sizes() {
        // One machine, three cliques: the only freedom is execution order;
        // shortest-first gives 1 + 3 + 6.
        let instance =
            identical_instance(1, 3, &[(1, 0, 1), (2, 1, 2), (3, 2, 3)], &[]);
        let schedule = solve_fixed_bags(&instance, Budget::default()).unwrap();
        assert_eq!(schedule.objective, 10);
    }

    fn unrelated_instance(rows: &[(u32, usize, &[Option<u64>])], cliques: usize) -> Instance {
        let machines = rows[0].2.len();
        let jobs = rows
            .iter()
            .map(|&(id, clique, times)| {
                JobSpec::new(
                    id,
                    1,
                    clique,
                    times.iter().map(|t| t.map_or(ProcTime::Infinite, ProcTime::Finite)).collect(),
                    None,
                )
            })
            .collect();
        Instance::new(machines, false, cliques, jobs, BTreeMap::new()).unwrap()
    }

    #[test]
    fn dp_chains_distinct_cliques_on_one_machine() {
        let rows: Vec<(u32, usize, &[Option<u64>])> =
            (0..4).map(|v| (v as u32 + 1, v, [Some(3u64)].as_slice())).collect();
        let instance = unrelated_instance(&rows, 4);
        let schedule = solve_dp_unrelated(&instance, Budget::default()).unwrap();
        assert_eq!(schedule.objective, 3 * 10);
    }

    #[test]
    fn dp_oversized_clique_is_infeasible() {
        let rows: Vec<(u32, usize, &[Option<u64>])> =
            (0..3).map(|v| (v as u32 + 1, 0, [Some(1u64), Some(1)].as_slice())).collect();
        let instance = unrelated_instance(&rows, 1);
        assert_eq!(
            solve_dp_unrelated(&instance, Budget::default()),
            Err(SolveError::Infeasible)
        );
    }

    #[test]
    fn dp_respects_forbidden_placements() {
        let instance = unrelated_instance(
            &[
                (1, 0, &[Some(2), None]),
                (2, 0, &[None, Some(2)]),
                (3, 1, &[Some(1), Some(1)]),
            ],
            2,
        );
        let schedule = solve_dp_unrelated(&instance, Budget::default()).unwrap();
        let oracle = oracle_optimum(&instance, Budget::default()).unwrap();
        assert_eq!(schedule.objective, oracle.objective);
    }

    #[test]
    fn dp_tiny_budget_is_reported() {
        let instance = unrelated_instance(
            &[(1, 0, &[Some(1), Some(2)]), (2, 1, &[Some(2), Some(1)])],
            2,
        );
        assert_eq!(
            solve_dp_unrelated(&instance, Budget::new(2)),
            Err(SolveError::BudgetExceeded)
        );
    }

    proptest! {
        #[test]
        fn fixed_bags_matches_oracle(
            machines in 1usize..4,
            cliques in 1usize..4,
            raw_jobs in proptest::collection::vec((0usize..3, 1u64..6), 1..8),
            masks in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 3), 3),
        ) {
            let jobs: Vec<(u32, usize, u64)> = raw_jobs
                .iter()
                .enumerate()
                .map(|(v, &(k, p))| (v as u32 + 1, k % cliques, p))
                .collect();
            let eligibility: Vec<(usize, Vec<usize>)> = masks
                .iter()
                .take(cliques)
                .enumerate()
                .map(|(k, mask)| {
                    (k, (0..machines).filter(|&i| mask[i]).collect::<Vec<_>>())
                })
                .collect();
            let borrowed: Vec<(usize, &[usize])> =
                eligibility.iter().map(|(k, ms)| (*k, ms.as_slice())).collect();
            let instance = identical_instance(machines, cliques, &jobs, &borrowed);
            let fast = solve_fixed_bags(&instance, Budget::default());
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
        fn dp_matches_oracle(
            machines in 1usize..4,
            cliques in 1usize..4,
            raw_jobs in proptest::collection::vec(
                (0usize..3, proptest::collection::vec(proptest::option::of(0usize..2), 3)),
                1..8,
            ),
            a1 in 1u64..4,
            gap in 1u64..4,
        ) {
            let palette = [a1, a1 + gap];
            let rows: Vec<(u32, usize, Vec<Option<u64>>)> = raw_jobs
                .iter()
                .enumerate()
                .map(|(v, (k, picks))| {
                    let times = picks[..machines]
                        .iter()
                        .map(|pick| pick.map(|idx| palette[idx]))
                        .collect();
                    (v as u32 + 1, k % cliques, times)
                })
                .collect();
            let borrowed: Vec<(u32, usize, &[Option<u64>])> =
                rows.iter().map(|(id, k, t)| (*id, *k, t.as_slice())).collect();
            let instance = unrelated_instance(&borrowed, cliques);
            let fast = solve_dp_unrelated(&instance, Budget::default());
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
