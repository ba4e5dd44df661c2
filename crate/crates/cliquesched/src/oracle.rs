//! Brute-force exact optimum by exhaustive search over clique-feasible
//! assignments. Ground truth for every other solver; desk-size only.

use crate::model::{evaluate, Instance, Schedule};
use crate::{Budget, BudgetMeter, SolveError};
use std::collections::BTreeMap;

/// Exhaustively find a minimum total weighted completion time schedule.
///
/// Enumerates clique by clique (largest clique first, so conflicts surface
/// early), assigning each clique's jobs injectively to allowed machines, and
/// prunes any branch whose partial cost already reaches the incumbent. Costs
/// only grow as jobs are added, so the pruning is safe.
pub fn oracle_optimum(instance: &Instance, budget: Budget) -> Result<Schedule, SolveError> {
    let mut meter = BudgetMeter::new(budget);
    let machines = instance.machines();

    let mut cliques = instance.clique_members();
    cliques.retain(|members| !members.is_empty());
    for members in &cliques {
        if members.len() > machines {
            return Err(SolveError::Infeasible);
        }
    }
    // Largest clique first; ties by first member for determinism.
    cliques.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));

    let allowed: Vec<Vec<usize>> = (0..instance.jobs().len())
        .map(|j| (0..machines).filter(|&i| instance.allowed(j, i)).collect())
        .collect();
    if cliques.iter().flatten().any(|&j| allowed[j].is_empty()) {
        return Err(SolveError::Infeasible);
    }

    let mut search = Search {
        instance,
        cliques: &cliques,
        allowed: &allowed,
        assignment: BTreeMap::new(),
        best: None,
        meter: &mut meter,
    };
    search.place_clique(0)?;

    match search.best {
        Some((objective, assignment)) => Ok(Schedule { assignment, objective }),
        None => Err(SolveError::Infeasible),
    }
}

struct Search<'a> {
    instance: &'a Instance,
    cliques: &'a [Vec<usize>],
    allowed: &'a [Vec<usize>],
    /// job id -> machine, for the partial schedule under construction.
    assignment: BTreeMap<u32, usize>,
    best: Option<(u64, BTreeMap<u32, usize>)>,
    meter: &'a mut BudgetMeter,
}

impl Search<'_> {
    fn place_clique(&mut self, clique_pos: usize) -> Result<(), SolveError> {
        if clique_pos == self.cliques.len() {
            let cost = evaluate(self.instance, &self.assignment)
                .expect("search only uses allowed placements");
            match &self.best {
                Some((incumbent, _)) if *incumbent <= cost => {}
                _ => self.best = Some((cost, self.assignment.clone())),
            }
            return Ok(());
        }
        // Prune: the partial schedule already costs at least its evaluation,
        // and adding jobs never lowers it.
        if let Some((incumbent, _)) = &self.best {
            let partial = evaluate(self.instance, &self.assignment)
                .expect("search only uses allowed placements");
            if partial >= *incumbent {
                return Ok(());
            }
        }
        let mut used = vec![false; self.instance.machines()];
        self.place_job(clique_pos, 0, &mut used)
    }

    fn place_job(
        &mut self,
        clique_pos: usize,
        member_pos: usize,
        used: &mut [bool],
    ) -> Result<(), SolveError> {
        let members = &self.cliques[clique_pos];
        if member_pos == members.len() {
            return self.place_clique(clique_pos + 1);
        }
        let job_idx = members[member_pos];
        let id = self.instance.jobs()[job_idx].id;
        for &machine in &self.allowed[job_idx] {
            if used[machine] {
                continue;
            }
            if !self.meter.spend(1) {
                return Err(SolveError::BudgetExceeded);
            }
            used[machine] = true;
            self.assignment.insert(id, machine);
            self.place_job(clique_pos, member_pos + 1, used)?;
            self.assignment.remove(&id);
            used[machine] = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{JobSpec, ProcTime};
    use std::collections::BTreeMap;

    #[test]
    fn single_job_single_machine() {
        let instance = Instance::new(
            1,
            true,
            1,
            vec![JobSpec::uniform(1, 1, 0, 5, 1)],
            BTreeMap::new(),
        )
        .unwrap();
        let schedule = oracle_optimum(&instance, Budget::default()).unwrap();
        assert_eq!(schedule.objective, 5);
        assert_eq!(schedule.assignment.get(&1), Some(&0));
    }

    #[test]
    fn clique_larger_than_machines_is_infeasible() {
        let jobs = vec![JobSpec::uniform(1, 1, 0, 1, 1), JobSpec::uniform(2, 1, 0, 1, 1)];
        let instance = Instance::new(1, true, 1, jobs, BTreeMap::new()).unwrap();
        assert_eq!(
            oracle_optimum(&instance, Budget::default()),
            Err(SolveError::Infeasible)
        );
    }

    #[test]
    fn splits_cliques_across_machines() {
        // Two cliques of two unit jobs on two machines: every machine gets
        // one job of each clique, objective 1+2 per machine = 6.
        let jobs = vec![
            JobSpec::uniform(1, 1, 0, 1, 2),
            JobSpec::uniform(2, 1, 0, 1, 2),
            JobSpec::uniform(3, 1, 1, 1, 2),
            JobSpec::uniform(4, 1, 1, 1, 2),
        ];
        let instance = Instance::new(2, true, 2, jobs, BTreeMap::new()).unwrap();
        let schedule = oracle_optimum(&instance, Budget::default()).unwrap();
        assert_eq!(schedule.objective, 6);
    }

    #[test]
    fn respects_forbidden_times() {
        // Job 2 can only run on machine 2; job 1 prefers machine 2 (time 1
        // vs 9) but they share a clique, so job 1 must take machine 1.
        let jobs = vec![
            JobSpec::new(1, 1, 0, vec![ProcTime::Finite(9), ProcTime::Finite(1)], None),
            JobSpec::new(2, 1, 0, vec![ProcTime::Infinite, ProcTime::Finite(2)], None),
        ];
        let instance = Instance::new(2, false, 1, jobs, BTreeMap::new()).unwrap();
        let schedule = oracle_optimum(&instance, Budget::default()).unwrap();
        assert_eq!(schedule.assignment.get(&1), Some(&0));
        assert_eq!(schedule.assignment.get(&2), Some(&1));
        assert_eq!(schedule.objective, 11);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let jobs: Vec<JobSpec> =
            (1..=6).map(|id| JobSpec::uniform(id, 1, (id - 1) as usize, 3, 3)).collect();
        let instance = Instance::new(3, true, 6, jobs, BTreeMap::new()).unwrap();
        assert_eq!(
            oracle_optimum(&instance, Budget::new(4)),
            Err(SolveError::BudgetExceeded)
        );
    }

    #[test]
    fn weighted_optimum_uses_fast_machine_for_heavy_job() {
        let jobs = vec![
            JobSpec::new(1, 5, 0, vec![ProcTime::Finite(4), ProcTime::Finite(1)], None),
            JobSpec::new(2, 1, 1, vec![ProcTime::Finite(1), ProcTime::Finite(4)], None),
        ];
        let instance = Instance::new(2, false, 2, jobs, BTreeMap::new()).unwrap();
        let schedule = oracle_optimum(&instance, Budget::default()).unwrap();
        // Heavy job on the fast machine: 5*1 + 1*1 = 6.
        assert_eq!(schedule.objective, 6);
    }
}
