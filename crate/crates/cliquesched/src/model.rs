//! Problem model: instances, schedules, Smith's rule, exact evaluation,
//! feasibility validation, and the JSON file formats.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Processing time of a job on one machine. `Infinite` marks a forbidden
/// placement and never enters arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcTime {
    Finite(u64),
    Infinite,
}

impl ProcTime {
    pub fn is_finite(self) -> bool {
        matches!(self, ProcTime::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ProcTime::Finite(p) => Some(p),
            ProcTime::Infinite => None,
        }
    }
}

/// One job: identity, weight, clique membership, per-machine times and an
/// optional machine eligibility set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub id: u32,
    pub weight: u64,
    /// Clique index, 0-based.
    pub clique: usize,
    /// Per-machine processing times, length = machine count.
    times: Vec<ProcTime>,
    /// Machines this job may run on (0-based); `None` = all machines.
    pub eligible: Option<BTreeSet<usize>>,
}

impl JobSpec {
    pub fn new(
        id: u32,
        weight: u64,
        clique: usize,
        times: Vec<ProcTime>,
        eligible: Option<BTreeSet<usize>>,
    ) -> Self {
        JobSpec { id, weight, clique, times, eligible }
    }

    /// A job with the same finite time on every one of `machines` machines.
    pub fn uniform(id: u32, weight: u64, clique: usize, time: u64, machines: usize) -> Self {
        JobSpec::new(id, weight, clique, vec![ProcTime::Finite(time); machines], None)
    }

    pub fn time(&self, machine: usize) -> ProcTime {
        self.times[machine]
    }

    pub fn times(&self) -> &[ProcTime] {
        &self.times
    }
}

/// Reasons an instance fails validation at construction/parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    NoMachines,
    NoCliques,
    DuplicateJobId(u32),
    ZeroWeight(u32),
    ZeroTime(u32),
    CliqueOutOfRange { job: u32, clique: usize },
    TimesLength { job: u32, expected: usize, got: usize },
    MachineOutOfRange { job: Option<u32>, machine: usize },
    NotIdentical(u32),
    Json(String),
}

impl std::fmt::Display for InstanceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InstanceError::NoMachines => write!(f, "instance needs at least one machine"),
            InstanceError::NoCliques => write!(f, "instance needs at least one clique"),
            InstanceError::DuplicateJobId(id) => write!(f, "duplicate job id {id}"),
            InstanceError::ZeroWeight(id) => write!(f, "job {id} has weight 0"),
            InstanceError::ZeroTime(id) => write!(f, "job {id} has a finite time of 0"),
            InstanceError::CliqueOutOfRange { job, clique } => {
                write!(f, "job {job} names clique {} beyond the clique count", clique + 1)
            }
            InstanceError::TimesLength { job, expected, got } => {
                write!(f, "job {job} lists {got} times, expected {expected}")
            }
            InstanceError::MachineOutOfRange { job, machine } => match job {
                Some(id) => write!(f, "job {id} names machine {} out of range", machine + 1),
                None => write!(f, "clique eligibility names machine {} out of range", machine + 1),
            },
            InstanceError::NotIdentical(id) => {
                write!(f, "instance is flagged identical but job {id} has varying times")
            }
            InstanceError::Json(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for InstanceError {}

/// A scheduling instance: `m` machines (identical or unrelated), jobs
/// partitioned into `b` cliques, optional per-clique machine eligibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    machines: usize,
    identical: bool,
    cliques: usize,
    jobs: Vec<JobSpec>,
    /// Per clique (0-based): machines its jobs may run on; `None` = all.
    clique_eligible: Vec<Option<BTreeSet<usize>>>,
    id_index: BTreeMap<u32, usize>,
}

impl Instance {
    pub fn new(
        machines: usize,
        identical: bool,
        cliques: usize,
        jobs: Vec<JobSpec>,
        clique_eligible: BTreeMap<usize, BTreeSet<usize>>,
    ) -> Result<Self, InstanceError> {
        if machines == 0 {
            return Err(InstanceError::NoMachines);
        }
        if cliques == 0 {
            return Err(InstanceError::NoCliques);
        }
        let mut id_index = BTreeMap::new();
        for (idx, job) in jobs.iter().enumerate() {
            if id_index.insert(job.id, idx).is_some() {
                return Err(InstanceError::DuplicateJobId(job.id));
            }
            if job.weight == 0 {
                return Err(InstanceError::ZeroWeight(job.id));
            }
            if job.clique >= cliques {
                return Err(InstanceError::CliqueOutOfRange { job: job.id, clique: job.clique });
            }
            if job.times.len() != machines {
                return Err(InstanceError::TimesLength {
                    job: job.id,
                    expected: machines,
                    got: job.times.len(),
                });
            }
            if job.times.iter().any(|t| *t == ProcTime::Finite(0)) {
                return Err(InstanceError::ZeroTime(job.id));
            }
            if identical && job.times.windows(2).any(|w| w[0] != w[1]) {
                return Err(InstanceError::NotIdentical(job.id));
            }
            if let Some(elig) = &job.eligible {
                for &mach in elig {
                    if mach >= machines {
                        return Err(InstanceError::MachineOutOfRange {
                            job: Some(job.id),
                            machine: mach,
                        });
                    }
                }
            }
        }
        let mut per_clique = vec![None; cliques];
        for (clique, machines_set) in clique_eligible {
            if clique >= cliques {
                return Err(InstanceError::CliqueOutOfRange { job: u32::MAX, clique });
            }
            for &mach in &machines_set {
                if mach >= machines {
                    return Err(InstanceError::MachineOutOfRange { job: None, machine: mach });
                }
            }
            per_clique[clique] = Some(machines_set);
        }
        Ok(Instance { machines, identical, cliques, jobs, clique_eligible: per_clique, id_index })
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn cliques(&self) -> usize {
        self.cliques
    }

    pub fn is_identical(&self) -> bool {
        self.identical
    }

    pub fn jobs(&self) -> &[JobSpec] {
        &self.jobs
    }

    pub fn job_index(&self, id: u32) -> Option<usize> {
        self.id_index.get(&id).copied()
    }

    pub fn clique_eligible(&self, clique: usize) -> Option<&BTreeSet<usize>> {
        self.clique_eligible[clique].as_ref()
    }

    /// True when any job or clique carries an eligibility restriction.
    pub fn has_restrictions(&self) -> bool {
        self.jobs.iter().any(|j| j.eligible.is_some())
            || self.clique_eligible.iter().any(|c| c.is_some())
    }

    /// Effective permission: finite time, job eligibility, clique eligibility.
    pub fn allowed(&self, job_idx: usize, machine: usize) -> bool {
        let job = &self.jobs[job_idx];
        if !job.time(machine).is_finite() {
            return false;
        }
        if let Some(elig) = &job.eligible {
            if !elig.contains(&machine) {
                return false;
            }
        }
        if let Some(elig) = &self.clique_eligible[job.clique] {
            if !elig.contains(&machine) {
                return false;
            }
        }
        true
    }

    /// Finite processing time if the placement is allowed.
    pub fn effective_time(&self, job_idx: usize, machine: usize) -> Option<u64> {
        if self.allowed(job_idx, machine) {
            self.jobs[job_idx].time(machine).finite()
        } else {
            None
        }
    }

    /// Job indices of each clique, in stored (id-sorted at parse) order.
    pub fn clique_members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.cliques];
        for (idx, job) in self.jobs.iter().enumerate() {
            members[job.clique].push(idx);
        }
        members
    }

    /// Group machines by identical processing-time columns: returns
    /// (kind id per machine, kind count). On identical instances this is one kind.
    pub fn machine_kinds(&self) -> (Vec<usize>, usize) {
        let mut seen: Vec<Vec<ProcTime>> = Vec::new();
        let mut kind_of = Vec::with_capacity(self.machines);
        for i in 0..self.machines {
            let column: Vec<ProcTime> = self.jobs.iter().map(|j| j.time(i)).collect();
            match seen.iter().position(|c| *c == column) {
                Some(k) => kind_of.push(k),
                None => {
                    kind_of.push(seen.len());
                    seen.push(column);
                }
            }
        }
        let count = seen.len();
        (kind_of, count)
    }

    /// Largest finite processing time, 0 if none.
    pub fn max_finite_time(&self) -> u64 {
        self.jobs
            .iter()
            .flat_map(|j| j.times.iter())
            .filter_map(|t| t.finite())
            .max()
            .unwrap_or(0)
    }

    /// All distinct finite times across allowed placements, ascending.
    pub fn distinct_effective_times(&self) -> Vec<u64> {
        let mut set = BTreeSet::new();
        for j in 0..self.jobs.len() {
            for i in 0..self.machines {
                if let Some(p) = self.effective_time(j, i) {
                    set.insert(p);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn unit_weights(&self) -> bool {
        self.jobs.iter().all(|j| j.weight == 1)
    }

    pub fn parse_json(text: &str) -> Result<Self, InstanceError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))?;
        file.into_instance()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from_instance(self))
            .expect("instance serialization cannot fail")
    }
}

/// An assignment of jobs to machines plus its claimed objective value. The
/// per-machine execution order is always the canonical Smith order, so the
/// assignment alone determines the objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    /// job id -> machine (0-based).
    pub assignment: BTreeMap<u32, usize>,
    pub objective: u64,
}

impl Schedule {
    pub fn parse_json(text: &str) -> Result<Self, InstanceError> {
        let file: ScheduleFile =
            serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))?;
        let mut assignment = BTreeMap::new();
        for (id_text, machine) in file.assignment {
            let id: u32 = id_text
                .parse()
                .map_err(|_| InstanceError::Json(format!("bad job id key '{id_text}'")))?;
            if machine == 0 {
                return Err(InstanceError::Json(format!(
                    "job {id} assigned to machine 0; machines are numbered from 1"
                )));
            }
            if assignment.insert(id, machine - 1).is_some() {
                return Err(InstanceError::Json(format!("job {id} assigned twice")));
            }
        }
        Ok(Schedule { assignment, objective: file.objective })
    }

    pub fn to_json(&self) -> String {
        let file = ScheduleFile {
            assignment: self
                .assignment
                .iter()
                .map(|(id, machine)| (id.to_string(), machine + 1))
                .collect(),
            objective: self.objective,
        };
        serde_json::to_string_pretty(&file).expect("schedule serialization cannot fail")
    }
}

/// Error from [`evaluate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// A job is assigned to a machine where its processing time is infinite.
    InfiniteTime { job: u32, machine: usize },
    UnknownJob(u32),
    BadMachine { job: u32, machine: usize },
}

impl std::fmt::Display for EvalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalError::InfiniteTime { job, machine } => {
                write!(f, "job {job} has infinite time on machine {}", machine + 1)
            }
            EvalError::UnknownJob(id) => write!(f, "assignment names unknown job {id}"),
            EvalError::BadMachine { job, machine } => {
                write!(f, "job {job} assigned to machine {} out of range", machine + 1)
            }
        }
    }
}

impl std::error::Error for EvalError {}

/// Smith's rule order of `jobs` on `machine`: non-increasing weight/time
/// ratio; ties by smaller time, then smaller id. Errors if any listed job has
/// infinite time on the machine.
pub fn smith_order<'a>(
    jobs: &[&'a JobSpec],
    machine: usize,
) -> Result<Vec<&'a JobSpec>, EvalError> {
    let mut timed = Vec::with_capacity(jobs.len());
    for job in jobs {
        match job.time(machine) {
            ProcTime::Finite(p) => timed.push((*job, p)),
            ProcTime::Infinite => {
                return Err(EvalError::InfiniteTime { job: job.id, machine });
            }
        }
    }
    // w1/p1 >= w2/p2 compared as w1*p2 >= w2*p1: exact, no division.
    timed.sort_by(|(a, pa), (b, pb)| {
        let ra = (a.weight as u128) * (*pb as u128);
        let rb = (b.weight as u128) * (*pa as u128);
        rb.cmp(&ra).then(pa.cmp(pb)).then(a.id.cmp(&b.id))
    });
    Ok(timed.into_iter().map(|(job, _)| job).collect())
}

/// Exact total weighted completion time of `assignment` under per-machine
/// Smith order. Jobs absent from the assignment contribute nothing.
pub fn evaluate(instance: &Instance, assignment: &BTreeMap<u32, usize>) -> Result<u64, EvalError> {
    let mut per_machine: Vec<Vec<&JobSpec>> = vec![Vec::new(); instance.machines()];
    for (&id, &machine) in assignment {
        let idx = instance.job_index(id).ok_or(EvalError::UnknownJob(id))?;
        if machine >= instance.machines() {
            return Err(EvalError::BadMachine { job: id, machine });
        }
        per_machine[machine].push(&instance.jobs()[idx]);
    }
    let mut total: u64 = 0;
    for (machine, jobs) in per_machine.iter().enumerate() {
        if jobs.is_empty() {
            continue;
        }
        let ordered = smith_order(jobs, machine)?;
        let mut clock: u64 = 0;
        for job in ordered {
            let p = job.time(machine).finite().expect("smith_order checked finiteness");
            clock += p;
            total += job.weight * clock;
        }
    }
    Ok(total)
}

/// One feasibility defect found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two jobs of one clique share a machine.
    SameCliquePair { machine: usize, job_a: u32, job_b: u32 },
    /// Job placed on a machine outside its own eligibility set.
    JobNotEligible { job: u32, machine: usize },
    /// Job placed on a machine outside its clique's eligibility set.
    CliqueNotEligible { job: u32, clique: usize, machine: usize },
    /// Job placed where its processing time is infinite.
    InfinitePlacement { job: u32, machine: usize },
    /// Stored objective differs from the recomputed one.
    ObjectiveMismatch { stored: u64, computed: u64 },
    /// Assignment names a job the instance does not have.
    UnknownJob { job: u32 },
    /// A job of the instance is missing from the assignment.
    MissingJob { job: u32 },
    /// Assignment names a machine beyond the machine count.
    BadMachine { job: u32, machine: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::SameCliquePair { machine, job_a, job_b } => write!(
                f,
                "jobs {job_a} and {job_b} share a clique and machine {}",
                machine + 1
            ),
            Violation::JobNotEligible { job, machine } => {
                write!(f, "job {job} is not eligible on machine {}", machine + 1)
            }
            Violation::CliqueNotEligible { job, clique, machine } => write!(
                f,
                "job {job} of clique {} is not allowed on machine {}",
                clique + 1,
                machine + 1
            ),
            Violation::InfinitePlacement { job, machine } => {
                write!(f, "job {job} has infinite time on machine {}", machine + 1)
            }
            Violation::ObjectiveMismatch { stored, computed } => {
                write!(f, "stored objective {stored} but schedule evaluates to {computed}")
            }
            Violation::UnknownJob { job } => write!(f, "schedule names unknown job {job}"),
            Violation::MissingJob { job } => write!(f, "job {job} is not assigned"),
            Violation::BadMachine { job, machine } => {
                write!(f, "job {job} assigned to machine {} out of range", machine + 1)
            }
        }
    }
}

/// Full validation report for a schedule against an instance.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check a schedule against an instance: clique conflicts, job and clique
/// eligibility, infinite placements, completeness, and the stored objective.
pub fn validate(instance: &Instance, schedule: &Schedule) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut complete = true;
    let mut evaluable = true;

    for job in instance.jobs() {
        if !schedule.assignment.contains_key(&job.id) {
            report.violations.push(Violation::MissingJob { job: job.id });
            complete = false;
        }
    }

    let mut per_machine: Vec<Vec<usize>> = vec![Vec::new(); instance.machines()];
    for (&id, &machine) in &schedule.assignment {
        let idx = match instance.job_index(id) {
            Some(idx) => idx,
            None => {
                report.violations.push(Violation::UnknownJob { job: id });
                evaluable = false;
                continue;
            }
        };
        if machine >= instance.machines() {
            report.violations.push(Violation::BadMachine { job: id, machine });
            evaluable = false;
            continue;
        }
        let job = &instance.jobs()[idx];
        if !job.time(machine).is_finite() {
            report
                .violations
                .push(Violation::InfinitePlacement { job: id, machine });
            evaluable = false;
        }
        if let Some(elig) = &job.eligible {
            if !elig.contains(&machine) {
                report.violations.push(Violation::JobNotEligible { job: id, machine });
            }
        }
        if let Some(elig) = instance.clique_eligible(job.clique) {
            if !elig.contains(&machine) {
                report.violations.push(Violation::CliqueNotEligible {
                    job: id,
                    clique: job.clique,
                    machine,
                });
            }
        }
        per_machine[machine].push(idx);
    }

    for (machine, idxs) in per_machine.iter().enumerate() {
        for (a, &ia) in idxs.iter().enumerate() {
            for &ib in &idxs[a + 1..] {
                let ja = &instance.jobs()[ia];
                let jb = &instance.jobs()[ib];
                if ja.clique == jb.clique {
                    let (lo, hi) = if ja.id <= jb.id { (ja.id, jb.id) } else { (jb.id, ja.id) };
                    report.violations.push(Violation::SameCliquePair {
                        machine,
                        job_a: lo,
                        job_b: hi,
                    });
                }
            }
        }
    }

    if complete && evaluable {
        match evaluate(instance, &schedule.assignment) {
            Ok(computed) => {
                if computed != schedule.objective {
                    report.violations.push(Violation::ObjectiveMismatch {
                        stored: schedule.objective,
                        computed,
                    });
                }
            }
            Err(_) => {
                // Unreachable: evaluable established finite placements.
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// JSON file formats. Unknown fields are rejected.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum KindFile {
    Identical,
    Unrelated,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, untagged)]
enum TimesFile {
    /// Identical machines: the one finite time.
    Scalar(u64),
    /// Unrelated machines: per-machine times, `null` = forbidden (infinite).
    PerMachine(Vec<Option<u64>>),
}

fn default_weight() -> u64 {
    1
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    id: u32,
    #[serde(default = "default_weight")]
    weight: u64,
    /// 1-based clique index.
    clique: usize,
    times: TimesFile,
    /// 1-based machine list; absent = all machines.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eligible: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    machines: usize,
    kind: KindFile,
    cliques: usize,
    jobs: Vec<JobFile>,
    /// 1-based clique index -> 1-based machine list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clique_eligible: Option<BTreeMap<String, Vec<usize>>>,
}

fn to_zero_based_machines(
    raw: &[usize],
    machines: usize,
    job: Option<u32>,
) -> Result<BTreeSet<usize>, InstanceError> {
    let mut set = BTreeSet::new();
    for &m in raw {
        if m == 0 || m > machines {
            return Err(InstanceError::MachineOutOfRange {
                job,
                machine: m.wrapping_sub(1),
            });
        }
        set.insert(m - 1);
    }
    Ok(set)
}

impl InstanceFile {
    fn into_instance(self) -> Result<Instance, InstanceError> {
        let machines = self.machines;
        let identical = matches!(self.kind, KindFile::Identical);
        if machines == 0 {
            return Err(InstanceError::NoMachines);
        }
        let mut jobs = Vec::with_capacity(self.jobs.len());
        for job in self.jobs {
            if job.clique == 0 {
                return Err(InstanceError::Json(format!(
                    "job {} names clique 0; cliques are numbered from 1",
                    job.id
                )));
            }
            let times = match (&self.kind, job.times) {
                (KindFile::Identical, TimesFile::Scalar(p)) => {
                    vec![ProcTime::Finite(p); machines]
                }
                (KindFile::Unrelated, TimesFile::PerMachine(row)) => row
                    .into_iter()
                    .map(|t| t.map_or(ProcTime::Infinite, ProcTime::Finite))
                    .collect(),
                (KindFile::Identical, TimesFile::PerMachine(_)) => {
                    return Err(InstanceError::Json(format!(
                        "job {} lists per-machine times in an identical-machine instance",
                        job.id
                    )));
                }
                (KindFile::Unrelated, TimesFile::Scalar(_)) => {
                    return Err(InstanceError::Json(format!(
                        "job {} gives a scalar time in an unrelated-machine instance",
                        job.id
                    )));
                }
            };
            let eligible = match &job.eligible {
                Some(raw) => Some(to_zero_based_machines(raw, machines, Some(job.id))?),
                None => None,
            };
            jobs.push(JobSpec::new(job.id, job.weight, job.clique - 1, times, eligible));
        }
        let mut clique_eligible = BTreeMap::new();
        if let Some(raw_map) = self.clique_eligible {
            for (key, raw) in raw_map {
                let clique: usize = key
                    .parse()
                    .map_err(|_| InstanceError::Json(format!("bad clique key '{key}'")))?;
                if clique == 0 {
                    return Err(InstanceError::Json(
                        "clique 0 in clique_eligible; cliques are numbered from 1".into(),
                    ));
                }
                clique_eligible.insert(clique - 1, to_zero_based_machines(&raw, machines, None)?);
            }
        }
        Instance::new(machines, identical, self.cliques, jobs, clique_eligible)
    }

    fn from_instance(inst: &Instance) -> InstanceFile {
        let kind = if inst.is_identical() { KindFile::Identical } else { KindFile::Unrelated };
        let jobs = inst
            .jobs()
            .iter()
            .map(|job| {
                let times = if inst.is_identical() {
                    TimesFile::Scalar(job.time(0).finite().expect("identical times are finite"))
                } else {
                    TimesFile::PerMachine(job.times().iter().map(|t| t.finite()).collect())
                };
                JobFile {
                    id: job.id,
                    weight: job.weight,
                    clique: job.clique + 1,
                    times,
                    eligible: job
                        .eligible
                        .as_ref()
                        .map(|set| set.iter().map(|m| m + 1).collect()),
                }
            })
            .collect();
        let mut clique_eligible = BTreeMap::new();
        for clique in 0..inst.cliques() {
            if let Some(set) = inst.clique_eligible(clique) {
                clique_eligible
                    .insert((clique + 1).to_string(), set.iter().map(|m| m + 1).collect());
            }
        }
        InstanceFile {
            machines: inst.machines(),
            kind,
            cliques: inst.cliques(),
            jobs,
            clique_eligible: if clique_eligible.is_empty() { None } else { Some(clique_eligible) },
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    /// job id (decimal string) -> 1-based machine.
    assignment: BTreeMap<String, usize>,
    objective: u64,
}
