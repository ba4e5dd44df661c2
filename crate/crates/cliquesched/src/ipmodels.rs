//! Integer-programming models with n-fold block structure: the
//! configuration model for identical machines with clique eligibility, and
//! two weighted-completion-time models over job kinds, plus a small exact
//! branch-and-bound solver and a diff-friendly text dump.

use crate::model::{evaluate, Instance, ProcTime, Schedule};
use crate::{Budget, BudgetMeter};
use num::rational::Ratio;
use num::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

pub type Rat = Ratio<i128>;

fn rat(n: i128) -> Rat {
    Rat::from_integer(n)
}

fn half() -> Rat {
    Rat::new(1, 2)
}

/// Per-machine slot usage in chronological order: entry 0 is the first
/// slot, value 0 an empty slot, value k (1-based) a job of clique k−1.
/// Empty slots form a prefix and no clique repeats.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SlotConfiguration {
    pub slots: Vec<usize>,
}

impl SlotConfiguration {
    /// The clique (0-based) occupying layer `ell` (0-based), if any.
    pub fn clique_at(&self, ell: usize) -> Option<usize> {
        match self.slots[ell] {
            0 => None,
            k => Some(k - 1),
        }
    }

    /// True if some layer among 0..=ell holds clique k (0-based).
    pub fn holds_by(&self, k: usize, ell: usize) -> bool {
        self.slots[..=ell].contains(&(k + 1))
    }

    pub fn is_well_formed(&self, b: usize) -> bool {
        let zeros_prefix = self
            .slots
            .iter()
            .skip_while(|&&s| s == 0)
            .all(|&s| s != 0);
        let nonzero: Vec<usize> = self.slots.iter().copied().filter(|&s| s != 0).collect();
        let mut distinct: Vec<usize> = nonzero.clone();
        distinct.sort_unstable();
        distinct.dedup();
        self.slots.len() == b
            && self.slots.iter().all(|&s| s <= b)
            && zeros_prefix
            && distinct.len() == nonzero.len()
    }
}

/// All slot configurations for b cliques: empty slots first, at most one
/// slot per clique. At most (b+1)! of them.
pub fn enumerate_slot_configurations(b: usize) -> Vec<SlotConfiguration> {
    assert!(b >= 1, "needs at least one clique");
    let mut out = Vec::new();
    let mut slots = Vec::with_capacity(b);
    let mut used = vec![false; b];
    fill(b, &mut slots, &mut used, &mut out);
    return out;

    fn fill(
        b: usize,
        slots: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<SlotConfiguration>,
    ) {
        if slots.len() == b {
            out.push(SlotConfiguration { slots: slots.clone() });
            return;
        }
        // A zero is allowed only while the prefix is still all zeros.
        if slots.iter().all(|&s| s == 0) {
            slots.push(0);
            fill(b, slots, used, out);
            slots.pop();
        }
        for k in 0..b {
            if !used[k] {
                used[k] = true;
                slots.push(k + 1);
                fill(b, slots, used, out);
                slots.pop();
                used[k] = false;
            }
        }
    }
}

/// Jobs with equal time vectors, weights, and eligibility sets are
/// interchangeable; a kind stands for all of them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct JobKind {
    pub times: Vec<ProcTime>,
    pub weight: u64,
    pub eligible: Option<BTreeSet<usize>>,
}

/// Distinct job kinds of the instance in sorted order, the kind of each
/// job, and the kind-by-clique count matrix n_{j,k}.
pub fn job_kinds(instance: &Instance) -> (Vec<JobKind>, Vec<usize>, Vec<Vec<u32>>) {
    let mut kinds: Vec<JobKind> = instance
        .jobs()
        .iter()
        .map(|job| JobKind {
            times: job.times().to_vec(),
            weight: job.weight,
            eligible: job.eligible.clone(),
        })
        .collect();
    kinds.sort();
    kinds.dedup();
    let kind_of: Vec<usize> = instance
        .jobs()
        .iter()
        .map(|job| {
            kinds
                .binary_search_by(|kind| {
                    (&kind.times[..], kind.weight, &kind.eligible).cmp(&(
                        job.times(),
                        job.weight,
                        &job.eligible,
                    ))
                })
                .unwrap()
        })
        .collect();
    let mut counts = vec![vec![0u32; instance.cliques()]; kinds.len()];
    for (v, job) in instance.jobs().iter().enumerate() {
        counts[kind_of[v]][job.clique] += 1;
    }
    (kinds, kind_of, counts)
}

/// The Smith ratio w/p of a kind on a machine; 0 when the placement is
/// forbidden (such kinds never run there).
fn smith_ratio(kind: &JobKind, machine: usize) -> Rat {
    match kind.times[machine] {
        ProcTime::Finite(p) => Rat::new(kind.weight as i128, p as i128),
        ProcTime::Infinite => rat(0),
    }
}

/// Kind indices sorted by non-increasing Smith ratio on the machine,
/// ties by kind index.
fn smith_permutation(kinds: &[JobKind], machine: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..kinds.len()).collect();
    order.sort_by(|&a, &b| {
        smith_ratio(&kinds[b], machine)
            .cmp(&smith_ratio(&kinds[a], machine))
            .then(a.cmp(&b))
    });
    order
}

/// Weighted completion time contributed by one machine running the given
/// number of jobs of each kind, in Smith order: Σ_j ½ z_j² (ρ_j − ρ_{j+1})
/// + ½ Σ_j x_j p_j w_j with z_j the prefix loads. Exact rational, asserted
/// integral.
pub fn machine_contribution(kinds: &[JobKind], machine: usize, counts: &[u32]) -> Rat {
    assert_eq!(kinds.len(), counts.len());
    let order = smith_permutation(kinds, machine);
    let mut total = rat(0);
    let mut z = rat(0);
    for (pos, &j) in order.iter().enumerate() {
        let p = match kinds[j].times[machine] {
            ProcTime::Finite(p) => p,
            ProcTime::Infinite => {
                assert_eq!(counts[j], 0, "forbidden kinds cannot run on the machine");
                continue;
            }
        };
        z += rat(p as i128) * rat(counts[j] as i128);
        let rho = smith_ratio(&kinds[j], machine);
        let rho_next = order
            .get(pos + 1)
            .map_or(rat(0), |&next| smith_ratio(&kinds[next], machine));
        total += half() * z * z * (rho - rho_next);
        total += half() * rat(counts[j] as i128) * rat(p as i128) * rat(kinds[j].weight as i128);
    }
    assert!(total.is_integer(), "weighted completion times are integral");
    total
}

/// Convex piecewise-linear extension of the prefix sums of a clique's
/// sorted sizes: agrees with Σ_{s≤q} p_s at integers q, linear in between,
/// and continues with the last slope beyond the job count.
pub fn g_tilde(sorted_sizes: &[u64], x: Rat) -> Rat {
    assert!(sorted_sizes.windows(2).all(|w| w[0] <= w[1]), "sizes must be sorted");
    assert!(!x.is_negative(), "defined for x >= 0");
    if sorted_sizes.is_empty() {
        return rat(0);
    }
    let n = sorted_sizes.len() as i128;
    let floor = x.floor().to_integer();
    if x < rat(1) {
        return rat(sorted_sizes[0] as i128) * x;
    }
    if floor >= n {
        let prefix: i128 = sorted_sizes.iter().map(|&p| p as i128).sum();
        return rat(sorted_sizes[n as usize - 1] as i128) * (x - rat(n)) + rat(prefix);
    }
    let prefix: i128 = sorted_sizes[..floor as usize].iter().map(|&p| p as i128).sum();
    let ceil_size = sorted_sizes[x.ceil().to_integer() as usize - 1];
    rat(ceil_size as i128) * (x - rat(floor)) + rat(prefix)
}

/// One integral decision variable with finite bounds.
#[derive(Debug, Clone)]
pub struct IpVariable {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
    pub integer: bool,
    /// Brick this variable belongs to in the n-fold layout; None for
    /// variables shared across bricks (duplicated only in the report).
    pub brick: Option<usize>,
}

/// Whether a row lives in the global band or in one brick's diagonal block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Global,
    Local(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
}

/// One linear row: Σ coeff·var  (= | ≤)  rhs.
#[derive(Debug, Clone)]
pub struct IpConstraint {
    pub coeffs: Vec<(usize, i64)>,
    pub relation: Relation,
    pub rhs: i64,
    pub band: Band,
}

/// Separable convex objective pieces.
#[derive(Debug, Clone)]
pub enum ObjTerm {
    /// coeff · var
    Linear { var: usize, coeff: Rat },
    /// coeff · var², coeff ≥ 0
    HalfSquare { var: usize, coeff: Rat },
    /// Value at integer point q is `values[q - lower]`; consecutive slope
    /// differences are ≥ 0.
    PiecewiseConvex { var: usize, values: Vec<Rat> },
}

impl ObjTerm {
    pub fn var(&self) -> usize {
        match *self {
            ObjTerm::Linear { var, .. }
            | ObjTerm::HalfSquare { var, .. }
            | ObjTerm::PiecewiseConvex { var, .. } => var,
        }
    }

    fn value_at(&self, vars: &[IpVariable], value: i64) -> Rat {
        match self {
            ObjTerm::Linear { coeff, .. } => *coeff * rat(value as i128),
            ObjTerm::HalfSquare { coeff, .. } => *coeff * rat(value as i128) * rat(value as i128),
            ObjTerm::PiecewiseConvex { var, values } => {
                values[(value - vars[*var].lower) as usize]
            }
        }
    }

    /// Smallest value the term can take over the variable's whole range.
    fn min_over_range(&self, vars: &[IpVariable]) -> Rat {
        let v = &vars[self.var()];
        match self {
            ObjTerm::Linear { coeff, .. } => {
                (*coeff * rat(v.lower as i128)).min(*coeff * rat(v.upper as i128))
            }
            ObjTerm::HalfSquare { coeff, .. } => {
                if v.lower <= 0 && v.upper >= 0 {
                    rat(0)
                } else {
                    (*coeff * rat(v.lower as i128) * rat(v.lower as i128))
                        .min(*coeff * rat(v.upper as i128) * rat(v.upper as i128))
                }
            }
            ObjTerm::PiecewiseConvex { values, .. } => {
                values.iter().copied().min().unwrap_or_else(|| rat(0))
            }
        }
    }
}

/// Exact dimensions of an n-fold block decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NfoldDims {
    /// Number of bricks n.
    pub bricks: u64,
    /// Globally uniform rows r.
    pub global_rows: u64,
    /// Locally uniform rows per brick s.
    pub local_rows: u64,
    /// Variables per brick t.
    pub brick_width: u64,
    /// Largest absolute matrix entry Δ.
    pub max_entry: u64,
}

/// The structure report: the dimensions as printed in the source analyses
/// and the ones measured on the concrete model, with notes where the two
/// disagree, plus the bound span ‖u−ℓ‖∞ and an upper bound on |f|.
#[derive(Debug, Clone)]
pub struct NfoldStructure {
    pub reported: NfoldDims,
    pub validated: NfoldDims,
    pub bound_span: u64,
    pub objective_bound: u128,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct IpModel {
    pub vars: Vec<IpVariable>,
    pub constraints: Vec<IpConstraint>,
    pub objective: Vec<ObjTerm>,
    pub nfold: NfoldStructure,
}

impl IpModel {
    /// Objective value of a full assignment, in exact rationals.
    pub fn objective_value(&self, values: &[i64]) -> Rat {
        self.objective
            .iter()
            .map(|term| term.value_at(&self.vars, values[term.var()]))
            .sum()
    }
}

/// Measure the n-fold dimensions realized by the model's band and brick
/// labels: local rows must touch only their own brick's variables. Returns
/// the dimensions and any warnings (non-uniform bricks, shared variables).
pub fn validate_nfold(model: &IpModel) -> (NfoldDims, Vec<String>) {
    let mut warnings = Vec::new();
    let brick_count = model
        .vars
        .iter()
        .filter_map(|v| v.brick)
        .max()
        .map_or(0, |max| max + 1);
    let mut width = vec![0u64; brick_count];
    let mut shared = 0u64;
    for v in &model.vars {
        match v.brick {
            Some(brick) => width[brick] += 1,
            None => shared += 1,
        }
    }
    if shared > 0 {
        warnings.push(format!(
            "{shared} shared variables sit outside the bricks and are duplicated per brick in the printed argument"
        ));
    }
    let brick_width = width.iter().copied().max().unwrap_or(0);
    if width.iter().any(|&w| w != brick_width) {
        warnings.push("brick widths are not uniform; reporting the maximum".into());
    }

    let mut global_rows = 0u64;
    let mut local = vec![0u64; brick_count];
    let mut max_entry = 0u64;
    for row in &model.constraints {
        for &(var, coeff) in &row.coeffs {
            max_entry = max_entry.max(coeff.unsigned_abs());
            if let Band::Local(brick) = row.band {
                assert_eq!(
                    model.vars[var].brick,
                    Some(brick),
                    "locally uniform rows may only touch their own brick"
                );
            }
        }
        match row.band {
            Band::Global => global_rows += 1,
            Band::Local(brick) => local[brick] += 1,
        }
    }
    let local_rows = local.iter().copied().max().unwrap_or(0);
    if local.iter().any(|&l| l != local_rows) {
        warnings.push(
            "local row counts differ between bricks; missing rows are zero padding".into(),
        );
    }
    (
        NfoldDims {
            bricks: brick_count as u64,
            global_rows,
            local_rows,
            brick_width,
            max_entry,
        },
        warnings,
    )
}

/// Deterministic variable layout of the configuration model.
struct BagLayout {
    configs: Vec<SlotConfiguration>,
    /// x[machine][config] variable index.
    x: Vec<Vec<usize>>,
    /// y[clique][layer] variable index.
    y: Vec<Vec<usize>>,
    /// Sorted job sizes per clique.
    sizes: Vec<Vec<u64>>,
}

fn bag_layout(instance: &Instance) -> BagLayout {
    let m = instance.machines();
    let b = instance.cliques();
    let configs = enumerate_slot_configurations(b);
    let mut x = vec![vec![0usize; configs.len()]; m];
    let mut next = 0usize;
    for row in x.iter_mut() {
        for slot in row.iter_mut() {
            *slot = next;
            next += 1;
        }
    }
    let mut y = vec![vec![0usize; b]; b];
    for row in y.iter_mut() {
        for slot in row.iter_mut() {
            *slot = next;
            next += 1;
        }
    }
    let sizes = instance
        .clique_members()
        .iter()
        .map(|members| {
            let mut sizes: Vec<u64> = members
                .iter()
                .map(|&v| {
                    instance.jobs()[v]
                        .time(0)
                        .finite()
                        .expect("identical-machine jobs need finite times")
                })
                .collect();
            sizes.sort_unstable();
            sizes
        })
        .collect();
    BagLayout { configs, x, y, sizes }
}

fn config_name(config: &SlotConfiguration) -> String {
    config
        .slots
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

/// Configuration model for identical machines with per-clique eligibility:
/// choose one slot configuration per machine; y_{k,ℓ} counts the slots
/// reserved for clique k in layers up to ℓ, and pays the smallest y_{k,ℓ}
/// sizes of the clique.
pub fn build_bag_restriction_ip(instance: &Instance) -> IpModel {
    assert!(instance.is_identical(), "needs identical machines");
    assert!(instance.unit_weights(), "needs unit weights");
    assert!(
        instance.jobs().iter().all(|job| job.eligible.is_none()),
        "per-job eligibility is not modeled, only per-clique"
    );
    let m = instance.machines();
    let b = instance.cliques();
    let n = instance.jobs().len() as i64;
    let layout = bag_layout(instance);

    let mut vars = Vec::new();
    for i in 0..m {
        for config in &layout.configs {
            let eligible = (0..b).all(|k| {
                !config.slots.contains(&(k + 1))
                    || instance.clique_eligible(k).map_or(true, |set| set.contains(&i))
            });
            vars.push(IpVariable {
                name: format!("x_m{}_c{}", i + 1, config_name(config)),
                lower: 0,
                upper: i64::from(eligible),
                integer: true,
                brick: Some(i),
            });
        }
    }
    for k in 0..b {
        for ell in 0..b {
            vars.push(IpVariable {
                name: format!("y_k{}_l{}", k + 1, ell + 1),
                lower: 0,
                upper: n,
                integer: true,
                brick: None,
            });
        }
    }

    let mut constraints = Vec::new();
    for i in 0..m {
        constraints.push(IpConstraint {
            coeffs: layout.x[i].iter().map(|&v| (v, 1)).collect(),
            relation: Relation::Eq,
            rhs: 1,
            band: Band::Local(i),
        });
    }
    for k in 0..b {
        for ell in 0..b {
            let mut coeffs: Vec<(usize, i64)> = Vec::new();
            for i in 0..m {
                for (ci, config) in layout.configs.iter().enumerate() {
                    if config.holds_by(k, ell) {
                        coeffs.push((layout.x[i][ci], 1));
                    }
                }
            }
            coeffs.push((layout.y[k][ell], -1));
            constraints.push(IpConstraint {
                coeffs,
                relation: Relation::Eq,
                rhs: 0,
                band: Band::Global,
            });
        }
    }
    for k in 0..b {
        constraints.push(IpConstraint {
            coeffs: vec![(layout.y[k][b - 1], 1)],
            relation: Relation::Eq,
            rhs: layout.sizes[k].len() as i64,
            band: Band::Global,
        });
    }

    let mut objective = Vec::new();
    for k in 0..b {
        for ell in 0..b {
            let values = (0..=n)
                .map(|q| g_tilde(&layout.sizes[k], rat(q as i128)))
                .collect();
            objective.push(ObjTerm::PiecewiseConvex { var: layout.y[k][ell], values });
        }
    }

    let p_max = instance.max_finite_time();
    let reported = NfoldDims {
        bricks: m as u64,
        global_rows: (b * b + b) as u64,
        local_rows: 1,
        brick_width: (b * b + layout.configs.len()) as u64,
        max_entry: 1,
    };
    let mut model = IpModel {
        vars,
        constraints,
        objective,
        nfold: NfoldStructure {
            reported,
            validated: reported,
            bound_span: n.max(1) as u64,
            objective_bound: p_max as u128 * (b * b) as u128 * n.max(1) as u128,
            notes: vec![
                "brick width counts the per-machine duplicates of the b^2 shared y variables"
                    .into(),
            ],
        },
    };
    let (validated, warnings) = validate_nfold(&model);
    // The measured width misses the y duplicates by construction.
    model.nfold.validated = NfoldDims {
        brick_width: validated.brick_width + (b * b) as u64,
        ..validated
    };
    model.nfold.notes.extend(warnings);
    model
}

/// Read a schedule off a feasible configuration-model solution: per clique,
/// the smallest unscheduled job takes the reserved slot in the lowest
/// layer (ties to the smaller machine index).
pub fn decode_bag_assignment(instance: &Instance, values: &[i64]) -> Schedule {
    let layout = bag_layout(instance);
    let m = instance.machines();
    let b = instance.cliques();
    let chosen: Vec<usize> = (0..m)
        .map(|i| {
            let picked: Vec<usize> = (0..layout.configs.len())
                .filter(|&ci| values[layout.x[i][ci]] == 1)
                .collect();
            assert_eq!(picked.len(), 1, "each machine picks exactly one configuration");
            picked[0]
        })
        .collect();
    let members = instance.clique_members();
    let mut assignment = BTreeMap::new();
    for k in 0..b {
        let mut slots: Vec<(usize, usize)> = Vec::new();
        for i in 0..m {
            for ell in 0..b {
                if layout.configs[chosen[i]].clique_at(ell) == Some(k) {
                    slots.push((ell, i));
                }
            }
        }
        slots.sort_unstable();
        let mut jobs: Vec<usize> = members[k].clone();
        jobs.sort_by_key(|&v| {
            (instance.jobs()[v].time(0).finite().unwrap(), instance.jobs()[v].id)
        });
        assert_eq!(slots.len(), jobs.len(), "reserved slots must match the clique size");
        for (&(_, machine), &v) in slots.iter().zip(jobs.iter()) {
            assignment.insert(instance.jobs()[v].id, machine);
        }
    }
    let objective = evaluate(instance, &assignment).expect("decoded placements are finite");
    Schedule { assignment, objective }
}

/// Shared structure of the two weighted models.
struct WctLayout {
    kinds: Vec<JobKind>,
    counts: Vec<Vec<u32>>,
    /// x[kind][clique][machine] variable index.
    x: Vec<Vec<Vec<usize>>>,
    /// z[kind position][machine] variable index.
    z: Vec<Vec<usize>>,
    /// Smith permutation per machine.
    order: Vec<Vec<usize>>,
}

fn wct_allowed(instance: &Instance, kind: &JobKind, clique: usize, machine: usize) -> bool {
    kind.times[machine].is_finite()
        && kind.eligible.as_ref().map_or(true, |set| set.contains(&machine))
        && instance
            .clique_eligible(clique)
            .map_or(true, |set| set.contains(&machine))
}

/// `machines_as_bricks` selects the §-by-machines variant: variables are
/// grouped so that bricks are machines; otherwise bricks are cliques with
/// the z variables forming one extra brick.
fn build_wct_ip(instance: &Instance, machines_as_bricks: bool) -> (IpModel, WctLayout) {
    let m = instance.machines();
    let b = instance.cliques();
    let (kinds, _, counts) = job_kinds(instance);
    let theta = kinds.len();
    let p_max = instance.max_finite_time();
    let w_max = instance.jobs().iter().map(|j| j.weight).max().unwrap_or(1);
    let order: Vec<Vec<usize>> = (0..m).map(|i| smith_permutation(&kinds, i)).collect();

    let mut vars: Vec<IpVariable> = Vec::new();
    let mut x = vec![vec![vec![usize::MAX; m]; b]; theta];
    let mut z = vec![vec![usize::MAX; m]; theta];
    let mut push_x = |vars: &mut Vec<IpVariable>, j: usize, k: usize, i: usize, brick: usize| {
        let allowed = wct_allowed(instance, &kinds[j], k, i) && counts[j][k] > 0;
        x[j][k][i] = vars.len();
        vars.push(IpVariable {
            name: format!("x_j{}_k{}_m{}", j + 1, k + 1, i + 1),
            lower: 0,
            upper: i64::from(allowed),
            integer: true,
            brick: Some(brick),
        });
    };
    let mut push_z = |vars: &mut Vec<IpVariable>, j: usize, i: usize, brick: usize| {
        z[j][i] = vars.len();
        vars.push(IpVariable {
            name: format!("z_j{}_m{}", j + 1, i + 1),
            lower: 0,
            upper: (b as u64 * p_max) as i64,
            integer: true,
            brick: Some(brick),
        });
    };
    if machines_as_bricks {
        for i in 0..m {
            for j in 0..theta {
                for k in 0..b {
                    push_x(&mut vars, j, k, i, i);
                }
            }
            for j in 0..theta {
                push_z(&mut vars, j, i, i);
            }
        }
    } else {
        for k in 0..b {
            for j in 0..theta {
                for i in 0..m {
                    push_x(&mut vars, j, k, i, k);
                }
            }
        }
        for j in 0..theta {
            for i in 0..m {
                push_z(&mut vars, j, i, b);
            }
        }
    }

    let mut constraints = Vec::new();
    // (1) every job of each kind and clique is placed somewhere.
    for j in 0..theta {
        for k in 0..b {
            constraints.push(IpConstraint {
                coeffs: (0..m).map(|i| (x[j][k][i], 1)).collect(),
                relation: Relation::Eq,
                rhs: counts[j][k] as i64,
                band: Band::Global,
            });
        }
    }
    // (2) z_j^i equals the load of the first j kinds in Smith order.
    for i in 0..m {
        for j in 0..theta {
            let mut coeffs = Vec::new();
            for &kind in &order[i][..=j] {
                if let ProcTime::Finite(p) = kinds[kind].times[i] {
                    for k in 0..b {
                        coeffs.push((x[kind][k][i], p as i64));
                    }
                }
            }
            coeffs.push((z[j][i], -1));
            constraints.push(IpConstraint {
                coeffs,
                relation: Relation::Eq,
                rhs: 0,
                band: if machines_as_bricks { Band::Local(i) } else { Band::Global },
            });
        }
    }
    // (3) at most one job per clique per machine.
    for i in 0..m {
        for k in 0..b {
            constraints.push(IpConstraint {
                coeffs: (0..theta).map(|j| (x[j][k][i], 1)).collect(),
                relation: Relation::Le,
                rhs: 1,
                band: if machines_as_bricks { Band::Local(i) } else { Band::Local(k) },
            });
        }
    }

    let mut objective = Vec::new();
    for i in 0..m {
        for (pos, &j) in order[i].iter().enumerate() {
            let rho = smith_ratio(&kinds[j], i);
            let rho_next = order[i]
                .get(pos + 1)
                .map_or(rat(0), |&next| smith_ratio(&kinds[next], i));
            objective.push(ObjTerm::HalfSquare {
                var: z[pos][i],
                coeff: half() * (rho - rho_next),
            });
            if let ProcTime::Finite(p) = kinds[j].times[i] {
                for k in 0..b {
                    objective.push(ObjTerm::Linear {
                        var: x[j][k][i],
                        coeff: half() * rat(p as i128) * rat(kinds[j].weight as i128),
                    });
                }
            }
        }
    }

    let reported = if machines_as_bricks {
        NfoldDims {
            bricks: m as u64,
            global_rows: (theta * b) as u64,
            local_rows: (theta + b) as u64,
            brick_width: (theta * (b + 1)) as u64,
            max_entry: p_max,
        }
    } else {
        NfoldDims {
            bricks: (b + 1) as u64,
            global_rows: (theta * m) as u64,
            local_rows: m as u64,
            brick_width: (theta * m) as u64,
            max_entry: p_max,
        }
    };
    let mut model = IpModel {
        vars,
        constraints,
        objective,
        nfold: NfoldStructure {
            reported,
            validated: reported,
            bound_span: (b as u64 * p_max).max(1),
            objective_bound: if machines_as_bricks {
                m as u128
                    * (b as u128 * p_max as u128 * p_max as u128
                        + b as u128 * p_max as u128 * w_max as u128)
            } else {
                m as u128 * (b * b) as u128 * p_max as u128 * w_max as u128
            },
            notes: Vec::new(),
        },
    };
    let (validated, warnings) = validate_nfold(&model);
    model.nfold.validated = validated;
    model.nfold.notes.extend(warnings);
    if !machines_as_bricks && validated.global_rows != model.nfold.reported.global_rows {
        model.nfold.notes.push(format!(
            "printed global row count omits the {} kind-count rows that the decomposition also keeps global",
            theta * b
        ));
    }
    (
        model,
        WctLayout { kinds, counts, x, z, order },
    )
}

/// Weighted-completion-time model whose bricks are the cliques (the z
/// variables form one extra brick); the per-clique capacity rows are the
/// locally uniform ones.
pub fn build_wct_machines_ip(instance: &Instance) -> IpModel {
    build_wct_ip(instance, false).0
}

/// Weighted-completion-time model whose bricks are the machines; the load
/// and capacity rows of each machine are its locally uniform block.
pub fn build_wct_cliques_ip(instance: &Instance) -> IpModel {
    build_wct_ip(instance, true).0
}

/// Read a schedule off a feasible weighted-model solution: an x variable
/// at 1 places the smallest-id unscheduled job of its kind and clique on
/// its machine.
pub fn decode_wct_assignment(
    instance: &Instance,
    machines_as_bricks: bool,
    values: &[i64],
) -> Schedule {
    let (_, layout) = build_wct_ip(instance, machines_as_bricks);
    let (_, kind_of, _) = job_kinds(instance);
    let mut pool: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
    for (v, job) in instance.jobs().iter().enumerate() {
        pool.entry((kind_of[v], job.clique)).or_default().push(job.id);
    }
    for ids in pool.values_mut() {
        ids.sort_unstable();
        ids.reverse();
    }
    let mut assignment = BTreeMap::new();
    for (j, per_clique) in layout.x.iter().enumerate() {
        for (k, per_machine) in per_clique.iter().enumerate() {
            for (i, &var) in per_machine.iter().enumerate() {
                if values[var] == 1 {
                    let id = pool
                        .get_mut(&(j, k))
                        .and_then(|ids| ids.pop())
                        .expect("placements never exceed the kind count");
                    assignment.insert(id, i);
                }
            }
        }
    }
    let objective = evaluate(instance, &assignment).expect("decoded placements are finite");
    Schedule { assignment, objective }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpError {
    InfeasibleModel,
    BudgetExceeded,
}

impl std::fmt::Display for IpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IpError::InfeasibleModel => write!(f, "the model has no integral solution"),
            IpError::BudgetExceeded => write!(f, "search budget exceeded"),
        }
    }
}

impl std::error::Error for IpError {}

#[derive(Debug, Clone)]
pub struct IpSolution {
    pub values: Vec<i64>,
    pub objective: Rat,
}

/// Depth-first branch and bound over the variables in declared order,
/// lower values first, with interval-arithmetic feasibility checks and a
/// convex lower bound on the objective. Deterministic; the first optimum
/// found among ties is kept.
pub fn solve_ip_exact(model: &IpModel, budget: Budget) -> Result<IpSolution, IpError> {
    let vars = &model.vars;
    let var_count = vars.len();
    // Per-variable constraint and objective attachments.
    let mut rows_of: Vec<Vec<(usize, i64)>> = vec![Vec::new(); var_count];
    for (c, row) in model.constraints.iter().enumerate() {
        for &(var, coeff) in &row.coeffs {
            rows_of[var].push((c, coeff));
        }
    }
    let mut terms_of: Vec<Vec<usize>> = vec![Vec::new(); var_count];
    for (t, term) in model.objective.iter().enumerate() {
        terms_of[term.var()].push(t);
    }

    // Interval state per constraint: fixed part plus free min/max.
    let mut fixed = vec![0i128; model.constraints.len()];
    let mut free_min = vec![0i128; model.constraints.len()];
    let mut free_max = vec![0i128; model.constraints.len()];
    for (c, row) in model.constraints.iter().enumerate() {
        for &(var, coeff) in &row.coeffs {
            let a = coeff as i128 * vars[var].lower as i128;
            let b = coeff as i128 * vars[var].upper as i128;
            free_min[c] += a.min(b);
            free_max[c] += a.max(b);
        }
    }
    let feasible_interval = |c: usize, fixed: &[i128], fmin: &[i128], fmax: &[i128]| {
        let row = &model.constraints[c];
        let low = fixed[c] + fmin[c];
        let high = fixed[c] + fmax[c];
        match row.relation {
            Relation::Eq => low <= row.rhs as i128 && row.rhs as i128 <= high,
            Relation::Le => low <= row.rhs as i128,
        }
    };
    for c in 0..model.constraints.len() {
        if !feasible_interval(c, &fixed, &free_min, &free_max) {
            return Err(IpError::InfeasibleModel);
        }
    }

    let term_floor: Vec<Rat> = model.objective.iter().map(|t| t.min_over_range(vars)).collect();
    let mut bound: Rat = term_floor.iter().copied().sum();

    struct Search<'a> {
        model: &'a IpModel,
        rows_of: &'a [Vec<(usize, i64)>],
        terms_of: &'a [Vec<usize>],
        term_floor: &'a [Rat],
        fixed: Vec<i128>,
        free_min: Vec<i128>,
        free_max: Vec<i128>,
        values: Vec<i64>,
        best: Option<IpSolution>,
        meter: BudgetMeter,
    }

    impl Search<'_> {
        fn descend(&mut self, var: usize, bound: Rat) -> Result<(), IpError> {
            if var == self.model.vars.len() {
                let objective = self.model.objective_value(&self.values);
                if self.best.as_ref().map_or(true, |b| objective < b.objective) {
                    self.best =
                        Some(IpSolution { values: self.values.clone(), objective });
                }
                return Ok(());
            }
            let spec = &self.model.vars[var];
            for value in spec.lower..=spec.upper {
                if !self.meter.spend(1) {
                    return Err(IpError::BudgetExceeded);
                }
                // Commit `value`: move this variable's span into the fixed
                // parts and tighten the objective bound.
                let mut ok = true;
                for &(c, coeff) in &self.rows_of[var] {
                    let a = coeff as i128 * spec.lower as i128;
                    let b = coeff as i128 * spec.upper as i128;
                    self.free_min[c] -= a.min(b);
                    self.free_max[c] -= a.max(b);
                    self.fixed[c] += coeff as i128 * value as i128;
                }
                let mut next_bound = bound;
                for &t in &self.terms_of[var] {
                    next_bound +=
                        self.model.objective[t].value_at(&self.model.vars, value)
                            - self.term_floor[t];
                }
                for &(c, _) in &self.rows_of[var] {
                    let row = &self.model.constraints[c];
                    let low = self.fixed[c] + self.free_min[c];
                    let high = self.fixed[c] + self.free_max[c];
                    let fits = match row.relation {
                        Relation::Eq => low <= row.rhs as i128 && row.rhs as i128 <= high,
                        Relation::Le => low <= row.rhs as i128,
                    };
                    if !fits {
                        ok = false;
                        break;
                    }
                }
                if ok
                    && self
                        .best
                        .as_ref()
                        .map_or(true, |b| next_bound < b.objective)
                {
                    self.values[var] = value;
                    self.descend(var + 1, next_bound)?;
                }
                for &(c, coeff) in &self.rows_of[var] {
                    let a = coeff as i128 * spec.lower as i128;
                    let b = coeff as i128 * spec.upper as i128;
                    self.free_min[c] += a.min(b);
                    self.free_max[c] += a.max(b);
                    self.fixed[c] -= coeff as i128 * value as i128;
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        model,
        rows_of: &rows_of,
        terms_of: &terms_of,
        term_floor: &term_floor,
        fixed,
        free_min,
        free_max,
        values: vars.iter().map(|v| v.lower).collect(),
        best: None,
        meter: BudgetMeter::new(budget),
    };
    if var_count == 0 {
        bound = rat(0);
    }
    search.descend(0, bound)?;
    search.best.ok_or(IpError::InfeasibleModel)
}

/// Stable text form of a model: variables, rows, objective pieces, and the
/// n-fold report — exact integers and rationals only.
pub fn dump_ip(model: &IpModel) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "vars {}", model.vars.len());
    for v in &model.vars {
        let brick = v.brick.map_or("shared".to_string(), |b| (b + 1).to_string());
        let _ = writeln!(
            out,
            "var {} in [{}, {}] {} brick {}",
            v.name,
            v.lower,
            v.upper,
            if v.integer { "integer" } else { "continuous" },
            brick
        );
    }
    let _ = writeln!(out, "rows {}", model.constraints.len());
    for row in &model.constraints {
        let terms: Vec<String> = row
            .coeffs
            .iter()
            .map(|&(var, coeff)| format!("{}*{}", coeff, model.vars[var].name))
            .collect();
        let relation = match row.relation {
            Relation::Eq => "=",
            Relation::Le => "<=",
        };
        let band = match row.band {
            Band::Global => "global".to_string(),
            Band::Local(b) => format!("local {}", b + 1),
        };
        let _ = writeln!(out, "row {} {} {} band {}", terms.join(" + "), relation, row.rhs, band);
    }
    let _ = writeln!(out, "objective {}", model.objective.len());
    for term in &model.objective {
        match term {
            ObjTerm::Linear { var, coeff } => {
                if !coeff.is_zero() {
                    let _ = writeln!(out, "linear {} {}", model.vars[*var].name, coeff);
                }
            }
            ObjTerm::HalfSquare { var, coeff } => {
                if !coeff.is_zero() {
                    let _ = writeln!(out, "halfsquare {} {}", model.vars[*var].name, coeff);
                }
            }
            ObjTerm::PiecewiseConvex { var, values } => {
                let points: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(
                    out,
                    "piecewise {} : {}",
                    model.vars[*var].name,
                    points.join(" ")
                );
            }
        }
    }
    let dims = |d: &NfoldDims| {
        format!(
            "n={} r={} s={} t={} delta={}",
            d.bricks, d.global_rows, d.local_rows, d.brick_width, d.max_entry
        )
    };
    let _ = writeln!(out, "nfold reported {}", dims(&model.nfold.reported));
    let _ = writeln!(out, "nfold validated {}", dims(&model.nfold.validated));
    let _ = writeln!(
        out,
        "nfold bounds span={} fmax<={}",
        model.nfold.bound_span, model.nfold.objective_bound
    );
    for note in &model.nfold.notes {
        let _ = writeln!(out, "note {note}");
    }
    out
}
