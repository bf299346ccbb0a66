//! Backtracking search for p-partial Steinhaus functions.
//!
//! One alldifferent constraint per (representative, plane point) pair,
//! over the projected values pi(t) = const(t) + lambda . L(y_t): each
//! projected value depends on a single cell through the fixed linear
//! functional v -> lambda . v, so propagation works on the p-element
//! projected alphabet rather than on the p^3 cell alphabet. Domains are
//! bit-vectors over X_p; variable order is minimum remaining values
//! with lexicographic ties, value order a seeded shuffle.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::gf::Prime;
use crate::lattice::{build_w, complement_plane, decompose_unchecked, CubePoint, IsoVector};
use crate::partial_map::PartialMap;
use crate::verify::{verify_bruteforce, PermWitness};

/// Candidate values for one cell, as a bit-vector over X_p.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Domain {
    words: Vec<u64>,
    capacity: usize,
}

impl Domain {
    pub fn full(capacity: usize) -> Self {
        let nwords = capacity.div_ceil(64);
        let mut words = vec![u64::MAX; nwords];
        let spare = nwords * 64 - capacity;
        if spare > 0 {
            *words.last_mut().unwrap() >>= spare;
        }
        Domain { words, capacity }
    }

    pub fn empty(capacity: usize) -> Self {
        Domain {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
        }
    }

    pub fn singleton(capacity: usize, value: usize) -> Self {
        let mut d = Domain::empty(capacity);
        d.insert(value);
        d
    }

    pub fn insert(&mut self, value: usize) {
        self.words[value / 64] |= 1 << (value % 64);
    }

    pub fn contains(&self, value: usize) -> bool {
        self.words[value / 64] >> (value % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Removes everything in `other`; returns how many values left.
    pub fn subtract(&mut self, other: &Domain) -> usize {
        let mut removed = 0;
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            removed += (*w & o).count_ones() as usize;
            *w &= !o;
        }
        removed
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.capacity).filter(move |&v| self.contains(v))
    }
}

/// One alldifferent constraint: the p cells it touches (position t
/// holds the cell y_t) and the constant offsets const(t) = t d/2 -
/// lambda . eps_t.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub lambda: IsoVector,
    pub anchor: CubePoint,
    pub w_index: usize,
    pub cells: Vec<usize>,
    pub offsets: Vec<u64>,
}

/// Precomputed constraint structure for one prime.
#[derive(Clone, Debug)]
pub struct ConstraintIndex {
    p: Prime,
    constraints: Vec<Constraint>,
    /// cell -> (constraint, position) memberships
    cell_constraints: Vec<Vec<(u32, u32)>>,
    /// w_index -> projected value of each cell value: lambda . v mod p
    value_dot: Vec<Vec<u64>>,
    /// w_index -> residue -> bit-mask of values v with lambda . v = r
    value_masks: Vec<Vec<Domain>>,
}

impl ConstraintIndex {
    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn memberships(&self, cell: usize) -> &[(u32, u32)] {
        &self.cell_constraints[cell]
    }
}

/// Precomputes the (p+1) p^2 constraints of the representative family,
/// so that during search pi(t) is evaluable from a single cell
/// assignment as const(t) + lambda . L(y_t).
pub fn build_constraints(p: Prime) -> ConstraintIndex {
    let pv = p.get() as i64;
    let n_cells = (pv * pv * pv) as usize;
    let half = p.half().value() as i64;
    let w = build_w(p);

    let mut constraints = Vec::new();
    let mut cell_constraints = vec![Vec::new(); n_cells];
    for (wi, iso) in w.iter().enumerate() {
        let d = iso.d().value() as i64;
        for &anchor in complement_plane(iso).points() {
            let mut cells = Vec::with_capacity(pv as usize);
            let mut offsets = Vec::with_capacity(pv as usize);
            for t in 0..pv {
                let dec = decompose_unchecked(anchor.vec() + iso.vec() * t, pv);
                cells.push(dec.y.index());
                offsets.push(crate::gf::reduce(
                    t % pv * d % pv * half - iso.vec().dot(dec.eps),
                    p.get(),
                ));
            }
            let ci = constraints.len() as u32;
            for (t, &cell) in cells.iter().enumerate() {
                cell_constraints[cell].push((ci, t as u32));
            }
            constraints.push(Constraint {
                lambda: *iso,
                anchor,
                w_index: wi,
                cells,
                offsets,
            });
        }
    }

    let value_dot: Vec<Vec<u64>> = w
        .iter()
        .map(|iso| {
            CubePoint::all(pv)
                .map(|v| crate::gf::reduce(iso.vec().dot(v.vec()), p.get()))
                .collect()
        })
        .collect();
    let value_masks: Vec<Vec<Domain>> = value_dot
        .iter()
        .map(|dots| {
            let mut masks = vec![Domain::empty(n_cells); p.get() as usize];
            for (v, &r) in dots.iter().enumerate() {
                masks[r as usize].insert(v);
            }
            masks
        })
        .collect();

    ConstraintIndex {
        p,
        constraints,
        cell_constraints,
        value_dot,
        value_masks,
    }
}

/// Node and wall-clock limits; `None` means unbounded.
#[derive(Clone, Copy, Default, Debug)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_wall: Option<Duration>,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub seed: u64,
    /// Worker count; 1 selects the strictly sequential deterministic mode.
    pub threads: usize,
    /// Pin L(0,0,0) = (0,0,0) when that cell is unassigned. Sound for an
    /// empty initial map because solutions are closed under value
    /// translation; with other cells pre-assigned it narrows the space.
    pub fix_origin: bool,
    /// Reshuffle value order and restart once a run exceeds this many
    /// nodes. The quantum doubles after every restart, so exhaustive
    /// runs still terminate. Sequential mode only.
    pub restart_nodes: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seed: 0,
            threads: 1,
            fix_origin: false,
            restart_nodes: None,
        }
    }
}

#[derive(Clone, Copy, Default, Debug)]
pub struct SearchStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub prunings: u64,
    pub restarts: u64,
    pub wall: Duration,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.backtracks += other.backtracks;
        self.prunings += other.prunings;
        self.restarts += other.restarts;
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// A completion satisfying every constraint, re-verified by the
    /// pairwise oracle before being returned.
    Found {
        map: PartialMap,
        stats: SearchStats,
    },
    /// The initial assignment already violates a constraint.
    Infeasible {
        witness: PermWitness,
        stats: SearchStats,
    },
    /// The space under the initial assignment holds no solution.
    Exhausted { stats: SearchStats },
    BudgetExceeded { stats: SearchStats },
}

impl SearchOutcome {
    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Found { stats, .. }
            | SearchOutcome::Infeasible { stats, .. }
            | SearchOutcome::Exhausted { stats }
            | SearchOutcome::BudgetExceeded { stats } => stats,
        }
    }

    pub fn found_map(&self) -> Option<&PartialMap> {
        match self {
            SearchOutcome::Found { map, .. } => Some(map),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found { .. } => "found",
            SearchOutcome::Infeasible { .. } => "infeasible",
            SearchOutcome::Exhausted { .. } => "exhausted",
            SearchOutcome::BudgetExceeded { .. } => "budget-exceeded",
        }
    }
}

/// Shared cancellation / budget accounting across workers.
struct Shared {
    cancel: AtomicBool,
    nodes: AtomicU64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Shared {
    fn new(budget: &SearchBudget, start: Instant) -> Self {
        Shared {
            cancel: AtomicBool::new(false),
            nodes: AtomicU64::new(0),
            max_nodes: budget.max_nodes,
            deadline: budget.max_wall.map(|d| start + d),
        }
    }

    /// Claims one node; reports whether the budget still allows it.
    fn claim_node(&self) -> bool {
        if let Some(max) = self.max_nodes {
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= max {
                return false;
            }
        } else {
            self.nodes.fetch_add(1, Ordering::Relaxed);
        }
        true
    }

    fn over_deadline(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() > d)
    }
}

enum Dfs {
    Found,
    Exhausted,
    Stopped, // budget or cancellation
}

struct Searcher<'a> {
    index: &'a ConstraintIndex,
    n_cells: usize,
    assigned: Vec<Option<u16>>,
    domains: Vec<Domain>,
    used: Vec<u32>,
    value_order: Vec<u16>,
    stats: SearchStats,
    shared: &'a Shared,
    hit_budget: bool,
    trail: Vec<Frame>,
}

struct Frame {
    cell: usize,
    saved_domains: Vec<(usize, Domain)>,
    saved_used: Vec<(u32, u32)>,
}

impl<'a> Searcher<'a> {
    fn new(index: &'a ConstraintIndex, shared: &'a Shared, seed: u64) -> Self {
        let pv = index.p.get() as i64;
        let n_cells = (pv * pv * pv) as usize;
        let mut value_order: Vec<u16> = (0..n_cells as u16).collect();
        value_order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Searcher {
            index,
            n_cells,
            assigned: vec![None; n_cells],
            domains: vec![Domain::full(n_cells); n_cells],
            used: vec![0; index.constraints.len()],
            value_order,
            stats: SearchStats::default(),
            shared,
            hit_budget: false,
            trail: Vec::new(),
        }
    }

    /// Applies one assignment with forward checking. On success a trail
    /// frame is pushed; on failure the partial effects are rolled back.
    fn place(&mut self, cell: usize, value: u16) -> bool {
        let mut frame = Frame {
            cell,
            saved_domains: Vec::new(),
            saved_used: Vec::new(),
        };
        self.assigned[cell] = Some(value);
        let mut ok = true;
        'outer: for &(ci, t) in &self.index.cell_constraints[cell] {
            let c = &self.index.constraints[ci as usize];
            let pi = (c.offsets[t as usize]
                + self.index.value_dot[c.w_index][value as usize])
                % self.index.p.get();
            let bit = 1u32 << pi;
            if self.used[ci as usize] & bit != 0 {
                ok = false;
                break 'outer;
            }
            frame.saved_used.push((ci, self.used[ci as usize]));
            self.used[ci as usize] |= bit;
            for (s, &sibling) in c.cells.iter().enumerate() {
                if s == t as usize || self.assigned[sibling].is_some() {
                    continue;
                }
                let r = (pi + self.index.p.get() - c.offsets[s]) % self.index.p.get();
                let mask = &self.index.value_masks[c.w_index][r as usize];
                if frame.saved_domains.iter().all(|(i, _)| *i != sibling) {
                    frame
                        .saved_domains
                        .push((sibling, self.domains[sibling].clone()));
                }
                let removed = self.domains[sibling].subtract(mask);
                self.stats.prunings += removed as u64;
                if self.domains[sibling].is_empty() {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            self.trail.push(frame);
            true
        } else {
            self.rollback(frame);
            false
        }
    }

    fn rollback(&mut self, frame: Frame) {
        self.assigned[frame.cell] = None;
        for (ci, mask) in frame.saved_used.into_iter().rev() {
            self.used[ci as usize] = mask;
        }
        for (cell, dom) in frame.saved_domains.into_iter().rev() {
            self.domains[cell] = dom;
        }
    }

    fn undo(&mut self) {
        let frame = self.trail.pop().expect("matching place");
        self.rollback(frame);
    }

    fn pick_mrv(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for cell in 0..self.n_cells {
            if self.assigned[cell].is_none() {
                let count = self.domains[cell].count();
                if best.is_none_or(|(_, b)| count < b) {
                    best = Some((cell, count));
                }
            }
        }
        best.map(|(c, _)| c)
    }

    fn dfs(&mut self) -> Dfs {
        let Some(cell) = self.pick_mrv() else {
            return Dfs::Found;
        };
        let candidates: Vec<u16> = self
            .value_order
            .iter()
            .copied()
            .filter(|&v| self.domains[cell].contains(v as usize))
            .collect();
        for value in candidates {
            if self.stats.nodes % 1024 == 0
                && (self.shared.cancel.load(Ordering::Relaxed) || self.shared.over_deadline())
            {
                return Dfs::Stopped;
            }
            if !self.shared.claim_node() {
                self.hit_budget = true;
                return Dfs::Stopped;
            }
            self.stats.nodes += 1;
            if self.place(cell, value) {
                match self.dfs() {
                    Dfs::Found => return Dfs::Found,
                    Dfs::Stopped => return Dfs::Stopped,
                    Dfs::Exhausted => self.undo(),
                }
            }
        }
        self.stats.backtracks += 1;
        Dfs::Exhausted
    }

    fn extract_map(&self) -> PartialMap {
        let pv = self.index.p.get() as i64;
        PartialMap::from_fn(pv, |cell| {
            let v = self.assigned[cell.index()].expect("complete assignment");
            CubePoint::from_index(v as usize, pv).unwrap()
        })
        .expect("assignment forms a map")
    }
}

/// Scans the initial assignment for a same-constraint collision; the
/// witness is the first one in constraint order.
fn initial_conflict(index: &ConstraintIndex, initial: &PartialMap) -> Option<PermWitness> {
    let p = index.p.get();
    for c in &index.constraints {
        let mut seen: Vec<Option<u32>> = vec![None; p as usize];
        for (t, &cell) in c.cells.iter().enumerate() {
            let Some(value) = initial.entry_by_index(cell) else {
                continue;
            };
            let vi = CubePoint::from_vec(value, p as i64).unwrap().index();
            let pi = (c.offsets[t] + index.value_dot[c.w_index][vi]) % p;
            if let Some(s) = seen[pi as usize] {
                return Some(PermWitness {
                    lambda: c.lambda,
                    x: c.anchor,
                    s: s as u64,
                    t: t as u64,
                    value: index.p.element(pi as i64),
                });
            }
            seen[pi as usize] = Some(t as u32);
        }
    }
    None
}

/// Backtracking search with forward checking. The outcome is always a
/// value; every `Found` map has been re-verified by the pairwise
/// oracle. Identical (p, initial, budget, seed) give identical outcomes
/// and statistics in sequential mode.
pub fn search(
    p: Prime,
    initial: &PartialMap,
    budget: &SearchBudget,
    options: &SearchOptions,
) -> Result<SearchOutcome, Error> {
    let pv = p.get() as i64;
    if initial.m() != pv {
        return Err(Error::ModulusMismatch {
            expected: pv,
            got: initial.m(),
        });
    }
    let started = Instant::now();
    let index = build_constraints(p);
    let shared = Shared::new(budget, started);

    let mut stats = SearchStats::default();
    if let Some(witness) = initial_conflict(&index, initial) {
        stats.wall = started.elapsed();
        return Ok(SearchOutcome::Infeasible { witness, stats });
    }

    let mut restart = 0u64;
    loop {
        let mut searcher = Searcher::new(&index, &shared, options.seed.wrapping_add(restart));

        // root assignments: the initial map, then the optional origin pin
        let mut root_ok = true;
        for cell in initial.cells() {
            if let Some(v) = initial.get(cell) {
                let vi = v.index() as u16;
                if !searcher.place(cell.index(), vi) {
                    root_ok = false;
                    break;
                }
            }
        }
        if root_ok && options.fix_origin && searcher.assigned[0].is_none() {
            root_ok = searcher.place(0, 0);
        }
        if !root_ok {
            stats.absorb(&searcher.stats);
            stats.wall = started.elapsed();
            return Ok(SearchOutcome::Exhausted { stats });
        }

        if options.threads > 1 {
            let out = parallel_root(&index, &shared, searcher, options, &mut stats);
            stats.wall = started.elapsed();
            return match out {
                ParallelResult::Found(map) => finish(map, stats),
                ParallelResult::Exhausted => Ok(SearchOutcome::Exhausted { stats }),
                ParallelResult::Stopped => Ok(SearchOutcome::BudgetExceeded { stats }),
            };
        }

        // restart quantum, if configured: stop this run early and
        // reshuffle; doubles every restart so completeness is kept
        let quantum = options
            .restart_nodes
            .map(|q| q.saturating_mul(1u64 << restart.min(32)));
        let result = run_sequential(&mut searcher, quantum);
        stats.absorb(&searcher.stats);
        match result {
            Dfs::Found => {
                let map = searcher.extract_map();
                stats.wall = started.elapsed();
                return finish(map, stats);
            }
            Dfs::Exhausted => {
                stats.wall = started.elapsed();
                return Ok(SearchOutcome::Exhausted { stats });
            }
            Dfs::Stopped => {
                let quantum_hit = quantum
                    .is_some_and(|q| searcher.stats.nodes >= q && !searcher.hit_budget)
                    && !shared.over_deadline();
                if quantum_hit {
                    restart += 1;
                    stats.restarts += 1;
                    continue;
                }
                stats.wall = started.elapsed();
                return Ok(SearchOutcome::BudgetExceeded { stats });
            }
        }
    }
}

fn finish(map: PartialMap, stats: SearchStats) -> Result<SearchOutcome, Error> {
    let verdict = verify_bruteforce(&map)?;
    assert!(
        verdict.is_valid(),
        "engine bug: search returned a map the pairwise oracle rejects"
    );
    Ok(SearchOutcome::Found { map, stats })
}

/// Runs the sequential searcher, optionally capping this run's nodes
/// (restart quantum).
fn run_sequential(searcher: &mut Searcher<'_>, quantum: Option<u64>) -> Dfs {
    match quantum {
        None => searcher.dfs(),
        Some(q) => dfs_with_quantum(searcher, q),
    }
}

fn dfs_with_quantum(searcher: &mut Searcher<'_>, quantum: u64) -> Dfs {
    // same recursion, but treat the quantum as a stop condition
    let Some(cell) = searcher.pick_mrv() else {
        return Dfs::Found;
    };
    let candidates: Vec<u16> = searcher
        .value_order
        .iter()
        .copied()
        .filter(|&v| searcher.domains[cell].contains(v as usize))
        .collect();
    for value in candidates {
        if searcher.stats.nodes >= quantum {
            return Dfs::Stopped;
        }
        if searcher.stats.nodes % 1024 == 0
            && (searcher.shared.cancel.load(Ordering::Relaxed)
                || searcher.shared.over_deadline())
        {
            return Dfs::Stopped;
        }
        if !searcher.shared.claim_node() {
            searcher.hit_budget = true;
            return Dfs::Stopped;
        }
        searcher.stats.nodes += 1;
        if searcher.place(cell, value) {
            match dfs_with_quantum(searcher, quantum) {
                Dfs::Found => return Dfs::Found,
                Dfs::Stopped => return Dfs::Stopped,
                Dfs::Exhausted => searcher.undo(),
            }
        }
    }
    searcher.stats.backtracks += 1;
    Dfs::Exhausted
}

enum ParallelResult {
    Found(PartialMap),
    Exhausted,
    Stopped,
}

/// Splits the root branching factor round-robin across workers, each
/// exploring its share of the first cell's values with private state;
/// the first completion cancels the rest.
fn parallel_root(
    index: &ConstraintIndex,
    shared: &Shared,
    root: Searcher<'_>,
    options: &SearchOptions,
    stats: &mut SearchStats,
) -> ParallelResult {
    let Some(root_cell) = root.pick_mrv() else {
        return ParallelResult::Found(root.extract_map());
    };
    let candidates: Vec<u16> = root
        .value_order
        .iter()
        .copied()
        .filter(|&v| root.domains[root_cell].contains(v as usize))
        .collect();
    let workers = options.threads.min(candidates.len().max(1));
    let assignments: Vec<Vec<u16>> = (0..workers)
        .map(|w| {
            candidates
                .iter()
                .copied()
                .skip(w)
                .step_by(workers)
                .collect()
        })
        .collect();

    let root_assigned = root.assigned.clone();
    let root_domains = root.domains.clone();
    let root_used = root.used.clone();

    let results: Vec<(Option<PartialMap>, SearchStats, bool)> = std::thread::scope(|scope| {
        let handles: Vec<_> = assignments
            .into_iter()
            .enumerate()
            .map(|(wi, values)| {
                let assigned = root_assigned.clone();
                let domains = root_domains.clone();
                let used = root_used.clone();
                scope.spawn(move || {
                    let mut s = Searcher::new(index, shared, options.seed.wrapping_add(wi as u64));
                    s.assigned = assigned;
                    s.domains = domains;
                    s.used = used;
                    let mut exhausted_all = true;
                    for value in values {
                        if shared.cancel.load(Ordering::Relaxed) || shared.over_deadline() {
                            exhausted_all = false;
                            break;
                        }
                        if !shared.claim_node() {
                            s.hit_budget = true;
                            exhausted_all = false;
                            break;
                        }
                        s.stats.nodes += 1;
                        if s.place(root_cell, value) {
                            match s.dfs() {
                                Dfs::Found => {
                                    shared.cancel.store(true, Ordering::Relaxed);
                                    return (Some(s.extract_map()), s.stats, false);
                                }
                                Dfs::Stopped => {
                                    exhausted_all = false;
                                    s.undo();
                                    break;
                                }
                                Dfs::Exhausted => s.undo(),
                            }
                        }
                    }
                    (None, s.stats, exhausted_all)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut found = None;
    let mut all_exhausted = true;
    for (map, worker_stats, exhausted) in results {
        stats.absorb(&worker_stats);
        if map.is_some() && found.is_none() {
            found = map;
        }
        all_exhausted &= exhausted;
    }
    match found {
        Some(map) => ParallelResult::Found(map),
        None if all_exhausted => ParallelResult::Exhausted,
        None => ParallelResult::Stopped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::fixture_map;
    use crate::lattice::IntVec3;
    use crate::verify::verify_perms;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn constraint_shape() {
        let idx = build_constraints(p(3));
        assert_eq!(idx.constraints().len(), 36);
        assert!(idx.constraints().iter().all(|c| c.cells.len() == 3));
        // every cell appears in exactly p + 1 constraints
        for cell in 0..27 {
            assert_eq!(idx.memberships(cell).len(), 4);
        }
        // cells within one constraint are distinct
        for c in idx.constraints() {
            let mut cells = c.cells.clone();
            cells.sort_unstable();
            cells.dedup();
            assert_eq!(cells.len(), 3);
        }

        let idx = build_constraints(p(5));
        assert_eq!(idx.constraints().len(), 150);
        assert!(idx.constraints().iter().all(|c| c.cells.len() == 5));
        for cell in 0..125 {
            assert_eq!(idx.memberships(cell).len(), 6);
        }
    }

    #[test]
    fn projected_values_match_pi_tables() {
        // const(t) + lambda . L(y_t) equals the direct pi computation
        let map = PartialMap::random_complete(3, 8).unwrap();
        let idx = build_constraints(p(3));
        for c in idx.constraints() {
            let tab = crate::partial_map::pi_table(&map, &c.lambda, c.anchor).unwrap();
            for (t, &cell) in c.cells.iter().enumerate() {
                let v = map.entry_by_index(cell).unwrap();
                let vi = CubePoint::from_vec(v, 3).unwrap().index();
                let projected = (c.offsets[t] + idx.value_dot[c.w_index][vi]) % 3;
                assert_eq!(projected, tab.value_at(t as u64).value());
            }
        }
    }

    #[test]
    fn completes_blanked_fixture() {
        let mut initial = fixture_map();
        for idx in 0..5 {
            initial.clear(CubePoint::from_index(idx, 3).unwrap()).unwrap();
        }
        let budget = SearchBudget {
            max_nodes: Some(1_000_000),
            max_wall: None,
        };
        let out = search(p(3), &initial, &budget, &SearchOptions::default()).unwrap();
        let map = out.found_map().expect("completion exists");
        assert!(verify_perms(map).unwrap().is_valid());
    }

    #[test]
    fn known_collision_is_infeasible_with_zero_nodes() {
        // L(0,0,0) = L(2,2,1) = (0,0,0) collides in the constraint
        // through (0,0,0) with direction (1,1,2)
        let mut initial = PartialMap::new(3).unwrap();
        let zero = CubePoint::new(0, 0, 0, 3).unwrap();
        initial.set(zero, zero).unwrap();
        initial
            .set(CubePoint::new(2, 2, 1, 3).unwrap(), zero)
            .unwrap();
        let out = search(
            p(3),
            &initial,
            &SearchBudget::default(),
            &SearchOptions::default(),
        )
        .unwrap();
        match &out {
            SearchOutcome::Infeasible { witness, stats } => {
                assert_eq!(stats.nodes, 0);
                assert_eq!(witness.lambda.vec(), IntVec3::new(1, 1, 2));
                assert_eq!(witness.x.vec(), IntVec3::new(0, 0, 0));
                assert_eq!((witness.s, witness.t), (0, 2));
            }
            other => panic!("expected infeasible, got {}", other.label()),
        }
    }

    #[test]
    fn empty_search_finds_solution_p3() {
        let initial = PartialMap::new(3).unwrap();
        let budget = SearchBudget {
            max_nodes: Some(1_000_000),
            max_wall: Some(Duration::from_secs(60)),
        };
        let out = search(p(3), &initial, &budget, &SearchOptions::default()).unwrap();
        assert!(out.found_map().is_some(), "outcome: {}", out.label());
    }

    #[test]
    fn deterministic_outcome_and_stats() {
        let initial = PartialMap::new(3).unwrap();
        let budget = SearchBudget {
            max_nodes: Some(50_000),
            max_wall: None,
        };
        let opts = SearchOptions {
            seed: 12,
            ..SearchOptions::default()
        };
        let a = search(p(3), &initial, &budget, &opts).unwrap();
        let b = search(p(3), &initial, &budget, &opts).unwrap();
        assert_eq!(a.stats().nodes, b.stats().nodes);
        assert_eq!(a.stats().backtracks, b.stats().backtracks);
        assert_eq!(a.stats().prunings, b.stats().prunings);
        assert_eq!(a.found_map().is_some(), b.found_map().is_some());
        assert_eq!(a.found_map(), b.found_map());
    }

    #[test]
    fn fix_origin_still_finds() {
        let initial = PartialMap::new(3).unwrap();
        let budget = SearchBudget {
            max_nodes: Some(1_000_000),
            max_wall: None,
        };
        let opts = SearchOptions {
            fix_origin: true,
            ..SearchOptions::default()
        };
        let out = search(p(3), &initial, &budget, &opts).unwrap();
        let map = out.found_map().expect("found");
        assert_eq!(
            map.get(CubePoint::new(0, 0, 0, 3).unwrap()).unwrap().vec(),
            IntVec3::new(0, 0, 0)
        );
    }

    #[test]
    fn parallel_mode_finds_p3() {
        let initial = PartialMap::new(3).unwrap();
        let budget = SearchBudget {
            max_nodes: Some(1_000_000),
            max_wall: Some(Duration::from_secs(60)),
        };
        let opts = SearchOptions {
            threads: 4,
            ..SearchOptions::default()
        };
        let out = search(p(3), &initial, &budget, &opts).unwrap();
        assert!(out.found_map().is_some());
    }

    #[test]
    fn pruning_is_sound_on_reduced_instances() {
        // values pruned by forward checking never appear in completions:
        // enumerate all completions of maps with two blanked cells and
        // compare against the surviving domains
        let base = fixture_map();
        let idx = build_constraints(p(3));
        let shared = Shared::new(&SearchBudget::default(), Instant::now());
        for blank in [(0usize, 9usize), (3, 20), (7, 26)] {
            let mut initial = base.clone();
            initial.clear(CubePoint::from_index(blank.0, 3).unwrap()).unwrap();
            initial.clear(CubePoint::from_index(blank.1, 3).unwrap()).unwrap();

            let mut searcher = Searcher::new(&idx, &shared, 0);
            for cell in initial.cells() {
                if let Some(v) = initial.get(cell) {
                    assert!(searcher.place(cell.index(), v.index() as u16));
                }
            }
            // collect values completing the first blank cell in some
            // full solution by brute force over both blanks
            let mut completable = [false; 27];
            for v0 in 0..27 {
                for v1 in 0..27 {
                    let mut m = initial.clone();
                    m.set(
                        CubePoint::from_index(blank.0, 3).unwrap(),
                        CubePoint::from_index(v0, 3).unwrap(),
                    )
                    .unwrap();
                    m.set(
                        CubePoint::from_index(blank.1, 3).unwrap(),
                        CubePoint::from_index(v1, 3).unwrap(),
                    )
                    .unwrap();
                    if verify_bruteforce(&m).unwrap().is_valid() {
                        completable[v0] = true;
                    }
                }
            }
            for v in 0..27 {
                if completable[v] {
                    assert!(
                        searcher.domains[blank.0].contains(v),
                        "value {v} completes blank {} but was pruned",
                        blank.0
                    );
                }
            }
        }
    }

    #[test]
    fn restart_policy_still_finds() {
        // tiny quantum forces restarts; geometric growth lets a later
        // run finish
        let initial = PartialMap::new(3).unwrap();
        let budget = SearchBudget {
            max_nodes: Some(1_000_000),
            max_wall: None,
        };
        let opts = SearchOptions {
            restart_nodes: Some(4),
            ..SearchOptions::default()
        };
        let out = search(p(3), &initial, &budget, &opts).unwrap();
        assert!(out.found_map().is_some(), "outcome: {}", out.label());
        assert!(out.stats().restarts > 0, "quantum of 4 must trigger restarts");
    }

    #[test]
    fn complete_valid_initial_returns_immediately() {
        let out = search(
            p(3),
            &fixture_map(),
            &SearchBudget::default(),
            &SearchOptions::default(),
        )
        .unwrap();
        match &out {
            SearchOutcome::Found { map, stats } => {
                assert_eq!(*map, fixture_map());
                assert_eq!(stats.nodes, 0);
            }
            other => panic!("expected found, got {}", other.label()),
        }
    }

    #[test]
    fn exhausts_a_provably_empty_subspace() {
        // Eight assignments with no direct collision whose forward
        // propagation provably empties the domain of cell 18 (checked
        // by independent enumeration): the engine must report
        // exhaustion without expanding a node.
        let assignments = [
            (1usize, [2, 2, 0]),
            (5, [0, 0, 1]),
            (7, [1, 1, 1]),
            (8, [0, 2, 0]),
            (13, [0, 1, 2]),
            (14, [1, 0, 0]),
            (16, [2, 0, 0]),
            (17, [2, 0, 1]),
        ];
        let mut initial = PartialMap::new(3).unwrap();
        for (i, v) in assignments {
            initial
                .set(
                    CubePoint::from_index(i, 3).unwrap(),
                    CubePoint::new(v[0], v[1], v[2], 3).unwrap(),
                )
                .unwrap();
        }
        let out = search(
            p(3),
            &initial,
            &SearchBudget {
                max_nodes: Some(100_000),
                max_wall: None,
            },
            &SearchOptions::default(),
        )
        .unwrap();
        match &out {
            SearchOutcome::Exhausted { stats } => assert_eq!(stats.nodes, 0),
            other => panic!("expected exhausted, got {}", other.label()),
        }
    }

    #[test]
    fn rejects_mismatched_modulus() {
        let initial = PartialMap::new(5).unwrap();
        assert!(matches!(
            search(
                p(3),
                &initial,
                &SearchBudget::default(),
                &SearchOptions::default()
            ),
            Err(Error::ModulusMismatch { .. })
        ));
    }
}
