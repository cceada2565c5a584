//! Hurwitz tuples: verification, image classification and existence search.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{CoverGroup, ProfileError, RamificationProfile, Symbol};
use crate::perm::{all_perms, inv_index, mul_index, Perm, PermSet};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonodromyError {
    #[error("tuple has {got} handle pairs, profile needs {want}")]
    HandleCount { got: usize, want: usize },
    #[error("tuple has {got} branch entries, profile needs {want}")]
    BranchCount { got: usize, want: usize },
    #[error("degenerate stratum: g = {g} with {points} branch points")]
    Degenerate { g: u32, points: u32 },
    #[error("witness file: {0}")]
    Witness(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Entries lie in the embedded group's own classes and generate exactly that group.
    GaloisImage,
    /// Entries only need the right S4 cycle type; the image must be S4-conjugate to the group.
    TransitiveImage,
}

/// Local monodromy around each branch point plus `g` handle pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzTuple {
    pub base_genus: u32,
    pub handles: Vec<(Perm, Perm)>,
    pub branch: Vec<Perm>,
}

fn commutator(a: &Perm, b: &Perm) -> Perm {
    a.compose(b).compose(&a.inverse()).compose(&b.inverse())
}

impl HurwitzTuple {
    pub fn genus0(branch: Vec<Perm>) -> Self {
        HurwitzTuple { base_genus: 0, handles: Vec::new(), branch }
    }

    pub fn commutator_product(&self) -> Perm {
        self.handles.iter().fold(Perm::IDENTITY, |acc, (a, b)| acc.compose(&commutator(a, b)))
    }

    pub fn branch_product(&self) -> Perm {
        self.branch.iter().fold(Perm::IDENTITY, |acc, s| acc.compose(s))
    }

    pub fn relation_holds(&self) -> bool {
        self.commutator_product() == self.branch_product()
    }

    pub fn entries(&self) -> impl Iterator<Item = Perm> + '_ {
        self.handles.iter().flat_map(|(a, b)| [*a, *b]).chain(self.branch.iter().copied())
    }

    pub fn generated(&self) -> PermSet {
        self.entries().collect::<PermSet>().generated()
    }

    /// Simultaneous conjugation of every entry.
    pub fn conjugate_by(&self, x: &Perm) -> HurwitzTuple {
        HurwitzTuple {
            base_genus: self.base_genus,
            handles: self.handles.iter().map(|(a, b)| (a.conjugate_by(x), b.conjugate_by(x))).collect(),
            branch: self.branch.iter().map(|s| s.conjugate_by(x)).collect(),
        }
    }
}

impl fmt::Display for HurwitzTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.handles.iter().map(|(a, b)| format!("[{a}, {b}]")).collect();
        parts.push(self.branch.iter().map(Perm::to_string).collect::<Vec<_>>().join(" "));
        write!(f, "{}", parts.join(" | "))
    }
}

/// What a tuple generates, up to conjugacy in S4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ImageClass {
    Transitive(CoverGroup),
    Intransitive,
}

impl fmt::Display for ImageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageClass::Transitive(g) => write!(f, "{g}"),
            ImageClass::Intransitive => write!(f, "intransitive"),
        }
    }
}

pub fn classify_group(h: PermSet) -> ImageClass {
    if !h.is_transitive() {
        return ImageClass::Intransitive;
    }
    let group = match h.len() {
        4 if h.iter().any(|p| p.order() == 4) => CoverGroup::Cyclic4,
        4 => CoverGroup::Klein,
        8 => CoverGroup::Dihedral8,
        12 => CoverGroup::Alt4,
        24 => CoverGroup::Sym4,
        n => unreachable!("transitive subgroup of S4 of order {n}"),
    };
    ImageClass::Transitive(group)
}

pub fn classify_image(t: &HurwitzTuple) -> ImageClass {
    classify_group(t.generated())
}

fn conjugate_in_s4(h: PermSet, target: PermSet) -> bool {
    h.len() == target.len() && all_perms().iter().any(|x| h.conjugate_by(x) == target)
}

/// The outcome of checking a tuple against a profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleCheck {
    pub relation: bool,
    pub classes: bool,
    pub generation: bool,
    pub diagnostics: Vec<String>,
}

impl TupleCheck {
    pub fn ok(&self) -> bool {
        self.relation && self.classes && self.generation
    }
}

/// Branch slot candidates in block order, with their symbols.
fn slots(profile: &RamificationProfile, mode: SearchMode) -> Vec<(Symbol, PermSet)> {
    profile
        .branch_points()
        .into_iter()
        .map(|c| {
            let set = match mode {
                SearchMode::GaloisImage => c.members,
                SearchMode::TransitiveImage => c.class().elements(),
            };
            (c.symbol, set)
        })
        .collect()
}

fn handle_set(profile: &RamificationProfile, mode: SearchMode) -> PermSet {
    match mode {
        SearchMode::GaloisImage => profile.group.elements(),
        SearchMode::TransitiveImage => PermSet::FULL,
    }
}

fn image_ok(h: PermSet, profile: &RamificationProfile, mode: SearchMode) -> bool {
    let target = profile.group.elements();
    match mode {
        SearchMode::GaloisImage => h == target,
        SearchMode::TransitiveImage => conjugate_in_s4(h, target),
    }
}

pub fn verify_tuple(
    t: &HurwitzTuple,
    profile: &RamificationProfile,
    mode: SearchMode,
) -> Result<TupleCheck, MonodromyError> {
    if t.handles.len() != profile.g as usize {
        return Err(MonodromyError::HandleCount { got: t.handles.len(), want: profile.g as usize });
    }
    let slots = slots(profile, mode);
    if t.branch.len() != slots.len() {
        return Err(MonodromyError::BranchCount { got: t.branch.len(), want: slots.len() });
    }
    let mut diagnostics = Vec::new();
    let relation = t.relation_holds();
    if !relation {
        diagnostics.push(format!(
            "commutator product {} differs from branch product {}",
            t.commutator_product(),
            t.branch_product()
        ));
    }
    let mut classes = true;
    for (i, (s, (sym, allowed))) in t.branch.iter().zip(&slots).enumerate() {
        if !allowed.contains(s) {
            classes = false;
            diagnostics.push(format!("entry {} = {s} is not a valid {} entry", i + 1, sym.key()));
        }
    }
    let handles = handle_set(profile, mode);
    for (i, (a, b)) in t.handles.iter().enumerate() {
        if !handles.contains(a) || !handles.contains(b) {
            classes = false;
            diagnostics.push(format!("handle pair {} leaves the allowed group", i + 1));
        }
    }
    let h = t.generated();
    let generation = image_ok(h, profile, mode);
    if !generation {
        diagnostics.push(format!("entries generate a group of order {} ({}), not {}", h.len(), classify_group(h), profile.group));
    }
    Ok(TupleCheck { relation, classes, generation, diagnostics })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchStatus {
    Witness,
    ExhaustedNone,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<HurwitzTuple>,
    pub nodes_explored: u64,
    /// Deepest branch position reached, counting from 1.
    pub max_depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: SearchMode,
    pub budget: u64,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { mode: SearchMode::GaloisImage, budget: DEFAULT_BUDGET, parallel: false }
    }
}

/// `{[a,b] : a, b in h}` iterated `g` times; `{e}` when `g = 0`.
fn commutator_products(h: PermSet, g: usize) -> Vec<PermSet> {
    let mut single = PermSet::EMPTY;
    for a in h.iter() {
        for b in h.iter() {
            single.insert(commutator(&a, &b));
        }
    }
    let mut out = vec![PermSet::singleton(Perm::IDENTITY)];
    for k in 1..=g {
        let prev = out[k - 1];
        let mut next = PermSet::EMPTY;
        for x in prev.indices() {
            for y in single.indices() {
                next.0 |= 1 << mul_index(x, y);
            }
        }
        out.push(next);
    }
    out
}

struct Searcher {
    slots: Vec<PermSet>,
    /// `need[k]`: prefixes after `k` entries that can still be completed.
    need: Vec<PermSet>,
    /// `comm_sets[k]`: products of `k` commutators of handle elements.
    comm_sets: Vec<PermSet>,
    /// Handle pairs grouped by commutator value.
    pairs_by_comm: Vec<Vec<(usize, usize)>>,
    all_pairs: Vec<(usize, usize, usize)>,
    g: usize,
    target: PermSet,
    galois: bool,
    budget: u64,
    nodes: AtomicU64,
    over_budget: AtomicBool,
    found: AtomicBool,
    witness: Mutex<Option<HurwitzTuple>>,
    max_depth: AtomicU64,
}

impl Searcher {
    fn new(profile: &RamificationProfile, opts: &SearchOptions) -> Searcher {
        let slots: Vec<PermSet> = slots(profile, opts.mode).into_iter().map(|(_, s)| s).collect();
        let handles = handle_set(profile, opts.mode);
        let g = profile.g as usize;
        let comm_sets = commutator_products(handles, g);
        let mut need = vec![PermSet::EMPTY; slots.len() + 1];
        need[slots.len()] = comm_sets[g];
        for k in (0..slots.len()).rev() {
            let mut set = PermSet::EMPTY;
            for c in slots[k].iter() {
                set = set.union(&need[k + 1].right_mul(&c.inverse()));
            }
            need[k] = set;
        }
        let mut pairs_by_comm = vec![Vec::new(); 24];
        let mut all_pairs = Vec::new();
        for a in handles.iter() {
            for b in handles.iter() {
                let c = commutator(&a, &b).index();
                pairs_by_comm[c].push((a.index(), b.index()));
                all_pairs.push((a.index(), b.index(), c));
            }
        }
        Searcher {
            slots,
            need,
            comm_sets,
            pairs_by_comm,
            all_pairs,
            g,
            target: profile.group.elements(),
            galois: opts.mode == SearchMode::GaloisImage,
            budget: opts.budget,
            nodes: AtomicU64::new(0),
            over_budget: AtomicBool::new(false),
            found: AtomicBool::new(false),
            witness: Mutex::new(None),
            max_depth: AtomicU64::new(0),
        }
    }

    fn stop(&self) -> bool {
        self.found.load(Ordering::Relaxed) || self.over_budget.load(Ordering::Relaxed)
    }

    /// Counts one node; false once the budget is spent.
    fn tick(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.over_budget.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn image_ok(&self, gens: PermSet) -> bool {
        let h = gens.generated();
        if self.galois {
            h == self.target
        } else {
            conjugate_in_s4(h, self.target)
        }
    }

    fn record(&self, branch: &[usize], handles: &[(usize, usize)]) {
        let mut w = self.witness.lock().expect("witness lock");
        if w.is_none() {
            *w = Some(HurwitzTuple {
                base_genus: self.g as u32,
                handles: handles.iter().map(|&(a, b)| (Perm::from_index(a), Perm::from_index(b))).collect(),
                branch: branch.iter().map(|&i| Perm::from_index(i)).collect(),
            });
            self.found.store(true, Ordering::Relaxed);
        }
    }

    fn branch_dfs(&self, depth: usize, prefix: usize, gens: PermSet, chosen: &mut Vec<usize>) {
        if self.stop() {
            return;
        }
        self.max_depth.fetch_max(depth as u64, Ordering::Relaxed);
        if depth == self.slots.len() {
            let mut handles = Vec::with_capacity(self.g);
            self.handle_dfs(0, prefix, gens, chosen, &mut handles);
            return;
        }
        for c in self.slots[depth].indices() {
            let next = mul_index(prefix, c);
            if !self.need[depth + 1].contains_index(next) {
                continue;
            }
            if !self.tick() {
                return;
            }
            chosen.push(c);
            self.branch_dfs(depth + 1, next, PermSet(gens.0 | 1 << c), chosen);
            chosen.pop();
            if self.stop() {
                return;
            }
        }
    }

    /// Chooses handle pairs whose commutators multiply to `rest`.
    fn handle_dfs(&self, i: usize, rest: usize, gens: PermSet, branch: &[usize], handles: &mut Vec<(usize, usize)>) {
        if i == self.g {
            if rest == Perm::IDENTITY.index() && self.image_ok(gens) {
                self.record(branch, handles);
            }
            return;
        }
        let remaining = self.g - i - 1;
        let try_pair = |a: usize, b: usize, next: usize, handles: &mut Vec<(usize, usize)>| -> bool {
            if !self.tick() {
                return false;
            }
            handles.push((a, b));
            self.handle_dfs(i + 1, next, PermSet(gens.0 | 1 << a | 1 << b), branch, handles);
            handles.pop();
            !self.stop()
        };
        if remaining == 0 {
            for &(a, b) in &self.pairs_by_comm[rest] {
                if !try_pair(a, b, Perm::IDENTITY.index(), handles) {
                    return;
                }
            }
        } else {
            for &(a, b, c) in &self.all_pairs {
                let next = mul_index(inv_index(c), rest);
                if !self.comm_sets[remaining].contains_index(next) {
                    continue;
                }
                if !try_pair(a, b, next, handles) {
                    return;
                }
            }
        }
    }
}

/// Elements of S4 whose conjugation preserves the image condition and every slot class.
fn symmetry_group(profile: &RamificationProfile, mode: SearchMode) -> PermSet {
    if mode == SearchMode::TransitiveImage {
        return PermSet::FULL;
    }
    let target = profile.group.elements();
    let classes: Vec<PermSet> = profile.group.branch_classes().into_iter().map(|c| c.members).collect();
    all_perms()
        .iter()
        .filter(|x| target.conjugate_by(x) == target && classes.iter().all(|c| c.conjugate_by(x) == *c))
        .copied()
        .collect()
}

/// Representatives of the orbits of `set` under conjugation by `sym`.
fn orbit_representatives(set: PermSet, sym: PermSet) -> Vec<usize> {
    let mut left = set;
    let mut reps = Vec::new();
    while let Some(i) = left.indices().next() {
        reps.push(i);
        let p = Perm::from_index(i);
        for x in sym.iter() {
            let q = p.conjugate_by(&x);
            left.0 &= !(1 << q.index());
        }
    }
    reps
}

/// Searches for a tuple realizing `profile`.
///
/// The first branch entry is fixed up to simultaneous conjugation; handle
/// pairs are chosen after all branch entries.
pub fn search(profile: &RamificationProfile, opts: &SearchOptions) -> SearchOutcome {
    let none = |nodes, depth| SearchOutcome { status: SearchStatus::ExhaustedNone, witness: None, nodes_explored: nodes, max_depth: depth };
    let slot_list = slots(profile, opts.mode);
    let sign: i32 = slot_list.iter().map(|(_, s)| s.iter().next().map_or(1, |p| p.sign())).product();
    if sign < 0 {
        return none(0, 0);
    }
    let s = Searcher::new(profile, opts);
    if !s.need[0].contains_index(Perm::IDENTITY.index()) {
        return none(0, 0);
    }
    let id = Perm::IDENTITY.index();
    if s.slots.is_empty() {
        let mut handles = Vec::new();
        s.handle_dfs(0, id, PermSet::EMPTY, &[], &mut handles);
    } else {
        let firsts: Vec<usize> = orbit_representatives(s.slots[0], symmetry_group(profile, opts.mode))
            .into_iter()
            .filter(|&c| s.need[1].contains_index(c))
            .collect();
        let run = |c: usize| {
            if s.stop() || !s.tick() {
                return;
            }
            let mut chosen = vec![c];
            s.branch_dfs(1, c, PermSet(1 << c), &mut chosen);
        };
        if opts.parallel && s.slots.len() > 1 {
            let tasks: Vec<(usize, usize)> = firsts
                .iter()
                .flat_map(|&c| s.slots[1].indices().map(move |d| (c, d)))
                .filter(|&(c, d)| s.need[2].contains_index(mul_index(c, d)))
                .collect();
            let mut seen_first = PermSet::EMPTY;
            for &(c, _) in &tasks {
                if !seen_first.contains_index(c) {
                    seen_first.0 |= 1 << c;
                    s.tick();
                }
            }
            tasks.par_iter().for_each(|&(c, d)| {
                if s.stop() || !s.tick() {
                    return;
                }
                let mut chosen = vec![c, d];
                s.branch_dfs(2, mul_index(c, d), PermSet(1 << c | 1 << d), &mut chosen);
            });
        } else {
            for c in firsts {
                run(c);
                if s.stop() {
                    break;
                }
            }
        }
    }
    let nodes = s.nodes.load(Ordering::Relaxed).min(opts.budget);
    let depth = s.max_depth.load(Ordering::Relaxed) as usize;
    let witness = s.witness.into_inner().expect("witness lock");
    let status = if witness.is_some() {
        SearchStatus::Witness
    } else if s.over_budget.load(Ordering::Relaxed) {
        SearchStatus::BudgetExceeded
    } else {
        SearchStatus::ExhaustedNone
    };
    SearchOutcome { status, witness, nodes_explored: nodes, max_depth: depth }
}

/// `3g - 3 + ω`, the dimension of the family of covers with this branch data.
pub fn moduli_dim(profile: &RamificationProfile) -> Result<u32, MonodromyError> {
    let points = profile.branch_count();
    let g = profile.g;
    if (g == 0 && points < 3) || (g == 1 && points == 0) {
        return Err(MonodromyError::Degenerate { g, points });
    }
    Ok(3 * g + points - 3)
}

/// One branch entry of a witness file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPerm {
    pub block: Symbol,
    pub perm: Perm,
}

/// Serialized form of a verified tuple together with the data it realizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub group: CoverGroup,
    pub g: u32,
    pub mode: SearchMode,
    pub counts: std::collections::BTreeMap<Symbol, u32>,
    pub handles: Vec<[Perm; 2]>,
    pub branch: Vec<LabeledPerm>,
}

impl WitnessFile {
    pub fn new(profile: &RamificationProfile, mode: SearchMode, t: &HurwitzTuple) -> WitnessFile {
        let blocks = profile.branch_points();
        WitnessFile {
            group: profile.group,
            g: profile.g,
            mode,
            counts: profile.symbol_counts(),
            handles: t.handles.iter().map(|&(a, b)| [a, b]).collect(),
            branch: t.branch.iter().zip(blocks).map(|(&perm, c)| LabeledPerm { block: c.symbol, perm }).collect(),
        }
    }

    pub fn profile(&self) -> Result<RamificationProfile, MonodromyError> {
        let counts: Vec<(Symbol, u32)> = self.counts.iter().map(|(&s, &n)| (s, n)).collect();
        Ok(RamificationProfile::new(self.group, self.g, &counts)?)
    }

    pub fn tuple(&self) -> HurwitzTuple {
        HurwitzTuple {
            base_genus: self.g,
            handles: self.handles.iter().map(|[a, b]| (*a, *b)).collect(),
            branch: self.branch.iter().map(|l| l.perm).collect(),
        }
    }

    /// Full check, including that block labels follow the profile's order.
    pub fn verify(&self) -> Result<TupleCheck, MonodromyError> {
        let profile = self.profile()?;
        let mut check = verify_tuple(&self.tuple(), &profile, self.mode)?;
        for (i, (l, c)) in self.branch.iter().zip(profile.branch_points()).enumerate() {
            if l.block != c.symbol {
                check.classes = false;
                check.diagnostics.push(format!("entry {} is labeled {} but position expects {}", i + 1, l.block.key(), c.symbol.key()));
            }
        }
        Ok(check)
    }
}
