//! Least quasi-extensional collapse of an arbitrary binary relation `ε`.
//!
//! Starting from equality, `y1 ~(k+1) y2` holds when every `ε`-member of
//! each side is `~k`-matched by an `ε`-member of the other. The stages
//! increase until they stabilize; the limit `~` then defines
//! `x ∈ y :⇔ ∃x' ~ x. x' ε y`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::pointset::{PointSet, MAX_POINTS};
use crate::verdict::Verdict;

/// Nodes with a membership-like relation; `members[y] = { x : x ε y }`.
#[derive(Clone, PartialEq, Eq)]
pub struct EpsStructure {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    members: Vec<PointSet>,
}

impl EpsStructure {
    pub fn new<S: AsRef<str>, T: AsRef<str>>(nodes: &[S], eps: &[(T, T)]) -> Result<Self> {
        let names: Vec<String> = nodes.iter().map(|s| s.as_ref().to_string()).collect();
        let mut s = Self::empty(names)?;
        for (x, y) in eps {
            let xi = s.index_of(x.as_ref())?;
            let yi = s.index_of(y.as_ref())?;
            s.members[yi] = s.members[yi].with(xi);
        }
        Ok(s)
    }

    /// Nodes with no `ε` pairs at all.
    pub fn empty(nodes: Vec<String>) -> Result<Self> {
        if nodes.len() > MAX_POINTS {
            return Err(Error::TooManyElements {
                count: nodes.len(),
                max: MAX_POINTS,
            });
        }
        let mut index = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateNode(n.clone()));
            }
        }
        let n = nodes.len();
        Ok(EpsStructure {
            nodes,
            index,
            members: vec![PointSet::EMPTY; n],
        })
    }

    /// Builds a structure on `n` nodes named `0..n` from member sets.
    pub fn from_members(nodes: Vec<String>, members: Vec<PointSet>) -> Result<Self> {
        let mut s = Self::empty(nodes)?;
        if members.len() != s.len() {
            return Err(Error::Document(format!(
                "{} member sets for {} nodes",
                members.len(),
                s.len()
            )));
        }
        let all = PointSet::full(s.len());
        for (y, m) in members.iter().enumerate() {
            if !m.is_subset(all) {
                return Err(Error::UnknownNode(format!("member of #{y}")));
            }
        }
        s.members = members;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn members_of(&self, y: usize) -> PointSet {
        self.members[y]
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.members[y].contains(x)
    }

    /// `(x, y)` pairs with `x ε y`, ordered by `x` then `y`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                if self.contains(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// `{ y : x ε y }`.
    pub fn containers_of(&self, x: usize) -> PointSet {
        (0..self.len()).filter(|&y| self.contains(x, y)).collect()
    }

    fn with_members(&self, members: Vec<PointSet>) -> EpsStructure {
        EpsStructure {
            nodes: self.nodes.clone(),
            index: self.index.clone(),
            members,
        }
    }

    pub fn render_pairs(&self) -> String {
        let parts: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(x, y)| format!("({}, {})", self.nodes[x], self.nodes[y]))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn render_partition(&self, p: &Partition) -> String {
        p.blocks
            .iter()
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|i| self.nodes[i].as_str()).collect();
                format!("{{{}}}", names.join(", "))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for EpsStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsStructure{:?} ε {}", self.nodes, self.render_pairs())
    }
}

/// An equivalence relation on `0..n`, stored as blocks ordered by their least
/// member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<PointSet>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Self::from_classes(&(0..n).map(PointSet::singleton).collect::<Vec<_>>())
    }

    pub fn single_block(n: usize) -> Self {
        Self::from_classes(&vec![PointSet::full(n); n])
    }

    /// Validates a list of blocks covering `0..n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[PointSet]) -> Result<Self> {
        let mut seen = PointSet::EMPTY;
        for &b in blocks {
            if b.is_empty() || seen.intersects(b) || !b.is_subset(PointSet::full(n)) {
                return Err(Error::IncompatiblePartition(
                    "blocks must be non-empty, disjoint and within the node set".into(),
                ));
            }
            seen = seen | b;
        }
        if seen != PointSet::full(n) {
            return Err(Error::IncompatiblePartition("blocks do not cover every node".into()));
        }
        let mut classes = vec![PointSet::EMPTY; n];
        for &b in blocks {
            for x in b {
                classes[x] = b;
            }
        }
        Ok(Self::from_classes(&classes))
    }

    /// From `classes[x]` = class of `x`; assumes an equivalence relation.
    fn from_classes(classes: &[PointSet]) -> Self {
        let mut blocks = Vec::new();
        let mut block_of = vec![usize::MAX; classes.len()];
        for x in 0..classes.len() {
            if block_of[x] == usize::MAX {
                let id = blocks.len();
                blocks.push(classes[x]);
                for y in classes[x] {
                    block_of[y] = id;
                }
            }
        }
        Partition { blocks, block_of }
    }

    /// Nodes covered, not classes; see [`Partition::blocks`].
    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn blocks(&self) -> &[PointSet] {
        &self.blocks
    }

    pub fn class_of(&self, x: usize) -> PointSet {
        self.blocks[self.block_of[x]]
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// `self ⊆ other` as relations.
    pub fn finer_than(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|b| {
            let x = b.first().expect("blocks are non-empty");
            b.is_subset(other.class_of(x))
        })
    }

    /// Every partition of `0..n` (restricted growth strings).
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut rgs = vec![0usize; n];
        fn go(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if i == rgs.len() {
                let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
                let mut blocks = vec![PointSet::EMPTY; k];
                for (x, &b) in rgs.iter().enumerate() {
                    blocks[b] = blocks[b].with(x);
                }
                out.push(Partition::from_blocks(rgs.len(), &blocks).expect("valid growth string"));
                return;
            }
            for b in 0..=max {
                rgs[i] = b;
                go(i + 1, max.max(b + 1), rgs, out);
            }
        }
        if n == 0 {
            return vec![Partition::discrete(0)];
        }
        go(1, 1, &mut rgs, &mut out);
        out
    }
}

/// The increasing stages `~0, ~1, ...` up to the first fixpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagedEquivalence {
    stages: Vec<Partition>,
}

impl StagedEquivalence {
    pub fn stages(&self) -> &[Partition] {
        &self.stages
    }

    /// The limit `~`.
    pub fn limit(&self) -> &Partition {
        self.stages.last().expect("stage 0 always exists")
    }

    /// `~k`, clamped to the limit.
    pub fn stage(&self, k: usize) -> &Partition {
        &self.stages[k.min(self.stages.len() - 1)]
    }
}

/// The successor-stage operator: `y1 F(R) y2` iff the `ε`-members of each
/// are `R`-matched by `ε`-members of the other.
pub fn successor(e: &EpsStructure, r: &Partition) -> Partition {
    let n = e.len();
    let matched = |a: usize, b: usize| {
        e.members[a]
            .iter()
            .all(|x| r.class_of(x).intersects(e.members[b]))
    };
    let classes: Vec<PointSet> = (0..n)
        .map(|y1| {
            (0..n)
                .filter(|&y2| matched(y1, y2) && matched(y2, y1))
                .collect()
        })
        .collect();
    Partition::from_classes(&classes)
}

pub fn sim_stages(e: &EpsStructure) -> StagedEquivalence {
    let mut stages = vec![Partition::discrete(e.len())];
    loop {
        let next = successor(e, stages.last().expect("non-empty"));
        if &next == stages.last().expect("non-empty") {
            break;
        }
        stages.push(next);
    }
    StagedEquivalence { stages }
}

/// `x ∈ y` iff some `x' ~ x` has `x' ε y`, for the limit `~`.
pub fn membership_from(e: &EpsStructure) -> EpsStructure {
    let stages = sim_stages(e);
    lift(e, stages.limit())
}

fn lift(e: &EpsStructure, r: &Partition) -> EpsStructure {
    let members = e
        .members
        .iter()
        .map(|m| m.iter().fold(PointSet::EMPTY, |acc, x| acc | r.class_of(x)))
        .collect();
    e.with_members(members)
}

/// `x ε_k y` iff `x' ε y'` for some `x' ~k x`, `y' ~k y`.
pub fn eps_alpha(e: &EpsStructure, k: usize) -> EpsStructure {
    let stages = sim_stages(e);
    let r = stages.stage(k);
    let members = (0..e.len())
        .map(|y| {
            r.class_of(y)
                .iter()
                .fold(PointSet::EMPTY, |acc, y2| acc | e.members[y2])
                .iter()
                .fold(PointSet::EMPTY, |acc, x| acc | r.class_of(x))
        })
        .collect();
    e.with_members(members)
}

/// Counterexample to quasi-extensionality of the derived `(∈, ~)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionalityViolation {
    /// Same `∈`-members, different `∈`-containers.
    Containers(usize, usize),
    /// Same `∈`-members but not `~`-equivalent.
    NotEquivalent(usize, usize),
}

/// Condition (E) for the derived membership.
pub fn check_e(e: &EpsStructure) -> Verdict<ExtensionalityViolation> {
    let stages = sim_stages(e);
    let sim = stages.limit();
    let mem = lift(e, sim);
    let containers: Vec<PointSet> = (0..e.len()).map(|x| mem.containers_of(x)).collect();
    for s1 in 0..e.len() {
        for s2 in s1 + 1..e.len() {
            if mem.members[s1] != mem.members[s2] {
                continue;
            }
            if containers[s1] != containers[s2] {
                return Verdict::Fail(ExtensionalityViolation::Containers(s1, s2));
            }
            if !sim.related(s1, s2) {
                return Verdict::Fail(ExtensionalityViolation::NotEquivalent(s1, s2));
            }
        }
    }
    Verdict::Pass
}

/// No infinite descending chain; on a finite carrier, no cycle.
pub fn is_well_founded(e: &EpsStructure) -> bool {
    let mut remaining = PointSet::full(e.len());
    loop {
        let removable: PointSet = remaining
            .iter()
            .filter(|&y| (e.members[y] & remaining).is_empty())
            .collect();
        if removable.is_empty() {
            return remaining.is_empty();
        }
        remaining = remaining - removable;
    }
}

/// `x ε y`, `y' ~ y` with no `x' ~ x` such that `x' ε y'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationViolation {
    pub x: usize,
    pub y: usize,
    pub y_prime: usize,
}

/// Checks that `ε` is a simulation for the limit `~`.
pub fn check_simulation(e: &EpsStructure) -> Verdict<SimulationViolation> {
    let stages = sim_stages(e);
    simulation_violation(e, stages.limit()).into()
}

fn simulation_violation(e: &EpsStructure, r: &Partition) -> Option<SimulationViolation> {
    for (x, y) in e.pairs() {
        for y_prime in r.class_of(y) {
            if !r.class_of(x).intersects(e.members[y_prime]) {
                return Some(SimulationViolation { x, y, y_prime });
            }
        }
    }
    None
}

/// The coarsest relation whose related nodes have mutually matched members:
/// refinement from the one-block partition to a fixpoint.
pub fn greatest_bisimulation(e: &EpsStructure) -> Partition {
    let mut r = Partition::single_block(e.len());
    loop {
        let next = successor(e, &r);
        if next == r {
            return r;
        }
        r = next;
    }
}

/// Factors the structure by a partition for which `ε` is a simulation.
/// Blocks are named by their least member and related by the induced `∈`.
pub fn quotient(e: &EpsStructure, partition: &Partition) -> Result<EpsStructure> {
    if partition.len() != e.len() {
        return Err(Error::IncompatiblePartition(format!(
            "partition covers {} nodes, structure has {}",
            partition.len(),
            e.len()
        )));
    }
    if let Some(v) = simulation_violation(e, partition) {
        return Err(Error::IncompatiblePartition(format!(
            "{} ε {} and {} is related to {}, but nothing related to {} is in {}",
            e.nodes[v.x], e.nodes[v.y], e.nodes[v.y_prime], e.nodes[v.y], e.nodes[v.x], e.nodes[v.y_prime]
        )));
    }
    let blocks = partition.blocks();
    let names: Vec<String> = blocks
        .iter()
        .map(|b| e.nodes[b.first().expect("non-empty")].clone())
        .collect();
    let members = blocks
        .iter()
        .map(|b| {
            let y = b.first().expect("non-empty");
            e.members[y]
                .iter()
                .map(|x| partition.block_of[x])
                .collect::<PointSet>()
        })
        .collect();
    EpsStructure::from_members(names, members)
}
