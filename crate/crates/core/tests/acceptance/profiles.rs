//! Enumeration of formulas up to semantic profile.
//!
//! A profile records, for every assignment of names to the free variables,
//! the Boolean value, the classical truth value in the model of every
//! filter, and the set of dense sets the formula requires. Each connective
//! and quantifier acts on profiles alone.
//!
//! Deduplication uses a coarser [`Key`]: the dense sets matter to forcing
//! only through which filters meet all of them, and a composite's family
//! contains its parts' families, so classical truth outside those generic
//! filters is never consulted again.

use std::collections::{BTreeMap, HashMap, HashSet};

use forcinglab::language::{Formula, GroundAtom, Term};
use forcinglab::semantics::AtomicValuation;
use forcinglab::PointSet;

use crate::oracle::Order;

pub const POOL: [&str; 3] = ["t", "u", "w"];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    /// Bitmask over [`POOL`].
    pub vars: u8,
    /// Indexed by assignment, first variable most significant.
    pub values: Vec<PointSet>,
    /// Per assignment, bit `i` is truth in the model of filter `i`.
    pub classical: Vec<u64>,
    /// Bitmask over the space's dense sets.
    pub family: u128,
    /// Filters meeting every set of `family`.
    pub generic: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Key {
    vars: u8,
    values: Vec<PointSet>,
    generic: u64,
    classical: Vec<u64>,
}

impl Profile {
    pub fn key(&self) -> Key {
        Key {
            vars: self.vars,
            values: self.values.clone(),
            generic: self.generic,
            classical: self.classical.iter().map(|&c| c & self.generic).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub profile: Profile,
    pub formula: Formula,
}

pub struct Space<'a> {
    pub v: &'a AtomicValuation,
    pub ord: Order,
    pub names: usize,
    pub filters: Vec<PointSet>,
    pub dense: Vec<PointSet>,
    /// Per dense set, the filters meeting it.
    dense_meets: Vec<u64>,
    /// `projections[vars][sub][a]` caches [`Space::project`].
    projections: Vec<Vec<Vec<usize>>>,
    /// Brute-force pseudo-complement, tabulated by subset bits.
    pc_table: Vec<PointSet>,
    /// Dense-set bit of `X ∪ X'`, tabulated by the bits of `X`.
    own_table: Vec<u128>,
}

fn var_list(mask: u8) -> Vec<usize> {
    (0..POOL.len()).filter(|&i| mask >> i & 1 == 1).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Bin {
    And,
    Or,
    Implies,
    Iff,
}

const BINS: [Bin; 4] = [Bin::And, Bin::Or, Bin::Implies, Bin::Iff];

impl<'a> Space<'a> {
    pub fn new(v: &'a AtomicValuation) -> Self {
        let ord = Order::of(v.poset());
        let filters = ord.filters();
        assert!(filters.len() <= 64, "too many filters for the classical bitmask");
        let dense = ord.dense_sets();
        assert!(dense.len() <= 128, "too many dense sets for the family bitmask");
        let dense_ix: HashMap<PointSet, usize> = dense.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let dense_meets = dense
            .iter()
            .map(|&d| (0..filters.len()).filter(|&i| d.intersects(filters[i])).fold(0, |m, i| m | 1 << i))
            .collect();
        let pc_table: Vec<PointSet> = ord.subsets().map(|x| ord.pc(x)).collect();
        let own_table = ord
            .subsets()
            .map(|x| 1u128 << dense_ix[&(x | pc_table[x.bits() as usize])])
            .collect();
        let mut space = Space {
            pc_table,
            own_table,
            projections: Vec::new(),
            dense_meets,
            names: v.signature().names().len(),
            v,
            ord,
            filters,
            dense,
        };
        let masks = 1u8 << POOL.len();
        space.projections = (0..masks)
            .map(|vars| {
                (0..masks)
                    .map(|sub| {
                        if sub & !vars != 0 {
                            return Vec::new();
                        }
                        (0..space.assignments(vars)).map(|a| space.project(vars, a, sub)).collect()
                    })
                    .collect()
            })
            .collect();
        space
    }

    pub fn dense_sets_of(&self, family: u128) -> Vec<PointSet> {
        (0..self.dense.len())
            .filter(|&i| family >> i & 1 == 1)
            .map(|i| self.dense[i])
            .collect()
    }

    fn own(&self, x: PointSet) -> u128 {
        self.own_table[x.bits() as usize]
    }

    fn pc(&self, x: PointSet) -> PointSet {
        self.pc_table[x.bits() as usize]
    }

    fn reg(&self, x: PointSet) -> PointSet {
        self.pc(self.pc(x))
    }

    fn join(&self, x: PointSet, y: PointSet) -> PointSet {
        self.reg(x | y)
    }

    fn implies(&self, x: PointSet, y: PointSet) -> PointSet {
        self.join(self.pc(x), y)
    }

    /// Filters meeting every set in `sets`.
    pub fn generic_of_sets(&self, sets: &[PointSet]) -> u64 {
        self.filters
            .iter()
            .enumerate()
            .filter(|(_, g)| sets.iter().all(|d| d.intersects(**g)))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    fn generic_of(&self, family: u128) -> u64 {
        let full = (1u64 << self.filters.len()) - 1;
        (0..self.dense.len())
            .filter(|&i| family >> i & 1 == 1)
            .fold(full, |m, i| m & self.dense_meets[i])
    }

    fn meets(&self, x: PointSet) -> u64 {
        (0..self.filters.len())
            .filter(|&i| x.intersects(self.filters[i]))
            .fold(0, |m, i| m | 1 << i)
    }

    fn assignments(&self, vars: u8) -> usize {
        self.names.pow(vars.count_ones())
    }

    /// Name of variable `var` (pool index) in assignment `a` over `vars`.
    fn lookup(&self, vars: u8, a: usize, var: usize) -> usize {
        let list = var_list(vars);
        let k = list.len();
        let pos = list.iter().position(|&x| x == var).expect("bound variable");
        a / self.names.pow((k - 1 - pos) as u32) % self.names
    }

    /// Index into `sub`'s assignments of the restriction of `a` over `vars`.
    fn project(&self, vars: u8, a: usize, sub: u8) -> usize {
        var_list(sub)
            .into_iter()
            .fold(0, |acc, x| acc * self.names + self.lookup(vars, a, x))
    }

    /// Every atom with arguments drawn from names and pool variables.
    pub fn atoms(&self) -> Vec<Entry> {
        let sig = self.v.signature();
        let mut out = Vec::new();
        let choices = self.names + POOL.len();
        for (rel, arity) in sig.relations() {
            let total = choices.pow(arity as u32);
            for code in 0..total {
                let picks: Vec<usize> = (0..arity)
                    .map(|i| code / choices.pow((arity - 1 - i) as u32) % choices)
                    .collect();
                let vars = picks
                    .iter()
                    .filter(|&&c| c >= self.names)
                    .fold(0u8, |m, &c| m | 1 << (c - self.names));
                let n = self.assignments(vars);
                let mut values = Vec::with_capacity(n);
                let mut family = 0;
                for a in 0..n {
                    let args = picks
                        .iter()
                        .map(|&c| if c < self.names { c } else { self.lookup(vars, a, c - self.names) })
                        .collect();
                    let x = self
                        .v
                        .value(&GroundAtom {
                            rel: rel.to_string(),
                            args,
                        })
                        .expect("own atom")
                        .members();
                    family |= self.own(x);
                    values.push(x);
                }
                let classical = values.iter().map(|&x| self.meets(x)).collect();
                let terms = picks
                    .iter()
                    .map(|&c| {
                        if c < self.names {
                            Term::Name(sig.names()[c].clone())
                        } else {
                            Term::Var(POOL[c - self.names].to_string())
                        }
                    })
                    .collect();
                out.push(Entry {
                    profile: Profile {
                        vars,
                        values,
                        classical,
                        generic: self.generic_of(family),
                        family,
                    },
                    formula: Formula::atom(rel, terms),
                });
            }
        }
        out
    }

    pub fn negate(&self, e: &Entry) -> Entry {
        let p = &e.profile;
        let full = (1u64 << self.filters.len()) - 1;
        let values: Vec<PointSet> = p.values.iter().map(|&x| self.pc(x)).collect();
        let family = values.iter().fold(p.family, |f, &x| f | self.own(x));
        Entry {
            profile: Profile {
                vars: p.vars,
                classical: p.classical.iter().map(|&c| !c & full).collect(),
                values,
                generic: self.generic_of(family),
                family,
            },
            formula: Formula::not(e.formula.clone()),
        }
    }

    fn binary_profile(&self, op: Bin, pa: &Profile, pb: &Profile) -> Profile {
        let vars = pa.vars | pb.vars;
        let full = (1u64 << self.filters.len()) - 1;
        let n = self.assignments(vars);
        let mut values = Vec::with_capacity(n);
        let mut classical = Vec::with_capacity(n);
        let mut family = pa.family | pb.family;
        let (proj_a, proj_b) = (
            &self.projections[vars as usize][pa.vars as usize],
            &self.projections[vars as usize][pb.vars as usize],
        );
        for asg in 0..n {
            let (ia, ib) = (proj_a[asg], proj_b[asg]);
            let (x, y) = (pa.values[ia], pb.values[ib]);
            let (cx, cy) = (pa.classical[ia], pb.classical[ib]);
            let (value, truth) = match op {
                Bin::And => (x & y, cx & cy),
                Bin::Or => (self.join(x, y), cx | cy),
                Bin::Implies => (self.implies(x, y), (!cx | cy) & full),
                Bin::Iff => (
                    self.implies(x, y) & self.implies(y, x),
                    !(cx ^ cy) & full,
                ),
            };
            family |= self.own(value);
            values.push(value);
            classical.push(truth);
        }
        Profile {
            vars,
            values,
            classical,
            generic: self.generic_of(family),
            family,
        }
    }

    fn binary_formula(op: Bin, a: &Formula, b: &Formula) -> Formula {
        let (fa, fb) = (a.clone(), b.clone());
        match op {
            Bin::And => Formula::and(fa, fb),
            Bin::Or => Formula::or(fa, fb),
            Bin::Implies => Formula::implies(fa, fb),
            Bin::Iff => Formula::iff(fa, fb),
        }
    }

    /// `var` must be free in `e`.
    pub fn quantify(&self, exists: bool, var: usize, e: &Entry) -> Entry {
        let p = &e.profile;
        let vars = p.vars & !(1 << var);
        let n = self.assignments(vars);
        let mut values = Vec::with_capacity(n);
        let mut classical = Vec::with_capacity(n);
        let mut family = p.family;
        for asg in 0..n {
            let mut union = PointSet::EMPTY;
            let mut meet = self.ord.all();
            let mut any = 0u64;
            let mut all = (1u64 << self.filters.len()) - 1;
            for name in 0..self.names {
                // index of the child assignment extending `asg` by var = name
                let child = var_list(p.vars).into_iter().fold(0, |acc, x| {
                    let v = if x == var { name } else { self.lookup(vars, asg, x) };
                    acc * self.names + v
                });
                union = union | p.values[child];
                meet = meet & p.values[child];
                any |= p.classical[child];
                all &= p.classical[child];
            }
            family |= self.own(union);
            let value = if exists { self.reg(union) } else { meet };
            family |= self.own(value);
            values.push(value);
            classical.push(if exists { any } else { all });
        }
        let formula = if exists {
            Formula::exists(POOL[var], e.formula.clone())
        } else {
            Formula::forall(POOL[var], e.formula.clone())
        };
        Entry {
            profile: Profile {
                vars,
                values,
                classical,
                generic: self.generic_of(family),
                family,
            },
            formula,
        }
    }
}

/// Layers of representatives: layer `d` holds formulas of depth `d` whose
/// profile did not occur at a lower depth. A formula of depth `d` keeps at
/// most `var_budget(d)` free variables.
pub struct Layers {
    pub layers: Vec<Vec<Entry>>,
}

impl Layers {
    /// `on_quantified(child, result)` sees every non-vacuous quantification
    /// before deduplication.
    pub fn build(
        space: &Space<'_>,
        max_depth: usize,
        var_budget: impl Fn(usize) -> usize,
        mut on_quantified: impl FnMut(&Entry, &Entry),
    ) -> Self {
        let mut seen: HashSet<Key> = HashSet::new();
        let mut layers: Vec<Vec<Entry>> = Vec::new();
        let push = |layer: &mut Vec<Entry>, seen: &mut HashSet<Key>, e: Entry| {
            if seen.insert(e.profile.key()) {
                layer.push(e);
            }
        };
        let mut l0 = Vec::new();
        for e in space.atoms() {
            if e.profile.vars.count_ones() as usize <= var_budget(0) {
                push(&mut l0, &mut seen, e);
            }
        }
        layers.push(l0);
        for d in 1..=max_depth {
            let budget = var_budget(d);
            // When every later layer is closed, a one-variable formula here
            // can only be quantified into a sentence, and renaming its
            // variable does not change that sentence's profile.
            let only_first_var = budget == 1 && d < max_depth && (d + 1..=max_depth).all(|k| var_budget(k) == 0);
            let admit = |vars: u8| !only_first_var || vars <= 1;
            let mut next = Vec::new();
            let prev = &layers[d - 1];
            for e in prev {
                if e.profile.vars.count_ones() as usize <= budget && admit(e.profile.vars) {
                    push(&mut next, &mut seen, space.negate(e));
                }
                for var in 0..POOL.len() {
                    if e.profile.vars >> var & 1 == 0 {
                        continue;
                    }
                    if e.profile.vars.count_ones() as usize - 1 > budget {
                        continue;
                    }
                    for exists in [true, false] {
                        let q = space.quantify(exists, var, e);
                        on_quantified(e, &q);
                        if admit(q.profile.vars) {
                            push(&mut next, &mut seen, q);
                        }
                    }
                }
            }
            // group earlier entries by free-variable set
            type Group<'e> = Vec<((usize, usize), &'e Entry)>;
            let mut groups: BTreeMap<u8, (Group, Group)> = BTreeMap::new();
            for (k, layer) in layers.iter().enumerate() {
                for (i, e) in layer.iter().enumerate() {
                    let g = groups.entry(e.profile.vars).or_default();
                    if k == d - 1 {
                        g.0.push(((k, i), e));
                    } else {
                        g.1.push(((k, i), e));
                    }
                }
            }
            let keys: Vec<u8> = groups.keys().copied().collect();
            for &ka in &keys {
                for &kb in &keys {
                    if (ka | kb).count_ones() as usize > budget || !admit(ka | kb) {
                        continue;
                    }
                    let (newest_a, older_a) = &groups[&ka];
                    let (newest_b, older_b) = &groups[&kb];
                    let pairs = newest_a
                        .iter()
                        .flat_map(|a| newest_b.iter().chain(older_b.iter()).map(move |b| (*a, *b)))
                        .chain(older_a.iter().flat_map(|a| newest_b.iter().map(move |b| (*a, *b))));
                    for ((ia, a), (ib, b)) in pairs {
                        for op in BINS {
                            // the pair list is symmetric, so commutative
                            // connectives need only one order
                            if op != Bin::Implies && ia > ib {
                                continue;
                            }
                            let profile = space.binary_profile(op, &a.profile, &b.profile);
                            if seen.insert(profile.key()) {
                                next.push(Entry {
                                    profile,
                                    formula: Space::binary_formula(op, &a.formula, &b.formula),
                                });
                            }
                        }
                    }
                }
            }
            layers.push(next);
        }
        Layers { layers }
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.layers.iter().flatten()
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Entry> {
        self.entries().filter(|e| e.profile.vars == 0)
    }
}
