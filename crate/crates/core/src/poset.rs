//! Finite posets and the order-theoretic toolkit: closures, density,
//! pseudo-complements, regularization and separativity.
//!
//! Points are addressed by their index in the poset's element list. That list
//! order is fixed at construction and is the tie-break for every "choose a
//! point" step elsewhere in the crate.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::pointset::{PointSet, MAX_POINTS};

/// A finite partially ordered set.
#[derive(Clone)]
pub struct Poset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    /// `up[i] = { j : i <= j }`
    up: Vec<PointSet>,
    /// `down[i] = { j : j <= i }`
    down: Vec<PointSet>,
    full: PointSet,
    fingerprint: u64,
}

impl Poset {
    /// Builds a poset from its element list and a generator relation; the
    /// reflexive-transitive closure of the generators is the order.
    pub fn new<S, T>(elements: &[S], generators: &[(T, T)]) -> Result<Self>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        if elements.is_empty() {
            return Err(Error::EmptyPoset);
        }
        if elements.len() > MAX_POINTS {
            return Err(Error::TooManyElements {
                count: elements.len(),
                max: MAX_POINTS,
            });
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.as_ref().to_string(), i).is_some() {
                return Err(Error::DuplicateElement(e.as_ref().to_string()));
            }
        }
        let mut edges = Vec::with_capacity(generators.len());
        for (a, b) in generators {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            edges.push((ia, ib));
        }
        let elements: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        Self::from_index_pairs(elements, &edges)
    }

    /// Same as [`Poset::new`] with generators given as index pairs `(a, b)`
    /// meaning `a <= b`.
    pub fn from_index_pairs(elements: Vec<String>, generators: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::EmptyPoset);
        }
        if n > MAX_POINTS {
            return Err(Error::TooManyElements {
                count: n,
                max: MAX_POINTS,
            });
        }
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement(e.clone()));
            }
        }
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for &(a, b) in generators {
            if a >= n {
                return Err(Error::UnknownElement(format!("#{a}")));
            }
            if b >= n {
                return Err(Error::UnknownElement(format!("#{b}")));
            }
            up[a] = up[a].with(b);
        }
        // Warshall on bit rows
        for k in 0..n {
            let row_k = up[k];
            for row in up.iter_mut() {
                if row.contains(k) {
                    *row = *row | row_k;
                }
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(Error::OrderCycle(elements[i].clone(), elements[j].clone()));
                }
            }
        }
        let mut down = vec![PointSet::EMPTY; n];
        for (i, row) in up.iter().enumerate() {
            for j in row.iter() {
                down[j] = down[j].with(i);
            }
        }
        let mut h = DefaultHasher::new();
        elements.hash(&mut h);
        for row in &up {
            row.bits().hash(&mut h);
        }
        Ok(Poset {
            elements,
            index,
            up,
            down,
            full: PointSet::full(n),
            fingerprint: h.finish(),
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    /// Hash of the element list and the order; used to detect values that
    /// belong to different carriers.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// The set of the named elements.
    pub fn set<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet> {
        names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Result<PointSet>>()
    }

    pub fn all(&self) -> PointSet {
        self.full
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.up[p].contains(q)
    }

    /// Generator pairs of the order: the covering relation, in element order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.len() {
            let strictly_above = self.up[p] - PointSet::singleton(p);
            for q in strictly_above.iter() {
                let between = strictly_above & self.down[q] - PointSet::singleton(q);
                if between.is_empty() {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// `p↑` as a set.
    pub fn up_of(&self, p: usize) -> PointSet {
        self.up[p]
    }

    /// `p↓` as a set.
    pub fn down_of(&self, p: usize) -> PointSet {
        self.down[p]
    }

    /// Minimal elements.
    pub fn minimal(&self) -> PointSet {
        (0..self.len()).filter(|&p| self.down[p].len() == 1).collect()
    }

    pub fn check(&self, x: PointSet) -> Result<()> {
        if x.is_subset(self.full) {
            Ok(())
        } else {
            let bad = (x - self.full).first().unwrap_or_default();
            Err(Error::UnknownElement(format!("#{bad}")))
        }
    }

    pub fn up_closure(&self, x: PointSet) -> Result<PointSet> {
        self.check(x)?;
        Ok(self.up_raw(x))
    }

    pub fn down_closure(&self, x: PointSet) -> Result<PointSet> {
        self.check(x)?;
        Ok(self.down_raw(x))
    }

    pub fn is_dense(&self, d: PointSet) -> Result<bool> {
        self.check(d)?;
        Ok(self.is_dense_raw(d))
    }

    /// `X' = P \ X↑`, always down-closed.
    pub fn pseudo_complement(&self, x: PointSet) -> Result<PointSet> {
        self.check(x)?;
        Ok(self.pc_raw(x))
    }

    /// `X''`.
    pub fn regularize(&self, x: PointSet) -> Result<PointSet> {
        self.check(x)?;
        Ok(self.reg_raw(x))
    }

    pub fn is_down_closed(&self, x: PointSet) -> bool {
        self.down_raw(x) == x
    }

    pub fn is_up_closed(&self, x: PointSet) -> bool {
        self.up_raw(x) == x
    }

    /// Down-closed and equal to its own regularization.
    pub fn is_regular(&self, x: PointSet) -> bool {
        x.is_subset(self.full) && self.is_down_closed(x) && self.reg_raw(x) == x
    }

    /// `Ok(())` when every `p↓` is regular, otherwise the first point (in
    /// element order) whose down-set is not.
    pub fn separativity(&self) -> std::result::Result<(), usize> {
        match (0..self.len()).find(|&p| self.reg_raw(self.down[p]) != self.down[p]) {
            None => Ok(()),
            Some(p) => Err(p),
        }
    }

    pub fn is_separative(&self) -> bool {
        self.separativity().is_ok()
    }

    pub fn compatible(&self, p: usize, q: usize) -> Result<bool> {
        for i in [p, q] {
            if i >= self.len() {
                return Err(Error::UnknownElement(format!("#{i}")));
            }
        }
        Ok(self.down[p].intersects(self.down[q]))
    }

    /// Renders a set as `{a, b, ...}` in element order.
    pub fn render(&self, x: PointSet) -> String {
        let names: Vec<&str> = self.names_of(x);
        format!("{{{}}}", names.join(", "))
    }

    pub fn names_of(&self, x: PointSet) -> Vec<&str> {
        x.iter()
            .filter(|&i| i < self.len())
            .map(|i| self.elements[i].as_str())
            .collect()
    }

    pub(crate) fn up_raw(&self, x: PointSet) -> PointSet {
        x.iter().fold(PointSet::EMPTY, |acc, i| acc | self.up[i])
    }

    pub(crate) fn down_raw(&self, x: PointSet) -> PointSet {
        x.iter().fold(PointSet::EMPTY, |acc, i| acc | self.down[i])
    }

    pub(crate) fn is_dense_raw(&self, d: PointSet) -> bool {
        self.up_raw(d) == self.full
    }

    pub(crate) fn pc_raw(&self, x: PointSet) -> PointSet {
        self.full - self.up_raw(x)
    }

    pub(crate) fn reg_raw(&self, x: PointSet) -> PointSet {
        self.pc_raw(self.pc_raw(x))
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.up == other.up
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<(&str, &str)> = self
            .covers()
            .into_iter()
            .map(|(a, b)| (self.name(a), self.name(b)))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.elements)
            .field("covers", &pairs)
            .finish()
    }
}
