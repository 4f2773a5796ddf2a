//! Filters, dense families, genericity and the Rasiowa–Sikorski construction.

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poset::Poset;
use crate::ralgebra::check_cap;
use crate::verdict::Verdict;

/// A non-empty, up-closed, downward directed subset of a poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filter {
    carrier: u64,
    members: PointSet,
}

impl Filter {
    pub fn new(poset: &Poset, members: PointSet) -> Result<Self> {
        if is_filter(poset, members)? {
            Ok(Filter {
                carrier: poset.fingerprint(),
                members,
            })
        } else {
            Err(Error::NotFilter {
                members: poset.render(members),
            })
        }
    }

    /// The principal filter `p↑`.
    pub fn principal(poset: &Poset, p: usize) -> Result<Self> {
        if p >= poset.len() {
            return Err(Error::UnknownElement(format!("#{p}")));
        }
        Ok(Filter {
            carrier: poset.fingerprint(),
            members: poset.up_of(p),
        })
    }

    pub fn members(&self) -> PointSet {
        self.members
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.contains(p)
    }

    pub fn carrier(&self) -> u64 {
        self.carrier
    }
}

/// A finite list of dense subsets of one poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseFamily {
    carrier: u64,
    sets: Vec<PointSet>,
}

impl DenseFamily {
    /// Keeps the listed order, which is the order the Rasiowa–Sikorski
    /// construction visits the sets in.
    pub fn new(poset: &Poset, sets: Vec<PointSet>) -> Result<Self> {
        for &d in &sets {
            if !poset.is_dense(d)? {
                return Err(Error::NotDense {
                    members: poset.render(d),
                });
            }
        }
        Ok(DenseFamily {
            carrier: poset.fingerprint(),
            sets,
        })
    }

    /// Deduplicated and sorted into canonical set order.
    pub fn canonical(poset: &Poset, mut sets: Vec<PointSet>) -> Result<Self> {
        sets.sort();
        sets.dedup();
        Self::new(poset, sets)
    }

    pub fn empty(poset: &Poset) -> Self {
        DenseFamily {
            carrier: poset.fingerprint(),
            sets: Vec::new(),
        }
    }

    /// Every dense subset of the poset; genericity over this family is full
    /// genericity.
    pub fn all_dense(poset: &Poset, cap: usize) -> Result<Self> {
        check_cap(poset, cap)?;
        let sets = poset
            .all()
            .subsets()
            .filter(|&d| poset.is_dense_raw(d))
            .collect();
        Self::canonical(poset, sets)
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn carrier(&self) -> u64 {
        self.carrier
    }

    pub fn contains(&self, d: PointSet) -> bool {
        self.sets.contains(&d)
    }

    /// Union of two families over the same poset, in canonical order.
    pub fn union(&self, other: &DenseFamily) -> Result<DenseFamily> {
        if self.carrier != other.carrier {
            return Err(Error::CarrierMismatch);
        }
        let mut sets: Vec<PointSet> = self.sets.iter().chain(&other.sets).copied().collect();
        sets.sort();
        sets.dedup();
        Ok(DenseFamily {
            carrier: self.carrier,
            sets,
        })
    }
}

pub fn is_filter(poset: &Poset, g: PointSet) -> Result<bool> {
    poset.check(g)?;
    Ok(is_filter_raw(poset, g))
}

fn is_filter_raw(poset: &Poset, g: PointSet) -> bool {
    if g.is_empty() || !poset.is_up_closed(g) {
        return false;
    }
    g.iter().all(|p| {
        g.iter()
            .all(|q| (poset.down_of(p) & poset.down_of(q)).intersects(g))
    })
}

pub fn is_generic(g: &Filter, family: &DenseFamily) -> Result<bool> {
    if g.carrier != family.carrier {
        return Err(Error::CarrierMismatch);
    }
    Ok(first_missed(g, family).is_none())
}

/// First dense set of the family the filter does not meet.
pub fn first_missed(g: &Filter, family: &DenseFamily) -> Option<PointSet> {
    family
        .sets
        .iter()
        .copied()
        .find(|&d| !d.intersects(g.members))
}

/// Builds a filter through `p` meeting every set of the family: starting at
/// `p`, repeatedly step down to the first element of the next dense set
/// below the current point, then take the up-closure of the chain.
pub fn rasiowa_sikorski(poset: &Poset, p: usize, family: &DenseFamily) -> Result<Filter> {
    if p >= poset.len() {
        return Err(Error::UnknownElement(format!("#{p}")));
    }
    if family.carrier != poset.fingerprint() {
        return Err(Error::CarrierMismatch);
    }
    let mut current = p;
    let mut chain = PointSet::singleton(p);
    for &d in &family.sets {
        let below = d & poset.down_of(current);
        current = below
            .first()
            .expect("a dense set meets the down-set of every point");
        chain = chain.with(current);
    }
    Filter::new(poset, poset.up_raw(chain))
}

/// Every filter of the poset, in canonical set order.
pub fn enumerate_filters(poset: &Poset, cap: usize) -> Result<Vec<Filter>> {
    check_cap(poset, cap)?;
    let mut out: Vec<Filter> = poset
        .all()
        .subsets()
        .filter(|&g| is_filter_raw(poset, g))
        .map(|members| Filter {
            carrier: poset.fingerprint(),
            members,
        })
        .collect();
    out.sort_by_key(|f| f.members);
    Ok(out)
}

pub fn enumerate_generic(poset: &Poset, family: &DenseFamily, cap: usize) -> Result<Vec<Filter>> {
    if family.carrier != poset.fingerprint() {
        return Err(Error::CarrierMismatch);
    }
    Ok(enumerate_filters(poset, cap)?
        .into_iter()
        .filter(|g| first_missed(g, family).is_none())
        .collect())
}

/// A subset `X` and a filter meeting both `X` and `X'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningFilter {
    pub set: PointSet,
    pub filter: Filter,
}

/// Checks over every down-closed `X` and every filter `G` that `G` never meets
/// both `X` and `X'`. Down-closure of `X` is needed: in `b ≤ t`, the filter
/// `{b, t}` meets both `{t}` and `{t}' = {b}`.
pub fn no_filter_spans_complements(poset: &Poset, cap: usize) -> Result<Verdict<SpanningFilter>> {
    let filters = enumerate_filters(poset, cap)?;
    let mut subsets: Vec<PointSet> = poset.all().subsets().filter(|&x| poset.is_down_closed(x)).collect();
    subsets.sort();
    for x in subsets {
        let xc = poset.pc_raw(x);
        for g in &filters {
            if g.members.intersects(x) && g.members.intersects(xc) {
                return Ok(Verdict::Fail(SpanningFilter { set: x, filter: *g }));
            }
        }
    }
    Ok(Verdict::Pass)
}
