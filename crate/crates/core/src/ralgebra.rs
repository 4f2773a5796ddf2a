//! The complete Boolean algebra of regular down-closed subsets of a finite
//! poset.
//!
//! Joins are not unions: the union of two regular sets has to be regularized
//! again, and in general grows. Meets and infima are plain intersections.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poset::Poset;
use crate::verdict::Verdict;

/// Largest poset for which subset-scanning operations run by default.
pub const DEFAULT_EXHAUSTION_CAP: usize = 12;

/// A regular down-closed set, tagged with the fingerprint of its carrier.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegularElement {
    carrier: u64,
    members: PointSet,
}

impl RegularElement {
    pub fn members(self) -> PointSet {
        self.members
    }

    pub fn carrier(self) -> u64 {
        self.carrier
    }
}

impl fmt::Debug for RegularElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Reg{:?}", self.members)
    }
}

/// `B(P)` for a finite poset `P`.
#[derive(Clone, Debug)]
pub struct RegularAlgebra {
    poset: Poset,
    universe: Vec<PointSet>,
    position: HashMap<PointSet, usize>,
    cap: usize,
}

/// First failure found by [`RegularAlgebra::byrne_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ByrneViolation {
    NotAssociative(RegularElement, RegularElement, RegularElement),
    NotCommutative(RegularElement, RegularElement),
    NotIdempotent(RegularElement),
    ZeroEqualsOne,
    /// `X ∧ Y' = 0` and `X ∧ Y = X` disagree for this pair.
    Axiom(RegularElement, RegularElement),
}

/// First failure found by [`RegularAlgebra::embedding_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingViolation {
    /// `p <= q` and `p↓ ⊆ q↓` disagree.
    Order(usize, usize),
    /// A nonzero element containing no `p↓`.
    NotDense(RegularElement),
}

impl RegularAlgebra {
    pub fn build(poset: Poset) -> Result<Self> {
        Self::build_with_cap(poset, DEFAULT_EXHAUSTION_CAP)
    }

    /// Scans every subset of the carrier and keeps the regular down-closed
    /// ones. Fails when the carrier is larger than `cap`.
    pub fn build_with_cap(poset: Poset, cap: usize) -> Result<Self> {
        check_cap(&poset, cap)?;
        let mut universe: Vec<PointSet> = poset
            .all()
            .subsets()
            .filter(|&x| poset.is_regular(x))
            .collect();
        universe.sort();
        let position = universe.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        Ok(RegularAlgebra {
            poset,
            universe,
            position,
            cap,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Exhaustion cap this algebra was built under; reused by the
    /// filter-enumerating operations that work over it.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn universe(&self) -> impl ExactSizeIterator<Item = RegularElement> + '_ {
        self.universe.iter().map(|&m| self.wrap(m))
    }

    pub fn zero(&self) -> RegularElement {
        self.wrap(PointSet::EMPTY)
    }

    pub fn one(&self) -> RegularElement {
        self.wrap(self.poset.all())
    }

    /// Position of `a` in the canonical universe listing.
    pub fn position(&self, a: RegularElement) -> Result<usize> {
        self.own(a)?;
        Ok(self.position[&a.members])
    }

    pub fn nth(&self, i: usize) -> Option<RegularElement> {
        self.universe.get(i).map(|&m| self.wrap(m))
    }

    /// Wraps a set that must already be regular.
    pub fn element(&self, members: PointSet) -> Result<RegularElement> {
        self.poset.check(members)?;
        if self.position.contains_key(&members) {
            Ok(self.wrap(members))
        } else {
            Err(Error::NotRegular {
                members: self.poset.render(members),
            })
        }
    }

    /// The regularization `X''` of an arbitrary subset, as an element.
    pub fn regularized(&self, members: PointSet) -> Result<RegularElement> {
        Ok(self.wrap(self.poset.regularize(members)?))
    }

    pub fn element_named<S: AsRef<str>>(&self, names: &[S]) -> Result<RegularElement> {
        self.element(self.poset.set(names)?)
    }

    pub fn meet(&self, a: RegularElement, b: RegularElement) -> Result<RegularElement> {
        self.own(a)?;
        self.own(b)?;
        Ok(self.wrap(a.members & b.members))
    }

    pub fn join(&self, a: RegularElement, b: RegularElement) -> Result<RegularElement> {
        self.own(a)?;
        self.own(b)?;
        Ok(self.wrap(self.join_raw(a.members, b.members)))
    }

    pub fn complement(&self, a: RegularElement) -> Result<RegularElement> {
        self.own(a)?;
        Ok(self.wrap(self.poset.pc_raw(a.members)))
    }

    /// `a ⇒ b`, i.e. `a' ∨ b`.
    pub fn implies(&self, a: RegularElement, b: RegularElement) -> Result<RegularElement> {
        self.own(a)?;
        self.own(b)?;
        Ok(self.wrap(self.implies_raw(a.members, b.members)))
    }

    /// Least upper bound; the empty family gives zero.
    pub fn sup<I: IntoIterator<Item = RegularElement>>(&self, family: I) -> Result<RegularElement> {
        let mut union = PointSet::EMPTY;
        for a in family {
            self.own(a)?;
            union = union | a.members;
        }
        Ok(self.wrap(self.poset.reg_raw(union)))
    }

    /// Greatest lower bound; the empty family gives one.
    pub fn inf<I: IntoIterator<Item = RegularElement>>(&self, family: I) -> Result<RegularElement> {
        let mut acc = self.poset.all();
        for a in family {
            self.own(a)?;
            acc = acc & a.members;
        }
        Ok(self.wrap(acc))
    }

    pub fn leq(&self, a: RegularElement, b: RegularElement) -> Result<bool> {
        self.own(a)?;
        self.own(b)?;
        Ok(a.members.is_subset(b.members))
    }

    /// Exhaustively verifies Byrne's axioms for Boolean algebras over the
    /// whole universe: `∧` is a semilattice operation, `0 ≠ 0'`, and
    /// `X ∧ Y' = 0` iff `X ∧ Y = X`.
    pub fn byrne_check(&self) -> Verdict<ByrneViolation> {
        let u = &self.universe;
        for &x in u {
            if x & x != x {
                return Verdict::Fail(ByrneViolation::NotIdempotent(self.wrap(x)));
            }
        }
        for &x in u {
            for &y in u {
                if x & y != y & x {
                    return Verdict::Fail(ByrneViolation::NotCommutative(self.wrap(x), self.wrap(y)));
                }
            }
        }
        for &x in u {
            for &y in u {
                let xy = x & y;
                for &z in u {
                    if xy & z != x & (y & z) {
                        return Verdict::Fail(ByrneViolation::NotAssociative(
                            self.wrap(x),
                            self.wrap(y),
                            self.wrap(z),
                        ));
                    }
                }
            }
        }
        let zero = PointSet::EMPTY;
        if self.poset.pc_raw(zero) == zero {
            return Verdict::Fail(ByrneViolation::ZeroEqualsOne);
        }
        for &x in u {
            for &y in u {
                let lhs = (x & self.poset.pc_raw(y)) == zero;
                let rhs = (x & y) == x;
                if lhs != rhs {
                    return Verdict::Fail(ByrneViolation::Axiom(self.wrap(x), self.wrap(y)));
                }
            }
        }
        Verdict::Pass
    }

    /// `p ↦ p↓`; requires a separative carrier.
    pub fn embed(&self, p: usize) -> Result<RegularElement> {
        self.require_separative()?;
        if p >= self.poset.len() {
            return Err(Error::UnknownElement(format!("#{p}")));
        }
        Ok(self.wrap(self.poset.down_of(p)))
    }

    /// Checks that `p ↦ p↓` is an order embedding with dense image.
    pub fn embedding_check(&self) -> Result<Verdict<EmbeddingViolation>> {
        self.require_separative()?;
        let n = self.poset.len();
        for p in 0..n {
            for q in 0..n {
                let by_order = self.poset.leq(p, q);
                let by_sets = self.poset.down_of(p).is_subset(self.poset.down_of(q));
                if by_order != by_sets {
                    return Ok(Verdict::Fail(EmbeddingViolation::Order(p, q)));
                }
            }
        }
        for &x in &self.universe {
            if x.is_empty() {
                continue;
            }
            if !(0..n).any(|p| self.poset.down_of(p).is_subset(x)) {
                return Ok(Verdict::Fail(EmbeddingViolation::NotDense(self.wrap(x))));
            }
        }
        Ok(Verdict::Pass)
    }

    pub fn render(&self, a: RegularElement) -> String {
        self.poset.render(a.members)
    }

    pub fn describe_byrne(&self, v: &ByrneViolation) -> String {
        match v {
            ByrneViolation::NotAssociative(a, b, c) => format!(
                "meet not associative at {}, {}, {}",
                self.render(*a),
                self.render(*b),
                self.render(*c)
            ),
            ByrneViolation::NotCommutative(a, b) => {
                format!("meet not commutative at {}, {}", self.render(*a), self.render(*b))
            }
            ByrneViolation::NotIdempotent(a) => format!("meet not idempotent at {}", self.render(*a)),
            ByrneViolation::ZeroEqualsOne => "0 = 0'".to_string(),
            ByrneViolation::Axiom(x, y) => format!(
                "X ∧ Y' = 0 and X ∧ Y = X disagree at X = {}, Y = {}",
                self.render(*x),
                self.render(*y)
            ),
        }
    }

    fn require_separative(&self) -> Result<()> {
        self.poset.separativity().map_err(|w| Error::NonSeparative {
            witness: self.poset.name(w).to_string(),
        })
    }

    fn own(&self, a: RegularElement) -> Result<()> {
        if a.carrier == self.poset.fingerprint() {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    pub(crate) fn wrap(&self, members: PointSet) -> RegularElement {
        RegularElement {
            carrier: self.poset.fingerprint(),
            members,
        }
    }

    pub(crate) fn join_raw(&self, a: PointSet, b: PointSet) -> PointSet {
        self.poset.reg_raw(a | b)
    }

    pub(crate) fn implies_raw(&self, a: PointSet, b: PointSet) -> PointSet {
        self.join_raw(self.poset.pc_raw(a), b)
    }
}

pub(crate) fn check_cap(poset: &Poset, cap: usize) -> Result<()> {
    if poset.len() > cap {
        Err(Error::cap(
            format!("exhaustive scan of 2^{} subsets (poset size)", poset.len()),
            poset.len(),
            cap,
        ))
    } else {
        Ok(())
    }
}
