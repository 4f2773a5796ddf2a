//! Small named structures used by tests, examples and the CLI.

use std::sync::Arc;

use crate::bnames::{build_hierarchy, NameSystem};
use crate::extensional::EpsStructure;
use crate::language::{GroundAtom, Signature};
use crate::poset::Poset;
use crate::ralgebra::RegularAlgebra;
use crate::semantics::AtomicValuation;

/// Fixture names resolvable by the CLI.
pub const POSETS: [&str; 4] = ["chain2", "anti2", "tree3", "tree7"];
pub const EPS_STRUCTURES: [&str; 3] = ["ea", "eb", "eq"];

/// `b ≤ t`.
pub fn chain2() -> Poset {
    Poset::new(&["b", "t"], &[("b", "t")]).expect("valid fixture")
}

/// Two incomparable points.
pub fn anti2() -> Poset {
    Poset::new::<_, &str>(&["a", "b"], &[]).expect("valid fixture")
}

/// A root `r` with two incompatible extensions `p0`, `p1`.
pub fn tree3() -> Poset {
    Poset::new(&["r", "p0", "p1"], &[("p0", "r"), ("p1", "r")]).expect("valid fixture")
}

/// Binary strings of length at most 2, with `s ≤ t` iff `t` is a prefix of
/// `s`. The empty string is written `e`.
pub fn tree7() -> Poset {
    let elements = ["e", "0", "1", "00", "01", "10", "11"];
    let parent = |s: &str| if s.len() == 1 { "e".to_string() } else { s[..1].to_string() };
    let gens: Vec<(String, String)> = elements[1..]
        .iter()
        .map(|s| (s.to_string(), parent(s)))
        .collect();
    Poset::new(&elements, &gens).expect("valid fixture")
}

pub fn poset(name: &str) -> Option<Poset> {
    Some(match name {
        "chain2" => chain2(),
        "anti2" => anti2(),
        "tree3" => tree3(),
        "tree7" => tree7(),
        _ => return None,
    })
}

/// `a ε c`, `b ε c`.
pub fn ea() -> EpsStructure {
    EpsStructure::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).expect("valid fixture")
}

/// `a ε c`, `b ε d`.
pub fn eb() -> EpsStructure {
    EpsStructure::new(&["a", "b", "c", "d"], &[("a", "c"), ("b", "d")]).expect("valid fixture")
}

/// Two self-membered atoms.
pub fn eq() -> EpsStructure {
    EpsStructure::new(&["x", "y"], &[("x", "x"), ("y", "y")]).expect("valid fixture")
}

pub fn eps_structure(name: &str) -> Option<EpsStructure> {
    Some(match name {
        "ea" => ea(),
        "eb" => eb(),
        "eq" => eq(),
        _ => return None,
    })
}

/// Over [`tree3`]: unary `R`, names `n0`, `n1`, with `R(n0) = {p0}` and
/// `R(n1) = {p1}`.
pub fn vt() -> AtomicValuation {
    let algebra = Arc::new(RegularAlgebra::build(tree3()).expect("small poset"));
    let sig = Signature::new([("R".to_string(), 1)], &["n0", "n1"]).expect("valid signature");
    let entries = vec![
        (
            GroundAtom {
                rel: "R".into(),
                args: vec![0],
            },
            algebra.element_named(&["p0"]).expect("regular"),
        ),
        (
            GroundAtom {
                rel: "R".into(),
                args: vec![1],
            },
            algebra.element_named(&["p1"]).expect("regular"),
        ),
    ];
    AtomicValuation::new(sig, algebra, entries).expect("valid fixture")
}

pub fn valuation(name: &str) -> Option<AtomicValuation> {
    (name == "vt").then(vt)
}

/// The stage-2 hierarchy over the algebra of [`tree3`]: the empty name and
/// one name `{empty name ↦ x}` for each of the four algebra elements.
pub fn ns2() -> NameSystem {
    let algebra = Arc::new(RegularAlgebra::build(tree3()).expect("small poset"));
    build_hierarchy(algebra, 2, 16).expect("five names")
}

pub fn name_system(name: &str) -> Option<NameSystem> {
    (name == "ns2").then(ns2)
}
