//! Exhaustive and seeded-random corpora of posets and ε-structures.
//!
//! Sizes up to [`EXHAUSTIVE_LIMIT`] are enumerated completely; larger sizes
//! are sampled from a ChaCha stream, so a fixed seed gives a fixed corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extensional::EpsStructure;
use crate::pointset::PointSet;
use crate::poset::Poset;
use crate::ralgebra::DEFAULT_EXHAUSTION_CAP;

/// Largest size enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 4;

/// Number of structures sampled per call above [`EXHAUSTIVE_LIMIT`] unless
/// the caller asks otherwise.
pub const DEFAULT_SAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Posets,
    EpsStructures,
}

/// Element labels: `a`, `b`, ... up to 26, then `x26`, `x27`, ...
pub fn labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

fn off_diagonal(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

/// Every partial order on `n` labelled points, in order of the bitmask of
/// strict pairs `(i, j)` meaning `i < j`.
pub fn labeled_posets(n: usize) -> Result<Vec<Poset>> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::cap("exhaustive poset enumeration size", n, EXHAUSTIVE_LIMIT));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let pairs = off_diagonal(n);
    let names = labels(n);
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut below = vec![PointSet::EMPTY; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                below[j] = below[j].with(i);
            }
        }
        let antisymmetric = (0..n).all(|j| below[j].iter().all(|i| !below[i].contains(j)));
        let transitive = (0..n).all(|j| below[j].iter().all(|i| below[i].is_subset(below[j])));
        if antisymmetric && transitive {
            let gens: Vec<(usize, usize)> = (0..n).flat_map(|j| below[j].iter().map(move |i| (i, j))).collect();
            out.push(Poset::from_index_pairs(names.clone(), &gens)?);
        }
    }
    Ok(out)
}

/// A random order: points are shuffled, and each pair respecting the
/// shuffled order becomes a generator with probability one half.
pub fn random_poset(rng: &mut impl Rng, n: usize) -> Result<Poset> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut gens = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(0.5) {
                gens.push((perm[a], perm[b]));
            }
        }
    }
    Poset::from_index_pairs(labels(n), &gens)
}

/// `count` random posets with sizes uniform in `1..=max`.
pub fn random_posets(seed: u64, max: usize, count: usize) -> Result<Vec<Poset>> {
    check_size(max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max.max(1));
            random_poset(&mut rng, n)
        })
        .collect()
}

/// Every labelled poset with at most `max` points followed by `random`
/// seeded samples of size at most `random_max`.
pub fn poset_corpus(max: usize, seed: u64, random: usize, random_max: usize) -> Result<Vec<Poset>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(labeled_posets(n)?);
    }
    out.extend(random_posets(seed, random_max, random)?);
    Ok(out)
}

/// All `2^(n·n)` ε-structures on `n` labelled nodes, in order of the bitmask
/// of pairs `(x, y)` read row by row.
pub fn eps_structures(n: usize) -> Result<impl Iterator<Item = EpsStructure>> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::cap("exhaustive ε-structure enumeration size", n, EXHAUSTIVE_LIMIT));
    }
    let names = labels(n);
    let total: u32 = 1 << (n * n);
    Ok((0..total).map(move |mask| {
        let mut members = vec![PointSet::EMPTY; n];
        for x in 0..n {
            for y in 0..n {
                if mask >> (x * n + y) & 1 == 1 {
                    members[y] = members[y].with(x);
                }
            }
        }
        EpsStructure::from_members(names.clone(), members).expect("labels are distinct")
    }))
}

pub fn random_eps(rng: &mut impl Rng, n: usize) -> EpsStructure {
    let mut members = vec![PointSet::EMPTY; n];
    for x in 0..n {
        for m in members.iter_mut() {
            if rng.random_bool(0.5) {
                *m = m.with(x);
            }
        }
    }
    EpsStructure::from_members(labels(n), members).expect("labels are distinct")
}

/// `count` random ε-structures with sizes uniform in `1..=max`.
pub fn random_eps_structures(seed: u64, max: usize, count: usize) -> Result<Vec<EpsStructure>> {
    check_size(max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let n = rng.random_range(1..=max.max(1));
            random_eps(&mut rng, n)
        })
        .collect())
}

fn check_size(n: usize) -> Result<()> {
    if n > DEFAULT_EXHAUSTION_CAP {
        return Err(Error::cap("corpus structure size", n, DEFAULT_EXHAUSTION_CAP));
    }
    Ok(())
}

pub enum Generated {
    Posets(Vec<Poset>),
    Eps(Vec<EpsStructure>),
}

/// The structures of exactly `size` points: all of them up to
/// [`EXHAUSTIVE_LIMIT`], `samples` seeded ones above.
pub fn generate(kind: Kind, size: usize, seed: u64, samples: usize) -> Result<Generated> {
    check_size(size)?;
    let exhaustive = size <= EXHAUSTIVE_LIMIT;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        Kind::Posets if exhaustive => Generated::Posets(labeled_posets(size)?),
        Kind::Posets => Generated::Posets(
            (0..samples)
                .map(|_| random_poset(&mut rng, size))
                .collect::<Result<_>>()?,
        ),
        Kind::EpsStructures if exhaustive => Generated::Eps(eps_structures(size)?.collect()),
        Kind::EpsStructures => Generated::Eps((0..samples).map(|_| random_eps(&mut rng, size)).collect()),
    })
}
