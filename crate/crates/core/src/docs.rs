//! JSON document formats for posets, signatures, valuations, ε-structures,
//! name systems and dense families. Every loader validates fully and names
//! the offending entry on failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::bnames::{NameSpec, NameSystem};
use crate::error::{Error, Result};
use crate::extensional::EpsStructure;
use crate::filters::DenseFamily;
use crate::language::Signature;
use crate::pointset::PointSet;
use crate::poset::Poset;
use crate::ralgebra::{RegularAlgebra, RegularElement};
use crate::semantics::AtomicValuation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    /// `[a, b]` means `a ≤ b`.
    #[serde(default)]
    pub leq: Vec<[String; 2]>,
}

impl PosetDoc {
    /// The covering pairs of `poset` as generators.
    pub fn of(poset: &Poset) -> Self {
        PosetDoc {
            elements: poset.elements().to_vec(),
            leq: poset
                .covers()
                .into_iter()
                .map(|(p, q)| [poset.name(p).to_string(), poset.name(q).to_string()])
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Poset> {
        let gens: Vec<(&str, &str)> = self.leq.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        Poset::new(&self.elements, &gens)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureDoc {
    pub relations: BTreeMap<String, usize>,
    pub names: Vec<String>,
}

impl SignatureDoc {
    pub fn of(sig: &Signature) -> Self {
        SignatureDoc {
            relations: sig.relations().map(|(r, a)| (r.to_string(), a)).collect(),
            names: sig.names().to_vec(),
        }
    }

    pub fn build(&self) -> Result<Signature> {
        Signature::new(self.relations.iter().map(|(r, &a)| (r.clone(), a)), &self.names)
    }
}

/// A signature given inline or as a path relative to the valuation file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignatureRef {
    Inline(SignatureDoc),
    Path(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationDoc {
    pub signature: SignatureRef,
    /// Rendered ground atom to member list; missing atoms are zero.
    #[serde(default)]
    pub atoms: BTreeMap<String, Vec<String>>,
}

impl ValuationDoc {
    /// Inline signature and every non-zero atom.
    pub fn of(v: &AtomicValuation) -> Self {
        let sig = v.signature();
        let poset = v.poset();
        let atoms = v
            .entries()
            .into_iter()
            .filter(|(_, value)| !value.members().is_empty())
            .map(|(atom, value)| {
                let members = poset.names_of(value.members()).into_iter().map(String::from).collect();
                (sig.render_atom(&atom), members)
            })
            .collect();
        ValuationDoc {
            signature: SignatureRef::Inline(SignatureDoc::of(sig)),
            atoms,
        }
    }

    /// `base` resolves a signature given by path.
    pub fn build(&self, algebra: Arc<RegularAlgebra>, base: Option<&Path>, regularize: bool) -> Result<AtomicValuation> {
        let sig = match &self.signature {
            SignatureRef::Inline(doc) => doc.build()?,
            SignatureRef::Path(p) => {
                let path = match base {
                    Some(dir) => dir.join(p),
                    None => PathBuf::from(p),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                from_json::<SignatureDoc>(&text)?.build()?
            }
        };
        let mut entries = Vec::with_capacity(self.atoms.len());
        for (text, members) in &self.atoms {
            let atom = sig.parse_atom(text)?;
            let set = algebra.poset().set(members)?;
            entries.push((atom, set));
        }
        let mut seen = std::collections::HashSet::new();
        for (atom, _) in &entries {
            if !seen.insert(atom.clone()) {
                return Err(Error::Document(format!("atom `{}` listed twice", sig.render_atom(atom))));
            }
        }
        AtomicValuation::from_sets(sig, algebra, entries, regularize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsDoc {
    pub nodes: Vec<String>,
    /// `[x, y]` means `x ε y`.
    #[serde(default)]
    pub eps: Vec<[String; 2]>,
}

impl EpsDoc {
    pub fn of(e: &EpsStructure) -> Self {
        EpsDoc {
            nodes: e.nodes().to_vec(),
            eps: e
                .pairs()
                .into_iter()
                .map(|(x, y)| [e.nodes()[x].clone(), e.nodes()[y].clone()])
                .collect(),
        }
    }

    pub fn build(&self) -> Result<EpsStructure> {
        let pairs: Vec<(&str, &str)> = self.eps.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        EpsStructure::new(&self.nodes, &pairs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NameDoc {
    pub id: String,
    pub stage: usize,
    /// Earlier name id to member list; missing entries are zero.
    #[serde(default)]
    pub table: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NameSystemDoc {
    pub names: Vec<NameDoc>,
}

impl NameSystemDoc {
    /// Lists every table entry, zeros included.
    pub fn of(s: &NameSystem) -> Self {
        let poset = s.algebra().poset();
        let names = s
            .names()
            .iter()
            .map(|n| NameDoc {
                id: n.id().to_string(),
                stage: n.stage(),
                table: n
                    .table()
                    .iter()
                    .map(|(&k, v)| {
                        let members = poset.names_of(v.members()).into_iter().map(String::from).collect();
                        (s.names()[k].id().to_string(), members)
                    })
                    .collect(),
            })
            .collect();
        NameSystemDoc { names }
    }

    pub fn build(&self, algebra: Arc<RegularAlgebra>, regularize: bool) -> Result<NameSystem> {
        let mut specs: Vec<NameSpec> = Vec::with_capacity(self.names.len());
        for n in &self.names {
            let mut entries = Vec::with_capacity(n.table.len());
            for (key, members) in &n.table {
                entries.push((key.clone(), element(&algebra, members, regularize)?));
            }
            specs.push((n.id.clone(), n.stage, entries));
        }
        NameSystem::new(algebra, specs)
    }
}

fn element(algebra: &RegularAlgebra, members: &[String], regularize: bool) -> Result<RegularElement> {
    let set = algebra.poset().set(members)?;
    if regularize {
        algebra.regularized(set)
    } else {
        algebra.element(set)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseDoc {
    pub dense: Vec<Vec<String>>,
}

impl DenseDoc {
    pub fn of(poset: &Poset, family: &DenseFamily) -> Self {
        DenseDoc {
            dense: family
                .sets()
                .iter()
                .map(|&d| poset.names_of(d).into_iter().map(String::from).collect())
                .collect(),
        }
    }

    /// Keeps the listed order, which drives the generic-filter construction.
    pub fn build(&self, poset: &Poset) -> Result<DenseFamily> {
        let sets = self
            .dense
            .iter()
            .map(|d| poset.set(d))
            .collect::<Result<Vec<PointSet>>>()?;
        DenseFamily::new(poset, sets)
    }
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document types serialize");
    s.push('\n');
    s
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    from_json::<PosetDoc>(text)?.build()
}

pub fn parse_eps(text: &str) -> Result<EpsStructure> {
    from_json::<EpsDoc>(text)?.build()
}

pub fn parse_valuation(
    text: &str,
    algebra: Arc<RegularAlgebra>,
    base: Option<&Path>,
    regularize: bool,
) -> Result<AtomicValuation> {
    from_json::<ValuationDoc>(text)?.build(algebra, base, regularize)
}

pub fn parse_name_system(text: &str, algebra: Arc<RegularAlgebra>, regularize: bool) -> Result<NameSystem> {
    from_json::<NameSystemDoc>(text)?.build(algebra, regularize)
}

pub fn parse_dense(text: &str, poset: &Poset) -> Result<DenseFamily> {
    from_json::<DenseDoc>(text)?.build(poset)
}
