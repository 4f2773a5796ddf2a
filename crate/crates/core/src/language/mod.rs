//! The forcing language: relation symbols applied to names or variables,
//! closed under the classical connectives and the two quantifiers.

mod ast;
mod parser;

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub use ast::{Formula, Term};
pub use parser::parse_formula;

use crate::error::{Error, Result};

/// Relation symbols with their arities, plus the finite list of names that
/// quantifiers range over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    relations: BTreeMap<String, usize>,
    names: Vec<String>,
    name_index: HashMap<String, usize>,
}

/// A relation symbol applied to a tuple of names, by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub rel: String,
    pub args: Vec<usize>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !parser::KEYWORDS.contains(&s)
}

impl Signature {
    pub fn new<R, N>(relations: R, names: &[N]) -> Result<Self>
    where
        R: IntoIterator<Item = (String, usize)>,
        N: AsRef<str>,
    {
        let mut rels = BTreeMap::new();
        for (sym, arity) in relations {
            if !is_identifier(&sym) {
                return Err(Error::InvalidSignature(format!("bad relation symbol `{sym}`")));
            }
            if arity == 0 {
                return Err(Error::InvalidSignature(format!("relation `{sym}` has arity 0")));
            }
            if rels.insert(sym.clone(), arity).is_some() {
                return Err(Error::InvalidSignature(format!("duplicate relation `{sym}`")));
            }
        }
        let mut name_index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::InvalidSignature(format!("bad name `{n}`")));
            }
            if name_index.insert(n.to_string(), i).is_some() {
                return Err(Error::InvalidSignature(format!("duplicate name `{n}`")));
            }
        }
        Ok(Signature {
            relations: rels,
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            name_index,
        })
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn arity(&self, rel: &str) -> Option<usize> {
        self.relations.get(rel).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_index(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    /// All ground atoms: relations in symbol order, argument tuples in
    /// lexicographic name order.
    pub fn ground_atoms(&self) -> Vec<GroundAtom> {
        let n = self.names.len();
        let mut out = Vec::new();
        for (rel, &arity) in &self.relations {
            for args in tuples(n, arity) {
                out.push(GroundAtom {
                    rel: rel.clone(),
                    args,
                });
            }
        }
        out
    }

    pub fn render_atom(&self, atom: &GroundAtom) -> String {
        let args: Vec<&str> = atom.args.iter().map(|&i| self.names[i].as_str()).collect();
        format!("{}({})", atom.rel, args.join(","))
    }

    /// Parses `R(n0,n1)` (whitespace-insensitive) into a ground atom.
    pub fn parse_atom(&self, text: &str) -> Result<GroundAtom> {
        match parse_formula(text, self)? {
            Formula::Atom { rel, args } => {
                let args = args
                    .iter()
                    .map(|t| match t {
                        Term::Name(n) => Ok(self.name_index[n]),
                        Term::Var(v) => Err(Error::UnboundVariable(v.clone())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroundAtom { rel, args })
            }
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("`{text}` is not an atom"),
            }),
        }
    }

    /// Checks names, relation symbols and arities of an AST built by hand.
    pub fn check(&self, f: &Formula) -> Result<()> {
        match f {
            Formula::Atom { rel, args } => {
                let arity = self
                    .arity(rel)
                    .ok_or_else(|| Error::UnknownRelation(rel.clone()))?;
                if arity != args.len() {
                    return Err(Error::Arity {
                        rel: rel.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                for a in args {
                    if let Term::Name(n) = a {
                        if self.name_index(n).is_none() {
                            return Err(Error::UnknownName(n.clone()));
                        }
                    }
                }
                Ok(())
            }
            _ => f.children().into_iter().try_for_each(|c| self.check(c)),
        }
    }
}

/// All `arity`-tuples over `0..n` in lexicographic order.
pub(crate) fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Substitutes `name` for the free occurrences of `var` in `f`.
pub fn instantiate(f: &Formula, var: &str, name: &str, sig: &Signature) -> Result<Formula> {
    if sig.name_index(name).is_none() {
        return Err(Error::UnknownName(name.to_string()));
    }
    Ok(f.substitute(var, name))
}

/// The smallest set containing `formulas` and closed under immediate
/// subformulas. Quantifier bodies keep their free variable.
pub fn subformula_closure<'a, I>(formulas: I) -> BTreeSet<Formula>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut out = BTreeSet::new();
    let mut stack: Vec<&Formula> = formulas.into_iter().collect();
    while let Some(f) = stack.pop() {
        if out.insert(f.clone()) {
            stack.extend(f.children());
        }
    }
    out
}

/// Every way of replacing the free variables of `f` by names, in
/// lexicographic order of the assignment (variables sorted by identifier).
pub fn instances(f: &Formula, sig: &Signature) -> Vec<Formula> {
    let vars: Vec<String> = f.free_vars().into_iter().collect();
    tuples(sig.names().len(), vars.len())
        .into_iter()
        .map(|assign| {
            vars.iter()
                .zip(assign)
                .fold(f.clone(), |acc, (v, i)| acc.substitute(v, &sig.names()[i]))
        })
        .collect()
}
