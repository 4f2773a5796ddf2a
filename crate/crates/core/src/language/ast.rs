use std::collections::BTreeSet;
use std::fmt;

/// An argument position: either a constant name or a variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Name(String),
    Var(String),
}

impl Term {
    pub fn as_str(&self) -> &str {
        match self {
            Term::Name(s) | Term::Var(s) => s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom { rel: String, args: Vec<Term> },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom {
            rel: rel.into(),
            args,
        }
    }

    /// Atom whose arguments are all names.
    pub fn ground<S: AsRef<str>>(rel: impl Into<String>, names: &[S]) -> Self {
        Formula::atom(rel, names.iter().map(|n| Term::Name(n.as_ref().into())).collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, f: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(f))
    }

    pub fn forall(v: impl Into<String>, f: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(f))
    }

    /// Nesting depth of connectives and quantifiers; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom { .. } => 0,
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom { args, .. } => {
                for a in args {
                    if let Term::Var(v) = a {
                        if !bound.contains(&v.as_str()) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, a) | Formula::Forall(v, a) => {
                bound.push(v);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom { .. } => vec![],
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Replaces free occurrences of `var` by the name `name`. Names are
    /// constants, so no capture can occur.
    pub(crate) fn substitute(&self, var: &str, name: &str) -> Formula {
        match self {
            Formula::Atom { rel, args } => Formula::Atom {
                rel: rel.clone(),
                args: args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) if v == var => Term::Name(name.to_string()),
                        other => other.clone(),
                    })
                    .collect(),
            },
            Formula::Not(a) => Formula::not(a.substitute(var, name)),
            Formula::And(a, b) => Formula::and(a.substitute(var, name), b.substitute(var, name)),
            Formula::Or(a, b) => Formula::or(a.substitute(var, name), b.substitute(var, name)),
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute(var, name), b.substitute(var, name))
            }
            Formula::Iff(a, b) => Formula::iff(a.substitute(var, name), b.substitute(var, name)),
            Formula::Exists(v, _) | Formula::Forall(v, _) if v == var => self.clone(),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.substitute(var, name)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.substitute(var, name)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { rel, args } => {
                write!(f, "{rel}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(a.as_str())?;
                }
                f.write_str(")")
            }
            Formula::Not(a) => write!(f, "not {a}"),
            Formula::And(a, b) => write!(f, "({a} and {b})"),
            Formula::Or(a, b) => write!(f, "({a} or {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Exists(v, a) => write!(f, "exists {v}. {a}"),
            Formula::Forall(v, a) => write!(f, "forall {v}. {a}"),
        }
    }
}
