//! Boolean-valued evaluation of the forcing language, truth relative to a
//! generic filter, and the forcing relation.
//!
//! Two routes to forcing are provided and checked against each other:
//! [`forces`] reads membership in the Boolean value directly, while
//! [`forces_semantic`] quantifies over every generic filter through the point.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::filters::{enumerate_filters, first_missed, DenseFamily, Filter};
use crate::language::{subformula_closure, tuples, Formula, GroundAtom, Signature, Term};
use crate::pointset::PointSet;
use crate::poset::Poset;
use crate::ralgebra::{RegularAlgebra, RegularElement};
use crate::verdict::Verdict;

/// Boolean values for every ground atom of a signature.
#[derive(Clone, Debug)]
pub struct AtomicValuation {
    signature: Signature,
    algebra: Arc<RegularAlgebra>,
    /// First table slot of each relation, in symbol order.
    offsets: Vec<(String, usize, usize)>,
    table: Vec<PointSet>,
}

impl AtomicValuation {
    /// Builds a valuation from explicit entries; atoms without an entry get
    /// the value zero.
    pub fn new<I>(signature: Signature, algebra: Arc<RegularAlgebra>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroundAtom, RegularElement)>,
    {
        let mut offsets = Vec::new();
        let mut total = 0;
        let n = signature.names().len();
        for (rel, arity) in signature.relations() {
            offsets.push((rel.to_string(), arity, total));
            total += n.pow(arity as u32);
        }
        let mut v = AtomicValuation {
            signature,
            algebra,
            offsets,
            table: vec![PointSet::EMPTY; total],
        };
        for (atom, value) in entries {
            v.algebra.position(value)?;
            let slot = v.slot(&atom)?;
            v.table[slot] = value.members();
        }
        Ok(v)
    }

    /// Builds a valuation from raw point sets. Non-regular values are rejected
    /// unless `regularize` is set, in which case `X ↦ X''` is applied.
    pub fn from_sets<I>(
        signature: Signature,
        algebra: Arc<RegularAlgebra>,
        entries: I,
        regularize: bool,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (GroundAtom, PointSet)>,
    {
        let mut converted = Vec::new();
        for (atom, set) in entries {
            let value = if regularize {
                algebra.regularized(set)?
            } else {
                algebra.element(set)?
            };
            converted.push((atom, value));
        }
        Self::new(signature, algebra, converted)
    }

    /// Every atom gets the value `f(atom)`.
    pub fn from_fn(
        signature: Signature,
        algebra: Arc<RegularAlgebra>,
        mut f: impl FnMut(&GroundAtom) -> RegularElement,
    ) -> Result<Self> {
        let entries: Vec<_> = signature
            .ground_atoms()
            .into_iter()
            .map(|a| {
                let v = f(&a);
                (a, v)
            })
            .collect();
        Self::new(signature, algebra, entries)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn algebra(&self) -> &RegularAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<RegularAlgebra> {
        &self.algebra
    }

    pub fn poset(&self) -> &Poset {
        self.algebra.poset()
    }

    pub fn value(&self, atom: &GroundAtom) -> Result<RegularElement> {
        Ok(self.algebra.wrap(self.table[self.slot(atom)?]))
    }

    /// `(atom, value)` for every ground atom, in signature order.
    pub fn entries(&self) -> Vec<(GroundAtom, RegularElement)> {
        self.signature
            .ground_atoms()
            .into_iter()
            .map(|a| {
                let v = self.algebra.wrap(self.table[self.slot(&a).expect("own atom")]);
                (a, v)
            })
            .collect()
    }

    fn slot(&self, atom: &GroundAtom) -> Result<usize> {
        let (_, arity, base) = self
            .offsets
            .iter()
            .find(|(r, _, _)| *r == atom.rel)
            .ok_or_else(|| Error::UnknownRelation(atom.rel.clone()))?;
        if atom.args.len() != *arity {
            return Err(Error::Arity {
                rel: atom.rel.clone(),
                expected: *arity,
                found: atom.args.len(),
            });
        }
        let n = self.signature.names().len();
        let mut idx = 0;
        for &a in &atom.args {
            if a >= n {
                return Err(Error::UnknownName(format!("#{a}")));
            }
            idx = idx * n + a;
        }
        Ok(base + idx)
    }

    /// Value of a formula under an assignment of names to its free variables.
    fn eval<'f>(&self, f: &'f Formula, env: &mut Vec<(&'f str, usize)>) -> PointSet {
        let poset = self.algebra.poset();
        match f {
            Formula::Atom { rel, args } => {
                let (_, _, base) = self
                    .offsets
                    .iter()
                    .find(|(r, _, _)| r == rel)
                    .expect("checked formula");
                let n = self.signature.names().len();
                let idx = args.iter().fold(0, |acc, t| {
                    let i = match t {
                        Term::Name(name) => self.signature.name_index(name).expect("checked formula"),
                        Term::Var(v) => {
                            env.iter()
                                .rev()
                                .find(|(w, _)| w == v)
                                .expect("checked formula")
                                .1
                        }
                    };
                    acc * n + i
                });
                self.table[base + idx]
            }
            Formula::Not(a) => poset.pc_raw(self.eval(a, env)),
            Formula::And(a, b) => self.eval(a, env) & self.eval(b, env),
            Formula::Or(a, b) => {
                let (x, y) = (self.eval(a, env), self.eval(b, env));
                self.algebra.join_raw(x, y)
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.eval(a, env), self.eval(b, env));
                self.algebra.implies_raw(x, y)
            }
            Formula::Iff(a, b) => {
                let (x, y) = (self.eval(a, env), self.eval(b, env));
                self.algebra.implies_raw(x, y) & self.algebra.implies_raw(y, x)
            }
            Formula::Exists(v, body) => poset.reg_raw(self.union_over_names(v, body, env)),
            Formula::Forall(v, body) => {
                let mut acc = poset.all();
                for n in 0..self.signature.names().len() {
                    env.push((v, n));
                    acc = acc & self.eval(body, env);
                    env.pop();
                }
                acc
            }
        }
    }

    /// Set-theoretic union (not the join) of the values of `body` with `v`
    /// ranging over all names.
    fn union_over_names<'f>(&self, v: &'f str, body: &'f Formula, env: &mut Vec<(&'f str, usize)>) -> PointSet {
        let mut acc = PointSet::EMPTY;
        for n in 0..self.signature.names().len() {
            env.push((v, n));
            acc = acc | self.eval(body, env);
            env.pop();
        }
        acc
    }

    fn check_sentence(&self, f: &Formula) -> Result<()> {
        self.signature.check(f)?;
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(Error::FreeVariable(v));
        }
        Ok(())
    }

    /// Evaluates `f` for every assignment of names to its free variables
    /// (variables in identifier order, assignments lexicographic).
    fn eval_instances(&self, f: &Formula) -> Vec<PointSet> {
        let vars: Vec<String> = f.free_vars().into_iter().collect();
        tuples(self.signature.names().len(), vars.len())
            .into_iter()
            .map(|assign| {
                let mut env: Vec<(&str, usize)> =
                    vars.iter().map(String::as_str).zip(assign).collect();
                self.eval(f, &mut env)
            })
            .collect()
    }
}

/// `[[φ]]` for a sentence.
pub fn evaluate(v: &AtomicValuation, f: &Formula) -> Result<RegularElement> {
    v.check_sentence(f)?;
    Ok(v.algebra.wrap(v.eval(f, &mut Vec::new())))
}

/// The dense sets genericity has to meet for the formulas in `formulas` to
/// be decided correctly: `X ∪ X'` for `X = [[ψ]]` with `ψ` ranging over all
/// name-instances of the subformula closure, and for `X` the union of
/// `[[θ(n)]]` over names `n` for every quantified subformula `Qv.θ`.
pub fn required_dense_family<'a, I>(v: &AtomicValuation, formulas: I) -> Result<DenseFamily>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let formulas: Vec<&Formula> = formulas.into_iter().collect();
    for f in &formulas {
        v.signature.check(f)?;
    }
    let poset = v.poset();
    let mut sets = Vec::new();
    let mut push = |x: PointSet| sets.push(x | poset.pc_raw(x));
    for psi in subformula_closure(formulas) {
        for x in v.eval_instances(&psi) {
            push(x);
        }
        if let Formula::Exists(var, body) | Formula::Forall(var, body) = &psi {
            let others: Vec<String> = body.free_vars().into_iter().filter(|w| w != var).collect();
            for assign in tuples(v.signature.names().len(), others.len()) {
                let mut env: Vec<(&str, usize)> =
                    others.iter().map(String::as_str).zip(assign).collect();
                push(v.union_over_names(var, body, &mut env));
            }
        }
    }
    DenseFamily::canonical(poset, sets)
}

/// Dense family deciding every ground atom: `[[A]] ∪ [[A]]'`.
pub fn atomic_dense_family(v: &AtomicValuation) -> Result<DenseFamily> {
    let poset = v.poset();
    let sets = v.table.iter().map(|&x| x | poset.pc_raw(x)).collect();
    DenseFamily::canonical(poset, sets)
}

fn require_generic(v: &AtomicValuation, g: &Filter, family: &DenseFamily) -> Result<()> {
    if g.carrier() != v.poset().fingerprint() {
        return Err(Error::CarrierMismatch);
    }
    match first_missed(g, family) {
        None => Ok(()),
        Some(d) => Err(Error::NotGeneric {
            missed: v.poset().render(d),
        }),
    }
}

/// `G ⊨ φ`: the value of `φ` meets `G`. The filter must be generic for the
/// dense family `φ` requires.
pub fn g_models(v: &AtomicValuation, g: &Filter, f: &Formula) -> Result<bool> {
    v.check_sentence(f)?;
    require_generic(v, g, &required_dense_family(v, [f])?)?;
    Ok(v.eval(f, &mut Vec::new()).intersects(g.members()))
}

/// The model `M[G]`: names, with exactly those ground atoms true whose value
/// meets the filter.
#[derive(Clone, Debug)]
pub struct GenericModel {
    signature: Signature,
    filter: Filter,
    truths: BTreeSet<GroundAtom>,
}

impl GenericModel {
    pub fn filter(&self) -> &Filter {
        &self.filter
    }

    pub fn truths(&self) -> &BTreeSet<GroundAtom> {
        &self.truths
    }

    /// Classical two-valued satisfaction, quantifiers ranging over names.
    pub fn satisfies(&self, f: &Formula) -> Result<bool> {
        self.signature.check(f)?;
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(Error::FreeVariable(v));
        }
        Ok(self.sat(f, &mut Vec::new()))
    }

    fn sat<'f>(&self, f: &'f Formula, env: &mut Vec<(&'f str, usize)>) -> bool {
        match f {
            Formula::Atom { rel, args } => {
                let args = args
                    .iter()
                    .map(|t| match t {
                        Term::Name(n) => self.signature.name_index(n).expect("checked"),
                        Term::Var(v) => env.iter().rev().find(|(w, _)| w == v).expect("closed").1,
                    })
                    .collect();
                self.truths.contains(&GroundAtom {
                    rel: rel.clone(),
                    args,
                })
            }
            Formula::Not(a) => !self.sat(a, env),
            Formula::And(a, b) => self.sat(a, env) && self.sat(b, env),
            Formula::Or(a, b) => self.sat(a, env) || self.sat(b, env),
            Formula::Implies(a, b) => !self.sat(a, env) || self.sat(b, env),
            Formula::Iff(a, b) => self.sat(a, env) == self.sat(b, env),
            Formula::Exists(v, body) => (0..self.signature.names().len()).any(|n| {
                env.push((v, n));
                let r = self.sat(body, env);
                env.pop();
                r
            }),
            Formula::Forall(v, body) => (0..self.signature.names().len()).all(|n| {
                env.push((v, n));
                let r = self.sat(body, env);
                env.pop();
                r
            }),
        }
    }
}

pub fn model_of(v: &AtomicValuation, g: &Filter) -> Result<GenericModel> {
    require_generic(v, g, &atomic_dense_family(v)?)?;
    let truths = v
        .signature
        .ground_atoms()
        .into_iter()
        .filter(|a| v.table[v.slot(a).expect("own atom")].intersects(g.members()))
        .collect();
    Ok(GenericModel {
        signature: v.signature.clone(),
        filter: *g,
        truths,
    })
}

/// `p ⊩ φ` read off the Boolean value: `p ∈ [[φ]]`.
pub fn forces(v: &AtomicValuation, p: usize, f: &Formula) -> Result<bool> {
    if p >= v.poset().len() {
        return Err(Error::UnknownElement(format!("#{p}")));
    }
    Ok(evaluate(v, f)?.members().contains(p))
}

/// `p ⊩ φ` by definition: `φ` holds for every filter through `p` that is
/// generic for the dense family `φ` requires.
pub fn forces_semantic(v: &AtomicValuation, p: usize, f: &Formula) -> Result<bool> {
    let family = required_dense_family(v, [f])?;
    forces_semantic_relative(v, p, f, &family)
}

/// As [`forces_semantic`], with genericity relative to a caller-supplied
/// family, which must contain every set `φ` requires.
pub fn forces_semantic_relative(
    v: &AtomicValuation,
    p: usize,
    f: &Formula,
    family: &DenseFamily,
) -> Result<bool> {
    if p >= v.poset().len() {
        return Err(Error::UnknownElement(format!("#{p}")));
    }
    v.check_sentence(f)?;
    if family.carrier() != v.poset().fingerprint() {
        return Err(Error::CarrierMismatch);
    }
    let required = required_dense_family(v, [f])?;
    if let Some(&missing) = required.sets().iter().find(|&&d| !family.contains(d)) {
        return Err(Error::InadmissibleFamily {
            missing: v.poset().render(missing),
        });
    }
    let filters = enumerate_filters(v.poset(), v.algebra.cap())?;
    let value = v.eval(f, &mut Vec::new());
    Ok(filters
        .iter()
        .filter(|g| g.contains(p) && first_missed(g, family).is_none())
        .all(|g| value.intersects(g.members())))
}

/// Every sentence obtained by instantiating the members of the subformula
/// closure of `formulas` with names, in canonical order.
pub fn generated_sentences<'a, I>(sig: &Signature, formulas: I) -> Vec<Formula>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut out = BTreeSet::new();
    for f in subformula_closure(formulas) {
        out.extend(crate::language::instances(&f, sig));
    }
    out.into_iter().collect()
}

/// First disagreement found by one of the lemma verifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaViolation {
    /// Forcing by generic filters and membership in the value disagree.
    Forcing {
        point: usize,
        formula: Formula,
        semantic: bool,
        definable: bool,
    },
    /// `G ⊨ φ` and "some point of `G` forces `φ`" disagree.
    Truth {
        filter: Filter,
        formula: Formula,
        models: bool,
        forced: bool,
    },
    /// A quantified sentence and its instances disagree under `G`.
    Quantifier {
        filter: Filter,
        formula: Formula,
        models: bool,
        instances: bool,
    },
}

impl LemmaViolation {
    pub fn describe(&self, poset: &Poset) -> String {
        match self {
            LemmaViolation::Forcing {
                point,
                formula,
                semantic,
                definable,
            } => format!(
                "forcing lemma fails at {} for `{formula}`: generic-filter forcing {semantic}, membership {definable}",
                poset.name(*point)
            ),
            LemmaViolation::Truth {
                filter,
                formula,
                models,
                forced,
            } => format!(
                "truth lemma fails at G = {} for `{formula}`: G ⊨ φ is {models}, forced in G is {forced}",
                poset.render(filter.members())
            ),
            LemmaViolation::Quantifier {
                filter,
                formula,
                models,
                instances,
            } => format!(
                "quantifier lemma fails at G = {} for `{formula}`: sentence {models}, instances {instances}",
                poset.render(filter.members())
            ),
        }
    }
}

/// Checks `forces_semantic ≡ forces` for every point and every generated
/// sentence.
pub fn verify_forcing_lemma(v: &AtomicValuation, formulas: &[Formula]) -> Result<Verdict<LemmaViolation>> {
    for f in formulas {
        v.check_sentence(f)?;
    }
    let filters = enumerate_filters(v.poset(), v.algebra.cap())?;
    for phi in generated_sentences(&v.signature, formulas) {
        let family = required_dense_family(v, [&phi])?;
        let value = v.eval(&phi, &mut Vec::new());
        for p in 0..v.poset().len() {
            let semantic = filters
                .iter()
                .filter(|g| g.contains(p) && first_missed(g, &family).is_none())
                .all(|g| value.intersects(g.members()));
            let definable = value.contains(p);
            if semantic != definable {
                return Ok(Verdict::Fail(LemmaViolation::Forcing {
                    point: p,
                    formula: phi,
                    semantic,
                    definable,
                }));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// A generated sentence with its value. Its own dense family is contained in
/// the family of the formulas it was generated from, so every filter the
/// verifiers visit is generic for it.
struct Decided {
    sentence: Formula,
    value: PointSet,
}

fn decide_all(v: &AtomicValuation, formulas: &[Formula]) -> Result<(Vec<Filter>, Vec<Decided>)> {
    for f in formulas {
        v.check_sentence(f)?;
    }
    let family = required_dense_family(v, formulas)?;
    let generic: Vec<Filter> = enumerate_filters(v.poset(), v.algebra.cap())?
        .into_iter()
        .filter(|g| first_missed(g, &family).is_none())
        .collect();
    let decided = generated_sentences(&v.signature, formulas)
        .into_iter()
        .map(|sentence| Decided {
            value: v.eval(&sentence, &mut Vec::new()),
            sentence,
        })
        .collect();
    Ok((generic, decided))
}

impl Decided {
    fn models(&self, g: &Filter) -> bool {
        self.value.intersects(g.members())
    }
}

/// For every filter generic for the family of `formulas` and every generated
/// sentence: `G ⊨ φ` iff some `p ∈ G` forces `φ`.
pub fn verify_truth_lemma(v: &AtomicValuation, formulas: &[Formula]) -> Result<Verdict<LemmaViolation>> {
    let (generic, decided) = decide_all(v, formulas)?;
    for g in &generic {
        for d in &decided {
            let models = d.models(g);
            let forced = g.members().iter().any(|p| d.value.contains(p));
            if models != forced {
                return Ok(Verdict::Fail(LemmaViolation::Truth {
                    filter: *g,
                    formula: d.sentence.clone(),
                    models,
                    forced,
                }));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// For every generic filter and every generated quantified sentence:
/// `G ⊨ ∃v.θ` iff `G ⊨ θ(n)` for some name, and `G ⊨ ∀v.θ` iff for all.
pub fn verify_quantifier_lemma(v: &AtomicValuation, formulas: &[Formula]) -> Result<Verdict<LemmaViolation>> {
    let (generic, decided) = decide_all(v, formulas)?;
    let lookup = |f: &Formula| decided.iter().find(|d| d.sentence == *f);
    for g in &generic {
        for d in &decided {
            let (var, body, existential) = match &d.sentence {
                Formula::Exists(var, body) => (var, body, true),
                Formula::Forall(var, body) => (var, body, false),
                _ => continue,
            };
            let models = d.models(g);
            let mut results = Vec::with_capacity(v.signature.names().len());
            for name in v.signature.names() {
                let inst = body.substitute(var, name);
                let r = match lookup(&inst) {
                    Some(di) => di.models(g),
                    None => g_models(v, g, &inst)?,
                };
                results.push(r);
            }
            let instances = if existential {
                results.iter().any(|&b| b)
            } else {
                results.iter().all(|&b| b)
            };
            if models != instances {
                return Ok(Verdict::Fail(LemmaViolation::Quantifier {
                    filter: *g,
                    formula: d.sentence.clone(),
                    models,
                    instances,
                }));
            }
        }
    }
    Ok(Verdict::Pass)
}
