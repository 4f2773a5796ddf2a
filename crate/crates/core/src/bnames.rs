//! Boolean-valued names built in stages, their similarity values, and the
//! power-set name.
//!
//! A name created at stage `k` is a function from names created earlier into
//! the algebra; `[[σ ε τ]]` is `τ(σ)` when `σ` is older than `τ` and zero
//! otherwise. Similarity `[[σ ~ τ]]` is computed exactly like the two-valued
//! stages of [`crate::extensional`], with every connective read in the
//! algebra.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extensional::EpsStructure;
use crate::language::tuples;
use crate::pointset::PointSet;
use crate::ralgebra::{RegularAlgebra, RegularElement};
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BName {
    id: String,
    stage: usize,
    /// Keyed by the index of an earlier name in the owning system.
    table: BTreeMap<usize, RegularElement>,
}

impl BName {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn table(&self) -> &BTreeMap<usize, RegularElement> {
        &self.table
    }
}

/// A closed, finite collection of names over one algebra. The listing order
/// is the order used for every join and meet.
#[derive(Clone, Debug)]
pub struct NameSystem {
    algebra: Arc<RegularAlgebra>,
    names: Vec<BName>,
    index: HashMap<String, usize>,
}

/// A name given by id, stage and table of `(id, value)` entries.
pub type NameSpec = (String, usize, Vec<(String, RegularElement)>);

impl NameSystem {
    /// Validates ids, stages and tables. Table keys must name strictly
    /// earlier-stage names of the same system.
    pub fn new(algebra: Arc<RegularAlgebra>, specs: Vec<NameSpec>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, (id, stage, _)) in specs.iter().enumerate() {
            if *stage == 0 {
                return Err(Error::InvalidNameSystem(format!("name `{id}` has stage 0")));
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidNameSystem(format!("duplicate name `{id}`")));
            }
        }
        let mut names = Vec::with_capacity(specs.len());
        for (id, stage, entries) in &specs {
            let mut table = BTreeMap::new();
            for (key, value) in entries {
                let k = *index
                    .get(key)
                    .ok_or_else(|| Error::InvalidNameSystem(format!("`{id}` refers to unknown name `{key}`")))?;
                if specs[k].1 >= *stage {
                    return Err(Error::InvalidNameSystem(format!(
                        "`{id}` (stage {stage}) refers to `{key}` created at stage {}",
                        specs[k].1
                    )));
                }
                algebra.position(*value)?;
                if table.insert(k, *value).is_some() {
                    return Err(Error::InvalidNameSystem(format!("`{id}` lists `{key}` twice")));
                }
            }
            names.push(BName {
                id: id.clone(),
                stage: *stage,
                table,
            });
        }
        Ok(NameSystem {
            algebra,
            names,
            index,
        })
    }

    pub fn algebra(&self) -> &RegularAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<RegularAlgebra> {
        &self.algebra
    }

    pub fn names(&self) -> &[BName] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownName(id.to_string()))
    }

    pub fn max_stage(&self) -> usize {
        self.names.iter().map(|n| n.stage).max().unwrap_or(0)
    }

    /// `[[σ ε τ]]` by index.
    pub fn eps_at(&self, sigma: usize, tau: usize) -> RegularElement {
        let (s, t) = (&self.names[sigma], &self.names[tau]);
        if s.stage < t.stage {
            t.table.get(&sigma).copied().unwrap_or_else(|| self.algebra.zero())
        } else {
            self.algebra.zero()
        }
    }

    /// `[[σ ε τ]]` by id.
    pub fn eps_value(&self, sigma: &str, tau: &str) -> Result<RegularElement> {
        Ok(self.eps_at(self.index_of(sigma)?, self.index_of(tau)?))
    }

    /// The full `ε`-value matrix of the system.
    pub fn to_bool_eps(&self) -> BoolEps {
        let n = self.len();
        let eps = (0..n)
            .map(|x| (0..n).map(|y| self.eps_at(x, y).members()).collect())
            .collect();
        BoolEps {
            algebra: self.algebra.clone(),
            labels: self.names.iter().map(|n| n.id.clone()).collect(),
            eps,
        }
    }

    /// `σ' ≤ σ`: `[[π ε σ']] ≤ [[π ε σ]]` for every name `π`.
    pub fn subname_leq(&self, sigma_prime: &str, sigma: &str) -> Result<bool> {
        Ok(self.subname_leq_at(self.index_of(sigma_prime)?, self.index_of(sigma)?))
    }

    fn subname_leq_at(&self, sp: usize, s: usize) -> bool {
        (0..self.len()).all(|pi| {
            self.eps_at(pi, sp)
                .members()
                .is_subset(self.eps_at(pi, s).members())
        })
    }

    /// Renders a value as a member list of the carrier poset.
    pub fn render(&self, a: RegularElement) -> String {
        self.algebra.render(a)
    }

    fn push(&mut self, name: BName) {
        self.index.insert(name.id.clone(), self.names.len());
        self.names.push(name);
    }
}

/// Canonical id of a name: its stage and the universe positions of its table
/// values over the listed domain.
fn canonical_id(algebra: &RegularAlgebra, stage: usize, values: &[RegularElement]) -> String {
    if values.is_empty() {
        return format!("s{stage}");
    }
    let digits: Vec<String> = values
        .iter()
        .map(|&v| algebra.position(v).expect("own element").to_string())
        .collect();
    format!("s{stage}:{}", digits.join("."))
}

/// The full hierarchy: stage 1 holds the empty name, and stage `k + 1` adds
/// every function from the names of stages `≤ k` into the algebra.
pub fn build_hierarchy(algebra: Arc<RegularAlgebra>, max_stage: usize, cap: usize) -> Result<NameSystem> {
    if max_stage == 0 {
        return Err(Error::InvalidNameSystem("the hierarchy needs at least one stage".into()));
    }
    let mut system = NameSystem::new(algebra.clone(), vec![("s1".to_string(), 1, vec![])])?;
    if cap == 0 {
        return Err(Error::cap("names in the hierarchy", 1, cap));
    }
    let b = algebra.len();
    for stage in 2..=max_stage {
        let domain = system.len();
        let count = u32::try_from(domain)
            .ok()
            .and_then(|d| (b as u128).checked_pow(d));
        let fits = count
            .and_then(|c| usize::try_from(c).ok())
            .filter(|&c| c <= cap && domain + c <= cap);
        let Some(count) = fits else {
            let shown = match count {
                Some(c) => format!("{b}^{domain} = {c} stage-{stage} names"),
                None => format!("{b}^{domain} stage-{stage} names"),
            };
            return Err(Error::cap("name hierarchy", shown, cap));
        };
        let mut new_names = Vec::with_capacity(count);
        for assignment in tuples(b, domain) {
            let values: Vec<RegularElement> = assignment
                .iter()
                .map(|&i| algebra.nth(i).expect("position in universe"))
                .collect();
            new_names.push(BName {
                id: canonical_id(&algebra, stage, &values),
                stage,
                table: values.into_iter().enumerate().collect(),
            });
        }
        for n in new_names {
            system.push(n);
        }
    }
    Ok(system)
}

/// Adds the power-set name of `sigma` at a fresh top stage: every existing
/// name `σ'` gets value one if `σ' ≤ σ` and zero otherwise. Returns the
/// extended system and the index of the new name.
pub fn power_name(system: &NameSystem, sigma: &str) -> Result<(NameSystem, usize)> {
    let s = system.index_of(sigma)?;
    let alg = &system.algebra;
    let values: Vec<RegularElement> = (0..system.len())
        .map(|sp| {
            if system.subname_leq_at(sp, s) {
                alg.one()
            } else {
                alg.zero()
            }
        })
        .collect();
    let stage = system.max_stage() + 1;
    let tau = BName {
        id: canonical_id(alg, stage, &values),
        stage,
        table: values.into_iter().enumerate().collect(),
    };
    let mut extended = system.clone();
    let idx = extended.len();
    extended.push(tau);
    Ok((extended, idx))
}

/// How `σ' ⊂ σ` is read in the power-set check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SubsetReading {
    /// `inf_π ([[π ∈ σ']] ⇒ [[π ∈ σ]])` with the derived membership.
    #[default]
    Membership,
    /// The two-valued subname order `σ' ≤ σ`, as zero or one.
    SubnameOrder,
}

#[derive(Clone, Debug)]
pub struct PowerCheck {
    /// The extended system, containing the power-set name.
    pub system: NameSystem,
    /// Index of the power-set name in `system`.
    pub power: usize,
    /// `inf_σ' [[σ' ∈ τ ↔ σ' ⊂ σ]]` over the names of the extended system.
    pub value: RegularElement,
}

impl PowerCheck {
    pub fn passed(&self) -> bool {
        self.value == self.system.algebra.one()
    }
}

/// Computes the value of "τ contains exactly the subsets of σ", quantifying
/// over the names of the extended system only.
pub fn verify_power_axiom(system: &NameSystem, sigma: &str, reading: SubsetReading) -> Result<PowerCheck> {
    let (ext, tau) = power_name(system, sigma)?;
    let s = ext.index_of(sigma)?;
    let beps = ext.to_bool_eps();
    let stages = bool_sim_stages(&beps);
    let alg = beps.algebra.as_ref();
    let poset = alg.poset();
    let n = ext.len();
    let mem: Vec<Vec<PointSet>> = (0..n)
        .map(|x| (0..n).map(|y| membership_raw(&beps, stages.limit_raw(), x, y)).collect())
        .collect();
    let mut value = poset.all();
    for sp in 0..n {
        let subset = match reading {
            SubsetReading::Membership => (0..n).fold(poset.all(), |acc, pi| {
                acc & alg.implies_raw(mem[pi][sp], mem[pi][s])
            }),
            SubsetReading::SubnameOrder => {
                if ext.subname_leq_at(sp, s) {
                    poset.all()
                } else {
                    PointSet::EMPTY
                }
            }
        };
        let member = mem[sp][tau];
        value = value & alg.implies_raw(member, subset) & alg.implies_raw(subset, member);
    }
    let value = alg.wrap(value);
    Ok(PowerCheck {
        system: ext,
        power: tau,
        value,
    })
}

/// A Boolean-valued membership-like relation on labelled nodes:
/// `eps[x][y] = [[x ε y]]`.
#[derive(Clone, Debug)]
pub struct BoolEps {
    algebra: Arc<RegularAlgebra>,
    labels: Vec<String>,
    eps: Vec<Vec<PointSet>>,
}

impl BoolEps {
    /// Reads a two-valued structure into an algebra: edges get one, non-edges
    /// zero.
    pub fn from_eps_structure(e: &EpsStructure, algebra: Arc<RegularAlgebra>) -> Self {
        let n = e.len();
        let one = algebra.one().members();
        let eps = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| if e.contains(x, y) { one } else { PointSet::EMPTY })
                    .collect()
            })
            .collect();
        BoolEps {
            algebra,
            labels: e.nodes().to_vec(),
            eps,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn algebra(&self) -> &RegularAlgebra {
        &self.algebra
    }

    pub fn eps(&self, x: usize, y: usize) -> RegularElement {
        self.algebra.wrap(self.eps[x][y])
    }
}

/// `[[x ~k y]]` for every stage up to the first fixpoint.
#[derive(Clone, Debug)]
pub struct BoolSimStages {
    algebra: Arc<RegularAlgebra>,
    stages: Vec<Vec<Vec<PointSet>>>,
}

impl BoolSimStages {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Raw stage matrices, `[k][x][y]`.
    pub fn stages(&self) -> &[Vec<Vec<PointSet>>] {
        &self.stages
    }

    /// `[[x ~k y]]`, with `k` clamped to the fixpoint.
    pub fn value(&self, k: usize, x: usize, y: usize) -> RegularElement {
        let k = k.min(self.stages.len() - 1);
        self.algebra.wrap(self.stages[k][x][y])
    }

    /// `[[x ~ y]]` at the fixpoint.
    pub fn limit(&self, x: usize, y: usize) -> RegularElement {
        self.value(usize::MAX, x, y)
    }

    fn limit_raw(&self) -> &Vec<Vec<PointSet>> {
        self.stages.last().expect("stage 0 always exists")
    }
}

/// Stage 0 is one on identical nodes and zero elsewhere; stage `k + 1` at
/// `(a, b)` is the meet over both directions of
/// `inf_x ([[x ε a]] ⇒ sup_y ([[x ~k y]] ∧ [[y ε b]]))`. Iterates until a
/// stage repeats.
pub fn bool_sim_stages(s: &BoolEps) -> BoolSimStages {
    let alg = s.algebra.as_ref();
    let poset = alg.poset();
    let n = s.len();
    let one = poset.all();
    let mut stages: Vec<Vec<Vec<PointSet>>> = vec![(0..n)
        .map(|x| (0..n).map(|y| if x == y { one } else { PointSet::EMPTY }).collect())
        .collect()];
    loop {
        let prev = stages.last().expect("non-empty");
        let next: Vec<Vec<PointSet>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let forth = (0..n).fold(one, |acc, x| {
                            let matched = (0..n).fold(PointSet::EMPTY, |m, y| m | (prev[x][y] & s.eps[y][b]));
                            acc & alg.implies_raw(s.eps[x][a], poset.reg_raw(matched))
                        });
                        let back = (0..n).fold(one, |acc, y| {
                            let matched = (0..n).fold(PointSet::EMPTY, |m, x| m | (prev[x][y] & s.eps[x][a]));
                            acc & alg.implies_raw(s.eps[y][b], poset.reg_raw(matched))
                        });
                        forth & back
                    })
                    .collect()
            })
            .collect();
        if &next == prev {
            break;
        }
        stages.push(next);
    }
    BoolSimStages {
        algebra: s.algebra.clone(),
        stages,
    }
}

fn membership_raw(s: &BoolEps, sim: &[Vec<PointSet>], x: usize, y: usize) -> PointSet {
    let union = (0..s.len()).fold(PointSet::EMPTY, |acc, z| acc | (sim[x][z] & s.eps[z][y]));
    s.algebra.poset().reg_raw(union)
}

/// `[[σ ∈ τ]] = sup_σ' ([[σ ~ σ']] ∧ [[σ' ε τ]])` at the fixpoint.
pub fn bool_membership(s: &BoolEps, sigma: usize, tau: usize) -> RegularElement {
    let stages = bool_sim_stages(s);
    s.algebra.wrap(membership_raw(s, stages.limit_raw(), sigma, tau))
}

/// The full derived membership matrix, `[x][y] = [[x ∈ y]]`.
pub fn bool_membership_matrix(s: &BoolEps) -> Vec<Vec<RegularElement>> {
    let stages = bool_sim_stages(s);
    (0..s.len())
        .map(|x| {
            (0..s.len())
                .map(|y| s.algebra.wrap(membership_raw(s, stages.limit_raw(), x, y)))
                .collect()
        })
        .collect()
}

/// `(τ, τ', σ)` where the limit inequality fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitViolation {
    pub tau: usize,
    pub tau_prime: usize,
    pub sigma: usize,
}

/// Checks `[[τ ~ τ']] ≤ [[σ ε τ]]' ∨ sup_σ' ([[σ' ε τ']] ∧ [[σ ~ σ']])` for
/// all triples, with `~` at the fixpoint.
pub fn limit_inequality_check(s: &BoolEps) -> Verdict<LimitViolation> {
    let stages = bool_sim_stages(s);
    let sim = stages.limit_raw();
    let alg = s.algebra.as_ref();
    let poset = alg.poset();
    let n = s.len();
    for tau in 0..n {
        for tau_prime in 0..n {
            for sigma in 0..n {
                let witnessed = (0..n).fold(PointSet::EMPTY, |acc, sp| acc | (s.eps[sp][tau_prime] & sim[sigma][sp]));
                let rhs = alg.implies_raw(s.eps[sigma][tau], poset.reg_raw(witnessed));
                if !sim[tau][tau_prime].is_subset(rhs) {
                    return Verdict::Fail(LimitViolation {
                        tau,
                        tau_prime,
                        sigma,
                    });
                }
            }
        }
    }
    Verdict::Pass
}
