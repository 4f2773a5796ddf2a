//! Command line front end. [`run`] parses arguments and [`dispatch`] returns
//! the full report, so the binary only prints and exits.
//!
//! Exit status: 0 success or pass, 1 property failed or query false, 2 input
//! error, 3 resource cap exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bnames::{build_hierarchy, verify_power_axiom, NameSystem, SubsetReading};
use crate::corpus::{self, Generated, Kind, DEFAULT_SAMPLES};
use crate::docs::{self, DenseDoc, EpsDoc, NameSystemDoc, PosetDoc};
use crate::error::{Error, Result};
use crate::extensional::{self, check_e, greatest_bisimulation, membership_from, quotient, sim_stages, EpsStructure};
use crate::filters::{rasiowa_sikorski, DenseFamily};
use crate::fixtures;
use crate::language::{parse_formula, Formula};
use crate::poset::Poset;
use crate::ralgebra::{RegularAlgebra, DEFAULT_EXHAUSTION_CAP};
use crate::semantics::{
    evaluate, forces, verify_forcing_lemma, verify_quantifier_lemma, verify_truth_lemma, AtomicValuation,
};

const DEFAULT_NAME_CAP: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "forcinglab", version, about = "Finite forcing, Boolean-valued names and extensional collapse")]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags accepted by every command. Input flags take a path, or a fixture
/// name when no such path exists.
#[derive(Debug, Args)]
pub struct Shared {
    /// Poset document or fixture (chain2, anti2, tree3, tree7).
    #[arg(long, global = true)]
    pub poset: Option<String>,
    /// Valuation document or fixture (vt).
    #[arg(long, global = true)]
    pub valuation: Option<String>,
    /// Exhaustion cap: poset size for algebra work, name count for
    /// hierarchies, structure size for corpora.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Apply X ↦ X'' to non-regular input values instead of rejecting them.
    #[arg(long, global = true)]
    pub regularize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Doc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the regular down-closed sets, one per line.
    Algebra,
    /// Check the Boolean algebra axioms on the regular sets.
    CheckByrne,
    /// Check that every principal down-set is regular.
    Separative,
    /// Build a generic filter through a point.
    Generic {
        #[arg(long)]
        at: String,
        /// Dense family document; all dense sets when absent.
        #[arg(long)]
        dense_file: Option<PathBuf>,
    },
    /// Print the Boolean value of a sentence.
    Eval {
        #[arg(long)]
        formula: String,
    },
    /// Decide whether a point forces a sentence.
    Forces {
        #[arg(long)]
        at: String,
        #[arg(long)]
        formula: String,
    },
    /// Exhaustive lemma verification.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Staged similarity, derived membership and quotient of an ε-structure.
    Collapse {
        /// ε-structure document or fixture (ea, eb, eq).
        #[arg(long)]
        input: String,
        /// Also report the greatest bisimulation and quotient by it.
        #[arg(long)]
        greatest: bool,
    },
    /// Build the full name hierarchy up to a stage.
    Hierarchy {
        #[arg(long)]
        stages: usize,
    },
    /// Value of the power-set statement for one name.
    PowerCheck {
        #[arg(long)]
        name: String,
        /// Name-system document or fixture (ns2); the full hierarchy when absent.
        #[arg(long, conflicts_with = "stages")]
        names: Option<String>,
        /// Stages of the full hierarchy used when no name system is given.
        #[arg(long)]
        stages: Option<usize>,
        #[arg(long, value_enum, default_value_t = Subset::Membership)]
        subset: Subset,
    },
    /// Generate all structures of a size, or seeded samples above 4.
    Corpus {
        #[arg(long, value_enum)]
        kind: CorpusKind,
        /// Samples drawn above the exhaustive limit.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyWhat {
    /// Forcing, truth and quantifier lemmas for the sentences in a file,
    /// one per line; blank lines and lines starting with `#` are skipped.
    Lemmas {
        #[arg(long)]
        formulas: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subset {
    /// Inclusion through derived membership.
    Membership,
    /// The subname order.
    Subname,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Posets,
    Eps,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report {
            exit: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn verdict(pass: bool, stdout: String, stderr: String) -> Self {
        Report {
            exit: if pass { 0 } else { 1 },
            stdout,
            stderr,
        }
    }

    fn error(e: &Error) -> Self {
        Report {
            exit: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses `args` (including the program name) and dispatches.
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Report {
                    exit: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Report::ok(text)
            }
        }
    }
}

pub fn dispatch(cli: &Cli) -> Report {
    match try_dispatch(cli) {
        Ok(r) => r,
        Err(e) => Report::error(&e),
    }
}

fn try_dispatch(cli: &Cli) -> Result<Report> {
    let s = &cli.shared;
    if s.cap == Some(0) {
        return Err(Error::Document("--cap must be positive".into()));
    }
    match &cli.command {
        Command::Algebra => algebra(s),
        Command::CheckByrne => check_byrne(s),
        Command::Separative => separative(s),
        Command::Generic { at, dense_file } => generic(s, at, dense_file.as_deref()),
        Command::Eval { formula } => eval(s, formula),
        Command::Forces { at, formula } => forces_cmd(s, at, formula),
        Command::Verify {
            what: VerifyWhat::Lemmas { formulas },
        } => lemmas(s, formulas),
        Command::Collapse { input, greatest } => collapse(s, input, *greatest),
        Command::Hierarchy { stages } => hierarchy(s, *stages),
        Command::PowerCheck {
            name,
            names,
            stages,
            subset,
        } => power_check(s, name, names.as_deref(), *stages, *subset),
        Command::Corpus { kind, samples } => corpus_cmd(s, *kind, *samples),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Existing paths win over fixture names.
fn resolve<T>(arg: &str, fixture: impl Fn(&str) -> Option<T>, load: impl Fn(&Path) -> Result<T>) -> Result<T> {
    let path = Path::new(arg);
    if path.exists() {
        load(path)
    } else if let Some(v) = fixture(arg) {
        Ok(v)
    } else {
        Err(Error::Io(format!("{arg}: no such file or fixture")))
    }
}

fn load_poset(arg: &str) -> Result<Poset> {
    resolve(arg, fixtures::poset, |p| docs::parse_poset(&read(p)?))
}

fn cap(s: &Shared) -> usize {
    s.cap.unwrap_or(DEFAULT_EXHAUSTION_CAP)
}

fn poset_or(s: &Shared, default: Option<&str>) -> Result<Poset> {
    match (s.poset.as_deref(), default) {
        (Some(arg), _) | (None, Some(arg)) => load_poset(arg),
        (None, None) => Err(Error::Document("--poset is required".into())),
    }
}

fn algebra_of(s: &Shared, default: Option<&str>) -> Result<Arc<RegularAlgebra>> {
    Ok(Arc::new(RegularAlgebra::build_with_cap(poset_or(s, default)?, cap(s))?))
}

/// A valuation fixture brings its own poset; a document needs `--poset`.
fn load_valuation(s: &Shared) -> Result<AtomicValuation> {
    let arg = s
        .valuation
        .as_deref()
        .ok_or_else(|| Error::Document("--valuation is required".into()))?;
    let path = Path::new(arg);
    let v = if path.exists() {
        let algebra = algebra_of(s, None)?;
        docs::parse_valuation(&read(path)?, algebra, path.parent(), s.regularize)?
    } else if let Some(v) = fixtures::valuation(arg) {
        v
    } else {
        return Err(Error::Io(format!("{arg}: no such file or fixture")));
    };
    if let Some(p) = s.poset.as_deref() {
        if load_poset(p)? != *v.poset() {
            return Err(Error::CarrierMismatch);
        }
    }
    Ok(v)
}

fn members(poset: &Poset, x: crate::pointset::PointSet) -> Vec<&str> {
    poset.names_of(x)
}

fn algebra(s: &Shared) -> Result<Report> {
    let alg = algebra_of(s, None)?;
    let poset = alg.poset();
    let out = match s.format {
        Format::Text => alg.universe().map(|a| alg.render(a) + "\n").collect(),
        Format::Doc => docs::to_json(&json!({
            "poset": PosetDoc::of(poset),
            "universe": alg.universe().map(|a| members(poset, a.members())).collect::<Vec<_>>(),
        })),
    };
    Ok(Report::ok(out))
}

fn check_byrne(s: &Shared) -> Result<Report> {
    let alg = algebra_of(s, None)?;
    let verdict = alg.byrne_check();
    let detail = verdict.counterexample().map(|v| alg.describe_byrne(v));
    let out = match s.format {
        Format::Text => if verdict.is_pass() { "pass\n" } else { "fail\n" }.to_string(),
        Format::Doc => docs::to_json(&json!({ "pass": verdict.is_pass(), "counterexample": detail })),
    };
    Ok(Report::verdict(verdict.is_pass(), out, detail.map(|d| d + "\n").unwrap_or_default()))
}

fn separative(s: &Shared) -> Result<Report> {
    let poset = poset_or(s, None)?;
    let witness = poset.separativity().err().map(|w| poset.name(w).to_string());
    let out = match (s.format, &witness) {
        (Format::Text, None) => "separative\n".to_string(),
        (Format::Text, Some(w)) => format!("not separative: witness {w}\n"),
        (Format::Doc, _) => docs::to_json(&json!({ "separative": witness.is_none(), "witness": witness })),
    };
    Ok(Report::verdict(witness.is_none(), out, String::new()))
}

fn generic(s: &Shared, at: &str, dense_file: Option<&Path>) -> Result<Report> {
    let poset = poset_or(s, None)?;
    let p = poset.index_of(at)?;
    let family = match dense_file {
        Some(path) => docs::parse_dense(&read(path)?, &poset)?,
        None => DenseFamily::all_dense(&poset, cap(s))?,
    };
    let g = rasiowa_sikorski(&poset, p, &family)?;
    let out = match s.format {
        Format::Text => poset.render(g.members()) + "\n",
        Format::Doc => docs::to_json(&json!({
            "filter": members(&poset, g.members()),
            "family": DenseDoc::of(&poset, &family),
        })),
    };
    Ok(Report::ok(out))
}

fn sentence(v: &AtomicValuation, text: &str) -> Result<Formula> {
    let f = parse_formula(text, v.signature())?;
    if let Some(var) = f.free_vars().into_iter().next() {
        return Err(Error::FreeVariable(var));
    }
    Ok(f)
}

fn eval(s: &Shared, text: &str) -> Result<Report> {
    let v = load_valuation(s)?;
    let f = sentence(&v, text)?;
    let value = evaluate(&v, &f)?;
    let out = match s.format {
        Format::Text => v.algebra().render(value) + "\n",
        Format::Doc => docs::to_json(&json!({
            "formula": f.to_string(),
            "value": members(v.poset(), value.members()),
        })),
    };
    Ok(Report::ok(out))
}

fn forces_cmd(s: &Shared, at: &str, text: &str) -> Result<Report> {
    let v = load_valuation(s)?;
    let p = v.poset().index_of(at)?;
    let f = sentence(&v, text)?;
    let answer = forces(&v, p, &f)?;
    let out = match s.format {
        Format::Text => format!("{answer}\n"),
        Format::Doc => docs::to_json(&json!({ "at": at, "formula": f.to_string(), "forces": answer })),
    };
    Ok(Report::verdict(answer, out, String::new()))
}

fn lemmas(s: &Shared, path: &Path) -> Result<Report> {
    let v = load_valuation(s)?;
    let text = read(path)?;
    let formulas = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| sentence(&v, l))
        .collect::<Result<Vec<_>>>()?;
    let checks = [
        ("forcing", verify_forcing_lemma(&v, &formulas)?),
        ("truth", verify_truth_lemma(&v, &formulas)?),
        ("quantifier", verify_quantifier_lemma(&v, &formulas)?),
    ];
    let pass = checks.iter().all(|(_, verdict)| verdict.is_pass());
    let mut out = String::new();
    let mut err = String::new();
    let mut rows = Vec::new();
    for (lemma, verdict) in &checks {
        let detail = verdict.counterexample().map(|c| c.describe(v.poset()));
        let status = if verdict.is_pass() { "pass" } else { "fail" };
        writeln!(out, "{lemma} lemma: {status}").unwrap();
        if let Some(d) = &detail {
            writeln!(err, "{d}").unwrap();
        }
        rows.push(json!({ "lemma": lemma, "pass": verdict.is_pass(), "counterexample": detail }));
    }
    if s.format == Format::Doc {
        out = docs::to_json(&json!({ "sentences": formulas.len(), "lemmas": rows }));
    }
    Ok(Report::verdict(pass, out, err))
}

fn load_eps(arg: &str) -> Result<EpsStructure> {
    resolve(arg, fixtures::eps_structure, |p| docs::parse_eps(&read(p)?))
}

fn collapse(s: &Shared, input: &str, greatest: bool) -> Result<Report> {
    let e = load_eps(input)?;
    let staged = sim_stages(&e);
    let chosen = if greatest {
        greatest_bisimulation(&e)
    } else {
        staged.limit().clone()
    };
    let q = quotient(&e, &chosen)?;
    if s.format == Format::Doc {
        return Ok(Report::ok(docs::to_json(&EpsDoc::of(&q))));
    }
    let mut out = String::new();
    for (k, stage) in staged.stages().iter().enumerate() {
        writeln!(out, "stage {k}: {}", e.render_partition(stage)).unwrap();
    }
    let limit = staged.limit();
    writeln!(out, "limit: {}", e.render_partition(limit)).unwrap();
    writeln!(out, "blocks: {}", limit.blocks().len()).unwrap();
    writeln!(out, "membership: {}", membership_from(&e).render_pairs()).unwrap();
    let extensional = check_e(&e).is_pass();
    writeln!(out, "extensional: {}", if extensional { "pass" } else { "fail" }).unwrap();
    if greatest {
        writeln!(out, "greatest bisimulation: {}", e.render_partition(&chosen)).unwrap();
        writeln!(out, "greatest blocks: {}", chosen.blocks().len()).unwrap();
    }
    writeln!(out, "quotient nodes: {}", q.nodes().join(" ")).unwrap();
    writeln!(out, "quotient eps: {}", q.render_pairs()).unwrap();
    writeln!(
        out,
        "well-founded: {}",
        extensional::is_well_founded(&e)
    )
    .unwrap();
    Ok(Report::ok(out))
}

fn render_system(system: &NameSystem) -> String {
    let mut out = String::new();
    let mut stage = 0;
    for n in system.names() {
        if n.stage() != stage {
            stage = n.stage();
            writeln!(out, "stage {stage}:").unwrap();
        }
        let table: Vec<String> = n
            .table()
            .iter()
            .map(|(&k, &v)| format!("{} -> {}", system.names()[k].id(), system.render(v)))
            .collect();
        writeln!(out, "  {} {{{}}}", n.id(), table.join(", ")).unwrap();
    }
    out
}

fn hierarchy(s: &Shared, stages: usize) -> Result<Report> {
    let alg = Arc::new(RegularAlgebra::build(poset_or(s, Some("tree3"))?)?);
    let system = build_hierarchy(alg, stages, s.cap.unwrap_or(DEFAULT_NAME_CAP))?;
    let out = match s.format {
        Format::Text => render_system(&system),
        Format::Doc => docs::to_json(&NameSystemDoc::of(&system)),
    };
    Ok(Report::ok(out))
}

fn power_check(s: &Shared, name: &str, names: Option<&str>, stages: Option<usize>, subset: Subset) -> Result<Report> {
    let system = match names {
        Some(arg) => {
            let path = Path::new(arg);
            if path.exists() {
                let alg = Arc::new(RegularAlgebra::build(poset_or(s, None)?)?);
                docs::parse_name_system(&read(path)?, alg, s.regularize)?
            } else {
                fixtures::name_system(arg).ok_or_else(|| Error::Io(format!("{arg}: no such file or fixture")))?
            }
        }
        None => {
            let alg = Arc::new(RegularAlgebra::build(poset_or(s, Some("tree3"))?)?);
            build_hierarchy(alg, stages.unwrap_or(2), s.cap.unwrap_or(DEFAULT_NAME_CAP))?
        }
    };
    let reading = match subset {
        Subset::Membership => SubsetReading::Membership,
        Subset::Subname => SubsetReading::SubnameOrder,
    };
    let check = verify_power_axiom(&system, name, reading)?;
    let power = check.system.names()[check.power].id().to_string();
    let value = check.system.render(check.value);
    let status = if check.passed() { "pass" } else { "fail" };
    let out = match s.format {
        Format::Text => format!("power name: {power}\nvalue: {value}\nrestricted-universe: {status}\n"),
        Format::Doc => docs::to_json(&json!({
            "name": name,
            "power_name": power,
            "value": members(check.system.algebra().poset(), check.value.members()),
            "restricted_universe": check.passed(),
        })),
    };
    Ok(Report::verdict(check.passed(), out, String::new()))
}

fn corpus_cmd(s: &Shared, kind: CorpusKind, samples: usize) -> Result<Report> {
    let size = s
        .cap
        .ok_or_else(|| Error::Document("corpus needs --cap (structure size)".into()))?;
    let kind = match kind {
        CorpusKind::Posets => Kind::Posets,
        CorpusKind::Eps => Kind::EpsStructures,
    };
    let mut out = String::new();
    match corpus::generate(kind, size, s.seed, samples)? {
        Generated::Posets(ps) => {
            for p in &ps {
                let line = serde_json::to_string(&PosetDoc::of(p)).expect("serializable");
                writeln!(out, "{line}").unwrap();
            }
            if s.format == Format::Text {
                out.insert_str(0, &format!("# {} posets on {size} elements\n", ps.len()));
            }
        }
        Generated::Eps(es) => {
            for e in &es {
                let line = serde_json::to_string(&EpsDoc::of(e)).expect("serializable");
                writeln!(out, "{line}").unwrap();
            }
            if s.format == Format::Text {
                out.insert_str(0, &format!("# {} eps-structures on {size} nodes\n", es.len()));
            }
        }
    }
    Ok(Report::ok(out))
}
