//! Verb definitions and dispatch. Every verb returns a JSON value; the
//! caller decides between JSON and golden text.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use mk_core::abelian::{abelianize, compose_affinity, is_maltsev_op, roundtrip_check};
use mk_core::algebra::{is_homomorphism, product, quotient, subuniverse_generate};
use mk_core::bimodule::{crext_check, enumerate_derivations, lift_maltsev};
use mk_core::commutator::{center, centrality_witness, commutator, commutator_oracle, is_abelian, lower_series, upper_series};
use mk_core::congruence::{all_congruences, cg};
use mk_core::constants::compare_with_constants;
use mk_core::counterexample::counterexample_harness;
use mk_core::maltsev::{
    asmal_witness, associativity_witness, central_torsor_check, commutativity_witness, find_maltsev_term, maltsev_witness,
    torsor_to_group,
};
use mk_core::monoid::{check_linear_extension, check_untwisted, trivial_extension};
use mk_core::term::term_clone;
use mk_core::{
    AffinityOp, Congruence, Domain, FiniteAlgebra, Homomorphism, LinearForm, MonoidExtension, TermOp, DEFAULT_CLONE_BUDGET,
    DEFAULT_DER_BUDGET, DEFAULT_LATTICE_SIZE_CAP,
};

use crate::diag::Diagnostic;
use crate::load::{Entity, SpecDocument};

#[derive(Debug, Parser)]
#[command(name = "mk", version, about = "Finite universal algebra workbench")]
pub struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "golden")]
    pub json: bool,
    /// Emit pre-formatted text instead of JSON.
    #[arg(long, global = true)]
    pub golden: bool,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Budget for clone, lattice and derivation enumeration.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Args)]
pub struct Files {
    /// Spec files, loaded in order into one document.
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlgArg {
    #[command(flatten)]
    pub src: Files,
    /// Algebra name; may be omitted when the document has exactly one.
    #[arg(long)]
    pub alg: Option<String>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub a: AlgArg,
    /// First congruence: a `cong` name, `nabla` or `delta`.
    #[arg(long = "R", alias = "r")]
    pub r: String,
    /// Second congruence.
    #[arg(long = "S", alias = "s")]
    pub s: String,
}

#[derive(Debug, Args)]
pub struct TernArg {
    #[command(flatten)]
    pub src: Files,
    #[arg(long)]
    pub tern: Option<String>,
}

#[derive(Debug, Args)]
pub struct FormArg {
    #[command(flatten)]
    pub src: Files,
    #[arg(long)]
    pub form: Option<String>,
}

#[derive(Debug, Args)]
pub struct DiagramArg {
    #[command(flatten)]
    pub src: Files,
    #[arg(long)]
    pub diagram: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExtArg {
    #[command(flatten)]
    pub src: Files,
    /// Extension name.
    #[arg(long, conflicts_with = "system")]
    pub extension: Option<String>,
    /// Natural system whose trivial extension is checked.
    #[arg(long)]
    pub system: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Load files and list their entities.
    Check(Files),
    /// Print the canonical serialization of the loaded document.
    Fmt(Files),
    /// Direct product of algebras.
    Product {
        #[command(flatten)]
        src: Files,
        #[arg(long = "alg", required = true)]
        algs: Vec<String>,
    },
    /// Subuniverse generated by a set of elements.
    Subuniverse {
        #[command(flatten)]
        a: AlgArg,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<usize>,
    },
    /// Quotient by a declared congruence.
    Quotient {
        #[command(flatten)]
        src: Files,
        #[arg(long)]
        cong: String,
    },
    /// Term clone of a given arity.
    Clone {
        #[command(flatten)]
        a: AlgArg,
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// Check that a map is a homomorphism.
    Hom {
        #[command(flatten)]
        src: Files,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, value_delimiter = ',')]
        map: Vec<usize>,
    },
    /// Congruence generated by pairs `a,b`.
    Cg {
        #[command(flatten)]
        a: AlgArg,
        #[arg(long = "pair")]
        pairs: Vec<String>,
    },
    /// Full congruence lattice.
    Lattice {
        #[command(flatten)]
        a: AlgArg,
        #[arg(long, default_value_t = DEFAULT_LATTICE_SIZE_CAP)]
        cap: usize,
    },
    /// Search the ternary clone for a Maltsev term.
    MaltsevTerm(AlgArg),
    /// Maltsev, associativity and commutativity of a ternary table.
    TorsorCheck(TernArg),
    /// The group of an associative Maltsev table.
    TorsorGroup {
        #[command(flatten)]
        t: TernArg,
        #[arg(long)]
        require_commutative: bool,
    },
    /// Centrality of a table on a mixed domain.
    CentralCheck {
        #[command(flatten)]
        t: TernArg,
        /// Algebra the table must respect.
        #[arg(long)]
        alg: Option<String>,
    },
    /// Whether R and S centralize each other.
    Centralize(PairArgs),
    /// Commutator of two congruences.
    Commutator {
        #[command(flatten)]
        pair: PairArgs,
        /// Also compute the lattice-enumeration oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// The center.
    Center(AlgArg),
    /// Lower and upper central series and the nilpotence class.
    Nilpotence {
        #[command(flatten)]
        a: AlgArg,
        #[arg(long)]
        max: Option<usize>,
    },
    /// Substitute affinity operations `<m,r1,..>` into each other.
    AffinityCompose {
        #[command(flatten)]
        f: FormArg,
        #[arg(long)]
        outer: String,
        #[arg(long = "inner")]
        inners: Vec<String>,
    },
    /// Linear form of an abelian Maltsev algebra.
    Abelianize(AlgArg),
    /// Realize a form and read it back.
    Roundtrip {
        #[command(flatten)]
        f: FormArg,
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// Derivations, inner derivations, H⁰ and H¹.
    Derivations {
        #[command(flatten)]
        f: FormArg,
        #[arg(long)]
        bim: Option<String>,
    },
    /// Torsor check of an extension diagram.
    Crext(DiagramArg),
    /// Lift a Maltsev operation of the base along a diagram.
    Lift {
        #[command(flatten)]
        d: DiagramArg,
        /// Base operation; defaults to the canonical Maltsev operation.
        #[arg(long)]
        op: Option<String>,
        /// Preimage to lift from; defaults to a non-Maltsev one.
        #[arg(long)]
        preimage: Option<String>,
    },
    /// Compare a form with the theory of its kernel constants.
    Constants {
        #[command(flatten)]
        f: FormArg,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Trivial extension of a monoid by a natural system.
    TrivialExt {
        #[command(flatten)]
        src: Files,
        #[arg(long)]
        system: Option<String>,
    },
    /// Linear extension laws.
    LinExtCheck(ExtArg),
    /// Search for an untwisting family.
    UntwistedCheck(ExtArg),
    /// The non-abelian quotient example.
    Counterexample,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] Diagnostic),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] mk_core::Error),
    #[error("{0}")]
    Domain(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 64,
            RunError::Parse(_) => 65,
            RunError::Io { .. } => 66,
            RunError::Core(e) if e.is_budget() => 2,
            RunError::Core(_) | RunError::Domain(_) => 1,
        }
    }
}

type Res<T> = Result<T, RunError>;

pub fn load(files: &Files) -> Res<SpecDocument> {
    let mut doc = SpecDocument::default();
    for path in &files.files {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| RunError::Io { path: shown.clone(), source })?;
        doc.extend(&text).map_err(|d| d.in_file(&shown))?;
    }
    Ok(doc)
}

/// The entity called `name`, or the only one of `kind`.
fn pick<'a>(doc: &'a SpecDocument, name: Option<&str>, kind: &str) -> Res<(&'a str, &'a Entity)> {
    if let Some(name) = name {
        return match doc.iter().find(|(n, _)| *n == name) {
            Some((n, e)) if e.kind() == kind => Ok((n, e)),
            Some((_, e)) => Err(RunError::Usage(format!("`{name}` is a {}, expected a {kind}", e.kind()))),
            None => Err(RunError::Usage(format!("no {kind} named `{name}`"))),
        };
    }
    let mut hits = doc.iter().filter(|(_, e)| e.kind() == kind);
    match (hits.next(), hits.next()) {
        (Some(hit), None) => Ok(hit),
        (None, _) => Err(RunError::Usage(format!("the document declares no {kind}"))),
        (Some(_), Some(_)) => Err(RunError::Usage(format!("several {kind}s are declared; choose one with --{kind}"))),
    }
}

fn algebra<'a>(doc: &'a SpecDocument, name: Option<&str>) -> Res<(&'a str, &'a FiniteAlgebra)> {
    match pick(doc, name, "algebra")? {
        (n, Entity::Algebra(a)) => Ok((n, a)),
        _ => unreachable!("kind checked"),
    }
}

fn form<'a>(doc: &'a SpecDocument, name: Option<&str>) -> Res<(&'a str, &'a LinearForm)> {
    match pick(doc, name, "form")? {
        (n, Entity::Form(f)) => Ok((n, f)),
        _ => unreachable!("kind checked"),
    }
}

fn blocks(theta: &Congruence) -> Value {
    json!(theta.blocks())
}

/// A congruence argument: `nabla`, `delta` or a `cong` name. Returns the
/// algebra the congruence is declared on, if any.
fn cong_arg<'a>(doc: &'a SpecDocument, name: &str, size: Option<usize>) -> Res<(Option<&'a str>, Option<Congruence>)> {
    match name {
        "nabla" | "∇" => Ok((None, size.map(Congruence::nabla))),
        "delta" | "Δ" => Ok((None, size.map(Congruence::delta))),
        _ => match pick(doc, Some(name), "cong")? {
            (_, Entity::Cong { alg, theta }) => Ok((Some(alg.as_str()), Some(theta.clone()))),
            _ => unreachable!("kind checked"),
        },
    }
}

/// Resolves the algebra and both congruences of a pair argument.
fn pair<'a>(doc: &'a SpecDocument, p: &PairArgs) -> Res<(&'a FiniteAlgebra, Congruence, Congruence)> {
    let (ra, _) = cong_arg(doc, &p.r, None)?;
    let (sa, _) = cong_arg(doc, &p.s, None)?;
    let name = p.a.alg.as_deref().or(ra).or(sa);
    let (an, alg) = algebra(doc, name)?;
    for (arg, on) in [(&p.r, ra), (&p.s, sa)] {
        if let Some(on) = on.filter(|&on| on != an) {
            return Err(RunError::Usage(format!("congruence `{arg}` is declared on `{on}`, not `{an}`")));
        }
    }
    let r = cong_arg(doc, &p.r, Some(alg.size))?.1.expect("size given");
    let s = cong_arg(doc, &p.s, Some(alg.size))?.1.expect("size given");
    Ok((alg, r, s))
}

fn maltsev_term(alg: &FiniteAlgebra, budget: usize) -> Res<TermOp> {
    find_maltsev_term(alg, budget)?.ok_or_else(|| RunError::Domain("the algebra has no Maltsev term".into()))
}

fn parse_op(s: &str) -> Res<AffinityOp> {
    let inner = s.trim().trim_start_matches('<').trim_end_matches('>');
    let parts: Vec<usize> = inner
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| RunError::Usage(format!("bad affinity operation `{s}`; expected <m,r1,..,rn>"))))
        .collect::<Res<_>>()?;
    let (&m, r) = parts.split_first().ok_or_else(|| RunError::Usage(format!("empty affinity operation `{s}`")))?;
    Ok(AffinityOp::new(m, r.to_vec()))
}

fn parse_pair(s: &str) -> Res<(usize, usize)> {
    let bad = || RunError::Usage(format!("bad pair `{s}`; expected a,b"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn extension(doc: &SpecDocument, a: &ExtArg) -> Res<(String, MonoidExtension)> {
    if let Some(sys) = &a.system {
        return trivial_of(doc, Some(sys));
    }
    match pick(doc, a.extension.as_deref(), "extension") {
        Ok((n, Entity::Extension(e))) => Ok((n.to_string(), e.clone())),
        Ok(_) => unreachable!("kind checked"),
        Err(e) if a.extension.is_some() => Err(e),
        Err(_) => trivial_of(doc, None),
    }
}

fn trivial_of(doc: &SpecDocument, name: Option<&str>) -> Res<(String, MonoidExtension)> {
    match pick(doc, name, "natsys")? {
        (n, Entity::NatSys { monoid, system }) => {
            let m = match doc.get(monoid) {
                Some(Entity::Monoid(m)) => m,
                _ => unreachable!("resolved at load time"),
            };
            Ok((format!("{monoid} ⋊ {n}"), trivial_extension(m, system)?))
        }
        _ => unreachable!("kind checked"),
    }
}

fn ext_json(name: &str, ext: &MonoidExtension) -> Value {
    json!({
        "name": name,
        "size": ext.total.size,
        "unit": ext.total.unit,
        "mul": ext.total.mul,
        "proj": ext.proj,
        "fibers": ext.fibers,
        "action": ext.action,
    })
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

/// Runs one verb against its files.
pub fn run(cli: &Cli) -> Res<Value> {
    let clone_budget = cli.budget.unwrap_or(DEFAULT_CLONE_BUDGET);
    let der_budget = cli.budget.unwrap_or(DEFAULT_DER_BUDGET);
    Ok(match &cli.verb {
        Verb::Check(files) => {
            let doc = load(files)?;
            let list: Vec<Value> = doc.iter().map(|(n, e)| json!({"name": n, "kind": e.kind()})).collect();
            json!({"entities": list})
        }
        Verb::Fmt(files) => json!({"canonical": load(files)?.serialize()}),
        Verb::Product { src, algs } => {
            let doc = load(src)?;
            let parts = algs.iter().map(|n| algebra(&doc, Some(n)).map(|(_, a)| a.clone())).collect::<Res<Vec<_>>>()?;
            let p = product(&parts)?;
            json!({"size": p.size, "ops": to_json(&p.ops)})
        }
        Verb::Subuniverse { a, gens } => {
            let doc = load(&a.src)?;
            let (_, alg) = algebra(&doc, a.alg.as_deref())?;
            if let Some(g) = gens.iter().find(|&&g| g >= alg.size) {
                return Err(RunError::Usage(format!("generator {g} is outside the carrier")));
            }
            json!({"generators": gens, "subuniverse": subuniverse_generate(alg, gens)})
        }
        Verb::Quotient { src, cong } => {
            let doc = load(src)?;
            let (alg_name, theta) = match pick(&doc, Some(cong), "cong")? {
                (_, Entity::Cong { alg, theta }) => (alg.as_str(), theta),
                _ => unreachable!("kind checked"),
            };
            let (_, alg) = algebra(&doc, Some(alg_name))?;
            let (q, map) = quotient(alg, theta)?;
            json!({"size": q.size, "ops": to_json(&q.ops), "map": map, "blocks": blocks(theta)})
        }
        Verb::Clone { a, arity } => {
            let doc = load(&a.src)?;
            let (_, alg) = algebra(&doc, a.alg.as_deref())?;
            let c = term_clone(alg, *arity, clone_budget)?;
            let terms: Vec<Option<String>> = c.members.iter().map(|m| m.witness.as_ref().map(|t| t.to_string())).collect();
            json!({"arity": arity, "size": c.len(), "terms": terms})
        }
        Verb::Hom { src, source, target, map } => {
            let doc = load(src)?;
            let (_, s) = algebra(&doc, Some(source))?;
            let (_, t) = algebra(&doc, Some(target))?;
            if map.len() != s.size || map.iter().any(|&v| v >= t.size) {
                return Err(RunError::Usage(format!("map must list {} elements of the target", s.size)));
            }
            let h = Homomorphism::new(s, t, map.clone());
            let witness = h.violation().map(|(op, args)| json!({"op": op, "args": args}));
            json!({"homomorphism": is_homomorphism(&h), "witness": witness})
        }
        Verb::Cg { a, pairs } => {
            let doc = load(&a.src)?;
            let (_, alg) = algebra(&doc, a.alg.as_deref())?;
            let pairs = pairs.iter().map(|p| parse_pair(p)).collect::<Res<Vec<_>>>()?;
            if pairs.iter().any(|&(x, y)| x >= alg.size || y >= alg.size) {
                return Err(RunError::Usage("pair element outside the carrier".into()));
            }
            json!({"blocks": blocks(&cg(alg, &pairs))})
        }
        Verb::Lattice { a, cap } => {
            let doc = load(&a.src)?;
            let (_, alg) = algebra(&doc, a.alg.as_deref())?;
            let lat = all_congruences(alg, clone_budget, *cap)?;
            json!({"size": lat.len(), "congruences": lat.iter().map(blocks).collect::<Vec<_>>()})
        }
        Verb::MaltsevTerm(a) => {
            let doc = load(&a.src)?;
            let (_, alg) = algebra(&doc, a.alg.as_deref())?;
            match find_maltsev_term(alg, clone_budget) {
                Ok(Some(p)) => json!({
                    "found": true,
                    "complete": false,
                    "term": p.witness.as_ref().map(|t| t.to_string()),
                    "table": p.table,
                }),
                Ok(None) => json!({"found": false, "complete": true}),
                Err(e) => return Err(e.into()),
            }
        }
        Verb::TorsorCheck(t) => {
            let doc = load(&t.src)?;
            let m = tern(&doc, t.tern.as_deref())?;
            let maltsev = maltsev_witness(m)?;
            let assoc = associativity_witness(m)?;
            let comm = commutativity_witness(m)?;
            let asmal = asmal_witness(m)?;
            json!({
                "domain": to_json(&m.domain),
                "total": m.is_total(),
                "maltsev": maltsev.is_none(),
                "maltsev_witness": maltsev,
                "associative": assoc.is_none(),
                "associativity_witness": assoc,
                "commutative": comm.is_none(),
                "commutativity_witness": comm,
                "asmal": asmal.is_none(),
                "asmal_witness": asmal,
                "herd": maltsev.is_none() && assoc.is_none(),
            })
        }
        Verb::TorsorGroup { t, require_commutative } => {
            let doc = load(&t.src)?;
            let m = tern(&doc, t.tern.as_deref())?;
            let g = torsor_to_group(m, *require_commutative)?;
            json!({
                "order": g.order,
                "zero": g.zero,
                "add": g.add,
                "neg": g.neg,
                "action": g.action,
                "reps": g.reps,
                "abelian": g.is_abelian(),
            })
        }
        Verb::CentralCheck { t, alg } => {
            let doc = load(&t.src)?;
            let m = tern(&doc, t.tern.as_deref())?;
            let p = match &m.domain {
                Domain::Mixed(p) => p.clone(),
                _ => return Err(RunError::Usage("central-check needs a table declared `over mixed [..]`".into())),
            };
            let structure = match alg {
                Some(n) => Some(algebra(&doc, Some(n))?.1),
                None => None,
            };
            let r = central_torsor_check(&p, m, structure)?;
            json!({
                "central": r.central,
                "witness": r.witness,
                "group_order": r.group.as_ref().map(|g| g.order),
                "group_add": r.group.as_ref().map(|g| g.add.clone()),
            })
        }
        Verb::Centralize(p) => {
            let doc = load(&p.a.src)?;
            let (alg, r, s) = pair(&doc, p)?;
            let term = maltsev_term(alg, clone_budget)?;
            let w = centrality_witness(alg, &r, &s, &term)?;
            json!({"centralize": w.is_none(), "witness": w})
        }
        Verb::Commutator { pair: p, oracle } => {
            let doc = load(&p.a.src)?;
            let (alg, r, s) = pair(&doc, p)?;
            let term = maltsev_term(alg, clone_budget)?;
            let c = commutator(alg, &r, &s, &term)?;
            let mut out = json!({"R": blocks(&r), "S": blocks(&s), "commutator": blocks(&c)});
            if *oracle {
                let o = commutator_oracle(alg, &r, &s, &term, clone_budget, DEFAULT_LATTICE_SIZE_CAP)?;
                out["oracle"] = blocks(&o);
                out["agree"] = json!(o == c);
            }
            out
        }
        Verb::Center(a) => {
            let doc = load(&a.src)?;
            let (_, alg) = algebra(&doc, a.alg.as_deref())?;
            let term = maltsev_term(alg, clone_budget)?;
            json!({"center": blocks(&center(alg, &term)?)})
        }
        Verb::Nilpotence { a, max } => {
            let doc = load(&a.src)?;
            let (_, alg) = algebra(&doc, a.alg.as_deref())?;
            let term = maltsev_term(alg, clone_budget)?;
            let steps = max.unwrap_or(alg.size);
            let lower = lower_series(alg, &term, steps)?;
            let upper = upper_series(alg, &term, steps)?;
            if lower.class != upper.class && lower.stabilized && upper.stabilized {
                return Err(mk_core::Error::Internal(format!(
                    "lower class {:?} and upper class {:?} disagree",
                    lower.class, upper.class
                ))
                .into());
            }
            json!({
                "class": lower.class,
                "nilpotent": lower.class.is_some(),
                "abelian": is_abelian(alg, &term)?,
                "lower": lower.terms.iter().map(blocks).collect::<Vec<_>>(),
                "upper": upper.terms.iter().map(blocks).collect::<Vec<_>>(),
                "stabilized": lower.stabilized && upper.stabilized,
            })
        }
        Verb::AffinityCompose { f, outer, inners } => {
            let doc = load(&f.src)?;
            let (_, form) = form(&doc, f.form.as_deref())?;
            let outer = parse_op(outer)?;
            let inners = inners.iter().map(|s| parse_op(s)).collect::<Res<Vec<_>>>()?;
            outer.validate(form)?;
            for op in &inners {
                op.validate(form)?;
            }
            let c = compose_affinity(&outer, &inners, form)?;
            json!({
                "outer": outer.to_string(),
                "inners": inners.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
                "result": c.to_string(),
                "m": c.m,
                "r": c.r,
                "maltsev": c.arity() == 3 && is_maltsev_op(form, &c)?,
            })
        }
        Verb::Abelianize(a) => {
            let doc = load(&a.src)?;
            let (_, alg) = algebra(&doc, a.alg.as_deref())?;
            let term = maltsev_term(alg, clone_budget)?;
            let ab = abelianize(alg, &term, clone_budget)?;
            json!({
                "ring": {"size": ab.form.ring.size, "add": ab.form.ring.add, "mul": ab.form.ring.mul, "one": ab.form.ring.one},
                "module": {"size": ab.form.module.size, "add": ab.form.module.add, "act": ab.form.module.act},
                "d": ab.form.d,
                "unary": ab.unary.iter().map(|t| t.witness.as_ref().map(|w| w.to_string())).collect::<Vec<_>>(),
                "convex": ab.convex.iter().map(|t| t.witness.as_ref().map(|w| w.to_string())).collect::<Vec<_>>(),
            })
        }
        Verb::Roundtrip { f, arity } => {
            let doc = load(&f.src)?;
            let (_, form) = form(&doc, f.form.as_deref())?;
            to_json(&roundtrip_check(form, *arity, clone_budget)?)
        }
        Verb::Derivations { f, bim } => {
            let doc = load(&f.src)?;
            let (bim_form, bim) = match pick(&doc, bim.as_deref(), "dbimodule")? {
                (_, Entity::DBimodule { form, bim }) => (form.as_str(), bim),
                _ => unreachable!("kind checked"),
            };
            let (fname, form) = form(&doc, f.form.as_deref().or(Some(bim_form)))?;
            if fname != bim_form {
                return Err(RunError::Usage(format!("the bimodule is declared for `{bim_form}`, not `{fname}`")));
            }
            let r = enumerate_derivations(form, bim, der_budget)?;
            json!({
                "der": r.der.len(),
                "ider": r.ider.len(),
                "k": bim.k.size,
                "h0": r.h0,
                "h0_order": r.h0.len(),
                "h1_order": r.h1_order,
                "ker_ad": r.ker_ad,
                "identity_holds": r.identity_holds,
                "derivations": to_json(&r.der),
            })
        }
        Verb::Crext(d) => {
            let doc = load(&d.src)?;
            let dia = diagram(&doc, d.diagram.as_deref())?;
            let r = crext_check(dia)?;
            json!({
                "torsor": r.torsor,
                "witness": r.witness,
                "b_elements": r.b_elements,
                "k_elements": r.k_elements,
                "bimodule": r.bimodule.as_ref().map(|b| json!({
                    "b_size": b.b.size,
                    "k_size": b.k.size,
                    "delta": b.delta,
                    "dot": b.dot,
                    "left": b.b.left,
                    "right": b.b.right,
                })),
            })
        }
        Verb::Lift { d, op, preimage } => {
            let doc = load(&d.src)?;
            let dia = diagram(&doc, d.diagram.as_deref())?;
            let base_op = match op {
                Some(s) => parse_op(s)?,
                None => AffinityOp::canonical_maltsev(&dia.base),
            };
            let pre = preimage.as_deref().map(parse_op).transpose()?;
            let r = lift_maltsev(dia, &base_op, pre)?;
            json!({
                "base": base_op.to_string(),
                "preimage": r.preimage.to_string(),
                "preimage_maltsev": r.preimage_maltsev,
                "lifted": r.lifted.to_string(),
                "lifted_maltsev": r.lifted_maltsev,
                "carrier_maltsev": r.carrier_maltsev,
                "projects_to_base": r.projects_to_base,
            })
        }
        Verb::Constants { f, bound } => {
            let doc = load(&f.src)?;
            let (_, form) = form(&doc, f.form.as_deref())?;
            to_json(&compare_with_constants(form, *bound)?)
        }
        Verb::TrivialExt { src, system } => {
            let doc = load(src)?;
            let (name, ext) = trivial_of(&doc, system.as_deref())?;
            ext_json(&name, &ext)
        }
        Verb::LinExtCheck(a) => {
            let doc = load(&a.src)?;
            let (name, ext) = extension(&doc, a)?;
            let r = check_linear_extension(&ext);
            json!({"extension": name, "linear": r.linear, "witness": r.witness})
        }
        Verb::UntwistedCheck(a) => {
            let doc = load(&a.src)?;
            let (name, ext) = extension(&doc, a)?;
            match check_untwisted(&ext)? {
                Some(fam) => json!({"extension": name, "untwisted": true, "theta": fam.theta}),
                None => json!({"extension": name, "untwisted": false, "theta": null}),
            }
        }
        Verb::Counterexample => to_json(&counterexample_harness()?),
    })
}

fn tern<'a>(doc: &'a SpecDocument, name: Option<&str>) -> Res<&'a mk_core::TernaryTable> {
    match pick(doc, name, "tern")? {
        (_, Entity::Tern(t)) => Ok(t),
        _ => unreachable!("kind checked"),
    }
}

fn diagram<'a>(doc: &'a SpecDocument, name: Option<&str>) -> Res<&'a mk_core::DiagramE> {
    match pick(doc, name, "diagram")? {
        (_, Entity::Diagram(d)) => Ok(d),
        _ => unreachable!("kind checked"),
    }
}
