//! Resolves declarations into validated structures.

use std::collections::BTreeMap;

use mk_core::{
    AbGroup, Bimodule, Congruence, DBimodule, DiagramE, Domain, Error, FiniteAlgebra, FiniteMonoid, FiniteRing,
    LeftModule, LinearForm, MonoidExtension, NaturalSystem, Operation, TernaryTable,
};

use crate::diag::{Code, Diagnostic, Pos};
use crate::doc::{parse_decls, serialize_decls, At, Body, Decl, GroupDecl, List, Over};

/// A validated entity.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Entity {
    Algebra(FiniteAlgebra),
    Cong { alg: String, theta: Congruence },
    Tern(TernaryTable),
    Ring(FiniteRing),
    Module(LeftModule),
    Form(LinearForm),
    Bimodule(Bimodule),
    DBimodule { form: String, bim: DBimodule },
    Diagram(DiagramE),
    Monoid(FiniteMonoid),
    NatSys { monoid: String, system: NaturalSystem },
    Extension(MonoidExtension),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Algebra(_) => "algebra",
            Entity::Cong { .. } => "cong",
            Entity::Tern(_) => "tern",
            Entity::Ring(_) => "ring",
            Entity::Module(_) => "module",
            Entity::Form(_) => "form",
            Entity::Bimodule(_) => "bimodule",
            Entity::DBimodule { .. } => "dbimodule",
            Entity::Diagram(_) => "diagram",
            Entity::Monoid(_) => "monoid",
            Entity::NatSys { .. } => "natsys",
            Entity::Extension(_) => "extension",
        }
    }
}

/// Named entities parsed from one or more files. Equality compares the
/// declarations only.
#[derive(Clone, Debug, Default)]
pub struct SpecDocument {
    pub decls: Vec<Decl>,
    entities: BTreeMap<String, Entity>,
    order: Vec<String>,
}

impl PartialEq for SpecDocument {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self, Diagnostic> {
        let mut doc = SpecDocument::default();
        doc.extend(text)?;
        Ok(doc)
    }

    /// Adds the declarations of another file; names stay unique across
    /// files and references may point into earlier files.
    pub fn extend(&mut self, text: &str) -> Result<(), Diagnostic> {
        for decl in parse_decls(text)? {
            self.add(decl)?;
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        serialize_decls(&self.decls)
    }

    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entities.get(name)
    }

    /// Entity names in declaration order.
    pub fn names(&self) -> &[String] {
        &self.order
    }

    /// Entities in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Entity)> {
        self.order.iter().map(|n| (n.as_str(), &self.entities[n]))
    }

    fn add(&mut self, decl: Decl) -> Result<(), Diagnostic> {
        let name = &decl.name;
        if self.entities.contains_key(&name.v) {
            return Err(Diagnostic::new(Code::Duplicate, name.pos, format!("`{}` is already declared", name.v)));
        }
        let entity = self.build(&decl)?;
        self.entities.insert(name.v.clone(), entity);
        self.order.push(name.v.clone());
        self.decls.push(decl);
        Ok(())
    }

    fn lookup(&self, r: &At<String>, kind: &str) -> Result<&Entity, Diagnostic> {
        match self.entities.get(&r.v) {
            Some(e) if e.kind() == kind => Ok(e),
            Some(e) => Err(Diagnostic::new(Code::Dangling, r.pos, format!("`{}` is a {}, expected a {kind}", r.v, e.kind()))),
            None => Err(Diagnostic::new(Code::Dangling, r.pos, format!("no {kind} named `{}` declared before this point", r.v))),
        }
    }

    fn ring(&self, r: &At<String>) -> Result<&FiniteRing, Diagnostic> {
        match self.lookup(r, "ring")? {
            Entity::Ring(x) => Ok(x),
            _ => unreachable!("kind checked"),
        }
    }

    fn module(&self, r: &At<String>) -> Result<&LeftModule, Diagnostic> {
        match self.lookup(r, "module")? {
            Entity::Module(x) => Ok(x),
            _ => unreachable!("kind checked"),
        }
    }

    fn form(&self, r: &At<String>) -> Result<&LinearForm, Diagnostic> {
        match self.lookup(r, "form")? {
            Entity::Form(x) => Ok(x),
            _ => unreachable!("kind checked"),
        }
    }

    fn monoid(&self, r: &At<String>) -> Result<&FiniteMonoid, Diagnostic> {
        match self.lookup(r, "monoid")? {
            Entity::Monoid(x) => Ok(x),
            _ => unreachable!("kind checked"),
        }
    }

    fn build(&self, decl: &Decl) -> Result<Entity, Diagnostic> {
        let at = decl.name.pos;
        Ok(match &decl.body {
            Body::Algebra { size, ops } => {
                let mut seen = BTreeMap::new();
                let mut built = Vec::new();
                for op in ops {
                    if seen.insert(op.name.v.clone(), ()).is_some() {
                        return Err(Diagnostic::new(Code::Duplicate, op.name.pos, format!("operation `{}` declared twice", op.name.v)));
                    }
                    let len = size.checked_pow(op.arity as u32).ok_or_else(|| {
                        Diagnostic::new(Code::TableLen, op.table.pos, format!("{size}^{} entries is too large", op.arity))
                    })?;
                    shape(&op.table, len, *size, &format!("operation `{}`", op.name.v))?;
                    built.push(Operation::new(op.name.v.clone(), op.arity, op.table.v.clone()));
                }
                Entity::Algebra(FiniteAlgebra::new(*size, built).map_err(|e| invariant(at, e))?)
            }
            Body::Cong { alg, blocks } => {
                let a = match self.lookup(alg, "algebra")? {
                    Entity::Algebra(a) => a,
                    _ => unreachable!("kind checked"),
                };
                let mut seen = vec![false; a.size];
                for &x in blocks.v.iter().flatten() {
                    if x >= a.size {
                        return Err(Diagnostic::new(Code::Range, blocks.pos, format!("element {x} is outside a carrier of size {}", a.size)));
                    }
                    if std::mem::replace(&mut seen[x], true) {
                        return Err(Diagnostic::new(Code::Duplicate, blocks.pos, format!("element {x} appears in two blocks")));
                    }
                }
                let mut all = blocks.v.clone();
                all.extend((0..a.size).filter(|&x| !seen[x]).map(|x| vec![x]));
                let theta = Congruence::from_blocks(a.size, &all).map_err(|e| invariant(blocks.pos, e))?;
                if let Some(w) = theta.compatibility_witness(a) {
                    return Err(Diagnostic::new(Code::Invariant, blocks.pos, format!("partition is not a congruence: {w}")));
                }
                Entity::Cong { alg: alg.v.clone(), theta }
            }
            Body::Tern { size, over, entries } => {
                let n = *size;
                let domain = match over {
                    None => Domain::Full,
                    Some((kind, p)) => {
                        if p.v.len() != n {
                            return Err(Diagnostic::new(Code::TableLen, p.pos, format!("base map has {} entries, expected {n}", p.v.len())));
                        }
                        match kind {
                            Over::Fibered => Domain::Fibered(p.v.clone()),
                            Over::Mixed => Domain::Mixed(p.v.clone()),
                        }
                    }
                };
                let mut t = TernaryTable::empty(n, domain);
                for e in entries {
                    let [x, y, z, v] = e.v;
                    if [x, y, z, v].iter().any(|&c| c >= n) {
                        return Err(Diagnostic::new(Code::Range, e.pos, format!("entry {x} {y} {z} -> {v} leaves a carrier of size {n}")));
                    }
                    if !t.in_domain(x, y, z) {
                        return Err(Diagnostic::new(Code::Range, e.pos, format!("triple ({x},{y},{z}) lies outside the declared domain")));
                    }
                    if t.get(x, y, z).is_ok() {
                        return Err(Diagnostic::new(Code::Duplicate, e.pos, format!("triple ({x},{y},{z}) given twice")));
                    }
                    t.set(x, y, z, v).map_err(|err| invariant(e.pos, err))?;
                }
                t.validate().map_err(|e| invariant(at, e))?;
                Entity::Tern(t)
            }
            Body::Ring { size, add, mul } => {
                shape(add, size * size, *size, "add")?;
                shape(mul, size * size, *size, "mul")?;
                Entity::Ring(FiniteRing::from_tables(*size, add.v.clone(), mul.v.clone()).map_err(|e| invariant(at, e))?)
            }
            Body::Module { ring, size, add, act } => {
                let r = self.ring(ring)?;
                shape(add, size * size, *size, "add")?;
                shape(act, r.size * size, *size, "act")?;
                Entity::Module(LeftModule::from_tables(r, *size, add.v.clone(), act.v.clone()).map_err(|e| invariant(at, e))?)
            }
            Body::Form { module, d } => {
                let m = match module {
                    Some(m) => self.module(m)?,
                    None => self
                        .iter()
                        .filter_map(|(_, e)| match e {
                            Entity::Module(m) => Some(m),
                            _ => None,
                        })
                        .last()
                        .ok_or_else(|| Diagnostic::new(Code::Dangling, at, "no module declared before this form"))?,
                };
                shape(d, m.size, m.ring.size, "d")?;
                Entity::Form(LinearForm::new(m.ring.clone(), m.clone(), d.v.clone()).map_err(|e| invariant(at, e))?)
            }
            Body::Bimodule { ring, size, add, left, right } => {
                let r = self.ring(ring)?;
                shape(add, size * size, *size, "add")?;
                shape(left, r.size * size, *size, "left")?;
                shape(right, size * r.size, *size, "right")?;
                Entity::Bimodule(
                    Bimodule::from_tables(r, *size, add.v.clone(), left.v.clone(), right.v.clone()).map_err(|e| invariant(at, e))?,
                )
            }
            Body::DBimodule { form, b, k, delta, dot } => {
                let f = self.form(form)?;
                let bm = match self.lookup(b, "bimodule")? {
                    Entity::Bimodule(x) => x,
                    _ => unreachable!("kind checked"),
                };
                let km = self.module(k)?;
                shape(delta, km.size, bm.size, "delta")?;
                shape(dot, bm.size * f.module.size, km.size, "dot")?;
                let bim =
                    DBimodule::new(f, bm.clone(), km.clone(), delta.v.clone(), dot.v.clone()).map_err(|e| invariant(at, e))?;
                Entity::DBimodule { form: form.v.clone(), bim }
            }
            Body::Diagram { total, base, p, q } => {
                let (t, b) = (self.form(total)?, self.form(base)?);
                shape(p, t.ring.size, b.ring.size, "p")?;
                shape(q, t.module.size, b.module.size, "q")?;
                Entity::Diagram(DiagramE::new(t.clone(), b.clone(), p.v.clone(), q.v.clone()).map_err(|e| invariant(at, e))?)
            }
            Body::Monoid { size, unit, mul } => {
                shape(mul, size * size, *size, "mul")?;
                if unit.v >= *size {
                    return Err(Diagnostic::new(Code::Range, unit.pos, format!("unit {} is outside a carrier of size {size}", unit.v)));
                }
                Entity::Monoid(FiniteMonoid::new(*size, mul.v.clone(), unit.v).map_err(|e| invariant(at, e))?)
            }
            Body::NatSys { monoid, constant, groups, left, right } => {
                let m = self.monoid(monoid)?;
                let system = self.natsys(m, at, constant.as_ref(), groups, left, right)?;
                Entity::NatSys { monoid: monoid.v.clone(), system }
            }
            Body::Extension { total, base, proj, system, actions } => {
                let (t, b) = (self.monoid(total)?, self.monoid(base)?);
                let sys = match self.lookup(system, "natsys")? {
                    Entity::NatSys { monoid, system: s } => {
                        if *monoid != base.v {
                            return Err(Diagnostic::new(Code::Invariant, system.pos, format!("`{}` is over `{monoid}`, not the base `{}`", system.v, base.v)));
                        }
                        s
                    }
                    _ => unreachable!("kind checked"),
                };
                shape(proj, t.size, b.size, "proj")?;
                let mut action: Vec<Option<Vec<usize>>> = vec![None; b.size];
                for (x, table) in actions {
                    if x.v >= b.size {
                        return Err(Diagnostic::new(Code::Range, x.pos, format!("base element {} is outside a carrier of size {}", x.v, b.size)));
                    }
                    if action[x.v].replace(table.v.clone()).is_some() {
                        return Err(Diagnostic::new(Code::Duplicate, x.pos, format!("action of element {} given twice", x.v)));
                    }
                    let fiber = proj.v.iter().filter(|&&y| y == x.v).count();
                    shape(table, sys.groups[x.v].size * fiber, t.size, "action")?;
                }
                let action = action
                    .into_iter()
                    .enumerate()
                    .map(|(x, a)| a.ok_or_else(|| Diagnostic::new(Code::Invariant, at, format!("missing action of D_{x}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                Entity::Extension(
                    MonoidExtension::new(t.clone(), b.clone(), proj.v.clone(), sys.clone(), action).map_err(|e| invariant(at, e))?,
                )
            }
        })
    }

    fn natsys(
        &self,
        m: &FiniteMonoid,
        at: Pos,
        constant: Option<&GroupDecl>,
        groups: &[GroupDecl],
        left: &[crate::doc::MapDecl],
        right: &[crate::doc::MapDecl],
    ) -> Result<NaturalSystem, Diagnostic> {
        let n = m.size;
        let group = |g: &GroupDecl| -> Result<AbGroup, Diagnostic> {
            shape(&g.add, g.size * g.size, g.size, "add")?;
            AbGroup::from_table(g.size, g.add.v.clone()).map_err(|e| invariant(g.add.pos, e))
        };
        if let Some(g) = constant {
            if let Some(extra) = groups.first().map(|g| g.index.pos).or(left.first().map(|l| l.x.pos)).or(right.first().map(|r| r.x.pos)) {
                return Err(Diagnostic::new(Code::Syntax, extra, "a constant system takes no further groups or maps"));
            }
            return NaturalSystem::constant(m, &group(g)?).map_err(|e| invariant(at, e));
        }
        let mut gs: Vec<Option<AbGroup>> = vec![None; n];
        for g in groups {
            if g.index.v >= n {
                return Err(Diagnostic::new(Code::Range, g.index.pos, format!("element {} is outside a monoid of size {n}", g.index.v)));
            }
            if gs[g.index.v].replace(group(g)?).is_some() {
                return Err(Diagnostic::new(Code::Duplicate, g.index.pos, format!("group D_{} given twice", g.index.v)));
            }
        }
        let gs = gs
            .into_iter()
            .enumerate()
            .map(|(x, g)| g.ok_or_else(|| Diagnostic::new(Code::Invariant, at, format!("missing group D_{x}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let maps = |decls: &[crate::doc::MapDecl], is_left: bool| -> Result<Vec<Vec<usize>>, Diagnostic> {
            let mut out: Vec<Option<Vec<usize>>> = vec![None; n * n];
            for d in decls {
                for c in [&d.x, &d.y] {
                    if c.v >= n {
                        return Err(Diagnostic::new(Code::Range, c.pos, format!("element {} is outside a monoid of size {n}", c.v)));
                    }
                }
                let (src, dst) = (if is_left { d.y.v } else { d.x.v }, m.times(d.x.v, d.y.v));
                shape(&d.table, gs[src].size, gs[dst].size, if is_left { "left" } else { "right" })?;
                if out[d.x.v * n + d.y.v].replace(d.table.v.clone()).is_some() {
                    return Err(Diagnostic::new(Code::Duplicate, d.x.pos, format!("map for ({}, {}) given twice", d.x.v, d.y.v)));
                }
            }
            out.into_iter()
                .enumerate()
                .map(|(i, t)| {
                    t.ok_or_else(|| {
                        let side = if is_left { "left" } else { "right" };
                        Diagnostic::new(Code::Invariant, at, format!("missing {side} map for ({}, {})", i / n, i % n))
                    })
                })
                .collect()
        };
        let (left, right) = (maps(left, true)?, maps(right, false)?);
        NaturalSystem::new(m, gs, left, right).map_err(|e| invariant(at, e))
    }
}

/// Checks length and entry range of a table.
fn shape(t: &List, len: usize, bound: usize, what: &str) -> Result<(), Diagnostic> {
    if t.v.len() != len {
        return Err(Diagnostic::new(Code::TableLen, t.pos, format!("{what} table has {} entries, expected {len}", t.v.len())));
    }
    if let Some(v) = t.v.iter().find(|&&v| v >= bound) {
        return Err(Diagnostic::new(Code::Range, t.pos, format!("{what} table entry {v} is outside 0..{bound}")));
    }
    Ok(())
}

fn invariant(pos: Pos, e: Error) -> Diagnostic {
    Diagnostic::new(Code::Invariant, pos, e.to_string())
}
