//! Raw declarations, their recursive-descent parser and the canonical
//! serializer. Values keep their source position; equality ignores it.

use std::fmt::{self, Write as _};

use crate::diag::{Code, Diagnostic, Pos};
use crate::lexer::{tokenize, Tok, Token};

/// A value with the position it was read from.
#[derive(Clone, Debug, Default)]
pub struct At<T> {
    pub v: T,
    pub pos: Pos,
}

impl<T> At<T> {
    pub fn new(v: T, pos: Pos) -> Self {
        At { v, pos }
    }
}

impl<T: PartialEq> PartialEq for At<T> {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl<T: Eq> Eq for At<T> {}

pub type List = At<Vec<usize>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpDecl {
    pub name: At<String>,
    pub arity: usize,
    pub table: List,
}

/// How a ternary table's base map restricts its domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Over {
    Fibered,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDecl {
    pub index: At<usize>,
    pub size: usize,
    pub add: List,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub x: At<usize>,
    pub y: At<usize>,
    pub table: List,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Algebra { size: usize, ops: Vec<OpDecl> },
    Cong { alg: At<String>, blocks: At<Vec<Vec<usize>>> },
    Tern { size: usize, over: Option<(Over, List)>, entries: Vec<At<[usize; 4]>> },
    Ring { size: usize, add: List, mul: List },
    Module { ring: At<String>, size: usize, add: List, act: List },
    Form { module: Option<At<String>>, d: List },
    Bimodule { ring: At<String>, size: usize, add: List, left: List, right: List },
    DBimodule { form: At<String>, b: At<String>, k: At<String>, delta: List, dot: List },
    Diagram { total: At<String>, base: At<String>, p: List, q: List },
    Monoid { size: usize, unit: At<usize>, mul: List },
    NatSys { monoid: At<String>, constant: Option<GroupDecl>, groups: Vec<GroupDecl>, left: Vec<MapDecl>, right: Vec<MapDecl> },
    Extension { total: At<String>, base: At<String>, proj: List, system: At<String>, actions: Vec<(At<usize>, List)> },
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Algebra { .. } => "algebra",
            Body::Cong { .. } => "cong",
            Body::Tern { .. } => "tern",
            Body::Ring { .. } => "ring",
            Body::Module { .. } => "module",
            Body::Form { .. } => "form",
            Body::Bimodule { .. } => "bimodule",
            Body::DBimodule { .. } => "dbimodule",
            Body::Diagram { .. } => "diagram",
            Body::Monoid { .. } => "monoid",
            Body::NatSys { .. } => "natsys",
            Body::Extension { .. } => "extension",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: At<String>,
    pub body: Body,
}

/// Parses declarations without resolving references.
pub fn parse_decls(text: &str) -> Result<Vec<Decl>, Diagnostic> {
    let toks = tokenize(text)?;
    let end = toks.last().map_or(Pos { line: 1, col: 1 }, |t| Pos { line: t.pos.line, col: t.pos.col + 1 });
    let mut p = Parser { toks: &toks, i: 0, end };
    let mut out = Vec::new();
    while p.i < toks.len() {
        out.push(p.decl()?);
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Token],
    i: usize,
    end: Pos,
}

fn syntax(pos: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(Code::Syntax, pos, msg)
}

fn describe(t: Option<&Token>) -> String {
    match t.map(|t| &t.tok) {
        None => "end of input".into(),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(Tok::Int(v)) => format!("`{v}`"),
        Some(Tok::Sym(s)) => format!("`{s}`"),
    }
}

fn set<T>(slot: &mut Option<T>, v: T, key: &At<String>) -> Result<(), Diagnostic> {
    if slot.is_some() {
        return Err(Diagnostic::new(Code::Duplicate, key.pos, format!("field `{}` given twice", key.v)));
    }
    *slot = Some(v);
    Ok(())
}

fn need<T>(slot: Option<T>, field: &str, name: &At<String>) -> Result<T, Diagnostic> {
    slot.ok_or_else(|| syntax(name.pos, format!("`{}` is missing field `{field}`", name.v)))
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.i)
    }

    fn pos(&self) -> Pos {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        syntax(self.pos(), format!("expected {wanted}, found {}", describe(self.peek())))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(t), .. }) if *t == s)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(t), .. }) if t == kw)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        self.i += usize::from(hit);
        hit
    }

    fn sym(&mut self, s: &str) -> Result<Pos, Diagnostic> {
        let pos = self.pos();
        if self.eat_sym(s) {
            Ok(pos)
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    fn kw(&mut self, kw: &str) -> Result<(), Diagnostic> {
        if self.is_kw(kw) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<At<String>, Diagnostic> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), pos }) => {
                let out = At::new(s.clone(), *pos);
                self.i += 1;
                Ok(out)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn int(&mut self) -> Result<At<usize>, Diagnostic> {
        match self.peek() {
            Some(Token { tok: Tok::Int(v), pos }) => {
                let out = At::new(*v, *pos);
                self.i += 1;
                Ok(out)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn is_int(&self) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Int(_), .. }))
    }

    /// `[a b c]`, commas optional.
    fn list(&mut self) -> Result<List, Diagnostic> {
        let pos = self.sym("[")?;
        let mut v = Vec::new();
        while !self.eat_sym("]") {
            v.push(self.int()?.v);
            self.eat_sym(",");
        }
        Ok(At::new(v, pos))
    }

    /// `= [..]` with the `=` optional.
    fn assigned_list(&mut self) -> Result<List, Diagnostic> {
        self.eat_sym("=");
        self.list()
    }

    fn assigned_int(&mut self) -> Result<At<usize>, Diagnostic> {
        self.eat_sym("=");
        self.int()
    }

    fn decl(&mut self) -> Result<Decl, Diagnostic> {
        let kw = self.ident()?;
        let name = self.ident()?;
        let body = match kw.v.as_str() {
            "algebra" => self.algebra(&name)?,
            "cong" => self.cong(&name)?,
            "tern" => self.tern(&name)?,
            "ring" => self.ring(&name)?,
            "module" => self.module(&name)?,
            "form" => self.form(&name)?,
            "bimodule" => self.bimodule(&name)?,
            "dbimodule" => self.dbimodule(&name)?,
            "diagram" => self.diagram(&name)?,
            "monoid" => self.monoid(&name)?,
            "natsys" => self.natsys(&name)?,
            "extension" => self.extension(&name)?,
            other => return Err(syntax(kw.pos, format!("unknown declaration `{other}`"))),
        };
        Ok(Decl { name, body })
    }

    /// Runs `field` on every `key ...` entry of a `{ ... }` block.
    fn block(&mut self, mut field: impl FnMut(&mut Self, At<String>) -> Result<(), Diagnostic>) -> Result<(), Diagnostic> {
        self.sym("{")?;
        while !self.eat_sym("}") {
            if self.peek().is_none() {
                return Err(self.unexpected("`}`"));
            }
            let key = self.ident()?;
            field(self, key)?;
        }
        Ok(())
    }

    fn algebra(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        let (mut size, mut ops) = (None, Vec::new());
        self.block(|p, key| match key.v.as_str() {
            "size" => set(&mut size, p.int()?.v, &key),
            "op" => {
                let op = p.ident()?;
                p.sym("/")?;
                let arity = p.int()?.v;
                let table = p.assigned_list()?;
                ops.push(OpDecl { name: op, arity, table });
                Ok(())
            }
            _ => Err(syntax(key.pos, format!("unknown algebra field `{}`", key.v))),
        })?;
        Ok(Body::Algebra { size: need(size, "size", name)?, ops })
    }

    fn cong(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        self.kw("on")?;
        let alg = self.ident()?;
        let mut blocks = None;
        self.block(|p, key| match key.v.as_str() {
            "blocks" => {
                p.sym(":")?;
                let pos = p.pos();
                let mut all = vec![Vec::new()];
                while p.is_int() || p.is_sym("|") {
                    if p.eat_sym("|") {
                        all.push(Vec::new());
                    } else {
                        all.last_mut().expect("non-empty").push(p.int()?.v);
                    }
                }
                if all.iter().any(Vec::is_empty) {
                    return Err(syntax(pos, "empty block"));
                }
                set(&mut blocks, At::new(all, pos), &key)
            }
            _ => Err(syntax(key.pos, format!("unknown cong field `{}`", key.v))),
        })?;
        Ok(Body::Cong { alg, blocks: need(blocks, "blocks", name)? })
    }

    fn tern(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        let (mut size, mut over, mut entries) = (None, None, None);
        self.block(|p, key| match key.v.as_str() {
            "size" => set(&mut size, p.int()?.v, &key),
            "over" => {
                let kind = if p.is_kw("mixed") {
                    p.i += 1;
                    Over::Mixed
                } else {
                    Over::Fibered
                };
                let map = p.list()?;
                set(&mut over, (kind, map), &key)
            }
            "table" => {
                p.sym(":")?;
                let mut rows = Vec::new();
                while p.is_int() {
                    let x = p.int()?;
                    let (y, z) = (p.int()?.v, p.int()?.v);
                    p.sym("->")?;
                    let v = p.int()?.v;
                    rows.push(At::new([x.v, y, z, v], x.pos));
                }
                set(&mut entries, rows, &key)
            }
            _ => Err(syntax(key.pos, format!("unknown tern field `{}`", key.v))),
        })?;
        Ok(Body::Tern { size: need(size, "size", name)?, over, entries: entries.unwrap_or_default() })
    }

    fn ring(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        let (mut size, mut add, mut mul) = (None, None, None);
        self.block(|p, key| match key.v.as_str() {
            "size" => set(&mut size, p.int()?.v, &key),
            "add" => set(&mut add, p.assigned_list()?, &key),
            "mul" => set(&mut mul, p.assigned_list()?, &key),
            _ => Err(syntax(key.pos, format!("unknown ring field `{}`", key.v))),
        })?;
        Ok(Body::Ring { size: need(size, "size", name)?, add: need(add, "add", name)?, mul: need(mul, "mul", name)? })
    }

    fn module(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        self.kw("over")?;
        let ring = self.ident()?;
        let (mut size, mut add, mut act) = (None, None, None);
        self.block(|p, key| match key.v.as_str() {
            "size" => set(&mut size, p.int()?.v, &key),
            "add" => set(&mut add, p.assigned_list()?, &key),
            "act" => set(&mut act, p.assigned_list()?, &key),
            _ => Err(syntax(key.pos, format!("unknown module field `{}`", key.v))),
        })?;
        Ok(Body::Module { ring, size: need(size, "size", name)?, add: need(add, "add", name)?, act: need(act, "act", name)? })
    }

    fn form(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        let module = if self.is_kw("on") {
            self.i += 1;
            Some(self.ident()?)
        } else {
            None
        };
        let mut d = None;
        self.block(|p, key| match key.v.as_str() {
            "d" => set(&mut d, p.assigned_list()?, &key),
            _ => Err(syntax(key.pos, format!("unknown form field `{}`", key.v))),
        })?;
        Ok(Body::Form { module, d: need(d, "d", name)? })
    }

    fn bimodule(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        self.kw("over")?;
        let ring = self.ident()?;
        let (mut size, mut add, mut left, mut right) = (None, None, None, None);
        self.block(|p, key| match key.v.as_str() {
            "size" => set(&mut size, p.int()?.v, &key),
            "add" => set(&mut add, p.assigned_list()?, &key),
            "left" => set(&mut left, p.assigned_list()?, &key),
            "right" => set(&mut right, p.assigned_list()?, &key),
            _ => Err(syntax(key.pos, format!("unknown bimodule field `{}`", key.v))),
        })?;
        Ok(Body::Bimodule {
            ring,
            size: need(size, "size", name)?,
            add: need(add, "add", name)?,
            left: need(left, "left", name)?,
            right: need(right, "right", name)?,
        })
    }

    fn dbimodule(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        self.kw("for")?;
        let form = self.ident()?;
        let (mut b, mut k, mut delta, mut dot) = (None, None, None, None);
        self.block(|p, key| match key.v.as_str() {
            "b" => set(&mut b, p.ident()?, &key),
            "k" => set(&mut k, p.ident()?, &key),
            "delta" => set(&mut delta, p.assigned_list()?, &key),
            "dot" => set(&mut dot, p.assigned_list()?, &key),
            _ => Err(syntax(key.pos, format!("unknown dbimodule field `{}`", key.v))),
        })?;
        Ok(Body::DBimodule {
            form,
            b: need(b, "b", name)?,
            k: need(k, "k", name)?,
            delta: need(delta, "delta", name)?,
            dot: need(dot, "dot", name)?,
        })
    }

    fn diagram(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        let (mut total, mut base, mut p_map, mut q_map) = (None, None, None, None);
        self.block(|p, key| match key.v.as_str() {
            "total" => set(&mut total, p.ident()?, &key),
            "base" => set(&mut base, p.ident()?, &key),
            "p" => set(&mut p_map, p.assigned_list()?, &key),
            "q" => set(&mut q_map, p.assigned_list()?, &key),
            _ => Err(syntax(key.pos, format!("unknown diagram field `{}`", key.v))),
        })?;
        Ok(Body::Diagram {
            total: need(total, "total", name)?,
            base: need(base, "base", name)?,
            p: need(p_map, "p", name)?,
            q: need(q_map, "q", name)?,
        })
    }

    fn monoid(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        let (mut size, mut unit, mut mul) = (None, None, None);
        self.block(|p, key| match key.v.as_str() {
            "size" => set(&mut size, p.int()?.v, &key),
            "unit" => set(&mut unit, p.assigned_int()?, &key),
            "mul" => set(&mut mul, p.assigned_list()?, &key),
            _ => Err(syntax(key.pos, format!("unknown monoid field `{}`", key.v))),
        })?;
        Ok(Body::Monoid { size: need(size, "size", name)?, unit: need(unit, "unit", name)?, mul: need(mul, "mul", name)? })
    }

    /// `size N add = [..]`.
    fn group_tail(&mut self, index: At<usize>) -> Result<GroupDecl, Diagnostic> {
        self.kw("size")?;
        let size = self.int()?.v;
        self.kw("add")?;
        let add = self.assigned_list()?;
        Ok(GroupDecl { index, size, add })
    }

    fn natsys(&mut self, _name: &At<String>) -> Result<Body, Diagnostic> {
        self.kw("on")?;
        let monoid = self.ident()?;
        let (mut constant, mut groups, mut left, mut right) = (None, Vec::new(), Vec::new(), Vec::new());
        self.block(|p, key| match key.v.as_str() {
            "constant" => {
                let g = p.group_tail(At::new(0, key.pos))?;
                set(&mut constant, g, &key)
            }
            "group" => {
                let index = p.int()?;
                groups.push(p.group_tail(index)?);
                Ok(())
            }
            "left" | "right" => {
                let (x, y) = (p.int()?, p.int()?);
                let table = p.assigned_list()?;
                let dst = if key.v == "left" { &mut left } else { &mut right };
                dst.push(MapDecl { x, y, table });
                Ok(())
            }
            _ => Err(syntax(key.pos, format!("unknown natsys field `{}`", key.v))),
        })?;
        Ok(Body::NatSys { monoid, constant, groups, left, right })
    }

    fn extension(&mut self, name: &At<String>) -> Result<Body, Diagnostic> {
        let (mut total, mut base, mut proj, mut system, mut actions) = (None, None, None, None, Vec::new());
        self.block(|p, key| match key.v.as_str() {
            "total" => set(&mut total, p.ident()?, &key),
            "base" => set(&mut base, p.ident()?, &key),
            "proj" => set(&mut proj, p.assigned_list()?, &key),
            "system" => set(&mut system, p.ident()?, &key),
            "action" => {
                let b = p.int()?;
                actions.push((b, p.assigned_list()?));
                Ok(())
            }
            _ => Err(syntax(key.pos, format!("unknown extension field `{}`", key.v))),
        })?;
        Ok(Body::Extension {
            total: need(total, "total", name)?,
            base: need(base, "base", name)?,
            proj: need(proj, "proj", name)?,
            system: need(system, "system", name)?,
            actions,
        })
    }
}

struct Ints<'a>(&'a [usize]);

impl fmt::Display for Ints<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Canonical text for a list of declarations; parsing it gives back equal
/// declarations.
pub fn serialize_decls(decls: &[Decl]) -> String {
    let mut out = String::new();
    for (i, d) in decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_decl(&mut out, d).expect("writing to a string");
    }
    out
}

fn write_decl(o: &mut String, d: &Decl) -> fmt::Result {
    let name = &d.name.v;
    match &d.body {
        Body::Algebra { size, ops } => {
            writeln!(o, "algebra {name} {{\n  size {size}")?;
            for op in ops {
                writeln!(o, "  op {}/{} = {}", op.name.v, op.arity, Ints(&op.table.v))?;
            }
        }
        Body::Cong { alg, blocks } => {
            let text: Vec<String> =
                blocks.v.iter().map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).collect();
            writeln!(o, "cong {name} on {} {{\n  blocks: {}", alg.v, text.join(" | "))?;
        }
        Body::Tern { size, over, entries } => {
            writeln!(o, "tern {name} {{\n  size {size}")?;
            match over {
                Some((Over::Fibered, p)) => writeln!(o, "  over {}", Ints(&p.v))?,
                Some((Over::Mixed, p)) => writeln!(o, "  over mixed {}", Ints(&p.v))?,
                None => {}
            }
            writeln!(o, "  table:")?;
            for e in entries {
                let [x, y, z, v] = e.v;
                writeln!(o, "    {x} {y} {z} -> {v}")?;
            }
        }
        Body::Ring { size, add, mul } => {
            writeln!(o, "ring {name} {{\n  size {size}\n  add = {}\n  mul = {}", Ints(&add.v), Ints(&mul.v))?;
        }
        Body::Module { ring, size, add, act } => {
            writeln!(o, "module {name} over {} {{\n  size {size}\n  add = {}\n  act = {}", ring.v, Ints(&add.v), Ints(&act.v))?;
        }
        Body::Form { module, d } => {
            match module {
                Some(m) => writeln!(o, "form {name} on {} {{", m.v)?,
                None => writeln!(o, "form {name} {{")?,
            }
            writeln!(o, "  d = {}", Ints(&d.v))?;
        }
        Body::Bimodule { ring, size, add, left, right } => {
            writeln!(
                o,
                "bimodule {name} over {} {{\n  size {size}\n  add = {}\n  left = {}\n  right = {}",
                ring.v,
                Ints(&add.v),
                Ints(&left.v),
                Ints(&right.v)
            )?;
        }
        Body::DBimodule { form, b, k, delta, dot } => {
            writeln!(
                o,
                "dbimodule {name} for {} {{\n  b {}\n  k {}\n  delta = {}\n  dot = {}",
                form.v,
                b.v,
                k.v,
                Ints(&delta.v),
                Ints(&dot.v)
            )?;
        }
        Body::Diagram { total, base, p, q } => {
            writeln!(o, "diagram {name} {{\n  total {}\n  base {}\n  p = {}\n  q = {}", total.v, base.v, Ints(&p.v), Ints(&q.v))?;
        }
        Body::Monoid { size, unit, mul } => {
            writeln!(o, "monoid {name} {{\n  size {size}\n  unit {}\n  mul = {}", unit.v, Ints(&mul.v))?;
        }
        Body::NatSys { monoid, constant, groups, left, right } => {
            writeln!(o, "natsys {name} on {} {{", monoid.v)?;
            if let Some(g) = constant {
                writeln!(o, "  constant size {} add = {}", g.size, Ints(&g.add.v))?;
            }
            for g in groups {
                writeln!(o, "  group {} size {} add = {}", g.index.v, g.size, Ints(&g.add.v))?;
            }
            for (kw, maps) in [("left", left), ("right", right)] {
                for m in maps {
                    writeln!(o, "  {kw} {} {} = {}", m.x.v, m.y.v, Ints(&m.table.v))?;
                }
            }
        }
        Body::Extension { total, base, proj, system, actions } => {
            writeln!(
                o,
                "extension {name} {{\n  total {}\n  base {}\n  proj = {}\n  system {}",
                total.v,
                base.v,
                Ints(&proj.v),
                system.v
            )?;
            for (b, t) in actions {
                writeln!(o, "  action {} = {}", b.v, Ints(&t.v))?;
            }
        }
    }
    writeln!(o, "}}")
}
