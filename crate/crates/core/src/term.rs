//! Terms, term operations and breadth-first clone generation.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{decode_into, table_len, FiniteAlgebra};
use crate::error::{Error, Result};

/// A term over the operation names of an algebra and variables `x0, x1, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Op(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Self {
        Term::Var(i)
    }

    pub fn op(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::Op(name.into(), args)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Op(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Evaluates the term at a point of `alg^arity`.
    pub fn eval(&self, alg: &FiniteAlgebra, point: &[usize]) -> Result<usize> {
        match self {
            Term::Var(i) => point
                .get(*i)
                .copied()
                .ok_or_else(|| Error::Arity(format!("variable x{i} out of range"))),
            Term::Op(name, args) => {
                let op = alg
                    .op(name)
                    .ok_or_else(|| Error::Signature(format!("unknown operation `{name}`")))?;
                if op.arity != args.len() {
                    return Err(Error::Arity(format!(
                        "`{name}` takes {} arguments, got {}",
                        op.arity,
                        args.len()
                    )));
                }
                let vals = args.iter().map(|t| t.eval(alg, point)).collect::<Result<Vec<_>>>()?;
                Ok(op.apply(alg.size, &vals))
            }
        }
    }

    /// Parses `name(arg, ...)` / `xN` syntax as produced by `Display`.
    pub fn parse(s: &str) -> Result<Term> {
        let mut p = TermParser { s: s.as_bytes(), pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Invalid(format!("trailing input in term at byte {}", p.pos)));
        }
        Ok(t)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Op(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct TermParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Invalid(format!("expected identifier at byte {start}")));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident()?;
        self.skip_ws();
        if self.pos < self.s.len() && self.s[self.pos] == b'(' {
            self.pos += 1;
            let mut args = Vec::new();
            self.skip_ws();
            if self.pos < self.s.len() && self.s[self.pos] == b')' {
                self.pos += 1;
                return Ok(Term::Op(name, args));
            }
            loop {
                args.push(self.term()?);
                self.skip_ws();
                match self.s.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        return Ok(Term::Op(name, args));
                    }
                    _ => return Err(Error::Invalid(format!("expected `,` or `)` at byte {}", self.pos))),
                }
            }
        }
        match name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            Some(i) => Ok(Term::Var(i)),
            None => Err(Error::Invalid(format!("`{name}` is neither a variable nor an application"))),
        }
    }
}

/// A `k`-ary term operation: its table over `alg^k` and a witnessing term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermOp {
    pub arity: usize,
    pub table: Vec<usize>,
    #[serde(serialize_with = "ser_witness")]
    pub witness: Option<Term>,
}

fn ser_witness<S: serde::Serializer>(w: &Option<Term>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(t) => s.serialize_some(&t.to_string()),
        None => s.serialize_none(),
    }
}

impl TermOp {
    /// Tabulates a term over `alg^arity`.
    pub fn from_term(alg: &FiniteAlgebra, arity: usize, term: Term) -> Result<TermOp> {
        let len = table_len(alg.size, arity);
        let mut table = Vec::with_capacity(len);
        let mut point = vec![0; arity];
        for idx in 0..len {
            decode_into(idx, alg.size, &mut point);
            table.push(term.eval(alg, &point)?);
        }
        Ok(TermOp { arity, table, witness: Some(term) })
    }

    pub fn projection(size: usize, arity: usize, i: usize) -> TermOp {
        let len = table_len(size, arity);
        let mut table = Vec::with_capacity(len);
        let mut point = vec![0; arity];
        for idx in 0..len {
            decode_into(idx, size, &mut point);
            table.push(point[i]);
        }
        TermOp { arity, table, witness: Some(Term::Var(i)) }
    }

    #[inline]
    pub fn apply(&self, size: usize, args: &[usize]) -> usize {
        self.table[crate::algebra::encode(args, size)]
    }

    /// The operation induced on a quotient, assuming it is well defined.
    pub fn on_quotient(&self, theta: &crate::congruence::Congruence) -> TermOp {
        let reps = theta.representatives();
        let q = reps.len();
        let size = theta.size();
        let len = table_len(q, self.arity);
        let mut table = Vec::with_capacity(len);
        let mut point = vec![0; self.arity];
        for idx in 0..len {
            decode_into(idx, q, &mut point);
            let lifted: Vec<usize> = point.iter().map(|&b| reps[b]).collect();
            table.push(theta.block_of(self.apply(size, &lifted)));
        }
        TermOp { arity: self.arity, table, witness: self.witness.clone() }
    }
}

/// The clone of term operations of one arity, in generation order.
#[derive(Clone, Debug)]
pub struct TermClone {
    pub arity: usize,
    pub members: Vec<TermOp>,
    index: HashMap<Vec<usize>, usize>,
}

impl TermClone {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Position of the member with this table, if any.
    pub fn find(&self, table: &[usize]) -> Option<usize> {
        self.index.get(table).copied()
    }
}

/// Breadth-first generator for `term_clone`.
///
/// Level 0 holds the projections and the constants. Level `d + 1` holds
/// new tables obtained by applying one basic operation, in signature order,
/// to argument tuples of members (in lexicographic index order) that use at
/// least one member of level `d`.
pub struct CloneBuilder<'a> {
    alg: &'a FiniteAlgebra,
    arity: usize,
    budget: usize,
    members: Vec<TermOp>,
    index: HashMap<Vec<usize>, usize>,
    level_start: usize,
    done: bool,
}

impl<'a> CloneBuilder<'a> {
    pub fn new(alg: &'a FiniteAlgebra, arity: usize, budget: usize) -> Self {
        CloneBuilder {
            alg,
            arity,
            budget,
            members: Vec::new(),
            index: HashMap::new(),
            level_start: 0,
            done: false,
        }
    }

    fn insert(&mut self, op: TermOp, on_new: &mut impl FnMut(&TermOp) -> bool) -> Result<bool> {
        if self.index.contains_key(&op.table) {
            return Ok(false);
        }
        if self.members.len() >= self.budget {
            return Err(Error::CloneBudgetExceeded { arity: self.arity, budget: self.budget });
        }
        self.index.insert(op.table.clone(), self.members.len());
        let stop = on_new(&op);
        self.members.push(op);
        Ok(stop)
    }

    /// Runs generation to completion, calling `on_new` for every new member.
    /// Returns `Ok(true)` if `on_new` asked to stop early.
    pub fn run(&mut self, mut on_new: impl FnMut(&TermOp) -> bool) -> Result<bool> {
        let n = self.alg.size;
        let len = table_len(n, self.arity);
        if self.members.is_empty() && !self.done {
            for i in 0..self.arity {
                if self.insert(TermOp::projection(n, self.arity, i), &mut on_new)? {
                    return Ok(true);
                }
            }
            for op in &self.alg.ops {
                if op.arity == 0 {
                    let c = op.table[0];
                    let t = TermOp { arity: self.arity, table: vec![c; len], witness: Some(Term::op(op.name.clone(), vec![])) };
                    if self.insert(t, &mut on_new)? {
                        return Ok(true);
                    }
                }
            }
            if self.arity == 0 && n == 0 {
                self.done = true;
            }
        }
        while !self.done {
            let prev_start = self.level_start;
            let current = self.members.len();
            if prev_start == current {
                self.done = true;
                break;
            }
            self.level_start = current;
            let alg = self.alg;
            for op in &alg.ops {
                let k = op.arity;
                if k == 0 {
                    continue;
                }
                let mut pick = vec![0; k];
                for idx in 0..table_len(current, k) {
                    decode_into(idx, current, &mut pick);
                    if pick.iter().all(|&i| i < prev_start) {
                        continue;
                    }
                    let mut table = Vec::with_capacity(len);
                    let mut args = vec![0; k];
                    for point in 0..len {
                        for (slot, &m) in args.iter_mut().zip(&pick) {
                            *slot = self.members[m].table[point];
                        }
                        table.push(op.apply(n, &args));
                    }
                    if self.index.contains_key(&table) {
                        continue;
                    }
                    let witness = Term::op(
                        op.name.clone(),
                        pick.iter()
                            .map(|&m| self.members[m].witness.clone().expect("generated members carry witnesses"))
                            .collect(),
                    );
                    let t = TermOp { arity: self.arity, table, witness: Some(witness) };
                    if self.insert(t, &mut on_new)? {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    pub fn finish(self) -> TermClone {
        TermClone { arity: self.arity, members: self.members, index: self.index }
    }
}

/// All `k`-ary term operations of `alg`, each with a witness term.
pub fn term_clone(alg: &FiniteAlgebra, arity: usize, budget: usize) -> Result<TermClone> {
    let mut b = CloneBuilder::new(alg, arity, budget);
    b.run(|_| false)?;
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tuples;
    use crate::zoo;
    use rand::{Rng, SeedableRng};

    #[test]
    fn minority_unary_clone_is_identity() {
        let a = zoo::z2_minority(false);
        let c = term_clone(&a, 1, 1000).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.members[0].table, vec![0, 1]);
    }

    #[test]
    fn minority_binary_clone_is_projections() {
        let a = zoo::z2_minority(false);
        let c = term_clone(&a, 2, 1000).unwrap();
        let tables: Vec<_> = c.members.iter().map(|m| m.table.clone()).collect();
        assert_eq!(tables, vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
    }

    #[test]
    fn identity_always_present() {
        for a in [zoo::semilattice(3), zoo::symmetric3(), zoo::z2_minority(true)] {
            let c = term_clone(&a, 1, 10_000).unwrap();
            let id: Vec<usize> = (0..a.size).collect();
            assert!(c.find(&id).is_some());
        }
    }

    #[test]
    fn budget_is_distinguishable() {
        let err = term_clone(&zoo::symmetric3(), 2, 5).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn witnesses_reproduce_tables() {
        let a = zoo::symmetric3();
        let c = term_clone(&a, 2, 10_000).unwrap();
        for m in &c.members {
            let again = TermOp::from_term(&a, 2, m.witness.clone().unwrap()).unwrap();
            assert_eq!(again.table, m.table);
        }
    }

    #[test]
    fn clone_closed_under_composition() {
        let a = zoo::cyclic_group(4);
        let c1 = term_clone(&a, 1, 10_000).unwrap();
        let c2 = term_clone(&a, 2, 10_000).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let f = &c2.members[rng.random_range(0..c2.len())];
            let g = &c1.members[rng.random_range(0..c1.len())];
            let h = &c1.members[rng.random_range(0..c1.len())];
            let comp: Vec<usize> = (0..4).map(|x| f.apply(4, &[g.table[x], h.table[x]])).collect();
            assert!(c1.find(&comp).is_some());
        }
    }

    #[test]
    fn semilattice_ternary_clone_is_complete_meets() {
        // Ternary term operations of a chain semilattice are the meets of
        // non-empty variable subsets.
        let c = term_clone(&zoo::semilattice(2), 3, 1000).unwrap();
        assert_eq!(c.len(), 7);
        for m in &c.members {
            for t in tuples(2, 3) {
                let _ = m.apply(2, &t);
            }
        }
    }

    #[test]
    fn term_display_parse_roundtrip() {
        let t = Term::op("mul", vec![Term::op("mul", vec![Term::var(0), Term::op("inv", vec![Term::var(1)])]), Term::var(2)]);
        let s = t.to_string();
        assert_eq!(s, "mul(mul(x0,inv(x1)),x2)");
        assert_eq!(Term::parse(&s).unwrap(), t);
        assert_eq!(Term::parse("e()").unwrap(), Term::op("e", vec![]));
        assert!(Term::parse("mul(x0").is_err());
    }
}
