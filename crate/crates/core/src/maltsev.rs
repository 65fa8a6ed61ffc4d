//! Maltsev operations, herds and torsors.
//!
//! A herd is a set with an associative Maltsev operation. Choosing the
//! difference classes `x − y` as a quotient of `T × T` recovers a group
//! acting simply transitively on `T`, and the herd is `(x − y) + z`.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{table_len, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::term::{CloneBuilder, Term, TermOp};
use crate::union_find::UnionFind;

/// Which triples a [`TernaryTable`] is defined on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "p", rename_all = "lowercase")]
pub enum Domain {
    /// Every triple.
    Full,
    /// Triples with `p(x) = p(y) = p(z)`.
    Fibered(Vec<usize>),
    /// Triples with `p(x) = p(y)`, `z` arbitrary.
    Mixed(Vec<usize>),
}

impl Domain {
    #[inline]
    pub fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        match self {
            Domain::Full => true,
            Domain::Fibered(p) => p[x] == p[y] && p[y] == p[z],
            Domain::Mixed(p) => p[x] == p[y],
        }
    }

    pub fn base_map(&self) -> Option<&[usize]> {
        match self {
            Domain::Full => None,
            Domain::Fibered(p) | Domain::Mixed(p) => Some(p),
        }
    }
}

/// A ternary operation given by its values, possibly only on part of its
/// declared domain. Reading an undefined entry is a [`Error::Domain`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TernaryTable {
    pub size: usize,
    pub domain: Domain,
    pub table: Vec<Option<usize>>,
}

impl TernaryTable {
    pub fn from_fn(size: usize, domain: Domain, mut f: impl FnMut(usize, usize, usize) -> usize) -> Self {
        let mut table = vec![None; size * size * size];
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if domain.contains(x, y, z) {
                        table[(x * size + y) * size + z] = Some(f(x, y, z));
                    }
                }
            }
        }
        TernaryTable { size, domain, table }
    }

    /// An empty table on a domain, to be filled with [`TernaryTable::set`].
    pub fn empty(size: usize, domain: Domain) -> Self {
        TernaryTable { size, domain, table: vec![None; size * size * size] }
    }

    pub fn from_term_op(size: usize, op: &TermOp) -> Self {
        assert_eq!(op.arity, 3);
        TernaryTable { size, domain: Domain::Full, table: op.table.iter().map(|&v| Some(v)).collect() }
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.size + y) * self.size + z
    }

    #[inline]
    pub fn in_domain(&self, x: usize, y: usize, z: usize) -> bool {
        self.domain.contains(x, y, z)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> Result<usize> {
        if !self.in_domain(x, y, z) {
            return Err(Error::Domain((x, y, z)));
        }
        self.table[self.idx(x, y, z)].ok_or(Error::Domain((x, y, z)))
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, v: usize) -> Result<()> {
        if !self.in_domain(x, y, z) {
            return Err(Error::Domain((x, y, z)));
        }
        let i = self.idx(x, y, z);
        self.table[i] = Some(v);
        Ok(())
    }

    /// Checks value ranges, base-map ranges and that nothing is stored off
    /// the domain.
    pub fn validate(&self) -> Result<()> {
        let n = self.size;
        if self.table.len() != n * n * n {
            return Err(Error::Invalid(format!("ternary table has {} slots, expected {}", self.table.len(), n * n * n)));
        }
        if let Some(p) = self.domain.base_map() {
            if p.len() != n {
                return Err(Error::Invalid(format!("base map has length {}, expected {n}", p.len())));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    match self.table[self.idx(x, y, z)] {
                        Some(v) if v >= n => {
                            return Err(Error::Invalid(format!("m({x},{y},{z}) = {v} is outside the carrier")))
                        }
                        Some(_) if !self.in_domain(x, y, z) => {
                            return Err(Error::Domain((x, y, z)));
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }

    /// Every domain triple has a value.
    pub fn is_total(&self) -> bool {
        (0..self.table.len()).all(|i| {
            let (x, y, z) = (i / (self.size * self.size), (i / self.size) % self.size, i % self.size);
            !self.in_domain(x, y, z) || self.table[i].is_some()
        })
    }

    /// Restriction to a smaller domain.
    pub fn restrict(&self, domain: Domain) -> Result<TernaryTable> {
        let mut out = TernaryTable::empty(self.size, domain);
        for x in 0..self.size {
            for y in 0..self.size {
                for z in 0..self.size {
                    if out.in_domain(x, y, z) {
                        out.set(x, y, z, self.get(x, y, z)?)?;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// First failure of `m(x,y,y) = x = m(y,y,x)` on the domain, as the triple
/// at which it fails.
pub fn maltsev_witness(m: &TernaryTable) -> Result<Option<(usize, usize, usize)>> {
    let n = m.size;
    for x in 0..n {
        for y in 0..n {
            if m.in_domain(x, y, y) && m.get(x, y, y)? != x {
                return Ok(Some((x, y, y)));
            }
            if m.in_domain(y, y, x) && m.get(y, y, x)? != x {
                return Ok(Some((y, y, x)));
            }
        }
    }
    Ok(None)
}

pub fn check_maltsev(m: &TernaryTable) -> Result<bool> {
    Ok(maltsev_witness(m)?.is_none())
}

/// Searches `(u, v, x, y, z)` in lexicographic order for a failure of
/// `lhs = rhs`, where both sides are computed by `eval` (returning `None`
/// when some triple mentioned falls off the domain).
fn five_witness(
    m: &TernaryTable,
    eval: impl Fn(&TernaryTable, [usize; 5]) -> Result<Option<(usize, usize)>> + Sync,
) -> Result<Option<[usize; 5]>> {
    let n = m.size;
    let per_u: Vec<Result<Option<[usize; 5]>>> = (0..n)
        .into_par_iter()
        .map(|u| {
            for v in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            let t = [u, v, x, y, z];
                            if let Some((l, r)) = eval(m, t)? {
                                if l != r {
                                    return Ok(Some(t));
                                }
                            }
                        }
                    }
                }
            }
            Ok(None)
        })
        .collect();
    for r in per_u {
        if let Some(t) = r? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

fn get_if(m: &TernaryTable, x: usize, y: usize, z: usize) -> Result<Option<usize>> {
    if m.in_domain(x, y, z) {
        m.get(x, y, z).map(Some)
    } else {
        Ok(None)
    }
}

/// First `(u,v,x,y,z)` violating `m(u,v,m(x,y,z)) = m(m(u,v,x),y,z)`.
pub fn associativity_witness(m: &TernaryTable) -> Result<Option<[usize; 5]>> {
    five_witness(m, |m, [u, v, x, y, z]| {
        let (Some(w), Some(a)) = (get_if(m, x, y, z)?, get_if(m, u, v, x)?) else { return Ok(None) };
        let (Some(l), Some(r)) = (get_if(m, u, v, w)?, get_if(m, a, y, z)?) else { return Ok(None) };
        Ok(Some((l, r)))
    })
}

pub fn check_associative(m: &TernaryTable) -> Result<bool> {
    Ok(associativity_witness(m)?.is_none())
}

pub fn commutativity_witness(m: &TernaryTable) -> Result<Option<(usize, usize, usize)>> {
    let n = m.size;
    for x in 0..n {
        for y in 0..n {
            for z in x + 1..n {
                if let (Some(a), Some(b)) = (get_if(m, x, y, z)?, get_if(m, z, y, x)?) {
                    if a != b {
                        return Ok(Some((x, y, z)));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn check_commutative(m: &TernaryTable) -> Result<bool> {
    Ok(commutativity_witness(m)?.is_none())
}

/// First `(u,v,x,y,z)` violating `m(u,v,m(x,y,z)) = m(u,m(y,x,v),z)`.
pub fn asmal_witness(m: &TernaryTable) -> Result<Option<[usize; 5]>> {
    five_witness(m, |m, [u, v, x, y, z]| {
        let (Some(w), Some(t)) = (get_if(m, x, y, z)?, get_if(m, y, x, v)?) else { return Ok(None) };
        let (Some(l), Some(r)) = (get_if(m, u, v, w)?, get_if(m, u, t, z)?) else { return Ok(None) };
        Ok(Some((l, r)))
    })
}

#[inline]
fn is_maltsev_full(size: usize, table: &[usize]) -> bool {
    let at = |x: usize, y: usize, z: usize| table[(x * size + y) * size + z];
    (0..size).all(|x| (0..size).all(|y| at(x, y, y) == x && at(y, y, x) == x))
}

/// `mul(mul(x0, inv(x1)), x2)`, the Maltsev term of groups.
pub fn group_maltsev_term() -> Term {
    Term::op("mul", vec![Term::op("mul", vec![Term::var(0), Term::op("inv", vec![Term::var(1)])]), Term::var(2)])
}

/// `(x0 / (x1 \ x1)) · (x1 \ x2)`, a Maltsev term of quasigroups with
/// operations `mul`, `ldiv`, `rdiv`.
pub fn quasigroup_maltsev_term() -> Term {
    Term::op(
        "mul",
        vec![
            Term::op("rdiv", vec![Term::var(0), Term::op("ldiv", vec![Term::var(1), Term::var(1)])]),
            Term::op("ldiv", vec![Term::var(1), Term::var(2)]),
        ],
    )
}

/// Tabulates a ternary term and confirms it is Maltsev.
pub fn maltsev_term_from(alg: &FiniteAlgebra, term: Term) -> Result<TermOp> {
    let op = TermOp::from_term(alg, 3, term)?;
    if !is_maltsev_full(alg.size, &op.table) {
        let w = op.witness.as_ref().map(|t| t.to_string()).unwrap_or_default();
        return Err(Error::NotMaltsev(w));
    }
    Ok(op)
}

/// Checks a supplied ternary term operation.
pub fn ensure_maltsev(size: usize, op: &TermOp) -> Result<()> {
    if op.arity != 3 || op.table.len() != table_len(size, 3) || !is_maltsev_full(size, &op.table) {
        let w = op.witness.as_ref().map(|t| t.to_string()).unwrap_or_else(|| "<table>".into());
        return Err(Error::NotMaltsev(w));
    }
    Ok(())
}

/// Breadth-first search of the ternary clone for a Maltsev operation.
///
/// `Ok(None)` means the clone was generated completely and has no Maltsev
/// member; running out of budget is reported as an error instead.
pub fn find_maltsev_term(alg: &FiniteAlgebra, budget: usize) -> Result<Option<TermOp>> {
    let n = alg.size;
    let mut found = None;
    let mut b = CloneBuilder::new(alg, 3, budget);
    b.run(|op| {
        if is_maltsev_full(n, &op.table) {
            found = Some(op.clone());
            true
        } else {
            false
        }
    })?;
    Ok(found)
}

/// The group of a torsor, or of a central extension, together with its
/// action on the carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsorGroup {
    /// Size of the acted-on carrier.
    pub carrier: usize,
    pub order: usize,
    pub zero: usize,
    /// `add[g * order + h]`.
    pub add: Vec<usize>,
    pub neg: Vec<usize>,
    /// `action[g * carrier + z] = g + z`.
    pub action: Vec<usize>,
    /// `sub[x * carrier + y] = x − y`, where defined.
    pub sub: Vec<Option<usize>>,
    /// A pair `(x, y)` representing each group element.
    pub reps: Vec<(usize, usize)>,
}

impl TorsorGroup {
    pub fn add(&self, g: usize, h: usize) -> usize {
        self.add[g * self.order + h]
    }

    pub fn act(&self, g: usize, z: usize) -> usize {
        self.action[g * self.carrier + z]
    }

    pub fn sub(&self, x: usize, y: usize) -> Option<usize> {
        self.sub[x * self.carrier + y]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..self.order).all(|h| self.add(g, h) == self.add(h, g)))
    }

    /// `(x − y) + z` as a full ternary table. Only meaningful when `sub` is
    /// total.
    pub fn reconstruct(&self) -> Result<TernaryTable> {
        let n = self.carrier;
        let mut t = TernaryTable::empty(n, Domain::Full);
        for x in 0..n {
            for y in 0..n {
                let g = self.sub(x, y).ok_or(Error::Domain((x, y, 0)))?;
                for z in 0..n {
                    t.set(x, y, z, self.act(g, z))?;
                }
            }
        }
        Ok(t)
    }

    /// The group as an algebra with `mul`, `inv`, `e`.
    pub fn to_algebra(&self) -> FiniteAlgebra {
        use crate::algebra::Operation;
        FiniteAlgebra::new(
            self.order,
            vec![
                Operation::new("mul", 2, self.add.clone()),
                Operation::new("inv", 1, self.neg.clone()),
                Operation::new("e", 0, vec![self.zero]),
            ],
        )
        .expect("group tables are in range")
    }

    fn verify(&self, defined: &dyn Fn(usize, usize) -> bool) -> Result<()> {
        let g = self.order;
        let bad = |what: &str| Err(Error::Internal(format!("constructed group fails {what}")));
        for a in 0..g {
            if self.add(self.zero, a) != a || self.add(a, self.zero) != a {
                return bad("the unit law");
            }
            if self.add(a, self.neg[a]) != self.zero {
                return bad("the inverse law");
            }
            for b in 0..g {
                for c in 0..g {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return bad("associativity");
                    }
                }
            }
            for z in 0..self.carrier {
                if self.sub(self.act(a, z), z) != Some(a) {
                    return bad("(g + x) − x = g");
                }
            }
        }
        for x in 0..self.carrier {
            for y in 0..self.carrier {
                if defined(x, y) {
                    let d = self.sub(x, y).expect("defined pair has a class");
                    if self.act(d, y) != x {
                        return bad("(x − y) + y = x");
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the quotient of the defined pairs of `T × T` by
/// `(x, y) ~ (m(x, y, z), z)` and verifies all group and action laws.
fn difference_group(
    n: usize,
    defined: &dyn Fn(usize, usize) -> bool,
    m: &dyn Fn(usize, usize, usize) -> Result<usize>,
) -> Result<TorsorGroup> {
    let mut uf = UnionFind::new(n * n);
    for x in 0..n {
        for y in 0..n {
            if !defined(x, y) {
                continue;
            }
            for z in 0..n {
                let w = m(x, y, z)?;
                if !defined(w, z) {
                    return Err(Error::NotAHerd(format!("m({x},{y},{z}) = {w} leaves the fibre of {z}")));
                }
                uf.union(x * n + y, w * n + z);
            }
        }
    }
    let mut label = vec![usize::MAX; n * n];
    let mut reps = Vec::new();
    let mut root_label = std::collections::HashMap::new();
    for x in 0..n {
        for y in 0..n {
            if !defined(x, y) {
                continue;
            }
            let r = uf.find(x * n + y);
            let next = reps.len();
            let l = *root_label.entry(r).or_insert_with(|| next);
            if l == next {
                reps.push((x, y));
            }
            label[x * n + y] = l;
        }
    }
    let order = reps.len();
    let zero = label[0];
    let mut add = vec![0; order * order];
    for (g, &(x, y)) in reps.iter().enumerate() {
        for (h, &(z, t)) in reps.iter().enumerate() {
            add[g * order + h] = label[m(x, y, z)? * n + t];
        }
    }
    // Addition must not depend on representatives.
    for x in 0..n {
        for y in 0..n {
            if !defined(x, y) {
                continue;
            }
            for z in 0..n {
                let w = m(x, y, z)?;
                for t in 0..n {
                    if defined(z, t) && label[w * n + t] != add[label[x * n + y] * order + label[z * n + t]] {
                        return Err(Error::NotAHerd(format!("difference addition is not well defined at ({x},{y}),({z},{t})")));
                    }
                }
            }
        }
    }
    let neg = reps.iter().map(|&(x, y)| label[y * n + x]).collect();
    let mut action = vec![0; order * n];
    for (g, &(x, y)) in reps.iter().enumerate() {
        for z in 0..n {
            action[g * n + z] = m(x, y, z)?;
        }
    }
    for x in 0..n {
        for y in 0..n {
            if !defined(x, y) {
                continue;
            }
            let g = label[x * n + y];
            for z in 0..n {
                if m(x, y, z)? != action[g * n + z] {
                    return Err(Error::NotAHerd(format!("action of ({x},{y}) disagrees with its class")));
                }
            }
        }
    }
    let sub = (0..n * n).map(|i| (label[i] != usize::MAX).then_some(label[i])).collect();
    let g = TorsorGroup { carrier: n, order, zero, add, neg, action, sub, reps };
    g.verify(defined)?;
    Ok(g)
}

/// The group of a herd, with its simply transitive action.
pub fn torsor_to_group(m: &TernaryTable, require_commutative: bool) -> Result<TorsorGroup> {
    if m.size == 0 {
        return Err(Error::EmptyTorsor);
    }
    if m.domain != Domain::Full {
        return Err(Error::NotAHerd("table must be defined on every triple".into()));
    }
    if let Some(t) = maltsev_witness(m)? {
        return Err(Error::NotAHerd(format!("Maltsev identity fails at {t:?}")));
    }
    if let Some(t) = associativity_witness(m)? {
        return Err(Error::NotAHerd(format!("associativity fails at {t:?}")));
    }
    let g = difference_group(m.size, &|_, _| true, &|x, y, z| m.get(x, y, z))?;
    if require_commutative && check_commutative(m)? && !g.is_abelian() {
        return Err(Error::Internal("commutative herd produced a non-abelian group".into()));
    }
    Ok(g)
}

/// Outcome of [`central_torsor_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralReport {
    pub central: bool,
    /// Description of the first failed condition.
    pub witness: Option<String>,
    pub group: Option<TorsorGroup>,
}

impl CentralReport {
    fn fail(w: String) -> Self {
        CentralReport { central: false, witness: Some(w), group: None }
    }
}

/// Decides whether `m_ext`, defined on `{(x,y,z) : p(x) = p(y)}`, is an
/// associative Maltsev operation with `p(m(x,y,z)) = p(z)`.
///
/// With `structure`, `m_ext` must moreover be a homomorphism on its domain
/// (a subalgebra of the cube when the kernel of `p` is a congruence). On
/// success the constant group, a quotient of the kernel pair of `p`, is
/// built and its action laws are verified.
pub fn central_torsor_check(
    p: &[usize],
    m_ext: &TernaryTable,
    structure: Option<&FiniteAlgebra>,
) -> Result<CentralReport> {
    let n = m_ext.size;
    if p.len() != n {
        return Err(Error::Invalid(format!("base map has length {}, expected {n}", p.len())));
    }
    if m_ext.domain != Domain::Mixed(p.to_vec()) {
        return Err(Error::Invalid("table domain must be the mixed domain of the base map".into()));
    }
    let base = p.iter().max().map_or(0, |&b| b + 1);
    if (0..base).any(|b| !p.contains(&b)) {
        return Err(Error::Invalid("base map is not surjective onto 0..".into()));
    }
    if let Some(t) = maltsev_witness(m_ext)? {
        return Ok(CentralReport::fail(format!("Maltsev identity fails at {t:?}")));
    }
    for x in 0..n {
        for y in 0..n {
            if p[x] != p[y] {
                continue;
            }
            for z in 0..n {
                let v = m_ext.get(x, y, z)?;
                if p[v] != p[z] {
                    return Ok(CentralReport::fail(format!("p(m({x},{y},{z})) = p({v}) differs from p({z})")));
                }
            }
        }
    }
    if let Some(t) = associativity_witness(m_ext)? {
        return Ok(CentralReport::fail(format!("associativity fails at {t:?}")));
    }
    if let Some(alg) = structure {
        if alg.size != n {
            return Err(Error::Invalid("structure carrier differs from the table's".into()));
        }
        if let Some(w) = homomorphism_witness(p, m_ext, alg)? {
            return Ok(CentralReport::fail(w));
        }
    }
    let group = difference_group(n, &|x, y| p[x] == p[y], &|x, y, z| m_ext.get(x, y, z))?;
    Ok(CentralReport { central: true, witness: None, group: Some(group) })
}

/// Checks that `m` commutes with every operation of `alg` on its mixed
/// domain, one operation argument tuple of domain triples at a time.
fn homomorphism_witness(p: &[usize], m: &TernaryTable, alg: &FiniteAlgebra) -> Result<Option<String>> {
    let n = alg.size;
    let dom: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
        .filter(|&(x, y, _)| p[x] == p[y])
        .collect();
    for op in &alg.ops {
        let k = op.arity;
        let total = table_len(dom.len(), k);
        let mut pick = vec![0; k];
        let (mut xs, mut ys, mut zs, mut vs) = (vec![0; k], vec![0; k], vec![0; k], vec![0; k]);
        for idx in 0..total {
            crate::algebra::decode_into(idx, dom.len(), &mut pick);
            for (i, &d) in pick.iter().enumerate() {
                let (x, y, z) = dom[d];
                xs[i] = x;
                ys[i] = y;
                zs[i] = z;
                vs[i] = m.get(x, y, z)?;
            }
            let (fx, fy, fz) = (op.apply(n, &xs), op.apply(n, &ys), op.apply(n, &zs));
            if !m.in_domain(fx, fy, fz) {
                return Err(Error::Invalid(format!("the kernel of the base map is not compatible with `{}`", op.name)));
            }
            let lhs = m.get(fx, fy, fz)?;
            let rhs = op.apply(n, &vs);
            if lhs != rhs {
                let args: Vec<_> = pick.iter().map(|&d| dom[d]).collect();
                return Ok(Some(format!(
                    "not a homomorphism for `{}` at triples {args:?}: m({fx},{fy},{fz}) = {lhs} but {} of the values gives {rhs}",
                    op.name, op.name
                )));
            }
        }
    }
    Ok(None)
}

/// All group tables on `{0..n}` with identity 0, by Latin-square
/// backtracking followed by an associativity check.
pub fn enumerate_group_tables(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut t = vec![usize::MAX; n * n];
    for a in 0..n {
        t[a] = a;
        t[a * n] = a;
    }
    fn rec(n: usize, cell: usize, t: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cell == n * n {
            let assoc = (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| t[t[a * n + b] * n + c] == t[a * n + t[b * n + c]]))
            });
            if assoc {
                out.push(t.clone());
            }
            return;
        }
        let (a, b) = (cell / n, cell % n);
        if a == 0 || b == 0 {
            return rec(n, cell + 1, t, out);
        }
        for v in 0..n {
            let row_clash = (0..b).any(|j| t[a * n + j] == v);
            let col_clash = (0..a).any(|i| t[i * n + b] == v);
            if !row_clash && !col_clash {
                t[cell] = v;
                rec(n, cell + 1, t, out);
            }
        }
        t[cell] = usize::MAX;
    }
    rec(n, 0, &mut t, &mut out);
    out
}

/// The herd `x · y⁻¹ · z` of a group table with identity 0.
pub fn herd_of_group(n: usize, mul: &[usize]) -> TernaryTable {
    let inv: Vec<usize> = (0..n).map(|x| (0..n).find(|&y| mul[x * n + y] == 0).expect("group table")).collect();
    TernaryTable::from_fn(n, Domain::Full, |x, y, z| mul[mul[x * n + inv[y]] * n + z])
}

/// Every associative Maltsev table on `{0..n}`.
///
/// Fixing 0 as base point, `x · y = m(x, 0, y)` is a group with identity 0
/// and `m = x · y⁻¹ · z`; conversely every such group yields a herd. The
/// enumeration is therefore complete and duplicate-free.
pub fn enumerate_herds(n: usize) -> Vec<TernaryTable> {
    enumerate_group_tables(n).iter().map(|t| herd_of_group(n, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn z4_herd() -> TernaryTable {
        TernaryTable::from_fn(4, Domain::Full, |x, y, z| (x + 4 - y + z) % 4)
    }

    #[test]
    fn identity_checks_on_small_tables() {
        let m = z4_herd();
        assert!(check_maltsev(&m).unwrap());
        assert!(check_associative(&m).unwrap());
        assert!(check_commutative(&m).unwrap());
        let and = TernaryTable::from_fn(2, Domain::Full, |x, y, z| x & y & z);
        assert!(!check_maltsev(&and).unwrap());
        let one = TernaryTable::from_fn(1, Domain::Full, |_, _, _| 0);
        assert!(check_maltsev(&one).unwrap());
    }

    #[test]
    fn s3_herd_is_associative_not_commutative() {
        let s3 = zoo::symmetric3();
        let mul = &s3.op("mul").unwrap().table;
        let m = herd_of_group(6, mul);
        assert!(check_maltsev(&m).unwrap());
        assert!(check_associative(&m).unwrap());
        assert!(!check_commutative(&m).unwrap());
        assert!(asmal_witness(&m).unwrap().is_none());
    }

    #[test]
    fn missing_entry_is_domain_error() {
        let mut m = z4_herd();
        m.table[(4 + 2) * 4 + 2] = None; // (1, 2, 2)
        assert_eq!(check_maltsev(&m), Err(Error::Domain((1, 2, 2))));
    }

    #[test]
    fn maltsev_term_search() {
        let z2 = zoo::cyclic_group(2);
        let t = find_maltsev_term(&z2, 1000).unwrap().unwrap();
        let expect: Vec<usize> = crate::algebra::tuples(2, 3).map(|v| v[0] ^ v[1] ^ v[2]).collect();
        assert_eq!(t.table, expect);
        assert!(find_maltsev_term(&zoo::semilattice(2), 1000).unwrap().is_none());
        let one = zoo::cyclic_group(1);
        assert!(find_maltsev_term(&one, 10).unwrap().is_some());
    }

    #[test]
    fn search_is_reproducible() {
        let a = find_maltsev_term(&zoo::symmetric3(), 200_000).unwrap().unwrap();
        let b = find_maltsev_term(&zoo::symmetric3(), 200_000).unwrap().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quasigroup_term_is_maltsev() {
        assert!(maltsev_term_from(&zoo::loop5(), quasigroup_maltsev_term()).is_ok());
        assert!(maltsev_term_from(&zoo::affine_quasigroup(5, 2, 3, 1), quasigroup_maltsev_term()).is_ok());
        assert!(matches!(
            maltsev_term_from(&zoo::cyclic_group(3), Term::op("mul", vec![Term::var(0), Term::var(2)])),
            Err(Error::NotMaltsev(_))
        ));
    }

    #[test]
    fn z4_torsor_group() {
        let g = torsor_to_group(&z4_herd(), true).unwrap();
        assert_eq!(g.order, 4);
        assert!(g.is_abelian());
        for x in 0..4 {
            let gx = g.sub(x, 0).unwrap();
            for z in 0..4 {
                assert_eq!(g.act(gx, z), (x + z) % 4);
            }
        }
        assert_eq!(g.reconstruct().unwrap(), z4_herd());
    }

    #[test]
    fn torsor_errors() {
        let empty = TernaryTable::empty(0, Domain::Full);
        assert_eq!(torsor_to_group(&empty, false), Err(Error::EmptyTorsor));
        let proj = TernaryTable::from_fn(3, Domain::Full, |x, _, _| x);
        assert!(matches!(torsor_to_group(&proj, false), Err(Error::NotAHerd(_))));
        let one = TernaryTable::from_fn(1, Domain::Full, |_, _, _| 0);
        assert_eq!(torsor_to_group(&one, false).unwrap().order, 1);
    }

    #[test]
    fn herd_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_herds(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 4]);
    }

    #[test]
    fn central_z4_over_z2() {
        let p = vec![0, 1, 0, 1];
        let m = TernaryTable::from_fn(4, Domain::Mixed(p.clone()), |x, y, z| (x + 4 - y + z) % 4);
        let r = central_torsor_check(&p, &m, Some(&zoo::cyclic_group(4))).unwrap();
        assert!(r.central);
        assert_eq!(r.group.unwrap().order, 2);
    }

    #[test]
    fn central_identity_projection() {
        let p = vec![0, 1, 2];
        let m = TernaryTable::from_fn(3, Domain::Mixed(p.clone()), |_, _, z| z);
        let r = central_torsor_check(&p, &m, None).unwrap();
        assert!(r.central);
        assert_eq!(r.group.unwrap().order, 1);
    }

    #[test]
    fn s3_over_sign_is_not_central() {
        let s3 = zoo::symmetric3();
        let mul = s3.op("mul").unwrap().table.clone();
        // Even permutations in lexicographic one-line order: 0, 3, 4.
        let p = vec![0, 1, 1, 0, 0, 1];
        let herd = herd_of_group(6, &mul);
        let m = herd.restrict(Domain::Mixed(p.clone())).unwrap();
        let r = central_torsor_check(&p, &m, Some(&s3)).unwrap();
        assert!(!r.central);
        assert!(r.witness.unwrap().contains("homomorphism"));
    }
}
