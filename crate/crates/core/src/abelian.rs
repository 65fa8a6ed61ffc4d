//! Abelian theories presented by left linear forms `∂: M → R`.
//!
//! An `n`-ary operation of the theory of affinities over `∂` is a tuple
//! `⟨x, r_1, ..., r_{n-1}⟩` with `x ∈ M`, `r_i ∈ R`; on an affinity it acts
//! by `(a_0, ..., a_{n-1}) ↦ φ_{a_0}(x) +_{a_0} (r_1)_{a_0} a_1 +_{a_0} ...`.
//! There are no nullary operations.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{decode_into, table_len, FiniteAlgebra, Operation};
use crate::commutator::is_abelian;
use crate::error::{Error, Result};
use crate::maltsev::{ensure_maltsev, maltsev_term_from};
use crate::ring::{FiniteRing, LeftModule};
use crate::term::{term_clone, Term, TermOp};

/// A left-module map `∂: M → R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    pub ring: FiniteRing,
    pub module: LeftModule,
    pub d: Vec<usize>,
}

impl LinearForm {
    pub fn new(ring: FiniteRing, module: LeftModule, d: Vec<usize>) -> Result<Self> {
        if module.ring != ring {
            return Err(Error::Invalid("module is over a different ring".into()));
        }
        if d.len() != module.size || d.iter().any(|&v| v >= ring.size) {
            return Err(Error::Invalid("form table has the wrong length or leaves the ring".into()));
        }
        for x in 0..module.size {
            for y in 0..module.size {
                if d[module.plus(x, y)] != ring.plus(d[x], d[y]) {
                    return Err(Error::Invalid(format!("law `∂(x + y) = ∂x + ∂y` fails at x={x}, y={y}")));
                }
            }
            for r in 0..ring.size {
                if d[module.scale(r, x)] != ring.times(r, d[x]) {
                    return Err(Error::Invalid(format!("law `∂(rx) = r∂x` fails at r={r}, x={x}")));
                }
            }
        }
        Ok(LinearForm { ring, module, d })
    }

    /// `0 → R`.
    pub fn zero_module(ring: &FiniteRing) -> Self {
        LinearForm::new(ring.clone(), LeftModule::zero(ring), vec![ring.zero]).expect("zero form")
    }

    /// `id: R → R`.
    pub fn identity(ring: &FiniteRing) -> Self {
        LinearForm::new(ring.clone(), LeftModule::regular(ring), (0..ring.size).collect()).expect("identity form")
    }

    #[inline]
    pub fn r(&self) -> &FiniteRing {
        &self.ring
    }

    #[inline]
    pub fn m(&self) -> &LeftModule {
        &self.module
    }

    /// `1 − ∂x`.
    #[inline]
    pub fn co(&self, x: usize) -> usize {
        self.ring.minus(self.ring.one, self.d[x])
    }

    /// Elements `p` with `∂p = 1`.
    pub fn pseudoconstants(&self) -> Vec<usize> {
        (0..self.module.size).filter(|&x| self.d[x] == self.ring.one).collect()
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.ring.size).all(|r| self.d.contains(&r))
    }
}

/// `⟨m, r_1, ..., r_{n-1}⟩`, an `n`-ary operation with `n = r.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffinityOp {
    pub m: usize,
    pub r: Vec<usize>,
}

impl AffinityOp {
    pub fn new(m: usize, r: Vec<usize>) -> Self {
        AffinityOp { m, r }
    }

    pub fn arity(&self) -> usize {
        self.r.len() + 1
    }

    /// The `i`-th of `n` projections: `⟨0, 0, ...⟩` for `i = 0`, otherwise
    /// the unit in slot `i`.
    pub fn projection(form: &LinearForm, n: usize, i: usize) -> Self {
        let mut r = vec![form.ring.zero; n - 1];
        if i > 0 {
            r[i - 1] = form.ring.one;
        }
        AffinityOp { m: form.module.zero, r }
    }

    /// `⟨0, −1, 1⟩`, i.e. `x_0 − x_1 + x_2`.
    pub fn canonical_maltsev(form: &LinearForm) -> Self {
        let one = form.ring.one;
        AffinityOp { m: form.module.zero, r: vec![form.ring.neg(one), one] }
    }

    pub fn validate(&self, form: &LinearForm) -> Result<()> {
        if self.m >= form.module.size || self.r.iter().any(|&x| x >= form.ring.size) {
            return Err(Error::Invalid(format!("operation {self} has components outside M or R")));
        }
        Ok(())
    }
}

impl fmt::Display for AffinityOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}", self.m)?;
        for r in &self.r {
            write!(f, ",{r}")?;
        }
        write!(f, ">")
    }
}

/// Substitutes `inners` into `outer`:
///
/// `x' = x + (1 − ∂x) x_0 + Σ r_i (x_i − x_0)` and, slot by slot,
/// `s' = (1 − ∂x) s_0 + Σ r_i (s_i − s_0)`.
pub fn compose_affinity(outer: &AffinityOp, inners: &[AffinityOp], form: &LinearForm) -> Result<AffinityOp> {
    if inners.len() != outer.arity() {
        return Err(Error::Arity(format!("{}-ary operation applied to {} arguments", outer.arity(), inners.len())));
    }
    let k = inners[0].arity();
    if let Some(bad) = inners.iter().find(|op| op.arity() != k) {
        return Err(Error::Arity(format!("argument {bad} is not {k}-ary")));
    }
    outer.validate(form)?;
    for op in inners {
        op.validate(form)?;
    }
    let (ring, module) = (&form.ring, &form.module);
    let c = form.co(outer.m);
    let x0 = inners[0].m;
    let mut m = module.plus(outer.m, module.scale(c, x0));
    for (ri, inner) in outer.r.iter().zip(&inners[1..]) {
        m = module.plus(m, module.scale(*ri, module.minus(inner.m, x0)));
    }
    let r = (0..k - 1)
        .map(|slot| {
            let s0 = inners[0].r[slot];
            let mut acc = ring.times(c, s0);
            for (ri, inner) in outer.r.iter().zip(&inners[1..]) {
                acc = ring.plus(acc, ring.times(*ri, ring.minus(inner.r[slot], s0)));
            }
            acc
        })
        .collect();
    Ok(AffinityOp { m, r })
}

/// Whether a ternary operation satisfies `m(x, x, y) = y = m(y, x, x)` as
/// an identity of the theory, checked by composing with projections.
pub fn is_maltsev_op(form: &LinearForm, op: &AffinityOp) -> Result<bool> {
    if op.arity() != 3 {
        return Err(Error::Arity(format!("{op} is not ternary")));
    }
    let x = AffinityOp::projection(form, 2, 0);
    let y = AffinityOp::projection(form, 2, 1);
    Ok(compose_affinity(op, &[x.clone(), x.clone(), y.clone()], form)? == y
        && compose_affinity(op, &[y.clone(), x.clone(), x.clone()], form)? == y)
}

/// All `n`-ary operations, `M × R^{n−1}` in lexicographic order; empty for
/// `n = 0`.
pub fn hom_set(form: &LinearForm, n: usize) -> Vec<AffinityOp> {
    if n == 0 {
        return Vec::new();
    }
    let rs = table_len(form.ring.size, n - 1);
    let mut out = Vec::with_capacity(form.module.size * rs);
    let mut r = vec![0; n - 1];
    for m in 0..form.module.size {
        for idx in 0..rs {
            decode_into(idx, form.ring.size, &mut r);
            out.push(AffinityOp { m, r: r.clone() });
        }
    }
    out
}

/// A finite affinity: an abelian herd with an `R`-indexed family of binary
/// operations and an `M`-indexed family of unary ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffinityModel {
    pub size: usize,
    pub ring_size: usize,
    pub module_size: usize,
    /// `herd[(a * n + b) * n + c] = b +_a c`.
    pub herd: Vec<usize>,
    /// `act[(r * n + a) * n + b] = r_a b`.
    pub act: Vec<usize>,
    /// `phi[x * n + a] = φ_a(x)`.
    pub phi: Vec<usize>,
}

impl AffinityModel {
    /// The affinity on `N` induced by a module map `f: M → N`:
    /// `b +_a c = b − a + c`, `r_a b = (1 − r)a + rb`,
    /// `φ_a(x) = f(x) + (1 − ∂x)a`.
    pub fn from_module_map(form: &LinearForm, target: &LeftModule, f: &[usize]) -> Result<Self> {
        if target.ring != form.ring {
            return Err(Error::Invalid("target module is over a different ring".into()));
        }
        if f.len() != form.module.size || f.iter().any(|&v| v >= target.size) || !form.module.is_linear(target, f) {
            return Err(Error::Invalid("f is not a module map M → N".into()));
        }
        let n = target.size;
        let ring = &form.ring;
        let mut herd = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    herd.push(target.plus(target.minus(b, a), c));
                }
            }
        }
        let mut act = Vec::with_capacity(ring.size * n * n);
        for r in 0..ring.size {
            let co = ring.minus(ring.one, r);
            for a in 0..n {
                for b in 0..n {
                    act.push(target.plus(target.scale(co, a), target.scale(r, b)));
                }
            }
        }
        let mut phi = Vec::with_capacity(form.module.size * n);
        for x in 0..form.module.size {
            for a in 0..n {
                phi.push(target.plus(f[x], target.scale(form.co(x), a)));
            }
        }
        Ok(AffinityModel { size: n, ring_size: ring.size, module_size: form.module.size, herd, act, phi })
    }

    /// Carrier `M` with `f = id`.
    pub fn canonical(form: &LinearForm) -> Self {
        let id: Vec<usize> = (0..form.module.size).collect();
        AffinityModel::from_module_map(form, &form.module, &id).expect("identity is a module map")
    }

    /// Carrier `M ⊕ R` with `f(x) = (x, 0)`. Distinct operations of the
    /// theory act as distinct functions on it.
    pub fn free(form: &LinearForm) -> Self {
        let (target, f) = free_target(form);
        AffinityModel::from_module_map(form, &target, &f).expect("inclusion is a module map")
    }

    #[inline]
    pub fn plus_at(&self, a: usize, b: usize, c: usize) -> usize {
        self.herd[(a * self.size + b) * self.size + c]
    }

    #[inline]
    pub fn scale_at(&self, r: usize, a: usize, b: usize) -> usize {
        self.act[(r * self.size + a) * self.size + b]
    }

    #[inline]
    pub fn phi_at(&self, x: usize, a: usize) -> usize {
        self.phi[x * self.size + a]
    }

    /// `φ_{a_0}(x) +_{a_0} (r_1)_{a_0} a_1 +_{a_0} ...`
    pub fn eval(&self, op: &AffinityOp, args: &[usize]) -> usize {
        let a = args[0];
        let mut acc = self.phi_at(op.m, a);
        for (r, &b) in op.r.iter().zip(&args[1..]) {
            acc = self.plus_at(a, acc, self.scale_at(*r, a, b));
        }
        acc
    }

    pub fn op_table(&self, op: &AffinityOp) -> Vec<usize> {
        let n = op.arity();
        let len = table_len(self.size, n);
        let mut args = vec![0; n];
        (0..len)
            .map(|idx| {
                decode_into(idx, self.size, &mut args);
                self.eval(op, &args)
            })
            .collect()
    }

    /// The affinity as an algebra with operations `m/3 = ⟨0,−1,1⟩`,
    /// `r{r}/2 = ⟨0,r⟩` and `phi{x}/1 = ⟨x⟩`.
    pub fn to_algebra(&self, form: &LinearForm) -> FiniteAlgebra {
        let mut ops = vec![Operation::new("m", 3, self.op_table(&AffinityOp::canonical_maltsev(form)))];
        for r in 0..form.ring.size {
            ops.push(Operation::new(format!("r{r}"), 2, self.op_table(&AffinityOp::new(form.module.zero, vec![r]))));
        }
        for x in 0..form.module.size {
            ops.push(Operation::new(format!("phi{x}"), 1, self.op_table(&AffinityOp::new(x, vec![]))));
        }
        FiniteAlgebra::new(self.size, ops).expect("tables are in range")
    }
}

fn free_target(form: &LinearForm) -> (LeftModule, Vec<usize>) {
    let target = form.module.direct_sum(&LeftModule::regular(&form.ring));
    let f = (0..form.module.size).map(|x| x * form.ring.size + form.ring.zero).collect();
    (target, f)
}

/// Checks the affinity identities exhaustively and names the first one
/// that fails, with a witness. The herd is first checked to be an abelian
/// herd.
pub fn affinity_axiom_check(model: &AffinityModel, form: &LinearForm) -> Result<Option<String>> {
    let n = model.size;
    if model.ring_size != form.ring.size || model.module_size != form.module.size {
        return Err(Error::Invalid("model tables do not match the form".into()));
    }
    let ring = &form.ring;
    let module = &form.module;
    let p = |a, b, c| model.plus_at(a, b, c);
    let s = |r, a, b| model.scale_at(r, a, b);
    let phi = |x, a| model.phi_at(x, a);
    let minus_one = ring.neg(ring.one);
    let sub = |a, b, c| p(a, b, s(minus_one, a, c));
    let fail = |name: &str, w: String| Ok(Some(format!("`{name}` fails at {w}")));

    // Abelian herd: m(x, y, z) = x +_y z is Maltsev, associative, commutative.
    let herd = crate::maltsev::TernaryTable::from_fn(n, crate::maltsev::Domain::Full, |x, y, z| p(y, x, z));
    if let Some(w) = crate::maltsev::maltsev_witness(&herd)? {
        return fail("m(x,y,y) = x = m(y,y,x)", format!("{w:?}"));
    }
    if let Some(w) = crate::maltsev::associativity_witness(&herd)? {
        return fail("m(u,v,m(x,y,z)) = m(m(u,v,x),y,z)", format!("{w:?}"));
    }
    if let Some(w) = crate::maltsev::commutativity_witness(&herd)? {
        return fail("m(x,y,z) = m(z,y,x)", format!("{w:?}"));
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if p(a, b, p(a, c, d)) != p(a, p(a, b, c), d) {
                        return fail("b +_a (c +_a d) = (b +_a c) +_a d", format!("a={a}, b={b}, c={c}, d={d}"));
                    }
                }
            }
        }
        for b in 0..n {
            if p(a, a, b) != b {
                return fail("a +_a b = b", format!("a={a}, b={b}"));
            }
            for c in 0..n {
                if p(a, b, c) != p(a, c, b) {
                    return fail("b +_a c = c +_a b", format!("a={a}, b={b}, c={c}"));
                }
            }
            if sub(a, b, b) != a {
                return fail("b −_a b = a", format!("a={a}, b={b}"));
            }
        }
        for r in 0..ring.size {
            for b in 0..n {
                for c in 0..n {
                    if s(r, a, p(a, b, c)) != p(a, s(r, a, b), s(r, a, c)) {
                        return fail("r_a (b +_a c) = r_a b +_a r_a c", format!("r={r}, a={a}, b={b}, c={c}"));
                    }
                }
            }
        }
        for r in 0..ring.size {
            for t in 0..ring.size {
                for b in 0..n {
                    if s(ring.plus(r, t), a, b) != p(a, s(r, a, b), s(t, a, b)) {
                        return fail("(r + s)_a b = r_a b +_a s_a b", format!("r={r}, s={t}, a={a}, b={b}"));
                    }
                }
            }
        }
        for b in 0..n {
            if s(ring.one, a, b) != b {
                return fail("1_a b = b", format!("a={a}, b={b}"));
            }
        }
        for r in 0..ring.size {
            for t in 0..ring.size {
                for b in 0..n {
                    if s(r, a, s(t, a, b)) != s(ring.times(r, t), a, b) {
                        return fail("r_a (s_a b) = (rs)_a b", format!("r={r}, s={t}, a={a}, b={b}"));
                    }
                }
            }
        }
        for x in 0..module.size {
            for y in 0..module.size {
                if phi(module.plus(x, y), a) != p(a, phi(x, a), phi(y, a)) {
                    return fail("φ_a(x + y) = φ_a(x) +_a φ_a(y)", format!("a={a}, x={x}, y={y}"));
                }
            }
            for r in 0..ring.size {
                if phi(module.scale(r, x), a) != s(r, a, phi(x, a)) {
                    return fail("φ_a(rx) = r_a φ_a(x)", format!("a={a}, r={r}, x={x}"));
                }
            }
        }
    }
    for a in 0..n {
        for a2 in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if p(a2, b, c) != p(a, p(a, sub(a, b, a2), sub(a, c, a2)), a2) {
                        return fail(
                            "b +_a' c = ((b −_a a') +_a (c −_a a')) +_a a'",
                            format!("a={a}, a'={a2}, b={b}, c={c}"),
                        );
                    }
                }
                for r in 0..ring.size {
                    if s(r, a2, b) != p(a, s(r, a, sub(a, b, a2)), a2) {
                        return fail("r_a' b = r_a (b −_a a') +_a a'", format!("r={r}, a={a}, a'={a2}, b={b}"));
                    }
                }
            }
            for x in 0..module.size {
                if phi(x, a2) != p(a, phi(x, a), s(form.co(x), a, a2)) {
                    return fail("φ_a'(x) = φ_a(x) +_a (1 − ∂x)_a a'", format!("a={a}, a'={a2}, x={x}"));
                }
            }
        }
    }
    Ok(None)
}

/// The linear form of an abelian Maltsev algebra, read off its clone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub form: LinearForm,
    /// Unary term operations; element `i` of `M` is `unary[i]`.
    pub unary: Vec<TermOp>,
    /// Convex binary term operations; element `i` of `R` is `convex[i]`.
    pub convex: Vec<TermOp>,
}

/// Builds `∂: M → R` from an abelian algebra with Maltsev operation `p`:
/// `M` is the unary clone with `x + y = p(x, id, y)`, `R` the binary
/// operations with `r(a, a) = a`, zero and unit the two projections,
/// `r + s = p(r, π_0, s)`, `(rs)(a, b) = r(a, s(a, b))`,
/// `(rx)(a) = r(a, x(a))` and `(∂x)(a, b) = p(x(a), x(b), b)`.
pub fn abelianize(alg: &FiniteAlgebra, p: &TermOp, budget: usize) -> Result<Abelianization> {
    let n = alg.size;
    ensure_maltsev(n, p)?;
    if !is_abelian(alg, p)? {
        return Err(Error::NotAbelian);
    }
    let c1 = term_clone(alg, 1, budget)?;
    let c2 = term_clone(alg, 2, budget)?;
    let pv = |x: usize, y: usize, z: usize| p.table[(x * n + y) * n + z];
    let convex: Vec<TermOp> = c2.members.iter().filter(|t| (0..n).all(|a| t.table[a * n + a] == a)).cloned().collect();
    let unary = c1.members.clone();
    let r_index: HashMap<&[usize], usize> = convex.iter().enumerate().map(|(i, t)| (t.table.as_slice(), i)).collect();
    let m_index: HashMap<&[usize], usize> = unary.iter().enumerate().map(|(i, t)| (t.table.as_slice(), i)).collect();
    let find_r = |t: Vec<usize>| {
        r_index.get(t.as_slice()).copied().ok_or_else(|| Error::Internal("convex operations are not closed".into()))
    };
    let find_m = |t: Vec<usize>| {
        m_index.get(t.as_slice()).copied().ok_or_else(|| Error::Internal("unary operations are not closed".into()))
    };
    let rs = convex.len();
    let ms = unary.len();
    let bin = |f: &dyn Fn(usize, usize) -> usize| -> Vec<usize> {
        (0..n * n).map(|i| f(i / n.max(1), i % n.max(1))).collect()
    };
    let mut radd = Vec::with_capacity(rs * rs);
    let mut rmul = Vec::with_capacity(rs * rs);
    for r in &convex {
        for s in &convex {
            radd.push(find_r(bin(&|a, b| pv(r.table[a * n + b], a, s.table[a * n + b])))?);
            rmul.push(find_r(bin(&|a, b| r.table[a * n + s.table[a * n + b]]))?);
        }
    }
    let mut madd = Vec::with_capacity(ms * ms);
    for x in &unary {
        for y in &unary {
            madd.push(find_m((0..n).map(|a| pv(x.table[a], a, y.table[a])).collect())?);
        }
    }
    let mut act = Vec::with_capacity(rs * ms);
    for r in &convex {
        for x in &unary {
            act.push(find_m((0..n).map(|a| r.table[a * n + x.table[a]]).collect())?);
        }
    }
    let mut d = Vec::with_capacity(ms);
    for x in &unary {
        d.push(find_r(bin(&|a, b| pv(x.table[a], x.table[b], b)))?);
    }
    let ring = FiniteRing::from_tables(rs, radd, rmul)?;
    let module = LeftModule::from_tables(&ring, ms, madd, act)?;
    let form = LinearForm::new(ring, module, d)?;
    Ok(Abelianization { form, unary, convex })
}

/// The free affinity over `∂` as an algebra, with its model tables.
pub fn realize(form: &LinearForm) -> (FiniteAlgebra, AffinityModel) {
    let model = AffinityModel::free(form);
    (model.to_algebra(form), model)
}

/// Outcome of [`roundtrip_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub isomorphic: bool,
    /// Ring part of the isomorphism, `R → R'`.
    pub ring_map: Vec<usize>,
    /// Module part, `M → M'`.
    pub module_map: Vec<usize>,
    /// `(arity, number of term operations)` for each arity compared.
    pub clone_sizes: Vec<(usize, usize)>,
    pub failure: Option<String>,
}

/// Largest realized carrier for which ternary clones are compared.
const TERNARY_CLONE_CARRIER_CAP: usize = 8;

/// Realizes the theory of `form` on its free affinity, confirms that the
/// term operations up to `arity_bound` are exactly the interpreted
/// `⟨x, r̄⟩`, abelianizes, and returns the isomorphism back to `form`.
pub fn roundtrip_check(form: &LinearForm, arity_bound: usize, budget: usize) -> Result<RoundtripReport> {
    let (alg, model) = realize(form);
    let mut clone_sizes = Vec::new();
    let mut failure = None;
    for k in 1..=arity_bound.min(3) {
        if k == 3 && alg.size > TERNARY_CLONE_CARRIER_CAP {
            break;
        }
        let clone = term_clone(&alg, k, budget)?;
        let mut interpreted: Vec<Vec<usize>> = hom_set(form, k).iter().map(|op| model.op_table(op)).collect();
        let total = interpreted.len();
        interpreted.sort();
        interpreted.dedup();
        let mut generated: Vec<Vec<usize>> = clone.members.iter().map(|t| t.table.clone()).collect();
        generated.sort();
        clone_sizes.push((k, clone.len()));
        if interpreted.len() != total {
            failure.get_or_insert_with(|| format!("distinct {k}-ary operations coincide on the carrier"));
        } else if interpreted != generated {
            failure.get_or_insert_with(|| format!("{k}-ary term operations differ from the interpreted hom-set"));
        }
    }
    let p = maltsev_term_from(&alg, Term::op("m", vec![Term::var(0), Term::var(1), Term::var(2)]))?;
    let ab = abelianize(&alg, &p, budget)?;
    let r_index: HashMap<&[usize], usize> = ab.convex.iter().enumerate().map(|(i, t)| (t.table.as_slice(), i)).collect();
    let m_index: HashMap<&[usize], usize> = ab.unary.iter().enumerate().map(|(i, t)| (t.table.as_slice(), i)).collect();
    let ring_map: Vec<usize> = (0..form.ring.size)
        .map(|r| r_index.get(model.op_table(&AffinityOp::new(form.module.zero, vec![r])).as_slice()).copied().unwrap_or(usize::MAX))
        .collect();
    let module_map: Vec<usize> = (0..form.module.size)
        .map(|x| m_index.get(model.op_table(&AffinityOp::new(x, vec![])).as_slice()).copied().unwrap_or(usize::MAX))
        .collect();
    if failure.is_none() {
        failure = iso_failure(form, &ab.form, &ring_map, &module_map);
    }
    Ok(RoundtripReport { isomorphic: failure.is_none(), ring_map, module_map, clone_sizes, failure })
}

/// Why `(f, g)` fails to be an isomorphism of linear forms, if it does.
pub fn iso_failure(a: &LinearForm, b: &LinearForm, f: &[usize], g: &[usize]) -> Option<String> {
    let bijective = |map: &[usize], n: usize| {
        let mut seen = vec![false; n];
        map.len() == n && map.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    };
    if !bijective(f, b.ring.size) {
        return Some("ring map is not a bijection".into());
    }
    if !bijective(g, b.module.size) {
        return Some("module map is not a bijection".into());
    }
    if !a.ring.is_hom(&b.ring, f) {
        return Some("ring map is not a unital ring homomorphism".into());
    }
    if !a.module.group.is_additive(&b.module.group, g) {
        return Some("module map is not additive".into());
    }
    for r in 0..a.ring.size {
        for x in 0..a.module.size {
            if g[a.module.scale(r, x)] != b.module.scale(f[r], g[x]) {
                return Some(format!("module map is not equivariant at r={r}, x={x}"));
            }
        }
    }
    for x in 0..a.module.size {
        if f[a.d[x]] != b.d[g[x]] {
            return Some(format!("maps do not commute with the forms at x={x}"));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    fn z2_into_z4() -> LinearForm {
        let z4 = FiniteRing::zmod(4);
        let m = LeftModule::from_tables(&z4, 2, vec![0, 1, 1, 0], (0..8).map(|i| (i / 2 % 2) * (i % 2)).collect()).unwrap();
        LinearForm::new(z4, m, vec![0, 2]).unwrap()
    }

    #[test]
    fn projections_are_units() {
        let form = LinearForm::identity(&FiniteRing::zmod(4));
        let outer = AffinityOp::new(3, vec![1, 2]);
        let proj: Vec<_> = (0..3).map(|i| AffinityOp::projection(&form, 3, i)).collect();
        assert_eq!(compose_affinity(&outer, &proj, &form).unwrap(), outer);
        for (i, pr) in proj.iter().enumerate() {
            let args = vec![AffinityOp::new(1, vec![2, 3]), AffinityOp::new(2, vec![0, 1]), AffinityOp::new(0, vec![3, 3])];
            assert_eq!(compose_affinity(pr, &args, &form).unwrap(), args[i]);
        }
    }

    #[test]
    fn arity_mismatch() {
        let form = LinearForm::identity(&FiniteRing::zmod(2));
        let e = compose_affinity(&AffinityOp::new(0, vec![1]), &[AffinityOp::new(0, vec![])], &form);
        assert!(matches!(e, Err(Error::Arity(_))));
    }

    #[test]
    fn canonical_model_satisfies_axioms() {
        for form in [LinearForm::identity(&FiniteRing::zmod(2)), z2_into_z4(), LinearForm::zero_module(&FiniteRing::zmod(3))] {
            assert_eq!(affinity_axiom_check(&AffinityModel::canonical(&form), &form).unwrap(), None);
            assert_eq!(affinity_axiom_check(&AffinityModel::free(&form), &form).unwrap(), None);
        }
    }

    #[test]
    fn constant_action_breaks_distributivity() {
        let form = LinearForm::identity(&FiniteRing::zmod(2));
        let mut model = AffinityModel::canonical(&form);
        let n = model.size;
        for r in 0..2 {
            for a in 0..n {
                for b in 0..n {
                    model.act[(r * n + a) * n + b] = b;
                }
            }
        }
        let w = affinity_axiom_check(&model, &form).unwrap().unwrap();
        assert!(w.contains("(r + s)_a b"), "{w}");
    }

    #[test]
    fn pseudoconstants_examples() {
        assert!(LinearForm::zero_module(&FiniteRing::zmod(2)).pseudoconstants().is_empty());
        assert_eq!(LinearForm::identity(&FiniteRing::zmod(2)).pseudoconstants(), vec![1]);
        assert!(z2_into_z4().pseudoconstants().is_empty());
    }

    #[test]
    fn realized_free_affinity_roundtrips() {
        for form in [LinearForm::zero_module(&FiniteRing::zmod(2)), LinearForm::identity(&FiniteRing::zmod(2)), z2_into_z4()] {
            let rep = roundtrip_check(&form, 3, 100_000).unwrap();
            assert!(rep.isomorphic, "{:?}", rep.failure);
        }
    }
}
