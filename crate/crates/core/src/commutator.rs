//! Centrality, the commutator of congruences, and central series.
//!
//! Every entry point takes an explicit Maltsev term operation `p` of the
//! algebra; non-Maltsev input is rejected.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{decode_into, quotient, table_len, FiniteAlgebra, OpSource};
use crate::congruence::{all_congruences, cg, join, meet, pullback, quotient_congruence, Congruence};
use crate::error::{Error, Result};
use crate::maltsev::{check_associative, ensure_maltsev, TernaryTable};
use crate::term::TermOp;

/// A congruence `R` viewed as a subalgebra of `M × M`, evaluated lazily.
/// Element `i` is the pair `pairs[i]`, listed in lexicographic order.
pub struct PairAlgebra<'a> {
    alg: &'a FiniteAlgebra,
    pairs: Vec<(usize, usize)>,
    index: Vec<usize>,
}

impl<'a> PairAlgebra<'a> {
    pub fn new(alg: &'a FiniteAlgebra, r: &Congruence) -> Self {
        let n = alg.size;
        let mut pairs = Vec::new();
        let mut index = vec![usize::MAX; n * n];
        for x in 0..n {
            for y in 0..n {
                if r.related(x, y) {
                    index[x * n + y] = pairs.len();
                    pairs.push((x, y));
                }
            }
        }
        PairAlgebra { alg, pairs, index }
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn index_of(&self, x: usize, y: usize) -> usize {
        self.index[x * self.alg.size + y]
    }
}

impl OpSource for PairAlgebra<'_> {
    fn size(&self) -> usize {
        self.pairs.len()
    }

    fn signature(&self) -> Vec<(String, usize)> {
        self.alg.signature()
    }

    fn arity(&self, op: usize) -> usize {
        self.alg.ops[op].arity
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        let k = args.len();
        let (mut fst, mut snd) = ([0usize; 8], [0usize; 8]);
        let (mut fv, mut sv);
        let (f, s): (&mut [usize], &mut [usize]) = if k <= 8 {
            (&mut fst[..k], &mut snd[..k])
        } else {
            fv = vec![0; k];
            sv = vec![0; k];
            (&mut fv[..], &mut sv[..])
        };
        for (i, &a) in args.iter().enumerate() {
            (f[i], s[i]) = self.pairs[a];
        }
        let o = &self.alg.ops[op];
        self.index_of(o.apply(self.alg.size, f), o.apply(self.alg.size, s))
    }
}

/// First violation of the centrality conditions for `R`, `S` with respect
/// to the Maltsev operation `p`, or `None` if they centralize each other.
///
/// On `D = {(x,y,z) : x R y, y S z}` the operation `p` must satisfy
/// `x S p(x,y,z) R z` and commute with every basic operation applied to
/// tuples of elements of `D`.
pub fn centrality_witness(alg: &FiniteAlgebra, r: &Congruence, s: &Congruence, p: &TermOp) -> Result<Option<String>> {
    let n = alg.size;
    ensure_maltsev(n, p)?;
    let pv = |x: usize, y: usize, z: usize| p.table[(x * n + y) * n + z];
    let mut dom = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if !r.related(x, y) {
                continue;
            }
            for z in 0..n {
                if s.related(y, z) {
                    dom.push((x, y, z));
                }
            }
        }
    }
    for &(x, y, z) in &dom {
        let v = pv(x, y, z);
        if !s.related(x, v) || !r.related(v, z) {
            return Ok(Some(format!("p({x},{y},{z}) = {v} is not S-related to {x} and R-related to {z}")));
        }
    }
    for op in &alg.ops {
        let k = op.arity;
        if k == 0 {
            continue;
        }
        let d = dom.len();
        let total = table_len(d, k);
        let first = (0..total).into_par_iter().find_map_first(|idx| {
            let mut pick = vec![0; k];
            decode_into(idx, d, &mut pick);
            let (mut xs, mut ys, mut zs, mut vs) = (vec![0; k], vec![0; k], vec![0; k], vec![0; k]);
            for (i, &j) in pick.iter().enumerate() {
                let (x, y, z) = dom[j];
                (xs[i], ys[i], zs[i]) = (x, y, z);
                vs[i] = pv(x, y, z);
            }
            let lhs = pv(op.apply(n, &xs), op.apply(n, &ys), op.apply(n, &zs));
            let rhs = op.apply(n, &vs);
            (lhs != rhs).then(|| {
                let triples: Vec<_> = pick.iter().map(|&j| dom[j]).collect();
                format!("p does not commute with `{}` on triples {triples:?}: {lhs} vs {rhs}", op.name)
            })
        });
        if first.is_some() {
            return Ok(first);
        }
    }
    Ok(None)
}

/// Whether `R` and `S` centralize each other.
pub fn centralize(alg: &FiniteAlgebra, r: &Congruence, s: &Congruence, p: &TermOp) -> Result<bool> {
    Ok(centrality_witness(alg, r, s, p)?.is_none())
}

/// [`centralize`] for several Maltsev terms at once; the answers must agree.
pub fn centralize_all(alg: &FiniteAlgebra, r: &Congruence, s: &Congruence, ps: &[TermOp]) -> Result<bool> {
    let mut answer = None;
    for p in ps {
        let a = centralize(alg, r, s, p)?;
        if answer.is_some_and(|b| b != a) {
            return Err(Error::Internal("centrality depends on the choice of Maltsev term".into()));
        }
        answer = Some(a);
    }
    answer.ok_or_else(|| Error::Invalid("no Maltsev term supplied".into()))
}

/// The commutator `[R, S]`.
///
/// On the algebra of `R`-pairs, take the congruence generated by
/// `((y,y),(z,z))` for `y S z`; the commutator consists of the pairs
/// `(y, y')` for which some `(x,y)` and `(x,y')` are related there.
pub fn commutator(alg: &FiniteAlgebra, r: &Congruence, s: &Congruence, p: &TermOp) -> Result<Congruence> {
    let n = alg.size;
    ensure_maltsev(n, p)?;
    let pa = PairAlgebra::new(alg, r);
    let mut gens = Vec::new();
    for (y, z) in s.pairs() {
        gens.push((pa.index_of(y, y), pa.index_of(z, z)));
    }
    let delta = cg(&pa, &gens);
    let mut rel = vec![false; n * n];
    for i in 0..pa.size() {
        let (x, y) = pa.pair(i);
        for y2 in 0..n {
            if r.related(x, y2) && delta.related(i, pa.index_of(x, y2)) {
                rel[y * n + y2] = true;
            }
        }
    }
    relation_to_congruence(alg, n, &rel)
}

/// Converts a relation to a congruence, failing if it is not one.
fn relation_to_congruence(alg: &FiniteAlgebra, n: usize, rel: &[bool]) -> Result<Congruence> {
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for a in 0..n {
        if labels[a] == usize::MAX {
            for b in a..n {
                if rel[a * n + b] {
                    labels[b] = next;
                }
            }
            next += 1;
        }
    }
    if labels.contains(&usize::MAX) {
        return Err(Error::Internal("commutator relation is not reflexive".into()));
    }
    let theta = Congruence::from_labels(&labels);
    for a in 0..n {
        for b in 0..n {
            if theta.related(a, b) != rel[a * n + b] {
                return Err(Error::Internal(format!("commutator relation is not an equivalence at ({a},{b})")));
            }
        }
    }
    if let Some(w) = theta.compatibility_witness(alg) {
        return Err(Error::Internal(format!("commutator relation is not a congruence: {w}")));
    }
    Ok(theta)
}

/// The commutator as the least `T` for which `R/T` and `S/T` centralize
/// each other in `M/T`, by enumerating the congruence lattice.
pub fn commutator_oracle(
    alg: &FiniteAlgebra,
    r: &Congruence,
    s: &Congruence,
    p: &TermOp,
    budget: usize,
    size_cap: usize,
) -> Result<Congruence> {
    ensure_maltsev(alg.size, p)?;
    let lattice = all_congruences(alg, budget, size_cap)?;
    let mut out = Congruence::nabla(alg.size);
    for t in &lattice {
        let (q, _) = quotient(alg, t)?;
        let pq = p.on_quotient(t);
        if centralize(&q, &quotient_congruence(r, t), &quotient_congruence(s, t), &pq)? {
            out = meet(&out, t);
        }
    }
    Ok(out)
}

/// The largest congruence `Z` with `[∇, Z] = Δ`.
pub fn center(alg: &FiniteAlgebra, p: &TermOp) -> Result<Congruence> {
    let n = alg.size;
    let nabla = Congruence::nabla(n);
    let delta = Congruence::delta(n);
    let mut principals: Vec<Congruence> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let t = cg(alg, &[(a, b)]);
            if !principals.contains(&t) {
                principals.push(t);
            }
        }
    }
    let mut z = delta.clone();
    let mut central = vec![false; principals.len()];
    for (i, t) in principals.iter().enumerate() {
        if commutator(alg, &nabla, t, p)? == delta {
            central[i] = true;
            z = join(alg, &z, t);
        }
    }
    if commutator(alg, &nabla, &z, p)? != delta {
        return Err(Error::Internal("join of central principal congruences is not central".into()));
    }
    for (t, &c) in principals.iter().zip(&central) {
        if !c && t.le(&z) {
            return Err(Error::Internal("a non-central principal congruence lies below the center".into()));
        }
        if !c && commutator(alg, &nabla, &join(alg, &z, t), p)? == delta {
            return Err(Error::Internal("center is not maximal".into()));
        }
    }
    Ok(z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Lower,
    Upper,
}

/// A central series, listed from its first term until it stabilizes or the
/// step limit is reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub terms: Vec<Congruence>,
    pub stabilized: bool,
    /// First index at which the series reaches `Δ` (lower) or `∇` (upper).
    pub class: Option<usize>,
}

/// `∇ = Γ⁰ ≥ Γ¹ ≥ ...` with `Γⁿ⁺¹ = [∇, Γⁿ]`.
pub fn lower_series(alg: &FiniteAlgebra, p: &TermOp, max_steps: usize) -> Result<SeriesReport> {
    let n = alg.size;
    let nabla = Congruence::nabla(n);
    let mut terms = vec![nabla.clone()];
    let mut stabilized = false;
    let limit = max_steps.min(n.max(1));
    for _ in 0..=limit {
        let last = terms.last().expect("series is non-empty");
        if last.is_delta() {
            stabilized = true;
            break;
        }
        let next = commutator(alg, &nabla, last, p)?;
        if &next == last {
            stabilized = true;
            break;
        }
        if terms.len() > limit {
            break;
        }
        terms.push(next);
    }
    let class = terms.iter().position(Congruence::is_delta);
    Ok(SeriesReport { kind: SeriesKind::Lower, terms, stabilized, class })
}

/// `Δ = ζ⁰ ≤ ζ¹ ≤ ...` with `ζⁿ⁺¹/ζⁿ` the center of `M/ζⁿ`.
pub fn upper_series(alg: &FiniteAlgebra, p: &TermOp, max_steps: usize) -> Result<SeriesReport> {
    let n = alg.size;
    let mut terms = vec![Congruence::delta(n)];
    let mut stabilized = false;
    let limit = max_steps.min(n.max(1));
    for _ in 0..=limit {
        let last = terms.last().expect("series is non-empty").clone();
        if last.is_nabla() {
            stabilized = true;
            break;
        }
        let (q, _) = quotient(alg, &last)?;
        let zq = center(&q, &p.on_quotient(&last))?;
        let next = pullback(&zq, &last);
        if next == last {
            stabilized = true;
            break;
        }
        if terms.len() > limit {
            break;
        }
        terms.push(next);
    }
    let class = terms.iter().position(Congruence::is_nabla);
    Ok(SeriesReport { kind: SeriesKind::Upper, terms, stabilized, class })
}

/// Largest total cost (domain tuples times operations) for which
/// [`is_abelian`] also runs the exhaustive centrality test.
const EXHAUSTIVE_ABELIAN_LIMIT: usize = 5_000_000;

/// `[∇, ∇] = Δ`, cross-checked against associativity of `p` and, when cheap
/// enough, against the exhaustive centrality test.
pub fn is_abelian(alg: &FiniteAlgebra, p: &TermOp) -> Result<bool> {
    let n = alg.size;
    let nabla = Congruence::nabla(n);
    let abelian = commutator(alg, &nabla, &nabla, p)?.is_delta();
    if abelian && !check_associative(&TernaryTable::from_term_op(n, p))? {
        return Err(Error::Internal("abelian algebra with a non-associative Maltsev term".into()));
    }
    let cost: usize = alg
        .ops
        .iter()
        .map(|o| (n * n * n).checked_pow(o.arity as u32).unwrap_or(usize::MAX))
        .fold(0usize, |a, b| a.saturating_add(b));
    if cost <= EXHAUSTIVE_ABELIAN_LIMIT && centralize(alg, &nabla, &nabla, p)? != abelian {
        return Err(Error::Internal("commutator and centrality test disagree on abelianness".into()));
    }
    Ok(abelian)
}

/// Nilpotence class from the lower series, checked against the upper one.
pub fn nilpotence_class(alg: &FiniteAlgebra, p: &TermOp, max_steps: usize) -> Result<Option<usize>> {
    let lower = lower_series(alg, p, max_steps)?;
    let upper = upper_series(alg, p, max_steps)?;
    if lower.stabilized && upper.stabilized && lower.class != upper.class {
        return Err(Error::Internal(format!(
            "lower series gives class {:?}, upper series {:?}",
            lower.class, upper.class
        )));
    }
    Ok(lower.class)
}
