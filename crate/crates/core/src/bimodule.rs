//! `∂`-bimodules, derivations, extension diagrams of linear forms and the
//! Maltsev lift along them.
//!
//! A `∂`-bimodule over `∂: M → R` is `B ⊗_R M → K → B`: an `R`-`R`-bimodule
//! `B`, a left module `K`, a linear `δ: K → B` and a balanced linear
//! `·: B × M → K` with `δ(b·m) = b ∂m`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{compose_affinity, is_maltsev_op, AffinityModel, AffinityOp, LinearForm};
use crate::error::{Error, Result};
use crate::maltsev::{check_maltsev, Domain, TernaryTable};
use crate::ring::{additive_homs, law, AbGroup, Bimodule, FiniteRing, LeftModule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DBimodule {
    pub b: Bimodule,
    pub k: LeftModule,
    /// `δ: K → B`.
    pub delta: Vec<usize>,
    /// `dot[b * |M| + m] = b·m`.
    pub dot: Vec<usize>,
    pub m_size: usize,
}

impl DBimodule {
    /// Validates every law against `form`.
    pub fn new(form: &LinearForm, b: Bimodule, k: LeftModule, delta: Vec<usize>, dot: Vec<usize>) -> Result<Self> {
        let (ring, module) = (&form.ring, &form.module);
        if b.ring != *ring || k.ring != *ring {
            return Err(Error::Invalid("B and K must be over the ring of the form".into()));
        }
        let ms = module.size;
        if delta.len() != k.size || delta.iter().any(|&v| v >= b.size) {
            return Err(Error::Invalid("δ table has the wrong length or leaves B".into()));
        }
        if dot.len() != b.size * ms || dot.iter().any(|&v| v >= k.size) {
            return Err(Error::Invalid("dot table has the wrong length or leaves K".into()));
        }
        let bim = DBimodule { b, k, delta, dot, m_size: ms };
        let (b, k) = (&bim.b, &bim.k);
        for x in 0..k.size {
            for y in 0..k.size {
                if bim.delta[k.plus(x, y)] != b.plus(bim.delta[x], bim.delta[y]) {
                    return Err(law("δ(k + k') = δk + δk'", format!("k={x}, k'={y}")));
                }
            }
            for r in 0..ring.size {
                if bim.delta[k.scale(r, x)] != b.lmul(r, bim.delta[x]) {
                    return Err(law("δ(rk) = rδk", format!("r={r}, k={x}")));
                }
            }
        }
        for x in 0..b.size {
            for m in 0..ms {
                for y in 0..b.size {
                    if bim.act(b.plus(x, y), m) != k.plus(bim.act(x, m), bim.act(y, m)) {
                        return Err(law("(b + b')·m = b·m + b'·m", format!("b={x}, b'={y}, m={m}")));
                    }
                }
                for m2 in 0..ms {
                    if bim.act(x, module.plus(m, m2)) != k.plus(bim.act(x, m), bim.act(x, m2)) {
                        return Err(law("b·(m + m') = b·m + b·m'", format!("b={x}, m={m}, m'={m2}")));
                    }
                }
                for r in 0..ring.size {
                    if bim.act(b.rmul(x, r), m) != bim.act(x, module.scale(r, m)) {
                        return Err(law("(br)·m = b·(rm)", format!("b={x}, r={r}, m={m}")));
                    }
                    if bim.act(b.lmul(r, x), m) != k.scale(r, bim.act(x, m)) {
                        return Err(law("(rb)·m = r(b·m)", format!("r={r}, b={x}, m={m}")));
                    }
                }
                if bim.delta[bim.act(x, m)] != b.rmul(x, form.d[m]) {
                    return Err(law("δ(b·m) = b∂m", format!("b={x}, m={m}")));
                }
            }
        }
        Ok(bim)
    }

    #[inline]
    pub fn act(&self, b: usize, m: usize) -> usize {
        self.dot[b * self.m_size + m]
    }

    /// `0 → 0 → 0`.
    pub fn zero(form: &LinearForm) -> Self {
        let ring = &form.ring;
        DBimodule::new(form, Bimodule::zero(ring), LeftModule::zero(ring), vec![0], vec![0; form.module.size])
            .expect("zero bimodule")
    }

    /// `K[1] = (0 → K → 0)`.
    pub fn shift(form: &LinearForm, k: LeftModule) -> Result<Self> {
        let ring = &form.ring;
        let dot = vec![k.zero; form.module.size];
        DBimodule::new(form, Bimodule::zero(ring), k.clone(), vec![0; k.size], dot)
    }

    /// `𝒞(B) = (B ⊗_R M → B ⊗_R R ≅ B = B)`: `K = B ⊗_R M`,
    /// `δ(b ⊗ m) = b∂m`, `b·m = b ⊗ m`.
    ///
    /// `B ⊗_R M` is built inside `(Z/e)^β`, one coordinate per balanced
    /// biadditive map `β: B × M → Z/e`, `e` the exponent of `B`; these
    /// characters separate its points.
    pub fn cone(form: &LinearForm, b: &Bimodule, budget: usize) -> Result<Self> {
        let (ring, module) = (&form.ring, &form.module);
        if b.ring != *ring {
            return Err(Error::Invalid("B must be over the ring of the form".into()));
        }
        let e = exponent(&b.group);
        let ze = AbGroup::cyclic(e);
        let chars_m = additive_homs(&module.group, &ze, budget)?;
        let index: HashMap<&[usize], usize> = chars_m.iter().enumerate().map(|(i, h)| (h.as_slice(), i)).collect();
        let hs = chars_m.len();
        let mut h_add = Vec::with_capacity(hs * hs);
        for f in &chars_m {
            for g in &chars_m {
                let sum: Vec<usize> = f.iter().zip(g).map(|(a, c)| ze.plus(*a, *c)).collect();
                h_add.push(index[sum.as_slice()]);
            }
        }
        let h_group = AbGroup::from_table(hs, h_add)?;
        let beta = |h: &[usize], x: usize, m: usize| chars_m[h[x]][m];
        let balanced: Vec<Vec<usize>> = additive_homs(&b.group, &h_group, budget)?
            .into_iter()
            .filter(|h| {
                (0..b.size).all(|x| {
                    (0..ring.size)
                        .all(|r| (0..module.size).all(|m| beta(h, b.rmul(x, r), m) == beta(h, x, module.scale(r, m))))
                })
            })
            .collect();
        let ms = module.size;
        let pure: Vec<Vec<usize>> = (0..b.size * ms)
            .map(|i| balanced.iter().map(|h| beta(h, i / ms, i % ms)).collect())
            .collect();
        let add_vec = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().zip(y).map(|(a, c)| ze.plus(*a, *c)).collect() };

        // Closure from zero, remembering for each element the pure tensor
        // added last.
        let mut elems: Vec<Vec<usize>> = vec![vec![0; balanced.len()]];
        let mut recipe: Vec<Option<(usize, usize)>> = vec![None];
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::from([(elems[0].clone(), 0)]);
        let mut head = 0;
        while head < elems.len() {
            for (g, v) in pure.iter().enumerate() {
                let next = add_vec(&elems[head], v);
                if !seen.contains_key(&next) {
                    if elems.len() >= budget {
                        return Err(Error::SearchBudgetExceeded(format!("tensor product exceeds {budget} elements")));
                    }
                    seen.insert(next.clone(), elems.len());
                    elems.push(next);
                    recipe.push(Some((head, g)));
                }
            }
            head += 1;
        }
        let n = elems.len();
        let mut add = Vec::with_capacity(n * n);
        for x in &elems {
            for y in &elems {
                add.push(seen[&add_vec(x, y)]);
            }
        }
        let plus = |x: usize, y: usize| add[x * n + y];
        let mut act = vec![0; ring.size * n];
        for r in 0..ring.size {
            for x in 1..n {
                let (prev, g) = recipe[x].expect("non-zero elements have a recipe");
                let moved = seen[&pure[b.lmul(r, g / ms) * ms + g % ms]];
                act[r * n + x] = plus(act[r * n + prev], moved);
            }
        }
        let mut delta = vec![b.zero; n];
        for x in 1..n {
            let (prev, g) = recipe[x].expect("non-zero elements have a recipe");
            delta[x] = b.plus(delta[prev], b.rmul(g / ms, form.d[g % ms]));
        }
        let dot = pure.iter().map(|v| seen[v]).collect();
        let k = LeftModule::from_tables(ring, n, add.clone(), act)?;
        DBimodule::new(form, b.clone(), k, delta, dot)
    }
}

fn exponent(g: &AbGroup) -> usize {
    (0..g.size)
        .map(|x| (1..=g.size).find(|&t| g.times(t, x) == g.zero).unwrap_or(1))
        .max()
        .unwrap_or(1)
}

/// A pair `(d: R → B, ∇: M → K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Derivation {
    pub d: Vec<usize>,
    pub nabla: Vec<usize>,
}

impl Derivation {
    pub fn plus(&self, other: &Derivation, bim: &DBimodule) -> Derivation {
        Derivation {
            d: self.d.iter().zip(&other.d).map(|(a, c)| bim.b.plus(*a, *c)).collect(),
            nabla: self.nabla.iter().zip(&other.nabla).map(|(a, c)| bim.k.plus(*a, *c)).collect(),
        }
    }

    pub fn is_zero(&self, bim: &DBimodule) -> bool {
        self.d.iter().all(|&v| v == bim.b.zero) && self.nabla.iter().all(|&v| v == bim.k.zero)
    }
}

/// Names the first failing derivation identity, additivity included.
pub fn derivation_failure(form: &LinearForm, bim: &DBimodule, der: &Derivation) -> Option<String> {
    let (ring, module, b, k) = (&form.ring, &form.module, &bim.b, &bim.k);
    if !ring.group.is_additive(&b.group, &der.d) {
        return Some("d is not additive".into());
    }
    if !module.group.is_additive(&k.group, &der.nabla) {
        return Some("∇ is not additive".into());
    }
    for m in 0..module.size {
        if der.d[form.d[m]] != bim.delta[der.nabla[m]] {
            return Some(format!("`d∂ = δ∇` fails at m={m}"));
        }
    }
    for r in 0..ring.size {
        for s in 0..ring.size {
            if der.d[ring.times(r, s)] != b.plus(b.rmul(der.d[r], s), b.lmul(r, der.d[s])) {
                return Some(format!("`d(rs) = d(r)s + rd(s)` fails at r={r}, s={s}"));
            }
        }
        for m in 0..module.size {
            if der.nabla[module.scale(r, m)] != k.plus(bim.act(der.d[r], m), k.scale(r, der.nabla[m])) {
                return Some(format!("`∇(rm) = d(r)m + r∇(m)` fails at r={r}, m={m}"));
            }
        }
    }
    None
}

/// `ad(k)`: `d_k(r) = rδk − δk r`, `∇_k(m) = ∂(m)k − δ(k)·m`.
pub fn inner_derivation(form: &LinearForm, bim: &DBimodule, k: usize) -> Derivation {
    let dk = bim.delta[k];
    let d = (0..form.ring.size).map(|r| bim.b.minus(bim.b.lmul(r, dk), bim.b.rmul(dk, r))).collect();
    let nabla = (0..form.module.size).map(|m| bim.k.minus(bim.k.scale(form.d[m], k), bim.act(dk, m))).collect();
    Derivation { d, nabla }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationReport {
    pub der: Vec<Derivation>,
    pub ider: Vec<Derivation>,
    /// `{c ∈ K : (∂m)c = (δc)·m for all m}`.
    pub h0: Vec<usize>,
    /// `{k ∈ K : ad(k) = 0}`.
    pub ker_ad: Vec<usize>,
    pub h1_order: usize,
    /// One derivation per coset of `Ider` in `Der`.
    pub h1_reps: Vec<Derivation>,
    /// `|H⁰| |Der| = |K| |H¹|`.
    pub identity_holds: bool,
}

/// Enumerates `Der(∂; δ)` over pairs of additive maps, pruned by images of
/// generators, then derives `Ider`, `H⁰` and `H¹`.
pub fn enumerate_derivations(form: &LinearForm, bim: &DBimodule, budget: usize) -> Result<DerivationReport> {
    let (ring, module, b, k) = (&form.ring, &form.module, &bim.b, &bim.k);
    let ds: Vec<Vec<usize>> = additive_homs(&ring.group, &b.group, budget)?
        .into_iter()
        .filter(|d| {
            (0..ring.size).all(|r| {
                (0..ring.size).all(|s| d[ring.times(r, s)] == b.plus(b.rmul(d[r], s), b.lmul(r, d[s])))
            })
        })
        .collect();
    let nablas = additive_homs(&module.group, &k.group, budget)?;
    if ds.len().saturating_mul(nablas.len()) > budget {
        return Err(Error::DerBudgetExceeded(budget));
    }
    let der: Vec<Derivation> = ds
        .par_iter()
        .map(|d| {
            nablas
                .iter()
                .filter(|nabla| {
                    (0..module.size).all(|m| {
                        d[form.d[m]] == bim.delta[nabla[m]]
                            && (0..ring.size).all(|r| {
                                nabla[module.scale(r, m)] == k.plus(bim.act(d[r], m), k.scale(r, nabla[m]))
                            })
                    })
                })
                .map(|nabla| Derivation { d: d.clone(), nabla: nabla.clone() })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let der_set: HashSet<&Derivation> = der.iter().collect();

    let mut ider = Vec::new();
    let mut seen = HashSet::new();
    let mut ker_ad = Vec::new();
    for c in 0..k.size {
        let ad = inner_derivation(form, bim, c);
        if !der_set.contains(&ad) {
            return Err(Error::Internal(format!("ad({c}) is not a derivation")));
        }
        if ad.is_zero(bim) {
            ker_ad.push(c);
        }
        if seen.insert(ad.clone()) {
            ider.push(ad);
        }
    }
    if ker_ad.len() * ider.len() != k.size {
        return Err(Error::Internal("ad is not a group homomorphism".into()));
    }
    let h0: Vec<usize> = (0..k.size)
        .filter(|&c| (0..module.size).all(|m| k.scale(form.d[m], c) == bim.act(bim.delta[c], m)))
        .collect();

    let mut covered: HashSet<Derivation> = HashSet::new();
    let mut h1_reps = Vec::new();
    for d in &der {
        if covered.contains(d) {
            continue;
        }
        for i in &ider {
            covered.insert(d.plus(i, bim));
        }
        h1_reps.push(d.clone());
    }
    let h1_order = h1_reps.len();
    if h1_order * ider.len() != der.len() {
        return Err(Error::Internal("inner derivations do not partition Der into cosets".into()));
    }
    let identity_holds = h0.len() * der.len() == k.size * h1_order;
    Ok(DerivationReport { der, ider, h0, ker_ad, h1_order, h1_reps, identity_holds })
}

/// A square of linear forms `∂': N → S` over `∂: M → R` along surjections
/// `p: S ↠ R`, `q: N ↠ M`, with kernels `B = ker p`, `K = ker q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramE {
    pub total: LinearForm,
    pub base: LinearForm,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

impl DiagramE {
    /// Checks that `p` is a surjective ring map, `q` a surjective
    /// `p`-semilinear map, and that the square commutes.
    pub fn new(total: LinearForm, base: LinearForm, p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        let (s, r) = (&total.ring, &base.ring);
        let (n, m) = (&total.module, &base.module);
        if p.len() != s.size || p.iter().any(|&x| x >= r.size) || !s.is_hom(r, &p) {
            return Err(Error::Diagram("p is not a ring homomorphism S → R".into()));
        }
        if (0..r.size).any(|x| !p.contains(&x)) {
            return Err(Error::Diagram("p is not surjective".into()));
        }
        if q.len() != n.size || q.iter().any(|&x| x >= m.size) || !n.group.is_additive(&m.group, &q) {
            return Err(Error::Diagram("q is not an additive map N → M".into()));
        }
        if (0..m.size).any(|x| !q.contains(&x)) {
            return Err(Error::Diagram("q is not surjective".into()));
        }
        for a in 0..s.size {
            for x in 0..n.size {
                if q[n.scale(a, x)] != m.scale(p[a], q[x]) {
                    return Err(Error::Diagram(format!("q(sn) ≠ p(s)q(n) at s={a}, n={x}")));
                }
            }
        }
        for x in 0..n.size {
            if base.d[q[x]] != p[total.d[x]] {
                return Err(Error::Diagram(format!("square does not commute at n={x}")));
            }
        }
        Ok(DiagramE { total, base, p, q })
    }

    pub fn kernel_b(&self) -> Vec<usize> {
        (0..self.total.ring.size).filter(|&x| self.p[x] == self.base.ring.zero).collect()
    }

    pub fn kernel_k(&self) -> Vec<usize> {
        (0..self.total.module.size).filter(|&x| self.q[x] == self.base.module.zero).collect()
    }

    /// The image of a total operation in the base theory.
    pub fn project_op(&self, op: &AffinityOp) -> AffinityOp {
        AffinityOp { m: self.q[op.m], r: op.r.iter().map(|&x| self.p[x]).collect() }
    }

    /// The least preimage of a base operation.
    pub fn section_op(&self, op: &AffinityOp) -> AffinityOp {
        let first = |map: &[usize], v: usize| map.iter().position(|&x| x == v).expect("surjective");
        AffinityOp { m: first(&self.q, op.m), r: op.r.iter().map(|&x| first(&self.p, x)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrextReport {
    /// `B² = 0` and `BK = 0`.
    pub torsor: bool,
    pub witness: Option<String>,
    /// Elements of `S` forming `B`, in the order used by the bimodule.
    pub b_elements: Vec<usize>,
    /// Elements of `N` forming `K`.
    pub k_elements: Vec<usize>,
    pub bimodule: Option<DBimodule>,
}

/// Decides whether the diagram is a torsor over its base and, if so,
/// returns the induced `∂`-bimodule: `rb = sb`, `br = bs`, `rk = sk`
/// for `p(s) = r`, `δ = ∂'|K` and `b·m = bn` for `q(n) = m`.
pub fn crext_check(diagram: &DiagramE) -> Result<CrextReport> {
    let (s, r) = (&diagram.total.ring, &diagram.base.ring);
    let (n, m) = (&diagram.total.module, &diagram.base.module);
    let b_el = diagram.kernel_b();
    let k_el = diagram.kernel_k();
    let mut report = CrextReport { torsor: false, witness: None, b_elements: b_el.clone(), k_elements: k_el.clone(), bimodule: None };
    for &x in &b_el {
        for &y in &b_el {
            if s.times(x, y) != s.zero {
                report.witness = Some(format!("B² ≠ 0: {x}·{y} = {} in S", s.times(x, y)));
                return Ok(report);
            }
        }
        for &k in &k_el {
            if n.scale(x, k) != n.zero {
                report.witness = Some(format!("BK ≠ 0: {x}·{k} = {} in N", n.scale(x, k)));
                return Ok(report);
            }
        }
    }
    let b_idx: HashMap<usize, usize> = b_el.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let k_idx: HashMap<usize, usize> = k_el.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let lifts = |map: &[usize], v: usize| -> Vec<usize> { (0..map.len()).filter(|&x| map[x] == v).collect() };
    let unique = |vals: Vec<usize>, what: &str| -> Result<usize> {
        if vals.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Internal(format!("{what} depends on the chosen preimage")));
        }
        Ok(vals[0])
    };
    let (bs, ks) = (b_el.len(), k_el.len());
    let mut add_b = Vec::with_capacity(bs * bs);
    for &x in &b_el {
        for &y in &b_el {
            add_b.push(b_idx[&s.plus(x, y)]);
        }
    }
    let mut left = Vec::with_capacity(r.size * bs);
    let mut act_k = Vec::with_capacity(r.size * ks);
    for rr in 0..r.size {
        let pre = lifts(&diagram.p, rr);
        for &x in &b_el {
            left.push(b_idx[&unique(pre.iter().map(|&a| s.times(a, x)).collect(), "rb")?]);
        }
        for &k in &k_el {
            act_k.push(k_idx[&unique(pre.iter().map(|&a| n.scale(a, k)).collect(), "rk")?]);
        }
    }
    let mut right = Vec::with_capacity(bs * r.size);
    for &x in &b_el {
        for rr in 0..r.size {
            let pre = lifts(&diagram.p, rr);
            right.push(b_idx[&unique(pre.iter().map(|&a| s.times(x, a)).collect(), "br")?]);
        }
    }
    let mut dot = Vec::with_capacity(bs * m.size);
    for &x in &b_el {
        for mm in 0..m.size {
            let pre = lifts(&diagram.q, mm);
            dot.push(k_idx[&unique(pre.iter().map(|&a| n.scale(x, a)).collect(), "b·m")?]);
        }
    }
    let delta = k_el.iter().map(|&k| b_idx[&diagram.total.d[k]]).collect();
    let b = Bimodule::from_tables(r, bs, add_b.clone(), left, right)?;
    let k = LeftModule::from_tables(r, ks, {
        let mut add_k = Vec::with_capacity(ks * ks);
        for &x in &k_el {
            for &y in &k_el {
                add_k.push(k_idx[&n.plus(x, y)]);
            }
        }
        add_k
    }, act_k)?;
    report.bimodule = Some(DBimodule::new(&diagram.base, b, k, delta, dot)?);
    report.torsor = true;
    Ok(report)
}

/// The split diagram `δ ⊕ ∂: K ⊕ M → B ⊕ R` with
/// `(b, r)(b', r') = (br' + rb', rr')` and `(b, r)(k, m) = (b·m + rk, rm)`.
/// Pairs are encoded `(b, r) ↦ b |R| + r` and `(k, m) ↦ k |M| + m`.
pub fn trivial_extension_diagram(form: &LinearForm, bim: &DBimodule) -> Result<DiagramE> {
    let (r, m, b, k) = (&form.ring, &form.module, &bim.b, &bim.k);
    let (rs, ms) = (r.size, m.size);
    let ss = b.size * rs;
    let mut s_add = Vec::with_capacity(ss * ss);
    let mut s_mul = Vec::with_capacity(ss * ss);
    for x in 0..ss {
        let (b1, r1) = (x / rs, x % rs);
        for y in 0..ss {
            let (b2, r2) = (y / rs, y % rs);
            s_add.push(b.plus(b1, b2) * rs + r.plus(r1, r2));
            s_mul.push(b.plus(b.rmul(b1, r2), b.lmul(r1, b2)) * rs + r.times(r1, r2));
        }
    }
    let s = FiniteRing::from_tables(ss, s_add, s_mul)?;
    let ns = k.size * ms;
    let mut n_add = Vec::with_capacity(ns * ns);
    for x in 0..ns {
        for y in 0..ns {
            n_add.push(k.plus(x / ms, y / ms) * ms + m.plus(x % ms, y % ms));
        }
    }
    let mut n_act = Vec::with_capacity(ss * ns);
    for a in 0..ss {
        let (b1, r1) = (a / rs, a % rs);
        for x in 0..ns {
            let (k1, m1) = (x / ms, x % ms);
            n_act.push(k.plus(bim.act(b1, m1), k.scale(r1, k1)) * ms + m.scale(r1, m1));
        }
    }
    let n = LeftModule::from_tables(&s, ns, n_add, n_act)?;
    let d = (0..ns).map(|x| bim.delta[x / ms] * rs + form.d[x % ms]).collect();
    let total = LinearForm::new(s.clone(), n, d)?;
    let p = (0..ss).map(|x| x % rs).collect();
    let q = (0..ns).map(|x| x % ms).collect();
    DiagramE::new(total, form.clone(), p, q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub preimage: AffinityOp,
    pub preimage_maltsev: bool,
    pub lifted: AffinityOp,
    /// Maltsev as an identity of the total theory.
    pub lifted_maltsev: bool,
    /// Maltsev as a table on the free affinity of the total form.
    pub carrier_maltsev: bool,
    pub projects_to_base: bool,
}

/// Lifts a Maltsev operation of the base theory along a torsor diagram.
///
/// With `m` a preimage of `m_image`, `x₁, x₃` the outer projections and
/// sums taken coordinatewise in `N × S × S`, the lift is
/// `m' = m + (m − m(x₁, x₁, m)) + (m(m, m, m) − m) + (m − m(m, x₃, x₃))`;
/// each bracket lies in the kernel. Without an explicit preimage, the
/// first non-Maltsev one among the least preimage and its shifts by single
/// kernel elements is used.
pub fn lift_maltsev(diagram: &DiagramE, m_image: &AffinityOp, preimage: Option<AffinityOp>) -> Result<LiftReport> {
    let report = crext_check(diagram)?;
    if !report.torsor {
        return Err(Error::Diagram(report.witness.unwrap_or_else(|| "not a torsor".into())));
    }
    m_image.validate(&diagram.base)?;
    if !is_maltsev_op(&diagram.base, m_image)? {
        return Err(Error::NotMaltsev(format!("{m_image} is not Maltsev over the base form")));
    }
    let total = &diagram.total;
    let (s, n) = (&total.ring, &total.module);
    let m = match preimage {
        Some(op) => {
            op.validate(total)?;
            if diagram.project_op(&op) != *m_image {
                return Err(Error::Invalid(format!("{op} does not project to {m_image}")));
            }
            op
        }
        None => {
            // The least preimage, or a kernel shift of it, whichever fails
            // to be Maltsev first.
            let least = diagram.section_op(m_image);
            let mut candidates = vec![least.clone()];
            for &kk in &report.k_elements {
                candidates.push(AffinityOp { m: n.plus(least.m, kk), ..least.clone() });
            }
            for slot in 0..least.r.len() {
                for &bb in &report.b_elements {
                    let mut op = least.clone();
                    op.r[slot] = s.plus(op.r[slot], bb);
                    candidates.push(op);
                }
            }
            let mut chosen = least;
            for op in candidates {
                if !is_maltsev_op(total, &op)? {
                    chosen = op;
                    break;
                }
            }
            chosen
        }
    };
    let x1 = AffinityOp::projection(total, 3, 0);
    let x3 = AffinityOp::projection(total, 3, 2);
    let a = compose_affinity(&m, &[x1.clone(), x1, m.clone()], total)?;
    let b = compose_affinity(&m, &[m.clone(), m.clone(), m.clone()], total)?;
    let c = compose_affinity(&m, &[m.clone(), x3.clone(), x3], total)?;
    // 2m − a + b − c
    let lifted = AffinityOp {
        m: n.plus(n.minus(n.plus(m.m, m.m), a.m), n.minus(b.m, c.m)),
        r: (0..2)
            .map(|i| s.plus(s.minus(s.plus(m.r[i], m.r[i]), a.r[i]), s.minus(b.r[i], c.r[i])))
            .collect(),
    };
    let model = AffinityModel::free(total);
    let table = model.op_table(&lifted);
    let size = model.size;
    let carrier = TernaryTable::from_fn(size, Domain::Full, |x, y, z| table[(x * size + y) * size + z]);
    Ok(LiftReport {
        preimage_maltsev: is_maltsev_op(total, &m)?,
        lifted_maltsev: is_maltsev_op(total, &lifted)?,
        carrier_maltsev: check_maltsev(&carrier)?,
        projects_to_base: diagram.project_op(&lifted) == *m_image,
        preimage: m,
        lifted,
    })
}
