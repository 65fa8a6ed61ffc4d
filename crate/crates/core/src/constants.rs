//! The theory `T_{R;K}` of `R`-modules under a fixed left module `K`.
//!
//! A morphism `X^n → X^k` is an `R`-linear map `R^k → K ⊕ R^n`, stored as
//! `k` rows `(κ_j, ρ_j)` with `κ_j ∈ K`, `ρ_j ∈ R^n`. On a module `A` with
//! a linear map `c: K → A` row `j` acts as `ā ↦ c(κ_j) + Σ ρ_{j,i} a_i`.
//! Forgetting `κ` gives a full functor onto `T_R`, a linear extension whose
//! fibers are `K^k` acted on by addition.

use serde::Serialize;

use crate::abelian::{hom_set, LinearForm};
use crate::algebra::{decode_into, table_len};
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, LeftModule};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConstRow {
    pub kappa: usize,
    pub rho: Vec<usize>,
}

/// A morphism `X^n → X^k` of `T_{R;K}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConstMorphism {
    pub source: usize,
    pub rows: Vec<ConstRow>,
}

impl ConstMorphism {
    pub fn target(&self) -> usize {
        self.rows.len()
    }

    /// The image in `T_R`: the `k × n` matrix of `ρ`s.
    pub fn project(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(|row| row.rho.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstTheory {
    pub ring: FiniteRing,
    pub k: LeftModule,
}

impl ConstTheory {
    pub fn new(ring: FiniteRing, k: LeftModule) -> Result<Self> {
        if k.ring != ring {
            return Err(Error::Invalid("K is a module over a different ring".into()));
        }
        Ok(ConstTheory { ring, k })
    }

    /// `|hom(X^n, X^k)| = (|K| |R|^n)^k`.
    pub fn hom_count(&self, n: usize, k: usize) -> usize {
        (self.k.size * table_len(self.ring.size, n)).pow(k as u32)
    }

    /// All rows `X^n → X`, `κ` most significant.
    pub fn rows(&self, n: usize) -> Vec<ConstRow> {
        let rs = table_len(self.ring.size, n);
        let mut rho = vec![0; n];
        let mut out = Vec::with_capacity(self.k.size * rs);
        for kappa in 0..self.k.size {
            for idx in 0..rs {
                decode_into(idx, self.ring.size, &mut rho);
                out.push(ConstRow { kappa, rho: rho.clone() });
            }
        }
        out
    }

    /// All morphisms `X^n → X^k`, first row most significant.
    pub fn morphisms(&self, n: usize, k: usize) -> Vec<ConstMorphism> {
        let rows = self.rows(n);
        let total = table_len(rows.len(), k);
        let mut pick = vec![0; k];
        (0..total)
            .map(|idx| {
                decode_into(idx, rows.len(), &mut pick);
                ConstMorphism { source: n, rows: pick.iter().map(|&i| rows[i].clone()).collect() }
            })
            .collect()
    }

    /// `(0, e_j)` in row `j`.
    pub fn identity(&self, n: usize) -> ConstMorphism {
        let rows = (0..n)
            .map(|j| {
                let mut rho = vec![self.ring.zero; n];
                rho[j] = self.ring.one;
                ConstRow { kappa: self.k.zero, rho }
            })
            .collect();
        ConstMorphism { source: n, rows }
    }

    /// `v ∘ u`: first `u: X^n → X^m`, then `v: X^m → X^k`.
    pub fn compose(&self, v: &ConstMorphism, u: &ConstMorphism) -> Result<ConstMorphism> {
        if v.source != u.target() {
            return Err(Error::Arity(format!("cannot follow a map into X^{} by one out of X^{}", u.target(), v.source)));
        }
        let (ring, k) = (&self.ring, &self.k);
        let rows = v
            .rows
            .iter()
            .map(|vr| {
                let mut kappa = vr.kappa;
                let mut rho = vec![ring.zero; u.source];
                for (coef, ur) in vr.rho.iter().zip(&u.rows) {
                    kappa = k.plus(kappa, k.scale(*coef, ur.kappa));
                    for (acc, x) in rho.iter_mut().zip(&ur.rho) {
                        *acc = ring.plus(*acc, ring.times(*coef, *x));
                    }
                }
                ConstRow { kappa, rho }
            })
            .collect();
        Ok(ConstMorphism { source: u.source, rows })
    }

    /// Fiber difference `e − e'` for `e, e'` over the same `T_R` map.
    fn difference(&self, e: &ConstMorphism, e2: &ConstMorphism) -> Vec<usize> {
        e.rows.iter().zip(&e2.rows).map(|(a, b)| self.k.minus(a.kappa, b.kappa)).collect()
    }

    /// Checks, for all arities up to `bound`, that composition is
    /// associative and unital, that forgetting `κ` is a functor, and the
    /// two linear-extension identities
    /// `e₁e₂ − e₁e₂' = P(e₁)(e₂ − e₂')` and `e₁e₂ − e₁'e₂ = (e₁ − e₁')P(e₂)`,
    /// where `P(e₁)` acts on `K^m` by its `ρ` matrix and the right action
    /// is trivial.
    pub fn check_linear_extension(&self, bound: usize) -> Result<Option<String>> {
        let (ring, k) = (&self.ring, &self.k);
        let arities: Vec<usize> = (0..=bound).collect();
        for &n in &arities {
            let id_n = self.identity(n);
            for &m in &arities {
                let us = self.morphisms(n, m);
                let id_m = self.identity(m);
                for u in &us {
                    if self.compose(&id_m, u)? != *u || self.compose(u, &id_n)? != *u {
                        return Ok(Some(format!("identity law fails for {u:?}")));
                    }
                }
                for &l in &arities {
                    let vs = self.morphisms(m, l);
                    for v in &vs {
                        for u in &us {
                            let vu = self.compose(v, u)?;
                            let pv = v.project();
                            let pu = u.project();
                            let expected: Vec<Vec<usize>> = pv
                                .iter()
                                .map(|row| {
                                    (0..n)
                                        .map(|c| {
                                            ring.group.sum(row.iter().zip(&pu).map(|(a, urow)| ring.times(*a, urow[c])))
                                        })
                                        .collect()
                                })
                                .collect();
                            if vu.project() != expected {
                                return Ok(Some(format!("projection is not a functor at v={v:?}, u={u:?}")));
                            }
                            let mut shift = vec![0; m.max(l)];
                            for idx in 0..table_len(k.size, m) {
                                decode_into(idx, k.size, &mut shift[..m]);
                                {
                                    let mut u2 = u.clone();
                                    for (r, sh) in u2.rows.iter_mut().zip(&shift) {
                                        r.kappa = k.plus(r.kappa, *sh);
                                    }
                                    let lhs = self.difference(&vu, &self.compose(v, &u2)?);
                                    let du = self.difference(u, &u2);
                                    let rhs: Vec<usize> = pv
                                        .iter()
                                        .map(|prow| k.group.sum(prow.iter().zip(&du).map(|(a, d)| k.scale(*a, *d))))
                                        .collect();
                                    if lhs != rhs {
                                        return Ok(Some(format!("`e₁e₂ − e₁e₂' = P(e₁)(e₂ − e₂')` fails at v={v:?}, u={u:?}, u'={u2:?}")));
                                    }
                                }
                            }
                            for idx in 0..table_len(k.size, l) {
                                decode_into(idx, k.size, &mut shift[..l]);
                                {
                                    let mut v2 = v.clone();
                                    for (r, sh) in v2.rows.iter_mut().zip(&shift) {
                                        r.kappa = k.plus(r.kappa, *sh);
                                    }
                                    let lhs = self.difference(&vu, &self.compose(&v2, u)?);
                                    if lhs != self.difference(v, &v2) {
                                        return Ok(Some(format!("`e₁e₂ − e₁'e₂ = (e₁ − e₁')P(e₂)` fails at v={v:?}, v'={v2:?}, u={u:?}")));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for &j in &arities {
            for &n in &arities {
                let ws = self.morphisms(j, n);
                for &m in &arities {
                    let us = self.morphisms(n, m);
                    for &l in &arities {
                        for v in self.morphisms(m, l) {
                            for u in &us {
                                let vu = self.compose(&v, u)?;
                                for w in &ws {
                                    if self.compose(&vu, w)? != self.compose(&v, &self.compose(u, w)?)? {
                                        return Ok(Some(format!("composition is not associative at v={v:?}, u={u:?}, w={w:?}")));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Compares `T_∂` with `T_{R; ker ∂}` for a form with a pseudoconstant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantsComparison {
    pub has_pseudoconstant: bool,
    /// `(n, |hom_{T_∂}(X^n, X)|, |hom_{T_{R;K}}(X^n, X)|)`.
    pub hom_counts: Vec<(usize, usize, usize)>,
    /// `T_∂` has no nullary operations, so the empty set is one of its
    /// models; `T_{R;K}` has `|K|` constants and no empty model. This
    /// difference is reported, not resolved.
    pub empty_model_differs: bool,
}

/// `ker ∂` as a submodule of `M`.
pub fn form_kernel(form: &LinearForm) -> Result<LeftModule> {
    let elems: Vec<usize> = (0..form.module.size).filter(|&x| form.d[x] == form.ring.zero).collect();
    form.module.submodule(&elems)
}

/// Hom-set sizes of `T_∂` and `T_{R; ker ∂}` up to arity `bound`. They
/// agree for `n ≥ 1` exactly when `∂` is surjective.
pub fn compare_with_constants(form: &LinearForm, bound: usize) -> Result<ConstantsComparison> {
    let theory = ConstTheory::new(form.ring.clone(), form_kernel(form)?)?;
    let hom_counts = (0..=bound).map(|n| (n, hom_set(form, n).len(), theory.hom_count(n, 1))).collect();
    Ok(ConstantsComparison {
        has_pseudoconstant: !form.pseudoconstants().is_empty(),
        hom_counts,
        empty_model_differs: true,
    })
}
