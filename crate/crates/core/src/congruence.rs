//! Congruences stored as canonical block labellings.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::algebra::{decode_into, table_len, OpSource};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// An equivalence relation on `{0..size}` given by block labels.
///
/// Labels are canonical: the block of element 0 is 0, and each new block
/// receives the next unused label in order of least element. Two congruences
/// are therefore equal exactly when their label vectors are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    block_index: Vec<usize>,
    #[serde(skip)]
    blocks: usize,
}

impl Congruence {
    /// Relabels an arbitrary labelling into canonical form.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut out = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = map.len();
            out.push(*map.entry(l).or_insert(next));
        }
        Congruence { blocks: map.len(), block_index: out }
    }

    /// Builds a partition from explicit blocks; every element must occur in
    /// exactly one block.
    pub fn from_blocks(size: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; size];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= size {
                    return Err(Error::Invalid(format!("element {e} outside carrier of size {size}")));
                }
                if labels[e] != usize::MAX {
                    return Err(Error::Invalid(format!("element {e} occurs in two blocks")));
                }
                labels[e] = b;
            }
        }
        if let Some(e) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Invalid(format!("element {e} is in no block")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn from_union_find(uf: &mut UnionFind) -> Self {
        let labels = uf.canonical_labels();
        let blocks = uf.class_count();
        Congruence { block_index: labels, blocks }
    }

    pub fn delta(size: usize) -> Self {
        Congruence { block_index: (0..size).collect(), blocks: size }
    }

    pub fn nabla(size: usize) -> Self {
        Congruence { block_index: vec![0; size], blocks: usize::from(size > 0) }
    }

    pub fn size(&self) -> usize {
        self.block_index.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_index(&self) -> &[usize] {
        &self.block_index
    }

    #[inline]
    pub fn block_of(&self, x: usize) -> usize {
        self.block_index[x]
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.block_index[a] == self.block_index[b]
    }

    pub fn is_delta(&self) -> bool {
        self.blocks == self.size()
    }

    pub fn is_nabla(&self) -> bool {
        self.blocks <= 1
    }

    /// Blocks as sorted element lists, in canonical block order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (e, &b) in self.block_index.iter().enumerate() {
            out[b].push(e);
        }
        out
    }

    /// Least element of each block.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.blocks];
        for (e, &b) in self.block_index.iter().enumerate() {
            if reps[b] == usize::MAX {
                reps[b] = e;
            }
        }
        reps
    }

    /// All related pairs `(a, b)` with `a != b`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.related(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// `self ⊆ other` as relations.
    pub fn le(&self, other: &Congruence) -> bool {
        let mut seen = vec![usize::MAX; self.blocks];
        for (e, &b) in self.block_index.iter().enumerate() {
            let o = other.block_index[e];
            if seen[b] == usize::MAX {
                seen[b] = o;
            } else if seen[b] != o {
                return false;
            }
        }
        true
    }

    /// Boolean relation matrix, row-major.
    pub fn as_relation(&self) -> Vec<bool> {
        let n = self.size();
        let mut rel = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                rel[a * n + b] = self.related(a, b);
            }
        }
        rel
    }

    /// Describes the first failure of compatibility with the operations.
    ///
    /// Uses the translation criterion: an equivalence is a congruence iff it
    /// is preserved by every basic operation with all but one argument fixed.
    pub fn compatibility_witness<A: OpSource + ?Sized>(&self, alg: &A) -> Option<String> {
        let n = alg.size();
        let reps = self.representatives();
        let sig = alg.signature();
        for (oi, (name, k)) in sig.iter().enumerate() {
            let k = *k;
            if k == 0 {
                continue;
            }
            let mut rest = vec![0; k - 1];
            let mut args = vec![0; k];
            for pos in 0..k {
                for idx in 0..table_len(n, k - 1) {
                    decode_into(idx, n, &mut rest);
                    for a in 0..n {
                        let r = reps[self.block_index[a]];
                        if r == a {
                            continue;
                        }
                        fill(&mut args, &rest, pos, a);
                        let va = alg.apply(oi, &args);
                        args[pos] = r;
                        let vr = alg.apply(oi, &args);
                        if !self.related(va, vr) {
                            return Some(format!(
                                "{name}: replacing {a} by {r} in argument {pos} of {args:?} moves {va} to an unrelated {vr}"
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_compatible<A: OpSource + ?Sized>(&self, alg: &A) -> bool {
        self.compatibility_witness(alg).is_none()
    }
}

#[inline]
fn fill(args: &mut [usize], rest: &[usize], pos: usize, value: usize) {
    let mut j = 0;
    for (i, slot) in args.iter_mut().enumerate() {
        if i == pos {
            *slot = value;
        } else {
            *slot = rest[j];
            j += 1;
        }
    }
}

/// Least congruence containing `pairs`.
///
/// Pairs whose classes get merged are queued and pushed through every basic
/// translation; union-find supplies the equivalence closure.
pub fn cg<A: OpSource + ?Sized>(alg: &A, pairs: &[(usize, usize)]) -> Congruence {
    let mut uf = UnionFind::new(alg.size());
    cg_extend(alg, &mut uf, pairs);
    let theta = Congruence::from_union_find(&mut uf);
    debug_assert!(theta.is_compatible(alg), "cg produced an incompatible partition");
    theta
}

/// Closes an existing union-find state under translations after merging
/// `pairs`.
pub fn cg_extend<A: OpSource + ?Sized>(alg: &A, uf: &mut UnionFind, pairs: &[(usize, usize)]) {
    let n = alg.size();
    let sig: Vec<usize> = alg.signature().iter().map(|s| s.1).collect();
    let mut queue = VecDeque::new();
    for &(a, b) in pairs {
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
    }
    let mut rest = Vec::new();
    let mut args = Vec::new();
    while let Some((a, b)) = queue.pop_front() {
        for (oi, &k) in sig.iter().enumerate() {
            if k == 0 {
                continue;
            }
            rest.resize(k - 1, 0);
            args.resize(k, 0);
            for pos in 0..k {
                for idx in 0..table_len(n, k - 1) {
                    decode_into(idx, n, &mut rest);
                    fill(&mut args, &rest, pos, a);
                    let fa = alg.apply(oi, &args);
                    args[pos] = b;
                    let fb = alg.apply(oi, &args);
                    if uf.union(fa, fb) {
                        queue.push_back((fa, fb));
                    }
                }
            }
        }
    }
}

/// Intersection of two equivalence relations.
pub fn meet(theta1: &Congruence, theta2: &Congruence) -> Congruence {
    assert_eq!(theta1.size(), theta2.size());
    let n2 = theta2.num_blocks().max(1);
    let labels: Vec<usize> = (0..theta1.size())
        .map(|e| theta1.block_of(e) * n2 + theta2.block_of(e))
        .collect();
    Congruence::from_labels(&labels)
}

/// Equivalence join (transitive closure of the union). For congruences this
/// is again a congruence, so it agrees with [`join`].
pub fn join_equivalence(theta1: &Congruence, theta2: &Congruence) -> Congruence {
    assert_eq!(theta1.size(), theta2.size());
    let n = theta1.size();
    let mut uf = UnionFind::new(n);
    for theta in [theta1, theta2] {
        let reps = theta.representatives();
        for e in 0..n {
            uf.union(e, reps[theta.block_of(e)]);
        }
    }
    Congruence::from_union_find(&mut uf)
}

/// Join in the congruence lattice: the congruence generated by the union.
pub fn join<A: OpSource + ?Sized>(alg: &A, theta1: &Congruence, theta2: &Congruence) -> Congruence {
    let mut pairs = Vec::new();
    for theta in [theta1, theta2] {
        let reps = theta.representatives();
        for e in 0..theta.size() {
            let r = reps[theta.block_of(e)];
            if r != e {
                pairs.push((r, e));
            }
        }
    }
    cg(alg, &pairs)
}

/// Relational composition `theta1 ∘ theta2 = {(a, c) : a θ1 b θ2 c}` as a
/// row-major boolean matrix.
pub fn compose(theta1: &Congruence, theta2: &Congruence) -> Vec<bool> {
    let n = theta1.size();
    let mut rel = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            if !theta1.related(a, b) {
                continue;
            }
            for c in 0..n {
                if theta2.related(b, c) {
                    rel[a * n + c] = true;
                }
            }
        }
    }
    rel
}

/// The full congruence lattice, obtained by closing the principal
/// congruences under joins. Sorted with `Δ` first and `∇` last.
pub fn all_congruences(alg: &impl OpSource, budget: usize, size_cap: usize) -> Result<Vec<Congruence>> {
    let n = alg.size();
    if n > size_cap {
        return Err(Error::LatticeSizeCap { size: n, cap: size_cap });
    }
    let mut set: BTreeSet<Congruence> = BTreeSet::new();
    set.insert(Congruence::delta(n));
    for a in 0..n {
        for b in a + 1..n {
            set.insert(cg(alg, &[(a, b)]));
            if set.len() > budget {
                return Err(Error::LatticeBudgetExceeded(budget));
            }
        }
    }
    let principals: Vec<Congruence> = set.iter().cloned().collect();
    let mut frontier: Vec<Congruence> = principals.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for theta in &frontier {
            for p in &principals {
                let j = join_equivalence(theta, p);
                if !set.contains(&j) {
                    set.insert(j.clone());
                    if set.len() > budget {
                        return Err(Error::LatticeBudgetExceeded(budget));
                    }
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Congruence> = set.into_iter().collect();
    sort_lattice(&mut out);
    Ok(out)
}

/// Canonical lattice order: more blocks first, then by label vector.
pub fn sort_lattice(list: &mut [Congruence]) {
    list.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.block_index.cmp(&b.block_index)));
}

/// The image of `theta ∨ below` on the quotient by `below`.
pub fn quotient_congruence(theta: &Congruence, below: &Congruence) -> Congruence {
    let j = join_equivalence(theta, below);
    let reps = below.representatives();
    let labels: Vec<usize> = reps.iter().map(|&r| j.block_of(r)).collect();
    Congruence::from_labels(&labels)
}

/// Pulls a congruence on `M/below` back along the projection.
pub fn pullback(theta_on_quotient: &Congruence, below: &Congruence) -> Congruence {
    let labels: Vec<usize> = (0..below.size()).map(|e| theta_on_quotient.block_of(below.block_of(e))).collect();
    Congruence::from_labels(&labels)
}
