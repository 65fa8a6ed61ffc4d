//! Finite algebras as dense operation tables.
//!
//! Argument tuples are encoded mixed-radix with the leftmost coordinate most
//! significant, so `f(a, b)` on a carrier of size `n` lives at `a * n + b`.
//! The same encoding is used for product carriers.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::congruence::Congruence;
use crate::error::{Error, Result};

/// Read access to a finite algebra's operations, without requiring tables.
///
/// Large derived algebras (relations viewed as subalgebras of a square) are
/// evaluated on demand through this trait instead of being materialized.
pub trait OpSource {
    fn size(&self) -> usize;
    /// `(name, arity)` for every basic operation, in signature order.
    fn signature(&self) -> Vec<(String, usize)>;
    fn arity(&self, op: usize) -> usize;
    fn apply(&self, op: usize, args: &[usize]) -> usize;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

impl Operation {
    pub fn new(name: impl Into<String>, arity: usize, table: Vec<usize>) -> Self {
        Operation { name: name.into(), arity, table }
    }

    /// Tabulates `f` over every argument tuple of a carrier of size `size`.
    pub fn from_fn(
        name: impl Into<String>,
        arity: usize,
        size: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Self {
        let len = table_len(size, arity);
        let mut table = Vec::with_capacity(len);
        let mut args = vec![0; arity];
        for idx in 0..len {
            decode_into(idx, size, &mut args);
            table.push(f(&args));
        }
        Operation { name: name.into(), arity, table }
    }

    #[inline]
    pub fn apply(&self, size: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        self.table[encode(args, size)]
    }
}

/// `size^arity`, with `0^0 = 1`.
pub fn table_len(size: usize, arity: usize) -> usize {
    size.checked_pow(arity as u32).expect("table size overflows usize")
}

#[inline]
pub fn encode(args: &[usize], radix: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * radix + a)
}

#[inline]
pub fn decode_into(mut idx: usize, radix: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % radix;
        idx /= radix;
    }
}

pub fn decode(idx: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    decode_into(idx, radix, &mut out);
    out
}

/// Iterates all tuples of length `len` over `0..radix` in mixed-radix order.
pub fn tuples(radix: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..table_len(radix, len)).map(move |i| decode(i, radix, len))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteAlgebra {
    pub size: usize,
    pub ops: Vec<Operation>,
}

impl FiniteAlgebra {
    /// Builds an algebra after checking table lengths, entry ranges and
    /// name uniqueness.
    pub fn new(size: usize, ops: Vec<Operation>) -> Result<Self> {
        let alg = FiniteAlgebra { size, ops };
        alg.validate()?;
        Ok(alg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for op in &self.ops {
            if !names.insert(op.name.as_str()) {
                return Err(Error::Invalid(format!("duplicate operation name `{}`", op.name)));
            }
            let want = table_len(self.size, op.arity);
            if op.table.len() != want {
                return Err(Error::Invalid(format!(
                    "operation `{}` has table length {}, expected {}",
                    op.name,
                    op.table.len(),
                    want
                )));
            }
            if let Some(pos) = op.table.iter().position(|&v| v >= self.size) {
                return Err(Error::Invalid(format!(
                    "operation `{}` entry {} = {} is outside the carrier",
                    op.name, pos, op.table[pos]
                )));
            }
        }
        Ok(())
    }

    pub fn op(&self, name: &str) -> Option<&Operation> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> bool {
        self.ops.len() == other.ops.len()
            && self.ops.iter().zip(&other.ops).all(|(a, b)| a.name == b.name && a.arity == b.arity)
    }

    /// The one-element algebra with the same signature.
    pub fn trivial_like(&self) -> FiniteAlgebra {
        let ops = self.ops.iter().map(|o| Operation::new(o.name.clone(), o.arity, vec![0])).collect();
        FiniteAlgebra { size: 1, ops }
    }
}

impl OpSource for FiniteAlgebra {
    fn size(&self) -> usize {
        self.size
    }

    fn signature(&self) -> Vec<(String, usize)> {
        self.ops.iter().map(|o| (o.name.clone(), o.arity)).collect()
    }

    fn arity(&self, op: usize) -> usize {
        self.ops[op].arity
    }

    #[inline]
    fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.ops[op].apply(self.size, args)
    }
}

/// Direct product with coordinatewise operations.
///
/// Element `(a_1, ..., a_k)` is encoded mixed-radix over the factor sizes,
/// leftmost factor most significant.
pub fn product(algebras: &[FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let first = algebras
        .first()
        .ok_or_else(|| Error::Signature("product of an empty list".into()))?;
    for (i, a) in algebras.iter().enumerate().skip(1) {
        if !a.same_signature(first) {
            return Err(Error::Signature(format!("factor {i} differs from factor 0")));
        }
    }
    let sizes: Vec<usize> = algebras.iter().map(|a| a.size).collect();
    let size = sizes.iter().product::<usize>();
    let ops = first
        .ops
        .iter()
        .enumerate()
        .map(|(oi, op)| {
            Operation::from_fn(op.name.clone(), op.arity, size, |args| {
                let coords: Vec<Vec<usize>> = args.iter().map(|&e| split_product(e, &sizes)).collect();
                let out: Vec<usize> = algebras
                    .iter()
                    .enumerate()
                    .map(|(fi, alg)| {
                        let col: Vec<usize> = coords.iter().map(|c| c[fi]).collect();
                        alg.apply(oi, &col)
                    })
                    .collect();
                join_product(&out, &sizes)
            })
        })
        .collect();
    FiniteAlgebra::new(size, ops)
}

pub fn split_product(mut e: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = e % s;
        e /= s;
    }
    out
}

pub fn join_product(coords: &[usize], sizes: &[usize]) -> usize {
    coords.iter().zip(sizes).fold(0, |acc, (&c, &s)| acc * s + c)
}

/// Least subset containing `generators` (and all constants) closed under
/// every operation, returned in increasing order.
pub fn subuniverse_generate<A: OpSource + ?Sized>(alg: &A, generators: &[usize]) -> Vec<usize> {
    let n = alg.size();
    let mut member = vec![false; n];
    let mut elems: Vec<usize> = Vec::new();
    let push = |e: usize, member: &mut Vec<bool>, elems: &mut Vec<usize>| {
        if !member[e] {
            member[e] = true;
            elems.push(e);
        }
    };
    for &g in generators {
        push(g, &mut member, &mut elems);
    }
    let nops = alg.signature().len();
    for op in 0..nops {
        if alg.arity(op) == 0 {
            let c = alg.apply(op, &[]);
            push(c, &mut member, &mut elems);
        }
    }
    // Semi-naive closure: only tuples touching the newest frontier.
    let mut old = 0;
    loop {
        let frontier_start = old;
        let current = elems.len();
        if frontier_start == current {
            break;
        }
        for op in 0..nops {
            let k = alg.arity(op);
            if k == 0 {
                continue;
            }
            let mut args = vec![0; k];
            for idx in 0..table_len(current, k) {
                decode_into(idx, current, &mut args);
                if args.iter().all(|&i| i < frontier_start) {
                    continue;
                }
                let vals: Vec<usize> = args.iter().map(|&i| elems[i]).collect();
                let v = alg.apply(op, &vals);
                push(v, &mut member, &mut elems);
            }
        }
        old = current;
    }
    elems.sort_unstable();
    elems
}

/// Restricts `alg` to a subuniverse; element `i` of the result is
/// `elements[i]`.
pub fn subalgebra(alg: &FiniteAlgebra, elements: &[usize]) -> Result<FiniteAlgebra> {
    let mut index = vec![usize::MAX; alg.size];
    for (i, &e) in elements.iter().enumerate() {
        index[e] = i;
    }
    let size = elements.len();
    let mut ops = Vec::with_capacity(alg.ops.len());
    for op in &alg.ops {
        let mut bad = None;
        let o = Operation::from_fn(op.name.clone(), op.arity, size, |args| {
            let vals: Vec<usize> = args.iter().map(|&i| elements[i]).collect();
            let v = index[op.apply(alg.size, &vals)];
            if v == usize::MAX {
                bad = Some(op.name.clone());
                0
            } else {
                v
            }
        });
        if let Some(name) = bad {
            return Err(Error::Invalid(format!("subset is not closed under `{name}`")));
        }
        ops.push(o);
    }
    FiniteAlgebra::new(size, ops)
}

/// Quotient by a congruence; blocks are numbered by least element.
pub fn quotient(alg: &FiniteAlgebra, theta: &Congruence) -> Result<(FiniteAlgebra, Vec<usize>)> {
    if theta.size() != alg.size {
        return Err(Error::NotACongruence(format!(
            "partition on {} points, algebra has {}",
            theta.size(),
            alg.size
        )));
    }
    if let Some(w) = theta.compatibility_witness(alg) {
        return Err(Error::NotACongruence(w));
    }
    let reps = theta.representatives();
    let size = reps.len();
    let ops = alg
        .ops
        .iter()
        .map(|op| {
            Operation::from_fn(op.name.clone(), op.arity, size, |args| {
                let vals: Vec<usize> = args.iter().map(|&b| reps[b]).collect();
                theta.block_of(op.apply(alg.size, &vals))
            })
        })
        .collect();
    Ok((FiniteAlgebra::new(size, ops)?, theta.block_index().to_vec()))
}

/// A map between carriers, checked against every operation both sides share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism<'a> {
    pub source: &'a FiniteAlgebra,
    pub target: &'a FiniteAlgebra,
    pub map: Vec<usize>,
}

impl<'a> Homomorphism<'a> {
    pub fn new(source: &'a FiniteAlgebra, target: &'a FiniteAlgebra, map: Vec<usize>) -> Self {
        Homomorphism { source, target, map }
    }

    /// First `(operation, argument tuple)` where the map fails to commute.
    pub fn violation(&self) -> Option<(String, Vec<usize>)> {
        if self.map.len() != self.source.size || self.map.iter().any(|&v| v >= self.target.size) {
            return Some(("<map>".into(), vec![]));
        }
        for op in &self.source.ops {
            let Some(top) = self.target.op(&op.name) else { continue };
            if top.arity != op.arity {
                return Some((op.name.clone(), vec![]));
            }
            for (idx, &v) in op.table.iter().enumerate() {
                let args = decode(idx, self.source.size, op.arity);
                let img: Vec<usize> = args.iter().map(|&a| self.map[a]).collect();
                if self.map[v] != top.apply(self.target.size, &img) {
                    return Some((op.name.clone(), args));
                }
            }
        }
        None
    }
}

pub fn is_homomorphism(h: &Homomorphism<'_>) -> bool {
    h.violation().is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn klein_four_from_product() {
        let z2 = zoo::cyclic_group(2);
        let v = product(&[z2.clone(), z2]).unwrap();
        assert_eq!(v.size, 4);
        let add = v.op("mul").unwrap();
        // (a,b)+(c,d) coordinatewise, encoded 2a+b.
        for x in 0..4 {
            for y in 0..4 {
                let want = (((x >> 1) ^ (y >> 1)) << 1) | ((x & 1) ^ (y & 1));
                assert_eq!(add.apply(4, &[x, y]), want);
            }
        }
    }

    #[test]
    fn single_factor_product_is_identity() {
        let z4 = zoo::cyclic_group(4);
        assert_eq!(product(std::slice::from_ref(&z4)).unwrap(), z4);
    }

    #[test]
    fn z2_times_z3_matches_pairwise_enumeration() {
        let p = product(&[zoo::cyclic_group(2), zoo::cyclic_group(3)]).unwrap();
        let add = p.op("mul").unwrap();
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..2 {
                    for d in 0..3 {
                        let want = ((a + c) % 2) * 3 + (b + d) % 3;
                        assert_eq!(add.apply(6, &[a * 3 + b, c * 3 + d]), want);
                    }
                }
            }
        }
    }

    #[test]
    fn signature_mismatch_is_reported() {
        let err = product(&[zoo::cyclic_group(2), zoo::semilattice(2)]).unwrap_err();
        assert!(matches!(err, Error::Signature(_)));
    }

    #[test]
    fn subuniverses_of_z4() {
        let z4 = zoo::cyclic_group(4);
        assert_eq!(subuniverse_generate(&z4, &[2]), vec![0, 2]);
        assert_eq!(subuniverse_generate(&z4, &[1]), vec![0, 1, 2, 3]);
        assert_eq!(subuniverse_generate(&z4, &[0, 1, 2, 3]), vec![0, 1, 2, 3]);
        // The identity constant seeds generation.
        assert_eq!(subuniverse_generate(&z4, &[]), vec![0]);
    }

    #[test]
    fn quotient_of_z4_by_evens() {
        let z4 = zoo::cyclic_group(4);
        let theta = Congruence::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let (q, proj) = quotient(&z4, &theta).unwrap();
        assert_eq!(q, zoo::cyclic_group(2));
        assert_eq!(proj, vec![0, 1, 0, 1]);
        assert!(is_homomorphism(&Homomorphism::new(&z4, &q, proj)));
    }

    #[test]
    fn quotient_rejects_non_congruence() {
        let z4 = zoo::cyclic_group(4);
        let theta = Congruence::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(quotient(&z4, &theta), Err(Error::NotACongruence(_))));
    }

    #[test]
    fn trivial_quotients() {
        let z4 = zoo::cyclic_group(4);
        let (q, _) = quotient(&z4, &Congruence::delta(4)).unwrap();
        assert_eq!(q, z4);
        let (q, _) = quotient(&z4, &Congruence::nabla(4)).unwrap();
        assert_eq!(q.size, 1);
    }

    #[test]
    fn homomorphism_checks() {
        let z4 = zoo::cyclic_group(4);
        let z2 = zoo::cyclic_group(2);
        assert!(is_homomorphism(&Homomorphism::new(&z4, &z4, vec![0, 1, 2, 3])));
        assert!(is_homomorphism(&Homomorphism::new(&z4, &z2, vec![0, 1, 0, 1])));
        let bad = Homomorphism::new(&z4, &z2, vec![0, 1, 1, 1]);
        assert!(!is_homomorphism(&bad));
        assert!(bad.violation().is_some());
    }

    #[test]
    fn empty_algebra_is_allowed() {
        let e = FiniteAlgebra::new(0, vec![Operation::new("f", 2, vec![])]).unwrap();
        assert_eq!(subuniverse_generate(&e, &[]), Vec::<usize>::new());
        assert!(FiniteAlgebra::new(0, vec![Operation::new("c", 0, vec![0])]).is_err());
    }
}
