//! Brute-force oracles written independently of the library algorithms.
#![allow(dead_code)]

use std::collections::BTreeSet;

use mk_core::{FiniteAlgebra, LinearForm};

/// Every partition of `{0..n}` as a restricted growth string.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            if cur.is_empty() && b > 0 {
                break;
            }
            cur.push(b);
            let next_max = if cur.len() == 1 { 0 } else { max.max(b) };
            rec(n, cur, next_max, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    rec(n, &mut Vec::new(), 0, &mut out);
    out
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn apply(alg: &FiniteAlgebra, op: usize, args: &[usize]) -> usize {
    let n = alg.size;
    let idx = args.iter().fold(0, |acc, &a| acc * n + a);
    alg.ops[op].table[idx]
}

/// Compatibility of a labelling with every operation, over all tuple pairs.
pub fn is_congruence(alg: &FiniteAlgebra, labels: &[usize]) -> bool {
    let n = alg.size;
    for (oi, op) in alg.ops.iter().enumerate() {
        let ts = all_tuples(n, op.arity);
        for a in &ts {
            for b in &ts {
                if a.iter().zip(b).all(|(x, y)| labels[*x] == labels[*y])
                    && labels[apply(alg, oi, a)] != labels[apply(alg, oi, b)]
                {
                    return false;
                }
            }
        }
    }
    true
}

/// All congruences by filtering every partition.
pub fn congruence_lattice(alg: &FiniteAlgebra) -> Vec<Vec<usize>> {
    partitions(alg.size).into_iter().filter(|p| is_congruence(alg, p)).collect()
}

/// Least congruence containing `pairs`: close a relation matrix under
/// every operation applied to related tuples, then under equivalence,
/// until nothing changes. Returns canonical labels.
pub fn cg(alg: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Vec<usize> {
    let n = alg.size;
    let mut rel = vec![false; n * n];
    for i in 0..n {
        rel[i * n + i] = true;
    }
    for &(a, b) in pairs {
        rel[a * n + b] = true;
        rel[b * n + a] = true;
    }
    loop {
        let mut changed = false;
        for (oi, op) in alg.ops.iter().enumerate() {
            let related: Vec<(usize, usize)> =
                (0..n * n).filter(|&i| rel[i]).map(|i| (i / n, i % n)).collect();
            for choice in all_tuples(related.len(), op.arity) {
                let a: Vec<usize> = choice.iter().map(|&c| related[c].0).collect();
                let b: Vec<usize> = choice.iter().map(|&c| related[c].1).collect();
                let (x, y) = (apply(alg, oi, &a), apply(alg, oi, &b));
                if !rel[x * n + y] {
                    rel[x * n + y] = true;
                    changed = true;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i * n + k] && rel[k * n + j] && !rel[i * n + j] {
                        rel[i * n + j] = true;
                        changed = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if rel[i * n + j] && !rel[j * n + i] {
                    rel[j * n + i] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if labels[i] == usize::MAX {
            for j in 0..n {
                if rel[i * n + j] {
                    labels[j] = next;
                }
            }
            next += 1;
        }
    }
    labels
}

/// Least subset containing `gens` closed under every operation, by
/// applying each operation to all tuples until nothing new appears.
pub fn subuniverse(alg: &FiniteAlgebra, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = gens.iter().copied().collect();
    loop {
        let elems: Vec<usize> = set.iter().copied().collect();
        let mut grown = false;
        for (oi, op) in alg.ops.iter().enumerate() {
            for t in all_tuples(elems.len(), op.arity) {
                let args: Vec<usize> = t.iter().map(|&i| elems[i]).collect();
                grown |= set.insert(apply(alg, oi, &args));
            }
        }
        if !grown {
            return set;
        }
    }
}

/// A finite group read off the `mul` table of an algebra.
pub struct Group {
    pub n: usize,
    pub mul: Vec<usize>,
    pub e: usize,
    pub inv: Vec<usize>,
}

impl Group {
    pub fn of(alg: &FiniteAlgebra) -> Group {
        let n = alg.size;
        let mul = alg.op("mul").expect("group has mul").table.clone();
        let e = (0..n).find(|&e| (0..n).all(|x| mul[e * n + x] == x)).expect("identity");
        let inv = (0..n).map(|x| (0..n).find(|&y| mul[x * n + y] == e).expect("inverse")).collect();
        Group { n, mul, e, inv }
    }

    pub fn m(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    /// Subgroup generated by a set.
    pub fn generated(&self, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.e]);
        set.extend(gens.iter().copied());
        loop {
            let elems: Vec<usize> = set.iter().copied().collect();
            let before = set.len();
            for &a in &elems {
                for &b in &elems {
                    set.insert(self.m(a, b));
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    pub fn is_normal_subgroup(&self, s: &BTreeSet<usize>) -> bool {
        s.contains(&self.e)
            && s.iter().all(|&a| s.iter().all(|&b| s.contains(&self.m(a, self.inv[b]))))
            && (0..self.n).all(|g| s.iter().all(|&a| s.contains(&self.m(self.m(g, a), self.inv[g]))))
    }

    pub fn normal_subgroups(&self) -> Vec<BTreeSet<usize>> {
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        for mask in 0u32..(1 << self.n) {
            let s: BTreeSet<usize> = (0..self.n).filter(|&i| mask >> i & 1 == 1).collect();
            if self.is_normal_subgroup(&s) && !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    /// `[N₁, N₂]`, generated by `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, n1: &BTreeSet<usize>, n2: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut gens = BTreeSet::new();
        for &a in n1 {
            for &b in n2 {
                gens.insert(self.m(self.m(a, b), self.m(self.inv[a], self.inv[b])));
            }
        }
        self.generated(&gens)
    }

    pub fn center(&self) -> BTreeSet<usize> {
        (0..self.n).filter(|&z| (0..self.n).all(|g| self.m(z, g) == self.m(g, z))).collect()
    }

    /// Nilpotence class from `γ₁ = G`, `γᵢ₊₁ = [G, γᵢ]`.
    pub fn nilpotence_class(&self) -> Option<usize> {
        let all: BTreeSet<usize> = (0..self.n).collect();
        let mut cur = all.clone();
        let mut class = 0;
        loop {
            if cur.len() == 1 {
                return Some(class);
            }
            let next = self.commutator(&all, &cur);
            if next == cur {
                return None;
            }
            cur = next;
            class += 1;
        }
    }

    /// Canonical labels of the coset partition `a ~ b ⟺ a⁻¹b ∈ N`.
    pub fn congruence_labels(&self, s: &BTreeSet<usize>) -> Vec<usize> {
        let mut labels = vec![usize::MAX; self.n];
        let mut next = 0;
        for a in 0..self.n {
            if labels[a] == usize::MAX {
                for b in 0..self.n {
                    if s.contains(&self.m(self.inv[a], b)) {
                        labels[b] = next;
                    }
                }
                next += 1;
            }
        }
        labels
    }

    /// The normal subgroup of a congruence: the block of the identity.
    pub fn kernel(&self, labels: &[usize]) -> BTreeSet<usize> {
        (0..self.n).filter(|&x| labels[x] == labels[self.e]).collect()
    }
}

fn herd_laws(n: usize, t: &[usize]) -> bool {
    let m = |x: usize, y: usize, z: usize| t[(x * n + y) * n + z];
    for x in 0..n {
        for y in 0..n {
            if m(x, y, y) != x || m(y, y, x) != x {
                return false;
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if m(u, v, m(x, y, z)) != m(m(u, v, x), y, z) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Every associative Maltsev table on `{0..n}` for `n ≤ 3`, by running
/// through every table the Maltsev identities leave undetermined.
pub fn herds_by_exhaustion(n: usize) -> Vec<Vec<usize>> {
    assert!(n <= 3);
    let free: Vec<usize> =
        (0..n * n * n).filter(|&i| (i / (n * n)) != (i / n) % n && (i / n) % n != i % n).collect();
    let mut out = Vec::new();
    for code in 0..n.pow(free.len() as u32) {
        let mut t = vec![0; n * n * n];
        for x in 0..n {
            for y in 0..n {
                t[(x * n + y) * n + y] = x;
                t[(y * n + y) * n + x] = x;
            }
        }
        let mut c = code;
        for &i in &free {
            t[i] = c % n;
            c /= n;
        }
        if herd_laws(n, &t) {
            out.push(t);
        }
    }
    out.sort();
    out
}

/// Every associative Maltsev table on `{0..4}`, from the `4^9` binary
/// tables with two-sided identity 0 that are groups, as `x y⁻¹ z`; each
/// result is confirmed to be a herd directly.
pub fn herds_of_order_four() -> Vec<Vec<usize>> {
    let n = 4;
    let mut out = Vec::new();
    for code in 0..4usize.pow(9) {
        let mut b = [0; 16];
        for x in 0..n {
            b[x] = x;
            b[x * n] = x;
        }
        let mut c = code;
        for x in 1..n {
            for y in 1..n {
                b[x * n + y] = c % 4;
                c /= 4;
            }
        }
        let latin = (0..n).all(|x| {
            let row: BTreeSet<usize> = (0..n).map(|y| b[x * n + y]).collect();
            let col: BTreeSet<usize> = (0..n).map(|y| b[y * n + x]).collect();
            row.len() == n && col.len() == n
        });
        if !latin {
            continue;
        }
        let assoc = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| b[b[x * n + y] * n + z] == b[x * n + b[y * n + z]])));
        if !assoc {
            continue;
        }
        let inv: Vec<usize> = (0..n).map(|x| (0..n).find(|&y| b[x * n + y] == 0).unwrap()).collect();
        let t: Vec<usize> =
            (0..64).map(|i| b[b[(i / 16) * n + inv[(i / 4) % 4]] * n + i % 4]).collect();
        assert!(herd_laws(n, &t));
        out.push(t);
    }
    out.sort();
    out
}

/// Evaluation of `⟨x, r̄⟩` on `N = M ⊕ R` with `f(x) = (x, 0)`, element
/// `(a, s)` encoded `a |R| + s`:
/// `⟨x, r̄⟩(n₀, …) = f(x) + (1 − ∂x − Σrᵢ) n₀ + Σ rᵢ nᵢ`.
pub fn interpret(form: &LinearForm, x: usize, r: &[usize], args: &[usize]) -> usize {
    let (ring, module) = (&form.ring, &form.module);
    let rs = ring.size;
    let add = |p: usize, q: usize| module.plus(p / rs, q / rs) * rs + ring.plus(p % rs, q % rs);
    let scale = |c: usize, p: usize| module.scale(c, p / rs) * rs + ring.times(c, p % rs);
    let mut c0 = ring.minus(ring.one, form.d[x]);
    for &ri in r {
        c0 = ring.minus(c0, ri);
    }
    let mut out = add(x * rs, scale(c0, args[0]));
    for (i, &ri) in r.iter().enumerate() {
        out = add(out, scale(ri, args[i + 1]));
    }
    out
}

/// Equivariant Maltsev maps on `S ×_M S ×_M S` for the five-element
/// extension of `{1, 0}` by `D_0 = Z/2 ⊕ Z/2`, found by backtracking.
///
/// Returns `(count, associative count, values of m(*0, 01, 11))`.
pub fn counterexample_count() -> (usize, usize, BTreeSet<usize>) {
    // Total elements: 0 = (1, 0), 1 + 2a + b = (0, (a, b)).
    // (x₁, d₁)(x₂, d₂) = (x₁x₂, x₁·d₂ + d₁·x₂) with 0·(a, b) = (b, b) and
    // (a, b)·0 = (0, 0).
    let pair = |e: usize| -> (usize, (usize, usize)) {
        if e == 0 {
            (1, (0, 0))
        } else {
            (0, ((e - 1) >> 1, (e - 1) & 1))
        }
    };
    let unpair = |x: usize, d: (usize, usize)| if x == 1 { 0 } else { 1 + 2 * d.0 + d.1 };
    let times = |e1: usize, e2: usize| {
        let ((x1, d1), (x2, d2)) = (pair(e1), pair(e2));
        let left = if x1 == 1 { d2 } else { (d2.1, d2.1) };
        let right = if x2 == 1 { d1 } else { (0, 0) };
        unpair(x1 * x2, (left.0 ^ right.0, left.1 ^ right.1))
    };
    // S: 0 = 1, 1 = *0 (00 ∼ 10), 2 = 01, 3 = 11.
    let class = |e: usize| match e {
        0 => 0,
        1 | 3 => 1,
        2 => 2,
        _ => 3,
    };
    let rep = [0usize, 1, 2, 4];
    let act: Vec<[usize; 4]> = (0..5).map(|g| [0, 1, 2, 3].map(|s| class(times(g, rep[s])))).collect();
    for g in 0..5 {
        for e in 0..5 {
            assert_eq!(class(times(g, e)), act[g][class(e)], "quotient must be a left set");
        }
    }
    let fib = [1usize, 2, 3];
    let idx = |x: usize, y: usize, z: usize| (x * 4 + y) * 4 + z;
    let mut table = vec![None; 64];
    table[idx(0, 0, 0)] = Some(0);
    for &x in &fib {
        for &y in &fib {
            table[idx(x, y, y)] = Some(x);
            table[idx(y, y, x)] = Some(x);
        }
    }
    let mut triples = Vec::new();
    for &x in &fib {
        for &y in &fib {
            for &z in &fib {
                triples.push((x, y, z));
            }
        }
    }
    let free: Vec<usize> =
        triples.iter().filter(|&&(x, y, z)| x != y && y != z).map(|&(x, y, z)| idx(x, y, z)).collect();
    let domain: Vec<(usize, usize, usize)> = std::iter::once((0, 0, 0)).chain(triples.iter().copied()).collect();
    let consistent = |t: &[Option<usize>]| {
        domain.iter().all(|&(x, y, z)| {
            (0..5).all(|g| {
                let a = &act[g];
                match (t[idx(x, y, z)], t[idx(a[x], a[y], a[z])]) {
                    (Some(v), Some(w)) => a[v] == w,
                    _ => true,
                }
            })
        })
    };
    fn rec(
        i: usize,
        free: &[usize],
        t: &mut Vec<Option<usize>>,
        consistent: &dyn Fn(&[Option<usize>]) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !consistent(t) {
            return;
        }
        if i == free.len() {
            out.push(t.iter().map(|v| v.unwrap_or(usize::MAX)).collect());
            return;
        }
        for v in [1, 2, 3] {
            t[free[i]] = Some(v);
            rec(i + 1, free, t, consistent, out);
        }
        t[free[i]] = None;
    }
    let mut found = Vec::new();
    rec(0, &free, &mut table, &consistent, &mut found);
    let mut associative = 0;
    let mut forced = BTreeSet::new();
    for t in &found {
        let m = |x: usize, y: usize, z: usize| t[idx(x, y, z)];
        forced.insert(m(1, 2, 3));
        let over = |s: usize| usize::from(s != 0);
        let mut assoc = true;
        'outer: for &(u, v, x) in &domain {
            for &(x2, y, z) in &domain {
                if x2 != x || over(y) != over(x) {
                    continue;
                }
                if m(u, v, m(x, y, z)) != m(m(u, v, x), y, z) {
                    assoc = false;
                    break 'outer;
                }
            }
        }
        if assoc {
            associative += 1;
        }
    }
    (found.len(), associative, forced)
}

/// `(|Der|, |Ider|, |H⁰|)` by trying every pair of maps `R → B`, `M → K`.
pub fn derivations_by_brute_force(form: &LinearForm, bim: &mk_core::DBimodule) -> Option<(usize, usize, usize)> {
    let (ring, module, b, k) = (&form.ring, &form.module, &bim.b, &bim.k);
    let space = (b.size as u128).pow(ring.size as u32) * (k.size as u128).pow(module.size as u32);
    if space > 5_000_000 {
        return None;
    }
    let ds: Vec<Vec<usize>> = mk_core::algebra::tuples(b.size, ring.size)
        .filter(|d| {
            (0..ring.size).all(|r| {
                (0..ring.size).all(|s| {
                    d[ring.plus(r, s)] == b.plus(d[r], d[s])
                        && d[ring.times(r, s)] == b.plus(b.rmul(d[r], s), b.lmul(r, d[s]))
                })
            })
        })
        .collect();
    let mut der = Vec::new();
    for d in &ds {
        for nabla in mk_core::algebra::tuples(k.size, module.size) {
            let ok = (0..module.size).all(|m| {
                bim.delta[nabla[m]] == d[form.d[m]]
                    && (0..module.size).all(|m2| nabla[module.plus(m, m2)] == k.plus(nabla[m], nabla[m2]))
                    && (0..ring.size).all(|r| nabla[module.scale(r, m)] == k.plus(bim.act(d[r], m), k.scale(r, nabla[m])))
            });
            if ok {
                der.push((d.clone(), nabla));
            }
        }
    }
    let mut inner = std::collections::BTreeSet::new();
    for c in 0..k.size {
        let dc = bim.delta[c];
        let d: Vec<usize> = (0..ring.size).map(|r| b.minus(b.lmul(r, dc), b.rmul(dc, r))).collect();
        let nabla: Vec<usize> = (0..module.size).map(|m| k.minus(k.scale(form.d[m], c), bim.act(dc, m))).collect();
        assert!(der.contains(&(d.clone(), nabla.clone())), "ad({c}) must be a derivation");
        inner.insert((d, nabla));
    }
    let h0 = (0..k.size).filter(|&c| (0..module.size).all(|m| k.scale(form.d[m], c) == bim.act(bim.delta[c], m))).count();
    Some((der.len(), inner.len(), h0))
}
