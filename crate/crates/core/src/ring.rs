//! Finite abelian groups, rings with unit, left modules and bimodules, all
//! as explicit tables.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

pub(crate) fn law(name: &str, witness: String) -> Error {
    Error::Invalid(format!("law `{name}` fails at {witness}"))
}

fn check_table(name: &str, table: &[usize], len: usize, size: usize) -> Result<()> {
    if table.len() != len {
        return Err(Error::Invalid(format!("{name} table has length {}, expected {len}", table.len())));
    }
    if let Some(p) = table.iter().position(|&v| v >= size) {
        return Err(Error::Invalid(format!("{name} table entry {p} = {} is out of range", table[p])));
    }
    Ok(())
}

/// A finite abelian group `(0..size, +)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbGroup {
    pub size: usize,
    pub add: Vec<usize>,
    pub zero: usize,
    #[serde(skip)]
    pub neg: Vec<usize>,
}

impl AbGroup {
    /// Validates an addition table and derives zero and negation.
    pub fn from_table(size: usize, add: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Invalid("an abelian group needs at least one element".into()));
        }
        check_table("add", &add, size * size, size)?;
        let at = |a: usize, b: usize| add[a * size + b];
        let zero = (0..size)
            .find(|&e| (0..size).all(|x| at(e, x) == x))
            .ok_or_else(|| law("0 + x = x", "every candidate zero".into()))?;
        let mut neg = vec![0; size];
        for x in 0..size {
            neg[x] = (0..size)
                .find(|&y| at(x, y) == zero)
                .ok_or_else(|| law("x + (−x) = 0", format!("x={x}")))?;
        }
        for a in 0..size {
            for b in 0..size {
                if at(a, b) != at(b, a) {
                    return Err(law("a + b = b + a", format!("a={a}, b={b}")));
                }
                for c in 0..size {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(law("(a + b) + c = a + (b + c)", format!("a={a}, b={b}, c={c}")));
                    }
                }
            }
        }
        Ok(AbGroup { size, add, zero, neg })
    }

    pub fn cyclic(n: usize) -> Self {
        let add = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        AbGroup::from_table(n, add).expect("cyclic group")
    }

    pub fn trivial() -> Self {
        AbGroup::cyclic(1)
    }

    #[inline]
    pub fn plus(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn minus(&self, a: usize, b: usize) -> usize {
        self.plus(a, self.neg[b])
    }

    /// `k · a` for a non-negative integer `k`.
    pub fn times(&self, k: usize, a: usize) -> usize {
        (0..k).fold(self.zero, |acc, _| self.plus(acc, a))
    }

    /// Sum of a list of elements.
    pub fn sum(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.zero, |acc, x| self.plus(acc, x))
    }

    /// Direct sum; `(a, b)` is encoded `a * other.size + b`.
    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        let (n1, n2) = (self.size, other.size);
        let n = n1 * n2;
        let mut add = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                add.push(self.plus(x / n2, y / n2) * n2 + other.plus(x % n2, y % n2));
            }
        }
        AbGroup::from_table(n, add).expect("direct sum of groups")
    }

    /// A generating set: repeatedly adds the smallest element outside the
    /// subgroup generated so far. In a finite group, closing under `+ g`
    /// alone already yields the enlarged subgroup.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.size];
        span[self.zero] = true;
        while let Some(g) = (0..self.size).find(|&x| !span[x]) {
            gens.push(g);
            let members: Vec<usize> = (0..self.size).filter(|&x| span[x]).collect();
            let mut queue: VecDeque<usize> = members.into_iter().collect();
            while let Some(x) = queue.pop_front() {
                let y = self.plus(x, g);
                if !span[y] {
                    span[y] = true;
                    queue.push_back(y);
                }
            }
        }
        gens
    }

    pub fn is_additive(&self, target: &AbGroup, f: &[usize]) -> bool {
        f.len() == self.size
            && (0..self.size).all(|a| (0..self.size).all(|b| f[self.plus(a, b)] == target.plus(f[a], f[b])))
    }
}

/// All additive maps `src → dst`, enumerated by assigning images to a
/// generating set of `src` and propagating along the subgroup it spans.
/// Fails once more than `budget` partial assignments have been explored.
pub fn additive_homs(src: &AbGroup, dst: &AbGroup, budget: usize) -> Result<Vec<Vec<usize>>> {
    let gens = src.generators();
    let mut out = Vec::new();
    let mut explored = 0usize;
    let mut map = vec![usize::MAX; src.size];
    map[src.zero] = dst.zero;
    fn extend(src: &AbGroup, dst: &AbGroup, map: &mut [usize], g: usize, h: usize) -> bool {
        // Close the domain under `+ g`, which together with the existing
        // domain spans the enlarged subgroup.
        let mut queue: VecDeque<usize> = (0..src.size).filter(|&x| map[x] != usize::MAX).collect();
        while let Some(x) = queue.pop_front() {
            let y = src.plus(x, g);
            let v = dst.plus(map[x], h);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return false;
            }
        }
        true
    }
    fn rec(
        src: &AbGroup,
        dst: &AbGroup,
        gens: &[usize],
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        explored: &mut usize,
        budget: usize,
    ) -> Result<()> {
        let Some((&g, rest)) = gens.split_first() else {
            out.push(map.clone());
            return Ok(());
        };
        for h in 0..dst.size {
            *explored += 1;
            if *explored > budget {
                return Err(Error::DerBudgetExceeded(budget));
            }
            let saved = map.clone();
            if extend(src, dst, map, g, h) {
                rec(src, dst, rest, map, out, explored, budget)?;
            }
            *map = saved;
        }
        Ok(())
    }
    rec(src, dst, &gens, &mut map, &mut out, &mut explored, budget)?;
    debug_assert!(out.iter().all(|f| src.is_additive(dst, f)));
    Ok(out)
}

/// An associative ring with unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteRing {
    pub size: usize,
    pub add: Vec<usize>,
    pub mul: Vec<usize>,
    pub zero: usize,
    pub one: usize,
    #[serde(skip)]
    pub group: AbGroup,
}

impl FiniteRing {
    pub fn from_tables(size: usize, add: Vec<usize>, mul: Vec<usize>) -> Result<Self> {
        let group = AbGroup::from_table(size, add.clone())?;
        check_table("mul", &mul, size * size, size)?;
        let m = |a: usize, b: usize| mul[a * size + b];
        let one = (0..size)
            .find(|&e| (0..size).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| law("1x = x = x1", "every candidate unit".into()))?;
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(law("(ab)c = a(bc)", format!("a={a}, b={b}, c={c}")));
                    }
                    if m(a, group.plus(b, c)) != group.plus(m(a, b), m(a, c)) {
                        return Err(law("a(b + c) = ab + ac", format!("a={a}, b={b}, c={c}")));
                    }
                    if m(group.plus(a, b), c) != group.plus(m(a, c), m(b, c)) {
                        return Err(law("(a + b)c = ac + bc", format!("a={a}, b={b}, c={c}")));
                    }
                }
            }
        }
        Ok(FiniteRing { size, zero: group.zero, add, mul, one, group })
    }

    /// `Z/n`.
    pub fn zmod(n: usize) -> Self {
        let add = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let mul = (0..n * n).map(|i| (i / n) * (i % n) % n).collect();
        FiniteRing::from_tables(n, add, mul).expect("Z/n is a ring")
    }

    /// `Z/n[ε]` with `ε² = 0`; `a + bε` is encoded `a * n + b`.
    pub fn dual_numbers(n: usize) -> Self {
        let s = n * n;
        let mut add = Vec::with_capacity(s * s);
        let mut mul = Vec::with_capacity(s * s);
        for x in 0..s {
            for y in 0..s {
                let (a, b, c, d) = (x / n, x % n, y / n, y % n);
                add.push(((a + c) % n) * n + (b + d) % n);
                mul.push((a * c % n) * n + (a * d + b * c) % n);
            }
        }
        FiniteRing::from_tables(s, add, mul).expect("dual numbers form a ring")
    }

    /// `R × S` with coordinatewise operations, `(a, b)` encoded `a * |S| + b`.
    pub fn product(&self, other: &FiniteRing) -> FiniteRing {
        let n2 = other.size;
        let s = self.size * n2;
        let mut add = Vec::with_capacity(s * s);
        let mut mul = Vec::with_capacity(s * s);
        for x in 0..s {
            for y in 0..s {
                add.push(self.plus(x / n2, y / n2) * n2 + other.plus(x % n2, y % n2));
                mul.push(self.times(x / n2, y / n2) * n2 + other.times(x % n2, y % n2));
            }
        }
        FiniteRing::from_tables(s, add, mul).expect("product of rings")
    }

    #[inline]
    pub fn plus(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn times(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.group.neg[a]
    }

    #[inline]
    pub fn minus(&self, a: usize, b: usize) -> usize {
        self.plus(a, self.neg(b))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.times(a, b) == self.times(b, a)))
    }

    /// Unital ring homomorphism test.
    pub fn is_hom(&self, target: &FiniteRing, f: &[usize]) -> bool {
        f.len() == self.size
            && f[self.one] == target.one
            && self.group.is_additive(&target.group, f)
            && (0..self.size).all(|a| (0..self.size).all(|b| f[self.times(a, b)] == target.times(f[a], f[b])))
    }
}

/// A left module over a finite ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeftModule {
    #[serde(skip)]
    pub ring: FiniteRing,
    pub size: usize,
    pub add: Vec<usize>,
    /// `act[r * size + x] = r x`.
    pub act: Vec<usize>,
    pub zero: usize,
    #[serde(skip)]
    pub group: AbGroup,
}

impl LeftModule {
    pub fn from_tables(ring: &FiniteRing, size: usize, add: Vec<usize>, act: Vec<usize>) -> Result<Self> {
        let group = AbGroup::from_table(size, add.clone())?;
        check_table("act", &act, ring.size * size, size)?;
        let m = LeftModule { ring: ring.clone(), size, zero: group.zero, add, act, group };
        m.check_laws()?;
        Ok(m)
    }

    fn check_laws(&self) -> Result<()> {
        let r = &self.ring;
        let g = &self.group;
        for x in 0..self.size {
            if self.scale(r.one, x) != x {
                return Err(law("1x = x", format!("x={x}")));
            }
        }
        for a in 0..r.size {
            for x in 0..self.size {
                for y in 0..self.size {
                    if self.scale(a, g.plus(x, y)) != g.plus(self.scale(a, x), self.scale(a, y)) {
                        return Err(law("r(x + y) = rx + ry", format!("r={a}, x={x}, y={y}")));
                    }
                }
                for b in 0..r.size {
                    if self.scale(r.plus(a, b), x) != g.plus(self.scale(a, x), self.scale(b, x)) {
                        return Err(law("(r + s)x = rx + sx", format!("r={a}, s={b}, x={x}")));
                    }
                    if self.scale(r.times(a, b), x) != self.scale(a, self.scale(b, x)) {
                        return Err(law("(rs)x = r(sx)", format!("r={a}, s={b}, x={x}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `R` acting on itself from the left.
    pub fn regular(ring: &FiniteRing) -> Self {
        LeftModule::from_tables(ring, ring.size, ring.add.clone(), ring.mul.clone()).expect("regular module")
    }

    pub fn zero(ring: &FiniteRing) -> Self {
        LeftModule::from_tables(ring, 1, vec![0], vec![0; ring.size]).expect("zero module")
    }

    /// `M ⊕ N`, `(x, y)` encoded `x * |N| + y`.
    pub fn direct_sum(&self, other: &LeftModule) -> LeftModule {
        let n2 = other.size;
        let group = self.group.direct_sum(&other.group);
        let size = group.size;
        let mut act = Vec::with_capacity(self.ring.size * size);
        for r in 0..self.ring.size {
            for x in 0..size {
                act.push(self.scale(r, x / n2) * n2 + other.scale(r, x % n2));
            }
        }
        LeftModule::from_tables(&self.ring, size, group.add.clone(), act).expect("direct sum of modules")
    }

    #[inline]
    pub fn plus(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn minus(&self, a: usize, b: usize) -> usize {
        self.group.minus(a, b)
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.group.neg[a]
    }

    #[inline]
    pub fn scale(&self, r: usize, x: usize) -> usize {
        self.act[r * self.size + x]
    }

    /// Additive and `R`-linear.
    /// The submodule on `elems`, which must be closed under `+` and the
    /// action. Element `i` of the result is `elems[i]`.
    pub fn submodule(&self, elems: &[usize]) -> Result<LeftModule> {
        let index: std::collections::HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let find = |x: usize| index.get(&x).copied().ok_or_else(|| Error::Invalid(format!("element {x} leaves the submodule")));
        let mut add = Vec::with_capacity(elems.len() * elems.len());
        for &a in elems {
            for &b in elems {
                add.push(find(self.plus(a, b))?);
            }
        }
        let mut act = Vec::with_capacity(self.ring.size * elems.len());
        for r in 0..self.ring.size {
            for &a in elems {
                act.push(find(self.scale(r, a))?);
            }
        }
        LeftModule::from_tables(&self.ring, elems.len(), add, act)
    }

    pub fn is_linear(&self, target: &LeftModule, f: &[usize]) -> bool {
        self.group.is_additive(&target.group, f)
            && (0..self.ring.size).all(|r| (0..self.size).all(|x| f[self.scale(r, x)] == target.scale(r, f[x])))
    }
}

/// An `R`-`R`-bimodule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bimodule {
    #[serde(skip)]
    pub ring: FiniteRing,
    pub size: usize,
    pub add: Vec<usize>,
    /// `left[r * size + b] = r b`.
    pub left: Vec<usize>,
    /// `right[b * ring.size + r] = b r`.
    pub right: Vec<usize>,
    pub zero: usize,
    #[serde(skip)]
    pub group: AbGroup,
}

impl Bimodule {
    pub fn from_tables(ring: &FiniteRing, size: usize, add: Vec<usize>, left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        let group = AbGroup::from_table(size, add.clone())?;
        check_table("left", &left, ring.size * size, size)?;
        check_table("right", &right, ring.size * size, size)?;
        // The left structure is a left module; check the right side and
        // the middle associativity directly.
        LeftModule::from_tables(ring, size, add.clone(), left.clone())?;
        let b = Bimodule { ring: ring.clone(), size, zero: group.zero, add, left, right, group };
        let r = &b.ring;
        for x in 0..size {
            if b.rmul(x, r.one) != x {
                return Err(law("b1 = b", format!("b={x}")));
            }
            for s in 0..r.size {
                for y in 0..size {
                    if b.rmul(b.plus(x, y), s) != b.plus(b.rmul(x, s), b.rmul(y, s)) {
                        return Err(law("(b + c)r = br + cr", format!("b={x}, c={y}, r={s}")));
                    }
                }
                for t in 0..r.size {
                    if b.rmul(x, r.plus(s, t)) != b.plus(b.rmul(x, s), b.rmul(x, t)) {
                        return Err(law("b(r + s) = br + bs", format!("b={x}, r={s}, s={t}")));
                    }
                    if b.rmul(x, r.times(s, t)) != b.rmul(b.rmul(x, s), t) {
                        return Err(law("b(rs) = (br)s", format!("b={x}, r={s}, s={t}")));
                    }
                    if b.rmul(b.lmul(s, x), t) != b.lmul(s, b.rmul(x, t)) {
                        return Err(law("(rb)s = r(bs)", format!("r={s}, b={x}, s={t}")));
                    }
                }
            }
        }
        Ok(b)
    }

    /// `R` as a bimodule over itself.
    pub fn regular(ring: &FiniteRing) -> Self {
        let n = ring.size;
        Bimodule::from_tables(ring, n, ring.add.clone(), ring.mul.clone(), ring.mul.clone()).expect("regular bimodule")
    }

    pub fn zero(ring: &FiniteRing) -> Self {
        Bimodule::from_tables(ring, 1, vec![0], vec![0; ring.size], vec![0; ring.size]).expect("zero bimodule")
    }

    #[inline]
    pub fn plus(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn minus(&self, a: usize, b: usize) -> usize {
        self.group.minus(a, b)
    }

    #[inline]
    pub fn lmul(&self, r: usize, b: usize) -> usize {
        self.left[r * self.size + b]
    }

    #[inline]
    pub fn rmul(&self, b: usize, r: usize) -> usize {
        self.right[b * self.ring.size + r]
    }

    /// The left module underlying the bimodule.
    pub fn as_left_module(&self) -> LeftModule {
        LeftModule::from_tables(&self.ring, self.size, self.add.clone(), self.left.clone()).expect("validated")
    }
}
