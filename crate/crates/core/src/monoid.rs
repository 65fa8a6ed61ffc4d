//! Finite monoids, natural systems on them and their linear extensions.
//!
//! A natural system on a monoid `M` is a family of abelian groups `D_x`
//! with maps `x(−): D_y → D_{xy}` and `(−)y: D_x → D_{xy}`. A linear
//! extension is a surjective homomorphism `P: E → M` whose fibers carry
//! free transitive `D`-actions compatible with multiplication.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{additive_homs, AbGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteMonoid {
    pub size: usize,
    pub mul: Vec<usize>,
    pub unit: usize,
}

impl FiniteMonoid {
    pub fn new(size: usize, mul: Vec<usize>, unit: usize) -> Result<Self> {
        if mul.len() != size * size || mul.iter().any(|&v| v >= size) || unit >= size {
            return Err(Error::Invalid("monoid table has the wrong length or leaves the carrier".into()));
        }
        let m = FiniteMonoid { size, mul, unit };
        for x in 0..size {
            if m.times(unit, x) != x || m.times(x, unit) != x {
                return Err(Error::Invalid(format!("law `1x = x = x1` fails at x={x}")));
            }
            for y in 0..size {
                for z in 0..size {
                    if m.times(m.times(x, y), z) != m.times(x, m.times(y, z)) {
                        return Err(Error::Invalid(format!("law `(xy)z = x(yz)` fails at x={x}, y={y}, z={z}")));
                    }
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn times(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y]
    }

    pub fn is_hom(&self, target: &FiniteMonoid, f: &[usize]) -> bool {
        f.len() == self.size
            && f[self.unit] == target.unit
            && (0..self.size).all(|x| (0..self.size).all(|y| f[self.times(x, y)] == target.times(f[x], f[y])))
    }
}

/// Groups `D_x` with `left[x * |M| + y]: D_y → D_{xy}` and
/// `right[x * |M| + y]: D_x → D_{xy}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalSystem {
    pub monoid_size: usize,
    pub groups: Vec<AbGroup>,
    pub left: Vec<Vec<usize>>,
    pub right: Vec<Vec<usize>>,
}

impl NaturalSystem {
    /// Validates additivity, unit actions and
    /// `(b₁b₂)x₃ = b₁(b₂x₃)`, `(b₁x₂)b₃ = b₁(x₂b₃)`, `(x₁b₂)b₃ = x₁(b₂b₃)`.
    pub fn new(monoid: &FiniteMonoid, groups: Vec<AbGroup>, left: Vec<Vec<usize>>, right: Vec<Vec<usize>>) -> Result<Self> {
        let n = monoid.size;
        if groups.len() != n || left.len() != n * n || right.len() != n * n {
            return Err(Error::Invalid("natural system needs one group per element and one map per pair".into()));
        }
        let sys = NaturalSystem { monoid_size: n, groups, left, right };
        for x in 0..n {
            for y in 0..n {
                let xy = monoid.times(x, y);
                let (l, r) = (&sys.left[x * n + y], &sys.right[x * n + y]);
                if l.len() != sys.groups[y].size || l.iter().any(|&v| v >= sys.groups[xy].size) {
                    return Err(Error::Invalid(format!("left map {x}(−) on D_{y} has the wrong shape")));
                }
                if r.len() != sys.groups[x].size || r.iter().any(|&v| v >= sys.groups[xy].size) {
                    return Err(Error::Invalid(format!("right map (−){y} on D_{x} has the wrong shape")));
                }
                if !sys.groups[y].is_additive(&sys.groups[xy], l) || !sys.groups[x].is_additive(&sys.groups[xy], r) {
                    return Err(Error::Invalid(format!("action maps at ({x}, {y}) are not additive")));
                }
            }
        }
        let u = monoid.unit;
        for x in 0..n {
            let id: Vec<usize> = (0..sys.groups[x].size).collect();
            if sys.left[u * n + x] != id || sys.right[x * n + u] != id {
                return Err(Error::Invalid(format!("the unit does not act trivially on D_{x}")));
            }
        }
        for b1 in 0..n {
            for b2 in 0..n {
                for b3 in 0..n {
                    let b12 = monoid.times(b1, b2);
                    let b23 = monoid.times(b2, b3);
                    for x in 0..sys.groups[b3].size {
                        if sys.l(b12, b3, x) != sys.l(b1, b23, sys.l(b2, b3, x)) {
                            return Err(Error::Invalid(format!("law `(b₁b₂)x₃ = b₁(b₂x₃)` fails at b₁={b1}, b₂={b2}, x₃={x}∈D_{b3}")));
                        }
                    }
                    for x in 0..sys.groups[b2].size {
                        if sys.r(b12, b3, sys.l(b1, b2, x)) != sys.l(b1, b23, sys.r(b2, b3, x)) {
                            return Err(Error::Invalid(format!("law `(b₁x₂)b₃ = b₁(x₂b₃)` fails at b₁={b1}, x₂={x}∈D_{b2}, b₃={b3}")));
                        }
                    }
                    for x in 0..sys.groups[b1].size {
                        if sys.r(b12, b3, sys.r(b1, b2, x)) != sys.r(b1, b23, x) {
                            return Err(Error::Invalid(format!("law `(x₁b₂)b₃ = x₁(b₂b₃)` fails at x₁={x}∈D_{b1}, b₂={b2}, b₃={b3}")));
                        }
                    }
                }
            }
        }
        Ok(sys)
    }

    /// Every `D_x = A`, every action the identity.
    pub fn constant(monoid: &FiniteMonoid, a: &AbGroup) -> Result<Self> {
        let n = monoid.size;
        let id: Vec<usize> = (0..a.size).collect();
        NaturalSystem::new(monoid, vec![a.clone(); n], vec![id.clone(); n * n], vec![id; n * n])
    }

    /// Every `D_x = 0`.
    pub fn trivial(monoid: &FiniteMonoid) -> Self {
        NaturalSystem::constant(monoid, &AbGroup::trivial()).expect("trivial system")
    }

    /// `x(d)` for `d ∈ D_y`.
    #[inline]
    pub fn l(&self, x: usize, y: usize, d: usize) -> usize {
        self.left[x * self.monoid_size + y][d]
    }

    /// `(d)y` for `d ∈ D_x`.
    #[inline]
    pub fn r(&self, x: usize, y: usize, d: usize) -> usize {
        self.right[x * self.monoid_size + y][d]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidExtension {
    pub total: FiniteMonoid,
    pub base: FiniteMonoid,
    pub proj: Vec<usize>,
    pub system: NaturalSystem,
    /// Total elements over each base element, ascending.
    pub fibers: Vec<Vec<usize>>,
    /// `action[b][d * |fiber b| + i] = d + fibers[b][i]`.
    pub action: Vec<Vec<usize>>,
}

impl MonoidExtension {
    /// Structural checks only: `proj` is a surjective homomorphism and the
    /// action tables have the right shape and stay in their fibers. The
    /// extension laws are left to [`check_linear_extension`].
    pub fn new(total: FiniteMonoid, base: FiniteMonoid, proj: Vec<usize>, system: NaturalSystem, action: Vec<Vec<usize>>) -> Result<Self> {
        if proj.iter().any(|&b| b >= base.size) || !total.is_hom(&base, &proj) {
            return Err(Error::Invalid("projection is not a monoid homomorphism".into()));
        }
        let fibers: Vec<Vec<usize>> = (0..base.size).map(|b| (0..total.size).filter(|&e| proj[e] == b).collect()).collect();
        if let Some(b) = fibers.iter().position(|f| f.is_empty()) {
            return Err(Error::Invalid(format!("projection misses base element {b}")));
        }
        if system.monoid_size != base.size || action.len() != base.size {
            return Err(Error::Invalid("system and actions must be indexed by the base".into()));
        }
        for b in 0..base.size {
            if action[b].len() != system.groups[b].size * fibers[b].len() || action[b].iter().any(|&e| e >= total.size || proj[e] != b) {
                return Err(Error::Invalid(format!("action of D_{b} has the wrong shape or leaves its fiber")));
            }
        }
        Ok(MonoidExtension { total, base, proj, system, fibers, action })
    }

    fn pos(&self, e: usize) -> usize {
        self.fibers[self.proj[e]].binary_search(&e).expect("element lies in its fiber")
    }

    /// `d + e`.
    pub fn act(&self, d: usize, e: usize) -> usize {
        let b = self.proj[e];
        self.action[b][d * self.fibers[b].len() + self.pos(e)]
    }

    /// The `d` with `d + e' = e`, if the action provides exactly one.
    pub fn sub(&self, e: usize, e2: usize) -> Option<usize> {
        let b = self.proj[e];
        let mut hits = (0..self.system.groups[b].size).filter(|&d| self.act(d, e2) == e);
        let d = hits.next()?;
        hits.next().is_none().then_some(d)
    }
}

/// `M ⋊ D`: elements `(x, d)` with `d ∈ D_x`, listed fiber by fiber, and
/// `(x₁, d₁)(x₂, d₂) = (x₁x₂, d₁x₂ + x₁d₂)`.
pub fn trivial_extension(monoid: &FiniteMonoid, system: &NaturalSystem) -> Result<MonoidExtension> {
    let n = monoid.size;
    if system.monoid_size != n {
        return Err(Error::Invalid("natural system is over a different monoid".into()));
    }
    let mut offset = Vec::with_capacity(n);
    let mut total_size = 0;
    for g in &system.groups {
        offset.push(total_size);
        total_size += g.size;
    }
    let split = |e: usize| {
        let x = (0..n).rev().find(|&x| offset[x] <= e).expect("offsets start at zero");
        (x, e - offset[x])
    };
    let mut mul = Vec::with_capacity(total_size * total_size);
    for e1 in 0..total_size {
        let (x1, d1) = split(e1);
        for e2 in 0..total_size {
            let (x2, d2) = split(e2);
            let x = monoid.times(x1, x2);
            mul.push(offset[x] + system.groups[x].plus(system.r(x1, x2, d1), system.l(x1, x2, d2)));
        }
    }
    let unit = offset[monoid.unit] + system.groups[monoid.unit].zero;
    let total = FiniteMonoid::new(total_size, mul, unit).map_err(|e| Error::Internal(format!("M ⋊ D is not a monoid: {e}")))?;
    let proj = (0..total_size).map(|e| split(e).0).collect();
    let action = (0..n)
        .map(|x| {
            let (g, base) = (&system.groups[x], offset[x]);
            (0..g.size).flat_map(|d| (0..g.size).map(move |i| base + g.plus(d, i))).collect()
        })
        .collect();
    let ext = MonoidExtension::new(total, monoid.clone(), proj, system.clone(), action)?;
    if let Some(w) = check_linear_extension(&ext).witness {
        return Err(Error::Internal(format!("M ⋊ D fails the extension laws: {w}")));
    }
    Ok(ext)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinExtReport {
    pub linear: bool,
    pub witness: Option<String>,
}

/// Checks that every fiber action is a free transitive group action, then
/// `e₁e₂ − e₁e₂' = P(e₁)(e₂ − e₂')` and `e₁e₂ − e₁'e₂ = (e₁ − e₁')P(e₂)`
/// exhaustively.
pub fn check_linear_extension(ext: &MonoidExtension) -> LinExtReport {
    let fail = |w: String| LinExtReport { linear: false, witness: Some(w) };
    for (b, fiber) in ext.fibers.iter().enumerate() {
        let g = &ext.system.groups[b];
        if g.size != fiber.len() {
            return fail(format!("|D_{b}| = {} but the fiber over {b} has {} elements", g.size, fiber.len()));
        }
        for &e in fiber {
            if ext.act(g.zero, e) != e {
                return fail(format!("0 + e ≠ e at e={e}"));
            }
            let mut hit = vec![false; fiber.len()];
            for d in 0..g.size {
                hit[ext.pos(ext.act(d, e))] = true;
                for d2 in 0..g.size {
                    if ext.act(g.plus(d, d2), e) != ext.act(d, ext.act(d2, e)) {
                        return fail(format!("(d + d') + e ≠ d + (d' + e) at d={d}, d'={d2}, e={e}"));
                    }
                }
            }
            if hit.contains(&false) {
                return fail(format!("action of D_{b} on e={e} is not free and transitive"));
            }
        }
    }
    let (t, p, sys) = (&ext.total, &ext.proj, &ext.system);
    for e1 in 0..t.size {
        for e2 in 0..t.size {
            for &e2b in &ext.fibers[p[e2]] {
                let lhs = ext.sub(t.times(e1, e2), t.times(e1, e2b));
                let rhs = ext.sub(e2, e2b).map(|d| sys.l(p[e1], p[e2], d));
                if lhs.is_none() || lhs != rhs {
                    return fail(format!("`e₁e₂ − e₁e₂' = P(e₁)(e₂ − e₂')` fails at e₁={e1}, e₂={e2}, e₂'={e2b}"));
                }
            }
            for &e1b in &ext.fibers[p[e1]] {
                let lhs = ext.sub(t.times(e1, e2), t.times(e1b, e2));
                let rhs = ext.sub(e1, e1b).map(|d| sys.r(p[e1], p[e2], d));
                if lhs.is_none() || lhs != rhs {
                    return fail(format!("`e₁e₂ − e₁'e₂ = (e₁ − e₁')P(e₂)` fails at e₁={e1}, e₁'={e1b}, e₂={e2}"));
                }
            }
        }
    }
    LinExtReport { linear: true, witness: None }
}

/// Largest fiber the untwistedness search accepts.
pub const UNTWISTED_FIBER_CAP: usize = 8;

/// Node budget for the untwistedness search.
const UNTWISTED_NODE_BUDGET: usize = 1_000_000;

/// A Maltsev family witnessing that an extension is untwisted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UntwistedFamily {
    /// `theta[c]: D_1 → D_c`, the identification with the unit's group.
    pub theta: Vec<Vec<usize>>,
    /// `m[(f₁ * n + f₂) * n + f]`, defined when `P(f₁) = P(f₂)`.
    pub m: Vec<Option<usize>>,
}

/// Searches for `m(f₁, f₂, f)` over pairs in a common fiber, landing over
/// `P(f)`, that is a commutative associative Maltsev operation and
/// equivariant for multiplication on both sides.
///
/// Any such `m` has the form `m(f₁, f₂, f) = ψ(f₁ − f₂) + f` for a
/// coherent family of isomorphisms `ψ_{b,c}: D_b → D_c`, so the search
/// runs over identifications `θ_c: D_1 → D_c` and every candidate found is
/// then checked law by law on the total monoid.
pub fn check_untwisted(ext: &MonoidExtension) -> Result<Option<UntwistedFamily>> {
    if let Some(f) = ext.fibers.iter().find(|f| f.len() > UNTWISTED_FIBER_CAP) {
        return Err(Error::SearchBudgetExceeded(format!("fiber of size {} exceeds the cap {UNTWISTED_FIBER_CAP}", f.len())));
    }
    if !check_linear_extension(ext).linear {
        return Err(Error::Invalid("not a linear extension".into()));
    }
    let base = &ext.base;
    let groups = &ext.system.groups;
    let u = base.unit;
    if groups.iter().any(|g| g.size != groups[u].size) {
        return Ok(None);
    }
    let mut choices = Vec::with_capacity(base.size);
    for c in 0..base.size {
        if c == u {
            choices.push(vec![(0..groups[u].size).collect::<Vec<usize>>()]);
        } else {
            let isos: Vec<Vec<usize>> = additive_homs(&groups[u], &groups[c], UNTWISTED_NODE_BUDGET)?
                .into_iter()
                .filter(|f| {
                    let mut seen = vec![false; f.len()];
                    f.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
                })
                .collect();
            choices.push(isos);
        }
    }
    let mut theta: Vec<Option<Vec<usize>>> = vec![None; base.size];
    let mut nodes = 0;
    search(ext, &choices, 0, &mut theta, &mut nodes)
}

fn invert(f: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; f.len()];
    for (i, &v) in f.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// Whether `a ψ_{b,c}(x) = ψ_{ab,ac}(a x)` and `ψ_{b,c}(x) a = ψ_{ba,ca}(x a)`
/// hold wherever all four identifications are assigned.
fn coherent(ext: &MonoidExtension, theta: &[Option<Vec<usize>>]) -> bool {
    let base = &ext.base;
    let sys = &ext.system;
    let psi = |b: usize, c: usize, x: usize| -> Option<usize> {
        let (tb, tc) = (theta[b].as_ref()?, theta[c].as_ref()?);
        Some(tc[invert(tb)[x]])
    };
    for a in 0..base.size {
        for b in 0..base.size {
            for c in 0..base.size {
                let (ab, ac, ba, ca) = (base.times(a, b), base.times(a, c), base.times(b, a), base.times(c, a));
                for x in 0..sys.groups[b].size {
                    if let (Some(l), Some(r)) = (psi(b, c, x).map(|y| sys.l(a, c, y)), psi(ab, ac, sys.l(a, b, x))) {
                        if l != r {
                            return false;
                        }
                    }
                    if let (Some(l), Some(r)) = (psi(b, c, x).map(|y| sys.r(c, a, y)), psi(ba, ca, sys.r(b, a, x))) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

fn search(
    ext: &MonoidExtension,
    choices: &[Vec<Vec<usize>>],
    c: usize,
    theta: &mut Vec<Option<Vec<usize>>>,
    nodes: &mut usize,
) -> Result<Option<UntwistedFamily>> {
    *nodes += 1;
    if *nodes > UNTWISTED_NODE_BUDGET {
        return Err(Error::SearchBudgetExceeded(format!("untwistedness search exceeded {UNTWISTED_NODE_BUDGET} nodes")));
    }
    if c == choices.len() {
        let theta: Vec<Vec<usize>> = theta.iter().map(|t| t.clone().expect("assigned")).collect();
        let m = family_operation(ext, &theta);
        return Ok(family_failure(ext, &m).is_none().then_some(UntwistedFamily { theta, m }));
    }
    for f in &choices[c] {
        theta[c] = Some(f.clone());
        if coherent(ext, theta) {
            if let Some(found) = search(ext, choices, c + 1, theta, nodes)? {
                return Ok(Some(found));
            }
        }
    }
    theta[c] = None;
    Ok(None)
}

fn family_operation(ext: &MonoidExtension, theta: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n = ext.total.size;
    let p = &ext.proj;
    let mut m = vec![None; n * n * n];
    for f1 in 0..n {
        for f2 in 0..n {
            if p[f1] != p[f2] {
                continue;
            }
            let d = ext.sub(f1, f2).expect("linear extension");
            let x = invert(&theta[p[f1]])[d];
            for f in 0..n {
                m[(f1 * n + f2) * n + f] = Some(ext.act(theta[p[f]][x], f));
            }
        }
    }
    m
}

/// The first law the family `m` violates, checked directly on the total
/// monoid, including `φ_{b,b} = id` and `φ_{b',b''}φ_{b,b'} = φ_{b,b''}`
/// for `φ_{b,P(f)}(f₁ − f₂) = m(f₁, f₂, f) − f`.
pub fn family_failure(ext: &MonoidExtension, m: &[Option<usize>]) -> Option<String> {
    let n = ext.total.size;
    let p = &ext.proj;
    let t = &ext.total;
    let get = |a: usize, b: usize, c: usize| m[(a * n + b) * n + c];
    for f1 in 0..n {
        for f2 in 0..n {
            for f in 0..n {
                let defined = p[f1] == p[f2];
                let Some(v) = get(f1, f2, f) else {
                    if defined {
                        return Some(format!("m({f1},{f2},{f}) is undefined"));
                    }
                    continue;
                };
                if !defined {
                    return Some(format!("m({f1},{f2},{f}) is defined off the fibered domain"));
                }
                if p[v] != p[f] {
                    return Some(format!("P(m({f1},{f2},{f})) ≠ P({f})"));
                }
                for g in 0..n {
                    if get(t.times(g, f1), t.times(g, f2), t.times(g, f)) != Some(t.times(g, v)) {
                        return Some(format!("g m(f₁,f₂,f) ≠ m(gf₁,gf₂,gf) at g={g}, f₁={f1}, f₂={f2}, f={f}"));
                    }
                    if get(t.times(f1, g), t.times(f2, g), t.times(f, g)) != Some(t.times(v, g)) {
                        return Some(format!("m(f₁,f₂,f)h ≠ m(f₁h,f₂h,fh) at h={g}, f₁={f1}, f₂={f2}, f={f}"));
                    }
                }
                if f1 == f2 && v != f {
                    return Some(format!("m(f,f,g) ≠ g at f={f1}, g={f}"));
                }
                if f2 == f && v != f1 {
                    return Some(format!("m(f,g,g) ≠ f at f={f1}, g={f2}"));
                }
                if p[f] == p[f1] && get(f, f2, f1) != Some(v) {
                    return Some(format!("m is not commutative at ({f1},{f2},{f})"));
                }
                for f4 in 0..n {
                    for f5 in 0..n {
                        if p[v] != p[f4] || p[f] != p[f4] {
                            continue;
                        }
                        let inner = get(f, f4, f5).expect("defined");
                        if get(v, f4, f5) != get(f1, f2, inner) {
                            return Some(format!("m is not associative at ({f1},{f2},{f},{f4},{f5})"));
                        }
                    }
                }
            }
        }
    }
    // φ_{b,c}(d), read off with base points e_b, e_c.
    let groups = &ext.system.groups;
    let bases = ext.base.size;
    let mut phi = vec![Vec::new(); bases * bases];
    for b in 0..bases {
        let eb = ext.fibers[b][0];
        for c in 0..bases {
            for d in 0..groups[b].size {
                let f1 = ext.act(d, eb);
                let mut vals = ext.fibers[c].iter().map(|&f| ext.sub(get(f1, eb, f).expect("defined"), f));
                let first = vals.next().flatten();
                if first.is_none() || vals.any(|v| v != first) {
                    return Some(format!("φ_{{{b},{c}}} depends on the chosen base point"));
                }
                phi[b * bases + c].push(first.expect("checked"));
            }
        }
    }
    for b in 0..bases {
        if phi[b * bases + b] != (0..groups[b].size).collect::<Vec<_>>() {
            return Some(format!("φ_{{{b},{b}}} is not the identity"));
        }
        for b1 in 0..bases {
            for b2 in 0..bases {
                let via: Vec<usize> = phi[b * bases + b1].iter().map(|&x| phi[b1 * bases + b2][x]).collect();
                if via != phi[b * bases + b2] {
                    return Some(format!("φ_{{{b1},{b2}}}φ_{{{b},{b1}}} ≠ φ_{{{b},{b2}}}"));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_one() -> FiniteMonoid {
        // 0 is the unit `1`, 1 is the absorbing `0`.
        FiniteMonoid::new(2, vec![0, 1, 1, 1], 0).unwrap()
    }

    #[test]
    fn trivial_system_gives_the_base() {
        let m = zero_one();
        let ext = trivial_extension(&m, &NaturalSystem::trivial(&m)).unwrap();
        assert_eq!(ext.total, m);
        assert!(check_untwisted(&ext).unwrap().is_some());
    }

    #[test]
    fn constant_system_adds_coordinates() {
        let m = zero_one();
        let a = AbGroup::cyclic(3);
        let ext = trivial_extension(&m, &NaturalSystem::constant(&m, &a).unwrap()).unwrap();
        for e1 in 0..6 {
            for e2 in 0..6 {
                let (x1, d1, x2, d2) = (e1 / 3, e1 % 3, e2 / 3, e2 % 3);
                assert_eq!(ext.total.times(e1, e2), m.times(x1, x2) * 3 + (d1 + d2) % 3);
            }
        }
        let fam = check_untwisted(&ext).unwrap().unwrap();
        assert_eq!(family_failure(&ext, &fam.m), None);
    }

    #[test]
    fn bad_system_names_the_law() {
        let m = zero_one();
        let g = AbGroup::cyclic(2);
        let id = vec![0, 1];
        let zero = vec![0, 0];
        // (−)0 kills D_1 while 0(−) is the identity, so (0x)0 ≠ 0(x0).
        let left = vec![id.clone(), id.clone(), id.clone(), id.clone()];
        let right = vec![id.clone(), zero.clone(), id.clone(), id.clone()];
        let e = NaturalSystem::new(&m, vec![g.clone(), g], left, right).unwrap_err();
        assert!(e.to_string().contains("law"), "{e}");
    }

    #[test]
    fn twisted_action_is_detected() {
        let m = zero_one();
        let ext0 = trivial_extension(&m, &NaturalSystem::constant(&m, &AbGroup::cyclic(2)).unwrap()).unwrap();
        let mut action = ext0.action.clone();
        action[1] = vec![2, 3, 2, 3];
        let ext = MonoidExtension::new(ext0.total, ext0.base, ext0.proj, ext0.system, action).unwrap();
        let rep = check_linear_extension(&ext);
        assert!(!rep.linear);
        assert!(rep.witness.unwrap().contains("free"));
    }
}
