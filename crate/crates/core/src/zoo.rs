//! Small named algebras used throughout tests, benches and the CLI corpus.

use crate::abelian::LinearForm;
use crate::algebra::{product, FiniteAlgebra, Operation};
use crate::bimodule::{trivial_extension_diagram, DBimodule, DiagramE};
use crate::error::Result;
use crate::ring::{Bimodule, FiniteRing, LeftModule};

/// A group as an algebra with `mul/2`, `inv/1` and the identity `e/0`.
///
/// `mul` is the Cayley table, row-major; the identity and inverses are
/// recovered from it.
pub fn group_from_table(n: usize, mul: Vec<usize>) -> FiniteAlgebra {
    assert_eq!(mul.len(), n * n);
    let e = (0..n)
        .find(|&e| (0..n).all(|x| mul[e * n + x] == x && mul[x * n + e] == x))
        .expect("table has no identity");
    let inv: Vec<usize> = (0..n)
        .map(|x| (0..n).find(|&y| mul[x * n + y] == e).expect("element without inverse"))
        .collect();
    FiniteAlgebra::new(
        n,
        vec![Operation::new("mul", 2, mul), Operation::new("inv", 1, inv), Operation::new("e", 0, vec![e])],
    )
    .expect("valid group table")
}

pub fn group_from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> FiniteAlgebra {
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            mul.push(f(a, b));
        }
    }
    group_from_table(n, mul)
}

/// `Z/n` with addition written as `mul`.
pub fn cyclic_group(n: usize) -> FiniteAlgebra {
    group_from_fn(n, |a, b| (a + b) % n)
}

/// Dihedral group of order 8. Element `2^0 r^i s^j` is encoded `i + 4j`
/// with `s r = r^{-1} s`; the rotation `r^2` is element 2.
pub fn dihedral4() -> FiniteAlgebra {
    dihedral(4)
}

/// Dihedral group of order `2n`, element `r^i s^j` encoded `i + n j`.
pub fn dihedral(n: usize) -> FiniteAlgebra {
    group_from_fn(2 * n, |a, b| {
        let (i1, j1) = (a % n, a / n);
        let (i2, j2) = (b % n, b / n);
        // r^i1 s^j1 r^i2 s^j2 = r^(i1 ± i2) s^(j1+j2)
        let i = if j1 == 0 { (i1 + i2) % n } else { (i1 + n - i2) % n };
        i + n * ((j1 + j2) % 2)
    })
}

/// The symmetric group on three letters, elements in lexicographic order of
/// their one-line notation; composition is `(a * b)(x) = a(b(x))`.
pub fn symmetric3() -> FiniteAlgebra {
    let perms: Vec<[usize; 3]> =
        vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    group_from_fn(6, |a, b| {
        let c = [perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]];
        perms.iter().position(|p| *p == c).unwrap()
    })
}

/// Quaternion group: `±1, ±i, ±j, ±k` encoded as `unit + 4 * sign`
/// with units ordered `1, i, j, k`.
pub fn quaternion() -> FiniteAlgebra {
    // unit products with sign: (result unit, negate?)
    let table = |u: usize, v: usize| -> (usize, bool) {
        match (u, v) {
            (0, x) | (x, 0) => (x, false),
            (a, b) if a == b => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    group_from_fn(8, |a, b| {
        let (u, neg) = table(a % 4, b % 4);
        let sign = (a / 4 + b / 4 + usize::from(neg)) % 2;
        u + 4 * sign
    })
}

/// Meet-semilattice on the chain `0 < 1 < ... < n-1`.
pub fn semilattice(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::new(n, vec![Operation::from_fn("meet", 2, n, |a| a[0].min(a[1]))]).unwrap()
}

/// `Z/n` with only the ternary operation `x - y + z`.
pub fn affine_herd(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::new(n, vec![Operation::from_fn("m", 3, n, |a| (a[0] + n - a[1] + a[2]) % n)]).unwrap()
}

/// `Z/n` with the single binary quasigroup operation `a x + b y + c` and its
/// two divisions. `a` and `b` must be units mod `n`.
pub fn affine_quasigroup(n: usize, a: usize, b: usize, c: usize) -> FiniteAlgebra {
    let inv = |u: usize| (1..n).find(|&v| (u * v) % n == 1).expect("not a unit");
    let (ai, bi) = (inv(a), inv(b));
    let mul = Operation::from_fn("mul", 2, n, |v| (a * v[0] + b * v[1] + c) % n);
    // x \ z: the y with x*y = z; z / y: the x with x*y = z.
    let ldiv = Operation::from_fn("ldiv", 2, n, |v| (bi * ((v[1] + 2 * n * n - a * v[0] - c) % n)) % n);
    let rdiv = Operation::from_fn("rdiv", 2, n, |v| (ai * ((v[0] + 2 * n * n - b * v[1] - c) % n)) % n);
    FiniteAlgebra::new(n, vec![mul, ldiv, rdiv]).unwrap()
}

/// Quasigroup given by a Latin square, with both divisions as operations.
pub fn quasigroup_from_table(n: usize, mul: Vec<usize>) -> FiniteAlgebra {
    let ldiv = Operation::from_fn("ldiv", 2, n, |v| (0..n).find(|&y| mul[v[0] * n + y] == v[1]).expect("not latin"));
    let rdiv = Operation::from_fn("rdiv", 2, n, |v| (0..n).find(|&x| mul[x * n + v[1]] == v[0]).expect("not latin"));
    FiniteAlgebra::new(n, vec![Operation::new("mul", 2, mul), ldiv, rdiv]).unwrap()
}

/// A non-associative loop of order 5 (identity 0).
pub fn loop5() -> FiniteAlgebra {
    #[rustfmt::skip]
    let mul = vec![
        0, 1, 2, 3, 4,
        1, 0, 3, 4, 2,
        2, 4, 0, 1, 3,
        3, 2, 4, 0, 1,
        4, 3, 1, 2, 0,
    ];
    quasigroup_from_table(5, mul)
}

/// `Z/2` with the minority operation `x + y + z`, optionally with the
/// constant-zero unary operation.
pub fn z2_minority(with_const_zero: bool) -> FiniteAlgebra {
    let mut ops = vec![Operation::from_fn("m", 3, 2, |a| a[0] ^ a[1] ^ a[2])];
    if with_const_zero {
        ops.push(Operation::new("zero", 1, vec![0, 0]));
    }
    FiniteAlgebra::new(2, ops).unwrap()
}

/// Groups of order at most 8 with their expected nilpotence class
/// (`None` when not nilpotent).
pub fn group_corpus() -> Vec<(&'static str, FiniteAlgebra, Option<usize>)> {
    let z2 = cyclic_group(2);
    vec![
        ("z1", cyclic_group(1), Some(0)),
        ("z2", cyclic_group(2), Some(1)),
        ("z3", cyclic_group(3), Some(1)),
        ("z4", cyclic_group(4), Some(1)),
        ("z2xz2", product(&[z2.clone(), z2.clone()]).expect("same signature"), Some(1)),
        ("z5", cyclic_group(5), Some(1)),
        ("z6", cyclic_group(6), Some(1)),
        ("s3", symmetric3(), None),
        ("z7", cyclic_group(7), Some(1)),
        ("z8", cyclic_group(8), Some(1)),
        ("z2xz4", product(&[z2.clone(), cyclic_group(4)]).expect("same signature"), Some(1)),
        ("z2^3", product(&[z2.clone(), z2.clone(), z2]).expect("same signature"), Some(1)),
        ("d4", dihedral4(), Some(2)),
        ("q8", quaternion(), Some(2)),
    ]
}

/// Maltsev algebras of size at most 8: groups, herds and quasigroups.
pub fn maltsev_corpus() -> Vec<(&'static str, FiniteAlgebra)> {
    let mut out: Vec<(&'static str, FiniteAlgebra)> =
        group_corpus().into_iter().filter(|(_, g, _)| g.size > 1).map(|(n, g, _)| (n, g)).collect();
    out.push(("herd-z4", affine_herd(4)));
    out.push(("herd-z6", affine_herd(6)));
    out.push(("minority-z2", z2_minority(false)));
    out.push(("quasigroup-z5", affine_quasigroup(5, 2, 3, 1)));
    out.push(("quasigroup-z7", affine_quasigroup(7, 3, 5, 0)));
    out.push(("loop5", loop5()));
    out
}

/// `Z/2` as a module over `Z/4`.
fn z2_over_z4() -> LeftModule {
    let r = FiniteRing::zmod(4);
    let add = (0..4).map(|i| (i / 2) ^ (i % 2)).collect();
    let act = (0..8).map(|i| (i / 2) * (i % 2) % 2).collect();
    LeftModule::from_tables(&r, 2, add, act).expect("Z/2 is a Z/4-module")
}

/// Linear forms with `|R|, |M| ≤ 4`, with and without pseudoconstants.
pub fn form_corpus() -> Vec<(&'static str, LinearForm)> {
    let z2 = FiniteRing::zmod(2);
    let z3 = FiniteRing::zmod(3);
    let z4 = FiniteRing::zmod(4);
    let dual = FiniteRing::dual_numbers(2);
    // The ideal {0, ε} of Z/2[ε]; ε is encoded 1.
    let ideal = LeftModule::regular(&dual).submodule(&[0, 1]).expect("ideal");
    let z2sq = LeftModule::regular(&z2).direct_sum(&LeftModule::regular(&z2));
    vec![
        ("zero-z2", LinearForm::zero_module(&z2)),
        ("id-z2", LinearForm::identity(&z2)),
        ("id-z3", LinearForm::identity(&z3)),
        ("id-z4", LinearForm::identity(&z4)),
        ("zero-z4", LinearForm::zero_module(&z4)),
        ("null-z2", LinearForm::new(z2.clone(), LeftModule::regular(&z2), vec![0, 0]).expect("zero map")),
        ("double-z2-z4", LinearForm::new(z4, z2_over_z4(), vec![0, 2]).expect("x ↦ 2x")),
        ("dual-ideal", LinearForm::new(dual, ideal, vec![0, 1]).expect("inclusion")),
        ("sum-z2sq", LinearForm::new(z2, z2sq, vec![0, 1, 1, 0]).expect("sum map")),
    ]
}

/// `𝒞(R)`, `K[1]` for `K = M` and `R` and the zero bimodule over `form`.
pub fn bimodule_corpus(form: &LinearForm, budget: usize) -> Result<Vec<(&'static str, DBimodule)>> {
    let r = &form.ring;
    Ok(vec![
        ("zero", DBimodule::zero(form)),
        ("cone-regular", DBimodule::cone(form, &Bimodule::regular(r), budget)?),
        ("shift-module", DBimodule::shift(form, form.module.clone())?),
        ("shift-regular", DBimodule::shift(form, LeftModule::regular(r))?),
    ])
}

/// Extension diagrams of linear forms used for Maltsev lifting.
pub fn lift_corpus(budget: usize) -> Result<Vec<(&'static str, DiagramE)>> {
    let z2 = FiniteRing::zmod(2);
    let z4 = FiniteRing::zmod(4);
    let id2 = LinearForm::identity(&z2);
    let zero_z4 = LinearForm::zero_module(&z4);
    let zero_z2 = LinearForm::zero_module(&z2);
    let cone = DBimodule::cone(&id2, &Bimodule::regular(&z2), budget)?;
    let shift = DBimodule::shift(&id2, LeftModule::regular(&z2))?;
    Ok(vec![
        ("z4-over-z2", DiagramE::new(LinearForm::identity(&z4), id2.clone(), vec![0, 1, 0, 1], vec![0, 1, 0, 1])?),
        ("zero-z4-over-zero-z2", DiagramE::new(zero_z4, zero_z2, vec![0, 1, 0, 1], vec![0])?),
        ("trivial-cone-z2", trivial_extension_diagram(&id2, &cone)?),
        ("trivial-shift-z2", trivial_extension_diagram(&id2, &shift)?),
    ])
}
