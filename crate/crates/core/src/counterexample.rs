//! A linear extension of monoid theories whose quotient set is not
//! abelian.
//!
//! `M = {1, 0}` under multiplication with `D_1 = 0`, `D_0 = Z/2 ⊕ Z/2`,
//! `0(x, y) = (y, y)` and `(x, y)0 = (0, 0)`. In `M ⋊ D = {1,00,10,01,11}`
//! the left set `S = M ⋊ D / (00 ∼ 10) = {1, *0, 01, 11}` lies over `M`,
//! but no equivariant Maltsev operation on `S ×_M S ×_M S` over `M` is
//! associative.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maltsev::{associativity_witness, check_maltsev, Domain, TernaryTable};
use crate::monoid::{check_linear_extension, check_untwisted, trivial_extension, FiniteMonoid, MonoidExtension, NaturalSystem};
use crate::ring::AbGroup;

/// Products of non-unit elements of `M ⋊ D` as displayed with the
/// example: every product whose right factor is `00` or `10` is `00`,
/// every other one is `11`.
const DISPLAYED_PRODUCTS: [(&str, &str, &str); 16] = [
    ("00", "00", "00"),
    ("10", "00", "00"),
    ("01", "00", "00"),
    ("11", "00", "00"),
    ("00", "10", "00"),
    ("10", "10", "00"),
    ("01", "10", "00"),
    ("11", "10", "00"),
    ("00", "01", "11"),
    ("10", "01", "11"),
    ("01", "01", "11"),
    ("11", "01", "11"),
    ("00", "11", "11"),
    ("10", "11", "11"),
    ("01", "11", "11"),
    ("11", "11", "11"),
];

/// Names of `S`, in index order.
pub const S_NAMES: [&str; 4] = ["1", "*0", "01", "11"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateWitness {
    /// `m(*0, 01, 11)`.
    pub forced: String,
    /// `(u, v, x, y, z)` with `m(u,v,m(x,y,z)) ≠ m(m(u,v,x),y,z)`.
    pub associativity: [String; 5],
    /// The values along `11 = m(11,*0,*0) = m(11,m(*0,01,11),*0)` and
    /// `m(11,11,m(01,*0,*0)) = 01`.
    pub chain_left: String,
    pub chain_right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub total_elements: Vec<String>,
    /// `(a, b, ab)` for the 16 non-unit products.
    pub products: Vec<(String, String, String)>,
    pub s_elements: Vec<String>,
    /// `(g, s, g·s)` for every `g ∈ M ⋊ D`, `s ∈ S`.
    pub action: Vec<(String, String, String)>,
    pub linear_extension: bool,
    pub untwisted: bool,
    /// Maps on the `0`-fiber that the Maltsev identities leave free.
    pub search_space: usize,
    /// Equivariant Maltsev operations over `M`.
    pub candidates: usize,
    /// The value of `m(*0, 01, 11)` shared by every candidate.
    pub forced_value: String,
    pub associative: usize,
    pub witnesses: Vec<CandidateWitness>,
}

fn broken(msg: impl Into<String>) -> Error {
    Error::CounterexampleBroken(msg.into())
}

/// `M ⋊ D` with `1` at index 0 and `(x, y) ∈ D_0` at index `1 + 2x + y`.
pub fn example_extension() -> Result<MonoidExtension> {
    // Index 0 is the unit `1`, index 1 the absorbing `0`.
    let m = FiniteMonoid::new(2, vec![0, 1, 1, 1], 0)?;
    let z2 = AbGroup::cyclic(2);
    let d0 = z2.direct_sum(&z2);
    let groups = vec![AbGroup::trivial(), d0];
    // left[x * 2 + y]: D_y → D_{xy}; right[x * 2 + y]: D_x → D_{xy}.
    let left = vec![vec![0], vec![0, 1, 2, 3], vec![0], vec![0, 3, 0, 3]];
    let right = vec![vec![0], vec![0], vec![0, 1, 2, 3], vec![0, 0, 0, 0]];
    let system = NaturalSystem::new(&m, groups, left, right)?;
    trivial_extension(&m, &system)
}

pub fn total_name(e: usize) -> String {
    if e == 0 {
        "1".into()
    } else {
        let d = e - 1;
        format!("{}{}", d >> 1, d & 1)
    }
}

/// Runs every check and fails with [`Error::CounterexampleBroken`] if any
/// expected value is not reproduced.
pub fn counterexample_harness() -> Result<CounterexampleReport> {
    let ext = example_extension()?;
    let t = &ext.total;
    let n = t.size;
    let total_elements: Vec<String> = (0..n).map(total_name).collect();
    let by_name = |s: &str| total_elements.iter().position(|x| x == s).expect("known name");

    let mut products = Vec::with_capacity(16);
    for (a, b, expected) in DISPLAYED_PRODUCTS {
        let got = total_name(t.times(by_name(a), by_name(b)));
        if got != expected {
            return Err(broken(format!("{a}·{b} = {got}, expected {expected}")));
        }
        products.push((a.to_string(), b.to_string(), got));
    }

    // S identifies 00 with 10; class of each element of M ⋊ D.
    let class = |e: usize| match total_name(e).as_str() {
        "1" => 0,
        "00" | "10" => 1,
        "01" => 2,
        "11" => 3,
        _ => unreachable!("five elements"),
    };
    let mut act = vec![vec![usize::MAX; 4]; n];
    for g in 0..n {
        for e in 0..n {
            let v = class(t.times(g, e));
            let slot = &mut act[g][class(e)];
            if *slot != usize::MAX && *slot != v {
                return Err(broken("00 ∼ 10 is not compatible with the left action"));
            }
            *slot = v;
        }
    }
    let ten = by_name("10");
    for (s, expected) in [(1, 1), (2, 3), (3, 3)] {
        if act[ten][s] != expected {
            return Err(broken(format!("10·{} = {}, expected {}", S_NAMES[s], S_NAMES[act[ten][s]], S_NAMES[expected])));
        }
    }
    let action = (0..n)
        .flat_map(|g| (0..4).map(move |s| (g, s)))
        .map(|(g, s)| (total_elements[g].clone(), S_NAMES[s].to_string(), S_NAMES[act[g][s]].to_string()))
        .collect();

    let linear_extension = check_linear_extension(&ext).linear;
    if !linear_extension {
        return Err(broken("M ⋊ D → M is not a linear extension"));
    }
    let untwisted = check_untwisted(&ext)?.is_some();

    // The 0-fiber of S is {*0, 01, 11} = {1, 2, 3}; Maltsev fixes every
    // triple with x = y or y = z.
    let eta = vec![0, 1, 1, 1];
    let fiber = [1usize, 2, 3];
    let mut free = Vec::new();
    for &x in &fiber {
        for &y in &fiber {
            for &z in &fiber {
                if x != y && y != z {
                    free.push((x, y, z));
                }
            }
        }
    }
    let search_space = 3usize.pow(free.len() as u32);
    let build = |code: usize| -> Vec<usize> {
        let mut table = vec![usize::MAX; 64];
        table[0] = 0;
        for &x in &fiber {
            for &y in &fiber {
                table[(x * 4 + y) * 4 + y] = x;
                table[(y * 4 + y) * 4 + x] = x;
            }
        }
        let mut c = code;
        for &(x, y, z) in &free {
            table[(x * 4 + y) * 4 + z] = fiber[c % 3];
            c /= 3;
        }
        table
    };
    let equivariant = |table: &[usize]| {
        (0..n).all(|g| {
            let a = &act[g];
            let at = |x: usize, y: usize, z: usize| table[(x * 4 + y) * 4 + z];
            (0..4).all(|x| {
                (0..4).all(|y| {
                    (0..4).all(|z| {
                        eta[x] != eta[y] || eta[y] != eta[z] || a[at(x, y, z)] == at(a[x], a[y], a[z])
                    })
                })
            })
        })
    };
    let candidates: Vec<Vec<usize>> =
        (0..search_space).into_par_iter().map(build).filter(|t| equivariant(t)).collect();

    let (s0, s01, s11) = (1, 2, 3);
    let mut witnesses = Vec::with_capacity(candidates.len());
    let mut associative = 0;
    for table in &candidates {
        let tt = TernaryTable {
            size: 4,
            domain: Domain::Fibered(eta.clone()),
            table: table.iter().map(|&v| (v != usize::MAX).then_some(v)).collect(),
        };
        if !check_maltsev(&tt)? {
            return Err(broken("enumerated operation is not Maltsev"));
        }
        let m = |x: usize, y: usize, z: usize| table[(x * 4 + y) * 4 + z];
        if m(s0, s01, s11) != s0 {
            return Err(broken(format!("m(*0,01,11) = {}, expected *0", S_NAMES[m(s0, s01, s11)])));
        }
        let Some(w) = associativity_witness(&tt)? else {
            associative += 1;
            continue;
        };
        // 11 = m(11,*0,*0) = m(11,m(*0,01,11),*0) and m(11,11,m(01,*0,*0)) = 01.
        let chain_left = m(s11, m(s0, s01, s11), s0);
        let chain_right = m(s11, s11, m(s01, s0, s0));
        if S_NAMES[chain_left] != "11" || S_NAMES[chain_right] != "01" {
            return Err(broken("associativity chain does not reproduce 11 ≠ 01"));
        }
        witnesses.push(CandidateWitness {
            forced: S_NAMES[m(s0, s01, s11)].into(),
            associativity: w.map(|i| S_NAMES[i].to_string()),
            chain_left: S_NAMES[chain_left].into(),
            chain_right: S_NAMES[chain_right].into(),
        });
    }
    if associative != 0 {
        return Err(broken(format!("{associative} associative equivariant Maltsev operations exist")));
    }
    Ok(CounterexampleReport {
        total_elements,
        products,
        s_elements: S_NAMES.iter().map(|s| s.to_string()).collect(),
        action,
        linear_extension,
        untwisted,
        search_space,
        candidates: candidates.len(),
        forced_value: "*0".into(),
        associative,
        witnesses,
    })
}
