//! Acceptance suite: one PASS/FAIL line per criterion.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use clap::CommandFactory;
use mk_cli::Cli;
use mk_core::abelian::{abelianize, compose_affinity, hom_set, realize, roundtrip_check};
use mk_core::algebra::tuples;
use mk_core::bimodule::{crext_check, enumerate_derivations, lift_maltsev};
use mk_core::commutator::{center, commutator, commutator_oracle, nilpotence_class};
use mk_core::congruence::all_congruences;
use mk_core::counterexample::counterexample_harness;
use mk_core::maltsev::{asmal_witness, enumerate_herds, find_maltsev_term, maltsev_term_from, torsor_to_group};
use mk_core::{
    zoo, AffinityOp, Bimodule, Congruence, DBimodule, FiniteAlgebra, FiniteRing, LinearForm, Term, TermOp,
    DEFAULT_CLONE_BUDGET, DEFAULT_DER_BUDGET, DEFAULT_LATTICE_SIZE_CAP,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, limit {limit:?}");
    Ok(())
}

fn term(alg: &FiniteAlgebra) -> TermOp {
    find_maltsev_term(alg, DEFAULT_CLONE_BUDGET).unwrap().expect("Maltsev algebra")
}

fn lattice(alg: &FiniteAlgebra) -> Vec<Congruence> {
    all_congruences(alg, 10_000, DEFAULT_LATTICE_SIZE_CAP).unwrap()
}

fn eval(form: &LinearForm, op: &AffinityOp, args: &[usize]) -> usize {
    support::interpret(form, op.m, &op.r, args)
}

fn carrier(form: &LinearForm) -> usize {
    form.module.size * form.ring.size
}

fn random_op(form: &LinearForm, arity: usize, rng: &mut ChaCha8Rng) -> AffinityOp {
    AffinityOp::new(
        rng.random_range(0..form.module.size),
        (1..arity).map(|_| rng.random_range(0..form.ring.size)).collect(),
    )
}

/// The example monoid, its quotient set and the forced Maltsev value.
fn counterexample() -> Outcome {
    let start = Instant::now();
    let rep = counterexample_harness().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    // The displayed products: a right factor 00 or 10 gives 00, 01 or 11 gives 11.
    let non_unit = ["00", "10", "01", "11"];
    let mut expected = Vec::new();
    for a in non_unit {
        for b in non_unit {
            let c = if b == "00" || b == "10" { "00" } else { "11" };
            expected.push((a.to_string(), b.to_string(), c.to_string()));
        }
    }
    let mut got = rep.products.clone();
    got.sort();
    expected.sort();
    ensure!(got == expected, "products {got:?}");
    let mut elements = rep.total_elements.clone();
    elements.sort();
    ensure!(elements == ["00", "01", "1", "10", "11"], "elements {elements:?}");
    ensure!(rep.s_elements == ["1", "*0", "01", "11"], "S = {:?}", rep.s_elements);
    let act = |g: &str, s: &str| rep.action.iter().find(|(a, b, _)| a == g && b == s).map(|t| t.2.clone());
    ensure!(act("10", "*0").as_deref() == Some("*0"), "10 · *0");
    ensure!(act("10", "01").as_deref() == Some("11"), "10 · 01");
    ensure!(act("10", "11").as_deref() == Some("11"), "10 · 11");
    ensure!(rep.forced_value == "*0", "forced value {}", rep.forced_value);
    let (count, associative, forced) = support::counterexample_count();
    ensure!(rep.candidates == count && count > 0, "{} candidates, oracle {count}", rep.candidates);
    ensure!(forced == BTreeSet::from([1]), "oracle forced values {forced:?}");
    ensure!(rep.associative == 0 && associative == 0, "associative {} / {associative}", rep.associative);
    for w in &rep.witnesses {
        ensure!(w.forced == "*0", "candidate forced {}", w.forced);
        ensure!(w.chain_left != w.chain_right, "chain does not break");
    }
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(())
}

fn commutator_oracle_agreement() -> Outcome {
    let start = Instant::now();
    let corpus = zoo::maltsev_corpus();
    ensure!(corpus.len() >= 10, "corpus has {} algebras", corpus.len());
    for (name, alg) in &corpus {
        ensure!(alg.size <= 8, "{name} has size {}", alg.size);
        let p = term(alg);
        let l = lattice(alg);
        for r in &l {
            for s in &l {
                let ours = commutator(alg, r, s, &p).map_err(|e| e.to_string())?;
                let oracle = commutator_oracle(alg, r, s, &p, 10_000, DEFAULT_LATTICE_SIZE_CAP).map_err(|e| e.to_string())?;
                ensure!(ours == oracle, "{name}: [{:?}, {:?}]", r.blocks(), s.blocks());
            }
        }
    }
    within(start, Duration::from_secs(60))
}

fn group_cross_check() -> Outcome {
    let start = Instant::now();
    let mut seen = BTreeSet::new();
    for (name, alg, class) in zoo::group_corpus() {
        let g = support::Group::of(&alg);
        let p = term(&alg);
        let normals = g.normal_subgroups();
        ensure!(lattice(&alg).len() == normals.len(), "{name}: lattice size");
        for n1 in &normals {
            for n2 in &normals {
                let r = Congruence::from_labels(&g.congruence_labels(n1));
                let s = Congruence::from_labels(&g.congruence_labels(n2));
                let ours = commutator(&alg, &r, &s, &p).map_err(|e| e.to_string())?;
                ensure!(g.kernel(ours.block_index()) == g.commutator(n1, n2), "{name}: commutator");
            }
        }
        let z = center(&alg, &p).map_err(|e| e.to_string())?;
        ensure!(g.kernel(z.block_index()) == g.center(), "{name}: center");
        let ours = nilpotence_class(&alg, &p, 16).map_err(|e| e.to_string())?;
        ensure!(ours == g.nilpotence_class() && ours == class, "{name}: class {ours:?}");
        let abelian = (0..alg.size).all(|a| (0..alg.size).all(|b| g.m(a, b) == g.m(b, a)));
        if abelian {
            ensure!(ours.is_some_and(|c| c <= 1), "{name}: abelian with class {ours:?}");
        }
        seen.insert((name, ours));
    }
    for want in [("D4", Some(2)), ("Q8", Some(2)), ("S3", None)] {
        ensure!(seen.iter().any(|&(n, c)| n.eq_ignore_ascii_case(want.0) && c == want.1), "{want:?} missing");
    }
    within(start, Duration::from_secs(30))
}

fn herd_tables(n: usize) -> Vec<Vec<usize>> {
    let mut t: Vec<Vec<usize>> = enumerate_herds(n).iter().map(|h| h.table.iter().map(|v| v.unwrap()).collect()).collect();
    t.sort();
    t
}

fn torsor_round_trip() -> Outcome {
    let start = Instant::now();
    for n in 1..=3 {
        ensure!(herd_tables(n) == support::herds_by_exhaustion(n), "n = {n}: enumeration differs from exhaustion");
    }
    ensure!(herd_tables(4) == support::herds_of_order_four(), "n = 4: enumeration differs");
    for n in 1..=4 {
        for m in enumerate_herds(n) {
            let g = torsor_to_group(&m, false).map_err(|e| e.to_string())?;
            ensure!(g.order == n, "group order {}", g.order);
            ensure!(g.reconstruct().map_err(|e| e.to_string())? == m, "round trip on {:?}", m.table);
            let t = |x: usize, y: usize, z: usize| m.table[(x * n + y) * n + z].unwrap();
            let commutative = tuples(n, 3).all(|a| t(a[0], a[1], a[2]) == t(a[2], a[1], a[0]));
            let abelian = (0..n).all(|a| (0..n).all(|b| g.add[a * n + b] == g.add[b * n + a]));
            if commutative {
                ensure!(abelian, "commutative table with non-abelian group");
            }
        }
    }
    within(start, Duration::from_secs(30))
}

fn derived_identity() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        for m in enumerate_herds(n) {
            ensure!(asmal_witness(&m).map_err(|e| e.to_string())?.is_none(), "witness on {:?}", m.table);
            let t = |x: usize, y: usize, z: usize| m.table[(x * n + y) * n + z].unwrap();
            for a in tuples(n, 5) {
                let (u, v, x, y, z) = (a[0], a[1], a[2], a[3], a[4]);
                ensure!(t(u, v, t(x, y, z)) == t(u, t(y, x, v), z), "fails at {a:?}");
            }
            checked += 1;
        }
    }
    ensure!(checked > 0, "no tables");
    Ok(())
}

fn composition() -> Outcome {
    let start = Instant::now();
    let forms = zoo::form_corpus();
    ensure!(forms.len() >= 6, "{} forms", forms.len());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, form) in &forms {
        ensure!(form.ring.size <= 4 && form.module.size <= 4, "{name} too large");
        let n = carrier(form);
        let compose = |a: &AffinityOp, bs: &[AffinityOp]| compose_affinity(a, bs, form).map_err(|e| e.to_string());
        for k in 1..=3 {
            for j in 1..=3 {
                let projections: Vec<AffinityOp> = (0..j).map(|i| AffinityOp::projection(form, j, i)).collect();
                let points: Vec<Vec<usize>> = tuples(n, j).collect();
                for outer in hom_set(form, k) {
                    for inner in hom_set(form, j) {
                        for slot in 0..k {
                            let inners: Vec<AffinityOp> =
                                (0..k).map(|i| if i == slot { inner.clone() } else { projections[i % j].clone() }).collect();
                            let composed = compose(&outer, &inners)?;
                            for a in &points {
                                let vals: Vec<usize> = inners.iter().map(|u| eval(form, u, a)).collect();
                                ensure!(eval(form, &composed, a) == eval(form, &outer, &vals), "{name}: {outer} at {a:?}");
                            }
                        }
                    }
                }
            }
            let ids: Vec<AffinityOp> = (0..k).map(|i| AffinityOp::projection(form, k, i)).collect();
            for op in hom_set(form, k) {
                ensure!(compose(&op, &ids)? == op, "{name}: right unit fails for {op}");
            }
            for j in 1..=3 {
                let bs: Vec<AffinityOp> = (0..k).map(|_| random_op(form, j, &mut rng)).collect();
                for (i, b) in bs.iter().enumerate() {
                    ensure!(compose(&AffinityOp::projection(form, k, i), &bs)? == *b, "{name}: left unit fails");
                }
            }
        }
        for _ in 0..300 {
            let (k, j, l) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
            let a = random_op(form, k, &mut rng);
            let bs: Vec<AffinityOp> = (0..k).map(|_| random_op(form, j, &mut rng)).collect();
            let cs: Vec<AffinityOp> = (0..j).map(|_| random_op(form, l, &mut rng)).collect();
            let left = compose(&compose(&a, &bs)?, &cs)?;
            let inner = bs.iter().map(|b| compose(b, &cs)).collect::<Result<Vec<_>, _>>()?;
            ensure!(left == compose(&a, &inner)?, "{name}: not associative");
        }
    }
    within(start, Duration::from_secs(60))
}

/// Checks `(f, g)` against the tables directly.
fn is_form_iso(a: &LinearForm, b: &LinearForm, f: &[usize], g: &[usize]) -> bool {
    let bijective = |map: &[usize], n: usize| map.iter().copied().collect::<BTreeSet<_>>() == (0..n).collect();
    let (r, m) = (&a.ring, &a.module);
    bijective(f, b.ring.size)
        && bijective(g, b.module.size)
        && f.len() == r.size
        && g.len() == m.size
        && f[r.one] == b.ring.one
        && tuples(r.size, 2).all(|p| {
            f[r.plus(p[0], p[1])] == b.ring.plus(f[p[0]], f[p[1]]) && f[r.times(p[0], p[1])] == b.ring.times(f[p[0]], f[p[1]])
        })
        && tuples(m.size, 2).all(|p| g[m.plus(p[0], p[1])] == b.module.plus(g[p[0]], g[p[1]]))
        && tuples(r.size, 1).all(|s| (0..m.size).all(|x| g[m.scale(s[0], x)] == b.module.scale(f[s[0]], g[x])))
        && (0..m.size).all(|x| f[a.d[x]] == b.d[g[x]])
}

fn abelianization_round_trip() -> Outcome {
    let (mut surjective, mut not_surjective) = (false, false);
    for (name, form) in zoo::form_corpus() {
        let rep = roundtrip_check(&form, 3, DEFAULT_CLONE_BUDGET).map_err(|e| e.to_string())?;
        ensure!(rep.isomorphic, "{name}: {:?}", rep.failure);
        let (alg, _) = realize(&form);
        let p = maltsev_term_from(&alg, Term::op("m", vec![Term::var(0), Term::var(1), Term::var(2)])).map_err(|e| e.to_string())?;
        let ab = abelianize(&alg, &p, DEFAULT_CLONE_BUDGET).map_err(|e| e.to_string())?;
        ensure!(is_form_iso(&form, &ab.form, &rep.ring_map, &rep.module_map), "{name}: maps are not an isomorphism");
        // The ring map sends `r` to the binary operation `x + r(y - x)`.
        for r in 0..form.ring.size {
            let op = AffinityOp::new(form.module.zero, vec![r]);
            let table: Vec<usize> = tuples(alg.size, 2).map(|a| eval(&form, &op, &a)).collect();
            ensure!(ab.convex[rep.ring_map[r]].table == table, "{name}: ring map at {r}");
        }
        let onto = (0..form.ring.size).all(|r| form.d.contains(&r));
        surjective |= onto;
        not_surjective |= !onto;
    }
    ensure!(surjective && not_surjective, "corpus lacks a surjective or a non-surjective form");
    Ok(())
}

fn cardinality_identity() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for (fname, form) in zoo::form_corpus() {
        for (bname, bim) in zoo::bimodule_corpus(&form, DEFAULT_DER_BUDGET).map_err(|e| e.to_string())? {
            let rep = enumerate_derivations(&form, &bim, DEFAULT_DER_BUDGET).map_err(|e| e.to_string())?;
            let (der, ider, h0) = support::derivations_by_brute_force(&form, &bim).ok_or(format!("{fname}/{bname} too large"))?;
            ensure!((rep.der.len(), rep.ider.len(), rep.h0.len()) == (der, ider, h0), "{fname}/{bname}: counts");
            ensure!(der % ider == 0 && rep.h1_order == der / ider, "{fname}/{bname}: H¹");
            ensure!(h0 * der == bim.k.size * rep.h1_order, "{fname}/{bname}: identity fails");
            pairs += 1;
        }
    }
    ensure!(pairs > 0, "no pairs");
    let form = LinearForm::identity(&FiniteRing::zmod(4));
    let bim = DBimodule::cone(&form, &Bimodule::regular(&form.ring), DEFAULT_DER_BUDGET).map_err(|e| e.to_string())?;
    let rep = enumerate_derivations(&form, &bim, DEFAULT_DER_BUDGET).map_err(|e| e.to_string())?;
    ensure!(rep.der.len() == 1 && rep.h1_order == 1, "Der {} H¹ {}", rep.der.len(), rep.h1_order);
    // H⁰ has four elements and one of them has additive order four.
    let k = &bim.k;
    let order = |c: usize| (1..=4).find(|&t| k.group.times(t, c) == k.zero).unwrap_or(0);
    ensure!(rep.h0.len() == 4 && rep.h0.iter().any(|&c| order(c) == 4), "H⁰ = {:?}", rep.h0);
    within(start, Duration::from_secs(60))
}

fn maltsev_lift() -> Outcome {
    let corpus = zoo::lift_corpus(DEFAULT_DER_BUDGET).map_err(|e| e.to_string())?;
    ensure!(corpus.len() >= 3, "{} diagrams", corpus.len());
    for (name, diagram) in corpus {
        ensure!(crext_check(&diagram).map_err(|e| e.to_string())?.torsor, "{name}: not a torsor");
        let base = AffinityOp::canonical_maltsev(&diagram.base);
        let rep = lift_maltsev(&diagram, &base, None).map_err(|e| e.to_string())?;
        let total = &diagram.total;
        let n = carrier(total);
        let maltsev_on = |op: &AffinityOp| {
            tuples(n, 2).all(|a| eval(total, op, &[a[0], a[0], a[1]]) == a[1] && eval(total, op, &[a[1], a[0], a[0]]) == a[1])
        };
        ensure!(!maltsev_on(&rep.preimage), "{name}: preimage is already Maltsev");
        ensure!(maltsev_on(&rep.lifted), "{name}: lift is not Maltsev");
        ensure!(diagram.project_op(&rep.preimage) == base, "{name}: preimage does not lie over the base");
        ensure!(diagram.project_op(&rep.lifted) == base, "{name}: lift does not project to the base");
    }
    Ok(())
}

fn corpus(file: &str) -> String {
    format!("{}/corpus/{file}", env!("CARGO_MANIFEST_DIR"))
}

/// One invocation per verb, with the files it reads.
fn invocations() -> Vec<Vec<String>> {
    let c = corpus;
    vec![
        vec!["check".into(), c("z4.alg"), c("zero-one.mon"), c("id-z4.form")],
        vec!["fmt".into(), c("zero-one.mon")],
        vec!["fmt".into(), "--golden".into(), c("s3.alg")],
        vec!["product".into(), c("z4.alg"), c("z2xz2.alg"), "--alg".into(), "Z4".into(), "--alg".into(), "V4".into()],
        vec!["subuniverse".into(), c("d4.alg"), "--gens".into(), "2".into()],
        vec!["quotient".into(), c("s3.alg"), "--cong".into(), "Sign".into()],
        vec!["clone".into(), c("z4.alg"), "--arity".into(), "2".into()],
        vec!["hom".into(), c("z4.alg"), "--source".into(), "Z4".into(), "--target".into(), "Z4".into(), "--map".into(), "0,2,0,2".into()],
        vec!["cg".into(), c("d4.alg"), "--pair".into(), "0,2".into()],
        vec!["lattice".into(), c("s3.alg")],
        vec!["maltsev-term".into(), c("semilattice.alg")],
        vec!["maltsev-term".into(), c("quasigroup-z5.alg")],
        vec!["torsor-check".into(), c("z4.tern")],
        vec!["torsor-group".into(), c("z4.tern"), "--require-commutative".into()],
        vec!["central-check".into(), c("z4-over-z2.tern")],
        vec!["central-check".into(), c("s3.alg"), c("s3-over-sign.tern"), "--alg".into(), "S3".into()],
        vec!["centralize".into(), c("z4.alg"), "--R".into(), "C02".into(), "--S".into(), "nabla".into()],
        vec!["commutator".into(), c("s3.alg"), "--R".into(), "Sign".into(), "--S".into(), "nabla".into(), "--oracle".into()],
        vec!["center".into(), c("d4.alg")],
        vec!["nilpotence".into(), c("q8.alg")],
        vec!["nilpotence".into(), "--golden".into(), c("d4.alg")],
        vec![
            "affinity-compose".into(),
            c("forms.form"),
            "--form".into(),
            "id-z4".into(),
            "--outer".into(),
            "<0,1,1>".into(),
            "--inner".into(),
            "<1,2>".into(),
            "--inner".into(),
            "<0,1>".into(),
            "--inner".into(),
            "<3,3>".into(),
        ],
        vec!["abelianize".into(), c("z4.alg")],
        vec!["roundtrip".into(), c("forms.form"), "--form".into(), "id-z2".into(), "--arity".into(), "3".into()],
        vec!["derivations".into(), c("id-z4.form"), "--bim".into(), "cone-regular".into()],
        vec!["crext".into(), c("diagrams.form"), "--diagram".into(), "z4-over-z2".into()],
        vec!["lift".into(), c("diagrams.form"), "--diagram".into(), "z4-over-z2".into()],
        vec!["constants".into(), c("forms.form"), "--form".into(), "id-z3".into()],
        vec!["trivial-ext".into(), c("z3-constant.mon")],
        vec!["lin-ext-check".into(), c("zero-one.mon")],
        vec!["untwisted-check".into(), c("zero-one.mon")],
        vec!["untwisted-check".into(), c("z3-constant.mon")],
        vec!["counterexample".into()],
        vec!["counterexample".into(), "--golden".into()],
    ]
}

fn run_mk(args: &[String], threads: Option<usize>) -> (Option<i32>, Vec<u8>, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mk"));
    if let Some(t) = threads {
        cmd.args(["--threads", &t.to_string()]);
    }
    let out = cmd.args(args).output().expect("mk runs");
    (out.status.code(), out.stdout, out.stderr)
}

fn determinism() -> Outcome {
    let covered: BTreeSet<String> = invocations().iter().map(|a| a[0].clone()).collect();
    let verbs: BTreeSet<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    ensure!(covered == verbs, "verbs not run: {:?}", verbs.difference(&covered).collect::<Vec<_>>());
    for args in invocations() {
        let first = run_mk(&args, None);
        ensure!(first.0 == Some(0), "{args:?} exited {:?}: {}", first.0, String::from_utf8_lossy(&first.2));
        ensure!(!first.1.is_empty(), "{args:?} printed nothing");
        for _ in 0..2 {
            ensure!(run_mk(&args, None) == first, "{args:?} differs between runs");
        }
        let one = run_mk(&args, Some(1));
        let many = run_mk(&args, Some(4));
        ensure!(one == first && many == first, "{args:?} depends on the thread count");
    }
    Ok(())
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, counterexample),
        (2, commutator_oracle_agreement),
        (3, group_cross_check),
        (4, torsor_round_trip),
        (5, derived_identity),
        (6, composition),
        (7, abelianization_round_trip),
        (8, cardinality_identity),
        (9, maltsev_lift),
        (10, determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed();
        match result {
            Ok(()) => println!("criterion {n}: PASS ({t:.2?})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({t:.2?}) {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
