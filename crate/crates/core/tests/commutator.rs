mod support;

use std::collections::BTreeSet;

use mk_core::commutator::{
    center, centralize, commutator, commutator_oracle, is_abelian, lower_series, nilpotence_class, upper_series,
};
use mk_core::congruence::{all_congruences, meet};
use mk_core::maltsev::{find_maltsev_term, group_maltsev_term, maltsev_term_from};
use mk_core::{zoo, Congruence, Error, FiniteAlgebra, Operation, TermOp, DEFAULT_CLONE_BUDGET, DEFAULT_LATTICE_SIZE_CAP};

fn term(alg: &FiniteAlgebra) -> TermOp {
    find_maltsev_term(alg, DEFAULT_CLONE_BUDGET).unwrap().expect("Maltsev algebra")
}

fn lattice(alg: &FiniteAlgebra) -> Vec<Congruence> {
    all_congruences(alg, 10_000, DEFAULT_LATTICE_SIZE_CAP).unwrap()
}

#[test]
fn commutator_agrees_with_lattice_oracle_on_the_corpus() {
    let corpus = zoo::maltsev_corpus();
    assert!(corpus.len() >= 10);
    for (name, alg) in &corpus {
        assert!(alg.size <= 8);
        let p = term(alg);
        let l = lattice(alg);
        for r in &l {
            for s in &l {
                let ours = commutator(alg, r, s, &p).unwrap();
                let oracle = commutator_oracle(alg, r, s, &p, 10_000, DEFAULT_LATTICE_SIZE_CAP).unwrap();
                assert_eq!(ours, oracle, "{name}: [{:?}, {:?}]", r.blocks(), s.blocks());
            }
        }
    }
}

#[test]
fn commutator_is_symmetric_monotone_and_below_the_meet() {
    for (_, alg) in zoo::maltsev_corpus() {
        let p = term(&alg);
        let l = lattice(&alg);
        let c: Vec<Vec<Congruence>> =
            l.iter().map(|r| l.iter().map(|s| commutator(&alg, r, s, &p).unwrap()).collect()).collect();
        for i in 0..l.len() {
            for j in 0..l.len() {
                assert_eq!(c[i][j], c[j][i]);
                assert!(c[i][j].le(&meet(&l[i], &l[j])));
                for i2 in 0..l.len() {
                    for j2 in 0..l.len() {
                        if l[i].le(&l[i2]) && l[j].le(&l[j2]) {
                            assert!(c[i][j].le(&c[i2][j2]));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn group_commutators_match_normal_subgroup_commutators() {
    for (name, alg, class) in zoo::group_corpus() {
        let g = support::Group::of(&alg);
        let p = term(&alg);
        let normals = g.normal_subgroups();
        let l = lattice(&alg);
        assert_eq!(l.len(), normals.len(), "{name}: congruences are normal subgroups");
        for n1 in &normals {
            for n2 in &normals {
                let r = Congruence::from_labels(&g.congruence_labels(n1));
                let s = Congruence::from_labels(&g.congruence_labels(n2));
                let ours = commutator(&alg, &r, &s, &p).unwrap();
                assert_eq!(g.kernel(ours.block_index()), g.commutator(n1, n2), "{name}");
            }
        }
        let z = center(&alg, &p).unwrap();
        assert_eq!(g.kernel(z.block_index()), g.center(), "{name}");
        assert_eq!(g.nilpotence_class(), class, "{name}");
        assert_eq!(nilpotence_class(&alg, &p, 16).unwrap(), class, "{name}");
    }
}

#[test]
fn d4_examples() {
    let d4 = zoo::dihedral4();
    let p = term(&d4);
    let nabla = Congruence::nabla(8);
    let r2 = Congruence::from_labels(&support::Group::of(&d4).congruence_labels(&BTreeSet::from([0, 2])));
    assert_eq!(commutator(&d4, &nabla, &nabla, &p).unwrap(), r2);
    assert_eq!(center(&d4, &p).unwrap(), r2);
    let lower = lower_series(&d4, &p, 16).unwrap();
    assert_eq!(lower.terms, vec![nabla.clone(), r2.clone(), Congruence::delta(8)]);
    assert_eq!(lower.class, Some(2));
    let upper = upper_series(&d4, &p, 16).unwrap();
    assert_eq!(upper.terms, vec![Congruence::delta(8), r2, nabla]);
    assert_eq!(upper.class, Some(2));
    assert!(!is_abelian(&d4, &p).unwrap());
}

#[test]
fn s3_is_not_nilpotent() {
    let s3 = zoo::symmetric3();
    let p = term(&s3);
    let lower = lower_series(&s3, &p, 16).unwrap();
    assert!(lower.stabilized);
    assert_eq!(lower.class, None);
    let a3 = Congruence::from_labels(&[0, 1, 1, 0, 0, 1]);
    assert_eq!(lower.terms.last().unwrap(), &a3);
    assert!(!centralize(&s3, &Congruence::nabla(6), &Congruence::nabla(6), &p).unwrap());
    assert_eq!(nilpotence_class(&s3, &p, 16).unwrap(), None);
}

#[test]
fn abelian_examples() {
    let z4 = zoo::cyclic_group(4);
    let p = term(&z4);
    assert!(centralize(&z4, &Congruence::nabla(4), &Congruence::nabla(4), &p).unwrap());
    assert!(commutator(&z4, &Congruence::nabla(4), &Congruence::nabla(4), &p).unwrap().is_delta());
    assert!(center(&z4, &p).unwrap().is_nabla());
    assert!(is_abelian(&z4, &p).unwrap());
    assert_eq!(nilpotence_class(&z4, &p, 16).unwrap(), Some(1));
    let z2 = zoo::cyclic_group(2);
    assert_eq!(lower_series(&z2, &term(&z2), 16).unwrap().terms, vec![Congruence::nabla(2), Congruence::delta(2)]);
    let one = zoo::cyclic_group(1);
    let p1 = term(&one);
    assert!(is_abelian(&one, &p1).unwrap());
    assert_eq!(nilpotence_class(&one, &p1, 16).unwrap(), Some(0));
    assert!(center(&one, &p1).unwrap().is_nabla());
}

#[test]
fn delta_commutes_with_delta() {
    for (_, alg) in zoo::maltsev_corpus() {
        let p = term(&alg);
        let d = Congruence::delta(alg.size);
        assert!(centralize(&alg, &d, &d, &p).unwrap());
        assert_eq!(commutator(&alg, &d, &d, &p).unwrap(), d);
    }
}

#[test]
fn centrality_does_not_depend_on_the_maltsev_term() {
    for alg in [zoo::dihedral4(), zoo::symmetric3(), zoo::quaternion()] {
        let p1 = term(&alg);
        let p2 = maltsev_term_from(&alg, group_maltsev_term()).unwrap();
        let l = lattice(&alg);
        for r in &l {
            for s in &l {
                assert_eq!(centralize(&alg, r, s, &p1).unwrap(), centralize(&alg, r, s, &p2).unwrap());
            }
        }
    }
}

#[test]
fn non_maltsev_terms_are_rejected() {
    let g = zoo::cyclic_group(3);
    let first = TermOp::projection(3, 3, 0);
    let n = Congruence::nabla(3);
    assert!(matches!(commutator(&g, &n, &n, &first), Err(Error::NotMaltsev(_))));
    let sl = FiniteAlgebra::new(2, vec![Operation::from_fn("meet", 2, 2, |a| a[0] & a[1])]).unwrap();
    assert!(matches!(centralize(&sl, &Congruence::nabla(2), &Congruence::nabla(2), &TermOp::projection(2, 3, 2)), Err(Error::NotMaltsev(_))));
}

#[test]
fn lower_and_upper_classes_agree_on_the_corpus() {
    for (name, alg) in zoo::maltsev_corpus() {
        let p = term(&alg);
        let lower = lower_series(&alg, &p, 16).unwrap();
        let upper = upper_series(&alg, &p, 16).unwrap();
        assert!(lower.stabilized && upper.stabilized, "{name}");
        assert_eq!(lower.class, upper.class, "{name}");
        for w in lower.terms.windows(2) {
            assert!(w[1].le(&w[0]));
        }
        for w in upper.terms.windows(2) {
            assert!(w[0].le(&w[1]));
        }
    }
}
