mod common;

use common::{random_diagram, random_types, rng, TestRng};
use dagcat::{Diagram, GeneratorDecl, Signature, WireType};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn names(ts: &[WireType]) -> Vec<&str> {
    ts.iter().map(|t| t.name()).collect()
}

/// Signature over `Q` and `R` with a handful of random generators.
fn random_signature(r: &mut TestRng) -> Signature {
    let mut sig = Signature::with_types(&["Q", "R"]);
    for k in 0..5 {
        let ins = random_types(r, &sig, 2);
        let outs = random_types(r, &sig, 2);
        let mut decl = GeneratorDecl::new(&format!("g{k}"), &names(&ins), &names(&outs));
        if ins == outs && r.gen_bool(0.3) {
            decl = decl.self_adjoint();
        }
        sig.add_generator(decl).unwrap();
    }
    sig
}

fn diagram(r: &mut TestRng, sig: &Signature) -> Diagram {
    let ins = random_types(r, sig, 3);
    random_diagram(r, sig, &ins, 3, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sequential_composition_is_associative_and_unital(seed: u64) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let a = diagram(&mut r, &sig);
        let b = random_diagram(&mut r, &sig, &a.output_types(), 2, 6);
        let c = random_diagram(&mut r, &sig, &b.output_types(), 2, 6);
        let left = a.compose_seq(&b).unwrap().compose_seq(&c).unwrap();
        let right = a.compose_seq(&b.compose_seq(&c).unwrap()).unwrap();
        prop_assert!(left.canonical_equal(&right));
        let id_in = Diagram::identity(&a.input_types());
        let id_out = Diagram::identity(&a.output_types());
        prop_assert!(id_in.compose_seq(&a).unwrap().canonical_equal(&a));
        prop_assert!(a.compose_seq(&id_out).unwrap().canonical_equal(&a));
    }

    #[test]
    fn parallel_composition_is_associative_and_unital(seed: u64) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let (a, b, c) = (diagram(&mut r, &sig), diagram(&mut r, &sig), diagram(&mut r, &sig));
        let left = a.compose_par(&b).compose_par(&c);
        let right = a.compose_par(&b.compose_par(&c));
        prop_assert!(left.canonical_equal(&right));
        prop_assert!(a.compose_par(&Diagram::empty()).canonical_equal(&a));
        prop_assert!(Diagram::empty().compose_par(&a).canonical_equal(&a));
    }

    #[test]
    fn bifunctoriality_holds_on_the_nose(seed: u64) {
        let mut r = rng(seed);
        let mut sig = Signature::with_types(&["Q", "R"]);
        let a = random_types(&mut r, &sig, 2);
        let b = random_types(&mut r, &sig, 2);
        let c = random_types(&mut r, &sig, 2);
        let x = random_types(&mut r, &sig, 2);
        let y = random_types(&mut r, &sig, 2);
        let z = random_types(&mut r, &sig, 2);
        for (n, i, o) in [("f", &a, &b), ("h", &b, &c), ("g", &x, &y), ("k", &y, &z)] {
            sig.add_generator(GeneratorDecl::new(n, &names(i), &names(o))).unwrap();
        }
        let g = |n: &str| sig.generator(n).unwrap();
        let lhs = g("f").compose_par(&g("g")).compose_seq(&g("h").compose_par(&g("k"))).unwrap();
        let rhs = g("f").compose_seq(&g("h")).unwrap().compose_par(&g("g").compose_seq(&g("k")).unwrap());
        let (l, r) = (lhs.canonical_form(), rhs.canonical_form());
        prop_assert_eq!(l.as_str(), r.as_str());
    }

    #[test]
    fn dagger_laws(seed: u64) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let a = diagram(&mut r, &sig);
        let b = random_diagram(&mut r, &sig, &a.output_types(), 2, 6);
        let c = diagram(&mut r, &sig);
        prop_assert!(a.dagger().dagger().canonical_equal(&a));
        let seq = a.compose_seq(&b).unwrap().dagger();
        prop_assert!(seq.canonical_equal(&b.dagger().compose_seq(&a.dagger()).unwrap()));
        let par = a.compose_par(&c).dagger();
        prop_assert!(par.canonical_equal(&a.dagger().compose_par(&c.dagger())));
    }

    #[test]
    fn transpose_laws(seed: u64) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let a = diagram(&mut r, &sig);
        prop_assert!(a.transpose().transpose().canonical_equal(&a));
        prop_assert!(a.transpose_by_bending().canonical_equal(&a.transpose()));
        prop_assert!(a.dagger().transpose().canonical_equal(&a.transpose().dagger()));
    }

    #[test]
    fn canonical_form_ignores_node_ids(seed: u64) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let a = diagram(&mut r, &sig);
        let mut perm: Vec<usize> = (0..a.node_count()).collect();
        perm.shuffle(&mut r);
        let b = a.relabeled(&perm);
        prop_assert_eq!(a.canonical_form(), b.canonical_form());
        prop_assert!(b.validate().is_ok());
    }

    #[test]
    fn random_diagrams_are_well_formed(seed: u64) {
        let mut r = rng(seed);
        let sig = random_signature(&mut r);
        let a = diagram(&mut r, &sig);
        prop_assert!(a.validate().is_ok());
        prop_assert!(sig.check_diagram(&a).is_ok());
    }
}

#[test]
fn canonical_form_separates_different_wirings() {
    let q = WireType::new("Q");
    let mut sig = Signature::with_types(&["Q"]);
    sig.add_generator(GeneratorDecl::new("f", &["Q"], &["Q"])).unwrap();
    let f = sig.generator("f").unwrap();
    let id = Diagram::identity(std::slice::from_ref(&q));
    let a = f.compose_par(&id);
    let b = id.compose_par(&f);
    assert!(!a.canonical_equal(&b));
    let sw = Diagram::swap(&q, &q);
    assert!(sw.compose_seq(&a).unwrap().compose_seq(&sw).unwrap().canonical_equal(&b));
}
