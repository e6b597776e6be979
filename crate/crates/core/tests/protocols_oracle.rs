mod common;

use common::*;
use dagcat::protocols::{
    bayes_invert, swapping_control, swapping_demo, swapping_diagram, teleportation_demo,
    teleportation_diagram, Channel, Prior,
};
use dagcat::rewrite::Verdict;
use dagcat::shipped;
use dagcat::tensor::{equal_tensors, interpret, AnyModel, CompareMode, Model, TensorValue};
use dagcat::Diagram;
use num_complex::Complex64;
use rand::Rng;

fn complex(name: &str) -> Model<Complex64> {
    match shipped::model(name).unwrap() {
        AnyModel::Complex(m) => m,
        _ => panic!("{name} is not complex"),
    }
}

#[test]
fn teleportation_is_the_identity_with_scalar_one() {
    for (model, gens) in [("qubit", vec!["I", "X", "Y", "Z", "H", "S"]), ("qutrit", vec!["I", "shift", "clock"])] {
        let m = complex(model);
        let d = m.dim(&q()).unwrap();
        for f in gens {
            let t = brute_force_eval(&teleportation_diagram(&m, f).unwrap(), &m);
            let c = equal_tensors(&t, &TensorValue::identity(d), CompareMode::Exact, 1e-12).unwrap();
            assert!(c.equal, "{model}/{f}: deviation {}", c.deviation);
            let report = teleportation_demo(&m, f).unwrap();
            assert!(report.passed(), "{}", report.to_text());
            assert_eq!(report.rewrite_verdict, Verdict::EqualExact);
        }
    }
}

#[test]
fn swapping_leaves_a_cup() {
    for (model, gens) in [("qubit", vec!["X", "Y", "Z", "H", "S"]), ("qutrit", vec!["shift", "clock"])] {
        let m = complex(model);
        for f in gens {
            let t = brute_force_eval(&swapping_diagram(&m, f).unwrap(), &m);
            let cup = interpret(&Diagram::cup(&q()), &m).unwrap();
            let c = equal_tensors(&t, &cup, CompareMode::Exact, 1e-12).unwrap();
            assert!(c.equal, "{model}/{f}: deviation {}", c.deviation);
            assert!(swapping_demo(&m, f).unwrap().passed());
            let control = swapping_control(&m, f).unwrap();
            assert!(!control.rewrite_passed(), "{model}/{f}");
            assert!(!control.tensor_verdict.equal, "{model}/{f}");
        }
    }
}

#[test]
fn non_unitaries_are_refused() {
    let m = complex("qubit");
    assert!(teleportation_demo(&m, "P").is_err());
    assert!(teleportation_demo(&m, "nope").is_err());
}

fn random_stochastic(r: &mut TestRng, n: usize, sparse: bool) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| if sparse && r.gen_bool(0.3) { 0.0 } else { r.gen_range(0.01..1.0) })
        .collect();
    if v.iter().all(|&x| x == 0.0) {
        v[0] = 1.0;
    }
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}

/// `B(x|y) = M(y|x) p(x) / Σ_x' M(y|x') p(x')`, written out directly.
fn oracle(p: &[f64], rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let ny = rows[0].len();
    (0..ny)
        .map(|y| {
            let q: f64 = (0..p.len()).map(|x| rows[x][y] * p[x]).sum();
            (0..p.len())
                .map(|x| if q > 1e-12 { rows[x][y] * p[x] / q } else { 0.0 })
                .collect()
        })
        .collect()
}

#[test]
fn bayesian_inversion_matches_the_oracle() {
    let mut r = rng(3);
    for case in 0..100 {
        let (nx, ny) = (r.gen_range(1..=7), r.gen_range(1..=9));
        let sparse = case % 3 == 0;
        let p = random_stochastic(&mut r, nx, sparse);
        let rows: Vec<Vec<f64>> = (0..nx).map(|_| random_stochastic(&mut r, ny, sparse)).collect();
        let inv = bayes_invert(&Prior::new(p.clone()).unwrap(), &Channel::new(rows.clone()).unwrap()).unwrap();
        let want = oracle(&p, &rows);
        for y in 0..ny {
            for x in 0..nx {
                assert!((inv.posterior[y][x] - want[y][x]).abs() <= 1e-12, "case {case}");
            }
            if !inv.unsupported.contains(&y) {
                let total: f64 = inv.posterior[y].iter().sum();
                assert!((total - 1.0).abs() < 1e-12, "case {case}: row {y} sums to {total}");
            }
        }
    }
}

#[test]
fn inverting_twice_recovers_the_channel() {
    let mut r = rng(5);
    for case in 0..100 {
        let (nx, ny) = (r.gen_range(1..=7), r.gen_range(1..=9));
        let p = random_stochastic(&mut r, nx, false);
        let rows: Vec<Vec<f64>> = (0..nx).map(|_| random_stochastic(&mut r, ny, false)).collect();
        let prior = Prior::new(p.clone()).unwrap();
        let channel = Channel::new(rows.clone()).unwrap();
        let inv = bayes_invert(&prior, &channel).unwrap();
        let back = inv.channel().unwrap();
        let q = Prior::new(inv.marginal.clone()).unwrap();
        let again = bayes_invert(&q, &back).unwrap();
        for x in 0..nx {
            for y in 0..ny {
                assert!((again.posterior[x][y] - rows[x][y]).abs() <= 1e-10, "case {case}");
            }
        }
    }
}

#[test]
fn unsupported_evidence_has_no_channel() {
    let p = Prior::new(vec![1.0, 0.0]).unwrap();
    let m = Channel::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let inv = bayes_invert(&p, &m).unwrap();
    assert_eq!(inv.unsupported, vec![1]);
    assert_eq!(inv.posterior[1], vec![0.0, 0.0]);
    assert!(inv.channel().is_err());
}
