//! Randomized checks of the algebraic identities the library relies on.
//! Oracles are brute-force sums written independently of the fast paths.

use ben_core::combination::{ccr, dcr, drc, partial_drc};
use ben_core::transform::{betp, consistency_checks, fcpt, gptm, FullCausalityLayers, Method, UniformLayers};
use ben_core::{mass_from_b, mass_from_q, FocalSet, Frame, LayerDistribution, MassFunction, SpecialKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mass(rng: &mut impl Rng, frame: &Frame, max_focal: usize) -> MassFunction {
    let top = frame.power_set_size() as u32;
    let count = rng.gen_range(1..=(top as usize - 1).min(max_focal));
    let mut sets: Vec<u32> = Vec::new();
    while sets.len() < count {
        let s = rng.gen_range(1..top);
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    let weights: Vec<f64> = sets.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    MassFunction::from_raw(
        frame.clone(),
        sets.into_iter()
            .zip(weights)
            .map(|(s, w)| (FocalSet::from_bits(s), w / total)),
    )
    .unwrap()
}

fn max_diff(a: &MassFunction, b: &MassFunction) -> f64 {
    a.frame()
        .subsets()
        .map(|s| (a.mass(s) - b.mass(s)).abs())
        .fold(0.0, f64::max)
}

fn popcount(x: usize) -> u32 {
    x.count_ones()
}

/// Möbius inversion by explicit signed sums over supersets.
fn brute_superset_inverse(q: &[f64]) -> Vec<f64> {
    (0..q.len())
        .map(|f| {
            (0..q.len())
                .filter(|g| g & f == f)
                .map(|g| {
                    let sign = if (popcount(g) - popcount(f)) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    sign * q[g]
                })
                .sum()
        })
        .collect()
}

fn brute_subset_inverse(b: &[f64]) -> Vec<f64> {
    (0..b.len())
        .map(|f| {
            (0..b.len())
                .filter(|g| g & f == *g)
                .map(|g| {
                    let sign = if (popcount(f) - popcount(g)) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    sign * b[g]
                })
                .sum()
        })
        .collect()
}

#[test]
fn dualities_and_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for n in 1..=6 {
        let frame = Frame::letters(n).unwrap();
        for _ in 0..30 {
            let m = random_mass(&mut rng, &frame, 12);
            for f in frame.subsets() {
                let c = f.complement(n);
                assert!((m.pl(f) - (1.0 - m.empty_mass() - m.bel(c))).abs() < 1e-12);
                assert!((m.b(f) - (1.0 - m.pl(c))).abs() < 1e-12);
                assert!(m.bel(f) <= m.pl(f) + 1e-12);
                assert!((m.fc(f) - (m.b(f) + m.q(f) - m.mass(f))).abs() < 1e-12);
                assert!(m.fc(f) <= m.b(f) + m.q(f) + 1e-12);
            }
        }
    }
}

#[test]
fn dense_vectors_match_direct_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let frame = Frame::letters(5).unwrap();
    for _ in 0..30 {
        let m = random_mass(&mut rng, &frame, 10);
        let (q, b, fc) = (m.q_vector(), m.b_vector(), m.fc_vector());
        for f in frame.subsets() {
            let i = f.bits() as usize;
            assert!((q[i] - m.q(f)).abs() < 1e-12);
            assert!((b[i] - m.b(f)).abs() < 1e-12);
            assert!((fc[i] - m.fc(f)).abs() < 1e-12);
        }
    }
}

#[test]
fn commonality_and_implicability_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for n in 2..=6 {
        let frame = Frame::letters(n).unwrap();
        for _ in 0..200 {
            let m = random_mass(&mut rng, &frame, 16);
            assert!(max_diff(&mass_from_q(&frame, &m.q_vector()).unwrap(), &m) < 1e-8);
            assert!(max_diff(&mass_from_b(&frame, &m.b_vector()).unwrap(), &m) < 1e-8);
        }
    }
}

#[test]
fn conjunctive_rule_is_the_commonality_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for n in 1..=5 {
        let frame = Frame::letters(n).unwrap();
        for _ in 0..40 {
            let (m1, m2) = (random_mass(&mut rng, &frame, 8), random_mass(&mut rng, &frame, 8));
            let product: Vec<f64> = frame.subsets().map(|f| m1.q(f) * m2.q(f)).collect();
            let oracle = brute_superset_inverse(&product);
            let got = ccr(&m1, &m2).unwrap();
            for f in frame.subsets() {
                assert!((got.mass(f) - oracle[f.bits() as usize]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn disjunctive_rule_is_the_implicability_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for n in 1..=5 {
        let frame = Frame::letters(n).unwrap();
        for _ in 0..40 {
            let (m1, m2) = (random_mass(&mut rng, &frame, 8), random_mass(&mut rng, &frame, 8));
            let product: Vec<f64> = frame.subsets().map(|f| m1.b(f) * m2.b(f)).collect();
            let oracle = brute_subset_inverse(&product);
            let got = dcr(&m1, &m2).unwrap();
            for f in frame.subsets() {
                assert!((got.mass(f) - oracle[f.bits() as usize]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn rules_commute_and_associate() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for n in 2..=5 {
        let frame = Frame::letters(n).unwrap();
        for _ in 0..20 {
            let a = random_mass(&mut rng, &frame, 6);
            let b = random_mass(&mut rng, &frame, 6);
            let c = random_mass(&mut rng, &frame, 6);
            for rule in [ccr, dcr] {
                assert!(max_diff(&rule(&a, &b).unwrap(), &rule(&b, &a).unwrap()) < 1e-9);
                let left = rule(&rule(&a, &b).unwrap(), &c).unwrap();
                let right = rule(&a, &rule(&b, &c).unwrap()).unwrap();
                assert!(max_diff(&left, &right) < 1e-9);
            }
            if let (Ok(ab), Ok(bc)) = (drc(&a, &b), drc(&b, &c)) {
                if let (Ok(left), Ok(right)) = (drc(&ab, &c), drc(&a, &bc)) {
                    assert!(max_diff(&left, &right) < 1e-9);
                }
                assert!(max_diff(&ab, &drc(&b, &a).unwrap()) < 1e-9);
            }
        }
    }
}

#[test]
fn matthew_effect_under_self_combination() {
    let frame = Frame::letters(3).unwrap();
    let p = MassFunction::from_labels(frame, &[("A", 0.5), ("B", 0.25), ("C", 0.25)]).unwrap();
    let a = FocalSet::singleton(0);
    let mut cur = p.clone();
    let mut last = cur.mass(a);
    for step in 1..=50 {
        cur = drc(&cur, &p).unwrap();
        if step <= 15 {
            assert!(cur.mass(a) > last);
        }
        last = cur.mass(a);
    }
    assert!(last > 0.999);
}

#[test]
fn uniform_partial_chain_is_pignistic() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for n in 2..=5 {
        let frame = Frame::letters(n).unwrap();
        for _ in 0..125 {
            let m = random_mass(&mut rng, &frame, 12);
            let mut cur = m.clone();
            for card in (1..n).rev() {
                cur = partial_drc(&LayerDistribution::uniform(&frame, card).unwrap(), &cur).unwrap();
            }
            let reference = betp(&m).unwrap();
            for i in 0..n {
                assert!((cur.mass(FocalSet::singleton(i)) - reference.prob(i)).abs() < 1e-9);
            }
            let via_model = gptm(&m, &mut UniformLayers).unwrap();
            assert!(via_model.pmf.max_abs_diff(&reference) < 1e-9);
        }
    }
}

#[test]
fn layered_fc_model_is_fcpt() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for n in 2..=5 {
        let frame = Frame::letters(n).unwrap();
        for _ in 0..50 {
            let m = random_mass(&mut rng, &frame, 12);
            let direct = fcpt(&m).unwrap();
            let model = gptm(&m, &mut FullCausalityLayers).unwrap();
            assert!(direct.pmf.max_abs_diff(&model.pmf) < 1e-9);
            for (a, b) in direct.trace.iter().zip(&model.trace) {
                assert!(max_diff(a, b) < 1e-9);
            }
        }
    }
}

#[test]
fn fcpt_consistency_on_random_masses() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for i in 0..500 {
        let n = 2 + i % 4;
        let frame = Frame::letters(n).unwrap();
        let m = random_mass(&mut rng, &frame, 12);
        let r = fcpt(&m).unwrap();
        assert!((r.pmf.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(r.trace.iter().all(|s| (s.total() - 1.0).abs() < 1e-9));
        let report = consistency_checks(&m, &r.pmf).unwrap();
        assert!(report.p_consistent && report.ulb_consistent, "{m}");
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let total: f64 = w.iter().sum();
        let bayes = MassFunction::from_raw(
            frame.clone(),
            w.iter().enumerate().map(|(i, v)| (FocalSet::singleton(i), v / total)),
        )
        .unwrap();
        assert_eq!(bayes.classify_special().unwrap(), SpecialKind::Bayesian);
        let out = fcpt(&bayes).unwrap().pmf;
        for i in 0..n {
            assert_eq!(out.prob(i), bayes.mass(FocalSet::singleton(i)));
        }
    }
}

#[test]
fn transformations_are_permutation_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let n = 4;
    let frame = Frame::letters(n).unwrap();
    let perm = [2usize, 0, 3, 1];
    let relabel = |s: FocalSet| s.elements().fold(FocalSet::EMPTY, |acc, i| acc.with(perm[i]));
    for _ in 0..50 {
        let m = random_mass(&mut rng, &frame, 10);
        let moved = MassFunction::from_raw(frame.clone(), m.focal_elements().map(|(s, v)| (relabel(s), v))).unwrap();
        for method in Method::classical_with_fcp() {
            let a = method.apply(&m).unwrap();
            let b = method.apply(&moved).unwrap();
            for i in 0..n {
                assert!((a.prob(i) - b.prob(perm[i])).abs() < 1e-12, "{method}");
            }
            assert!(a.probs().iter().all(|&p| p >= 0.0));
            assert!((a.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}
