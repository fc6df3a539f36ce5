use permcode_core::algebra::{
    apply_group_element, idempotent_apply, multiplicities, restriction_character, GCharacter, GroupElement,
};
use permcode_core::orbits::burnside_count;
use permcode_core::tables::expected;
use permcode_core::terwilliger::{terwilliger_dimension, terwilliger_dimension_orbits};
use permcode_core::{OrbitIndex, SymmetricGroup};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// `B_l x` from the orbit array.
fn apply_orbit(orbits: &OrbitIndex, l: usize, x: &[f64]) -> Vec<f64> {
    (0..orbits.group_order())
        .map(|phi| orbits.row(phi).iter().zip(x).filter(|(&t, _)| t as usize == l).map(|(_, v)| v).sum())
        .collect()
}

/// `ε_k` as a dense matrix, summing permutation matrices over all of `G`.
fn dense_idempotent(group: &SymmetricGroup, k: GCharacter) -> Vec<Vec<f64>> {
    let order = group.order();
    let table = group.characters();
    let mut e = vec![vec![0.0; order]; order];
    for beta in 0..order {
        for invert in [false, true] {
            let chi = k.value(table, group.class_of(beta), invert) as f64;
            // (γ̂x)(φ) = x(β⁻¹ φ^{±1} β)
            for (phi, row) in e.iter_mut().enumerate() {
                let p = if invert { group.inverse(phi) } else { phi };
                row[group.conjugate(beta, p)] += chi;
            }
        }
    }
    let scale = table.degree(k.lambda) as f64 / (2 * order) as f64;
    e.iter_mut().flatten().for_each(|v| *v *= scale);
    e
}

#[test]
fn group_action_examples() {
    let g = SymmetricGroup::new(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = random_vector(&mut rng, g.order());
    assert_eq!(apply_group_element(&g, GroupElement { beta: 0, invert: false }, &x), x);
    for _ in 0..10 {
        let beta = rng.gen_range(0..g.order());
        let invert = rng.gen_bool(0.5);
        let y = apply_group_element(&g, GroupElement { beta, invert }, &x);
        // (β, t)⁻¹ = (β⁻¹, t) since inversion commutes with conjugation
        let back = apply_group_element(&g, GroupElement { beta: g.inverse(beta), invert }, &y);
        assert_eq!(back, x);
        for c in 0..g.class_count() {
            let indicator: Vec<f64> = (0..g.order()).map(|p| (g.class_of(p) == c) as u8 as f64).collect();
            assert_eq!(apply_group_element(&g, GroupElement { beta, invert }, &indicator), indicator);
        }
    }
}

#[test]
fn idempotents_match_direct_summation() {
    let g = SymmetricGroup::new(3).unwrap();
    let order = g.order();
    for k in GCharacter::all(g.characters()) {
        let dense = dense_idempotent(&g, k);
        for col in 0..order {
            let mut e = vec![0.0; order];
            e[col] = 1.0;
            let fast = idempotent_apply(&g, k, &e);
            for phi in 0..order {
                assert!((fast[phi] - dense[phi][col]).abs() < 1e-12, "{k:?} entry ({phi},{col})");
            }
        }
    }
    // The trivial idempotent maps e_id to a vector constant on classes.
    let trivial = GCharacter { lambda: 0, sign: 1 };
    let mut e = vec![0.0; order];
    e[0] = 1.0;
    let v = idempotent_apply(&g, trivial, &e);
    assert!((v[0] - 1.0).abs() < 1e-12);
    for phi in 0..order {
        let first = g.class_members(g.class_of(phi))[0] as usize;
        assert!((v[phi] - v[first]).abs() < 1e-12);
    }
}

#[test]
fn idempotents_resolve_the_identity() {
    let g = SymmetricGroup::new(4).unwrap();
    let idx = OrbitIndex::enumerate(&g).unwrap();
    let chars = GCharacter::all(g.characters());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let x = random_vector(&mut rng, g.order());
        let parts: Vec<Vec<f64>> = chars.iter().map(|&k| idempotent_apply(&g, k, &x)).collect();
        let mut sum = vec![0.0; g.order()];
        for p in &parts {
            sum.iter_mut().zip(p).for_each(|(s, v)| *s += v);
        }
        assert!(distance(&sum, &x) <= 1e-9 * norm(&x));
        for (a, &k) in chars.iter().enumerate() {
            assert!(distance(&idempotent_apply(&g, k, &parts[a]), &parts[a]) <= 1e-9 * norm(&x));
            for (b, &j) in chars.iter().enumerate() {
                if a != b {
                    assert!(norm(&idempotent_apply(&g, j, &parts[a])) <= 1e-9 * norm(&x));
                }
            }
        }
        for l in 0..idx.num_orbits() {
            let bx = apply_orbit(&idx, l, &x);
            for &k in &chars {
                let left = idempotent_apply(&g, k, &bx);
                let right = apply_orbit(&idx, l, &idempotent_apply(&g, k, &x));
                assert!(distance(&left, &right) <= 1e-8 * norm(&x), "orbit {l}, {k:?}");
            }
        }
    }
}

#[test]
fn restriction_character_is_a_class_function() {
    for n in 3..=5 {
        let g = SymmetricGroup::new(n).unwrap();
        for l in 0..g.class_count() {
            for invert in [false, true] {
                for c in 0..g.class_count() {
                    let members = g.class_members(c);
                    let v = restriction_character(&g, l, GroupElement { beta: members[0] as usize, invert });
                    for &beta in members {
                        assert_eq!(restriction_character(&g, l, GroupElement { beta: beta as usize, invert }), v);
                    }
                }
            }
        }
    }
}

#[test]
fn multiplicities_match_published_rows() {
    for n in 4..=7 {
        let g = SymmetricGroup::new(n).unwrap();
        let t = multiplicities(&g).unwrap();
        assert_eq!(t.nonzero_sorted(), expected().multiplicities(n).unwrap().m, "n={n}");
        assert_eq!(t.sum_of_squares(), burnside_count(n).unwrap(), "n={n}");
        assert_eq!(t.dimension(), g.order() as u64, "n={n}");
        for (row, m) in t.coefficients.iter().zip(&t.multiplicities) {
            assert_eq!(row.iter().sum::<u64>(), *m);
        }
    }
    let g = SymmetricGroup::new(6).unwrap();
    assert_eq!(multiplicities(&g).unwrap().sum_of_squares(), 761);
}

#[test]
fn terwilliger_dimensions() {
    let g = SymmetricGroup::new(3).unwrap();
    let idx = OrbitIndex::enumerate(&g).unwrap();
    assert_eq!(terwilliger_dimension(&g).unwrap().dimension, idx.num_orbits());
    for (n, b) in [(4, 43), (5, 155)] {
        let g = SymmetricGroup::new(n).unwrap();
        let idx = OrbitIndex::enumerate(&g).unwrap();
        let dense = terwilliger_dimension(&g).unwrap();
        assert_eq!(dense.dimension, b, "n={n}");
        assert!(dense.largest_rejected_pivot < 1e-10 && dense.smallest_accepted_pivot > 1e-6);
        assert_eq!(terwilliger_dimension_orbits(&g, &idx).unwrap().dimension, b, "n={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn idempotent_is_a_projection(k in 0usize..10, seed in any::<u64>()) {
        let g = SymmetricGroup::new(4).unwrap();
        let chars = GCharacter::all(g.characters());
        let k = chars[k % chars.len()];
        let x = random_vector(&mut ChaCha8Rng::seed_from_u64(seed), g.order());
        let once = idempotent_apply(&g, k, &x);
        let twice = idempotent_apply(&g, k, &once);
        prop_assert!(distance(&once, &twice) <= 1e-9 * norm(&x));
    }
}
