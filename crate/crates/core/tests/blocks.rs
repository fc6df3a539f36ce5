use nalgebra::DMatrix;
use permcode_core::algebra::{idempotent_apply, multiplicities};
use permcode_core::orbits::burnside_count;
use permcode_core::tables::expected;
use permcode_core::{BasicBlockSet, OrbitIndex, SymmetricGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Setup {
    group: SymmetricGroup,
    orbits: OrbitIndex,
    blocks: BasicBlockSet,
}

fn setup(n: usize) -> Setup {
    let group = SymmetricGroup::new(n).unwrap();
    let orbits = OrbitIndex::enumerate(&group).unwrap();
    let table = multiplicities(&group).unwrap();
    let blocks = BasicBlockSet::compute(&group, &orbits, &table, 5).unwrap();
    Setup { group, orbits, blocks }
}

fn dense(orbits: &OrbitIndex, c: &[f64]) -> DMatrix<f64> {
    let order = orbits.group_order();
    DMatrix::from_fn(order, order, |r, col| c[orbits.orbit_of_pair(r, col)])
}

/// Random coefficients with `c_l = c_{l'}` for transpose partners.
fn symmetric_coefficients(orbits: &OrbitIndex, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut c: Vec<f64> = (0..orbits.num_orbits()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for (l, o) in orbits.orbits().iter().enumerate() {
        if o.transpose < l {
            c[l] = c[o.transpose];
        }
    }
    c
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn spectra_agree_with_dense_combination() {
    for n in [4, 5] {
        let s = setup(n);
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for trial in 0..50 {
            let c = symmetric_coefficients(&s.orbits, &mut rng);
            let full = sorted_eigenvalues(dense(&s.orbits, &c));
            let mut union = Vec::new();
            for (b, img) in s.blocks.blocks.iter().zip(s.blocks.block_image(&s.orbits, &c)) {
                for e in sorted_eigenvalues(img) {
                    union.extend(std::iter::repeat(e).take(b.basis.degree as usize));
                }
            }
            union.sort_by(f64::total_cmp);
            assert_eq!(union.len(), full.len());
            let scale = full.iter().fold(1.0f64, |a, e| a.max(e.abs()));
            for (a, b) in full.iter().zip(&union) {
                assert!((a - b).abs() <= 1e-7 * scale, "n={n} trial {trial}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn block_sizes_and_dimension_audit() {
    for n in 4..=6 {
        let s = setup(n);
        let mut sizes: Vec<u64> = s.blocks.block_sizes().iter().map(|&d| d as u64).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, expected().multiplicities(n).unwrap().m, "n={n}");
        assert_eq!(sizes.iter().map(|d| d * d).sum::<u64>(), burnside_count(n).unwrap());
        let dim: u64 = s.blocks.blocks.iter().map(|b| b.dim() as u64 * b.basis.degree).sum();
        assert_eq!(dim, s.group.order() as u64);
    }
}

#[test]
fn bases_are_orthonormal_and_isotypic() {
    for n in 3..=5 {
        let s = setup(n);
        for b in &s.blocks.blocks {
            let u = &b.basis.vectors;
            for i in 0..u.len() {
                for j in 0..u.len() {
                    let d: f64 = u[i].iter().zip(&u[j]).map(|(x, y)| x * y).sum();
                    assert!((d - (i == j) as u8 as f64).abs() < 1e-9, "n={n} gram ({i},{j})");
                }
                let p = idempotent_apply(&s.group, b.basis.character, &u[i]);
                let err: f64 = p.iter().zip(&u[i]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                assert!(err < 1e-8, "n={n} vector {i} leaves the isotypic component");
            }
        }
    }
}

#[test]
fn trivial_block_contains_all_ones() {
    let s = setup(4);
    let b = s.blocks.blocks.iter().find(|b| b.basis.index == 0).unwrap();
    let order = s.group.order();
    let ones = vec![1.0 / (order as f64).sqrt(); order];
    let projected: f64 =
        b.basis.vectors.iter().map(|u| u.iter().zip(&ones).map(|(x, y)| x * y).sum::<f64>().powi(2)).sum();
    assert!((projected - 1.0).abs() < 1e-10);

    // Σ_l B_l = J has eigenvalue n! in the trivial block and vanishes elsewhere.
    let all = vec![1.0; s.orbits.num_orbits()];
    for (blk, img) in s.blocks.blocks.iter().zip(s.blocks.block_image(&s.orbits, &all)) {
        let e = sorted_eigenvalues(img);
        let top = if blk.basis.index == 0 { order as f64 } else { 0.0 };
        assert!((e[e.len() - 1] - top).abs() < 1e-9);
        assert!(e[..e.len() - 1].iter().all(|v| v.abs() < 1e-9));
    }
}

#[test]
fn star_map_properties() {
    let s = setup(5);
    let identity: Vec<f64> = s.orbits.orbits().iter().map(|o| o.diagonal as u8 as f64).collect();
    for img in s.blocks.block_image(&s.orbits, &identity) {
        assert!((img.clone() - DMatrix::identity(img.nrows(), img.ncols())).amax() < 1e-9);
    }
    for b in &s.blocks.blocks {
        let b0 = b.dense(&s.orbits, 0);
        let sv = b0.singular_values();
        assert!(sv.iter().filter(|&&v| v > 1e-9).count() <= 1);
        for (l, o) in s.orbits.orbits().iter().enumerate() {
            assert!((b.dense(&s.orbits, o.transpose) - b.dense(&s.orbits, l).transpose()).amax() < 1e-12);
        }
    }
}

#[test]
fn streaming_matches_dense_products() {
    for n in 3..=4 {
        let s = setup(n);
        for b in &s.blocks.blocks {
            let u = &b.basis.vectors;
            for l in 0..s.orbits.num_orbits() {
                let got = b.dense(&s.orbits, l);
                let mut indicator = vec![0.0; s.orbits.num_orbits()];
                indicator[l] = 1.0;
                let bl = dense(&s.orbits, &indicator);
                for j in 0..u.len() {
                    for t in 0..u.len() {
                        let uj = DMatrix::from_column_slice(u[j].len(), 1, &u[j]);
                        let ut = DMatrix::from_column_slice(u[t].len(), 1, &u[t]);
                        let want = (uj.transpose() * &bl * ut)[(0, 0)];
                        assert!((got[(j, t)] - want).abs() < 1e-12, "n={n} orbit {l} entry ({j},{t})");
                    }
                }
            }
        }
    }
}

#[test]
fn trace_identity() {
    for n in 3..=5 {
        let s = setup(n);
        let mut rng = ChaCha8Rng::seed_from_u64(40 + n as u64);
        for _ in 0..10 {
            let c: Vec<f64> = (0..s.orbits.num_orbits()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let full = dense(&s.orbits, &c).trace();
            let blocks: f64 = s
                .blocks
                .blocks
                .iter()
                .zip(s.blocks.block_image(&s.orbits, &c))
                .map(|(b, img)| b.basis.degree as f64 * img.trace())
                .sum();
            assert!((full - blocks).abs() < 1e-7 * full.abs().max(1.0));
        }
    }
}

#[test]
fn psd_transfer() {
    let s = setup(4);
    let order = s.group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let m = DMatrix::from_fn(6, order, |_, _| if rng.gen_bool(0.2) { rng.gen_range(-1.0..1.0) } else { 0.0 });
        let x = m.transpose() * m;
        // Averaging over orbits is the group average, which keeps X PSD.
        let mut sums = vec![0.0; s.orbits.num_orbits()];
        for r in 0..order {
            for (c, &l) in s.orbits.row(r).iter().enumerate() {
                sums[l as usize] += x[(r, c)];
            }
        }
        let c: Vec<f64> = sums.iter().zip(s.orbits.orbits()).map(|(v, o)| v / o.size as f64).collect();
        for img in s.blocks.block_image(&s.orbits, &c) {
            assert!(sorted_eigenvalues(img)[0] >= -1e-7);
        }
    }
}

/// Orbit coefficients of `(Σ x_l B_l)(Σ y_l B_l)`, read at representatives.
fn product_coefficients(s: &Setup, x: &[f64], y: &[f64]) -> Vec<f64> {
    s.orbits
        .orbits()
        .iter()
        .map(|o| {
            let (phi, psi) = (o.representative.0 as usize, o.representative.1 as usize);
            let row = s.orbits.row(phi);
            (0..s.group.order()).map(|chi| x[row[chi] as usize] * y[s.orbits.orbit_of_pair(chi, psi)]).sum()
        })
        .collect()
}

#[test]
fn block_map_is_multiplicative() {
    for n in 3..=5 {
        let s = setup(n);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let count = s.orbits.num_orbits();
        for _ in 0..10 {
            let x: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let z = product_coefficients(&s, &x, &y);
            if n == 3 {
                let want = dense(&s.orbits, &x) * dense(&s.orbits, &y);
                assert!((dense(&s.orbits, &z) - want).amax() < 1e-12);
            }
            let (bx, by, bz) =
                (s.blocks.block_image(&s.orbits, &x), s.blocks.block_image(&s.orbits, &y), s.blocks.block_image(&s.orbits, &z));
            for k in 0..bx.len() {
                let defect = (&bx[k] * &by[k] - &bz[k]).amax();
                assert!(defect <= 1e-8 * bz[k].amax().max(1.0), "n={n} block {k}: {defect:e}");
            }
        }
    }
}
