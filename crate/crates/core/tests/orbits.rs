use permcode_core::orbits::{burnside_count, burnside_count_swap, enumerate_orbits, OrbitIndex};
use permcode_core::{Permutation, SymmetricGroup};
use proptest::prelude::*;

fn check_index(idx: &OrbitIndex, group: &SymmetricGroup) {
    let n = idx.n();
    let order = idx.group_order();
    assert_eq!(idx.num_orbits() as u64, burnside_count(n).unwrap());
    assert_eq!(idx.swap_classes().len() as u64, burnside_count_swap(n).unwrap());
    let total: u64 = idx.orbits().iter().map(|o| o.size).sum();
    assert_eq!(total, (order * order) as u64);
    for (l, o) in idx.orbits().iter().enumerate() {
        assert_eq!((2 * order as u64) % o.size, 0, "orbit size divides 2n!");
        assert_eq!(idx.orbit(o.transpose).transpose, l);
        assert!(idx.block(o.row_class, o.col_class).contains(&l));
    }
    let mut sizes = vec![0u64; idx.num_orbits()];
    for phi in 0..order {
        for (psi, &id) in idx.row(phi).iter().enumerate() {
            let o = idx.orbit(id as usize);
            sizes[id as usize] += 1;
            assert_eq!(group.class_of(phi), o.row_class);
            assert_eq!(group.class_of(psi), o.col_class);
            assert_eq!(group.class_of(group.quotient(phi, psi)), o.quotient_class);
            assert_eq!(phi == psi, o.diagonal);
        }
    }
    assert!(sizes.iter().zip(idx.orbits()).all(|(&s, o)| s == o.size));
}

#[test]
fn enumeration_matches_counts_n4_to_n6() {
    for n in 4..=6 {
        let group = SymmetricGroup::new(n).unwrap();
        let idx = OrbitIndex::enumerate(&group).unwrap();
        check_index(&idx, &group);
    }
}

#[test]
fn enumeration_matches_counts_n7() {
    let idx = enumerate_orbits(7).unwrap();
    assert_eq!(idx.num_orbits(), 4043);
    assert_eq!(idx.swap_classes().len(), 2151);
    assert_eq!(idx.orbit_of_pair(0, 0), 0);
}

#[test]
fn inversion_invariance_n4() {
    let group = SymmetricGroup::new(4).unwrap();
    let idx = OrbitIndex::enumerate(&group).unwrap();
    for phi in 0..24 {
        for psi in 0..24 {
            assert_eq!(idx.orbit_of_pair(phi, psi), idx.orbit_of_pair(group.inverse(phi), group.inverse(psi)));
        }
    }
}

#[test]
fn save_and_load_round_trip() {
    let group = SymmetricGroup::new(4).unwrap();
    let idx = OrbitIndex::enumerate(&group).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbits.pcoi");
    idx.save(&path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..4], b"PCOI");
    assert_eq!(bytes.len(), 10 + 4 * 576);
    assert_eq!(u32::from_le_bytes(bytes[10..14].try_into().unwrap()), 1);
    let back = OrbitIndex::load(&group, &path).unwrap();
    assert_eq!(back.ids(), idx.ids());
    assert_eq!(back.num_orbits(), 43);

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(OrbitIndex::read_from(&group, bad.as_slice()).is_err());
    let wrong_n = SymmetricGroup::new(3).unwrap();
    assert!(OrbitIndex::read_from(&wrong_n, bytes.as_slice()).is_err());
    assert!(OrbitIndex::read_from(&group, &bytes[..bytes.len() - 1]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn invariance_under_random_isometries(phi in 0usize..120, psi in 0usize..120, alpha in 0u64..120, invert: bool) {
        thread_local! {
            static DATA: (SymmetricGroup, OrbitIndex) = {
                let g = SymmetricGroup::new(5).unwrap();
                let idx = OrbitIndex::enumerate(&g).unwrap();
                (g, idx)
            };
        }
        DATA.with(|(g, idx)| {
            let a = Permutation::unrank(alpha, 5).unwrap();
            let act = |x: usize| {
                let y = a.compose(&g.element(x)).compose(&a.inverse());
                let y = if invert { y.inverse() } else { y };
                y.rank() as usize
            };
            assert_eq!(idx.orbit_of_pair(act(phi), act(psi)), idx.orbit_of_pair(phi, psi));
        });
    }
}
