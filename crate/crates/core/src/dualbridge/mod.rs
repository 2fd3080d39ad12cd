//! Pontryagin duality between étale systems of discrete modules and
//! `sheaves' of profinite modules, with explicit pairings witnessing that
//! the direct sum of the duals is the dual of the product.

mod functors;
mod pairing;

pub use functors::{
    cosheaf_dual_check, dual_cosheaf_table, dual_etale_to_prosheaf, dual_presheaf_table,
    dual_prosheaf_to_etale, fibre_duality_check, sheaf_dual_check, DualTableVerdict,
};
pub use pairing::{
    ext0_product_check, product_sum_duality_check, random_endomorphism, square_commutes_check,
    square_commutes_check_co, sum_product_duality_check, DualityWitness, LevelPairing,
};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::cosheafside::{coshf_of_prosheaf, ProSheafSystem};
    use crate::finab::{dual_hom, AbHom, FinAbGroup, IntMatrix, QmodZ};
    use crate::ringmod::{FinGroup, FinModule, FiniteRing, ModHom, Side};
    use crate::sheafside::{sheaf_of_etale, EtaleSystem, PresheafTable};
    use crate::stone::LevelChain;

    fn ring() -> FiniteRing {
        FiniteRing::cyclic(12).unwrap()
    }

    fn zm(factors: &[i64]) -> FinModule {
        FinModule::over_cyclic(
            &ring(),
            FinAbGroup::new(factors.to_vec()).unwrap(),
            Side::Left,
        )
        .unwrap()
    }

    fn hom(a: &FinModule, b: &FinModule, rows: &[Vec<i64>]) -> ModHom {
        let m = AbHom::new(
            a.group().clone(),
            b.group().clone(),
            IntMatrix::from_rows(rows),
        )
        .unwrap();
        ModHom::new(a.clone(), b.clone(), m).unwrap()
    }

    /// `{a, b} -> {*}` with `Z/2 -> Z/4` by doubling and `Z/2 -> Z/2` the identity.
    fn chain_system() -> EtaleSystem {
        let z2 = zm(&[2]);
        let z4 = zm(&[4]);
        EtaleSystem::new(
            LevelChain::two_level(1, vec![0, 0]).unwrap(),
            ring(),
            Side::Left,
            vec![vec![z2.clone()], vec![z4.clone(), z2.clone()]],
            vec![vec![hom(&z2, &z4, &[vec![2]]), ModHom::identity(&z2)]],
        )
        .unwrap()
    }

    #[test]
    fn dual_fibres_and_maps() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[3])]).unwrap();
        let d = dual_etale_to_prosheaf(&e);
        assert_eq!(d.fibre(0, 0).group(), &FinAbGroup::cyclic(2));
        assert_eq!(d.fibre(0, 1).group(), &FinAbGroup::cyclic(3));
        assert_eq!(d.side(), Side::Right);
        let c = dual_etale_to_prosheaf(&chain_system());
        // the dual of doubling Z/2 -> Z/4 is reduction Z/4 -> Z/2
        assert_eq!(
            c.fibre_map(0, 0).map(),
            &dual_hom(chain_system().transition(0, 0).map())
        );
        assert_eq!(c.fibre_map(0, 0).apply(&[1]), vec![1]);
        assert_eq!(c.fibre_map(0, 0).apply(&[2]), vec![0]);
        assert_eq!(c.fibre_map(0, 1), &ModHom::identity(c.fibre(1, 1)));
        let zero = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[]); 2]).unwrap();
        assert!(dual_etale_to_prosheaf(&zero)
            .fibres(0)
            .iter()
            .all(|m| m.is_zero()));
        let back = dual_prosheaf_to_etale(&c);
        assert_eq!(back.side(), Side::Left);
        assert_eq!(back.fibre(1, 0).group(), &FinAbGroup::cyclic(4));
    }

    #[test]
    fn fibre_duality() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[3])]).unwrap();
        assert!(fibre_duality_check(&e).unwrap().holds);
        let r = fibre_duality_check(&chain_system()).unwrap();
        assert!(
            r.holds,
            "{:?}",
            r.checks.iter().filter(|c| !c.holds).collect::<Vec<_>>()
        );
    }

    #[test]
    fn two_three_pairing() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[3])]).unwrap();
        let w = sum_product_duality_check(&e).unwrap();
        assert!(w.holds);
        assert_eq!(w.levels[0].table.left.order(), 6);
        assert_eq!(w.levels[0].table.right.order(), 6);
        // the pairing on generators of Z/6 is 1/2 + 1/3 after CRT
        let lp = &w.levels[0].table;
        let mut values = std::collections::BTreeSet::new();
        for a in lp.left.elements() {
            for b in lp.right.elements() {
                values.insert(lp.evaluate(&a, &b));
            }
        }
        assert_eq!(values.len(), 6);
    }

    #[test]
    fn constant_z2_pairing_is_dot_product() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[2]); 3]).unwrap();
        let w = sum_product_duality_check(&e).unwrap();
        assert!(w.holds);
        let t = &w.levels[0].table;
        assert_eq!(t.left.order(), 8);
        for a in t.left.elements() {
            for b in t.right.elements() {
                let dot: i64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
                assert_eq!(t.evaluate(&a, &b), QmodZ::new(dot % 2, 2));
            }
        }
    }

    #[test]
    fn empty_space_pairs_zero_with_zero() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![]).unwrap();
        let w = sum_product_duality_check(&e).unwrap();
        assert!(w.holds);
        assert_eq!(w.levels[0].table.left.order(), 1);
        assert!(square_commutes_check(&e, 0).unwrap().holds);
    }

    #[test]
    fn squares() {
        let one = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[4])]).unwrap();
        assert!(square_commutes_check(&one, 0).unwrap().holds);
        for seed in 0..5 {
            let r = square_commutes_check(&chain_system(), seed).unwrap();
            assert!(
                r.holds,
                "{:?}",
                r.checks.iter().filter(|c| !c.holds).collect::<Vec<_>>()
            );
        }
        let s = dual_etale_to_prosheaf(&chain_system());
        assert!(square_commutes_check_co(&s).unwrap().holds);
        assert!(product_sum_duality_check(&s).unwrap().holds);
    }

    #[test]
    fn group_ring_duality() {
        let r = FiniteRing::group_ring(2, &FinGroup::cyclic(2)).unwrap();
        let reg = FinModule::regular(&r, Side::Left);
        let triv = FinModule::trivial_action(&r, FinAbGroup::cyclic(2), Side::Left).unwrap();
        let e = EtaleSystem::single_level(&r, Side::Left, vec![reg, triv]).unwrap();
        assert!(sum_product_duality_check(&e).unwrap().holds);
        assert!(square_commutes_check(&e, 3).unwrap().holds);
        assert!(fibre_duality_check(&e).unwrap().holds);
    }

    #[test]
    fn dual_tables() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[3])]).unwrap();
        let v = sheaf_dual_check(&sheaf_of_etale(&e, 0).unwrap()).unwrap();
        assert!(v.original && v.dual);
        let s =
            ProSheafSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[4])]).unwrap();
        let v = cosheaf_dual_check(&coshf_of_prosheaf(&s, 0).unwrap()).unwrap();
        assert!(v.original && v.dual);
        // A(X) = 0, A({x}) = Z/2 fails on both sides
        let values = vec![zm(&[]), zm(&[2]), zm(&[2]), zm(&[])];
        let mut res = BTreeMap::new();
        for v in 0u32..4 {
            for u in 0u32..4 {
                if u & !v == 0 {
                    let f = if u == v {
                        ModHom::identity(&values[v as usize])
                    } else {
                        ModHom::zero(&values[v as usize], &values[u as usize])
                    };
                    res.insert((v, u), f);
                }
            }
        }
        let p = PresheafTable::new(LevelChain::single(2), 0, values, res).unwrap();
        let v = sheaf_dual_check(&p).unwrap();
        assert!(!v.original && !v.dual);
    }

    #[test]
    fn ext0_commutes_with_products() {
        let e = chain_system();
        let free = FinModule::regular(&ring(), Side::Left);
        assert!(ext0_product_check(&e, &free).unwrap().holds);
        assert!(ext0_product_check(&e, &zm(&[2])).unwrap().holds);
    }
}
