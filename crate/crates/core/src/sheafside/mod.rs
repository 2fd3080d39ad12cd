//! Sheaves of discrete modules on the clopens of a finite level and étale
//! systems of fibres over a chain: the gluing condition, the disjoint-union
//! form of it, the passage between tables and fibre families, global
//! sections and functors applied fibrewise.

mod etale;
mod table;

pub use etale::{
    etale_of_sheaf, global_sections, lift_functor_sheaf, roundtrip_etale, roundtrip_sheaf,
    section_through_points, sheaf_of_etale, DiscreteChainModule, EtaleSystem, LiftedSheaf,
    NamedCheck, RoundtripReport, SectionValue,
};
pub use table::{DisjointUnionVerdict, PresheafTable, SheafVerdict, MAX_TABLE_POINTS};

pub(crate) use etale::check;
pub(crate) use table::{clopen_of, cover_families, is_subset, masks, partitions, points_of};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::finab::{AbHom, FinAbGroup, IntMatrix};
    use crate::ringmod::{FinModule, FiniteRing, FunctorTag, ModHom, Side};
    use crate::stone::{Clopen, LevelChain};

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

    fn two_three() -> EtaleSystem {
        EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[3])]).unwrap()
    }

    /// `A(X) = 0`, `A({x}) = Z/2` on two points.
    fn counterexample() -> PresheafTable {
        let chain = LevelChain::single(2);
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
        PresheafTable::new(chain, 0, values, res).unwrap()
    }

    #[test]
    fn product_presheaf_is_a_sheaf() {
        let p = sheaf_of_etale(&two_three(), 0).unwrap();
        assert_eq!(p.value(0b11).order(), 6);
        assert!(p.value(0).is_zero());
        assert_eq!(p.value(0b10).group(), &FinAbGroup::cyclic(3));
        assert!(p.disjoint_union_check().holds);
        assert!(p.all_covers_check().unwrap().is_none());
    }

    #[test]
    fn counterexample_fails_in_the_middle() {
        let p = counterexample();
        let cover = [
            Clopen::new(p.chain(), 0, [0]).unwrap(),
            Clopen::new(p.chain(), 0, [1]).unwrap(),
        ];
        let v = p.sheaf_condition_check(&cover).unwrap();
        assert!(!v.holds);
        assert!(v.injective.exact);
        assert!(!v.middle.exact);
        assert!(v.middle.witness.is_some());
        assert!(!p.disjoint_union_check().holds);
        assert!(matches!(
            etale_of_sheaf(&p),
            Err(crate::Error::NotASheaf(_))
        ));
        assert!(roundtrip_sheaf(&p).is_err());
    }

    #[test]
    fn empty_cover_tests_the_empty_set() {
        let p = sheaf_of_etale(&two_three(), 0).unwrap();
        assert!(p.sheaf_condition_check(&[]).unwrap().holds);
        let bad = PresheafTable::new(
            LevelChain::single(0),
            0,
            vec![zm(&[2])],
            BTreeMap::from([((0, 0), ModHom::identity(&zm(&[2])))]),
        )
        .unwrap();
        assert!(!bad.sheaf_condition_check(&[]).unwrap().holds);
        assert!(!bad.disjoint_union_check().holds);
    }

    #[test]
    fn single_point_space() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[4])]).unwrap();
        let p = sheaf_of_etale(&e, 0).unwrap();
        assert!(p.disjoint_union_check().holds);
        let back = etale_of_sheaf(&p).unwrap();
        assert_eq!(back.fibre(0, 0).group(), &FinAbGroup::cyclic(4));
    }

    #[test]
    fn stalks_of_the_product() {
        let back = etale_of_sheaf(&sheaf_of_etale(&two_three(), 0).unwrap()).unwrap();
        assert_eq!(back.fibre(0, 0).group(), &FinAbGroup::cyclic(2));
        assert_eq!(back.fibre(0, 1).group(), &FinAbGroup::cyclic(3));
    }

    fn pulled_back() -> EtaleSystem {
        let chain = LevelChain::two_level(1, vec![0, 0]).unwrap();
        let a = zm(&[2]);
        EtaleSystem::new(
            chain,
            ring(),
            Side::Left,
            vec![vec![a.clone()], vec![a.clone(), a.clone()]],
            vec![vec![ModHom::identity(&a), ModHom::identity(&a)]],
        )
        .unwrap()
    }

    #[test]
    fn pulled_back_sheaf_has_identity_transitions() {
        let e = pulled_back();
        let p = sheaf_of_etale(&e, 1).unwrap();
        let back = etale_of_sheaf(&p).unwrap();
        assert_eq!(back.fibre(0, 0).order(), 4);
        let top = etale_of_sheaf(&sheaf_of_etale(&e, 0).unwrap()).unwrap();
        for x in 0..2 {
            assert_eq!(top.transition(0, x), &ModHom::identity(top.fibre(1, x)));
        }
    }

    #[test]
    fn roundtrips() {
        assert!(roundtrip_etale(&two_three()).unwrap().holds);
        assert!(roundtrip_etale(&pulled_back()).unwrap().holds);
        assert!(
            roundtrip_sheaf(&sheaf_of_etale(&two_three(), 0).unwrap())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn sections() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[2]); 3]).unwrap();
        assert_eq!(global_sections(&e).unwrap().value().order(), 8);
        let g = global_sections(&pulled_back()).unwrap();
        // the chain map is the diagonal
        assert_eq!(
            g.levels[1].unpack(&g.maps[0].apply(&[1])),
            vec![vec![1], vec![1]]
        );
        let empty = EtaleSystem::single_level(&ring(), Side::Left, vec![]).unwrap();
        assert!(global_sections(&empty).unwrap().value().is_zero());
    }

    #[test]
    fn sections_through_points() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[3]), zm(&[4])])
            .unwrap();
        assert_eq!(
            section_through_points(&e, 0, &[]).unwrap().values,
            vec![vec![0], vec![0], vec![0]]
        );
        let s = section_through_points(&e, 0, &[(1, vec![2])]).unwrap();
        assert_eq!(s.values, vec![vec![0], vec![2], vec![0]]);
        let all =
            section_through_points(&e, 0, &[(2, vec![3]), (0, vec![1]), (1, vec![1])]).unwrap();
        assert_eq!(all.values, vec![vec![1], vec![1], vec![3]]);
        assert_eq!(
            section_through_points(&e, 0, &[(1, vec![1]), (1, vec![2])]),
            Err(crate::Error::DuplicatePoint(1))
        );
    }

    #[test]
    fn functor_lifts() {
        let e = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[4]), zm(&[3])]).unwrap();
        let l = lift_functor_sheaf(FunctorTag::HomFrom(2), &e).unwrap();
        assert_eq!(l.system.fibre(0, 0).group(), &FinAbGroup::cyclic(2));
        assert!(l.system.fibre(0, 1).is_zero());
        assert!(l.report.holds);
        let z = lift_functor_sheaf(FunctorTag::HomFrom(1), &e).unwrap();
        assert!(z.system.fibres(0).iter().all(|m| m.is_zero()));
        let e2 = EtaleSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[2])]).unwrap();
        let t = lift_functor_sheaf(FunctorTag::Tensor(2), &e2).unwrap();
        assert_eq!(t.system.fibres(0), e2.fibres(0));
        assert!(t.report.holds);
        let chain = lift_functor_sheaf(FunctorTag::Tensor(2), &pulled_back()).unwrap();
        assert!(chain.report.holds);
    }

    #[test]
    fn non_identity_restriction_table() {
        // A(U) = Z/4 on every nonempty U with identity restrictions is not a sheaf
        let chain = LevelChain::single(2);
        let z4 = zm(&[4]);
        let values = vec![zm(&[]), z4.clone(), z4.clone(), z4.clone()];
        let mut elem = BTreeMap::new();
        for v in 1u32..4 {
            for x in 0..2 {
                if v >> x & 1 == 1 {
                    let u = v & !(1 << x);
                    let f = if u == 0 {
                        ModHom::zero(&values[v as usize], &values[0])
                    } else {
                        let m = AbHom::new(
                            z4.group().clone(),
                            z4.group().clone(),
                            IntMatrix::identity(1),
                        )
                        .unwrap();
                        ModHom::new(z4.clone(), z4.clone(), m).unwrap()
                    };
                    elem.insert((v, x), f);
                }
            }
        }
        let p = PresheafTable::from_elementary(chain, 0, values, &elem).unwrap();
        assert!(!p.disjoint_union_check().holds);
        assert!(p.all_covers_check().unwrap().is_some());
    }
}
