//! Cosheaves of profinite modules on clopens, fibre families with maps
//! running down the chain, their profinite direct sums, and the passage
//! between the two descriptions.

mod system;
mod table;

pub use system::{
    coetale_of_cosheaf, coshf_of_prosheaf, direct_sum_summary, profinite_direct_sum,
    roundtrip_check_co, roundtrip_cosheaf, roundtrip_prosheaf, universal_property_check,
    CanonicalMorphism, CoInput, DirectSumSummary, ProChainModule, ProSheafSystem, UniversalVerdict,
    UNIQUENESS_SEARCH_LIMIT,
};
pub use table::{CosheafTable, CosheafVerdict};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::finab::{AbHom, FinAbGroup, IntMatrix};
    use crate::ringmod::{FinModule, FiniteRing, ModHom, Side};
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

    fn two_three() -> ProSheafSystem {
        ProSheafSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[3])]).unwrap()
    }

    /// `M(X) = Z/4`, `M({x}) = Z/2` with zero corestrictions.
    fn counterexample() -> CosheafTable {
        let values = vec![zm(&[]), zm(&[2]), zm(&[2]), zm(&[4])];
        let mut cors = BTreeMap::new();
        for v in 0u32..4 {
            for u in 0u32..4 {
                if u & !v == 0 {
                    let f = if u == v {
                        ModHom::identity(&values[v as usize])
                    } else {
                        ModHom::zero(&values[u as usize], &values[v as usize])
                    };
                    cors.insert((v, u), f);
                }
            }
        }
        CosheafTable::new(LevelChain::single(2), 0, values, cors).unwrap()
    }

    /// `{a, b} -> {*}` with `M^1 = Z/2` everywhere and identity maps.
    fn fold_system() -> ProSheafSystem {
        let a = zm(&[2]);
        ProSheafSystem::new(
            LevelChain::two_level(1, vec![0, 0]).unwrap(),
            ring(),
            Side::Left,
            vec![vec![a.clone()], vec![a.clone(), a.clone()]],
            vec![vec![ModHom::identity(&a), ModHom::identity(&a)]],
        )
        .unwrap()
    }

    #[test]
    fn direct_sum_cosheaf() {
        let c = coshf_of_prosheaf(&two_three(), 0).unwrap();
        assert_eq!(c.value(0b11).group(), &FinAbGroup::cyclic(6));
        assert!(c.value(0).is_zero());
        assert_eq!(c.value(0b01).group(), &FinAbGroup::cyclic(2));
        assert!(c.disjoint_union_check().holds);
        assert!(c.all_covers_check().unwrap().is_none());
        let back = coetale_of_cosheaf(&c).unwrap();
        assert_eq!(back.fibre(0, 0).group(), &FinAbGroup::cyclic(2));
        assert_eq!(back.fibre(0, 1).group(), &FinAbGroup::cyclic(3));
    }

    #[test]
    fn counterexample_fails_surjectivity() {
        let c = counterexample();
        let cover = [
            Clopen::new(c.chain(), 0, [0]).unwrap(),
            Clopen::new(c.chain(), 0, [1]).unwrap(),
        ];
        let v = c.cosheaf_condition_check(&cover).unwrap();
        assert!(!v.holds);
        assert!(!v.surjective.exact);
        assert!(v.surjective.witness.is_some());
        assert!(!c.disjoint_union_check().holds);
        assert!(coetale_of_cosheaf(&c).is_err());
        assert!(roundtrip_check_co(CoInput::Table(&c)).is_err());
    }

    #[test]
    fn empty_cover() {
        let c = coshf_of_prosheaf(&two_three(), 0).unwrap();
        assert!(c.cosheaf_condition_check(&[]).unwrap().holds);
        let m = zm(&[2]);
        let bad = CosheafTable::new(
            LevelChain::single(0),
            0,
            vec![m.clone()],
            BTreeMap::from([((0, 0), ModHom::identity(&m))]),
        )
        .unwrap();
        assert!(!bad.cosheaf_condition_check(&[]).unwrap().holds);
    }

    #[test]
    fn one_point_space() {
        let s = ProSheafSystem::single_level(&ring(), Side::Left, vec![zm(&[4])]).unwrap();
        let c = coshf_of_prosheaf(&s, 0).unwrap();
        assert_eq!(coetale_of_cosheaf(&c).unwrap().fibre(0, 0), c.value(1));
    }

    #[test]
    fn chain_fibre_maps_are_corestrictions() {
        let s = fold_system();
        let back = coetale_of_cosheaf(&coshf_of_prosheaf(&s, 1).unwrap()).unwrap();
        assert_eq!(back.fibre(0, 0).order(), 4);
        // each stalk includes into the sum over the fibre
        assert_eq!(back.fibre_map(0, 1).apply(&[1]), vec![0, 1]);
        assert!(roundtrip_prosheaf(&s).unwrap().holds);
    }

    #[test]
    fn direct_sums() {
        let s =
            ProSheafSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[2])]).unwrap();
        let (sum, omega) = profinite_direct_sum(&s).unwrap();
        assert_eq!(sum.value().order(), 4);
        assert!(omega.is_fibrewise_injective());
        let (fold, _) = profinite_direct_sum(&fold_system()).unwrap();
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let x = fold.levels[1].pack(&[vec![a], vec![b]]);
            assert_eq!(fold.maps[0].apply(&x), vec![(a + b) % 2]);
        }
        let empty = ProSheafSystem::single_level(&ring(), Side::Left, vec![]).unwrap();
        assert!(profinite_direct_sum(&empty).unwrap().0.value().is_zero());
    }

    #[test]
    fn universal_property() {
        let s =
            ProSheafSystem::single_level(&ring(), Side::Left, vec![zm(&[2]), zm(&[2])]).unwrap();
        let p = zm(&[2]);
        let id = AbHom::identity(p.group().clone());
        let v = universal_property_check(&s, &p, &[id.clone(), id.clone()]).unwrap();
        assert!(v.holds);
        assert_eq!(v.exhaustive_count, Some(1));
        assert_eq!(
            v.factorization.map().matrix(),
            &IntMatrix::from_rows(&[vec![1, 1]])
        );
        let zero = AbHom::zero(p.group().clone(), p.group().clone());
        let z = universal_property_check(&s, &p, &[zero.clone(), zero]).unwrap();
        assert!(z.holds && z.factorization.is_zero());
        let one = ProSheafSystem::single_level(&ring(), Side::Left, vec![p.clone()]).unwrap();
        let u = universal_property_check(&one, &p, &[id]).unwrap();
        assert_eq!(u.factorization.map().matrix(), &IntMatrix::identity(1));
        let z3 = zm(&[3]);
        let bad = AbHom::zero(z3.group().clone(), p.group().clone());
        assert!(universal_property_check(&s, &p, &[bad.clone(), bad]).is_err());
    }

    #[test]
    fn roundtrips() {
        assert!(
            roundtrip_check_co(CoInput::System(&two_three()))
                .unwrap()
                .holds
        );
        let c = coshf_of_prosheaf(&fold_system(), 1).unwrap();
        assert!(roundtrip_check_co(CoInput::Table(&c)).unwrap().holds);
    }
}
