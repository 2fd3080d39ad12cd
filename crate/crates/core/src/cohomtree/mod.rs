//! Group cohomology from the bar complex, Ext over finite rings from free
//! resolutions, Shapiro's lemma, the exact sequence of a tree, and the
//! Mayer–Vietoris sequence of a group acting on a tree.

mod complex;
mod les;
mod resolution;
mod tree;

pub use complex::{
    bar_cohomology, bar_complex, restrict_to_subgroup, CochainComplex, MAX_COCHAIN_RANK,
};
pub use les::{les_from_ses, LESReport, LesTerm, ShortExactSequence};
pub use resolution::{
    ext_via_resolution, free_resolution, module_generators, shapiro_check, FreeResolution,
    ShapiroVerdict, MAX_FREE_RANK,
};
pub use tree::{mayer_vietoris_check, tree_ses, Tree, TreeAction, TreeSes};

/// Default top degree for cohomology computations.
pub const DEFAULT_DEGREE_CAP: usize = 2;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finab::{AbHom, FinAbGroup, IntMatrix};
    use crate::ringmod::{FinGroup, FinModule, FiniteRing, ModHom, Side};
    use crate::Error;

    fn trivial(m: i64, g: &FinGroup, a: &[i64]) -> FinModule {
        let r = FiniteRing::group_ring(m, g).unwrap();
        FinModule::trivial_action(&r, FinAbGroup::new(a.to_vec()).unwrap(), Side::Left).unwrap()
    }

    /// Orders of `H^0` and `H^1` by enumerating invariants, crossed
    /// homomorphisms and principal ones.
    fn low_degree_oracle(g: &FinGroup, a: &FinModule) -> (usize, usize) {
        let elems: Vec<Vec<i64>> = a.group().elements().collect();
        let act = |x: usize, v: &[i64]| a.action()[x].apply(v);
        let h0 = elems
            .iter()
            .filter(|v| (0..g.order()).all(|x| &act(x, v) == *v))
            .count();
        let n = g.order();
        let mut cocycles = 0usize;
        let mut idx = vec![0usize; n];
        loop {
            let f = |x: usize| &elems[idx[x]];
            let ok = (0..n)
                .all(|x| (0..n).all(|y| *f(g.mul(x, y)) == a.group().add(f(x), &act(x, f(y)))));
            if ok {
                cocycles += 1;
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < elems.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        let mut boundaries = std::collections::BTreeSet::new();
        for v in &elems {
            let b: Vec<Vec<i64>> = (0..n).map(|x| a.group().sub(&act(x, v), v)).collect();
            boundaries.insert(b);
        }
        (h0, cocycles / boundaries.len())
    }

    #[test]
    fn bar_cohomology_of_c2() {
        let c2 = FinGroup::cyclic(2);
        let h = bar_cohomology(&c2, &trivial(2, &c2, &[2]), 2).unwrap();
        assert_eq!(h, vec![FinAbGroup::cyclic(2); 3]);
    }

    #[test]
    fn coprime_cohomology_vanishes() {
        let c3 = FinGroup::cyclic(3);
        let h = bar_cohomology(&c3, &trivial(2, &c3, &[2]), 2).unwrap();
        assert_eq!(h[0], FinAbGroup::cyclic(2));
        assert!(h[1].is_trivial() && h[2].is_trivial());
    }

    #[test]
    fn low_degrees_match_enumeration() {
        let groups = [
            FinGroup::cyclic(2),
            FinGroup::cyclic(3),
            FinGroup::cyclic(4),
            FinGroup::klein_four(),
        ];
        for g in &groups {
            for a in [&[2][..], &[4], &[2, 2]] {
                let m = *a.last().unwrap();
                let module = trivial(m, g, a);
                let h = bar_cohomology(g, &module, 1).unwrap();
                let (h0, h1) = low_degree_oracle(g, &module);
                assert_eq!(h[0].order() as usize, h0);
                assert_eq!(h[1].order() as usize, h1);
            }
            let r = FiniteRing::group_ring(2, g).unwrap();
            let reg = FinModule::regular(&r, Side::Left);
            if reg.order() <= 16 {
                let h = bar_cohomology(g, &reg, 1).unwrap();
                let (h0, h1) = low_degree_oracle(g, &reg);
                assert_eq!(h[0].order() as usize, h0);
                assert_eq!(h[1].order() as usize, h1);
            }
        }
    }

    #[test]
    fn sign_action_on_z4() {
        // C2 acting on Z/4 by negation
        let c2 = FinGroup::cyclic(2);
        let r = FiniteRing::group_ring(4, &c2).unwrap();
        let z4 = FinAbGroup::cyclic(4);
        let neg = AbHom::new(z4.clone(), z4.clone(), IntMatrix::from_rows(&[vec![3]])).unwrap();
        let a = FinModule::new(z4.clone(), r, vec![AbHom::identity(z4), neg], Side::Left).unwrap();
        let h = bar_cohomology(&c2, &a, 1).unwrap();
        let (h0, h1) = low_degree_oracle(&c2, &a);
        assert_eq!((h[0].order() as usize, h[1].order() as usize), (h0, h1));
        assert_eq!(h0, 2);
    }

    #[test]
    fn complexes_square_to_zero() {
        let s3 = FinGroup::symmetric(3);
        let c = bar_complex(&s3, &trivial(2, &s3, &[2]), 3).unwrap();
        assert_eq!(c.first_nonzero_square(), None);
        let r = FiniteRing::group_ring(2, &FinGroup::cyclic(2)).unwrap();
        let res = free_resolution(&trivial(2, &FinGroup::cyclic(2), &[2]), 4).unwrap();
        let hc = res
            .hom_complex(&FinModule::regular(&r, Side::Left))
            .unwrap();
        assert_eq!(hc.first_nonzero_square(), None);
    }

    #[test]
    fn size_cap() {
        let c6 = FinGroup::cyclic(6);
        assert!(matches!(
            bar_cohomology(&c6, &trivial(2, &c6, &[2]), 4),
            Err(Error::SizeCap(_))
        ));
        assert!(bar_cohomology(&c6, &trivial(2, &c6, &[2]), 3).is_ok());
    }

    #[test]
    fn ext_of_free_module() {
        let c3 = FinGroup::cyclic(3);
        let r = FiniteRing::group_ring(4, &c3).unwrap();
        let a = trivial(4, &c3, &[2]);
        let ext = ext_via_resolution(&FinModule::regular(&r, Side::Left), &a, 2).unwrap();
        assert_eq!(ext[0], FinAbGroup::cyclic(2));
        assert!(ext[1].is_trivial() && ext[2].is_trivial());
    }

    #[test]
    fn ext_matches_bar_for_trivial_first_argument() {
        let c2 = FinGroup::cyclic(2);
        let z2 = trivial(2, &c2, &[2]);
        let ext = ext_via_resolution(&z2, &z2, 2).unwrap();
        assert_eq!(ext[1], FinAbGroup::cyclic(2));
        assert_eq!(ext, bar_cohomology(&c2, &z2, 2).unwrap());
        let s3 = FinGroup::symmetric(3);
        let z = trivial(4, &s3, &[4]);
        assert_eq!(
            ext_via_resolution(&z, &z, 2).unwrap(),
            bar_cohomology(&s3, &z, 2).unwrap()
        );
    }

    #[test]
    fn shapiro_instances() {
        let c4 = FinGroup::cyclic(4);
        let a = trivial(2, &c4, &[2]);
        for h in c4.subgroups() {
            let v = shapiro_check(&c4, &h, &a, 2).unwrap();
            assert!(v.holds, "{v:?}");
        }
        let whole = shapiro_check(&c4, &[0, 1, 2, 3], &a, 2).unwrap();
        assert_eq!(whole.cohomology, bar_cohomology(&c4, &a, 2).unwrap());
        let one = shapiro_check(&c4, &[0], &a, 2).unwrap();
        assert!(one.ext[1].is_trivial() && one.ext[2].is_trivial());
    }

    #[test]
    fn tree_sequences() {
        let g = FinGroup::trivial();
        let point = tree_ses(
            3,
            &TreeAction::trivial(g.clone(), Tree::path(1).unwrap()).unwrap(),
        )
        .unwrap();
        assert!(point.sequence.sub().is_zero());
        let seg = tree_ses(
            3,
            &TreeAction::trivial(g.clone(), Tree::path(2).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(
            seg.sequence.mid().group(),
            &FinAbGroup::new(vec![3, 3]).unwrap()
        );
        let star = tree_ses(
            2,
            &TreeAction::trivial(g.clone(), Tree::star(3).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(star.sequence.sub().group().rank(), 3);
        assert_eq!(star.sequence.mid().group().rank(), 4);
        assert_eq!(star.sequence.quo().group().rank(), 1);
        assert!(star.verdicts.iter().all(|v| v.exact));
    }

    #[test]
    fn cycle_is_rejected() {
        let g = FinGroup::trivial();
        assert!(Tree::new(3, vec![(0, 1), (1, 2), (2, 0)]).is_err());
        let cycle = Tree::from_graph(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let ta = TreeAction::trivial(g, cycle).unwrap();
        assert!(matches!(tree_ses(2, &ta), Err(Error::NotExact(_))));
    }

    #[test]
    fn edge_inversion_is_rejected() {
        let c2 = FinGroup::cyclic(2);
        let r = TreeAction::new(c2, Tree::path(2).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(
            r.unwrap_err(),
            Error::EdgeInversion {
                element: 1,
                edge: 0
            }
        );
    }

    fn c2_star() -> TreeAction {
        TreeAction::new(
            FinGroup::cyclic(2),
            Tree::star(2).unwrap(),
            vec![vec![0, 1, 2], vec![0, 2, 1]],
        )
        .unwrap()
    }

    #[test]
    fn split_sequence_has_zero_connecting_maps() {
        let c2 = FinGroup::cyclic(2);
        let r = FiniteRing::group_ring(2, &c2).unwrap();
        let a = trivial(2, &c2, &[2]);
        let reg = FinModule::regular(&r, Side::Left);
        let sum =
            crate::ringmod::ModuleSum::new(&r, Side::Left, &[a.clone(), reg.clone()]).unwrap();
        let ses =
            ShortExactSequence::new(sum.injections[0].clone(), sum.projections[1].clone()).unwrap();
        let les = les_from_ses(&ses, &a, 2).unwrap();
        assert!(les.exact);
        for n in 0..=2 {
            assert!(les.maps[3 * n + 2].is_zero());
        }
    }

    #[test]
    fn degree_zero_is_the_hom_sequence() {
        let ta = c2_star();
        let ses = tree_ses(2, &ta).unwrap();
        let mid = ses.sequence.mid().clone();
        let les = les_from_ses(&ses.sequence, &mid, 0).unwrap();
        assert!(les.exact);
        let homs = crate::ringmod::ModuleHomGroup::new(&mid, &mid).unwrap();
        assert_eq!(les.terms[1].group.order(), homs.order());
    }

    #[test]
    fn mayer_vietoris_on_c2_star() {
        let ta = c2_star();
        let a = trivial(2, ta.group(), &[2]);
        let r = mayer_vietoris_check(2, &ta, &a, 2).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.terms.len(), 9);
        // H^n(C2) -> H^n(C2) + H^n(1) -> H^n(1)
        assert_eq!(r.terms[3].group, FinAbGroup::cyclic(2));
        assert_eq!(r.terms[4].group, FinAbGroup::cyclic(2));
        assert!(r.terms[5].group.is_trivial());
        assert_eq!(r.terms[1].group, FinAbGroup::new(vec![2, 2]).unwrap());
    }

    #[test]
    fn mayer_vietoris_degenerate_cases() {
        let g = FinGroup::trivial();
        let seg = TreeAction::trivial(g.clone(), Tree::path(2).unwrap()).unwrap();
        let r = mayer_vietoris_check(3, &seg, &trivial(3, &g, &[3]), 2).unwrap();
        assert!(r.holds);
        assert!(r.terms[3..].iter().all(|t| t.group.is_trivial()));
        let c2 = FinGroup::cyclic(2);
        let point = TreeAction::trivial(c2.clone(), Tree::path(1).unwrap()).unwrap();
        let r = mayer_vietoris_check(2, &point, &trivial(2, &c2, &[2]), 2).unwrap();
        assert!(r.holds);
        for n in 0..=2 {
            assert!(r.maps[3 * n].is_bijective());
        }
    }

    #[test]
    fn module_maps_in_sequences_are_linear() {
        let ses = tree_ses(2, &c2_star()).unwrap();
        let f: &ModHom = &ses.sequence.inclusion;
        assert!(ModHom::new(f.source().clone(), f.target().clone(), f.map().clone()).is_ok());
    }
}
