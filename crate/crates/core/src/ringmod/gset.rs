use crate::error::{Error, Result};
use crate::finab::{AbHom, Elem, FinAbGroup};

use super::group::FinGroup;
use super::module::{permutation_matrix, FinModule, ModHom, ModuleSum, Side};
use super::ring::FiniteRing;

/// A finite set with a left action of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    group: FinGroup,
    /// `action[g][y]` is `g·y`.
    action: Vec<Vec<usize>>,
}

impl GSet {
    pub fn new(group: FinGroup, size: usize, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidGroup(format!(
                "{} permutations for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, p) in action.iter().enumerate() {
            let mut seen = vec![false; size];
            if p.len() != size {
                return Err(Error::InvalidGroup(format!(
                    "permutation of element {g} has the wrong length"
                )));
            }
            for &y in p {
                if y >= size || std::mem::replace(&mut seen[y], true) {
                    return Err(Error::InvalidGroup(format!(
                        "element {g} does not act by a permutation"
                    )));
                }
            }
        }
        if action[group.identity()]
            .iter()
            .enumerate()
            .any(|(y, &z)| y != z)
        {
            return Err(Error::InvalidGroup(
                "identity does not act trivially".into(),
            ));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if (0..size).any(|y| action[gh][y] != action[g][action[h][y]]) {
                    return Err(Error::InvalidGroup(format!(
                        "(g{g} g{h})·y != g{g}·(g{h}·y)"
                    )));
                }
            }
        }
        Ok(GSet { group, action })
    }

    /// `G` acting on itself by left multiplication.
    pub fn regular(group: &FinGroup) -> Self {
        let n = group.order();
        let action = (0..n)
            .map(|g| (0..n).map(|h| group.mul(g, h)).collect())
            .collect();
        GSet {
            group: group.clone(),
            action,
        }
    }

    /// `size` points fixed by every element.
    pub fn trivial(group: &FinGroup, size: usize) -> Self {
        GSet {
            group: group.clone(),
            action: vec![(0..size).collect(); group.order()],
        }
    }

    /// `G` acting on the left cosets `G/H`, ordered by least element.
    pub fn cosets(group: &FinGroup, subgroup: &[usize]) -> Result<Self> {
        let cosets = group.left_cosets(subgroup)?;
        let mut which = vec![0; group.order()];
        for (c, coset) in cosets.iter().enumerate() {
            for &x in coset {
                which[x] = c;
            }
        }
        let action = (0..group.order())
            .map(|g| cosets.iter().map(|c| which[group.mul(g, c[0])]).collect())
            .collect();
        GSet::new(group.clone(), cosets.len(), action)
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.action.first().map_or(0, Vec::len)
    }

    pub fn act(&self, g: usize, y: usize) -> usize {
        self.action[g][y]
    }

    pub fn permutation(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    /// Orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for y in 0..self.size() {
            if seen[y] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.act(g, y)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &z in &orbit {
                seen[z] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, y: usize) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| self.act(g, y) == y)
            .collect()
    }

    /// The action restricted to an invariant subset, relabelled `0..len`
    /// in increasing order.
    pub fn restrict(&self, subset: &[usize]) -> Result<GSet> {
        let mut pts = subset.to_vec();
        pts.sort_unstable();
        pts.dedup();
        let pos = |y: usize| pts.binary_search(&y).ok();
        let action = (0..self.group.order())
            .map(|g| {
                pts.iter()
                    .map(|&y| {
                        pos(self.act(g, y))
                            .ok_or_else(|| Error::InvalidGroup("subset is not invariant".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GSet {
            group: self.group.clone(),
            action,
        })
    }
}

/// `(Z/m)[Y]`: the free `Z/m`-module on `Y` with `G` permuting the basis;
/// a left module over `(Z/m)[G]`.
pub fn permutation_module(ring: &FiniteRing, y: &GSet) -> Result<FinModule> {
    let (m, group) = ring
        .as_group_ring()
        .ok_or_else(|| Error::ModuleAxiom("permutation modules live over group rings".into()))?;
    if group != y.group() {
        return Err(Error::Mismatch(
            "the G-set is over a different group".into(),
        ));
    }
    let a = FinAbGroup::free(m, y.size());
    let action = (0..group.order())
        .map(|g| AbHom::new(a.clone(), a.clone(), permutation_matrix(y.permutation(g))))
        .collect::<Result<Vec<_>>>()?;
    FinModule::new(a, ring.clone(), action, Side::Left)
}

/// `(Z/m)[G/H]`; fails if `subgroup` is not a subgroup.
pub fn induced_module(ring: &FiniteRing, subgroup: &[usize]) -> Result<FinModule> {
    let (_, group) = ring
        .as_group_ring()
        .ok_or_else(|| Error::ModuleAxiom("induced modules live over group rings".into()))?;
    let y = GSet::cosets(group, subgroup)?;
    permutation_module(ring, &y)
}

/// Splitting of a permutation module along the orbits of its `G`-set.
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    /// Orbit point sets in the original labelling.
    pub orbits: Vec<Vec<usize>>,
    /// Each orbit as a `G`-set, relabelled in increasing order.
    pub orbit_sets: Vec<GSet>,
    pub sum: ModuleSum,
    /// `(Z/m)[Y] -> ⊕ (Z/m)[orbit]`, a module isomorphism.
    pub witness: ModHom,
}

pub fn orbit_decomposition(ring: &FiniteRing, y: &GSet) -> Result<OrbitDecomposition> {
    let whole = permutation_module(ring, y)?;
    let orbits = y.orbits();
    let orbit_sets = orbits
        .iter()
        .map(|o| y.restrict(o))
        .collect::<Result<Vec<_>>>()?;
    let pieces = orbit_sets
        .iter()
        .map(|o| permutation_module(ring, o))
        .collect::<Result<Vec<_>>>()?;
    let sum = ModuleSum::new(ring, Side::Left, &pieces)?;
    let images: Vec<Elem> = (0..y.size())
        .map(|p| {
            let (o, local) = orbits
                .iter()
                .enumerate()
                .find_map(|(o, pts)| pts.binary_search(&p).ok().map(|l| (o, l)))
                .expect("orbits cover the set");
            sum.injections[o].apply(&pieces[o].group().basis(local))
        })
        .collect();
    let map = AbHom::from_images(whole.group().clone(), sum.module.group().clone(), &images)?;
    let witness = ModHom::new(whole, sum.module.clone(), map)?;
    Ok(OrbitDecomposition {
        orbits,
        orbit_sets,
        sum,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringmod::search_isomorphism;

    #[test]
    fn regular_gset_gives_regular_module() {
        let g = FinGroup::cyclic(3);
        let r = FiniteRing::group_ring(2, &g).unwrap();
        let m = permutation_module(&r, &GSet::regular(&g)).unwrap();
        assert_eq!(m, FinModule::regular(&r, Side::Left));
    }

    #[test]
    fn fixed_point_gives_trivial_module() {
        let g = FinGroup::cyclic(2);
        let r = FiniteRing::group_ring(5, &g).unwrap();
        let m = permutation_module(&r, &GSet::trivial(&g, 1)).unwrap();
        assert_eq!(
            m,
            FinModule::trivial_action(&r, FinAbGroup::cyclic(5), Side::Left).unwrap()
        );
    }

    #[test]
    fn swap_is_regular() {
        let g = FinGroup::cyclic(2);
        let r = FiniteRing::group_ring(2, &g).unwrap();
        let y = GSet::new(g.clone(), 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let m = permutation_module(&r, &y).unwrap();
        assert!(search_isomorphism(&m, &FinModule::regular(&r, Side::Left))
            .unwrap()
            .is_some());
    }

    #[test]
    fn induced_from_c3_in_s3() {
        let g = FinGroup::symmetric(3);
        let r = FiniteRing::group_ring(3, &g).unwrap();
        let c3 = g.subgroups().into_iter().find(|h| h.len() == 3).unwrap();
        let m = induced_module(&r, &c3).unwrap();
        assert_eq!(m.group(), &FinAbGroup::free(3, 2));
        let whole: Vec<usize> = (0..6).collect();
        assert_eq!(induced_module(&r, &whole).unwrap().order(), 3);
        assert_eq!(
            induced_module(&r, &[g.identity()]).unwrap(),
            FinModule::regular(&r, Side::Left)
        );
        assert!(induced_module(&r, &[0, 1, 2]).is_err() || g.check_subgroup(&[0, 1, 2]).is_ok());
    }

    #[test]
    fn orbit_split_of_swap_plus_fixed() {
        let g = FinGroup::cyclic(2);
        let r = FiniteRing::group_ring(2, &g).unwrap();
        let y = GSet::new(g.clone(), 3, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        let d = orbit_decomposition(&r, &y).unwrap();
        assert_eq!(d.orbits, vec![vec![0, 1], vec![2]]);
        assert!(d.witness.is_bijective());
        let inv = d.witness.inverse().unwrap();
        assert_eq!(
            inv.compose(&d.witness).unwrap(),
            ModHom::identity(d.witness.source())
        );
    }

    #[test]
    fn invalid_actions_rejected() {
        let g = FinGroup::cyclic(3);
        assert!(GSet::new(g.clone(), 2, vec![vec![0, 1], vec![1, 0], vec![0, 1]]).is_err());
        assert!(GSet::new(g, 2, vec![vec![0, 0], vec![0, 1], vec![0, 1]]).is_err());
    }
}
