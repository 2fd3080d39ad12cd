//! Seeded generators of random instances: matrices, groups, short exact
//! sequences, modules, étale and profinite systems, presheaf tables and
//! inputs to the universal property of profinite direct sums.
//!
//! Every generator takes an explicit `Rng`, so a fixed seed reproduces the
//! same family of instances.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cosheafside::ProSheafSystem;
use crate::error::Result;
use crate::finab::{AbHom, Elem, FinAbGroup, IntMatrix, Quotient, Subgroup};
use crate::ringmod::{
    FinGroup, FinModule, FiniteRing, ModHom, ModuleHomGroup, ModuleSum, QuotientModule, Side,
    Submodule,
};
use crate::sheafside::{sheaf_of_etale, EtaleSystem, PresheafTable};
use crate::stone::LevelChain;

/// The generator used throughout: ChaCha8 seeded from a `u64`.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A matrix of random shape up to `max_dim × max_dim` (at least `1 × 1`)
/// with entries in `[-bound, bound]`.
pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&data)
}

/// Every finite abelian group of order at most `max_order`, one per list of
/// invariant factors, ordered by order and then by factors.
pub fn groups_up_to(max_order: u64) -> Vec<FinAbGroup> {
    fn extend(prefix: &mut Vec<i64>, order: u64, max: u64, out: &mut Vec<Vec<i64>>) {
        out.push(prefix.clone());
        // the next factor must be a multiple of the last one
        let step = prefix.last().copied().unwrap_or(1).max(2);
        let mut d = step;
        while order * d as u64 <= max {
            if prefix.last().is_none_or(|&l| d % l == 0) {
                prefix.push(d);
                extend(prefix, order * d as u64, max, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut lists = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut lists);
    let mut groups: Vec<FinAbGroup> = lists
        .into_iter()
        .map(|f| FinAbGroup::new(f).expect("divisibility chain"))
        .collect();
    groups.sort_by(|a, b| (a.order(), a.factors()).cmp(&(b.order(), b.factors())));
    groups
}

pub fn random_element(rng: &mut impl Rng, group: &FinAbGroup) -> Elem {
    group
        .factors()
        .iter()
        .map(|&d| rng.gen_range(0..d))
        .collect()
}

/// A uniformly random homomorphism between two groups.
pub fn random_hom(rng: &mut impl Rng, source: &FinAbGroup, target: &FinAbGroup) -> AbHom {
    let e = target.exponent().max(1);
    let images: Vec<Elem> = source
        .factors()
        .iter()
        .map(|&d| {
            // elements killed by d form the subgroup (e / gcd(e, d))·target
            let y = random_element(rng, target);
            target.scale(e / crate::finab::gcd(e, d), &y)
        })
        .collect();
    AbHom::from_images(source.clone(), target.clone(), &images)
        .expect("images have the right orders")
}

/// `0 -> A -> B -> C -> 0` with `B` of order at most `max_order` and `A`
/// generated by up to two random elements.
pub fn random_group_ses(rng: &mut impl Rng, max_order: u64) -> (AbHom, AbHom) {
    let groups = groups_up_to(max_order);
    let b = groups
        .choose(rng)
        .expect("the trivial group is listed")
        .clone();
    let k = rng.gen_range(0..=2);
    let gens: Vec<Elem> = (0..k).map(|_| random_element(rng, &b)).collect();
    let sub = Subgroup::generated_by(&b, &gens);
    let quo = Quotient::by_generators(&b, &gens);
    (sub.inclusion, quo.projection)
}

/// The two rings used by the random families: `Z/840`, over which every
/// group of order at most 8 is a module, and `(Z/2)[C_2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingChoice {
    Cyclic840,
    GroupRingC2,
}

impl RingChoice {
    pub const ALL: [RingChoice; 2] = [RingChoice::Cyclic840, RingChoice::GroupRingC2];

    pub fn ring(self) -> FiniteRing {
        match self {
            RingChoice::Cyclic840 => FiniteRing::cyclic(840).expect("Z/840"),
            RingChoice::GroupRingC2 => {
                FiniteRing::group_ring(2, &FinGroup::cyclic(2)).expect("(Z/2)[C2]")
            }
        }
    }

    pub fn pick(rng: &mut impl Rng) -> RingChoice {
        *Self::ALL.choose(rng).expect("nonempty")
    }
}

/// Modules of order at most `max_order` over `ring`.
///
/// Over `Z/m` these are all groups whose exponent divides `m`; over a group
/// ring `(Z/m)[G]` they are trivial modules, the regular module and sums of
/// the regular module with a trivial one.
pub fn module_catalogue(ring: &FiniteRing, side: Side, max_order: u64) -> Vec<FinModule> {
    let fits = |m: &FinModule| m.order() <= max_order as u128;
    match ring.as_group_ring() {
        None => {
            let m = ring.additive().exponent();
            groups_up_to(max_order)
                .into_iter()
                .filter(|g| m % g.exponent().max(1) == 0)
                .map(|g| FinModule::over_cyclic(ring, g, side).expect("exponent divides m"))
                .collect()
        }
        Some((m, _)) => {
            let trivials: Vec<FinModule> = groups_up_to(max_order)
                .into_iter()
                .filter(|g| m % g.exponent().max(1) == 0)
                .map(|g| FinModule::trivial_action(ring, g, side).expect("group ring"))
                .collect();
            let regular = FinModule::regular(ring, side);
            let mut out = trivials.clone();
            if fits(&regular) {
                out.push(regular.clone());
                for t in trivials.iter().filter(|t| !t.is_zero()) {
                    let s = ModuleSum::new(ring, side, &[regular.clone(), t.clone()])
                        .expect("same ring");
                    if fits(&s.module) {
                        out.push(s.module);
                    }
                }
            }
            out
        }
    }
}

pub fn random_module(
    rng: &mut impl Rng,
    ring: &FiniteRing,
    side: Side,
    max_order: u64,
) -> FinModule {
    module_catalogue(ring, side, max_order)
        .choose(rng)
        .expect("the zero module is listed")
        .clone()
}

/// A uniformly random module map.
pub fn random_mod_hom(
    rng: &mut impl Rng,
    source: &FinModule,
    target: &FinModule,
) -> Result<ModHom> {
    let homs = ModuleHomGroup::new(source, target)?;
    let x = random_element(rng, homs.group());
    Ok(homs.hom(&x))
}

/// `0 -> N -> M -> M/N -> 0` for a random module `M` and the submodule
/// generated by up to two random elements.
pub fn random_module_ses(
    rng: &mut impl Rng,
    ring: &FiniteRing,
    side: Side,
    max_order: u64,
) -> (ModHom, ModHom) {
    let m = random_module(rng, ring, side, max_order);
    let k = rng.gen_range(0..=2);
    let gens: Vec<Elem> = (0..k).map(|_| random_element(rng, m.group())).collect();
    let sub = Submodule::generated_by(&m, &gens);
    let quo = QuotientModule::by_generators(&m, &gens);
    (sub.inclusion, quo.projection)
}

/// A two-level chain `X_1 -> X_0` with `|X_1| <= max_points`.
pub fn random_chain(rng: &mut impl Rng, max_points: usize) -> LevelChain {
    let top = rng.gen_range(1..=max_points);
    let base = rng.gen_range(1..=top);
    let mut projection: Vec<usize> = (0..base)
        .chain((base..top).map(|_| rng.gen_range(0..base)))
        .collect();
    projection.shuffle(rng);
    LevelChain::two_level(base, projection).expect("every base point is hit")
}

fn random_fibres(
    rng: &mut impl Rng,
    ring: &FiniteRing,
    side: Side,
    chain: &LevelChain,
    max_order: u64,
) -> Vec<Vec<FinModule>> {
    (0..chain.num_levels())
        .map(|l| {
            (0..chain.size(l))
                .map(|_| random_module(rng, ring, side, max_order))
                .collect()
        })
        .collect()
}

/// Random fibres of order at most `max_order` over a random two-level chain
/// with random transitions.
pub fn random_etale(
    rng: &mut impl Rng,
    ring: &FiniteRing,
    max_points: usize,
    max_order: u64,
) -> Result<EtaleSystem> {
    let side = Side::Left;
    let chain = random_chain(rng, max_points);
    let fibres = random_fibres(rng, ring, side, &chain, max_order);
    let transitions = (0..chain.num_levels() - 1)
        .map(|i| {
            (0..chain.size(i + 1))
                .map(|x| {
                    let y = chain.projections()[i][x];
                    random_mod_hom(rng, &fibres[i][y], &fibres[i + 1][x])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    EtaleSystem::new(chain, ring.clone(), side, fibres, transitions)
}

/// Random fibres over a random two-level chain with random maps running
/// down the chain.
pub fn random_prosheaf(
    rng: &mut impl Rng,
    ring: &FiniteRing,
    max_points: usize,
    max_order: u64,
) -> Result<ProSheafSystem> {
    let side = Side::Left;
    let chain = random_chain(rng, max_points);
    let fibres = random_fibres(rng, ring, side, &chain, max_order);
    let maps = (0..chain.num_levels() - 1)
        .map(|i| {
            (0..chain.size(i + 1))
                .map(|x| {
                    let y = chain.projections()[i][x];
                    random_mod_hom(rng, &fibres[i + 1][x], &fibres[i][y])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ProSheafSystem::new(chain, ring.clone(), side, fibres, maps)
}

/// The shapes of random presheaf tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableShape {
    /// The product of random fibres, always a sheaf.
    Product,
    /// A product whose value on the whole level is replaced by zero.
    TopZero,
    /// One module on every nonempty set with identity restrictions.
    Constant,
    /// One module on every set, the empty set included.
    ConstantWithEmpty,
}

impl TableShape {
    pub const ALL: [TableShape; 4] = [
        TableShape::Product,
        TableShape::TopZero,
        TableShape::Constant,
        TableShape::ConstantWithEmpty,
    ];
}

fn table_from_values(
    chain: LevelChain,
    values: Vec<FinModule>,
    map: impl Fn(u32, u32) -> ModHom,
) -> Result<PresheafTable> {
    let n = chain.size(0);
    let mut res = BTreeMap::new();
    for v in 0u32..1 << n {
        for u in (0u32..1 << n).filter(|&u| u & !v == 0) {
            res.insert((v, u), map(v, u));
        }
    }
    PresheafTable::new(chain, 0, values, res)
}

/// A presheaf table of the given shape on `points` points whose values have
/// order at most `max_order`.
pub fn random_presheaf_table(
    rng: &mut impl Rng,
    ring: &FiniteRing,
    shape: TableShape,
    points: usize,
    max_order: u64,
) -> Result<PresheafTable> {
    let side = Side::Left;
    let chain = LevelChain::single(points);
    match shape {
        TableShape::Product | TableShape::TopZero => {
            // fibres small enough that the product stays within max_order
            let mut fibres = Vec::new();
            let mut budget = max_order;
            for _ in 0..points {
                let m = random_module(rng, ring, side, budget);
                budget /= m.order().max(1) as u64;
                fibres.push(m);
            }
            fibres.shuffle(rng);
            let e = EtaleSystem::single_level(ring, side, fibres)?;
            let p = sheaf_of_etale(&e, 0)?;
            if shape == TableShape::Product || points == 0 {
                return Ok(p);
            }
            let full = (1u32 << points) - 1;
            let zero = FinModule::zero(ring, side);
            let values: Vec<FinModule> = (0..=full)
                .map(|u| {
                    if u == full {
                        zero.clone()
                    } else {
                        p.value(u).clone()
                    }
                })
                .collect();
            table_from_values(chain, values.clone(), |v, u| {
                if v == full && u == full {
                    ModHom::identity(&zero)
                } else if v == full {
                    ModHom::zero(&zero, &values[u as usize])
                } else {
                    p.res(v, u).clone()
                }
            })
        }
        TableShape::Constant | TableShape::ConstantWithEmpty => {
            let m = random_module(rng, ring, side, max_order);
            let zero = FinModule::zero(ring, side);
            let keep_empty = shape == TableShape::ConstantWithEmpty;
            let values: Vec<FinModule> = (0u32..1 << points)
                .map(|u| {
                    if u == 0 && !keep_empty {
                        zero.clone()
                    } else {
                        m.clone()
                    }
                })
                .collect();
            table_from_values(chain, values.clone(), |v, u| {
                if u == 0 && !keep_empty {
                    ModHom::zero(&values[v as usize], &zero)
                } else {
                    ModHom::identity(&m)
                }
            })
        }
    }
}

/// A system `S` whose top fibres have total order at most `max_top`, a
/// target `P` with `|P| <= max_target` and fibrewise maps `β_x : M_x -> P`
/// from the top fibres. Systems over the budget are redrawn.
pub fn random_universal_triple(
    rng: &mut impl Rng,
    ring: &FiniteRing,
    max_points: usize,
    max_fibre: u64,
    max_top: u64,
    max_target: u64,
) -> Result<(ProSheafSystem, FinModule, Vec<AbHom>)> {
    let s = loop {
        let s = random_prosheaf(rng, ring, max_points, max_fibre)?;
        let top: u128 = s
            .fibres(s.chain().top())
            .iter()
            .map(FinModule::order)
            .product();
        if top <= max_top as u128 {
            break s;
        }
    };
    let p = random_module(rng, ring, s.side(), max_target);
    let top = s.chain().top();
    let beta = s
        .fibres(top)
        .iter()
        .map(|m| random_mod_hom(rng, m, &p).map(|f| f.map().clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok((s, p, beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_counts() {
        // number of abelian groups of each order 1..=16, summed
        let per_order = [1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5];
        assert_eq!(groups_up_to(16).len(), per_order.iter().sum::<usize>());
        assert_eq!(
            groups_up_to(64).iter().filter(|g| g.order() == 64).count(),
            11
        );
        assert_eq!(groups_up_to(1), vec![FinAbGroup::trivial()]);
    }

    #[test]
    fn random_homs_are_well_defined() {
        let mut rng = seeded(3);
        let groups = groups_up_to(12);
        for _ in 0..50 {
            let a = groups.choose(&mut rng).unwrap();
            let b = groups.choose(&mut rng).unwrap();
            let f = random_hom(&mut rng, a, b);
            assert!(AbHom::new(a.clone(), b.clone(), f.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn catalogues() {
        let zm = RingChoice::Cyclic840.ring();
        assert_eq!(
            module_catalogue(&zm, Side::Left, 8).len(),
            groups_up_to(8).len()
        );
        let gr = RingChoice::GroupRingC2.ring();
        let orders: Vec<u128> = module_catalogue(&gr, Side::Left, 8)
            .iter()
            .map(|m| m.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 4, 8, 4, 8]);
    }

    #[test]
    fn generators_are_reproducible() {
        let ring = RingChoice::Cyclic840.ring();
        let a = random_etale(&mut seeded(11), &ring, 3, 8).unwrap();
        let b = random_etale(&mut seeded(11), &ring, 3, 8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn table_shapes() {
        let ring = RingChoice::Cyclic840.ring();
        let mut rng = seeded(5);
        for shape in TableShape::ALL {
            for points in 0..=3 {
                let t = random_presheaf_table(&mut rng, &ring, shape, points, 8).unwrap();
                assert!(t.values().iter().all(|m| m.order() <= 8));
                if shape == TableShape::Product {
                    assert!(t.disjoint_union_check().holds);
                }
            }
        }
    }
}
