use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finab::AbHom;
use crate::ringmod::{FinModule, FiniteRing, ModHom, ModuleHomGroup, ModuleSum, Side};
use crate::sheafside::{
    check, is_subset, masks, points_of, NamedCheck, RoundtripReport, MAX_TABLE_POINTS,
};
use crate::stone::LevelChain;

use super::table::CosheafTable;

/// Fibre families over the levels of a chain with contravariant maps
/// `ψ : M^{i+1}_x -> M^i_{f(x)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProSheafSystem {
    chain: LevelChain,
    ring: FiniteRing,
    side: Side,
    fibres: Vec<Vec<FinModule>>,
    /// `maps[i][x]` for `x` in level `i + 1`.
    maps: Vec<Vec<ModHom>>,
}

impl ProSheafSystem {
    pub fn new(
        chain: LevelChain,
        ring: FiniteRing,
        side: Side,
        fibres: Vec<Vec<FinModule>>,
        maps: Vec<Vec<ModHom>>,
    ) -> Result<Self> {
        if fibres.len() != chain.num_levels() || maps.len() + 1 != chain.num_levels() {
            return Err(Error::InvalidTable(
                "fibre or map lists do not match the chain".into(),
            ));
        }
        for (l, fs) in fibres.iter().enumerate() {
            if fs.len() != chain.size(l) {
                return Err(Error::InvalidTable(format!(
                    "level {l} has {} fibres for {} points",
                    fs.len(),
                    chain.size(l)
                )));
            }
            if fs.iter().any(|m| m.ring() != &ring || m.side() != side) {
                return Err(Error::InvalidTable(format!(
                    "fibre at level {l} over a different ring or side"
                )));
            }
        }
        for (i, ms) in maps.iter().enumerate() {
            if ms.len() != chain.size(i + 1) {
                return Err(Error::InvalidTable(format!(
                    "level {} needs one fibre map per point",
                    i + 1
                )));
            }
            for (x, psi) in ms.iter().enumerate() {
                let y = chain.projections()[i][x];
                if psi.source() != &fibres[i + 1][x] || psi.target() != &fibres[i][y] {
                    return Err(Error::InvalidTable(format!(
                        "fibre map out of point {x} of level {} has the wrong fibres",
                        i + 1
                    )));
                }
            }
        }
        Ok(ProSheafSystem {
            chain,
            ring,
            side,
            fibres,
            maps,
        })
    }

    pub fn single_level(ring: &FiniteRing, side: Side, fibres: Vec<FinModule>) -> Result<Self> {
        let chain = LevelChain::single(fibres.len());
        Self::new(chain, ring.clone(), side, vec![fibres], Vec::new())
    }

    pub fn chain(&self) -> &LevelChain {
        &self.chain
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn fibre(&self, level: usize, x: usize) -> &FinModule {
        &self.fibres[level][x]
    }

    pub fn fibres(&self, level: usize) -> &[FinModule] {
        &self.fibres[level]
    }

    /// `ψ : M^{level+1}_x -> M^level_{f(x)}`.
    pub fn fibre_map(&self, level: usize, x: usize) -> &ModHom {
        &self.maps[level][x]
    }

    /// Composite `M^j_x -> M^i_{π x}` for `x ∈ X_j`, `i <= j`.
    pub fn composite(&self, i: usize, j: usize, x: usize) -> ModHom {
        assert!(i <= j);
        if i == j {
            return ModHom::identity(self.fibre(j, x));
        }
        let y = self.chain.projections()[j - 1][x];
        self.composite(i, j - 1, y)
            .compose(&self.maps[j - 1][x])
            .expect("composable")
    }
}

/// `CoShf(S)` at one level: `M(U) = ⊕_{x∈U} M^i_x` with coordinate
/// inclusions as corestrictions.
pub fn coshf_of_prosheaf(s: &ProSheafSystem, level: usize) -> Result<CosheafTable> {
    s.chain.check_level(level)?;
    let n = s.chain.size(level);
    if n > MAX_TABLE_POINTS {
        return Err(Error::SizeCap(format!(
            "level {level} has {n} points; tables need at most {MAX_TABLE_POINTS}"
        )));
    }
    let sums: Vec<ModuleSum> = masks(n)
        .map(|u| {
            let pieces: Vec<FinModule> = points_of(u)
                .iter()
                .map(|&x| s.fibre(level, x).clone())
                .collect();
            ModuleSum::new(&s.ring, s.side, &pieces)
        })
        .collect::<Result<_>>()?;
    let mut cors = BTreeMap::new();
    for v in masks(n) {
        let vp = points_of(v);
        for u in masks(n).filter(|&u| is_subset(u, v)) {
            let up = points_of(u);
            let c = sums[u as usize].assemble_to(&sums[v as usize], |t, src| {
                (vp[t] == up[src]).then(|| ModHom::identity(s.fibre(level, vp[t])))
            })?;
            cors.insert((v, u), c);
        }
    }
    let values = sums.into_iter().map(|m| m.module).collect();
    CosheafTable::new(s.chain.clone(), level, values, cors)
}

/// `CoÉtale(C)`: stalks `M({x})` at the table's level; below it the fibre
/// over `y` is the value on the preimage of `y`, above it the stalk is
/// carried up by identities. Fibre maps are corestrictions.
pub fn coetale_of_cosheaf(c: &CosheafTable) -> Result<ProSheafSystem> {
    c.require_cosheaf()?;
    let chain = c.chain().clone();
    let top = c.level();
    let pre = |j: usize, y: usize| -> u32 {
        if j <= top {
            chain.fibre(y, j, top).iter().fold(0, |m, &x| m | 1 << x)
        } else {
            1 << chain.project(y, j, top)
        }
    };
    let fibres: Vec<Vec<FinModule>> = (0..chain.num_levels())
        .map(|j| {
            (0..chain.size(j))
                .map(|y| c.value(pre(j, y)).clone())
                .collect()
        })
        .collect();
    let maps: Vec<Vec<ModHom>> = (0..chain.num_levels() - 1)
        .map(|i| {
            (0..chain.size(i + 1))
                .map(|x| {
                    let y = chain.projections()[i][x];
                    c.cor(pre(i, y), pre(i + 1, x)).clone()
                })
                .collect()
        })
        .collect();
    ProSheafSystem::new(chain, c.ring().clone(), c.side(), fibres, maps)
}

/// A chain of modules read downwards: `maps[i] : levels[i + 1] -> levels[i]`.
/// The value is the top entry, from which every lower level is reached by
/// composing the connecting maps.
#[derive(Clone, Debug)]
pub struct ProChainModule {
    pub levels: Vec<ModuleSum>,
    pub maps: Vec<ModHom>,
}

impl ProChainModule {
    pub fn value(&self) -> &FinModule {
        &self.levels.last().expect("at least one level").module
    }

    pub fn level(&self, i: usize) -> &FinModule {
        &self.levels[i].module
    }
}

/// `ω`: one map from each top fibre into the direct sum.
#[derive(Clone, Debug)]
pub struct CanonicalMorphism {
    pub components: Vec<ModHom>,
}

impl CanonicalMorphism {
    pub fn is_fibrewise_injective(&self) -> bool {
        self.components.iter().all(|w| w.kernel().module.is_zero())
    }

    /// Whether the images of the fibres generate the sum.
    pub fn is_jointly_surjective(&self, sum: &ModuleSum) -> Result<bool> {
        Ok(sum
            .map_out(&sum.module, &self.components)?
            .map()
            .is_surjective())
    }
}

/// `⊞S` level by level with connecting maps summing `ψ` over fibres, and
/// `ω` given by the coordinate injections at the top.
pub fn profinite_direct_sum(s: &ProSheafSystem) -> Result<(ProChainModule, CanonicalMorphism)> {
    let levels: Vec<ModuleSum> = (0..s.chain.num_levels())
        .map(|l| ModuleSum::new(&s.ring, s.side, s.fibres(l)))
        .collect::<Result<_>>()?;
    let maps = (0..s.chain.num_levels() - 1)
        .map(|i| {
            levels[i + 1].assemble_to(&levels[i], |y, x| {
                (s.chain.projections()[i][x] == y).then(|| s.fibre_map(i, x).clone())
            })
        })
        .collect::<Result<_>>()?;
    let top = levels.last().expect("at least one level");
    let components = top.injections.clone();
    Ok((
        ProChainModule { levels, maps },
        CanonicalMorphism { components },
    ))
}

/// Largest hom group searched exhaustively for uniqueness.
pub const UNIQUENESS_SEARCH_LIMIT: u128 = 1 << 16;

#[derive(Clone, Debug)]
pub struct UniversalVerdict {
    pub holds: bool,
    pub factorization: ModHom,
    /// Whether the images of `ω` generate the sum, so two factorizations
    /// agreeing on them agree everywhere.
    pub unique_algebraic: bool,
    /// Number of maps `⊞S -> P` satisfying `β̃∘ω = β`, when searched.
    pub exhaustive_count: Option<u128>,
}

/// Factors the fibrewise maps `beta[x] : M^top_x -> P` through `ω`.
pub fn universal_property_check(
    s: &ProSheafSystem,
    p: &FinModule,
    beta: &[AbHom],
) -> Result<UniversalVerdict> {
    let top = s.chain.top();
    if beta.len() != s.chain.size(top) {
        return Err(Error::Shape(format!(
            "{} maps for {} top fibres",
            beta.len(),
            s.chain.size(top)
        )));
    }
    if p.ring() != &s.ring || p.side() != s.side {
        return Err(Error::Mismatch(
            "target module over a different ring or side".into(),
        ));
    }
    let beta: Vec<ModHom> = beta
        .iter()
        .enumerate()
        .map(|(x, b)| {
            ModHom::new(s.fibre(top, x).clone(), p.clone(), b.clone())
                .map_err(|e| Error::NotLinear(format!("β at fibre {x}: {e}")))
        })
        .collect::<Result<_>>()?;
    let (sum, omega) = profinite_direct_sum(s)?;
    let level = sum.levels.last().expect("at least one level");
    let factorization = level.map_out(p, &beta)?;
    let commutes = omega
        .components
        .iter()
        .zip(&beta)
        .all(|(w, b)| factorization.compose(w).map(|c| &c == b).unwrap_or(false));
    let unique_algebraic = omega.is_jointly_surjective(level)?;
    let homs = ModuleHomGroup::new(&level.module, p)?;
    let exhaustive_count = (homs.order() <= UNIQUENESS_SEARCH_LIMIT).then(|| {
        homs.all()
            .filter(|f| {
                omega
                    .components
                    .iter()
                    .zip(&beta)
                    .all(|(w, b)| f.compose(w).map(|c| &c == b).unwrap_or(false))
            })
            .count() as u128
    });
    Ok(UniversalVerdict {
        holds: commutes && unique_algebraic && exhaustive_count.is_none_or(|c| c == 1),
        factorization,
        unique_algebraic,
        exhaustive_count,
    })
}

/// `CoÉtale ∘ CoShf ≅ id` for a system: at each tabulated level the stalks
/// are the fibres, and `Θ : CoÉtale(CoShf(S, top)) -> S`, summing the
/// composite fibre maps over each fibre, is a morphism and an isomorphism
/// at the top.
pub fn roundtrip_prosheaf(s: &ProSheafSystem) -> Result<RoundtripReport> {
    let mut checks: Vec<NamedCheck> = Vec::new();
    let top = s.chain.top();
    for level in 0..s.chain.num_levels() {
        if s.chain.size(level) > MAX_TABLE_POINTS {
            continue;
        }
        let back = coetale_of_cosheaf(&coshf_of_prosheaf(s, level)?)?;
        for x in 0..s.chain.size(level) {
            let stalk = back.fibre(level, x);
            let sum = ModuleSum::new(&s.ring, s.side, &[s.fibre(level, x).clone()])?;
            let ok = stalk == &sum.module
                && ModHom::new(
                    s.fibre(level, x).clone(),
                    stalk.clone(),
                    sum.injections[0].map().clone(),
                )
                .map(|f| f.is_bijective())
                .unwrap_or(false);
            checks.push(check(format!("stalk_iso/level{level}/point{x}"), ok));
        }
    }
    if s.chain.size(top) <= MAX_TABLE_POINTS {
        let back = coetale_of_cosheaf(&coshf_of_prosheaf(s, top)?)?;
        let theta = |j: usize, y: usize| -> Result<ModHom> {
            let over = s.chain.fibre(y, j, top);
            let sum = ModuleSum::new(
                &s.ring,
                s.side,
                &over
                    .iter()
                    .map(|&x| s.fibre(top, x).clone())
                    .collect::<Vec<_>>(),
            )?;
            let parts: Vec<ModHom> = over.iter().map(|&x| s.composite(j, top, x)).collect();
            let m = sum.map_out(s.fibre(j, y), &parts)?;
            ModHom::new(
                back.fibre(j, y).clone(),
                s.fibre(j, y).clone(),
                m.map().clone(),
            )
        };
        for j in 0..s.chain.num_levels() {
            for y in 0..s.chain.size(j) {
                let ok = match (theta(j, y), j == top) {
                    (Ok(t), true) => t.is_bijective(),
                    (Ok(_), false) => true,
                    (Err(_), _) => false,
                };
                checks.push(check(format!("theta/level{j}/point{y}"), ok));
            }
        }
        for i in 0..top {
            for x in 0..s.chain.size(i + 1) {
                let y = s.chain.projections()[i][x];
                let ok = match (theta(i, y), theta(i + 1, x)) {
                    (Ok(a), Ok(b)) => {
                        s.fibre_map(i, x).compose(&b)? == a.compose(back.fibre_map(i, x))?
                    }
                    _ => false,
                };
                checks.push(check(
                    format!("theta_naturality/level{}/point{x}", i + 1),
                    ok,
                ));
            }
        }
    }
    Ok(RoundtripReport::from_checks(checks))
}

/// `CoShf ∘ CoÉtale ≅ id` for a cosheaf table: the map
/// `𝖩_U : ⊕_{x∈U} M({x}) -> M(U)` assembled from corestrictions must be
/// bijective and commute with every corestriction.
pub fn roundtrip_cosheaf(c: &CosheafTable) -> Result<RoundtripReport> {
    let e = coetale_of_cosheaf(c)?;
    let q = coshf_of_prosheaf(&e, c.level())?;
    let n = c.num_points();
    let j_map = |u: u32| -> Result<ModHom> {
        let pts = points_of(u);
        let pieces: Vec<FinModule> = pts.iter().map(|&x| c.value(1 << x).clone()).collect();
        let sum = ModuleSum::new(c.ring(), c.side(), &pieces)?;
        let parts: Vec<ModHom> = pts.iter().map(|&x| c.cor(u, 1 << x).clone()).collect();
        let m = sum.map_out(c.value(u), &parts)?;
        ModHom::new(q.value(u).clone(), c.value(u).clone(), m.map().clone())
    };
    let js: Vec<Result<ModHom>> = masks(n).map(j_map).collect();
    let mut checks = Vec::new();
    for u in masks(n) {
        let ok = js[u as usize]
            .as_ref()
            .map(|j| j.is_bijective())
            .unwrap_or(false);
        checks.push(check(format!("j_iso/{u:0w$b}", w = n.max(1)), ok));
    }
    for v in masks(n) {
        for u in masks(n).filter(|&u| is_subset(u, v) && u != v) {
            let ok = match (&js[v as usize], &js[u as usize]) {
                (Ok(jv), Ok(ju)) => c.cor(v, u).compose(ju)? == jv.compose(q.cor(v, u))?,
                _ => false,
            };
            checks.push(check(
                format!("j_naturality/{u:0w$b}<{v:0w$b}", w = n.max(1)),
                ok,
            ));
        }
    }
    Ok(RoundtripReport::from_checks(checks))
}

/// Input to [`roundtrip_check_co`].
#[derive(Clone, Copy, Debug)]
pub enum CoInput<'a> {
    Table(&'a CosheafTable),
    System(&'a ProSheafSystem),
}

pub fn roundtrip_check_co(input: CoInput<'_>) -> Result<RoundtripReport> {
    match input {
        CoInput::Table(c) => roundtrip_cosheaf(c),
        CoInput::System(s) => roundtrip_prosheaf(s),
    }
}

/// Summary of `ω` for reports.
#[derive(Clone, Debug, Serialize)]
pub struct DirectSumSummary {
    pub level_orders: Vec<u128>,
    pub fibre_orders: Vec<u128>,
    pub omega_injective: bool,
    pub omega_jointly_surjective: bool,
}

pub fn direct_sum_summary(s: &ProSheafSystem) -> Result<DirectSumSummary> {
    let (sum, omega) = profinite_direct_sum(s)?;
    Ok(DirectSumSummary {
        level_orders: sum.levels.iter().map(|l| l.module.order()).collect(),
        fibre_orders: s.fibres(s.chain.top()).iter().map(|m| m.order()).collect(),
        omega_injective: omega.is_fibrewise_injective(),
        omega_jointly_surjective: omega.is_jointly_surjective(sum.levels.last().expect("level"))?,
    })
}
