use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finab::Elem;
use crate::ringmod::{FinModule, FiniteRing, FunctorTag, FunctorValue, ModHom, ModuleSum, Side};
use crate::stone::LevelChain;

use super::table::{is_subset, masks, points_of, PresheafTable, MAX_TABLE_POINTS};

/// Fibre families over the levels of a chain with covariant transitions
/// `φ : A^i_{f(x)} -> A^{i+1}_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleSystem {
    chain: LevelChain,
    ring: FiniteRing,
    side: Side,
    fibres: Vec<Vec<FinModule>>,
    /// `transitions[i][x]` for `x` in level `i + 1`.
    transitions: Vec<Vec<ModHom>>,
}

impl EtaleSystem {
    pub fn new(
        chain: LevelChain,
        ring: FiniteRing,
        side: Side,
        fibres: Vec<Vec<FinModule>>,
        transitions: Vec<Vec<ModHom>>,
    ) -> Result<Self> {
        if fibres.len() != chain.num_levels() || transitions.len() + 1 != chain.num_levels() {
            return Err(Error::InvalidTable(
                "fibre or transition lists do not match the chain".into(),
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
        for (i, ts) in transitions.iter().enumerate() {
            if ts.len() != chain.size(i + 1) {
                return Err(Error::InvalidTable(format!(
                    "level {} needs one transition per point",
                    i + 1
                )));
            }
            for (x, t) in ts.iter().enumerate() {
                let y = chain.projections()[i][x];
                if t.source() != &fibres[i][y] || t.target() != &fibres[i + 1][x] {
                    return Err(Error::InvalidTable(format!(
                        "transition into point {x} of level {} has the wrong fibres",
                        i + 1
                    )));
                }
            }
        }
        Ok(EtaleSystem {
            chain,
            ring,
            side,
            fibres,
            transitions,
        })
    }

    /// Fibres over a discrete space (one level).
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

    /// `φ : A^level_{f(x)} -> A^{level+1}_x`.
    pub fn transition(&self, level: usize, x: usize) -> &ModHom {
        &self.transitions[level][x]
    }

    /// Composite transition `A^i_{π x} -> A^j_x` for `x ∈ X_j`, `i <= j`.
    pub fn composite(&self, i: usize, j: usize, x: usize) -> ModHom {
        assert!(i <= j);
        if i == j {
            return ModHom::identity(self.fibre(j, x));
        }
        let y = self.chain.projections()[j - 1][x];
        let below = self.composite(i, j - 1, y);
        self.transitions[j - 1][x]
            .compose(&below)
            .expect("composable")
    }
}

/// `Shf(E)` at one level: `A(U) = ∏_{x∈U} A^i_x` with coordinate projections.
pub fn sheaf_of_etale(e: &EtaleSystem, level: usize) -> Result<PresheafTable> {
    e.chain.check_level(level)?;
    let n = e.chain.size(level);
    if n > MAX_TABLE_POINTS {
        return Err(Error::SizeCap(format!(
            "level {level} has {n} points; tables need at most {MAX_TABLE_POINTS}"
        )));
    }
    let sums: Vec<ModuleSum> = masks(n)
        .map(|u| {
            let pieces: Vec<FinModule> = points_of(u)
                .iter()
                .map(|&x| e.fibre(level, x).clone())
                .collect();
            ModuleSum::new(&e.ring, e.side, &pieces)
        })
        .collect::<Result<_>>()?;
    let mut res = BTreeMap::new();
    for v in masks(n) {
        let vp = points_of(v);
        for u in masks(n).filter(|&u| is_subset(u, v)) {
            let up = points_of(u);
            let r = sums[v as usize].assemble_to(&sums[u as usize], |t, s| {
                (up[t] == vp[s]).then(|| ModHom::identity(e.fibre(level, up[t])))
            })?;
            res.insert((v, u), r);
        }
    }
    let values = sums.into_iter().map(|s| s.module).collect();
    PresheafTable::new(e.chain.clone(), level, values, res)
}

/// `Étale(P)`: stalks `A({x})` at the table's level; below it the fibre
/// over `y` is the value on the preimage of `y`, above it the stalk is
/// carried up by identities.
pub fn etale_of_sheaf(p: &PresheafTable) -> Result<EtaleSystem> {
    p.require_sheaf()?;
    let chain = p.chain().clone();
    let top = p.level();
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
                .map(|y| p.value(pre(j, y)).clone())
                .collect()
        })
        .collect();
    let transitions: Vec<Vec<ModHom>> = (0..chain.num_levels() - 1)
        .map(|i| {
            (0..chain.size(i + 1))
                .map(|x| {
                    let y = chain.projections()[i][x];
                    p.res(pre(i, y), pre(i + 1, x)).clone()
                })
                .collect()
        })
        .collect();
    EtaleSystem::new(chain, p.ring().clone(), p.side(), fibres, transitions)
}

/// One named check inside a round-trip report.
#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub holds: bool,
    pub checks: Vec<NamedCheck>,
}

impl RoundtripReport {
    pub(crate) fn from_checks(checks: Vec<NamedCheck>) -> Self {
        RoundtripReport {
            holds: checks.iter().all(|c| c.holds),
            checks,
        }
    }
}

pub(crate) fn check(name: impl Into<String>, holds: bool) -> NamedCheck {
    NamedCheck {
        name: name.into(),
        holds,
    }
}

/// `Étale ∘ Shf ≅ id` for an étale system.
///
/// At every tabulated level the stalks of `Shf(E)` are identified with the
/// fibres by evaluation. Over the whole chain, the map
/// `Θ : E -> Étale(Shf(E, top))`, `a ↦ (φ(a)_x)_{x over y}`, must be a
/// morphism (commuting with all transitions) that is an isomorphism at the
/// top level.
pub fn roundtrip_etale(e: &EtaleSystem) -> Result<RoundtripReport> {
    let mut checks = Vec::new();
    let top = e.chain.top();
    for level in 0..e.chain.num_levels() {
        if e.chain.size(level) > MAX_TABLE_POINTS {
            continue;
        }
        let p = sheaf_of_etale(e, level)?;
        let back = etale_of_sheaf(&p)?;
        for x in 0..e.chain.size(level) {
            let stalk = back.fibre(level, x);
            let sum = ModuleSum::new(&e.ring, e.side, &[e.fibre(level, x).clone()])?;
            let ok = stalk == &sum.module
                && ModHom::new(
                    stalk.clone(),
                    e.fibre(level, x).clone(),
                    sum.projections[0].map().clone(),
                )
                .map(|f| f.is_bijective())
                .unwrap_or(false);
            checks.push(check(format!("stalk_iso/level{level}/point{x}"), ok));
        }
    }
    if e.chain.size(top) <= MAX_TABLE_POINTS {
        let back = etale_of_sheaf(&sheaf_of_etale(e, top)?)?;
        let theta = |j: usize, y: usize| -> Result<ModHom> {
            let over = e.chain.fibre(y, j, top);
            let target = back.fibre(j, y);
            let sum = ModuleSum::new(
                &e.ring,
                e.side,
                &over
                    .iter()
                    .map(|&x| e.fibre(top, x).clone())
                    .collect::<Vec<_>>(),
            )?;
            let parts: Vec<ModHom> = over.iter().map(|&x| e.composite(j, top, x)).collect();
            let m = sum.map_into(e.fibre(j, y), &parts)?;
            ModHom::new(e.fibre(j, y).clone(), target.clone(), m.map().clone())
        };
        for j in 0..e.chain.num_levels() {
            for y in 0..e.chain.size(j) {
                let th = theta(j, y);
                let ok = match (&th, j == top) {
                    (Ok(t), true) => t.is_bijective(),
                    (Ok(_), false) => true,
                    (Err(_), _) => false,
                };
                checks.push(check(format!("theta/level{j}/point{y}"), ok));
            }
        }
        for i in 0..top {
            for x in 0..e.chain.size(i + 1) {
                let y = e.chain.projections()[i][x];
                let ok = match (theta(i, y), theta(i + 1, x)) {
                    (Ok(a), Ok(b)) => {
                        let left = b.compose(e.transition(i, x))?;
                        let right = back.transition(i, x).compose(&a)?;
                        left == right
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

/// `Shf ∘ Étale ≅ id` for a sheaf table: `𝖩_U(a) = (a|_{x})_{x∈U}` must
/// be bijective and commute with every restriction.
pub fn roundtrip_sheaf(p: &PresheafTable) -> Result<RoundtripReport> {
    let e = etale_of_sheaf(p)?;
    let q = sheaf_of_etale(&e, p.level())?;
    let n = p.num_points();
    let j_map = |u: u32| -> Result<ModHom> {
        let pts = points_of(u);
        let pieces: Vec<FinModule> = pts.iter().map(|&x| p.value(1 << x).clone()).collect();
        let sum = ModuleSum::new(p.ring(), p.side(), &pieces)?;
        let parts: Vec<ModHom> = pts.iter().map(|&x| p.res(u, 1 << x).clone()).collect();
        let m = sum.map_into(p.value(u), &parts)?;
        ModHom::new(p.value(u).clone(), q.value(u).clone(), m.map().clone())
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
                (Ok(jv), Ok(ju)) => ju.compose(p.res(v, u))? == q.res(v, u).compose(jv)?,
                _ => false,
            };
            checks.push(check(
                format!("j_naturality/{v:0w$b}>{u:0w$b}", w = n.max(1)),
                ok,
            ));
        }
    }
    Ok(RoundtripReport::from_checks(checks))
}

/// A chain of modules with connecting maps; its value is the last entry.
#[derive(Clone, Debug)]
pub struct DiscreteChainModule {
    pub levels: Vec<ModuleSum>,
    /// `maps[i] : levels[i] -> levels[i + 1]`.
    pub maps: Vec<ModHom>,
}

impl DiscreteChainModule {
    pub fn value(&self) -> &FinModule {
        &self.levels.last().expect("at least one level").module
    }

    pub fn level(&self, i: usize) -> &FinModule {
        &self.levels[i].module
    }
}

/// Global sections: `∏_{x∈X_i} A^i_x` per level, with chain maps
/// `s ↦ (x ↦ φ(s(f x)))`.
pub fn global_sections(e: &EtaleSystem) -> Result<DiscreteChainModule> {
    let levels: Vec<ModuleSum> = (0..e.chain.num_levels())
        .map(|l| ModuleSum::new(&e.ring, e.side, e.fibres(l)))
        .collect::<Result<_>>()?;
    let maps = (0..e.chain.num_levels() - 1)
        .map(|i| {
            levels[i].assemble_to(&levels[i + 1], |x, y| {
                (e.chain.projections()[i][x] == y).then(|| e.transition(i, x).clone())
            })
        })
        .collect::<Result<_>>()?;
    Ok(DiscreteChainModule { levels, maps })
}

/// A section over one level: one element of each fibre.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionValue {
    pub level: usize,
    pub values: Vec<Elem>,
}

impl SectionValue {
    /// The section as an element of the level's product module.
    pub fn to_element(&self, sections: &DiscreteChainModule) -> Elem {
        sections.levels[self.level].pack(&self.values)
    }
}

/// The global section agreeing with every assignment and zero elsewhere.
pub fn section_through_points(
    e: &EtaleSystem,
    level: usize,
    assignments: &[(usize, Elem)],
) -> Result<SectionValue> {
    e.chain.check_level(level)?;
    let mut values: Vec<Option<Elem>> = vec![None; e.chain.size(level)];
    for (x, a) in assignments {
        let slot = values
            .get_mut(*x)
            .ok_or_else(|| Error::BadLevel(format!("point {x} is not in level {level}")))?;
        if slot.is_some() {
            return Err(Error::DuplicatePoint(*x));
        }
        if !e.fibre(level, *x).group().contains(a) {
            return Err(Error::Shape(format!(
                "{a:?} is not an element of the fibre at {x}"
            )));
        }
        *slot = Some(a.clone());
    }
    Ok(SectionValue {
        level,
        values: values
            .into_iter()
            .enumerate()
            .map(|(x, v)| v.unwrap_or_else(|| e.fibre(level, x).group().zero()))
            .collect(),
    })
}

/// A functor applied fibrewise, with the canonical comparison maps
/// `F(∏ A_x) -> ∏ F(A_x)` at every level.
#[derive(Clone, Debug)]
pub struct LiftedSheaf {
    pub tag: FunctorTag,
    pub system: EtaleSystem,
    pub canonical: Vec<ModHom>,
    pub report: RoundtripReport,
}

pub fn lift_functor_sheaf(tag: FunctorTag, e: &EtaleSystem) -> Result<LiftedSheaf> {
    let values: Vec<Vec<FunctorValue>> = (0..e.chain.num_levels())
        .map(|l| {
            e.fibres(l)
                .iter()
                .map(|m| tag.apply(m))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let fibres: Vec<Vec<FinModule>> = values
        .iter()
        .map(|vs| vs.iter().map(|v| v.module().clone()).collect())
        .collect();
    let transitions = (0..e.chain.num_levels() - 1)
        .map(|i| {
            (0..e.chain.size(i + 1))
                .map(|x| {
                    let y = e.chain.projections()[i][x];
                    tag.apply_hom_between(e.transition(i, x), &values[i][y], &values[i + 1][x])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let system = EtaleSystem::new(e.chain.clone(), e.ring.clone(), e.side, fibres, transitions)?;
    let plain = global_sections(e)?;
    let lifted = global_sections(&system)?;
    let applied: Vec<FunctorValue> = plain
        .levels
        .iter()
        .map(|s| tag.apply(&s.module))
        .collect::<Result<_>>()?;
    let mut canonical = Vec::new();
    let mut checks = Vec::new();
    for (l, sum) in plain.levels.iter().enumerate() {
        let parts = sum
            .projections
            .iter()
            .enumerate()
            .map(|(x, pr)| tag.apply_hom_between(pr, &applied[l], &values[l][x]))
            .collect::<Result<Vec<_>>>()?;
        let c = lifted.levels[l].map_into(applied[l].module(), &parts)?;
        checks.push(check(format!("canonical_iso/level{l}"), c.is_bijective()));
        canonical.push(c);
    }
    for i in 0..plain.maps.len() {
        let f_chain = tag.apply_hom_between(&plain.maps[i], &applied[i], &applied[i + 1])?;
        let ok = canonical[i + 1].compose(&f_chain)? == lifted.maps[i].compose(&canonical[i])?;
        checks.push(check(format!("canonical_naturality/level{}", i + 1), ok));
    }
    Ok(LiftedSheaf {
        tag,
        system,
        canonical,
        report: RoundtripReport::from_checks(checks),
    })
}
