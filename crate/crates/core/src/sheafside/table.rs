use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finab::{check_exact, ExactnessVerdict};
use crate::ringmod::{FinModule, FiniteRing, ModHom, ModuleSum, Side};
use crate::stone::{Clopen, LevelChain};

/// Presheaf and cosheaf tables are stored for levels of at most this size.
pub const MAX_TABLE_POINTS: usize = 4;

/// Subsets of `{0..n}` as bit masks.
pub(crate) fn masks(n: usize) -> impl Iterator<Item = u32> {
    0u32..(1 << n)
}

pub(crate) fn is_subset(u: u32, v: u32) -> bool {
    u & !v == 0
}

pub(crate) fn points_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&x| mask >> x & 1 == 1).collect()
}

pub(crate) fn clopen_of(level: usize, mask: u32) -> Clopen {
    Clopen {
        level,
        points: points_of(mask).into_iter().collect(),
    }
}

/// All partitions of `mask` into nonempty blocks; the empty set has one
/// partition with no blocks.
pub(crate) fn partitions(mask: u32) -> Vec<Vec<u32>> {
    if mask == 0 {
        return vec![Vec::new()];
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut out = Vec::new();
    // blocks containing the lowest point: low | any subset of rest
    let mut sub = rest;
    loop {
        let block = low | sub;
        for mut p in partitions(rest & !sub) {
            p.insert(0, block);
            out.push(p);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// Families of distinct clopens used as covers when checking the gluing
/// condition "for all covers": every family for at most three points,
/// families of at most three sets for four points.
pub(crate) fn cover_families(n: usize) -> Vec<Vec<u32>> {
    let sets: Vec<u32> = masks(n).collect();
    if n <= 3 {
        (0u32..1 << sets.len())
            .map(|fam| {
                (0..sets.len())
                    .filter(|&k| fam >> k & 1 == 1)
                    .map(|k| sets[k])
                    .collect()
            })
            .collect()
    } else {
        let mut out = vec![Vec::new()];
        for a in 0..sets.len() {
            out.push(vec![sets[a]]);
            for b in a + 1..sets.len() {
                out.push(vec![sets[a], sets[b]]);
                for c in b + 1..sets.len() {
                    out.push(vec![sets[a], sets[b], sets[c]]);
                }
            }
        }
        out
    }
}

/// A presheaf of modules on the clopens of one level of a chain, with a
/// restriction map `res_U^V : A(V) -> A(U)` for every `U ⊆ V`.
#[derive(Clone, Debug)]
pub struct PresheafTable {
    chain: LevelChain,
    level: usize,
    ring: FiniteRing,
    side: Side,
    values: Vec<FinModule>,
    restrictions: BTreeMap<(u32, u32), ModHom>,
}

impl PresheafTable {
    /// Validates a full table: `values[mask]` is `A(U)` and
    /// `restrictions[(v, u)]` is `res_U^V` for every `U ⊆ V`.
    pub fn new(
        chain: LevelChain,
        level: usize,
        values: Vec<FinModule>,
        restrictions: BTreeMap<(u32, u32), ModHom>,
    ) -> Result<Self> {
        chain.check_level(level)?;
        let n = chain.size(level);
        if n > MAX_TABLE_POINTS {
            return Err(Error::SizeCap(format!(
                "tables are stored for at most {MAX_TABLE_POINTS} points, level {level} has {n}"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidTable(format!(
                "{} values for {} clopens",
                values.len(),
                1 << n
            )));
        }
        let ring = values[0].ring().clone();
        let side = values[0].side();
        if values.iter().any(|m| m.ring() != &ring || m.side() != side) {
            return Err(Error::InvalidTable(
                "values over different rings or sides".into(),
            ));
        }
        for v in masks(n) {
            for u in masks(n).filter(|&u| is_subset(u, v)) {
                let r = restrictions.get(&(v, u)).ok_or_else(|| {
                    Error::InvalidTable(format!("missing restriction {u:#b} ⊆ {v:#b}"))
                })?;
                if r.source() != &values[v as usize] || r.target() != &values[u as usize] {
                    return Err(Error::InvalidTable(format!(
                        "restriction {u:#b} ⊆ {v:#b} has the wrong modules"
                    )));
                }
            }
            if restrictions[&(v, v)] != ModHom::identity(&values[v as usize]) {
                return Err(Error::InvalidTable(format!(
                    "restriction to {v:#b} itself is not the identity"
                )));
            }
        }
        let table = PresheafTable {
            chain,
            level,
            ring,
            side,
            values,
            restrictions,
        };
        table.check_functorial()?;
        Ok(table)
    }

    /// Builds the table from the restrictions that remove one point,
    /// `elementary[(v, x)] = res_{V∖x}^V`, composing along increasing points.
    pub fn from_elementary(
        chain: LevelChain,
        level: usize,
        values: Vec<FinModule>,
        elementary: &BTreeMap<(u32, usize), ModHom>,
    ) -> Result<Self> {
        chain.check_level(level)?;
        let n = chain.size(level);
        if n > MAX_TABLE_POINTS || values.len() != 1 << n {
            return Err(Error::InvalidTable(
                "wrong number of values for the level".into(),
            ));
        }
        let mut restrictions = BTreeMap::new();
        for v in masks(n) {
            for u in masks(n).filter(|&u| is_subset(u, v)) {
                let mut cur = ModHom::identity(&values[v as usize]);
                let mut set = v;
                for x in points_of(v & !u) {
                    let step = elementary.get(&(set, x)).ok_or_else(|| {
                        Error::InvalidTable(format!(
                            "missing restriction removing {x} from {set:#b}"
                        ))
                    })?;
                    cur = step.compose(&cur)?;
                    set &= !(1 << x);
                }
                restrictions.insert((v, u), cur);
            }
        }
        Self::new(chain, level, values, restrictions)
    }

    fn check_functorial(&self) -> Result<()> {
        let n = self.num_points();
        for w in masks(n) {
            for v in masks(n).filter(|&v| is_subset(v, w)) {
                for u in masks(n).filter(|&u| is_subset(u, v)) {
                    let c = self.res(v, u).compose(self.res(w, v))?;
                    if &c != self.res(w, u) {
                        return Err(Error::InvalidTable(format!(
                            "restrictions {w:#b} -> {v:#b} -> {u:#b} do not compose"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn chain(&self) -> &LevelChain {
        &self.chain
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn num_points(&self) -> usize {
        self.chain.size(self.level)
    }

    pub fn value(&self, mask: u32) -> &FinModule {
        &self.values[mask as usize]
    }

    pub fn value_at(&self, u: &Clopen) -> &FinModule {
        self.value(u.mask())
    }

    /// `res_U^V`.
    pub fn res(&self, v: u32, u: u32) -> &ModHom {
        &self.restrictions[&(v, u)]
    }

    pub fn values(&self) -> &[FinModule] {
        &self.values
    }

    pub fn restrictions(&self) -> &BTreeMap<(u32, u32), ModHom> {
        &self.restrictions
    }

    fn check_cover(&self, cover: &[Clopen]) -> Result<Vec<u32>> {
        cover
            .iter()
            .map(|c| {
                if c.level != self.level {
                    Err(Error::BadLevel(format!(
                        "cover set at level {} for a table at level {}",
                        c.level, self.level
                    )))
                } else if c.points.iter().any(|&x| x >= self.num_points()) {
                    Err(Error::BadLevel(
                        "cover set has points outside the level".into(),
                    ))
                } else {
                    Ok(c.mask())
                }
            })
            .collect()
    }

    /// The gluing sequence `0 -> A(∪U_i) -> ∏A(U_i) -> ∏_{i<j} A(U_i ∩ U_j)`.
    pub(crate) fn gluing_maps(&self, cover: &[u32]) -> Result<(ModHom, ModHom)> {
        let union = cover.iter().fold(0, |a, &b| a | b);
        let pieces: Vec<FinModule> = cover.iter().map(|&u| self.value(u).clone()).collect();
        let prod = ModuleSum::new(&self.ring, self.side, &pieces)?;
        let parts: Vec<ModHom> = cover.iter().map(|&u| self.res(union, u).clone()).collect();
        let r = prod.map_into(self.value(union), &parts)?;
        let pairs: Vec<(usize, usize)> = (0..cover.len())
            .flat_map(|i| (i + 1..cover.len()).map(move |j| (i, j)))
            .collect();
        let overlaps: Vec<FinModule> = pairs
            .iter()
            .map(|&(i, j)| self.value(cover[i] & cover[j]).clone())
            .collect();
        let oprod = ModuleSum::new(&self.ring, self.side, &overlaps)?;
        let d = prod.assemble_to(&oprod, |t, s| {
            let (i, j) = pairs[t];
            let w = cover[i] & cover[j];
            if s == i {
                Some(self.res(cover[i], w).clone())
            } else if s == j {
                Some(self.res(cover[j], w).neg())
            } else {
                None
            }
        })?;
        Ok((r, d))
    }

    /// Exactness of the gluing sequence for one cover.
    pub fn sheaf_condition_check(&self, cover: &[Clopen]) -> Result<SheafVerdict> {
        let masks = self.check_cover(cover)?;
        self.sheaf_condition_masks(&masks)
    }

    pub(crate) fn sheaf_condition_masks(&self, cover: &[u32]) -> Result<SheafVerdict> {
        let (r, d) = self.gluing_maps(cover)?;
        let seq = [r.map().clone(), d.map().clone()];
        let injective = check_exact(&seq, 0)?;
        let middle = check_exact(&seq, 1)?;
        Ok(SheafVerdict {
            holds: injective.exact && middle.exact,
            cover: cover.iter().map(|&m| clopen_of(self.level, m)).collect(),
            injective,
            middle,
        })
    }

    /// The gluing condition over every cover family (see [`cover_families`]);
    /// returns the first failure.
    pub fn all_covers_check(&self) -> Result<Option<SheafVerdict>> {
        for fam in cover_families(self.num_points()) {
            let v = self.sheaf_condition_masks(&fam)?;
            if !v.holds {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    /// Whether `A(V) -> ∏ A(V_i)` is bijective for every partition of every
    /// clopen `V` (the empty partition of `∅` asks for `A(∅) = 0`).
    pub fn disjoint_union_check(&self) -> DisjointUnionVerdict {
        for v in masks(self.num_points()) {
            for part in partitions(v) {
                if !self.partition_map(v, &part).is_bijective() {
                    return DisjointUnionVerdict {
                        holds: false,
                        failing_set: Some(clopen_of(self.level, v)),
                        failing_partition: part.iter().map(|&b| clopen_of(self.level, b)).collect(),
                    };
                }
            }
        }
        DisjointUnionVerdict {
            holds: true,
            failing_set: None,
            failing_partition: Vec::new(),
        }
    }

    fn partition_map(&self, v: u32, blocks: &[u32]) -> ModHom {
        let pieces: Vec<FinModule> = blocks.iter().map(|&b| self.value(b).clone()).collect();
        let prod = ModuleSum::new(&self.ring, self.side, &pieces).expect("same ring");
        let parts: Vec<ModHom> = blocks.iter().map(|&b| self.res(v, b).clone()).collect();
        prod.map_into(self.value(v), &parts).expect("shapes")
    }

    /// Succeeds iff the disjoint-union condition holds.
    pub fn require_sheaf(&self) -> Result<()> {
        let v = self.disjoint_union_check();
        if v.holds {
            Ok(())
        } else {
            Err(Error::NotASheaf(format!(
                "A({:?}) is not the product over the partition {:?}",
                v.failing_set.map(|c| c.points),
                v.failing_partition
                    .iter()
                    .map(|c| &c.points)
                    .collect::<Vec<_>>()
            )))
        }
    }
}

/// Result of the gluing check for one cover.
#[derive(Clone, Debug, Serialize)]
pub struct SheafVerdict {
    pub holds: bool,
    pub cover: Vec<Clopen>,
    /// Exactness at `A(∪U_i)`.
    pub injective: ExactnessVerdict,
    /// Exactness at `∏A(U_i)`.
    pub middle: ExactnessVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisjointUnionVerdict {
    pub holds: bool,
    pub failing_set: Option<Clopen>,
    pub failing_partition: Vec<Clopen>,
}
