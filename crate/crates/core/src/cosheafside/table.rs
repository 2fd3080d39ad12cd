use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finab::{check_exact, ExactnessVerdict};
use crate::ringmod::{FinModule, FiniteRing, ModHom, ModuleSum, Side};
use crate::sheafside::{
    clopen_of, cover_families, is_subset, masks, partitions, points_of, MAX_TABLE_POINTS,
};
use crate::stone::{Clopen, LevelChain};

/// A precosheaf on the clopens of one level with corestrictions
/// `cor_U^V : M(U) -> M(V)` for every `U ⊆ V`.
#[derive(Clone, Debug)]
pub struct CosheafTable {
    chain: LevelChain,
    level: usize,
    ring: FiniteRing,
    side: Side,
    values: Vec<FinModule>,
    /// Keyed by `(v, u)`.
    corestrictions: BTreeMap<(u32, u32), ModHom>,
}

impl CosheafTable {
    pub fn new(
        chain: LevelChain,
        level: usize,
        values: Vec<FinModule>,
        corestrictions: BTreeMap<(u32, u32), ModHom>,
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
                let c = corestrictions.get(&(v, u)).ok_or_else(|| {
                    Error::InvalidTable(format!("missing corestriction {u:#b} ⊆ {v:#b}"))
                })?;
                if c.source() != &values[u as usize] || c.target() != &values[v as usize] {
                    return Err(Error::InvalidTable(format!(
                        "corestriction {u:#b} ⊆ {v:#b} has the wrong modules"
                    )));
                }
            }
            if corestrictions[&(v, v)] != ModHom::identity(&values[v as usize]) {
                return Err(Error::InvalidTable(format!(
                    "corestriction of {v:#b} to itself is not the identity"
                )));
            }
        }
        let table = CosheafTable {
            chain,
            level,
            ring,
            side,
            values,
            corestrictions,
        };
        for w in masks(n) {
            for v in masks(n).filter(|&v| is_subset(v, w)) {
                for u in masks(n).filter(|&u| is_subset(u, v)) {
                    if &table.cor(w, v).compose(table.cor(v, u))? != table.cor(w, u) {
                        return Err(Error::InvalidTable(format!(
                            "corestrictions {u:#b} -> {v:#b} -> {w:#b} do not compose"
                        )));
                    }
                }
            }
        }
        Ok(table)
    }

    /// Builds the table from `elementary[(v, x)] = cor_{V∖x}^V`.
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
        let mut cors = BTreeMap::new();
        for v in masks(n) {
            for u in masks(n).filter(|&u| is_subset(u, v)) {
                let mut cur = ModHom::identity(&values[v as usize]);
                let mut set = v;
                for x in points_of(v & !u) {
                    let step = elementary.get(&(set, x)).ok_or_else(|| {
                        Error::InvalidTable(format!(
                            "missing corestriction adding {x} to {:#b}",
                            set & !(1 << x)
                        ))
                    })?;
                    cur = cur.compose(step)?;
                    set &= !(1 << x);
                }
                cors.insert((v, u), cur);
            }
        }
        Self::new(chain, level, values, cors)
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

    pub fn values(&self) -> &[FinModule] {
        &self.values
    }

    /// `cor_U^V : M(U) -> M(V)`.
    pub fn cor(&self, v: u32, u: u32) -> &ModHom {
        &self.corestrictions[&(v, u)]
    }

    pub fn corestrictions(&self) -> &BTreeMap<(u32, u32), ModHom> {
        &self.corestrictions
    }

    /// `⊕_{i<j} M(U_i ∩ U_j) -> ⊕ M(U_i) -> M(∪U_i)`.
    fn cogluing_maps(&self, cover: &[u32]) -> Result<(ModHom, ModHom)> {
        let union = cover.iter().fold(0, |a, &b| a | b);
        let pieces: Vec<FinModule> = cover.iter().map(|&u| self.value(u).clone()).collect();
        let sum = ModuleSum::new(&self.ring, self.side, &pieces)?;
        let parts: Vec<ModHom> = cover.iter().map(|&u| self.cor(union, u).clone()).collect();
        let s = sum.map_out(self.value(union), &parts)?;
        let pairs: Vec<(usize, usize)> = (0..cover.len())
            .flat_map(|i| (i + 1..cover.len()).map(move |j| (i, j)))
            .collect();
        let overlaps: Vec<FinModule> = pairs
            .iter()
            .map(|&(i, j)| self.value(cover[i] & cover[j]).clone())
            .collect();
        let osum = ModuleSum::new(&self.ring, self.side, &overlaps)?;
        let d = osum.assemble_to(&sum, |t, p| {
            let (i, j) = pairs[p];
            let w = cover[i] & cover[j];
            if t == i {
                Some(self.cor(cover[i], w).clone())
            } else if t == j {
                Some(self.cor(cover[j], w).neg())
            } else {
                None
            }
        })?;
        Ok((d, s))
    }

    pub fn cosheaf_condition_check(&self, cover: &[Clopen]) -> Result<CosheafVerdict> {
        let masks = cover
            .iter()
            .map(|c| {
                if c.level != self.level || c.points.iter().any(|&x| x >= self.num_points()) {
                    Err(Error::BadLevel(format!(
                        "cover set at level {} for a table at level {}",
                        c.level, self.level
                    )))
                } else {
                    Ok(c.mask())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        self.cosheaf_condition_masks(&masks)
    }

    pub(crate) fn cosheaf_condition_masks(&self, cover: &[u32]) -> Result<CosheafVerdict> {
        let (d, s) = self.cogluing_maps(cover)?;
        let seq = [d.map().clone(), s.map().clone()];
        let middle = check_exact(&seq, 1)?;
        let surjective = check_exact(&seq, 2)?;
        Ok(CosheafVerdict {
            holds: middle.exact && surjective.exact,
            cover: cover.iter().map(|&m| clopen_of(self.level, m)).collect(),
            middle,
            surjective,
        })
    }

    pub fn all_covers_check(&self) -> Result<Option<CosheafVerdict>> {
        for fam in cover_families(self.num_points()) {
            let v = self.cosheaf_condition_masks(&fam)?;
            if !v.holds {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    /// Whether `⊕ M(V_i) -> M(V)` is bijective for every partition.
    pub fn disjoint_union_check(&self) -> crate::sheafside::DisjointUnionVerdict {
        for v in masks(self.num_points()) {
            for part in partitions(v) {
                let pieces: Vec<FinModule> = part.iter().map(|&b| self.value(b).clone()).collect();
                let sum = ModuleSum::new(&self.ring, self.side, &pieces).expect("same ring");
                let parts: Vec<ModHom> = part.iter().map(|&b| self.cor(v, b).clone()).collect();
                let f = sum.map_out(self.value(v), &parts).expect("shapes");
                if !f.is_bijective() {
                    return crate::sheafside::DisjointUnionVerdict {
                        holds: false,
                        failing_set: Some(clopen_of(self.level, v)),
                        failing_partition: part.iter().map(|&b| clopen_of(self.level, b)).collect(),
                    };
                }
            }
        }
        crate::sheafside::DisjointUnionVerdict {
            holds: true,
            failing_set: None,
            failing_partition: Vec::new(),
        }
    }

    pub fn require_cosheaf(&self) -> Result<()> {
        let v = self.disjoint_union_check();
        if v.holds {
            Ok(())
        } else {
            Err(Error::NotASheaf(format!(
                "M({:?}) is not the direct sum over the partition {:?}",
                v.failing_set.map(|c| c.points),
                v.failing_partition
                    .iter()
                    .map(|c| &c.points)
                    .collect::<Vec<_>>()
            )))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CosheafVerdict {
    pub holds: bool,
    pub cover: Vec<Clopen>,
    /// Exactness at `⊕ M(U_i)`.
    pub middle: ExactnessVerdict,
    /// Exactness at `M(∪U_i)`.
    pub surjective: ExactnessVerdict,
}
