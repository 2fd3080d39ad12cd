use std::collections::BTreeMap;

use crate::cosheafside::{coetale_of_cosheaf, CosheafTable, ProSheafSystem};
use crate::error::Result;
use crate::ringmod::{dual_mod_hom, dual_module, module_evaluation, FinModule, ModHom, ModuleSum};
use crate::sheafside::{
    check, sheaf_of_etale, EtaleSystem, PresheafTable, RoundtripReport, MAX_TABLE_POINTS,
};

/// `Ǎ`: fibres `A_x^∨` with the dual transitions running down the chain.
pub fn dual_etale_to_prosheaf(e: &EtaleSystem) -> ProSheafSystem {
    let chain = e.chain().clone();
    let fibres = (0..chain.num_levels())
        .map(|l| e.fibres(l).iter().map(dual_module).collect())
        .collect();
    let maps = (0..chain.num_levels() - 1)
        .map(|i| {
            (0..chain.size(i + 1))
                .map(|x| dual_mod_hom(e.transition(i, x)))
                .collect()
        })
        .collect();
    ProSheafSystem::new(chain, e.ring().clone(), e.side().flip(), fibres, maps)
        .expect("duals of a valid system")
}

/// `Ṁ`: fibres `M_x^∨` with the dual fibre maps running up the chain.
pub fn dual_prosheaf_to_etale(s: &ProSheafSystem) -> EtaleSystem {
    let chain = s.chain().clone();
    let fibres = (0..chain.num_levels())
        .map(|l| s.fibres(l).iter().map(dual_module).collect())
        .collect();
    let transitions = (0..chain.num_levels() - 1)
        .map(|i| {
            (0..chain.size(i + 1))
                .map(|x| dual_mod_hom(s.fibre_map(i, x)))
                .collect()
        })
        .collect();
    EtaleSystem::new(
        chain,
        s.ring().clone(),
        s.side().flip(),
        fibres,
        transitions,
    )
    .expect("duals of a valid system")
}

/// The dual precosheaf: `U ↦ A(U)^∨`, `cor_U^V = (res^V_U)^∨`.
pub fn dual_presheaf_table(p: &PresheafTable) -> Result<CosheafTable> {
    let values = p.values().iter().map(dual_module).collect();
    let cors: BTreeMap<(u32, u32), ModHom> = p
        .restrictions()
        .iter()
        .map(|(&k, r)| (k, dual_mod_hom(r)))
        .collect();
    CosheafTable::new(p.chain().clone(), p.level(), values, cors)
}

/// The dual presheaf: `U ↦ M(U)^∨`, `res^V_U = (cor_U^V)^∨`.
pub fn dual_cosheaf_table(c: &CosheafTable) -> Result<PresheafTable> {
    let values = c.values().iter().map(dual_module).collect();
    let res: BTreeMap<(u32, u32), ModHom> = c
        .corestrictions()
        .iter()
        .map(|(&k, r)| (k, dual_mod_hom(r)))
        .collect();
    PresheafTable::new(c.chain().clone(), c.level(), values, res)
}

/// `A^j_y -> ∏_{x over y} A^top_x`, `a ↦ (φ(a)_x)_x`.
pub(crate) fn etale_theta(e: &EtaleSystem, j: usize, y: usize) -> Result<ModHom> {
    let top = e.chain().top();
    let over = e.chain().fibre(y, j, top);
    let pieces: Vec<FinModule> = over.iter().map(|&x| e.fibre(top, x).clone()).collect();
    let sum = ModuleSum::new(e.ring(), e.side(), &pieces)?;
    let parts: Vec<ModHom> = over.iter().map(|&x| e.composite(j, top, x)).collect();
    sum.map_into(e.fibre(j, y), &parts)
}

/// Fibres of the dual `sheaf'` against the duals of the fibres.
///
/// At every tabulated level the dual of `Shf(E)` must be a cosheaf whose
/// stalks are identified with `A_x^∨` through the dual of the stalk
/// projection. Over the chain, the duals of `Θ` must commute with the fibre
/// maps of `CoÉtale(Shf(E)^∨)` and of `Ǎ`. The double dual of every fibre
/// is identified with the fibre by evaluation, naturally in the transitions.
pub fn fibre_duality_check(e: &EtaleSystem) -> Result<RoundtripReport> {
    let mut checks = Vec::new();
    let chain = e.chain();
    let top = chain.top();
    for level in 0..chain.num_levels() {
        if chain.size(level) > MAX_TABLE_POINTS {
            continue;
        }
        let dual = dual_presheaf_table(&sheaf_of_etale(e, level)?)?;
        let is_cosheaf = dual.disjoint_union_check().holds;
        checks.push(check(
            format!("dual_table_is_cosheaf/level{level}"),
            is_cosheaf,
        ));
        if !is_cosheaf {
            continue;
        }
        for x in 0..chain.size(level) {
            let sum = ModuleSum::new(e.ring(), e.side(), &[e.fibre(level, x).clone()])?;
            let iso = dual_mod_hom(&sum.projections[0]);
            let ok = iso.target() == dual.value(1 << x) && iso.is_bijective();
            checks.push(check(format!("stalk_iso/level{level}/point{x}"), ok));
        }
    }
    let dual_e = dual_etale_to_prosheaf(e);
    if chain.size(top) <= MAX_TABLE_POINTS {
        let co = coetale_of_cosheaf(&dual_presheaf_table(&sheaf_of_etale(e, top)?)?)?;
        let theta = |j: usize, y: usize| etale_theta(e, j, y).map(|t| dual_mod_hom(&t));
        for y in 0..chain.size(top) {
            let ok = theta(top, y)
                .map(|t| t.is_bijective() && t.source() == co.fibre(top, y))
                .unwrap_or(false);
            checks.push(check(format!("dual_theta_iso/level{top}/point{y}"), ok));
        }
        for i in 0..top {
            for x in 0..chain.size(i + 1) {
                let y = chain.projections()[i][x];
                let lhs = dual_e.fibre_map(i, x).compose(&theta(i + 1, x)?)?;
                let rhs = theta(i, y)?.compose(co.fibre_map(i, x))?;
                checks.push(check(
                    format!("dual_theta_naturality/level{}/point{x}", i + 1),
                    lhs == rhs,
                ));
            }
        }
    }
    let back = dual_prosheaf_to_etale(&dual_e);
    for level in 0..chain.num_levels() {
        for x in 0..chain.size(level) {
            let ok = module_evaluation(e.fibre(level, x))
                .map(|ev| ev.is_bijective() && ev.target() == back.fibre(level, x))
                .unwrap_or(false);
            checks.push(check(format!("double_dual/level{level}/point{x}"), ok));
        }
    }
    for i in 0..top {
        for x in 0..chain.size(i + 1) {
            let y = chain.projections()[i][x];
            let lhs = module_evaluation(e.fibre(i + 1, x))?.compose(e.transition(i, x))?;
            let rhs = back
                .transition(i, x)
                .compose(&module_evaluation(e.fibre(i, y))?)?;
            checks.push(check(
                format!("double_dual_naturality/level{}/point{x}", i + 1),
                lhs == rhs,
            ));
        }
    }
    Ok(RoundtripReport::from_checks(checks))
}

/// Whether a table and its dual satisfy their gluing conditions together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DualTableVerdict {
    pub original: bool,
    pub dual: bool,
}

pub fn sheaf_dual_check(p: &PresheafTable) -> Result<DualTableVerdict> {
    let dual = dual_presheaf_table(p)?;
    Ok(DualTableVerdict {
        original: p.all_covers_check()?.is_none(),
        dual: dual.all_covers_check()?.is_none(),
    })
}

pub fn cosheaf_dual_check(c: &CosheafTable) -> Result<DualTableVerdict> {
    let dual = dual_cosheaf_table(c)?;
    Ok(DualTableVerdict {
        original: c.all_covers_check()?.is_none(),
        dual: dual.all_covers_check()?.is_none(),
    })
}
