use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cosheafside::{coshf_of_prosheaf, profinite_direct_sum, ProSheafSystem};
use crate::error::Result;
use crate::finab::{direct_sum, pairing, AbHom, Elem, FinAbGroup, PairingTable, QmodZ};
use crate::ringmod::{dual_mod_hom, dual_module, FinModule, ModHom, ModuleHomGroup, ModuleSum};
use crate::sheafside::{
    check, global_sections, sheaf_of_etale, EtaleSystem, NamedCheck, RoundtripReport,
    MAX_TABLE_POINTS,
};

use super::functors::{dual_etale_to_prosheaf, dual_prosheaf_to_etale};

/// The pairing between a level of a direct sum of duals and the matching
/// level of a product, with the isomorphism it induces.
#[derive(Clone, Debug)]
pub struct LevelPairing {
    pub level: usize,
    pub table: PairingTable,
    /// `left -> right^∨` induced by the pairing, as a module map when it is
    /// linear.
    pub isomorphism: Option<ModHom>,
}

/// Explicit evidence for `⊞(Ǎ) ≅ (⨅A)^∨`: one pairing per level, the
/// fibrewise identifications, and the checks run on them.
#[derive(Clone, Debug)]
pub struct DualityWitness {
    pub levels: Vec<LevelPairing>,
    /// `fibre_isos[l][x] : Ǎ^l_x -> (A^l_x)^∨`.
    pub fibre_isos: Vec<Vec<ModHom>>,
    pub checks: Vec<NamedCheck>,
    pub holds: bool,
}

/// Pairs `left` (summands dual to those of `right`) with `right`,
/// summand by summand.
fn summand_pairing(
    left: &ModuleSum,
    right: &ModuleSum,
    fibres: &[FinAbGroup],
) -> Result<PairingTable> {
    PairingTable::from_fn(
        left.module.group().clone(),
        right.module.group().clone(),
        |chi, a| {
            let cs = left.unpack(chi);
            let xs = right.unpack(a);
            fibres
                .iter()
                .zip(cs.iter().zip(&xs))
                .fold(QmodZ::ZERO, |acc, (g, (c, x))| acc + pairing(g, c, x))
        },
    )
}

/// `⟨f(a), b⟩ = ⟨a, g(b)⟩` on generators, for `f : L -> L'` and `g : R' -> R`.
fn adjoint_on_generators(
    p_target: &PairingTable,
    p_source: &PairingTable,
    f: &AbHom,
    g: &AbHom,
) -> bool {
    let ls = f.source();
    let rs = g.source();
    (0..ls.rank()).all(|k| {
        (0..rs.rank()).all(|l| {
            let a = ls.basis(k);
            let b = rs.basis(l);
            p_target.evaluate(&f.apply(&a), &b) == p_source.evaluate(&a, &g.apply(&b))
        })
    })
}

fn level_checks(
    prefix: &str,
    l: usize,
    left: &ModuleSum,
    right: &ModuleSum,
    fibres: &[FinAbGroup],
    checks: &mut Vec<NamedCheck>,
) -> Result<LevelPairing> {
    let table = summand_pairing(left, right, fibres)?;
    checks.push(check(
        format!("{prefix}/equal_order/level{l}"),
        left.module.order() == right.module.order(),
    ));
    checks.push(check(
        format!("{prefix}/nondegenerate/level{l}"),
        table.is_nondegenerate(),
    ));
    let isomorphism = ModHom::new(
        left.module.clone(),
        dual_module(&right.module),
        table.left_map(),
    )
    .ok();
    checks.push(check(
        format!("{prefix}/ring_compatible/level{l}"),
        isomorphism.is_some(),
    ));
    checks.push(check(
        format!("{prefix}/isomorphism/level{l}"),
        isomorphism.as_ref().is_some_and(|f| f.is_bijective()),
    ));
    Ok(LevelPairing {
        level: l,
        table,
        isomorphism,
    })
}

/// `⊞(Ǎ)` against `(⨅A)^∨` at every level.
pub fn sum_product_duality_check(e: &EtaleSystem) -> Result<DualityWitness> {
    let dual = dual_etale_to_prosheaf(e);
    let (sums, _) = profinite_direct_sum(&dual)?;
    let products = global_sections(e)?;
    let chain = e.chain();
    let mut checks = Vec::new();
    let mut levels = Vec::new();
    let mut fibre_isos = Vec::new();
    for l in 0..chain.num_levels() {
        let fibres: Vec<FinAbGroup> = e.fibres(l).iter().map(|m| m.group().clone()).collect();
        levels.push(level_checks(
            "pairing",
            l,
            &sums.levels[l],
            &products.levels[l],
            &fibres,
            &mut checks,
        )?);
        let isos: Vec<ModHom> = (0..chain.size(l))
            .map(|x| ModHom::identity(dual.fibre(l, x)))
            .collect();
        for (x, iso) in isos.iter().enumerate() {
            checks.push(check(
                format!("fibre_iso/level{l}/point{x}"),
                iso.target() == &dual_module(e.fibre(l, x)) && iso.is_bijective(),
            ));
        }
        fibre_isos.push(isos);
    }
    for i in 0..chain.num_levels() - 1 {
        let ok = adjoint_on_generators(
            &levels[i].table,
            &levels[i + 1].table,
            sums.maps[i].map(),
            products.maps[i].map(),
        );
        checks.push(check(
            format!("pairing/chain_compatible/level{}", i + 1),
            ok,
        ));
    }
    let holds = checks.iter().all(|c| c.holds);
    Ok(DualityWitness {
        levels,
        fibre_isos,
        checks,
        holds,
    })
}

/// `⨅(Ṁ)` against `(⊞M)^∨` at every level.
pub fn product_sum_duality_check(s: &ProSheafSystem) -> Result<DualityWitness> {
    let dual = dual_prosheaf_to_etale(s);
    let products = global_sections(&dual)?;
    let (sums, _) = profinite_direct_sum(s)?;
    let chain = s.chain();
    let mut checks = Vec::new();
    let mut levels = Vec::new();
    let mut fibre_isos = Vec::new();
    for l in 0..chain.num_levels() {
        let fibres: Vec<FinAbGroup> = s.fibres(l).iter().map(|m| m.group().clone()).collect();
        levels.push(level_checks(
            "pairing",
            l,
            &products.levels[l],
            &sums.levels[l],
            &fibres,
            &mut checks,
        )?);
        fibre_isos.push(
            (0..chain.size(l))
                .map(|x| ModHom::identity(dual.fibre(l, x)))
                .collect(),
        );
    }
    for i in 0..chain.num_levels() - 1 {
        let ok = adjoint_on_generators(
            &levels[i + 1].table,
            &levels[i].table,
            products.maps[i].map(),
            sums.maps[i].map(),
        );
        checks.push(check(
            format!("pairing/chain_compatible/level{}", i + 1),
            ok,
        ));
    }
    let holds = checks.iter().all(|c| c.holds);
    Ok(DualityWitness {
        levels,
        fibre_isos,
        checks,
        holds,
    })
}

/// A random fibrewise endomorphism commuting with every transition.
///
/// Fibre maps are drawn level by level from the maps compatible with the
/// choices below; when a fibre admits none, the whole morphism falls back to
/// multiplication by a random integer.
pub fn random_endomorphism(e: &EtaleSystem, rng: &mut impl Rng) -> Result<Vec<Vec<ModHom>>> {
    let chain = e.chain();
    let mut out: Vec<Vec<ModHom>> = Vec::new();
    for l in 0..chain.num_levels() {
        let mut row = Vec::new();
        for x in 0..chain.size(l) {
            let a = e.fibre(l, x);
            let homs = ModuleHomGroup::new(a, a)?;
            let candidates: Vec<ModHom> = if l == 0 {
                vec![random_hom(&homs, rng)]
            } else {
                let y = chain.projections()[l - 1][x];
                let t = e.transition(l - 1, x);
                let below = &out[l - 1][y];
                if homs.order() > 1 << 12 {
                    Vec::new()
                } else {
                    let target = t.compose(below)?;
                    homs.all()
                        .filter(|f| f.compose(t).is_ok_and(|c| c == target))
                        .collect()
                }
            };
            if candidates.is_empty() {
                return Ok(scalar_endomorphism(e, rng.gen_range(0..=8)));
            }
            row.push(candidates[rng.gen_range(0..candidates.len())].clone());
        }
        out.push(row);
    }
    Ok(out)
}

fn random_hom(homs: &ModuleHomGroup, rng: &mut impl Rng) -> ModHom {
    let x: Elem = homs
        .group()
        .factors()
        .iter()
        .map(|&d| rng.gen_range(0..d))
        .collect();
    homs.hom(&x)
}

fn scalar_endomorphism(e: &EtaleSystem, k: i64) -> Vec<Vec<ModHom>> {
    (0..e.chain().num_levels())
        .map(|l| {
            e.fibres(l)
                .iter()
                .map(|a| {
                    let id = ModHom::identity(a);
                    ModHom::new(a.clone(), a.clone(), id.map().scale(k))
                        .expect("scalars are linear")
                })
                .collect()
        })
        .collect()
}

/// The square of duality functors and evaluation at the space.
///
/// Dualizing first and then evaluating gives `⊞(Ǎ)`; evaluating first gives
/// `(⨅A)^∨`, with `⨅A = Shf(A)(X)` and `⊞Ǎ = CoShf(Ǎ)(X)`. The evaluation
/// pairing identifies the two at every level; naturality is checked against
/// a seeded random endomorphism of `A`.
pub fn square_commutes_check(e: &EtaleSystem, seed: u64) -> Result<RoundtripReport> {
    let witness = sum_product_duality_check(e)?;
    let mut checks = witness.checks.clone();
    let chain = e.chain();
    let top = chain.top();
    let dual = dual_etale_to_prosheaf(e);
    let products = global_sections(e)?;
    let (sums, _) = profinite_direct_sum(&dual)?;
    if chain.size(top) <= MAX_TABLE_POINTS {
        let full = (1u32 << chain.size(top)) - 1;
        checks.push(check(
            "product_is_shf_at_space",
            sheaf_of_etale(e, top)?.value(full) == products.value(),
        ));
        checks.push(check(
            "sum_is_coshf_at_space",
            coshf_of_prosheaf(&dual, top)?.value(full) == sums.value(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eta = random_endomorphism(e, &mut rng)?;
    for (l, eta_l) in eta.iter().enumerate() {
        let prod_eta = products.levels[l].map_into(
            products.level(l),
            &eta_l
                .iter()
                .zip(&products.levels[l].projections)
                .map(|(f, p)| f.compose(p))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let sum_eta = sums.levels[l].map_out(
            sums.level(l),
            &eta_l
                .iter()
                .zip(&sums.levels[l].injections)
                .map(|(f, i)| i.compose(&dual_mod_hom(f)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let ok = match &witness.levels[l].isomorphism {
            Some(iso) => iso.compose(&sum_eta)? == dual_mod_hom(&prod_eta).compose(iso)?,
            None => false,
        };
        checks.push(check(format!("square_naturality/level{l}"), ok));
    }
    Ok(RoundtripReport::from_checks(checks))
}

/// The square starting from a `sheaf'`: `⨅(Ṁ)` against `(⊞M)^∨`.
pub fn square_commutes_check_co(s: &ProSheafSystem) -> Result<RoundtripReport> {
    let witness = product_sum_duality_check(s)?;
    let mut checks = witness.checks;
    let chain = s.chain();
    let top = chain.top();
    if chain.size(top) <= MAX_TABLE_POINTS {
        let full = (1u32 << chain.size(top)) - 1;
        let dual = dual_prosheaf_to_etale(s);
        checks.push(check(
            "product_is_shf_at_space",
            sheaf_of_etale(&dual, top)?.value(full) == global_sections(&dual)?.value(),
        ));
        checks.push(check(
            "sum_is_coshf_at_space",
            coshf_of_prosheaf(s, top)?.value(full) == profinite_direct_sum(s)?.0.value(),
        ));
    }
    Ok(RoundtripReport::from_checks(checks))
}

/// `Hom_R(Z, ⨅A) -> ⨁_x Hom_R(Z, A_x)`, `f ↦ (π_x ∘ f)_x`, at every level.
pub fn ext0_product_check(e: &EtaleSystem, z: &FinModule) -> Result<RoundtripReport> {
    let products = global_sections(e)?;
    let mut checks = Vec::new();
    for (l, prod) in products.levels.iter().enumerate() {
        let whole = ModuleHomGroup::new(z, &prod.module)?;
        let parts: Vec<ModuleHomGroup> = e
            .fibres(l)
            .iter()
            .map(|a| ModuleHomGroup::new(z, a))
            .collect::<Result<_>>()?;
        let sum = direct_sum(&parts.iter().map(|h| h.group().clone()).collect::<Vec<_>>());
        let images = (0..whole.group().rank())
            .map(|k| {
                let f = whole.hom(&whole.group().basis(k));
                let coords = parts
                    .iter()
                    .zip(&prod.projections)
                    .map(|(h, p)| {
                        h.coords(&p.compose(&f)?)
                            .ok_or_else(|| crate::Error::NotLinear("projection".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(sum.pack(&coords))
            })
            .collect::<Result<Vec<_>>>()?;
        let canonical = AbHom::from_images(whole.group().clone(), sum.group.clone(), &images)?;
        checks.push(check(
            format!("ext0_canonical_iso/level{l}"),
            canonical.is_bijective(),
        ));
    }
    Ok(RoundtripReport::from_checks(checks))
}
