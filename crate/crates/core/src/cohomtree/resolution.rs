use crate::error::{Error, Result};
use crate::finab::{direct_sum, AbHom, Elem, FinAbGroup, IntMatrix};
use crate::ringmod::{
    induced_module, FinGroup, FinModule, FiniteRing, ModHom, ModuleSum, Side, Submodule,
};

use super::complex::{bar_cohomology, restrict_to_subgroup, CochainComplex};

/// Largest free module, counted in copies of the ring, built by a resolution.
pub const MAX_FREE_RANK: usize = 64;

/// A free resolution `... -> R^{k_1} -> R^{k_0} -> P -> 0`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub ring: FiniteRing,
    pub side: Side,
    pub ranks: Vec<usize>,
    /// `boundaries[n][i][j]`: coefficient of `e_j ∈ R^{k_n}` in the image of
    /// `e_i ∈ R^{k_{n+1}}`.
    pub boundaries: Vec<Vec<Vec<Elem>>>,
    /// Images in `P` of the basis of `R^{k_0}`.
    pub augmentation: Vec<Elem>,
}

/// Generators of `m` as a module: each basis element of the group is kept
/// when it is not already in the submodule generated by the earlier ones.
pub fn module_generators(m: &FinModule) -> Vec<Elem> {
    let mut gens: Vec<Elem> = Vec::new();
    let mut span = Submodule::generated_by(m, &[]);
    for i in 0..m.group().rank() {
        let b = m.group().basis(i);
        if span.inclusion.map().preimage(&b).is_none() {
            gens.push(b);
            span = Submodule::generated_by(m, &gens);
        }
    }
    gens
}

pub(crate) fn free_module(ring: &FiniteRing, side: Side, k: usize) -> Result<ModuleSum> {
    if k > MAX_FREE_RANK {
        return Err(Error::SizeCap(format!(
            "a resolution needs R^{k}, above R^{MAX_FREE_RANK}"
        )));
    }
    ModuleSum::new(ring, side, &vec![FinModule::regular(ring, side); k])
}

/// `R -> M`, `r ↦ r·g` (or `g·r` for right modules).
fn generator_map(m: &FinModule, g: &[i64]) -> Result<ModHom> {
    let ring = m.ring();
    let images: Vec<Elem> = (0..ring.rank())
        .map(|k| m.act(&ring.generator(k), g))
        .collect();
    let f = AbHom::from_images(ring.additive().clone(), m.group().clone(), &images)?;
    ModHom::new(FinModule::regular(ring, m.side()), m.clone(), f)
}

/// `R^k -> M` sending `e_i` to `gens[i]`.
pub(crate) fn cover(free: &ModuleSum, m: &FinModule, gens: &[Elem]) -> Result<ModHom> {
    let parts = gens
        .iter()
        .map(|g| generator_map(m, g))
        .collect::<Result<Vec<_>>>()?;
    free.map_out(m, &parts)
}

/// Coefficients of `x ∈ R^k`.
fn coefficients(free: &ModuleSum, x: &[i64]) -> Vec<Elem> {
    free.unpack(x)
}

/// Resolution by iterated kernels of free covers, with `length + 1` free
/// modules `F_0, ..., F_length`.
pub fn free_resolution(p: &FinModule, length: usize) -> Result<FreeResolution> {
    let ring = p.ring().clone();
    let side = p.side();
    let mut ranks = Vec::new();
    let mut boundaries = Vec::new();
    let mut augmentation = Vec::new();
    let mut current = p.clone();
    let mut inclusion: Option<(ModHom, ModuleSum)> = None;
    for n in 0..=length {
        let gens = module_generators(&current);
        let free = free_module(&ring, side, gens.len())?;
        let eps = cover(&free, &current, &gens)?;
        match &inclusion {
            None => augmentation = gens.clone(),
            Some((incl, below)) => {
                boundaries.push(
                    gens.iter()
                        .map(|g| coefficients(below, &incl.apply(g)))
                        .collect(),
                );
            }
        }
        ranks.push(gens.len());
        if n < length {
            let k = eps.kernel();
            current = k.module.clone();
            inclusion = Some((k.inclusion, free));
        }
    }
    Ok(FreeResolution {
        ring,
        side,
        ranks,
        boundaries,
        augmentation,
    })
}

impl FreeResolution {
    /// `Hom_R(F_•, A)`: `Hom_R(R^k, A) = A^k` with
    /// `(φ ∘ d)(e_i) = Σ_j r_ij · φ(e_j)`.
    pub fn hom_complex(&self, a: &FinModule) -> Result<CochainComplex> {
        if a.ring() != &self.ring || a.side() != self.side {
            return Err(Error::Mismatch(
                "coefficients over a different ring or side".into(),
            ));
        }
        let sums: Vec<_> = self
            .ranks
            .iter()
            .map(|&k| direct_sum(&vec![a.group().clone(); k]))
            .collect();
        let r = a.group().rank();
        let exp = a.group().exponent().max(1);
        let mut differentials = Vec::new();
        for (n, rows) in self.boundaries.iter().enumerate() {
            let mut raw = IntMatrix::zeros(self.ranks[n + 1] * r, self.ranks[n] * r);
            for (i, coeffs) in rows.iter().enumerate() {
                for (j, c) in coeffs.iter().enumerate() {
                    let m = a.rho(c);
                    for x in 0..r {
                        for y in 0..r {
                            raw[(i * r + x, j * r + y)] = m.matrix()[(x, y)].rem_euclid(exp);
                        }
                    }
                }
            }
            differentials.push(sums[n + 1].from_raw(&sums[n], &raw)?);
        }
        CochainComplex::new(sums.into_iter().map(|s| s.group).collect(), differentials)
    }
}

/// `Ext^0_R(P, A), ..., Ext^{n_max}_R(P, A)`.
pub fn ext_via_resolution(p: &FinModule, a: &FinModule, n_max: usize) -> Result<Vec<FinAbGroup>> {
    if p.ring() != a.ring() || p.side() != a.side() {
        return Err(Error::Mismatch(
            "Ext needs modules over the same ring and side".into(),
        ));
    }
    let c = free_resolution(p, n_max + 1)?.hom_complex(a)?;
    (0..=n_max)
        .map(|n| c.cohomology(n).map(|h| h.group))
        .collect()
}

/// Both sides of Shapiro's lemma in every degree up to `n_max`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ShapiroVerdict {
    pub holds: bool,
    pub subgroup: Vec<usize>,
    /// `Ext^n_{(Z/m)[G]}((Z/m)[G/H], A)`.
    pub ext: Vec<FinAbGroup>,
    /// `H^n(H, A)`.
    pub cohomology: Vec<FinAbGroup>,
}

/// Compares `Ext((Z/m)[G/H], A)` with `H^•(H, A|_H)`.
pub fn shapiro_check(
    group: &FinGroup,
    subgroup: &[usize],
    a: &FinModule,
    n_max: usize,
) -> Result<ShapiroVerdict> {
    let ring = a.ring();
    match ring.as_group_ring() {
        Some((_, g)) if g == group => {}
        _ => {
            return Err(Error::Mismatch(
                "the module is not over the group ring of this group".into(),
            ))
        }
    }
    if a.side() != Side::Left {
        return Err(Error::Mismatch(
            "Shapiro's lemma is stated for left modules".into(),
        ));
    }
    let sub = group.subgroup(subgroup)?;
    let ext = ext_via_resolution(&induced_module(ring, subgroup)?, a, n_max)?;
    let cohomology = bar_cohomology(&sub.group, &restrict_to_subgroup(a, &sub)?, n_max)?;
    Ok(ShapiroVerdict {
        holds: ext == cohomology,
        subgroup: sub.embedding,
        ext,
        cohomology,
    })
}
