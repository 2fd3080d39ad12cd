use serde::Serialize;

use crate::error::{Error, Result};
use crate::finab::{
    check_exact, direct_sum, AbHom, DirectSum, Elem, ExactnessVerdict, FinAbGroup, Homology,
    IntMatrix,
};
use crate::ringmod::{FinModule, FiniteRing, ModHom, ModuleSum, Side};
use crate::sheafside::NamedCheck;

use super::resolution::{cover, free_module, module_generators, FreeResolution};

/// `0 -> sub -> mid -> quo -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub inclusion: ModHom,
    pub projection: ModHom,
}

impl ShortExactSequence {
    pub fn new(inclusion: ModHom, projection: ModHom) -> Result<Self> {
        if inclusion.target() != projection.source() {
            return Err(Error::Mismatch("the two maps are not composable".into()));
        }
        let s = ShortExactSequence {
            inclusion,
            projection,
        };
        if let Some(v) = s.verdicts()?.into_iter().find(|v| !v.exact) {
            return Err(Error::NotExact(format!(
                "short sequence fails at position {}: {:?}",
                v.position, v.witness
            )));
        }
        Ok(s)
    }

    pub fn sub(&self) -> &FinModule {
        self.inclusion.source()
    }

    pub fn mid(&self) -> &FinModule {
        self.inclusion.target()
    }

    pub fn quo(&self) -> &FinModule {
        self.projection.target()
    }

    /// Exactness at `sub`, `mid` and `quo`.
    pub fn verdicts(&self) -> Result<Vec<ExactnessVerdict>> {
        let seq = [self.inclusion.map().clone(), self.projection.map().clone()];
        (0..3).map(|p| check_exact(&seq, p)).collect()
    }
}

/// Compatible resolutions of the three terms, the middle one degreewise the
/// direct sum of the outer two (first the `sub` block, then the `quo` block).
pub(crate) struct Horseshoe {
    pub sub: FreeResolution,
    pub mid: FreeResolution,
    pub quo: FreeResolution,
}

fn first_block(small: &ModuleSum, big: &ModuleSum) -> Result<ModHom> {
    small.assemble_to(big, |t, s| {
        (t == s).then(|| ModHom::identity(small.summand(s)))
    })
}

fn second_block(big: &ModuleSum, small: &ModuleSum, offset: usize) -> Result<ModHom> {
    big.assemble_to(small, |t, s| {
        (s == t + offset).then(|| ModHom::identity(small.summand(t)))
    })
}

pub(crate) fn horseshoe(ses: &ShortExactSequence, length: usize) -> Result<Horseshoe> {
    let ring: FiniteRing = ses.mid().ring().clone();
    let side: Side = ses.mid().side();
    let mut inc = ses.inclusion.clone();
    let mut proj = ses.projection.clone();
    let mut res: [FreeResolution; 3] = std::array::from_fn(|_| FreeResolution {
        ring: ring.clone(),
        side,
        ranks: Vec::new(),
        boundaries: Vec::new(),
        augmentation: Vec::new(),
    });
    let mut below: Option<[(ModHom, ModuleSum); 3]> = None;
    for n in 0..=length {
        let gens_sub = module_generators(inc.source());
        let gens_quo = module_generators(proj.target());
        let solver = proj.map().solver();
        let lifts = gens_quo
            .iter()
            .map(|g| {
                solver
                    .solve(g)
                    .ok_or_else(|| Error::NotExact("projection is not surjective".into()))
            })
            .collect::<Result<Vec<Elem>>>()?;
        let gens_mid: Vec<Elem> = gens_sub.iter().map(|g| inc.apply(g)).chain(lifts).collect();
        let gens = [gens_sub, gens_mid, gens_quo];
        let modules = [
            inc.source().clone(),
            inc.target().clone(),
            proj.target().clone(),
        ];
        let frees = gens
            .iter()
            .map(|g| free_module(&ring, side, g.len()))
            .collect::<Result<Vec<_>>>()?;
        for t in 0..3 {
            match &below {
                None => res[t].augmentation = gens[t].clone(),
                Some(b) => {
                    let (incl, free) = &b[t];
                    res[t].boundaries.push(
                        gens[t]
                            .iter()
                            .map(|g| free.unpack(&incl.apply(g)))
                            .collect(),
                    );
                }
            }
            res[t].ranks.push(gens[t].len());
        }
        if n == length {
            break;
        }
        let kernels = (0..3)
            .map(|t| cover(&frees[t], &modules[t], &gens[t]).map(|e| e.kernel()))
            .collect::<Result<Vec<_>>>()?;
        let into_mid = first_block(&frees[0], &frees[1])?.compose(&kernels[0].inclusion)?;
        inc = into_mid.factor_through(&kernels[1].inclusion)?;
        let onto_quo =
            second_block(&frees[1], &frees[2], frees[0].len())?.compose(&kernels[1].inclusion)?;
        proj = onto_quo.factor_through(&kernels[2].inclusion)?;
        let mut it = kernels.into_iter().zip(frees);
        below = Some(std::array::from_fn(|_| {
            let (k, f) = it.next().expect("three terms");
            (k.inclusion, f)
        }));
    }
    let [sub, mid, quo] = res;
    Ok(Horseshoe { sub, mid, quo })
}

/// One term of a long exact sequence.
#[derive(Clone, Debug, Serialize)]
pub struct LesTerm {
    pub label: String,
    pub group: FinAbGroup,
}

/// A long exact sequence with an exactness verdict at every term.
#[derive(Clone, Debug, Serialize)]
pub struct LESReport {
    pub terms: Vec<LesTerm>,
    /// `maps[i] : terms[i] -> terms[i + 1]`; the last map leaves the final
    /// term for the next degree and is used only to test exactness there.
    pub maps: Vec<AbHom>,
    pub verdicts: Vec<ExactnessVerdict>,
    /// Identifications of the terms with other computations, when made.
    pub identifications: Vec<NamedCheck>,
    pub exact: bool,
    pub holds: bool,
}

fn copies(a: &FinModule, k: usize) -> DirectSum {
    direct_sum(&vec![a.group().clone(); k])
}

/// Coordinate map between `A^{k_src}` and `A^{k_tgt}` sending copy `s` to
/// copy `pick(s)`.
fn coordinate_map(
    a: &FinModule,
    k_src: usize,
    k_tgt: usize,
    pick: impl Fn(usize) -> Option<usize>,
) -> Result<AbHom> {
    let r = a.group().rank();
    let mut raw = IntMatrix::zeros(k_tgt * r, k_src * r);
    for s in 0..k_src {
        if let Some(t) = pick(s) {
            for x in 0..r {
                raw[(t * r + x, s * r + x)] = 1;
            }
        }
    }
    copies(a, k_tgt).from_raw(&copies(a, k_src), &raw)
}

fn induced(src: &Homology, tgt: &Homology, f: &AbHom) -> Result<AbHom> {
    let images = (0..src.group.rank())
        .map(|i| {
            tgt.class_of(&f.apply(&src.representative(&src.group.basis(i))))
                .ok_or_else(|| {
                    Error::NotExact("a cochain map sent a cocycle to a non-cocycle".into())
                })
        })
        .collect::<Result<Vec<_>>>()?;
    AbHom::from_images(src.group.clone(), tgt.group.clone(), &images)
}

/// `Ext^n(quo, A) -> Ext^n(mid, A) -> Ext^n(sub, A) -> Ext^{n+1}(quo, A) -> ...`
/// for `n <= n_max`, with connecting maps from the snake lemma applied to
/// the degreewise split sequence of cochain complexes.
pub fn les_from_ses(ses: &ShortExactSequence, a: &FinModule, n_max: usize) -> Result<LESReport> {
    if a.ring() != ses.mid().ring() || a.side() != ses.mid().side() {
        return Err(Error::Mismatch(
            "coefficients over a different ring or side".into(),
        ));
    }
    let h = horseshoe(ses, n_max + 2)?;
    let c_sub = h.sub.hom_complex(a)?;
    let c_mid = h.mid.hom_complex(a)?;
    let c_quo = h.quo.hom_complex(a)?;
    let top = n_max + 1;
    let cohom = |c: &super::complex::CochainComplex| {
        (0..=top)
            .map(|n| c.cohomology(n))
            .collect::<Result<Vec<_>>>()
    };
    let (h_sub, h_mid, h_quo) = (cohom(&c_sub)?, cohom(&c_mid)?, cohom(&c_quo)?);
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    for n in 0..=n_max {
        let (ks, kq, km) = (h.sub.ranks[n], h.quo.ranks[n], h.mid.ranks[n]);
        let from_quo = coordinate_map(a, kq, km, |j| Some(ks + j))?;
        let to_sub = coordinate_map(a, km, ks, |i| (i < ks).then_some(i))?;
        terms.push(LesTerm {
            label: format!("Ext^{n}(quo)"),
            group: h_quo[n].group.clone(),
        });
        terms.push(LesTerm {
            label: format!("Ext^{n}(mid)"),
            group: h_mid[n].group.clone(),
        });
        terms.push(LesTerm {
            label: format!("Ext^{n}(sub)"),
            group: h_sub[n].group.clone(),
        });
        maps.push(induced(&h_quo[n], &h_mid[n], &from_quo)?);
        maps.push(induced(&h_mid[n], &h_sub[n], &to_sub)?);
        // connecting map: lift into the first block, apply d, read the second block
        let lift = coordinate_map(a, ks, km, Some)?;
        let (ks1, kq1, km1) = (h.sub.ranks[n + 1], h.quo.ranks[n + 1], h.mid.ranks[n + 1]);
        let read = coordinate_map(a, km1, kq1, |i| (i >= ks1).then(|| i - ks1))?;
        let step = read.compose(&c_mid.differentials[n])?.compose(&lift)?;
        let images = (0..h_sub[n].group.rank())
            .map(|i| {
                let c = step.apply(&h_sub[n].representative(&h_sub[n].group.basis(i)));
                h_quo[n + 1]
                    .class_of(&c)
                    .ok_or_else(|| Error::NotExact("connecting map produced a non-cocycle".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(AbHom::from_images(
            h_sub[n].group.clone(),
            h_quo[n + 1].group.clone(),
            &images,
        )?);
    }
    let verdicts = (0..terms.len())
        .map(|p| {
            let incoming = if p == 0 {
                AbHom::zero(FinAbGroup::trivial(), terms[0].group.clone())
            } else {
                maps[p - 1].clone()
            };
            let seq = [incoming, maps[p].clone()];
            check_exact(&seq, 1).map(|v| ExactnessVerdict { position: p, ..v })
        })
        .collect::<Result<Vec<_>>>()?;
    let exact = verdicts.iter().all(|v| v.exact);
    Ok(LESReport {
        terms,
        maps,
        verdicts,
        identifications: Vec::new(),
        exact,
        holds: exact,
    })
}
