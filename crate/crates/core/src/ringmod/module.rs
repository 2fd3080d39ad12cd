use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finab::{
    direct_sum, dual_hom, AbHom, DirectSum, Elem, FinAbGroup, HomGroup, IntMatrix, Subgroup,
};

use super::ring::FiniteRing;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(PartialEq, Eq, Hash, Debug)]
struct ModuleInner {
    group: FinAbGroup,
    ring: FiniteRing,
    /// `action[k]` is the endomorphism by which ring generator `k` acts.
    action: Vec<AbHom>,
    side: Side,
}

/// A finite module: an abelian group with the action of a finite ring.
///
/// For a left module `ρ(rs) = ρ(r) ρ(s)`; for a right module
/// `ρ(rs) = ρ(s) ρ(r)`, where `ρ(r)` is the endomorphism `m ↦ r·m`
/// (respectively `m ↦ m·r`).
#[derive(Clone, Debug)]
pub struct FinModule(Arc<ModuleInner>);

impl PartialEq for FinModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FinModule {}

impl std::hash::Hash for FinModule {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl FinModule {
    /// Validates additivity, unitality and the multiplication rule on
    /// ring generators (which suffices by bilinearity).
    pub fn new(
        group: FinAbGroup,
        ring: FiniteRing,
        action: Vec<AbHom>,
        side: Side,
    ) -> Result<Self> {
        if action.len() != ring.rank() {
            return Err(Error::ModuleAxiom(format!(
                "{} action maps for a ring with {} generators",
                action.len(),
                ring.rank()
            )));
        }
        for (k, a) in action.iter().enumerate() {
            if a.source() != &group || a.target() != &group {
                return Err(Error::ModuleAxiom(format!(
                    "action of generator {k} is not an endomorphism"
                )));
            }
            let dk = ring.additive().factors()[k];
            if !a.scale(dk).is_zero() {
                return Err(Error::ModuleAxiom(format!(
                    "generator {k} has additive order {dk} but its action is not killed by it"
                )));
            }
        }
        let module = FinModule(Arc::new(ModuleInner {
            group,
            ring,
            action,
            side,
        }));
        module.check_axioms()?;
        Ok(module)
    }

    fn check_axioms(&self) -> Result<()> {
        let ring = self.ring();
        if self.rho(ring.one()) != AbHom::identity(self.group().clone()) {
            return Err(Error::ModuleAxiom(
                "one does not act as the identity".into(),
            ));
        }
        for k in 0..ring.rank() {
            for l in 0..ring.rank() {
                let lhs = self.rho(ring.generator_product(k, l));
                let (first, second) = match self.side() {
                    Side::Left => (&self.0.action[k], &self.0.action[l]),
                    Side::Right => (&self.0.action[l], &self.0.action[k]),
                };
                let rhs = first.compose(second)?;
                if lhs != rhs {
                    return Err(Error::ModuleAxiom(format!(
                        "action is not multiplicative on ring generators {k},{l}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The zero module.
    pub fn zero(ring: &FiniteRing, side: Side) -> Self {
        let g = FinAbGroup::trivial();
        let action = vec![AbHom::identity(g.clone()); ring.rank()];
        FinModule(Arc::new(ModuleInner {
            group: g,
            ring: ring.clone(),
            action,
            side,
        }))
    }

    /// `R` acting on itself by multiplication on the left or on the right.
    pub fn regular(ring: &FiniteRing, side: Side) -> Self {
        let a = ring.additive().clone();
        let action = (0..ring.rank())
            .map(|k| {
                let cols: Vec<Elem> = (0..ring.rank())
                    .map(|l| match side {
                        Side::Left => ring.generator_product(k, l).clone(),
                        Side::Right => ring.generator_product(l, k).clone(),
                    })
                    .collect();
                AbHom::from_images(a.clone(), a.clone(), &cols).expect("multiplication is additive")
            })
            .collect();
        FinModule::new(a, ring.clone(), action, side).expect("regular module")
    }

    /// An abelian group as a module over `Z/m` (rank-one ring); requires
    /// the exponent to divide `m`.
    pub fn over_cyclic(ring: &FiniteRing, group: FinAbGroup, side: Side) -> Result<Self> {
        let one = ring.one().clone();
        if ring.rank() != 1 || one != vec![1] {
            return Err(Error::ModuleAxiom("over_cyclic needs the ring Z/m".into()));
        }
        let action = vec![AbHom::identity(group.clone())];
        FinModule::new(group, ring.clone(), action, side)
    }

    /// `group` with every group element of a group ring acting trivially.
    pub fn trivial_action(ring: &FiniteRing, group: FinAbGroup, side: Side) -> Result<Self> {
        if ring.as_group_ring().is_none() {
            return Err(Error::ModuleAxiom(
                "trivial action needs a group ring".into(),
            ));
        }
        let action = vec![AbHom::identity(group.clone()); ring.rank()];
        FinModule::new(group, ring.clone(), action, side)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.0.group
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.0.ring
    }

    pub fn side(&self) -> Side {
        self.0.side
    }

    pub fn action(&self) -> &[AbHom] {
        &self.0.action
    }

    pub fn order(&self) -> u128 {
        self.group().order()
    }

    pub fn is_zero(&self) -> bool {
        self.group().is_trivial()
    }

    /// The endomorphism through which `r` acts.
    pub fn rho(&self, r: &[i64]) -> AbHom {
        let mut acc = AbHom::zero(self.group().clone(), self.group().clone());
        for (k, &x) in r.iter().enumerate() {
            if x != 0 {
                acc = acc.add(&self.0.action[k].scale(x)).expect("same group");
            }
        }
        acc
    }

    /// `r·m` (left) or `m·r` (right).
    pub fn act(&self, r: &[i64], m: &[i64]) -> Elem {
        self.rho(r).apply(m)
    }

    /// The same group and action with the side flipped through the ring's
    /// anti-automorphism (`g ↦ g⁻¹` for group rings).
    pub fn swap_side(&self) -> Result<Self> {
        let ring = self.ring();
        let action = (0..ring.rank())
            .map(|k| Ok(self.rho(&ring.involution(&ring.generator(k))?)))
            .collect::<Result<Vec<_>>>()?;
        FinModule::new(
            self.group().clone(),
            ring.clone(),
            action,
            self.side().flip(),
        )
    }

    /// Restriction of scalars along `(Z/m)[H] -> (Z/m)[G]` for a subgroup
    /// whose elements are `embedding` (in the order of `sub_ring`'s group).
    pub fn restrict(&self, sub_ring: &FiniteRing, embedding: &[usize]) -> Result<Self> {
        let (_, h) = sub_ring
            .as_group_ring()
            .ok_or_else(|| Error::ModuleAxiom("restriction target must be a group ring".into()))?;
        if self.ring().as_group_ring().is_none() || h.order() != embedding.len() {
            return Err(Error::ModuleAxiom(
                "restriction needs a group ring and a matching embedding".into(),
            ));
        }
        let action = embedding
            .iter()
            .map(|&g| self.0.action[g].clone())
            .collect();
        FinModule::new(self.group().clone(), sub_ring.clone(), action, self.side())
    }
}

/// A homomorphism of modules over the same ring and side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModHom {
    source: FinModule,
    target: FinModule,
    map: AbHom,
}

impl ModHom {
    pub fn new(source: FinModule, target: FinModule, map: AbHom) -> Result<Self> {
        if source.ring() != target.ring() || source.side() != target.side() {
            return Err(Error::Mismatch(
                "modules over different rings or sides".into(),
            ));
        }
        if map.source() != source.group() || map.target() != target.group() {
            return Err(Error::Mismatch(
                "underlying map has the wrong groups".into(),
            ));
        }
        for k in 0..source.ring().rank() {
            let a = map.compose(&source.action()[k])?;
            let b = target.action()[k].compose(&map)?;
            if a != b {
                return Err(Error::NotLinear(format!("fails on ring generator {k}")));
            }
        }
        Ok(ModHom {
            source,
            target,
            map,
        })
    }

    pub(crate) fn new_unchecked(source: FinModule, target: FinModule, map: AbHom) -> Self {
        ModHom {
            source,
            target,
            map,
        }
    }

    pub fn identity(m: &FinModule) -> Self {
        ModHom {
            source: m.clone(),
            target: m.clone(),
            map: AbHom::identity(m.group().clone()),
        }
    }

    pub fn zero(source: &FinModule, target: &FinModule) -> Self {
        ModHom {
            source: source.clone(),
            target: target.clone(),
            map: AbHom::zero(source.group().clone(), target.group().clone()),
        }
    }

    pub fn source(&self) -> &FinModule {
        &self.source
    }

    pub fn target(&self) -> &FinModule {
        &self.target
    }

    pub fn map(&self) -> &AbHom {
        &self.map
    }

    pub fn apply(&self, m: &[i64]) -> Elem {
        self.map.apply(m)
    }

    pub fn compose(&self, inner: &ModHom) -> Result<ModHom> {
        if inner.target != self.source {
            return Err(Error::Mismatch("cannot compose module maps".into()));
        }
        Ok(ModHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&inner.map)?,
        })
    }

    pub fn add(&self, other: &ModHom) -> Result<ModHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Mismatch("maps between different modules".into()));
        }
        Ok(ModHom {
            map: self.map.add(&other.map)?,
            ..self.clone()
        })
    }

    pub fn neg(&self) -> ModHom {
        ModHom {
            map: self.map.neg(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &ModHom) -> Result<ModHom> {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    pub fn is_bijective(&self) -> bool {
        self.map.is_bijective()
    }

    pub fn inverse(&self) -> Option<ModHom> {
        let inv = self.map.inverse()?;
        Some(ModHom {
            source: self.target.clone(),
            target: self.source.clone(),
            map: inv,
        })
    }

    pub fn kernel(&self) -> Submodule {
        Submodule::from_subgroup(&self.source, self.map.kernel())
    }

    pub fn image(&self) -> Submodule {
        Submodule::from_subgroup(&self.target, self.map.image())
    }

    pub fn cokernel(&self) -> QuotientModule {
        let gens: Vec<Elem> = (0..self.source.group().rank())
            .map(|j| self.map.matrix().column(j))
            .collect();
        QuotientModule::by_generators(&self.target, &gens)
    }

    /// Factors through an injective module map with the same target.
    pub fn factor_through(&self, incl: &ModHom) -> Result<ModHom> {
        let map = self.map.factor_through(&incl.map)?;
        Ok(ModHom {
            source: self.source.clone(),
            target: incl.source.clone(),
            map,
        })
    }
}

/// A submodule with its inclusion.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub module: FinModule,
    pub inclusion: ModHom,
}

impl Submodule {
    /// The submodule on an invariant subgroup. Panics if the subgroup is
    /// not stable under the action.
    pub fn from_subgroup(ambient: &FinModule, sub: Subgroup) -> Submodule {
        let action = ambient
            .action()
            .iter()
            .map(|a| {
                a.compose(&sub.inclusion)
                    .and_then(|x| x.factor_through(&sub.inclusion))
                    .expect("subgroup is invariant")
            })
            .collect();
        let module = FinModule::new(
            sub.group.clone(),
            ambient.ring().clone(),
            action,
            ambient.side(),
        )
        .expect("restricted action satisfies the axioms");
        let inclusion = ModHom::new_unchecked(module.clone(), ambient.clone(), sub.inclusion);
        Submodule { module, inclusion }
    }

    /// The submodule generated by `gens`.
    pub fn generated_by(ambient: &FinModule, gens: &[Elem]) -> Submodule {
        let mut all: Vec<Elem> = gens.to_vec();
        // close under the action; each pass enlarges the subgroup or stops
        loop {
            let sub = Subgroup::generated_by(ambient.group(), &all);
            let mut grew = false;
            for j in 0..sub.group.rank() {
                let v = sub.inclusion.apply(&sub.group.basis(j));
                for a in ambient.action() {
                    let w = a.apply(&v);
                    if !sub.contains(&w) {
                        all.push(w);
                        grew = true;
                    }
                }
            }
            if !grew {
                return Submodule::from_subgroup(ambient, sub);
            }
        }
    }
}

/// A quotient module with its projection.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    pub module: FinModule,
    pub projection: ModHom,
}

impl QuotientModule {
    /// Quotient by the submodule generated by `gens` (which must already be
    /// invariant for the result to be meaningful; the closure is taken).
    pub fn by_generators(ambient: &FinModule, gens: &[Elem]) -> QuotientModule {
        let sub = Submodule::generated_by(ambient, gens);
        let sub_gens: Vec<Elem> = (0..sub.module.group().rank())
            .map(|j| sub.inclusion.apply(&sub.module.group().basis(j)))
            .collect();
        let q = crate::finab::Quotient::by_generators(ambient.group(), &sub_gens);
        let solver = q.projection.solver();
        let lifts: Vec<Elem> = (0..q.group.rank())
            .map(|i| solver.solve(&q.group.basis(i)).expect("projection is onto"))
            .collect();
        let action = ambient
            .action()
            .iter()
            .map(|a| {
                let images: Vec<Elem> = lifts
                    .iter()
                    .map(|l| q.projection.apply(&a.apply(l)))
                    .collect();
                AbHom::from_images(q.group.clone(), q.group.clone(), &images)
                    .expect("induced action")
            })
            .collect();
        let module = FinModule::new(
            q.group.clone(),
            ambient.ring().clone(),
            action,
            ambient.side(),
        )
        .expect("induced action satisfies the axioms");
        let projection = ModHom::new_unchecked(ambient.clone(), module.clone(), q.projection);
        QuotientModule { module, projection }
    }
}

/// A direct sum of modules with module injections and projections.
#[derive(Clone, Debug)]
pub struct ModuleSum {
    pub module: FinModule,
    pub sum: DirectSum,
    pub injections: Vec<ModHom>,
    pub projections: Vec<ModHom>,
}

impl ModuleSum {
    pub fn new(ring: &FiniteRing, side: Side, modules: &[FinModule]) -> Result<ModuleSum> {
        for m in modules {
            if m.ring() != ring || m.side() != side {
                return Err(Error::Mismatch(
                    "summands over different rings or sides".into(),
                ));
            }
        }
        let groups: Vec<FinAbGroup> = modules.iter().map(|m| m.group().clone()).collect();
        let sum = direct_sum(&groups);
        let action = (0..ring.rank())
            .map(|k| {
                let parts: Vec<AbHom> = modules
                    .iter()
                    .enumerate()
                    .map(|(s, m)| m.action()[k].compose(&sum.projections[s]).expect("shapes"))
                    .collect();
                sum.map_into(&sum.group, &parts)
            })
            .collect::<Result<Vec<_>>>()?;
        let module = FinModule::new(sum.group.clone(), ring.clone(), action, side)?;
        let injections = modules
            .iter()
            .enumerate()
            .map(|(s, m)| {
                ModHom::new_unchecked(m.clone(), module.clone(), sum.injections[s].clone())
            })
            .collect();
        let projections = modules
            .iter()
            .enumerate()
            .map(|(s, m)| {
                ModHom::new_unchecked(module.clone(), m.clone(), sum.projections[s].clone())
            })
            .collect();
        Ok(ModuleSum {
            module,
            sum,
            injections,
            projections,
        })
    }

    pub fn summand(&self, s: usize) -> &FinModule {
        self.injections[s].source()
    }

    pub fn len(&self) -> usize {
        self.injections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.injections.is_empty()
    }

    pub fn pack(&self, parts: &[Elem]) -> Elem {
        self.sum.pack(parts)
    }

    pub fn unpack(&self, a: &[i64]) -> Vec<Elem> {
        self.sum.unpack(a)
    }

    /// `source -> sum` with components `parts`.
    pub fn map_into(&self, source: &FinModule, parts: &[ModHom]) -> Result<ModHom> {
        let maps: Vec<AbHom> = parts.iter().map(|p| p.map().clone()).collect();
        let m = self.sum.map_into(source.group(), &maps)?;
        Ok(ModHom::new_unchecked(
            source.clone(),
            self.module.clone(),
            m,
        ))
    }

    /// `sum -> target` restricting to `parts[s]` on summand `s`.
    pub fn map_out(&self, target: &FinModule, parts: &[ModHom]) -> Result<ModHom> {
        let maps: Vec<AbHom> = parts.iter().map(|p| p.map().clone()).collect();
        let m = self.sum.map_out(target.group(), &maps)?;
        Ok(ModHom::new_unchecked(
            self.module.clone(),
            target.clone(),
            m,
        ))
    }

    /// `self -> other` with block `(t, s)` mapping summand `s` to summand `t`.
    pub fn assemble_to(
        &self,
        other: &ModuleSum,
        mut block: impl FnMut(usize, usize) -> Option<ModHom>,
    ) -> Result<ModHom> {
        let m = other
            .sum
            .assemble_from(&self.sum, |t, s| block(t, s).map(|b| b.map().clone()))?;
        ModHom::new(self.module.clone(), other.module.clone(), m)
    }
}

/// `Hom_R(M, N)` as a finite abelian group: the kernel of
/// `f ↦ (f ρ_M(k) - ρ_N(k) f)_k` on `Hom(M, N)`.
#[derive(Clone, Debug)]
pub struct ModuleHomGroup {
    pub source: FinModule,
    pub target: FinModule,
    pub homs: HomGroup,
    pub linear: Subgroup,
}

impl ModuleHomGroup {
    pub fn new(source: &FinModule, target: &FinModule) -> Result<Self> {
        if source.ring() != target.ring() || source.side() != target.side() {
            return Err(Error::Mismatch(
                "modules over different rings or sides".into(),
            ));
        }
        let homs = HomGroup::new(source.group(), target.group());
        let r = source.ring().rank();
        let copies = vec![homs.group.clone(); r];
        let sum = direct_sum(&copies);
        let images: Vec<Elem> = (0..homs.group.rank())
            .map(|j| {
                let f = homs.hom(&homs.group.basis(j));
                let parts: Vec<Elem> = (0..r)
                    .map(|k| {
                        let d = f
                            .compose(&source.action()[k])
                            .and_then(|a| a.sub(&target.action()[k].compose(&f)?))
                            .expect("shapes");
                        homs.coords(&d).expect("commutator is a homomorphism")
                    })
                    .collect();
                sum.pack(&parts)
            })
            .collect();
        let defect = AbHom::from_images(homs.group.clone(), sum.group.clone(), &images)?;
        let linear = defect.kernel();
        Ok(ModuleHomGroup {
            source: source.clone(),
            target: target.clone(),
            homs,
            linear,
        })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.linear.group
    }

    pub fn order(&self) -> u128 {
        self.linear.group.order()
    }

    pub fn hom(&self, x: &[i64]) -> ModHom {
        let f = self.homs.hom(&self.linear.inclusion.apply(x));
        ModHom::new_unchecked(self.source.clone(), self.target.clone(), f)
    }

    /// Coordinates of a module map, or `None` if it is not in this group.
    pub fn coords(&self, f: &ModHom) -> Option<Elem> {
        let c = self.homs.coords(f.map()).ok()?;
        self.linear.inclusion.preimage(&c)
    }

    pub fn all(&self) -> impl Iterator<Item = ModHom> + '_ {
        self.linear.group.elements().map(move |x| self.hom(&x))
    }
}

/// Largest `Hom_R(M, N)` that [`search_isomorphism`] will enumerate.
pub const ISOMORPHISM_SEARCH_LIMIT: u128 = 1 << 16;

/// Finds a module isomorphism `M -> N` by enumerating `Hom_R(M, N)`.
pub fn search_isomorphism(m: &FinModule, n: &FinModule) -> Result<Option<ModHom>> {
    if m.group() != n.group() {
        return Ok(None);
    }
    let h = ModuleHomGroup::new(m, n)?;
    if h.order() > ISOMORPHISM_SEARCH_LIMIT {
        return Err(Error::SizeCap(format!(
            "Hom_R(M, N) has {} elements, above the search limit",
            h.order()
        )));
    }
    let found = h.all().find(|f| f.is_bijective());
    Ok(found)
}

/// The character module: same invariant factors, `⟨χ·r, m⟩ = ⟨χ, r·m⟩`,
/// side flipped.
pub fn dual_module(m: &FinModule) -> FinModule {
    let action: Vec<AbHom> = m.action().iter().map(dual_hom).collect();
    FinModule::new(m.group().clone(), m.ring().clone(), action, m.side().flip())
        .expect("dual action satisfies the axioms")
}

/// `f^∨ : N^∨ -> M^∨`.
pub fn dual_mod_hom(f: &ModHom) -> ModHom {
    ModHom::new_unchecked(
        dual_module(f.target()),
        dual_module(f.source()),
        dual_hom(f.map()),
    )
}

/// The evaluation map `M -> M^∨∨` as a module map.
pub fn module_evaluation(m: &FinModule) -> Result<ModHom> {
    let dd = dual_module(&dual_module(m));
    ModHom::new(m.clone(), dd, crate::finab::evaluation_map(m.group()))
}

/// Matrix of a permutation of basis vectors `e_y ↦ e_{perm[y]}` on `(Z/m)^n`.
pub(crate) fn permutation_matrix(perm: &[usize]) -> IntMatrix {
    let n = perm.len();
    let mut p = IntMatrix::zeros(n, n);
    for (y, &py) in perm.iter().enumerate() {
        p[(py, y)] = 1;
    }
    p
}
