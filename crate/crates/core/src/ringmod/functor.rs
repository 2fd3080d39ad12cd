use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finab::{AbHom, Elem, FinAbGroup};

use super::module::{FinModule, ModHom, ModuleSum, QuotientModule, Submodule};

/// Additive functors that commute with direct limits, evaluated on finite
/// modules.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "functor", content = "n", rename_all = "snake_case")]
pub enum FunctorTag {
    /// `Hom_Z(Z/n, -)`: the `n`-torsion submodule.
    HomFrom(i64),
    /// `- ⊗_Z Z/n`: the quotient `M / nM`.
    Tensor(i64),
    /// `Hom_R(R^k, -)`: `k` copies of the module.
    HomFree(i64),
}

impl fmt::Display for FunctorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorTag::HomFrom(n) => write!(f, "Hom(Z/{n}, -)"),
            FunctorTag::Tensor(n) => write!(f, "- ⊗ Z/{n}"),
            FunctorTag::HomFree(k) => write!(f, "Hom_R(R^{k}, -)"),
        }
    }
}

impl FunctorTag {
    fn validate(self) -> Result<()> {
        match self {
            FunctorTag::HomFrom(n) | FunctorTag::Tensor(n) if n < 1 => {
                Err(Error::UnsupportedFunctor(format!("{self} needs n >= 1")))
            }
            FunctorTag::HomFree(k) if !(0..=8).contains(&k) => Err(Error::UnsupportedFunctor(
                format!("{self} needs 0 <= k <= 8"),
            )),
            _ => Ok(()),
        }
    }

    /// `F(M)` together with the data needed to evaluate `F` on maps.
    pub fn apply(self, m: &FinModule) -> Result<FunctorValue> {
        self.validate()?;
        Ok(match self {
            FunctorTag::HomFrom(n) => {
                let times_n = m.rho(m.ring().one()).scale(n);
                FunctorValue::Torsion(Submodule::from_subgroup(m, times_n.kernel()))
            }
            FunctorTag::Tensor(n) => {
                let gens: Vec<Elem> = (0..m.group().rank())
                    .map(|j| m.group().scale(n, &m.group().basis(j)))
                    .collect();
                FunctorValue::Reduction(QuotientModule::by_generators(m, &gens))
            }
            FunctorTag::HomFree(k) => {
                let copies = vec![m.clone(); k as usize];
                FunctorValue::Copies(ModuleSum::new(m.ring(), m.side(), &copies)?)
            }
        })
    }

    /// `F(f) : F(M) -> F(N)`.
    pub fn apply_hom(self, f: &ModHom) -> Result<ModHom> {
        let fm = self.apply(f.source())?;
        let fn_ = self.apply(f.target())?;
        self.apply_hom_between(f, &fm, &fn_)
    }

    /// `F(f)` given already computed values `F(M)` and `F(N)`.
    pub fn apply_hom_between(
        self,
        f: &ModHom,
        fm: &FunctorValue,
        fn_: &FunctorValue,
    ) -> Result<ModHom> {
        match (fm, fn_) {
            (FunctorValue::Torsion(a), FunctorValue::Torsion(b)) => {
                f.compose(&a.inclusion)?.factor_through(&b.inclusion)
            }
            (FunctorValue::Reduction(a), FunctorValue::Reduction(b)) => {
                let solver = a.projection.map().solver();
                let qa = a.module.group();
                let images: Vec<Elem> = (0..qa.rank())
                    .map(|i| {
                        let lift = solver.solve(&qa.basis(i)).expect("projection is onto");
                        b.projection.apply(&f.apply(&lift))
                    })
                    .collect();
                let map = AbHom::from_images(qa.clone(), b.module.group().clone(), &images)?;
                ModHom::new(a.module.clone(), b.module.clone(), map)
            }
            (FunctorValue::Copies(a), FunctorValue::Copies(b)) => {
                a.assemble_to(b, |t, s| (t == s).then(|| f.clone()))
            }
            _ => Err(Error::Mismatch("functor values of different kinds".into())),
        }
    }
}

/// The value of a functor on a module, with its structure maps.
#[derive(Clone, Debug)]
pub enum FunctorValue {
    Torsion(Submodule),
    Reduction(QuotientModule),
    Copies(ModuleSum),
}

impl FunctorValue {
    pub fn module(&self) -> &FinModule {
        match self {
            FunctorValue::Torsion(s) => &s.module,
            FunctorValue::Reduction(q) => &q.module,
            FunctorValue::Copies(s) => &s.module,
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        self.module().group()
    }
}

/// `F(M)` as a module.
pub fn lift_functor_apply(tag: FunctorTag, m: &FinModule) -> Result<FinModule> {
    Ok(tag.apply(m)?.module().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringmod::{FiniteRing, Side};

    fn zmod(m: i64, g: &[i64]) -> FinModule {
        let r = FiniteRing::cyclic(m).unwrap();
        FinModule::over_cyclic(&r, FinAbGroup::new(g.to_vec()).unwrap(), Side::Left).unwrap()
    }

    #[test]
    fn torsion_of_z4() {
        let m = zmod(4, &[4]);
        assert_eq!(
            lift_functor_apply(FunctorTag::HomFrom(2), &m)
                .unwrap()
                .group(),
            &FinAbGroup::cyclic(2)
        );
        let zero = zmod(4, &[]);
        assert!(lift_functor_apply(FunctorTag::HomFrom(3), &zero)
            .unwrap()
            .is_zero());
        assert!(lift_functor_apply(FunctorTag::HomFrom(1), &m)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn tensor_kills_coprime() {
        let m = zmod(6, &[3]);
        assert!(lift_functor_apply(FunctorTag::Tensor(2), &m)
            .unwrap()
            .is_zero());
        let m = zmod(2, &[2, 2]);
        assert_eq!(
            lift_functor_apply(FunctorTag::Tensor(2), &m)
                .unwrap()
                .group(),
            m.group()
        );
    }

    #[test]
    fn unsupported_tags() {
        let m = zmod(2, &[2]);
        assert!(matches!(
            lift_functor_apply(FunctorTag::HomFrom(0), &m),
            Err(Error::UnsupportedFunctor(_))
        ));
        assert!(lift_functor_apply(FunctorTag::HomFree(-1), &m).is_err());
    }

    #[test]
    fn maps_are_functorial() {
        let r = FiniteRing::cyclic(8).unwrap();
        let z8 = FinModule::over_cyclic(&r, FinAbGroup::cyclic(8), Side::Left).unwrap();
        let z4 = FinModule::over_cyclic(&r, FinAbGroup::cyclic(4), Side::Left).unwrap();
        let red = ModHom::new(
            z8.clone(),
            z4.clone(),
            AbHom::new(
                z8.group().clone(),
                z4.group().clone(),
                crate::finab::IntMatrix::from_rows(&[vec![1]]),
            )
            .unwrap(),
        )
        .unwrap();
        for tag in [
            FunctorTag::HomFrom(2),
            FunctorTag::Tensor(2),
            FunctorTag::HomFree(2),
        ] {
            let id = tag.apply_hom(&ModHom::identity(&z8)).unwrap();
            assert_eq!(id, ModHom::identity(id.source()));
            tag.apply_hom(&red).unwrap();
        }
    }
}
