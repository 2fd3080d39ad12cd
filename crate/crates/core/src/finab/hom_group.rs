use super::{AbHom, Elem, FinAbGroup, IntMatrix, Normalization};
use crate::error::{Error, Result};

/// `Hom(A, B)` as a finite abelian group.
///
/// The raw coordinates are one cyclic factor `Z/gcd(d_j, e_i)` per matrix
/// entry `(i, j)`, whose generator is the entry `e_i / gcd(d_j, e_i)`.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    pub group: FinAbGroup,
    slots: Vec<(usize, usize, i64)>,
    norm: Normalization,
}

impl HomGroup {
    pub fn new(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        let mut slots = Vec::new();
        let mut raw = Vec::new();
        for i in 0..target.rank() {
            let e = target.factors()[i];
            for j in 0..source.rank() {
                let g = super::gcd(e, source.factors()[j]);
                slots.push((i, j, e / g));
                raw.push(g);
            }
        }
        let norm = FinAbGroup::normalize(&raw);
        HomGroup {
            source: source.clone(),
            target: target.clone(),
            group: norm.group.clone(),
            slots,
            norm,
        }
    }

    /// The homomorphism with coordinates `x` in [`HomGroup::group`].
    pub fn hom(&self, x: &[i64]) -> AbHom {
        let raw = self.norm.from_normal(x);
        let mut m = IntMatrix::zeros(self.target.rank(), self.source.rank());
        for (&(i, j, step), &r) in self.slots.iter().zip(&raw) {
            m[(i, j)] = r * step;
        }
        AbHom::new(self.source.clone(), self.target.clone(), m).expect("every slot is well defined")
    }

    /// Coordinates of `f` in [`HomGroup::group`].
    pub fn coords(&self, f: &AbHom) -> Result<Elem> {
        if f.source() != &self.source || f.target() != &self.target {
            return Err(Error::Mismatch(
                "map does not belong to this hom group".into(),
            ));
        }
        let raw: Vec<i64> = self
            .slots
            .iter()
            .map(|&(i, j, step)| f.matrix()[(i, j)] / step)
            .collect();
        Ok(self.norm.to_normal(&raw))
    }

    /// The group homomorphism `Hom(A, B) -> Hom(A', B')` induced by a map
    /// `φ` on matrices that is additive in its argument.
    pub fn induced(&self, other: &HomGroup, mut phi: impl FnMut(&AbHom) -> AbHom) -> AbHom {
        let images: Vec<Elem> = (0..self.group.rank())
            .map(|k| {
                let img = phi(&self.hom(&self.group.basis(k)));
                other
                    .coords(&img)
                    .expect("image lies in the target hom group")
            })
            .collect();
        AbHom::from_images(self.group.clone(), other.group.clone(), &images)
            .expect("induced map is additive")
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    /// Every homomorphism `A -> B`.
    pub fn all(&self) -> impl Iterator<Item = AbHom> + '_ {
        self.group.elements().map(move |x| self.hom(&x))
    }
}
