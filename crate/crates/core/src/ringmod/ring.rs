use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finab::{Elem, FinAbGroup};

use super::group::FinGroup;

/// How a ring was built; group rings remember their group so modules over
/// them can be restricted and have their side swapped.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RingKind {
    Cyclic(i64),
    GroupRing { m: i64, group: FinGroup },
    Table,
}

/// Largest additive rank accepted; axioms are checked on all generator triples.
pub const MAX_RING_RANK: usize = 16;

#[derive(PartialEq, Eq, Hash, Debug)]
struct RingInner {
    additive: FinAbGroup,
    /// `mult[k][l]` is the product of additive generators `k` and `l`.
    mult: Vec<Vec<Elem>>,
    one: Elem,
    kind: RingKind,
}

/// A finite ring with unity: an additive group and a bilinear product
/// determined by its values on additive generators.
#[derive(Clone, Debug)]
pub struct FiniteRing(Arc<RingInner>);

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FiniteRing {}

impl std::hash::Hash for FiniteRing {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl FiniteRing {
    /// Validates a ring given by multiplication on generators.
    pub fn from_table(additive: FinAbGroup, mult: Vec<Vec<Elem>>, one: Elem) -> Result<Self> {
        Self::build(additive, mult, one, RingKind::Table)
    }

    fn build(
        additive: FinAbGroup,
        mult: Vec<Vec<Elem>>,
        one: Elem,
        kind: RingKind,
    ) -> Result<Self> {
        let r = additive.rank();
        if r > MAX_RING_RANK {
            return Err(Error::SizeCap(format!(
                "ring of additive rank {r} exceeds {MAX_RING_RANK}"
            )));
        }
        if mult.len() != r || mult.iter().any(|row| row.len() != r) {
            return Err(Error::RingAxiom(
                "multiplication table has the wrong shape".into(),
            ));
        }
        if !additive.contains(&one) {
            return Err(Error::RingAxiom(format!("one {one:?} is not an element")));
        }
        for (k, row) in mult.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                if !additive.contains(v) {
                    return Err(Error::RingAxiom(format!(
                        "product of generators {k},{l} is not reduced"
                    )));
                }
                let dk = additive.factors()[k];
                let dl = additive.factors()[l];
                if !additive.is_zero(&additive.scale(dk, v))
                    || !additive.is_zero(&additive.scale(dl, v))
                {
                    return Err(Error::RingAxiom(format!(
                        "product of generators {k},{l} is not killed by their orders"
                    )));
                }
            }
        }
        let ring = FiniteRing(Arc::new(RingInner {
            additive,
            mult,
            one,
            kind,
        }));
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let a = self.additive();
        let r = a.rank();
        for k in 0..r {
            let ek = a.basis(k);
            if self.mul(&self.0.one, &ek) != ek || self.mul(&ek, &self.0.one) != ek {
                return Err(Error::RingAxiom(format!(
                    "one is not a unit on generator {k}"
                )));
            }
        }
        for k in 0..r {
            for l in 0..r {
                let kl = &self.0.mult[k][l];
                for p in 0..r {
                    let left = self.mul(kl, &a.basis(p));
                    let right = self.mul(&a.basis(k), &self.0.mult[l][p]);
                    if left != right {
                        return Err(Error::RingAxiom(format!(
                            "multiplication is not associative on generators {k},{l},{p}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Z/m`.
    pub fn cyclic(m: i64) -> Result<Self> {
        if m < 2 {
            return Err(Error::RingAxiom(format!("Z/{m} needs m >= 2")));
        }
        let additive = FinAbGroup::cyclic(m);
        Self::build(additive, vec![vec![vec![1]]], vec![1], RingKind::Cyclic(m))
    }

    /// `(Z/m)[G]`, generator `g` being the basis vector of group element `g`.
    pub fn group_ring(m: i64, group: &FinGroup) -> Result<Self> {
        if m < 2 {
            return Err(Error::RingAxiom(format!("(Z/{m})[G] needs m >= 2")));
        }
        let n = group.order();
        let additive = FinAbGroup::free(m, n);
        let mult = (0..n)
            .map(|g| (0..n).map(|h| additive.basis(group.mul(g, h))).collect())
            .collect();
        let one = additive.basis(group.identity());
        Self::build(
            additive,
            mult,
            one,
            RingKind::GroupRing {
                m,
                group: group.clone(),
            },
        )
    }

    pub fn additive(&self) -> &FinAbGroup {
        &self.0.additive
    }

    pub fn kind(&self) -> &RingKind {
        &self.0.kind
    }

    pub fn one(&self) -> &Elem {
        &self.0.one
    }

    pub fn zero(&self) -> Elem {
        self.additive().zero()
    }

    pub fn rank(&self) -> usize {
        self.additive().rank()
    }

    pub fn order(&self) -> u128 {
        self.additive().order()
    }

    pub fn generator(&self, k: usize) -> Elem {
        self.additive().basis(k)
    }

    pub fn generator_product(&self, k: usize, l: usize) -> &Elem {
        &self.0.mult[k][l]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Elem {
        self.additive().add(a, b)
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Elem {
        let g = self.additive();
        let mut acc = g.zero();
        for (k, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (l, &y) in b.iter().enumerate() {
                if y != 0 {
                    acc = g.add(&acc, &g.scale(x * y, &self.0.mult[k][l]));
                }
            }
        }
        acc
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank();
        (0..r).all(|k| (0..r).all(|l| self.0.mult[k][l] == self.0.mult[l][k]))
    }

    /// Group-ring data `(m, G)` when this is `(Z/m)[G]`.
    pub fn as_group_ring(&self) -> Option<(i64, &FinGroup)> {
        match &self.0.kind {
            RingKind::GroupRing { m, group } => Some((*m, group)),
            _ => None,
        }
    }

    /// The element `1 * g` of a group ring.
    pub fn group_element(&self, g: usize) -> Elem {
        assert!(self.as_group_ring().is_some(), "not a group ring");
        self.generator(g)
    }

    /// An anti-automorphism used to trade left modules for right modules:
    /// `g ↦ g⁻¹` on group rings, the identity on commutative rings.
    pub fn involution(&self, a: &[i64]) -> Result<Elem> {
        if let Some((_, group)) = self.as_group_ring() {
            let mut out = self.zero();
            for (g, &x) in a.iter().enumerate() {
                out[group.inv(g)] = x;
            }
            Ok(out)
        } else if self.is_commutative() {
            Ok(a.to_vec())
        } else {
            Err(Error::RingAxiom(
                "no canonical anti-automorphism for a noncommutative table ring".into(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_rings() {
        assert_eq!(FiniteRing::cyclic(2).unwrap().order(), 2);
        assert_eq!(FiniteRing::cyclic(6).unwrap().order(), 6);
        let z4 = FiniteRing::cyclic(4).unwrap();
        assert_eq!(z4.mul(&[2], &[2]), vec![0]);
        assert!(FiniteRing::cyclic(1).is_err());
    }

    #[test]
    fn group_ring_of_c2() {
        let r = FiniteRing::group_ring(2, &FinGroup::cyclic(2)).unwrap();
        assert_eq!(r.order(), 4);
        let one_plus_g = vec![1, 1];
        assert_eq!(r.mul(&one_plus_g, &one_plus_g), vec![0, 0]);
    }

    #[test]
    fn group_ring_of_c3_is_commutative() {
        let r = FiniteRing::group_ring(2, &FinGroup::cyclic(3)).unwrap();
        assert_eq!(r.order(), 8);
        assert!(r.is_commutative());
        let s3 = FiniteRing::group_ring(2, &FinGroup::symmetric(3)).unwrap();
        assert!(!s3.is_commutative());
    }

    #[test]
    fn trivial_group_ring_is_cyclic() {
        let r = FiniteRing::group_ring(5, &FinGroup::trivial()).unwrap();
        assert_eq!(r.order(), 5);
        assert_eq!(r.additive(), FiniteRing::cyclic(5).unwrap().additive());
    }

    #[test]
    fn bad_tables_rejected() {
        let a = FinAbGroup::cyclic(4);
        // x*y = 2xy on Z/4 has no unit
        assert!(FiniteRing::from_table(a.clone(), vec![vec![vec![2]]], vec![1]).is_err());
        // one must be an element
        assert!(FiniteRing::from_table(a, vec![vec![vec![1]]], vec![7]).is_err());
    }
}
