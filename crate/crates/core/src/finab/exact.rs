use serde::Serialize;

use super::{AbHom, Elem, FinAbGroup, Quotient, Subgroup};
use crate::error::{Error, Result};

/// Kernel, image and cokernel of one homomorphism.
#[derive(Clone, Debug)]
pub struct Kio {
    pub kernel: Subgroup,
    pub image: Subgroup,
    pub cokernel: Quotient,
}

pub fn hom_kio(f: &AbHom) -> Kio {
    Kio {
        kernel: f.kernel(),
        image: f.image(),
        cokernel: f.cokernel(),
    }
}

/// Why a sequence fails to be exact at a position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactnessWitness {
    /// `element` (in the group before the position) maps to a nonzero
    /// `image` under the composite of the two maps.
    NotComplex { element: Elem, image: Elem },
    /// `element` lies in the outgoing kernel but not in the incoming image.
    KernelNotImage { element: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessVerdict {
    pub position: usize,
    pub exact: bool,
    pub witness: Option<ExactnessWitness>,
}

/// Homology `ker g / im f` of `A --f--> B --g--> C` with `g ∘ f = 0`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub group: FinAbGroup,
    pub cycles: Subgroup,
    /// `cycles.group -> group`.
    pub projection: AbHom,
}

impl Homology {
    pub fn new(f: &AbHom, g: &AbHom) -> Result<Homology> {
        if f.target() != g.source() {
            return Err(Error::Mismatch("maps are not composable".into()));
        }
        if !g.compose(f)?.is_zero() {
            return Err(Error::NotExact(
                "the composite of the two maps is not zero".into(),
            ));
        }
        let cycles = g.kernel();
        let into = f.factor_through(&cycles.inclusion)?;
        let q = into.cokernel();
        Ok(Homology {
            group: q.group,
            cycles,
            projection: q.projection,
        })
    }

    /// Class of a cycle `b` (an element of the middle group in `ker g`).
    pub fn class_of(&self, b: &[i64]) -> Option<Elem> {
        let c = self.cycles.inclusion.preimage(b)?;
        Some(self.projection.apply(&c))
    }

    /// A cycle representing class `h`.
    pub fn representative(&self, h: &[i64]) -> Elem {
        let c = self
            .projection
            .preimage(h)
            .expect("projection is surjective");
        self.cycles.inclusion.apply(&c)
    }

    /// Cycles representing the generators of the homology group.
    pub fn generator_representatives(&self) -> Vec<Elem> {
        (0..self.group.rank())
            .map(|i| self.representative(&self.group.basis(i)))
            .collect()
    }
}

/// Exactness of `G_0 -f_0-> G_1 -> ... -f_{k-1}-> G_k` at group `G_position`.
///
/// At position 0 the incoming map is the zero map from the trivial group
/// (an injectivity test); at position `k` the outgoing map is the zero map
/// to the trivial group (a surjectivity test).
pub fn check_exact(seq: &[AbHom], position: usize) -> Result<ExactnessVerdict> {
    if seq.is_empty() {
        return Err(Error::Shape("exactness needs at least one map".into()));
    }
    for (i, w) in seq.windows(2).enumerate() {
        if w[0].target() != w[1].source() {
            return Err(Error::Mismatch(format!(
                "maps {i} and {} are not composable",
                i + 1
            )));
        }
    }
    if position > seq.len() {
        return Err(Error::Shape(format!(
            "position {position} out of range for a sequence of {} maps",
            seq.len()
        )));
    }
    let middle = if position < seq.len() {
        seq[position].source().clone()
    } else {
        seq[position - 1].target().clone()
    };
    let incoming = if position == 0 {
        AbHom::zero(FinAbGroup::trivial(), middle.clone())
    } else {
        seq[position - 1].clone()
    };
    let outgoing = if position == seq.len() {
        AbHom::zero(middle.clone(), FinAbGroup::trivial())
    } else {
        seq[position].clone()
    };
    Ok(exactness_at(&incoming, &outgoing, position))
}

pub(crate) fn exactness_at(f: &AbHom, g: &AbHom, position: usize) -> ExactnessVerdict {
    let gf = g.compose(f).expect("composable");
    if let Some(j) =
        (0..f.source().rank()).find(|&j| !gf.matrix().column(j).iter().all(|&x| x == 0))
    {
        let element = f.source().basis(j);
        let image = gf.apply(&element);
        return ExactnessVerdict {
            position,
            exact: false,
            witness: Some(ExactnessWitness::NotComplex { element, image }),
        };
    }
    let h = Homology::new(f, g).expect("checked to be a complex");
    if h.group.is_trivial() {
        ExactnessVerdict {
            position,
            exact: true,
            witness: None,
        }
    } else {
        let element = h.representative(&h.group.basis(0));
        ExactnessVerdict {
            position,
            exact: false,
            witness: Some(ExactnessWitness::KernelNotImage { element }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finab::IntMatrix;

    fn g(f: &[i64]) -> FinAbGroup {
        FinAbGroup::new(f.to_vec()).unwrap()
    }

    fn hom(s: &[i64], t: &[i64], rows: &[Vec<i64>]) -> AbHom {
        let m = if rows.is_empty() {
            IntMatrix::zeros(t.len(), s.len())
        } else {
            IntMatrix::from_rows(rows)
        };
        AbHom::new(g(s), g(t), m).unwrap()
    }

    #[test]
    fn z2_z4_z2_is_exact_everywhere() {
        let seq = [hom(&[2], &[4], &[vec![2]]), hom(&[4], &[2], &[vec![1]])];
        for p in 0..=2 {
            let v = check_exact(&seq, p).unwrap();
            assert!(v.exact, "position {p}");
            assert!(v.witness.is_none());
        }
    }

    #[test]
    fn zero_maps_fail_in_the_middle() {
        let z = hom(&[2], &[2], &[vec![0]]);
        let v = check_exact(&[z.clone(), z], 1).unwrap();
        assert!(!v.exact);
        match v.witness {
            Some(ExactnessWitness::KernelNotImage { element }) => assert_eq!(element, vec![1]),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn single_map_at_target_tests_surjectivity() {
        let onto = hom(&[4], &[2], &[vec![1]]);
        assert!(check_exact(&[onto], 1).unwrap().exact);
        let not_onto = hom(&[4], &[4], &[vec![2]]);
        assert!(!check_exact(&[not_onto], 1).unwrap().exact);
    }

    #[test]
    fn non_complex_is_reported() {
        let id = AbHom::identity(g(&[3]));
        let v = check_exact(&[id.clone(), id], 1).unwrap();
        assert!(matches!(
            v.witness,
            Some(ExactnessWitness::NotComplex { .. })
        ));
    }

    #[test]
    fn bad_sequences_rejected() {
        let a = hom(&[2], &[4], &[vec![2]]);
        assert!(check_exact(&[a.clone(), a.clone()], 1).is_err());
        assert!(check_exact(&[a], 5).is_err());
        assert!(check_exact(&[], 0).is_err());
    }

    #[test]
    fn kio_examples() {
        let id = AbHom::identity(g(&[6]));
        let k = hom_kio(&id);
        assert!(k.kernel.group.is_trivial());
        assert_eq!(k.image.group, g(&[6]));
        assert!(k.cokernel.group.is_trivial());
        let zero = AbHom::zero(g(&[2]), g(&[3]));
        let k = hom_kio(&zero);
        assert_eq!(k.kernel.group, g(&[2]));
        assert!(k.image.group.is_trivial());
        assert_eq!(k.cokernel.group, g(&[3]));
    }
}
