//! Characters into `Q/Z`, dual groups and dual maps.
//!
//! The dual of `Z/d_1 + ... + Z/d_k` is identified with the same group: the
//! residue tuple `χ` is the character `a ↦ Σ χ_i a_i / d_i mod 1`.

use std::fmt;

use serde::{Serialize, Serializer};

use super::{gcd, AbHom, Elem, FinAbGroup, IntMatrix};
use crate::error::{Error, Result};

/// An element of `Q/Z` as a reduced fraction `num/den` with `0 <= num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: i64,
    den: i64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = gcd(num, den).max(1);
        QmodZ {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn scale(self, k: i64) -> QmodZ {
        let a = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        QmodZ::new(a as i64, self.den)
    }

    /// `self * n` as an integer residue modulo `n`, when `n * self` is integral.
    pub fn times_integral(self, n: i64) -> Option<i64> {
        if n % self.den != 0 {
            return None;
        }
        Some(self.num * (n / self.den))
    }
}

impl std::ops::Add for QmodZ {
    type Output = QmodZ;

    fn add(self, other: QmodZ) -> QmodZ {
        let den = super::lcm(self.den, other.den);
        let a = self.num as i128 * (den / self.den) as i128
            + other.num as i128 * (den / other.den) as i128;
        QmodZ::new((a.rem_euclid(den as i128)) as i64, den)
    }
}

impl std::ops::Neg for QmodZ {
    type Output = QmodZ;

    fn neg(self) -> QmodZ {
        QmodZ::new(-self.num, self.den)
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for QmodZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A character of `group`, stored as a residue tuple in the dual group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub group: FinAbGroup,
    pub values: Elem,
}

impl Character {
    pub fn new(group: FinAbGroup, values: Elem) -> Result<Self> {
        if !group.contains(&values) {
            return Err(Error::Shape(format!(
                "{values:?} is not a residue tuple of {:?}",
                group.factors()
            )));
        }
        Ok(Character { group, values })
    }

    pub fn eval(&self, a: &[i64]) -> QmodZ {
        pairing(&self.group, &self.values, a)
    }
}

/// `⟨χ, a⟩ = Σ χ_i a_i / d_i mod 1`.
pub fn pairing(group: &FinAbGroup, chi: &[i64], a: &[i64]) -> QmodZ {
    let n = group.exponent();
    let mut acc: i128 = 0;
    for ((&c, &x), &d) in chi.iter().zip(a).zip(group.factors()) {
        acc = (acc + c as i128 * x as i128 * (n / d) as i128).rem_euclid(n as i128);
    }
    QmodZ::new(acc as i64, n)
}

pub fn dual_group(group: &FinAbGroup) -> FinAbGroup {
    group.clone()
}

/// `f^∨ : B^∨ -> A^∨`, `⟨f^∨ χ, a⟩ = ⟨χ, f a⟩`.
pub fn dual_hom(f: &AbHom) -> AbHom {
    let (a, b) = (f.source(), f.target());
    let m = f.matrix();
    let mut n = IntMatrix::zeros(a.rank(), b.rank());
    for j in 0..a.rank() {
        let d = a.factors()[j] as i128;
        for i in 0..b.rank() {
            let e = b.factors()[i] as i128;
            let num = d * m[(i, j)] as i128;
            debug_assert_eq!(num % e, 0);
            n[(j, i)] = ((num / e).rem_euclid(d)) as i64;
        }
    }
    AbHom::new(dual_group(b), dual_group(a), n).expect("dual of a homomorphism is well defined")
}

/// The evaluation map `A -> A^∨∨`, computed from the pairing values on the
/// standard characters.
pub fn evaluation_map(group: &FinAbGroup) -> AbHom {
    let dual = dual_group(group);
    let images: Vec<Elem> = (0..group.rank())
        .map(|j| evaluation_coordinates(group, &dual, &group.basis(j)))
        .collect();
    AbHom::from_images(group.clone(), dual_group(&dual), &images)
        .expect("evaluation is a homomorphism")
}

/// Coordinates of `χ ↦ ⟨χ, a⟩` in `A^∨∨`: its values on the basis characters.
fn evaluation_coordinates(group: &FinAbGroup, dual: &FinAbGroup, a: &[i64]) -> Elem {
    (0..dual.rank())
        .map(|i| {
            let v = pairing(group, &dual.basis(i), a);
            v.times_integral(dual.factors()[i])
                .expect("value has denominator dividing the factor")
        })
        .collect()
}

/// Largest group for which [`double_dual_check`] enumerates every element.
const ENUMERATION_LIMIT: u128 = 1 << 20;

/// True iff `a ↦ (χ ↦ ⟨χ, a⟩)` is a bijection `A -> A^∨∨`.
pub fn double_dual_check(group: &FinAbGroup) -> bool {
    let dual = dual_group(group);
    match group.checked_order() {
        Some(order) if order <= ENUMERATION_LIMIT => {
            let mut seen = std::collections::HashSet::new();
            for a in group.elements() {
                let image = evaluation_coordinates(group, &dual, &a);
                if !seen.insert(image) {
                    return false;
                }
            }
            seen.len() as u128 == dual.order()
        }
        _ => evaluation_map(group).is_bijective(),
    }
}

/// A biadditive pairing `L x R -> Q/Z` given by its values on generator pairs.
#[derive(Clone, Debug)]
pub struct PairingTable {
    pub left: FinAbGroup,
    pub right: FinAbGroup,
    values: Vec<Vec<QmodZ>>,
}

impl PairingTable {
    pub fn new(left: FinAbGroup, right: FinAbGroup, values: Vec<Vec<QmodZ>>) -> Result<Self> {
        if values.len() != left.rank() || values.iter().any(|r| r.len() != right.rank()) {
            return Err(Error::Shape("pairing table has the wrong shape".into()));
        }
        for (k, row) in values.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                if v.scale(left.factors()[k]) != QmodZ::ZERO
                    || v.scale(right.factors()[l]) != QmodZ::ZERO
                {
                    return Err(Error::IllDefinedHom(format!(
                        "pairing value {v} on generators ({k}, {l}) is not killed by their orders"
                    )));
                }
            }
        }
        Ok(PairingTable {
            left,
            right,
            values,
        })
    }

    /// Builds the table by evaluating `f` on generator pairs.
    pub fn from_fn(
        left: FinAbGroup,
        right: FinAbGroup,
        mut f: impl FnMut(&[i64], &[i64]) -> QmodZ,
    ) -> Result<Self> {
        let values = (0..left.rank())
            .map(|k| {
                (0..right.rank())
                    .map(|l| f(&left.basis(k), &right.basis(l)))
                    .collect()
            })
            .collect();
        Self::new(left, right, values)
    }

    pub fn value(&self, k: usize, l: usize) -> QmodZ {
        self.values[k][l]
    }

    pub fn evaluate(&self, x: &[i64], y: &[i64]) -> QmodZ {
        let mut acc = QmodZ::ZERO;
        for (k, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (l, &b) in y.iter().enumerate() {
                if b != 0 {
                    acc = acc + self.values[k][l].scale(a).scale(b);
                }
            }
        }
        acc
    }

    /// `L -> R^∨`, `x ↦ ⟨x, -⟩`.
    pub fn left_map(&self) -> AbHom {
        let mut m = IntMatrix::zeros(self.right.rank(), self.left.rank());
        for k in 0..self.left.rank() {
            for l in 0..self.right.rank() {
                let e = self.right.factors()[l];
                m[(l, k)] = self.values[k][l]
                    .times_integral(e)
                    .expect("checked at construction");
            }
        }
        AbHom::new(self.left.clone(), dual_group(&self.right), m)
            .expect("adjoint map is well defined")
    }

    /// `R -> L^∨`, `y ↦ ⟨-, y⟩`.
    pub fn right_map(&self) -> AbHom {
        let mut m = IntMatrix::zeros(self.left.rank(), self.right.rank());
        for k in 0..self.left.rank() {
            let d = self.left.factors()[k];
            for l in 0..self.right.rank() {
                m[(k, l)] = self.values[k][l]
                    .times_integral(d)
                    .expect("checked at construction");
            }
        }
        AbHom::new(self.right.clone(), dual_group(&self.left), m)
            .expect("adjoint map is well defined")
    }

    /// Both adjoint maps are injective (hence bijective, orders being equal).
    pub fn is_nondegenerate(&self) -> bool {
        self.left_map().is_injective() && self.right_map().is_injective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[i64]) -> FinAbGroup {
        FinAbGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn qmodz_arithmetic() {
        assert_eq!(QmodZ::new(3, 6), QmodZ::new(1, 2));
        assert_eq!(QmodZ::new(1, 2) + QmodZ::new(1, 2), QmodZ::ZERO);
        assert_eq!(QmodZ::new(1, 3) + QmodZ::new(1, 2), QmodZ::new(5, 6));
        assert_eq!(QmodZ::new(-1, 4), QmodZ::new(3, 4));
        assert_eq!(QmodZ::new(2, 3).to_string(), "2/3");
    }

    #[test]
    fn dual_of_doubling_is_reduction() {
        let f = AbHom::new(g(&[2]), g(&[4]), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let d = dual_hom(&f);
        assert_eq!(d.source(), &g(&[4]));
        assert_eq!(d.target(), &g(&[2]));
        assert_eq!(d.matrix().to_rows(), vec![vec![1]]);
        for chi in g(&[4]).elements() {
            for a in g(&[2]).elements() {
                assert_eq!(
                    pairing(&g(&[2]), &d.apply(&chi), &a),
                    pairing(&g(&[4]), &chi, &f.apply(&a))
                );
            }
        }
    }

    #[test]
    fn double_dual_small() {
        assert!(double_dual_check(&g(&[2])));
        assert!(double_dual_check(&FinAbGroup::trivial()));
        assert!(double_dual_check(&g(&[2, 6])));
        assert_eq!(evaluation_map(&g(&[2, 6])), AbHom::identity(g(&[2, 6])));
    }

    #[test]
    fn standard_pairing_is_nondegenerate() {
        let a = g(&[2, 4]);
        let p = PairingTable::from_fn(a.clone(), a.clone(), |x, y| pairing(&a, x, y)).unwrap();
        assert!(p.is_nondegenerate());
        let zero = PairingTable::from_fn(a.clone(), a.clone(), |_, _| QmodZ::ZERO).unwrap();
        assert!(!zero.is_nondegenerate());
    }
}
