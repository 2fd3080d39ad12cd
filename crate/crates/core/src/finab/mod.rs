//! Finite abelian groups in invariant-factor form, their homomorphisms,
//! exactness, and Pontryagin duality at the group level.
//!
//! Every group is stored as its invariant factors `d_1 | d_2 | ... | d_k`
//! with `d_i >= 2`; elements are residue vectors. A homomorphism `A -> B`
//! is an integer matrix with one column per generator of `A`, row `i`
//! read modulo the `i`-th factor of `B`.

mod duality;
mod exact;
mod hom_group;
mod matrix;
mod smith;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use duality::{
    double_dual_check, dual_group, dual_hom, evaluation_map, pairing, Character, PairingTable,
    QmodZ,
};
pub use exact::{check_exact, hom_kio, ExactnessVerdict, ExactnessWitness, Homology, Kio};
pub use hom_group::HomGroup;
pub use matrix::IntMatrix;
pub use smith::{smith_normal_form, SnfDecomposition};

pub(crate) use smith::{gcd, lcm};
use smith::{kernel_mod, quotient_presentation, LinearSolver};

/// A group element: residues `a_i` with `0 <= a_i < d_i`.
pub type Elem = Vec<i64>;

/// Finite abelian group `Z/d_1 + ... + Z/d_k` with `d_i | d_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct FinAbGroup {
    factors: Vec<i64>,
}

impl FinAbGroup {
    pub fn new(factors: Vec<i64>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidFactors {
                reason: format!("factor {bad} is smaller than 2"),
                factors,
            });
        }
        if let Some(i) = (1..factors.len()).find(|&i| factors[i] % factors[i - 1] != 0) {
            return Err(Error::InvalidFactors {
                reason: format!(
                    "factor {} does not divide factor {}",
                    factors[i - 1],
                    factors[i]
                ),
                factors,
            });
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup {
            factors: Vec::new(),
        }
    }

    /// `Z/n`; `n = 1` gives the trivial group.
    pub fn cyclic(n: i64) -> Self {
        assert!(n >= 1, "cyclic group of order {n}");
        if n == 1 {
            Self::trivial()
        } else {
            FinAbGroup { factors: vec![n] }
        }
    }

    /// `(Z/n)^k`.
    pub fn free(n: i64, k: usize) -> Self {
        assert!(n >= 1);
        if n == 1 {
            Self::trivial()
        } else {
            FinAbGroup {
                factors: vec![n; k],
            }
        }
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Largest invariant factor (1 for the trivial group).
    pub fn exponent(&self) -> i64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// Group order. Panics if it does not fit in `u128`.
    pub fn order(&self) -> u128 {
        self.checked_order().expect("group order overflows u128")
    }

    pub fn checked_order(&self) -> Option<u128> {
        self.factors
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.rank()]
    }

    pub fn basis(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    pub fn reduce(&self, v: &[i64]) -> Elem {
        assert_eq!(v.len(), self.rank(), "element has the wrong length");
        v.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| x.rem_euclid(d))
            .collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.rank()
            && v.iter()
                .zip(&self.factors)
                .all(|(&x, &d)| (0..d).contains(&x))
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Elem {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| (x + y).rem_euclid(d))
            .collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Elem {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| (x - y).rem_euclid(d))
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Elem {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| (-x).rem_euclid(d))
            .collect()
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Elem {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| ((k as i128 * x as i128).rem_euclid(d as i128)) as i64)
            .collect()
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn element_order(&self, a: &[i64]) -> i64 {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| d / gcd(x, d))
            .fold(1, lcm)
    }

    /// All elements in lexicographic residue order (last coordinate fastest).
    pub fn elements(&self) -> Elements {
        Elements {
            factors: self.factors.clone(),
            next: Some(self.zero()),
        }
    }

    /// Renormalises `Z/f_1 + ... + Z/f_k` for arbitrary `f_i >= 1`.
    pub fn normalize(raw: &[i64]) -> Normalization {
        Normalization::of(raw)
    }
}

/// Iterator over the elements of a [`FinAbGroup`].
pub struct Elements {
    factors: Vec<i64>,
    next: Option<Elem>,
}

impl Iterator for Elements {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.factors[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// An isomorphism between a diagonal group `Z/f_1 + ... + Z/f_k` (raw
/// coordinates) and its invariant-factor form.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub raw: Vec<i64>,
    pub group: FinAbGroup,
    to_normal: IntMatrix,
    from_normal: IntMatrix,
}

impl Normalization {
    fn of(raw: &[i64]) -> Self {
        assert!(raw.iter().all(|&f| f >= 1), "raw factors must be positive");
        let k = raw.len();
        let mut order: Vec<usize> = (0..k).filter(|&i| raw[i] > 1).collect();
        order.sort_by_key(|&i| (raw[i], i));
        let sorted: Vec<i64> = order.iter().map(|&i| raw[i]).collect();
        if sorted.windows(2).all(|w| w[1] % w[0] == 0) {
            let mut to = IntMatrix::zeros(sorted.len(), k);
            let mut from = IntMatrix::zeros(k, sorted.len());
            for (p, &i) in order.iter().enumerate() {
                to[(p, i)] = 1;
                from[(i, p)] = 1;
            }
            return Normalization {
                raw: raw.to_vec(),
                group: FinAbGroup { factors: sorted },
                to_normal: to,
                from_normal: from,
            };
        }
        let n = raw.iter().copied().fold(1, lcm);
        let rels = IntMatrix::diagonal(raw);
        let p = quotient_presentation(n, k, &rels);
        let mut from = p.lift;
        for (i, &d) in raw.iter().enumerate() {
            for x in from.row_mut(i) {
                *x = x.rem_euclid(d);
            }
        }
        Normalization {
            raw: raw.to_vec(),
            group: FinAbGroup { factors: p.factors },
            to_normal: p.proj,
            from_normal: from,
        }
    }

    /// Raw residues to normalised element.
    pub fn to_normal(&self, raw: &[i64]) -> Elem {
        self.group.reduce(&self.to_normal.mul_vec(raw))
    }

    /// Normalised element to raw residues.
    pub fn from_normal(&self, a: &[i64]) -> Elem {
        self.from_normal
            .mul_vec(a)
            .iter()
            .zip(&self.raw)
            .map(|(&x, &f)| x.rem_euclid(f))
            .collect()
    }

    /// Matrix `normal x raw` of the map raw -> normal.
    pub fn to_normal_matrix(&self) -> &IntMatrix {
        &self.to_normal
    }

    /// Matrix `raw x normal` of the map normal -> raw (rows read mod raw factors).
    pub fn from_normal_matrix(&self) -> &IntMatrix {
        &self.from_normal
    }
}

/// Homomorphism of finite abelian groups.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct AbHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    /// Checks shape and well-definedness; entries are reduced modulo the
    /// target factors.
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let mut matrix = matrix;
        for i in 0..target.rank() {
            let e = target.factors[i];
            for x in matrix.row_mut(i) {
                *x = x.rem_euclid(e);
            }
        }
        for j in 0..source.rank() {
            let d = source.factors[j] as i128;
            for i in 0..target.rank() {
                let e = target.factors[i] as i128;
                if (d * matrix[(i, j)] as i128) % e != 0 {
                    return Err(Error::IllDefinedHom(format!(
                        "generator {j} has order {d} but its image has coordinate {} mod {e}",
                        matrix[(i, j)]
                    )));
                }
            }
        }
        Ok(AbHom {
            source,
            target,
            matrix,
        })
    }

    /// Builds the map sending generator `j` of `source` to `image(j)`.
    pub fn from_images(source: FinAbGroup, target: FinAbGroup, images: &[Elem]) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::Shape(format!(
                "{} images given for {} generators",
                images.len(),
                source.rank()
            )));
        }
        let m = IntMatrix::from_cols(target.rank(), images);
        Self::new(source, target, m)
    }

    pub fn zero(source: FinAbGroup, target: FinAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.rank(), source.rank());
        AbHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(group: FinAbGroup) -> Self {
        let matrix = IntMatrix::identity(group.rank());
        AbHom {
            source: group.clone(),
            target: group,
            matrix,
        }
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, a: &[i64]) -> Elem {
        assert_eq!(
            a.len(),
            self.source.rank(),
            "element not in the source group"
        );
        let mut out = vec![0i64; self.target.rank()];
        for (i, slot) in out.iter_mut().enumerate() {
            let e = self.target.factors[i] as i128;
            let s = self
                .matrix
                .row(i)
                .iter()
                .zip(a)
                .fold(0i128, |acc, (&m, &x)| (acc + m as i128 * x as i128) % e);
            *slot = s.rem_euclid(e) as i64;
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AbHom) -> Result<AbHom> {
        if inner.target != self.source {
            return Err(Error::Mismatch(format!(
                "cannot compose: inner target {:?} differs from outer source {:?}",
                inner.target.factors, self.source.factors
            )));
        }
        let m = self
            .matrix
            .mul_mod_rows(&inner.matrix, &self.target.factors);
        Ok(AbHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: m,
        })
    }

    fn check_parallel(&self, other: &AbHom) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Mismatch(
                "maps have different source or target".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &AbHom) -> Result<AbHom> {
        self.check_parallel(other)?;
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            let e = self.target.factors[i];
            for j in 0..m.cols() {
                m[(i, j)] = (m[(i, j)] + other.matrix[(i, j)]).rem_euclid(e);
            }
        }
        Ok(AbHom {
            matrix: m,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &AbHom) -> Result<AbHom> {
        self.check_parallel(other)?;
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AbHom {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> AbHom {
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            let e = self.target.factors[i] as i128;
            for x in m.row_mut(i) {
                *x = ((*x as i128 * k as i128).rem_euclid(e)) as i64;
            }
        }
        AbHom {
            matrix: m,
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn work_modulus(&self) -> i64 {
        lcm(self.source.exponent(), self.target.exponent())
    }

    /// `[M | e_i ε_i]` restricted to the relation columns that are not
    /// already zero modulo `n`.
    fn relation_matrix(&self, n: i64) -> IntMatrix {
        let extra: Vec<Vec<i64>> = (0..self.target.rank())
            .filter(|&i| self.target.factors[i] % n != 0)
            .map(|i| {
                let mut c = vec![0; self.target.rank()];
                c[i] = self.target.factors[i];
                c
            })
            .collect();
        self.matrix
            .hcat(&IntMatrix::from_cols(self.target.rank(), &extra))
    }

    pub fn kernel(&self) -> Subgroup {
        let n = self.work_modulus();
        let rel = self.relation_matrix(n);
        let gens: Vec<Elem> = kernel_mod(n, &rel)
            .into_iter()
            .map(|g| self.source.reduce(&g[..self.source.rank()]))
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        Subgroup::generated_by(&self.source, &gens)
    }

    pub fn image(&self) -> Subgroup {
        let gens: Vec<Elem> = (0..self.source.rank())
            .map(|j| self.matrix.column(j))
            .collect();
        Subgroup::generated_by(&self.target, &gens)
    }

    pub fn cokernel(&self) -> Quotient {
        let gens: Vec<Elem> = (0..self.source.rank())
            .map(|j| self.matrix.column(j))
            .collect();
        Quotient::by_generators(&self.target, &gens)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_trivial()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Reusable solver for `self(x) = b`.
    pub fn solver(&self) -> PreimageSolver {
        let n = self.work_modulus();
        let rel = self.relation_matrix(n);
        PreimageSolver {
            source: self.source.clone(),
            target: self.target.clone(),
            solver: LinearSolver::new(&rel, n),
        }
    }

    /// Some `a` with `self(a) = b`, chosen deterministically.
    pub fn preimage(&self, b: &[i64]) -> Option<Elem> {
        self.solver().solve(b)
    }

    pub fn inverse(&self) -> Option<AbHom> {
        if !self.is_bijective() {
            return None;
        }
        let s = self.solver();
        let cols: Vec<Elem> = (0..self.target.rank())
            .map(|i| s.solve(&self.target.basis(i)).expect("bijective"))
            .collect();
        Some(
            AbHom::from_images(self.target.clone(), self.source.clone(), &cols)
                .expect("inverse is well defined"),
        )
    }

    /// Factors `self` through an injective map `incl` with the same target:
    /// returns `g` with `incl ∘ g = self`.
    pub fn factor_through(&self, incl: &AbHom) -> Result<AbHom> {
        if incl.target != self.target {
            return Err(Error::Mismatch(
                "factor_through needs a common target".into(),
            ));
        }
        let s = incl.solver();
        let cols = (0..self.source.rank())
            .map(|j| {
                s.solve(&self.matrix.column(j)).ok_or_else(|| {
                    Error::Mismatch(format!("generator {j} does not land in the image"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        AbHom::from_images(self.source.clone(), incl.source.clone(), &cols)
    }
}

/// Solver for `f(x) = b` built once from the Smith form of `f`.
#[derive(Clone, Debug)]
pub struct PreimageSolver {
    source: FinAbGroup,
    target: FinAbGroup,
    solver: LinearSolver,
}

impl PreimageSolver {
    pub fn solve(&self, b: &[i64]) -> Option<Elem> {
        let b = self.target.reduce(b);
        let x = self.solver.solve(&b)?;
        Some(self.source.reduce(&x[..self.source.rank()]))
    }
}

/// A subgroup given as an abstract group with an injective inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub group: FinAbGroup,
    pub inclusion: AbHom,
}

impl Subgroup {
    /// The subgroup of `ambient` generated by `gens`.
    pub fn generated_by(ambient: &FinAbGroup, gens: &[Elem]) -> Subgroup {
        let gens: Vec<Elem> = gens
            .iter()
            .map(|g| ambient.reduce(g))
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        if gens.is_empty() || ambient.is_trivial() {
            return Subgroup {
                group: FinAbGroup::trivial(),
                inclusion: AbHom::zero(FinAbGroup::trivial(), ambient.clone()),
            };
        }
        let n = ambient.exponent();
        let t = gens.len();
        let gm = IntMatrix::from_cols(ambient.rank(), &gens);
        let extra: Vec<Vec<i64>> = (0..ambient.rank())
            .filter(|&i| ambient.factors[i] % n != 0)
            .map(|i| {
                let mut c = vec![0; ambient.rank()];
                c[i] = ambient.factors[i];
                c
            })
            .collect();
        let big = gm.hcat(&IntMatrix::from_cols(ambient.rank(), &extra));
        let rels: Vec<Vec<i64>> = kernel_mod(n, &big)
            .into_iter()
            .map(|v| v[..t].to_vec())
            .collect();
        let relm = IntMatrix::from_cols(t, &rels);
        let p = quotient_presentation(n, t, &relm);
        let group = FinAbGroup { factors: p.factors };
        let incl = gm.mul_mod_rows(&p.lift, &ambient.factors);
        let inclusion =
            AbHom::new(group.clone(), ambient.clone(), incl).expect("inclusion is well defined");
        Subgroup { group, inclusion }
    }

    pub fn ambient(&self) -> &FinAbGroup {
        self.inclusion.target()
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        self.inclusion.preimage(a).is_some()
    }
}

/// A quotient group with its projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub group: FinAbGroup,
    pub projection: AbHom,
}

impl Quotient {
    pub fn by_generators(ambient: &FinAbGroup, gens: &[Elem]) -> Quotient {
        if ambient.is_trivial() {
            return Quotient {
                group: FinAbGroup::trivial(),
                projection: AbHom::zero(ambient.clone(), FinAbGroup::trivial()),
            };
        }
        let n = ambient.exponent();
        let mut cols: Vec<Vec<i64>> = gens.iter().map(|g| ambient.reduce(g)).collect();
        for i in 0..ambient.rank() {
            if ambient.factors[i] % n != 0 {
                let mut c = vec![0; ambient.rank()];
                c[i] = ambient.factors[i];
                cols.push(c);
            }
        }
        let relm = IntMatrix::from_cols(ambient.rank(), &cols);
        let p = quotient_presentation(n, ambient.rank(), &relm);
        let group = FinAbGroup { factors: p.factors };
        let projection =
            AbHom::new(ambient.clone(), group.clone(), p.proj).expect("projection is well defined");
        Quotient { group, projection }
    }

    pub fn ambient(&self) -> &FinAbGroup {
        self.projection.source()
    }
}

/// Direct sum with renormalised invariant factors, injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FinAbGroup,
    pub summands: Vec<FinAbGroup>,
    pub injections: Vec<AbHom>,
    pub projections: Vec<AbHom>,
    offsets: Vec<usize>,
    normalization: Normalization,
}

/// Direct sum of a list of groups; the empty list gives the trivial group.
pub fn direct_sum(groups: &[FinAbGroup]) -> DirectSum {
    let raw: Vec<i64> = groups
        .iter()
        .flat_map(|g| g.factors.iter().copied())
        .collect();
    let norm = Normalization::of(&raw);
    let group = norm.group.clone();
    let mut offsets = Vec::with_capacity(groups.len() + 1);
    let mut off = 0;
    for g in groups {
        offsets.push(off);
        off += g.rank();
    }
    offsets.push(off);
    let mut injections = Vec::with_capacity(groups.len());
    let mut projections = Vec::with_capacity(groups.len());
    for (s, g) in groups.iter().enumerate() {
        let cols: Vec<usize> = (offsets[s]..offsets[s + 1]).collect();
        let inj = norm.to_normal.select_cols(&cols);
        injections.push(AbHom::new(g.clone(), group.clone(), inj).expect("injection"));
        let proj = norm.from_normal.select_rows(&cols);
        projections.push(AbHom::new(group.clone(), g.clone(), proj).expect("projection"));
    }
    DirectSum {
        group,
        summands: groups.to_vec(),
        injections,
        projections,
        offsets,
        normalization: norm,
    }
}

impl DirectSum {
    /// Element of the sum with the given component in each summand.
    pub fn pack(&self, parts: &[Elem]) -> Elem {
        assert_eq!(parts.len(), self.summands.len());
        let raw: Vec<i64> = parts.iter().flatten().copied().collect();
        self.normalization.to_normal(&raw)
    }

    /// Components of an element of the sum.
    pub fn unpack(&self, a: &[i64]) -> Vec<Elem> {
        let raw = self.normalization.from_normal(a);
        (0..self.summands.len())
            .map(|s| raw[self.offsets[s]..self.offsets[s + 1]].to_vec())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// The map `source_sum -> self` with block `(t, s)` given by `block(t, s)`
    /// (a map from summand `s` of `source` to summand `t` of `self`).
    pub fn assemble_from(
        &self,
        source: &DirectSum,
        mut block: impl FnMut(usize, usize) -> Option<AbHom>,
    ) -> Result<AbHom> {
        let mut raw = IntMatrix::zeros(self.offsets[self.len()], source.offsets[source.len()]);
        for t in 0..self.len() {
            for s in 0..source.len() {
                if let Some(b) = block(t, s) {
                    if b.source() != &source.summands[s] || b.target() != &self.summands[t] {
                        return Err(Error::Mismatch(format!(
                            "block ({t}, {s}) has the wrong shape"
                        )));
                    }
                    for i in 0..b.target().rank() {
                        for j in 0..b.source().rank() {
                            raw[(self.offsets[t] + i, source.offsets[s] + j)] = b.matrix()[(i, j)];
                        }
                    }
                }
            }
        }
        self.from_raw(source, &raw)
    }

    /// The map `source -> self` given by a matrix in summand-by-summand
    /// coordinates on both sides.
    pub fn from_raw(&self, source: &DirectSum, raw: &IntMatrix) -> Result<AbHom> {
        if raw.rows() != self.offsets[self.len()] || raw.cols() != source.offsets[source.len()] {
            return Err(Error::Shape("raw block matrix has the wrong shape".into()));
        }
        let raw_target: Vec<i64> = self.normalization.raw.clone();
        let tmp = raw.mul_mod_rows(&source.normalization.from_normal, &raw_target);
        let m = self
            .normalization
            .to_normal
            .mul_mod_rows(&tmp, &self.group.factors);
        AbHom::new(source.group.clone(), self.group.clone(), m)
    }

    /// The map `source -> self` whose component into summand `t` is `parts[t]`.
    pub fn map_into(&self, source: &FinAbGroup, parts: &[AbHom]) -> Result<AbHom> {
        assert_eq!(parts.len(), self.len());
        let mut acc = AbHom::zero(source.clone(), self.group.clone());
        for (t, p) in parts.iter().enumerate() {
            acc = acc.add(&self.injections[t].compose(p)?)?;
        }
        Ok(acc)
    }

    /// The map `self -> target` restricting to `parts[s]` on summand `s`.
    pub fn map_out(&self, target: &FinAbGroup, parts: &[AbHom]) -> Result<AbHom> {
        assert_eq!(parts.len(), self.len());
        let mut acc = AbHom::zero(self.group.clone(), target.clone());
        for (s, p) in parts.iter().enumerate() {
            acc = acc.add(&p.compose(&self.projections[s])?)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[i64]) -> FinAbGroup {
        FinAbGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn rejects_broken_chain() {
        assert!(FinAbGroup::new(vec![2, 3]).is_err());
        assert!(FinAbGroup::new(vec![1]).is_err());
        assert!(FinAbGroup::new(vec![2, 4, 12]).is_ok());
        assert_eq!(FinAbGroup::trivial().order(), 1);
    }

    #[test]
    fn element_enumeration() {
        let a = g(&[2, 4]);
        let all: Vec<Elem> = a.elements().collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[7], vec![1, 3]);
        assert_eq!(FinAbGroup::trivial().elements().count(), 1);
    }

    #[test]
    fn doubling_on_z4() {
        let z4 = g(&[4]);
        let f = AbHom::new(z4.clone(), z4.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let k = hom_kio(&f);
        assert_eq!(k.kernel.group, g(&[2]));
        assert_eq!(k.image.group, g(&[2]));
        assert_eq!(k.cokernel.group, g(&[2]));
    }

    #[test]
    fn ill_defined_map_rejected() {
        // Z/2 -> Z/4 sending 1 to 1 is not a homomorphism
        let r = AbHom::new(g(&[2]), g(&[4]), IntMatrix::from_rows(&[vec![1]]));
        assert!(matches!(r, Err(Error::IllDefinedHom(_))));
        let r = AbHom::new(g(&[2]), g(&[4]), IntMatrix::from_rows(&[vec![1, 0]]));
        assert!(matches!(r, Err(Error::Shape(_))));
    }

    #[test]
    fn compose_reduction_after_doubling_is_zero() {
        let f = AbHom::new(g(&[2]), g(&[4]), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let red = AbHom::new(g(&[4]), g(&[2]), IntMatrix::from_rows(&[vec![1]])).unwrap();
        let c = red.compose(&f).unwrap();
        for a in c.source().elements() {
            assert_eq!(c.apply(&a), red.apply(&f.apply(&a)));
        }
        assert!(c.is_zero());
        assert!(f.compose(&f).is_err());
    }

    #[test]
    fn direct_sum_two_three() {
        let s = direct_sum(&[g(&[2]), g(&[3])]);
        assert_eq!(s.group, g(&[6]));
        for i in 0..2 {
            for j in 0..2 {
                let c = s.projections[i].compose(&s.injections[j]).unwrap();
                if i == j {
                    assert_eq!(c, AbHom::identity(s.summands[i].clone()));
                } else {
                    assert!(c.is_zero());
                }
            }
        }
        let e = direct_sum(&[]);
        assert!(e.group.is_trivial());
        assert_eq!(direct_sum(&[g(&[2]), g(&[2])]).group, g(&[2, 2]));
    }

    #[test]
    fn pack_unpack() {
        let s = direct_sum(&[g(&[2]), g(&[3]), g(&[4])]);
        for a in s.summands[0].elements() {
            for b in s.summands[1].elements() {
                for c in s.summands[2].elements() {
                    let parts = vec![a.clone(), b.clone(), c.clone()];
                    assert_eq!(s.unpack(&s.pack(&parts)), parts);
                }
            }
        }
    }

    #[test]
    fn preimages_and_inverse() {
        let z6 = g(&[6]);
        let f = AbHom::new(z6.clone(), z6.clone(), IntMatrix::from_rows(&[vec![5]])).unwrap();
        let inv = f.inverse().unwrap();
        assert_eq!(inv.compose(&f).unwrap(), AbHom::identity(z6.clone()));
        let d = AbHom::new(z6.clone(), z6.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert!(d.preimage(&[3]).is_none());
        let x = d.preimage(&[4]).unwrap();
        assert_eq!(d.apply(&x), vec![4]);
    }

    #[test]
    fn normalization_of_mixed_factors() {
        let n = FinAbGroup::normalize(&[4, 6, 1, 9]);
        assert_eq!(n.group.factors(), &[6, 36]);
        for a in n.group.elements() {
            assert_eq!(n.to_normal(&n.from_normal(&a)), a);
        }
    }
}
