//! Stone spaces as finite towers of finite sets.
//!
//! A [`LevelChain`] is `X_0 <- X_1 <- ... <- X_{N-1}` with surjections
//! between consecutive levels; the space itself is the top level, and a
//! clopen set at a lower level stands for its pullback to the top.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest level for which every subset can be enumerated.
pub const MAX_ENUMERATED_LEVEL: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelChain {
    sizes: Vec<usize>,
    /// `projections[i][x]` is the image in `X_i` of `x ∈ X_{i+1}`.
    projections: Vec<Vec<usize>>,
}

/// Outcome of [`validate_chain`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainValidation {
    pub valid: bool,
    /// Index `i` of the first projection `X_{i+1} -> X_i` that is not onto.
    pub failing_projection: Option<usize>,
    /// A point of `X_i` missed by that projection.
    pub missed_point: Option<usize>,
}

/// Checks that every projection of a chain is surjective.
pub fn validate_chain(sizes: &[usize], projections: &[Vec<usize>]) -> Result<ChainValidation> {
    check_shape(sizes, projections)?;
    for (i, p) in projections.iter().enumerate() {
        let hit: BTreeSet<usize> = p.iter().copied().collect();
        if let Some(missed) = (0..sizes[i]).find(|y| !hit.contains(y)) {
            return Ok(ChainValidation {
                valid: false,
                failing_projection: Some(i),
                missed_point: Some(missed),
            });
        }
    }
    Ok(ChainValidation {
        valid: true,
        failing_projection: None,
        missed_point: None,
    })
}

fn check_shape(sizes: &[usize], projections: &[Vec<usize>]) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::InvalidChain(
            "a chain needs at least one level".into(),
        ));
    }
    if projections.len() + 1 != sizes.len() {
        return Err(Error::InvalidChain(format!(
            "{} levels need {} projections, got {}",
            sizes.len(),
            sizes.len() - 1,
            projections.len()
        )));
    }
    for (i, p) in projections.iter().enumerate() {
        if p.len() != sizes[i + 1] {
            return Err(Error::InvalidChain(format!(
                "projection {i} has {} entries for a level of size {}",
                p.len(),
                sizes[i + 1]
            )));
        }
        if let Some(&bad) = p.iter().find(|&&y| y >= sizes[i]) {
            return Err(Error::InvalidChain(format!(
                "projection {i} sends a point to {bad}, outside level {i}"
            )));
        }
    }
    Ok(())
}

impl LevelChain {
    /// A chain whose projections are all surjective.
    pub fn new(sizes: Vec<usize>, projections: Vec<Vec<usize>>) -> Result<Self> {
        let v = validate_chain(&sizes, &projections)?;
        if let (Some(i), Some(y)) = (v.failing_projection, v.missed_point) {
            return Err(Error::InvalidChain(format!(
                "projection {i} misses point {y}"
            )));
        }
        Ok(LevelChain { sizes, projections })
    }

    /// The discrete space with `n` points, as a one-level chain.
    pub fn single(n: usize) -> Self {
        LevelChain {
            sizes: vec![n],
            projections: Vec::new(),
        }
    }

    /// Two levels `X_1 -> X_0` given by one projection.
    pub fn two_level(base: usize, projection: Vec<usize>) -> Result<Self> {
        Self::new(vec![base, projection.len()], vec![projection])
    }

    pub fn num_levels(&self) -> usize {
        self.sizes.len()
    }

    pub fn top(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self, level: usize) -> usize {
        self.sizes[level]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn projections(&self) -> &[Vec<usize>] {
        &self.projections
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level >= self.num_levels() {
            return Err(Error::BadLevel(format!(
                "level {level} in a chain with {} levels",
                self.num_levels()
            )));
        }
        Ok(())
    }

    /// Image of `x ∈ X_from` in `X_to`, for `to <= from`.
    pub fn project(&self, x: usize, from: usize, to: usize) -> usize {
        assert!(
            to <= from && from < self.num_levels(),
            "cannot project from level {from} to {to}"
        );
        let mut y = x;
        for l in (to..from).rev() {
            y = self.projections[l][y];
        }
        y
    }

    /// Points of `X_from` lying over `y ∈ X_to`.
    pub fn fibre(&self, y: usize, to: usize, from: usize) -> Vec<usize> {
        (0..self.sizes[from])
            .filter(|&x| self.project(x, from, to) == y)
            .collect()
    }

    /// Blocks of `X_j` over the points of `X_i`, for `i < j`.
    pub fn fibre_partition(&self, j: usize, i: usize) -> Result<Vec<Vec<usize>>> {
        self.check_level(j)?;
        if i >= j {
            return Err(Error::BadLevel(format!(
                "fibre partition needs i < j, got i = {i}, j = {j}"
            )));
        }
        let mut blocks = vec![Vec::new(); self.sizes[i]];
        for x in 0..self.sizes[j] {
            blocks[self.project(x, j, i)].push(x);
        }
        Ok(blocks)
    }

    /// Every subset of `X_level` as a clopen, in binary counting order.
    pub fn enumerate_clopens(&self, level: usize) -> Result<Vec<Clopen>> {
        self.check_level(level)?;
        let n = self.sizes[level];
        if n > MAX_ENUMERATED_LEVEL {
            return Err(Error::SizeCap(format!(
                "level {level} has {n} points; at most {MAX_ENUMERATED_LEVEL} can be enumerated"
            )));
        }
        Ok((0u32..1 << n)
            .map(|mask| Clopen {
                level,
                points: (0..n).filter(|&x| mask >> x & 1 == 1).collect(),
            })
            .collect())
    }
}

/// A clopen set: a subset of one level of the chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Clopen {
    pub level: usize,
    pub points: BTreeSet<usize>,
}

impl Clopen {
    pub fn new(
        chain: &LevelChain,
        level: usize,
        points: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        chain.check_level(level)?;
        let points: BTreeSet<usize> = points.into_iter().collect();
        if let Some(&bad) = points.iter().find(|&&x| x >= chain.size(level)) {
            return Err(Error::BadLevel(format!(
                "point {bad} is not in level {level}"
            )));
        }
        Ok(Clopen { level, points })
    }

    pub fn full(chain: &LevelChain, level: usize) -> Self {
        Clopen {
            level,
            points: (0..chain.size(level)).collect(),
        }
    }

    pub fn empty(level: usize) -> Self {
        Clopen {
            level,
            points: BTreeSet::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.points.contains(&x)
    }

    pub fn union(&self, other: &Clopen) -> Clopen {
        assert_eq!(
            self.level, other.level,
            "compare clopens after pulling back to a common level"
        );
        Clopen {
            level: self.level,
            points: self.points.union(&other.points).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &Clopen) -> Clopen {
        assert_eq!(
            self.level, other.level,
            "compare clopens after pulling back to a common level"
        );
        Clopen {
            level: self.level,
            points: self.points.intersection(&other.points).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Clopen) -> bool {
        assert_eq!(self.level, other.level);
        self.points.is_subset(&other.points)
    }

    /// Bit mask of the points (levels of at most 32 points).
    pub fn mask(&self) -> u32 {
        self.points.iter().fold(0, |m, &x| m | 1 << x)
    }
}

/// Preimage of `u` at level `j >= u.level`.
pub fn pullback_clopen(chain: &LevelChain, u: &Clopen, j: usize) -> Result<Clopen> {
    chain.check_level(j)?;
    if j < u.level {
        return Err(Error::BadLevel(format!(
            "cannot pull back from level {} to lower level {j}",
            u.level
        )));
    }
    Ok(Clopen {
        level: j,
        points: (0..chain.size(j))
            .filter(|&x| u.points.contains(&chain.project(x, j, u.level)))
            .collect(),
    })
}

/// Whether two clopens at possibly different levels are the same set,
/// compared at the higher level.
pub fn same_set(chain: &LevelChain, a: &Clopen, b: &Clopen) -> Result<bool> {
    let l = a.level.max(b.level);
    Ok(pullback_clopen(chain, a, l)? == pullback_clopen(chain, b, l)?)
}

/// A point of the space: an element of the top level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointThread {
    pub top: usize,
}

impl PointThread {
    pub fn new(chain: &LevelChain, top: usize) -> Result<Self> {
        if top >= chain.size(chain.top()) {
            return Err(Error::BadLevel(format!(
                "point {top} is not in the top level"
            )));
        }
        Ok(PointThread { top })
    }

    /// Images at every level, from level 0 up to the top.
    pub fn images(&self, chain: &LevelChain) -> Vec<usize> {
        (0..chain.num_levels())
            .map(|l| chain.project(self.top, chain.top(), l))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(validate_chain(&[3], &[]).unwrap().valid);
        assert!(validate_chain(&[1, 2], &[vec![0, 0]]).unwrap().valid);
        let v = validate_chain(&[2, 2, 2], &[vec![0, 1], vec![0, 0]]).unwrap();
        assert_eq!(v.failing_projection, Some(1));
        assert_eq!(v.missed_point, Some(1));
        assert!(LevelChain::new(vec![2, 2], vec![vec![0, 0]]).is_err());
        assert!(validate_chain(&[2, 2], &[vec![0, 5]]).is_err());
    }

    #[test]
    fn pullbacks() {
        let c = LevelChain::two_level(1, vec![0, 0]).unwrap();
        let star = Clopen::new(&c, 0, [0]).unwrap();
        assert_eq!(
            pullback_clopen(&c, &star, 1).unwrap().points,
            BTreeSet::from([0, 1])
        );
        assert!(pullback_clopen(&c, &Clopen::empty(0), 1)
            .unwrap()
            .is_empty());
        assert_eq!(
            pullback_clopen(&c, &Clopen::full(&c, 0), 1).unwrap(),
            Clopen::full(&c, 1)
        );
        assert!(pullback_clopen(&c, &Clopen::full(&c, 1), 0).is_err());
    }

    #[test]
    fn partitions() {
        let c = LevelChain::two_level(2, vec![0, 0, 1]).unwrap();
        assert_eq!(c.fibre_partition(1, 0).unwrap(), vec![vec![0, 1], vec![2]]);
        let id = LevelChain::two_level(3, vec![0, 1, 2]).unwrap();
        assert_eq!(
            id.fibre_partition(1, 0).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert!(LevelChain::single(2).fibre_partition(0, 0).is_err());
    }

    #[test]
    fn enumeration() {
        assert_eq!(LevelChain::single(2).enumerate_clopens(0).unwrap().len(), 4);
        assert_eq!(LevelChain::single(0).enumerate_clopens(0).unwrap().len(), 1);
        assert!(matches!(
            LevelChain::single(17).enumerate_clopens(0),
            Err(Error::SizeCap(_))
        ));
    }

    #[test]
    fn threads() {
        let c = LevelChain::new(vec![1, 2, 4], vec![vec![0, 0], vec![0, 0, 1, 1]]).unwrap();
        assert_eq!(PointThread::new(&c, 3).unwrap().images(&c), vec![0, 1, 3]);
        assert!(PointThread::new(&c, 4).is_err());
    }
}
