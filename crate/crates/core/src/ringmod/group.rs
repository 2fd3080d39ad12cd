use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A finite group given by its full multiplication table.
///
/// Elements are the indices `0..n`; `mul(a, b)` is `table[a][b]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

/// Tables up to this order are accepted; associativity is checked on all triples.
pub const MAX_GROUP_ORDER: usize = 64;

impl FinGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::SizeCap(format!(
                "group of order {n} exceeds {MAX_GROUP_ORDER}"
            )));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {a} has length {}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!(
                    "entry {bad} in row {a} is out of range"
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "({a}*{b})*{c} != {a}*({b}*{c})"
                        )));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinGroup {
            table,
            identity,
            inverses,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `C_n`, element `i` standing for `g^i`.
    pub fn cyclic(n: usize) -> Self {
        assert!((1..=MAX_GROUP_ORDER).contains(&n));
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FinGroup {
            table,
            identity: 0,
            inverses: (0..n).map(|a| (n - a) % n).collect(),
        }
    }

    /// `A x B`, the pair `(a, b)` having index `a * |B| + b`.
    pub fn product(a: &FinGroup, b: &FinGroup) -> Self {
        let (n, m) = (a.order(), b.order());
        assert!(n * m <= MAX_GROUP_ORDER, "product group too large");
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        FinGroup {
            table,
            identity: a.identity * m + b.identity,
            inverses: (0..n * m)
                .map(|x| a.inv(x / m) * m + b.inv(x % m))
                .collect(),
        }
    }

    /// The symmetric group on `k <= 4` letters; elements are the
    /// permutations in lexicographic order, composed as functions
    /// (`mul(a, b) = a ∘ b`).
    pub fn symmetric(k: usize) -> Self {
        assert!(
            (1..=4).contains(&k),
            "symmetric groups are supported on at most 4 letters"
        );
        let perms = permutations(k);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("permutation");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&b.iter().map(|&i| a[i]).collect()))
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("symmetric group table is valid")
    }

    pub fn klein_four() -> Self {
        Self::product(&Self::cyclic(2), &Self::cyclic(2))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Checks that `elements` is a subgroup (nonempty, closed under products).
    pub fn check_subgroup(&self, elements: &[usize]) -> Result<()> {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if set.is_empty() {
            return Err(Error::NotSubgroup("empty subset".into()));
        }
        if let Some(&bad) = set.iter().find(|&&x| x >= self.order()) {
            return Err(Error::NotSubgroup(format!(
                "element {bad} is not in the group"
            )));
        }
        for &a in &set {
            for &b in &set {
                let c = self.mul(a, b);
                if !set.contains(&c) {
                    return Err(Error::NotSubgroup(format!(
                        "{a}*{b} = {c} lies outside the subset"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Every subgroup, ordered by size and then lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier = vec![vec![self.identity]];
        found.insert(vec![self.identity]);
        while let Some(h) = frontier.pop() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.closure(&gens);
                if found.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
        let mut all: Vec<Vec<usize>> = found.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    /// Left cosets `gH`, each sorted, ordered by their least element.
    pub fn left_cosets(&self, subgroup: &[usize]) -> Result<Vec<Vec<usize>>> {
        self.check_subgroup(subgroup)?;
        let mut seen = vec![false; self.order()];
        let mut cosets = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let mut c: Vec<usize> = subgroup.iter().map(|&h| self.mul(g, h)).collect();
            c.sort_unstable();
            c.dedup();
            for &x in &c {
                seen[x] = true;
            }
            cosets.push(c);
        }
        Ok(cosets)
    }

    /// The subgroup as a group in its own right. Element `k` of the result
    /// is `embedding[k]`, the `k`-th smallest element of the subset.
    pub fn subgroup(&self, elements: &[usize]) -> Result<SubgroupOf> {
        self.check_subgroup(elements)?;
        let mut embedding: Vec<usize> = elements.to_vec();
        embedding.sort_unstable();
        embedding.dedup();
        let pos = |x: usize| embedding.binary_search(&x).expect("closed subset");
        let table = embedding
            .iter()
            .map(|&a| embedding.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        let group = FinGroup::from_table(table)?;
        Ok(SubgroupOf { group, embedding })
    }
}

/// A subgroup `H <= G` as a standalone group with its embedding into `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupOf {
    pub group: FinGroup,
    pub embedding: Vec<usize>,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q: Vec<usize> = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups_are_valid() {
        for g in [
            FinGroup::cyclic(1),
            FinGroup::cyclic(4),
            FinGroup::klein_four(),
            FinGroup::symmetric(3),
        ] {
            FinGroup::from_table(g.table.clone()).unwrap();
        }
        assert_eq!(FinGroup::symmetric(3).order(), 6);
        assert!(!FinGroup::symmetric(3).is_abelian());
        assert!(FinGroup::klein_four().is_abelian());
        assert_eq!(FinGroup::symmetric(4).order(), 24);
    }

    #[test]
    fn rejects_non_groups() {
        assert!(FinGroup::from_table(vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FinGroup::from_table(vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(FinGroup::from_table(vec![]).is_err());
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(FinGroup::cyclic(4).subgroups().len(), 3);
        assert_eq!(FinGroup::klein_four().subgroups().len(), 5);
        assert_eq!(FinGroup::symmetric(3).subgroups().len(), 6);
        assert_eq!(FinGroup::cyclic(3).subgroups().len(), 2);
    }

    #[test]
    fn cosets_of_c3_in_s3() {
        let s3 = FinGroup::symmetric(3);
        let c3 = s3.subgroups().into_iter().find(|h| h.len() == 3).unwrap();
        let cosets = s3.left_cosets(&c3).unwrap();
        assert_eq!(cosets.len(), 2);
        assert!(s3.left_cosets(&[0, 1]).is_err() || s3.check_subgroup(&[0, 1]).is_ok());
    }

    #[test]
    fn subgroup_as_group() {
        let c4 = FinGroup::cyclic(4);
        let h = c4.subgroup(&[0, 2]).unwrap();
        assert_eq!(h.group.order(), 2);
        assert_eq!(h.embedding, vec![0, 2]);
        assert!(c4.subgroup(&[0, 1]).is_err());
    }
}
