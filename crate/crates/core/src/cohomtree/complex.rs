use crate::error::{Error, Result};
use crate::finab::{direct_sum, AbHom, DirectSum, FinAbGroup, Homology, IntMatrix};
use crate::ringmod::{FinGroup, FinModule, FiniteRing, Side, SubgroupOf};

/// Largest cochain group, counted in cyclic summands, that the bar complex
/// will build.
pub const MAX_COCHAIN_RANK: usize = 4096;

/// `C^0 -> C^1 -> ...` with `d^{n+1} ∘ d^n = 0`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub groups: Vec<FinAbGroup>,
    /// `differentials[n] : groups[n] -> groups[n + 1]`.
    pub differentials: Vec<AbHom>,
}

impl CochainComplex {
    pub fn new(groups: Vec<FinAbGroup>, differentials: Vec<AbHom>) -> Result<Self> {
        if differentials.len() + 1 != groups.len() {
            return Err(Error::Shape(format!(
                "{} groups need {} differentials",
                groups.len(),
                groups.len().saturating_sub(1)
            )));
        }
        for (n, d) in differentials.iter().enumerate() {
            if d.source() != &groups[n] || d.target() != &groups[n + 1] {
                return Err(Error::Mismatch(format!(
                    "differential {n} has the wrong groups"
                )));
            }
        }
        let c = CochainComplex {
            groups,
            differentials,
        };
        if let Some(n) = c.first_nonzero_square() {
            return Err(Error::NotExact(format!("d^{} ∘ d^{n} is not zero", n + 1)));
        }
        Ok(c)
    }

    /// Least `n` with `d^{n+1} ∘ d^n ≠ 0`, checked on generators.
    pub fn first_nonzero_square(&self) -> Option<usize> {
        self.differentials
            .windows(2)
            .position(|w| w[1].compose(&w[0]).map(|c| !c.is_zero()).unwrap_or(true))
    }

    /// Highest degree whose cohomology is computable.
    pub fn top_degree(&self) -> usize {
        self.groups.len().saturating_sub(2)
    }

    pub fn cohomology(&self, n: usize) -> Result<Homology> {
        if n + 1 >= self.groups.len() {
            return Err(Error::Shape(format!(
                "degree {n} needs the group C^{}",
                n + 1
            )));
        }
        let incoming = if n == 0 {
            AbHom::zero(FinAbGroup::trivial(), self.groups[0].clone())
        } else {
            self.differentials[n - 1].clone()
        };
        Homology::new(&incoming, &self.differentials[n])
    }
}

/// `g ↦ ρ(g)` as a left action, reading a right module through `g⁻¹`.
fn left_action(group: &FinGroup, a: &FinModule) -> Vec<AbHom> {
    (0..group.order())
        .map(|g| match a.side() {
            Side::Left => a.action()[g].clone(),
            Side::Right => a.action()[group.inv(g)].clone(),
        })
        .collect()
}

fn check_group_module(group: &FinGroup, a: &FinModule) -> Result<i64> {
    match a.ring().as_group_ring() {
        Some((m, g)) if g == group => Ok(m),
        _ => Err(Error::Mismatch(
            "the module is not over the group ring of this group".into(),
        )),
    }
}

/// The inhomogeneous cochain complex `Maps(G^n, A)` for `n <= top`.
pub fn bar_complex(group: &FinGroup, a: &FinModule, top: usize) -> Result<CochainComplex> {
    check_group_module(group, a)?;
    let order = group.order();
    let r = a.group().rank();
    let size = |n: usize| {
        order
            .checked_pow(n as u32)
            .and_then(|s| s.checked_mul(r.max(1)))
    };
    if size(top).is_none_or(|s| s > MAX_COCHAIN_RANK) {
        return Err(Error::SizeCap(format!(
            "cochains in degree {top} need {order}^{top} copies of a rank-{r} group, above {MAX_COCHAIN_RANK}"
        )));
    }
    let act = left_action(group, a);
    let sums: Vec<DirectSum> = (0..=top)
        .map(|n| direct_sum(&vec![a.group().clone(); order.pow(n as u32)]))
        .collect();
    let exp = a.group().exponent().max(1);
    let mut differentials = Vec::new();
    for n in 0..top {
        let src = order.pow(n as u32);
        let tgt = src * order;
        let mut raw = IntMatrix::zeros(tgt * r, src * r);
        let mut add_block = |t: usize, s: usize, m: &IntMatrix, sign: i64| {
            for i in 0..r {
                for j in 0..r {
                    let v = &mut raw[(t * r + i, s * r + j)];
                    *v = (*v + sign * m[(i, j)]).rem_euclid(exp);
                }
            }
        };
        let id = IntMatrix::identity(r);
        for t in 0..tgt {
            // digits of t: (g_1, ..., g_{n+1}), g_1 most significant
            let mut g = vec![0usize; n + 1];
            let mut rest = t;
            for k in (0..=n).rev() {
                g[k] = rest % order;
                rest /= order;
            }
            let index = |tuple: &[usize]| tuple.iter().fold(0, |acc, &x| acc * order + x);
            add_block(t, index(&g[1..]), act[g[0]].matrix(), 1);
            for i in 0..n {
                let mut merged = g[..i].to_vec();
                merged.push(group.mul(g[i], g[i + 1]));
                merged.extend_from_slice(&g[i + 2..]);
                let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                add_block(t, index(&merged), &id, sign);
            }
            let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
            add_block(t, index(&g[..n]), &id, sign);
        }
        differentials.push(sums[n + 1].from_raw(&sums[n], &raw)?);
    }
    CochainComplex::new(sums.into_iter().map(|s| s.group).collect(), differentials)
}

/// `H^0(G, A), ..., H^{n_max}(G, A)` from the bar complex.
pub fn bar_cohomology(group: &FinGroup, a: &FinModule, n_max: usize) -> Result<Vec<FinAbGroup>> {
    let c = bar_complex(group, a, n_max + 1)?;
    (0..=n_max)
        .map(|n| c.cohomology(n).map(|h| h.group))
        .collect()
}

/// `A` restricted to `(Z/m)[H]`.
pub fn restrict_to_subgroup(a: &FinModule, sub: &SubgroupOf) -> Result<FinModule> {
    let (m, _) = a
        .ring()
        .as_group_ring()
        .ok_or_else(|| Error::Mismatch("restriction needs a module over a group ring".into()))?;
    let ring = FiniteRing::group_ring(m, &sub.group)?;
    a.restrict(&ring, &sub.embedding)
}
