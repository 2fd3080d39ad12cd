use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finab::{check_exact, direct_sum, AbHom, ExactnessVerdict, FinAbGroup, IntMatrix};
use crate::ringmod::{permutation_module, FinGroup, FinModule, FiniteRing, GSet, ModHom, Side};
use crate::sheafside::check;

use super::complex::{bar_cohomology, restrict_to_subgroup};
use super::les::{les_from_ses, LESReport, LesTerm, ShortExactSequence};

/// A finite graph with oriented edges `d_0(e) -> d_1(e)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tree {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Tree {
    /// A connected graph with `|E| = |V| - 1`.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let t = Self::from_graph(vertices, edges)?;
        if vertices == 0 {
            return Err(Error::InvalidGraph(
                "a tree needs at least one vertex".into(),
            ));
        }
        if t.edges.len() + 1 != vertices {
            return Err(Error::InvalidGraph(format!(
                "{} edges on {vertices} vertices; a tree has {}",
                t.edges.len(),
                vertices - 1
            )));
        }
        if !t.is_connected() {
            return Err(Error::InvalidGraph("the graph is not connected".into()));
        }
        Ok(t)
    }

    /// Any graph with endpoints in range. The tree property is not checked,
    /// so cycles can be fed to [`tree_ses`] as negative controls.
    pub fn from_graph(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= vertices || b >= vertices) {
            return Err(Error::InvalidGraph(format!(
                "edge ({a}, {b}) leaves the {vertices} vertices"
            )));
        }
        Ok(Tree { vertices, edges })
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|v| (v - 1, v)).collect())
    }

    /// A centre `0` joined to leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Result<Self> {
        Self::new(leaves + 1, (1..=leaves).map(|v| (0, v)).collect())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return true;
        }
        let mut seen = BTreeSet::from([0]);
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        seen.len() == self.vertices
    }
}

/// A finite group acting on a graph by automorphisms that preserve edge
/// orientation.
#[derive(Clone, Debug)]
pub struct TreeAction {
    group: FinGroup,
    tree: Tree,
    vertex_set: GSet,
    edge_set: GSet,
}

impl TreeAction {
    /// `vertex_action[g][v] = g·v`; the edge action is derived from it.
    pub fn new(group: FinGroup, tree: Tree, vertex_action: Vec<Vec<usize>>) -> Result<Self> {
        let vertex_set = GSet::new(group.clone(), tree.vertices, vertex_action)?;
        let mut edge_action = Vec::with_capacity(group.order());
        for g in 0..group.order() {
            let mut row = Vec::with_capacity(tree.edges.len());
            for (e, &(a, b)) in tree.edges.iter().enumerate() {
                let (ga, gb) = (vertex_set.act(g, a), vertex_set.act(g, b));
                if let Some(f) = tree.edges.iter().position(|&x| x == (ga, gb)) {
                    row.push(f);
                } else if tree.edges.contains(&(gb, ga)) {
                    return Err(Error::EdgeInversion {
                        element: g,
                        edge: e,
                    });
                } else {
                    return Err(Error::InvalidGraph(format!(
                        "element {g} does not map edge {e} to an edge"
                    )));
                }
            }
            edge_action.push(row);
        }
        let edge_set = GSet::new(group.clone(), tree.edges.len(), edge_action)?;
        Ok(TreeAction {
            group,
            tree,
            vertex_set,
            edge_set,
        })
    }

    pub fn trivial(group: FinGroup, tree: Tree) -> Result<Self> {
        let action = vec![(0..tree.vertices).collect(); group.order()];
        Self::new(group, tree, action)
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn vertex_set(&self) -> &GSet {
        &self.vertex_set
    }

    pub fn edge_set(&self) -> &GSet {
        &self.edge_set
    }

    /// Least vertex of each orbit.
    pub fn vertex_representatives(&self) -> Vec<usize> {
        self.vertex_set.orbits().iter().map(|o| o[0]).collect()
    }

    /// Least edge of each orbit.
    pub fn edge_representatives(&self) -> Vec<usize> {
        self.edge_set.orbits().iter().map(|o| o[0]).collect()
    }
}

/// `0 -> (Z/m)[E] -> (Z/m)[V] -> Z/m -> 0` with `e ↦ d_1(e) - d_0(e)` and
/// `v ↦ 1`.
#[derive(Clone, Debug)]
pub struct TreeSes {
    pub sequence: ShortExactSequence,
    pub verdicts: Vec<ExactnessVerdict>,
}

pub fn tree_ses(m: i64, ta: &TreeAction) -> Result<TreeSes> {
    let ring = FiniteRing::group_ring(m, &ta.group)?;
    let edges = permutation_module(&ring, &ta.edge_set)?;
    let vertices = permutation_module(&ring, &ta.vertex_set)?;
    let trivial = FinModule::trivial_action(&ring, FinAbGroup::cyclic(m), Side::Left)?;
    let mut d = IntMatrix::zeros(ta.tree.vertices, ta.tree.edges.len());
    for (e, &(a, b)) in ta.tree.edges.iter().enumerate() {
        d[(b, e)] = (d[(b, e)] + 1).rem_euclid(m);
        d[(a, e)] = (d[(a, e)] - 1).rem_euclid(m);
    }
    let boundary = ModHom::new(
        edges.clone(),
        vertices.clone(),
        AbHom::new(edges.group().clone(), vertices.group().clone(), d)?,
    )?;
    let ones = IntMatrix::from_rows(&[vec![1; ta.tree.vertices]]);
    let augmentation = ModHom::new(
        vertices.clone(),
        trivial.clone(),
        AbHom::new(vertices.group().clone(), trivial.group().clone(), ones)?,
    )?;
    let seq = [boundary.map().clone(), augmentation.map().clone()];
    let verdicts = (0..3)
        .map(|p| check_exact(&seq, p))
        .collect::<Result<Vec<_>>>()?;
    if let Some(v) = verdicts.iter().find(|v| !v.exact) {
        let place = ["edge module", "vertex module", "coefficients"][v.position];
        return Err(Error::NotExact(format!(
            "tree sequence fails at the {place}: {:?}",
            v.witness
        )));
    }
    Ok(TreeSes {
        sequence: ShortExactSequence {
            inclusion: boundary,
            projection: augmentation,
        },
        verdicts,
    })
}

/// `∏` over orbit representatives of `H^n(G_y, A)`.
fn orbit_product(
    group: &FinGroup,
    set: &GSet,
    reps: &[usize],
    a: &FinModule,
    n_max: usize,
) -> Result<Vec<FinAbGroup>> {
    let per_rep = reps
        .iter()
        .map(|&y| {
            let sub = group.subgroup(&set.stabilizer(y))?;
            bar_cohomology(&sub.group, &restrict_to_subgroup(a, &sub)?, n_max)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=n_max)
        .map(|n| direct_sum(&per_rep.iter().map(|h| h[n].clone()).collect::<Vec<_>>()).group)
        .collect())
}

/// The cohomological Mayer–Vietoris sequence of a group acting on a tree:
/// `H^n(G, A) -> ∏_v H^n(G_v, A) -> ∏_e H^n(G_e, A) -> H^{n+1}(G, A)`,
/// products over orbit representatives.
///
/// The sequence is the Ext sequence of [`tree_ses`]; each Ext term is
/// identified with the matching product of stabilizer cohomology groups
/// computed independently from bar complexes.
pub fn mayer_vietoris_check(
    m: i64,
    ta: &TreeAction,
    a: &FinModule,
    n_max: usize,
) -> Result<LESReport> {
    let ses = tree_ses(m, ta)?;
    if a.ring() != ses.sequence.mid().ring() {
        return Err(Error::Mismatch(
            "coefficients must be a module over (Z/m)[G]".into(),
        ));
    }
    let mut report = les_from_ses(&ses.sequence, a, n_max)?;
    let whole = bar_cohomology(&ta.group, a, n_max)?;
    let vertex = orbit_product(
        &ta.group,
        &ta.vertex_set,
        &ta.vertex_representatives(),
        a,
        n_max,
    )?;
    let edge = orbit_product(
        &ta.group,
        &ta.edge_set,
        &ta.edge_representatives(),
        a,
        n_max,
    )?;
    let mut identifications = Vec::new();
    for n in 0..=n_max {
        let labelled = [
            (format!("H^{n}(G)"), &whole[n]),
            (format!("prod_v H^{n}(G_v)"), &vertex[n]),
            (format!("prod_e H^{n}(G_e)"), &edge[n]),
        ];
        for (k, (label, group)) in labelled.into_iter().enumerate() {
            let term: &mut LesTerm = &mut report.terms[3 * n + k];
            identifications.push(check(format!("identify/{label}"), &term.group == group));
            term.label = label;
        }
    }
    report.holds = report.exact && identifications.iter().all(|c| c.holds);
    report.identifications = identifications;
    Ok(report)
}
