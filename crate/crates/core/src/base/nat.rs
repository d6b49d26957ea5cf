//! Enumeration of natural families of functions.
//!
//! Most finite computations in the engine (internal homs of the base, homs
//! of presheaves, weighted limits, isomorphism searches) reduce to the same
//! problem: find all families of functions `φ_i: X_i -> Y_i` such that
//! `φ_t(x_e(x)) = y_e(φ_s(x))` for a list of edges `e: s -> t`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::base::object::{BackendTag, BaseObject};
use crate::base::shape::Shape;
use crate::error::{Error, Result};

const UNSET: usize = usize::MAX;

/// One component per node.
pub type Assignment = Vec<Vec<usize>>;

#[derive(Clone, Debug)]
pub struct NatEdge {
    pub from: usize,
    pub to: usize,
    pub x_map: Vec<usize>,
    pub y_map: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct NatProblem {
    pub domain: Vec<usize>,
    pub codomain: Vec<usize>,
    pub edges: Vec<NatEdge>,
    /// Only accept families of bijections.
    pub bijective: bool,
}

struct Search<'a> {
    problem: &'a NatProblem,
    out_edges: Vec<Vec<usize>>,
    value: Assignment,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    steps: u64,
    budget: u64,
    limit: Option<usize>,
    found: Vec<Assignment>,
}

impl NatProblem {
    pub fn add_node(&mut self, domain: usize, codomain: usize) -> usize {
        self.domain.push(domain);
        self.codomain.push(codomain);
        self.domain.len() - 1
    }

    /// All solutions in lexicographic order of the flattened assignment.
    pub fn solve(&self, budget: u64) -> Result<Vec<Assignment>> {
        self.solve_limited(budget, None)
    }

    pub fn first(&self, budget: u64) -> Result<Option<Assignment>> {
        Ok(self.solve_limited(budget, Some(1))?.into_iter().next())
    }

    pub fn count(&self, budget: u64) -> Result<usize> {
        Ok(self.solve(budget)?.len())
    }

    fn solve_limited(&self, budget: u64, limit: Option<usize>) -> Result<Vec<Assignment>> {
        if self.bijective && self.domain != self.codomain {
            return Ok(Vec::new());
        }
        let mut out_edges = vec![Vec::new(); self.domain.len()];
        for (k, e) in self.edges.iter().enumerate() {
            out_edges[e.from].push(k);
        }
        let mut search = Search {
            problem: self,
            out_edges,
            value: self.domain.iter().map(|&n| vec![UNSET; n]).collect(),
            used: self.codomain.iter().map(|&n| vec![false; n]).collect(),
            trail: Vec::new(),
            steps: 0,
            budget,
            limit,
            found: Vec::new(),
        };
        search.run(0, 0)?;
        Ok(search.found)
    }
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    fn run(&mut self, mut node: usize, mut x: usize) -> Result<()> {
        // next unassigned variable
        loop {
            if node == self.value.len() {
                self.found.push(self.value.clone());
                return Ok(());
            }
            if x >= self.value[node].len() {
                node += 1;
                x = 0;
                continue;
            }
            if self.value[node][x] == UNSET {
                break;
            }
            x += 1;
        }
        for y in 0..self.problem.codomain[node] {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::SizeBoundExceeded { budget: self.budget });
            }
            let mark = self.trail.len();
            if self.assign(node, x, y) {
                self.run(node, x + 1)?;
            }
            self.undo(mark);
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    fn assign(&mut self, node: usize, x: usize, y: usize) -> bool {
        let mut stack = vec![(node, x, y)];
        while let Some((n, x, y)) = stack.pop() {
            let cur = self.value[n][x];
            if cur != UNSET {
                if cur != y {
                    return false;
                }
                continue;
            }
            if self.problem.bijective {
                if self.used[n][y] {
                    return false;
                }
                self.used[n][y] = true;
            }
            self.value[n][x] = y;
            self.trail.push((n, x));
            for &k in &self.out_edges[n] {
                let e = &self.problem.edges[k];
                stack.push((e.to, e.x_map[x], e.y_map[y]));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (n, x) = self.trail.pop().expect("trail");
            if self.problem.bijective {
                let y = self.value[n][x];
                self.used[n][y] = false;
            }
            self.value[n][x] = UNSET;
        }
    }
}

/// An edge of a family of base objects living at one sort of the site.
#[derive(Clone, Debug)]
pub struct SortedEdge {
    pub from: usize,
    pub to: usize,
    pub sort: usize,
    pub x_map: Vec<usize>,
    pub y_map: Vec<usize>,
}

/// The hom object between two families of base objects indexed by the same
/// nodes and edges, as an object of the base together with its elements.
///
/// An element at sort `g` is a natural family indexed by `(node, f)` with
/// `f: g' -> g` a site arrow, sending `X_node(g')` to `Y_node(g')`.
#[derive(Clone, Debug)]
pub struct FamilyHom {
    pub object: BaseObject,
    pub elements: Vec<Vec<Assignment>>,
    into: Vec<Vec<usize>>,
    index: Vec<HashMap<Assignment, usize>>,
}

impl FamilyHom {
    pub fn size(&self, sort: usize) -> usize {
        self.elements[sort].len()
    }

    /// Position of site arrow `f` among the arrows into `sort`.
    fn slot(&self, sort: usize, f: usize) -> usize {
        self.into[sort].iter().position(|&a| a == f).expect("arrow into sort")
    }

    /// Component of element `k` at sort `g` on `node`, along site arrow `f`.
    pub fn component(&self, sort: usize, k: usize, node: usize, f: usize) -> &[usize] {
        let slots = self.into[sort].len();
        &self.elements[sort][k][node * slots + self.slot(sort, f)]
    }

    pub fn lookup(&self, sort: usize, assignment: &Assignment) -> Option<usize> {
        self.index[sort].get(assignment).copied()
    }

    pub fn into_arrows(&self, sort: usize) -> &[usize] {
        &self.into[sort]
    }
}

pub fn family_hom(
    site: &Arc<Shape>,
    tag: BackendTag,
    xs: &[BaseObject],
    ys: &[BaseObject],
    edges: &[SortedEdge],
    budget: u64,
) -> Result<FamilyHom> {
    let sorts = site.object_count();
    let nodes = xs.len();
    let mut elements = Vec::with_capacity(sorts);
    let mut into = Vec::with_capacity(sorts);
    for g in 0..sorts {
        let arrows: Vec<usize> = site.arrows_into(g).collect();
        let slots = arrows.len();
        let mut problem = NatProblem::default();
        for i in 0..nodes {
            for &f in &arrows {
                let s = site.arrow(f).src;
                problem.add_node(xs[i].size(s), ys[i].size(s));
            }
        }
        for i in 0..nodes {
            for (p, &f) in arrows.iter().enumerate() {
                let s = site.arrow(f).src;
                for h in site.arrows_into(s) {
                    if site.is_identity(h) {
                        continue;
                    }
                    let fh = site.compose(f, h);
                    let q = arrows.iter().position(|&a| a == fh).expect("composite into g");
                    problem.edges.push(NatEdge {
                        from: i * slots + p,
                        to: i * slots + q,
                        x_map: xs[i].restrict_map(h).to_vec(),
                        y_map: ys[i].restrict_map(h).to_vec(),
                    });
                }
            }
        }
        for e in edges {
            for (p, &f) in arrows.iter().enumerate() {
                if site.arrow(f).src == e.sort {
                    problem.edges.push(NatEdge {
                        from: e.from * slots + p,
                        to: e.to * slots + p,
                        x_map: e.x_map.clone(),
                        y_map: e.y_map.clone(),
                    });
                }
            }
        }
        elements.push(problem.solve(budget)?);
        into.push(arrows);
    }
    let index: Vec<HashMap<Assignment, usize>> = elements
        .iter()
        .map(|els| els.iter().enumerate().map(|(k, a)| (a.clone(), k)).collect())
        .collect();
    // restriction along h: g1 -> g sends φ to f' ↦ φ(h ∘ f')
    let mut restrict = Vec::with_capacity(site.arrow_count());
    for h in 0..site.arrow_count() {
        let (g1, g) = (site.arrow(h).src, site.arrow(h).tgt);
        let slots = into[g].len();
        let map = elements[g]
            .iter()
            .map(|phi| {
                let restricted: Assignment = (0..nodes)
                    .flat_map(|i| {
                        into[g1].iter().map(move |&f1| (i, f1)).collect::<Vec<_>>()
                    })
                    .map(|(i, f1)| {
                        let hf = site.compose(h, f1);
                        let q = into[g].iter().position(|&a| a == hf).expect("composite");
                        phi[i * slots + q].clone()
                    })
                    .collect();
                *index[g1].get(&restricted).expect("restriction of a natural family is natural")
            })
            .collect();
        restrict.push(map);
    }
    let sizes = elements.iter().map(Vec::len).collect();
    Ok(FamilyHom {
        object: BaseObject::from_parts(tag, sizes, restrict),
        elements,
        into,
        index,
    })
}

/// Natural transformations `X => Y` between families over the flattened
/// graph with nodes `(i, g)`: these are the global elements of the
/// corresponding [`family_hom`].
pub fn global_nats(
    site: &Shape,
    xs: &[BaseObject],
    ys: &[BaseObject],
    edges: &[SortedEdge],
    bijective: bool,
    budget: u64,
    limit: Option<usize>,
) -> Result<Vec<Assignment>> {
    let sorts = site.object_count();
    let mut problem = NatProblem { bijective, ..NatProblem::default() };
    for i in 0..xs.len() {
        for g in 0..sorts {
            problem.add_node(xs[i].size(g), ys[i].size(g));
        }
    }
    for i in 0..xs.len() {
        for h in site.non_identity_arrows() {
            let a = site.arrow(h);
            problem.edges.push(NatEdge {
                from: i * sorts + a.tgt,
                to: i * sorts + a.src,
                x_map: xs[i].restrict_map(h).to_vec(),
                y_map: ys[i].restrict_map(h).to_vec(),
            });
        }
    }
    for e in edges {
        problem.edges.push(NatEdge {
            from: e.from * sorts + e.sort,
            to: e.to * sorts + e.sort,
            x_map: e.x_map.clone(),
            y_map: e.y_map.clone(),
        });
    }
    problem.solve_limited(budget, limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_all_functions() {
        let mut p = NatProblem::default();
        p.add_node(2, 3);
        assert_eq!(p.count(1000).unwrap(), 9);
    }

    #[test]
    fn edge_constraints_prune() {
        // φ0: 2 -> 2, φ1: 1 -> 2 with φ1(0) = φ0(x) for every x
        let mut p = NatProblem::default();
        p.add_node(2, 2);
        p.add_node(1, 2);
        p.edges.push(NatEdge { from: 0, to: 1, x_map: vec![0, 0], y_map: vec![0, 1] });
        // φ0 must be constant
        assert_eq!(p.count(1000).unwrap(), 2);
    }

    #[test]
    fn bijections_only() {
        let mut p = NatProblem { bijective: true, ..NatProblem::default() };
        p.add_node(3, 3);
        assert_eq!(p.count(1000).unwrap(), 6);
    }

    #[test]
    fn budget_is_enforced() {
        let mut p = NatProblem::default();
        p.add_node(6, 6);
        assert!(matches!(p.solve(10), Err(Error::SizeBoundExceeded { budget: 10 })));
    }
}
