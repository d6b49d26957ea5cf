//! Finite ordinary categories.
//!
//! A [`Shape`] is used in three places: as the site `G` of a presheaf
//! enrichment base, as the indexing category of conical (co)limits in the
//! base, and as the domain of weights and diagrams.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category with an explicit composition table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Shape {
    name: String,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    /// `compose[g * n + f]` is `g ∘ f` when `f.tgt == g.src`.
    compose: Vec<Option<usize>>,
}

impl Shape {
    /// Builds a shape from explicit data and checks the category laws.
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        mut compose_fn: impl FnMut(usize, usize) -> Option<usize>,
    ) -> Result<Shape> {
        let n = arrows.len();
        let mut compose = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                if arrows[f].tgt == arrows[g].src {
                    compose[g * n + f] = compose_fn(g, f);
                }
            }
        }
        let shape = Shape {
            name: name.into(),
            objects,
            arrows,
            identities,
            compose,
        };
        let failures = shape.law_failures();
        if let Some(first) = failures.into_iter().next() {
            return Err(Error::InvalidDiagram(format!("shape {}: {}", shape.name, first)));
        }
        Ok(shape)
    }

    /// The category with one object and one arrow.
    pub fn terminal() -> Shape {
        Shape::thin("1", 1, |_, _| true)
    }

    pub fn discrete(n: usize) -> Shape {
        Shape::thin(format!("discrete{n}"), n, |a, b| a == b)
    }

    /// `0 -> 1 -> ... -> n-1`.
    pub fn chain(n: usize) -> Shape {
        Shape::thin(format!("chain{n}"), n, |a, b| a <= b)
    }

    /// A preorder on `0..n`; `le` must be reflexive and transitive.
    pub fn thin(name: impl Into<String>, n: usize, le: impl Fn(usize, usize) -> bool) -> Shape {
        let mut arrows = Vec::new();
        let mut index = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                if le(a, b) {
                    index[a * n + b] = Some(arrows.len());
                    arrows.push(Arrow {
                        name: if a == b { format!("id{a}") } else { format!("{a}<={b}") },
                        src: a,
                        tgt: b,
                    });
                }
            }
        }
        let identities = (0..n).map(|a| index[a * n + a].expect("reflexive")).collect();
        let objects = (0..n).map(|a| a.to_string()).collect();
        let arrows2 = arrows.clone();
        Shape::new(name, objects, arrows, identities, |g, f| {
            index[arrows2[f].src * n + arrows2[g].tgt]
        })
        .expect("a preorder is a category")
    }

    /// Free category on a graph without composable pairs of edges.
    pub fn free_flat(name: impl Into<String>, n: usize, edges: &[(usize, usize)]) -> Shape {
        let mut arrows: Vec<Arrow> = (0..n)
            .map(|a| Arrow { name: format!("id{a}"), src: a, tgt: a })
            .collect();
        for (k, &(s, t)) in edges.iter().enumerate() {
            assert!(s != t, "free_flat edges must not be loops");
            arrows.push(Arrow { name: format!("e{k}"), src: s, tgt: t });
        }
        let identities = (0..n).collect();
        let arrows2 = arrows.clone();
        Shape::new(name, (0..n).map(|a| a.to_string()).collect(), arrows, identities, |g, f| {
            if g < n {
                Some(f)
            } else if f < n {
                Some(g)
            } else {
                debug_assert!(arrows2[f].tgt != arrows2[g].src);
                None
            }
        })
        .expect("free category on a flat graph")
    }

    /// `0 -> 1`.
    pub fn walking_arrow() -> Shape {
        Shape::free_flat("arrow", 2, &[(0, 1)])
    }

    /// `0 ⇉ 1`.
    pub fn parallel_pair() -> Shape {
        Shape::free_flat("parallel", 2, &[(0, 1), (0, 1)])
    }

    /// `1 <- 0 -> 2`.
    pub fn span() -> Shape {
        Shape::free_flat("span", 3, &[(0, 1), (0, 2)])
    }

    /// `0 -> 2 <- 1`.
    pub fn cospan() -> Shape {
        Shape::free_flat("cospan", 3, &[(0, 2), (1, 2)])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Shape {
        self.name = name.into();
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, f: usize) -> &Arrow {
        &self.arrows[f]
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identities[a]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.arrows[f].src] == f
    }

    /// `g ∘ f`, defined when `f.tgt == g.src`.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.compose[g * self.arrows.len() + f].expect("composable arrows")
    }

    pub fn hom(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, x)| x.src == a && x.tgt == b)
            .map(|(i, _)| i)
    }

    /// Arrows with target `g`.
    pub fn arrows_into(&self, g: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, x)| x.tgt == g).map(|(i, _)| i)
    }

    pub fn non_identity_arrows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(|&f| !self.is_identity(f))
    }

    pub fn is_thin(&self) -> bool {
        let n = self.object_count();
        (0..n).all(|a| (0..n).all(|b| self.hom(a, b).count() <= 1))
    }

    pub fn opposite(&self) -> Shape {
        let arrows = self
            .arrows
            .iter()
            .map(|x| Arrow { name: x.name.clone(), src: x.tgt, tgt: x.src })
            .collect();
        let n = self.arrows.len();
        let compose = (0..n * n)
            .map(|k| {
                let (g, f) = (k / n, k % n);
                // g ∘op f = f ∘ g
                self.compose[f * n + g]
            })
            .collect();
        Shape {
            name: format!("{}^op", self.name),
            objects: self.objects.clone(),
            arrows,
            identities: self.identities.clone(),
            compose,
        }
    }

    /// Every failed identity or associativity equation.
    pub fn law_failures(&self) -> Vec<String> {
        let n = self.arrows.len();
        let mut out = Vec::new();
        if self.identities.len() != self.objects.len() {
            out.push("identity list does not match objects".to_string());
            return out;
        }
        for (a, &id) in self.identities.iter().enumerate() {
            if self.arrows[id].src != a || self.arrows[id].tgt != a {
                out.push(format!("identity of {a} is not an endomorphism of {a}"));
            }
        }
        for f in 0..n {
            for g in 0..n {
                if self.arrows[f].tgt != self.arrows[g].src {
                    continue;
                }
                match self.compose[g * n + f] {
                    None => out.push(format!(
                        "missing composite {} ∘ {}",
                        self.arrows[g].name, self.arrows[f].name
                    )),
                    Some(h) => {
                        if self.arrows[h].src != self.arrows[f].src
                            || self.arrows[h].tgt != self.arrows[g].tgt
                        {
                            out.push(format!(
                                "composite {} ∘ {} has wrong endpoints",
                                self.arrows[g].name, self.arrows[f].name
                            ));
                        }
                    }
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in 0..n {
            let (s, t) = (self.arrows[f].src, self.arrows[f].tgt);
            if self.compose(f, self.identities[s]) != f || self.compose(self.identities[t], f) != f {
                out.push(format!("identity law fails at {}", self.arrows[f].name));
            }
        }
        for f in 0..n {
            for g in 0..n {
                if self.arrows[f].tgt != self.arrows[g].src {
                    continue;
                }
                for h in 0..n {
                    if self.arrows[g].tgt != self.arrows[h].src {
                        continue;
                    }
                    let left = self.compose(self.compose(h, g), f);
                    let right = self.compose(h, self.compose(g, f));
                    if left != right {
                        out.push(format!(
                            "associativity fails at ({}, {}, {})",
                            self.arrows[h].name, self.arrows[g].name, self.arrows[f].name
                        ));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes_are_categories() {
        for s in [
            Shape::terminal(),
            Shape::discrete(3),
            Shape::chain(4),
            Shape::walking_arrow(),
            Shape::parallel_pair(),
            Shape::span(),
            Shape::cospan(),
        ] {
            assert!(s.law_failures().is_empty(), "{}", s.name());
            assert!(s.opposite().law_failures().is_empty());
        }
    }

    #[test]
    fn chain_homs() {
        let c = Shape::chain(3);
        assert_eq!(c.hom(0, 2).count(), 1);
        assert_eq!(c.hom(2, 0).count(), 0);
        assert_eq!(c.arrow_count(), 6);
    }

    #[test]
    fn broken_table_is_rejected() {
        // one object, two arrows {id, e}; declare e∘e = id but id∘e = id (wrong)
        let arrows = vec![
            Arrow { name: "id".into(), src: 0, tgt: 0 },
            Arrow { name: "e".into(), src: 0, tgt: 0 },
        ];
        let err = Shape::new("bad", vec!["*".into()], arrows, vec![0], |g, f| {
            Some(if g == 0 && f == 1 { 0 } else if g == 0 { f } else if f == 0 { g } else { 0 })
        });
        assert!(err.is_err());
    }
}
