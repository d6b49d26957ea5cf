use std::fmt::Debug;

use serde::Serialize;

use super::Obj;

/// Which registered decision procedure, if any, may issue definitive
/// non-smallness verdicts for presheaves on a procedural family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyDecision {
    /// Objects are only isomorphic to themselves and there are no other
    /// arrows: a presheaf is small iff its support is finite.
    Discrete,
    /// `a -> b` iff `a <= b`: small presheaves vanish beyond some object.
    Chain,
    /// `a -> b` iff `a >= b`: small presheaves are eventually constant.
    ChainOp,
}

impl FamilyDecision {
    pub fn opposite(self) -> FamilyDecision {
        match self {
            FamilyDecision::Discrete => FamilyDecision::Discrete,
            FamilyDecision::Chain => FamilyDecision::ChainOp,
            FamilyDecision::ChainOp => FamilyDecision::Chain,
        }
    }
}

/// A procedurally presented category on the objects `0, 1, 2, ...`.
///
/// Arrows `a -> b` are the indices `0..hom_size(a, b)`. Implementations
/// must be pure.
pub trait ProceduralFamily: Debug + Send + Sync {
    fn tag(&self) -> &str;
    fn hom_size(&self, a: Obj, b: Obj) -> usize;
    fn identity(&self, a: Obj) -> usize;
    /// `g ∘ f` for `f: a -> b`, `g: b -> c`.
    fn compose(&self, a: Obj, b: Obj, c: Obj, g: usize, f: usize) -> usize;
    fn decision(&self) -> Option<FamilyDecision> {
        None
    }
}

/// A procedural preorder: at most one arrow between any two objects.
#[derive(Clone, Copy, Debug)]
pub struct ThinFamily {
    pub tag: &'static str,
    pub le: fn(Obj, Obj) -> bool,
    pub decision: Option<FamilyDecision>,
}

impl ProceduralFamily for ThinFamily {
    fn tag(&self) -> &str {
        self.tag
    }

    fn hom_size(&self, a: Obj, b: Obj) -> usize {
        usize::from((self.le)(a, b))
    }

    fn identity(&self, _a: Obj) -> usize {
        0
    }

    fn compose(&self, _a: Obj, _b: Obj, _c: Obj, _g: usize, _f: usize) -> usize {
        0
    }

    fn decision(&self) -> Option<FamilyDecision> {
        self.decision
    }
}

pub const DISCRETE_NAT: ThinFamily =
    ThinFamily { tag: "DiscreteNat", le: |a, b| a == b, decision: Some(FamilyDecision::Discrete) };

pub const OMEGA_CHAIN: ThinFamily =
    ThinFamily { tag: "OmegaChain", le: |a, b| a <= b, decision: Some(FamilyDecision::Chain) };

pub fn registered(tag: &str) -> Option<ThinFamily> {
    match tag {
        "DiscreteNat" => Some(DISCRETE_NAT),
        "OmegaChain" => Some(OMEGA_CHAIN),
        _ => None,
    }
}

pub fn registered_tags() -> &'static [&'static str] {
    &["DiscreteNat", "OmegaChain"]
}
