pub mod nat;
pub mod object;
pub mod ops;
pub mod shape;
pub mod unionfind;

pub use nat::{family_hom, global_nats, Assignment, FamilyHom, NatEdge, NatProblem, SortedEdge};
pub use object::{BackendTag, BaseMorphism, BaseObject};
pub use ops::{Base, Bifunctor, Colimit, Diagram, Limit, SortedMap};
pub use shape::{Arrow, Shape};
pub use unionfind::UnionFind;
