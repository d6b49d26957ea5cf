//! Syntax of `.cat` workspace files, before name resolution.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct File {
    pub decls: Vec<Decl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Base { name: String, spec: BaseSpec },
    Category(CategoryDecl),
    Functor(FunctorDecl),
    Presheaf(PresheafDecl),
    Weight(WeightDecl),
    Diagram(DiagramDecl),
    Monoidal(MonoidalDecl),
    Bounds(Vec<(String, String)>),
}

impl Decl {
    pub fn name(&self) -> Option<&str> {
        match self {
            Decl::Base { name, .. } => Some(name),
            Decl::Category(c) => Some(&c.name),
            Decl::Functor(f) => Some(&f.name),
            Decl::Presheaf(p) => Some(&p.name),
            Decl::Weight(w) => Some(&w.name),
            Decl::Diagram(d) => Some(&d.name),
            Decl::Monoidal(m) => Some(&m.name),
            Decl::Bounds(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseSpec {
    FinSet,
    Bool2,
    /// Presheaves on a finite category declared over `FinSet`.
    FinPresheaf(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategoryBody {
    /// Identities are implicit and named `id`; composites with an identity
    /// are implicit too.
    Explicit { objects: Vec<String>, arrows: Vec<ArrowDecl>, composites: Vec<(String, String, String)> },
    /// A preorder generated by `a <= b` pairs.
    Order { objects: Vec<String>, relations: Vec<(String, String)> },
    Builtin(String),
    Opposite(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryDecl {
    pub name: String,
    /// Absent for `opposite`.
    pub base: Option<String>,
    pub body: CategoryBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorBody {
    Map(Vec<(String, String)>),
    Terminal,
    Identity,
    /// The inclusion of a full subcategory.
    Inclusion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub body: FunctorBody,
}

/// A carrier, written `{x, y}` for one sort or `[s: {..}, t: {..} | f: {..}]`
/// on a site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueLit {
    Set(Vec<String>),
    Sorted { sorts: Vec<(String, Vec<String>)>, restrictions: Vec<(String, MapLit)> },
}

/// A function between carriers: `{x -> y, ...}` or `[s: {..}, t: {..}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapLit {
    Pairs(Vec<(String, String)>),
    Sorted(Vec<(String, Vec<(String, String)>)>),
}

/// Names an arrow by its name, or by its endpoints when that is unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrowRef {
    Named(String),
    Between(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresheafBody {
    Explicit { support: Vec<String>, values: Vec<(String, ValueLit)>, actions: Vec<(ArrowRef, MapLit)> },
    Representable(String),
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafDecl {
    pub name: String,
    pub on: String,
    pub body: PresheafBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecl {
    pub name: String,
    /// A finite category over `FinSet`; `None` for the empty domain.
    pub domain: Option<String>,
    pub covariant: bool,
    pub base: String,
    pub values: Vec<(String, ValueLit)>,
    pub actions: Vec<(ArrowRef, MapLit)>,
}

/// A diagram of representables, `domain object -> ambient object`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramDecl {
    pub name: String,
    pub ambient: String,
    pub domain: Option<String>,
    pub objects: Vec<(String, String)>,
    pub arrows: Vec<(ArrowRef, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorLit {
    Max,
    Min,
    Monoid,
    Table(Vec<(String, String, String)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidalBody {
    Tensor { tensor: TensorLit, unit: Option<String> },
    /// Stages ordered as a chain.
    Approximate(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidalDecl {
    pub name: String,
    pub on: String,
    pub body: MonoidalBody,
}
