use proptest::prelude::*;
use spcalc::ast::*;
use spcalc::parser::parse;
use spcalc::printer::print;
use spcalc::workspace::load;

const SHOWCASE: &str = include_str!("data/showcase.cat");

fn name() -> impl Strategy<Value = String> {
    "x[a-z0-9_]{0,4}"
}

fn names(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(name(), 1..=max)
}

fn category() -> impl Strategy<Value = Decl> {
    let base = prop_oneof![Just("FinSet".to_string()), Just("Bool2".to_string()), name()];
    let body = prop_oneof![
        (names(4), prop::collection::vec((name(), name()), 1..4))
            .prop_map(|(objects, relations)| CategoryBody::Order { objects, relations }),
        (names(3), prop::collection::vec((name(), name(), name()), 0..3), prop::collection::vec((name(), name(), name()), 0..3))
            .prop_map(|(objects, arrows, composites)| CategoryBody::Explicit {
                objects,
                arrows: arrows.into_iter().map(|(name, src, tgt)| ArrowDecl { name, src, tgt }).collect(),
                composites,
            }),
        prop_oneof![Just("DiscreteNat"), Just("OmegaChain")].prop_map(|t| CategoryBody::Builtin(t.to_string())),
    ];
    (name(), base, body).prop_map(|(name, base, body)| Decl::Category(CategoryDecl { name, base: Some(base), body }))
}

fn map_lit() -> impl Strategy<Value = MapLit> {
    prop::collection::vec((name(), name()), 0..3).prop_map(MapLit::Pairs)
}

fn presheaf() -> impl Strategy<Value = Decl> {
    let arrow = prop_oneof![name().prop_map(ArrowRef::Named), (name(), name()).prop_map(|(a, b)| ArrowRef::Between(a, b))];
    let body = prop_oneof![
        name().prop_map(PresheafBody::Representable),
        Just(PresheafBody::Empty),
        (names(3), prop::collection::vec((name(), names(3)), 0..3), prop::collection::vec((arrow, map_lit()), 0..3)).prop_map(
            |(support, values, actions)| PresheafBody::Explicit {
                support,
                values: values.into_iter().map(|(a, v)| (a, ValueLit::Set(v))).collect(),
                actions,
            }
        ),
    ];
    (name(), name(), body).prop_map(|(name, on, body)| Decl::Presheaf(PresheafDecl { name, on, body }))
}

fn decl() -> impl Strategy<Value = Decl> {
    prop_oneof![
        category(),
        presheaf(),
        (name(), name()).prop_map(|(name, of)| Decl::Category(CategoryDecl { name, base: None, body: CategoryBody::Opposite(of) })),
        (name(), name(), name(), prop::collection::vec((name(), name()), 0..3))
            .prop_map(|(name, source, target, m)| Decl::Functor(FunctorDecl { name, source, target, body: FunctorBody::Map(m) })),
        (name(), name(), prop_oneof![Just(TensorLit::Max), Just(TensorLit::Min), Just(TensorLit::Monoid)], prop::option::of(name()))
            .prop_map(|(name, on, tensor, unit)| Decl::Monoidal(MonoidalDecl { name, on, body: MonoidalBody::Tensor { tensor, unit } })),
        (1u32..100, 1u32..10).prop_map(|(p, d)| Decl::Bounds(vec![("probes".into(), p.to_string()), ("depth".into(), d.to_string())])),
    ]
}

proptest! {
    #[test]
    fn printed_files_parse_back_to_themselves(decls in prop::collection::vec(decl(), 0..6)) {
        let file = File { decls };
        let text = print(&file);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, file);
    }
}

#[test]
fn showcase_is_a_fixed_point_of_fmt() {
    let file = parse(SHOWCASE).unwrap();
    let once = print(&file);
    assert_eq!(parse(&once).unwrap(), file);
    assert_eq!(print(&parse(&once).unwrap()), once);
}

#[test]
fn showcase_loads() {
    let ws = load(SHOWCASE).unwrap();
    for name in ["arrow", "Z2", "N", "Omega", "OmegaOp", "V", "Diamond"] {
        assert!(ws.categories.contains_key(name), "{name}");
    }
    assert!(ws.monoidals.contains_key("xor2"));
}

#[test]
fn unknown_identifier_is_a_parse_error_naming_it() {
    let e = load("presheaf P = representable Nowhere a;").unwrap_err();
    assert_eq!(e.kind(), "ParseError");
    assert!(e.to_string().contains("Nowhere"), "{e}");
}

#[test]
fn syntax_errors_carry_position_and_expectations() {
    let e = parse("category C over FinSet {\n  objects a b;\n}").unwrap_err();
    assert_eq!(e.pos.line, 2);
    assert!(!e.expected.is_empty());
}

#[test]
fn broken_associativity_names_the_triple() {
    let text = "category M over FinSet {
  objects o;
  arrow a: o -> o;
  arrow b: o -> o;
  compose a . a = b;
  compose a . b = a;
  compose b . a = b;
  compose b . b = b;
}";
    let e = load(text).unwrap_err();
    assert_eq!(e.kind(), "ValidationError");
    assert!(e.to_string().contains("(a, a, a)"), "{e}");
}

#[test]
fn missing_composite_is_a_validation_error() {
    let e = load("category B over FinSet { objects a, b; arrow f: a -> b; arrow g: b -> a; }").unwrap_err();
    assert_eq!(e.kind(), "ValidationError");
    assert!(e.to_string().contains("composite"), "{e}");
}

#[test]
fn duplicate_names_are_rejected() {
    assert!(load("category A over FinSet { objects a; }\ncategory A over FinSet { objects b; }").is_err());
}

#[test]
fn non_functorial_presheaf_is_rejected() {
    let text = "category C over FinSet { objects a, b; arrow f: a -> b; }
presheaf P on C { support a, b; value(a) = {x}; value(b) = {y}; }";
    let e = load(text).unwrap_err();
    assert_eq!(e.kind(), "ValidationError");
}
