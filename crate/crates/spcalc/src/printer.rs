//! Canonical text for a parsed workspace; reparsing it gives the same tree.

use std::fmt::Write;

use crate::ast::*;

pub fn print(file: &File) -> String {
    let mut out = String::new();
    for d in &file.decls {
        decl(&mut out, d);
    }
    out
}

fn list(xs: &[String]) -> String {
    xs.join(", ")
}

fn value(v: &ValueLit) -> String {
    match v {
        ValueLit::Set(xs) => format!("{{{}}}", list(xs)),
        ValueLit::Sorted { sorts, restrictions } => {
            let sorts: Vec<String> = sorts.iter().map(|(s, xs)| format!("{s}: {{{}}}", list(xs))).collect();
            let mut s = format!("[{}", sorts.join(", "));
            if !restrictions.is_empty() {
                let rs: Vec<String> = restrictions.iter().map(|(f, m)| format!("{f}: {}", map(m))).collect();
                write!(s, "; {}", rs.join(", ")).unwrap();
            }
            s.push(']');
            s
        }
    }
}

fn pairs(ps: &[(String, String)]) -> String {
    let ps: Vec<String> = ps.iter().map(|(x, y)| format!("{x} -> {y}")).collect();
    format!("{{{}}}", ps.join(", "))
}

fn map(m: &MapLit) -> String {
    match m {
        MapLit::Pairs(ps) => pairs(ps),
        MapLit::Sorted(ss) => {
            let ss: Vec<String> = ss.iter().map(|(s, ps)| format!("{s}: {}", pairs(ps))).collect();
            format!("[{}]", ss.join(", "))
        }
    }
}

fn arrow_ref(r: &ArrowRef) -> String {
    match r {
        ArrowRef::Named(f) => format!("({f})"),
        ArrowRef::Between(a, b) => format!("({a} -> {b})"),
    }
}

fn entries(out: &mut String, values: &[(String, ValueLit)], actions: &[(ArrowRef, MapLit)]) {
    for (a, v) in values {
        writeln!(out, "  value({a}) = {};", value(v)).unwrap();
    }
    for (r, m) in actions {
        writeln!(out, "  action{} = {};", arrow_ref(r), map(m)).unwrap();
    }
}

fn variance(covariant: bool) -> &'static str {
    if covariant {
        "covariant"
    } else {
        "contravariant"
    }
}

fn decl(out: &mut String, d: &Decl) {
    match d {
        Decl::Base { name, spec } => {
            let spec = match spec {
                BaseSpec::FinSet => "FinSet".to_string(),
                BaseSpec::Bool2 => "Bool2".to_string(),
                BaseSpec::FinPresheaf(site) => format!("FinPresheaf({site})"),
            };
            writeln!(out, "base {name} = {spec};").unwrap();
        }
        Decl::Bounds(kv) => {
            let kv: Vec<String> = kv.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            writeln!(out, "bounds {};", kv.join(", ")).unwrap();
        }
        Decl::Category(c) => match &c.body {
            CategoryBody::Builtin(tag) => {
                writeln!(out, "category {} = builtin {tag} over {};", c.name, c.base.as_deref().unwrap_or("FinSet")).unwrap()
            }
            CategoryBody::Opposite(of) => writeln!(out, "category {} = opposite {of};", c.name).unwrap(),
            CategoryBody::Explicit { objects, arrows, composites } => {
                writeln!(out, "category {} over {} {{", c.name, c.base.as_deref().unwrap_or("FinSet")).unwrap();
                writeln!(out, "  objects {};", list(objects)).unwrap();
                for a in arrows {
                    writeln!(out, "  arrow {}: {} -> {};", a.name, a.src, a.tgt).unwrap();
                }
                for (g, f, h) in composites {
                    writeln!(out, "  compose {g} . {f} = {h};").unwrap();
                }
                out.push_str("}\n");
            }
            CategoryBody::Order { objects, relations } => {
                writeln!(out, "category {} over {} {{", c.name, c.base.as_deref().unwrap_or("FinSet")).unwrap();
                writeln!(out, "  objects {};", list(objects)).unwrap();
                let rs: Vec<String> = relations.iter().map(|(a, b)| format!("{a} <= {b}")).collect();
                writeln!(out, "  order {};", rs.join(", ")).unwrap();
                out.push_str("}\n");
            }
        },
        Decl::Functor(f) => {
            write!(out, "functor {} : {} -> {}", f.name, f.source, f.target).unwrap();
            match &f.body {
                FunctorBody::Terminal => out.push_str(" = terminal;\n"),
                FunctorBody::Identity => out.push_str(" = identity;\n"),
                FunctorBody::Inclusion => out.push_str(" = inclusion;\n"),
                FunctorBody::Map(ps) => {
                    out.push_str(" {\n");
                    for (a, b) in ps {
                        writeln!(out, "  {a} -> {b};").unwrap();
                    }
                    out.push_str("}\n");
                }
            }
        }
        Decl::Presheaf(p) => match &p.body {
            PresheafBody::Representable(a) => writeln!(out, "presheaf {} = representable {} {a};", p.name, p.on).unwrap(),
            PresheafBody::Empty => writeln!(out, "presheaf {} = empty {};", p.name, p.on).unwrap(),
            PresheafBody::Explicit { support, values, actions } => {
                writeln!(out, "presheaf {} on {} {{", p.name, p.on).unwrap();
                writeln!(out, "  support {};", list(support)).unwrap();
                entries(out, values, actions);
                out.push_str("}\n");
            }
        },
        Decl::Weight(w) => match &w.domain {
            None => writeln!(out, "weight {} = empty {} over {};", w.name, variance(w.covariant), w.base).unwrap(),
            Some(d) => {
                writeln!(out, "weight {} on {d} {} over {} {{", w.name, variance(w.covariant), w.base).unwrap();
                entries(out, &w.values, &w.actions);
                out.push_str("}\n");
            }
        },
        Decl::Diagram(d) => match &d.domain {
            None => writeln!(out, "diagram {} in {} = empty;", d.name, d.ambient).unwrap(),
            Some(dom) => {
                writeln!(out, "diagram {} in {} over {dom} {{", d.name, d.ambient).unwrap();
                for (x, a) in &d.objects {
                    writeln!(out, "  {x} -> {a};").unwrap();
                }
                for (r, f) in &d.arrows {
                    writeln!(out, "  {} -> {f};", arrow_ref(r)).unwrap();
                }
                out.push_str("}\n");
            }
        },
        Decl::Monoidal(m) => match &m.body {
            MonoidalBody::Approximate(stages) => {
                writeln!(out, "monoidal {} on {} = approximate {};", m.name, m.on, list(stages)).unwrap()
            }
            MonoidalBody::Tensor { tensor, unit } => {
                writeln!(out, "monoidal {} on {} {{", m.name, m.on).unwrap();
                match tensor {
                    TensorLit::Max => out.push_str("  tensor = max;\n"),
                    TensorLit::Min => out.push_str("  tensor = min;\n"),
                    TensorLit::Monoid => out.push_str("  tensor = monoid;\n"),
                    TensorLit::Table(t) => {
                        for (a, b, c) in t {
                            writeln!(out, "  tensor({a}, {b}) = {c};").unwrap();
                        }
                    }
                }
                if let Some(u) = unit {
                    writeln!(out, "  unit = {u};").unwrap();
                }
                out.push_str("}\n");
            }
        },
    }
}
