use crate::ast::*;
use crate::lexer::{lex, Pos, Tok};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
    pub expected: Vec<String>,
}

pub fn parse(text: &str) -> Result<File, ParseError> {
    parse_located(text).map(|(f, _)| f)
}

/// As [`parse`], with the position of each declaration.
pub fn parse_located(text: &str) -> Result<(File, Vec<Pos>), ParseError> {
    let toks = lex(text).map_err(|(pos, message)| ParseError { pos, message, expected: Vec::new() })?;
    let mut p = Parser { toks, at: 0 };
    let (mut decls, mut positions) = (Vec::new(), Vec::new());
    while p.peek() != &Tok::Eof {
        positions.push(p.pos());
        decls.push(p.decl()?);
    }
    Ok((File { decls }, positions))
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        let list = expected.join(" or ");
        Err(ParseError {
            pos: self.pos(),
            message: format!("expected {list}, found {}", self.peek()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(&[&t.to_string()])
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.fail(&[&format!("`{kw}`")])
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.fail(&["a name"]),
        }
    }

    /// `a, b, c` up to (not including) `end`.
    fn names_until(&mut self, end: &Tok) -> PResult<Vec<String>> {
        let mut out = Vec::new();
        if self.peek() == end {
            return Ok(out);
        }
        loop {
            out.push(self.ident()?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.fail(&["a declaration"]),
        };
        match kw.as_str() {
            "base" => self.base(),
            "category" => self.category().map(Decl::Category),
            "functor" => self.functor().map(Decl::Functor),
            "presheaf" => self.presheaf().map(Decl::Presheaf),
            "weight" => self.weight().map(Decl::Weight),
            "diagram" => self.diagram().map(Decl::Diagram),
            "monoidal" => self.monoidal().map(Decl::Monoidal),
            "bounds" => self.bounds(),
            _ => self.fail(&["`base`", "`category`", "`functor`", "`presheaf`", "`weight`", "`diagram`", "`monoidal`", "`bounds`"]),
        }
    }

    fn base(&mut self) -> PResult<Decl> {
        self.kw("base")?;
        let name = self.ident()?;
        self.expect(Tok::Eq)?;
        let spec = if self.eat_kw("FinSet") {
            BaseSpec::FinSet
        } else if self.eat_kw("Bool2") {
            BaseSpec::Bool2
        } else if self.eat_kw("FinPresheaf") {
            self.expect(Tok::LParen)?;
            let site = self.ident()?;
            self.expect(Tok::RParen)?;
            BaseSpec::FinPresheaf(site)
        } else {
            return self.fail(&["`FinSet`", "`Bool2`", "`FinPresheaf`"]);
        };
        self.expect(Tok::Semi)?;
        Ok(Decl::Base { name, spec })
    }

    fn bounds(&mut self) -> PResult<Decl> {
        self.kw("bounds")?;
        let mut out = Vec::new();
        loop {
            let k = self.ident()?;
            self.expect(Tok::Eq)?;
            out.push((k, self.ident()?));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Semi)?;
        Ok(Decl::Bounds(out))
    }

    fn category(&mut self) -> PResult<CategoryDecl> {
        self.kw("category")?;
        let name = self.ident()?;
        if self.eat(&Tok::Eq) {
            let decl = if self.eat_kw("builtin") {
                let tag = self.ident()?;
                self.kw("over")?;
                let base = self.ident()?;
                CategoryDecl { name, base: Some(base), body: CategoryBody::Builtin(tag) }
            } else if self.eat_kw("opposite") {
                CategoryDecl { name, base: None, body: CategoryBody::Opposite(self.ident()?) }
            } else {
                return self.fail(&["`builtin`", "`opposite`"]);
            };
            self.expect(Tok::Semi)?;
            return Ok(decl);
        }
        self.kw("over")?;
        let base = Some(self.ident()?);
        self.expect(Tok::LBrace)?;
        let (mut objects, mut arrows, mut composites, mut relations) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        while !self.eat(&Tok::RBrace) {
            if self.eat_kw("objects") {
                objects.extend(self.names_until(&Tok::Semi)?);
            } else if self.eat_kw("arrow") {
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let src = self.ident()?;
                self.expect(Tok::Arrow)?;
                let tgt = self.ident()?;
                arrows.push(ArrowDecl { name, src, tgt });
            } else if self.eat_kw("compose") {
                let g = self.ident()?;
                self.expect(Tok::Dot)?;
                let f = self.ident()?;
                self.expect(Tok::Eq)?;
                composites.push((g, f, self.ident()?));
            } else if self.eat_kw("order") {
                loop {
                    let a = self.ident()?;
                    self.expect(Tok::Le)?;
                    relations.push((a, self.ident()?));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
            } else {
                return self.fail(&["`objects`", "`arrow`", "`compose`", "`order`", "`}`"]);
            }
            self.expect(Tok::Semi)?;
        }
        let body = if relations.is_empty() {
            CategoryBody::Explicit { objects, arrows, composites }
        } else if arrows.is_empty() && composites.is_empty() {
            CategoryBody::Order { objects, relations }
        } else {
            return Err(ParseError {
                pos: self.pos(),
                message: format!("category {name} mixes `order` with `arrow` or `compose`"),
                expected: Vec::new(),
            });
        };
        Ok(CategoryDecl { name, base, body })
    }

    fn functor(&mut self) -> PResult<FunctorDecl> {
        self.kw("functor")?;
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let source = self.ident()?;
        self.expect(Tok::Arrow)?;
        let target = self.ident()?;
        let body = if self.eat(&Tok::Eq) {
            let b = if self.eat_kw("terminal") {
                FunctorBody::Terminal
            } else if self.eat_kw("identity") {
                FunctorBody::Identity
            } else if self.eat_kw("inclusion") {
                FunctorBody::Inclusion
            } else {
                return self.fail(&["`terminal`", "`identity`", "`inclusion`"]);
            };
            self.expect(Tok::Semi)?;
            b
        } else {
            self.expect(Tok::LBrace)?;
            let mut pairs = Vec::new();
            while !self.eat(&Tok::RBrace) {
                let a = self.ident()?;
                self.expect(Tok::Arrow)?;
                pairs.push((a, self.ident()?));
                self.expect(Tok::Semi)?;
            }
            FunctorBody::Map(pairs)
        };
        Ok(FunctorDecl { name, source, target, body })
    }

    fn value_lit(&mut self) -> PResult<ValueLit> {
        if self.eat(&Tok::LBrace) {
            let names = self.names_until(&Tok::RBrace)?;
            self.expect(Tok::RBrace)?;
            return Ok(ValueLit::Set(names));
        }
        if !self.eat(&Tok::LBracket) {
            return self.fail(&["`{`", "`[`"]);
        }
        let mut sorts = Vec::new();
        let mut restrictions = Vec::new();
        if !matches!(self.peek(), Tok::RBracket | Tok::Semi) {
            loop {
                let s = self.ident()?;
                self.expect(Tok::Colon)?;
                self.expect(Tok::LBrace)?;
                let names = self.names_until(&Tok::RBrace)?;
                self.expect(Tok::RBrace)?;
                sorts.push((s, names));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        if self.eat(&Tok::Semi) {
            loop {
                let f = self.ident()?;
                self.expect(Tok::Colon)?;
                restrictions.push((f, self.map_lit()?));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket)?;
        Ok(ValueLit::Sorted { sorts, restrictions })
    }

    fn pairs(&mut self) -> PResult<Vec<(String, String)>> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            let x = self.ident()?;
            self.expect(Tok::Arrow)?;
            out.push((x, self.ident()?));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(out)
    }

    fn map_lit(&mut self) -> PResult<MapLit> {
        if self.peek() == &Tok::LBrace {
            return Ok(MapLit::Pairs(self.pairs()?));
        }
        if !self.eat(&Tok::LBracket) {
            return self.fail(&["`{`", "`[`"]);
        }
        let mut out = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                let s = self.ident()?;
                self.expect(Tok::Colon)?;
                out.push((s, self.pairs()?));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(MapLit::Sorted(out))
    }

    /// `(f)` or `(a -> b)`.
    fn arrow_ref(&mut self) -> PResult<ArrowRef> {
        self.expect(Tok::LParen)?;
        let a = self.ident()?;
        let r = if self.eat(&Tok::Arrow) { ArrowRef::Between(a, self.ident()?) } else { ArrowRef::Named(a) };
        self.expect(Tok::RParen)?;
        Ok(r)
    }

    /// `value(x) = ..;` and `action(..) = ..;` entries up to `}`.
    fn value_entries(&mut self, allow_support: bool) -> PResult<(Vec<String>, Vec<(String, ValueLit)>, Vec<(ArrowRef, MapLit)>)> {
        self.expect(Tok::LBrace)?;
        let (mut support, mut values, mut actions) = (Vec::new(), Vec::new(), Vec::new());
        while !self.eat(&Tok::RBrace) {
            if allow_support && self.eat_kw("support") {
                support.extend(self.names_until(&Tok::Semi)?);
            } else if self.eat_kw("value") {
                self.expect(Tok::LParen)?;
                let a = self.ident()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Eq)?;
                values.push((a, self.value_lit()?));
            } else if self.eat_kw("action") {
                let r = self.arrow_ref()?;
                self.expect(Tok::Eq)?;
                actions.push((r, self.map_lit()?));
            } else if allow_support {
                return self.fail(&["`support`", "`value`", "`action`", "`}`"]);
            } else {
                return self.fail(&["`value`", "`action`", "`}`"]);
            }
            self.expect(Tok::Semi)?;
        }
        Ok((support, values, actions))
    }

    fn presheaf(&mut self) -> PResult<PresheafDecl> {
        self.kw("presheaf")?;
        let name = self.ident()?;
        if self.eat(&Tok::Eq) {
            let body = if self.eat_kw("representable") {
                let on = self.ident()?;
                let a = self.ident()?;
                self.expect(Tok::Semi)?;
                return Ok(PresheafDecl { name, on, body: PresheafBody::Representable(a) });
            } else if self.eat_kw("empty") {
                PresheafBody::Empty
            } else {
                return self.fail(&["`representable`", "`empty`"]);
            };
            let on = self.ident()?;
            self.expect(Tok::Semi)?;
            return Ok(PresheafDecl { name, on, body });
        }
        self.kw("on")?;
        let on = self.ident()?;
        let (support, values, actions) = self.value_entries(true)?;
        Ok(PresheafDecl { name, on, body: PresheafBody::Explicit { support, values, actions } })
    }

    fn variance(&mut self) -> PResult<bool> {
        if self.eat_kw("covariant") {
            Ok(true)
        } else if self.eat_kw("contravariant") {
            Ok(false)
        } else {
            self.fail(&["`covariant`", "`contravariant`"])
        }
    }

    fn weight(&mut self) -> PResult<WeightDecl> {
        self.kw("weight")?;
        let name = self.ident()?;
        if self.eat(&Tok::Eq) {
            self.kw("empty")?;
            let covariant = self.variance()?;
            self.kw("over")?;
            let base = self.ident()?;
            self.expect(Tok::Semi)?;
            return Ok(WeightDecl { name, domain: None, covariant, base, values: Vec::new(), actions: Vec::new() });
        }
        self.kw("on")?;
        let domain = Some(self.ident()?);
        let covariant = self.variance()?;
        self.kw("over")?;
        let base = self.ident()?;
        let (_, values, actions) = self.value_entries(false)?;
        Ok(WeightDecl { name, domain, covariant, base, values, actions })
    }

    fn diagram(&mut self) -> PResult<DiagramDecl> {
        self.kw("diagram")?;
        let name = self.ident()?;
        self.kw("in")?;
        let ambient = self.ident()?;
        if self.eat(&Tok::Eq) {
            self.kw("empty")?;
            self.expect(Tok::Semi)?;
            return Ok(DiagramDecl { name, ambient, domain: None, objects: Vec::new(), arrows: Vec::new() });
        }
        self.kw("over")?;
        let domain = Some(self.ident()?);
        self.expect(Tok::LBrace)?;
        let (mut objects, mut arrows) = (Vec::new(), Vec::new());
        while !self.eat(&Tok::RBrace) {
            if self.peek() == &Tok::LParen {
                let r = self.arrow_ref()?;
                self.expect(Tok::Arrow)?;
                arrows.push((r, self.ident()?));
            } else {
                let d = self.ident()?;
                self.expect(Tok::Arrow)?;
                objects.push((d, self.ident()?));
            }
            self.expect(Tok::Semi)?;
        }
        Ok(DiagramDecl { name, ambient, domain, objects, arrows })
    }

    fn monoidal(&mut self) -> PResult<MonoidalDecl> {
        self.kw("monoidal")?;
        let name = self.ident()?;
        self.kw("on")?;
        let on = self.ident()?;
        if self.eat(&Tok::Eq) {
            self.kw("approximate")?;
            let stages = self.names_until(&Tok::Semi)?;
            self.expect(Tok::Semi)?;
            return Ok(MonoidalDecl { name, on, body: MonoidalBody::Approximate(stages) });
        }
        self.expect(Tok::LBrace)?;
        let (mut tensor, mut table, mut unit) = (None, Vec::new(), None);
        while !self.eat(&Tok::RBrace) {
            if self.eat_kw("tensor") {
                if self.eat(&Tok::LParen) {
                    let a = self.ident()?;
                    self.expect(Tok::Comma)?;
                    let b = self.ident()?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::Eq)?;
                    table.push((a, b, self.ident()?));
                } else {
                    self.expect(Tok::Eq)?;
                    tensor = Some(if self.eat_kw("max") {
                        TensorLit::Max
                    } else if self.eat_kw("min") {
                        TensorLit::Min
                    } else if self.eat_kw("monoid") {
                        TensorLit::Monoid
                    } else {
                        return self.fail(&["`max`", "`min`", "`monoid`"]);
                    });
                }
            } else if self.eat_kw("unit") {
                self.expect(Tok::Eq)?;
                unit = Some(self.ident()?);
            } else {
                return self.fail(&["`tensor`", "`unit`", "`}`"]);
            }
            self.expect(Tok::Semi)?;
        }
        let tensor = match (tensor, table.is_empty()) {
            (Some(t), true) => t,
            (None, false) => TensorLit::Table(table),
            _ => {
                return Err(ParseError {
                    pos: self.pos(),
                    message: format!("monoidal {name} needs exactly one of a named tensor or a table"),
                    expected: Vec::new(),
                })
            }
        };
        Ok(MonoidalDecl { name, on, body: MonoidalBody::Tensor { tensor, unit } })
    }
}
