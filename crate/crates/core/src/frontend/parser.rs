//! Recursive-descent parser producing an unelaborated syntax tree.

use super::lexer::{tokenize, Pos, Tok, Token};
use super::FrontendError;

/// Integer expressions used for parameters, bus widths and indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IExpr {
    Num(i64),
    Var(String, Pos),
    Add(Box<IExpr>, Box<IExpr>),
    Sub(Box<IExpr>, Box<IExpr>),
    Mul(Box<IExpr>, Box<IExpr>),
    Neg(Box<IExpr>),
}

/// Elements of an explicit index set: single values or inclusive ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetItem {
    Single(IExpr),
    Range(IExpr, IExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Bounds {
        lo: IExpr,
        lo_strict: bool,
        hi: IExpr,
        hi_strict: bool,
    },
    Set {
        items: Vec<SetItem>,
        minus: Vec<SetItem>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    Name {
        name: String,
        index: Option<IExpr>,
        pos: Pos,
    },
    Call {
        name: String,
        args: Vec<Expr>,
        pos: Pos,
    },
    Not(Box<Expr>),
    Next(Box<Expr>),
    Globally(Box<Expr>, Pos),
    /// `F`, `U`, `W`, `R`: parsed so the error can name them.
    Temporal(String, Pos),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    BigOp {
        conj: bool,
        var: String,
        domain: Domain,
        body: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub width: Option<IExpr>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub body: Expr,
    pub pos: Pos,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub params: Vec<(String, IExpr, Pos)>,
    pub inputs: Vec<Decl>,
    pub outputs: Vec<Decl>,
    pub initially: Vec<Expr>,
    pub preset: Vec<Expr>,
    pub assumptions: Vec<Expr>,
    pub guarantees: Vec<Expr>,
    pub definitions: Vec<Definition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeDecl {
    pub name: String,
    pub pos: Pos,
    pub pred: Expr,
    pub init: Expr,
    pub arrival: Option<Expr>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModesDocument {
    pub modes: Vec<ModeDecl>,
    pub relation: Option<Vec<(String, String, Pos)>>,
}

const KEYWORDS: &[&str] = &["X", "G", "F", "U", "W", "R", "IN", "true", "false", "TRUE", "FALSE"];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, FrontendError> {
        Ok(Parser {
            toks: tokenize(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: impl Into<String>) -> Result<T, FrontendError> {
        Err(FrontendError::Syntax {
            pos: self.pos(),
            expected: format!("{} (found {})", expected.into(), self.peek()),
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, FrontendError> {
        if self.peek() == &tok {
            Ok(self.advance().pos)
        } else {
            self.error(tok.to_string())
        }
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn ident(&mut self) -> Result<(String, Pos), FrontendError> {
        match self.peek().clone() {
            Tok::Ident(name) if !is_keyword(&name) => {
                let pos = self.advance().pos;
                Ok((name, pos))
            }
            _ => self.error("identifier"),
        }
    }

    // ---- integer expressions ----

    fn iexpr(&mut self) -> Result<IExpr, FrontendError> {
        let mut lhs = self.iterm()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = IExpr::Add(Box::new(lhs), Box::new(self.iterm()?));
            } else if self.eat(&Tok::Minus) {
                lhs = IExpr::Sub(Box::new(lhs), Box::new(self.iterm()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn iterm(&mut self) -> Result<IExpr, FrontendError> {
        let mut lhs = self.ifactor()?;
        while self.eat(&Tok::Star) {
            lhs = IExpr::Mul(Box::new(lhs), Box::new(self.ifactor()?));
        }
        Ok(lhs)
    }

    fn ifactor(&mut self) -> Result<IExpr, FrontendError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.advance();
                Ok(IExpr::Num(v))
            }
            Tok::Minus => {
                self.advance();
                Ok(IExpr::Neg(Box::new(self.ifactor()?)))
            }
            Tok::LParen => {
                self.advance();
                let e = self.iexpr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(_) => {
                let (name, pos) = self.ident()?;
                Ok(IExpr::Var(name, pos))
            }
            _ => self.error("integer expression"),
        }
    }

    // ---- formulas ----

    fn expr(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            lhs = Expr::Iff(Box::new(lhs), Box::new(self.implication()?));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Expr, FrontendError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::OrOr) {
            lhs = Expr::Or(Box::new(lhs), Box::new(self.conjunction()?));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.binary_temporal()?;
        while self.eat(&Tok::AndAnd) {
            lhs = Expr::And(Box::new(lhs), Box::new(self.binary_temporal()?));
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Expr, FrontendError> {
        let lhs = self.unary()?;
        for op in ["U", "W", "R"] {
            if self.is_word(op) {
                let pos = self.advance().pos;
                self.binary_temporal()?;
                return Ok(Expr::Temporal(op.into(), pos));
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, FrontendError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Bang => {
                self.advance();
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Tok::AndAnd | Tok::OrOr if self.peek_at(1) == &Tok::LBracket => {
                let conj = self.advance().tok == Tok::AndAnd;
                self.advance();
                let (var, domain) = self.domain()?;
                self.expect(Tok::RBracket)?;
                let body = self.unary()?;
                Ok(Expr::BigOp {
                    conj,
                    var,
                    domain,
                    body: Box::new(body),
                })
            }
            Tok::Ident(w) if w == "X" => {
                self.advance();
                Ok(Expr::Next(Box::new(self.unary()?)))
            }
            Tok::Ident(w) if w == "G" => {
                self.advance();
                Ok(Expr::Globally(Box::new(self.unary()?), pos))
            }
            Tok::Ident(w) if w == "F" => {
                self.advance();
                self.unary()?;
                Ok(Expr::Temporal("F".into(), pos))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Expr, FrontendError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(w) if matches!(w.as_str(), "true" | "TRUE") => {
                self.advance();
                Ok(Expr::Const(true))
            }
            Tok::Ident(w) if matches!(w.as_str(), "false" | "FALSE") => {
                self.advance();
                Ok(Expr::Const(false))
            }
            Tok::Ident(_) => {
                let (name, pos) = self.ident()?;
                if self.eat(&Tok::LParen) {
                    let mut args = Vec::new();
                    if !self.eat(&Tok::RParen) {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(&Tok::RParen) {
                                break;
                            }
                            self.expect(Tok::Comma)?;
                        }
                    }
                    return Ok(Expr::Call { name, args, pos });
                }
                let index = if self.eat(&Tok::LBracket) {
                    let i = self.iexpr()?;
                    self.expect(Tok::RBracket)?;
                    Some(i)
                } else {
                    None
                };
                Ok(Expr::Name { name, index, pos })
            }
            _ => self.error("formula"),
        }
    }

    fn domain(&mut self) -> Result<(String, Domain), FrontendError> {
        if matches!(self.peek(), Tok::Ident(_)) && matches!(self.peek_at(1), Tok::Ident(w) if w == "IN")
        {
            let (var, _) = self.ident()?;
            self.advance();
            let items = self.set_literal()?;
            let minus = if self.eat(&Tok::SetMinus) {
                self.set_literal()?
            } else {
                Vec::new()
            };
            return Ok((var, Domain::Set { items, minus }));
        }
        let lo = self.iexpr()?;
        let lo_strict = self.comparison()?;
        let (var, _) = self.ident()?;
        let hi_strict = self.comparison()?;
        let hi = self.iexpr()?;
        Ok((
            var,
            Domain::Bounds {
                lo,
                lo_strict,
                hi,
                hi_strict,
            },
        ))
    }

    /// `<` gives true (strict), `<=` false.
    fn comparison(&mut self) -> Result<bool, FrontendError> {
        if self.eat(&Tok::Le) {
            Ok(false)
        } else if self.eat(&Tok::Lt) {
            Ok(true)
        } else {
            self.error("`<=` or `<`")
        }
    }

    fn set_literal(&mut self) -> Result<Vec<SetItem>, FrontendError> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(items);
        }
        loop {
            let first = self.iexpr()?;
            if self.eat(&Tok::DotDot) {
                items.push(SetItem::Range(first, self.iexpr()?));
            } else {
                items.push(SetItem::Single(first));
            }
            if self.eat(&Tok::RBrace) {
                return Ok(items);
            }
            self.expect(Tok::Comma)?;
        }
    }

    // ---- specification documents ----

    fn document(&mut self) -> Result<Document, FrontendError> {
        let mut doc = Document::default();
        if self.is_word("INFO") {
            self.advance();
            self.skip_block()?;
        }
        if self.is_word("MAIN") {
            self.advance();
            self.expect(Tok::LBrace)?;
            while !self.eat(&Tok::RBrace) {
                self.section(&mut doc)?;
            }
        } else {
            while self.peek() != &Tok::Eof {
                self.section(&mut doc)?;
            }
        }
        self.expect(Tok::Eof)?;
        Ok(doc)
    }

    fn skip_block(&mut self) -> Result<(), FrontendError> {
        self.expect(Tok::LBrace)?;
        let mut depth = 1;
        while depth > 0 {
            match self.advance().tok {
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth -= 1,
                Tok::Eof => return self.error("`}`"),
                _ => {}
            }
        }
        Ok(())
    }

    fn section(&mut self, doc: &mut Document) -> Result<(), FrontendError> {
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return self.error("section name"),
        };
        match word.as_str() {
            "PARAMETERS" => {
                self.advance();
                self.expect(Tok::LBrace)?;
                while !self.eat(&Tok::RBrace) {
                    let (name, pos) = self.ident()?;
                    self.expect(Tok::Assign)?;
                    let value = self.iexpr()?;
                    self.expect(Tok::Semi)?;
                    doc.params.push((name, value, pos));
                }
            }
            "INPUTS" | "OUTPUTS" => {
                self.advance();
                let decls = self.declarations()?;
                if word == "INPUTS" {
                    doc.inputs.extend(decls);
                } else {
                    doc.outputs.extend(decls);
                }
            }
            "INITIALLY" => {
                self.advance();
                let items = self.items()?;
                doc.initially.extend(items);
            }
            "PRESET" => {
                self.advance();
                let items = self.items()?;
                doc.preset.extend(items);
            }
            "ASSUMPTIONS" | "ASSUME" => {
                self.advance();
                let items = self.items()?;
                doc.assumptions.extend(items);
            }
            "GUARANTEES" | "GUARANTEE" => {
                self.advance();
                let items = self.items()?;
                doc.guarantees.extend(items);
            }
            "DEFINITIONS" => {
                self.advance();
                self.expect(Tok::LBrace)?;
                while !self.eat(&Tok::RBrace) {
                    doc.definitions.push(self.definition()?);
                }
            }
            _ => {
                return self.error(
                    "one of PARAMETERS, INPUTS, OUTPUTS, INITIALLY, PRESET, ASSUMPTIONS, \
                     DEFINITIONS, GUARANTEES",
                )
            }
        }
        Ok(())
    }

    fn declarations(&mut self) -> Result<Vec<Decl>, FrontendError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(out);
            }
            let (name, pos) = self.ident()?;
            let width = if self.eat(&Tok::LBracket) {
                let w = self.iexpr()?;
                self.expect(Tok::RBracket)?;
                Some(w)
            } else {
                None
            };
            out.push(Decl { name, width, pos });
            if !self.eat(&Tok::Semi) && !self.eat(&Tok::Comma) && self.peek() != &Tok::RBrace {
                return self.error("`;`, `,` or `}`");
            }
        }
    }

    fn items(&mut self) -> Result<Vec<Expr>, FrontendError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        while !self.eat(&Tok::RBrace) {
            out.push(self.expr()?);
            self.expect(Tok::Semi)?;
        }
        Ok(out)
    }

    fn definition(&mut self) -> Result<Definition, FrontendError> {
        let (name, pos) = self.ident()?;
        let mut params = Vec::new();
        if self.eat(&Tok::LParen)
            && !self.eat(&Tok::RParen) {
                loop {
                    params.push(self.ident()?.0);
                    if self.eat(&Tok::RParen) {
                        break;
                    }
                    self.expect(Tok::Comma)?;
                }
            }
        self.expect(Tok::Assign)?;
        let body = self.expr()?;
        self.expect(Tok::Semi)?;
        Ok(Definition {
            name,
            params,
            body,
            pos,
        })
    }

    // ---- modes documents ----

    fn modes_document(&mut self) -> Result<ModesDocument, FrontendError> {
        let mut doc = ModesDocument::default();
        loop {
            if self.is_word("MODE") {
                self.advance();
                doc.modes.push(self.mode()?);
            } else if self.is_word("RELATION") {
                self.advance();
                let rel = doc.relation.get_or_insert_with(Vec::new);
                self.expect(Tok::LBrace)?;
                while !self.eat(&Tok::RBrace) {
                    let (from, pos) = self.ident()?;
                    self.expect(Tok::Arrow)?;
                    let (to, _) = self.ident()?;
                    self.expect(Tok::Semi)?;
                    rel.push((from, to, pos));
                }
            } else if self.peek() == &Tok::Eof {
                return Ok(doc);
            } else {
                return self.error("MODE or RELATION");
            }
        }
    }

    fn mode(&mut self) -> Result<ModeDecl, FrontendError> {
        let (name, pos) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let (mut pred, mut init, mut arrival) = (None, None, None);
        while !self.eat(&Tok::RBrace) {
            let field_pos = self.pos();
            let (field, _) = self.ident()?;
            self.expect(Tok::Assign)?;
            let value = self.expr()?;
            self.expect(Tok::Semi)?;
            let slot = match field.as_str() {
                "pred" => &mut pred,
                "init" => &mut init,
                "arrival" => &mut arrival,
                _ => {
                    return Err(FrontendError::Syntax {
                        pos: field_pos,
                        expected: format!("`pred`, `init` or `arrival` (found `{field}`)"),
                    })
                }
            };
            if slot.replace(value).is_some() {
                return Err(FrontendError::Syntax {
                    pos: field_pos,
                    expected: format!("a single `{field}` field"),
                });
            }
        }
        let missing = |field: &str| FrontendError::Syntax {
            pos,
            expected: format!("a `{field}` field in mode `{name}`"),
        };
        Ok(ModeDecl {
            pred: pred.ok_or_else(|| missing("pred"))?,
            init: init.ok_or_else(|| missing("init"))?,
            arrival,
            name,
            pos,
        })
    }
}

pub fn parse_document(text: &str) -> Result<Document, FrontendError> {
    Parser::new(text)?.document()
}

pub fn parse_modes_document(text: &str) -> Result<ModesDocument, FrontendError> {
    Parser::new(text)?.modes_document()
}
