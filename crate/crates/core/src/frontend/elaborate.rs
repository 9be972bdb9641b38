//! Expansion of parameters, buses, big operators and macros.

use std::collections::{BTreeSet, HashMap};

use super::lexer::Pos;
use super::parser::{Definition, Document, Domain, Expr, IExpr, SetItem};
use super::spec::ReactiveSpec;
use super::FrontendError;
use crate::ltl::{AtomKind, Formula, SymbolTable};

/// Name resolution context for formulas.
pub(crate) struct Scope<'a> {
    pub params: HashMap<String, i64>,
    pub buses: HashMap<String, usize>,
    pub atoms: &'a SymbolTable,
    pub macros: HashMap<String, &'a Definition>,
    index_vars: Vec<(String, i64)>,
    aliases: Vec<(String, String)>,
    expanding: Vec<String>,
}

impl<'a> Scope<'a> {
    pub fn new(atoms: &'a SymbolTable) -> Self {
        Scope {
            params: HashMap::new(),
            buses: HashMap::new(),
            atoms,
            macros: HashMap::new(),
            index_vars: Vec::new(),
            aliases: Vec::new(),
            expanding: Vec::new(),
        }
    }

    fn lookup_int(&self, name: &str, pos: Pos) -> Result<i64, FrontendError> {
        if let Some((_, v)) = self.index_vars.iter().rev().find(|(n, _)| n == name) {
            return Ok(*v);
        }
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| FrontendError::UnboundParameter {
                pos,
                name: name.to_string(),
            })
    }

    fn resolve_alias<'n>(&'n self, name: &'n str) -> &'n str {
        self.aliases
            .iter()
            .rev()
            .find(|(param, _)| param == name)
            .map(|(_, bus)| bus.as_str())
            .unwrap_or(name)
    }

    pub fn int(&self, e: &IExpr) -> Result<i64, FrontendError> {
        let overflow = || FrontendError::Arity {
            pos: Pos::default(),
            detail: "integer overflow in index expression".into(),
        };
        Ok(match e {
            IExpr::Num(v) => *v,
            IExpr::Var(name, pos) => self.lookup_int(name, *pos)?,
            IExpr::Add(a, b) => self.int(a)?.checked_add(self.int(b)?).ok_or_else(overflow)?,
            IExpr::Sub(a, b) => self.int(a)?.checked_sub(self.int(b)?).ok_or_else(overflow)?,
            IExpr::Mul(a, b) => self.int(a)?.checked_mul(self.int(b)?).ok_or_else(overflow)?,
            IExpr::Neg(a) => self.int(a)?.checked_neg().ok_or_else(overflow)?,
        })
    }

    fn domain(&self, d: &Domain) -> Result<Vec<i64>, FrontendError> {
        match d {
            Domain::Bounds {
                lo,
                lo_strict,
                hi,
                hi_strict,
            } => {
                let lo = self.int(lo)? + i64::from(*lo_strict);
                let hi = self.int(hi)? - i64::from(*hi_strict);
                Ok((lo..=hi).collect())
            }
            Domain::Set { items, minus } => {
                let base = self.set(items)?;
                let minus = self.set(minus)?;
                Ok(base.difference(&minus).copied().collect())
            }
        }
    }

    fn set(&self, items: &[SetItem]) -> Result<BTreeSet<i64>, FrontendError> {
        let mut out = BTreeSet::new();
        for item in items {
            match item {
                SetItem::Single(e) => {
                    out.insert(self.int(e)?);
                }
                SetItem::Range(a, b) => out.extend(self.int(a)?..=self.int(b)?),
            }
        }
        Ok(out)
    }

    /// Splits an item into `(under_G, body)` pieces: a top-level `G`, or a
    /// conjunction (possibly indexed or from a macro) of them, yields one
    /// piece per conjunct.
    pub fn items(&mut self, e: &Expr) -> Result<Vec<(bool, Formula)>, FrontendError> {
        match e {
            Expr::Globally(body, _) => Ok(vec![(true, self.formula(body)?)]),
            Expr::And(a, b) if self.has_top_globally(e) => {
                let mut out = self.items(a)?;
                out.extend(self.items(b)?);
                Ok(out)
            }
            Expr::BigOp {
                conj: true,
                var,
                domain,
                body,
            } if self.has_top_globally(e) => {
                let mut out = Vec::new();
                for v in self.domain(domain)? {
                    self.index_vars.push((var.clone(), v));
                    let r = self.items(body);
                    self.index_vars.pop();
                    out.extend(r?);
                }
                Ok(out)
            }
            Expr::Call { name, args, pos } if self.has_top_globally(e) => {
                self.with_macro(name, args, *pos, |scope, body| scope.items(body))
            }
            _ => Ok(vec![(false, self.formula(e)?)]),
        }
    }

    fn has_top_globally(&self, e: &Expr) -> bool {
        match e {
            Expr::Globally(..) => true,
            Expr::And(a, b) => self.has_top_globally(a) || self.has_top_globally(b),
            Expr::BigOp {
                conj: true, body, ..
            } => self.has_top_globally(body),
            Expr::Call { name, .. } => self
                .macros
                .get(name)
                .is_some_and(|d| !self.expanding.contains(name) && self.has_top_globally(&d.body)),
            _ => false,
        }
    }

    fn with_macro<T>(
        &mut self,
        name: &str,
        args: &[Expr],
        pos: Pos,
        f: impl FnOnce(&mut Self, &Expr) -> Result<T, FrontendError>,
    ) -> Result<T, FrontendError> {
        let def = *self
            .macros
            .get(name)
            .ok_or_else(|| FrontendError::UndeclaredAtom {
                pos,
                name: name.to_string(),
            })?;
        if self.expanding.iter().any(|n| n == name) {
            return Err(FrontendError::RecursiveDefinition {
                name: name.to_string(),
            });
        }
        if def.params.len() != args.len() {
            return Err(FrontendError::Arity {
                pos,
                detail: format!(
                    "`{name}` takes {} argument(s), {} given",
                    def.params.len(),
                    args.len()
                ),
            });
        }
        let mut aliases = Vec::new();
        let mut width_binding = None;
        for (param, arg) in def.params.iter().zip(args) {
            let bus = match arg {
                Expr::Name {
                    name: arg_name,
                    index: None,
                    ..
                } => self.resolve_alias(arg_name).to_string(),
                _ => {
                    return Err(FrontendError::Arity {
                        pos,
                        detail: format!("argument `{param}` of `{name}` must be a bus name"),
                    })
                }
            };
            let width = *self.buses.get(&bus).ok_or_else(|| FrontendError::Arity {
                pos,
                detail: format!("`{bus}` is not a bus"),
            })?;
            if width_binding.is_none() && !self.params.contains_key("n") {
                width_binding = Some(width as i64);
            }
            aliases.push((param.clone(), bus));
        }
        let saved_vars = self.index_vars.len();
        let saved_aliases = self.aliases.len();
        if let Some(w) = width_binding {
            self.index_vars.push(("n".into(), w));
        }
        self.aliases.extend(aliases);
        self.expanding.push(name.to_string());
        let r = f(self, &def.body);
        self.expanding.pop();
        self.aliases.truncate(saved_aliases);
        self.index_vars.truncate(saved_vars);
        r
    }

    /// Elaborates a formula in which `G`, `F`, `U`, `W`, `R` are rejected.
    pub fn formula(&mut self, e: &Expr) -> Result<Formula, FrontendError> {
        Ok(match e {
            Expr::Const(true) => Formula::True,
            Expr::Const(false) => Formula::False,
            Expr::Name { name, index, pos } => self.name(name, index.as_ref(), *pos)?,
            Expr::Call { name, args, pos } => {
                self.with_macro(name, args, *pos, |scope, body| scope.formula(body))?
            }
            Expr::Not(a) => Formula::not(self.formula(a)?),
            Expr::Next(a) => Formula::next(self.formula(a)?),
            Expr::Globally(_, pos) => {
                return Err(FrontendError::NonSafetyOperator {
                    pos: *pos,
                    op: "G".into(),
                })
            }
            Expr::Temporal(op, pos) => {
                return Err(FrontendError::NonSafetyOperator {
                    pos: *pos,
                    op: op.clone(),
                })
            }
            Expr::And(a, b) => Formula::and(self.formula(a)?, self.formula(b)?),
            Expr::Or(a, b) => Formula::or(self.formula(a)?, self.formula(b)?),
            Expr::Implies(a, b) => Formula::implies(self.formula(a)?, self.formula(b)?),
            Expr::Iff(a, b) => {
                let (x, y) = (self.formula(a)?, self.formula(b)?);
                Formula::and(Formula::implies(x.clone(), y.clone()), Formula::implies(y, x))
            }
            Expr::BigOp {
                conj,
                var,
                domain,
                body,
            } => {
                let mut parts = Vec::new();
                for v in self.domain(domain)? {
                    self.index_vars.push((var.clone(), v));
                    let r = self.formula(body);
                    self.index_vars.pop();
                    parts.push(r?);
                }
                if *conj {
                    Formula::and_all(parts)
                } else {
                    Formula::or_all(parts)
                }
            }
        })
    }

    fn name(&mut self, name: &str, index: Option<&IExpr>, pos: Pos) -> Result<Formula, FrontendError> {
        let name = self.resolve_alias(name).to_string();
        match index {
            Some(i) => {
                let v = self.int(i)?;
                if let Some(&width) = self.buses.get(&name) {
                    if v < 0 || v >= width as i64 {
                        return Err(FrontendError::Arity {
                            pos,
                            detail: format!("index {v} out of range for `{name}[{width}]`"),
                        });
                    }
                }
                let flat = format!("{name}_{v}");
                if self.atoms.contains(&flat) {
                    Ok(Formula::Atom(flat))
                } else {
                    Err(FrontendError::UndeclaredAtom { pos, name: flat })
                }
            }
            None => {
                if self.atoms.contains(&name) {
                    return Ok(Formula::Atom(name));
                }
                if self.macros.get(&name).is_some_and(|d| d.params.is_empty()) {
                    return self.with_macro(&name, &[], pos, |scope, body| scope.formula(body));
                }
                if self.buses.contains_key(&name) {
                    return Err(FrontendError::Arity {
                        pos,
                        detail: format!("bus `{name}` used without an index"),
                    });
                }
                Err(FrontendError::UndeclaredAtom { pos, name })
            }
        }
    }
}

/// Turns a parsed document into a specification; `overrides` replace the
/// values of declared parameters.
pub fn elaborate(doc: &Document, overrides: &[(String, i64)]) -> Result<ReactiveSpec, FrontendError> {
    let mut params = HashMap::new();
    for (name, value, pos) in &doc.params {
        let v = match overrides.iter().find(|(n, _)| n == name) {
            Some((_, v)) => *v,
            None => {
                let table = SymbolTable::new();
                let mut scope = Scope::new(&table);
                scope.params = params.clone();
                scope.int(value).map_err(|e| match e {
                    FrontendError::UnboundParameter { name, .. } => {
                        FrontendError::UnboundParameter { pos: *pos, name }
                    }
                    other => other,
                })?
            }
        };
        params.insert(name.clone(), v);
    }
    if let Some((name, _)) = overrides.iter().find(|(n, _)| !params.contains_key(n)) {
        return Err(FrontendError::UnboundParameter {
            pos: Pos::default(),
            name: name.clone(),
        });
    }

    let mut table = SymbolTable::new();
    let mut buses = HashMap::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let sections = [
        (&doc.inputs, AtomKind::Input, &mut inputs),
        (&doc.outputs, AtomKind::Output, &mut outputs),
    ];
    for (decls, kind, names) in sections {
        for decl in decls {
            let flat: Vec<String> = match &decl.width {
                None => vec![decl.name.clone()],
                Some(w) => {
                    let empty = SymbolTable::new();
                    let mut scope = Scope::new(&empty);
                    scope.params = params.clone();
                    let width = scope.int(w)?;
                    if width <= 0 {
                        return Err(FrontendError::Arity {
                            pos: decl.pos,
                            detail: format!("bus `{}` must have positive width, got {width}", decl.name),
                        });
                    }
                    if buses.insert(decl.name.clone(), width as usize).is_some() {
                        return Err(FrontendError::DuplicateAtom(decl.name.clone()));
                    }
                    (0..width).map(|i| format!("{}_{i}", decl.name)).collect()
                }
            };
            for name in flat {
                table
                    .insert(name.clone(), kind)
                    .map_err(|_| FrontendError::DuplicateAtom(name.clone()))?;
                names.push(name);
            }
        }
    }

    let mut scope = Scope::new(&table);
    scope.params = params;
    scope.buses = buses;
    for def in &doc.definitions {
        if scope.macros.insert(def.name.clone(), def).is_some() {
            return Err(FrontendError::Syntax {
                pos: def.pos,
                expected: format!("a single definition of `{}`", def.name),
            });
        }
    }

    let mut initially = Vec::new();
    for e in &doc.initially {
        initially.push(scope.formula(e)?);
    }
    let mut preset = Vec::new();
    for e in &doc.preset {
        preset.push(scope.formula(e)?);
    }
    let mut assumptions = Vec::new();
    for e in &doc.assumptions {
        for (global, f) in scope.items(e)? {
            if global {
                assumptions.push(f);
            } else {
                initially.push(f);
            }
        }
    }
    let mut guarantees = Vec::new();
    for e in &doc.guarantees {
        for (global, f) in scope.items(e)? {
            if global {
                guarantees.push(f);
            } else {
                preset.push(f);
            }
        }
    }

    let initially = Formula::and_all(initially);
    let preset = Formula::and_all(preset);
    check_scope(&initially, &table, AtomKind::Input, "INITIALLY")?;
    check_scope(&preset, &table, AtomKind::Output, "PRESET")?;

    Ok(ReactiveSpec {
        inputs,
        outputs,
        initially,
        preset,
        assumptions,
        guarantees,
    })
}

fn check_scope(
    f: &Formula,
    table: &SymbolTable,
    kind: AtomKind,
    section: &'static str,
) -> Result<(), FrontendError> {
    match f.atoms().into_iter().find(|a| table.kind(a) != Some(kind)) {
        Some(atom) => Err(FrontendError::Scope { section, atom }),
        None => Ok(()),
    }
}
