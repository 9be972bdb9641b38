use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::elaborate::Scope;
use super::parser::{parse_modes_document, Expr};
use super::spec::ReactiveSpec;
use super::FrontendError;
use crate::ltl::{AtomKind, Formula};
use crate::propcheck;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mode {
    pub name: String,
    pub predicate: Formula,
    /// Initial condition `I_i` of the sub-game.
    pub init: Formula,
    /// Environment condition assumed when the sub-game is entered.
    pub arrival: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeDecomposition {
    pub modes: Vec<Mode>,
    /// Ordered pairs `(i, j)` of 0-based mode indices with `m_i ≺ m_j`.
    pub relation: BTreeSet<(usize, usize)>,
}

impl ModeDecomposition {
    /// Modes reachable from `i` in one transition.
    pub fn successors(&self, i: usize) -> Vec<usize> {
        self.relation
            .iter()
            .filter(|(from, _)| *from == i)
            .map(|(_, to)| *to)
            .collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.modes.iter().position(|m| m.name == name)
    }

    /// Every ordered pair of distinct modes.
    pub fn complete_relation(n: usize) -> BTreeSet<(usize, usize)> {
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect()
    }
}

pub fn parse_modes(text: &str, spec: &ReactiveSpec) -> Result<ModeDecomposition, FrontendError> {
    let doc = parse_modes_document(text)?;
    if doc.modes.is_empty() {
        return Err(FrontendError::EmptyModeList);
    }
    let table = spec.symbol_table();
    let mut seen = HashMap::new();
    let mut modes = Vec::new();
    for (i, decl) in doc.modes.iter().enumerate() {
        if seen.insert(decl.name.clone(), i).is_some() {
            return Err(FrontendError::Syntax {
                pos: decl.pos,
                expected: format!("a fresh mode name (`{}` is already defined)", decl.name),
            });
        }
        let mut scope = Scope::new(&table);
        let mut field = |label: &'static str, e: &Expr| -> Result<Formula, FrontendError> {
            let f = scope.formula(e).map_err(|err| match err {
                FrontendError::UndeclaredAtom { pos, name } => FrontendError::UnknownAtom { pos, name },
                other => other,
            })?;
            if f.contains_next() {
                return Err(FrontendError::TemporalInMode {
                    mode: decl.name.clone(),
                    field: label,
                });
            }
            Ok(f)
        };
        let predicate = field("pred", &decl.pred)?;
        let init = field("init", &decl.init)?;
        let arrival = match &decl.arrival {
            Some(e) => field("arrival", e)?,
            None => Formula::True,
        };
        if let Some(atom) = arrival
            .atoms()
            .into_iter()
            .find(|a| table.kind(a) != Some(AtomKind::Input))
        {
            return Err(FrontendError::ArrivalScope {
                mode: decl.name.clone(),
                atom,
            });
        }
        if !propcheck::is_valid(&Formula::implies(init.clone(), predicate.clone())) {
            return Err(FrontendError::InitNotInMode {
                mode: decl.name.clone(),
            });
        }
        modes.push(Mode {
            name: decl.name.clone(),
            predicate,
            init,
            arrival,
        });
    }

    let relation = match &doc.relation {
        None => ModeDecomposition::complete_relation(modes.len()),
        Some(pairs) => {
            let mut rel = BTreeSet::new();
            for (from, to, pos) in pairs {
                let lookup = |name: &String| {
                    seen.get(name).copied().ok_or_else(|| FrontendError::UnknownMode {
                        pos: *pos,
                        name: name.clone(),
                    })
                };
                let (i, j) = (lookup(from)?, lookup(to)?);
                if i == j {
                    return Err(FrontendError::ReflexiveRelation { name: from.clone() });
                }
                rel.insert((i, j));
            }
            rel
        }
    };
    Ok(ModeDecomposition { modes, relation })
}
