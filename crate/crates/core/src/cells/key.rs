use crate::syntax::{Name, Term};

use super::{Cell, Decl};

/// Locally nameless form of a cell. Two cells are α-equivalent iff their keys
/// are equal. The binder name of an η-step is not part of the key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKey {
    Free(Name),
    Bound(usize),
    TApp(Box<CellKey>, Box<CellKey>),
    TAbs(Box<CellKey>),
    PathVar(Box<CellKey>),
    Refl(Box<CellKey>),
    Beta(Box<CellKey>),
    Eta(Box<CellKey>, Option<Box<(usize, CellKey, CellKey)>>),
    Inv(Box<CellKey>),
    Concat(Box<CellKey>, Box<CellKey>),
    App(Box<CellKey>, Box<CellKey>),
    Abs(Option<Box<(usize, CellKey, CellKey)>>, Box<CellKey>, Option<Box<(CellKey, CellKey)>>),
    Degen(Box<CellKey>),
}

impl CellKey {
    /// Keys of plain terms, so that an uncollapsed application of two terms
    /// compares equal to the term application.
    fn is_term(&self) -> bool {
        matches!(self, CellKey::Free(_) | CellKey::Bound(_) | CellKey::TApp(..) | CellKey::TAbs(_))
    }
}

fn var_key(x: &Name, bound: &[Name]) -> CellKey {
    match bound.iter().rev().position(|b| b == x) {
        Some(i) => CellKey::Bound(i),
        None => CellKey::Free(x.clone()),
    }
}

fn term_key(t: &Term, bound: &mut Vec<Name>) -> CellKey {
    match t {
        Term::Var(x) => var_key(x, bound),
        Term::App(f, a) => CellKey::TApp(Box::new(term_key(f, bound)), Box::new(term_key(a, bound))),
        Term::Abs(x, b) => {
            bound.push(x.clone());
            let body = term_key(b, bound);
            bound.pop();
            CellKey::TAbs(Box::new(body))
        }
    }
}

fn decl_key(d: &Decl, bound: &mut Vec<Name>) -> Box<(usize, CellKey, CellKey)> {
    Box::new((d.dim, cell_key(&d.boundary.source, bound), cell_key(&d.boundary.target, bound)))
}

fn cell_key(c: &Cell, bound: &mut Vec<Name>) -> CellKey {
    let bx = |k: CellKey| Box::new(k);
    match c {
        Cell::Base(t) => term_key(t, bound),
        Cell::PathVar(x) => CellKey::PathVar(bx(var_key(x, bound))),
        Cell::Refl(c) => CellKey::Refl(bx(cell_key(c, bound))),
        Cell::Beta(c) => CellKey::Beta(bx(cell_key(c, bound))),
        Cell::Inv(c) => CellKey::Inv(bx(cell_key(c, bound))),
        Cell::Degen(c) => CellKey::Degen(bx(cell_key(c, bound))),
        Cell::Eta { body, decl, .. } => {
            CellKey::Eta(bx(cell_key(body, bound)), decl.as_ref().map(|d| decl_key(d, bound)))
        }
        Cell::Concat(a, b) => CellKey::Concat(bx(cell_key(a, bound)), bx(cell_key(b, bound))),
        Cell::App(a, b) => {
            let (ka, kb) = (cell_key(a, bound), cell_key(b, bound));
            if ka.is_term() && kb.is_term() {
                CellKey::TApp(bx(ka), bx(kb))
            } else {
                CellKey::App(bx(ka), bx(kb))
            }
        }
        Cell::Abs { binder, decl, body, ann } => {
            let dk = decl.as_ref().map(|d| decl_key(d, bound));
            let ak = ann
                .as_ref()
                .map(|b| Box::new((cell_key(&b.source, bound), cell_key(&b.target, bound))));
            bound.push(binder.clone());
            let bk = cell_key(body, bound);
            bound.pop();
            if dk.is_none() && ak.is_none() && bk.is_term() {
                CellKey::TAbs(bx(bk))
            } else {
                CellKey::Abs(dk, bx(bk), ak)
            }
        }
    }
}

impl Cell {
    pub fn key(&self) -> CellKey {
        cell_key(self, &mut Vec::new())
    }
}
