//! Dimension-indexed conversion cells.
//!
//! A dimension-0 cell is a term. An `n`-cell for `n >= 1` is a conversion
//! between two parallel `(n-1)`-cells, its boundary. Cells are kept in an
//! elaborated form: application operands always have equal dimension (the
//! lower one is wrapped in [`Cell::Degen`]) and cell syntax built only from
//! term pieces is collapsed into [`Cell::Base`].

pub(crate) mod boundary;
mod check;
mod context;
mod key;
mod parse;
pub(crate) mod subst;

use std::collections::BTreeSet;
use std::fmt;

pub use boundary::{boundary, dim, elaborate, src, tgt};
pub use check::{well_formed, Verdict, Violation};
pub use context::{parse_context, Context};
pub use key::CellKey;
pub use parse::{parse_cell, print_cell};
pub use subst::path_subst;

use crate::syntax::{Name, Term};

/// Source and target of a cell.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Boundary {
    pub source: Cell,
    pub target: Cell,
}

impl Boundary {
    pub fn new(source: Cell, target: Cell) -> Self {
        Boundary { source, target }
    }
}

impl fmt::Debug for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ~ {})", self.source, self.target)
    }
}

/// Declaration of a path variable: its dimension and boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decl {
    pub dim: usize,
    pub boundary: Boundary,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Cell {
    Base(Term),
    PathVar(Name),
    /// Empty conversion sequence on a cell.
    Refl(Box<Cell>),
    /// Contraction of the redex it wraps.
    Beta(Box<Cell>),
    /// Contraction of `\binder. body binder` to `body`. With a declaration the
    /// binder ranges over paths of that boundary.
    Eta { body: Box<Cell>, binder: Name, decl: Option<Box<Decl>> },
    Inv(Box<Cell>),
    /// Composition. Operands of equal dimension compose end to end; otherwise
    /// the lower operand whiskers the higher one.
    Concat(Box<Cell>, Box<Cell>),
    App(Box<Cell>, Box<Cell>),
    /// `decl = None` binds a term variable; otherwise a path variable, and
    /// `ann` optionally fixes the endpoints of the abstraction.
    Abs { binder: Name, decl: Option<Box<Decl>>, body: Box<Cell>, ann: Option<Box<Boundary>> },
    /// Degeneracy: the identity-shaped lift of a cell one dimension up.
    Degen(Box<Cell>),
}

impl Cell {
    pub fn base(t: Term) -> Cell {
        Cell::Base(t)
    }

    pub fn refl(c: Cell) -> Cell {
        Cell::Refl(Box::new(c))
    }

    pub fn beta(redex: Cell) -> Cell {
        Cell::Beta(Box::new(redex))
    }

    pub fn eta(body: Cell, binder: Name) -> Cell {
        Cell::Eta { body: Box::new(body), binder, decl: None }
    }

    pub fn eta_path(body: Cell, binder: Name, decl: Decl) -> Cell {
        Cell::Eta { body: Box::new(body), binder, decl: Some(Box::new(decl)) }
    }

    pub fn inv(c: Cell) -> Cell {
        Cell::Inv(Box::new(c))
    }

    pub fn concat(a: Cell, b: Cell) -> Cell {
        Cell::Concat(Box::new(a), Box::new(b))
    }

    pub fn degen(c: Cell) -> Cell {
        Cell::Degen(Box::new(c))
    }

    /// `c` under `k` degeneracies.
    pub fn lift(mut c: Cell, k: usize) -> Cell {
        for _ in 0..k {
            c = Cell::degen(c);
        }
        c
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Cell::Base(t) => Some(t),
            _ => None,
        }
    }

    /// Number of constructor nodes, counting term nodes inside `Base`.
    pub fn size(&self) -> usize {
        match self {
            Cell::Base(t) => t.node_count(),
            Cell::PathVar(_) => 1,
            Cell::Refl(c) | Cell::Beta(c) | Cell::Inv(c) | Cell::Degen(c) => 1 + c.size(),
            Cell::Eta { body, .. } => 1 + body.size(),
            Cell::Concat(a, b) | Cell::App(a, b) => 1 + a.size() + b.size(),
            Cell::Abs { body, .. } => 1 + body.size(),
        }
    }

    /// Free term and path variables, including those of declared boundaries.
    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Name>, out: &mut BTreeSet<Name>) {
        match self {
            Cell::Base(t) => out.extend(t.free_vars().into_iter().filter(|x| !bound.contains(&x))),
            Cell::PathVar(x) => {
                if !bound.contains(&x) {
                    out.insert(x.clone());
                }
            }
            Cell::Refl(c) | Cell::Beta(c) | Cell::Inv(c) | Cell::Degen(c) => c.collect_free(bound, out),
            Cell::Eta { body, decl, .. } => {
                body.collect_free(bound, out);
                if let Some(d) = decl {
                    d.boundary.source.collect_free(bound, out);
                    d.boundary.target.collect_free(bound, out);
                }
            }
            Cell::Concat(a, b) | Cell::App(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Cell::Abs { binder, decl, body, ann } => {
                for b in decl.iter().map(|d| &d.boundary).chain(ann.as_deref()) {
                    b.source.collect_free(bound, out);
                    b.target.collect_free(bound, out);
                }
                bound.push(binder);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &Name) -> bool {
        self.free_names().contains(x)
    }

    /// Every name occurring anywhere in the cell.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Cell::Base(t) => t.all_names(out),
            Cell::PathVar(x) => {
                out.insert(x.clone());
            }
            Cell::Refl(c) | Cell::Beta(c) | Cell::Inv(c) | Cell::Degen(c) => c.all_names(out),
            Cell::Eta { body, binder, decl } => {
                out.insert(binder.clone());
                body.all_names(out);
                if let Some(d) = decl {
                    d.boundary.source.all_names(out);
                    d.boundary.target.all_names(out);
                }
            }
            Cell::Concat(a, b) | Cell::App(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Cell::Abs { binder, decl, body, ann } => {
                out.insert(binder.clone());
                for b in decl.iter().map(|d| &d.boundary).chain(ann.as_deref()) {
                    b.source.all_names(out);
                    b.target.all_names(out);
                }
                body.all_names(out);
            }
        }
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_cell(self))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_cell(self))
    }
}

/// α-equivalence of cells: equal up to renaming of term and path binders.
pub fn cell_alpha_eq(a: &Cell, b: &Cell) -> bool {
    a.key() == b.key()
}
