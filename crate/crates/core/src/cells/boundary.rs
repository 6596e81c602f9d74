use crate::error::KernelError;
use crate::syntax::{subst, Name, Term};

use super::subst::path_subst_in;
use super::{cell_alpha_eq, Boundary, Cell, Context, Decl};

type R<T> = Result<T, KernelError>;

pub fn dim(c: &Cell, ctx: &Context) -> R<usize> {
    dim_in(c, &mut ctx.clone())
}

pub fn src(c: &Cell, ctx: &Context) -> R<Cell> {
    Ok(boundary(c, ctx)?.0)
}

pub fn tgt(c: &Cell, ctx: &Context) -> R<Cell> {
    Ok(boundary(c, ctx)?.1)
}

pub fn boundary(c: &Cell, ctx: &Context) -> R<(Cell, Cell)> {
    boundary_in(c, &mut ctx.clone())
}

/// Brings a cell into elaborated form: application operands lifted to a
/// common dimension, term-only pieces collapsed into `Base`.
pub fn elaborate(c: &Cell, ctx: &Context) -> R<Cell> {
    elaborate_in(c, &mut ctx.clone())
}

pub(crate) fn with<T>(env: &mut Context, x: &Name, decl: Option<&Decl>, f: impl FnOnce(&mut Context) -> T) -> T {
    env.push_raw(x.clone(), decl.cloned());
    let out = f(env);
    env.pop_raw();
    out
}

pub(crate) fn dim_in(c: &Cell, env: &mut Context) -> R<usize> {
    Ok(match c {
        Cell::Base(_) => 0,
        Cell::PathVar(x) => match env.lookup(x) {
            Some(Some(d)) => d.dim,
            _ => return Err(KernelError::Unbound(x.clone())),
        },
        Cell::Refl(c) | Cell::Degen(c) | Cell::Beta(c) => 1 + dim_in(c, env)?,
        Cell::Eta { body, .. } => 1 + dim_in(body, env)?,
        Cell::Inv(c) => dim_in(c, env)?,
        Cell::Concat(a, b) | Cell::App(a, b) => dim_in(a, env)?.max(dim_in(b, env)?),
        Cell::Abs { decl: Some(d), .. } => d.dim,
        Cell::Abs { binder, decl: None, body, .. } => with(env, binder, None, |env| dim_in(body, env))?,
    })
}

/// Application with the lower operand lifted by degeneracies.
pub(crate) fn mk_app(a: Cell, b: Cell, env: &mut Context) -> R<Cell> {
    if let (Cell::Base(s), Cell::Base(t)) = (&a, &b) {
        return Ok(Cell::Base(Term::App(Box::new(s.clone()), Box::new(t.clone()))));
    }
    let (da, db) = (dim_in(&a, env)?, dim_in(&b, env)?);
    let (a, b) = if da < db {
        (Cell::lift(a, db - da), b)
    } else {
        (a, Cell::lift(b, da - db))
    };
    Ok(Cell::App(Box::new(a), Box::new(b)))
}

/// Abstraction over a term variable, collapsed when the body is a term.
pub(crate) fn mk_abs_term(x: Name, body: Cell) -> Cell {
    match body {
        Cell::Base(t) => Cell::Base(Term::Abs(x, Box::new(t))),
        body => Cell::Abs { binder: x, decl: None, body: Box::new(body), ann: None },
    }
}

/// The term a degenerate cell is an identity on, if it is one.
pub(crate) fn as_lifted_term(c: &Cell) -> Option<Term> {
    match c {
        Cell::Base(t) => Some(t.clone()),
        Cell::Degen(c) | Cell::Refl(c) => as_lifted_term(c),
        Cell::App(a, b) => Some(Term::App(Box::new(as_lifted_term(a)?), Box::new(as_lifted_term(b)?))),
        Cell::Abs { binder, decl: None, body, ann: None } => Some(Term::Abs(binder.clone(), Box::new(as_lifted_term(body)?))),
        _ => None,
    }
}

#[derive(Clone, Copy)]
enum Side {
    Src,
    Tgt,
}

fn side_in(c: &Cell, d: usize, s: Side, env: &mut Context) -> R<Cell> {
    let dc = dim_in(c, env)?;
    if dc < d {
        return Ok(Cell::lift(c.clone(), d - 1 - dc));
    }
    let (a, b) = boundary_in(c, env)?;
    Ok(match s {
        Side::Src => a,
        Side::Tgt => b,
    })
}

pub(crate) enum Redex {
    /// `(\x. P) N` as a term.
    Term { x: Name, body: Term, arg: Term },
    /// A degenerate abstraction applied to an argument cell.
    Lifted { x: Name, body: Term, arg: Cell },
    /// A path abstraction applied to a path.
    Path { binder: Name, body: Cell, arg: Cell },
}

pub(crate) fn classify_redex(c: &Cell) -> Option<Redex> {
    match c {
        Cell::Base(Term::App(f, a)) => match &**f {
            Term::Abs(x, p) => Some(Redex::Term { x: x.clone(), body: (**p).clone(), arg: (**a).clone() }),
            _ => None,
        },
        Cell::App(f, a) => {
            if let Cell::Abs { binder, decl: Some(_), body, .. } = &**f {
                return Some(Redex::Path { binder: binder.clone(), body: (**body).clone(), arg: (**a).clone() });
            }
            match as_lifted_term(f)? {
                Term::Abs(x, p) => Some(Redex::Lifted { x, body: *p, arg: (**a).clone() }),
                _ => None,
            }
        }
        _ => None,
    }
}

#[derive(Clone)]
enum StepKind {
    Beta,
    Eta(Name),
}

impl StepKind {
    fn step(&self, y: Cell) -> Cell {
        match self {
            StepKind::Beta => Cell::beta(y),
            StepKind::Eta(b) => Cell::eta(y, b.clone()),
        }
    }

    fn base(&self, y: &Cell, env: &mut Context) -> R<(Cell, Cell)> {
        match self {
            StepKind::Beta => Ok((y.clone(), contractum(y, env)?)),
            StepKind::Eta(b) => {
                let body = with(env, b, None, |env| mk_app(y.clone(), Cell::Base(Term::Var(b.clone())), env))?;
                Ok((mk_abs_term(b.clone(), body), y.clone()))
            }
        }
    }
}

/// Result of contracting a (possibly lifted) term-binder redex.
pub(crate) fn contractum(y: &Cell, env: &mut Context) -> R<Cell> {
    match classify_redex(y) {
        Some(Redex::Term { x, body, arg }) => Ok(Cell::Base(subst(&body, &x, &arg))),
        Some(Redex::Lifted { x, body, arg }) => {
            let out = path_subst_in(&Cell::Base(body), &x, &arg, env)?;
            let (dy, dout) = (dim_in(y, env)?, dim_in(&out, env)?);
            Ok(if dout < dy { Cell::lift(out, dy - dout) } else { out })
        }
        Some(Redex::Path { binder, body, arg }) => path_subst_in(&body, &binder, &arg, env),
        None => Err(KernelError::NotARedex(y.to_string())),
    }
}

/// Boundary of a β- or η-step on a subject `x` of dimension `k`. Each level
/// composes a step on the lower boundary with the level below, so that the
/// step on `x` fills the square formed by `x` and the steps on its ends.
fn interchange(x: &Cell, kind: StepKind, env: &mut Context) -> R<(Cell, Cell)> {
    let k = dim_in(x, env)?;
    let mut srcs = vec![x.clone()];
    let mut tgts = vec![x.clone()];
    for j in 1..=k {
        let s = boundary_in(&srcs[j - 1], env)?.0;
        let t = boundary_in(&tgts[j - 1], env)?.1;
        srcs.push(s);
        tgts.push(t);
    }
    let (mut s, mut t) = kind.base(x, env)?;
    for d in 1..=k {
        let s_next = Cell::concat(kind.step(srcs[k - d + 1].clone()), t.clone());
        let t_next = Cell::concat(s, kind.step(tgts[k - d + 1].clone()));
        s = s_next;
        t = t_next;
    }
    Ok((s, t))
}

/// Splits `side` as `F c` and returns `F`.
fn strip_arg(side: &Cell, arg: &Cell, binder: &Name) -> R<Cell> {
    let (f, a) = match side {
        Cell::Base(Term::App(f, a)) => (Cell::Base((**f).clone()), Cell::Base((**a).clone())),
        Cell::App(f, a) => ((**f).clone(), (**a).clone()),
        _ => {
            return Err(KernelError::BoundaryMismatch(format!(
                "cannot read an endpoint for `{binder}` off `{side}`"
            )))
        }
    };
    if !cell_alpha_eq(&a, arg) {
        return Err(KernelError::BoundaryMismatch(format!(
            "body endpoint `{side}` is not applied to `{arg}`"
        )));
    }
    if f.has_free(binder) {
        return Err(KernelError::BoundaryMismatch(format!("endpoint `{f}` mentions `{binder}`")));
    }
    Ok(f)
}

pub(crate) fn boundary_in(c: &Cell, env: &mut Context) -> R<(Cell, Cell)> {
    match c {
        Cell::Base(_) => Err(KernelError::NoBoundary),
        Cell::PathVar(x) => match env.lookup(x) {
            Some(Some(d)) => Ok((d.boundary.source.clone(), d.boundary.target.clone())),
            _ => Err(KernelError::Unbound(x.clone())),
        },
        Cell::Refl(c) | Cell::Degen(c) => Ok(((**c).clone(), (**c).clone())),
        Cell::Inv(c) => {
            let (s, t) = boundary_in(c, env)?;
            Ok((t, s))
        }
        Cell::Concat(a, b) => {
            let (da, db) = (dim_in(a, env)?, dim_in(b, env)?);
            if da == 0 || db == 0 {
                return Err(KernelError::IllFormed(format!("`{c}` composes a term")));
            }
            if da == db {
                Ok((boundary_in(a, env)?.0, boundary_in(b, env)?.1))
            } else if da < db {
                let (s, t) = boundary_in(b, env)?;
                Ok((Cell::concat((**a).clone(), s), Cell::concat((**a).clone(), t)))
            } else {
                let (s, t) = boundary_in(a, env)?;
                Ok((Cell::concat(s, (**b).clone()), Cell::concat(t, (**b).clone())))
            }
        }
        Cell::App(f, a) => {
            let d = dim_in(c, env)?;
            if d == 0 {
                return Err(KernelError::NoBoundary);
            }
            let mut ends = [Side::Src, Side::Tgt].into_iter().map(|s| -> R<Cell> {
                let fs = side_in(f, d, s, env)?;
                let as_ = side_in(a, d, s, env)?;
                mk_app(fs, as_, env)
            });
            let s = ends.next().unwrap()?;
            let t = ends.next().unwrap()?;
            Ok((s, t))
        }
        Cell::Abs { binder, decl: None, body, .. } => {
            let (s, t) = with(env, binder, None, |env| boundary_in(body, env))?;
            Ok((mk_abs_term(binder.clone(), s), mk_abs_term(binder.clone(), t)))
        }
        Cell::Abs { binder, decl: Some(decl), body, ann } => {
            if let Some(b) = ann {
                return Ok((b.source.clone(), b.target.clone()));
            }
            let (hs, ht) = with(env, binder, Some(decl), |env| -> R<(Cell, Cell)> {
                Ok((side_in(body, decl.dim, Side::Src, env)?, side_in(body, decl.dim, Side::Tgt, env)?))
            })?;
            Ok((
                strip_arg(&hs, &decl.boundary.source, binder)?,
                strip_arg(&ht, &decl.boundary.target, binder)?,
            ))
        }
        Cell::Beta(x) => match classify_redex(x) {
            Some(Redex::Path { .. }) => Ok(((**x).clone(), contractum(x, env)?)),
            Some(_) => interchange(x, StepKind::Beta, env),
            None => Err(KernelError::NotARedex(x.to_string())),
        },
        Cell::Eta { body, binder, decl: Some(decl) } => {
            let app = with(env, binder, Some(decl), |env| mk_app((**body).clone(), Cell::PathVar(binder.clone()), env))?;
            let abs = Cell::Abs { binder: binder.clone(), decl: Some(decl.clone()), body: Box::new(app), ann: None };
            Ok((abs, (**body).clone()))
        }
        Cell::Eta { body, binder, decl: None } => interchange(body, StepKind::Eta(binder.clone()), env),
    }
}

pub(crate) fn elaborate_in(c: &Cell, env: &mut Context) -> R<Cell> {
    let bx = |c: Cell| Box::new(c);
    Ok(match c {
        Cell::Base(_) | Cell::PathVar(_) => c.clone(),
        Cell::Refl(c) => Cell::Refl(bx(elaborate_in(c, env)?)),
        Cell::Degen(c) => Cell::Degen(bx(elaborate_in(c, env)?)),
        Cell::Beta(c) => Cell::Beta(bx(elaborate_in(c, env)?)),
        Cell::Inv(c) => Cell::Inv(bx(elaborate_in(c, env)?)),
        Cell::Concat(a, b) => Cell::concat(elaborate_in(a, env)?, elaborate_in(b, env)?),
        Cell::App(a, b) => {
            let (a, b) = (elaborate_in(a, env)?, elaborate_in(b, env)?);
            mk_app(a, b, env)?
        }
        Cell::Eta { body, binder, decl } => Cell::Eta {
            body: bx(elaborate_in(body, env)?),
            binder: binder.clone(),
            decl: decl.as_ref().map(|d| elaborate_decl(d, env)).transpose()?.map(Box::new),
        },
        Cell::Abs { binder, decl: None, body, .. } => {
            let body = with(env, binder, None, |env| elaborate_in(body, env))?;
            mk_abs_term(binder.clone(), body)
        }
        Cell::Abs { binder, decl: Some(decl), body, ann } => {
            let decl = elaborate_decl(decl, env)?;
            let body = with(env, binder, Some(&decl), |env| elaborate_in(body, env))?;
            let ann = match ann {
                Some(b) => Some(bx_boundary(elaborate_in(&b.source, env)?, elaborate_in(&b.target, env)?)),
                None => None,
            };
            Cell::Abs { binder: binder.clone(), decl: Some(Box::new(decl)), body: bx(body), ann }
        }
    })
}

fn bx_boundary(s: Cell, t: Cell) -> Box<Boundary> {
    Box::new(Boundary::new(s, t))
}

fn elaborate_decl(d: &Decl, env: &mut Context) -> R<Decl> {
    Ok(Decl {
        dim: d.dim,
        boundary: Boundary::new(elaborate_in(&d.boundary.source, env)?, elaborate_in(&d.boundary.target, env)?),
    })
}
