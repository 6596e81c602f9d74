use std::collections::BTreeSet;

use crate::error::KernelError;
use crate::syntax::{fresh_var, subst, Name, Term};

use super::boundary::{dim_in, mk_abs_term, mk_app, with};
use super::{Boundary, Cell, Context, Decl};

type R<T> = Result<T, KernelError>;

/// Replaces the free variable `r` of `h` by the cell `m`, renaming binders
/// that would capture free names of `m`. `r` may be a path variable or a
/// term variable; in the second case the term pieces of `h` mentioning `r`
/// are opened up into cell syntax around the occurrences of `m`.
pub fn path_subst(h: &Cell, r: &Name, m: &Cell, ctx: &Context) -> R<Cell> {
    path_subst_in(h, r, m, &mut ctx.clone())
}

pub(crate) fn path_subst_in(h: &Cell, r: &Name, m: &Cell, env: &mut Context) -> R<Cell> {
    let fvm = m.free_names();
    let out = go(h, r, m, &fvm, env)?;
    if !has_path_occurrence(h, r) {
        let (dm, dout) = (dim_in(m, env)?, dim_in(&out, env)?);
        if dout < dm {
            return Ok(Cell::lift(out, dm - dout));
        }
    }
    Ok(out)
}

fn has_path_occurrence(h: &Cell, r: &Name) -> bool {
    match h {
        Cell::Base(_) => false,
        Cell::PathVar(x) => x == r,
        Cell::Refl(c) | Cell::Beta(c) | Cell::Inv(c) | Cell::Degen(c) => has_path_occurrence(c, r),
        Cell::Eta { body, .. } => has_path_occurrence(body, r),
        Cell::Concat(a, b) | Cell::App(a, b) => has_path_occurrence(a, r) || has_path_occurrence(b, r),
        Cell::Abs { binder, body, .. } => binder != r && has_path_occurrence(body, r),
    }
}

fn avoid_set(fvm: &BTreeSet<Name>, body: &Cell, r: &Name) -> BTreeSet<Name> {
    let mut avoid = fvm.clone();
    body.all_names(&mut avoid);
    avoid.insert(r.clone());
    avoid
}

fn go_boundary(b: &Boundary, r: &Name, m: &Cell, fvm: &BTreeSet<Name>, env: &mut Context) -> R<Boundary> {
    Ok(Boundary::new(go(&b.source, r, m, fvm, env)?, go(&b.target, r, m, fvm, env)?))
}

fn go(h: &Cell, r: &Name, m: &Cell, fvm: &BTreeSet<Name>, env: &mut Context) -> R<Cell> {
    if !h.has_free(r) {
        return Ok(h.clone());
    }
    let bx = |c: Cell| Box::new(c);
    Ok(match h {
        Cell::Base(p) => match m {
            Cell::Base(n) => Cell::Base(subst(p, r, n)),
            _ => expand(p, r, m, fvm, env)?,
        },
        Cell::PathVar(_) => m.clone(),
        Cell::Refl(c) => Cell::Refl(bx(go(c, r, m, fvm, env)?)),
        Cell::Beta(c) => Cell::Beta(bx(go(c, r, m, fvm, env)?)),
        Cell::Inv(c) => Cell::Inv(bx(go(c, r, m, fvm, env)?)),
        Cell::Degen(c) => Cell::Degen(bx(go(c, r, m, fvm, env)?)),
        Cell::Concat(a, b) => Cell::concat(go(a, r, m, fvm, env)?, go(b, r, m, fvm, env)?),
        Cell::App(a, b) => {
            let (a, b) = (go(a, r, m, fvm, env)?, go(b, r, m, fvm, env)?);
            mk_app(a, b, env)?
        }
        Cell::Eta { body, binder, decl } => {
            let decl = match decl {
                Some(d) => Some(Box::new(Decl { dim: d.dim, boundary: go_boundary(&d.boundary, r, m, fvm, env)? })),
                None => None,
            };
            let binder = if fvm.contains(binder) { fresh_var(&avoid_set(fvm, body, r), binder) } else { binder.clone() };
            Cell::Eta { body: bx(go(body, r, m, fvm, env)?), binder, decl }
        }
        Cell::Abs { binder, decl, body, ann } => {
            let decl = match decl {
                Some(d) => Some(Decl { dim: d.dim, boundary: go_boundary(&d.boundary, r, m, fvm, env)? }),
                None => None,
            };
            let ann = match ann {
                Some(b) => Some(Box::new(go_boundary(b, r, m, fvm, env)?)),
                None => None,
            };
            if binder == r {
                return Ok(Cell::Abs { binder: binder.clone(), decl: decl.map(Box::new), body: body.clone(), ann });
            }
            let body = with(env, binder, decl.as_ref(), |env| -> R<(Name, Cell)> {
                if !fvm.contains(binder) {
                    return Ok((binder.clone(), go(body, r, m, fvm, env)?));
                }
                let fresh = fresh_var(&avoid_set(fvm, body, r), binder);
                let renamed = match decl {
                    Some(_) => Cell::PathVar(fresh.clone()),
                    None => Cell::Base(Term::Var(fresh.clone())),
                };
                with(env, &fresh, decl.as_ref(), |env| -> R<(Name, Cell)> {
                    let one = BTreeSet::from([fresh.clone()]);
                    let b = go(body, binder, &renamed, &one, env)?;
                    Ok((fresh.clone(), go(&b, r, m, fvm, env)?))
                })
            })?;
            let (binder, body) = body;
            match decl {
                None if ann.is_none() => mk_abs_term(binder, body),
                decl => Cell::Abs { binder, decl: decl.map(Box::new), body: bx(body), ann },
            }
        }
    })
}

/// Opens the term `p` into cell syntax with `m` at each free `r`.
fn expand(p: &Term, r: &Name, m: &Cell, fvm: &BTreeSet<Name>, env: &mut Context) -> R<Cell> {
    if !p.has_free(r) {
        return Ok(Cell::Base(p.clone()));
    }
    match p {
        Term::Var(_) => Ok(m.clone()),
        Term::App(f, a) => {
            let (f, a) = (expand(f, r, m, fvm, env)?, expand(a, r, m, fvm, env)?);
            mk_app(f, a, env)
        }
        Term::Abs(y, b) => {
            let (y, b) = if fvm.contains(y) {
                let mut avoid = fvm.clone();
                b.all_names(&mut avoid);
                avoid.insert(r.clone());
                let y2 = fresh_var(&avoid, y);
                let b2 = subst(b, y, &Term::Var(y2.clone()));
                (y2, b2)
            } else {
                (y.clone(), (**b).clone())
            };
            let body = with(env, &y, None, |env| expand(&b, r, m, fvm, env))?;
            Ok(mk_abs_term(y, body))
        }
    }
}
