use crate::cells::boundary::{boundary_in, dim_in, mk_abs_term, mk_app, with};
use crate::cells::{cell_alpha_eq, Cell, Context};

/// Display normal form of a conversion: composites nested to the right,
/// identities dropped, inverses pushed onto steps and adjacent `p ; p^-1`
/// pairs cancelled. Degeneracies read as identities. The boundary is kept.
pub fn canonicalize(c: &Cell, ctx: &Context) -> Cell {
    let mut env = ctx.clone();
    let mut cur = c.clone();
    // each pass strictly shrinks or reshapes; the bound only guards loops
    for _ in 0..64 {
        let next = canon(&cur, &mut env);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

fn dim_or(c: &Cell, env: &mut Context) -> Option<usize> {
    dim_in(c, env).ok()
}

fn canon(c: &Cell, env: &mut Context) -> Cell {
    match c {
        Cell::Concat(a, b) => {
            let (a, b) = (canon(a, env), canon(b, env));
            compose(a, b, env)
        }
        Cell::Inv(a) => {
            let a = canon(a, env);
            invert(a, env)
        }
        Cell::Degen(a) => Cell::Refl(a.clone()),
        Cell::App(a, b) => {
            let (a, b) = (canon(a, env), canon(b, env));
            match (&a, &b) {
                (Cell::Refl(x), Cell::Refl(y)) => match mk_app((**x).clone(), (**y).clone(), env) {
                    Ok(xy) => Cell::Refl(Box::new(xy)),
                    Err(_) => Cell::App(Box::new(a), Box::new(b)),
                },
                _ => Cell::App(Box::new(a), Box::new(b)),
            }
        }
        Cell::Abs { binder, decl: None, body, ann } => {
            let body = with(env, binder, None, |env| canon(body, env));
            match body {
                Cell::Refl(x) if ann.is_none() => Cell::Refl(Box::new(mk_abs_term(binder.clone(), *x))),
                body => Cell::Abs { binder: binder.clone(), decl: None, body: Box::new(body), ann: ann.clone() },
            }
        }
        Cell::Abs { binder, decl: Some(decl), body, ann } => {
            let body = with(env, binder, Some(decl), |env| canon(body, env));
            Cell::Abs { binder: binder.clone(), decl: Some(decl.clone()), body: Box::new(body), ann: ann.clone() }
        }
        _ => c.clone(),
    }
}

fn same_dim(a: &Cell, b: &Cell, env: &mut Context) -> bool {
    matches!((dim_or(a, env), dim_or(b, env)), (Some(x), Some(y)) if x == y)
}

fn cancels(a: &Cell, b: &Cell, env: &mut Context) -> bool {
    !matches!(a, Cell::Concat(..)) && cell_alpha_eq(b, &invert(a.clone(), env))
}

/// `a ; b` for canonical `a` and `b`.
fn compose(a: Cell, b: Cell, env: &mut Context) -> Cell {
    if !same_dim(&a, &b, env) {
        return Cell::concat(a, b);
    }
    if matches!(a, Cell::Refl(_)) {
        return b;
    }
    if matches!(b, Cell::Refl(_)) {
        return a;
    }
    if let Cell::Concat(a1, a2) = &a {
        if same_dim(a1, a2, env) {
            let rest = compose((**a2).clone(), b, env);
            return compose((**a1).clone(), rest, env);
        }
    }
    if cancels(&a, &b, env) {
        if let Ok((s, _)) = boundary_in(&a, env) {
            return Cell::Refl(Box::new(s));
        }
    }
    if let Cell::Concat(b1, b2) = &b {
        if same_dim(b1, b2, env) && cancels(&a, b1, env) {
            return (**b2).clone();
        }
    }
    Cell::concat(a, b)
}

/// Inverse of a canonical cell.
fn invert(a: Cell, env: &mut Context) -> Cell {
    match a {
        Cell::Inv(x) => *x,
        Cell::Refl(_) => a,
        Cell::Concat(p, q) => match (dim_or(&p, env), dim_or(&q, env)) {
            (Some(dp), Some(dq)) if dp == dq => {
                let (ip, iq) = (invert(*p, env), invert(*q, env));
                compose(iq, ip, env)
            }
            (Some(dp), Some(dq)) if dp < dq => Cell::concat(*p, invert(*q, env)),
            (Some(_), Some(_)) => Cell::concat(invert(*p, env), *q),
            _ => Cell::inv(Cell::Concat(p, q)),
        },
        a => Cell::inv(a),
    }
}
