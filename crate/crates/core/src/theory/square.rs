use crate::cells::boundary::{classify_redex, mk_app, Redex};
use crate::cells::{boundary, cell_alpha_eq, dim, well_formed, Cell, Context, Decl};
use crate::error::KernelError;
use crate::syntax::{Name, Term};

/// A commuting square of conversions. `top` and `left` leave `top_left`,
/// `right` and `bottom` arrive at `bottom_right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareSpec {
    pub top_left: Cell,
    pub top_right: Cell,
    pub bottom_left: Cell,
    pub bottom_right: Cell,
    pub top: Cell,
    pub bottom: Cell,
    pub left: Cell,
    pub right: Cell,
}

fn checked(c: Cell, ctx: &Context) -> Result<Cell, KernelError> {
    let v = well_formed(&c, ctx);
    if v.is_ok() {
        Ok(c)
    } else {
        Err(KernelError::IllFormed(v.to_string()))
    }
}

/// The β-step contracting `app`.
pub fn beta_contract(app: &Cell, ctx: &Context) -> Result<Cell, KernelError> {
    match classify_redex(app) {
        None => return Err(KernelError::NotARedex(app.to_string())),
        Some(Redex::Path { arg, .. }) => {
            let Cell::App(f, _) = app else { unreachable!() };
            let Cell::Abs { decl: Some(decl), .. } = &**f else { unreachable!() };
            let (s, t) = boundary(&arg, ctx)?;
            if !cell_alpha_eq(&s, &decl.boundary.source) || !cell_alpha_eq(&t, &decl.boundary.target) {
                return Err(KernelError::BoundaryMismatch(format!(
                    "argument runs ({s} ~ {t}), binder expects ({} ~ {})",
                    decl.boundary.source, decl.boundary.target
                )));
            }
        }
        Some(_) => {}
    }
    checked(Cell::beta(app.clone()), ctx)
}

/// The η-step from `\binder. e binder` to `e`. With `decl` the binder is a
/// path variable of that boundary.
pub fn eta_contract(e: &Cell, binder: &Name, decl: Option<Decl>, ctx: &Context) -> Result<Cell, KernelError> {
    if e.has_free(binder) {
        return Err(KernelError::Freshness { binder: binder.clone() });
    }
    let step = match decl {
        Some(d) => Cell::eta_path(e.clone(), binder.clone(), d),
        None => Cell::eta(e.clone(), binder.clone()),
    };
    checked(step, ctx)
}

fn split_concat(c: Cell) -> Result<(Cell, Cell), KernelError> {
    match c {
        Cell::Concat(a, b) => Ok((*a, *b)),
        c => Err(KernelError::IllFormed(format!("expected a composite, got `{c}`"))),
    }
}

fn square_of(filler: &Cell, ctx: &Context) -> Result<SquareSpec, KernelError> {
    let (s, t) = boundary(filler, ctx)?;
    let (top, right) = split_concat(s)?;
    let (left, bottom) = split_concat(t)?;
    let (top_left, top_right) = boundary(&top, ctx)?;
    let (bottom_left, bottom_right) = boundary(&bottom, ctx)?;
    Ok(SquareSpec { top_left, top_right, bottom_left, bottom_right, top, bottom, left, right })
}

/// The square relating the β-steps at the two ends of `t` by the β-step on
/// the lifted redex `(\x. P) t`, which is returned as the filler.
pub fn build_beta_square(p: &Term, x: &Name, t: &Cell, ctx: &Context) -> Result<(SquareSpec, Cell), KernelError> {
    let k = dim(t, ctx)?;
    if k == 0 {
        return Err(KernelError::NoBoundary);
    }
    let lam = Cell::lift(Cell::Base(Term::Abs(x.clone(), Box::new(p.clone()))), k);
    let redex = mk_app(lam, t.clone(), &mut ctx.clone())?;
    let filler = checked(Cell::beta(redex), ctx)?;
    Ok((square_of(&filler, ctx)?, filler))
}

/// The square relating the η-steps at the two ends of `t` by the η-step on
/// `t` itself.
pub fn build_eta_square(t: &Cell, binder: &Name, ctx: &Context) -> Result<(SquareSpec, Cell), KernelError> {
    if dim(t, ctx)? == 0 {
        return Err(KernelError::NoBoundary);
    }
    let filler = eta_contract(t, binder, None, ctx)?;
    Ok((square_of(&filler, ctx)?, filler))
}
