use crate::error::{Error, ParseError};
use crate::syntax::lexer::{Cursor, Tok};
use crate::syntax::{write_term, Name, Term};

use super::boundary::elaborate_in;
use super::{Boundary, Cell, Context, Decl};

type P<T> = Result<T, ParseError>;

/// Parses cell syntax against `ctx`. Names declared there as paths become
/// path variables; every other name is a term variable.
pub fn parse_cell(src: &str, ctx: &Context) -> Result<Cell, Error> {
    let mut cur = Cursor::new(src)?;
    let mut env = ctx.clone();
    let c = seq(&mut cur, &mut env)?;
    if *cur.peek() != Tok::Eof {
        return Err(cur.error(&["`;`", "`@`", "end of input"]).into());
    }
    Ok(elaborate_in(&c, &mut env)?)
}

/// `c ~ d`, elaborated where possible.
pub(crate) fn boundary_pair(cur: &mut Cursor, ctx: &Context) -> P<(Cell, Cell)> {
    let mut env = ctx.clone();
    let (c, d) = pair(cur, &mut env)?;
    let c = elaborate_in(&c, &mut env).unwrap_or(c);
    let d = elaborate_in(&d, &mut env).unwrap_or(d);
    Ok((c, d))
}

fn pair(cur: &mut Cursor, env: &mut Context) -> P<(Cell, Cell)> {
    let c = seq(cur, env)?;
    cur.expect(Tok::Tilde)?;
    let d = seq(cur, env)?;
    Ok((c, d))
}

fn ident(cur: &mut Cursor) -> P<Name> {
    let x = cur.ident()?;
    Ok(Name::new(&x).expect("lexer yields identifiers"))
}

fn seq(cur: &mut Cursor, env: &mut Context) -> P<Cell> {
    let mut acc = appl(cur, env)?;
    while cur.eat(&Tok::Semi) {
        acc = Cell::concat(acc, appl(cur, env)?);
    }
    Ok(acc)
}

fn appl(cur: &mut Cursor, env: &mut Context) -> P<Cell> {
    let mut acc = unary(cur, env)?;
    while cur.eat(&Tok::At) {
        acc = Cell::App(Box::new(acc), Box::new(unary(cur, env)?));
    }
    Ok(acc)
}

fn unary(cur: &mut Cursor, env: &mut Context) -> P<Cell> {
    match cur.peek() {
        Tok::Bang => {
            cur.bump();
            Ok(Cell::degen(unary(cur, env)?))
        }
        Tok::Backslash | Tok::Lam => abs(cur, env),
        _ => {
            let mut acc = post(cur, env)?;
            while starts_atom(cur.peek()) {
                acc = Cell::App(Box::new(acc), Box::new(post(cur, env)?));
            }
            Ok(acc)
        }
    }
}

fn starts_atom(t: &Tok) -> bool {
    matches!(t, Tok::Ident(_) | Tok::LParen | Tok::Refl | Tok::Beta | Tok::Eta)
}

fn post(cur: &mut Cursor, env: &mut Context) -> P<Cell> {
    let mut acc = atom(cur, env)?;
    while cur.eat(&Tok::InvMark) {
        acc = Cell::inv(acc);
    }
    Ok(acc)
}

fn atom(cur: &mut Cursor, env: &mut Context) -> P<Cell> {
    match cur.peek().clone() {
        Tok::Ident(_) => {
            let x = ident(cur)?;
            Ok(match env.lookup(&x) {
                Some(Some(_)) => Cell::PathVar(x),
                _ => Cell::Base(Term::Var(x)),
            })
        }
        Tok::LParen => {
            cur.bump();
            let c = seq(cur, env)?;
            cur.expect(Tok::RParen)?;
            Ok(c)
        }
        Tok::Refl => {
            cur.bump();
            cur.expect(Tok::LParen)?;
            let c = seq(cur, env)?;
            cur.expect(Tok::RParen)?;
            Ok(Cell::refl(c))
        }
        Tok::Beta => {
            cur.bump();
            cur.expect(Tok::LBracket)?;
            let c = seq(cur, env)?;
            cur.expect(Tok::RBracket)?;
            Ok(Cell::beta(c))
        }
        Tok::Eta => {
            cur.bump();
            cur.expect(Tok::LBracket)?;
            let binder = ident(cur)?;
            let decl = if cur.eat(&Tok::Colon) {
                cur.expect(Tok::LParen)?;
                let (c, d) = pair(cur, env)?;
                cur.expect(Tok::RParen)?;
                Some(Box::new(decl_of(c, d, env)))
            } else {
                None
            };
            cur.expect(Tok::RBracket)?;
            cur.expect(Tok::LParen)?;
            let body = seq(cur, env)?;
            cur.expect(Tok::RParen)?;
            Ok(Cell::Eta { body: Box::new(body), binder, decl })
        }
        _ => Err(cur.error(&["name", "`(`", "`refl`", "`beta`", "`eta`", "`\\`", "`lam`", "`!`"])),
    }
}

fn decl_of(c: Cell, d: Cell, env: &mut Context) -> Decl {
    let c = elaborate_in(&c, env).unwrap_or(c);
    let d = elaborate_in(&d, env).unwrap_or(d);
    let dim = super::boundary::dim_in(&c, env).map(|k| k + 1).unwrap_or(1);
    Decl { dim, boundary: Boundary::new(c, d) }
}

fn abs(cur: &mut Cursor, env: &mut Context) -> P<Cell> {
    let lam = cur.bump() == Tok::Lam;
    let dim = match (lam, cur.peek().clone()) {
        (true, Tok::Int(n)) => {
            cur.bump();
            Some(n as usize)
        }
        _ => None,
    };
    let binder = ident(cur)?;
    let Some(dim) = dim else {
        cur.expect(Tok::Dot)?;
        env.push_raw(binder.clone(), None);
        let body = seq(cur, env);
        env.pop_raw();
        return Ok(Cell::Abs { binder, decl: None, body: Box::new(body?), ann: None });
    };
    cur.expect(Tok::Colon)?;
    cur.expect(Tok::LParen)?;
    let (c, d) = pair(cur, env)?;
    cur.expect(Tok::RParen)?;
    cur.expect(Tok::Dot)?;
    let mut decl = decl_of(c, d, env);
    decl.dim = dim;
    env.push_raw(binder.clone(), Some(decl.clone()));
    let body = seq(cur, env);
    env.pop_raw();
    let body = body?;
    let ann = if cur.eat(&Tok::As) {
        cur.expect(Tok::LParen)?;
        let (a, b) = pair(cur, env)?;
        cur.expect(Tok::RParen)?;
        Some(Box::new(Boundary::new(a, b)))
    } else {
        None
    };
    Ok(Cell::Abs { binder, decl: Some(Box::new(decl)), body: Box::new(body), ann })
}

/// Prints cell syntax that [`parse_cell`] reads back to an α-equivalent cell.
pub fn print_cell(c: &Cell) -> String {
    let mut out = String::new();
    write(c, 0, true, &mut out);
    out
}

// levels: 0 `;`, 1 `@`, 2 prefix and binders, 3 juxtaposition, 4 postfix, 5 atoms
fn level(c: &Cell) -> usize {
    match c {
        Cell::Concat(..) => 0,
        Cell::App(..) => 1,
        Cell::Degen(_) | Cell::Abs { .. } => 2,
        Cell::Base(Term::Abs(..)) => 2,
        Cell::Base(Term::App(..)) => 3,
        Cell::Inv(_) => 4,
        _ => 5,
    }
}

fn write(c: &Cell, min: usize, last: bool, out: &mut String) {
    let binder = matches!(c, Cell::Abs { .. } | Cell::Base(Term::Abs(..)));
    if level(c) < min || (binder && !last) {
        out.push('(');
        write(c, 0, true, out);
        out.push(')');
        return;
    }
    match c {
        Cell::Base(t) => write_term(t, out),
        Cell::PathVar(x) => out.push_str(x.as_str()),
        Cell::Refl(c) => {
            out.push_str("refl(");
            write(c, 0, true, out);
            out.push(')');
        }
        Cell::Beta(c) => {
            out.push_str("beta[");
            write(c, 0, true, out);
            out.push(']');
        }
        Cell::Eta { body, binder, decl } => {
            out.push_str("eta[");
            out.push_str(binder.as_str());
            if let Some(d) = decl {
                out.push_str(":(");
                write_pair(&d.boundary, out);
                out.push(')');
            }
            out.push_str("](");
            write(body, 0, true, out);
            out.push(')');
        }
        Cell::Inv(c) => {
            write(c, 4, false, out);
            out.push_str("^-1");
        }
        Cell::Concat(a, b) => {
            write(a, 0, false, out);
            out.push_str(" ; ");
            write(b, 1, last, out);
        }
        Cell::App(a, b) => {
            write(a, 1, false, out);
            out.push_str(" @ ");
            write(b, 2, last, out);
        }
        Cell::Degen(c) => {
            out.push('!');
            write(c, 2, last, out);
        }
        Cell::Abs { binder, decl, body, ann } => {
            match decl {
                None => {
                    out.push('\\');
                    out.push_str(binder.as_str());
                }
                Some(d) => {
                    out.push_str(&format!("lam{} {}:(", d.dim, binder));
                    write_pair(&d.boundary, out);
                    out.push(')');
                }
            }
            out.push_str(". ");
            write(body, 0, ann.is_none(), out);
            if let Some(b) = ann {
                out.push_str(" as (");
                write_pair(b, out);
                out.push(')');
            }
        }
    }
}

fn write_pair(b: &Boundary, out: &mut String) {
    write(&b.source, 0, true, out);
    out.push_str(" ~ ");
    write(&b.target, 0, true, out);
}
