use crate::error::{Error, KernelError, ParseError};
use crate::syntax::{lexer::Tok, lexer::Cursor, Name};

use super::{boundary, cell_alpha_eq, check, parse, Boundary, Decl};

/// Ordered declarations of term variables (dimension 0) and path variables
/// with their boundaries. Extending returns a new context.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    decls: Vec<(Name, Option<Decl>)>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Name, Option<&Decl>)> {
        self.decls.iter().map(|(n, d)| (n, d.as_ref()))
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn lookup(&self, x: &Name) -> Option<Option<&Decl>> {
        self.decls.iter().rev().find(|(n, _)| n == x).map(|(_, d)| d.as_ref())
    }

    fn check_fresh(&self, x: &Name) -> Result<(), KernelError> {
        if self.lookup(x).is_some() {
            return Err(KernelError::Duplicate(x.clone()));
        }
        Ok(())
    }

    pub fn declare_term_var(&self, x: Name) -> Result<Context, KernelError> {
        self.check_fresh(&x)?;
        let mut next = self.clone();
        next.decls.push((x, None));
        Ok(next)
    }

    /// Declares `x` as a path from `boundary.source` to `boundary.target`.
    /// Both endpoints must be well-formed here, of equal dimension, and
    /// parallel when they are themselves paths.
    pub fn declare_path(&self, x: Name, boundary: Boundary) -> Result<Context, KernelError> {
        self.check_fresh(&x)?;
        for c in [&boundary.source, &boundary.target] {
            let v = check::well_formed(c, self);
            if !v.is_ok() {
                return Err(KernelError::IllFormed(v.to_string()));
            }
        }
        let ds = boundary::dim(&boundary.source, self)?;
        let dt = boundary::dim(&boundary.target, self)?;
        if ds != dt {
            return Err(KernelError::BoundaryMismatch(format!(
                "endpoints of `{x}` have dimensions {ds} and {dt}"
            )));
        }
        if ds >= 1 {
            let (s1, t1) = boundary::boundary(&boundary.source, self)?;
            let (s2, t2) = boundary::boundary(&boundary.target, self)?;
            if !cell_alpha_eq(&s1, &s2) || !cell_alpha_eq(&t1, &t2) {
                return Err(KernelError::BoundaryMismatch(format!("endpoints of `{x}` are not parallel")));
            }
        }
        let mut next = self.clone();
        next.decls.push((x, Some(Decl { dim: ds + 1, boundary })));
        Ok(next)
    }

    pub(crate) fn push_raw(&mut self, x: Name, decl: Option<Decl>) {
        self.decls.push((x, decl));
    }

    pub(crate) fn pop_raw(&mut self) {
        self.decls.pop();
    }
}

/// Reads a context file: one declaration per line, either
/// `NAME : (cell ~ cell)` or `NAME : term-var`. `#` starts a comment.
pub fn parse_context(src: &str) -> Result<Context, Error> {
    let mut ctx = Context::new();
    for (i, line) in src.lines().enumerate() {
        let at = |e: crate::error::ParseError| e.at_line(i + 1);
        let code = line.split('#').next().unwrap_or("");
        if code.trim().is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = code.split_once(':') else {
            return Err(at(ParseError::new(1, code.len() + 1, vec!["`:`".into()], "end of line".into())).into());
        };
        let mut cur = Cursor::new(lhs).map_err(at)?;
        let x = cur.ident().map_err(at)?;
        if *cur.peek() != Tok::Eof {
            return Err(at(cur.error(&["`:`"])).into());
        }
        let x = Name::new(&x).expect("lexer yields identifiers");
        if rhs.trim() == "term-var" {
            ctx = ctx.declare_term_var(x)?;
            continue;
        }
        let mut cur = Cursor::new(rhs).map_err(at)?;
        cur.expect(Tok::LParen).map_err(at)?;
        let (source, target) = parse::boundary_pair(&mut cur, &ctx).map_err(at)?;
        cur.expect(Tok::RParen).map_err(at)?;
        if *cur.peek() != Tok::Eof {
            return Err(at(cur.error(&["end of line"])).into());
        }
        ctx = ctx.declare_path(x, Boundary::new(source, target))?;
    }
    Ok(ctx)
}
