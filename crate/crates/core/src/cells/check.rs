use std::fmt;

use crate::error::KernelError;

use super::boundary::{boundary_in, classify_redex, dim_in, mk_app, Redex};
use super::{cell_alpha_eq, Cell, Context, Decl};

/// One reason a cell is ill-formed, located by a dotted path from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "at {}: {}", v.path, v.message)?;
        }
        Ok(())
    }
}

pub fn well_formed(c: &Cell, ctx: &Context) -> Verdict {
    let mut ck = Checker { env: ctx.clone(), out: Vec::new() };
    ck.cell(c, "root");
    Verdict { violations: ck.out }
}

struct Checker {
    env: Context,
    out: Vec<Violation>,
}

fn join(path: &str, step: &str) -> String {
    format!("{path}.{step}")
}

fn iter_src(c: &Cell, n: usize, env: &mut Context, pick_src: bool) -> Result<Cell, KernelError> {
    let mut c = c.clone();
    for _ in 0..n {
        let (s, t) = boundary_in(&c, env)?;
        c = if pick_src { s } else { t };
    }
    Ok(c)
}

impl Checker {
    fn report(&mut self, path: &str, message: impl Into<String>) {
        self.out.push(Violation { path: path.to_string(), message: message.into() });
    }

    fn kernel<T>(&mut self, path: &str, f: impl FnOnce(&mut Context) -> Result<T, KernelError>) -> Option<T> {
        match f(&mut self.env) {
            Ok(v) => Some(v),
            Err(e) => {
                self.report(path, e.to_string());
                None
            }
        }
    }

    fn cell(&mut self, c: &Cell, path: &str) {
        let before = self.out.len();
        self.node(c, path);
        if self.out.len() == before {
            self.globular(c, path);
        }
    }

    fn node(&mut self, c: &Cell, path: &str) {
        match c {
            Cell::Base(_) => {}
            Cell::PathVar(x) => {
                if !matches!(self.env.lookup(x), Some(Some(_))) {
                    self.report(path, format!("unbound path variable `{x}`"));
                }
            }
            Cell::Refl(c) | Cell::Degen(c) | Cell::Inv(c) => self.cell(c, &join(path, "0")),
            Cell::Concat(a, b) => {
                let before = self.out.len();
                self.cell(a, &join(path, "0"));
                self.cell(b, &join(path, "1"));
                if self.out.len() == before {
                    self.concat(a, b, path);
                }
            }
            Cell::App(f, a) => {
                self.cell(f, &join(path, "fun"));
                self.cell(a, &join(path, "arg"));
            }
            Cell::Abs { binder, decl: None, body, .. } => {
                self.env.push_raw(binder.clone(), None);
                self.cell(body, &join(path, "body"));
                self.env.pop_raw();
            }
            Cell::Abs { binder, decl: Some(decl), body, ann } => {
                if !self.decl(decl, path) {
                    return;
                }
                self.env.push_raw(binder.clone(), Some((**decl).clone()));
                let before = self.out.len();
                self.cell(body, &join(path, "body"));
                if self.out.len() == before {
                    if let Some(db) = self.kernel(path, |env| dim_in(body, env)) {
                        if db > decl.dim {
                            self.report(path, format!("body has dimension {db}, expected {}", decl.dim));
                        }
                    }
                }
                let ends = self.out.len() == before;
                let hb = if ends { self.kernel(path, |env| boundary_in(body, env)) } else { None };
                self.env.pop_raw();
                if let (Some(a), Some((hs, ht))) = (ann, hb) {
                    self.cell(&a.source, &join(path, "as.src"));
                    self.cell(&a.target, &join(path, "as.tgt"));
                    for (h, e, end) in [(&hs, &a.source, &decl.boundary.source), (&ht, &a.target, &decl.boundary.target)] {
                        let Some(want) = self.kernel(path, |env| mk_app(e.clone(), end.clone(), env)) else {
                            continue;
                        };
                        if !cell_alpha_eq(h, &want) {
                            self.report(path, format!("annotation endpoint `{want}` does not match body endpoint `{h}`"));
                        }
                    }
                }
            }
            Cell::Beta(x) => {
                let before = self.out.len();
                self.cell(x, &join(path, "0"));
                if self.out.len() != before {
                    return;
                }
                match classify_redex(x) {
                    None => self.report(path, format!("`{x}` is not a redex")),
                    Some(Redex::Path { arg, .. }) => {
                        let Cell::App(f, _) = &**x else { unreachable!() };
                        let Cell::Abs { decl: Some(decl), .. } = &**f else { unreachable!() };
                        self.path_arg(&arg, decl, path);
                    }
                    Some(_) => {}
                }
                if self.out.len() == before {
                    self.step_ends(c, path);
                }
            }
            Cell::Eta { body, binder, decl } => {
                let before = self.out.len();
                self.cell(body, &join(path, "0"));
                if body.has_free(binder) {
                    self.report(path, format!("freshness: `{body}` must not depend on `{binder}`"));
                }
                if let Some(d) = decl {
                    if !self.decl(d, path) {
                        return;
                    }
                }
                if self.out.len() == before {
                    self.step_ends(c, path);
                }
            }
        }
    }

    /// The derived endpoints of a step must themselves be well-formed.
    fn step_ends(&mut self, c: &Cell, path: &str) {
        if let Some((s, t)) = self.kernel(path, |env| boundary_in(c, env)) {
            self.cell(&s, &join(path, "src"));
            self.cell(&t, &join(path, "tgt"));
        }
    }

    fn path_arg(&mut self, arg: &Cell, decl: &Decl, path: &str) {
        let Some(da) = self.kernel(path, |env| dim_in(arg, env)) else { return };
        if da != decl.dim {
            self.report(path, format!("argument `{arg}` has dimension {da}, expected {}", decl.dim));
            return;
        }
        let Some((s, t)) = self.kernel(path, |env| boundary_in(arg, env)) else { return };
        if !cell_alpha_eq(&s, &decl.boundary.source) || !cell_alpha_eq(&t, &decl.boundary.target) {
            self.report(
                path,
                format!("argument boundary ({s} ~ {t}) does not match declared ({} ~ {})", decl.boundary.source, decl.boundary.target),
            );
        }
    }

    fn decl(&mut self, d: &Decl, path: &str) -> bool {
        let before = self.out.len();
        self.cell(&d.boundary.source, &join(path, "decl.src"));
        self.cell(&d.boundary.target, &join(path, "decl.tgt"));
        if self.out.len() != before {
            return false;
        }
        for c in [&d.boundary.source, &d.boundary.target] {
            if let Some(dc) = self.kernel(path, |env| dim_in(c, env)) {
                if dc + 1 != d.dim {
                    self.report(path, format!("declared endpoint `{c}` has dimension {dc}, expected {}", d.dim - 1));
                }
            }
        }
        if self.out.len() == before && d.dim >= 2 {
            let b1 = self.kernel(path, |env| boundary_in(&d.boundary.source, env));
            let b2 = self.kernel(path, |env| boundary_in(&d.boundary.target, env));
            if let (Some((s1, t1)), Some((s2, t2))) = (b1, b2) {
                if !cell_alpha_eq(&s1, &s2) || !cell_alpha_eq(&t1, &t2) {
                    self.report(path, "declared endpoints are not parallel");
                }
            }
        }
        self.out.len() == before
    }

    fn concat(&mut self, a: &Cell, b: &Cell, path: &str) {
        let env = &mut self.env;
        let (Ok(da), Ok(db)) = (dim_in(a, env), dim_in(b, env)) else { return };
        if da == 0 || db == 0 {
            self.report(path, "cannot compose a term");
            return;
        }
        let ends = if da == db {
            boundary_in(a, env).and_then(|(_, t)| Ok((t, boundary_in(b, env)?.0)))
        } else if da < db {
            boundary_in(a, env).and_then(|(_, t)| Ok((t, iter_src(b, db - da + 1, env, true)?)))
        } else {
            iter_src(a, da - db + 1, env, false).and_then(|t| Ok((t, boundary_in(b, env)?.0)))
        };
        if let Some((t, s)) = self.kernel(path, |_| ends) {
            if !cell_alpha_eq(&t, &s) {
                self.report(path, format!("endpoint mismatch: left ends at `{t}` but right starts at `{s}`"));
            }
        }
    }

    fn globular(&mut self, c: &Cell, path: &str) {
        let Some(d) = self.kernel(path, |env| dim_in(c, env)) else { return };
        if d == 0 {
            return;
        }
        let Some((s, t)) = self.kernel(path, |env| boundary_in(c, env)) else { return };
        let env = &mut self.env;
        match (dim_in(&s, env), dim_in(&t, env)) {
            (Ok(ds), Ok(dt)) if ds + 1 == d && dt + 1 == d => {}
            (Ok(ds), Ok(dt)) => {
                self.report(path, format!("boundary dimensions {ds} and {dt} for a {d}-cell"));
                return;
            }
            (Err(e), _) | (_, Err(e)) => {
                self.report(path, e.to_string());
                return;
            }
        }
        if d < 2 {
            return;
        }
        let bs = self.kernel(path, |env| boundary_in(&s, env));
        let bt = self.kernel(path, |env| boundary_in(&t, env));
        if let (Some((ss, ts)), Some((st, tt))) = (bs, bt) {
            if !cell_alpha_eq(&ss, &st) {
                self.report(path, format!("not globular: sources start at `{ss}` and `{st}`"));
            }
            if !cell_alpha_eq(&ts, &tt) {
                self.report(path, format!("not globular: targets end at `{ts}` and `{tt}`"));
            }
        }
    }
}
