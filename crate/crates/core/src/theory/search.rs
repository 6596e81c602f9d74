use std::collections::{HashSet, VecDeque};

use crate::cells::boundary::{as_lifted_term, boundary_in, classify_redex, dim_in, mk_app, with};
use crate::cells::{well_formed, Cell, CellKey, Context};
use crate::error::KernelError;
use crate::reduction::redex_positions;
use crate::syntax::Term;

use super::canon::canonicalize;
use super::convert::step_cell;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub found: bool,
    pub filler: Option<Cell>,
    /// States taken off the frontier.
    pub explored: usize,
    /// The depth bound the search ran with.
    pub bound: usize,
    /// Number of steps in the filler, when one was found.
    pub depth: Option<usize>,
}

struct Gen {
    cell: Cell,
    src: CellKey,
    tgt: CellKey,
}

struct Pool {
    k: usize,
    gens: Vec<Gen>,
    seen: HashSet<CellKey>,
}

impl Pool {
    fn offer(&mut self, g: Cell, env: &mut Context) {
        if dim_in(&g, env).ok() != Some(self.k + 1) || !self.seen.insert(g.key()) {
            return;
        }
        if !well_formed(&g, env).is_ok() {
            return;
        }
        let Ok((s, t)) = boundary_in(&g, env) else { return };
        self.gens.push(Gen { cell: g, src: s.key(), tgt: t.key() });
    }

    /// Collects the β- and η-steps on every sub-cell of `c` that is a redex.
    fn harvest(&mut self, c: &Cell, env: &mut Context) {
        if classify_redex(c).is_some() {
            self.offer(Cell::beta(c.clone()), env);
        }
        match c {
            Cell::Base(Term::Abs(y, body)) => {
                if let Some(e) = crate::reduction::eta_body(&Term::Abs(y.clone(), body.clone())) {
                    self.offer(Cell::eta(Cell::Base(e.clone()), y.clone()), env);
                }
            }
            Cell::Abs { binder, decl: None, body, ann: None } => {
                if let Cell::App(e, v) = &**body {
                    if as_lifted_term(v) == Some(Term::Var(binder.clone())) && !e.has_free(binder) {
                        self.offer(Cell::eta((**e).clone(), binder.clone()), env);
                    }
                }
            }
            _ => {}
        }
        match c {
            Cell::Base(_) | Cell::PathVar(_) => {}
            Cell::Refl(x) | Cell::Beta(x) | Cell::Inv(x) | Cell::Degen(x) => self.harvest(x, env),
            Cell::Eta { body, .. } => self.harvest(body, env),
            Cell::Concat(a, b) | Cell::App(a, b) => {
                self.harvest(a, env);
                self.harvest(b, env);
            }
            Cell::Abs { binder, decl, body, .. } => {
                with(env, binder, decl.as_deref(), |env| self.harvest(body, env));
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Pos {
    Left,
    Right,
    Body,
}

/// Sub-cells of `c` of dimension `k` that a step can rewrite in place.
fn positions(c: &Cell, k: usize, env: &mut Context, path: &mut Vec<Pos>, out: &mut Vec<(Vec<Pos>, Cell)>) {
    if dim_in(c, env).ok() != Some(k) {
        return;
    }
    out.push((path.clone(), c.clone()));
    match c {
        Cell::Concat(a, b) | Cell::App(a, b) => {
            for (side, x) in [(Pos::Left, a), (Pos::Right, b)] {
                path.push(side);
                positions(x, k, env, path, out);
                path.pop();
            }
        }
        Cell::Abs { binder, decl: None, body, .. } => {
            path.push(Pos::Body);
            with(env, binder, None, |env| positions(body, k, env, path, out));
            path.pop();
        }
        _ => {}
    }
}

/// The step `g` placed at `path` inside `c`.
fn wrap(c: &Cell, path: &[Pos], g: Cell, env: &mut Context) -> Result<Cell, KernelError> {
    let Some(&pos) = path.first() else { return Ok(g) };
    let rest = &path[1..];
    match (pos, c) {
        (Pos::Left, Cell::Concat(a, b)) => Ok(Cell::concat(wrap(a, rest, g, env)?, (**b).clone())),
        (Pos::Right, Cell::Concat(a, b)) => Ok(Cell::concat((**a).clone(), wrap(b, rest, g, env)?)),
        (Pos::Left, Cell::App(a, b)) => {
            let inner = wrap(a, rest, g, env)?;
            mk_app(inner, (**b).clone(), env)
        }
        (Pos::Right, Cell::App(a, b)) => {
            let inner = wrap(b, rest, g, env)?;
            mk_app((**a).clone(), inner, env)
        }
        (Pos::Body, Cell::Abs { binder, decl: None, body, ann }) => {
            let inner = with(env, binder, None, |env| wrap(body, rest, g, env))?;
            Ok(Cell::Abs { binder: binder.clone(), decl: None, body: Box::new(inner), ann: ann.clone() })
        }
        _ => Err(KernelError::InvalidPosition(c.to_string())),
    }
}

/// Breadth-first search for a cell one dimension up from `a` to `b`, built
/// as a composite of β/η-steps (forward or reversed) placed in context.
/// Steps come from redexes occurring in `a`, `b` and the states visited,
/// which includes the interchange squares of lifted redexes. States are
/// compared after [`canonicalize`], so the filler's target agrees with `b`
/// up to canonical form.
pub fn search_filler(a: &Cell, b: &Cell, ctx: &Context, depth: usize, size: usize) -> Result<SearchReport, KernelError> {
    let mut env = ctx.clone();
    let k = dim_in(a, &mut env)?;
    let kb = dim_in(b, &mut env)?;
    if k != kb {
        return Err(KernelError::NotParallel(format!("dimensions {k} and {kb}")));
    }
    if k >= 1 {
        let (sa, ta) = boundary_in(a, &mut env)?;
        let (sb, tb) = boundary_in(b, &mut env)?;
        if sa.key() != sb.key() || ta.key() != tb.key() {
            return Err(KernelError::NotParallel(format!("({sa} ~ {ta}) against ({sb} ~ {tb})")));
        }
    }
    let goal = canonicalize(b, ctx).key();
    let start = canonicalize(a, ctx).key();
    let mut report = SearchReport { found: false, filler: None, explored: 0, bound: depth, depth: None };
    if start == goal {
        report.found = true;
        report.depth = Some(0);
        report.filler = Some(Cell::refl(a.clone()));
        return Ok(report);
    }
    let mut pool = Pool { k, gens: Vec::new(), seen: HashSet::new() };
    pool.harvest(a, &mut env);
    pool.harvest(b, &mut env);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([(a.clone(), Vec::<Cell>::new())]);
    while let Some((x, moves)) = queue.pop_front() {
        report.explored += 1;
        if moves.len() >= depth {
            continue;
        }
        pool.harvest(&x, &mut env);
        let mut candidates = Vec::new();
        if k == 0 {
            if let Cell::Base(t) = &x {
                for p in redex_positions(t) {
                    candidates.push(step_cell(t, &p)?);
                }
            }
        } else {
            let mut spots = Vec::new();
            positions(&x, k, &mut env, &mut Vec::new(), &mut spots);
            for (path, y) in &spots {
                let key = y.key();
                for g in &pool.gens {
                    let step = if g.src == key {
                        g.cell.clone()
                    } else if g.tgt == key {
                        Cell::inv(g.cell.clone())
                    } else {
                        continue;
                    };
                    if let Ok(m) = wrap(&x, path, step, &mut env) {
                        candidates.push(m);
                    }
                }
            }
        }
        for m in candidates {
            let Ok((_, next)) = boundary_in(&m, &mut env) else { continue };
            if next.size() > size {
                continue;
            }
            let key = canonicalize(&next, ctx).key();
            if !seen.insert(key.clone()) {
                continue;
            }
            let mut path = moves.clone();
            path.push(m);
            if key == goal {
                report.found = true;
                report.depth = Some(path.len());
                report.filler = path.into_iter().reduce(Cell::concat);
                return Ok(report);
            }
            queue.push_back((next, path));
        }
    }
    Ok(report)
}
