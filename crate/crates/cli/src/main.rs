use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hleq_core::cells::{boundary, dim, parse_cell, parse_context, print_cell, well_formed, Cell, Context};
use hleq_core::reduction::{normal_form, reduction_graph, NormalForm};
use hleq_core::syntax::{parse_term, print_term, Name, Term};
use hleq_core::theory::{build_beta_square, build_eta_square, convertible, search_filler, Convertibility, SquareSpec};
use hleq_core::Error;

/// Higher βη-conversion toolkit: terms, conversion cells, squares and fillers.
#[derive(Parser)]
#[command(name = "hleq", version)]
struct Cli {
    /// Output style: human-readable or `key: value` lines.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Kv,
}

#[derive(Args)]
struct Input {
    /// Inline expression instead of a file.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
    /// File holding the expression.
    #[arg(required_unless_present = "expr")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct CtxArg {
    /// Context file declaring term and path variables.
    #[arg(long)]
    ctx: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a term or cell and print it back.
    Parse {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        ctx: CtxArg,
    },
    /// Leftmost-outermost normal form of a term.
    Normalize {
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Reduction graph of a term, nodes up to α.
    Graph {
        #[arg(long, default_value_t = 200)]
        max_nodes: usize,
        #[arg(long, default_value_t = 30)]
        max_depth: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Well-formedness verdict for a cell.
    Check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        ctx: CtxArg,
    },
    /// Source and target of a cell.
    Boundary {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        ctx: CtxArg,
    },
    /// Interchange square of a β- or η-step with a conversion.
    Square {
        #[command(subcommand)]
        kind: SquareKind,
    },
    /// Search for a cell between two parallel conversions.
    Fill {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        ctx: CtxArg,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 40)]
        size: usize,
    },
    /// Decide convertibility of two terms and print witnesses.
    Convert {
        /// The two terms.
        #[arg(short = 'e', long = "expr", num_args = 1, required = true)]
        exprs: Vec<String>,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum SquareKind {
    Beta {
        /// Body `P` of the abstraction.
        #[arg(long)]
        term: String,
        #[arg(long)]
        var: String,
        /// The conversion `t` fed to `\var. P`.
        #[arg(long)]
        path: String,
        #[command(flatten)]
        ctx: CtxArg,
    },
    Eta {
        #[arg(long)]
        path: String,
        #[arg(long)]
        binder: String,
        #[command(flatten)]
        ctx: CtxArg,
    },
}

/// Failures that end a command: bad input (exit 2) or a kernel refusal (exit 1).
enum Fail {
    Usage(String),
    Kernel(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => Fail::Usage(p.to_string()),
            Error::Kernel(k) => Fail::Kernel(k.to_string()),
        }
    }
}

impl From<hleq_core::KernelError> for Fail {
    fn from(e: hleq_core::KernelError) -> Self {
        Fail::Kernel(e.to_string())
    }
}

impl From<hleq_core::ParseError> for Fail {
    fn from(e: hleq_core::ParseError) -> Self {
        Fail::Usage(e.to_string())
    }
}

/// Collected output. Plain mode prints `plain`; kv mode prints `fields`.
struct Out {
    kv: bool,
    plain: Vec<String>,
    fields: Vec<(String, String)>,
}

impl Out {
    fn line(&mut self, s: impl Into<String>) {
        self.plain.push(s.into());
    }

    fn field(&mut self, k: &str, v: impl ToString) {
        self.fields.push((k.to_string(), v.to_string()));
    }

    fn both(&mut self, k: &str, v: impl ToString) {
        let v = v.to_string();
        self.plain.push(format!("{k}: {v}"));
        self.fields.push((k.to_string(), v));
    }

    fn render(&self) -> String {
        let mut s = String::new();
        if self.kv {
            for (k, v) in &self.fields {
                s.push_str(&format!("{k}: {v}\n"));
            }
        } else {
            for l in &self.plain {
                s.push_str(l);
                s.push('\n');
            }
        }
        s
    }
}

fn read_input(input: &Input) -> Result<String, Fail> {
    match (&input.expr, &input.file) {
        (Some(e), _) => Ok(e.clone()),
        (None, Some(f)) => fs::read_to_string(f).map_err(|e| Fail::Usage(format!("{}: {e}", f.display()))),
        (None, None) => Err(Fail::Usage("no input given".into())),
    }
}

fn load_ctx(arg: &CtxArg) -> Result<Context, Fail> {
    let Some(path) = &arg.ctx else { return Ok(Context::new()) };
    let src = fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    parse_context(&src).map_err(|e| match e {
        Error::Parse(p) => Fail::Usage(format!("{}: {p}", path.display())),
        Error::Kernel(k) => Fail::Usage(format!("{}: {k}", path.display())),
    })
}

fn term(src: &str) -> Result<Term, Fail> {
    Ok(parse_term(src.trim())?)
}

fn cell(src: &str, ctx: &Context) -> Result<Cell, Fail> {
    Ok(parse_cell(src.trim(), ctx)?)
}

fn name(s: &str) -> Result<Name, Fail> {
    Name::new(s).ok_or_else(|| Fail::Usage(format!("`{s}` is not a variable name")))
}

fn square_out(out: &mut Out, sq: &SquareSpec, filler: &Cell, ctx: &Context) -> Result<(), Fail> {
    for (k, c) in [
        ("top_left", &sq.top_left),
        ("top_right", &sq.top_right),
        ("bottom_left", &sq.bottom_left),
        ("bottom_right", &sq.bottom_right),
        ("top", &sq.top),
        ("right", &sq.right),
        ("left", &sq.left),
        ("bottom", &sq.bottom),
        ("filler", filler),
    ] {
        out.both(k, print_cell(c));
    }
    out.both("dim", dim(filler, ctx)?);
    out.both("check", well_formed(filler, ctx));
    Ok(())
}

/// Runs one command; the flag is false for a negative verdict.
fn run(cmd: &Cmd, out: &mut Out) -> Result<bool, Fail> {
    match cmd {
        Cmd::Parse { input, ctx } => {
            let ctx = load_ctx(ctx)?;
            let c = cell(&read_input(input)?, &ctx)?;
            out.line(print_cell(&c));
            out.field("cell", print_cell(&c));
            out.field("dim", dim(&c, &ctx)?);
            Ok(true)
        }
        Cmd::Normalize { max_steps, input } => {
            let t = term(&read_input(input)?)?;
            match normal_form(&t, *max_steps) {
                NormalForm::Normal { term, steps } => {
                    out.line(print_term(&term));
                    out.field("status", "normal");
                    out.field("term", print_term(&term));
                    out.field("steps", steps);
                    Ok(true)
                }
                NormalForm::Diverged { last, steps } => {
                    out.line(format!("no normal form within {steps} steps"));
                    out.line(format!("last: {}", print_term(&last)));
                    out.field("status", "diverged");
                    out.field("last", print_term(&last));
                    out.field("steps", steps);
                    Ok(false)
                }
            }
        }
        Cmd::Graph { max_nodes, max_depth, input } => {
            let t = term(&read_input(input)?)?;
            let g = reduction_graph(&t, *max_nodes, *max_depth);
            out.both("nodes", g.nodes.len());
            out.both("edges", g.edges.len());
            out.both("truncated", g.truncated);
            for (i, n) in g.nodes.iter().enumerate() {
                out.line(format!("{i}: {}", print_term(n)));
                out.field(&format!("node.{i}"), print_term(n));
            }
            for e in &g.edges {
                out.line(format!("{} -> {} [{}]", e.source, e.target, e.position));
                out.field("edge", format!("{} {} {}", e.source, e.target, e.position));
            }
            let terminals = g.terminals().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
            out.both("terminals", terminals);
            Ok(true)
        }
        Cmd::Check { input, ctx } => {
            let ctx = load_ctx(ctx)?;
            let c = cell(&read_input(input)?, &ctx)?;
            let v = well_formed(&c, &ctx);
            if v.is_ok() {
                out.line("ok");
                out.field("verdict", "ok");
                return Ok(true);
            }
            out.line("not well-formed");
            out.field("verdict", "ill-formed");
            for x in &v.violations {
                out.line(format!("at {}: {}", x.path, x.message));
                out.field("violation", format!("{}: {}", x.path, x.message));
            }
            Ok(false)
        }
        Cmd::Boundary { input, ctx } => {
            let ctx = load_ctx(ctx)?;
            let c = cell(&read_input(input)?, &ctx)?;
            let (s, t) = boundary(&c, &ctx)?;
            out.both("src", print_cell(&s));
            out.both("tgt", print_cell(&t));
            out.both("dim", dim(&c, &ctx)?);
            Ok(true)
        }
        Cmd::Square { kind } => match kind {
            SquareKind::Beta { term: p, var, path, ctx } => {
                let ctx = load_ctx(ctx)?;
                let (p, x, t) = (term(p)?, name(var)?, cell(path, &ctx)?);
                let (sq, filler) = build_beta_square(&p, &x, &t, &ctx)?;
                square_out(out, &sq, &filler, &ctx)?;
                Ok(true)
            }
            SquareKind::Eta { path, binder, ctx } => {
                let ctx = load_ctx(ctx)?;
                let (t, y) = (cell(path, &ctx)?, name(binder)?);
                let (sq, filler) = build_eta_square(&t, &y, &ctx)?;
                square_out(out, &sq, &filler, &ctx)?;
                Ok(true)
            }
        },
        Cmd::Fill { from, to, ctx, depth, size } => {
            let ctx = load_ctx(ctx)?;
            let (a, b) = (cell(from, &ctx)?, cell(to, &ctx)?);
            let r = search_filler(&a, &b, &ctx, *depth, *size)?;
            out.field("found", r.found);
            match &r.filler {
                Some(f) => {
                    let d = r.depth.unwrap_or(0);
                    out.line(format!("found (depth {d})"));
                    out.field("depth", d);
                    out.both("filler", print_cell(f));
                }
                None => out.line(format!("not found (depth {})", r.bound)),
            }
            out.both("explored", r.explored);
            out.field("bound", r.bound);
            out.field("size", size);
            Ok(r.found)
        }
        Cmd::Convert { exprs, budget } => {
            let [m, n] = exprs.as_slice() else {
                return Err(Fail::Usage(format!("convert takes exactly two terms, got {}", exprs.len())));
            };
            let (m, n) = (term(m)?, term(n)?);
            let conv = convertible(&m, &n, *budget);
            let verdict = match conv.verdict {
                Convertibility::Convertible => "convertible",
                Convertibility::NotConvertible => "not convertible",
                Convertibility::Unknown => "unknown",
            };
            out.line(if conv.verdict == Convertibility::Unknown {
                format!("unknown (budget {budget})")
            } else {
                verdict.to_string()
            });
            out.field("verdict", verdict);
            for w in &conv.witnesses {
                out.both("witness", print_cell(w));
            }
            Ok(conv.verdict == Convertibility::Convertible)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = Out { kv: cli.format == Format::Kv, plain: Vec::new(), fields: Vec::new() };
    match run(&cli.cmd, &mut out) {
        Ok(positive) => {
            print!("{}", out.render());
            ExitCode::from(if positive { 0 } else { 1 })
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Fail::Kernel(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
