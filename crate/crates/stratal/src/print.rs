//! Printing back to the concrete syntax. The printer chooses display names
//! for binders deterministically (from the stored hint, disambiguating on
//! clashes) so that parsing its output in the originating mode recovers
//! the value up to alpha.

use std::collections::BTreeSet;

use crate::internal::{IPred, ISet};
use crate::nominal::{Atom, Binder, Level, Nominal, Var};
use crate::normalize::{embed_pred, embed_set};
use crate::surface::{Formula, Syntax, Term};

/// How level annotations are written: always (`Tst`), never (`Nf`), or
/// only when nonzero (`Raw`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Tst,
    Nf,
    Raw,
}

pub fn render(x: &Syntax, mode: Mode) -> String {
    match x {
        Syntax::Formula(f) => render_formula(f, mode),
        Syntax::Term(t) => render_term(t, mode),
    }
}

pub fn render_formula(f: &Formula, mode: Mode) -> String {
    let mut out = String::new();
    let mut env = Vec::new();
    write_formula(f, mode, 0, &mut env, &mut out);
    out
}

pub fn render_term(t: &Term, mode: Mode) -> String {
    let mut out = String::new();
    let mut env = Vec::new();
    write_term(t, mode, &mut env, &mut out);
    out
}

/// Internal values print through their surface embedding.
pub fn render_pred(x: &IPred, mode: Mode) -> String {
    render_formula(&embed_pred(x), mode)
}

pub fn render_set(x: &ISet, mode: Mode) -> String {
    render_term(&embed_set(x), mode)
}

fn atom_name(a: &Atom) -> String {
    match a.name() {
        Some(n) => n.to_owned(),
        None => format!("g{}", a.id() & 0xffff_ffff),
    }
}

fn write_name(name: &str, level: Level, mode: Mode, out: &mut String) {
    out.push_str(name);
    match mode {
        Mode::Tst => {
            out.push(':');
            out.push_str(&level.to_string());
        }
        Mode::Raw if level != 0 => {
            out.push(':');
            out.push_str(&level.to_string());
        }
        _ => {}
    }
}

/// Names that printing the body would emit and that a binder's chosen name
/// must therefore avoid: free atoms, and every enclosing binder name (an
/// over-approximation of the referenced ones, which is always safe).
fn clashes(
    name: &str,
    level: Level,
    mode: Mode,
    body_support: &BTreeSet<Atom>,
    env: &[(String, Level)],
) -> bool {
    let same = |other_name: &str, other_level: Level| {
        other_name == name && (mode == Mode::Nf || other_level == level)
    };
    body_support.iter().any(|a| same(&atom_name(a), a.level()))
        || env.iter().any(|(n, l)| same(n, *l))
}

fn choose_binder_name(
    binder: &Binder,
    body_support: &BTreeSet<Atom>,
    mode: Mode,
    env: &[(String, Level)],
) -> String {
    let base = binder.hint().unwrap_or("x").to_owned();
    if !clashes(&base, binder.level, mode, body_support, env) {
        return base;
    }
    for n in 1u64.. {
        let candidate = format!("{base}{n}");
        if !clashes(&candidate, binder.level, mode, body_support, env) {
            return candidate;
        }
    }
    unreachable!()
}

// Precedence: membership and atoms bind tightest, then negation, then
// conjunction; a quantifier body extends maximally to the right, so a
// quantifier anywhere but tail position gets parentheses.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Bot | Formula::In(_, _) => 5,
        Formula::Neg(_) => 4,
        Formula::And(_, _) => 2,
        Formula::All(_, _) => 1,
    }
}

fn write_formula(
    f: &Formula,
    mode: Mode,
    min_prec: u8,
    env: &mut Vec<(String, Level)>,
    out: &mut String,
) {
    let parens = prec(f) < min_prec;
    if parens {
        out.push('(');
    }
    match f {
        Formula::Bot => out.push_str("false"),
        Formula::Neg(inner) => {
            out.push('~');
            write_formula(inner, mode, 4, env, out);
        }
        Formula::And(l, r) => {
            write_formula(l, mode, 3, env, out);
            out.push_str(" & ");
            write_formula(r, mode, 2, env, out);
        }
        Formula::All(binder, body) => {
            let name = choose_binder_name(binder, &body.support(), mode, env);
            out.push_str("forall ");
            write_name(&name, binder.level, mode, out);
            out.push_str(". ");
            env.push((name, binder.level));
            write_formula(body, mode, 0, env, out);
            env.pop();
        }
        Formula::In(t, s) => {
            write_term(t, mode, env, out);
            out.push_str(" in ");
            write_term(s, mode, env, out);
        }
    }
    if parens {
        out.push(')');
    }
}

fn write_term(t: &Term, mode: Mode, env: &mut Vec<(String, Level)>, out: &mut String) {
    match t {
        Term::Var(Var::Free(a)) => write_name(&atom_name(a), a.level(), mode, out),
        Term::Var(Var::Bound(k)) => {
            let (name, level) = env[env.len() - 1 - *k as usize].clone();
            write_name(&name, level, mode, out);
        }
        Term::Comp(binder, body) => {
            let name = choose_binder_name(binder, &body.support(), mode, env);
            out.push('{');
            write_name(&name, binder.level, mode, out);
            out.push_str(" | ");
            env.push((name, binder.level));
            write_formula(body, mode, 0, env, out);
            env.pop();
            out.push('}');
        }
    }
}
