//! Surface formulae and terms, identified up to alpha.
//!
//! Formulae are built from falsity, negation, binary conjunction, universal
//! quantification, and membership; terms are variables and set
//! comprehensions `{a | φ}`. Binders are stored locally nameless (see
//! [`crate::nominal`]), so `==` on these types *is* alpha-equality.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::nominal::{fresh, Atom, Binder, Level, Nominal, Permutation, Var};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Bot,
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    All(Binder, Box<Formula>),
    In(Term, Term),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Var),
    Comp(Binder, Box<Formula>),
}

/// A formula or a term; several operations accept either kind.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Syntax {
    Formula(Formula),
    Term(Term),
}

/// A path from the root of a formula or term to one of its subtrees.
/// Child indices: `Neg`/`All`/`Comp` have the single child 0; `And` and
/// `In` have children 0 (left) and 1 (right).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Position(Vec<u32>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extended(&self, child: u32) -> Position {
        let mut path = self.0.clone();
        path.push(child);
        Position(path)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// True if `self` is a proper prefix of `other`.
    pub fn is_proper_prefix_of(&self, other: &Position) -> bool {
        self.0.len() < other.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("level mismatch: substituting a term of level {found} for an atom of level {expected}")]
pub struct LevelMismatch {
    pub expected: Level,
    pub found: Level,
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn conj(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn member(t: Term, s: Term) -> Formula {
        Formula::In(t, s)
    }

    /// `∀a.body`, binding every free occurrence of `a` in `body`.
    pub fn forall(a: &Atom, body: Formula) -> Formula {
        Formula::All(Binder::from_atom(a), Box::new(body.close_at(a, 0)))
    }

    // Syntactic sugar. Each returns core constructors only, so sugar never
    // appears in an AST.

    /// `⊤`, read as the negation of falsity.
    pub fn top() -> Formula {
        Formula::neg(Formula::Bot)
    }

    /// `φ ∨ ψ` as `¬(¬φ ∧ ¬ψ)`.
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::neg(Formula::conj(Formula::neg(l), Formula::neg(r)))
    }

    /// `φ → ψ` as `¬φ ∨ ψ`.
    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::or(Formula::neg(l), r)
    }

    /// `φ ↔ ψ` as `(φ → ψ) ∧ (ψ → φ)`.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::conj(Formula::imp(l.clone(), r.clone()), Formula::imp(r, l))
    }

    /// `∃a.φ` as `¬∀a.¬φ`.
    pub fn exists(a: &Atom, body: Formula) -> Formula {
        Formula::neg(Formula::forall(a, Formula::neg(body)))
    }

    /// Alpha-equality; with the nameless representation this is `==`.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other
    }

    pub fn size(&self) -> u64 {
        match self {
            Formula::Bot => 1,
            Formula::Neg(f) => f.size() + 1,
            Formula::And(l, r) => l.size() + r.size() + 1,
            Formula::All(_, body) => body.size() + 1,
            Formula::In(t, s) => t.size() + s.size() + 1,
        }
    }

    /// Capture-avoiding substitution `self[a := t]`, checking that the term
    /// has the atom's level.
    pub fn subst(&self, a: &Atom, t: &Term) -> Result<Formula, LevelMismatch> {
        let found = t.level();
        if found != a.level() {
            return Err(LevelMismatch {
                expected: a.level(),
                found,
            });
        }
        Ok(self.subst_raw(a, t))
    }

    /// Substitution without the level check; the rewrite engine uses this
    /// to replay unstratified examples.
    pub fn subst_raw(&self, a: &Atom, t: &Term) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Neg(f) => Formula::neg(f.subst_raw(a, t)),
            Formula::And(l, r) => Formula::conj(l.subst_raw(a, t), r.subst_raw(a, t)),
            Formula::All(b, body) => Formula::All(b.clone(), Box::new(body.subst_raw(a, t))),
            Formula::In(l, r) => Formula::In(l.subst_raw(a, t), r.subst_raw(a, t)),
        }
    }

    pub(crate) fn close_at(&self, a: &Atom, depth: u32) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Neg(f) => Formula::neg(f.close_at(a, depth)),
            Formula::And(l, r) => Formula::conj(l.close_at(a, depth), r.close_at(a, depth)),
            Formula::All(b, body) => Formula::All(b.clone(), Box::new(body.close_at(a, depth + 1))),
            Formula::In(t, s) => Formula::In(t.close_at(a, depth), s.close_at(a, depth)),
        }
    }

    pub(crate) fn open_at(&self, a: &Atom, depth: u32) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Neg(f) => Formula::neg(f.open_at(a, depth)),
            Formula::And(l, r) => Formula::conj(l.open_at(a, depth), r.open_at(a, depth)),
            Formula::All(b, body) => Formula::All(b.clone(), Box::new(body.open_at(a, depth + 1))),
            Formula::In(t, s) => Formula::In(t.open_at(a, depth), s.open_at(a, depth)),
        }
    }

    /// Replace the bound variable at `depth` with a term, removing that
    /// binder: indices past `depth` shift down, and indices in `t` that
    /// point to binders enclosing the contraction are lifted over the
    /// binders `t` lands under.
    pub(crate) fn instantiate_at(&self, t: &Term, depth: u32) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Neg(f) => Formula::neg(f.instantiate_at(t, depth)),
            Formula::And(l, r) => {
                Formula::conj(l.instantiate_at(t, depth), r.instantiate_at(t, depth))
            }
            Formula::All(b, body) => {
                Formula::All(b.clone(), Box::new(body.instantiate_at(t, depth + 1)))
            }
            Formula::In(l, r) => {
                Formula::In(l.instantiate_at(t, depth), r.instantiate_at(t, depth))
            }
        }
    }

    fn shift_above(&self, cutoff: u32, by: u32) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Neg(f) => Formula::neg(f.shift_above(cutoff, by)),
            Formula::And(l, r) => {
                Formula::conj(l.shift_above(cutoff, by), r.shift_above(cutoff, by))
            }
            Formula::All(b, body) => {
                Formula::All(b.clone(), Box::new(body.shift_above(cutoff + 1, by)))
            }
            Formula::In(l, r) => Formula::In(l.shift_above(cutoff, by), r.shift_above(cutoff, by)),
        }
    }

    /// True when every bound index points at an enclosing binder.
    pub fn is_locally_closed(&self) -> bool {
        self.closed_above(0)
    }

    fn closed_above(&self, depth: u32) -> bool {
        match self {
            Formula::Bot => true,
            Formula::Neg(f) => f.closed_above(depth),
            Formula::And(l, r) => l.closed_above(depth) && r.closed_above(depth),
            Formula::All(_, body) => body.closed_above(depth + 1),
            Formula::In(t, s) => t.closed_above(depth) && s.closed_above(depth),
        }
    }
}

impl Term {
    pub fn var(a: &Atom) -> Term {
        Term::Var(Var::Free(a.clone()))
    }

    /// `{a | body}`, binding every free occurrence of `a` in `body`.
    pub fn comp(a: &Atom, body: Formula) -> Term {
        Term::Comp(Binder::from_atom(a), Box::new(body.close_at(a, 0)))
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other
    }

    pub fn size(&self) -> u64 {
        match self {
            Term::Var(_) => 1,
            Term::Comp(_, body) => body.size() + 1,
        }
    }

    /// The level of a locally closed term: an atom's own level, or the
    /// binder level plus one for a comprehension.
    pub fn level(&self) -> Level {
        match self {
            Term::Var(Var::Free(a)) => a.level(),
            Term::Var(Var::Bound(_)) => {
                panic!("level of a dangling bound variable; term is not locally closed")
            }
            Term::Comp(b, _) => b.level + 1,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn subst(&self, a: &Atom, t: &Term) -> Result<Term, LevelMismatch> {
        let found = t.level();
        if found != a.level() {
            return Err(LevelMismatch {
                expected: a.level(),
                found,
            });
        }
        Ok(self.subst_raw(a, t))
    }

    pub fn subst_raw(&self, a: &Atom, t: &Term) -> Term {
        match self {
            Term::Var(Var::Free(b)) if b == a => t.clone(),
            Term::Var(v) => Term::Var(v.clone()),
            Term::Comp(b, body) => Term::Comp(b.clone(), Box::new(body.subst_raw(a, t))),
        }
    }

    pub(crate) fn close_at(&self, a: &Atom, depth: u32) -> Term {
        match self {
            Term::Var(Var::Free(b)) if b == a => Term::Var(Var::Bound(depth)),
            Term::Var(v) => Term::Var(v.clone()),
            Term::Comp(b, body) => Term::Comp(b.clone(), Box::new(body.close_at(a, depth + 1))),
        }
    }

    pub(crate) fn open_at(&self, a: &Atom, depth: u32) -> Term {
        match self {
            Term::Var(Var::Bound(k)) if *k == depth => Term::var(a),
            Term::Var(v) => Term::Var(v.clone()),
            Term::Comp(b, body) => Term::Comp(b.clone(), Box::new(body.open_at(a, depth + 1))),
        }
    }

    pub(crate) fn instantiate_at(&self, t: &Term, depth: u32) -> Term {
        match self {
            Term::Var(Var::Bound(k)) if *k == depth => {
                if depth == 0 {
                    t.clone()
                } else {
                    t.shift_above(0, depth)
                }
            }
            Term::Var(Var::Bound(k)) if *k > depth => Term::Var(Var::Bound(k - 1)),
            Term::Var(v) => Term::Var(v.clone()),
            Term::Comp(b, body) => {
                Term::Comp(b.clone(), Box::new(body.instantiate_at(t, depth + 1)))
            }
        }
    }

    fn shift_above(&self, cutoff: u32, by: u32) -> Term {
        match self {
            Term::Var(Var::Bound(k)) if *k >= cutoff => Term::Var(Var::Bound(k + by)),
            Term::Var(v) => Term::Var(v.clone()),
            Term::Comp(b, body) => {
                Term::Comp(b.clone(), Box::new(body.shift_above(cutoff + 1, by)))
            }
        }
    }

    pub fn is_locally_closed(&self) -> bool {
        self.closed_above(0)
    }

    fn closed_above(&self, depth: u32) -> bool {
        match self {
            Term::Var(Var::Bound(k)) => *k < depth,
            Term::Var(Var::Free(_)) => true,
            Term::Comp(_, body) => body.closed_above(depth + 1),
        }
    }
}

/// Open a binder's body with a fresh atom that avoids the body's support
/// and everything in `avoid`. Returns the chosen atom and the opened body.
pub fn unbind(binder: &Binder, body: &Formula, avoid: &BTreeSet<Atom>) -> (Atom, Formula) {
    let mut av = body.support();
    av.extend(avoid.iter().cloned());
    let a = fresh(binder.level, &av);
    let opened = body.open_at(&a, 0);
    (a, opened)
}

impl Nominal for Formula {
    fn permute(&self, pi: &Permutation) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Neg(f) => Formula::neg(f.permute(pi)),
            Formula::And(l, r) => Formula::conj(l.permute(pi), r.permute(pi)),
            Formula::All(b, body) => Formula::All(b.clone(), Box::new(body.permute(pi))),
            Formula::In(t, s) => Formula::In(t.permute(pi), s.permute(pi)),
        }
    }

    fn support(&self) -> BTreeSet<Atom> {
        match self {
            Formula::Bot => BTreeSet::new(),
            Formula::Neg(f) => f.support(),
            Formula::And(l, r) => {
                let mut s = l.support();
                s.extend(r.support());
                s
            }
            Formula::All(_, body) => body.support(),
            Formula::In(t, s) => {
                let mut sup = t.support();
                sup.extend(s.support());
                sup
            }
        }
    }
}

impl Nominal for Term {
    fn permute(&self, pi: &Permutation) -> Term {
        match self {
            Term::Var(Var::Free(a)) => Term::Var(Var::Free(pi.apply(a))),
            Term::Var(v) => Term::Var(v.clone()),
            Term::Comp(b, body) => Term::Comp(b.clone(), Box::new(body.permute(pi))),
        }
    }

    fn support(&self) -> BTreeSet<Atom> {
        match self {
            Term::Var(Var::Free(a)) => BTreeSet::from([a.clone()]),
            Term::Var(Var::Bound(_)) => BTreeSet::new(),
            Term::Comp(_, body) => body.support(),
        }
    }
}

impl Syntax {
    pub fn size(&self) -> u64 {
        match self {
            Syntax::Formula(f) => f.size(),
            Syntax::Term(t) => t.size(),
        }
    }

    pub fn as_formula(&self) -> Option<&Formula> {
        match self {
            Syntax::Formula(f) => Some(f),
            Syntax::Term(_) => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Syntax::Term(t) => Some(t),
            Syntax::Formula(_) => None,
        }
    }
}

impl Nominal for Syntax {
    fn permute(&self, pi: &Permutation) -> Syntax {
        match self {
            Syntax::Formula(f) => Syntax::Formula(f.permute(pi)),
            Syntax::Term(t) => Syntax::Term(t.permute(pi)),
        }
    }

    fn support(&self) -> BTreeSet<Atom> {
        match self {
            Syntax::Formula(f) => f.support(),
            Syntax::Term(t) => t.support(),
        }
    }
}

impl From<Formula> for Syntax {
    fn from(f: Formula) -> Syntax {
        Syntax::Formula(f)
    }
}

impl From<Term> for Syntax {
    fn from(t: Term) -> Syntax {
        Syntax::Term(t)
    }
}
