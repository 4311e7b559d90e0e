//! The internal (normal-form) syntax: level-indexed internal sets and
//! internal predicates.
//!
//! Membership here is `Elt(x, a)` with an *atom* on the right, so no redex
//! can be formed; conjunction takes a finite set of conjuncts, kept sorted
//! and deduplicated so that set equality is structural equality. The level
//! side-conditions (an `Elt` atom sits one level above its member, a
//! comprehension one level above its binder) are enforced by the smart
//! constructors and re-checkable with [`IPred::validate`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::nominal::{fresh, Atom, Binder, Level, Nominal, Permutation, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("level mismatch: expected level {expected}, found {found}")]
    LevelMismatch { expected: Level, found: Level },
    #[error("atom {atom:?} is not fresh for the value it concretes")]
    Freshness { atom: Atom },
    #[error("expected {expected}")]
    Kind { expected: &'static str },
    #[error("bound index {index} has no enclosing binder")]
    UnboundIndex { index: u32 },
}

/// A canonical finite set of conjuncts: sorted by the structural order and
/// duplicate-free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Conjuncts(Vec<IPred>);

impl Conjuncts {
    pub fn new<I>(items: I) -> Conjuncts
    where
        I: IntoIterator<Item = IPred>,
    {
        let mut v: Vec<IPred> = items.into_iter().collect();
        v.sort();
        v.dedup();
        Conjuncts(v)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, IPred> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[IPred] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a Conjuncts {
    type Item = &'a IPred;
    type IntoIter = std::slice::Iter<'a, IPred>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum IPred {
    And(Conjuncts),
    Neg(Box<IPred>),
    All(Binder, Box<IPred>),
    Elt(Box<ISet>, Var),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ISet {
    Atm(Var),
    St(Binder, Box<IPred>),
}

impl IPred {
    pub fn and<I>(items: I) -> IPred
    where
        I: IntoIterator<Item = IPred>,
    {
        IPred::And(Conjuncts::new(items))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(x: IPred) -> IPred {
        IPred::Neg(Box::new(x))
    }

    /// `∀a.body`, binding `a` in `body`. Any atom level is allowed.
    pub fn all(a: &Atom, body: IPred) -> IPred {
        IPred::All(Binder::from_atom(a), Box::new(body.close_at(a, 0)))
    }

    /// Internal membership `x ∈ a`, subject to `level(a) = level(x) + 1`.
    pub fn elt(x: ISet, a: &Atom) -> Result<IPred, FormError> {
        let expected = x.level() + 1;
        if a.level() != expected {
            return Err(FormError::LevelMismatch {
                expected,
                found: a.level(),
            });
        }
        Ok(IPred::Elt(Box::new(x), Var::Free(a.clone())))
    }

    /// Internal falsity: the empty disjunction, ¬∧∅.
    pub fn falsum() -> IPred {
        IPred::neg(IPred::and([]))
    }

    /// Internal truth: the empty conjunction ∧∅.
    pub fn verum() -> IPred {
        IPred::and([])
    }

    /// Disjunction over a finite set: ∨𝒳 = ¬∧{¬X | X ∈ 𝒳}.
    pub fn or_set<I>(items: I) -> IPred
    where
        I: IntoIterator<Item = IPred>,
    {
        IPred::neg(IPred::and(items.into_iter().map(IPred::neg)))
    }

    /// Implication X ⇒ Y = ∨{¬X, Y}.
    pub fn imp(x: IPred, y: IPred) -> IPred {
        IPred::or_set([IPred::neg(x), y])
    }

    /// Biconditional X ⇔ Y = ∧{X ⇒ Y, Y ⇒ X}.
    pub fn iff(x: IPred, y: IPred) -> IPred {
        IPred::and([IPred::imp(x.clone(), y.clone()), IPred::imp(y, x)])
    }

    /// The least construction stage at which the formation rules build this
    /// value. Internal atoms enter at every stage, so their age is zero.
    pub fn age(&self) -> u64 {
        match self {
            IPred::And(xs) => 1 + xs.iter().map(IPred::age).max().unwrap_or(0),
            IPred::Neg(x) => 1 + x.age(),
            IPred::All(_, body) => 1 + body.age(),
            IPred::Elt(x, _) => 1 + x.age(),
        }
    }

    /// The least atom level occurring in this predicate (binder levels
    /// included); the empty conjunction contributes the default 0.
    pub fn minlev(&self) -> Level {
        self.minlev_in(&mut Vec::new())
    }

    fn minlev_in(&self, env: &mut Vec<Level>) -> Level {
        match self {
            IPred::And(xs) => xs.iter().map(|x| x.minlev_in(env)).fold(0, Level::min),
            IPred::Neg(x) => x.minlev_in(env),
            IPred::All(b, body) => {
                env.push(b.level);
                let m = body.minlev_in(env);
                env.pop();
                b.level.min(m)
            }
            IPred::Elt(x, v) => x.minlev_in(env).min(var_level(v, env)),
        }
    }

    /// Number of constructor nodes; used to bound generated values.
    pub fn node_count(&self) -> u64 {
        match self {
            IPred::And(xs) => 1 + xs.iter().map(IPred::node_count).sum::<u64>(),
            IPred::Neg(x) => 1 + x.node_count(),
            IPred::All(_, body) => 1 + body.node_count(),
            IPred::Elt(x, _) => 1 + x.node_count() + 1,
        }
    }

    pub fn alpha_eq(&self, other: &IPred) -> bool {
        self == other
    }

    /// JSON mirroring the constructors; conjunction sets serialize as
    /// arrays in canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            IPred::And(xs) => json!({ "and": xs.iter().map(IPred::to_json).collect::<Vec<_>>() }),
            IPred::Neg(x) => json!({ "neg": x.to_json() }),
            IPred::All(b, body) => json!({ "all": binder_json(b, body.to_json()) }),
            IPred::Elt(x, v) => json!({ "elt": { "member": x.to_json(), "atom": var_json(v) } }),
        }
    }

    /// Re-check every level side-condition and bound index, deeply.
    pub fn validate(&self) -> Result<(), FormError> {
        self.validate_in(&mut Vec::new())
    }

    fn validate_in(&self, env: &mut Vec<Level>) -> Result<(), FormError> {
        match self {
            IPred::And(xs) => xs.iter().try_for_each(|x| x.validate_in(env)),
            IPred::Neg(x) => x.validate_in(env),
            IPred::All(b, body) => {
                env.push(b.level);
                let r = body.validate_in(env);
                env.pop();
                r
            }
            IPred::Elt(x, v) => {
                x.validate_in(env)?;
                let found = checked_var_level(v, env)?;
                let expected = x.level_in(env) + 1;
                if found != expected {
                    return Err(FormError::LevelMismatch { expected, found });
                }
                Ok(())
            }
        }
    }

    pub(crate) fn close_at(&self, a: &Atom, depth: u32) -> IPred {
        match self {
            IPred::And(xs) => IPred::and(xs.iter().map(|x| x.close_at(a, depth))),
            IPred::Neg(x) => IPred::neg(x.close_at(a, depth)),
            IPred::All(b, body) => IPred::All(b.clone(), Box::new(body.close_at(a, depth + 1))),
            IPred::Elt(x, v) => IPred::Elt(Box::new(x.close_at(a, depth)), close_var(v, a, depth)),
        }
    }

    pub(crate) fn open_at(&self, a: &Atom, depth: u32) -> IPred {
        match self {
            IPred::And(xs) => IPred::and(xs.iter().map(|x| x.open_at(a, depth))),
            IPred::Neg(x) => IPred::neg(x.open_at(a, depth)),
            IPred::All(b, body) => IPred::All(b.clone(), Box::new(body.open_at(a, depth + 1))),
            IPred::Elt(x, v) => IPred::Elt(Box::new(x.open_at(a, depth)), open_var(v, a, depth)),
        }
    }
}

impl ISet {
    pub fn atom(a: &Atom) -> ISet {
        ISet::Atm(Var::Free(a.clone()))
    }

    /// `{a | body}`, binding `a`; the result lives one level above `a`.
    pub fn st(a: &Atom, body: IPred) -> ISet {
        ISet::St(Binder::from_atom(a), Box::new(body.close_at(a, 0)))
    }

    /// The empty set at `level`: a comprehension over internal falsity.
    /// The choice of bound atom is immaterial and none is needed here.
    pub fn empty_set(level: Level) -> ISet {
        ISet::St(
            Binder {
                level: level - 1,
                hint: None,
            },
            Box::new(IPred::falsum()),
        )
    }

    /// The universal set at `level`: a comprehension over internal truth.
    pub fn full_set(level: Level) -> ISet {
        ISet::St(
            Binder {
                level: level - 1,
                hint: None,
            },
            Box::new(IPred::verum()),
        )
    }

    pub fn level(&self) -> Level {
        self.level_in(&[])
    }

    fn level_in(&self, env: &[Level]) -> Level {
        match self {
            ISet::Atm(Var::Free(a)) => a.level(),
            ISet::Atm(Var::Bound(k)) => env[env.len() - 1 - *k as usize],
            ISet::St(b, _) => b.level + 1,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, ISet::Atm(_))
    }

    pub fn age(&self) -> u64 {
        match self {
            ISet::Atm(_) => 0,
            ISet::St(_, body) => 1 + body.age(),
        }
    }

    pub fn minlev(&self) -> Level {
        self.minlev_in(&mut Vec::new())
    }

    fn minlev_in(&self, env: &mut Vec<Level>) -> Level {
        match self {
            ISet::Atm(v) => var_level(v, env),
            ISet::St(b, body) => {
                env.push(b.level);
                let m = body.minlev_in(env);
                env.pop();
                b.level.min(m)
            }
        }
    }

    pub fn node_count(&self) -> u64 {
        match self {
            ISet::Atm(_) => 1,
            ISet::St(_, body) => 1 + body.node_count(),
        }
    }

    pub fn alpha_eq(&self, other: &ISet) -> bool {
        self == other
    }

    /// JSON mirroring the constructors.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            ISet::Atm(v) => json!({ "atm": var_json(v) }),
            ISet::St(b, body) => json!({ "st": binder_json(b, body.to_json()) }),
        }
    }

    pub fn validate(&self) -> Result<(), FormError> {
        self.validate_in(&mut Vec::new())
    }

    fn validate_in(&self, env: &mut Vec<Level>) -> Result<(), FormError> {
        match self {
            ISet::Atm(v) => checked_var_level(v, env).map(|_| ()),
            ISet::St(b, body) => {
                env.push(b.level);
                let r = body.validate_in(env);
                env.pop();
                r
            }
        }
    }

    /// Concretion `x @ a`: the body of a comprehension at the fresh atom
    /// `a`. Requires `a` one level below `x` and not free in `x`; then
    /// `St(a, x@a)` alpha-equals `x`.
    pub fn concrete(&self, a: &Atom) -> Result<IPred, FormError> {
        let ISet::St(b, body) = self else {
            return Err(FormError::Kind {
                expected: "an internal comprehension, not an internal atom",
            });
        };
        if a.level() != b.level {
            return Err(FormError::LevelMismatch {
                expected: b.level,
                found: a.level(),
            });
        }
        if !self.fresh_for(a) {
            return Err(FormError::Freshness { atom: a.clone() });
        }
        Ok(body.open_at(a, 0))
    }

    pub(crate) fn close_at(&self, a: &Atom, depth: u32) -> ISet {
        match self {
            ISet::Atm(v) => ISet::Atm(close_var(v, a, depth)),
            ISet::St(b, body) => ISet::St(b.clone(), Box::new(body.close_at(a, depth + 1))),
        }
    }

    pub(crate) fn open_at(&self, a: &Atom, depth: u32) -> ISet {
        match self {
            ISet::Atm(v) => ISet::Atm(open_var(v, a, depth)),
            ISet::St(b, body) => ISet::St(b.clone(), Box::new(body.open_at(a, depth + 1))),
        }
    }
}

fn binder_json(b: &Binder, body: serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "binder": { "level": b.level, "name": b.hint() },
        "body": body,
    })
}

fn var_json(v: &Var) -> serde_json::Value {
    match v {
        Var::Free(a) => serde_json::json!({ "free": { "name": a.name(), "level": a.level() } }),
        Var::Bound(k) => serde_json::json!({ "bound": k }),
    }
}

fn close_var(v: &Var, a: &Atom, depth: u32) -> Var {
    match v {
        Var::Free(b) if b == a => Var::Bound(depth),
        other => other.clone(),
    }
}

fn open_var(v: &Var, a: &Atom, depth: u32) -> Var {
    match v {
        Var::Bound(k) if *k == depth => Var::Free(a.clone()),
        other => other.clone(),
    }
}

fn var_level(v: &Var, env: &[Level]) -> Level {
    match v {
        Var::Free(a) => a.level(),
        Var::Bound(k) => env[env.len() - 1 - *k as usize],
    }
}

fn checked_var_level(v: &Var, env: &[Level]) -> Result<Level, FormError> {
    match v {
        Var::Free(a) => Ok(a.level()),
        Var::Bound(k) => {
            let k = *k as usize;
            if k >= env.len() {
                return Err(FormError::UnboundIndex { index: k as u32 });
            }
            Ok(env[env.len() - 1 - k])
        }
    }
}

/// Open a binder's body with a fresh atom avoiding the body's support and
/// everything in `avoid`.
pub fn unbind_pred(binder: &Binder, body: &IPred, avoid: &BTreeSet<Atom>) -> (Atom, IPred) {
    let mut av = body.support();
    av.extend(avoid.iter().cloned());
    let a = fresh(binder.level, &av);
    let opened = body.open_at(&a, 0);
    (a, opened)
}

impl Nominal for IPred {
    fn permute(&self, pi: &Permutation) -> IPred {
        match self {
            // Re-canonicalize: renaming free atoms can reorder the set.
            IPred::And(xs) => IPred::and(xs.iter().map(|x| x.permute(pi))),
            IPred::Neg(x) => IPred::neg(x.permute(pi)),
            IPred::All(b, body) => IPred::All(b.clone(), Box::new(body.permute(pi))),
            IPred::Elt(x, v) => IPred::Elt(Box::new(x.permute(pi)), permute_var(v, pi)),
        }
    }

    fn support(&self) -> BTreeSet<Atom> {
        match self {
            IPred::And(xs) => {
                let mut s = BTreeSet::new();
                for x in xs {
                    s.extend(x.support());
                }
                s
            }
            IPred::Neg(x) => x.support(),
            IPred::All(_, body) => body.support(),
            IPred::Elt(x, v) => {
                let mut s = x.support();
                if let Var::Free(a) = v {
                    s.insert(a.clone());
                }
                s
            }
        }
    }
}

impl Nominal for ISet {
    fn permute(&self, pi: &Permutation) -> ISet {
        match self {
            ISet::Atm(v) => ISet::Atm(permute_var(v, pi)),
            ISet::St(b, body) => ISet::St(b.clone(), Box::new(body.permute(pi))),
        }
    }

    fn support(&self) -> BTreeSet<Atom> {
        match self {
            ISet::Atm(Var::Free(a)) => BTreeSet::from([a.clone()]),
            ISet::Atm(Var::Bound(_)) => BTreeSet::new(),
            ISet::St(_, body) => body.support(),
        }
    }
}

fn permute_var(v: &Var, pi: &Permutation) -> Var {
    match v {
        Var::Free(a) => Var::Free(pi.apply(a)),
        Var::Bound(k) => Var::Bound(*k),
    }
}
