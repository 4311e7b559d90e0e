//! Atoms, permutations, support, and fresh-name generation: the binding
//! substrate shared by the surface and internal syntaxes.
//!
//! Variable symbols ("atoms") carry an integer level; for every level there
//! are unboundedly many of them. Syntax with binders is stored locally
//! nameless throughout this crate: bound occurrences are de Bruijn indices
//! counted innermost-first, free occurrences are [`Atom`]s, and each binder
//! records the level (and a cosmetic display hint) of the variable it binds.
//! Alpha-equivalence is therefore ordinary structural equality.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Sort index of an atom. Levels range over all integers.
pub type Level = i64;

/// Ids handed out by [`fresh`] start here; named atoms intern below it, so
/// the two spaces never collide.
const FRESH_ID_BASE: u64 = 1 << 32;

/// A level-tagged variable symbol.
///
/// Two atoms are equal iff their `(level, id)` pairs are equal; the display
/// name is for printing only and never affects equality or hashing.
#[derive(Clone)]
pub struct Atom {
    level: Level,
    id: u64,
    name: Option<Arc<str>>,
}

impl Atom {
    /// The atom with the given display name at the given level. The same
    /// name always maps to the same id, so `named("a", 2)` is one fixed
    /// atom for the whole process.
    pub fn named(name: &str, level: Level) -> Atom {
        Atom {
            level,
            id: intern(name),
            name: Some(Arc::from(name)),
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The same symbol re-tagged with a different level. Used when a level
    /// inference solution is applied to unleveled syntax.
    pub fn at_level(&self, level: Level) -> Atom {
        Atom {
            level,
            id: self.id,
            name: self.name.clone(),
        }
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.id == other.id
    }
}

impl Eq for Atom {}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    // Name participates so that canonical orderings read sensibly, but the
    // id tiebreak keeps this consistent with `Eq`: an id determines its name.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level, self.name.as_deref(), self.id).cmp(&(
            other.level,
            other.name.as_deref(),
            other.id,
        ))
    }
}

impl std::hash::Hash for Atom {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.level.hash(state);
        self.id.hash(state);
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{}:{}", n, self.level),
            None => write!(f, "g{}:{}", self.id - FRESH_ID_BASE, self.level),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "g{}", self.id - FRESH_ID_BASE),
        }
    }
}

fn interner() -> &'static Mutex<HashMap<String, u64>> {
    static INTERNER: OnceLock<Mutex<HashMap<String, u64>>> = OnceLock::new();
    INTERNER.get_or_init(|| Mutex::new(HashMap::new()))
}

fn intern(name: &str) -> u64 {
    let mut map = interner().lock().unwrap();
    let next = map.len() as u64;
    debug_assert!(next < FRESH_ID_BASE);
    *map.entry(name.to_owned()).or_insert(next)
}

fn fresh_counters() -> &'static Mutex<HashMap<Level, u64>> {
    static COUNTERS: OnceLock<Mutex<HashMap<Level, u64>>> = OnceLock::new();
    COUNTERS.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A fresh atom at `level`, distinct from everything in `avoid`.
///
/// Ids come from a monotone per-level counter (skipping any id present in
/// `avoid`), so concurrent callers always receive distinct atoms.
pub fn fresh(level: Level, avoid: &BTreeSet<Atom>) -> Atom {
    let mut counters = fresh_counters().lock().unwrap();
    let counter = counters.entry(level).or_insert(FRESH_ID_BASE);
    let mut id = *counter;
    while avoid.iter().any(|a| a.level == level && a.id == id) {
        id += 1;
    }
    *counter = id + 1;
    Atom {
        level,
        id,
        name: None,
    }
}

/// Union of the supports of several values; convenient for choosing fresh
/// atoms that must avoid all operands at once.
pub fn supports<'a, I>(items: I) -> BTreeSet<Atom>
where
    I: IntoIterator<Item = &'a dyn Nominal>,
{
    let mut out = BTreeSet::new();
    for item in items {
        out.extend(item.support());
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermutationError {
    #[error("permutation maps {from:?} to {to:?}, which crosses levels")]
    SortMismatch { from: Atom, to: Atom },
    #[error("mapping is not a bijection on its domain")]
    NotBijective,
}

/// A finite sort-respecting bijection on atoms, stored as a fixpoint-free
/// map. Atoms outside the map are fixed; the identity is the empty map.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Permutation {
    map: BTreeMap<Atom, Atom>,
}

impl Permutation {
    pub fn identity() -> Permutation {
        Permutation::default()
    }

    /// The swapping (a b). Swapping an atom with itself is the identity.
    ///
    /// Panics if the two atoms live at different levels: a swapping across
    /// sorts is not a permutation at all, and constructing one is a
    /// programming error rather than a runtime condition.
    pub fn swap(a: &Atom, b: &Atom) -> Permutation {
        assert_eq!(
            a.level, b.level,
            "swap {a:?} {b:?}: sort-respecting permutations cannot cross levels"
        );
        let mut map = BTreeMap::new();
        if a != b {
            map.insert(a.clone(), b.clone());
            map.insert(b.clone(), a.clone());
        }
        Permutation { map }
    }

    /// Build a permutation from explicit pairs, validating bijectivity and
    /// sort-respect. Fixpoints are dropped.
    pub fn from_pairs<I>(pairs: I) -> Result<Permutation, PermutationError>
    where
        I: IntoIterator<Item = (Atom, Atom)>,
    {
        let mut map = BTreeMap::new();
        for (from, to) in pairs {
            if from.level != to.level {
                return Err(PermutationError::SortMismatch { from, to });
            }
            if map.insert(from, to).is_some() {
                return Err(PermutationError::NotBijective);
            }
        }
        // A finite map extends to a bijection on all atoms (fixing the rest)
        // exactly when its image equals its domain.
        let domain: BTreeSet<&Atom> = map.keys().collect();
        let image: BTreeSet<&Atom> = map.values().collect();
        if domain != image {
            return Err(PermutationError::NotBijective);
        }
        map.retain(|from, to| from != to);
        Ok(Permutation { map })
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, a: &Atom) -> Atom {
        self.map.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    /// Composition: `self.compose(other)` applies `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut map = BTreeMap::new();
        for from in other.map.keys().chain(self.map.keys()) {
            let to = self.apply(&other.apply(from));
            if to != *from {
                map.insert(from.clone(), to);
            }
        }
        Permutation { map }
    }

    pub fn inverse(&self) -> Permutation {
        let map = self
            .map
            .iter()
            .map(|(from, to)| (to.clone(), from.clone()))
            .collect();
        Permutation { map }
    }

    /// Atoms moved by this permutation.
    pub fn moved(&self) -> impl Iterator<Item = &Atom> {
        self.map.keys()
    }
}

/// A variable occurrence: free (an atom) or bound (a de Bruijn index
/// counting enclosing binders innermost-first).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Free(Atom),
    Bound(u32),
}

/// What a binder records about the variable it binds: its level and a
/// display hint. The hint is cosmetic; equality and ordering use the level
/// alone, so alpha-equivalent syntax compares equal.
#[derive(Clone, Debug)]
pub struct Binder {
    pub level: Level,
    pub hint: Option<Arc<str>>,
}

impl Binder {
    pub fn from_atom(a: &Atom) -> Binder {
        Binder {
            level: a.level,
            hint: a.name.clone(),
        }
    }

    pub fn hint(&self) -> Option<&str> {
        self.hint.as_deref()
    }

    pub fn at_level(&self, level: Level) -> Binder {
        Binder {
            level,
            hint: self.hint.clone(),
        }
    }
}

impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
    }
}

impl Eq for Binder {}

impl PartialOrd for Binder {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Binder {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.level.cmp(&other.level)
    }
}

impl std::hash::Hash for Binder {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.level.hash(state);
    }
}

/// Values with a permutation action and a finite support (their free atoms).
pub trait Nominal {
    fn permute(&self, pi: &Permutation) -> Self
    where
        Self: Sized;

    fn support(&self) -> BTreeSet<Atom>;

    /// `a # self`: the atom is not free in this value.
    fn fresh_for(&self, a: &Atom) -> bool {
        !self.support().contains(a)
    }
}

impl Nominal for Atom {
    fn permute(&self, pi: &Permutation) -> Atom {
        pi.apply(self)
    }

    fn support(&self) -> BTreeSet<Atom> {
        BTreeSet::from([self.clone()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_identity_ignores_display_name() {
        let a = Atom::named("a", 1);
        let also_a = Atom::named("a", 1);
        assert_eq!(a, also_a);
        assert_ne!(Atom::named("a", 1), Atom::named("a", 2));
        assert_ne!(Atom::named("a", 1), Atom::named("b", 1));
    }

    #[test]
    fn fresh_is_globally_distinct_under_concurrency() {
        let handles: Vec<_> = (0..4)
            .map(|_| {
                std::thread::spawn(|| {
                    (0..500)
                        .map(|_| fresh(9, &BTreeSet::new()))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all = BTreeSet::new();
        let mut count = 0;
        for h in handles {
            for a in h.join().unwrap() {
                all.insert(a);
                count += 1;
            }
        }
        assert_eq!(all.len(), count);
    }

    #[test]
    fn fresh_avoids_and_levels() {
        let avoid = BTreeSet::new();
        let a = fresh(1, &avoid);
        assert_eq!(a.level(), 1);

        let b = fresh(1, &a.support());
        assert_ne!(a, b);
        assert_eq!(b.level(), 1);

        // Derived example: freshening at level 0 against the support of
        // {a:0 | a in b:1} must avoid nothing at level 0 (only b:1 is free),
        // yet stay distinct from b.
        let b1 = Atom::named("b", 1);
        let sup = BTreeSet::from([b1.clone()]);
        let c = fresh(0, &sup);
        assert_ne!(c, b1);
        assert_eq!(c.level(), 0);
    }

    #[test]
    fn fresh_skips_ids_in_avoid() {
        let first = fresh(7, &BTreeSet::new());
        let mut avoid = BTreeSet::new();
        // Force a skip over the next few counter values.
        for i in 1..4 {
            avoid.insert(Atom {
                level: 7,
                id: first.id() + i,
                name: None,
            });
        }
        let next = fresh(7, &avoid);
        assert!(!avoid.contains(&next));
        assert_ne!(next, first);
    }

    #[test]
    fn swap_and_compose() {
        let a = Atom::named("a", 0);
        let b = Atom::named("b", 0);
        let c = Atom::named("c", 0);
        let ab = Permutation::swap(&a, &b);
        assert_eq!(ab.apply(&a), b);
        assert_eq!(ab.apply(&b), a);
        assert_eq!(ab.apply(&c), c);

        assert!(Permutation::swap(&a, &a).is_identity());

        // (a b) ∘ (b c): apply (b c) first.
        let bc = Permutation::swap(&b, &c);
        let comp = ab.compose(&bc);
        assert_eq!(comp.apply(&b), c);
        assert_eq!(comp.apply(&c), a);
        assert_eq!(comp.apply(&a), b);

        assert!(ab.compose(&ab).is_identity());
        assert_eq!(comp.compose(&comp.inverse()), Permutation::identity());
    }

    #[test]
    fn from_pairs_validates() {
        let a = Atom::named("a", 0);
        let b = Atom::named("b", 0);
        let c = Atom::named("c", 1);

        let ok = Permutation::from_pairs([(a.clone(), b.clone()), (b.clone(), a.clone())]);
        assert_eq!(ok.unwrap(), Permutation::swap(&a, &b));

        let bad_sort = Permutation::from_pairs([(a.clone(), c.clone()), (c, a.clone())]);
        assert!(matches!(
            bad_sort,
            Err(PermutationError::SortMismatch { .. })
        ));

        let not_bij = Permutation::from_pairs([(a, b)]);
        assert_eq!(not_bij, Err(PermutationError::NotBijective));
    }
}
