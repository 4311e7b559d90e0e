//! Termination bookkeeping: complexity, atomic-redex count, ternary
//! classification, padding, and the lexicographic termination measure.
//!
//! Complexity is a size in which a membership of an atom in a
//! comprehension (an "atomic redex") is skipped; `atomic` counts exactly
//! those. Contracting an atomic redex keeps complexity and decrements the
//! atomic count; contracting any other redex strictly raises complexity,
//! provided every comprehension mentions its binder free at least three
//! times ("ternary"). Padding makes any formula ternary without changing
//! its meaning-relevant structure, and the pair
//! (complexity of the normal form − complexity, atomic) then strictly
//! lexicographically decreases along every rewrite.

use thiserror::Error;

use crate::nominal::{fresh, Nominal, Var};
use crate::normalize::{embed_pred, embed_set, interpret_formula, interpret_term, NormalizeError};
use crate::surface::{Formula, Position, Syntax, Term};

pub fn complexity(x: &Syntax) -> u64 {
    match x {
        Syntax::Formula(f) => complexity_formula(f),
        Syntax::Term(t) => complexity_term(t),
    }
}

pub fn complexity_formula(f: &Formula) -> u64 {
    match f {
        Formula::Bot => 3,
        Formula::Neg(inner) => 1 + complexity_formula(inner),
        Formula::And(l, r) => complexity_formula(l) + 1 + complexity_formula(r),
        Formula::All(_, body) => 1 + complexity_formula(body),
        // An atomic redex contributes only its body's complexity.
        Formula::In(t, Term::Comp(_, body)) if t.is_atom() => complexity_formula(body),
        Formula::In(t, s) => complexity_term(t) + 1 + complexity_term(s),
    }
}

pub fn complexity_term(t: &Term) -> u64 {
    match t {
        Term::Var(_) => 1,
        Term::Comp(_, body) => 1 + complexity_formula(body),
    }
}

pub fn atomic(x: &Syntax) -> u64 {
    match x {
        Syntax::Formula(f) => atomic_formula(f),
        Syntax::Term(t) => atomic_term(t),
    }
}

pub fn atomic_formula(f: &Formula) -> u64 {
    match f {
        Formula::Bot => 0,
        Formula::Neg(inner) => atomic_formula(inner),
        Formula::And(l, r) => atomic_formula(l) + atomic_formula(r),
        Formula::All(_, body) => atomic_formula(body),
        Formula::In(t, Term::Comp(_, body)) if t.is_atom() => atomic_formula(body) + 1,
        Formula::In(t, s) => atomic_term(t) + atomic_term(s),
    }
}

pub fn atomic_term(t: &Term) -> u64 {
    match t {
        Term::Var(_) => 0,
        Term::Comp(_, body) => atomic_formula(body),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TernaryStatus {
    AllTernary,
    /// Positions of comprehensions whose binder occurs free fewer than
    /// three times in the body.
    Offending(Vec<Position>),
}

impl TernaryStatus {
    pub fn is_all_ternary(&self) -> bool {
        matches!(self, TernaryStatus::AllTernary)
    }
}

/// Classify every comprehension by how often its binder occurs free in its
/// body; occurrences shadowed by an inner binder of the same name do not
/// count (they are different variables).
pub fn ternary_status(x: &Syntax) -> TernaryStatus {
    let mut offending = Vec::new();
    match x {
        Syntax::Formula(f) => scan_formula(f, &Position::root(), &mut offending),
        Syntax::Term(t) => scan_term(t, &Position::root(), &mut offending),
    }
    if offending.is_empty() {
        TernaryStatus::AllTernary
    } else {
        TernaryStatus::Offending(offending)
    }
}

pub fn ternary_status_formula(f: &Formula) -> TernaryStatus {
    ternary_status(&Syntax::Formula(f.clone()))
}

fn scan_formula(f: &Formula, pos: &Position, out: &mut Vec<Position>) {
    match f {
        Formula::Bot => {}
        Formula::Neg(inner) => scan_formula(inner, &pos.extended(0), out),
        Formula::And(l, r) => {
            scan_formula(l, &pos.extended(0), out);
            scan_formula(r, &pos.extended(1), out);
        }
        Formula::All(_, body) => scan_formula(body, &pos.extended(0), out),
        Formula::In(t, s) => {
            scan_term(t, &pos.extended(0), out);
            scan_term(s, &pos.extended(1), out);
        }
    }
}

fn scan_term(t: &Term, pos: &Position, out: &mut Vec<Position>) {
    match t {
        Term::Var(_) => {}
        Term::Comp(_, body) => {
            if binder_occurrences(body, 0) < 3 {
                out.push(pos.clone());
            }
            scan_formula(body, &pos.extended(0), out);
        }
    }
}

fn binder_occurrences(f: &Formula, depth: u32) -> u64 {
    match f {
        Formula::Bot => 0,
        Formula::Neg(inner) => binder_occurrences(inner, depth),
        Formula::And(l, r) => binder_occurrences(l, depth) + binder_occurrences(r, depth),
        Formula::All(_, body) => binder_occurrences(body, depth + 1),
        Formula::In(t, s) => binder_occurrences_term(t, depth) + binder_occurrences_term(s, depth),
    }
}

fn binder_occurrences_term(t: &Term, depth: u32) -> u64 {
    match t {
        Term::Var(Var::Bound(k)) => u64::from(*k == depth),
        Term::Var(Var::Free(_)) => 0,
        Term::Comp(_, body) => binder_occurrences(body, depth + 1),
    }
}

/// Pad every non-ternary comprehension `{a | φ}` to
/// `{a | φ ∧ ∃c.(a ∈ c ∧ a ∈ c ∧ a ∈ c)}` with `c` one level above `a`.
/// The result is ternary; erasing the padding conjuncts recovers the
/// input up to alpha, and stratified input stays stratified.
pub fn na_pad(x: &Syntax) -> Syntax {
    match x {
        Syntax::Formula(f) => Syntax::Formula(na_pad_formula(f)),
        Syntax::Term(t) => Syntax::Term(na_pad_term(t)),
    }
}

pub fn na_pad_formula(f: &Formula) -> Formula {
    match f {
        Formula::Bot => Formula::Bot,
        Formula::Neg(inner) => Formula::neg(na_pad_formula(inner)),
        Formula::And(l, r) => Formula::conj(na_pad_formula(l), na_pad_formula(r)),
        Formula::All(b, body) => Formula::All(b.clone(), Box::new(na_pad_formula(body))),
        Formula::In(t, s) => Formula::In(na_pad_term(t), na_pad_term(s)),
    }
}

pub fn na_pad_term(t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::Var(v.clone()),
        Term::Comp(binder, body) => {
            let body = na_pad_formula(body);
            if binder_occurrences(&body, 0) >= 3 {
                return Term::Comp(binder.clone(), Box::new(body));
            }
            let mut avoid = body.support();
            let a = fresh(binder.level, &avoid);
            avoid.insert(a.clone());
            let c = fresh(binder.level + 1, &avoid);
            let opened = body.open_at(&a, 0);
            let hit = || Formula::member(Term::var(&a), Term::var(&c));
            let mut padding =
                Formula::exists(&c, Formula::conj(hit(), Formula::conj(hit(), hit())));
            if let Formula::Neg(all) = &mut padding {
                if let Formula::All(b, _) = &mut **all {
                    b.hint = Some("c".into());
                }
            }
            let padded = Formula::conj(opened, padding);
            Term::Comp(binder.clone(), Box::new(padded.close_at(&a, 0)))
        }
    }
}

/// The lexicographic termination measure: how far the current complexity
/// still is below the normal form's, then the number of atomic redexes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TerminationMeasure {
    pub complexity_gap: u64,
    pub atomic: u64,
}

#[derive(Debug, Error)]
pub enum MeasureError {
    /// The current complexity exceeds the normal form's; rewrites of a
    /// ternary stratified source can never do this, so seeing it means an
    /// invariant is broken upstream.
    #[error(
        "measure underflow: complexity {current_complexity} exceeds the normal form's {normal_form_complexity}"
    )]
    Underflow {
        normal_form_complexity: u64,
        current_complexity: u64,
    },
    #[error("the source is not interpretable: {0}")]
    Source(#[from] NormalizeError),
}

/// Measure `current`, a reduct of the stratified all-ternary `source`.
pub fn termination_measure(
    current: &Formula,
    source: &Formula,
) -> Result<TerminationMeasure, MeasureError> {
    let bound = complexity_formula(&embed_pred(&interpret_formula(source)?));
    measure_against(current, bound)
}

pub fn termination_measure_term(
    current: &Term,
    source: &Term,
) -> Result<TerminationMeasure, MeasureError> {
    let bound = complexity_term(&embed_set(&interpret_term(source)?));
    let current_complexity = complexity_term(current);
    if current_complexity > bound {
        return Err(MeasureError::Underflow {
            normal_form_complexity: bound,
            current_complexity,
        });
    }
    Ok(TerminationMeasure {
        complexity_gap: bound - current_complexity,
        atomic: atomic_term(current),
    })
}

/// Measure against a precomputed normal-form complexity, so reduction
/// loops interpret the source once.
pub fn measure_against(
    current: &Formula,
    normal_form_complexity: u64,
) -> Result<TerminationMeasure, MeasureError> {
    let current_complexity = complexity_formula(current);
    if current_complexity > normal_form_complexity {
        return Err(MeasureError::Underflow {
            normal_form_complexity,
            current_complexity,
        });
    }
    Ok(TerminationMeasure {
        complexity_gap: normal_form_complexity - current_complexity,
        atomic: atomic_formula(current),
    })
}
