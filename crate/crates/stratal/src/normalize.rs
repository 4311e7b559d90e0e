//! Interpretation into internal normal forms, the embedding back into
//! surface syntax, and the small-step rewrite engine.
//!
//! The single rewrite rule contracts `t ∈ {a | φ}` to `φ[a := t]`,
//! congruently in any position. Interpretation is a big-step normalizer:
//! it maps a stratified formula straight to its internal normal form,
//! whose embedding has no redexes. On stratified input every strategy
//! reaches a normal form with the same interpretation.

use thiserror::Error;

use crate::internal::{FormError, IPred, ISet};
use crate::nominal::Var;
use crate::rng::Rng;
use crate::sigma::tin;
use crate::stratify::{self, StratificationViolation};
use crate::surface::{unbind, Formula, Position, Syntax, Term};

#[derive(Debug, Error)]
pub enum NormalizeError {
    #[error("input must be stratified (or inferred) first: {violations:?}")]
    StratificationRequired {
        violations: Vec<StratificationViolation>,
    },
    #[error("no redex at position {position}")]
    NotARedex { position: Position },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Interpret a stratified formula as an internal predicate.
pub fn interpret_formula(f: &Formula) -> Result<IPred, NormalizeError> {
    let violations = stratify::check(&Syntax::Formula(f.clone()));
    if !violations.is_empty() {
        return Err(NormalizeError::StratificationRequired { violations });
    }
    Ok(interp_formula(f)?)
}

/// Interpret a stratified term as an internal set of the same level.
pub fn interpret_term(t: &Term) -> Result<ISet, NormalizeError> {
    let violations = stratify::check(&Syntax::Term(t.clone()));
    if !violations.is_empty() {
        return Err(NormalizeError::StratificationRequired { violations });
    }
    Ok(interp_term(t)?)
}

fn interp_formula(f: &Formula) -> Result<IPred, FormError> {
    match f {
        Formula::Bot => Ok(IPred::falsum()),
        Formula::Neg(inner) => Ok(IPred::neg(interp_formula(inner)?)),
        Formula::And(l, r) => Ok(IPred::and([interp_formula(l)?, interp_formula(r)?])),
        Formula::All(binder, body) => {
            let (a, opened) = unbind(binder, body, &Default::default());
            Ok(IPred::all(&a, interp_formula(&opened)?))
        }
        Formula::In(t, s) => tin(&interp_term(t)?, &interp_term(s)?),
    }
}

fn interp_term(t: &Term) -> Result<ISet, FormError> {
    match t {
        Term::Var(Var::Free(a)) => Ok(ISet::atom(a)),
        Term::Var(Var::Bound(k)) => Err(FormError::UnboundIndex { index: *k }),
        Term::Comp(binder, body) => {
            let (a, opened) = unbind(binder, body, &Default::default());
            Ok(ISet::st(&a, interp_formula(&opened)?))
        }
    }
}

/// Embed an internal predicate back into surface syntax. The embedding is
/// a normal form: internal membership only ever has an atom on the right.
///
/// Corner cases forced by the surface grammar: internal falsity ¬∧∅ maps
/// to ⊥ (checked before the negation clause, so embedding fixes ⊥);
/// internal truth ∧∅ maps to ¬⊥; a singleton conjunction duplicates its
/// conjunct so that re-interpreting recovers the singleton set.
pub fn embed_pred(x: &IPred) -> Formula {
    match x {
        IPred::Neg(inner) if **inner == IPred::verum() => Formula::Bot,
        IPred::And(xs) => match xs.as_slice() {
            [] => Formula::top(),
            [only] => {
                let f = embed_pred(only);
                Formula::conj(f.clone(), f)
            }
            many => {
                let mut it = many.iter().rev().map(embed_pred);
                let last = it.next().unwrap();
                it.fold(last, |acc, f| Formula::conj(f, acc))
            }
        },
        IPred::Neg(inner) => Formula::neg(embed_pred(inner)),
        IPred::All(b, body) => Formula::All(b.clone(), Box::new(embed_pred(body))),
        IPred::Elt(set, v) => Formula::In(embed_set(set), Term::Var(v.clone())),
    }
}

pub fn embed_set(x: &ISet) -> Term {
    match x {
        ISet::Atm(v) => Term::Var(v.clone()),
        ISet::St(b, body) => Term::Comp(b.clone(), Box::new(embed_pred(body))),
    }
}

/// Positions of all redexes `t ∈ {a | φ}`, leftmost-outermost first.
pub fn redex_positions(x: &Syntax) -> Vec<Position> {
    let mut out = Vec::new();
    match x {
        Syntax::Formula(f) => collect_formula(f, &Position::root(), &mut out),
        Syntax::Term(t) => collect_term(t, &Position::root(), &mut out),
    }
    out
}

pub fn formula_redexes(f: &Formula) -> Vec<Position> {
    redex_positions(&Syntax::Formula(f.clone()))
}

fn collect_formula(f: &Formula, pos: &Position, out: &mut Vec<Position>) {
    match f {
        Formula::Bot => {}
        Formula::Neg(inner) => collect_formula(inner, &pos.extended(0), out),
        Formula::And(l, r) => {
            collect_formula(l, &pos.extended(0), out);
            collect_formula(r, &pos.extended(1), out);
        }
        Formula::All(_, body) => collect_formula(body, &pos.extended(0), out),
        Formula::In(t, s) => {
            if matches!(s, Term::Comp(_, _)) {
                out.push(pos.clone());
            }
            collect_term(t, &pos.extended(0), out);
            collect_term(s, &pos.extended(1), out);
        }
    }
}

fn collect_term(t: &Term, pos: &Position, out: &mut Vec<Position>) {
    match t {
        Term::Var(_) => {}
        Term::Comp(_, body) => collect_formula(body, &pos.extended(0), out),
    }
}

/// Contract the redex at `p`, leaving all other structure unchanged.
pub fn step(x: &Syntax, p: &Position) -> Result<Syntax, NormalizeError> {
    match x {
        Syntax::Formula(f) => Ok(Syntax::Formula(step_in_formula(f, p.as_slice(), p)?)),
        Syntax::Term(t) => Ok(Syntax::Term(step_in_term(t, p.as_slice(), p)?)),
    }
}

pub fn step_formula(f: &Formula, p: &Position) -> Result<Formula, NormalizeError> {
    step_in_formula(f, p.as_slice(), p)
}

fn not_a_redex(p: &Position) -> NormalizeError {
    NormalizeError::NotARedex {
        position: p.clone(),
    }
}

fn step_in_formula(f: &Formula, path: &[u32], p: &Position) -> Result<Formula, NormalizeError> {
    let Some((&head, rest)) = path.split_first() else {
        // The redex itself: contract t ∈ {a | φ} to φ[a := t].
        let Formula::In(t, Term::Comp(_, body)) = f else {
            return Err(not_a_redex(p));
        };
        return Ok(body.instantiate_at(t, 0));
    };
    match (f, head) {
        (Formula::Neg(inner), 0) => Ok(Formula::neg(step_in_formula(inner, rest, p)?)),
        (Formula::And(l, r), 0) => Ok(Formula::conj(step_in_formula(l, rest, p)?, (**r).clone())),
        (Formula::And(l, r), 1) => Ok(Formula::conj((**l).clone(), step_in_formula(r, rest, p)?)),
        (Formula::All(b, body), 0) => Ok(Formula::All(
            b.clone(),
            Box::new(step_in_formula(body, rest, p)?),
        )),
        (Formula::In(t, s), 0) => Ok(Formula::In(step_in_term(t, rest, p)?, s.clone())),
        (Formula::In(t, s), 1) => Ok(Formula::In(t.clone(), step_in_term(s, rest, p)?)),
        _ => Err(not_a_redex(p)),
    }
}

fn step_in_term(t: &Term, path: &[u32], p: &Position) -> Result<Term, NormalizeError> {
    match (t, path.split_first()) {
        (Term::Comp(b, body), Some((0, rest))) => Ok(Term::Comp(
            b.clone(),
            Box::new(step_in_formula(body, rest, p)?),
        )),
        _ => Err(not_a_redex(p)),
    }
}

/// The subformula at a redex position (used to record traces).
fn formula_at(x: &Syntax, p: &Position) -> Option<Formula> {
    enum Node<'a> {
        F(&'a Formula),
        T(&'a Term),
    }
    let mut here = match x {
        Syntax::Formula(f) => Node::F(f),
        Syntax::Term(t) => Node::T(t),
    };
    for &i in p.as_slice() {
        here = match (here, i) {
            (Node::F(Formula::Neg(inner)), 0) => Node::F(inner),
            (Node::F(Formula::And(l, _)), 0) => Node::F(l),
            (Node::F(Formula::And(_, r)), 1) => Node::F(r),
            (Node::F(Formula::All(_, body)), 0) => Node::F(body),
            (Node::F(Formula::In(t, _)), 0) => Node::T(t),
            (Node::F(Formula::In(_, s)), 1) => Node::T(s),
            (Node::T(Term::Comp(_, body)), 0) => Node::F(body),
            _ => return None,
        };
    }
    match here {
        Node::F(f) => Some(f.clone()),
        Node::T(_) => None,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// Interpret and embed; no rewrite steps at all.
    BigStep,
    /// Contract the leftmost-outermost redex.
    Outermost,
    /// Contract the leftmost-innermost redex.
    Innermost,
    /// Contract a uniformly chosen redex, seeded for reproducibility.
    Random(u64),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Normal,
    FuelExhausted,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceStep {
    pub position: Position,
    pub redex: Formula,
    pub contractum: Formula,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteTrace {
    pub source: Syntax,
    pub steps: Vec<TraceStep>,
    pub result: Syntax,
    pub status: Status,
}

impl RewriteTrace {
    /// Replay the recorded steps from the source and confirm they land on
    /// the recorded result (with matching redexes and contracta).
    pub fn replays(&self) -> bool {
        let mut current = self.source.clone();
        for s in &self.steps {
            if formula_at(&current, &s.position) != Some(s.redex.clone()) {
                return false;
            }
            let Ok(next) = step(&current, &s.position) else {
                return false;
            };
            if formula_at(&next, &s.position) != Some(s.contractum.clone()) {
                return false;
            }
            current = next;
        }
        current == self.result
            && (self.status != Status::Normal || redex_positions(&self.result).is_empty())
    }
}

/// Rewrite to normal form under a strategy.
///
/// Without fuel the input must be stratified (termination is only
/// guaranteed there), and this is enforced; with fuel anything goes and
/// running out is reported in the trace status, not as an error.
pub fn normalize(
    x: &Syntax,
    strategy: Strategy,
    fuel: Option<u64>,
) -> Result<RewriteTrace, NormalizeError> {
    if let Strategy::BigStep = strategy {
        let result = match x {
            Syntax::Formula(f) => Syntax::Formula(embed_pred(&interpret_formula(f)?)),
            Syntax::Term(t) => Syntax::Term(embed_set(&interpret_term(t)?)),
        };
        return Ok(RewriteTrace {
            source: x.clone(),
            steps: Vec::new(),
            result,
            status: Status::Normal,
        });
    }

    if fuel.is_none() {
        let violations = stratify::check(x);
        if !violations.is_empty() {
            return Err(NormalizeError::StratificationRequired { violations });
        }
    }

    let mut rng = match strategy {
        Strategy::Random(seed) => Some(Rng::new(seed)),
        _ => None,
    };
    let mut current = x.clone();
    let mut steps = Vec::new();
    let status = loop {
        let positions = redex_positions(&current);
        if positions.is_empty() {
            break Status::Normal;
        }
        if fuel.is_some_and(|f| steps.len() as u64 >= f) {
            break Status::FuelExhausted;
        }
        let position = select(&positions, strategy, rng.as_mut());
        let redex = formula_at(&current, &position).expect("redex position is valid");
        let next = step(&current, &position)?;
        let contractum = formula_at(&next, &position).expect("contractum position is valid");
        steps.push(TraceStep {
            position,
            redex,
            contractum,
        });
        current = next;
    };
    Ok(RewriteTrace {
        source: x.clone(),
        steps,
        result: current,
        status,
    })
}

pub fn normalize_formula(
    f: &Formula,
    strategy: Strategy,
    fuel: Option<u64>,
) -> Result<RewriteTrace, NormalizeError> {
    normalize(&Syntax::Formula(f.clone()), strategy, fuel)
}

fn select(positions: &[Position], strategy: Strategy, rng: Option<&mut Rng>) -> Position {
    match strategy {
        Strategy::BigStep => unreachable!("big-step never selects redexes"),
        Strategy::Outermost => positions[0].clone(),
        Strategy::Innermost => positions
            .iter()
            .find(|p| !positions.iter().any(|q| p.is_proper_prefix_of(q)))
            .expect("a deepest redex always exists")
            .clone(),
        Strategy::Random(_) => {
            let rng = rng.expect("random strategy carries a generator");
            positions[rng.below(positions.len() as u64) as usize].clone()
        }
    }
}
