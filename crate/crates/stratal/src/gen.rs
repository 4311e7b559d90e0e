//! Seeded random generators: stratified surface formulae (levels chosen so
//! stratification holds by construction), stratifiable unleveled formulae
//! (unique names, levels erased), and well-formed internal values. These
//! fuel every property suite, so everything here is deterministic per
//! seed.

use std::collections::BTreeMap;

use crate::internal::{IPred, ISet};
use crate::nominal::{Atom, Level};
use crate::print::Mode;
use crate::rng::Rng;
use crate::surface::{Formula, Term};

/// A stratified (`Tst`) or stratifiable (`Nf`) formula of size at most
/// `max_size`.
pub fn formula(seed: u64, max_size: u64, mode: Mode) -> Formula {
    let mut g = SurfaceGen::new(seed);
    let f = g.formula(max_size.max(1));
    match mode {
        Mode::Nf => erase_levels(&f),
        _ => f,
    }
}

/// A stratified term of the given level and size at most `max_size`.
pub fn term(seed: u64, level: Level, max_size: u64) -> Term {
    SurfaceGen::new(seed).term(level, max_size.max(1))
}

/// Strip every level tag (atoms and binders alike). Generated atoms have
/// unique names, so the original leveling still witnesses stratifiability.
pub fn erase_levels(f: &Formula) -> Formula {
    match f {
        Formula::Bot => Formula::Bot,
        Formula::Neg(inner) => Formula::neg(erase_levels(inner)),
        Formula::And(l, r) => Formula::conj(erase_levels(l), erase_levels(r)),
        Formula::All(b, body) => Formula::All(b.at_level(0), Box::new(erase_levels(body))),
        Formula::In(t, s) => Formula::In(erase_levels_term(t), erase_levels_term(s)),
    }
}

pub fn erase_levels_term(t: &Term) -> Term {
    match t {
        Term::Var(crate::nominal::Var::Free(a)) => Term::var(&a.at_level(0)),
        Term::Var(v) => Term::Var(v.clone()),
        Term::Comp(b, body) => Term::Comp(b.at_level(0), Box::new(erase_levels(body))),
    }
}

struct SurfaceGen {
    rng: Rng,
    counter: u64,
    free: BTreeMap<Level, Vec<Atom>>,
    scope: Vec<Atom>,
}

impl SurfaceGen {
    fn new(seed: u64) -> SurfaceGen {
        SurfaceGen {
            rng: Rng::new(seed),
            counter: 0,
            free: BTreeMap::new(),
            scope: Vec::new(),
        }
    }

    fn new_atom(&mut self, level: Level) -> Atom {
        let a = Atom::named(&format!("v{}", self.counter), level);
        self.counter += 1;
        a
    }

    /// An atom at `level`: usually one already in scope or in the free
    /// pool (so supports overlap), otherwise a new one.
    fn atom_at(&mut self, level: Level) -> Atom {
        let mut candidates: Vec<Atom> = self
            .scope
            .iter()
            .filter(|a| a.level() == level)
            .cloned()
            .collect();
        candidates.extend(self.free.get(&level).into_iter().flatten().cloned());
        if !candidates.is_empty() && self.rng.chance(7, 10) {
            return self.rng.pick(&candidates).clone();
        }
        let a = self.new_atom(level);
        self.free.entry(level).or_default().push(a.clone());
        a
    }

    fn formula(&mut self, budget: u64) -> Formula {
        // (weight, minimum size)
        const BOT: (u64, u64) = (1, 1);
        const NEG: (u64, u64) = (2, 2);
        const AND: (u64, u64) = (2, 3);
        const ALL: (u64, u64) = (2, 2);
        const IN: (u64, u64) = (6, 3);
        let choices = [BOT, NEG, AND, ALL, IN];
        let total: u64 = choices
            .iter()
            .filter(|(_, min)| *min <= budget)
            .map(|(w, _)| w)
            .sum();
        let mut roll = self.rng.below(total);
        let mut chosen = 0;
        for (i, (w, min)) in choices.iter().enumerate() {
            if *min > budget {
                continue;
            }
            if roll < *w {
                chosen = i;
                break;
            }
            roll -= w;
        }
        match chosen {
            0 => Formula::Bot,
            1 => Formula::neg(self.formula(budget - 1)),
            2 => {
                let left = 1 + self.rng.below(budget - 2);
                let l = self.formula(left);
                let r = self.formula(budget - 1 - left);
                Formula::conj(l, r)
            }
            3 => {
                let level = self.rng.below(4) as Level;
                let a = self.new_atom(level);
                self.scope.push(a.clone());
                let body = self.formula(budget - 1);
                self.scope.pop();
                Formula::forall(&a, body)
            }
            _ => {
                let level = self.rng.below(3) as Level;
                let left = 1 + self.rng.below(budget - 2);
                let t = self.term(level, left);
                let s = self.term(level + 1, budget - 1 - left);
                Formula::In(t, s)
            }
        }
    }

    fn term(&mut self, level: Level, budget: u64) -> Term {
        if budget >= 2 && self.rng.chance(1, 2) {
            let a = self.new_atom(level - 1);
            self.scope.push(a.clone());
            let body = self.formula(budget - 1);
            self.scope.pop();
            Term::comp(&a, body)
        } else {
            Term::var(&self.atom_at(level))
        }
    }
}

/// A well-formed internal predicate of at most `max_size` constructor
/// nodes, drawing atoms from a small per-level pool so that support
/// overlaps and shadowing arise.
pub fn internal_pred(seed: u64, max_size: u64) -> IPred {
    InternalGen::new(seed).pred(max_size.max(1))
}

/// A well-formed internal set at `level` of at most `max_size` nodes.
pub fn internal_set(seed: u64, level: Level, max_size: u64) -> ISet {
    InternalGen::new(seed).set(level, max_size.max(1))
}

pub struct InternalGen {
    rng: Rng,
}

impl InternalGen {
    pub fn new(seed: u64) -> InternalGen {
        InternalGen {
            rng: Rng::new(seed),
        }
    }

    /// One of four fixed atom names per level, so generated values share
    /// atoms freely.
    pub fn pool_atom(&mut self, level: Level) -> Atom {
        let base = *self.rng.pick(&["u", "v", "w", "z"]);
        let tag = if level < 0 {
            format!("m{}", -level)
        } else {
            level.to_string()
        };
        Atom::named(&format!("{base}{tag}"), level)
    }

    pub fn pred(&mut self, budget: u64) -> IPred {
        const AND: (u64, u64) = (2, 1);
        const NEG: (u64, u64) = (2, 2);
        const ALL: (u64, u64) = (2, 2);
        const ELT: (u64, u64) = (5, 3);
        let choices = [AND, NEG, ALL, ELT];
        let total: u64 = choices
            .iter()
            .filter(|(_, min)| *min <= budget)
            .map(|(w, _)| w)
            .sum();
        let mut roll = self.rng.below(total);
        let mut chosen = 0;
        for (i, (w, min)) in choices.iter().enumerate() {
            if *min > budget {
                continue;
            }
            if roll < *w {
                chosen = i;
                break;
            }
            roll -= w;
        }
        match chosen {
            0 => {
                let max_members = (budget - 1).min(3);
                let n = self.rng.below(max_members + 1);
                let mut members = Vec::new();
                let mut left = budget - 1;
                for i in 0..n {
                    let rest = n - i - 1;
                    let share = 1 + self.rng.below(left.saturating_sub(rest).max(1));
                    members.push(self.pred(share));
                    left = left.saturating_sub(share);
                    if left < rest {
                        break;
                    }
                }
                IPred::and(members)
            }
            1 => IPred::neg(self.pred(budget - 1)),
            2 => {
                let level = self.rng.below(4) as Level;
                let a = self.pool_atom(level);
                IPred::all(&a, self.pred(budget - 1))
            }
            _ => {
                let level = self.rng.below(3) as Level;
                let member = self.set(level, budget - 2);
                let target = self.pool_atom(level + 1);
                IPred::elt(member, &target).expect("levels are aligned by construction")
            }
        }
    }

    pub fn set(&mut self, level: Level, budget: u64) -> ISet {
        if budget >= 2 && self.rng.chance(1, 2) {
            let a = self.pool_atom(level - 1);
            ISet::st(&a, self.pred(budget - 1))
        } else {
            ISet::Atm(crate::nominal::Var::Free(self.pool_atom(level)))
        }
    }

    pub fn rng(&mut self) -> &mut Rng {
        &mut self.rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stratify;
    use crate::surface::Syntax;

    #[test]
    fn only_falsity_fits_in_size_one() {
        for seed in 0..20 {
            assert_eq!(formula(seed, 1, Mode::Tst), Formula::Bot);
        }
    }

    #[test]
    fn generated_tst_formulas_are_stratified_and_bounded() {
        for seed in 0..200 {
            let f = formula(seed, 20, Mode::Tst);
            assert!(f.size() <= 20, "size bound broken for seed {seed}");
            assert!(
                stratify::check(&Syntax::Formula(f.clone())).is_empty(),
                "seed {seed} generated an unstratified formula: {f:?}"
            );
        }
    }

    #[test]
    fn generated_nf_formulas_are_stratifiable() {
        for seed in 0..200 {
            let f = formula(seed, 20, Mode::Nf);
            assert!(
                stratify::infer_formula(&f).is_ok(),
                "seed {seed} generated an unstratifiable formula: {f:?}"
            );
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        assert_eq!(formula(99, 25, Mode::Tst), formula(99, 25, Mode::Tst));
        assert_ne!(formula(1, 25, Mode::Tst), formula(2, 25, Mode::Tst));
    }

    #[test]
    fn internal_values_validate_and_stay_bounded() {
        for seed in 0..200 {
            let x = internal_pred(seed, 15);
            assert!(x.node_count() <= 15, "node bound broken for seed {seed}");
            assert_eq!(x.validate(), Ok(()), "seed {seed} built a broken value");
        }
        for seed in 0..100 {
            let x = internal_set(seed, 1, 12);
            assert_eq!(x.level(), 1);
            assert_eq!(x.validate(), Ok(()));
        }
    }
}
