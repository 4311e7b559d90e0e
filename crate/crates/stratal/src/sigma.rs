//! The substitution action on internal syntax.
//!
//! Substitution into `Elt(y, a)` when the substituted set is a
//! comprehension is not structural: the rule concretes the comprehension at
//! a fresh atom one level down and substitutes into *its* body, so the
//! recursion descends through levels rather than through the term. It is
//! well-founded because the level strictly drops there and levels are
//! bounded below by the minimum level of the operands; a debug assertion
//! checks both, and a depth cap backstops the whole recursion.

use crate::internal::{unbind_pred, FormError, IPred, ISet};
use crate::nominal::{fresh, Atom, Nominal, Var};

const DEPTH_BACKSTOP: u32 = 1 << 16;

/// `z[a ↦ x]` on internal predicates. Requires `level(x) = level(a)`.
pub fn sigma_pred(z: &IPred, a: &Atom, x: &ISet) -> Result<IPred, FormError> {
    check_levels(a, x)?;
    Ok(spred(z, a, x, 0))
}

/// `z[a ↦ x]` on internal sets. Requires `level(x) = level(a)`.
pub fn sigma_set(z: &ISet, a: &Atom, x: &ISet) -> Result<ISet, FormError> {
    check_levels(a, x)?;
    Ok(sset(z, a, x, 0))
}

/// The membership sugar `y ∈ x` for an arbitrary internal set on the
/// right: membership in an atom is primitive, membership in a
/// comprehension concretes at a fresh atom and substitutes.
/// Requires `level(x) = level(y) + 1`.
pub fn tin(y: &ISet, x: &ISet) -> Result<IPred, FormError> {
    let expected = y.level() + 1;
    let found = x.level();
    if found != expected {
        return Err(FormError::LevelMismatch { expected, found });
    }
    match x {
        ISet::Atm(Var::Free(a)) => IPred::elt(y.clone(), a),
        ISet::Atm(Var::Bound(k)) => Err(FormError::UnboundIndex { index: *k }),
        ISet::St(binder, body) => {
            let mut avoid = y.support();
            avoid.extend(x.support());
            let (b, opened) = unbind_pred(binder, body, &avoid);
            Ok(spred(&opened, &b, y, 0))
        }
    }
}

fn check_levels(a: &Atom, x: &ISet) -> Result<(), FormError> {
    let found = x.level();
    if found != a.level() {
        return Err(FormError::LevelMismatch {
            expected: a.level(),
            found,
        });
    }
    Ok(())
}

fn spred(z: &IPred, a: &Atom, x: &ISet, depth: u32) -> IPred {
    assert!(
        depth < DEPTH_BACKSTOP,
        "substitution action exceeded its termination backstop"
    );
    match z {
        // Members may collide after substitution; the constructor
        // re-canonicalizes the set.
        IPred::And(xs) => IPred::and(xs.iter().map(|m| spred(m, a, x, depth + 1))),
        IPred::Neg(m) => IPred::neg(spred(m, a, x, depth + 1)),
        IPred::All(binder, body) => {
            let mut avoid = x.support();
            avoid.insert(a.clone());
            let (b, opened) = unbind_pred(binder, body, &avoid);
            let done = spred(&opened, a, x, depth + 1);
            IPred::All(binder.clone(), Box::new(done.close_at(&b, 0)))
        }
        IPred::Elt(y, v) => {
            if matches!(v, Var::Free(b) if b == a) {
                match x {
                    ISet::Atm(n) => IPred::Elt(Box::new(sset(y, a, x, depth + 1)), n.clone()),
                    ISet::St(binder, body) => {
                        // Concrete x at a fresh atom one level down and
                        // substitute the substituted member into its body.
                        let mut avoid = x.support();
                        avoid.extend(y.support());
                        let a1 = fresh(binder.level, &avoid);
                        debug_assert!(
                            a1.level() < a.level(),
                            "substitution measure must drop a level here"
                        );
                        debug_assert!(
                            x.minlev() <= a1.level(),
                            "levels are bounded below by the minimum level"
                        );
                        let x_at_a1 = body.open_at(&a1, 0);
                        let y_new = sset(y, a, x, depth + 1);
                        spred(&x_at_a1, &a1, &y_new, depth + 1)
                    }
                }
            } else {
                IPred::Elt(Box::new(sset(y, a, x, depth + 1)), v.clone())
            }
        }
    }
}

fn sset(z: &ISet, a: &Atom, x: &ISet, depth: u32) -> ISet {
    assert!(
        depth < DEPTH_BACKSTOP,
        "substitution action exceeded its termination backstop"
    );
    match z {
        ISet::Atm(Var::Free(b)) if b == a => x.clone(),
        ISet::Atm(v) => ISet::Atm(v.clone()),
        ISet::St(binder, body) => {
            let mut avoid = x.support();
            avoid.insert(a.clone());
            let (c, opened) = unbind_pred(binder, body, &avoid);
            let done = spred(&opened, a, x, depth + 1);
            ISet::St(binder.clone(), Box::new(done.close_at(&c, 0)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nominal::{Atom, Level, Permutation};

    fn at(name: &str, level: Level) -> Atom {
        Atom::named(name, level)
    }

    #[test]
    fn garbage_collection_on_falsity() {
        let a = at("a", 1);
        let x = ISet::empty_set(1);
        assert_eq!(
            sigma_pred(&IPred::falsum(), &a, &x).unwrap(),
            IPred::falsum()
        );
        assert_eq!(sigma_pred(&IPred::verum(), &a, &x).unwrap(), IPred::verum());
    }

    #[test]
    fn membership_into_the_empty_set_collapses_to_falsity() {
        // (b:0 ∈ a:1)[a ↦ ∅¹]: concreting ∅¹ gives ⊥, substituting into ⊥
        // garbage-collects.
        let a = at("a", 1);
        let b = at("b", 0);
        let z = IPred::elt(ISet::atom(&b), &a).unwrap();
        let got = sigma_pred(&z, &a, &ISet::empty_set(1)).unwrap();
        assert_eq!(got, IPred::falsum());
    }

    #[test]
    fn membership_into_an_atom_retargets() {
        let a = at("a", 1);
        let n = at("n", 1);
        let b = at("b", 0);
        let z = IPred::elt(ISet::atom(&b), &a).unwrap();
        let got = sigma_pred(&z, &a, &ISet::atom(&n)).unwrap();
        assert_eq!(got, IPred::elt(ISet::atom(&b), &n).unwrap());
    }

    #[test]
    fn set_rules() {
        let a = at("a", 1);
        let b = at("b", 1);
        let x = ISet::full_set(1);

        assert_eq!(sigma_set(&ISet::atom(&a), &a, &x).unwrap(), x);
        assert_eq!(sigma_set(&ISet::atom(&b), &a, &x).unwrap(), ISet::atom(&b));

        // A comprehension binder distinct from the substituted atom
        // distributes inside.
        let c = at("c", 0);
        let z = ISet::st(&c, IPred::elt(ISet::atom(&c), &a).unwrap());
        let got = sigma_set(&z, &a, &x).unwrap();
        let expected = ISet::st(
            &c,
            sigma_pred(&IPred::elt(ISet::atom(&c), &a).unwrap(), &a, &x).unwrap(),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn level_mismatch_is_rejected() {
        let a = at("a", 2);
        let z = IPred::verum();
        let err = sigma_pred(&z, &a, &ISet::full_set(1)).unwrap_err();
        assert_eq!(
            err,
            FormError::LevelMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn tin_on_atoms_and_extreme_sets() {
        let a = at("a", 1);
        let y = ISet::atom(&at("y", 0));

        assert_eq!(
            tin(&y, &ISet::atom(&a)).unwrap(),
            IPred::elt(y.clone(), &a).unwrap()
        );
        assert_eq!(tin(&y, &ISet::empty_set(1)).unwrap(), IPred::falsum());
        assert_eq!(tin(&y, &ISet::full_set(1)).unwrap(), IPred::verum());

        assert_eq!(
            tin(&y, &ISet::empty_set(5)).unwrap_err(),
            FormError::LevelMismatch {
                expected: 1,
                found: 5
            }
        );
    }

    #[test]
    fn tin_into_comprehension_substitutes_the_body() {
        // x ∈ {a | X} = X[a ↦ x] when a # x.
        let a = at("a", 1);
        let p = at("p", 2);
        let body = IPred::elt(ISet::atom(&a), &p).unwrap();
        let comp = ISet::st(&a, body.clone());
        let x = ISet::full_set(1);
        assert_eq!(tin(&x, &comp).unwrap(), sigma_pred(&body, &a, &x).unwrap());
    }

    #[test]
    fn identity_law_spot_check() {
        let a = at("a", 1);
        let b = at("b", 0);
        let z = IPred::all(
            &at("q", 3),
            IPred::and([IPred::elt(ISet::atom(&b), &a).unwrap(), IPred::falsum()]),
        );
        assert_eq!(sigma_pred(&z, &a, &ISet::atom(&a)).unwrap(), z);
    }

    #[test]
    fn renaming_law_spot_check() {
        let a = at("a", 1);
        let a2 = at("a2", 1);
        let b = at("b", 0);
        let z = IPred::elt(ISet::atom(&b), &a).unwrap();
        assert!(z.fresh_for(&a2));
        let got = sigma_pred(&z, &a, &ISet::atom(&a2)).unwrap();
        assert_eq!(got, z.permute(&Permutation::swap(&a2, &a)));
    }
}
