//! Seeded property suites over the algebraic laws: the substitution-action
//! equations, interpretation/rewriting agreement (confluence), the
//! termination measures, and stratification inference. The CLI `prop`
//! subcommand and the acceptance tests both run these.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::gen::{self, InternalGen};
use crate::internal::ISet;
use crate::measures::{
    atomic_formula, complexity_formula, complexity_term, measure_against, na_pad_formula,
    ternary_status_formula, TernaryStatus,
};
use crate::nominal::{fresh, Atom, Level, Nominal, Permutation, Var};
use crate::normalize::{
    embed_pred, formula_redexes, interpret_formula, normalize_formula, step_formula, Status,
    Strategy,
};
use crate::print::{render_formula, Mode};
use crate::rng::Rng;
use crate::sigma::{sigma_pred, sigma_set, tin};
use crate::stratify;
use crate::surface::{Formula, Syntax, Term};

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    /// Recorded and reported, but not counted against the suite verdict.
    pub informational: bool,
    pub first_failure: Option<String>,
}

impl CheckReport {
    fn new(name: &'static str) -> CheckReport {
        CheckReport {
            name,
            cases: 0,
            failures: 0,
            informational: false,
            first_failure: None,
        }
    }

    fn informational(name: &'static str) -> CheckReport {
        CheckReport {
            informational: true,
            ..CheckReport::new(name)
        }
    }

    fn tally(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                let mut d = detail();
                d.truncate(300);
                self.first_failure = Some(d);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.informational || c.failures == 0)
    }

    pub fn lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.failures == 0 { "PASS" } else { "FAIL" };
            let note = if c.informational {
                " (informational)"
            } else {
                ""
            };
            out.push_str(&format!(
                "{verdict}{note} {}::{} — {}/{} cases ok",
                self.suite,
                c.name,
                c.cases - c.failures,
                c.cases
            ));
            if let Some(d) = &c.first_failure {
                out.push_str(&format!("; first failure: {d}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "cases": c.cases,
                "failures": c.failures,
                "informational": c.informational,
                "first_failure": c.first_failure,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn run_suite(name: &str, cases: u64, max_size: u64, seed: u64) -> Option<SuiteReport> {
    match name {
        "sigma" => Some(sigma_suite(cases, max_size, seed)),
        "confluence" => Some(confluence_suite(cases, max_size, seed)),
        "termination" => Some(termination_suite(cases, max_size, seed)),
        "stratify" => Some(stratify_suite(cases, max_size, seed)),
        _ => None,
    }
}

fn avoid_all(sets: &[&dyn Nominal]) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    for s in sets {
        out.extend(s.support());
    }
    out
}

/// Rename `a` away from `value` if it occurs, so that `a # value` holds.
fn make_fresh_for<T: Nominal + Clone>(value: &T, a: &Atom, avoid: &BTreeSet<Atom>) -> T {
    if value.fresh_for(a) {
        return value.clone();
    }
    let mut av = avoid.clone();
    av.extend(value.support());
    av.insert(a.clone());
    let replacement = fresh(a.level(), &av);
    value.permute(&Permutation::swap(&replacement, a))
}

/// The substitution-action law suite, on random well-formed internal
/// values.
pub fn sigma_suite(cases: u64, max_size: u64, seed: u64) -> SuiteReport {
    let mut master = Rng::new(seed);
    let mut alpha = CheckReport::new("sigma_alpha");
    let mut gc = CheckReport::new("sigma_gc");
    let mut subst_lemma = CheckReport::new("sigma_sigma");
    let mut swap = CheckReport::new("sigma_swap");
    let mut assoc = CheckReport::new("sigma_assoc");
    let mut id = CheckReport::new("sigma_id");
    let mut ren = CheckReport::new("sigma_ren");
    let mut conc = CheckReport::new("sigma_concretion");
    let mut supp_bound = CheckReport::new("support_bound");
    let mut minlev_bound = CheckReport::new("minlev_bound");
    let mut tin_distrib = CheckReport::new("tin_distributes");
    let mut tin_eta = CheckReport::new("tin_eta");

    for _ in 0..cases {
        let case_seed = master.next_u64();
        let mut g = InternalGen::new(case_seed);
        let sub = (max_size / 2).max(2);

        let la = g.rng().below(3) as Level;
        let a = g.pool_atom(la);
        let z = g.pred(max_size);
        let x = g.set(la, sub);

        let lb = g.rng().below(3) as Level;
        let mut b = g.pool_atom(lb);
        while b == a {
            b = g.pool_atom(lb);
        }
        let y = g.set(lb, sub);

        let ctx = || format!("seed {case_seed}: Z={z:?} a={a:?} x={x:?} b={b:?} y={y:?}");

        // Z[a↦x] = ((a′ a)·Z)[a′↦x] for a′ # Z.
        {
            let avoid = avoid_all(&[&z, &x, &y]);
            let a1 = fresh(la, &avoid);
            let lhs = sigma_pred(&z, &a, &x).unwrap();
            let rhs = sigma_pred(&z.permute(&Permutation::swap(&a1, &a)), &a1, &x).unwrap();
            alpha.tally(lhs == rhs, ctx);
        }

        // a # Z implies Z[a↦x] = Z.
        {
            let af = fresh(la, &z.support());
            let lhs = sigma_pred(&z, &af, &x).unwrap();
            gc.tally(lhs == z, ctx);
        }

        // a # y implies Z[a↦x][b↦y] = Z[b↦y][a↦x[b↦y]].
        {
            let ya = make_fresh_for(&y, &a, &avoid_all(&[&z, &x]));
            let lhs = sigma_pred(&sigma_pred(&z, &a, &x).unwrap(), &b, &ya).unwrap();
            let rhs = sigma_pred(
                &sigma_pred(&z, &b, &ya).unwrap(),
                &a,
                &sigma_set(&x, &b, &ya).unwrap(),
            )
            .unwrap();
            subst_lemma.tally(lhs == rhs, ctx);
        }

        // a # y and b # x imply the two substitutions commute.
        {
            let ya = make_fresh_for(&y, &a, &avoid_all(&[&z, &x]));
            let xb = make_fresh_for(&x, &b, &avoid_all(&[&z, &ya]));
            let lhs = sigma_pred(&sigma_pred(&z, &a, &xb).unwrap(), &b, &ya).unwrap();
            let rhs = sigma_pred(&sigma_pred(&z, &b, &ya).unwrap(), &a, &xb).unwrap();
            swap.tally(lhs == rhs, ctx);
        }

        // a # y and b # Z imply Z[a↦x[b↦y]] = Z[a↦x][b↦y].
        {
            let ya = make_fresh_for(&y, &a, &avoid_all(&[&z, &x]));
            let zb = make_fresh_for(&z, &b, &avoid_all(&[&x, &ya]));
            let lhs = sigma_pred(&zb, &a, &sigma_set(&x, &b, &ya).unwrap()).unwrap();
            let rhs = sigma_pred(&sigma_pred(&zb, &a, &x).unwrap(), &b, &ya).unwrap();
            assoc.tally(lhs == rhs, ctx);
        }

        // Z[a↦atm a] = Z.
        {
            let lhs = sigma_pred(&z, &a, &ISet::atom(&a)).unwrap();
            id.tally(lhs == z, ctx);
        }

        // a′ # Z implies Z[a↦atm a′] = (a′ a)·Z.
        {
            let a1 = fresh(la, &z.support());
            let lhs = sigma_pred(&z, &a, &ISet::atom(&a1)).unwrap();
            let rhs = z.permute(&Permutation::swap(&a1, &a));
            ren.tally(lhs == rhs, ctx);
        }

        // c # z,x implies (z@c)[a↦x] = (z[a↦x])@c for a comprehension z.
        {
            let lz = g.rng().below(3) as Level;
            let binder = g.pool_atom(lz);
            let zc = ISet::st(&binder, g.pred(sub));
            let c = fresh(lz, &avoid_all(&[&zc, &x, &a]));
            let lhs = sigma_pred(&zc.concrete(&c).unwrap(), &a, &x).unwrap();
            let rhs = sigma_set(&zc, &a, &x).unwrap().concrete(&c).unwrap();
            conc.tally(lhs == rhs, ctx);
        }

        // supp(Z[a↦x]) ⊆ (supp(Z) ∖ {a}) ∪ supp(x).
        {
            let result = sigma_pred(&z, &a, &x).unwrap();
            let mut bound = z.support();
            bound.remove(&a);
            bound.extend(x.support());
            supp_bound.tally(result.support().is_subset(&bound), ctx);
        }

        // minlev(Z[a↦x]) ≥ min(minlev Z, level a, minlev x).
        {
            let result = sigma_pred(&z, &a, &x).unwrap();
            let floor = z.minlev().min(a.level()).min(x.minlev());
            minlev_bound.tally(result.minlev() >= floor, ctx);
        }

        // (y′ ∈ x′)[a↦u] = (y′[a↦u]) ∈ (x′[a↦u]).
        {
            let l = g.rng().below(2) as Level;
            let y2 = g.set(l, sub);
            let x2 = g.set(l + 1, sub);
            let lu = g.rng().below(3) as Level;
            let a2 = g.pool_atom(lu);
            let u = g.set(lu, sub);
            let lhs = sigma_pred(&tin(&y2, &x2).unwrap(), &a2, &u).unwrap();
            let rhs = tin(
                &sigma_set(&y2, &a2, &u).unwrap(),
                &sigma_set(&x2, &a2, &u).unwrap(),
            )
            .unwrap();
            tin_distrib.tally(lhs == rhs, ctx);
        }

        // c # y implies x ∈ {c | y ∈ c} = y ∈ x.
        {
            let k = g.rng().below(2) as Level + 1;
            let c = g.pool_atom(k);
            let x2 = g.set(k, sub);
            let y2 = make_fresh_for(&g.set(k - 1, sub), &c, &avoid_all(&[&x2]));
            let inner = tin(&y2, &ISet::atom(&c)).unwrap();
            let zc = ISet::st(&c, inner);
            let lhs = tin(&x2, &zc).unwrap();
            let rhs = tin(&y2, &x2).unwrap();
            tin_eta.tally(lhs == rhs, ctx);
        }
    }

    SuiteReport {
        suite: "sigma",
        checks: vec![
            alpha,
            gc,
            subst_lemma,
            swap,
            assoc,
            id,
            ren,
            conc,
            supp_bound,
            minlev_bound,
            tin_distrib,
            tin_eta,
        ],
    }
}

/// Interpretation, normal forms, and strategy agreement, in both leveled
/// and inferred modes.
pub fn confluence_suite(cases: u64, max_size: u64, seed: u64) -> SuiteReport {
    let mut checks = confluence_checks(cases, max_size, seed, Mode::Tst);
    checks.extend(confluence_checks(cases, max_size, seed ^ 0x9e37, Mode::Nf));
    SuiteReport {
        suite: "confluence",
        checks,
    }
}

pub fn confluence_checks(cases: u64, max_size: u64, seed: u64, mode: Mode) -> Vec<CheckReport> {
    let mut master = Rng::new(seed);
    let prefix = |tst: &'static str, nf: &'static str| match mode {
        Mode::Nf => nf,
        _ => tst,
    };
    let mut inference = CheckReport::new("nf_inference");
    let mut nf_sound =
        CheckReport::new(prefix("normal_form_soundness", "nf_normal_form_soundness"));
    let mut step_interp = CheckReport::new(prefix(
        "step_preserves_interpretation",
        "nf_step_preserves_interpretation",
    ));
    let mut terminate = CheckReport::new(prefix("strategies_terminate", "nf_strategies_terminate"));
    let mut agree = CheckReport::new(prefix(
        "interpretation_agreement",
        "nf_interpretation_agreement",
    ));
    let mut replay = CheckReport::new(prefix("trace_replay", "nf_trace_replay"));
    let mut alpha_agree =
        CheckReport::informational(prefix("alpha_agreement", "nf_alpha_agreement"));

    for _ in 0..cases {
        let case_seed = master.next_u64();
        let phi = match mode {
            Mode::Nf => {
                let unleveled = gen::formula(case_seed, max_size, Mode::Nf);
                let solution = match stratify::infer_formula(&unleveled) {
                    Ok(s) => s,
                    Err(v) => {
                        inference.tally(false, || format!("seed {case_seed}: {v:?}"));
                        continue;
                    }
                };
                inference.tally(true, String::new);
                let Syntax::Formula(f) =
                    stratify::apply_solution(&Syntax::Formula(unleveled), &solution)
                else {
                    unreachable!()
                };
                f
            }
            _ => gen::formula(case_seed, max_size, Mode::Tst),
        };
        let ctx = || format!("seed {case_seed}: {}", render_formula(&phi, Mode::Raw));

        let interp = match interpret_formula(&phi) {
            Ok(i) => i,
            Err(e) => {
                nf_sound.tally(false, || format!("seed {case_seed}: interpret failed: {e}"));
                continue;
            }
        };
        let big_nf = embed_pred(&interp);
        nf_sound.tally(formula_redexes(&big_nf).is_empty(), ctx);

        for p in formula_redexes(&phi).into_iter().take(4) {
            let next = step_formula(&phi, &p).unwrap();
            step_interp.tally(
                interpret_formula(&next)
                    .map(|i| i == interp)
                    .unwrap_or(false),
                ctx,
            );
        }

        let mut strategy_rng = Rng::new(case_seed ^ 0x5eed);
        let strategies = [
            Strategy::Outermost,
            Strategy::Innermost,
            Strategy::Random(strategy_rng.next_u64()),
            Strategy::Random(strategy_rng.next_u64()),
            Strategy::Random(strategy_rng.next_u64()),
        ];
        let mut results = Vec::new();
        for strategy in strategies {
            match normalize_formula(&phi, strategy, None) {
                Ok(trace) => {
                    terminate.tally(trace.status == Status::Normal, ctx);
                    replay.tally(trace.replays(), ctx);
                    let Syntax::Formula(result) = trace.result else {
                        unreachable!()
                    };
                    agree.tally(
                        interpret_formula(&result)
                            .map(|i| i == interp)
                            .unwrap_or(false),
                        ctx,
                    );
                    results.push(result);
                }
                Err(e) => {
                    terminate.tally(false, || format!("seed {case_seed}: {e}"));
                }
            }
        }
        let all_alpha_equal = results.windows(2).all(|w| w[0] == w[1])
            && results.first().is_none_or(|r| *r == big_nf);
        alpha_agree.tally(all_alpha_equal, ctx);
    }

    let mut checks = vec![nf_sound, step_interp, terminate, agree, replay, alpha_agree];
    if mode == Mode::Nf {
        checks.insert(0, inference);
    }
    checks
}

/// Padding, the two rewrite cases, and the lexicographic measure.
pub fn termination_suite(cases: u64, max_size: u64, seed: u64) -> SuiteReport {
    let mut master = Rng::new(seed);
    let mut padding = CheckReport::new("padding_makes_ternary");
    let mut erasure = CheckReport::new("padding_erases_back");
    let mut cor_cases = CheckReport::new("rewrite_case_split");
    let mut measure = CheckReport::new("measure_decreases");
    let mut bounds = CheckReport::new("complexity_lower_bounds");
    let mut subst_atom = CheckReport::new("substitution_keeps_complexity_for_atoms");
    let mut subst_comp = CheckReport::new("substitution_bound_for_comprehensions");

    for _ in 0..cases {
        let case_seed = master.next_u64();
        let phi = gen::formula(case_seed, max_size, Mode::Tst);
        let padded = na_pad_formula(&phi);
        let ctx = || format!("seed {case_seed}: {}", render_formula(&phi, Mode::Raw));

        padding.tally(
            ternary_status_formula(&padded).is_all_ternary() && stratify::check_formula_ok(&padded),
            ctx,
        );
        erasure.tally(strip_padding(&padded) == phi, ctx);

        bounds.tally(lower_bounds_hold(&phi) && lower_bounds_hold(&padded), ctx);

        // Reduce the padded formula outermost, watching the measure.
        let nf_complexity = match interpret_formula(&padded) {
            Ok(i) => complexity_formula(&embed_pred(&i)),
            Err(e) => {
                measure.tally(false, || format!("seed {case_seed}: {e}"));
                continue;
            }
        };
        let mut current = padded.clone();
        let mut ok_cases = true;
        let mut ok_measure = true;
        let mut last = match measure_against(&current, nf_complexity) {
            Ok(m) => m,
            Err(e) => {
                measure.tally(false, || format!("seed {case_seed}: {e}"));
                continue;
            }
        };
        loop {
            let redexes = formula_redexes(&current);
            let Some(p) = redexes.first() else { break };
            let next = step_formula(&current, p).unwrap();
            let (c0, c1) = (complexity_formula(&current), complexity_formula(&next));
            let (a0, a1) = (atomic_formula(&current), atomic_formula(&next));
            let increases = c1 > c0;
            let atomics_decrease = c1 == c0 && a1 < a0;
            if !(increases || atomics_decrease) {
                ok_cases = false;
            }
            match measure_against(&next, nf_complexity) {
                Ok(m) => {
                    if m >= last {
                        ok_measure = false;
                    }
                    last = m;
                }
                Err(_) => ok_measure = false,
            }
            current = next;
        }
        cor_cases.tally(ok_cases, ctx);
        measure.tally(ok_measure, ctx);

        // Substitution's effect on complexity. Substituting an atom never
        // changes it; substituting a comprehension raises it by at least
        // complexity(s) - 1 per occurrence, except that an occurrence as
        // the container of an atom member becomes a fresh atomic redex,
        // whose complexity clause skips three units.
        let mut crng = Rng::new(case_seed ^ 0xab1e);
        let support: Vec<Atom> = phi.support().into_iter().collect();
        if let Some(a) = support.iter().find(|a| a.level() >= 0) {
            let n = free_occurrences(&phi, a);
            let s = gen::term(crng.next_u64(), a.level(), 6);
            let after = phi.subst(a, &s).unwrap();
            if s.is_atom() {
                subst_atom.tally(complexity_formula(&after) == complexity_formula(&phi), ctx);
            } else {
                let m = atom_member_container_occurrences(&phi, a);
                let floor = (complexity_formula(&phi)
                    + n * (complexity_term(&s).saturating_sub(1)))
                .saturating_sub(3 * m);
                subst_comp.tally(complexity_formula(&after) >= floor, ctx);
            }
        }
    }

    SuiteReport {
        suite: "termination",
        checks: vec![
            padding, erasure, cor_cases, measure, bounds, subst_atom, subst_comp,
        ],
    }
}

/// Occurrences of `a` as the container of a membership whose member is an
/// atom; each becomes an atomic redex under substitution of a
/// comprehension.
fn atom_member_container_occurrences(f: &Formula, a: &Atom) -> u64 {
    fn in_formula(f: &Formula, a: &Atom) -> u64 {
        match f {
            Formula::Bot => 0,
            Formula::Neg(inner) => in_formula(inner, a),
            Formula::And(l, r) => in_formula(l, a) + in_formula(r, a),
            Formula::All(_, body) => in_formula(body, a),
            Formula::In(t, s) => {
                let here = u64::from(t.is_atom() && matches!(s, Term::Var(Var::Free(b)) if b == a));
                here + in_term(t, a) + in_term(s, a)
            }
        }
    }
    fn in_term(t: &Term, a: &Atom) -> u64 {
        match t {
            Term::Var(_) => 0,
            Term::Comp(_, body) => in_formula(body, a),
        }
    }
    in_formula(f, a)
}

fn free_occurrences(f: &Formula, a: &Atom) -> u64 {
    fn in_formula(f: &Formula, a: &Atom) -> u64 {
        match f {
            Formula::Bot => 0,
            Formula::Neg(inner) => in_formula(inner, a),
            Formula::And(l, r) => in_formula(l, a) + in_formula(r, a),
            Formula::All(_, body) => in_formula(body, a),
            Formula::In(t, s) => in_term(t, a) + in_term(s, a),
        }
    }
    fn in_term(t: &Term, a: &Atom) -> u64 {
        match t {
            Term::Var(Var::Free(b)) => u64::from(b == a),
            Term::Var(Var::Bound(_)) => 0,
            Term::Comp(_, body) => in_formula(body, a),
        }
    }
    in_formula(f, a)
}

fn lower_bounds_hold(f: &Formula) -> bool {
    fn formula_ok(f: &Formula) -> bool {
        if complexity_formula(f) < 3 {
            return false;
        }
        match f {
            Formula::Bot => true,
            Formula::Neg(inner) => formula_ok(inner),
            Formula::And(l, r) => formula_ok(l) && formula_ok(r),
            Formula::All(_, body) => formula_ok(body),
            Formula::In(t, s) => term_ok(t) && term_ok(s),
        }
    }
    fn term_ok(t: &Term) -> bool {
        let floor = match t {
            Term::Var(_) => 1,
            Term::Comp(_, _) => 4,
        };
        if complexity_term(t) < floor {
            return false;
        }
        match t {
            Term::Var(_) => true,
            Term::Comp(_, body) => formula_ok(body),
        }
    }
    formula_ok(f)
}

/// Undo `na_pad`: drop the padding conjunct from every comprehension that
/// would be non-ternary without it.
fn strip_padding(f: &Formula) -> Formula {
    match f {
        Formula::Bot => Formula::Bot,
        Formula::Neg(inner) => Formula::neg(strip_padding(inner)),
        Formula::And(l, r) => Formula::conj(strip_padding(l), strip_padding(r)),
        Formula::All(b, body) => Formula::All(b.clone(), Box::new(strip_padding(body))),
        Formula::In(t, s) => Formula::In(strip_padding_term(t), strip_padding_term(s)),
    }
}

fn strip_padding_term(t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::Var(v.clone()),
        Term::Comp(b, body) => {
            if let Formula::And(main, pad) = &**body {
                if is_padding_conjunct(pad) {
                    let stripped = strip_padding(main);
                    let candidate = Term::Comp(b.clone(), Box::new(stripped));
                    if !ternary_status_comp(&candidate) {
                        return candidate;
                    }
                }
            }
            Term::Comp(b.clone(), Box::new(strip_padding(body)))
        }
    }
}

fn ternary_status_comp(t: &Term) -> bool {
    matches!(
        crate::measures::ternary_status(&Syntax::Term(t.clone())),
        TernaryStatus::AllTernary
    )
}

/// The exact shape `¬∀c.¬(a ∈ c ∧ (a ∈ c ∧ a ∈ c))` with `a` the
/// enclosing comprehension's binder (index 1 under the ∀).
fn is_padding_conjunct(f: &Formula) -> bool {
    let Formula::Neg(all) = f else { return false };
    let Formula::All(_, neg_body) = &**all else {
        return false;
    };
    let Formula::Neg(conj) = &**neg_body else {
        return false;
    };
    let Formula::And(first, rest) = &**conj else {
        return false;
    };
    let Formula::And(second, third) = &**rest else {
        return false;
    };
    let hit = |g: &Formula| {
        matches!(
            g,
            Formula::In(Term::Var(Var::Bound(1)), Term::Var(Var::Bound(0)))
        )
    };
    hit(first) && hit(second) && hit(third)
}

/// Generator soundness, inference soundness, and shift invariance.
pub fn stratify_suite(cases: u64, max_size: u64, seed: u64) -> SuiteReport {
    let mut master = Rng::new(seed);
    let mut tst_sound = CheckReport::new("generated_tst_is_stratified");
    let mut nf_sound = CheckReport::new("generated_nf_is_stratifiable");
    let mut infer_sound = CheckReport::new("inference_sound_for_checker");
    let mut shift = CheckReport::new("shift_invariance");

    for _ in 0..cases {
        let case_seed = master.next_u64();
        let tst = gen::formula(case_seed, max_size, Mode::Tst);
        tst_sound.tally(stratify::check_formula_ok(&tst), || {
            format!("seed {case_seed}: {}", render_formula(&tst, Mode::Tst))
        });

        let unleveled = gen::formula(case_seed ^ 0xff, max_size, Mode::Nf);
        let ctx = || format!("seed {case_seed}: {}", render_formula(&unleveled, Mode::Nf));
        match stratify::infer_formula(&unleveled) {
            Ok(solution) => {
                nf_sound.tally(true, String::new);
                let annotated =
                    stratify::apply_solution(&Syntax::Formula(unleveled.clone()), &solution);
                infer_sound.tally(stratify::check(&annotated).is_empty(), ctx);

                let mut ok = true;
                for class in 0..solution.shift_classes.len() {
                    let shifted = solution.shifted(class, 3);
                    let re =
                        stratify::apply_solution(&Syntax::Formula(unleveled.clone()), &shifted);
                    if !stratify::check(&re).is_empty() {
                        ok = false;
                    }
                }
                shift.tally(ok, ctx);
            }
            Err(v) => {
                nf_sound.tally(false, || format!("seed {case_seed}: {v:?}"));
            }
        }
    }

    SuiteReport {
        suite: "stratify",
        checks: vec![tst_sound, nf_sound, infer_sound, shift],
    }
}
