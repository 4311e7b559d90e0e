//! Acceptance suite: each test exercises one headline property at full
//! case counts and prints a PASS/FAIL line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeMap;

use stratal::gen;
use stratal::measures::{atomic_formula, complexity_formula, measure_against, na_pad_formula};
use stratal::nominal::{Atom, Level, Nominal, Var};
use stratal::normalize::{
    embed_pred, formula_redexes, interpret_formula, interpret_term, normalize_formula,
    step_formula, Status, Strategy,
};
use stratal::print::{render_formula, Mode};
use stratal::props;
use stratal::rng::Rng;
use stratal::sigma::sigma_pred;
use stratal::stratify::{self, StratificationViolation};
use stratal::surface::{Formula, Position, Syntax, Term};

const SEED: u64 = 0xacce9;

fn pass(n: u32, what: &str) {
    println!("ACCEPTANCE criterion {n}: PASS — {what}");
}

fn fail(n: u32, what: &str) {
    println!("ACCEPTANCE criterion {n}: FAIL — {what}");
}

/// Criterion 1: the substitution-action law suite holds exactly on ≥500
/// random well-formed internal values of size ≤ 15.
#[test]
fn criterion_1_sigma_laws() {
    let report = props::sigma_suite(500, 15, SEED);
    let laws = [
        "sigma_alpha",
        "sigma_gc",
        "sigma_sigma",
        "sigma_swap",
        "sigma_assoc",
        "sigma_id",
        "sigma_ren",
        "sigma_concretion",
    ];
    for law in laws {
        let check = report
            .checks
            .iter()
            .find(|c| c.name == law)
            .unwrap_or_else(|| panic!("law {law} missing from the suite"));
        assert!(check.cases >= 500, "{law} ran only {} cases", check.cases);
        assert_eq!(
            check.failures, 0,
            "{law} failed {} of {} cases: {:?}",
            check.failures, check.cases, check.first_failure
        );
    }
    assert!(report.passed(), "{}", report.lines());
    pass(
        1,
        "substitution-action laws, 500 cases each, exact equality",
    );
}

/// Criterion 2: interpretation commutes with substitution, and membership
/// in a comprehension interprets to substitution into the body; ≥500
/// random stratified instances of size ≤ 20 each.
#[test]
fn criterion_2_interpretation_correctness() {
    let mut master = Rng::new(SEED ^ 2);
    let mut commute_cases = 0u64;
    let mut seed_src = 0u64;
    while commute_cases < 500 {
        seed_src += 1;
        let case_seed = master.next_u64() ^ seed_src;
        let phi = gen::formula(case_seed, 20, Mode::Tst);
        let support: Vec<Atom> = phi.support().into_iter().collect();
        let Some(b) = support.first() else { continue };
        let t = gen::term(case_seed ^ 0x7e57, b.level(), 8);

        let lhs = sigma_pred(
            &interpret_formula(&phi).unwrap(),
            b,
            &interpret_term(&t).unwrap(),
        )
        .unwrap();
        let rhs = interpret_formula(&phi.subst(b, &t).unwrap()).unwrap();
        assert_eq!(
            lhs,
            rhs,
            "substitution/interpretation commutation failed for seed {case_seed}: {}",
            render_formula(&phi, Mode::Tst)
        );
        commute_cases += 1;
    }

    for i in 0..500u64 {
        let case_seed = SEED ^ (i << 13);
        let level = (i % 3) as Level;
        let a = Atom::named("acc", level);
        let body = gen::formula(case_seed, 16, Mode::Tst);
        let s = gen::term(case_seed ^ 0xbeef, level, 6);
        let comp = Term::comp(&a, body.clone());
        let membership = Formula::member(s.clone(), comp);

        let via_interp = interpret_formula(&membership).unwrap();
        let via_subst = interpret_formula(&body.subst(&a, &s).unwrap()).unwrap();
        let via_sigma = sigma_pred(
            &interpret_formula(&body).unwrap(),
            &a,
            &interpret_term(&s).unwrap(),
        )
        .unwrap();
        assert_eq!(via_interp, via_subst, "seed {case_seed}");
        assert_eq!(via_interp, via_sigma, "seed {case_seed}");
    }
    pass(
        2,
        "interpretation commutes with substitution, 500+500 instances",
    );
}

/// Criterion 3: the embedded interpretation has no redexes, on 100% of
/// ≥500 random stratified formulae.
#[test]
fn criterion_3_normal_form_soundness() {
    for i in 0..500u64 {
        let phi = gen::formula(SEED ^ (i * 3 + 1), 20, Mode::Tst);
        let nf = embed_pred(&interpret_formula(&phi).unwrap());
        assert!(
            formula_redexes(&nf).is_empty(),
            "embedded interpretation has a redex: {}",
            render_formula(&nf, Mode::Tst)
        );
    }
    pass(3, "embed(interpret(φ)) is redex-free, 500 formulas");
}

fn confluence_run(n: u32, mode: Mode, what: &str) {
    let mut alpha_mismatches = 0u64;
    let mut ran = 0u64;
    let mut seed_src = SEED ^ u64::from(n);
    while ran < 300 {
        seed_src = seed_src.wrapping_mul(6364136223846793005).wrapping_add(1);
        let phi = match mode {
            Mode::Nf => {
                let unleveled = gen::formula(seed_src, 25, Mode::Nf);
                let Ok(solution) = stratify::infer_formula(&unleveled) else {
                    panic!("generated unleveled formula must be stratifiable");
                };
                let Syntax::Formula(f) =
                    stratify::apply_solution(&Syntax::Formula(unleveled), &solution)
                else {
                    unreachable!()
                };
                f
            }
            _ => gen::formula(seed_src, 25, Mode::Tst),
        };
        ran += 1;

        let interp = interpret_formula(&phi).unwrap();
        let big_nf = embed_pred(&interp);
        let mut rng = Rng::new(seed_src ^ 0xabcd);
        let strategies = [
            Strategy::Outermost,
            Strategy::Innermost,
            Strategy::Random(rng.next_u64()),
            Strategy::Random(rng.next_u64()),
            Strategy::Random(rng.next_u64()),
        ];
        let mut results = Vec::new();
        for strategy in strategies {
            let trace = normalize_formula(&phi, strategy, None)
                .unwrap_or_else(|e| panic!("normalization failed under {strategy:?}: {e}"));
            assert_eq!(
                trace.status,
                Status::Normal,
                "strategy {strategy:?} did not reach a normal form"
            );
            let Syntax::Formula(result) = trace.result else {
                unreachable!()
            };
            assert!(formula_redexes(&result).is_empty());
            assert_eq!(
                interpret_formula(&result).unwrap(),
                interp,
                "strategy {strategy:?} changed the interpretation of {}",
                render_formula(&phi, Mode::Raw)
            );
            results.push(result);
        }
        let agree = results.windows(2).all(|w| w[0] == w[1]) && results.first() == Some(&big_nf);
        if !agree {
            alpha_mismatches += 1;
        }
    }
    if alpha_mismatches > 0 {
        println!(
            "  note: {alpha_mismatches}/300 cases had alpha-inequal normal forms \
             (same interpretation); conjunction order is canonical in the \
             interpretation, positional in rewriting"
        );
    }
    pass(n, what);
}

/// Criterion 4: outermost, innermost, and three random strategies all
/// terminate without fuel on 300 random stratified formulae of size ≤ 25,
/// with the interpretation preserved; alpha agreement is recorded.
#[test]
fn criterion_4_confluence_leveled() {
    confluence_run(
        4,
        Mode::Tst,
        "five strategies agree on 300 leveled formulas",
    );
}

/// Criterion 5: the same, starting from unleveled formulae via inference.
#[test]
fn criterion_5_confluence_inferred() {
    confluence_run(
        5,
        Mode::Nf,
        "five strategies agree on 300 inferred formulas",
    );
}

/// Criterion 6: along every outermost reduction of a padded formula,
/// exactly one of the two rewrite cases holds, and the lexicographic
/// measure strictly decreases without underflow.
#[test]
fn criterion_6_termination_measure() {
    for i in 0..300u64 {
        let phi = gen::formula(SEED ^ (i * 7 + 5), 20, Mode::Tst);
        let padded = na_pad_formula(&phi);
        let nf_complexity = complexity_formula(&embed_pred(&interpret_formula(&padded).unwrap()));
        let mut current = padded.clone();
        let mut last = measure_against(&current, nf_complexity).unwrap();
        loop {
            let redexes = formula_redexes(&current);
            let Some(p) = redexes.first() else { break };
            let next = step_formula(&current, p).unwrap();
            let (c0, c1) = (complexity_formula(&current), complexity_formula(&next));
            let (a0, a1) = (atomic_formula(&current), atomic_formula(&next));
            let complexity_increases = c1 > c0;
            let atomics_decrease = c1 == c0 && a1 < a0;
            assert!(
                complexity_increases ^ atomics_decrease,
                "exactly one rewrite case must hold: {} -> {}",
                render_formula(&current, Mode::Raw),
                render_formula(&next, Mode::Raw)
            );
            let m = measure_against(&next, nf_complexity)
                .expect("measure must not underflow along a reduction");
            assert!(
                m < last,
                "measure must strictly decrease: {m:?} !< {last:?}"
            );
            last = m;
            current = next;
        }
    }
    pass(
        6,
        "termination measure strictly decreases along 300 padded reductions",
    );
}

/// Criterion 7: measure identities on all generated formulas. The
/// lower-bound half holds; the size identity is asserted exactly as
/// documented and fails, because the documented identity is arithmetically
/// inconsistent with the documented clauses themselves: `false` has size 1
/// but complexity 3 and no atomic redexes, and an atomic redex `b in
/// {a|φ}` adds 3 to size but only 2 to complexity + 2·atomic. The
/// derivable relation is size = complexity + 3·atomic − 2·(number of
/// `false` nodes), which the unit suite checks.
#[test]
fn criterion_7_measure_identities() {
    let mut bounds_ok = true;
    for i in 0..500u64 {
        let phi = gen::formula(SEED ^ (i * 11 + 3), 20, Mode::Tst);
        bounds_ok &= complexity_formula(&phi) >= 3;
        bounds_ok &= subterm_bounds_hold(&phi);
    }
    assert_eq!(complexity_formula(&Formula::Bot), 3);
    assert!(bounds_ok, "complexity lower bounds must hold");

    let counterexample = Formula::Bot;
    let (size, complexity, atomic) = (
        counterexample.size(),
        complexity_formula(&counterexample),
        atomic_formula(&counterexample),
    );
    let identity_holds_everywhere = (0..500u64).all(|i| {
        let phi = gen::formula(SEED ^ (i * 11 + 3), 20, Mode::Tst);
        phi.size() == complexity_formula(&phi) + 2 * atomic_formula(&phi)
    });
    if !identity_holds_everywhere || size != complexity + 2 * atomic {
        fail(
            7,
            "size = complexity + 2*atomic (lower bounds PASS; the stated identity \
             is inconsistent with the stated clauses — minimal counterexample \
             `false`: size 1, complexity 3, atomic 0)",
        );
    }
    assert_eq!(
        size,
        complexity + 2 * atomic,
        "the documented size identity does not hold for the documented clauses; \
         minimal counterexample `false`: size 1 vs complexity 3 + 2·0 \
         (each `false` node shifts the balance by -2 and each atomic redex by +1; \
         size = complexity + 3·atomic - 2·#false is the relation the clauses \
         actually induce)"
    );
    assert!(identity_holds_everywhere);
    pass(7, "measure identities");
}

fn subterm_bounds_hold(f: &Formula) -> bool {
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
        if stratal::measures::complexity_term(t) < floor {
            return false;
        }
        match t {
            Term::Var(_) => true,
            Term::Comp(_, body) => formula_ok(body),
        }
    }
    formula_ok(f)
}

/// Criterion 8: the union-find inference agrees with a brute-force window
/// search over level assignments on unleveled formulae of size ≤ 10.
#[test]
fn criterion_8_oracle_agreement() {
    let mut agreements = 0u64;
    let mut unstratifiable_seen = 0u64;
    for i in 0..500u64 {
        let f = collapse_names(&gen::formula(SEED ^ (i * 13 + 7), 10, Mode::Nf), i % 3 + 1);
        let x = Syntax::Formula(f.clone());
        let inferred = stratify::infer(&x).is_ok();
        let oracle = oracle_stratifiable(&x);
        assert_eq!(
            inferred,
            oracle,
            "oracle disagreement on {}",
            render_formula(&f, Mode::Nf)
        );
        agreements += 1;
        if !oracle {
            unstratifiable_seen += 1;
        }
    }

    // Named shapes on both sides of the fence.
    let a = Atom::named("a", 0);
    let russell = Syntax::Term(Term::comp(
        &a,
        Formula::neg(Formula::member(Term::var(&a), Term::var(&a))),
    ));
    assert!(!oracle_stratifiable(&russell));
    assert!(stratify::infer(&russell).is_err());
    let univ = Syntax::Term(Term::comp(&a, Formula::top()));
    assert!(oracle_stratifiable(&univ));
    assert!(stratify::infer(&univ).is_ok());

    assert!(
        unstratifiable_seen >= 20,
        "the corpus must exercise the unstratifiable side, saw {unstratifiable_seen}"
    );
    pass(
        8,
        &format!(
            "inference agrees with window search on {agreements} formulas \
             ({unstratifiable_seen} unstratifiable)"
        ),
    );
}

/// Merge free-atom names down to `k` buckets so that level conflicts can
/// arise (generated formulas use distinct names everywhere).
fn collapse_names(f: &Formula, k: u64) -> Formula {
    fn walk(f: &Formula, k: u64) -> Formula {
        match f {
            Formula::Bot => Formula::Bot,
            Formula::Neg(inner) => Formula::neg(walk(inner, k)),
            Formula::And(l, r) => Formula::conj(walk(l, k), walk(r, k)),
            Formula::All(b, body) => Formula::All(b.clone(), Box::new(walk(body, k))),
            Formula::In(t, s) => Formula::In(walk_term(t, k), walk_term(s, k)),
        }
    }
    fn walk_term(t: &Term, k: u64) -> Term {
        match t {
            Term::Var(Var::Free(a)) => {
                let bucket = a.id() % k;
                Term::var(&Atom::named(&format!("n{bucket}"), 0))
            }
            Term::Var(v) => Term::Var(v.clone()),
            Term::Comp(b, body) => Term::Comp(b.clone(), Box::new(walk_term_body(body, k))),
        }
    }
    fn walk_term_body(f: &Formula, k: u64) -> Formula {
        walk(f, k)
    }
    walk(f, k)
}

/// Brute-force stratifiability: collect sites and membership constraints
/// by a direct walk, then search all level assignments within the window
/// [-k, k], k = number of sites.
fn oracle_stratifiable(x: &Syntax) -> bool {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
    enum OSite {
        Name(String),
        Binder(Vec<u32>),
    }
    // (site of s, offset of s) = (site of t, offset of t) + 1
    struct Walk {
        sites: Vec<OSite>,
        constraints: Vec<(usize, i64, usize, i64)>,
    }
    impl Walk {
        fn site(&mut self, s: OSite) -> usize {
            if let Some(i) = self.sites.iter().position(|x| *x == s) {
                return i;
            }
            self.sites.push(s);
            self.sites.len() - 1
        }
        fn term_site(&mut self, t: &Term, path: &[u32], env: &[usize]) -> (usize, i64) {
            match t {
                Term::Var(Var::Free(a)) => {
                    let name = a.name().unwrap_or("?").to_owned();
                    (self.site(OSite::Name(name)), 0)
                }
                Term::Var(Var::Bound(kk)) => (env[env.len() - 1 - *kk as usize], 0),
                Term::Comp(_, _) => (self.site(OSite::Binder(path.to_vec())), 1),
            }
        }
        fn formula(&mut self, f: &Formula, path: &mut Vec<u32>, env: &mut Vec<usize>) {
            match f {
                Formula::Bot => {}
                Formula::Neg(inner) => {
                    path.push(0);
                    self.formula(inner, path, env);
                    path.pop();
                }
                Formula::And(l, r) => {
                    path.push(0);
                    self.formula(l, path, env);
                    path.pop();
                    path.push(1);
                    self.formula(r, path, env);
                    path.pop();
                }
                Formula::All(_, body) => {
                    let site = self.site(OSite::Binder(path.clone()));
                    env.push(site);
                    path.push(0);
                    self.formula(body, path, env);
                    path.pop();
                    env.pop();
                }
                Formula::In(t, s) => {
                    let (ts, to) = {
                        path.push(0);
                        let r = self.term_site(t, path, env);
                        path.pop();
                        r
                    };
                    let (ss, so) = {
                        path.push(1);
                        let r = self.term_site(s, path, env);
                        path.pop();
                        r
                    };
                    self.constraints.push((ss, so, ts, to));
                    path.push(0);
                    self.term(t, path, env);
                    path.pop();
                    path.push(1);
                    self.term(s, path, env);
                    path.pop();
                }
            }
        }
        fn term(&mut self, t: &Term, path: &mut Vec<u32>, env: &mut Vec<usize>) {
            match t {
                Term::Var(_) => {}
                Term::Comp(_, body) => {
                    let site = self.site(OSite::Binder(path.clone()));
                    env.push(site);
                    path.push(0);
                    self.formula(body, path, env);
                    path.pop();
                    env.pop();
                }
            }
        }
    }

    let mut walk = Walk {
        sites: Vec::new(),
        constraints: Vec::new(),
    };
    let mut path = Vec::new();
    let mut env = Vec::new();
    match x {
        Syntax::Formula(f) => walk.formula(f, &mut path, &mut env),
        Syntax::Term(t) => walk.term(t, &mut path, &mut env),
    }

    let n = walk.sites.len();
    if n == 0 {
        return true;
    }
    let k = n as i64;
    // Depth-first assignment with early pruning.
    fn search(
        assigned: &mut Vec<Option<i64>>,
        next: usize,
        k: i64,
        constraints: &[(usize, i64, usize, i64)],
    ) -> bool {
        if next == assigned.len() {
            return true;
        }
        for level in -k..=k {
            assigned[next] = Some(level);
            let consistent =
                constraints
                    .iter()
                    .all(|(ss, so, ts, to)| match (assigned[*ss], assigned[*ts]) {
                        (Some(ls), Some(lt)) => ls + so == lt + to + 1,
                        _ => true,
                    });
            if consistent && search(assigned, next + 1, k, constraints) {
                return true;
            }
        }
        assigned[next] = None;
        false
    }
    let mut assigned = vec![None; n];
    search(&mut assigned, 0, k, &walk.constraints)
}

/// Supplement to criterion 8: enumerate every unleveled formula up to size
/// 8 over a two-name pool (binders included) and compare the union-find
/// verdict with the window search on each.
#[test]
fn exhaustive_oracle_agreement_at_small_sizes() {
    use std::collections::HashMap;
    use stratal::nominal::Binder;

    fn terms(size: u64, depth: u32, memo: &mut Memo) -> Vec<Term> {
        if size == 1 {
            let mut out = vec![
                Term::var(&Atom::named("p", 0)),
                Term::var(&Atom::named("q", 0)),
            ];
            for k in 0..depth {
                out.push(Term::Var(Var::Bound(k)));
            }
            return out;
        }
        formulas(size - 1, depth + 1, memo)
            .into_iter()
            .map(|body| {
                Term::Comp(
                    Binder {
                        level: 0,
                        hint: None,
                    },
                    Box::new(body),
                )
            })
            .collect()
    }

    type Memo = HashMap<(u64, u32), Vec<Formula>>;

    fn formulas(size: u64, depth: u32, memo: &mut Memo) -> Vec<Formula> {
        if let Some(known) = memo.get(&(size, depth)) {
            return known.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            out.push(Formula::Bot);
        }
        if size >= 2 {
            for inner in formulas(size - 1, depth, memo) {
                out.push(Formula::neg(inner));
            }
            for body in formulas(size - 1, depth + 1, memo) {
                out.push(Formula::All(
                    Binder {
                        level: 0,
                        hint: None,
                    },
                    Box::new(body),
                ));
            }
        }
        if size >= 3 {
            for left in 1..size - 1 {
                for l in formulas(left, depth, memo) {
                    for r in formulas(size - 1 - left, depth, memo) {
                        out.push(Formula::conj(l.clone(), r));
                    }
                }
                for t in terms(left, depth, memo) {
                    for s in terms(size - 1 - left, depth, memo) {
                        out.push(Formula::In(t.clone(), s));
                    }
                }
            }
        }
        memo.insert((size, depth), out.clone());
        out
    }

    let mut memo = Memo::new();
    let mut checked = 0u64;
    let mut unstratifiable = 0u64;
    for size in 1..=8 {
        for f in formulas(size, 0, &mut memo) {
            let x = Syntax::Formula(f.clone());
            let inferred = stratify::infer(&x).is_ok();
            let oracle = oracle_stratifiable(&x);
            assert_eq!(
                inferred,
                oracle,
                "exhaustive disagreement on {}",
                render_formula(&f, Mode::Nf)
            );
            checked += 1;
            if !oracle {
                unstratifiable += 1;
            }
        }
    }
    assert!(checked > 1_000, "enumeration too small: {checked}");
    assert!(unstratifiable > 0);
    println!(
        "exhaustive agreement on {checked} formulas up to size 8 \
         ({unstratifiable} unstratifiable)"
    );
}

/// Criterion 9: the named examples behave as documented.
#[test]
fn criterion_9_named_examples() {
    // The Russell comprehension is rejected with a replayable cycle.
    let a = Atom::named("a", 0);
    let russell = Syntax::Term(Term::comp(
        &a,
        Formula::neg(Formula::member(Term::var(&a), Term::var(&a))),
    ));
    let violation = stratify::infer(&russell).unwrap_err();
    assert!(matches!(violation, StratificationViolation::Cycle { .. }));
    assert!(violation.replays_to_contradiction());

    // The universal comprehension is accepted.
    assert!(stratify::infer(&Syntax::Term(Term::comp(&a, Formula::top()))).is_ok());

    // ∅ ∈ {a | a ∉ a} contracts in one step to ∅ ∉ ∅ (unleveled).
    let empty = Term::comp(&Atom::named("b", 0), Formula::Bot);
    let phi = Formula::member(
        empty.clone(),
        Term::comp(
            &a,
            Formula::neg(Formula::member(Term::var(&a), Term::var(&a))),
        ),
    );
    assert_eq!(formula_redexes(&phi), vec![Position::root()]);
    let stepped = step_formula(&phi, &Position::root()).unwrap();
    assert_eq!(
        stepped,
        Formula::neg(Formula::member(empty.clone(), empty.clone()))
    );

    // ω ∈ ω runs out of fuel.
    let omega = Term::comp(&a, Formula::member(Term::var(&a), Term::var(&a)));
    let trace = normalize_formula(
        &Formula::member(omega.clone(), omega),
        Strategy::Outermost,
        Some(100),
    )
    .unwrap();
    assert_eq!(trace.status, Status::FuelExhausted);
    assert_eq!(trace.steps.len(), 100);

    pass(
        9,
        "Russell rejected, universal set accepted, ∅∈{a|a∉a} steps once, ω∈ω diverges",
    );
}

/// The level solution's shift classes really are jointly shiftable.
#[test]
fn shift_invariance_of_solutions() {
    let mut checked = 0u64;
    for i in 0..200u64 {
        let f = gen::formula(SEED ^ (i * 17 + 9), 15, Mode::Nf);
        let x = Syntax::Formula(f);
        let solution = stratify::infer(&x).unwrap();
        for class in 0..solution.shift_classes.len() {
            let shifted = solution.shifted(class, 4);
            let annotated = stratify::apply_solution(&x, &shifted);
            assert!(stratify::check(&annotated).is_empty());
            checked += 1;
        }
    }
    assert!(checked > 0);
    println!("shift invariance checked on {checked} class shifts");
}

/// Keep a map-based sanity check that the whole suite agrees with the
/// library's own property harness.
#[test]
fn harness_suites_pass() {
    for (name, cases, size) in [
        ("sigma", 120u64, 15u64),
        ("confluence", 60, 20),
        ("termination", 60, 18),
        ("stratify", 120, 12),
    ] {
        let report = props::run_suite(name, cases, size, SEED ^ 0x717e).unwrap();
        assert!(report.passed(), "{}", report.lines());
    }
    let mut counts = BTreeMap::new();
    counts.insert("suites", 4);
    assert_eq!(counts["suites"], 4);
}
