//! Level checking for leveled syntax and level inference for unleveled
//! syntax.
//!
//! Checking walks the syntax and verifies the offset-one law at every
//! membership, extending levels to comprehensions (one above the binder).
//! Inference assigns one level variable per free name and per binder site
//! and solves the membership constraints with a union-find whose nodes
//! carry integer offsets to their representative; an unsatisfiable
//! constraint is reported as a closed walk of constraint edges whose net
//! offset is nonzero, which replays to `L(x) = L(x) + k`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde_json::{json, Value};

use crate::nominal::{Atom, Level, Var};
use crate::surface::{Formula, Position, Syntax, Term};

/// A name-occurrence site: a free name (all occurrences of one free name
/// share a level) or a binder (one level variable per binding site).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Site {
    Free(String),
    Binder(Position),
}

impl Site {
    fn of_atom(a: &Atom) -> Site {
        match a.name() {
            Some(n) => Site::Free(n.to_owned()),
            None => Site::Free(format!("#{}", a.id())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Site::Free(name) => json!({ "free": name }),
            Site::Binder(pos) => json!({ "binder": pos.as_slice() }),
        }
    }
}

/// One membership-induced constraint `L(to) = L(from) + offset`, recorded
/// at the membership's position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstraintEdge {
    pub from: Site,
    pub to: Site,
    pub offset: i64,
    pub at: Position,
}

impl ConstraintEdge {
    pub fn to_json(&self) -> Value {
        json!({
            "from": self.from.to_json(),
            "to": self.to.to_json(),
            "offset": self.offset,
            "at": self.at.as_slice(),
        })
    }
}

/// A traversal direction through a constraint edge; walking an edge
/// backwards negates its offset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycleStep {
    pub edge: ConstraintEdge,
    pub forward: bool,
}

impl CycleStep {
    pub fn signed_offset(&self) -> i64 {
        if self.forward {
            self.edge.offset
        } else {
            -self.edge.offset
        }
    }

    fn start(&self) -> &Site {
        if self.forward {
            &self.edge.from
        } else {
            &self.edge.to
        }
    }

    fn end(&self) -> &Site {
        if self.forward {
            &self.edge.to
        } else {
            &self.edge.from
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StratificationViolation {
    /// A membership whose container is not exactly one level above its
    /// member.
    BadMembership {
        at: Position,
        member_level: Level,
        container_level: Level,
    },
    /// A closed walk of constraint edges with nonzero net offset: no level
    /// assignment can satisfy it.
    Cycle { steps: Vec<CycleStep> },
}

impl StratificationViolation {
    pub fn to_json(&self) -> Value {
        match self {
            StratificationViolation::BadMembership {
                at,
                member_level,
                container_level,
            } => json!({
                "kind": "bad_membership",
                "at": at.as_slice(),
                "member_level": member_level,
                "required_member_level": container_level - 1,
                "container_level": container_level,
            }),
            StratificationViolation::Cycle { steps } => json!({
                "kind": "cycle",
                "net_offset": steps.iter().map(CycleStep::signed_offset).sum::<i64>(),
                "edges": steps
                    .iter()
                    .map(|s| {
                        let mut e = s.edge.to_json();
                        e["forward"] = json!(s.forward);
                        e
                    })
                    .collect::<Vec<_>>(),
            }),
        }
    }

    /// Replay a cycle witness: the walk must be closed and its net offset
    /// nonzero, i.e. it forces `L(start) = L(start) + net`.
    pub fn replays_to_contradiction(&self) -> bool {
        let StratificationViolation::Cycle { steps } = self else {
            return false;
        };
        let Some(first) = steps.first() else {
            return false;
        };
        let mut here = first.start().clone();
        for step in steps {
            if step.start() != &here {
                return false;
            }
            here = step.end().clone();
        }
        here == *first.start() && steps.iter().map(CycleStep::signed_offset).sum::<i64>() != 0
    }
}

/// An assignment of levels to sites together with the partition of sites
/// into jointly shiftable components. Canonical form: each component's
/// minimum level is 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LevelSolution {
    pub assignment: BTreeMap<Site, Level>,
    pub shift_classes: Vec<BTreeSet<Site>>,
}

impl LevelSolution {
    /// Shift one component by a constant; any shift of a component is
    /// again a solution.
    pub fn shifted(&self, class_index: usize, delta: Level) -> LevelSolution {
        let mut out = self.clone();
        for site in &self.shift_classes[class_index] {
            *out.assignment.get_mut(site).unwrap() += delta;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "assignment": self
                .assignment
                .iter()
                .map(|(site, level)| json!({ "site": site.to_json(), "level": level }))
                .collect::<Vec<_>>(),
            "shift_classes": self
                .shift_classes
                .iter()
                .map(|class| class.iter().map(Site::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// Check the offset-one law everywhere in a leveled formula or term.
/// Violations are returned as values; an empty list means stratified.
pub fn check(x: &Syntax) -> Vec<StratificationViolation> {
    let mut out = Vec::new();
    let mut env = Vec::new();
    match x {
        Syntax::Formula(f) => check_formula(f, &Position::root(), &mut env, &mut out),
        Syntax::Term(t) => check_term(t, &Position::root(), &mut env, &mut out),
    }
    out
}

pub fn check_formula_ok(f: &Formula) -> bool {
    check(&Syntax::Formula(f.clone())).is_empty()
}

fn term_level(t: &Term, env: &[Level]) -> Level {
    match t {
        Term::Var(Var::Free(a)) => a.level(),
        Term::Var(Var::Bound(k)) => env[env.len() - 1 - *k as usize],
        Term::Comp(b, _) => b.level + 1,
    }
}

fn check_formula(
    f: &Formula,
    pos: &Position,
    env: &mut Vec<Level>,
    out: &mut Vec<StratificationViolation>,
) {
    match f {
        Formula::Bot => {}
        Formula::Neg(inner) => check_formula(inner, &pos.extended(0), env, out),
        Formula::And(l, r) => {
            check_formula(l, &pos.extended(0), env, out);
            check_formula(r, &pos.extended(1), env, out);
        }
        Formula::All(b, body) => {
            env.push(b.level);
            check_formula(body, &pos.extended(0), env, out);
            env.pop();
        }
        Formula::In(t, s) => {
            let member_level = term_level(t, env);
            let container_level = term_level(s, env);
            if container_level != member_level + 1 {
                out.push(StratificationViolation::BadMembership {
                    at: pos.clone(),
                    member_level,
                    container_level,
                });
            }
            check_term(t, &pos.extended(0), env, out);
            check_term(s, &pos.extended(1), env, out);
        }
    }
}

fn check_term(
    t: &Term,
    pos: &Position,
    env: &mut Vec<Level>,
    out: &mut Vec<StratificationViolation>,
) {
    match t {
        Term::Var(_) => {}
        Term::Comp(b, body) => {
            env.push(b.level);
            check_formula(body, &pos.extended(0), env, out);
            env.pop();
        }
    }
}

/// Infer levels for unleveled syntax (pre-existing level tags are
/// ignored). On success the canonical solution annotates the input into
/// stratified syntax; on failure a replayable cycle witness is returned.
pub fn infer(x: &Syntax) -> Result<LevelSolution, StratificationViolation> {
    let mut solver = Solver::default();
    let mut env = Vec::new();
    match x {
        Syntax::Formula(f) => solver.visit_formula(f, &Position::root(), &mut env)?,
        Syntax::Term(t) => solver.visit_term(t, &Position::root(), &mut env)?,
    }
    Ok(solver.solution())
}

pub fn infer_formula(f: &Formula) -> Result<LevelSolution, StratificationViolation> {
    infer(&Syntax::Formula(f.clone()))
}

/// Re-tag an unleveled formula or term with the levels of a solution
/// (sites not covered by the solution keep their levels).
pub fn apply_solution(x: &Syntax, solution: &LevelSolution) -> Syntax {
    match x {
        Syntax::Formula(f) => Syntax::Formula(annotate_formula(f, &Position::root(), solution)),
        Syntax::Term(t) => Syntax::Term(annotate_term(t, &Position::root(), solution)),
    }
}

fn site_level(solution: &LevelSolution, site: &Site, fallback: Level) -> Level {
    solution.assignment.get(site).copied().unwrap_or(fallback)
}

fn annotate_formula(f: &Formula, pos: &Position, solution: &LevelSolution) -> Formula {
    match f {
        Formula::Bot => Formula::Bot,
        Formula::Neg(inner) => Formula::neg(annotate_formula(inner, &pos.extended(0), solution)),
        Formula::And(l, r) => Formula::conj(
            annotate_formula(l, &pos.extended(0), solution),
            annotate_formula(r, &pos.extended(1), solution),
        ),
        Formula::All(b, body) => {
            let level = site_level(solution, &Site::Binder(pos.clone()), b.level);
            Formula::All(
                b.at_level(level),
                Box::new(annotate_formula(body, &pos.extended(0), solution)),
            )
        }
        Formula::In(t, s) => Formula::In(
            annotate_term(t, &pos.extended(0), solution),
            annotate_term(s, &pos.extended(1), solution),
        ),
    }
}

fn annotate_term(t: &Term, pos: &Position, solution: &LevelSolution) -> Term {
    match t {
        Term::Var(Var::Free(a)) => {
            let level = site_level(solution, &Site::of_atom(a), a.level());
            Term::Var(Var::Free(a.at_level(level)))
        }
        Term::Var(v) => Term::Var(v.clone()),
        Term::Comp(b, body) => {
            let level = site_level(solution, &Site::Binder(pos.clone()), b.level);
            Term::Comp(
                b.at_level(level),
                Box::new(annotate_formula(body, &pos.extended(0), solution)),
            )
        }
    }
}

/// Union-find with integer offsets: each node stores its parent and the
/// offset of its own level above the parent's.
#[derive(Default)]
struct Solver {
    index: HashMap<Site, usize>,
    sites: Vec<Site>,
    parent: Vec<usize>,
    offset: Vec<i64>,
    edges: Vec<ConstraintEdge>,
}

impl Solver {
    fn node(&mut self, site: Site) -> usize {
        if let Some(&i) = self.index.get(&site) {
            return i;
        }
        let i = self.sites.len();
        self.index.insert(site.clone(), i);
        self.sites.push(site);
        self.parent.push(i);
        self.offset.push(0);
        i
    }

    /// Representative of `i` and the offset of `i`'s level above it.
    fn find(&mut self, i: usize) -> (usize, i64) {
        if self.parent[i] == i {
            return (i, 0);
        }
        let (root, parent_off) = self.find(self.parent[i]);
        self.parent[i] = root;
        self.offset[i] += parent_off;
        (root, self.offset[i])
    }

    /// Record `L(v) = L(u) + k`; on contradiction, return the cycle.
    fn union(&mut self, edge: ConstraintEdge) -> Result<(), StratificationViolation> {
        let u = self.node(edge.from.clone());
        let v = self.node(edge.to.clone());
        let (ru, du) = self.find(u);
        let (rv, dv) = self.find(v);
        if ru == rv {
            if dv != du + edge.offset {
                return Err(self.cycle_witness(edge));
            }
        } else {
            // level(rv) = level(u) + k - dv = level(ru) + du + k - dv
            self.parent[rv] = ru;
            self.offset[rv] = du + edge.offset - dv;
        }
        self.edges.push(edge);
        Ok(())
    }

    /// BFS over the accepted edges for a path from `edge.from` to
    /// `edge.to`; prepending the offending edge yields a closed walk whose
    /// net offset disagrees with zero.
    fn cycle_witness(&mut self, edge: ConstraintEdge) -> StratificationViolation {
        let start = self.index[&edge.from];
        let goal = self.index[&edge.to];
        let mut steps = vec![CycleStep {
            edge: edge.clone(),
            forward: true,
        }];
        if start != goal {
            let path = self.bfs_path(goal, start);
            steps.extend(path);
        }
        StratificationViolation::Cycle { steps }
    }

    fn bfs_path(&self, from: usize, to: usize) -> Vec<CycleStep> {
        let mut prev: HashMap<usize, CycleStep> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(here) = queue.pop_front() {
            if here == to {
                break;
            }
            for e in &self.edges {
                let (u, v) = (self.index[&e.from], self.index[&e.to]);
                for (next, forward) in [(v, true), (u, false)] {
                    let from_here = if forward { u } else { v };
                    if from_here == here && seen.insert(next) {
                        prev.insert(
                            next,
                            CycleStep {
                                edge: e.clone(),
                                forward,
                            },
                        );
                        queue.push_back(next);
                    }
                }
            }
        }
        // Walk back from `to`, then reverse.
        let mut path = Vec::new();
        let mut here = to;
        while here != from {
            let step = prev[&here].clone();
            here = self.index[step.start()];
            path.push(step);
        }
        path.reverse();
        path
    }

    fn visit_formula(
        &mut self,
        f: &Formula,
        pos: &Position,
        env: &mut Vec<Site>,
    ) -> Result<(), StratificationViolation> {
        match f {
            Formula::Bot => Ok(()),
            Formula::Neg(inner) => self.visit_formula(inner, &pos.extended(0), env),
            Formula::And(l, r) => {
                self.visit_formula(l, &pos.extended(0), env)?;
                self.visit_formula(r, &pos.extended(1), env)
            }
            Formula::All(_, body) => {
                let site = Site::Binder(pos.clone());
                self.node(site.clone());
                env.push(site);
                let r = self.visit_formula(body, &pos.extended(0), env);
                env.pop();
                r
            }
            Formula::In(t, s) => {
                let (t_site, t_off) = self.term_site(t, &pos.extended(0), env);
                let (s_site, s_off) = self.term_site(s, &pos.extended(1), env);
                // level(s_site) + s_off = level(t_site) + t_off + 1
                self.union(ConstraintEdge {
                    from: t_site,
                    to: s_site,
                    offset: t_off + 1 - s_off,
                    at: pos.clone(),
                })?;
                self.visit_term(t, &pos.extended(0), env)?;
                self.visit_term(s, &pos.extended(1), env)
            }
        }
    }

    fn visit_term(
        &mut self,
        t: &Term,
        pos: &Position,
        env: &mut Vec<Site>,
    ) -> Result<(), StratificationViolation> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Comp(_, body) => {
                let site = Site::Binder(pos.clone());
                self.node(site.clone());
                env.push(site);
                let r = self.visit_formula(body, &pos.extended(0), env);
                env.pop();
                r
            }
        }
    }

    /// The site a term's level is expressed against, plus the constant
    /// offset above it (a comprehension sits one above its binder site).
    fn term_site(&mut self, t: &Term, pos: &Position, env: &[Site]) -> (Site, i64) {
        match t {
            Term::Var(Var::Free(a)) => {
                let site = Site::of_atom(a);
                self.node(site.clone());
                (site, 0)
            }
            Term::Var(Var::Bound(k)) => {
                let site = env[env.len() - 1 - *k as usize].clone();
                (site, 0)
            }
            Term::Comp(_, _) => {
                let site = Site::Binder(pos.clone());
                self.node(site.clone());
                (site, 1)
            }
        }
    }

    fn solution(&mut self) -> LevelSolution {
        let mut by_root: BTreeMap<usize, Vec<(Site, i64)>> = BTreeMap::new();
        for i in 0..self.sites.len() {
            let (root, off) = self.find(i);
            by_root
                .entry(root)
                .or_default()
                .push((self.sites[i].clone(), off));
        }
        let mut assignment = BTreeMap::new();
        let mut shift_classes = Vec::new();
        for members in by_root.into_values() {
            let min = members.iter().map(|(_, off)| *off).min().unwrap();
            let mut class = BTreeSet::new();
            for (site, off) in members {
                assignment.insert(site.clone(), off - min);
                class.insert(site);
            }
            shift_classes.push(class);
        }
        LevelSolution {
            assignment,
            shift_classes,
        }
    }
}
