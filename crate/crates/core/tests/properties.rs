mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pap_core::corpus::fixtures;
use pap_core::oracle::{oracle_stable_models, oracle_stable_models_exhaustive};
use pap_core::{
    ground, optimize_ground, parse_pap, print_pap, Atom, CmpOp, Comparison, CostFunction, Engine,
    EngineOptions, Expr, GroundAtom, GroundProgram, Hypothesis, Literal, PapInstance, Program,
    Rule, Solver, Term, Value, EPSILON,
};

use common::{random_pap, Shape, SMALL};

fn models_by_name(g: &GroundProgram, active: &BTreeSet<pap_core::AtomId>) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = Engine::new(g, EngineOptions::default())
        .stable_models(active)
        .unwrap()
        .iter()
        .map(|m| g.render(m))
        .collect();
    out.sort();
    out
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

#[test]
fn activated_grounding_matches_regrounding() {
    for f in fixtures() {
        let p = f.instance().unwrap();
        let h = p.hypothesis_atoms();
        assert!(h.len() <= 12, "{}", f.name);
        let g = ground(&p.program, &h).unwrap();
        for s in subsets(h.len()) {
            let mut rules = p.program.rules.clone();
            rules.extend(s.iter().map(|&i| Rule::fact(h[i].to_atom())));
            let fresh = ground(&Program::new(rules), &[]).unwrap();
            assert_eq!(
                models_by_name(&g, &g.active_facts(s.iter().copied())),
                models_by_name(&fresh, &fresh.facts),
                "{} with {s:?}",
                f.name
            );
        }
    }
}

#[test]
fn optimization_preserves_models() {
    for f in fixtures() {
        let p = f.instance().unwrap();
        let g = ground(&p.program, &p.hypothesis_atoms()).unwrap();
        let o = optimize_ground(&g);
        assert!(o.rules.len() <= g.rules.len());
        for s in subsets(g.assumables.len()) {
            let active = g.active_facts(s.iter().copied());
            assert_eq!(
                models_by_name(&g, &active),
                models_by_name(&o, &active),
                "{}",
                f.name
            );
        }
    }
}

#[test]
fn grounding_is_deterministic() {
    for f in fixtures() {
        let p = f.instance().unwrap();
        let a = ground(&p.program, &p.hypothesis_atoms()).unwrap();
        let b = ground(&p.program, &p.hypothesis_atoms()).unwrap();
        assert_eq!(a.atoms(), b.atoms());
        assert_eq!(a.rules, b.rules);
        assert_eq!(a.dump(), b.dump());
    }
}

#[test]
fn network_universe() {
    let p = pap_core::corpus::fixture("network_count")
        .unwrap()
        .instance()
        .unwrap();
    let u = pap_core::herbrand_universe(&p.program, &p.hypothesis_atoms());
    let want: BTreeSet<Value> = "abcdef"
        .chars()
        .map(|c| Value::Sym(c.to_string()))
        .collect();
    assert_eq!(u, want);
}

#[test]
fn fixtures_round_trip() {
    for f in fixtures() {
        let p = f.instance().unwrap();
        assert_eq!(parse_pap(&print_pap(&p)).unwrap(), p, "{}", f.name);
    }
}

fn seeded(seed: u64, shape: Shape) -> PapInstance {
    parse_pap(&random_pap(&mut ChaCha8Rng::seed_from_u64(seed), shape)).unwrap()
}

const WIDE: Shape = Shape {
    atoms: 16,
    hypotheses: 4,
    rules: 20,
};

// Programs over a few predicates with variables, constants and integers.
// Positive bodies are drawn first so every rule is safe.

const PREDICATES: [(&str, usize); 4] = [("p", 1), ("q", 2), ("r", 0), ("s", 2)];

fn term(vars: &[&'static str]) -> BoxedStrategy<Term> {
    let mut options: Vec<BoxedStrategy<Term>> = vec![
        prop::sample::select(vec!["a", "b", "c"])
            .prop_map(|c| Term::Const(c.into()))
            .boxed(),
        (-3i64..20).prop_map(Term::Int).boxed(),
    ];
    if !vars.is_empty() {
        options.push(
            prop::sample::select(vars.to_vec())
                .prop_map(|v| Term::Var(v.into()))
                .boxed(),
        );
    }
    prop::strategy::Union::new(options).boxed()
}

fn atom(vars: &[&'static str]) -> impl Strategy<Value = Atom> {
    let vars = vars.to_vec();
    prop::sample::select(PREDICATES.to_vec()).prop_flat_map(move |(name, arity)| {
        prop::collection::vec(term(&vars), arity).prop_map(move |args| Atom::new(name, args))
    })
}

fn expr(vars: Vec<&'static str>) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..60).prop_map(Expr::Int),
        prop::sample::select(vars).prop_map(|v| Expr::Var(v.into())),
    ];
    leaf.prop_recursive(2, 4, 2, |inner| {
        (
            inner.clone(),
            prop::sample::select(vec![
                pap_core::ArithOp::Add,
                pap_core::ArithOp::Sub,
                pap_core::ArithOp::Mul,
            ]),
            inner,
        )
            .prop_map(|(l, op, r)| Expr::bin(l, op, r))
    })
}

fn rule() -> impl Strategy<Value = Rule> {
    prop::collection::vec(atom(&["X", "Y", "Z"]), 0..3).prop_flat_map(|body_pos| {
        let mut bound: Vec<&'static str> = Vec::new();
        for a in &body_pos {
            for v in a.variables() {
                let v: &'static str = ["X", "Y", "Z"].into_iter().find(|c| *c == v).unwrap();
                if !bound.contains(&v) {
                    bound.push(v);
                }
            }
        }
        let cmps = if bound.is_empty() {
            Just(Vec::new()).boxed()
        } else {
            let ops = vec![
                CmpOp::Eq,
                CmpOp::Ne,
                CmpOp::Lt,
                CmpOp::Le,
                CmpOp::Gt,
                CmpOp::Ge,
            ];
            prop::collection::vec(
                (
                    expr(bound.clone()),
                    prop::sample::select(ops),
                    expr(bound.clone()),
                )
                    .prop_map(|(l, op, r)| Comparison::new(l, op, r)),
                0..2,
            )
            .boxed()
        };
        (
            atom(&bound),
            prop::collection::vec(atom(&bound), 0..2),
            cmps,
            Just(body_pos),
        )
            .prop_map(|(head, body_neg, body_cmp, body_pos)| Rule {
                head,
                body_pos,
                body_neg,
                body_cmp,
            })
    })
}

fn ground_atom() -> impl Strategy<Value = GroundAtom> {
    atom(&[]).prop_map(|a| a.to_ground().unwrap())
}

fn instance() -> impl Strategy<Value = PapInstance> {
    (
        prop::collection::vec(rule(), 0..6),
        prop::collection::btree_map(ground_atom(), 1u32..2000, 0..5),
        prop::collection::vec((ground_atom(), any::<bool>()), 0..4),
        prop::sample::select(CostFunction::ALL.to_vec()),
    )
        .prop_map(|(rules, hyps, obs, cost)| {
            let hypotheses = hyps
                .into_iter()
                .map(|(atom, k)| Hypothesis {
                    atom,
                    penalty: f64::from(k) / 1000.0,
                })
                .collect();
            let observations = obs
                .into_iter()
                .map(|(a, neg)| {
                    if neg {
                        Literal::neg(a)
                    } else {
                        Literal::pos(a)
                    }
                })
                .collect();
            PapInstance::new(hypotheses, Program::new(rules), observations, cost)
        })
        .prop_filter_map("consistent arities and canonical expressions", |p| {
            let p = p.ok()?;
            let canonical = p
                .program
                .rules
                .iter()
                .flat_map(|r| &r.body_cmp)
                .all(|c| c.lhs.is_canonical() && c.rhs.is_canonical());
            canonical.then_some(p)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(p in instance()) {
        let text = print_pap(&p);
        let back = parse_pap(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, p);
    }

    #[test]
    fn engine_matches_oracle(seed in any::<u64>()) {
        let p = seeded(seed, WIDE);
        let g = ground(&p.program, &p.hypothesis_atoms()).unwrap();
        let active = g.active_facts(0..g.assumables.len() / 2);
        let engine = Engine::new(&g, EngineOptions::default()).stable_models(&active).unwrap();
        let guessed = oracle_stable_models(&g, &active).unwrap();
        prop_assert_eq!(&engine, &guessed);
        if g.num_atoms() <= 12 {
            prop_assert_eq!(&engine, &oracle_stable_models_exhaustive(&g, &active).unwrap());
        }
    }

    #[test]
    fn solutions_are_consistent(seed in any::<u64>()) {
        let p = seeded(seed, SMALL);
        let s = Solver::new(&p).unwrap();
        let r = s.solve(true).unwrap();
        prop_assert_eq!(r.consistent, r.optimal_cost.is_some());
        prop_assert_eq!(r.consistent, !r.solutions.is_empty());
        let adm = s.admissible_solutions().unwrap();
        for sol in &r.solutions {
            prop_assert!(adm.contains(sol));
            let c = pap_core::eval_cost(p.cost, &p.penalties(), p.indices_of(sol).unwrap()).unwrap();
            prop_assert!((c - r.optimal_cost.unwrap()).abs() <= EPSILON);
        }
        if r.consistent {
            for h in p.hypothesis_atoms() {
                if s.is_necessary(&h).unwrap() {
                    prop_assert!(s.is_relevant(&h).unwrap());
                }
            }
        }
        let again = s.solve(true).unwrap();
        prop_assert_eq!(again.solutions, r.solutions);
    }
}
