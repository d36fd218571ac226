mod common;

use common::*;
use matcon::catalog::builtin;
use matcon::extension::{replay_disagreement, replay_pattern};
use matcon::matrix::{FiniteMatrix, MatrixClass};
use matcon::{
    apply_substitution, conservativity_check, entails_class, lifted_entails, shared_atlas_check,
    wojcicki_entails, Error, Formula, FormulaSet, Fragment, Language, LiftedConsequence, Outcome,
    SearchBudget, Substitution, Var, Witness,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lifted(class: MatrixClass, base: Language) -> LiftedConsequence {
    LiftedConsequence::lift(class, base, [Var::new("r1"), Var::new("r2")]).unwrap()
}

fn bounded_lang(vars: &[&str]) -> Language {
    Language::bounded(
        MatrixClass::single(builtin::cl2()).signature().clone(),
        vars.iter().map(Var::new),
    )
    .unwrap()
}

fn cl2_lift() -> LiftedConsequence {
    lifted(MatrixClass::single(builtin::cl2()), lang(FULL, &["p", "q"]))
}

#[test]
fn lifted_examples() {
    let lc = cl2_lift();
    let ext = lc.extended_lang().clone();
    assert!(lifted_entails(&lc, &set(&["r1", "(imp r1 r2)"], &ext), &f("r2", &ext)).unwrap());
    let l3 = lifted(MatrixClass::single(builtin::l3()), lang(FULL, &["p", "q"]));
    assert!(!lifted_entails(&l3, &FormulaSet::new(), &f("(or r1 (neg r1))", &ext)).unwrap());
    let bounded = lifted(
        MatrixClass::single(builtin::cl2()),
        bounded_lang(&["p", "q"]),
    );
    assert!(lifted_entails(&bounded, &FormulaSet::new(), &f("(or r2 (neg r2))", &ext)).unwrap());
    assert_eq!(
        lifted_entails(&bounded, &FormulaSet::new(), &Formula::var("s")),
        Err(Error::NotInLanguage(Var::new("s")))
    );

    let mismatch = LiftedConsequence::new(
        MatrixClass::single(builtin::cl2()),
        lang("neg/1", &["p"]),
        lang("neg/1", &["p", "r"]),
    );
    assert!(matches!(mismatch, Err(Error::SignatureMismatch(_))));
    let not_ext = LiftedConsequence::new(
        MatrixClass::single(builtin::cl2()),
        bounded_lang(&["p", "q"]),
        bounded_lang(&["p"]),
    );
    assert!(matches!(not_ext, Err(Error::SignatureMismatch(_))));
}

#[test]
fn wojcicki_examples() {
    let lc = cl2_lift();
    let ext = lc.extended_lang().clone();
    let b = SearchBudget::default();
    let x = set(&["r1", "(imp r1 r2)"], &ext);
    let alpha = f("r2", &ext);
    let r = wojcicki_entails(&lc, &x, &alpha, &b).unwrap();
    assert!(r.entails);
    let w = r.witness.unwrap();
    let base = lc.base_lang().clone();
    assert_eq!(w.y, set(&["p", "(imp p q)"], &base));
    assert_eq!(w.beta, f("q", &base));
    let sigma: Substitution = [
        (Var::new("p"), Formula::var("r1")),
        (Var::new("q"), Formula::var("r2")),
    ]
    .into_iter()
    .collect();
    assert_eq!(w.sigma, sigma);
    assert!(replay_pattern(&lc, &x, &alpha, &w).unwrap());

    let a = f("(and r1 (neg r2))", &ext);
    let r = wojcicki_entails(&lc, &[a.clone()].into(), &a, &b).unwrap();
    let w = r.witness.unwrap();
    assert_eq!(w.y, set(&["p"], &base));
    assert_eq!(w.beta, f("p", &base));
    assert_eq!(w.sigma.apply(&w.beta), a);
    // The same pattern written with an extension variable is not a witness.
    let forged = matcon::PatternWitness {
        y: set(&["r1"], &ext),
        beta: f("r1", &ext),
        sigma: [(Var::new("r1"), a.clone())].into_iter().collect(),
    };
    assert!(!replay_pattern(&lc, &[a.clone()].into(), &a, &forged).unwrap());

    let r = wojcicki_entails(&lc, &FormulaSet::new(), &f("r1", &ext), &b).unwrap();
    assert!(!r.entails);
    assert!(r.witness.is_none());
    assert!(r.stats.exhaustive);

    // A theorem instance needs no premises.
    let t = f("(or r1 (neg r1))", &ext);
    let r = wojcicki_entails(&lc, &FormulaSet::new(), &t, &b).unwrap();
    assert!(r.entails);
    assert!(r.witness.unwrap().y.is_empty());
}

#[test]
fn wojcicki_deep_instances() {
    let lc = cl2_lift();
    let ext = lc.extended_lang().clone();
    let b = SearchBudget::default();
    let x = set(&["(and r1 r2)", "(imp (and r1 r2) (neg r1))"], &ext);
    let alpha = f("(neg r1)", &ext);
    let r = wojcicki_entails(&lc, &x, &alpha, &b).unwrap();
    assert!(r.entails);
    assert!(replay_pattern(&lc, &x, &alpha, r.witness.as_ref().unwrap()).unwrap());
    // Premises beyond max_set_size are ignored rather than rejected.
    let x = set(&["r1", "r2", "(imp r1 p)", "(imp r2 q)"], &ext);
    let r = wojcicki_entails(&lc, &x, &f("(and p q)", &ext), &b).unwrap();
    assert!(!r.entails);
    assert!(!r.stats.exhaustive);
}

fn random_formula(rng: &mut ChaCha8Rng, vars: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.35) {
        return Formula::var(vars[rng.random_range(0..vars.len())]);
    }
    match rng.random_range(0..4) {
        0 => Formula::app("neg", vec![random_formula(rng, vars, depth - 1)]),
        k => Formula::app(
            ["and", "or", "imp"][k - 1],
            vec![
                random_formula(rng, vars, depth - 1),
                random_formula(rng, vars, depth - 1),
            ],
        ),
    }
}

#[test]
fn wojcicki_hits_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let b = SearchBudget::default();
    for class in [
        MatrixClass::single(builtin::cl2()),
        MatrixClass::single(builtin::l3()),
        MatrixClass::single(builtin::k3()),
    ] {
        let lc = lifted(class, lang(FULL, &["p", "q"]));
        let mut hits = 0;
        for _ in 0..300 {
            let x: FormulaSet = (0..rng.random_range(0..=2))
                .map(|_| random_formula(&mut rng, &["p", "r1", "r2"], 2))
                .collect();
            let alpha = random_formula(&mut rng, &["p", "r1", "r2"], 2);
            let r = wojcicki_entails(&lc, &x, &alpha, &b).unwrap();
            if let Some(w) = &r.witness {
                hits += 1;
                assert!(replay_pattern(&lc, &x, &alpha, w).unwrap());
                assert!(lifted_entails(&lc, &x, &alpha).unwrap());
            }
            assert_eq!(r.entails, r.witness.is_some());
        }
        assert!(hits > 10);
    }
}

#[test]
fn conservativity_examples() {
    let lc = cl2_lift();
    let b = SearchBudget::default();
    let v = conservativity_check(&lc, &Fragment::of(&["p"], 1), &b).unwrap();
    assert_eq!(v.outcome, Outcome::NoCounterexample);
    assert!(v.stats.exhaustive);
    // 5 formulas over [p] at depth 1: 5 conclusions for each of 1 + 5 + 10 premise sets.
    assert_eq!(v.stats.candidates_examined, 80);

    for class in [
        MatrixClass::single(builtin::l3()),
        MatrixClass::new(vec![builtin::cl2(), builtin::k3()]).unwrap(),
    ] {
        let lc = lifted(class, lang(FULL, &["p", "q"]));
        let v = conservativity_check(&lc, &Fragment::of(&["p", "q"], 1), &b).unwrap();
        assert_eq!(v.outcome, Outcome::NoCounterexample);
    }

    let v = conservativity_check(&lc, &Fragment::of(&["r1"], 1), &b);
    assert_eq!(v.unwrap_err(), Error::NotInLanguage(Var::new("r1")));
    assert!(lc.in_base(&Var::new("s")));
    assert!(!lc.in_base(&Var::new("r2")));
}

#[test]
fn corrupted_lift_is_caught() {
    let lc = cl2_lift().with_lifted_class(MatrixClass::single(
        FiniteMatrix::new(builtin::b2(), [0]).unwrap(),
    ));
    let v = conservativity_check(&lc, &Fragment::of(&["p"], 1), &SearchBudget::default()).unwrap();
    assert_eq!(v.outcome, Outcome::Counterexample);
    let w = v.witness.unwrap();
    assert!(replay_disagreement(&lc, &w).unwrap());
    assert!(!replay_disagreement(&cl2_lift(), &w).unwrap());
}

#[test]
fn shared_atlas_examples() {
    let b = SearchBudget::default();
    let lc = cl2_lift();
    let base = Fragment::of(&["p", "q"], 1);
    let ext = Fragment::of(&["p", "r1"], 1);
    let r = shared_atlas_check(&lc, &base, &ext, &b).unwrap();
    let names: Vec<&str> = r.checks.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        [
            "wojcicki-soundness",
            "wojcicki-completeness",
            "base-uniform",
            "base-couniform",
            "lifted-uniform",
            "lifted-couniform"
        ]
    );
    for (name, v) in &r.checks {
        assert_eq!(v.outcome, Outcome::NoCounterexample, "{name}");
    }
    assert_eq!(r.overall.outcome, Outcome::NoCounterexample);

    let nu = lifted(nu_class(), nu_lang());
    let r = shared_atlas_check(&nu, &base, &ext, &b).unwrap();
    assert_eq!(r.overall.outcome, Outcome::Counterexample);
    let uniform = &r.checks[2].1;
    assert!(uniform.is_counterexample());
    match &r.overall.witness {
        Some(Witness::Nested { witness, .. }) => {
            assert!(matches!(**witness, Witness::Uniform { .. }))
        }
        other => panic!("unexpected overall witness {other:?}"),
    }

    let same = LiftedConsequence::lift(
        MatrixClass::single(builtin::cl2()),
        lang(FULL, &["p", "q"]),
        [],
    )
    .unwrap();
    let r = shared_atlas_check(&same, &base, &base, &b).unwrap();
    assert_eq!(r.overall.outcome, Outcome::NoCounterexample);
    let v = conservativity_check(&same, &base, &b).unwrap();
    assert_eq!(v.outcome, Outcome::NoCounterexample);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_seed: proptest::test_runner::RngSeed::Fixed(3), ..ProptestConfig::default() })]

    #[test]
    fn renaming_preserves_entailment(seed in any::<u64>(), k in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lc = lifted(MatrixClass::single(builtin::l3()), lang(FULL, &["p", "q"]));
        let x: FormulaSet = (0..k).map(|_| random_formula(&mut rng, &["p", "q"], 2)).collect();
        let alpha = random_formula(&mut rng, &["p", "q"], 2);
        let rho: Substitution = [
            (Var::new("p"), Formula::var("r2")),
            (Var::new("q"), Formula::var("p")),
        ]
        .into_iter()
        .collect();
        let rx: FormulaSet = x.iter().map(|g| apply_substitution(&rho, g)).collect();
        let ra = apply_substitution(&rho, &alpha);
        prop_assert_eq!(
            entails_class(lc.base_class(), &x, &alpha).unwrap(),
            lifted_entails(&lc, &rx, &ra).unwrap()
        );
    }
}
