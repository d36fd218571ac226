mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use matcon::atlas::{lindenbaum_sigma_sets, preimage_in_fragment, ProductCoding};
use matcon::catalog::builtin;
use matcon::matrix::{sigma_family, FiniteAlgebra, FiniteMatrix, MatrixClass};
use matcon::{
    atlas_entails, cn_restricted, entails_class, enumerate_fragment, lindenbaum_theories,
    make_atlas, product_atlas, Error, Formula, FormulaSet, Fragment, Limits,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn neg_class(m: FiniteMatrix) -> MatrixClass {
    MatrixClass::single(m.restrict(&["neg"]).unwrap())
}

#[test]
fn atlas_examples() {
    let l = nu_lang();
    let b2 = builtin::b2();
    let single = make_atlas(b2.clone(), [vec![1]]).unwrap();
    assert_eq!(single.to_class(), MatrixClass::single(builtin::cl2()));
    assert_eq!(
        make_atlas(b2.clone(), [vec![2]]).unwrap_err(),
        Error::FilterOutOfRange {
            element: 2,
            carrier: 2
        }
    );

    let nu = make_atlas(nu_class().members()[0].algebra().clone(), [vec![1], vec![]]).unwrap();
    assert_eq!(nu.to_class(), nu_class());
    let taut = f("(imp p p)", &l);
    assert!(!atlas_entails(&nu, &FormulaSet::new(), &taut).unwrap());
    assert!(atlas_entails(&nu, &set(&["q"], &l), &taut).unwrap());
    let a = f("(neg (imp q p))", &l);
    assert!(atlas_entails(&nu, &[a.clone()].into(), &a).unwrap());
}

#[test]
fn product_examples() {
    let both = MatrixClass::new(vec![builtin::cl2(), builtin::l3()]).unwrap();
    let star = product_atlas(&both).unwrap();
    assert_eq!(star.algebra().carrier(), 6);
    let sizes: Vec<usize> = star.filters().iter().map(|f| f.len()).collect();
    assert_eq!(sizes, [3, 2]);

    let unary = product_atlas(&MatrixClass::single(builtin::cl2())).unwrap();
    assert_eq!(unary.to_class(), MatrixClass::single(builtin::cl2()));

    let twice = MatrixClass::new(vec![builtin::cl2(), builtin::cl2()]).unwrap();
    let star = product_atlas(&twice).unwrap();
    assert_eq!(star.algebra().carrier(), 4);
    assert_eq!(
        star.filters().iter().map(|f| f.len()).collect::<Vec<_>>(),
        [2, 2]
    );

    let big = MatrixClass::new(vec![builtin::l3(); 4]).unwrap();
    let capped = matcon::atlas::product_atlas_with_limits(
        &big,
        &Limits {
            max_table_entries: 1000,
            ..Limits::default()
        },
    );
    assert!(matches!(capped, Err(Error::ResourceCap { .. })));
}

#[test]
fn product_tables_are_coordinatewise() {
    let both = MatrixClass::new(vec![builtin::cl2(), builtin::l3()]).unwrap();
    let star = product_atlas(&both).unwrap();
    let coding = ProductCoding::new(vec![2, 3]);
    let alg = star.algebra();
    for (op, name) in ["neg", "and", "or", "imp"].iter().enumerate() {
        let arity = if *name == "neg" { 1 } else { 2 };
        for a in 0..6 {
            for b in 0..6 {
                let args = &[a, b][..arity];
                let got = alg.apply(op, args);
                let c0: Vec<usize> = args.iter().map(|&x| coding.coordinate(x, 0)).collect();
                let c1: Vec<usize> = args.iter().map(|&x| coding.coordinate(x, 1)).collect();
                assert_eq!(coding.coordinate(got, 0), Logic::Cl2.op(name, &c0));
                assert_eq!(coding.coordinate(got, 1), Logic::L3.op(name, &c1));
            }
        }
    }
}

fn random_formula(rng: &mut ChaCha8Rng, vars: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
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

fn random_class(rng: &mut ChaCha8Rng) -> MatrixClass {
    let members = (0..rng.random_range(1..=3))
        .map(|_| {
            let n: usize = rng.random_range(1..=3);
            let tables: Vec<Vec<usize>> = builtin::signature()
                .connectives()
                .iter()
                .map(|c| {
                    (0..n.pow(c.arity() as u32))
                        .map(|_| rng.random_range(0..n))
                        .collect()
                })
                .collect();
            let alg = Arc::new(FiniteAlgebra::new(builtin::signature(), n, tables).unwrap());
            let filter: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            FiniteMatrix::new(alg, filter).unwrap()
        })
        .collect();
    MatrixClass::new(members).unwrap()
}

#[test]
fn product_atlas_determines_the_same_consequence() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut classes = vec![MatrixClass::new(vec![builtin::cl2(), builtin::l3()]).unwrap()];
    classes.extend((0..3).map(|_| random_class(&mut rng)));
    let vars = ["p", "q", "r"];
    for class in &classes {
        let star = product_atlas(class).unwrap();
        for _ in 0..500 {
            let xs: FormulaSet = (0..rng.random_range(0..=3))
                .map(|_| random_formula(&mut rng, &vars, 2))
                .collect();
            let a = random_formula(&mut rng, &vars, 2);
            assert_eq!(
                atlas_entails(&star, &xs, &a).unwrap(),
                entails_class(class, &xs, &a).unwrap()
            );
        }
    }
}

#[test]
fn theory_examples() {
    let l = lang("neg/1", &["p"]);
    let frag = Fragment::of(&["p"], 1);
    let theories = lindenbaum_theories(&neg_class(builtin::cl2()), &frag).unwrap();
    let got: BTreeSet<FormulaSet> = theories.iter().collect();
    let want: BTreeSet<FormulaSet> = [
        set(&[], &l),
        set(&["p"], &l),
        set(&["(neg p)"], &l),
        set(&["p", "(neg p)"], &l),
    ]
    .into();
    assert_eq!(got, want);

    let full = lang(FULL, &["p"]);
    let cl2 = MatrixClass::single(builtin::cl2());
    let theories = lindenbaum_theories(&cl2, &frag).unwrap();
    let taut = f("(imp p p)", &full);
    assert!(theories.iter().all(|t| t.contains(&taut)));
    let whole: FormulaSet = enumerate_fragment(&frag, &full)
        .unwrap()
        .formulas()
        .iter()
        .cloned()
        .collect();
    assert!(theories.contains(&whole));
}

/// Every subset of the fragment that is closed under restricted consequence.
fn brute_force_theories(class: &MatrixClass, frag: &Fragment) -> BTreeSet<FormulaSet> {
    let listing = class.listing(frag).unwrap();
    let n = listing.len();
    assert!(n <= 14);
    (0u32..1 << n)
        .map(|bits| {
            (0..n)
                .filter(|i| bits >> i & 1 == 1)
                .map(|i| listing.formula(i).clone())
                .collect::<FormulaSet>()
        })
        .filter(|t| {
            let cn: FormulaSet = cn_restricted(class, t, frag).unwrap().into_iter().collect();
            &cn == t
        })
        .collect()
}

#[test]
fn theories_match_brute_force() {
    let cases: Vec<(MatrixClass, Fragment)> = vec![
        (neg_class(builtin::cl2()), Fragment::of(&["p", "q"], 1)),
        (neg_class(builtin::l3()), Fragment::of(&["p", "q"], 2)),
        (
            MatrixClass::single(builtin::cl2().restrict(&["imp"]).unwrap()),
            Fragment::of(&["p", "q"], 1),
        ),
        (
            MatrixClass::single(builtin::l3().restrict(&["imp"]).unwrap()),
            Fragment::of(&["p", "q"], 1),
        ),
        (
            MatrixClass::single(builtin::l3().restrict(&["neg", "or"]).unwrap()),
            Fragment::of(&["p"], 2),
        ),
        (MatrixClass::single(builtin::cl2()), Fragment::of(&["p"], 1)),
        (
            MatrixClass::new(vec![builtin::cl2(), builtin::l3()])
                .unwrap()
                .restrict(&["neg", "and"])
                .unwrap(),
            Fragment::of(&["p", "q"], 1),
        ),
    ];
    for (class, frag) in cases {
        let got: BTreeSet<FormulaSet> =
            lindenbaum_theories(&class, &frag).unwrap().iter().collect();
        assert_eq!(got, brute_force_theories(&class, &frag), "{frag:?}");
    }
}

#[test]
fn theories_are_closed_and_contain_truth_sets() {
    let class = MatrixClass::new(vec![builtin::l3(), builtin::k3()]).unwrap();
    let frag = Fragment::of(&["p", "q"], 1);
    let theories = lindenbaum_theories(&class, &frag).unwrap();
    let all: Vec<FormulaSet> = theories.iter().collect();
    for t in &all {
        let cn: FormulaSet = cn_restricted(&class, t, &frag)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(&cn, t);
    }
    for a in &all {
        for b in &all {
            let meet: FormulaSet = a.intersection(b).cloned().collect();
            assert!(theories.contains(&meet));
        }
    }
    for m in class.members() {
        let fam = sigma_family(m, &frag).unwrap();
        for i in 0..fam.len() {
            let z: FormulaSet = fam.formulas(i).into_iter().collect();
            assert!(theories.contains(&z));
        }
    }
}

#[test]
fn lindenbaum_sigma_examples() {
    let l = lang("neg/1", &["p"]);
    let class = neg_class(builtin::cl2());
    let frag = Fragment::of(&["p"], 1);
    let sets = lindenbaum_sigma_sets(&class, &frag, 1).unwrap();
    for t in lindenbaum_theories(&class, &frag).unwrap().iter() {
        assert!(sets.contains(&t));
    }
    assert!(sets.contains(&set(&["(neg p)"], &l)));

    // Under p ↦ (neg p) the fragment [p, (neg p)] maps to [(neg p), (neg (neg p))];
    // the second image leaves the fragment. The preimage of {p} is empty and
    // that of {(neg p)} is {p}.
    let listing = enumerate_fragment(&frag, &l).unwrap();
    let theory = |fs: &[&str]| {
        let mut bits = fixedbitset::FixedBitSet::with_capacity(listing.len());
        for g in fs {
            bits.insert(listing.position(&f(g, &l)).unwrap());
        }
        bits
    };
    let neg_p = listing.position(&f("(neg p)", &l)).unwrap();
    assert_eq!(
        preimage_in_fragment(&listing, &[neg_p], &theory(&["p"])).count_ones(..),
        0
    );
    let back = preimage_in_fragment(&listing, &[neg_p], &theory(&["(neg p)"]));
    assert_eq!(back.ones().collect::<Vec<_>>(), [0]);

    // Depth-0 substitutions are renamings, which here only give back the theories.
    let renamed = lindenbaum_sigma_sets(&class, &frag, 0).unwrap();
    let theories: BTreeSet<FormulaSet> =
        lindenbaum_theories(&class, &frag).unwrap().iter().collect();
    assert_eq!(renamed, theories);
}

#[test]
fn theory_cap_is_reported() {
    let frag = Fragment::of(&["p", "q"], 1).with_limits(Limits {
        max_theories: 3,
        ..Limits::default()
    });
    let class = MatrixClass::single(builtin::l3());
    assert!(matches!(
        lindenbaum_theories(&class, &frag),
        Err(Error::ResourceCap {
            what: "theories",
            ..
        })
    ));
}
