use std::collections::HashMap;

use fugal_cli::doc::{corpus_documents, parse_document, parse_with, DocError, Document, Source};
use fugal_core::finset::{FinFn, FinMonoid, FinSet};
use fugal_core::fugal::Monoid;
use fugal_core::gen::{all_monoid_machines, random_intertwiner, random_mealy, random_powerset_mealy, random_rel, random_z2_set};
use fugal_core::guitart::FinCat;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Files(HashMap<&'static str, &'static str>);

impl Source for Files {
    fn open(&self, reference: &str) -> Result<(String, Box<dyn Source>), DocError> {
        match self.0.get(reference) {
            Some(text) => Ok((text.to_string(), Box::new(Files(self.0.clone())))),
            None => Err(DocError::Io {
                source_name: reference.into(),
                message: "missing".into(),
            }),
        }
    }
}

fn roundtrips(d: &Document) -> bool {
    matches!(parse_document(&d.to_json()), Ok(again) if again == *d)
}

#[test]
fn xor_document_is_a_two_state_machine() {
    let d = corpus_documents().remove("xor").unwrap().unwrap();
    let Document::Mealy { machine, start } = d else { panic!("kind") };
    assert_eq!(machine.states().len(), 2);
    assert_eq!(start, 0);
    assert_eq!((machine.d(1, 1), machine.s(1, 0)), (0, 1));
}

#[test]
fn every_corpus_entry_parses_and_roundtrips() {
    for (name, parsed) in corpus_documents() {
        let d = parsed.unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(roundtrips(&d), "{name}");
    }
}

#[test]
fn empty_input_is_a_syntax_error_at_the_start() {
    match parse_document("") {
        Err(DocError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 1)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_document("{\n  \"kind\": \"mealy\",\n  \"states\": [,]\n}") {
        Err(DocError::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 14)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn non_associative_table_names_the_triple() {
    let text = r#"{"kind":"monoid","elements":["1","a","b"],"unit":"1",
        "table":[["1","a","b"],["a","b","a"],["b","b","b"]]}"#;
    match parse_document(text) {
        Err(DocError::Invariant { message, .. }) => assert!(message.contains("(a,a,a)"), "{message}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn error_classes_are_distinct() {
    let unresolved = r#"{"kind":"monoid-machine","states":["*"],"input":"nope","output":"nope","rows":[]}"#;
    assert!(matches!(parse_document(unresolved), Err(DocError::Unresolved { name, .. }) if name == "nope"));

    let unknown_key = r#"{"kind":"relation","src":[],"dst":[],"pairs":[],"extra":1}"#;
    assert!(matches!(parse_document(unknown_key), Err(DocError::Shape { .. })));

    let missing_row = r#"{"kind":"mealy","states":["0"],"input":["a","b"],"output":["x"],"rows":[["0","a","0","x"]]}"#;
    match parse_document(missing_row) {
        Err(DocError::Shape { message, .. }) => assert!(message.contains("`b`"), "{message}"),
        other => panic!("{other:?}"),
    }

    let not_action = r#"{"kind":"monoid-machine","imports":["z2.json"],"states":["0","1"],"input":"z2","output":"z2",
        "rows":[["0","1","1","1"],["0","g","1","1"],["1","1","1","1"],["1","g","1","1"]]}"#;
    assert!(matches!(parse_document(not_action), Err(DocError::Invariant { .. })));
}

#[test]
fn defs_and_imports_resolve() {
    let files = Files(HashMap::from([
        ("m.json", r#"{"kind":"monoid","name":"M","elements":["1","a"],"unit":"1","table":[["1","a"],["a","a"]]}"#),
        ("loop.json", r#"{"kind":"relation","imports":["loop.json"],"src":[],"dst":[],"pairs":[]}"#),
    ]));
    let text = r#"{"kind":"category","imports":["m.json"],"defs":{"n":"m"},"monoid":"n"}"#;
    let Ok(Document::Category(c)) = parse_with(text, &files) else { panic!("category") };
    assert_eq!(c.morphisms().len(), 2);

    assert!(matches!(parse_with(r#"{"kind":"relation","imports":["loop.json"],"src":[],"dst":[],"pairs":[]}"#, &files), Err(DocError::Shape { .. })));
    let selfref = r#"{"kind":"monoid-machine","defs":{"a":{"kind":"category","monoid":"a"}},"states":[],"input":"a","output":"a","rows":[]}"#;
    assert!(matches!(parse_with(selfref, &files), Err(DocError::Shape { message, .. }) if message.contains("itself")));
}

#[test]
fn set_functor_identities_may_be_omitted() {
    let text = r#"{"kind":"set-functor","category":{"kind":"category","discrete":["x"]},"sets":[["x",["p","q"]]],"maps":[]}"#;
    let Ok(Document::SetFunctor(f)) = parse_document(text) else { panic!("set functor") };
    assert_eq!(f.map(0).table(), &[0, 1]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mealy_documents_roundtrip(seed in any::<u64>(), ne in 1usize..4, ni in 1usize..4, no in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_mealy(&mut rng, "m", &FinSet::range("E", ne), &FinSet::range("I", ni), &FinSet::range("O", no));
        prop_assert!(roundtrips(&Document::mealy(m)));
    }

    #[test]
    fn nondeterministic_documents_roundtrip(seed in any::<u64>(), ne in 1usize..4, ni in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_powerset_mealy(&mut rng, &FinSet::range("E", ne), &FinSet::range("I", ni), &FinSet::range("O", 2));
        prop_assert!(roundtrips(&Document::NondetMealy(n)));
    }

    #[test]
    fn relation_documents_roundtrip(seed in any::<u64>(), a in 0usize..4, b in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_rel(&mut rng, &FinSet::range("A", a), &FinSet::range("B", b));
        prop_assert!(roundtrips(&Document::Relation(r)));
    }

    #[test]
    fn monoid_and_category_documents_roundtrip(n in 1usize..5) {
        let m = FinMonoid::cyclic(n);
        let doc = Document::Monoid { name: "C".into(), monoid: Monoid::Finite(m.clone()) };
        prop_assert!(roundtrips(&doc));
        prop_assert!(roundtrips(&Document::Category(FinCat::from_monoid(&m))));
        prop_assert!(roundtrips(&Document::Category(FinCat::chaotic(&FinSet::range("X", n)))));
    }

    #[test]
    fn monoid_machine_documents_roundtrip(k in 0usize..64) {
        let z2 = FinMonoid::z2_multiplicative();
        let all = all_monoid_machines(&FinSet::range("E", 2), &z2, &FinMonoid::cyclic(3));
        let m = all[k % all.len()].clone();
        prop_assert!(roundtrips(&Document::MonoidMachine(m)));
    }

    #[test]
    fn set_functor_documents_roundtrip(seed in any::<u64>(), n in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = FinCat::from_monoid(&FinMonoid::z2_multiplicative());
        prop_assert!(roundtrips(&Document::SetFunctor(random_z2_set(&mut rng, &c, "X", n))));
    }

    #[test]
    fn intertwiner_documents_roundtrip(seed in any::<u64>(), u in 1usize..3, v in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = FinSet::range("A", 2);
        let m = random_mealy(&mut rng, "m", &FinSet::range("E", 2), &bits, &bits);
        let m2 = random_mealy(&mut rng, "n", &FinSet::range("F", 1), &bits, &bits);
        let it = random_intertwiner(&mut rng, &m, &m2, &FinSet::range("U", u), &FinSet::range("V", v));
        prop_assert!(roundtrips(&Document::Intertwiner(it)));
    }

    #[test]
    fn two_cell_documents_roundtrip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = FinSet::range("A", 2);
        let m = random_mealy(&mut rng, "m", &FinSet::range("E", 2), &bits, &bits);
        let u = FinSet::range("U", 2);
        let it = random_intertwiner(&mut rng, &m, &m, &u, &u);
        let id = FinFn::identity(&u);
        let cell = fugal_core::intertwiner::IntertwinerTwoCell::new(it.clone(), it, id.clone(), id).unwrap();
        prop_assert!(roundtrips(&Document::TwoCell(cell)));
    }
}
