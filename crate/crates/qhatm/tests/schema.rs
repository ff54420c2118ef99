use qhatm::schema::{docs_to_series, load_custom, serialize_spec, ProblemDoc};
use qhatm::Error;
use qhatm_core::{builtin, solve, AffineExponent, Coords, QhatmError, QhatmParams, BUILTIN_NAMES};

const DAMPED_WAVE: &str = r#"{
  "name": "damped_wave",
  "evolution_var": "t",
  "order_range": [0.0, 1.0],
  "leading_order": {"p": 0, "q": 2},
  "lower_terms": [{"coeff": 2.0, "order": {"p": 0, "q": 1}}],
  "factors": ["exp_x"],
  "bracket_matrix": [[1.0]],
  "source": [],
  "initial_guess": [
    {"coeff": 1.0, "p": 0, "q": 0, "factor": "exp_x"},
    {"coeff": -2.0, "p": 1, "q": 0, "factor": "exp_x"}
  ],
  "coordinates": ["x"]
}"#;

#[test]
fn builtins_survive_serialization() {
    for name in BUILTIN_NAMES {
        let spec = builtin(name).unwrap();
        let text = serialize_spec(&spec);
        assert_eq!(load_custom(&text).unwrap(), spec, "{name}");
        let doc: ProblemDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.name, name);
    }
}

#[test]
fn damped_wave_first_iterate() {
    let spec = load_custom(DAMPED_WAVE).unwrap();
    let (a, h) = (0.6, -0.8);
    let sol = solve(&spec, &QhatmParams::new(a, h, 1, 3)).unwrap();
    // v1 = h J^{2a}(2 D^a u0 + u0) with u0 = e^x (1 - 2t)
    let g = libm::tgamma;
    let want = [
        (AffineExponent::new(0, 2), h / g(2.0 * a + 1.0)),
        (AffineExponent::new(1, 1), -4.0 * h / g(a + 2.0)),
        (AffineExponent::new(1, 2), -2.0 * h / g(2.0 * a + 2.0)),
    ];
    assert_eq!(sol.iterates[1].len(), want.len());
    for (e, c) in want {
        let got = sol.iterates[1].coefficient(e, 0);
        assert!((got - c).abs() <= 1e-13 * c.abs(), "{e}: {got} vs {c}");
    }
    let v = spec
        .eval_series(&sol.assembled, a, &Coords::new().with("x", 0.3).with("t", 0.2))
        .unwrap();
    assert!(v.is_finite());
}

#[test]
fn matrix_must_match_catalog() {
    let text = DAMPED_WAVE.replace("[[1.0]]", "[[1.0, 0.0], [0.0, 1.0]]");
    assert!(matches!(
        load_custom(&text),
        Err(Error::Core(QhatmError::DimensionMismatch { expected: 1, found: 2 }))
    ));
}

#[test]
fn rejects_malformed_documents() {
    assert!(matches!(load_custom("{"), Err(Error::Json(_))));
    assert!(matches!(load_custom(&DAMPED_WAVE.replace("\"exp_x\"]", "\"cosh\"]")), Err(Error::Usage(_))));
    assert!(load_custom(&DAMPED_WAVE.replace("[0.0, 1.0]", "[1.0, 1.0]")).is_err());
    assert!(load_custom(&DAMPED_WAVE.replace("[[1.0]]", "[[1.0, 2.0]]")).is_err());
    assert!(load_custom(&DAMPED_WAVE.replace("\"x\"]", "\"x\"], \"bogus\": 1")).is_err());
    assert!(load_custom(&DAMPED_WAVE.replace("\"evolution_var\": \"t\"", "\"evolution_var\": \"y\"")).is_err());
}

#[test]
fn term_docs_resolve_against_catalog() {
    let spec = builtin("ex43").unwrap();
    let doc = ProblemDoc::from_spec(&spec);
    let src = docs_to_series(spec.catalog(), &doc.source).unwrap();
    assert_eq!(&src, spec.source());
}
