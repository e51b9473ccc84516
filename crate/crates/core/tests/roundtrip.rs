use qdisk_core::io::{parse_element, serialize_element};
use qdisk_core::random::{stream, tag, Shape};
use qdisk_core::{Element, Error, QParam, C64};

fn same_bits(a: &Element, b: &Element) -> bool {
    // PartialEq on C64 would accept 0.0 == -0.0; compare the bit patterns instead.
    fn bits(c: &C64) -> (u64, u64) {
        (c.re.to_bits(), c.im.to_bits())
    }
    match (a, b) {
        (Element::QPoly(x), Element::QPoly(y)) => {
            x.q() == y.q()
                && x.terms()
                    .iter()
                    .map(|(k, c)| (k, bits(c)))
                    .eq(y.terms().iter().map(|(k, c)| (k, bits(c))))
        }
        (Element::Free(x, qx), Element::Free(y, qy)) => {
            qx == qy
                && x.terms()
                    .iter()
                    .map(|(k, c)| (k, bits(c)))
                    .eq(y.terms().iter().map(|(k, c)| (k, bits(c))))
        }
        (Element::Laurent(x), Element::Laurent(y)) => x
            .terms()
            .iter()
            .map(|(k, c)| (k, bits(c)))
            .eq(y.terms().iter().map(|(k, c)| (k, bits(c)))),
        (Element::HSeries(x), Element::HSeries(y)) => {
            x.order() == y.order()
                && x.terms()
                    .iter()
                    .map(|(k, c)| (k, bits(c)))
                    .eq(y.terms().iter().map(|(k, c)| (k, bits(c))))
        }
        _ => false,
    }
}

fn random_element(kind: usize, i: u64) -> Element {
    let mut rng = stream(42, tag("roundtrip"), i * 4 + kind as u64);
    let shape = Shape::new(1 + (i % 4) as usize, 6, 8);
    let q = QParam::new(C64::from_polar(0.3 + (i % 7) as f64 * 0.4, i as f64)).unwrap();
    match kind {
        0 => Element::QPoly(shape.qpoly(&mut rng, q)),
        1 => Element::Free(shape.free(&mut rng), (i % 2 == 0).then_some(q)),
        2 => Element::Laurent(shape.laurent(&mut rng, 5)),
        _ => Element::HSeries(shape.hseries(&mut rng, (i % 5) as u32)),
    }
}

#[test]
fn five_hundred_random_elements_of_each_kind_round_trip_exactly() {
    for kind in 0..4 {
        for i in 0..500 {
            let e = random_element(kind, i);
            let text = serialize_element(&e);
            let back = parse_element(&text).unwrap();
            assert!(same_bits(&e, &back), "kind {kind} case {i}:\n{text}");
        }
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let doc = r#"{"kind":"qpoly","n":1,"q":{"re":0.5,"im":0},"terms":[],"extra":1}"#;
    assert!(matches!(parse_element(doc), Err(Error::Schema { .. })));
    let doc = r#"{"kind":"qpoly","n":1,"q":{"re":0.5,"im":0},"terms":[{"k":[1],"c":{"re":1,"im":0},"z":2}]}"#;
    assert!(matches!(parse_element(doc), Err(Error::Schema { .. })));
}

#[test]
fn field_diagnostics_name_the_offending_term() {
    let doc = r#"{"kind":"laurent","n":2,"terms":[{"k":[1,0],"p":0,"c":{"re":1,"im":0}},{"k":[1],"p":2,"c":{"re":1,"im":0}}]}"#;
    match parse_element(doc) {
        Err(Error::Schema { path, .. }) => assert_eq!(path, "terms[1].k"),
        other => panic!("{other:?}"),
    }
    let doc = r#"{"kind":"free","n":2,"terms":[{"alpha":[1,3],"c":{"re":1,"im":0}}]}"#;
    match parse_element(doc) {
        Err(Error::Schema { path, .. }) => assert_eq!(path, "terms[0].alpha"),
        other => panic!("{other:?}"),
    }
    let doc = r#"{"kind":"qpoly","n":"two","q":{"re":1,"im":0},"terms":[]}"#;
    match parse_element(doc) {
        Err(Error::Schema { path, .. }) => assert_eq!(path, "n"),
        other => panic!("{other:?}"),
    }
    let doc = "{\"kind\":\"qpoly\",\n\"n\": 2,,}";
    match parse_element(doc) {
        Err(Error::Schema { path, .. }) => assert!(path.starts_with("line 2"), "{path}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn empty_terms_give_zero_elements() {
    for doc in [
        r#"{"kind":"qpoly","n":2,"q":{"re":0.5,"im":0},"terms":[]}"#,
        r#"{"kind":"free","n":2,"terms":[]}"#,
        r#"{"kind":"laurent","n":2,"terms":[]}"#,
        r#"{"kind":"hseries","n":2,"terms":[]}"#,
    ] {
        let e = parse_element(doc).unwrap();
        let zero = match &e {
            Element::QPoly(a) => a.is_zero(),
            Element::Free(f, _) => f.is_zero(),
            Element::Laurent(a) => a.is_zero(),
            Element::HSeries(f) => f.is_zero(),
        };
        assert!(zero, "{doc}");
    }
}
