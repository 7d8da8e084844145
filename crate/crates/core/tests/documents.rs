use ccn_secrecy::report::{TraceDocument, FORMAT_VERSION};
use ccn_secrecy::schemes::{ksc, SchemeSpec};
use ccn_secrecy::{Error, PrimeField};
use serde_json::{json, Value};

fn ksc32() -> (TraceDocument, Value) {
    let f = PrimeField::new(13).unwrap();
    let doc = TraceDocument::from_trace(&ksc(3, 2, &f).unwrap(), Some(SchemeSpec::Ksc { m: 3, h: 2 }));
    let value = serde_json::from_str(&doc.to_json()).unwrap();
    (doc, value)
}

fn parse_value(v: &Value) -> Result<TraceDocument, Error> {
    TraceDocument::parse(&serde_json::to_string_pretty(v).unwrap())
}

fn document_error(v: &Value) -> String {
    match parse_value(v).and_then(|d| d.to_trace().map(|_| d)) {
        Err(Error::Document(msg)) => msg,
        other => panic!("expected a document error, got {other:?}"),
    }
}

#[test]
fn layout_is_stable() {
    let (_, v) = ksc32();
    assert_eq!(v["version"], FORMAT_VERSION);
    assert_eq!(v["field"], 13);
    assert_eq!(v["topology"], json!({"kind": "ccn", "m": 3, "h": 2, "orientation": "directed"}));
    assert_eq!(v["scheme"], json!({"scheme": "ksc", "m": 3, "h": 2}));
    assert_eq!(v["variables"][0], json!({"label": "w1", "kind": "message", "owner": "S"}));
    let first = &v["transmissions"][0];
    assert_eq!(first["from"], "S");
    assert_eq!(first["to"], "S1");
    assert_eq!(first["payload"], json!({"k1": 1}));
    // k2 is the negated share.
    assert_eq!(v["transmissions"][1]["payload"], json!({"k1": 12}));
}

#[test]
fn syntax_errors_name_line_and_column() {
    let err = TraceDocument::parse("{\n  \"version\": \"v1\",\n  \"field\": 13,,\n}").unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("line 3"), "{msg}");
}

#[test]
fn schema_errors_name_the_field() {
    let (_, mut v) = ksc32();
    v["transmissions"][0].as_object_mut().unwrap().remove("round");
    let msg = parse_value(&v).unwrap_err().to_string();
    assert!(msg.contains("missing field `round`"), "{msg}");

    let (_, mut v) = ksc32();
    v["version"] = json!("v0");
    assert!(parse_value(&v).unwrap_err().to_string().contains("version"));
}

#[test]
fn semantic_errors_name_the_path() {
    let (_, mut v) = ksc32();
    v["transmissions"][3]["payload"] = json!({"zz": 1});
    assert!(document_error(&v).contains("transmissions[3].payload.zz"));

    let (_, mut v) = ksc32();
    v["transmissions"][0]["to"] = json!("S2");
    assert!(document_error(&v).starts_with("transmissions[0]"));

    let (_, mut v) = ksc32();
    v["transmissions"][0]["payload"] = json!({"k1": 13});
    assert!(document_error(&v).contains("residue 13"));

    let (_, mut v) = ksc32();
    v["variables"][1]["owner"] = json!("Q");
    assert!(document_error(&v).contains("variables[1].owner"));

    let (_, mut v) = ksc32();
    v["field"] = json!(12);
    assert!(document_error(&v).starts_with("field"));
}

#[test]
fn replay_rejects_impossible_sends() {
    // S1 cannot forward a symbol it never received.
    let (_, mut v) = ksc32();
    let idx = v["transmissions"]
        .as_array()
        .unwrap()
        .iter()
        .position(|t| t["from"] == "S1" && t["to"] == "A1")
        .unwrap();
    v["transmissions"][idx]["payload"] = json!({"w1": 1});
    let err = parse_value(&v).unwrap().to_trace().unwrap_err();
    assert!(matches!(err, Error::NotComputable { ref sender, .. } if sender == "S1"), "{err}");
}

#[test]
fn unknown_fields_are_rejected() {
    let (_, mut v) = ksc32();
    v["extra"] = json!(1);
    assert!(parse_value(&v).is_err());
}
