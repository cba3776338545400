use strength_cli::format::{self, CertFile, Tuple};
use strength_core::search::{prk_exact, strength_exact, Budget, DecompositionKind};
use strength_core::FieldCtx;

fn cert_round_trip(kind: DecompositionKind, tuple: &Tuple) {
    let cert = match tuple {
        Tuple::Tensors(ts) => prk_exact(ts, Budget::default()).unwrap(),
        Tuple::Forms(fs) => strength_exact(fs, Budget::default()).unwrap(),
    };
    let file = CertFile::from_certificate(kind, &cert);
    let text = format::write_cert(&file, tuple.field(), tuple.len());
    let back = format::parse_cert(&text, tuple.field(), tuple.len()).unwrap();
    assert_eq!(back, file);
    assert_eq!(format::write_cert(&back, tuple.field(), tuple.len()), text);
    if let Some(w) = &back.witness {
        match tuple {
            Tuple::Tensors(ts) => w.verify_tensors(ts).unwrap(),
            Tuple::Forms(fs) => w.verify_forms(fs).unwrap(),
        }
    }
}

#[test]
fn tuple_files_round_trip() {
    let text = "TENSOR GF(5) shape=2,3\n1 1 : 1\n2 3 : 4\nTENSOR GF(5) shape=2,3\n1 2 : 2\n";
    let t = format::parse_tuple(text).unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!(format::write_tuple(&t), text);

    let text = "FORM Q n=2 d=2\n2 0 : 1/2\n1 1 : -3\nFORM Q n=2 d=2\n0 2 : 7\n";
    let t = format::parse_tuple(text).unwrap();
    assert_eq!(format::write_tuple(&t), text);
}

#[test]
fn entry_order_is_canonical() {
    let a = format::parse_tuple("TENSOR GF(3) shape=2,2\n2 2 : 1\n1 2 : 2\n").unwrap();
    let b = format::parse_tuple("TENSOR GF(3) shape=2,2\n1 2 : 2\n2 2 : 1\n").unwrap();
    assert_eq!(format::write_tuple(&a), format::write_tuple(&b));
}

#[test]
fn certificates_round_trip() {
    let tensors = [
        "TENSOR GF(2) shape=2,2,2\n1 1 1 : 1\n2 2 2 : 1\n",
        "TENSOR GF(3) shape=2,2,2\n1 1 1 : 1\n1 2 2 : 2\nTENSOR GF(3) shape=2,2,2\n2 1 2 : 1\n",
        "TENSOR GF(2) shape=2,2\n",
        "TENSOR GF(5) shape=3\n2 : 1\n",
    ];
    for text in tensors {
        cert_round_trip(DecompositionKind::Partition, &format::parse_tuple(text).unwrap());
    }
    let forms = [
        "FORM GF(3) n=2 d=2\n2 0 : 1\n0 2 : 1\n",
        "FORM GF(3^2) n=2 d=2\n2 0 : 1\n0 2 : 1\n",
        "FORM GF(2) n=2 d=2\n2 0 : 1\nFORM GF(2) n=2 d=2\n0 2 : 1\n",
        "FORM GF(5) n=2 d=3\n3 0 : 1\n1 2 : 1\n",
    ];
    for text in forms {
        cert_round_trip(DecompositionKind::Strength, &format::parse_tuple(text).unwrap());
    }
}

#[test]
fn tuple_certificate_carries_coefficients() {
    let t = format::parse_tuple("FORM GF(2) n=2 d=2\n2 0 : 1\nFORM GF(2) n=2 d=2\n0 2 : 1\n").unwrap();
    let Tuple::Forms(fs) = &t else { unreachable!() };
    let cert = strength_exact(fs, Budget::default()).unwrap();
    let text = format::write_cert(&CertFile::from_certificate(DecompositionKind::Strength, &cert), t.field(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("c:"), "{text}");
}

#[test]
fn malformed_certificates() {
    let f: FieldCtx = "GF(2)".parse().unwrap();
    assert!(format::parse_cert("CERT PARTITION value=1 exhaustive=1\n", &f, 1).is_err());
    assert!(format::parse_cert("CERT OTHER value=1 exhaustive=1\nEND\n", &f, 1).is_err());
    assert!(format::parse_cert("CERT PARTITION value=x exhaustive=1\nEND\n", &f, 1).is_err());
    let ok = format::parse_cert("# note\nCERT PARTITION value=INF exhaustive=1\nEND\n", &f, 1).unwrap();
    assert!(ok.witness.is_none());
}

#[test]
fn field_headers() {
    for spec in ["Q", "GF(2)", "GF(101)", "GF(2^3)", "GF(3^2;2,2,1)"] {
        let f: FieldCtx = spec.parse().unwrap();
        let text = format!("FORM {f} n=1 d=1\n1 : 1\n");
        let t = format::parse_tuple(&text).unwrap();
        assert_eq!(t.field(), &f);
    }
}
