mod common;

use std::fmt::Write as _;

use ocsca::data::{
    format_libsvm, generate_synthetic, parse_csv, parse_libsvm, read_csv, read_libsvm,
    shuffled_stream, write_libsvm, CsvOptions, Dataset, LibsvmOptions, SynthSpec,
};
use ocsca::{Error, FeatureVector, Label, Sample};
use proptest::prelude::*;

fn libsvm(text: &str) -> ocsca::Result<Dataset> {
    parse_libsvm(text.as_bytes(), "mem", "mem", &LibsvmOptions::default())
}

fn random_dataset(seed: u64, n: usize, d: usize) -> Dataset {
    let mut rng = common::rng(seed);
    let samples = (0..n).map(|_| common::random_sparse_sample(&mut rng, d, 0.4)).collect();
    Dataset::new("random", d, samples).unwrap()
}

#[test]
fn libsvm_round_trip_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..20 {
        let ds = random_dataset(seed, 50, 12);
        let path = dir.path().join(format!("{seed}.svm"));
        write_libsvm(&ds, &path).unwrap();
        let back = read_libsvm(
            &path,
            &LibsvmOptions {
                dimension: Some(12),
                strict: false,
            },
        )
        .unwrap();
        assert_eq!(back.samples(), ds.samples());
        for (a, b) in back.samples().iter().zip(ds.samples()) {
            for (x, y) in a.features.nonzeros().zip(b.features.nonzeros()) {
                assert_eq!(x.1.to_bits(), y.1.to_bits());
            }
        }
    }
}

#[test]
fn csv_equals_equivalent_libsvm() {
    let ds = random_dataset(7, 40, 5);
    let mut csv = String::new();
    for s in ds.samples() {
        let label = if s.label == Label::Positive { "1" } else { "0" };
        let cells: Vec<String> = s.features.to_dense_vec().iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(csv, "{label},{}", cells.join(","));
    }
    let from_csv = parse_csv(csv.as_bytes(), "mem", "csv", &CsvOptions::default()).unwrap();
    let from_svm = parse_libsvm(
        format_libsvm(&ds).as_bytes(),
        "mem",
        "svm",
        &LibsvmOptions {
            dimension: Some(5),
            strict: false,
        },
    )
    .unwrap();
    assert_eq!(from_csv.dimension(), from_svm.dimension());
    assert_eq!(from_csv.samples(), from_svm.samples());
}

#[test]
fn csv_file_with_header_and_label_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    std::fs::write(&path, "a,b,label\n0.5,1,1\n-2,3,0\n").unwrap();
    let opts = CsvOptions {
        label_column: 2,
        has_header: true,
        base_score_column: None,
    };
    let ds = read_csv(&path, &opts).unwrap();
    assert_eq!(ds.len(), 2);
    assert_eq!(ds.dimension(), 2);
    assert_eq!(ds.samples()[0].label, Label::Positive);
    assert_eq!(ds.samples()[1].label, Label::Negative);
    assert_eq!(ds.samples()[1].features.to_dense_vec(), vec![-2.0, 3.0]);
}

#[test]
fn libsvm_format_definition() {
    let ds = libsvm("+1 1:0.5 3:2.0\n").unwrap();
    assert_eq!(ds.dimension(), 3);
    assert_eq!(ds.samples()[0].label, Label::Positive);
    assert_eq!(ds.samples()[0].features.to_dense_vec(), vec![0.5, 0.0, 2.0]);
    let ds = libsvm("0 2:1\n-1 1:1\n1 1:1\n").unwrap();
    let labels: Vec<Label> = ds.samples().iter().map(|s| s.label).collect();
    assert_eq!(labels, vec![Label::Negative, Label::Negative, Label::Positive]);
}

#[test]
fn malformed_input_reports_line_numbers() {
    for (text, line) in [
        ("+1 1:1\n+1 2:x\n", 2),
        ("+1 1:1\n\n2 1:1\n", 3),
        ("+1 3:1 2:1\n", 1),
        ("+1 0:1\n", 1),
        ("+1 1\n", 1),
    ] {
        match libsvm(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: expected parse error, got {other:?}"),
        }
    }
    match parse_csv("1,2,3\n1,2\n".as_bytes(), "mem", "m", &CsvOptions::default()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected ragged-row error, got {other:?}"),
    }
    match parse_csv("1,2\n1,abc\n".as_bytes(), "mem", "m", &CsvOptions::default()) {
        Err(Error::Parse { line, message, .. }) => {
            assert_eq!(line, 2);
            assert!(message.contains("column"), "{message}");
        }
        other => panic!("expected numeric error, got {other:?}"),
    }
    assert!(parse_csv("2,1\n".as_bytes(), "mem", "m", &CsvOptions::default()).is_err());
}

#[test]
fn empty_file_is_an_error_only_when_strict() {
    assert!(libsvm("").unwrap().is_empty());
    let strict = LibsvmOptions {
        dimension: None,
        strict: true,
    };
    assert!(parse_libsvm("".as_bytes(), "mem", "m", &strict).is_err());
}

#[test]
fn synthetic_counts_and_determinism() {
    let spec = SynthSpec {
        n_positive: 37,
        n_negative: 81,
        dimension: 4,
        mean_separation: 2.0,
        noise_scale: 0.5,
        seed: 3,
    };
    let a = generate_synthetic(&spec).unwrap();
    assert_eq!(a.class_counts(), (37, 81));
    assert_eq!(a, generate_synthetic(&spec).unwrap());
    let empty = SynthSpec {
        n_positive: 0,
        n_negative: 0,
        ..spec
    };
    assert!(generate_synthetic(&empty).unwrap().is_empty());
}

#[test]
fn shuffled_stream_is_a_seeded_permutation() {
    let ds = random_dataset(1, 30, 3);
    let a = shuffled_stream(&ds, 5);
    assert_eq!(a, shuffled_stream(&ds, 5));
    let b = shuffled_stream(&ds, 6);
    for order in [&a, &b] {
        let mut idx: Vec<usize> = order
            .iter()
            .map(|s| ds.samples().iter().position(|t| std::ptr::eq(t, *s)).unwrap())
            .collect();
        idx.sort();
        assert_eq!(idx, (0..30).collect::<Vec<_>>());
    }
}

proptest! {
    #[test]
    fn libsvm_text_round_trip(values in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 6), 1..20), labels in prop::collection::vec(any::<bool>(), 20)) {
        let samples: Vec<Sample> = values
            .iter()
            .zip(&labels)
            .map(|(x, &p)| {
                let label = if p { Label::Positive } else { Label::Negative };
                Sample::new(FeatureVector::dense(x.clone()).unwrap().sparsified(), label)
            })
            .collect();
        let ds = Dataset::new("p", 6, samples).unwrap();
        let back = parse_libsvm(
            format_libsvm(&ds).as_bytes(),
            "mem",
            "p",
            &LibsvmOptions { dimension: Some(6), strict: false },
        ).unwrap();
        prop_assert_eq!(back.samples(), ds.samples());
    }
}
