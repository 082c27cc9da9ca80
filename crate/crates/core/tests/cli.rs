use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use expohedron::io::{parse_distribution_file, parse_front_file};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expohedron")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const THREE_ITEMS: &str = "query_id,item_id,relevance\nq3,a,0.55\nq3,b,0.6\nq3,c,0.65\n";

#[test]
fn pareto_reproduces_three_item_front() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.csv", THREE_ITEMS);
    let out = dir.path().join("front.json");
    let o = run(&["pareto", "--input", s(&input), "--model", "dcg-unit", "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let file = parse_front_file(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let q = &file.queries[0];
    assert_eq!(q.blend, 0.0);
    let expected = [
        [0.65112, 0.71031, 0.76950],
        [0.5, 0.71031, 0.92062],
        [0.5, 0.63093, 1.0],
    ];
    assert_eq!(q.points.len(), 3);
    for (p, e) in q.points.iter().zip(&expected) {
        for (a, b) in p.exposure.iter().zip(e) {
            assert!((a - b).abs() < 1e-5, "{:?} vs {e:?}", p.exposure);
        }
    }
    assert_eq!(q.points[0].unfairness, 0.0);
    assert!((q.points[2].ndcg - 1.0).abs() < 1e-12);
    assert_eq!(file.aggregate.len(), 11);
    assert_eq!(file.aggregate[0].alpha, 0.0);
    assert!((file.aggregate[10].mean_ndcg - 1.0).abs() < 1e-9);
}

#[test]
fn constant_queries_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{THREE_ITEMS}flat,x,0.3\nflat,y,0.3\nsolo,z,0.9\n");
    let input = write(dir.path(), "q.csv", &text);
    let out = dir.path().join("front.json");
    let o = run(&["pareto", "--input", s(&input), "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("\"flat\""), "{stderr}");
    let file = parse_front_file(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file.queries.len(), 1);
    let skipped: Vec<&str> = file.failures.iter().map(|f| f.query_id.as_str()).collect();
    assert_eq!(skipped, ["flat", "solo"]);
    assert!(file.failures.iter().all(|f| f.skipped));
}

#[test]
fn parse_errors_are_fatal_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.csv", "query_id,item_id,relevance\na,x,0.5\na,y,1.2\n");
    let o = run(&["pareto", "--input", s(&input)]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("line 3"), "{stderr}");
    let o = run(&["pareto", "--input", s(&dir.path().join("missing.csv"))]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["pareto"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn jsonl_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "q.jsonl",
        "{\"query_id\":\"b\",\"relevances\":[0.2,0.9,0.4]}\n{\"query_id\":\"a\",\"relevances\":[0.7,0.1]}\n",
    );
    let o = run(&["pareto", "--input", s(&input)]);
    assert_eq!(o.status.code(), Some(0));
    let file = parse_front_file(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let ids: Vec<&str> = file.queries.iter().map(|q| q.query_id.as_str()).collect();
    assert_eq!(ids, ["a", "b"]);
}

#[test]
fn decompose_roundtrip_and_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut text = String::from("query_id,item_id,relevance\n");
    for q in 0..6 {
        for i in 0..(4 + 3 * q) {
            text.push_str(&format!("q{q},i{i},{}\n", rng.gen::<f64>()));
        }
    }
    let input = write(dir.path(), "q.csv", &text);
    let front = dir.path().join("front.json");
    assert!(run(&["pareto", "--input", s(&input), "--output", s(&front)]).status.success());
    let fronts = parse_front_file(&std::fs::read_to_string(&front).unwrap()).unwrap();

    for selector in ["fairness", "utility", "alpha=0.5", "index=1"] {
        let dist = dir.path().join(format!("dist-{selector}.json"));
        let o = run(&["decompose", "--input", s(&front), "--point", selector, "--output", s(&dist)]);
        assert_eq!(o.status.code(), Some(0), "{selector}: {}", String::from_utf8_lossy(&o.stderr));
        let file = parse_distribution_file(&std::fs::read_to_string(&dist).unwrap()).unwrap();
        assert_eq!(file.distributions.len(), 6);
        for d in &file.distributions {
            assert!(d.max_abs_error <= 1e-9, "{selector}: {}", d.max_abs_error);
            assert!(d.entries.len() <= d.point.len());
            if selector == "fairness" {
                let q = fronts.queries.iter().find(|q| q.query_id == d.query_id).unwrap();
                assert_eq!(d.point, q.points[0].exposure);
            }
        }
    }

    let dist = dir.path().join("dist-fairness.json");
    let seq = dir.path().join("seq.csv");
    let o = run(&["schedule", "--input", s(&dist), "--horizon", "40", "--output", s(&seq)]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&seq).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 6 * 40);
    assert_eq!(&rows[0][0], "q0");
    assert_eq!(rows[0][3].split(' ').count(), 4);
    assert!(rows[0][3].split(' ').all(|id| id.starts_with('i')));
}

#[test]
fn partial_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = "query_id,item_id,relevance\nsmall,a,0.1\nsmall,b,0.9\nbig,a,0.1\nbig,b,0.5\nbig,c,0.6\nbig,d,0.95\n";
    let input = write(dir.path(), "q.csv", text);
    let front = dir.path().join("front.json");
    assert!(run(&["pareto", "--input", s(&input), "--output", s(&front)]).status.success());
    let dist = dir.path().join("dist.json");
    // the two-item front has two points, the four-item one more
    let o = run(&["decompose", "--input", s(&front), "--point", "index=2", "--output", s(&dist)]);
    assert_eq!(o.status.code(), Some(2));
    let file = parse_distribution_file(&std::fs::read_to_string(&dist).unwrap()).unwrap();
    assert_eq!(file.distributions.len(), 1);
    assert_eq!(file.failures[0].query_id, "small");
    assert!(!file.failures[0].skipped);
}

#[test]
fn decompose_barycenter() {
    let g1 = 1.0 / 3f64.log2();
    let third = (1.0 + g1 + 0.5) / 3.0;
    let exposure = format!("{third},{third},{third}");
    let o = run(&["decompose", "--exposure", &exposure, "--model", "dcg-unit"]);
    assert_eq!(o.status.code(), Some(0));
    let file = parse_distribution_file(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let d = &file.distributions[0];
    assert_eq!(d.entries.len(), 3);
    let total: f64 = d.entries.iter().map(|e| e.weight).sum();
    assert!((total - 1.0).abs() < 1e-12);

    let o = run(&["decompose", "--exposure", "2,0,0", "--model", "dcg-unit"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["decompose", "--exposure", "0.5,x"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn schedule_coin() {
    let dir = tempfile::tempdir().unwrap();
    let dist = r#"{
  "schema_version": 1,
  "model": {"kind": "dcg"},
  "distributions": [{
    "query_id": "coin",
    "point": [0.815464876785729, 0.815464876785729],
    "entries": [{"weight": 0.5, "ranking": [0, 1]}, {"weight": 0.5, "ranking": [1, 0]}],
    "max_abs_error": 0.0
  }],
  "failures": []
}"#;
    let input = write(dir.path(), "coin.json", dist);
    let o = run(&["schedule", "--input", s(&input), "--horizon", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    let heads = out.lines().skip(1).filter(|l| l.ends_with(",0 1")).count();
    let tails = out.lines().skip(1).filter(|l| l.ends_with(",1 0")).count();
    assert_eq!((heads, tails), (5, 5));

    let o = run(&["schedule", "--input", s(&input), "--horizon", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let sampled_a = run(&["schedule", "--input", s(&input), "--horizon", "50", "--mode", "sampled", "--seed", "3"]);
    let sampled_b = run(&["schedule", "--input", s(&input), "--horizon", "50", "--mode", "sampled", "--seed", "3"]);
    assert_eq!(sampled_a.stdout, sampled_b.stdout);
}

fn final_unfairness(csv_text: &str) -> f64 {
    let last = csv_text.lines().last().unwrap();
    last.split(',').nth(4).unwrap().parse().unwrap()
}

#[test]
fn simulate_balanced_beats_sampled() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut text = String::from("query_id,item_id,relevance\n");
    for q in 0..20 {
        for i in 0..10 {
            text.push_str(&format!("q{q:02},i{i},{}\n", rng.gen::<f64>()));
        }
    }
    let input = write(dir.path(), "q.csv", &text);
    let common = ["--input", s(&input), "--horizon", "1000", "--every", "100"];
    let bw = run(&[&["simulate", "--policy", "expo-bw"][..], &common].concat());
    assert_eq!(bw.status.code(), Some(0));
    let sampled = run(&[&["simulate", "--policy", "expo-sampled", "--seeds", "5"][..], &common].concat());
    assert_eq!(sampled.status.code(), Some(0));
    let bw = String::from_utf8(bw.stdout).unwrap();
    let sampled = String::from_utf8(sampled.stdout).unwrap();
    assert_eq!(bw.lines().count(), 11);
    assert!(bw.lines().nth(1).unwrap().starts_with("expo-bw,0,100,"));
    assert!(final_unfairness(&bw) < final_unfairness(&sampled));

    for policy in ["pl", "ctrl"] {
        let o = run(&[&["simulate", "--policy", policy][..], &common].concat());
        assert_eq!(o.status.code(), Some(0), "{policy}");
        let out = String::from_utf8(o.stdout).unwrap();
        assert!(out.lines().last().unwrap().ends_with(",20"));
    }
    let o = run(&[&["simulate", "--policy", "pl", "--param", "0"][..], &common].concat());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_small() {
    let o = run(&["bench", "--n", "5,8", "--repetitions", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    assert_eq!(out.lines().next().unwrap(), "n,component,mean_s,median_s,q025_s,q975_s");
    assert_eq!(out.lines().count(), 1 + 2 * 4);
    assert_eq!(run(&["bench", "--repetitions", "0"]).status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
