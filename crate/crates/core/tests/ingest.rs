use std::collections::HashMap;
use std::io::Write;

use fdistinct::ingest::{
    parse_ntriples, EntityStore, IngestConfig, Literal, Node, ParseMode, Term, Triple,
    TripleReader,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;

/// The line grammar restricted to ASCII blank-node labels.
fn grammar() -> Regex {
    let uchar = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}";
    let iri = format!(r#"<[A-Za-z][A-Za-z0-9+.\-]*:(?:[^\x00-\x20<>"{{}}|^`\\]|{uchar})*>"#);
    let blank = r"_:[A-Za-z0-9_:](?:[A-Za-z0-9_:.\-]*[A-Za-z0-9_:\-])?";
    let lit = format!(
        r#""(?:[^"\\\n\r]|\\[tbnrf"'\\]|{uchar})*"(?:@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*|\^\^{iri})?"#
    );
    let ws = "[ \t]*";
    Regex::new(&format!(
        r"^{ws}(?:(?:{iri}|{blank}){ws}{iri}{ws}(?:{iri}|{blank}|{lit}){ws}\.{ws}(?:#.*)?|(?:#.*)?)$"
    ))
    .unwrap()
}

fn pick<'a>(rng: &mut ChaCha8Rng, xs: &[&'a str]) -> &'a str {
    xs[rng.gen_range(0..xs.len())]
}

fn random_line(rng: &mut ChaCha8Rng) -> String {
    let iris = [
        "<http://dbpedia.org/resource/Rome>",
        "<http://dbpedia.org/ontology/locatedIn>",
        "<http://x.org/a\\u00e9b>",
        "<urn:isbn:123>",
        "<http://dbpedia.org/resource/Caf\\U000000e9>",
        "<http://ex.org/p#frag>",
    ];
    let blanks = ["_:b0", "_:node.1", "_:x-y", "_:_u"];
    let lits = [
        "\"plain\"",
        "\"Rome\"@en",
        "\"x\"@en-GB",
        "\"1\"^^<http://www.w3.org/2001/XMLSchema#int>",
        "\"tab\\there \\\"q\\\" \\u00e9\"",
        "\"\"",
    ];
    let ws = ["", " ", "  ", "\t"];
    let subj = if rng.gen_bool(0.8) { pick(rng, &iris) } else { pick(rng, &blanks) };
    let obj = match rng.gen_range(0..3) {
        0 => pick(rng, &iris),
        1 => pick(rng, &blanks),
        _ => pick(rng, &lits),
    };
    let sep = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.9) {
            pick(rng, &[" ", "\t", "  "])
        } else {
            pick(rng, &ws)
        }
    };
    let mut line = format!(
        "{}{subj}{}{}{}{obj}{}.{}",
        pick(rng, &ws),
        sep(rng),
        pick(rng, &iris),
        sep(rng),
        pick(rng, &ws),
        pick(rng, &ws)
    );
    if rng.gen_bool(0.05) {
        line.push_str("# trailing comment");
    }
    line
}

fn mutate(rng: &mut ChaCha8Rng, line: &str) -> String {
    let mut chars: Vec<char> = line.chars().collect();
    match rng.gen_range(0..3) {
        0 if !chars.is_empty() => {
            chars.remove(rng.gen_range(0..chars.len()));
        }
        1 => {
            let junk = ['<', '>', '"', ' ', '\\', '.', '@', '^', '#', '_', ':', '{', 'z'];
            chars.insert(rng.gen_range(0..=chars.len()), *junk.choose(rng).unwrap());
        }
        _ => {
            let subs = [("http:", "http"), ("@en", "@"), ("\\u00e9", "\\u00g9"), (" .", " ,")];
            let (a, b) = subs.choose(rng).unwrap();
            return line.replacen(a, b, 1);
        }
    }
    chars.into_iter().collect()
}

#[test]
fn fuzz_corpus_agrees_with_the_grammar() {
    let re = grammar();
    for seed in 0..6u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut valid = 0;
        for _ in 0..500 {
            let base = random_line(&mut rng);
            let line = if rng.gen_bool(0.4) { mutate(&mut rng, &base) } else { base };
            let parsed = Triple::parse_line(&line);
            let expect = re.is_match(&line);
            assert_eq!(parsed.is_ok(), expect, "seed {seed}: {line:?} -> {parsed:?}");
            if let Ok(Some(t)) = parsed {
                valid += 1;
                // The canonical rendering parses back to the same triple.
                assert_eq!(Triple::parse_line(&t.to_string()).unwrap(), Some(t));
            }
        }
        assert!(valid > 250, "seed {seed}: only {valid} valid lines");
    }
}

#[test]
fn three_corrupted_lines_in_a_thousand() {
    let re = grammar();
    let mut lines: Vec<String> = (0..1000)
        .map(|i| format!("<http://dbpedia.org/resource/E{i}> <http://p.org/p{}> <http://dbpedia.org/resource/E{}> .", i % 7, (i * 13) % 1000))
        .collect();
    let broken = [17usize, 500, 999];
    lines[17] = lines[17].trim_end_matches(" .").to_string();
    lines[500] = lines[500].replacen("http:", "http", 1);
    lines[999] = lines[999].replacen('>', " >", 1);
    for (i, l) in lines.iter().enumerate() {
        assert_eq!(re.is_match(l), !broken.contains(&i), "oracle disagrees on line {i}");
    }
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("dump.nt");
    std::fs::write(&plain, lines.join("\n") + "\n").unwrap();
    let gz = dir.path().join("dump.nt.data");
    let mut enc = flate2::write::GzEncoder::new(std::fs::File::create(&gz).unwrap(), flate2::Compression::fast());
    enc.write_all((lines.join("\n") + "\n").as_bytes()).unwrap();
    enc.finish().unwrap();
    for path in [&plain, &gz] {
        let input = fdistinct::ingest::open_input(path).unwrap();
        let mut reader = TripleReader::new(input, ParseMode::Lenient);
        let triples: Vec<Triple> = reader.by_ref().map(|t| t.unwrap()).collect();
        assert_eq!(triples.len(), 997);
        let diag_lines: Vec<String> = reader.diagnostics().iter().map(|d| d.context.clone()).collect();
        assert_eq!(diag_lines, ["<stream>:18", "<stream>:501", "<stream>:1000"]);
        let store = EntityStore::ingest_files(std::slice::from_ref(path), &IngestConfig::default(), ParseMode::Lenient).unwrap();
        assert_eq!(store.stats().malformed_lines, 3);
        assert_eq!(store.stats().triples, 997);
    }
    let strict = EntityStore::ingest_files(&[plain], &IngestConfig::default(), ParseMode::Strict);
    assert!(strict.is_err());
}

fn random_triples(n: usize, seed: u64) -> Vec<Triple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let node = |rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..200);
        if i < 180 {
            Node::Iri(format!("http://dbpedia.org/resource/N{i}"))
        } else if i < 190 {
            Node::Iri(format!("http://other.org/N{i}"))
        } else {
            Node::Blank(format!("b{i}"))
        }
    };
    (0..n)
        .map(|_| {
            let subject = node(&mut rng);
            let predicate = format!("http://p.org/p{}", rng.gen_range(0..20));
            let object = match rng.gen_range(0..10) {
                0..=2 => Term::Literal(Literal { lexical: "v".into(), lang: None, datatype: None }),
                _ => match node(&mut rng) {
                    Node::Iri(i) => Term::Iri(i),
                    Node::Blank(b) => Term::Blank(b),
                },
            };
            Triple { subject, predicate, object }
        })
        .collect()
}

#[test]
fn degrees_match_brute_force_counts() {
    let triples = random_triples(10_000, 3);
    for literals in [true, false] {
        let cfg = IngestConfig { count_literal_objects: literals, ..Default::default() };
        let store = EntityStore::from_triples(&triples, cfg);
        let mut out: HashMap<(String, String), u64> = HashMap::new();
        let mut inn: HashMap<(String, String), u64> = HashMap::new();
        for t in &triples {
            if literals || !t.object.is_literal() {
                *out.entry((t.subject.key(), t.predicate.clone())).or_default() += 1;
            }
            if let Some(o) = t.object.as_node() {
                *inn.entry((o.key(), t.predicate.clone())).or_default() += 1;
            }
        }
        let mut seen_out = 0;
        let mut seen_in = 0;
        for r in store.iter() {
            for (p, n) in &r.out_degree {
                assert_eq!(out[&(r.iri.clone(), p.clone())], *n);
                seen_out += 1;
            }
            for (p, n) in &r.in_degree {
                assert_eq!(inn[&(r.iri.clone(), p.clone())], *n);
                seen_in += 1;
            }
        }
        assert_eq!(seen_out, out.len());
        assert_eq!(seen_in, inn.len());
        let total_out: u64 = store.iter().map(|r| r.total_out()).sum();
        let total_in: u64 = store.iter().map(|r| r.total_in()).sum();
        let non_literal = triples.iter().filter(|t| !t.object.is_literal()).count() as u64;
        assert_eq!(total_in, non_literal);
        if literals {
            assert_eq!(total_out, triples.len() as u64);
        } else {
            assert_eq!(total_out, non_literal);
        }
    }
}

#[test]
fn scoping_restricts_degree_counts() {
    let triples = random_triples(2_000, 9);
    let cfg = IngestConfig { scope_prefixes: vec!["http://dbpedia.org/".into()], ..Default::default() };
    let store = EntityStore::from_triples(&triples, cfg);
    let outside = |n: &Node| matches!(n, Node::Iri(i) if !i.starts_with("http://dbpedia.org/"));
    let expected_in = triples
        .iter()
        .filter(|t| !outside(&t.subject) && t.object.as_node().is_some_and(|o| !outside(&o)))
        .count() as u64;
    assert_eq!(store.iter().map(|r| r.total_in()).sum::<u64>(), expected_in);
}

#[test]
fn reingest_is_idempotent() {
    let triples = random_triples(3_000, 4);
    let text: String = triples.iter().map(|t| format!("{t}\n")).collect();
    let dir = tempfile::tempdir().unwrap();
    let nt = dir.path().join("a.nt");
    std::fs::write(&nt, &text).unwrap();
    let a = EntityStore::ingest_files(std::slice::from_ref(&nt), &IngestConfig::default(), ParseMode::Strict).unwrap();
    let b = EntityStore::ingest_files(&[nt], &IngestConfig::default(), ParseMode::Strict).unwrap();
    assert_eq!(a, b);
    let (pa, pb) = (dir.path().join("a.store"), dir.path().join("b.store"));
    a.save(&pa).unwrap();
    b.save(&pb).unwrap();
    assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
    assert_eq!(EntityStore::load(&pa).unwrap(), a);
    let parsed = parse_ntriples(text.as_bytes(), ParseMode::Strict).unwrap();
    assert_eq!(parsed.triples, triples);
}

#[test]
fn split_files_equal_one_file() {
    let triples = random_triples(4_000, 5);
    let dir = tempfile::tempdir().unwrap();
    let whole = dir.path().join("all.nt");
    std::fs::write(&whole, triples.iter().map(|t| format!("{t}\n")).collect::<String>()).unwrap();
    let mut parts = Vec::new();
    for (i, chunk) in triples.chunks(1000).enumerate() {
        let p = dir.path().join(format!("part{i}.nt"));
        std::fs::write(&p, chunk.iter().map(|t| format!("{t}\n")).collect::<String>()).unwrap();
        parts.push(p);
    }
    let cfg = IngestConfig::default();
    let one = EntityStore::ingest_files(&[whole], &cfg, ParseMode::Strict).unwrap();
    let many = EntityStore::ingest_files(&parts, &cfg, ParseMode::Strict).unwrap();
    let recs = |s: &EntityStore| s.iter().cloned().collect::<Vec<_>>();
    assert_eq!(recs(&one), recs(&many));
}
