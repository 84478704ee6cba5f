//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p lughat --test acceptance`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::oracle::{mixed_string, reference_scan};
use common::{op_strategy, transcript, Op, Pools, E2S, S2E};
use lughat::storefile::{self, encode_store};
use lughat::tsv;
use lughat_core::text::display_form;
use lughat_core::{tokenize_sindhi, DictionaryKind, EntryRecord, EntryStore, HashStore, Lexicon, SindhiRepertoire, SortedStore};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use unicode_normalization::UnicodeNormalization;

type Outcome = Result<String, String>;

/// Fixed seed, so every run checks the same cases.
fn runner() -> TestRunner {
    TestRunner::deterministic()
}

fn sample<S: Strategy>(runner: &mut TestRunner, strategy: &S) -> S::Value {
    strategy.new_tree(runner).expect("strategy generates").current()
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

struct Synthetic {
    headword: String,
    pronunciation: String,
    glosses: Vec<String>,
}

fn synthetic_entries(n: usize) -> Vec<Synthetic> {
    let letters = SindhiRepertoire::shipped().letters().to_vec();
    let word = prop::collection::vec(prop::sample::select(letters), 2..7).prop_map(|c| c.into_iter().collect::<String>());
    let gloss = prop::collection::vec(word, 1..3).prop_map(|w| w.join(" "));
    let entry = ("[a-z]{3,9}", prop::collection::vec(gloss, 1..4), "[a-z]{0,6}");
    let mut runner = runner();
    (0..n)
        .map(|i| {
            let (stem, glosses, pronunciation) = sample(&mut runner, &entry);
            Synthetic { headword: format!("{stem}{i}"), pronunciation, glosses }
        })
        .collect()
}

fn capacity(dir: &Path) -> Outcome {
    const ENTRIES: usize = 50_000;
    const LOOKUPS: usize = 10_000;
    let entries = synthetic_entries(ENTRIES);
    let mut input = String::from(tsv::HEADER);
    input.push('\n');
    for e in &entries {
        let record = EntryRecord::new(e.headword.as_str())
            .with_pronunciation(e.pronunciation.as_str())
            .with_grammar("noun")
            .with_sindhi_glosses(e.glosses.iter().map(String::as_str));
        input.push_str(&tsv::format_line(&record));
        input.push('\n');
    }
    let tsv_path = dir.join("capacity.tsv");
    let store = dir.join("capacity.store");
    fs::write(&tsv_path, input).map_err(|e| e.to_string())?;

    let started = Instant::now();
    let mut lex = Lexicon::<HashStore>::new();
    let report = tsv::import_tsv(&mut lex, &tsv_path, E2S).map_err(|e| e.to_string())?;
    storefile::save(&lex, &store).map_err(|e| e.to_string())?;
    let loaded: Lexicon<HashStore> = storefile::load(&store).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();

    ensure(report.errors.is_empty(), || format!("{} import errors, first {}", report.errors.len(), report.errors[0]))?;
    ensure(loaded.len(E2S) == ENTRIES, || format!("{} E2S entries after load", loaded.len(E2S)))?;
    let consistency = loaded.check_consistency();
    ensure(consistency.is_ok(), || format!("{} consistency violations", consistency.violations.len()))?;
    ensure(loaded.snapshot() == lex.snapshot(), || "loaded lexicon differs from the imported one".into())?;

    let mut runner = runner();
    let mut correct = 0;
    for _ in 0..LOOKUPS {
        let i = sample(&mut runner, &(0..ENTRIES));
        let e = &entries[i];
        let Some(record) = loaded.get(E2S, &e.headword) else { continue };
        let glosses_match = record.sindhi_glosses == e.glosses && record.pronunciation == e.pronunciation;
        let reverse_ok = e.glosses.iter().flat_map(|g| tokenize_sindhi(g)).all(|t| {
            loaded.get(S2E, &t.text).is_some_and(|r| r.derived_from.iter().any(|k| k.as_str() == e.headword))
        });
        if record.headword == e.headword && glosses_match && reverse_ok {
            correct += 1;
        }
    }
    ensure(correct == LOOKUPS, || format!("{correct}/{LOOKUPS} lookups correct"))?;
    ensure(elapsed < Duration::from_secs(60), || format!("import+save+load took {:.1} s", elapsed.as_secs_f64()))?;
    Ok(format!(
        "{ENTRIES} entries ({} derived), import+save+load {:.1} s (limit 60 s), {correct}/{LOOKUPS} lookups correct",
        loaded.len(S2E),
        elapsed.as_secs_f64()
    ))
}

fn derivation() -> Outcome {
    const SEQUENCES: usize = 1_000;
    let pools = Pools::new(200, 200);
    let sequences = prop::collection::vec(op_strategy(200, 200), 1..40);
    let mut runner = runner();
    let mut steps = 0;
    for n in 0..SEQUENCES {
        let ops: Vec<Op> = sample(&mut runner, &sequences);
        let mut lex = Lexicon::<HashStore>::new();
        for (i, op) in ops.iter().enumerate() {
            pools.apply(&mut lex, op);
            steps += 1;
            let report = lex.check_consistency();
            ensure(report.is_ok(), || format!("sequence {n} step {i} ({op:?}): {}", report.violations[0]))?;
        }
    }
    Ok(format!("{SEQUENCES} sequences, {steps} steps over a 200-word pool, 0 violations"))
}

fn store_equivalence() -> Outcome {
    const CASES: usize = 300;
    let pools = Pools::new(30, 40);
    let sequences = prop::collection::vec(op_strategy(30, 40), 0..50);
    let mut runner = runner();
    for n in 0..CASES {
        let ops: Vec<Op> = sample(&mut runner, &sequences);
        let hash = transcript::<HashStore>(&pools, &ops);
        let sorted = transcript::<SortedStore>(&pools, &ops);
        ensure(hash == sorted, || format!("case {n}: transcripts differ"))?;
        let mut a = Lexicon::<HashStore>::new();
        let mut b = Lexicon::<SortedStore>::new();
        for op in &ops {
            pools.apply(&mut a, op);
            pools.apply(&mut b, op);
        }
        ensure(encode_store(&a) == encode_store(&b), || format!("case {n}: store files differ"))?;
    }
    Ok(format!("{CASES} operation sequences: transcripts and store files byte-equal"))
}

fn tokenizer() -> Outcome {
    const CASES: usize = 10_000;
    let mut runner = runner();
    let strings = mixed_string(40);
    let mut mismatches = 0;
    let mut first = None;
    for _ in 0..CASES {
        let raw = sample(&mut runner, &strings);
        for text in [raw.clone(), display_form(&raw)] {
            if tokenize_sindhi(&text) != reference_scan(&text) {
                mismatches += 1;
                first.get_or_insert(text);
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches, first {first:?}"))?;
    Ok(format!("{CASES} random strings (raw and display form), 0 mismatches"))
}

fn persistence(dir: &Path) -> Outcome {
    const CASES: usize = 500;
    let pools = Pools::new(30, 40);
    let sequences = prop::collection::vec(op_strategy(30, 40), 0..40);
    let mut runner = runner();
    let path = dir.join("persist.store");
    let mut crashes = 0;
    for n in 0..CASES {
        let ops: Vec<Op> = sample(&mut runner, &sequences);
        let mut lex = Lexicon::<HashStore>::new();
        for op in &ops {
            pools.apply(&mut lex, op);
        }
        storefile::save(&lex, &path).map_err(|e| format!("case {n}: {e}"))?;
        let first = fs::read(&path).map_err(|e| e.to_string())?;
        storefile::save(&lex, &path).map_err(|e| format!("case {n}: {e}"))?;
        ensure(fs::read(&path).map_err(|e| e.to_string())? == first, || format!("case {n}: two saves differ"))?;

        let loaded: Lexicon<HashStore> = storefile::load(&path).map_err(|e| format!("case {n}: {e}"))?;
        ensure(loaded.snapshot() == lex.snapshot(), || format!("case {n}: load(save(L)) differs from L"))?;
        ensure(encode_store(&loaded) == first, || format!("case {n}: save(load(save(L))) differs"))?;

        // crash between writing the temp file and renaming it over the store
        let mut next = loaded;
        next.put(E2S, EntryRecord::new(format!("crash{n}")).with_sindhi_glosses(["پاڻي"])).map_err(|e| e.to_string())?;
        let crashed = storefile::save_with(&next, &path, |_| Err(std::io::Error::other("injected crash")));
        ensure(crashed.is_err(), || format!("case {n}: injected crash did not fail the save"))?;
        ensure(fs::read(&path).map_err(|e| e.to_string())? == first, || format!("case {n}: crash changed the store"))?;
        crashes += 1;
    }
    let leftovers = fs::read_dir(dir).map_err(|e| e.to_string())?.filter_map(Result::ok).filter(|e| e.file_name().to_string_lossy().ends_with(".tmp")).count();
    ensure(leftovers == 0, || format!("{leftovers} temp files left behind"))?;
    Ok(format!("{CASES} randomized lexicons: deterministic saves, exact round trips, {crashes} injected crashes left the prior file intact"))
}

fn variants(headword: &str, kind: DictionaryKind) -> Vec<(&'static str, String)> {
    let nfd: String = headword.nfd().collect();
    let chars: Vec<char> = headword.chars().collect();
    let mut padded = String::from('\u{0640}');
    for (i, c) in chars.iter().enumerate() {
        padded.push(*c);
        if i + 1 < chars.len() && !c.is_whitespace() && !chars[i + 1].is_whitespace() {
            padded.push('\u{0640}');
        }
    }
    let mut out = vec![("NFD", nfd), ("tatweel", padded)];
    if kind == E2S {
        let mixed: String = chars
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.to_uppercase().collect::<String>() } else { c.to_lowercase().collect() })
            .collect();
        out.push(("mixed case", mixed));
    }
    out
}

fn normalization() -> Outcome {
    let pools = Pools::new(120, 160);
    let mut runner = runner();
    let ops: Vec<Op> = sample(&mut runner, &prop::collection::vec(op_strategy(120, 160), 600..601));
    let mut lex = Lexicon::<HashStore>::new();
    for op in &ops {
        pools.apply(&mut lex, op);
    }
    let accented = [("Café", "قهوه"), ("naïve", "ڀولو"), ("Zoë", "زوئي"), ("Ångström", "آنگسٽرام"), ("ÉCOLE", "اسڪول")];
    for (english, sindhi) in accented {
        lex.put(E2S, EntryRecord::new(english).with_sindhi_glosses([sindhi])).map_err(|e| e.to_string())?;
    }
    let mut checked = 0;
    for kind in DictionaryKind::ALL {
        for (key, record) in lex.sorted_entries(kind) {
            for (label, variant) in variants(&record.headword, kind) {
                let found = lex.get(kind, &variant);
                ensure(found == Some(record), || format!("{kind} {key:?}: {label} variant {variant:?} did not resolve"))?;
                checked += 1;
            }
        }
    }
    let decomposing = lex
        .store(S2E)
        .iter()
        .filter(|(_, r)| r.headword.nfd().collect::<String>() != r.headword)
        .count();
    ensure(decomposing > 0, || "no stored Sindhi headword has a distinct NFD form".into())?;
    Ok(format!(
        "{} E2S + {} S2E entries, {checked} variant lookups (NFD, tatweel, mixed case) all resolved; {decomposing} Sindhi headwords decompose under NFD",
        lex.len(E2S),
        lex.len(S2E)
    ))
}

fn cli_round_trip(dir: &Path) -> Outcome {
    let store = dir.join("cli.store");
    let run = |args: &[&str]| -> Result<(i32, String), String> {
        let output = Command::new(env!("CARGO_BIN_EXE_lughat"))
            .arg("--store")
            .arg(&store)
            .args(args)
            .env_remove("LUGHAT_STORE")
            .output()
            .map_err(|e| e.to_string())?;
        Ok((output.status.code().unwrap_or(-1), String::from_utf8_lossy(&output.stdout).into_owned()))
    };
    let mut log = String::new();
    let mut step = |args: &[&str], expected: i32, must_print: Option<&str>| -> Result<(), String> {
        let (code, stdout) = run(args)?;
        write!(log, " {}={code}", args.iter().find(|a| !a.starts_with('-')).unwrap()).unwrap();
        ensure(code == expected, || format!("`lughat {}` exited {code}, expected {expected}", args.join(" ")))?;
        if let Some(text) = must_print {
            ensure(stdout.contains(text), || format!("`lughat {}` did not print {text:?}", args.join(" ")))?;
        }
        Ok(())
    };
    step(&["init"], 0, None)?;
    let initial = fs::read(&store).map_err(|e| e.to_string())?;
    step(&["add", "--word", "water", "--grammar", "noun", "--sindhi", "پاڻي"], 0, Some("created"))?;
    step(&["get", "water"], 0, Some("پاڻي"))?;
    step(&["get", "--kind", "s2e", "پاڻي"], 0, Some("water"))?;
    step(&["list"], 0, Some("water"))?;
    step(&["list", "--kind", "s2e"], 0, Some("پاڻي"))?;
    step(&["delete", "water"], 0, Some("deleted"))?;
    step(&["get", "water"], 1, None)?;
    step(&["get", "--kind", "s2e", "پاڻي"], 1, None)?;
    step(&["add", "--word", "fire", "--sindhi", "باهq"], 2, None)?;
    step(&["list", "--limit", "lots"], 4, None)?;
    let last = fs::read(&store).map_err(|e| e.to_string())?;
    ensure(last == initial, || "final store differs from the initial one".into())?;
    Ok(format!("exit codes{log}; final store byte-identical ({} bytes)", last.len()))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("capacity", Box::new(|| capacity(dir.path()))),
        ("derivation correctness", Box::new(derivation)),
        ("store-oracle equivalence", Box::new(store_equivalence)),
        ("tokenizer oracle", Box::new(tokenizer)),
        ("persistence", Box::new(|| persistence(dir.path()))),
        ("normalization", Box::new(normalization)),
        ("CLI end-to-end", Box::new(|| cli_round_trip(dir.path()))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {}", p.downcast_ref::<String>().cloned().unwrap_or_default())));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1} s]"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {name}: {reason} [{secs:.1} s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
