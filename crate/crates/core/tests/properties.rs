use std::collections::{BTreeSet, HashMap};

use ngramfix_core::*;
use proptest::collection::vec;
use proptest::prelude::*;

fn word() -> impl Strategy<Value = String> {
    "[a-f]{1,6}"
}

fn corpus() -> impl Strategy<Value = String> {
    vec(vec(word(), 0..12).prop_map(|ws| ws.join(" ")), 0..12).prop_map(|ls| ls.join("\n"))
}

fn tok(s: &str) -> Token {
    Token::new(s).unwrap()
}

fn brute_force_candidates(error: &str, index: &NgramIndex, k: usize) -> Vec<(String, usize, u64)> {
    let mut all: Vec<Candidate> = index
        .vocab()
        .filter(|w| *w != error)
        .map(|w| Candidate {
            word: tok(w),
            shared: shared_bigram_count(error, w),
            unigram_count: index.unigram_count(w),
        })
        .filter(|c| c.shared > 0)
        .collect();
    all.sort_by(Candidate::rank_cmp);
    all.truncate(k);
    all.into_iter()
        .map(|c| (c.word.into_string(), c.shared, c.unigram_count))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_matches_unigram_count(text in corpus(), probe in word()) {
        let idx = build_index(text.as_bytes(), 5).unwrap();
        let t = tok(&probe);
        prop_assert_eq!(idx.unigram_exists(&probe), idx.count(&[t.as_str()]).unwrap() >= 1);
        prop_assert_eq!(
            NgramBackend::unigram_exists(&idx, &t).unwrap(),
            NgramBackend::unigram_count(&idx, &t).unwrap() > 0
        );
    }

    #[test]
    fn postings_are_complete_and_sound(text in corpus()) {
        let idx = build_index(text.as_bytes(), 2).unwrap();
        let mut seen: HashMap<CharBigram, BTreeSet<String>> = HashMap::new();
        for w in idx.vocab() {
            for g in char_bigrams(w) {
                seen.entry(g).or_default().insert(w.to_owned());
            }
        }
        for (g, expected) in &seen {
            let got = idx.unigrams_containing_bigram(*g);
            let mut sorted = got.clone();
            sorted.sort_unstable();
            prop_assert_eq!(&got, &sorted);
            prop_assert!(got.iter().all(|w| g.occurs_in(w)));
            prop_assert_eq!(got.into_iter().map(str::to_owned).collect::<BTreeSet<_>>(), expected.clone());
        }
    }

    #[test]
    fn extension_counts_never_exceed_prefix(text in corpus()) {
        let idx = build_index(text.as_bytes(), 5).unwrap();
        let vocab: Vec<String> = idx.vocab().map(str::to_owned).collect();
        for order in 1..5 {
            for (gram, count) in idx.iter_order(order) {
                let mut total = 0;
                for w in &vocab {
                    let mut ext: Vec<&str> = gram.clone();
                    ext.push(w);
                    total += idx.count(&ext).unwrap();
                }
                prop_assert!(count >= total, "{:?}: {} < {}", gram, count, total);
            }
        }
    }

    #[test]
    fn every_stored_gram_has_exact_length(text in corpus()) {
        let idx = build_index(text.as_bytes(), 5).unwrap();
        for order in 1..=5 {
            for (gram, count) in idx.iter_order(order) {
                prop_assert_eq!(gram.len(), order);
                prop_assert!(count >= 1);
            }
        }
        prop_assert_eq!(idx.manifest().distinct_unigrams, idx.vocab().len());
    }

    #[test]
    fn build_is_deterministic(text in corpus()) {
        let a = build_index(text.as_bytes(), 5).unwrap();
        let b = build_index(text.as_bytes(), 5).unwrap();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        save_index(&a, dir_a.path()).unwrap();
        save_index(&b, dir_b.path()).unwrap();
        for name in ["manifest.tsv", "1gram.tsv", "2gram.tsv", "3gram.tsv", "4gram.tsv", "5gram.tsv"] {
            let fa = std::fs::read(dir_a.path().join(name)).unwrap();
            let fb = std::fs::read(dir_b.path().join(name)).unwrap();
            prop_assert_eq!(fa, fb);
        }
    }

    #[test]
    fn save_load_preserves_lookups(text in corpus(), probes in vec(vec(word(), 1..=5), 1..40)) {
        let idx = build_index(text.as_bytes(), 5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        save_index(&idx, dir.path()).unwrap();
        let back = load_index(dir.path()).unwrap();
        prop_assert_eq!(back.manifest(), idx.manifest());
        for p in &probes {
            prop_assert_eq!(back.count(p).unwrap(), idx.count(p).unwrap());
        }
        for order in 1..=5 {
            for (gram, count) in idx.iter_order(order) {
                prop_assert_eq!(back.count(&gram).unwrap(), count);
            }
        }
    }

    #[test]
    fn shared_count_is_symmetric_and_bounded(a in word(), b in word()) {
        let ab = shared_bigram_count(&a, &b);
        prop_assert_eq!(ab, shared_bigram_count(&b, &a));
        prop_assert!(ab <= char_bigrams(&a).len().min(char_bigrams(&b).len()));
        prop_assert_eq!(shared_bigram_count(&a, &a), char_bigrams(&a).len());
    }

    #[test]
    fn candidates_match_brute_force(text in corpus(), error in "[a-f]{2,7}", k in 1usize..10) {
        let idx = build_index(text.as_bytes(), 1).unwrap();
        let set = generate_candidates(&tok(&error), &idx, k).unwrap();
        let got: Vec<(String, usize, u64)> = set
            .ranked
            .iter()
            .map(|c| (c.word.as_str().to_owned(), c.shared, c.unigram_count))
            .collect();
        prop_assert_eq!(got, brute_force_candidates(&error, &idx, k));
    }

    #[test]
    fn superset_word_ranks_first(error in "[a-f]{2,6}", others in vec(word(), 0..30)) {
        // "x" guarantees the superset word differs from the error itself.
        let superset = format!("{error}x");
        let text = format!("{} {}", superset, others.join(" "));
        let idx = build_index(text.as_bytes(), 1).unwrap();
        let set = generate_candidates(&tok(&error), &idx, 8).unwrap();
        let full = char_bigrams(&error).len();
        prop_assert_eq!(set.ranked[0].shared, full);
    }

    #[test]
    fn nonword_detection_is_exact(text in corpus(), probe in vec(word(), 0..30)) {
        let idx = build_index(text.as_bytes(), 1).unwrap();
        let transcript = tokenize(&probe.join(" "));
        let got: Vec<usize> = detect_nonword_errors(&transcript, &idx)
            .unwrap()
            .iter()
            .map(|e| e.position)
            .collect();
        let expected: Vec<usize> = transcript
            .tokens()
            .iter()
            .enumerate()
            .filter(|(_, t)| !idx.unigram_exists(t.as_str()))
            .map(|(i, _)| i)
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn argmax_and_membership_hold(text in corpus(), probe in vec(word(), 1..12)) {
        let idx = build_index(text.as_bytes(), 5).unwrap();
        let input = probe.join(" ");
        let out = correct_transcript(&input, &idx, &PipelineConfig::default()).unwrap();
        let transcript = tokenize(&input);
        for d in &out.decisions {
            let Some(chosen) = &d.chosen else { continue };
            prop_assert!(d.candidates.iter().any(|c| &c.word == chosen));
            prop_assert!((1..=5).contains(&d.backoff_order));
            // Re-query every candidate at the deciding order.
            let prefix_len = d.error.position.min(4).min(d.backoff_order - 1);
            let prefix = &transcript.tokens()[d.error.position - prefix_len..d.error.position];
            let count_of = |w: &Token| {
                let mut q = prefix.to_vec();
                q.push(w.clone());
                idx.count(&q).unwrap()
            };
            let best = count_of(chosen);
            prop_assert!(best > 0);
            for c in &d.candidates {
                prop_assert!(count_of(&c.word) <= best);
            }
            if d.error.position >= 4 && d.backoff_order < 5 {
                // Backoff only happens when no candidate had a 5-gram.
                for c in &d.candidates {
                    let mut q = transcript.tokens()[d.error.position - 4..d.error.position].to_vec();
                    q.push(c.word.clone());
                    prop_assert_eq!(idx.count(&q).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn duplicating_the_corpus_keeps_choices(text in corpus(), probe in vec(word(), 1..12)) {
        let once = build_index(text.as_bytes(), 5).unwrap();
        let twice = build_index(format!("{text}\n{text}").as_bytes(), 5).unwrap();
        let input = probe.join(" ");
        let a = correct_transcript(&input, &once, &PipelineConfig::default()).unwrap();
        let b = correct_transcript(&input, &twice, &PipelineConfig::default()).unwrap();
        prop_assert_eq!(a.corrected_text, b.corrected_text);
    }

    #[test]
    fn clean_text_is_byte_identical(text in corpus(), picks in vec(any::<prop::sample::Index>(), 0..20)) {
        let idx = build_index(text.as_bytes(), 5).unwrap();
        let vocab: Vec<&str> = idx.vocab().collect();
        prop_assume!(!vocab.is_empty());
        let input: Vec<&str> = picks.iter().map(|i| vocab[i.index(vocab.len())]).collect();
        let input = input.join("  ");
        let out = correct_transcript(&input, &idx, &PipelineConfig::default()).unwrap();
        prop_assert_eq!(out.corrected_text, input);
        prop_assert!(out.decisions.is_empty());
    }

    #[test]
    fn injection_is_seeded_and_truthful(text in corpus(), seed in any::<u64>(), nw in 0.0f64..0.5, rw in 0.0f64..0.5) {
        let idx = build_index(text.as_bytes(), 1).unwrap();
        let spec = CorruptionSpec { nonword_rate: nw, realword_rate: rw, seed, min_shared_bigrams: 1 };
        let input = text.replace('\n', " ");
        let a = inject_errors(&input, &idx, &spec).unwrap();
        let b = inject_errors(&input, &idx, &spec).unwrap();
        prop_assert_eq!(&a, &b);
        let original = tokenize(&input);
        let corrupted = tokenize(&a.corrupted_text);
        prop_assert_eq!(original.len(), corrupted.len());
        prop_assert!(a.records.len() <= original.len());
        for r in &a.records {
            prop_assert_ne!(&r.original, &r.corrupted);
            prop_assert_eq!(&corrupted.tokens()[r.position], &r.corrupted);
            let known = idx.unigram_exists(r.corrupted.as_str());
            match r.kind {
                CorruptionKind::NonWord => prop_assert!(!known),
                CorruptionKind::RealWord => prop_assert!(known),
            }
        }
    }
}

#[test]
fn corruption_rate_is_within_three_sigma() {
    // Long words always admit an OOV edit sharing two bigrams, so every
    // selected token is corrupted and the count is binomial.
    let words = [
        "harpooneer",
        "whaleboat",
        "forecastle",
        "leviathan",
        "mariners",
    ];
    let text: Vec<&str> = (0..1000).map(|i| words[i % words.len()]).collect();
    let text = text.join(" ");
    let idx = build_index(text.as_bytes(), 1).unwrap();
    let p: f64 = 0.1;
    let sigma = (1000.0 * p * (1.0 - p)).sqrt();
    for seed in 0..5 {
        let spec = CorruptionSpec {
            nonword_rate: p,
            seed,
            ..CorruptionSpec::default()
        };
        let n = inject_errors(&text, &idx, &spec).unwrap().records.len() as f64;
        assert!(
            (n - 1000.0 * p).abs() <= 3.0 * sigma,
            "seed {seed}: {n} corruptions"
        );
    }
}

#[test]
fn seed_reproduces_shows_to_shaws() {
    let idx = build_index("episodes of your favorite and more".as_bytes(), 1).unwrap();
    let spec = CorruptionSpec {
        nonword_rate: 1.0,
        seed: SHAWS_SEED,
        ..CorruptionSpec::default()
    };
    let inj = inject_errors("shows", &idx, &spec).unwrap();
    assert_eq!(inj.corrupted_text, "shaws");
    assert_eq!(inj.records[0].kind, CorruptionKind::NonWord);
}

/// Lowest seed whose edit of "shows" is the substitution o -> a (found by
/// scanning seeds 0..).
const SHAWS_SEED: u64 = 816;

#[test]
fn idempotent_on_worked_fixture() {
    let mut corpus = "watch episodes of your favorite shows and more\n".repeat(7);
    for w in [
        "shawls", "shays", "shank", "sham", "haws", "hawk", "saws", "sawn", "maws", "hews",
    ] {
        corpus.push_str(w);
        corpus.push('\n');
    }
    let idx = build_index(corpus.as_bytes(), 5).unwrap();
    let config = PipelineConfig::default();
    let once = correct_transcript(
        "watch episodes of your favorite shaws and more",
        &idx,
        &config,
    )
    .unwrap()
    .corrected_text;
    let twice = correct_transcript(&once, &idx, &config)
        .unwrap()
        .corrected_text;
    assert_eq!(once, twice);
}

#[test]
fn lookup_failures_propagate() {
    struct Broken;
    impl NgramBackend for Broken {
        fn max_order(&self) -> usize {
            5
        }
        fn ngram_count(&self, _: &[Token]) -> Result<u64, LookupError> {
            Err(LookupError::Transport("down".into()))
        }
        fn unigrams_containing_bigram(&self, _: CharBigram) -> Result<Vec<Token>, LookupError> {
            Err(LookupError::Transport("down".into()))
        }
    }
    let err = correct_transcript("anything", &Broken, &PipelineConfig::default()).unwrap_err();
    assert_eq!(err, LookupError::Transport("down".into()));
    assert!(detect_nonword_errors(&tokenize("a"), &Broken).is_err());
    assert!(detect_nonword_errors(&tokenize(""), &Broken)
        .unwrap()
        .is_empty());
}
