use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lexcorpus::freq::{count_sample, merge, rank, FrequencyTable, RankedList};
use lexcorpus::ingest::FieldCode;
use lexcorpus::lemma::Token;
use lexcorpus::lexicon::{
    categorize, classify, load_lexicon, overlap, Category, ReferenceWordList,
};
use lexcorpus::normalize::TransliterationTable;
use lexcorpus::pipeline::{count_corpus, LemmaPipeline, Parallelism};
use lexcorpus::stats::{coverage, zipf_constants, DEFAULT_CUTOFFS};
use lexcorpus::synth::{corpus, word, CorpusSpec};

fn spec(seed: u64, samples: usize, tokens: usize) -> CorpusSpec {
    CorpusSpec {
        seed,
        samples,
        tokens_per_sample: tokens,
        vocabulary: 5000,
        exponent: 1.0,
    }
}

/// Independent recount: whitespace split per sample, keyed by (word, field).
fn naive(samples: &[lexcorpus::ingest::RawSample]) -> BTreeMap<(String, FieldCode), u64> {
    let mut out = BTreeMap::new();
    for s in samples {
        for w in s.body.split(' ').filter(|w| !w.is_empty()) {
            *out.entry((w.to_owned(), s.metadata.field)).or_insert(0) += 1;
        }
    }
    out
}

fn flatten(table: &FrequencyTable) -> BTreeMap<(String, FieldCode), u64> {
    let mut out = BTreeMap::new();
    for (lemma, e) in table.iter() {
        for f in FieldCode::ALL {
            if e.fields.get(f) > 0 {
                out.insert((lemma.to_owned(), f), e.fields.get(f));
            }
        }
    }
    out
}

#[test]
fn ten_thousand_token_stream_equals_naive_recount() {
    let samples = corpus(&spec(11, 5, 2000));
    let counts = count_corpus(&samples, &LemmaPipeline::default(), Parallelism::Serial).unwrap();
    assert_eq!(counts.table.corpus_total(), 10_000);
    assert_eq!(flatten(&counts.table), naive(&samples));
}

#[test]
fn fold_of_single_sample_tables_equals_concatenated_stream() {
    let samples = corpus(&spec(5, 500, 40));
    let pipeline = LemmaPipeline::default();
    let folded = samples
        .iter()
        .map(|s| {
            let (tokens, _) = pipeline.lemmatize(&s.body).unwrap();
            count_sample(&tokens, s.metadata.field)
        })
        .fold(FrequencyTable::new(), merge);

    let mut stream = FrequencyTable::new();
    for s in &samples {
        for w in s.body.split(' ') {
            let t = Token::new(w, 0);
            stream.record(&t.lemma, s.metadata.field, &t.flags);
        }
    }
    assert_eq!(folded, stream);
    assert_eq!(folded.corpus_total(), 20_000);
}

#[test]
fn coverage_equals_direct_block_summation() {
    let samples = corpus(&CorpusSpec {
        vocabulary: 8000,
        ..spec(3, 100, 2000)
    });
    let counts = count_corpus(&samples, &LemmaPipeline::default(), Parallelism::Parallel).unwrap();
    let list: RankedList<f64> = rank(&counts.table);
    let curve = coverage(&list, &DEFAULT_CUTOFFS).unwrap();

    let mut by_count: Vec<(u64, String)> = naive(&samples)
        .into_iter()
        .fold(BTreeMap::<String, u64>::new(), |mut m, ((w, _), n)| {
            *m.entry(w).or_insert(0) += n;
            m
        })
        .into_iter()
        .map(|(w, n)| (n, w))
        .collect();
    by_count.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut start = 0;
    for (i, &cutoff) in DEFAULT_CUTOFFS.iter().enumerate() {
        let end = cutoff.min(by_count.len());
        let block: u64 = by_count[start.min(end)..end].iter().map(|p| p.0).sum();
        assert_eq!(curve.block_tokens.as_ref().unwrap()[i], block);
        let share = block as f64 * 100.0 / 200_000.0;
        assert!((curve.block_shares[i] - share).abs() < 1e-9);
        start = end;
    }
}

#[test]
fn uniform_four_thousand_types_give_equal_blocks() {
    let list: RankedList<f64> = RankedList::from_counts((0..4000).map(|i| (word(i), 1)));
    let curve = coverage(&list, &DEFAULT_CUTOFFS).unwrap();
    assert_eq!(curve.block_shares, [25.0, 25.0, 25.0, 25.0]);
    assert_eq!(curve.cumulative_shares, [25.0, 50.0, 75.0, 100.0]);
}

#[test]
fn zipf_single_lemma_corpus() {
    let list: RankedList<f64> = RankedList::from_counts([("SOLO", 7)]);
    let report = zipf_constants(&list, 1).unwrap();
    assert_eq!(report.constants, [1.0]);
    assert_eq!(report.coefficient_of_variation, 0.0);
}

#[test]
fn twenty_lemmas_match_hand_classification() {
    let lex = load_lexicon(
        "EL\tOPERATOR\nDE\tOPERATOR\nHACER\tOPERATOR\nPODER\tOPERATOR\n\
         CASA\tGENERAL\nTIEMPO\tGENERAL\nMENTE\tGENERAL\nVIDA\tGENERAL\n\
         PERRO\tDRAWABLE\nMESA\tDRAWABLE\nA-RBOL\tDRAWABLE\n\
         ROJO\tQUALITIES\nDEMENTE\tQUALITIES\nCLEMENTE\tGENERAL\n",
    )
    .unwrap();
    let hand: [(&str, Option<Category>); 20] = [
        ("EL", Some(Category::Operator)),
        ("DE", Some(Category::Operator)),
        ("HACER", Some(Category::Operator)),
        ("PODER", Some(Category::Operator)),
        ("CASA", Some(Category::General)),
        ("TIEMPO", Some(Category::General)),
        ("MENTE", Some(Category::General)),
        ("VIDA", Some(Category::General)),
        ("CLEMENTE", Some(Category::General)),
        ("PERRO", Some(Category::Drawable)),
        ("MESA", Some(Category::Drawable)),
        ("A-RBOL", Some(Category::Drawable)),
        ("ROJO", Some(Category::Qualities)),
        ("DEMENTE", Some(Category::Qualities)),
        ("RAPIDAMENTE", Some(Category::Qualities)),
        ("SOLAMENTE", Some(Category::Qualities)),
        ("CLARAMENTE", Some(Category::Qualities)),
        ("LENTAMENTE(ADV)", Some(Category::Qualities)),
        ("NUBE", None),
        ("MENTE(LA)", None),
    ];
    for (lemma, expected) in hand {
        assert_eq!(classify(lemma, &lex), expected, "{lemma}");
    }
    let tally = categorize(hand.iter().map(|(l, _)| *l), &lex);
    assert_eq!(tally.count(Category::Operator), 4);
    assert_eq!(tally.count(Category::General), 5);
    assert_eq!(tally.count(Category::Drawable), 3);
    assert_eq!(tally.count(Category::Qualities), 6);
    assert_eq!(tally.uncategorized, ["MENTE(LA)", "NUBE"]);
}

#[test]
fn random_fifty_word_reference_equals_intersection() {
    let samples = corpus(&spec(21, 50, 2000));
    let counts = count_corpus(&samples, &LemmaPipeline::default(), Parallelism::Serial).unwrap();
    let list: RankedList<f64> = rank(&counts.table);

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let pool: Vec<String> = (0..6000).map(word).collect();
    let picks: Vec<&String> = pool.choose_multiple(&mut rng, 50).collect();
    let reference = ReferenceWordList::from_words(
        picks.iter().map(|s| s.as_str()),
        &TransliterationTable::default(),
    );
    assert_eq!(reference.len(), 50);

    for top_n in [10, 100, 500, 2000, 10_000] {
        let report = overlap(&reference, &list, top_n).unwrap();
        let top: BTreeSet<&str> = list.top(top_n).iter().map(|e| e.lemma.as_str()).collect();
        let brute = picks.iter().filter(|w| top.contains(w.as_str())).count();
        assert_eq!(report.matched, brute);
        assert!((report.percent - brute as f64 * 2.0).abs() < 1e-12);
    }
}
