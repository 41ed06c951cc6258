//! Seeded synthetic corpora for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{
    parse_sample, CityCode, FieldCode, IngestConfig, RawSample, SampleMetadata, DEFAULT_CITIES,
};

/// Canonical word for vocabulary index `i`: `W` followed by base-26 letters,
/// so no synthetic word collides with a one-letter rule target.
pub fn word(i: usize) -> String {
    let mut letters = Vec::new();
    let mut n = i;
    loop {
        letters.push(b'A' + (n % 26) as u8);
        n /= 26;
        if n == 0 {
            break;
        }
    }
    letters.reverse();
    format!("W{}", String::from_utf8(letters).expect("ASCII"))
}

/// Power-law sampler over ranks `0..vocabulary`, weight `1 / (r + 1)^exponent`.
#[derive(Debug, Clone)]
pub struct ZipfSampler {
    cumulative: Vec<f64>,
}

impl ZipfSampler {
    pub fn new(vocabulary: usize, exponent: f64) -> Self {
        assert!(vocabulary > 0, "vocabulary must be non-empty");
        let mut running = 0.0;
        let cumulative = (1..=vocabulary)
            .map(|r| {
                running += (r as f64).powf(-exponent);
                running
            })
            .collect();
        ZipfSampler { cumulative }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("non-empty");
        let u = rng.random::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }
}

/// Shape of a generated corpus.
#[derive(Debug, Clone, Copy)]
pub struct CorpusSpec {
    pub seed: u64,
    pub samples: usize,
    pub tokens_per_sample: usize,
    pub vocabulary: usize,
    pub exponent: f64,
}

/// Samples whose bodies are space-separated canonical words, with cities
/// and fields assigned round-robin and ids `S00000`, `S00001`, ...
pub fn corpus(spec: &CorpusSpec) -> Vec<RawSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sampler = ZipfSampler::new(spec.vocabulary, spec.exponent);
    (0..spec.samples)
        .map(|i| {
            let words: Vec<String> = (0..spec.tokens_per_sample)
                .map(|_| word(sampler.sample(&mut rng)))
                .collect();
            RawSample {
                metadata: SampleMetadata {
                    id: format!("S{i:05}"),
                    city: CityCode::new(DEFAULT_CITIES[i % DEFAULT_CITIES.len()]).expect("valid"),
                    field: FieldCode::ALL[i % FieldCode::ALL.len()],
                    area: FieldCode::ALL[i % FieldCode::ALL.len()].area(),
                    year: 1979 + (i % 11) as i32,
                    waiver: false,
                    note: String::new(),
                },
                body: words.join(" "),
            }
        })
        .collect()
}

/// One minimal sample per unit of each cell count, e.g. to rebuild a
/// catalog from a published sources matrix.
pub fn samples_for_cells<'a, I>(cells: I, body: &str) -> Vec<RawSample>
where
    I: IntoIterator<Item = (&'a str, FieldCode, usize)>,
{
    let config = IngestConfig::default();
    let mut out = Vec::new();
    for (city, field, count) in cells {
        for k in 0..count {
            let text = format!(
                "#ID: {city}-{field}-{k:03}\n#CITY: {city}\n#FIELD: {field}\n#YEAR: 1985\n\n{body}"
            );
            out.push(parse_sample(text.as_bytes(), &config).expect("fixture sample parses"));
        }
    }
    out
}
