use lexcorpus::ingest::{build_catalog, FieldCode};
use lexcorpus::lexicon::{categorize, load_lexicon, Category, ReferenceWordList};
use lexcorpus::normalize::{is_canonical, normalize, TransliterationTable};
use lexcorpus::report::{sources_matrix, SourcesMatrix};
use lexcorpus::synth::samples_for_cells;

const TABLE1: &str = include_str!("fixtures/table1.tsv");
const GOLDEN: &str = include_str!("fixtures/normalize_golden.tsv");
const LEXICON: &str = include_str!("fixtures/lexicon.tsv");
const REFERENCE: &str = include_str!("fixtures/reference.txt");

const FIELD_TOTALS: [usize; 15] = [18, 13, 12, 5, 28, 27, 35, 43, 70, 23, 21, 47, 8, 88, 62];

fn published() -> SourcesMatrix {
    SourcesMatrix::from_tsv(TABLE1).expect("fixture totals agree with its cells")
}

#[test]
fn table1_fixture_totals() {
    let m = published();
    assert_eq!(m.cities.len(), 34);
    assert_eq!(m.column_totals(), FIELD_TOTALS);
    assert_eq!(m.grand_total(), 500);
    assert_eq!(m.cell("MTREY", "A12".parse().unwrap()), Some(25));
}

#[test]
fn table1_catalog_rebuild() {
    let m = published();
    let cells = m.cities.iter().zip(&m.cells).flat_map(|(city, row)| {
        FieldCode::ALL
            .iter()
            .zip(row)
            .map(move |(f, &n)| (city.as_str(), *f, n))
    });
    let catalog = build_catalog(samples_for_cells(cells, "UNA MUESTRA")).unwrap();
    assert_eq!(catalog.len(), 500);
    assert_eq!(catalog.grand_total(), 500);
    assert_eq!(catalog.field_totals(), FIELD_TOTALS);
    let rebuilt = sources_matrix(&catalog);
    assert_eq!(rebuilt, m);
    assert_eq!(SourcesMatrix::from_tsv(&rebuilt.to_tsv()).unwrap(), m);
    // 34 × 15 cells, each missing at most one sample.
    let empty = m.cells.iter().flatten().filter(|&&n| n == 0).count();
    assert_eq!(m.deficit_total(), empty);
}

#[test]
fn normalization_golden_file() {
    let table = TransliterationTable::default();
    let mut checked = 0;
    for line in GOLDEN.lines().filter(|l| !l.starts_with('#')) {
        let (input, expected) = line.split_once('\t').expect("two columns");
        let got = normalize(input, &table);
        assert_eq!(got.as_str(), expected, "input {input:?}");
        assert!(is_canonical(got.as_str()));
        checked += 1;
    }
    assert_eq!(checked, 17);
}

#[test]
fn lexicon_fixture_loads() {
    let lex = load_lexicon(LEXICON).unwrap();
    assert_eq!(lex.len(), 14);
    assert_eq!(lex.get("A-RBOL"), Some(Category::Drawable));
    assert_eq!(lex.get("PERRO"), Some(Category::Drawable));
    let tally = categorize(["EL", "CASA", "A-RBOL", "ROJO", "LENTAMENTE", "NUBE"], &lex);
    assert_eq!(tally.count(Category::Operator), 1);
    assert_eq!(tally.count(Category::General), 1);
    assert_eq!(tally.count(Category::Drawable), 1);
    assert_eq!(tally.count(Category::Qualities), 2);
    assert_eq!(tally.uncategorized, ["NUBE"]);
}

#[test]
fn reference_fixture_is_canonical() {
    let list = ReferenceWordList::parse(REFERENCE);
    assert_eq!(
        list.words(),
        ["EL", "DE", "CASA", "A-RBOL", "NIN-O", "MAN-ANA", "PERRO"]
    );
}
