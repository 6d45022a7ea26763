use std::path::PathBuf;

use tonnetz_core::chart::{flatten, parse_chart, progression, ChartDocument};
use tonnetz_core::harmony::PitchClass;
use tonnetz_core::lattice::{embed_path, LatticeCoord};
use tonnetz_core::rhythm::{clocks_for, detect_substructures, RhythmClass};
use tonnetz_core::transform::{annotate_progression, CadenceKind, MoveKind};

fn load(name: &str) -> ChartDocument {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    parse_chart(&text).unwrap()
}

fn triads(doc: &ChartDocument, section: &str) -> Vec<String> {
    progression(doc.section(section).unwrap())
        .iter()
        .map(|c| c.triad().to_string())
        .collect()
}

fn split(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

#[test]
fn lead_sheet_chains() {
    let doc = load("in-my-life.chart");
    assert_eq!(doc.form.len(), 7);
    let verse: Vec<String> = progression(doc.section("Verse").unwrap())
        .iter()
        .map(|c| c.text.clone())
        .collect();
    assert_eq!(verse, split("A E7 A E7 A f# A7 D d A f# A7 D d A"));
    assert_eq!(triads(&doc, "Bridge"), split("f# D G A f# B d A"));
    assert_eq!(triads(&doc, "Interlude"), split("A E f# A D d A"));
    assert_eq!(triads(&doc, "Coda"), split("A E d A E A"));
}

#[test]
fn recorded_chains() {
    let doc = load("in-my-life-recorded.chart");
    assert_eq!(
        triads(&doc, "Verse"),
        split("A E A E A E f# A D d A E f# A D d A")
    );
    assert_eq!(triads(&doc, "Bridge"), split("B f# D G A B f# B D d A"));
}

#[test]
fn verse_third_substructure_rhythm() {
    let doc = load("in-my-life.chart");
    let timed = flatten(doc.section("Verse").unwrap());
    // the first D starts the fourth two-measure window
    let window: Vec<(String, u32, u32)> = timed
        .iter()
        .filter(|t| (24..32).contains(&t.onset))
        .map(|t| (t.symbol.text.clone(), t.onset - 24, t.duration))
        .collect();
    assert_eq!(
        window,
        vec![("D".into(), 0, 2), ("d".into(), 2, 2), ("A".into(), 4, 4)]
    );
}

#[test]
fn clocks_of_both_verses() {
    let lead = load("in-my-life.chart");
    let clocks = clocks_for(&flatten(lead.section("Verse").unwrap()), 4, 2).unwrap();
    let report = detect_substructures(&clocks);
    assert_eq!(report.distinct_clocks.len(), 3);
    assert_eq!(
        report.classifications,
        vec![
            RhythmClass::WholeNote,
            RhythmClass::Mixed,
            RhythmClass::Mixed
        ]
    );

    let verse2 = load("in-my-life-verse2.chart");
    let clocks = clocks_for(&flatten(verse2.section("Verse2").unwrap()), 4, 2).unwrap();
    let report = detect_substructures(&clocks);
    assert_eq!(report.occurrence_sequence, vec![0, 1, 2, 1, 2]);

    let rec = load("in-my-life-recorded.chart");
    let clocks = clocks_for(&flatten(rec.section("Verse").unwrap()), 4, 2).unwrap();
    let report = detect_substructures(&clocks);
    assert_eq!(report.distinct_clocks.len(), 4);
    assert_eq!(report.occurrence_sequence, vec![0, 0, 1, 2, 3, 2]);
    assert!(clocks[4].held_over);
    assert_eq!(clocks[4].hours(), vec![2, 4, 6]);
    assert_eq!(report.alternations.len(), 1);
    assert_eq!(report.alternations[0].length, 3);
}

#[test]
fn recorded_bridge_split_measure_is_mixed() {
    let rec = load("in-my-life-recorded.chart");
    let clocks = clocks_for(&flatten(rec.section("Bridge").unwrap()), 4, 2).unwrap();
    let report = detect_substructures(&clocks);
    let split = report
        .distinct_clocks
        .iter()
        .position(|c| c.hours().contains(&3))
        .unwrap();
    assert_eq!(report.classifications[split], RhythmClass::Mixed);
}

#[test]
fn coda_embedding_reuses_placements() {
    let doc = load("in-my-life.chart");
    let chords = progression(doc.section("Coda").unwrap());
    let ann = annotate_progression(&chords, &doc.key).unwrap();
    let e = embed_path(&ann, doc.key.tonic);
    assert_eq!(e.placements.len(), 6);
    // d lands on the tonic hexagon, so the path returns to the first A
    assert_eq!(e.distinct_placements().len(), 3);
    assert_eq!(
        e.arrows
            .iter()
            .filter(|a| a.kind == MoveKind::Double)
            .count(),
        1
    );
}

#[test]
fn cadences_in_fixtures() {
    let lead = load("in-my-life.chart");
    let chords = progression(lead.section("Verse").unwrap());
    let ann = annotate_progression(&chords, &lead.key).unwrap();
    let plagal: Vec<usize> = ann
        .cadences
        .iter()
        .filter(|c| c.kind == CadenceKind::PlagalMixture)
        .map(|c| c.position)
        .collect();
    assert_eq!(plagal, vec![7, 12]);

    let rec = load("in-my-life-recorded.chart");
    let chords = progression(rec.section("Verse").unwrap());
    let ann = annotate_progression(&chords, &rec.key).unwrap();
    let deceptive = ann
        .cadences
        .iter()
        .filter(|c| c.kind == CadenceKind::Deceptive)
        .count();
    assert_eq!(deceptive, 2);
}

#[test]
fn verse_placements_touch_the_tonic_hexagon() {
    let doc = load("in-my-life.chart");
    let chords = progression(doc.section("Verse").unwrap());
    let ann = annotate_progression(&chords, &doc.key).unwrap();
    let e = embed_path(&ann, PitchClass::A);
    let origin = LatticeCoord::new(0, 0);
    for p in e.placements.iter().filter(|p| p.triad.to_string() != "E") {
        assert!(p.touches(origin), "{}", p.triad);
    }
}
