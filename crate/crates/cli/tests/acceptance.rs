//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints its own PASS/FAIL line; exits non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use tonnetz_chroma::synth::{add_noise, synth_sequence, ToneSpec};
use tonnetz_chroma::{
    identify_chords, AudioBuffer, ChordIdConfig, ChordLabel, NnlsConfig, NnlsSolver, NoteDictionary,
};
use tonnetz_cli::{load_chart, section_clocks};
use tonnetz_core::chart::{progression, ChartDocument};
use tonnetz_core::harmony::{common_tones, parse_chord_symbol, roman_numeral, Triad};
use tonnetz_core::lattice::{embed_path, render_tonnetz_svg, TonnetzRenderOptions};
use tonnetz_core::rhythm::{detect_substructures, render_clock_svg, RhythmClass};
use tonnetz_core::transform::{
    annotate_progression, apply_nr, tonnetz_distance, CadenceKind, MoveKind, NeoRiemannianOp,
    TonnetzMove, TriadGraph,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn chart(name: &str) -> ChartDocument {
    load_chart(&fixture(name)).expect("fixture parses")
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sym(t: &str) -> tonnetz_core::ChordSymbol {
    parse_chord_symbol(t).unwrap()
}

/// Double moves of a section as "from->to" triad pairs.
fn doubles(doc: &ChartDocument, section: &str) -> (usize, Vec<String>) {
    let chords = progression(doc.section(section).unwrap());
    let ann = annotate_progression(&chords, &doc.key).unwrap();
    let d = ann
        .double_moves()
        .map(|(_, m)| format!("{}->{}", m.from, m.to))
        .collect();
    (ann.moves.len(), d)
}

fn arity_fidelity() -> Outcome {
    let start = Instant::now();
    let lead = chart("in-my-life.chart");
    let rec = chart("in-my-life-recorded.chart");
    let cases: [(&str, &ChartDocument, &str, &[&str]); 6] = [
        ("verse", &lead, "Verse", &[]),
        ("bridge", &lead, "Bridge", &["G->A", "B->d"]),
        ("interlude", &lead, "Interlude", &["E->f#"]),
        ("coda", &lead, "Coda", &["E->d"]),
        ("recorded verse", &rec, "Verse", &["E->f#", "E->f#"]),
        ("recorded bridge", &rec, "Bridge", &["G->A", "A->B"]),
    ];
    let mut verse_moves = 0;
    for (label, doc, section, expected) in cases {
        let (moves, got) = doubles(doc, section);
        check(got == *expected, || {
            format!("{label}: doubles {got:?}, expected {expected:?}")
        })?;
        if section == "Verse" && label == "verse" {
            verse_moves = moves;
        }
    }
    let verse = progression(lead.section("Verse").unwrap());
    let singles = annotate_progression(&verse, &lead.key)
        .unwrap()
        .moves
        .iter()
        .filter(|m| m.kind == MoveKind::Single)
        .count();
    check(singles == verse_moves, || {
        format!("verse {singles}/{verse_moves} single")
    })?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    check(ms < 1000.0, || format!("took {ms:.0} ms"))?;
    Ok(format!(
        "verse {singles}/{verse_moves} single; 5 other sections exact; {ms:.1} ms"
    ))
}

fn nr_naming() -> Outcome {
    let cases = [
        ("D", "d", "P"),
        ("A", "f#", "R"),
        ("f#", "A", "R"),
        ("d", "A", "N"),
    ];
    for (a, b, op) in cases {
        let m = TonnetzMove::between(sym(a).triad(), sym(b).triad());
        let name = m.nr_name.map(|o| o.name());
        check(name == Some(op), || {
            format!("{a}->{b} named {name:?}, expected {op}")
        })?;
    }
    for op in NeoRiemannianOp::ALL {
        for t in Triad::all() {
            check(apply_nr(op, apply_nr(op, t)) == t, || {
                format!("{} not an involution at {t}", op.name())
            })?;
            check(apply_nr(op, t).quality != t.quality, || {
                format!("{} keeps quality at {t}", op.name())
            })?;
        }
    }
    Ok("4 named moves; P, L, R, N involutive on 24 triads".into())
}

fn roman_numerals() -> Outcome {
    let lead = chart("in-my-life.chart");
    let cases = [
        ("A7", "V7/IV", "V⁷/IV"),
        ("D", "IV", "IV"),
        ("d", "iv", "iv"),
        ("E7", "V7", "V⁷"),
        ("G", "bVII", "♭VII"),
    ];
    for (chord, ascii, pretty) in cases {
        let r = roman_numeral(&sym(chord), &lead.key);
        check(r.to_string() == ascii && r.pretty() == pretty, || {
            format!("{chord} -> {} / {}, expected {ascii}", r, r.pretty())
        })?;
    }
    let ann =
        annotate_progression(&progression(lead.section("Verse").unwrap()), &lead.key).unwrap();
    let plagal = ann
        .cadences
        .iter()
        .filter(|c| c.kind == CadenceKind::PlagalMixture)
        .count();
    check(plagal > 0, || "no IV-iv-I in the lead verse".into())?;
    let rec = chart("in-my-life-recorded.chart");
    let ann = annotate_progression(&progression(rec.section("Verse").unwrap()), &rec.key).unwrap();
    let deceptive = ann
        .cadences
        .iter()
        .filter(|c| c.kind == CadenceKind::Deceptive)
        .count();
    check(deceptive > 0, || "no V-vi in the recorded verse".into())?;
    Ok(format!(
        "5 labels in A; {plagal} plagal-mixture, {deceptive} deceptive cadences"
    ))
}

fn distance_oracle() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for a in Triad::all() {
        for b in Triad::all() {
            let rule = if a == b {
                0
            } else if a.pitch_classes().intersection(b.pitch_classes()).is_empty() {
                2
            } else {
                1
            };
            check(tonnetz_distance(a, b) == rule, || format!("{a}->{b}"))?;
            pairs += 1;
        }
    }
    let diameter = TriadGraph::build().diameter();
    check(diameter == 2, || format!("diameter {diameter}"))?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    check(ms < 1000.0, || format!("took {ms:.0} ms"))?;
    Ok(format!(
        "{pairs} pairs agree, diameter {diameter}, {ms:.1} ms"
    ))
}

fn substructures() -> Outcome {
    let lead = chart("in-my-life.chart");
    let report = detect_substructures(&section_clocks(lead.section("Verse").unwrap(), 4).unwrap());
    let n_lead = report.distinct_clocks.len();
    check(n_lead == 3, || format!("lead verse has {n_lead} clocks"))?;
    let hours: Vec<Vec<u32>> = report.distinct_clocks.iter().map(|c| c.hours()).collect();
    check(hours[1] == [0, 4, 6] && hours[2] == [0, 2, 4], || {
        format!("clock hours {hours:?}")
    })?;
    let mirrored = report
        .reflections
        .iter()
        .any(|r| (r.first, r.second, r.axis_hour) == (1, 2, 0));
    check(mirrored, || format!("reflections {:?}", report.reflections))?;
    let classes = [
        RhythmClass::WholeNote,
        RhythmClass::Mixed,
        RhythmClass::Mixed,
    ];
    check(report.classifications == classes, || {
        format!("classes {:?}", report.classifications)
    })?;

    let rec = chart("in-my-life-recorded.chart");
    let report = detect_substructures(&section_clocks(rec.section("Verse").unwrap(), 4).unwrap());
    let n_rec = report.distinct_clocks.len();
    check(n_rec == 4, || format!("recorded verse has {n_rec} clocks"))?;
    Ok(format!(
        "lead {n_lead}, recorded {n_rec}; clocks 2/3 mirror through 0-4; WholeNote, Mixed, Mixed"
    ))
}

fn common_tone_caption() -> Outcome {
    let got = common_tones(&sym("E7"), &sym("d"));
    check(got.to_string() == "{D}", || format!("got {got}"))?;
    Ok(format!("common_tones(E7, d) = {got}"))
}

fn synthetic_chord_id() -> Outcome {
    let start = Instant::now();
    let names = ["E", "A", "E", "A", "f#", "A", "D", "d"];
    let voicings: Vec<Vec<u8>> = vec![
        vec![64, 68, 71],
        vec![57, 61, 64],
        vec![64, 68, 71],
        vec![57, 61, 64],
        vec![66, 69, 73],
        vec![57, 61, 64],
        vec![62, 66, 69],
        vec![62, 65, 69],
    ];
    let audio = add_noise(
        &synth_sequence(&voicings, 2.0, &ToneSpec::default()),
        30.0,
        2024,
    );
    let out = identify_chords(&audio, &ChordIdConfig::default()).map_err(|e| e.to_string())?;
    let correct = names
        .iter()
        .enumerate()
        .filter(|(i, name)| {
            let mid = 2.0 * *i as f64 + 1.0;
            out.segments
                .iter()
                .any(|s| s.start_s <= mid && mid < s.end_s && s.label.to_string() == **name)
        })
        .count();
    check(correct >= 7, || format!("{correct}/8 correct"))?;

    let silence = identify_chords(&AudioBuffer::silence(2.0, 22050), &ChordIdConfig::default())
        .map_err(|e| e.to_string())?;
    let silent = silence.segments.len() == 1 && silence.segments[0].label == ChordLabel::NoChord;
    check(silent, || format!("silence gave {:?}", silence.segments))?;
    let secs = start.elapsed().as_secs_f64();
    check(secs < 10.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "{correct}/8 correct at 30 dB SNR, silence -> N, {secs:.2} s"
    ))
}

fn nnls_properties() -> Outcome {
    let dict = NoteDictionary::default();
    let solver = NnlsSolver::new(&dict, NnlsConfig::default());
    let frame: Vec<f64> = (0..dict.bins)
        .map(|i| ((i * 29) % 13) as f64 / 13.0)
        .collect();
    let sol = solver.solve(&frame);
    check(sol.residuals.windows(2).all(|w| w[1] <= w[0]), || {
        "residual increased".into()
    })?;

    let mut worst = 0.0f64;
    for n in 0..dict.notes() {
        let a = solver.solve(&dict.column_dense(n)).activations;
        for (i, &x) in a.iter().enumerate() {
            worst = worst.max(if i == n { (x - 1.0).abs() } else { x });
        }
    }
    check(worst <= 1e-3, || format!("exact recovery error {worst:e}"))?;

    let c = 37.5;
    let scaled: Vec<f64> = frame.iter().map(|x| x * c).collect();
    let b = solver.solve(&scaled).activations;
    let norm = sol.activations.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff = sol
        .activations
        .iter()
        .zip(&b)
        .map(|(x, y)| (c * x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    let rel = diff / (c * norm);
    check(rel <= 1e-5, || format!("scale error {rel:e}"))?;
    Ok(format!(
        "monotone over {} iterations; recovery error {worst:.1e} on 73 columns; scale error {rel:.1e}",
        sol.iterations()
    ))
}

fn rendering_contracts() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_tonnetz");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let chart_path = fixture("in-my-life.chart");
    let mut outputs = Vec::new();
    for run in 0..2 {
        let svg = dir.path().join(format!("verse-{run}.svg"));
        let clocks = dir.path().join(format!("clocks-{run}"));
        for args in [
            vec![
                "render-tonnetz".as_ref(),
                chart_path.as_os_str(),
                "--section".as_ref(),
                "Verse".as_ref(),
                "--out".as_ref(),
                svg.as_os_str(),
            ],
            vec![
                "render-clocks".as_ref(),
                chart_path.as_os_str(),
                "--section".as_ref(),
                "Verse".as_ref(),
                "--out-dir".as_ref(),
                clocks.as_os_str(),
            ],
        ] {
            let status = Command::new(bin)
                .args(&args)
                .output()
                .map_err(|e| e.to_string())?;
            check(status.status.success(), || {
                String::from_utf8_lossy(&status.stderr).into_owned()
            })?;
        }
        let mut bytes = std::fs::read(&svg).map_err(|e| e.to_string())?;
        for k in 1..=3 {
            bytes.extend(
                std::fs::read(clocks.join(format!("clock-{k}.svg"))).map_err(|e| e.to_string())?,
            );
        }
        outputs.push((std::fs::read_to_string(&svg).unwrap(), bytes));
    }
    check(outputs[0].1 == outputs[1].1, || {
        "outputs differ between runs".into()
    })?;

    let verse = &outputs[0].0;
    let doc = roxmltree::Document::parse(verse).map_err(|e| e.to_string())?;
    let arrows = doc
        .descendants()
        .filter(|n| {
            matches!(
                n.attribute("class"),
                Some("move-arrow" | "move-arrow-double")
            )
        })
        .count();
    let lead = chart("in-my-life.chart");
    let chords = progression(lead.section("Verse").unwrap());
    let moves = annotate_progression(&chords, &lead.key).unwrap().moves;
    let non_identity = moves
        .iter()
        .filter(|m| m.kind != MoveKind::Identity)
        .count();
    check(arrows == non_identity, || {
        format!("{arrows} arrows for {non_identity} moves")
    })?;

    let mut parsed = 1;
    for doc in [
        chart("in-my-life.chart"),
        chart("in-my-life-recorded.chart"),
    ] {
        for section in &doc.sections {
            let chords = progression(section);
            let ann = annotate_progression(&chords, &doc.key).unwrap();
            let svg = render_tonnetz_svg(
                &embed_path(&ann, doc.key.tonic),
                &TonnetzRenderOptions::default(),
            )
            .map_err(|e| e.to_string())?;
            roxmltree::Document::parse(&svg).map_err(|e| format!("{}: {e}", section.name))?;
            for clock in section_clocks(section, doc.meter).unwrap() {
                roxmltree::Document::parse(&render_clock_svg(&clock)).map_err(|e| e.to_string())?;
                parsed += 1;
            }
            parsed += 1;
        }
    }
    Ok(format!(
        "{parsed} SVGs well-formed; verse has {arrows} arrows ({chords} chords, {non_identity} moves); byte-identical reruns",
        chords = chords.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("arity fidelity", arity_fidelity),
        ("neo-Riemannian naming", nr_naming),
        ("roman numerals and cadences", roman_numerals),
        ("distance oracle", distance_oracle),
        ("rhythm substructures", substructures),
        ("common tones", common_tone_caption),
        ("chord-id on synthetic audio", synthetic_chord_id),
        ("NNLS properties", nnls_properties),
        ("rendering contracts", rendering_contracts),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
