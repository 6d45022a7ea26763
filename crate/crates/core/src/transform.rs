//! Neo-Riemannian operations, the common-tone triad graph and progression
//! annotation.
//!
//! A move between two distinct triads is a *single* Tonnetz transformation
//! when the triads share at least one pitch class, and a *double* one
//! otherwise. Embellishments are ignored: `E7 => d` is double even though the
//! seventh of `E7` is the root of `d`.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::harmony::{roman_numeral, ChordSymbol, Key, NumeralCase, Quality, RomanLabel, Triad};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeoRiemannianOp {
    /// Parallel: same root, other quality.
    P,
    /// Leittonwechsel.
    L,
    /// Relative.
    R,
    /// Nebenverwandt: a major triad and the minor triad on its fourth.
    N,
}

impl NeoRiemannianOp {
    pub const ALL: [NeoRiemannianOp; 4] = [
        NeoRiemannianOp::P,
        NeoRiemannianOp::L,
        NeoRiemannianOp::R,
        NeoRiemannianOp::N,
    ];

    pub fn apply(self, t: Triad) -> Triad {
        apply_nr(self, t)
    }

    pub fn name(self) -> &'static str {
        match self {
            NeoRiemannianOp::P => "P",
            NeoRiemannianOp::L => "L",
            NeoRiemannianOp::R => "R",
            NeoRiemannianOp::N => "N",
        }
    }
}

impl fmt::Display for NeoRiemannianOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn apply_nr(op: NeoRiemannianOp, t: Triad) -> Triad {
    let shift = match (op, t.quality) {
        (NeoRiemannianOp::P, _) => 0,
        (NeoRiemannianOp::R, Quality::Major) => 9,
        (NeoRiemannianOp::R, Quality::Minor) => 3,
        (NeoRiemannianOp::L, Quality::Major) => 4,
        (NeoRiemannianOp::L, Quality::Minor) => 8,
        (NeoRiemannianOp::N, Quality::Major) => 5,
        (NeoRiemannianOp::N, Quality::Minor) => 7,
    };
    Triad::new(t.root.transpose(shift), t.quality.toggled())
}

/// The 24-vertex graph joining triads that share a pitch class.
#[derive(Debug, Clone)]
pub struct TriadGraph {
    adjacency: Vec<Vec<usize>>,
    distances: Vec<Vec<u8>>,
}

impl TriadGraph {
    pub fn build() -> Self {
        let triads: Vec<Triad> = Triad::all().collect();
        let adjacency: Vec<Vec<usize>> = triads
            .iter()
            .map(|a| {
                triads
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| {
                        *b != a && !a.pitch_classes().intersection(b.pitch_classes()).is_empty()
                    })
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let distances = (0..triads.len())
            .map(|start| bfs(&adjacency, start))
            .collect();
        TriadGraph {
            adjacency,
            distances,
        }
    }

    /// Shared instance built on first use.
    pub fn shared() -> &'static TriadGraph {
        static GRAPH: OnceLock<TriadGraph> = OnceLock::new();
        GRAPH.get_or_init(TriadGraph::build)
    }

    pub fn neighbors(&self, t: Triad) -> impl Iterator<Item = Triad> + '_ {
        let all: Vec<Triad> = Triad::all().collect();
        self.adjacency[t.index()].iter().map(move |&j| all[j])
    }

    pub fn degree(&self, t: Triad) -> usize {
        self.adjacency[t.index()].len()
    }

    pub fn distance(&self, a: Triad, b: Triad) -> u8 {
        self.distances[a.index()][b.index()]
    }

    pub fn diameter(&self) -> u8 {
        self.distances.iter().flatten().copied().max().unwrap_or(0)
    }
}

fn bfs(adjacency: &[Vec<usize>], start: usize) -> Vec<u8> {
    let mut dist = vec![u8::MAX; adjacency.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if dist[w] == u8::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Shortest-path length in the common-tone graph: 0, 1 or 2.
pub fn tonnetz_distance(a: Triad, b: Triad) -> u8 {
    TriadGraph::shared().distance(a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Identity,
    Single,
    Double,
}

impl MoveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::Identity => "identity",
            MoveKind::Single => "single",
            MoveKind::Double => "double",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TonnetzMove {
    pub from: Triad,
    pub to: Triad,
    pub arity: u8,
    pub nr_name: Option<NeoRiemannianOp>,
    pub kind: MoveKind,
}

impl TonnetzMove {
    pub fn between(from: Triad, to: Triad) -> Self {
        let arity = tonnetz_distance(from, to);
        let kind = match arity {
            0 => MoveKind::Identity,
            1 => MoveKind::Single,
            _ => MoveKind::Double,
        };
        let nr_name = if kind == MoveKind::Identity {
            None
        } else {
            NeoRiemannianOp::ALL
                .into_iter()
                .find(|op| op.apply(from) == to)
        };
        TonnetzMove {
            from,
            to,
            arity,
            nr_name,
            kind,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind == MoveKind::Identity
    }
}

pub fn classify_move(a: &ChordSymbol, b: &ChordSymbol) -> TonnetzMove {
    TonnetzMove::between(a.triad(), b.triad())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CadenceKind {
    /// IV -> iv -> I.
    PlagalMixture,
    /// V -> vi.
    Deceptive,
}

impl CadenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CadenceKind::PlagalMixture => "plagal-mixture",
            CadenceKind::Deceptive => "deceptive",
        }
    }

    /// Number of chords the pattern spans.
    pub fn chord_count(self) -> usize {
        match self {
            CadenceKind::PlagalMixture => 3,
            CadenceKind::Deceptive => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cadence {
    pub kind: CadenceKind,
    /// Index of the first chord of the pattern.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotateError {
    #[error("a progression needs at least 2 chords, got {0}")]
    TooShort(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgressionAnnotation {
    pub key: Key,
    pub chords: Vec<ChordSymbol>,
    /// `moves[i]` connects `chords[i]` to `chords[i + 1]`.
    pub moves: Vec<TonnetzMove>,
    pub roman: Vec<RomanLabel>,
    pub cadences: Vec<Cadence>,
}

impl ProgressionAnnotation {
    /// Annotation of a lone chord: no moves, no cadences.
    pub fn single(chord: ChordSymbol, key: Key) -> Self {
        let roman = vec![roman_numeral(&chord, &key)];
        ProgressionAnnotation {
            key,
            chords: vec![chord],
            moves: Vec::new(),
            roman,
            cadences: Vec::new(),
        }
    }

    pub fn double_moves(&self) -> impl Iterator<Item = (usize, &TonnetzMove)> {
        self.moves
            .iter()
            .enumerate()
            .filter(|(_, m)| m.kind == MoveKind::Double)
    }
}

pub fn annotate_progression(
    chords: &[ChordSymbol],
    key: &Key,
) -> Result<ProgressionAnnotation, AnnotateError> {
    if chords.len() < 2 {
        return Err(AnnotateError::TooShort(chords.len()));
    }
    let moves = chords
        .windows(2)
        .map(|w| classify_move(&w[0], &w[1]))
        .collect();
    let roman: Vec<RomanLabel> = chords.iter().map(|c| roman_numeral(c, key)).collect();
    let cadences = detect_cadences(&roman);
    Ok(ProgressionAnnotation {
        key: *key,
        chords: chords.to_vec(),
        moves,
        roman,
        cadences,
    })
}

/// Scans Roman labels for IV -> iv -> I and V -> vi. Embellished chords
/// (IV6, V7) still match; secondary dominants do not.
pub fn detect_cadences(roman: &[RomanLabel]) -> Vec<Cadence> {
    use NumeralCase::{Lower, Upper};
    let mut found = Vec::new();
    for i in 0..roman.len() {
        if i + 2 < roman.len()
            && roman[i].is_degree(4, Upper)
            && roman[i + 1].is_degree(4, Lower)
            && roman[i + 2].is_degree(1, Upper)
        {
            found.push(Cadence {
                kind: CadenceKind::PlagalMixture,
                position: i,
            });
        }
        if i + 1 < roman.len() && roman[i].is_degree(5, Upper) && roman[i + 1].is_degree(6, Lower) {
            found.push(Cadence {
                kind: CadenceKind::Deceptive,
                position: i,
            });
        }
    }
    found
}
