//! Colored framed oriented tangle diagrams in slice-word form.
//!
//! A diagram is read bottom to top. Each slice is a row of pieces that
//! consume a contiguous group of strands from the current state and produce
//! a new group in its place. An upward strand colored `V` carries `V`, a
//! downward one carries `V^∨`.
//!
//! | piece        | consumes     | produces     | morphism        |
//! |--------------|--------------|--------------|-----------------|
//! | `Id`         | `x`          | `x`          | identity        |
//! | `CrossPos`   | `x, y`       | `y, x`       | `c_{X,Y}`       |
//! | `CrossNeg`   | `x, y`       | `y, x`       | `c_{Y,X}^{-1}`  |
//! | `CapEv`      | `V↓, V↑`     |              | `ev_V`          |
//! | `CapEvHat`   | `V↑, V↓`     |              | `ev_hat_V`      |
//! | `CupCoev`    |              | `V↑, V↓`     | `coev_V`        |
//! | `CupCoevHat` |              | `V↓, V↑`     | `coev_hat_V`    |
//! | `TwistPos`   | `x`          | `x`          | `θ_X`           |
//! | `TwistNeg`   | `x`          | `x`          | `θ_X^{-1}`      |

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::linalg::C64;
use crate::qarith::GlobalParams;
use crate::repr::{ModuleError, ModuleLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Up,
    Down,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }

    fn sign(self) -> i64 {
        match self {
            Orientation::Up => 1,
            Orientation::Down => -1,
        }
    }
}

/// One strand end: a color index into the [`ColorTable`] and a direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Strand {
    pub color: usize,
    pub orientation: Orientation,
}

impl Strand {
    pub fn up(color: usize) -> Self {
        Strand { color, orientation: Orientation::Up }
    }

    pub fn down(color: usize) -> Self {
        Strand { color, orientation: Orientation::Down }
    }
}

pub type StrandState = Vec<Strand>;

#[derive(Clone, Debug, PartialEq)]
pub struct ColorEntry {
    pub id: String,
    pub label: ModuleLabel,
}

/// Named colors; only Verma and simple modules are allowed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ColorTable {
    entries: Vec<ColorEntry>,
}

impl ColorTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a color, returning its index.
    pub fn push(&mut self, id: impl Into<String>, label: ModuleLabel) -> Result<usize, TangleError> {
        let id = id.into();
        if self.entries.iter().any(|e| e.id == id) {
            return Err(TangleError::DuplicateColor(id));
        }
        if !matches!(label, ModuleLabel::Verma(_) | ModuleLabel::Simple { .. }) {
            return Err(TangleError::BadColorKind(id));
        }
        self.entries.push(ColorEntry { id, label });
        Ok(self.entries.len() - 1)
    }

    /// Index of an equal label, adding it under a fresh id if absent.
    pub fn intern(&mut self, label: ModuleLabel) -> Result<usize, TangleError> {
        if let Some(i) = self.entries.iter().position(|e| e.label == label) {
            return Ok(i);
        }
        let mut n = self.entries.len();
        while self.entries.iter().any(|e| e.id == format!("c{n}")) {
            n += 1;
        }
        self.push(format!("c{n}"), label)
    }

    pub fn entries(&self) -> &[ColorEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn label(&self, i: usize) -> Option<&ModuleLabel> {
        self.entries.get(i).map(|e| &e.label)
    }

    pub fn id(&self, i: usize) -> Option<&str> {
        self.entries.get(i).map(|e| e.id.as_str())
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.id == id)
    }

    /// Checks every label can be built at `params`.
    pub fn check(&self, params: &GlobalParams) -> Result<(), TangleError> {
        for e in &self.entries {
            e.label.build(params).map_err(|err| TangleError::Color { id: e.id.clone(), err })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    Id,
    CrossPos,
    CrossNeg,
    CapEv,
    CapEvHat,
    CupCoev(usize),
    CupCoevHat(usize),
    TwistPos,
    TwistNeg,
}

impl Piece {
    /// Number of strands consumed.
    pub fn arity_in(self) -> usize {
        match self {
            Piece::Id | Piece::TwistPos | Piece::TwistNeg => 1,
            Piece::CrossPos | Piece::CrossNeg | Piece::CapEv | Piece::CapEvHat => 2,
            Piece::CupCoev(_) | Piece::CupCoevHat(_) => 0,
        }
    }

    pub fn arity_out(self) -> usize {
        match self {
            Piece::Id | Piece::TwistPos | Piece::TwistNeg => 1,
            Piece::CrossPos | Piece::CrossNeg | Piece::CupCoev(_) | Piece::CupCoevHat(_) => 2,
            Piece::CapEv | Piece::CapEvHat => 0,
        }
    }

    /// The piece seen after rotating the plane by π. Caps and cups need the
    /// color of the strand they act on.
    fn rotated(self, color: usize) -> Piece {
        match self {
            Piece::CapEv => Piece::CupCoevHat(color),
            Piece::CapEvHat => Piece::CupCoev(color),
            Piece::CupCoevHat(_) => Piece::CapEv,
            Piece::CupCoev(_) => Piece::CapEvHat,
            p => p,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Piece::Id => "id",
            Piece::CrossPos => "xp",
            Piece::CrossNeg => "xn",
            Piece::CapEv => "capL",
            Piece::CapEvHat => "capR",
            Piece::CupCoev(_) => "cupL",
            Piece::CupCoevHat(_) => "cupR",
            Piece::TwistPos => "twp",
            Piece::TwistNeg => "twn",
        }
    }
}

pub type Slice = Vec<Piece>;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TangleError {
    #[error("slice {slice}, position {position}: orientation mismatch for {piece}")]
    Orientation { slice: usize, position: usize, piece: &'static str },
    #[error("slice {slice}, position {position}: {piece} joins different colors")]
    ColorMismatch { slice: usize, position: usize, piece: &'static str },
    #[error("slice {slice}: pieces consume {consumed} strands but {available} are present")]
    Arity { slice: usize, consumed: usize, available: usize },
    #[error("slice {slice}, position {position}: unknown color index {color}")]
    UnknownColor { slice: usize, position: usize, color: usize },
    #[error("propagated top state does not match the declared top")]
    TopMismatch,
    #[error("duplicate color id {0:?}")]
    DuplicateColor(String),
    #[error("color {0:?} must be a Verma or simple module")]
    BadColorKind(String),
    #[error("color {id:?}: {err}")]
    Color { id: String, err: ModuleError },
    #[error("braid letter {letter} is invalid on {strands} strands")]
    BadLetter { letter: i32, strands: usize },
    #[error("braid needs at least one strand")]
    NoStrands,
    #[error("expected {expected} strand colors, got {got}")]
    StrandCount { expected: usize, got: usize },
    #[error("strands {a} and {b} lie on one component but carry different colors or orientations")]
    InconsistentComponent { a: usize, b: usize },
    #[error("strand {strand} is out of range 1..={strands}")]
    StrandOutOfRange { strand: usize, strands: usize },
    #[error("component {component} is out of range (link has {count})")]
    ComponentOutOfRange { component: usize, count: usize },
    #[error("cannot close: bottom and top end strands differ")]
    NotClosable,
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),
}

/// A diagram bound to a root order and a color table. Construction does not
/// check typing; call [`TangleDiagram::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct TangleDiagram {
    pub params: GlobalParams,
    pub colors: ColorTable,
    pub bottom: StrandState,
    pub slices: Vec<Slice>,
    pub top: StrandState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentInfo {
    pub color: usize,
    /// Sum of crossing signs where both strands belong to this component.
    pub self_writhe: i64,
    /// Net number of twist pieces on this component.
    pub twists: i64,
    /// Whether the component reaches the bottom or top boundary.
    pub open: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramInfo {
    /// Strand states before slice 0, after slice 0, …; the last equals `top`.
    pub levels: Vec<StrandState>,
    /// Components in order of first appearance, scanning levels bottom to
    /// top and strands left to right.
    pub components: Vec<ComponentInfo>,
    /// Component of each strand at each level.
    pub arc_component: Vec<Vec<usize>>,
    /// Sum of all crossing signs.
    pub writhe: i64,
    /// Net number of twist pieces.
    pub twists: i64,
}

impl DiagramInfo {
    /// Blackboard framing number: writhe plus kinks.
    pub fn framing(&self) -> i64 {
        self.writhe + self.twists
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl TangleDiagram {
    fn check_color(&self, slice: usize, position: usize, color: usize) -> Result<(), TangleError> {
        if color >= self.colors.len() {
            return Err(TangleError::UnknownColor { slice, position, color });
        }
        Ok(())
    }

    /// Applies one slice to a strand state.
    pub fn propagate(&self, index: usize, state: &[Strand], slice: &[Piece]) -> Result<StrandState, TangleError> {
        let consumed: usize = slice.iter().map(|p| p.arity_in()).sum();
        if consumed != state.len() {
            return Err(TangleError::Arity { slice: index, consumed, available: state.len() });
        }
        let mut out = Vec::new();
        let mut pos = 0;
        for (k, &piece) in slice.iter().enumerate() {
            let input = &state[pos..pos + piece.arity_in()];
            let orient = |want: [Orientation; 2]| {
                if input[0].orientation != want[0] || input[1].orientation != want[1] {
                    return Err(TangleError::Orientation { slice: index, position: k, piece: piece.tag() });
                }
                if input[0].color != input[1].color {
                    return Err(TangleError::ColorMismatch { slice: index, position: k, piece: piece.tag() });
                }
                Ok(())
            };
            match piece {
                Piece::Id | Piece::TwistPos | Piece::TwistNeg => out.push(input[0]),
                Piece::CrossPos | Piece::CrossNeg => {
                    out.push(input[1]);
                    out.push(input[0]);
                }
                Piece::CapEv => orient([Orientation::Down, Orientation::Up])?,
                Piece::CapEvHat => orient([Orientation::Up, Orientation::Down])?,
                Piece::CupCoev(c) => {
                    self.check_color(index, k, c)?;
                    out.push(Strand::up(c));
                    out.push(Strand::down(c));
                }
                Piece::CupCoevHat(c) => {
                    self.check_color(index, k, c)?;
                    out.push(Strand::down(c));
                    out.push(Strand::up(c));
                }
            }
            pos += piece.arity_in();
        }
        Ok(out)
    }

    /// Type-checks the diagram and computes its components and writhe.
    pub fn validate(&self) -> Result<DiagramInfo, Vec<TangleError>> {
        let mut errors = Vec::new();
        for (i, s) in self.bottom.iter().chain(self.top.iter()).enumerate() {
            if let Err(e) = self.check_color(0, i, s.color) {
                errors.push(e);
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        let mut levels = vec![self.bottom.clone()];
        for (i, slice) in self.slices.iter().enumerate() {
            match self.propagate(i, levels.last().expect("nonempty"), slice) {
                Ok(next) => levels.push(next),
                Err(e) => {
                    errors.push(e);
                    return Err(errors);
                }
            }
        }
        if levels.last() != Some(&self.top) {
            return Err(vec![TangleError::TopMismatch]);
        }
        Ok(self.analyze(levels))
    }

    fn analyze(&self, levels: Vec<StrandState>) -> DiagramInfo {
        let offsets: Vec<usize> = levels
            .iter()
            .scan(0, |acc, l| {
                let o = *acc;
                *acc += l.len();
                Some(o)
            })
            .collect();
        let total: usize = levels.iter().map(|l| l.len()).sum();
        let mut uf = UnionFind::new(total);
        // crossings as (arc below-left, arc below-right, sign), twists as (arc, ±1)
        let mut crossings = Vec::new();
        let mut kinks = Vec::new();
        for (s, slice) in self.slices.iter().enumerate() {
            let (lo, hi) = (offsets[s], offsets[s + 1]);
            let (mut i, mut o) = (0, 0);
            for &piece in slice {
                match piece {
                    Piece::Id | Piece::TwistPos | Piece::TwistNeg => {
                        uf.union(lo + i, hi + o);
                        match piece {
                            Piece::TwistPos => kinks.push((lo + i, 1)),
                            Piece::TwistNeg => kinks.push((lo + i, -1)),
                            _ => {}
                        }
                    }
                    Piece::CrossPos | Piece::CrossNeg => {
                        uf.union(lo + i, hi + o + 1);
                        uf.union(lo + i + 1, hi + o);
                        let base = if piece == Piece::CrossPos { 1 } else { -1 };
                        let below = &levels[s];
                        let sign = base * below[i].orientation.sign() * below[i + 1].orientation.sign();
                        crossings.push((lo + i, lo + i + 1, sign));
                    }
                    Piece::CapEv | Piece::CapEvHat => uf.union(lo + i, lo + i + 1),
                    Piece::CupCoev(_) | Piece::CupCoevHat(_) => uf.union(hi + o, hi + o + 1),
                }
                i += piece.arity_in();
                o += piece.arity_out();
            }
        }
        let mut root_to_comp: Vec<Option<usize>> = vec![None; total];
        let mut components: Vec<ComponentInfo> = Vec::new();
        let mut arc_component = Vec::with_capacity(levels.len());
        for (l, level) in levels.iter().enumerate() {
            let mut row = Vec::with_capacity(level.len());
            for (j, strand) in level.iter().enumerate() {
                let root = uf.find(offsets[l] + j);
                let c = *root_to_comp[root].get_or_insert_with(|| {
                    components.push(ComponentInfo { color: strand.color, self_writhe: 0, twists: 0, open: false });
                    components.len() - 1
                });
                if l == 0 || l == levels.len() - 1 {
                    components[c].open = true;
                }
                row.push(c);
            }
            arc_component.push(row);
        }
        let comp_of = |uf: &mut UnionFind, arc: usize| root_to_comp[uf.find(arc)].expect("assigned");
        let mut writhe = 0;
        for (a, b, sign) in crossings {
            writhe += sign;
            let (ca, cb) = (comp_of(&mut uf, a), comp_of(&mut uf, b));
            if ca == cb {
                components[ca].self_writhe += sign;
            }
        }
        let mut twists = 0;
        for (a, s) in kinks {
            twists += s;
            let c = comp_of(&mut uf, a);
            components[c].twists += s;
        }
        DiagramInfo { levels, components, arc_component, writhe, twists }
    }

    /// Closes the rightmost strand on the right.
    pub fn close_last(&self) -> Result<TangleDiagram, TangleError> {
        let (Some(&b), Some(&t)) = (self.bottom.last(), self.top.last()) else {
            return Err(TangleError::NotClosable);
        };
        if b != t {
            return Err(TangleError::NotClosable);
        }
        let (cup, cap) = match b.orientation {
            Orientation::Up => (Piece::CupCoev(b.color), Piece::CapEvHat),
            Orientation::Down => (Piece::CupCoevHat(b.color), Piece::CapEv),
        };
        let mut slices = Vec::with_capacity(self.slices.len() + 2);
        slices.push(with_ids(self.bottom.len() - 1, cup, 0));
        for s in &self.slices {
            let mut s = s.clone();
            s.push(Piece::Id);
            slices.push(s);
        }
        slices.push(with_ids(self.top.len() - 1, cap, 0));
        Ok(TangleDiagram {
            params: self.params,
            colors: self.colors.clone(),
            bottom: self.bottom[..self.bottom.len() - 1].to_vec(),
            slices,
            top: self.top[..self.top.len() - 1].to_vec(),
        })
    }

    /// Closes the leftmost strand on the left.
    pub fn close_first(&self) -> Result<TangleDiagram, TangleError> {
        let (Some(&b), Some(&t)) = (self.bottom.first(), self.top.first()) else {
            return Err(TangleError::NotClosable);
        };
        if b != t {
            return Err(TangleError::NotClosable);
        }
        let (cup, cap) = match b.orientation {
            Orientation::Up => (Piece::CupCoevHat(b.color), Piece::CapEv),
            Orientation::Down => (Piece::CupCoev(b.color), Piece::CapEvHat),
        };
        let mut slices = Vec::with_capacity(self.slices.len() + 2);
        slices.push(with_ids(0, cup, self.bottom.len() - 1));
        for s in &self.slices {
            let mut s2 = vec![Piece::Id];
            s2.extend_from_slice(s);
            slices.push(s2);
        }
        slices.push(with_ids(0, cap, self.top.len() - 1));
        Ok(TangleDiagram {
            params: self.params,
            colors: self.colors.clone(),
            bottom: self.bottom[1..].to_vec(),
            slices,
            top: self.top[1..].to_vec(),
        })
    }

    /// The diagram rotated by π in the plane.
    pub fn rotated(&self) -> Result<TangleDiagram, Vec<TangleError>> {
        let info = self.validate()?;
        let flip = |s: &StrandState| -> StrandState {
            s.iter().rev().map(|x| Strand { color: x.color, orientation: x.orientation.flipped() }).collect()
        };
        let mut slices = Vec::with_capacity(self.slices.len());
        for (k, slice) in self.slices.iter().enumerate().rev() {
            let below = &info.levels[k];
            let mut pos = 0;
            let mut new_slice = Vec::with_capacity(slice.len());
            for &piece in slice {
                let color = below.get(pos).map(|s| s.color).unwrap_or(0);
                new_slice.push(piece.rotated(color));
                pos += piece.arity_in();
            }
            new_slice.reverse();
            slices.push(new_slice);
        }
        Ok(TangleDiagram {
            params: self.params,
            colors: self.colors.clone(),
            bottom: flip(&self.top),
            slices,
            top: flip(&self.bottom),
        })
    }

    /// Number of crossing pieces.
    pub fn crossing_count(&self) -> usize {
        self.slices.iter().flatten().filter(|p| matches!(p, Piece::CrossPos | Piece::CrossNeg)).count()
    }

    /// FNV-1a hash of the canonical text form, as 16 hex digits.
    pub fn fingerprint(&self) -> String {
        let text = self.to_string();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

fn with_ids(before: usize, piece: Piece, after: usize) -> Slice {
    let mut s = vec![Piece::Id; before];
    s.push(piece);
    s.extend(core::iter::repeat(Piece::Id).take(after));
    s
}

fn fmt_state(f: &mut fmt::Formatter<'_>, colors: &ColorTable, s: &[Strand]) -> fmt::Result {
    for (i, x) in s.iter().enumerate() {
        let arrow = match x.orientation {
            Orientation::Up => "^",
            Orientation::Down => "v",
        };
        let sep = if i == 0 { "" } else { " " };
        write!(f, "{sep}{}{arrow}", colors.id(x.color).unwrap_or("?"))?;
    }
    Ok(())
}

/// Canonical text form, one line per section; used for fingerprints.
impl fmt::Display for TangleDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "r {}", self.params.r())?;
        for e in self.colors.entries() {
            writeln!(f, "color {} {}", e.id, e.label)?;
        }
        write!(f, "bottom ")?;
        fmt_state(f, &self.colors, &self.bottom)?;
        writeln!(f)?;
        for s in &self.slices {
            write!(f, "slice")?;
            for p in s {
                match p {
                    Piece::CupCoev(c) | Piece::CupCoevHat(c) => {
                        write!(f, " {}:{}", p.tag(), self.colors.id(*c).unwrap_or("?"))?
                    }
                    _ => write!(f, " {}", p.tag())?,
                }
            }
            writeln!(f)?;
        }
        write!(f, "top ")?;
        fmt_state(f, &self.colors, &self.top)
    }
}

/// An uncolored braid word on `strands` strands. Letter `+i` is a positive
/// crossing of positions `i, i+1` (1-based), `-i` a negative one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braid {
    strands: usize,
    word: Vec<i32>,
}

impl Braid {
    pub fn new(strands: usize, word: Vec<i32>) -> Result<Self, TangleError> {
        if strands == 0 {
            return Err(TangleError::NoStrands);
        }
        for &letter in &word {
            if letter == 0 || letter.unsigned_abs() as usize >= strands {
                return Err(TangleError::BadLetter { letter, strands });
            }
        }
        Ok(Braid { strands, word })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn word(&self) -> &[i32] {
        &self.word
    }

    /// Sum of letter signs, the writhe of the closure with all strands up.
    pub fn writhe(&self) -> i64 {
        self.word.iter().map(|l| l.signum() as i64).sum()
    }

    /// `perm[j]` is the top position (0-based) of the strand starting at
    /// bottom position `j`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect(); // at[pos] = starting strand
        for &l in &self.word {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &s) in at.iter().enumerate() {
            perm[s] = pos;
        }
        perm
    }

    /// Components of the closure as sets of 0-based strands, ordered by
    /// their smallest strand.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut out = Vec::new();
        for s in 0..self.strands {
            if seen[s] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = perm[x];
            }
            cycle.sort_unstable();
            out.push(cycle);
        }
        out
    }

    /// Component index of each strand.
    pub fn component_of_strands(&self) -> Vec<usize> {
        let mut out = vec![0; self.strands];
        for (c, comp) in self.components().iter().enumerate() {
            for &s in comp {
                out[s] = c;
            }
        }
        out
    }

    /// `σ_1⋯σ_{k-1} · w · σ_{k-1}^{-1}⋯σ_1^{-1}`: moves bottom strand `k`
    /// (1-based) to position 1 without changing the closure.
    pub fn conjugated_to_front(&self, k: usize) -> Braid {
        let mut word: Vec<i32> = (1..k as i32).collect();
        word.extend_from_slice(&self.word);
        word.extend((1..k as i32).rev().map(|i| -i));
        Braid { strands: self.strands, word }
    }

    /// Braid product: `self` on strands `1..n`, then `other` on strands
    /// `n..n+m-1`, sharing strand `n`.
    pub fn connect_sum(&self, other: &Braid) -> Braid {
        let shift = self.strands as i32 - 1;
        let mut word = self.word.clone();
        word.extend(other.word.iter().map(|&l| l + l.signum() * shift));
        Braid { strands: self.strands + other.strands - 1, word }
    }
}

/// A braid with a color and orientation on every strand, consistent along
/// the components of its closure.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoredBraid {
    pub params: GlobalParams,
    pub colors: ColorTable,
    pub braid: Braid,
    pub strands: Vec<Strand>,
}

impl ColoredBraid {
    pub fn new(params: GlobalParams, colors: ColorTable, braid: Braid, strands: Vec<Strand>) -> Result<Self, TangleError> {
        if strands.len() != braid.strands() {
            return Err(TangleError::StrandCount { expected: braid.strands(), got: strands.len() });
        }
        colors.check(&params)?;
        for (i, s) in strands.iter().enumerate() {
            if s.color >= colors.len() {
                return Err(TangleError::UnknownColor { slice: 0, position: i, color: s.color });
            }
        }
        let perm = braid.permutation();
        for (a, &b) in perm.iter().enumerate() {
            if strands[a] != strands[b] {
                return Err(TangleError::InconsistentComponent { a: a + 1, b: b + 1 });
            }
        }
        Ok(ColoredBraid { params, colors, braid, strands })
    }

    /// Colors each closure component (ordered by smallest strand) with the
    /// matching entry of `component_colors`, all strands upward. If fewer
    /// colors than components are given, the last one is reused.
    pub fn by_components(params: GlobalParams, braid: Braid, component_colors: &[ModuleLabel]) -> Result<Self, TangleError> {
        let mut table = ColorTable::new();
        let last = component_colors.last().ok_or(TangleError::StrandCount { expected: 1, got: 0 })?;
        let comps = braid.component_of_strands();
        let mut strands = Vec::with_capacity(braid.strands());
        for &c in &comps {
            let label = component_colors.get(c).unwrap_or(last).clone();
            strands.push(Strand::up(table.intern(label)?));
        }
        ColoredBraid::new(params, table, braid, strands)
    }

    /// The braid as an `(n, n)`-tangle.
    pub fn diagram(&self) -> TangleDiagram {
        let n = self.braid.strands();
        let slices = self
            .braid
            .word()
            .iter()
            .map(|&l| {
                let i = l.unsigned_abs() as usize - 1;
                let x = if l > 0 { Piece::CrossPos } else { Piece::CrossNeg };
                with_ids(i, x, n - i - 2)
            })
            .collect();
        let top = self.braid.permutation().iter().enumerate().fold(self.strands.clone(), |mut acc, (s, &p)| {
            acc[p] = self.strands[s];
            acc
        });
        TangleDiagram { params: self.params, colors: self.colors.clone(), bottom: self.strands.clone(), slices, top }
    }

    /// Closure component containing each strand.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.braid.components()
    }

    /// Closes every strand (`keep_open = None`), or moves 1-based strand `k`
    /// to the front by conjugation and closes all others, giving a
    /// `(1, 1)`-tangle whose open strand lies on the component of `k`.
    pub fn close(&self, keep_open: Option<usize>) -> Result<TangleDiagram, TangleError> {
        let n = self.braid.strands();
        let (mut d, keep) = match keep_open {
            None => (self.diagram(), 0),
            Some(k) if (1..=n).contains(&k) => {
                let braid = self.braid.conjugated_to_front(k);
                let mut strands = self.strands.clone();
                strands[..k].rotate_right(1);
                let cb = ColoredBraid { params: self.params, colors: self.colors.clone(), braid, strands };
                (cb.diagram(), 1)
            }
            Some(k) => return Err(TangleError::StrandOutOfRange { strand: k, strands: n }),
        };
        for _ in keep..n {
            d = d.close_last()?;
        }
        Ok(d)
    }

    /// Closes strands `keep+1, …, n` on the right, leaving the first `keep`
    /// open: a `(keep, keep)`-tangle.
    pub fn close_right(&self, keep: usize) -> Result<TangleDiagram, TangleError> {
        let n = self.braid.strands();
        if keep > n {
            return Err(TangleError::StrandOutOfRange { strand: keep, strands: n });
        }
        let mut d = self.diagram();
        for _ in keep..n {
            d = d.close_last()?;
        }
        Ok(d)
    }

    /// Cuts the closure open along a component (0-based, ordered by smallest
    /// strand), keeping that component's smallest strand open.
    pub fn cut(&self, component: usize) -> Result<TangleDiagram, TangleError> {
        let comps = self.components();
        let comp = comps.get(component).ok_or(TangleError::ComponentOutOfRange { component, count: comps.len() })?;
        self.close(Some(comp[0] + 1))
    }

    /// Color label of a closure component.
    pub fn component_label(&self, component: usize) -> Option<&ModuleLabel> {
        let comps = self.components();
        let strand = comps.get(component)?.first()?;
        self.colors.label(self.strands[*strand].color)
    }
}

/// Braid word of a catalog entry: `unknot`, `hopf`, `trefoil`, `figure8`,
/// or `connectsum(a,b)` of two entries.
pub fn catalog(name: &str) -> Result<Braid, TangleError> {
    let name = name.trim();
    let b = |n, w: &[i32]| Braid::new(n, w.to_vec());
    match name {
        "unknot" => b(1, &[]),
        "hopf" => b(2, &[1, 1]),
        "trefoil" => b(2, &[1, 1, 1]),
        "figure8" => b(3, &[1, -2, 1, -2]),
        _ => {
            let inner = name
                .strip_prefix("connectsum(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| TangleError::UnknownCatalog(name.to_string()))?;
            let split = split_top_level_comma(inner).ok_or_else(|| TangleError::UnknownCatalog(name.to_string()))?;
            Ok(catalog(&inner[..split])?.connect_sum(&catalog(&inner[split + 1..])?))
        }
    }
}

fn split_top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// The catalog entry colored by component, all strands upward.
pub fn catalog_colored(params: GlobalParams, name: &str, component_colors: &[ModuleLabel]) -> Result<ColoredBraid, TangleError> {
    ColoredBraid::by_components(params, catalog(name)?, component_colors)
}

/// Convenience: a single Verma color for every component.
pub fn verma_label(alpha: C64) -> ModuleLabel {
    ModuleLabel::Verma(alpha)
}
