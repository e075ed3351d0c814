//! JSON file formats: slice-word diagrams, colored braids and results.

use rtcalc_core::invariant::InvariantResult;
use rtcalc_core::qarith::{GlobalParams, ParamError};
use rtcalc_core::repr::ModuleLabel;
use rtcalc_core::tangle::{Braid, ColorTable, ColoredBraid, Orientation, Piece, Strand, TangleDiagram, TangleError};
use rtcalc_core::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported diagram version {0} (expected 1)")]
    Version(u32),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error("diagram does not type-check: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Typing(Vec<TangleError>),
    #[error("unknown color id {0:?}")]
    UnknownColor(String),
    #[error("piece {0:?} needs a \"color\" field")]
    MissingCupColor(&'static str),
    #[error("label {0} cannot be written as a file color")]
    Unrepresentable(String),
    #[error("braid input has no r and none was given")]
    MissingR,
}

/// A color as it appears in files: only Verma and simple modules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ColorSpec {
    Verma { alpha: [f64; 2] },
    Simple { n: u32, l: i64 },
}

impl ColorSpec {
    pub fn label(&self) -> ModuleLabel {
        match *self {
            ColorSpec::Verma { alpha } => ModuleLabel::Verma(C64::new(alpha[0], alpha[1])),
            ColorSpec::Simple { n, l } => ModuleLabel::Simple { n, l },
        }
    }

    pub fn from_label(label: &ModuleLabel) -> Result<Self, FormatError> {
        match *label {
            ModuleLabel::Verma(a) => Ok(ColorSpec::Verma { alpha: [a.re, a.im] }),
            ModuleLabel::Simple { n, l } => Ok(ColorSpec::Simple { n, l }),
            _ => Err(FormatError::Unrepresentable(label.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorJson {
    pub id: String,
    #[serde(flatten)]
    pub spec: ColorSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl From<Orientation> for Direction {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::Up => Direction::Up,
            Orientation::Down => Direction::Down,
        }
    }
}

impl From<Direction> for Orientation {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Up => Orientation::Up,
            Direction::Down => Orientation::Down,
        }
    }
}

/// One piece of a slice. Cups create a strand and so name its color.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", deny_unknown_fields)]
pub enum PieceJson {
    #[serde(rename = "id")]
    Id,
    #[serde(rename = "xp")]
    CrossPos,
    #[serde(rename = "xn")]
    CrossNeg,
    #[serde(rename = "capL")]
    CapEv,
    #[serde(rename = "capR")]
    CapEvHat,
    #[serde(rename = "cupL")]
    CupCoev { color: String },
    #[serde(rename = "cupR")]
    CupCoevHat { color: String },
    #[serde(rename = "twp")]
    TwistPos,
    #[serde(rename = "twn")]
    TwistNeg,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub version: u32,
    pub r: u32,
    pub colors: Vec<ColorJson>,
    pub bottom: Vec<(String, Direction)>,
    pub slices: Vec<Vec<PieceJson>>,
}

impl DiagramJson {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("diagram serializes");
        s.push('\n');
        s
    }

    /// Builds and validates the diagram; the top boundary is computed by
    /// propagation.
    pub fn to_diagram(&self, max_r: u32) -> Result<TangleDiagram, FormatError> {
        if self.version != FORMAT_VERSION {
            return Err(FormatError::Version(self.version));
        }
        let params = GlobalParams::with_max_r(self.r, max_r)?;
        let mut colors = ColorTable::new();
        for c in &self.colors {
            colors.push(c.id.clone(), c.spec.label())?;
        }
        colors.check(&params)?;
        let color = |id: &str| colors.index_of(id).ok_or_else(|| FormatError::UnknownColor(id.to_string()));
        let mut bottom = Vec::with_capacity(self.bottom.len());
        for (id, dir) in &self.bottom {
            bottom.push(Strand { color: color(id)?, orientation: (*dir).into() });
        }
        let mut slices = Vec::with_capacity(self.slices.len());
        for s in &self.slices {
            let mut slice = Vec::with_capacity(s.len());
            for p in s {
                slice.push(match p {
                    PieceJson::Id => Piece::Id,
                    PieceJson::CrossPos => Piece::CrossPos,
                    PieceJson::CrossNeg => Piece::CrossNeg,
                    PieceJson::CapEv => Piece::CapEv,
                    PieceJson::CapEvHat => Piece::CapEvHat,
                    PieceJson::CupCoev { color: c } => Piece::CupCoev(color(c)?),
                    PieceJson::CupCoevHat { color: c } => Piece::CupCoevHat(color(c)?),
                    PieceJson::TwistPos => Piece::TwistPos,
                    PieceJson::TwistNeg => Piece::TwistNeg,
                });
            }
            slices.push(slice);
        }
        let mut d = TangleDiagram { params, colors, bottom: bottom.clone(), slices, top: Vec::new() };
        let mut state = bottom;
        let mut errors = Vec::new();
        for (i, s) in d.slices.iter().enumerate() {
            match d.propagate(i, &state, s) {
                Ok(next) => state = next,
                Err(e) => {
                    errors.push(e);
                    break;
                }
            }
        }
        if !errors.is_empty() {
            return Err(FormatError::Typing(errors));
        }
        d.top = state;
        d.validate().map_err(FormatError::Typing)?;
        Ok(d)
    }

    pub fn from_diagram(d: &TangleDiagram) -> Result<Self, FormatError> {
        let ids: Vec<String> = d.colors.entries().iter().map(|e| e.id.clone()).collect();
        let colors = d
            .colors
            .entries()
            .iter()
            .map(|e| Ok(ColorJson { id: e.id.clone(), spec: ColorSpec::from_label(&e.label)? }))
            .collect::<Result<Vec<_>, FormatError>>()?;
        let id = |c: usize| ids.get(c).cloned().unwrap_or_default();
        let bottom = d.bottom.iter().map(|s| (id(s.color), s.orientation.into())).collect();
        let slices = d
            .slices
            .iter()
            .map(|s| {
                s.iter()
                    .map(|p| match *p {
                        Piece::Id => PieceJson::Id,
                        Piece::CrossPos => PieceJson::CrossPos,
                        Piece::CrossNeg => PieceJson::CrossNeg,
                        Piece::CapEv => PieceJson::CapEv,
                        Piece::CapEvHat => PieceJson::CapEvHat,
                        Piece::CupCoev(c) => PieceJson::CupCoev { color: id(c) },
                        Piece::CupCoevHat(c) => PieceJson::CupCoevHat { color: id(c) },
                        Piece::TwistPos => PieceJson::TwistPos,
                        Piece::TwistNeg => PieceJson::TwistNeg,
                    })
                    .collect()
            })
            .collect();
        Ok(DiagramJson { version: FORMAT_VERSION, r: d.params.r(), colors, bottom, slices })
    }
}

/// A braid whose closure is the link; one color per strand, all strands
/// upward. `cut` is a 0-based closure component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraidJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    pub braid: Vec<i32>,
    pub strands: usize,
    pub colors: Vec<ColorSpec>,
    #[serde(default)]
    pub cut: Option<usize>,
}

impl BraidJson {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("braid serializes");
        s.push('\n');
        s
    }

    /// `r` from the command line wins over the file.
    pub fn to_colored(&self, r: Option<u32>, max_r: u32) -> Result<ColoredBraid, FormatError> {
        let r = r.or(self.r).ok_or(FormatError::MissingR)?;
        let params = GlobalParams::with_max_r(r, max_r)?;
        let braid = Braid::new(self.strands, self.braid.clone())?;
        if self.colors.len() != self.strands {
            return Err(TangleError::StrandCount { expected: self.strands, got: self.colors.len() }.into());
        }
        let mut table = ColorTable::new();
        let mut strands = Vec::with_capacity(self.strands);
        for c in &self.colors {
            strands.push(Strand::up(table.intern(c.label())?));
        }
        Ok(ColoredBraid::new(params, table, braid, strands)?)
    }
}

/// Either input format, told apart by the presence of `"braid"`.
#[derive(Clone, Debug, PartialEq)]
pub enum InputFile {
    Diagram(DiagramJson),
    Braid(BraidJson),
}

impl InputFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        if v.get("braid").is_some() {
            Ok(InputFile::Braid(serde_json::from_value(v)?))
        } else {
            Ok(InputFile::Diagram(serde_json::from_value(v)?))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultJson {
    pub value: [f64; 2],
    pub eta: [f64; 2],
    pub cut: String,
    pub residual: f64,
    pub r: u32,
    pub hash: String,
}

impl From<&InvariantResult> for ResultJson {
    fn from(res: &InvariantResult) -> Self {
        ResultJson {
            value: [res.value.re, res.value.im],
            eta: [res.eta.re, res.eta.im],
            cut: res.cut_color_id.clone(),
            residual: res.scalar_residual,
            r: res.r,
            hash: res.diagram_hash.clone(),
        }
    }
}
