use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::color::{BasicColor, DominantColorSummary};
use crate::error::{Error, Result};
use crate::ids::ImageId;
use crate::scoring::{DatasetStats, ScoredRow};

pub const FEATURES_HEADER: [&str; 10] = [
    "image_id",
    "likes",
    "color_harmony",
    "lightness",
    "complexity",
    "ch_norm",
    "l_norm",
    "c_norm",
    "simplicity_norm",
    "aesthetic_score",
];

pub const PALETTE_HEADER: [&str; 4] = ["image_id", "rank", "color", "pixel_count"];

/// Feature rows keyed by unique image id, with the stats snapshot the
/// normalized columns were computed against (when known).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    rows: Vec<ScoredRow>,
    stats: Option<DatasetStats>,
}

impl FeatureTable {
    pub fn new(rows: Vec<ScoredRow>, stats: Option<DatasetStats>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for row in &rows {
            if !seen.insert(&row.image_id) {
                return Err(Error::invalid(format!("duplicate image id {}", row.image_id)));
            }
        }
        Ok(Self { rows, stats })
    }

    pub fn rows(&self) -> &[ScoredRow] {
        &self.rows
    }

    pub fn stats(&self) -> Option<&DatasetStats> {
        self.stats.as_ref()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, id: &ImageId) -> Option<&ScoredRow> {
        self.rows.iter().find(|r| &r.image_id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &ImageId> {
        self.rows.iter().map(|r| &r.image_id)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(FEATURES_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.image_id.to_string(),
                r.likes.to_string(),
                r.color_harmony.to_string(),
                r.lightness.to_string(),
                r.complexity.to_string(),
                r.ch_norm.to_string(),
                r.l_norm.to_string(),
                r.c_norm.to_string(),
                r.simplicity_norm.to_string(),
                r.aesthetic_score.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Parses `features.csv`; the header must match exactly.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        check_header(&mut r, &FEATURES_HEADER)?;
        let rows = r
            .deserialize::<ScoredRow>()
            .map(|rec| rec.map_err(csv_err))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, None)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(std::io::BufReader::new(file))
    }

    pub fn with_stats(mut self, stats: DatasetStats) -> Self {
        self.stats = Some(stats);
        self
    }
}

fn check_header<R: Read>(r: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = r.headers().map_err(csv_err)?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "header mismatch: expected `{}`, found `{}`",
                expected.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

#[derive(Serialize, Deserialize)]
struct PaletteRow {
    image_id: ImageId,
    rank: usize,
    color: BasicColor,
    pixel_count: u32,
}

pub fn write_palettes<W: Write>(palettes: &BTreeMap<ImageId, DominantColorSummary>, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(PALETTE_HEADER).map_err(csv_err)?;
    for (id, summary) in palettes {
        for (rank, &(color, pixel_count)) in summary.entries().iter().enumerate() {
            w.serialize(PaletteRow {
                image_id: id.clone(),
                rank: rank + 1,
                color,
                pixel_count,
            })
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn read_palettes<R: Read>(input: R) -> Result<BTreeMap<ImageId, DominantColorSummary>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    check_header(&mut r, &PALETTE_HEADER)?;
    let mut grouped: BTreeMap<ImageId, Vec<(BasicColor, u32)>> = BTreeMap::new();
    for rec in r.deserialize::<PaletteRow>() {
        let row = rec.map_err(csv_err)?;
        grouped.entry(row.image_id).or_default().push((row.color, row.pixel_count));
    }
    grouped
        .into_iter()
        .map(|(id, entries)| Ok((id, DominantColorSummary::new(entries)?)))
        .collect()
}

/// Sidecar `image_id,likes` file.
pub fn read_likes<R: Read>(input: R) -> Result<BTreeMap<ImageId, u64>> {
    #[derive(Deserialize)]
    struct Likes {
        image_id: ImageId,
        likes: u64,
    }
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    check_header(&mut r, &["image_id", "likes"])?;
    r.deserialize::<Likes>()
        .map(|rec| rec.map(|l| (l.image_id, l.likes)).map_err(csv_err))
        .collect()
}
