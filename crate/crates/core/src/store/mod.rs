//! Corpus ingestion and on-disk persistence: feature tables, dominant
//! color sidecars, stats snapshots, standardized images and the event log.

mod events;
mod table;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use events::{Event, EventLog, EventRecord};
pub use table::{read_likes, read_palettes, write_palettes, FeatureTable, FEATURES_HEADER, PALETTE_HEADER};

use crate::color::{dominant_colors, DominantColorSummary, DEFAULT_DOMINANT_K};
use crate::error::{Error, Result};
use crate::features::{extract, FeatureVector};
use crate::fuzzy::FisConfig;
use crate::ids::ImageId;
use crate::imaging::StandardImage;
use crate::scoring::{DatasetStats, ScoredRow};

pub const STATS_FILE: &str = "stats.json";
pub const PALETTES_FILE: &str = "dominant_colors.csv";
pub const IMAGES_DIR: &str = "images";

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

/// Everything the scoring and study layers need about a set of images.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub table: FeatureTable,
    pub palettes: BTreeMap<ImageId, DominantColorSummary>,
    /// Directory of standardized `<id>.png` files, when available.
    pub image_dir: Option<PathBuf>,
}

#[derive(Debug)]
pub struct IngestReport {
    pub corpus: Corpus,
    pub images: BTreeMap<ImageId, StandardImage>,
    /// Files that looked like images but could not be used.
    pub skipped: Vec<(PathBuf, String)>,
}

struct Extracted {
    image: StandardImage,
    features: FeatureVector,
    palette: DominantColorSummary,
}

fn is_image_file(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

/// Standardizes and scores every PNG/JPEG in `dir` (non-recursive).
/// Likes default to 0 for images missing from the likes sidecar.
pub fn ingest(dir: impl AsRef<Path>, likes_file: Option<&Path>) -> Result<IngestReport> {
    let dir = dir.as_ref();
    let likes = match likes_file {
        Some(p) => read_likes(std::fs::File::open(p).map_err(|e| Error::io(p, e))?)?,
        None => BTreeMap::new(),
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && is_image_file(p))
        .collect();
    paths.sort();

    let extracted: Vec<(PathBuf, Result<Extracted>)> = paths
        .into_par_iter()
        .map(|path| {
            let result = StandardImage::load(&path).map(|image| Extracted {
                features: extract(&image),
                palette: dominant_colors(&image, DEFAULT_DOMINANT_K),
                image,
            });
            (path, result)
        })
        .collect();

    let mut skipped = Vec::new();
    let mut accepted: BTreeMap<ImageId, Extracted> = BTreeMap::new();
    for (path, result) in extracted {
        let id = ImageId::from(
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        );
        match result {
            Err(e) => skipped.push((path, e.to_string())),
            Ok(_) if accepted.contains_key(&id) => {
                skipped.push((path, format!("duplicate image id {id}")));
            }
            Ok(x) => {
                accepted.insert(id, x);
            }
        }
    }
    if accepted.is_empty() {
        return Err(Error::invalid(format!("no decodable images in {}", dir.display())));
    }

    let stats = DatasetStats::from_features(accepted.values().map(|x| &x.features))?;
    let rows = accepted
        .iter()
        .map(|(id, x)| ScoredRow::new(id.clone(), likes.get(id).copied().unwrap_or(0), &x.features, &stats))
        .collect();
    let table = FeatureTable::new(rows, Some(stats))?;
    let mut palettes = BTreeMap::new();
    let mut images = BTreeMap::new();
    for (id, x) in accepted {
        palettes.insert(id.clone(), x.palette);
        images.insert(id, x.image);
    }
    Ok(IngestReport {
        corpus: Corpus {
            table,
            palettes,
            image_dir: None,
        },
        images,
        skipped,
    })
}

fn sibling(table_path: &Path, name: &str) -> PathBuf {
    table_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."))
        .join(name)
}

impl IngestReport {
    /// Writes the feature table plus its sidecars next to it:
    /// `stats.json`, `dominant_colors.csv` and `images/<id>.png`.
    pub fn write(&mut self, table_path: impl AsRef<Path>) -> Result<()> {
        let table_path = table_path.as_ref();
        self.corpus.write(table_path)?;
        let image_dir = sibling(table_path, IMAGES_DIR);
        std::fs::create_dir_all(&image_dir).map_err(|e| Error::io(&image_dir, e))?;
        for (id, img) in &self.images {
            let path = image_dir.join(format!("{id}.png"));
            std::fs::write(&path, img.to_png()).map_err(|e| Error::io(&path, e))?;
        }
        self.corpus.image_dir = Some(image_dir);
        Ok(())
    }
}

impl Corpus {
    pub fn write(&self, table_path: &Path) -> Result<()> {
        if let Some(dir) = table_path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        self.table.save(table_path)?;
        if let Some(stats) = self.table.stats() {
            let path = sibling(table_path, STATS_FILE);
            std::fs::write(&path, serde_json::to_vec_pretty(stats)?).map_err(|e| Error::io(&path, e))?;
        }
        let path = sibling(table_path, PALETTES_FILE);
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        write_palettes(&self.palettes, std::io::BufWriter::new(file))
    }

    /// Opens a feature table and whichever sidecars exist next to it.
    pub fn open(table_path: impl AsRef<Path>) -> Result<Self> {
        let table_path = table_path.as_ref();
        let mut table = FeatureTable::load(table_path)?;
        let stats_path = sibling(table_path, STATS_FILE);
        if stats_path.exists() {
            let bytes = std::fs::read(&stats_path).map_err(|e| Error::io(&stats_path, e))?;
            table = table.with_stats(serde_json::from_slice(&bytes)?);
        }
        let palettes_path = sibling(table_path, PALETTES_FILE);
        let palettes = if palettes_path.exists() {
            let file = std::fs::File::open(&palettes_path).map_err(|e| Error::io(&palettes_path, e))?;
            read_palettes(file)?
        } else {
            BTreeMap::new()
        };
        let image_dir = Some(sibling(table_path, IMAGES_DIR)).filter(|d| d.is_dir());
        Ok(Self {
            table,
            palettes,
            image_dir,
        })
    }

    pub fn palette(&self, id: &ImageId) -> Result<&DominantColorSummary> {
        self.palettes
            .get(id)
            .ok_or_else(|| Error::NotFound(format!("dominant colors for image {id}")))
    }

    pub fn row(&self, id: &ImageId) -> Result<&ScoredRow> {
        self.table
            .get(id)
            .ok_or_else(|| Error::NotFound(format!("image {id}")))
    }

    pub fn image_path(&self, id: &ImageId) -> Option<PathBuf> {
        self.image_dir.as_ref().map(|d| d.join(format!("{id}.png")))
    }
}

/// Reads a fuzzy system description (JSON).
pub fn load_fis_config(path: impl AsRef<Path>) -> Result<FisConfig> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_slice(&bytes)?)
}
