//! Bitmap decoding, stitching, bordering and dataset discovery.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::error::IngestError;
use crate::grid::{DimensionClass, GridMap, MapType, Occupancy};

/// Luminance at or above this is free space.
pub const FREE_THRESHOLD: u8 = 128;
/// Width of each of the two frames added around a map.
pub const BORDER: u32 = 15;
/// Maps taken per type from a full dataset.
pub const MAPS_PER_TYPE: usize = 800;

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawBitmap {
    width: u32,
    height: u32,
    luminance: Vec<u8>,
}

impl RawBitmap {
    pub fn new(width: u32, height: u32, luminance: Vec<u8>) -> Result<Self, IngestError> {
        if width == 0 || height == 0 {
            return Err(IngestError::EmptyBitmap);
        }
        let expected = width as usize * height as usize;
        if luminance.len() != expected {
            return Err(IngestError::PixelCount { width, height, expected, actual: luminance.len() });
        }
        Ok(Self { width, height, luminance })
    }

    pub fn filled(width: u32, height: u32, value: u8) -> Result<Self, IngestError> {
        Self::new(width, height, vec![value; width as usize * height as usize])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn luminance(&self) -> &[u8] {
        &self.luminance
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.luminance[y as usize * self.width as usize + x as usize]
    }

    pub fn obstacle_count(&self) -> usize {
        self.luminance.iter().filter(|&&v| v < FREE_THRESHOLD).count()
    }

    /// Decodes a PNG (or any format the image crate reads). Colour input is
    /// reduced with the integer mean `(r + g + b) / 3`.
    pub fn decode_png(path: &Path) -> Result<Self, IngestError> {
        let img = image::open(path).map_err(|source| IngestError::Decode { path: path.to_path_buf(), source })?;
        let rgb = img.to_rgb8();
        let (width, height) = rgb.dimensions();
        let luminance = rgb
            .pixels()
            .map(|p| ((u16::from(p[0]) + u16::from(p[1]) + u16::from(p[2])) / 3) as u8)
            .collect();
        Self::new(width, height, luminance)
    }

    pub fn save_png(&self, path: &Path) -> Result<(), IngestError> {
        let img = image::GrayImage::from_raw(self.width, self.height, self.luminance.clone())
            .expect("buffer length checked at construction");
        img.save(path).map_err(|source| IngestError::Decode { path: path.to_path_buf(), source })
    }
}

pub fn threshold_bitmap(raw: &RawBitmap) -> Result<GridMap, IngestError> {
    let cells = raw
        .luminance
        .iter()
        .map(|&v| if v >= FREE_THRESHOLD { Occupancy::Free } else { Occupancy::Obstacle })
        .collect();
    Ok(GridMap::new(raw.width, raw.height, cells)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layout {
    /// Single tile.
    One,
    /// Two tiles side by side.
    TwoByOne,
    /// Four tiles in a square, row by row.
    TwoByTwo,
}

impl Layout {
    pub fn tiles(self) -> usize {
        match self {
            Layout::One => 1,
            Layout::TwoByOne => 2,
            Layout::TwoByTwo => 4,
        }
    }

    fn grid(self) -> (u32, u32) {
        match self {
            Layout::One => (1, 1),
            Layout::TwoByOne => (2, 1),
            Layout::TwoByTwo => (2, 2),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Layout::One => "1x1",
            Layout::TwoByOne => "2x1",
            Layout::TwoByTwo => "2x2",
        }
    }

    /// The prepared size class this layout produces from 201x201 tiles.
    pub fn dimension(self) -> DimensionClass {
        match self {
            Layout::One => DimensionClass::D261x261,
            Layout::TwoByOne => DimensionClass::D462x261,
            Layout::TwoByTwo => DimensionClass::D462x462,
        }
    }

    pub fn for_dimension(dimension: DimensionClass) -> Option<Self> {
        match dimension {
            DimensionClass::D261x261 => Some(Layout::One),
            DimensionClass::D462x261 => Some(Layout::TwoByOne),
            DimensionClass::D462x462 => Some(Layout::TwoByTwo),
            DimensionClass::Raw => None,
        }
    }
}

/// Places equally sized tiles left-to-right, top-to-bottom.
pub fn stitch(tiles: &[RawBitmap], layout: Layout) -> Result<RawBitmap, IngestError> {
    if tiles.len() != layout.tiles() {
        return Err(IngestError::TileCount { layout: layout.name(), expected: layout.tiles(), actual: tiles.len() });
    }
    let (tw, th) = (tiles[0].width, tiles[0].height);
    if let Some((index, t)) = tiles.iter().enumerate().find(|(_, t)| (t.width, t.height) != (tw, th)) {
        return Err(IngestError::TileSize { index, expected: (tw, th), actual: (t.width, t.height) });
    }
    let (cols, rows) = layout.grid();
    let (w, h) = (tw * cols, th * rows);
    let mut out = Vec::with_capacity(w as usize * h as usize);
    for row in 0..rows {
        for y in 0..th as usize {
            for col in 0..cols {
                let tile = &tiles[(row * cols + col) as usize];
                let line = y * tw as usize;
                out.extend_from_slice(&tile.luminance[line..line + tw as usize]);
            }
        }
    }
    RawBitmap::new(w, h, out)
}

/// Adds a black frame of [`BORDER`] pixels and, inside it, a white frame of
/// the same width.
pub fn add_borders(raw: &RawBitmap) -> RawBitmap {
    let pad = 2 * BORDER;
    let (w, h) = (raw.width + 2 * pad, raw.height + 2 * pad);
    let mut out = vec![0u8; w as usize * h as usize];
    for y in BORDER..h - BORDER {
        let row = y as usize * w as usize;
        out[row + BORDER as usize..row + (w - BORDER) as usize].fill(255);
    }
    for y in 0..raw.height {
        let src = y as usize * raw.width as usize;
        let dst = (y + pad) as usize * w as usize + pad as usize;
        out[dst..dst + raw.width as usize].copy_from_slice(&raw.luminance[src..src + raw.width as usize]);
    }
    RawBitmap { width: w, height: h, luminance: out }
}

/// Stitch, border and threshold in one step.
pub fn prepare_map(
    tiles: &[RawBitmap],
    layout: Layout,
    map_type: Option<MapType>,
    source_id: impl Into<String>,
) -> Result<GridMap, IngestError> {
    let bordered = add_borders(&stitch(tiles, layout)?);
    let map = threshold_bitmap(&bordered)?;
    let dimension = DimensionClass::from_size(map.width(), map.height());
    Ok(map.with_metadata(map_type, dimension, source_id))
}

/// Binary graymap (`P5`, maxval 255) with obstacle cells 0 and free 255.
pub fn encode_pgm(map: &GridMap) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", map.width(), map.height());
    let mut out = Vec::with_capacity(header.len() + map.len());
    out.extend_from_slice(header.as_bytes());
    out.extend(map.cells().iter().map(|c| match c {
        Occupancy::Free => 255u8,
        Occupancy::Obstacle => 0u8,
    }));
    out
}

pub fn decode_pgm(bytes: &[u8], path: &Path) -> Result<GridMap, IngestError> {
    let bad = |reason: &str| IngestError::BadGraymap { path: path.to_path_buf(), reason: reason.to_string() };
    // magic, width, height, maxval, each followed by whitespace
    let mut fields = Vec::with_capacity(4);
    let mut at = 0;
    while fields.len() < 4 {
        while at < bytes.len() && bytes[at].is_ascii_whitespace() {
            at += 1;
        }
        if at < bytes.len() && bytes[at] == b'#' {
            while at < bytes.len() && bytes[at] != b'\n' {
                at += 1;
            }
            continue;
        }
        let begin = at;
        while at < bytes.len() && !bytes[at].is_ascii_whitespace() {
            at += 1;
        }
        if begin == at {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[begin..at]).map_err(|_| bad("non-ascii header"))?);
    }
    if fields[0] != "P5" {
        return Err(bad("magic is not P5"));
    }
    let num = |s: &str| s.parse::<u32>().map_err(|_| bad("bad header number"));
    let (width, height, maxval) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    if maxval != 255 {
        return Err(bad("maxval must be 255"));
    }
    if at >= bytes.len() {
        return Err(bad("missing pixel data"));
    }
    let body = &bytes[at + 1..];
    let expected = width as usize * height as usize;
    if body.len() != expected {
        return Err(bad("pixel data length does not match header"));
    }
    let raw = RawBitmap::new(width, height, body.to_vec())?;
    threshold_bitmap(&raw)
}

pub fn read_pgm(path: &Path) -> Result<GridMap, IngestError> {
    decode_pgm(&fs::read(path)?, path)
}

/// Writes through a temporary sibling and renames, so an interrupted write
/// never leaves a truncated file behind.
pub fn write_pgm(map: &GridMap, path: &Path) -> Result<(), IngestError> {
    write_atomic(path, &encode_pgm(map))
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IngestError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("part");
    let result = fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(bytes)?;
        f.sync_all()
    });
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InventoryEntry {
    pub map_type: MapType,
    pub source_id: String,
    pub path: PathBuf,
}

/// Bitmaps found under a dataset root, grouped by type.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatasetInventory {
    pub entries: Vec<InventoryEntry>,
    /// Files that matched but could not be read.
    pub skipped: usize,
}

impl DatasetInventory {
    pub fn counts(&self) -> BTreeMap<MapType, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            *counts.entry(e.map_type).or_insert(0) += 1;
        }
        counts
    }

    pub fn of_type(&self, map_type: MapType) -> impl Iterator<Item = &InventoryEntry> {
        self.entries.iter().filter(move |e| e.map_type == map_type)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Walks `<root>/<map_type>/**/*.png`. Unknown type directories are
/// ignored. Entries are sorted by path within each type and capped at
/// `cap` per type.
pub fn load_dataset(
    root: &Path,
    filter: Option<&[MapType]>,
    cap: Option<usize>,
) -> Result<DatasetInventory, IngestError> {
    if !root.is_dir() {
        return Err(IngestError::MissingRoot(root.to_path_buf()));
    }
    let mut inventory = DatasetInventory::default();
    for map_type in MapType::ALL {
        if filter.is_some_and(|f| !f.contains(&map_type)) {
            continue;
        }
        let dir = root.join(map_type.as_str());
        if !dir.is_dir() {
            continue;
        }
        let mut files = Vec::new();
        for entry in WalkDir::new(&dir).sort_by_file_name() {
            let entry = match entry {
                Ok(e) => e,
                Err(e) => {
                    warn!("skipping unreadable entry under {}: {e}", dir.display());
                    inventory.skipped += 1;
                    continue;
                }
            };
            let path = entry.path();
            let is_png = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
            if !entry.file_type().is_file() || !is_png {
                continue;
            }
            if let Err(e) = fs::File::open(path) {
                warn!("skipping {}: {e}", path.display());
                inventory.skipped += 1;
                continue;
            }
            files.push(path.to_path_buf());
        }
        files.sort();
        files.truncate(cap.unwrap_or(usize::MAX));
        inventory.entries.extend(files.into_iter().map(|path| {
            let rel = path.strip_prefix(&dir).unwrap_or(&path).with_extension("");
            let source_id = rel.to_string_lossy().replace(std::path::MAIN_SEPARATOR, "_");
            InventoryEntry { map_type, source_id, path }
        }));
    }
    Ok(inventory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{CellState, Coord};
    use proptest::prelude::*;

    fn bitmap(w: u32, h: u32, seed: u8) -> RawBitmap {
        let lum = (0..w * h).map(|i| if (i as u8).wrapping_mul(31).wrapping_add(seed).is_multiple_of(3) { 0 } else { 255 }).collect();
        RawBitmap::new(w, h, lum).unwrap()
    }

    #[test]
    fn threshold_examples() {
        let free = threshold_bitmap(&RawBitmap::new(1, 1, vec![255]).unwrap()).unwrap();
        assert_eq!(free.cell_state(Coord::new(0, 0)), CellState::Free);
        let blocked = threshold_bitmap(&RawBitmap::new(1, 1, vec![0]).unwrap()).unwrap();
        assert_eq!(blocked.cell_state(Coord::new(0, 0)), CellState::Obstacle);
        let edge = threshold_bitmap(&RawBitmap::new(2, 1, vec![127, 128]).unwrap()).unwrap();
        assert_eq!(edge.cells(), &[Occupancy::Obstacle, Occupancy::Free]);
        assert!(matches!(RawBitmap::new(0, 1, vec![]), Err(IngestError::EmptyBitmap)));
    }

    #[test]
    fn stitch_sizes() {
        let t = bitmap(201, 201, 0);
        let wide = stitch(&[t.clone(), bitmap(201, 201, 1)], Layout::TwoByOne).unwrap();
        assert_eq!((wide.width(), wide.height()), (402, 201));
        let square = stitch(&vec![t.clone(); 4], Layout::TwoByTwo).unwrap();
        assert_eq!((square.width(), square.height()), (402, 402));
        assert_eq!(stitch(std::slice::from_ref(&t), Layout::One).unwrap(), t);
    }

    #[test]
    fn stitch_placement() {
        let tiles: Vec<_> = (0..4).map(|v| RawBitmap::filled(2, 2, v * 10).unwrap()).collect();
        let out = stitch(&tiles, Layout::TwoByTwo).unwrap();
        assert_eq!(out.get(0, 0), 0);
        assert_eq!(out.get(3, 1), 10);
        assert_eq!(out.get(1, 2), 20);
        assert_eq!(out.get(3, 3), 30);
    }

    #[test]
    fn stitch_errors() {
        let t = bitmap(4, 4, 0);
        assert!(matches!(stitch(std::slice::from_ref(&t), Layout::TwoByOne), Err(IngestError::TileCount { .. })));
        assert!(matches!(
            stitch(&[t, bitmap(4, 5, 0)], Layout::TwoByOne),
            Err(IngestError::TileSize { index: 1, .. })
        ));
    }

    #[test]
    fn border_sizes_and_rings() {
        for (w, h, ew, eh) in [(201, 201, 261, 261), (402, 201, 462, 261), (402, 402, 462, 462)] {
            let out = add_borders(&RawBitmap::filled(w, h, 0).unwrap());
            assert_eq!((out.width(), out.height()), (ew, eh));
            assert_eq!(out.get(0, 0), 0);
            assert_eq!(out.get(14, 100), 0);
            assert_eq!(out.get(15, 15), 255);
            assert_eq!(out.get(29, 100), 255);
            assert_eq!(out.get(30, 30), 0);
            assert_eq!(out.get(ew - 16, eh - 16), 255);
            assert_eq!(out.get(ew - 1, eh - 1), 0);
        }
    }

    #[test]
    fn pgm_round_trip_and_errors() {
        let map = threshold_bitmap(&bitmap(7, 5, 2)).unwrap();
        let bytes = encode_pgm(&map);
        assert!(bytes.starts_with(b"P5\n7 5\n255\n"));
        let back = decode_pgm(&bytes, Path::new("x.pgm")).unwrap();
        assert_eq!(back.cells(), map.cells());
        assert!(decode_pgm(b"P2\n1 1\n255\n\x00", Path::new("x")).is_err());
        assert!(decode_pgm(b"P5\n2 2\n255\n\x00", Path::new("x")).is_err());
        assert!(decode_pgm(b"P5\n# comment\n1 1\n255\n\xff", Path::new("x")).is_ok());
    }

    #[test]
    fn empty_dataset_dir() {
        let dir = tempfile::tempdir().unwrap();
        let inv = load_dataset(dir.path(), None, None).unwrap();
        assert!(inv.is_empty());
        assert!(inv.counts().is_empty());
        assert!(matches!(
            load_dataset(&dir.path().join("nope"), None, None),
            Err(IngestError::MissingRoot(_))
        ));
    }

    #[test]
    fn dataset_groups_sorted_and_capped() {
        let dir = tempfile::tempdir().unwrap();
        let tile = bitmap(4, 4, 0);
        for t in MapType::ALL {
            let sub = dir.path().join(t.as_str()).join("train");
            fs::create_dir_all(&sub).unwrap();
            for i in (0..5).rev() {
                tile.save_png(&sub.join(format!("{i}.png"))).unwrap();
            }
        }
        fs::create_dir_all(dir.path().join("single_bugtrap")).unwrap();
        tile.save_png(&dir.path().join("single_bugtrap/0.png")).unwrap();
        fs::write(dir.path().join("forest/train/notes.txt"), "x").unwrap();

        let inv = load_dataset(dir.path(), None, None).unwrap();
        assert_eq!(inv.counts().len(), 5);
        assert!(inv.counts().values().all(|&c| c == 5));
        let forest: Vec<_> = inv.of_type(MapType::Forest).map(|e| e.source_id.clone()).collect();
        assert_eq!(forest, vec!["train_0", "train_1", "train_2", "train_3", "train_4"]);

        let capped = load_dataset(dir.path(), Some(&[MapType::Mazes]), Some(3)).unwrap();
        assert_eq!(capped.counts(), BTreeMap::from([(MapType::Mazes, 3)]));
        let decoded = RawBitmap::decode_png(&capped.entries[0].path).unwrap();
        assert_eq!(decoded, tile);
    }

    fn binary_tiles(count: usize) -> impl Strategy<Value = (u32, u32, Vec<Vec<u8>>)> {
        (1u32..8, 1u32..8).prop_flat_map(move |(w, h)| {
            let tile = proptest::collection::vec(prop_oneof![Just(0u8), Just(255u8)], (w * h) as usize);
            (Just(w), Just(h), proptest::collection::vec(tile, count))
        })
    }

    proptest! {
        #[test]
        fn stitch_preserves_obstacles((w, h, tiles) in binary_tiles(4)) {
            let tiles: Vec<_> = tiles.into_iter().map(|t| RawBitmap::new(w, h, t).unwrap()).collect();
            let out = stitch(&tiles, Layout::TwoByTwo).unwrap();
            let total: usize = tiles.iter().map(RawBitmap::obstacle_count).sum();
            prop_assert_eq!(out.obstacle_count(), total);
        }

        #[test]
        fn threshold_commutes_with_stitch((w, h, tiles) in binary_tiles(2)) {
            let tiles: Vec<_> = tiles.into_iter().map(|t| RawBitmap::new(w, h, t).unwrap()).collect();
            let via_bitmap = threshold_bitmap(&stitch(&tiles, Layout::TwoByOne).unwrap()).unwrap();
            // stitch the thresholded grids directly, cell by cell
            let grids: Vec<_> = tiles.iter().map(|t| threshold_bitmap(t).unwrap()).collect();
            let mut cells = Vec::new();
            for y in 0..h as usize {
                for g in &grids {
                    cells.extend_from_slice(&g.cells()[y * w as usize..(y + 1) * w as usize]);
                }
            }
            prop_assert_eq!(via_bitmap.cells(), &cells[..]);
        }

        #[test]
        fn prepared_corners((w, h, tiles) in binary_tiles(1)) {
            let tiles: Vec<_> = tiles.into_iter().map(|t| RawBitmap::new(w, h, t).unwrap()).collect();
            let map = prepare_map(&tiles, Layout::One, None, "t").unwrap();
            let (mw, mh) = (map.width() as i32, map.height() as i32);
            for c in [(0, 0), (mw - 1, 0), (0, mh - 1), (mw - 1, mh - 1)] {
                prop_assert_eq!(map.cell_state(c.into()), CellState::Obstacle);
            }
            prop_assert!(map.is_free(Coord::new(15, 15)));
            prop_assert!(map.is_free(Coord::new(mw - 16, mh - 16)));
        }
    }
}
