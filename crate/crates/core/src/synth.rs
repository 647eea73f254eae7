//! Procedural stand-ins for the five benchmark map families.
//!
//! Tiles are 201x201, white free space on black obstacles, and depend only
//! on `(map_type, index, seed)`. They are meant for tests, demos and
//! desk-scale benchmarking when the public image set is not at hand.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::IngestError;
use crate::grid::MapType;
use crate::ingest::RawBitmap;

pub const TILE: u32 = 201;

struct Canvas {
    size: i32,
    px: Vec<u8>,
}

impl Canvas {
    fn new(size: u32) -> Self {
        Self { size: size as i32, px: vec![255; (size * size) as usize] }
    }

    fn block(&mut self, x: i32, y: i32) {
        if (0..self.size).contains(&x) && (0..self.size).contains(&y) {
            self.px[(y * self.size + x) as usize] = 0;
        }
    }

    fn clear(&mut self, x: i32, y: i32) {
        if (0..self.size).contains(&x) && (0..self.size).contains(&y) {
            self.px[(y * self.size + x) as usize] = 255;
        }
    }

    fn rect(&mut self, x0: i32, y0: i32, x1: i32, y1: i32, fill: bool) {
        for y in y0.max(0)..y1.min(self.size) {
            for x in x0.max(0)..x1.min(self.size) {
                if fill {
                    self.block(x, y);
                } else {
                    self.clear(x, y);
                }
            }
        }
    }

    fn disc(&mut self, cx: i32, cy: i32, r: i32) {
        for y in cy - r..=cy + r {
            for x in cx - r..=cx + r {
                if (x - cx).pow(2) + (y - cy).pow(2) <= r * r {
                    self.block(x, y);
                }
            }
        }
    }

    fn into_bitmap(self) -> RawBitmap {
        RawBitmap::new(self.size as u32, self.size as u32, self.px).expect("canvas is square and non-empty")
    }
}

fn rng_for(map_type: MapType, index: usize, seed: u64) -> ChaCha8Rng {
    let salt = map_type as u64 + 1;
    ChaCha8Rng::seed_from_u64(seed ^ (salt << 56) ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// One synthetic tile.
pub fn tile(map_type: MapType, index: usize, seed: u64) -> RawBitmap {
    let mut rng = rng_for(map_type, index, seed);
    let mut c = Canvas::new(TILE);
    match map_type {
        MapType::AlternatingGaps => gaps(&mut c, &mut rng),
        MapType::Forest => forest(&mut c, &mut rng, 0.20),
        MapType::BugtrapForest => {
            forest(&mut c, &mut rng, 0.12);
            bugtrap(&mut c, &mut rng);
        }
        MapType::GapsAndForest => {
            gaps(&mut c, &mut rng);
            forest(&mut c, &mut rng, 0.08);
        }
        MapType::Mazes => maze(&mut c, &mut rng),
    }
    c.into_bitmap()
}

/// Vertical walls, each with one opening, openings alternating between the
/// upper and lower half.
fn gaps(c: &mut Canvas, rng: &mut ChaCha8Rng) {
    let walls = rng.random_range(3..=5);
    let spacing = c.size / (walls + 1);
    let upper_first = rng.random_bool(0.5);
    for i in 0..walls {
        let x = spacing * (i + 1) + rng.random_range(-6..=6);
        let thick = rng.random_range(4..=8);
        let gap = rng.random_range(18..=30);
        let upper = (i % 2 == 0) == upper_first;
        let gy = if upper {
            rng.random_range(5..c.size / 2 - gap)
        } else {
            rng.random_range(c.size / 2..c.size - gap - 5)
        };
        c.rect(x, 0, x + thick, c.size, true);
        c.rect(x, gy, x + thick, gy + gap, false);
    }
}

/// Random discs until roughly `density` of the tile is covered.
fn forest(c: &mut Canvas, rng: &mut ChaCha8Rng, density: f64) {
    let target = (f64::from(c.size * c.size) * density) as usize;
    let mut guard = 0;
    while c.px.iter().filter(|&&v| v == 0).count() < target && guard < 500 {
        let r = rng.random_range(3..=9);
        c.disc(rng.random_range(0..c.size), rng.random_range(0..c.size), r);
        guard += 1;
    }
}

/// A thick U-shaped trap opening in a random direction.
fn bugtrap(c: &mut Canvas, rng: &mut ChaCha8Rng) {
    let half = rng.random_range(25..=45);
    let cx = c.size / 2 + rng.random_range(-30..=30);
    let cy = c.size / 2 + rng.random_range(-30..=30);
    let t = 5;
    let (x0, y0, x1, y1) = (cx - half, cy - half, cx + half, cy + half);
    c.rect(x0, y0, x1, y1, true);
    c.rect(x0 + t, y0 + t, x1 - t, y1 - t, false);
    let mouth = half / 2;
    match rng.random_range(0..4) {
        0 => c.rect(x0, cy - mouth, x0 + t, cy + mouth, false),
        1 => c.rect(x1 - t, cy - mouth, x1, cy + mouth, false),
        2 => c.rect(cx - mouth, y0, cx + mouth, y0 + t, false),
        _ => c.rect(cx - mouth, y1 - t, cx + mouth, y1, false),
    }
}

/// Depth-first backtracker maze with corridors several cells wide.
fn maze(c: &mut Canvas, rng: &mut ChaCha8Rng) {
    let cells = rng.random_range(7..=10);
    let pitch = c.size / cells;
    let wall = 4;
    c.rect(0, 0, c.size, c.size, true);
    let mut visited = vec![false; (cells * cells) as usize];
    let mut stack = vec![(0i32, 0i32)];
    visited[0] = true;
    let open_cell = |c: &mut Canvas, x: i32, y: i32| {
        let (px, py) = (x * pitch + wall / 2, y * pitch + wall / 2);
        c.rect(px, py, px + pitch - wall, py + pitch - wall, false);
    };
    open_cell(c, 0, 0);
    while let Some(&(x, y)) = stack.last() {
        let options: Vec<(i32, i32)> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(|(dx, dy)| (x + dx, y + dy))
            .filter(|&(nx, ny)| (0..cells).contains(&nx) && (0..cells).contains(&ny))
            .filter(|&(nx, ny)| !visited[(ny * cells + nx) as usize])
            .collect();
        if options.is_empty() {
            stack.pop();
            continue;
        }
        let (nx, ny) = options[rng.random_range(0..options.len())];
        visited[(ny * cells + nx) as usize] = true;
        open_cell(c, nx, ny);
        // knock out the wall between the two cells
        let (ax, ay) = (x.min(nx) * pitch + wall / 2, y.min(ny) * pitch + wall / 2);
        if nx != x {
            c.rect(ax, ay, ax + 2 * pitch - wall, ay + pitch - wall, false);
        } else {
            c.rect(ax, ay, ax + pitch - wall, ay + 2 * pitch - wall, false);
        }
        stack.push((nx, ny));
    }
    // a few extra openings so there is more than one route
    for _ in 0..cells {
        let x = rng.random_range(1..cells) * pitch;
        let y = rng.random_range(0..cells) * pitch + wall / 2;
        c.rect(x - wall, y, x + wall, y + pitch - wall, false);
    }
    // doors through the outer wall, so the maze is not a sealed island
    let span = cells * pitch;
    for _ in 0..cells {
        let k = rng.random_range(0..cells) * pitch + wall / 2;
        let (lo, hi) = (k, k + pitch - wall);
        match rng.random_range(0..4) {
            0 => c.rect(lo, 0, hi, wall, false),
            1 => c.rect(lo, span - wall, hi, c.size, false),
            2 => c.rect(0, lo, wall, hi, false),
            _ => c.rect(span - wall, lo, c.size, hi, false),
        }
    }
}

/// Writes `<root>/<type>/<type>_<index>.png` for every type in `types`.
pub fn write_dataset(root: &Path, types: &[MapType], per_type: usize, seed: u64) -> Result<(), IngestError> {
    use rayon::prelude::*;
    for &t in types {
        let dir = root.join(t.as_str());
        std::fs::create_dir_all(&dir)?;
        (0..per_type)
            .into_par_iter()
            .try_for_each(|i| tile(t, i, seed).save_png(&dir.join(format!("{}_{i:04}.png", t.as_str()))))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        for t in MapType::ALL {
            let a = tile(t, 3, 7);
            assert_eq!((a.width(), a.height()), (TILE, TILE));
            assert_eq!(a, tile(t, 3, 7));
            assert_ne!(a, tile(t, 4, 7));
            assert!(a.luminance().iter().all(|&v| v == 0 || v == 255));
            let share = a.obstacle_count() as f64 / (TILE * TILE) as f64;
            assert!((0.02..0.7).contains(&share), "{t}: {share}");
        }
    }
}
