//! Deterministic synthetic-scene corpus with controllable appearance
//! ambiguity.
//!
//! The layout grammar builds two scene families over a six-concept
//! vocabulary: a sky band over a water band that may carry a boat strictly
//! inside it, and a sky band over a grass band carrying a building (touching
//! the sky line) with a road strip beside it, strictly inside the grass.
//! Concept colors come from fixed per-concept means; the means of the
//! confusable pairs sky/water and grass/road are pulled toward their
//! midpoint proportionally to the ambiguity knob, so appearance overlap is
//! dialed in directly.
//!
//! Everything is driven by SplitMix64 so corpora are identical across
//! platforms: state advances by 0x9e3779b97f4a7c15 per draw and is finalized
//! with the 30/27/31 xor-shift multiply mix (constants 0xbf58476d1ce4e5b9
//! and 0x94d049bb133111eb).

use crate::error::{Error, Result};
use crate::raster::Raster;
use crate::scene::{Region, RleMask, Run, Scene};

const GOLDEN_GAMMA: u64 = 0x9e3779b97f4a7c15;

/// SplitMix64 pseudo-random generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1) with 53 mantissa bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform integer in [lo, hi). Modulo bias is irrelevant here; the
    /// draw only has to be deterministic.
    pub fn range_u32(&mut self, lo: u32, hi: u32) -> u32 {
        debug_assert!(lo < hi);
        lo + (self.next_u64() % (hi - lo) as u64) as u32
    }

    /// Uniform integer in [-amp, amp].
    pub fn jitter(&mut self, amp: i32) -> i32 {
        (self.next_u64() % (2 * amp as u64 + 1)) as i32 - amp
    }
}

fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xbf58476d1ce4e5b9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    z
}

pub const DEFAULT_VOCABULARY: [&str; 6] = ["sky", "water", "grass", "boat", "building", "road"];

const SKY: usize = 0;
const WATER: usize = 1;
const GRASS: usize = 2;
const BOAT: usize = 3;
const BUILDING: usize = 4;
const ROAD: usize = 5;

/// Fixed per-concept mean colors, indexed like `DEFAULT_VOCABULARY`.
const BASE_COLORS: [[f64; 3]; 6] = [
    [130.0, 190.0, 235.0], // sky
    [25.0, 80.0, 185.0],   // water
    [70.0, 160.0, 60.0],   // grass
    [185.0, 75.0, 45.0],   // boat
    [205.0, 170.0, 110.0], // building
    [128.0, 128.0, 128.0], // road
];

/// Confusable concept pairs whose color means approach each other as the
/// ambiguity knob rises.
const CONFUSABLE: [(usize, usize); 2] = [(SKY, WATER), (GRASS, ROAD)];

const REGION_JITTER: i32 = 18;
const PIXEL_NOISE: i32 = 12;
const BOAT_PROBABILITY: f64 = 0.8;

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub scene_count: usize,
    pub width: u32,
    pub height: u32,
    pub vocabulary: Vec<String>,
    /// Feature overlap between the confusable concept pairs, in [0, 1].
    pub ambiguity: f64,
}

impl GeneratorConfig {
    pub fn new(seed: u64, scene_count: usize, ambiguity: f64) -> Self {
        Self {
            seed,
            scene_count,
            width: 64,
            height: 48,
            vocabulary: DEFAULT_VOCABULARY.iter().map(|s| s.to_string()).collect(),
            ambiguity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scene_count < 1 {
            return Err(Error::BadParams("scene_count must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.ambiguity) {
            return Err(Error::BadParams(format!(
                "ambiguity must be in [0,1], got {}",
                self.ambiguity
            )));
        }
        if self.width < 48 || self.height < 32 {
            return Err(Error::BadParams(format!(
                "frame must be at least 48x32 for the layout grammar, got {}x{}",
                self.width, self.height
            )));
        }
        if self.vocabulary.len() != 6 {
            return Err(Error::BadParams(
                "the layout grammar needs exactly 6 concepts".into(),
            ));
        }
        Ok(())
    }
}

/// One generated scene with its rendered raster.
#[derive(Debug, Clone)]
pub struct SynthScene {
    pub scene: Scene,
    pub raster: Raster,
}

/// Axis-aligned rectangle, half-open on both axes.
#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: u32,
    y0: u32,
    x1: u32,
    y1: u32,
}

impl Rect {
    fn contains(&self, x: u32, y: u32) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    fn mask(&self) -> RleMask {
        RleMask::new(
            (self.y0..self.y1)
                .map(|row| Run {
                    row,
                    col: self.x0,
                    len: self.x1 - self.x0,
                })
                .collect(),
        )
        .expect("rect runs are sorted and disjoint")
    }
}

/// Horizontal band minus a list of carved-out rectangles.
fn band_minus(y0: u32, y1: u32, width: u32, holes: &[Rect]) -> RleMask {
    let mut runs = Vec::new();
    for row in y0..y1 {
        let mut col = 0u32;
        while col < width {
            if let Some(hole) = holes.iter().find(|h| h.contains(col, row)) {
                col = hole.x1;
                continue;
            }
            let next_edge = holes
                .iter()
                .filter(|h| row >= h.y0 && row < h.y1 && h.x0 > col)
                .map(|h| h.x0)
                .min()
                .unwrap_or(width);
            runs.push(Run {
                row,
                col,
                len: next_edge - col,
            });
            col = next_edge;
        }
    }
    RleMask::new(runs).expect("band runs are sorted and disjoint")
}

fn effective_color(concept: usize, ambiguity: f64) -> [f64; 3] {
    let base = BASE_COLORS[concept];
    for &(a, b) in &CONFUSABLE {
        if concept == a || concept == b {
            let mid = [
                (BASE_COLORS[a][0] + BASE_COLORS[b][0]) / 2.0,
                (BASE_COLORS[a][1] + BASE_COLORS[b][1]) / 2.0,
                (BASE_COLORS[a][2] + BASE_COLORS[b][2]) / 2.0,
            ];
            return [
                base[0] + ambiguity * (mid[0] - base[0]),
                base[1] + ambiguity * (mid[1] - base[1]),
                base[2] + ambiguity * (mid[2] - base[2]),
            ];
        }
    }
    base
}

/// Generates the corpus: `scene_count` scenes with ground truth, fully
/// determined by the seed (per-scene generators are seeded by mixing the
/// corpus seed with the scene index).
pub fn generate_corpus(config: &GeneratorConfig) -> Result<Vec<SynthScene>> {
    config.validate()?;
    (0..config.scene_count)
        .map(|index| {
            let seed = mix64(config.seed ^ (index as u64).wrapping_mul(GOLDEN_GAMMA));
            generate_scene(config, SplitMix64::new(seed))
        })
        .collect()
}

fn generate_scene(config: &GeneratorConfig, mut rng: SplitMix64) -> Result<SynthScene> {
    let (w, h) = (config.width, config.height);
    let sky_h = rng.range_u32(h / 4, h / 2);
    let water_scene = rng.next_f64() < 0.5;

    // (mask, truth) in region-id order
    let mut parts: Vec<(RleMask, usize)> = Vec::new();
    let sky_rect = Rect {
        x0: 0,
        y0: 0,
        x1: w,
        y1: sky_h,
    };
    parts.push((sky_rect.mask(), SKY));

    if water_scene {
        let band = h - sky_h;
        let with_boat = rng.next_f64() < BOAT_PROBABILITY;
        let mut holes = Vec::new();
        if with_boat {
            let bw = rng.range_u32(w / 8, w / 4);
            let bh = rng.range_u32((band / 6).max(2), (band / 3).max(3));
            let bx = rng.range_u32(1, w - bw - 1);
            let by = rng.range_u32(sky_h + 1, h - bh - 1);
            holes.push(Rect {
                x0: bx,
                y0: by,
                x1: bx + bw,
                y1: by + bh,
            });
        }
        parts.push((band_minus(sky_h, h, w, &holes), WATER));
        if let Some(boat) = holes.first() {
            parts.push((boat.mask(), BOAT));
        }
    } else {
        let band = h - sky_h;
        let bw = rng.range_u32(w / 8, w / 5);
        let bh = rng.range_u32((band / 3).max(3), (band / 2).max(4));
        let bx = rng.range_u32(2, w / 3);
        let building = Rect {
            x0: bx,
            y0: sky_h,
            x1: bx + bw,
            y1: sky_h + bh,
        };
        let gap = rng.range_u32(1, 4);
        let rw = rng.range_u32(w / 6, w / 4);
        let rh = (bh / 3).max(2);
        // keep at least one grass row above the road so it stays strictly
        // inside the grass band
        let ry = sky_h + ((bh - rh) / 2).max(1);
        let rx = (building.x1 + gap).min(w - rw - 1);
        let road = Rect {
            x0: rx,
            y0: ry,
            x1: rx + rw,
            y1: ry + rh,
        };
        parts.push((band_minus(sky_h, h, w, &[building, road]), GRASS));
        parts.push((building.mask(), BUILDING));
        parts.push((road.mask(), ROAD));
    }

    let regions: Vec<Region> = parts
        .iter()
        .enumerate()
        .map(|(id, (mask, truth))| Region::new(id as u32, mask.clone()).with_truth(*truth))
        .collect();
    let scene = Scene::new(w, h, config.vocabulary.clone(), regions)?;

    let mut raster = Raster::new(w, h);
    for (mask, truth) in &parts {
        let eff = effective_color(*truth, config.ambiguity);
        let region_color = [
            eff[0] + rng.jitter(REGION_JITTER) as f64,
            eff[1] + rng.jitter(REGION_JITTER) as f64,
            eff[2] + rng.jitter(REGION_JITTER) as f64,
        ];
        for (x, y) in mask.pixels() {
            let px = [
                (region_color[0] + rng.jitter(PIXEL_NOISE) as f64).clamp(0.0, 255.0) as u8,
                (region_color[1] + rng.jitter(PIXEL_NOISE) as f64).clamp(0.0, 255.0) as u8,
                (region_color[2] + rng.jitter(PIXEL_NOISE) as f64).clamp(0.0, 255.0) as u8,
            ];
            raster.set(x, y, px);
        }
    }

    Ok(SynthScene { scene, raster })
}
