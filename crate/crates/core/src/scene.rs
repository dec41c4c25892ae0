//! Scene and region representation: run-length-encoded pixel masks, mask
//! geometry (centroid, boundary, perimeter), and the raw spatial descriptors
//! (theta, d, rho) computed for ordered region pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One horizontal run of mask pixels: `len` pixels starting at
/// `(col, row)` and extending rightwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub row: u32,
    pub col: u32,
    pub len: u32,
}

/// Run-length-encoded pixel mask, row-major, runs sorted by (row, col).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RleMask {
    runs: Vec<Run>,
}

impl RleMask {
    /// Builds a mask from raw triples, enforcing sortedness, positive run
    /// lengths and non-overlap within the mask itself.
    pub fn new(runs: Vec<Run>) -> Result<Self> {
        for w in runs.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (b.row, b.col) <= (a.row, a.col) {
                return Err(Error::Malformed(format!(
                    "rle runs not sorted by (row, col): ({}, {}) follows ({}, {})",
                    b.row, b.col, a.row, a.col
                )));
            }
            if b.row == a.row && b.col < a.col + a.len {
                return Err(Error::Malformed(format!(
                    "rle runs overlap in row {}: [{}, {}) and [{}, {})",
                    a.row,
                    a.col,
                    a.col + a.len,
                    b.col,
                    b.col + b.len
                )));
            }
        }
        if runs.iter().any(|r| r.len == 0) {
            return Err(Error::Malformed("rle run with zero length".into()));
        }
        Ok(Self { runs })
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn pixel_count(&self) -> u64 {
        self.runs.iter().map(|r| r.len as u64).sum()
    }

    /// Iterates mask pixels as `(x, y)` = `(col, row)`.
    pub fn pixels(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.runs
            .iter()
            .flat_map(|r| (r.col..r.col + r.len).map(move |c| (c, r.row)))
    }

    /// Encodes a pixel set (any order, duplicates rejected upstream) as a
    /// sorted run list.
    pub fn from_pixels(mut pixels: Vec<(u32, u32)>) -> Result<Self> {
        pixels.sort_by_key(|&(x, y)| (y, x));
        let mut runs: Vec<Run> = Vec::new();
        for (x, y) in pixels {
            match runs.last_mut() {
                Some(r) if r.row == y && r.col + r.len == x => r.len += 1,
                _ => runs.push(Run {
                    row: y,
                    col: x,
                    len: 1,
                }),
            }
        }
        Self::new(runs)
    }
}

/// One object hypothesis: a pixel mask with optional ground truth, optional
/// precomputed appearance features, and optional externally supplied
/// per-concept decision values.
#[derive(Debug, Clone)]
pub struct Region {
    pub id: u32,
    pub mask: RleMask,
    /// Ground-truth concept as an index into the scene vocabulary.
    pub truth: Option<usize>,
    pub features: Option<Vec<f64>>,
    pub decisions: Option<Vec<f64>>,
}

impl Region {
    pub fn new(id: u32, mask: RleMask) -> Self {
        Self {
            id,
            mask,
            truth: None,
            features: None,
            decisions: None,
        }
    }

    pub fn with_truth(mut self, truth: usize) -> Self {
        self.truth = Some(truth);
        self
    }
}

/// Raw spatial descriptors for an ordered region pair (i, j).
///
/// `theta` is the angle of the line from the centroid of i to the centroid
/// of j, measured with y flipped so that +pi/2 reads "j is above i on
/// screen". `d` is the gap between the two boundaries (zero when the regions
/// share a pixel edge) normalized by the image diagonal. `rho` is the share
/// of region i's perimeter that borders region j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDescriptors {
    pub theta: f64,
    pub d: f64,
    pub rho: f64,
}

/// Per-region mask geometry.
#[derive(Debug, Clone)]
pub struct RegionGeometry {
    /// Arithmetic mean of mask pixel centers, `(x, y)`.
    pub centroid: (f64, f64),
    /// Mask pixels with at least one 4-neighbor outside the mask; the frame
    /// border counts as outside.
    pub boundary: Vec<(u32, u32)>,
    /// Number of exposed pixel edges.
    pub perimeter: u32,
}

const NO_REGION: u16 = u16::MAX;

/// An image frame: dimensions, concept vocabulary, and disjoint regions.
#[derive(Debug, Clone)]
pub struct Scene {
    width: u32,
    height: u32,
    vocabulary: Vec<String>,
    regions: Vec<Region>,
    /// Pixel -> region index (position in `regions`), `NO_REGION` for
    /// background. Built once at construction while checking disjointness.
    grid: Vec<u16>,
}

impl Scene {
    pub fn new(
        width: u32,
        height: u32,
        vocabulary: Vec<String>,
        regions: Vec<Region>,
    ) -> Result<Self> {
        if width < 1 || height < 1 {
            return Err(Error::Malformed(format!(
                "frame must be at least 1x1, got {width}x{height}"
            )));
        }
        for (i, name) in vocabulary.iter().enumerate() {
            if vocabulary[..i].contains(name) {
                return Err(Error::DuplicateConcept(name.clone()));
            }
        }
        if regions.len() >= NO_REGION as usize {
            return Err(Error::Malformed(format!(
                "too many regions: {}",
                regions.len()
            )));
        }

        let mut grid = vec![NO_REGION; (width as usize) * (height as usize)];
        for (idx, region) in regions.iter().enumerate() {
            if regions[..idx].iter().any(|r| r.id == region.id) {
                return Err(Error::DuplicateRegionId(region.id));
            }
            if region.mask.pixel_count() == 0 {
                return Err(Error::EmptyRegion(region.id));
            }
            if let Some(t) = region.truth {
                if t >= vocabulary.len() {
                    return Err(Error::Malformed(format!(
                        "region {}: truth index {} outside vocabulary of {}",
                        region.id,
                        t,
                        vocabulary.len()
                    )));
                }
            }
            if let Some(decisions) = &region.decisions {
                if decisions.len() != vocabulary.len() {
                    return Err(Error::DimensionMismatch {
                        expected: vocabulary.len(),
                        got: decisions.len(),
                    });
                }
            }
            for (x, y) in region.mask.pixels() {
                if x >= width || y >= height {
                    return Err(Error::OutOfBounds {
                        id: region.id,
                        x,
                        y,
                        width,
                        height,
                    });
                }
                let cell = &mut grid[(y as usize) * (width as usize) + x as usize];
                if *cell != NO_REGION {
                    return Err(Error::OverlappingMasks {
                        a: regions[*cell as usize].id,
                        b: region.id,
                        x,
                        y,
                    });
                }
                *cell = idx as u16;
            }
        }

        Ok(Self {
            width,
            height,
            vocabulary,
            regions,
            grid,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn image_diagonal(&self) -> f64 {
        ((self.width as f64).powi(2) + (self.height as f64).powi(2)).sqrt()
    }

    pub fn concept_index(&self, name: &str) -> Option<usize> {
        self.vocabulary.iter().position(|c| c == name)
    }

    pub fn region_index(&self, id: u32) -> Result<usize> {
        self.regions
            .iter()
            .position(|r| r.id == id)
            .ok_or(Error::UnknownRegion(id))
    }

    pub fn region(&self, id: u32) -> Result<&Region> {
        Ok(&self.regions[self.region_index(id)?])
    }

    fn region_at(&self, x: i64, y: i64) -> Option<u16> {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return None;
        }
        match self.grid[(y as usize) * (self.width as usize) + x as usize] {
            NO_REGION => None,
            idx => Some(idx),
        }
    }

    /// Centroid, boundary pixel set, and exposed-edge perimeter for one region.
    pub fn region_geometry(&self, id: u32) -> Result<RegionGeometry> {
        Ok(self.geometry_by_index(self.region_index(id)?))
    }

    fn geometry_by_index(&self, idx: usize) -> RegionGeometry {
        let mask = &self.regions[idx].mask;
        let mut sum_x = 0.0;
        let mut sum_y = 0.0;
        let mut count = 0u64;
        let mut boundary = Vec::new();
        let mut perimeter = 0u32;
        for (x, y) in mask.pixels() {
            sum_x += x as f64;
            sum_y += y as f64;
            count += 1;
            let mut exposed = 0u32;
            for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                if self.region_at(x as i64 + dx, y as i64 + dy) != Some(idx as u16) {
                    exposed += 1;
                }
            }
            if exposed > 0 {
                boundary.push((x, y));
            }
            perimeter += exposed;
        }
        RegionGeometry {
            centroid: (sum_x / count as f64, sum_y / count as f64),
            boundary,
            perimeter,
        }
    }

    /// Exposed edges of region `idx` whose outside neighbor pixel belongs to
    /// each other region; index is the neighbor's region position.
    fn shared_edge_counts(&self, idx: usize) -> Vec<u32> {
        let mut counts = vec![0u32; self.regions.len()];
        for (x, y) in self.regions[idx].mask.pixels() {
            for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                match self.region_at(x as i64 + dx, y as i64 + dy) {
                    Some(other) if other as usize != idx => counts[other as usize] += 1,
                    _ => {}
                }
            }
        }
        counts
    }

    /// Raw spatial descriptors for the ordered pair (i, j).
    pub fn pair_descriptors(&self, i: u32, j: u32) -> Result<PairDescriptors> {
        if i == j {
            return Err(Error::SamePair(i));
        }
        let ii = self.region_index(i)?;
        let ji = self.region_index(j)?;
        let gi = self.geometry_by_index(ii);
        let gj = self.geometry_by_index(ji);
        let shared_ij = self.shared_edge_counts(ii)[ji];
        Ok(self.descriptors_from_parts(&gi, &gj, shared_ij))
    }

    fn descriptors_from_parts(
        &self,
        gi: &RegionGeometry,
        gj: &RegionGeometry,
        shared_edges_i_to_j: u32,
    ) -> PairDescriptors {
        let theta = pair_angle(gi.centroid, gj.centroid);
        let d = if shared_edges_i_to_j > 0 {
            0.0
        } else {
            boundary_gap(&gi.boundary, &gj.boundary) / self.image_diagonal()
        };
        let rho = shared_edges_i_to_j as f64 / gi.perimeter as f64;
        PairDescriptors { theta, d, rho }
    }

    /// Descriptors for every ordered region pair, in ascending
    /// `(id_i, id_j)` order. Geometry is computed once per region.
    pub fn descriptor_table(&self) -> Vec<((u32, u32), PairDescriptors)> {
        let n = self.regions.len();
        let geoms: Vec<RegionGeometry> = (0..n).map(|i| self.geometry_by_index(i)).collect();
        let shared: Vec<Vec<u32>> = (0..n).map(|i| self.shared_edge_counts(i)).collect();

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.regions[i].id);

        let mut out = Vec::with_capacity(n.saturating_sub(1) * n);
        for &a in &order {
            for &b in &order {
                if a == b {
                    continue;
                }
                let desc = self.descriptors_from_parts(&geoms[a], &geoms[b], shared[a][b]);
                out.push(((self.regions[a].id, self.regions[b].id), desc));
            }
        }
        out
    }
}

/// Angle of the line from centroid `ci` to centroid `cj` in image
/// coordinates (y grows downward), flipped so +pi/2 means "j above i".
/// Output lies in (-pi, pi].
fn pair_angle(ci: (f64, f64), cj: (f64, f64)) -> f64 {
    let theta = (ci.1 - cj.1).atan2(cj.0 - ci.0);
    if theta == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        theta
    }
}

/// Minimum gap between two boundaries, measured center-to-center and shifted
/// by one pixel so that regions sharing an edge measure zero.
fn boundary_gap(a: &[(u32, u32)], b: &[(u32, u32)]) -> f64 {
    let mut best = f64::INFINITY;
    for &(ax, ay) in a {
        for &(bx, by) in b {
            let dx = ax as f64 - bx as f64;
            let dy = ay as f64 - by as f64;
            let sq = dx * dx + dy * dy;
            if sq < best {
                best = sq;
            }
        }
    }
    (best.sqrt() - 1.0).max(0.0)
}

// --- scene file (JSON) ---

#[derive(Serialize, Deserialize)]
struct SceneFile {
    width: u32,
    height: u32,
    vocabulary: Vec<String>,
    regions: Vec<RegionFile>,
}

#[derive(Serialize, Deserialize)]
struct RegionFile {
    id: u32,
    rle: Vec<(u32, u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    features: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    decisions: Option<Vec<f64>>,
}

/// Parses the scene-file document and validates every scene invariant.
pub fn parse_scene(document: &str) -> Result<Scene> {
    let file: SceneFile = serde_json::from_str(document)?;
    let mut regions = Vec::with_capacity(file.regions.len());
    for rf in file.regions {
        if rf.rle.is_empty() {
            return Err(Error::EmptyRegion(rf.id));
        }
        let runs = rf
            .rle
            .into_iter()
            .map(|(row, col, len)| Run { row, col, len })
            .collect();
        let mask = RleMask::new(runs)?;
        regions.push(Region {
            id: rf.id,
            mask,
            truth: rf.truth,
            features: rf.features,
            decisions: rf.decisions,
        });
    }
    Scene::new(file.width, file.height, file.vocabulary, regions)
}

/// Serializes a scene to its canonical JSON form (newline-terminated).
pub fn scene_to_json(scene: &Scene) -> String {
    let file = SceneFile {
        width: scene.width,
        height: scene.height,
        vocabulary: scene.vocabulary.clone(),
        regions: scene
            .regions
            .iter()
            .map(|r| RegionFile {
                id: r.id,
                rle: r.mask.runs().iter().map(|r| (r.row, r.col, r.len)).collect(),
                truth: r.truth,
                features: r.features.clone(),
                decisions: r.decisions.clone(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("scene serialization cannot fail");
    out.push('\n');
    out
}
