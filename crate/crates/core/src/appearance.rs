//! Appearance-based initial labeling.
//!
//! Features are a 54-bin linear HSV color histogram (6x3x3 hue x saturation
//! x value split) concatenated with an 8-bin edge-direction histogram of
//! Sobel gradients, each block L1-normalized. A one-vs-rest kernel
//! regularized-least-squares classifier fit to +-1 targets produces
//! per-concept decision values, which the fuzzy membership transform turns
//! into normalized belief degrees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::Raster;
use crate::scene::Scene;

pub const HSV_BINS: usize = 54;
pub const EDGE_BINS: usize = 8;
pub const FEATURE_DIM: usize = HSV_BINS + EDGE_BINS;

/// Gradient magnitudes below this fraction of the maximum possible Sobel
/// response are treated as flat and excluded from the edge histogram.
const EDGE_MAGNITUDE_FRACTION: f64 = 0.1;

// --- feature extraction ---

/// RGB in [0,255] to (hue degrees in [0,360), saturation, value in [0,1]).
/// Achromatic pixels report hue 0.
fn rgb_to_hsv(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
    let (r, g, b) = (r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0);
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let value = max;
    let saturation = if max > 0.0 { delta / max } else { 0.0 };
    let hue = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * (((g - b) / delta).rem_euclid(6.0))
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    (hue, saturation, value)
}

/// Linear 6x3x3 bin index for an HSV triple.
fn hsv_bin(h: f64, s: f64, v: f64) -> usize {
    let hb = ((h / 60.0) as usize).min(5);
    let sb = ((s * 3.0) as usize).min(2);
    let vb = ((v * 3.0) as usize).min(2);
    hb * 9 + sb * 3 + vb
}

fn l1_normalize(block: &mut [f64]) {
    let sum: f64 = block.iter().sum();
    if sum > 0.0 {
        for v in block {
            *v /= sum;
        }
    }
}

/// Computes the 62-component appearance feature vector for one region, or
/// returns the region's precomputed features verbatim when present.
pub fn extract_features(scene: &Scene, region_id: u32, raster: Option<&Raster>) -> Result<Vec<f64>> {
    let region = scene.region(region_id)?;
    if let Some(f) = &region.features {
        return Ok(f.clone());
    }
    let Some(raster) = raster else {
        return Err(Error::MissingFeatures(region_id));
    };
    if raster.width() != scene.width() || raster.height() != scene.height() {
        return Err(Error::Malformed(format!(
            "raster is {}x{} but scene frame is {}x{}",
            raster.width(),
            raster.height(),
            scene.width(),
            scene.height()
        )));
    }

    let mut hsv = vec![0.0; HSV_BINS];
    let mut edges = vec![0.0; EDGE_BINS];

    // Sobel responses on luminance peak at 4*255 per axis.
    let max_magnitude = 4.0 * 255.0 * std::f64::consts::SQRT_2;
    let threshold = EDGE_MAGNITUDE_FRACTION * max_magnitude;
    let lum = |x: i64, y: i64| -> f64 {
        let cx = x.clamp(0, scene.width() as i64 - 1) as u32;
        let cy = y.clamp(0, scene.height() as i64 - 1) as u32;
        raster.luminance(cx, cy)
    };

    for (x, y) in region.mask.pixels() {
        let [r, g, b] = raster.get(x, y);
        let (h, s, v) = rgb_to_hsv(r, g, b);
        hsv[hsv_bin(h, s, v)] += 1.0;

        let (x, y) = (x as i64, y as i64);
        let gx = lum(x + 1, y - 1) + 2.0 * lum(x + 1, y) + lum(x + 1, y + 1)
            - lum(x - 1, y - 1)
            - 2.0 * lum(x - 1, y)
            - lum(x - 1, y + 1);
        let gy = lum(x - 1, y + 1) + 2.0 * lum(x, y + 1) + lum(x + 1, y + 1)
            - lum(x - 1, y - 1)
            - 2.0 * lum(x, y - 1)
            - lum(x + 1, y - 1);
        let magnitude = (gx * gx + gy * gy).sqrt();
        if magnitude > threshold {
            let angle = gy.atan2(gx).rem_euclid(2.0 * std::f64::consts::PI);
            let bin = ((angle / (std::f64::consts::PI / 4.0)) as usize).min(EDGE_BINS - 1);
            edges[bin] += 1.0;
        }
    }

    l1_normalize(&mut hsv);
    l1_normalize(&mut edges);
    hsv.extend(edges);
    Ok(hsv)
}

// --- classifier ---

/// One-vs-rest kernel regularized-least-squares model. All per-concept
/// decision functions share one training-point set:
/// `D_l(v) = sum_i coefficients[l][i] * k(points[i], v) + biases[l]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AppearanceModel {
    pub vocabulary: Vec<String>,
    pub sigma: f64,
    pub cost: f64,
    pub points: Vec<Vec<f64>>,
    pub coefficients: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
}

fn rbf_kernel(u: &[f64], v: &[f64], sigma: f64) -> f64 {
    let sq: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
    (-sq / (2.0 * sigma * sigma)).exp()
}

/// Cholesky factorization + solve for a symmetric positive-definite system,
/// one right-hand side per class. `a` is row-major n x n and is consumed.
fn cholesky_solve(mut a: Vec<f64>, n: usize, rhs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    // factor: a = L L^T, L stored in the lower triangle
    for j in 0..n {
        for k in 0..j {
            let ljk = a[j * n + k];
            for i in j..n {
                a[i * n + j] -= a[i * n + k] * ljk;
            }
        }
        let pivot = a[j * n + j];
        if pivot <= 1e-12 {
            return Err(Error::SingularSystem(pivot, j));
        }
        let root = pivot.sqrt();
        for i in j..n {
            a[i * n + j] /= root;
        }
    }
    let mut out = Vec::with_capacity(rhs.len());
    for y in rhs {
        debug_assert_eq!(y.len(), n);
        let mut x = y.clone();
        // forward: L z = y
        for i in 0..n {
            for k in 0..i {
                x[i] -= a[i * n + k] * x[k];
            }
            x[i] /= a[i * n + i];
        }
        // backward: L^T x = z
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] -= a[k * n + i] * x[k];
            }
            x[i] /= a[i * n + i];
        }
        out.push(x);
    }
    Ok(out)
}

/// Fits one regularized-least-squares decision function per concept with
/// targets +1 (own class) / -1 (rest): solves (K + I/cost) alpha_l = y_l
/// over the shared RBF kernel matrix.
pub fn train_classifier(
    examples: &[(Vec<f64>, usize)],
    vocabulary: Vec<String>,
    sigma: f64,
    cost: f64,
) -> Result<AppearanceModel> {
    if examples.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if !(sigma > 0.0) || !(cost > 0.0) {
        return Err(Error::BadParams(format!(
            "sigma and cost must be > 0, got sigma={sigma} cost={cost}"
        )));
    }
    let dim = examples[0].0.len();
    for (v, concept) in examples {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        if *concept >= vocabulary.len() {
            return Err(Error::UnknownConcept(format!("index {concept}")));
        }
    }
    for (l, name) in vocabulary.iter().enumerate() {
        if !examples.iter().any(|(_, c)| *c == l) {
            return Err(Error::EmptyClass(name.clone()));
        }
    }

    let n = examples.len();
    let mut kernel = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let k = rbf_kernel(&examples[i].0, &examples[j].0, sigma);
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }
    let ridge = 1.0 / cost;
    for i in 0..n {
        kernel[i * n + i] += ridge;
    }

    let targets: Vec<Vec<f64>> = (0..vocabulary.len())
        .map(|l| {
            examples
                .iter()
                .map(|(_, c)| if *c == l { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    let coefficients = cholesky_solve(kernel, n, &targets)?;

    Ok(AppearanceModel {
        biases: vec![0.0; vocabulary.len()],
        vocabulary,
        sigma,
        cost,
        points: examples.iter().map(|(v, _)| v.clone()).collect(),
        coefficients,
    })
}

impl AppearanceModel {
    pub fn feature_dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// D_l(v) for every concept l.
    pub fn decision_values(&self, v: &[f64]) -> Result<Vec<f64>> {
        if !self.points.is_empty() && v.len() != self.feature_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_dim(),
                got: v.len(),
            });
        }
        let kernel_row: Vec<f64> = self
            .points
            .iter()
            .map(|p| rbf_kernel(p, v, self.sigma))
            .collect();
        Ok(self
            .coefficients
            .iter()
            .zip(&self.biases)
            .map(|(coefs, bias)| {
                coefs
                    .iter()
                    .zip(&kernel_row)
                    .map(|(a, k)| a * k)
                    .sum::<f64>()
                    + bias
            })
            .collect())
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("model serialization cannot fail");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        let n_classes = model.vocabulary.len();
        if model.coefficients.len() != n_classes || model.biases.len() != n_classes {
            return Err(Error::Malformed(
                "model must carry one decision function per concept".into(),
            ));
        }
        for coefs in &model.coefficients {
            if coefs.len() != model.points.len() {
                return Err(Error::DimensionMismatch {
                    expected: model.points.len(),
                    got: coefs.len(),
                });
            }
        }
        let dim = model.feature_dim();
        if model.points.iter().any(|p| p.len() != dim) {
            return Err(Error::Malformed("training points differ in dimension".into()));
        }
        Ok(model)
    }
}

// --- fuzzy labels ---

/// Per-region fuzzy label set: belief degrees over the full vocabulary
/// (summing to 1) plus the candidate concepts ordered by descending belief.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyLabelSet {
    /// Concept indices sorted by belief descending, ties by concept index.
    pub candidates: Vec<usize>,
    /// One belief per vocabulary concept.
    pub beliefs: Vec<f64>,
}

impl FuzzyLabelSet {
    pub fn belief(&self, concept: usize) -> f64 {
        self.beliefs[concept]
    }

    /// Restricts the candidate list to the n highest-belief concepts.
    /// Beliefs keep their original values; they are not renormalized.
    pub fn top_n(&self, n: usize) -> FuzzyLabelSet {
        FuzzyLabelSet {
            candidates: self.candidates.iter().take(n.max(1)).copied().collect(),
            beliefs: self.beliefs.clone(),
        }
    }
}

/// Piecewise membership map for one decision value: clamps to [0,1] with the
/// linear ramp (1 + D) / 2 strictly between the margins.
fn decision_membership(d: f64) -> f64 {
    if d >= 1.0 {
        1.0
    } else if d <= -1.0 {
        0.0
    } else {
        (1.0 + d) / 2.0
    }
}

/// Turns per-concept decision values into normalized belief degrees.
///
/// Each value passes through the piecewise map above; the results are
/// normalized by their sum. When every membership is zero (all decisions at
/// or below -1) the beliefs fall back to normalized inverse magnitudes
/// |D_l|^-1, so the least-rejected concept keeps the most belief.
pub fn fuzzy_memberships(decisions: &[f64]) -> Result<FuzzyLabelSet> {
    if decisions.is_empty() {
        return Err(Error::Malformed("no decision values".into()));
    }
    if decisions.iter().any(|d| !d.is_finite()) {
        return Err(Error::Malformed("non-finite decision value".into()));
    }
    let memberships: Vec<f64> = decisions.iter().map(|&d| decision_membership(d)).collect();
    let sum: f64 = memberships.iter().sum();
    let beliefs: Vec<f64> = if sum != 0.0 {
        memberships.iter().map(|m| m / sum).collect()
    } else {
        // All decisions <= -1 here, so every |D_l| >= 1 and the inverse is
        // well defined (a zero decision would have produced membership 0.5).
        let inverses: Vec<f64> = decisions.iter().map(|d| 1.0 / d.abs()).collect();
        let inv_sum: f64 = inverses.iter().sum();
        assert!(inv_sum > 0.0);
        inverses.iter().map(|i| i / inv_sum).collect()
    };

    let mut candidates: Vec<usize> = (0..beliefs.len()).collect();
    candidates.sort_by(|&a, &b| {
        beliefs[b]
            .partial_cmp(&beliefs[a])
            .expect("beliefs are finite")
            .then(a.cmp(&b))
    });
    Ok(FuzzyLabelSet { candidates, beliefs })
}
