//! Contextual statistics estimated from ground-truth scenes: concept
//! occurrence priors, per-image co-occurrence probabilities, and the mean
//! spatial relation vector for every ordered concept pair.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{relation_vector, FuzzyParams};
use crate::scene::Scene;

/// Componentwise mean of the relation vectors observed for one ordered
/// concept pair, with the number of contributing region pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanRelation {
    pub count: u64,
    /// Mean memberships in the order [above, below, beside, near, sur].
    pub mu: [f64; 5],
}

#[derive(Debug, Clone)]
pub struct ContextModel {
    vocabulary: Vec<String>,
    prior: Vec<f64>,
    /// Symmetric co-occurrence table, row-major n x n. Entries sum to 1
    /// over unordered pairs.
    cooc: Vec<f64>,
    /// Ordered-pair mean relation vectors, row-major n x n.
    mean_relation: Vec<Option<MeanRelation>>,
}

impl ContextModel {
    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn prior(&self, concept: usize) -> f64 {
        self.prior[concept]
    }

    pub fn priors(&self) -> &[f64] {
        &self.prior
    }

    pub fn cooc(&self, l: usize, m: usize) -> f64 {
        self.cooc[l * self.vocabulary.len() + m]
    }

    pub fn mean_relation(&self, l: usize, m: usize) -> Option<&MeanRelation> {
        self.mean_relation[l * self.vocabulary.len() + m].as_ref()
    }

    /// Looks up the co-occurrence probability and mean relation vector for a
    /// concept pair by name. An absent mean vector (never-observed ordered
    /// pair) is reported as `None`, distinct from a zero vector.
    pub fn lookup(&self, c_l: &str, c_m: &str) -> Result<(f64, Option<&MeanRelation>)> {
        let l = self.concept_index(c_l)?;
        let m = self.concept_index(c_m)?;
        Ok((self.cooc(l, m), self.mean_relation(l, m)))
    }

    pub fn concept_index(&self, name: &str) -> Result<usize> {
        self.vocabulary
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownConcept(name.to_string()))
    }
}

/// Estimates the context model from fully ground-truthed scenes.
///
/// Priors count regions per concept. Co-occurrence counts each unordered
/// concept pair once per image in which both concepts are present (a
/// same-concept pair needs two regions sharing the concept), normalized by
/// the total pair count. Mean relations average the relation vector over
/// every ordered region pair, keyed by the pair's ground-truth concepts.
pub fn train_context(scenes: &[Scene], params: &FuzzyParams) -> Result<ContextModel> {
    let Some(first) = scenes.first() else {
        return Err(Error::EmptyTrainingSet);
    };
    let vocabulary: Vec<String> = first.vocabulary().to_vec();
    let n = vocabulary.len();
    for scene in scenes {
        if scene.vocabulary() != vocabulary.as_slice() {
            return Err(Error::VocabularyMismatch);
        }
        for region in scene.regions() {
            if region.truth.is_none() {
                return Err(Error::MissingTruth(region.id));
            }
        }
    }

    let mut region_counts = vec![0u64; n];
    let mut pair_counts = vec![0u64; n * n];
    let mut relation_sums = vec![(0u64, [0.0f64; 5]); n * n];

    for scene in scenes {
        let mut present = vec![0u64; n];
        for region in scene.regions() {
            let t = region.truth.expect("checked above");
            region_counts[t] += 1;
            present[t] += 1;
        }
        for l in 0..n {
            for m in l..n {
                let co_present = if l == m {
                    present[l] >= 2
                } else {
                    present[l] >= 1 && present[m] >= 1
                };
                if co_present {
                    pair_counts[l * n + m] += 1;
                }
            }
        }

        let truth_of = |id: u32| scene.region(id).expect("own id").truth.expect("checked");
        for ((i, j), desc) in scene.descriptor_table() {
            let rv = relation_vector(desc, params);
            let key = truth_of(i) * n + truth_of(j);
            let entry = &mut relation_sums[key];
            entry.0 += 1;
            for (acc, v) in entry.1.iter_mut().zip(rv.memberships()) {
                *acc += v;
            }
        }
    }

    let total_regions: u64 = region_counts.iter().sum();
    if total_regions == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let prior: Vec<f64> = region_counts
        .iter()
        .map(|&c| c as f64 / total_regions as f64)
        .collect();

    let total_pairs: u64 = pair_counts.iter().sum();
    let mut cooc = vec![0.0; n * n];
    if total_pairs > 0 {
        for l in 0..n {
            for m in l..n {
                let p = pair_counts[l * n + m] as f64 / total_pairs as f64;
                cooc[l * n + m] = p;
                cooc[m * n + l] = p;
            }
        }
    }

    let mean_relation: Vec<Option<MeanRelation>> = relation_sums
        .into_iter()
        .map(|(count, sums)| {
            (count > 0).then(|| MeanRelation {
                count,
                mu: sums.map(|s| s / count as f64),
            })
        })
        .collect();

    Ok(ContextModel {
        vocabulary,
        prior,
        cooc,
        mean_relation,
    })
}

// --- context file (JSON) ---

#[derive(Serialize, Deserialize)]
struct ContextFile {
    vocabulary: Vec<String>,
    prior: BTreeMap<String, f64>,
    cooc: Vec<Vec<f64>>,
    mean_relation: BTreeMap<String, MeanRelationFile>,
}

#[derive(Serialize, Deserialize)]
struct MeanRelationFile {
    count: u64,
    mu: Vec<f64>,
}

impl ContextModel {
    pub fn to_json(&self) -> String {
        let n = self.vocabulary.len();
        let file = ContextFile {
            vocabulary: self.vocabulary.clone(),
            prior: self
                .vocabulary
                .iter()
                .cloned()
                .zip(self.prior.iter().copied())
                .collect(),
            cooc: (0..n)
                .map(|l| self.cooc[l * n..(l + 1) * n].to_vec())
                .collect(),
            mean_relation: (0..n)
                .flat_map(|l| (0..n).map(move |m| (l, m)))
                .filter_map(|(l, m)| {
                    self.mean_relation[l * n + m].map(|mr| {
                        (
                            format!("{}|{}", self.vocabulary[l], self.vocabulary[m]),
                            MeanRelationFile {
                                count: mr.count,
                                mu: mr.mu.to_vec(),
                            },
                        )
                    })
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("context serialization");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ContextFile = serde_json::from_str(text)?;
        let n = file.vocabulary.len();
        let index = |name: &str| -> Result<usize> {
            file.vocabulary
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::UnknownConcept(name.to_string()))
        };

        let mut prior = vec![0.0; n];
        for (name, p) in &file.prior {
            prior[index(name)?] = *p;
        }
        if file.cooc.len() != n || file.cooc.iter().any(|row| row.len() != n) {
            return Err(Error::Malformed(format!("cooc table must be {n}x{n}")));
        }
        let cooc: Vec<f64> = file.cooc.into_iter().flatten().collect();

        let mut mean_relation = vec![None; n * n];
        for (key, mr) in file.mean_relation {
            let Some((l_name, m_name)) = key.split_once('|') else {
                return Err(Error::Malformed(format!("mean_relation key {key:?} is not \"l|m\"")));
            };
            if mr.mu.len() != 5 {
                return Err(Error::DimensionMismatch {
                    expected: 5,
                    got: mr.mu.len(),
                });
            }
            let mut mu = [0.0; 5];
            mu.copy_from_slice(&mr.mu);
            mean_relation[index(l_name)? * n + index(m_name)?] = Some(MeanRelation {
                count: mr.count,
                mu,
            });
        }

        Ok(Self {
            vocabulary: file.vocabulary,
            prior,
            cooc,
            mean_relation,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{Region, RleMask, Run, Scene};

    fn strip_scene(vocab: &[&str], truths: &[usize]) -> Scene {
        // one 2x1 region per truth, laid side by side with a gap
        let regions = truths
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let mask = RleMask::new(vec![Run {
                    row: 2,
                    col: (i as u32) * 3,
                    len: 2,
                }])
                .unwrap();
                Region::new(i as u32, mask).with_truth(t)
            })
            .collect();
        Scene::new(
            3 * truths.len() as u32,
            6,
            vocab.iter().map(|s| s.to_string()).collect(),
            regions,
        )
        .unwrap()
    }

    #[test]
    fn priors_follow_region_frequencies() {
        let vocab = ["sky", "water", "boat"];
        let scenes = vec![
            strip_scene(&vocab, &[0, 0, 1]),
            strip_scene(&vocab, &[0, 1, 2, 2]),
            strip_scene(&vocab, &[1, 1, 2]),
        ];
        let model = train_context(&scenes, &FuzzyParams::default()).unwrap();
        assert!((model.prior(0) - 3.0 / 10.0).abs() < 1e-12);
        assert!((model.prior(1) - 4.0 / 10.0).abs() < 1e-12);
        assert!((model.prior(2) - 3.0 / 10.0).abs() < 1e-12);
        assert!((model.priors().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cooc_counts_presence_per_image() {
        // image 1: {sky, water}; image 2: {sky, water, boat}
        let vocab = ["sky", "water", "boat"];
        let scenes = vec![
            strip_scene(&vocab, &[0, 1]),
            strip_scene(&vocab, &[0, 1, 2]),
        ];
        let model = train_context(&scenes, &FuzzyParams::default()).unwrap();
        assert!((model.cooc(0, 1) - 0.5).abs() < 1e-12);
        assert!((model.cooc(0, 2) - 0.25).abs() < 1e-12);
        assert!((model.cooc(1, 2) - 0.25).abs() < 1e-12);
        assert_eq!(model.cooc(0, 0), 0.0);
        assert_eq!(model.cooc(1, 0), model.cooc(0, 1));
        // unordered normalization
        let n = 3;
        let mut sum = 0.0;
        for l in 0..n {
            for m in l..n {
                sum += model.cooc(l, m);
            }
        }
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn same_concept_pair_needs_two_regions() {
        let vocab = ["sky", "water"];
        let scenes = vec![strip_scene(&vocab, &[0, 0, 1])];
        let model = train_context(&scenes, &FuzzyParams::default()).unwrap();
        assert!(model.cooc(0, 0) > 0.0);
        assert_eq!(model.cooc(1, 1), 0.0);
    }

    #[test]
    fn single_pair_mean_is_that_sample() {
        let vocab = ["boat", "water"];
        let scene = strip_scene(&vocab, &[0, 1]);
        let params = FuzzyParams::default();
        let model = train_context(&[scene.clone()], &params).unwrap();
        let expected = relation_vector(scene.pair_descriptors(0, 1).unwrap(), &params);
        let mr = model.mean_relation(0, 1).unwrap();
        assert_eq!(mr.count, 1);
        assert_eq!(mr.mu, expected.memberships());
        assert!(model.mean_relation(0, 0).is_none());
    }

    #[test]
    fn missing_truth_and_empty_input_rejected() {
        assert!(matches!(
            train_context(&[], &FuzzyParams::default()),
            Err(Error::EmptyTrainingSet)
        ));
        let vocab = vec!["a".to_string()];
        let mask = RleMask::new(vec![Run { row: 0, col: 0, len: 1 }]).unwrap();
        let scene = Scene::new(2, 2, vocab, vec![Region::new(0, mask)]).unwrap();
        assert!(matches!(
            train_context(&[scene], &FuzzyParams::default()),
            Err(Error::MissingTruth(0))
        ));
    }

    #[test]
    fn training_is_order_independent() {
        let vocab = ["sky", "water", "boat"];
        let a = strip_scene(&vocab, &[0, 1]);
        let b = strip_scene(&vocab, &[0, 1, 2]);
        let c = strip_scene(&vocab, &[2, 2]);
        let params = FuzzyParams::default();
        let m1 = train_context(&[a.clone(), b.clone(), c.clone()], &params).unwrap();
        let m2 = train_context(&[c, a, b], &params).unwrap();
        assert_eq!(m1.to_json(), m2.to_json());
    }

    #[test]
    fn lookup_distinguishes_absent_from_zero() {
        let vocab = ["sky", "water", "boat"];
        let model = train_context(&[strip_scene(&vocab, &[0, 1])], &FuzzyParams::default()).unwrap();
        let (cooc, mean) = model.lookup("sky", "boat").unwrap();
        assert_eq!(cooc, 0.0);
        assert!(mean.is_none());
        let (cooc, mean) = model.lookup("sky", "water").unwrap();
        assert!(cooc > 0.0);
        assert!(mean.is_some());
        assert!(matches!(
            model.lookup("sky", "deer"),
            Err(Error::UnknownConcept(_))
        ));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let vocab = ["sky", "water", "boat"];
        let scenes = vec![
            strip_scene(&vocab, &[0, 1]),
            strip_scene(&vocab, &[0, 1, 2]),
        ];
        let model = train_context(&scenes, &FuzzyParams::default()).unwrap();
        let json = model.to_json();
        let back = ContextModel::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
    }
}
