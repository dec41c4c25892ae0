//! Accuracy metrics, the predictions file, and the experiment runner that
//! compares appearance-only labeling against contextual refinement on a
//! synthetic corpus.

use serde::{Deserialize, Serialize};

use crate::appearance::{extract_features, fuzzy_memberships, train_classifier, FuzzyLabelSet};
use crate::context::train_context;
use crate::energy::LabelingInstance;
use crate::error::{Error, Result};
use crate::params::{apply_params, Params};
use crate::scene::Scene;
use crate::synth::{generate_corpus, GeneratorConfig, SynthScene};

/// One region's predicted label. `final_energy` is the energy of the whole
/// assignment the prediction came from, repeated per region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPrediction {
    pub id: u32,
    pub concept: String,
    pub belief: f64,
    pub final_energy: f64,
}

pub type Predictions = Vec<RegionPrediction>;

pub fn predictions_to_json(predictions: &Predictions) -> String {
    let mut out =
        serde_json::to_string_pretty(predictions).expect("prediction serialization cannot fail");
    out.push('\n');
    out
}

pub fn predictions_from_json(text: &str) -> Result<Predictions> {
    Ok(serde_json::from_str(text)?)
}

/// Per-concept slice of an evaluation.
#[derive(Debug, Clone)]
pub struct ConceptAccuracy {
    pub concept: String,
    pub total: usize,
    pub correct: usize,
}

impl ConceptAccuracy {
    pub fn accuracy(&self) -> Option<f64> {
        (self.total > 0).then(|| self.correct as f64 / self.total as f64)
    }
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub vocabulary: Vec<String>,
    pub total: usize,
    pub correct: usize,
    pub per_concept: Vec<ConceptAccuracy>,
    /// confusion[truth][predicted]
    pub confusion: Vec<Vec<usize>>,
}

impl EvalReport {
    pub fn overall(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,concept,predicted,count,value\n");
        out.push_str(&format!("overall,,,{},{:.6}\n", self.total, self.overall()));
        for c in &self.per_concept {
            match c.accuracy() {
                Some(acc) => out.push_str(&format!(
                    "per_concept,{},,{},{acc:.6}\n",
                    c.concept, c.total
                )),
                None => out.push_str(&format!("per_concept,{},,0,\n", c.concept)),
            }
        }
        for (t, row) in self.confusion.iter().enumerate() {
            for (p, &count) in row.iter().enumerate() {
                if count > 0 {
                    out.push_str(&format!(
                        "confusion,{},{},{count},\n",
                        self.vocabulary[t], self.vocabulary[p]
                    ));
                }
            }
        }
        out
    }
}

/// Exact-match accuracy of predictions against ground truth, over one or
/// more (scene, predictions) pairs sharing a vocabulary.
pub fn evaluate(pairs: &[(&Scene, &Predictions)]) -> Result<EvalReport> {
    let Some((first, _)) = pairs.first() else {
        return Err(Error::EmptyTrainingSet);
    };
    let vocabulary: Vec<String> = first.vocabulary().to_vec();
    let n = vocabulary.len();
    let mut report = EvalReport {
        vocabulary: vocabulary.clone(),
        total: 0,
        correct: 0,
        per_concept: vocabulary
            .iter()
            .map(|c| ConceptAccuracy {
                concept: c.clone(),
                total: 0,
                correct: 0,
            })
            .collect(),
        confusion: vec![vec![0; n]; n],
    };

    for (scene, predictions) in pairs {
        if scene.vocabulary() != vocabulary.as_slice() {
            return Err(Error::VocabularyMismatch);
        }
        let mut truth_ids: Vec<u32> = scene.regions().iter().map(|r| r.id).collect();
        let mut pred_ids: Vec<u32> = predictions.iter().map(|p| p.id).collect();
        truth_ids.sort_unstable();
        pred_ids.sort_unstable();
        if truth_ids != pred_ids {
            return Err(Error::RegionIdMismatch(format!(
                "truth has {truth_ids:?}, predictions have {pred_ids:?}"
            )));
        }
        for prediction in predictions.iter() {
            let region = scene.region(prediction.id)?;
            let truth = region.truth.ok_or(Error::MissingTruth(region.id))?;
            let predicted = scene
                .concept_index(&prediction.concept)
                .ok_or_else(|| Error::UnknownConcept(prediction.concept.clone()))?;
            report.total += 1;
            report.per_concept[truth].total += 1;
            report.confusion[truth][predicted] += 1;
            if truth == predicted {
                report.correct += 1;
                report.per_concept[truth].correct += 1;
            }
        }
    }
    Ok(report)
}

// --- experiment runner ---

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub generator: GeneratorConfig,
    pub params: Params,
    /// Sweep top-n over 1..=vocabulary size instead of using params.top_n.
    pub sweep_top_n: bool,
    /// Output path for the comparison CSV (consumed by the CLI).
    pub out: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            generator: GeneratorConfig::new(7, 100, 0.9),
            params: Params::default(),
            sweep_top_n: true,
            out: None,
        }
    }
}

/// Parses the experiment config: the params-file keys plus `seed`, `count`,
/// `width`, `height`, `ambiguity`, `sweep_top_n` and `out`.
pub fn parse_experiment_config(text: &str) -> Result<ExperimentConfig> {
    let config = ExperimentConfig::default();
    let mut params = config.params;
    let mut generator = config.generator.clone();
    let mut sweep = config.sweep_top_n;
    let mut out = None;

    apply_params(text, &mut params, |key, value| match key {
        "seed" => {
            generator.seed = value
                .parse()
                .map_err(|_| Error::BadParams(format!("seed: {value:?}")))?;
            Ok(())
        }
        "count" => {
            generator.scene_count = value
                .parse()
                .map_err(|_| Error::BadParams(format!("count: {value:?}")))?;
            Ok(())
        }
        "width" => {
            generator.width = value
                .parse()
                .map_err(|_| Error::BadParams(format!("width: {value:?}")))?;
            Ok(())
        }
        "height" => {
            generator.height = value
                .parse()
                .map_err(|_| Error::BadParams(format!("height: {value:?}")))?;
            Ok(())
        }
        "ambiguity" => {
            generator.ambiguity = value
                .parse()
                .map_err(|_| Error::BadParams(format!("ambiguity: {value:?}")))?;
            Ok(())
        }
        "sweep_top_n" => {
            sweep = match value {
                "true" | "1" => true,
                "false" | "0" => false,
                other => return Err(Error::BadParams(format!("sweep_top_n: {other:?}"))),
            };
            Ok(())
        }
        "out" => {
            out = Some(value.to_string());
            Ok(())
        }
        _ => Err(Error::BadParams(String::new())),
    })?;
    params.validate()?;
    generator.validate()?;
    Ok(ExperimentConfig {
        generator,
        params,
        sweep_top_n: sweep,
        out,
    })
}

#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub method: String,
    pub top_n: usize,
    pub report: EvalReport,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub vocabulary: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,top_n,accuracy");
        for c in &self.vocabulary {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{:.6}",
                row.method,
                row.top_n,
                row.report.overall()
            ));
            for c in &row.report.per_concept {
                match c.accuracy() {
                    Some(acc) => out.push_str(&format!(",{acc:.6}")),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn row(&self, method: &str, top_n: usize) -> Option<&ComparisonRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.top_n == top_n)
    }
}

/// A test scene prepared for inference: full label sets (before top-n
/// truncation) in region order.
struct PreparedScene<'a> {
    scene: &'a Scene,
    label_sets: Vec<FuzzyLabelSet>,
}

/// Runs the full comparison: generates the corpus, splits it by scene index
/// parity (even indices train, odd test), trains the appearance and context
/// models on the training half, and scores appearance-only labeling against
/// ICM refinement on the test half, optionally sweeping the candidate-set
/// size over the whole vocabulary.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ComparisonReport> {
    let corpus = generate_corpus(&config.generator)?;
    let mut train: Vec<&SynthScene> = Vec::new();
    let mut test: Vec<&SynthScene> = Vec::new();
    for (i, item) in corpus.iter().enumerate() {
        if i % 2 == 0 {
            train.push(item);
        } else {
            test.push(item);
        }
    }
    if train.is_empty() || test.is_empty() {
        return Err(Error::DegenerateSplit(format!(
            "{} training / {} test scenes",
            train.len(),
            test.len()
        )));
    }

    let vocabulary = config.generator.vocabulary.clone();
    let mut examples = Vec::new();
    for item in &train {
        for region in item.scene.regions() {
            let features = extract_features(&item.scene, region.id, Some(&item.raster))?;
            examples.push((features, region.truth.ok_or(Error::MissingTruth(region.id))?));
        }
    }
    let model = train_classifier(&examples, vocabulary.clone(), 2.0, 10.0)?;

    let train_scenes: Vec<Scene> = train.iter().map(|s| s.scene.clone()).collect();
    let context = train_context(&train_scenes, &config.params.fuzzy)?;

    let mut prepared = Vec::with_capacity(test.len());
    for item in &test {
        let mut label_sets = Vec::new();
        for region in item.scene.regions() {
            let features = extract_features(&item.scene, region.id, Some(&item.raster))?;
            label_sets.push(fuzzy_memberships(&model.decision_values(&features)?)?);
        }
        prepared.push(PreparedScene {
            scene: &item.scene,
            label_sets,
        });
    }

    let predictions_for = |p: &PreparedScene, labels: &[usize], energy: f64| -> Predictions {
        p.scene
            .regions()
            .iter()
            .zip(labels)
            .zip(&p.label_sets)
            .map(|((region, &concept), set)| RegionPrediction {
                id: region.id,
                concept: vocabulary[concept].clone(),
                belief: set.belief(concept),
                final_energy: energy,
            })
            .collect()
    };

    let score = |all: &[(&Scene, Predictions)]| -> Result<EvalReport> {
        let pairs: Vec<(&Scene, &Predictions)> =
            all.iter().map(|(s, p)| (*s, p)).collect();
        evaluate(&pairs)
    };

    let mut rows = Vec::new();

    // appearance-only baseline
    let mut appearance_predictions = Vec::new();
    for p in &prepared {
        let instance = LabelingInstance::from_scene(
            p.scene,
            &p.label_sets,
            &context,
            config.params.energy,
            &config.params.fuzzy,
            1,
        )?;
        let labels = instance.appearance_labels();
        let energy = instance.total_energy(&labels)?;
        appearance_predictions.push((p.scene, predictions_for(p, &labels, energy)));
    }
    rows.push(ComparisonRow {
        method: "appearance".into(),
        top_n: 1,
        report: score(&appearance_predictions)?,
    });

    let top_ns: Vec<usize> = if config.sweep_top_n {
        (1..=vocabulary.len()).collect()
    } else {
        vec![config.params.top_n]
    };
    for &top_n in &top_ns {
        let mut icm_predictions = Vec::new();
        for p in &prepared {
            let instance = LabelingInstance::from_scene(
                p.scene,
                &p.label_sets,
                &context,
                config.params.energy,
                &config.params.fuzzy,
                top_n,
            )?;
            let run = instance.icm(config.params.max_sweeps)?;
            icm_predictions.push((
                p.scene,
                predictions_for(p, &run.assignment.labels, run.assignment.energy),
            ));
        }
        rows.push(ComparisonRow {
            method: "icm".into(),
            top_n,
            report: score(&icm_predictions)?,
        });
    }

    Ok(ComparisonReport { vocabulary, rows })
}
