//! Energy-based label refinement over the fully-connected region graph.
//!
//! A labeling assigns one candidate concept per region. Its energy is the
//! negated sum of a per-region association potential (appearance belief plus
//! occurrence prior) and a per-ordered-pair configuration potential (spatial
//! interaction plus co-occurrence weighted by the first region's belief).
//! ICM performs sequential single-region updates until a full sweep changes
//! nothing; an exhaustive search over the candidate product space serves as
//! the ground-truth minimizer for small instances.

use std::collections::BTreeMap;

use crate::appearance::FuzzyLabelSet;
use crate::context::ContextModel;
use crate::error::{Error, Result};
use crate::fuzzy::{membership_distance, relation_vector, FuzzyParams, RelationVector};
use crate::scene::Scene;

const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

/// Weights of the three energy contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    /// Weight of the appearance belief p(c|s).
    pub alpha: f64,
    /// Weight of the occurrence prior p(c).
    pub beta: f64,
    /// Weight of the spatial interaction psi_r.
    pub delta: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            alpha: 1.4,
            beta: 0.3,
            delta: 0.8,
        }
    }
}

/// The fully-connected labeling problem: per-region candidate sets with
/// beliefs, a relation vector for every ordered region pair, the trained
/// context statistics, and the energy weights.
#[derive(Debug, Clone)]
pub struct LabelingInstance<'a> {
    labels: Vec<FuzzyLabelSet>,
    relations: BTreeMap<(usize, usize), RelationVector>,
    context: &'a ContextModel,
    params: EnergyParams,
}

/// A value of the association variables: one concept index per region, with
/// the exact energy of that configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub labels: Vec<usize>,
    pub energy: f64,
}

/// ICM output: the final assignment plus the exact energy recorded after
/// initialization and after every sweep.
#[derive(Debug, Clone)]
pub struct IcmRun {
    pub assignment: Assignment,
    pub sweep_energies: Vec<f64>,
}

impl IcmRun {
    /// Number of full sweeps performed.
    pub fn sweeps(&self) -> usize {
        self.sweep_energies.len() - 1
    }
}

impl<'a> LabelingInstance<'a> {
    pub fn new(
        labels: Vec<FuzzyLabelSet>,
        relations: BTreeMap<(usize, usize), RelationVector>,
        context: &'a ContextModel,
        params: EnergyParams,
    ) -> Result<Self> {
        let k = labels.len();
        let n = context.vocabulary().len();
        for (i, set) in labels.iter().enumerate() {
            if set.candidates.is_empty() {
                return Err(Error::Malformed(format!("region {i} has no candidates")));
            }
            if set.beliefs.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: set.beliefs.len(),
                });
            }
            if set.candidates.iter().any(|&c| c >= n) {
                return Err(Error::Malformed(format!(
                    "region {i} has a candidate outside the vocabulary"
                )));
            }
        }
        for i in 0..k {
            for j in 0..k {
                if i != j && !relations.contains_key(&(i, j)) {
                    return Err(Error::Malformed(format!(
                        "missing relation vector for ordered pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            labels,
            relations,
            context,
            params,
        })
    }

    /// Builds an instance from a scene: relation vectors are computed from
    /// mask geometry and each label set is restricted to its top-n
    /// candidates. `label_sets` follows the scene's region order.
    pub fn from_scene(
        scene: &Scene,
        label_sets: &[FuzzyLabelSet],
        context: &'a ContextModel,
        params: EnergyParams,
        fuzzy: &FuzzyParams,
        top_n: usize,
    ) -> Result<Self> {
        if label_sets.len() != scene.regions().len() {
            return Err(Error::DimensionMismatch {
                expected: scene.regions().len(),
                got: label_sets.len(),
            });
        }
        let index_of: BTreeMap<u32, usize> = scene
            .regions()
            .iter()
            .enumerate()
            .map(|(idx, r)| (r.id, idx))
            .collect();
        let relations = scene
            .descriptor_table()
            .into_iter()
            .map(|((i, j), desc)| ((index_of[&i], index_of[&j]), relation_vector(desc, fuzzy)))
            .collect();
        Self::new(
            label_sets.iter().map(|s| s.top_n(top_n)).collect(),
            relations,
            context,
            params,
        )
    }

    pub fn region_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label_sets(&self) -> &[FuzzyLabelSet] {
        &self.labels
    }

    pub fn relation(&self, i: usize, j: usize) -> &RelationVector {
        &self.relations[&(i, j)]
    }

    pub fn params(&self) -> EnergyParams {
        self.params
    }

    pub fn context(&self) -> &ContextModel {
        self.context
    }

    fn check_candidate(&self, i: usize, c: usize) -> Result<()> {
        if self.labels[i].candidates.contains(&c) {
            Ok(())
        } else {
            Err(Error::InvalidLabel { region: i, concept: c })
        }
    }

    /// Association potential of labeling region i with concept c:
    /// alpha * belief + beta * prior.
    pub fn association_potential(&self, i: usize, c: usize) -> Result<f64> {
        self.check_candidate(i, c)?;
        Ok(self.params.alpha * self.labels[i].belief(c) + self.params.beta * self.context.prior(c))
    }

    /// Configuration potential of the ordered pair (i labeled c_l, j labeled
    /// c_m): delta * psi_r + cooc * belief_i(c_l).
    pub fn configuration_potential(&self, i: usize, c_l: usize, j: usize, c_m: usize) -> Result<f64> {
        if i == j {
            return Err(Error::SamePair(i as u32));
        }
        self.check_candidate(i, c_l)?;
        self.check_candidate(j, c_m)?;
        let psi = spatial_interaction(self.context, c_l, c_m, self.relation(i, j));
        Ok(self.params.delta * psi + self.context.cooc(c_l, c_m) * self.labels[i].belief(c_l))
    }

    /// E(A): negated sum of all association potentials and all ordered-pair
    /// configuration potentials.
    pub fn total_energy(&self, labels: &[usize]) -> Result<f64> {
        let k = self.region_count();
        if labels.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: labels.len(),
            });
        }
        let mut sum = 0.0;
        for i in 0..k {
            sum += self.association_potential(i, labels[i])?;
        }
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    sum += self.configuration_potential(i, labels[i], j, labels[j])?;
                }
            }
        }
        Ok(-sum)
    }

    /// The appearance-argmax initialization: each region's highest-belief
    /// candidate.
    pub fn appearance_labels(&self) -> Vec<usize> {
        self.labels.iter().map(|s| s.candidates[0]).collect()
    }

    /// Local contribution of region i taking concept c, everything else
    /// fixed: its association potential plus both directions of every pair
    /// involving i. Maximizing this over c minimizes the total energy.
    fn local_score(&self, labels: &[usize], i: usize, c: usize) -> Result<f64> {
        let mut score = self.association_potential(i, c)?;
        for j in 0..labels.len() {
            if j != i {
                score += self.configuration_potential(i, c, j, labels[j])?;
                score += self.configuration_potential(j, labels[j], i, c)?;
            }
        }
        Ok(score)
    }

    /// Iterated conditional modes: sequential single-region argmin updates,
    /// regions in ascending order, until a sweep changes nothing or
    /// `max_sweeps` sweeps elapse. Ties prefer the lowest concept index.
    pub fn icm(&self, max_sweeps: usize) -> Result<IcmRun> {
        let mut labels = self.appearance_labels();
        let mut sweep_energies = vec![self.total_energy(&labels)?];
        for _ in 0..max_sweeps {
            let mut changed = false;
            for i in 0..labels.len() {
                let mut best_c = labels[i];
                let mut best_score = self.local_score(&labels, i, best_c)?;
                for &c in &self.labels[i].candidates {
                    if c == labels[i] {
                        continue;
                    }
                    let score = self.local_score(&labels, i, c)?;
                    if score > best_score || (score == best_score && c < best_c) {
                        best_score = score;
                        best_c = c;
                    }
                }
                if best_c != labels[i] {
                    labels[i] = best_c;
                    changed = true;
                }
            }
            sweep_energies.push(self.total_energy(&labels)?);
            if !changed {
                break;
            }
        }
        let energy = *sweep_energies.last().expect("at least the initial energy");
        Ok(IcmRun {
            assignment: Assignment { labels, energy },
            sweep_energies,
        })
    }

    /// Global minimum over the candidate product space. Ties resolve to the
    /// lexicographically smallest label sequence. Guarded against spaces
    /// larger than 10^6 assignments.
    pub fn exhaustive_min(&self) -> Result<Assignment> {
        let size: u128 = self
            .labels
            .iter()
            .map(|s| s.candidates.len() as u128)
            .product();
        if size > EXHAUSTIVE_LIMIT {
            return Err(Error::SearchSpaceExceeded {
                size,
                limit: EXHAUSTIVE_LIMIT,
            });
        }

        let k = self.region_count();
        let mut cursor = vec![0usize; k];
        let mut best: Option<Assignment> = None;
        loop {
            let labels: Vec<usize> = cursor
                .iter()
                .enumerate()
                .map(|(i, &p)| self.labels[i].candidates[p])
                .collect();
            let energy = self.total_energy(&labels)?;
            let better = match &best {
                None => true,
                Some(b) => energy < b.energy || (energy == b.energy && labels < b.labels),
            };
            if better {
                best = Some(Assignment { labels, energy });
            }

            // odometer
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(best.expect("product space is non-empty"));
                }
                pos -= 1;
                cursor[pos] += 1;
                if cursor[pos] < self.labels[pos].candidates.len() {
                    break;
                }
                cursor[pos] = 0;
            }
        }
    }
}

/// Spatial interaction psi_r for an ordered concept pair: 1 minus the
/// Euclidean distance between the trained mean relation vector and the
/// observed one, clamped at 0; ordered pairs never seen in training
/// contribute 0.
pub fn spatial_interaction(
    context: &ContextModel,
    c_l: usize,
    c_m: usize,
    relation: &RelationVector,
) -> f64 {
    match context.mean_relation(c_l, c_m) {
        None => 0.0,
        Some(mean) => (1.0 - membership_distance(&mean.mu, &relation.memberships())).max(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::train_context;
    use crate::fuzzy::Direction;
    use crate::scene::PairDescriptors;

    /// Context model over `n` concepts built from tiny synthetic strips;
    /// tests that need exact cooc/prior values construct instances through
    /// `instance_with` below and read the trained numbers back.
    fn toy_context(vocab: &[&str], scenes_truths: &[&[usize]]) -> ContextModel {
        use crate::scene::{Region, RleMask, Run, Scene};
        let scenes: Vec<Scene> = scenes_truths
            .iter()
            .map(|truths| {
                let regions = truths
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| {
                        let mask = RleMask::new(vec![Run {
                            row: 1 + (i as u32) * 2,
                            col: 1,
                            len: 2,
                        }])
                        .unwrap();
                        Region::new(i as u32, mask).with_truth(t)
                    })
                    .collect();
                Scene::new(
                    8,
                    2 + 2 * truths.len() as u32,
                    vocab.iter().map(|s| s.to_string()).collect(),
                    regions,
                )
                .unwrap()
            })
            .collect();
        train_context(&scenes, &FuzzyParams::default()).unwrap()
    }

    fn neutral_relation() -> RelationVector {
        relation_vector(
            PairDescriptors {
                theta: 0.0,
                d: 0.5,
                rho: 0.0,
            },
            &FuzzyParams::default(),
        )
    }

    fn labels_from(beliefs: Vec<Vec<f64>>, top_n: usize) -> Vec<FuzzyLabelSet> {
        beliefs
            .into_iter()
            .map(|b| {
                let mut candidates: Vec<usize> = (0..b.len()).collect();
                candidates.sort_by(|&x, &y| b[y].partial_cmp(&b[x]).unwrap().then(x.cmp(&y)));
                FuzzyLabelSet {
                    candidates: candidates.into_iter().take(top_n).collect(),
                    beliefs: b,
                }
            })
            .collect()
    }

    fn full_relations(k: usize) -> BTreeMap<(usize, usize), RelationVector> {
        let mut map = BTreeMap::new();
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    map.insert((i, j), neutral_relation());
                }
            }
        }
        map
    }

    #[test]
    fn association_potential_worked_example() {
        let context = toy_context(&["a", "b"], &[&[0, 1, 1, 1, 1, 1, 1, 1, 1, 1]]);
        assert!((context.prior(0) - 0.1).abs() < 1e-12);
        let labels = labels_from(vec![vec![0.8, 0.2]], 2);
        let inst = LabelingInstance::new(
            labels,
            BTreeMap::new(),
            &context,
            EnergyParams::default(),
        )
        .unwrap();
        // 1.4 * 0.8 + 0.3 * 0.1 = 1.15
        assert!((inst.association_potential(0, 0).unwrap() - 1.15).abs() < 1e-12);

        let zero = LabelingInstance::new(
            labels_from(vec![vec![0.8, 0.2]], 2),
            BTreeMap::new(),
            &context,
            EnergyParams {
                alpha: 0.0,
                beta: 0.0,
                delta: 0.0,
            },
        )
        .unwrap();
        assert_eq!(zero.association_potential(0, 0).unwrap(), 0.0);
        assert_eq!(zero.association_potential(0, 1).unwrap(), 0.0);
    }

    #[test]
    fn association_rejects_non_candidates() {
        let context = toy_context(&["a", "b"], &[&[0, 1]]);
        let inst = LabelingInstance::new(
            labels_from(vec![vec![0.9, 0.1]], 1),
            BTreeMap::new(),
            &context,
            EnergyParams::default(),
        )
        .unwrap();
        assert!(matches!(
            inst.association_potential(0, 1),
            Err(Error::InvalidLabel { region: 0, concept: 1 })
        ));
    }

    #[test]
    fn spatial_interaction_matches_hand_values() {
        let context = toy_context(&["a", "b"], &[&[0, 1]]);
        let observed = context.mean_relation(0, 1).unwrap().mu;
        let rv = RelationVector {
            mu_above: observed[0],
            mu_below: observed[1],
            mu_beside: observed[2],
            mu_near: observed[3],
            mu_sur: observed[4],
            dominant: Direction::Beside,
            descriptors: PairDescriptors {
                theta: 0.0,
                d: 0.0,
                rho: 0.0,
            },
        };
        // exact match -> 1
        assert!((spatial_interaction(&context, 0, 1, &rv) - 1.0).abs() < 1e-12);
        // unseen ordered pair -> 0
        assert_eq!(spatial_interaction(&context, 0, 0, &rv), 0.0);
    }

    #[test]
    fn spatial_interaction_clamps_at_zero() {
        // mean (1,0,0,.5,.5) vs observed (0,0,1,.5,.5): distance sqrt(2) > 1
        let context = ContextModel::from_json(
            r#"{
                "vocabulary": ["a", "b"],
                "prior": {"a": 0.5, "b": 0.5},
                "cooc": [[0.0, 1.0], [1.0, 0.0]],
                "mean_relation": {"a|b": {"count": 1, "mu": [1.0, 0.0, 0.0, 0.5, 0.5]}}
            }"#,
        )
        .unwrap();
        let mut observed = neutral_relation();
        observed.mu_above = 0.0;
        observed.mu_below = 0.0;
        observed.mu_beside = 1.0;
        observed.mu_near = 0.5;
        observed.mu_sur = 0.5;
        let dist = membership_distance(
            &context.mean_relation(0, 1).unwrap().mu,
            &observed.memberships(),
        );
        assert!((dist - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(spatial_interaction(&context, 0, 1, &observed), 0.0);
    }

    #[test]
    fn configuration_potential_worked_example() {
        // delta * psi + cooc * belief with psi = 1, delta = 0.8,
        // cooc = 0.25, belief = 0.6 -> 0.95
        let vocab = ["a", "b", "c"];
        // images: {a,b} twice, {a,c}, {b,c} -> cooc(a,b) = 0.5? we need 0.25:
        // images {a,b}, {a,c}, {b,c}, {a,b}? Use the documented example:
        // both images contain {a,b}; image 2 also has c.
        let context = toy_context(&vocab, &[&[0, 1], &[0, 1, 2]]);
        assert!((context.cooc(0, 1) - 0.5).abs() < 1e-12);
        assert!((context.cooc(0, 2) - 0.25).abs() < 1e-12);

        let labels = labels_from(vec![vec![0.6, 0.2, 0.2], vec![0.1, 0.1, 0.8]], 3);
        let mut relations = full_relations(2);
        // make the observed relation equal the trained mean for (a, c)
        let mean = context.mean_relation(0, 2).unwrap().mu;
        let rv = RelationVector {
            mu_above: mean[0],
            mu_below: mean[1],
            mu_beside: mean[2],
            mu_near: mean[3],
            mu_sur: mean[4],
            dominant: Direction::Beside,
            descriptors: PairDescriptors {
                theta: 0.0,
                d: 0.0,
                rho: 0.0,
            },
        };
        relations.insert((0, 1), rv);
        let inst =
            LabelingInstance::new(labels, relations, &context, EnergyParams::default()).unwrap();
        let got = inst.configuration_potential(0, 0, 1, 2).unwrap();
        assert!((got - (0.8 * 1.0 + 0.25 * 0.6)).abs() < 1e-12);
    }

    #[test]
    fn unary_only_energy() {
        let context = toy_context(&["a", "b"], &[&[0, 1, 1, 1, 1, 1, 1, 1, 1, 1]]);
        let inst = LabelingInstance::new(
            labels_from(vec![vec![0.8, 0.2]], 2),
            BTreeMap::new(),
            &context,
            EnergyParams::default(),
        )
        .unwrap();
        assert!((inst.total_energy(&[0]).unwrap() + 1.15).abs() < 1e-12);
        let icm = inst.icm(100).unwrap();
        assert_eq!(icm.assignment.labels, vec![0]);
        assert_eq!(icm.assignment, inst.exhaustive_min().unwrap());
    }

    #[test]
    fn two_region_energy_matches_hand_sum() {
        let vocab = ["a", "b"];
        let context = toy_context(&vocab, &[&[0, 1]]);
        let labels = labels_from(vec![vec![0.7, 0.3], vec![0.4, 0.6]], 2);
        let relations = full_relations(2);
        let params = EnergyParams::default();
        let inst = LabelingInstance::new(labels, relations, &context, params).unwrap();

        // independent hand evaluation of E([0, 1])
        let rv = neutral_relation().memberships();
        let psi = |l: usize, m: usize| -> f64 {
            match context.mean_relation(l, m) {
                None => 0.0,
                Some(mr) => (1.0 - membership_distance(&mr.mu, &rv)).max(0.0),
            }
        };
        let unary = 1.4 * 0.7 + 0.3 * context.prior(0) + 1.4 * 0.6 + 0.3 * context.prior(1);
        let pair = 0.8 * psi(0, 1)
            + context.cooc(0, 1) * 0.7
            + 0.8 * psi(1, 0)
            + context.cooc(1, 0) * 0.6;
        let expected = -(unary + pair);
        assert!((inst.total_energy(&[0, 1]).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn context_overrides_weak_appearance_preference() {
        // Appearance slightly prefers the swapped labeling; the pairwise
        // terms pull it back. ICM must agree with the exhaustive oracle.
        let vocab = ["a", "b"];
        let context = toy_context(&vocab, &[&[0, 1], &[0, 1], &[0, 1]]);
        // region 0 truly "a" but belief leans b; region 1 truly "b"
        let labels = labels_from(vec![vec![0.48, 0.52], vec![0.45, 0.55]], 2);

        // observed relations equal to the trained means of the correct pair
        let mean_ab = context.mean_relation(0, 1).unwrap().mu;
        let mean_ba = context.mean_relation(1, 0).unwrap().mu;
        let mk = |mu: [f64; 5]| RelationVector {
            mu_above: mu[0],
            mu_below: mu[1],
            mu_beside: mu[2],
            mu_near: mu[3],
            mu_sur: mu[4],
            dominant: Direction::Beside,
            descriptors: PairDescriptors {
                theta: 0.0,
                d: 0.0,
                rho: 0.0,
            },
        };
        let mut relations = BTreeMap::new();
        relations.insert((0, 1), mk(mean_ab));
        relations.insert((1, 0), mk(mean_ba));
        let inst =
            LabelingInstance::new(labels, relations, &context, EnergyParams::default()).unwrap();

        assert_eq!(inst.appearance_labels(), vec![1, 1]);
        let icm = inst.icm(100).unwrap();
        let oracle = inst.exhaustive_min().unwrap();
        assert_eq!(icm.assignment.labels, vec![0, 1]);
        assert_eq!(icm.assignment.labels, oracle.labels);
        assert!((icm.assignment.energy - oracle.energy).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_hand_enumeration_three_regions() {
        let vocab = ["a", "b"];
        let context = toy_context(&vocab, &[&[0, 1], &[0, 0, 1]]);
        let labels = labels_from(
            vec![
                vec![0.55, 0.45],
                vec![0.5, 0.5],
                vec![0.3, 0.7],
            ],
            2,
        );
        let inst = LabelingInstance::new(
            labels,
            full_relations(3),
            &context,
            EnergyParams::default(),
        )
        .unwrap();
        // oracle: enumerate all 8 assignments through total_energy and pick
        // the minimum with lexicographic ties
        let mut best: Option<(f64, Vec<usize>)> = None;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let labels = vec![a, b, c];
                    let e = inst.total_energy(&labels).unwrap();
                    let better = match &best {
                        None => true,
                        Some((be, bl)) => e < *be || (e == *be && labels < *bl),
                    };
                    if better {
                        best = Some((e, labels));
                    }
                }
            }
        }
        let (be, bl) = best.unwrap();
        let got = inst.exhaustive_min().unwrap();
        assert_eq!(got.labels, bl);
        assert!((got.energy - be).abs() < 1e-12);
        assert!(got.energy <= inst.icm(100).unwrap().assignment.energy + 1e-12);
    }

    #[test]
    fn exhaustive_guard_trips() {
        let vocab = ["a", "b"];
        let context = toy_context(&vocab, &[&[0, 1]]);
        let k = 21; // 2^21 > 10^6
        let labels = labels_from(vec![vec![0.5, 0.5]; k], 2);
        let inst = LabelingInstance::new(
            labels,
            full_relations(k),
            &context,
            EnergyParams::default(),
        )
        .unwrap();
        assert!(matches!(
            inst.exhaustive_min(),
            Err(Error::SearchSpaceExceeded { .. })
        ));
    }

    #[test]
    fn singleton_candidates_return_appearance_labels() {
        let vocab = ["a", "b"];
        let context = toy_context(&vocab, &[&[0, 1]]);
        let labels = labels_from(vec![vec![0.3, 0.7], vec![0.9, 0.1]], 1);
        let inst = LabelingInstance::new(
            labels,
            full_relations(2),
            &context,
            EnergyParams::default(),
        )
        .unwrap();
        let run = inst.icm(100).unwrap();
        assert_eq!(run.assignment.labels, inst.appearance_labels());
        assert_eq!(run.sweeps(), 1); // one unchanged sweep, then stop
    }

    #[test]
    fn energy_is_affine_in_each_weight() {
        let vocab = ["a", "b"];
        let context = toy_context(&vocab, &[&[0, 1], &[0, 1, 0]]);
        let labels = vec![0usize, 1];
        let base = EnergyParams::default();
        let sets = labels_from(vec![vec![0.7, 0.3], vec![0.2, 0.8]], 2);
        let energy_with = |params: EnergyParams| {
            LabelingInstance::new(sets.clone(), full_relations(2), &context, params)
                .unwrap()
                .total_energy(&labels)
                .unwrap()
        };
        for pick in 0..3 {
            let bump = |p: &mut EnergyParams, by: f64| match pick {
                0 => p.alpha += by,
                1 => p.beta += by,
                _ => p.delta += by,
            };
            let mut p1 = base;
            bump(&mut p1, 1.0);
            let mut p2 = base;
            bump(&mut p2, 2.0);
            let (e0, e1, e2) = (energy_with(base), energy_with(p1), energy_with(p2));
            // affine: second difference vanishes
            assert!((e2 - 2.0 * e1 + e0).abs() < 1e-9, "weight {pick}");
        }
    }
}
