//! ctxcat-core — contextual object categorization for segmented images.
//!
//! Regions first receive fuzzy appearance labels from a one-vs-rest kernel
//! classifier, then a context model refines them by minimizing an energy
//! over the fully-connected region graph. The stages are:
//!
//! 1. **scene** – frames, run-length-encoded region masks, mask geometry,
//!    and the raw spatial descriptors (angle, boundary gap, bordered
//!    perimeter) per ordered region pair.
//! 2. **fuzzy** – the five fuzzy spatial memberships (above, below, beside,
//!    near, surrounded-by) forming the relation vector.
//! 3. **appearance** – HSV + edge-direction histogram features, kernel
//!    regularized-least-squares decision values, and fuzzy belief degrees.
//! 4. **context** – concept priors, per-image co-occurrence, and mean
//!    relation vectors per ordered concept pair.
//! 5. **energy** – association and configuration potentials, ICM descent,
//!    and an exhaustive oracle for small instances.
//! 6. **synth / eval** – a deterministic synthetic corpus with a tunable
//!    appearance-ambiguity knob, accuracy metrics, and the comparison
//!    experiment runner.

pub mod appearance;
pub mod context;
pub mod energy;
pub mod error;
pub mod eval;
pub mod fuzzy;
pub mod params;
pub mod raster;
pub mod render;
pub mod scene;
pub mod synth;

pub use appearance::{AppearanceModel, FuzzyLabelSet};
pub use context::ContextModel;
pub use energy::{Assignment, EnergyParams, IcmRun, LabelingInstance};
pub use error::{Error, Result};
pub use fuzzy::{Direction, FuzzyParams, RelationVector};
pub use params::Params;
pub use raster::Raster;
pub use scene::{PairDescriptors, Region, RleMask, Scene};
pub use synth::{GeneratorConfig, SplitMix64, SynthScene};
