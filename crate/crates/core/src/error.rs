use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("regions {a} and {b} overlap at pixel ({x}, {y})")]
    OverlappingMasks { a: u32, b: u32, x: u32, y: u32 },

    #[error("region {id}: pixel ({x}, {y}) outside {width}x{height} frame")]
    OutOfBounds {
        id: u32,
        x: u32,
        y: u32,
        width: u32,
        height: u32,
    },

    #[error("region {0} has an empty mask")]
    EmptyRegion(u32),

    #[error("duplicate region id {0}")]
    DuplicateRegionId(u32),

    #[error("duplicate concept name {0:?}")]
    DuplicateConcept(String),

    #[error("unknown region id {0}")]
    UnknownRegion(u32),

    #[error("unknown concept {0:?}")]
    UnknownConcept(String),

    #[error("region pair requires two distinct regions, got id {0} twice")]
    SamePair(u32),

    #[error("region {0} carries neither precomputed features nor a raster to extract them from")]
    MissingFeatures(u32),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("concept {0:?} has no training examples")]
    EmptyClass(String),

    #[error("linear system is singular (pivot {0} at row {1})")]
    SingularSystem(f64, usize),

    #[error("region {0} has no ground-truth concept")]
    MissingTruth(u32),

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("concept index {concept} is not a candidate of region {region}")]
    InvalidLabel { region: usize, concept: usize },

    #[error("search space of {size} assignments exceeds the exhaustive limit of {limit}")]
    SearchSpaceExceeded { size: u128, limit: u128 },

    #[error("bad parameter: {0}")]
    BadParams(String),

    #[error("region id sets differ between truth and predictions: {0}")]
    RegionIdMismatch(String),

    #[error("no label provided for region {0}")]
    MissingLabel(u32),

    #[error("degenerate train/test split: {0}")]
    DegenerateSplit(String),

    #[error("vocabulary mismatch across input scenes")]
    VocabularyMismatch,
}
