//! Labeled-scene rendering: one fixed palette color per concept, painted
//! over black, written as binary PPM.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::raster::Raster;
use crate::scene::Scene;

/// Palette in vocabulary order; vocabularies longer than the palette wrap.
pub const PALETTE: [[u8; 3]; 12] = [
    [86, 180, 233],  // light blue
    [0, 114, 178],   // blue
    [0, 158, 115],   // green
    [213, 94, 0],    // vermillion
    [230, 159, 0],   // orange
    [110, 110, 110], // gray
    [204, 121, 167], // pink
    [240, 228, 66],  // yellow
    [148, 103, 189], // purple
    [140, 86, 75],   // brown
    [23, 190, 207],  // cyan
    [188, 189, 34],  // olive
];

pub fn concept_color(index: usize) -> [u8; 3] {
    PALETTE[index % PALETTE.len()]
}

/// Paints each region with its label's palette color. `labels` maps region
/// id to concept index and must cover every region.
pub fn render(scene: &Scene, labels: &BTreeMap<u32, usize>) -> Result<Raster> {
    let mut raster = Raster::new(scene.width(), scene.height());
    for region in scene.regions() {
        let &concept = labels.get(&region.id).ok_or(Error::MissingLabel(region.id))?;
        if concept >= scene.vocabulary().len() {
            return Err(Error::UnknownConcept(format!("index {concept}")));
        }
        let color = concept_color(concept);
        for (x, y) in region.mask.pixels() {
            raster.set(x, y, color);
        }
    }
    Ok(raster)
}
