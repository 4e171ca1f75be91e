use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PlantInstance, PlantKind, Provenance, WeedField};
use crate::error::{check_non_negative, check_positive, Error, Result};

pub const GENERATED_CROP_SPECIES: &str = "sim_crop";
pub const GENERATED_WEED_SPECIES: &str = "sim_weed";

/// Parameters of a synthetic row-crop lane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    /// Weeds per square meter.
    pub density: f64,
    pub length_m: f64,
    pub lane_width_m: f64,
    pub num_crop_rows: u32,
    pub crop_spacing_m: f64,
    pub seed: u64,
}

impl Default for FieldParams {
    fn default() -> Self {
        FieldParams {
            density: 10.0,
            length_m: 20.0,
            lane_width_m: 1.3,
            num_crop_rows: 3,
            crop_spacing_m: 0.15,
            seed: 0,
        }
    }
}

impl FieldParams {
    pub fn validate(&self) -> Result<()> {
        check_non_negative("lambda", self.density)?;
        check_positive("length_m", self.length_m)?;
        check_positive("lane_width_m", self.lane_width_m)?;
        check_positive("crop_spacing_m", self.crop_spacing_m)?;
        if self.num_crop_rows == 0 {
            return Err(Error::param("num_crop_rows", "must be >= 1"));
        }
        Ok(())
    }
}

/// Generates a lane with crops on evenly spaced row lines and weeds drawn
/// from a homogeneous Poisson process.
///
/// Weeds arrive along `x` with exponential gaps of rate `density * lane_width`
/// (the first gap measured from `x = 0`) and are uniform across the lane in
/// `y`. Weeds may land on crop rows. Crops sit at `(i + 0.5) * crop_spacing`
/// along each row line `y = (r + 0.5) * lane_width / num_crop_rows`.
///
/// The RNG is a ChaCha8 stream seeded from `seed`, so a given parameter set
/// always yields the same field.
pub fn generate_field(params: &FieldParams) -> Result<WeedField> {
    params.validate()?;
    let FieldParams {
        density,
        length_m,
        lane_width_m,
        num_crop_rows,
        crop_spacing_m,
        seed,
    } = *params;

    let mut plants = Vec::new();
    let mut next_id = 0u64;

    for row in 0..num_crop_rows {
        let y = (f64::from(row) + 0.5) * lane_width_m / f64::from(num_crop_rows);
        let mut i = 0u64;
        loop {
            let x = (i as f64 + 0.5) * crop_spacing_m;
            if x > length_m {
                break;
            }
            plants.push(PlantInstance {
                id: next_id,
                x,
                y,
                kind: PlantKind::Crop,
                species: String::from(GENERATED_CROP_SPECIES),
                area: 0.0,
            });
            next_id += 1;
            i += 1;
        }
    }

    let rate = density * lane_width_m;
    if rate > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = 0.0;
        loop {
            // 1 - u lies in (0, 1], so the log is finite.
            let u: f64 = rng.random();
            x += -libm::log(1.0 - u) / rate;
            if x > length_m {
                break;
            }
            let y = rng.random::<f64>() * lane_width_m;
            plants.push(PlantInstance {
                id: next_id,
                x,
                y,
                kind: PlantKind::Weed,
                species: String::from(GENERATED_WEED_SPECIES),
                area: 0.0,
            });
            next_id += 1;
        }
    }

    WeedField::new(
        lane_width_m,
        length_m,
        num_crop_rows,
        plants,
        Provenance::Generated { density, seed },
    )
    .map_err(|e| Error::Config(format!("generator produced an invalid field: {e}")))
}
