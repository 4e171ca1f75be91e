//! Plant maps over a single lane.
//!
//! Coordinates are in meters: `x` runs along the driving direction starting
//! at the lane entry, `y` runs across the lane from `0` to the lane width.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{check_positive, Error, Result};

mod generate;
mod uniformity;

pub use generate::{generate_field, FieldParams};
pub use uniformity::{uniformity_test, UniformityVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlantKind {
    Crop,
    Weed,
}

impl PlantKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlantKind::Crop => "crop",
            PlantKind::Weed => "weed",
        }
    }
}

impl core::str::FromStr for PlantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crop" => Ok(PlantKind::Crop),
            "weed" => Ok(PlantKind::Weed),
            _ => Err(Error::param("kind", "expected `crop` or `weed`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantInstance {
    pub id: u64,
    pub x: f64,
    pub y: f64,
    pub kind: PlantKind,
    pub species: String,
    /// Square meters, `0.0` when unknown.
    pub area: f64,
}

impl PlantInstance {
    pub fn weed(id: u64, x: f64, y: f64) -> Self {
        PlantInstance {
            id,
            x,
            y,
            kind: PlantKind::Weed,
            species: String::new(),
            area: 0.0,
        }
    }

    pub fn is_weed(&self) -> bool {
        self.kind == PlantKind::Weed
    }
}

/// Canonical plant order: ascending x, then y, then id.
pub fn plant_order(a: &PlantInstance, b: &PlantInstance) -> Ordering {
    a.x.total_cmp(&b.x)
        .then(a.y.total_cmp(&b.y))
        .then(a.id.cmp(&b.id))
}

/// Where a field came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Generated { density: f64, seed: u64 },
    Ingested,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeedField {
    lane_width_m: f64,
    length_m: f64,
    num_crop_rows: u32,
    plants: Vec<PlantInstance>,
    provenance: Provenance,
}

impl WeedField {
    /// Validates bounds and sorts `plants` into canonical order.
    pub fn new(
        lane_width_m: f64,
        length_m: f64,
        num_crop_rows: u32,
        mut plants: Vec<PlantInstance>,
        provenance: Provenance,
    ) -> Result<Self> {
        check_positive("lane_width_m", lane_width_m)?;
        check_positive("length_m", length_m)?;
        if num_crop_rows == 0 {
            return Err(Error::param("num_crop_rows", "must be >= 1"));
        }
        for p in &plants {
            let inside = p.x.is_finite()
                && p.y.is_finite()
                && (0.0..=length_m).contains(&p.x)
                && (0.0..=lane_width_m).contains(&p.y);
            if !inside {
                return Err(Error::OutOfBounds {
                    id: p.id,
                    x: p.x,
                    y: p.y,
                });
            }
            if !(p.area.is_finite() && p.area >= 0.0) {
                return Err(Error::param("area", "must be finite and >= 0"));
            }
        }
        plants.sort_by(plant_order);
        Ok(WeedField {
            lane_width_m,
            length_m,
            num_crop_rows,
            plants,
            provenance,
        })
    }

    pub fn lane_width_m(&self) -> f64 {
        self.lane_width_m
    }

    pub fn length_m(&self) -> f64 {
        self.length_m
    }

    pub fn num_crop_rows(&self) -> u32 {
        self.num_crop_rows
    }

    pub fn plants(&self) -> &[PlantInstance] {
        &self.plants
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Weeds in canonical order.
    pub fn weeds(&self) -> impl Iterator<Item = &PlantInstance> + '_ {
        self.plants.iter().filter(|p| p.is_weed())
    }

    pub fn weed_count(&self) -> usize {
        self.weeds().count()
    }

    pub fn density_param(&self) -> Option<f64> {
        match self.provenance {
            Provenance::Generated { density, .. } => Some(density),
            Provenance::Ingested => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.provenance {
            Provenance::Generated { seed, .. } => Some(seed),
            Provenance::Ingested => None,
        }
    }
}
