use alloc::vec;

use super::WeedField;
use crate::error::{Error, Result};
use crate::stats::{chi_squared_quantile, chi_squared_sf};

/// Minimum expected count per cell for the chi-squared approximation.
const MIN_EXPECTED_PER_CELL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformityVerdict {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub critical_value: f64,
    pub p_value: f64,
    pub uniform_at_5pct: bool,
}

/// Pearson chi-squared test of the weed positions against a uniform density
/// over the lane, using a `num_bins_x` by `num_bins_y` occupancy grid.
pub fn uniformity_test(
    field: &WeedField,
    num_bins_x: usize,
    num_bins_y: usize,
) -> Result<UniformityVerdict> {
    let cells = num_bins_x * num_bins_y;
    if num_bins_x == 0 || num_bins_y == 0 || cells < 2 {
        return Err(Error::param("bins", "need at least two cells"));
    }
    let found = field.weed_count();
    let required = MIN_EXPECTED_PER_CELL * cells;
    if found < required {
        return Err(Error::InsufficientData { required, found });
    }

    let mut counts = vec![0usize; cells];
    let (length, width) = (field.length_m(), field.lane_width_m());
    for w in field.weeds() {
        let bx = bin_index(w.x, length, num_bins_x);
        let by = bin_index(w.y, width, num_bins_y);
        counts[by * num_bins_x + bx] += 1;
    }

    let expected = found as f64 / cells as f64;
    let statistic = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum::<f64>();
    let dof = cells - 1;
    let critical_value = chi_squared_quantile(0.95, dof);
    Ok(UniformityVerdict {
        statistic,
        degrees_of_freedom: dof,
        critical_value,
        p_value: chi_squared_sf(statistic, dof),
        uniform_at_5pct: statistic < critical_value,
    })
}

fn bin_index(value: f64, extent: f64, bins: usize) -> usize {
    let b = libm::floor(value / extent * bins as f64);
    if b <= 0.0 {
        0
    } else {
        (b as usize).min(bins - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PlantInstance, Provenance};
    use alloc::vec::Vec;

    fn field_from(points: &[(f64, f64)]) -> WeedField {
        let plants = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| PlantInstance::weed(i as u64, x, y))
            .collect();
        WeedField::new(1.3, 20.0, 3, plants, Provenance::Ingested).unwrap()
    }

    #[test]
    fn equal_counts_give_zero_statistic() {
        // 4x2 grid, 5 weeds at each cell center.
        let mut pts = Vec::new();
        for bx in 0..4 {
            for by in 0..2 {
                for _ in 0..5 {
                    pts.push((bx as f64 * 5.0 + 2.5, by as f64 * 0.65 + 0.3));
                }
            }
        }
        let v = uniformity_test(&field_from(&pts), 4, 2).unwrap();
        assert_eq!(v.statistic, 0.0);
        assert_eq!(v.degrees_of_freedom, 7);
        assert!(v.uniform_at_5pct);
    }

    #[test]
    fn all_weeds_in_one_cell_is_not_uniform() {
        let pts: Vec<(f64, f64)> = (0..40).map(|i| (1.0 + i as f64 * 0.01, 0.1)).collect();
        let v = uniformity_test(&field_from(&pts), 4, 2).unwrap();
        // n * (cells - 1) = 40 * 7
        assert!((v.statistic - 280.0).abs() < 1e-9);
        assert!(!v.uniform_at_5pct);
        assert!((v.critical_value - 14.067).abs() < 1e-3);
    }

    #[test]
    fn too_few_weeds() {
        let pts: Vec<(f64, f64)> = (0..39).map(|i| (i as f64 * 0.5, 0.6)).collect();
        let err = uniformity_test(&field_from(&pts), 4, 2).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientData {
                required: 40,
                found: 39
            }
        );
    }

    #[test]
    fn single_cell_rejected() {
        let pts: Vec<(f64, f64)> = (0..40).map(|i| (i as f64 * 0.5, 0.6)).collect();
        assert!(uniformity_test(&field_from(&pts), 1, 1).is_err());
    }

    #[test]
    fn boundary_points_fall_in_last_bin() {
        assert_eq!(bin_index(20.0, 20.0, 4), 3);
        assert_eq!(bin_index(0.0, 20.0, 4), 0);
        assert_eq!(bin_index(1.3, 1.3, 2), 1);
    }
}
