//! Field CSV.
//!
//! ```text
//! # lane_width_m=1.3,length_m=20,num_crop_rows=3[,lambda=10,seed=7]
//! id,kind,species,x_m,y_m,area_m2
//! ...
//! ```
//!
//! One record per plant, no column header, `.` as decimal point, LF line
//! endings. `lambda` and `seed` are present only for generated fields.
//! Records may come in any order; loading sorts them.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use weedplan_core::field::{PlantInstance, PlantKind, Provenance, WeedField};

use crate::error::{Error, Result};

pub fn load_field(path: impl AsRef<Path>) -> Result<WeedField> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_field(&text)
}

pub fn save_field(field: &WeedField, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = render_field(field)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn render_field(field: &WeedField) -> Result<String> {
    let mut out = String::new();
    write!(
        out,
        "# lane_width_m={},length_m={},num_crop_rows={}",
        field.lane_width_m(),
        field.length_m(),
        field.num_crop_rows()
    )
    .unwrap();
    if let Provenance::Generated { density, seed } = field.provenance() {
        write!(out, ",lambda={density},seed={seed}").unwrap();
    }
    out.push('\n');
    for p in field.plants() {
        if p.species.contains([',', '\n', '\r']) {
            return Err(Error::Format(format!(
                "species of plant {} contains a comma or line break",
                p.id
            )));
        }
        writeln!(
            out,
            "{},{},{},{},{},{}",
            p.id,
            p.kind.as_str(),
            p.species,
            p.x,
            p.y,
            p.area
        )
        .unwrap();
    }
    Ok(out)
}

struct Header {
    lane_width_m: f64,
    length_m: f64,
    num_crop_rows: u32,
    density: Option<f64>,
    seed: Option<u64>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str) -> Result<Header> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| parse_error(1, "expected header starting with `#`"))?;
    let (mut lane, mut length, mut rows, mut density, mut seed) = (None, None, None, None, None);
    for item in body.split(',') {
        let (key, value) = item
            .trim()
            .split_once('=')
            .ok_or_else(|| parse_error(1, format!("malformed header entry `{}`", item.trim())))?;
        let bad = |what: &str| parse_error(1, format!("invalid {what} `{value}`"));
        match key.trim() {
            "lane_width_m" => lane = Some(value.parse::<f64>().map_err(|_| bad("lane_width_m"))?),
            "length_m" => length = Some(value.parse::<f64>().map_err(|_| bad("length_m"))?),
            "num_crop_rows" => rows = Some(value.parse::<u32>().map_err(|_| bad("num_crop_rows"))?),
            "lambda" => density = Some(value.parse::<f64>().map_err(|_| bad("lambda"))?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("seed"))?),
            other => return Err(parse_error(1, format!("unknown header key `{other}`"))),
        }
    }
    let missing = |k: &str| parse_error(1, format!("header lacks `{k}`"));
    Ok(Header {
        lane_width_m: lane.ok_or_else(|| missing("lane_width_m"))?,
        length_m: length.ok_or_else(|| missing("length_m"))?,
        num_crop_rows: rows.ok_or_else(|| missing("num_crop_rows"))?,
        density,
        seed,
    })
}

pub fn parse_field(text: &str) -> Result<WeedField> {
    let mut lines = text.lines().enumerate();
    let header = match lines.next() {
        Some((_, l)) => parse_header(l.trim_end_matches('\r'))?,
        None => return Err(parse_error(1, "empty file")),
    };
    let provenance = match (header.density, header.seed) {
        (Some(density), Some(seed)) => Provenance::Generated { density, seed },
        (None, None) => Provenance::Ingested,
        _ => return Err(parse_error(1, "`lambda` and `seed` must appear together")),
    };

    let mut plants = Vec::new();
    let mut ids = HashSet::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(parse_error(
                line_no,
                format!("expected 6 columns, found {}", cols.len()),
            ));
        }
        let num = |i: usize, name: &str| -> Result<f64> {
            let v: f64 = cols[i]
                .trim()
                .parse()
                .map_err(|_| parse_error(line_no, format!("invalid {name} `{}`", cols[i])))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_error(line_no, format!("{name} must be finite")))
            }
        };
        let id: u64 = cols[0]
            .trim()
            .parse()
            .map_err(|_| parse_error(line_no, format!("invalid id `{}`", cols[0])))?;
        if !ids.insert(id) {
            return Err(parse_error(line_no, format!("duplicate plant id {id}")));
        }
        let kind: PlantKind = cols[1]
            .trim()
            .parse()
            .map_err(|_| parse_error(line_no, format!("invalid kind `{}`", cols[1])))?;
        let plant = PlantInstance {
            id,
            kind,
            species: cols[2].to_string(),
            x: num(3, "x_m")?,
            y: num(4, "y_m")?,
            area: num(5, "area_m2")?,
        };
        if !(0.0..=header.length_m).contains(&plant.x)
            || !(0.0..=header.lane_width_m).contains(&plant.y)
        {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "plant {id} at (x={}, y={}) lies outside the {} x {} m lane",
                    plant.x, plant.y, header.length_m, header.lane_width_m
                ),
            });
        }
        if plant.area < 0.0 {
            return Err(parse_error(line_no, "area_m2 must be >= 0"));
        }
        plants.push(plant);
    }

    Ok(WeedField::new(
        header.lane_width_m,
        header.length_m,
        header.num_crop_rows,
        plants,
        provenance,
    )?)
}
