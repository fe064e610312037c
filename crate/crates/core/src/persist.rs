//! Model persistence: a JSON header plus one CSV per plane in a directory.
//!
//! Plane files are named `plane_i<input>_c<cell>.csv` with 1-based indices.
//! Values are written with shortest-round-trip formatting so a reloaded
//! classic or fast model reproduces its predictions bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alm::{AlmConfig, AlmModel, Backend, PartitionScheme, Plane};
use crate::classic::IdsPlane;
use crate::crossbar::{CrossbarPlane, VectorRow};
use crate::error::{Error, Result};
use crate::fast::DescribingVectors;
use crate::quant::Domain;

#[derive(Debug, Serialize, Deserialize)]
struct ModelHeader {
    config: AlmConfig,
    cuts: Vec<Vec<f64>>,
    input_domains: Vec<Domain>,
    output_domain: Domain,
    planes_per_input: Vec<usize>,
}

fn plane_file(i: usize, cell: usize) -> String {
    format!("plane_i{}_c{}.csv", i + 1, cell + 1)
}

fn write_rows(path: &Path, rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    for row in rows {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        rows.push(row.map_err(|e| {
            Error::Parse(format!("{}:{}: {e}", path.display(), lineno + 1))
        })?);
    }
    Ok(rows)
}

/// Plane dump rows in the backend's CSV layout.
pub fn plane_rows(plane: &Plane) -> Vec<Vec<f64>> {
    match plane {
        // rsn_y rows by rsn_x columns, first row = output level 1
        Plane::Classic(p) => {
            let res = p.resolution();
            (1..=res.rsn_y)
                .map(|y| {
                    (1..=res.rsn_x)
                        .map(|x| p.darkness(x, y).expect("grid indices are in range"))
                        .collect()
                })
                .collect()
        }
        // three rows: lower bound, upper bound, narrow path
        Plane::Fast(v) => vec![v.lower().to_vec(), v.upper().to_vec(), v.narrow().to_vec()],
        // three rows of memristance in ohms: upper, lower, narrow
        Plane::Crossbar(c) => VectorRow::ALL
            .iter()
            .map(|&row| {
                (1..=c.resolution().rsn_x)
                    .map(|col| c.cell_resistance(row, col).expect("column in range"))
                    .collect()
            })
            .collect(),
    }
}

/// Write `model` into `dir` (created if missing).
pub fn save_model(model: &AlmModel, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let header = ModelHeader {
        config: model.config.clone(),
        cuts: model.scheme.cuts().to_vec(),
        input_domains: model.input_domains.clone(),
        output_domain: model.output_domain,
        planes_per_input: (0..model.dims())
            .map(|i| model.planes_for_input(i).len())
            .collect(),
    };
    let json = serde_json::to_string_pretty(&header)
        .map_err(|e| Error::Parse(format!("header encode: {e}")))?;
    fs::write(dir.join("model.json"), json)?;
    for i in 0..model.dims() {
        for (cell, plane) in model.planes_for_input(i).iter().enumerate() {
            write_rows(&dir.join(plane_file(i, cell)), &plane_rows(plane))?;
        }
    }
    Ok(())
}

fn plane_from_rows(
    config: &AlmConfig,
    input_domain: Domain,
    output_domain: Domain,
    rows: Vec<Vec<f64>>,
    path: &Path,
) -> Result<Plane> {
    let res = config.resolution;
    let bad = |msg: String| Error::Parse(format!("{}: {msg}", path.display()));
    match config.backend {
        Backend::Classic => {
            if rows.len() != res.rsn_y as usize
                || rows.iter().any(|r| r.len() != res.rsn_x as usize)
            {
                return Err(bad(format!(
                    "expected {} rows x {} columns",
                    res.rsn_y, res.rsn_x
                )));
            }
            let shape = match config.kernel {
                Some(s) => s,
                None => crate::kernel::KernelShape::gaussian(config.fast.sigma)?,
            };
            let mut plane =
                IdsPlane::new(res, input_domain, output_domain, shape, config.spread_threshold)?;
            for (y, row) in rows.iter().enumerate() {
                for (x, &d) in row.iter().enumerate() {
                    plane.set_darkness(x as u32 + 1, y as u32 + 1, d)?;
                }
            }
            Ok(Plane::Classic(plane))
        }
        Backend::Fast => {
            if rows.len() != 3 || rows.iter().any(|r| r.len() != res.rsn_x as usize) {
                return Err(bad(format!("expected 3 rows x {} columns", res.rsn_x)));
            }
            let mut it = rows.into_iter();
            let (lower, upper, narrow) =
                (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
            Ok(Plane::Fast(DescribingVectors::from_parts(
                res,
                config.fast,
                input_domain,
                output_domain,
                lower,
                upper,
                narrow,
            )?))
        }
        Backend::Crossbar => {
            if rows.len() != 3 || rows.iter().any(|r| r.len() != res.rsn_x as usize) {
                return Err(bad(format!("expected 3 rows x {} columns", res.rsn_x)));
            }
            let circuit = config.circuit.unwrap_or_else(|| {
                crate::crossbar::CircuitParams::standard(
                    &config.device,
                    config.fast.alpha1,
                    config.fast.alpha2,
                )
            });
            let mut plane =
                CrossbarPlane::new(res, config.device, circuit, input_domain, output_domain)?;
            for (r, row) in VectorRow::ALL.iter().zip(&rows) {
                for (col, &ohms) in row.iter().enumerate() {
                    plane.set_cell_resistance(*r, col as u32 + 1, ohms)?;
                }
            }
            Ok(Plane::Crossbar(plane))
        }
    }
}

/// Load a model previously written by [`save_model`].
pub fn load_model(dir: &Path) -> Result<AlmModel> {
    let header_path = dir.join("model.json");
    let json = fs::read_to_string(&header_path)?;
    let header: ModelHeader = serde_json::from_str(&json)
        .map_err(|e| Error::Parse(format!("{}: {e}", header_path.display())))?;
    let scheme = PartitionScheme::from_cuts(header.cuts)?;
    let dims = scheme.dims();
    if header.input_domains.len() != dims || header.planes_per_input.len() != dims {
        return Err(Error::Parse(format!(
            "{}: header is inconsistent",
            header_path.display()
        )));
    }
    let mut planes = Vec::with_capacity(dims);
    for i in 0..dims {
        let mut row = Vec::with_capacity(header.planes_per_input[i]);
        for cell in 0..header.planes_per_input[i] {
            let path = dir.join(plane_file(i, cell));
            if !path.exists() {
                return Err(Error::Input(format!("missing plane file {}", path.display())));
            }
            let rows = read_rows(&path)?;
            row.push(plane_from_rows(
                &header.config,
                header.input_domains[i],
                header.output_domain,
                rows,
                &path,
            )?);
        }
        planes.push(row);
    }
    Ok(AlmModel::from_parts(
        header.config,
        scheme,
        header.input_domains,
        header.output_domain,
        planes,
    ))
}
