//! File formats: point-cloud CSV, diagram JSON, edge-list and pair CSVs.
//!
//! CSV writers may prepend `# key=value` lines echoing the run
//! configuration; readers skip lines starting with `#`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::barcode::MinimumSaddlePair;
use crate::error::{Error, Result};
use crate::types::{BoundingBox, NeighborGraph, PersistenceDiagram, PointCloud, ScalarField};

/// A point cloud read from CSV, with the values column if one was found.
#[derive(Debug, Clone)]
pub struct CloudFile {
    pub cloud: PointCloud,
    pub values: Option<ScalarField>,
}

/// Reads a point-cloud CSV with header `x0,...,x{D-1}`. Values are taken
/// from the column named `values_column`, or from an `f` column if present.
/// Other columns are ignored. Without `bbox`, the enclosing box of the
/// points is used.
pub fn read_cloud_csv(
    reader: impl Read,
    bbox: Option<BoundingBox>,
    values_column: Option<&str>,
) -> Result<CloudFile> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let dim = headers.iter().take_while(|h| h.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()).is_some()).count();
    for (d, h) in headers.iter().take(dim).enumerate() {
        if h != format!("x{d}") {
            return Err(Error::Config(format!("unexpected CSV column `{h}`, expected `x{d}`")));
        }
    }
    if dim == 0 {
        return Err(Error::Config("point CSV has no coordinate columns".into()));
    }
    let value_col = match values_column {
        Some(name) => Some(headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::Config(format!("point CSV has no column `{name}`"))
        })?),
        None => headers.iter().position(|h| h == "f"),
    };
    if value_col.is_some_and(|c| c < dim) {
        return Err(Error::Config("the values column cannot be a coordinate column".into()));
    }
    let mut coords = Vec::new();
    let mut values = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        for (col, field) in record.iter().enumerate() {
            if col >= dim && Some(col) != value_col {
                continue;
            }
            let x: f64 = field.parse().map_err(|_| {
                Error::Config(format!("row {row}, column {col}: `{field}` is not a number"))
            })?;
            if col < dim {
                coords.push(x);
            } else {
                values.push(x);
            }
        }
    }
    let bbox = match bbox {
        Some(b) => b,
        None => BoundingBox::enclosing(dim, &coords)?,
    };
    let cloud = PointCloud::new(dim, coords, bbox)?;
    let values = match value_col {
        Some(_) => Some(ScalarField::new(values)?),
        None => None,
    };
    Ok(CloudFile { cloud, values })
}

pub fn load_cloud_csv(path: &Path, bbox: Option<BoundingBox>, values_column: Option<&str>) -> Result<CloudFile> {
    read_cloud_csv(File::open(path)?, bbox, values_column)
}
/// Writes each entry of a config object as a `# key=value` line.
pub fn write_comments(w: &mut (impl Write + ?Sized), config: Option<&Value>) -> Result<()> {
    if let Some(Value::Object(map)) = config {
        for (k, v) in map {
            writeln!(w, "# {k}={v}")?;
        }
    }
    Ok(())
}

/// Writes the point-cloud CSV, with an `f` column when values are given.
pub fn write_cloud_csv(
    mut w: impl Write,
    cloud: &PointCloud,
    values: Option<&ScalarField>,
    config: Option<&Value>,
) -> Result<()> {
    write_comments(&mut w, config)?;
    let mut header: Vec<String> = (0..cloud.dim()).map(|d| format!("x{d}")).collect();
    if values.is_some() {
        header.push("f".into());
    }
    writeln!(w, "{}", header.join(","))?;
    for (i, p) in cloud.points().enumerate() {
        let mut row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        if let Some(v) = values {
            row.push(v.value(i).to_string());
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DiagramFile<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<&'a Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a Value>,
    bars: &'a [crate::types::Bar],
}

/// Diagram JSON; `config` is written alongside `bars` for provenance.
pub fn write_diagram_json(
    w: impl Write,
    diagram: &PersistenceDiagram,
    config: Option<&Value>,
) -> Result<()> {
    write_diagram_json_with_report(w, diagram, config, None)
}

/// Diagram JSON with an extra `report` object.
pub fn write_diagram_json_with_report(
    mut w: impl Write,
    diagram: &PersistenceDiagram,
    config: Option<&Value>,
    report: Option<&Value>,
) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, &DiagramFile { config, report, bars: &diagram.bars })?;
    writeln!(w)?;
    Ok(())
}

pub fn read_diagram_json(reader: impl Read) -> Result<PersistenceDiagram> {
    let diagram: PersistenceDiagram = serde_json::from_reader(reader)?;
    Ok(crate::types::canonicalize(diagram))
}

pub fn load_diagram_json(path: &Path) -> Result<PersistenceDiagram> {
    read_diagram_json(File::open(path)?)
}

/// Edge list CSV with header `u,v`, sorted.
pub fn write_edges_csv(mut w: impl Write, graph: &NeighborGraph, config: Option<&Value>) -> Result<()> {
    write_comments(&mut w, config)?;
    writeln!(w, "u,v")?;
    for (u, v) in graph.sorted_edges() {
        writeln!(w, "{u},{v}")?;
    }
    Ok(())
}

/// Minimum/saddle pairs: coordinates of both points, then birth and death.
pub fn write_pairs_csv(
    mut w: impl Write,
    pairs: &[MinimumSaddlePair],
    dim: usize,
    config: Option<&Value>,
) -> Result<()> {
    write_comments(&mut w, config)?;
    let mut header: Vec<String> = (0..dim).map(|d| format!("min_x{d}")).collect();
    header.extend((0..dim).map(|d| format!("saddle_x{d}")));
    header.extend(["birth".into(), "death".into()]);
    writeln!(w, "{}", header.join(","))?;
    for p in pairs {
        let row: Vec<String> = p
            .min_point
            .iter()
            .chain(&p.saddle_point)
            .chain([&p.birth, &p.death])
            .map(|x| x.to_string())
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Births of degree-1 classes, one per line under header `birth`.
pub fn write_births_csv(mut w: impl Write, births: &[f64], config: Option<&Value>) -> Result<()> {
    write_comments(&mut w, config)?;
    writeln!(w, "birth")?;
    for b in births {
        writeln!(w, "{b}")?;
    }
    Ok(())
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}
