use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::surface::{Geometry, RuledSurfaceSpec, SampleTable, MAX_SAMPLES};
use crate::Vec3;

/// Smallest sample count accepted in surface files.
pub const MIN_FILE_SAMPLES: usize = 64;

const CSV_HEADER: [&str; 7] = ["u", "fx", "fy", "fz", "qx", "qy", "qz"];

fn default_u() -> String {
    "u".into()
}

fn default_s() -> String {
    "s".into()
}

fn default_phi() -> String {
    "0".into()
}

/// JSON surface description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceFile {
    Analytic {
        #[serde(default = "default_u")]
        param: String,
        base: [String; 3],
        director: [String; 3],
        range: [f64; 2],
        samples: usize,
    },
    Sampled {
        /// CSV file, relative to the JSON file's directory.
        path: String,
    },
    Builtin {
        name: String,
    },
    Curvatures {
        #[serde(default = "default_s")]
        param: String,
        k1: String,
        k2: String,
        #[serde(default = "default_phi")]
        phi: String,
        range: [f64; 2],
        samples: usize,
    },
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_FILE_SAMPLES {
        return Err(Error::InvalidSurface(format!(
            "samples = {samples}, at least {MIN_FILE_SAMPLES} required"
        )));
    }
    if samples > MAX_SAMPLES {
        return Err(Error::InvalidSurface(format!(
            "samples = {samples} exceeds the limit of {MAX_SAMPLES}"
        )));
    }
    Ok(())
}

impl SurfaceFile {
    pub fn from_json(text: &str) -> Result<SurfaceFile> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the surface. Relative CSV paths resolve against `base_dir`;
    /// without one, sampled files are rejected.
    pub fn to_spec(&self, base_dir: Option<&Path>) -> Result<RuledSurfaceSpec> {
        match self {
            SurfaceFile::Analytic {
                param,
                base,
                director,
                range,
                samples,
            } => {
                check_samples(*samples)?;
                RuledSurfaceSpec::from_strings(
                    param,
                    [&base[0], &base[1], &base[2]],
                    [&director[0], &director[1], &director[2]],
                    (range[0], range[1]),
                    *samples,
                )
            }
            SurfaceFile::Sampled { path } => {
                let Some(dir) = base_dir else {
                    return Err(Error::InvalidSurface("sampled surface needs a base directory".into()));
                };
                let p = dir.join(path);
                let file = fs::File::open(&p).map_err(|e| Error::io(&p, e))?;
                Ok(RuledSurfaceSpec::sampled(read_csv(file)?))
            }
            SurfaceFile::Builtin { name } => super::builtin(name),
            SurfaceFile::Curvatures {
                param,
                k1,
                k2,
                phi,
                range,
                samples,
            } => {
                check_samples(*samples)?;
                let p = |t: &str| Expr::parse_in(t, param).map_err(Error::from);
                super::from_curvatures(&p(k1)?, &p(k2)?, &p(phi)?, (range[0], range[1]), *samples)
            }
        }
    }
}

/// A resolved input with the digest recorded in reports.
#[derive(Debug, Clone)]
pub struct Input {
    pub spec: RuledSurfaceSpec,
    pub source: String,
    pub sha256: String,
}

/// Reads `builtin:NAME`, a `.csv` sample file or a JSON surface file.
pub fn resolve_input(arg: &str) -> Result<Input> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return Ok(Input {
            spec: super::builtin(name)?,
            source: arg.to_string(),
            sha256: super::builtin_digest(name)?,
        });
    }
    let path = Path::new(arg);
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let spec = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        RuledSurfaceSpec::sampled(read_csv(bytes.as_slice())?)
    } else {
        let text =
            std::str::from_utf8(&bytes).map_err(|_| Error::InvalidSurface("surface file is not UTF-8".into()))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        SurfaceFile::from_json(text)?.to_spec(Some(dir))?
    };
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg).to_string();
    let spec = match spec.name() {
        Some(_) => spec,
        None => spec.with_name(stem),
    };
    Ok(Input {
        spec,
        source: arg.to_string(),
        sha256,
    })
}

/// Loads a surface from a JSON or CSV file.
pub fn load_surface(path: impl AsRef<Path>) -> Result<RuledSurfaceSpec> {
    let p = path.as_ref();
    Ok(resolve_input(
        p.to_str()
            .ok_or_else(|| Error::InvalidSurface("path is not UTF-8".into()))?,
    )?
    .spec)
}

/// Parses a sample table with header `u,fx,fy,fz,qx,qy,qz`.
pub fn read_csv(reader: impl Read) -> Result<SampleTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::InvalidSurface(format!(
            "CSV header must be {}, found {}",
            CSV_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let (mut u, mut f, mut q) = (Vec::new(), Vec::new(), Vec::new());
    for (row, rec) in rdr.records().enumerate() {
        if row >= MAX_SAMPLES {
            return Err(Error::InvalidSurface(format!("more than {MAX_SAMPLES} rows")));
        }
        let rec = rec?;
        let mut v = [0.0; 7];
        for (k, slot) in v.iter_mut().enumerate() {
            let field = rec
                .get(k)
                .ok_or_else(|| Error::InvalidSurface(format!("row {}: missing column", row + 1)))?;
            *slot = field
                .parse()
                .map_err(|_| Error::InvalidSurface(format!("row {}: '{field}' is not a number", row + 1)))?;
        }
        u.push(v[0]);
        f.push(Vec3::new(v[1], v[2], v[3]));
        q.push(Vec3::new(v[4], v[5], v[6]));
    }
    SampleTable::new(&u, f, q)
}

/// Writes a sample table with 17 significant digits, enough to round-trip
/// every value exactly.
pub fn write_csv(table: &SampleTable, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    let g = table.grid();
    for i in 0..g.count {
        let (f, q) = (table.base()[i], table.director()[i]);
        let row = [g.at(i), f.x, f.y, f.z, q.x, q.y, q.z].map(|x| format!("{x:.16e}"));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

fn table_of(spec: &RuledSurfaceSpec) -> Result<SampleTable> {
    match spec.geometry() {
        Geometry::Sampled(t) => Ok(t.clone()),
        Geometry::Analytic { .. } => spec.to_table(spec.samples()),
    }
}

/// Writes `spec` as samples. A `.json` target produces a CSV next to it
/// plus a sampled surface file pointing at it; anything else is written as
/// CSV directly. Returns the files written.
pub fn write_surface_outputs(spec: &RuledSurfaceSpec, out: &Path) -> Result<Vec<PathBuf>> {
    let table = table_of(spec)?;
    let is_json = out.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let csv_path = if is_json {
        out.with_extension("csv")
    } else {
        out.to_path_buf()
    };
    let mut buf = Vec::new();
    write_csv(&table, &mut buf)?;
    fs::write(&csv_path, buf).map_err(|e| Error::io(&csv_path, e))?;
    let mut written = vec![csv_path.clone()];
    if is_json {
        let name = csv_path
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| Error::InvalidSurface("output path is not UTF-8".into()))?;
        let doc = SurfaceFile::Sampled { path: name.to_string() };
        let text = serde_json::to_string_pretty(&doc)? + "\n";
        fs::write(out, text).map_err(|e| Error::io(out, e))?;
        written.push(out.to_path_buf());
    }
    Ok(written)
}
