use serde::Serialize;

use crate::slant::{ClassificationReport, Tolerances};

pub const REPORT_SCHEMA: &str = "ruledgeo-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct Grid {
    pub s_start: f64,
    pub s_step: f64,
    pub samples: usize,
    pub trim: usize,
}

impl Grid {
    pub fn of(report: &ClassificationReport) -> Grid {
        Grid {
            s_start: report.s_start,
            s_step: report.s_step,
            samples: report.samples,
            trim: report.trim,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub input: String,
    pub input_sha256: String,
    pub grid: Grid,
    pub tolerances: Tolerances,
    pub tool: &'static str,
    pub tool_version: &'static str,
}

/// Report JSON: every report field at top level plus provenance.
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub schema: &'static str,
    #[serde(flatten)]
    pub report: ClassificationReport,
    pub provenance: Provenance,
}

impl ReportFile {
    pub fn new(report: ClassificationReport, input: &str, input_sha256: &str) -> ReportFile {
        let tolerances = report.tolerances;
        let grid = Grid::of(&report);
        ReportFile {
            schema: REPORT_SCHEMA,
            report,
            provenance: Provenance {
                input: input.to_string(),
                input_sha256: input_sha256.to_string(),
                grid,
                tolerances,
                tool: env!("CARGO_PKG_NAME"),
                tool_version: env!("CARGO_PKG_VERSION"),
            },
        }
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}
