#![no_main]

use libfuzzer_sys::fuzz_target;
use ruledgeo::workbench::SurfaceFile;

const MAX_FUZZ_SAMPLES: usize = 4096;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = SurfaceFile::from_json(text) else {
        return;
    };
    let samples = match &file {
        SurfaceFile::Analytic { samples, .. } | SurfaceFile::Curvatures { samples, .. } => *samples,
        SurfaceFile::Sampled { .. } | SurfaceFile::Builtin { .. } => 0,
    };
    if samples > MAX_FUZZ_SAMPLES {
        return;
    }
    // no base directory: sampled files are rejected without touching disk
    let _ = file.to_spec(None);
});
