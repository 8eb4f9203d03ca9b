use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use qcalc::Real;
use serde::Serialize;

use crate::error::CliError;

/// Seventeen significant digits, enough to round-trip a binary64 value.
pub fn sci<R: Real>(v: &R) -> String {
    v.fmt_sci(17)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(w, value)?;
    Ok(())
}

/// Write `value` to `dir/name`, or to stdout when there is no output directory.
pub fn emit_json<T: Serialize + ?Sized>(
    dir: Option<&Path>,
    name: &str,
    value: &T,
) -> Result<(), CliError> {
    match dir {
        Some(d) => write_json(&d.join(name), value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}
