//! Versioned CSV output to stdout or a file.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::CliError;

/// Opens `--out`; `-` is stdout.
pub fn open(out: &Path) -> Result<Box<dyn Write>, CliError> {
    if out.as_os_str() == "-" {
        Ok(Box::new(io::stdout().lock()))
    } else {
        Ok(Box::new(File::create(out)?))
    }
}

/// CSV writer preceded by a `# sorbd-<kind> v1` schema line.
pub struct Table {
    inner: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn new(out: &Path, kind: &str, header: &[&str]) -> Result<Self, CliError> {
        let mut w = open(out)?;
        writeln!(w, "# sorbd-{kind} v1")?;
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(header)?;
        Ok(Self { inner })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<(), CliError> {
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.inner.flush()?;
        Ok(())
    }
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, 6.02e23, -2.5e-300, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn file_output_has_schema_line_and_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut t = Table::new(&path, "test", &["a", "b"]).unwrap();
        t.row(&["x".into(), num(2.0)]).unwrap();
        t.finish().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "# sorbd-test v1\na,b\nx,2.0000000000000000e0\n");
    }
}
