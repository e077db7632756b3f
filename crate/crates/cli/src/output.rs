//! CSV writing with `#` metadata lines.

use std::fmt::Write;

/// `v` with `precision` significant digits, `nan`/`inf` spelled out.
pub fn float(v: f64, precision: usize) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.*e}", precision.saturating_sub(1))
    }
}

#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    /// Starts a file with the tool version line.
    pub fn new() -> Self {
        let mut csv = Self::default();
        csv.meta("tool", &format!("cppok {}", env!("CARGO_PKG_VERSION")));
        csv
    }

    pub fn meta(&mut self, key: &str, value: &str) {
        writeln!(self.text, "# {key}: {value}").unwrap();
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        let line: Vec<&str> = cells.iter().map(AsRef::as_ref).collect();
        writeln!(self.text, "{}", line.join(",")).unwrap();
    }

    pub fn finish(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-300, -7.25e12] {
            let s = float(v, 17);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(float(f64::NAN, 17), "nan");
        assert_eq!(float(0.5, 3), "5.00e-1");
    }

    #[test]
    fn metadata_precedes_rows() {
        let mut c = Csv::new();
        c.meta("seed", "7");
        c.row(&["t", "mean"]);
        let text = c.finish();
        assert!(text.starts_with("# tool: cppok "));
        assert!(text.ends_with("# seed: 7\nt,mean\n"));
    }
}
