//! Key/value records printed by every command.

use std::fmt::Write;

use apollonian::Mat2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Tabular,
}

/// Seventeen significant digits, enough to round-trip an `f64`.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Default)]
pub struct Record {
    entries: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.text(key, num(value))
    }

    pub fn pair(&mut self, key: &str, p: [f64; 2]) -> &mut Self {
        self.num(format!("{key}.x1"), p[0])
            .num(format!("{key}.x2"), p[1])
    }

    pub fn matrix(&mut self, key: &str, m: &Mat2) -> &mut Self {
        for (i, row) in m.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                self.num(format!("{key}.{}{}", i + 1, k + 1), *v);
            }
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k:<width$} = {v}");
                }
            }
            Format::Tabular => {
                out.push_str("key\tvalue\n");
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k}\t{v}");
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [std::f64::consts::LN_2, 1.0 / 3.0, -2.828125, 1e-300] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn formats() {
        let mut r = Record::new();
        r.num("a", 0.5).text("long.key", "x");
        assert_eq!(
            r.render(Format::Text),
            "a        = 5.0000000000000000e-1\nlong.key = x\n"
        );
        assert_eq!(
            r.render(Format::Tabular),
            "key\tvalue\na\t5.0000000000000000e-1\nlong.key\tx\n"
        );
    }
}
