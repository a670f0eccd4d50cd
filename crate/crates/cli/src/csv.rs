//! Self-describing CSV files.
//!
//! Layout: `#`-prefixed header lines, then one column-name row and data rows
//! in long format. The header carries the canonical config behind a `# | `
//! prefix so [`embedded_config`] can recover it. A file may hold several
//! tables, each introduced by a `# table: <name>` line.

use std::fmt::Write as _;

pub const FORMAT_VERSION: u32 = 1;
const CONFIG_PREFIX: &str = "# | ";

/// A column name with its unit.
#[derive(Debug, Clone, Copy)]
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
}

pub const fn col(name: &'static str, unit: &'static str) -> Column {
    Column { name, unit }
}

#[derive(Debug, Default)]
pub struct CsvDocument {
    text: String,
    config: Option<String>,
}

impl CsvDocument {
    pub fn new(content: &str) -> Self {
        let mut doc = Self::default();
        doc.meta("format", &format!("airyspdc-csv {FORMAT_VERSION}"));
        doc.meta("generator", concat!("airyspdc ", env!("CARGO_PKG_VERSION")));
        doc.meta("content", content);
        doc
    }

    pub fn meta(&mut self, key: &str, value: &str) {
        writeln!(self.text, "# {key}: {value}").unwrap();
    }

    pub fn meta_f64(&mut self, key: &str, value: f64) {
        self.meta(key, &fmt_f64(value));
    }

    /// Embeds the canonical TOML form of the config. It is written as the
    /// last header block, just before the first table.
    pub fn config(&mut self, toml_text: &str) {
        self.config = Some(toml_text.to_string());
    }

    fn flush_config(&mut self) {
        if let Some(cfg) = self.config.take() {
            self.text.push_str("# config:\n");
            for line in cfg.lines() {
                let prefixed = format!("{CONFIG_PREFIX}{line}");
                self.text.push_str(prefixed.trim_end());
                self.text.push('\n');
            }
        }
    }

    /// Starts a table: optional name line, units line, then the column row.
    pub fn table(&mut self, name: Option<&str>, normalization: &str, columns: &[Column]) {
        self.flush_config();
        if let Some(name) = name {
            self.meta("table", name);
        }
        self.meta("normalization", normalization);
        let units: Vec<String> = columns
            .iter()
            .map(|c| format!("{} [{}]", c.name, c.unit))
            .collect();
        self.meta("units", &units.join(", "));
        let names: Vec<&str> = columns.iter().map(|c| c.name).collect();
        self.text.push_str(&names.join(","));
        self.text.push('\n');
    }

    pub fn row(&mut self, values: &[f64]) {
        for (k, v) in values.iter().enumerate() {
            if k > 0 {
                self.text.push(',');
            }
            self.text.push_str(&fmt_f64(*v));
        }
        self.text.push('\n');
    }

    /// A row whose first field is text.
    pub fn labelled_row(&mut self, label: &str, value: f64) {
        writeln!(self.text, "{label},{}", fmt_f64(value)).unwrap();
    }

    pub fn into_string(mut self) -> String {
        self.flush_config();
        self.text
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// The config text embedded in a CSV header, if any.
pub fn embedded_config(csv: &str) -> Option<String> {
    let mut lines = csv.lines().take_while(|l| l.starts_with('#'));
    lines.by_ref().find(|l| *l == "# config:")?;
    let mut out = String::new();
    for l in lines {
        // blank config lines are written without the trailing space
        let Some(rest) = l
            .strip_prefix(CONFIG_PREFIX)
            .or_else(|| (l == CONFIG_PREFIX.trim_end()).then_some(""))
        else {
            break;
        };
        out.push_str(rest);
        out.push('\n');
    }
    Some(out)
}
