use std::io::{self, Write};
use std::path::Path;

/// Formats `x` with `digits` significant digits in plain decimal notation,
/// switching to exponent form for magnitudes below 1e-5 or above 1e17.
pub fn format_real(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-5..=17).contains(&exponent) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// Ordered JSON object writer; keeps key order stable and reals at a
/// fixed number of significant digits.
pub struct JsonObject {
    digits: usize,
    fields: Vec<(String, String)>,
}

impl JsonObject {
    pub fn new(digits: usize) -> Self {
        JsonObject {
            digits,
            fields: Vec::new(),
        }
    }

    fn push(&mut self, key: &str, raw: String) -> &mut Self {
        self.fields.push((key.to_string(), raw));
        self
    }

    pub fn real(&mut self, key: &str, x: f64) -> &mut Self {
        let raw = if x.is_finite() {
            format_real(x, self.digits)
        } else {
            "null".to_string()
        };
        self.push(key, raw)
    }

    pub fn int(&mut self, key: &str, n: impl Into<u64>) -> &mut Self {
        self.push(key, n.into().to_string())
    }

    pub fn boolean(&mut self, key: &str, b: bool) -> &mut Self {
        self.push(key, b.to_string())
    }

    pub fn string(&mut self, key: &str, s: &str) -> &mut Self {
        self.push(key, serde_json::to_string(s).expect("string serializes"))
    }

    pub fn reals(&mut self, key: &str, xs: &[f64]) -> &mut Self {
        let items: Vec<String> = xs.iter().map(|&x| format_real(x, self.digits)).collect();
        self.push(key, format!("[{}]", items.join(", ")))
    }

    pub fn objects(&mut self, key: &str, items: &[JsonObject]) -> &mut Self {
        if items.is_empty() {
            return self.push(key, "[]".into());
        }
        let body: Vec<String> = items.iter().map(|o| indent(&o.render(), "    ")).collect();
        self.push(key, format!("[\n{}\n  ]", body.join(",\n")))
    }

    pub fn render(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| format!("  {}: {}", serde_json::to_string(k).expect("key"), v))
            .collect();
        format!("{{\n{}\n}}", body.join(",\n"))
    }
}

fn indent(text: &str, pad: &str) -> String {
    text.lines()
        .map(|l| format!("{pad}{l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and a rename, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &[u8]) -> io::Result<()> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents)?;
            out.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(contents)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}

/// CSV text from a header and rows of already formatted cells.
pub fn csv_text(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| e.into_error())
}
