//! Flat sectioned `key = value` configuration files.

use std::collections::BTreeMap;

use crate::error::CliError;

/// Known sections and the keys each accepts.
const SCHEMA: &[(&str, &[&str])] = &[
    ("model", &["kind", "mass", "max_frequency", "weight"]),
    ("target", &["profile", "dimension", "radius", "width", "gap"]),
    (
        "window",
        &[
            "t0",
            "half_span",
            "m_index",
            "omega_c",
            "mollifier_order",
            "mollifier_tau",
            "time_step",
            "coupling",
            "k_points",
            "freq_max",
            "freq_points",
            "time_points",
        ],
    ),
    ("sweep", &["axis", "values"]),
    ("correlator", &["dimension", "r_min", "r_max", "r_count", "dt"]),
    (
        "propagate",
        &[
            "state", "t0", "k_min", "k_max", "k_points", "k_center", "k_width", "x_min", "x_max", "x_count", "t_min",
            "t_max", "t_count",
        ],
    ),
    ("output", &["dir"]),
];

/// Parsed configuration: section → key → raw value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        let mut current: Option<String> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = n + 1;
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::config(format!("line {lineno}"), "unterminated section header"))?
                    .trim()
                    .to_string();
                if !SCHEMA.iter().any(|(s, _)| *s == name) {
                    return Err(CliError::config(name, "unknown section"));
                }
                cfg.sections.entry(name.clone()).or_default();
                current = Some(name);
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("line {lineno}"), "expected key = value"))?;
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            let section = current
                .clone()
                .ok_or_else(|| CliError::config(key.clone(), "key outside of any section"))?;
            let allowed = SCHEMA.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap_or(&[]);
            let field = format!("{section}.{key}");
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::config(field, "unknown key"));
            }
            let map = cfg.sections.get_mut(&section).expect("section registered above");
            if map.insert(key, value).is_some() {
                return Err(CliError::config(field, "duplicate key"));
            }
        }
        Ok(cfg)
    }

    pub fn has_section(&self, section: &str) -> bool {
        self.sections.contains_key(section)
    }

    pub fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section).and_then(|m| m.get(key)).map(String::as_str)
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl Into<String>) {
        self.sections.entry(section.to_string()).or_default().insert(key.to_string(), value.into());
    }

    pub fn require(&self, section: &str, key: &str) -> Result<&str, CliError> {
        self.raw(section, key).ok_or_else(|| CliError::config(format!("{section}.{key}"), "missing required key"))
    }

    pub fn f64_opt(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        match self.raw(section, key) {
            None => Ok(None),
            Some(v) if v.eq_ignore_ascii_case("auto") => Ok(None),
            Some(v) => parse_f64(v).map(Some).map_err(|m| CliError::config(format!("{section}.{key}"), m)),
        }
    }

    pub fn f64_or(&self, section: &str, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.f64_opt(section, key)?.unwrap_or(default))
    }

    pub fn f64_req(&self, section: &str, key: &str) -> Result<f64, CliError> {
        self.f64_opt(section, key)?
            .ok_or_else(|| CliError::config(format!("{section}.{key}"), "missing required key"))
    }

    pub fn usize_or(&self, section: &str, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(section, key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| CliError::config(format!("{section}.{key}"), format!("expected a non-negative integer, got '{v}'"))),
        }
    }

    pub fn f64_list(&self, section: &str, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(v) = self.raw(section, key) else { return Ok(None) };
        v.split(',')
            .map(|s| parse_f64(s.trim()).map_err(|m| CliError::config(format!("{section}.{key}"), m)))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    /// Canonical text form: sections and keys in sorted order.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (s, m) in &self.sections {
            out.push_str(&format!("[{s}]\n"));
            for (k, v) in m {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        out
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number, got '{s}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let c = Config::parse("# run\n[model]\nkind = schroedinger ; inline\nmass=2\n\n[window]\nt0 = 1.5\nomega_c = auto\n")
            .unwrap();
        assert_eq!(c.raw("model", "kind"), Some("schroedinger"));
        assert_eq!(c.f64_req("model", "mass").unwrap(), 2.0);
        assert_eq!(c.f64_opt("window", "omega_c").unwrap(), None);
        assert_eq!(c.f64_or("window", "t0", 0.0).unwrap(), 1.5);
    }

    #[test]
    fn rejects_bad_input() {
        for (text, field) in [
            ("[nope]\n", "nope"),
            ("[model]\ncolour = red\n", "model.colour"),
            ("kind = x\n", "kind"),
            ("[model]\nkind = a\nkind = b\n", "model.kind"),
            ("[model\n", "line 1"),
            ("[model]\njunk\n", "line 2"),
        ] {
            match Config::parse(text) {
                Err(CliError::Config { field: f, .. }) => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        let c = Config::parse("[window]\nt0 = abc\n").unwrap();
        assert!(c.f64_req("window", "t0").is_err());
        assert!(c.f64_req("window", "m_index").is_err());
    }

    #[test]
    fn lists_and_echo() {
        let c = Config::parse("[sweep]\nvalues = 1, 2.5,3\naxis = A\n").unwrap();
        assert_eq!(c.f64_list("sweep", "values").unwrap().unwrap(), vec![1.0, 2.5, 3.0]);
        assert_eq!(c.echo(), "[sweep]\naxis = A\nvalues = 1, 2.5,3\n");
    }
}
