use ncomplex::{Error, Tolerances};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub node_eps: Option<f64>,
    pub cmp_eps: Option<f64>,
    pub series_eps: Option<f64>,
    pub factor_tol: Option<f64>,
}

/// Contents of the optional `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let c: Config = serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))?;
        c.tolerances().map_err(|e| format!("invalid config: {e}"))?;
        Ok(c)
    }

    pub fn tolerances(&self) -> Result<Tolerances, Error> {
        let d = Tolerances::default();
        let o = &self.tolerances;
        Tolerances::new(
            o.node_eps.unwrap_or(d.node_eps),
            o.cmp_eps.unwrap_or(d.cmp_eps),
            o.series_eps.unwrap_or(d.series_eps),
            o.factor_tol.unwrap_or(d.factor_tol),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_overrides() {
        let c = Config::parse(r#"{"tolerances":{"node_eps":1e-8},"format":"json","seed":3}"#).unwrap();
        let t = c.tolerances().unwrap();
        assert_eq!(t.node_eps, 1e-8);
        assert_eq!(t.cmp_eps, Tolerances::default().cmp_eps);
        assert_eq!(c.format, Some(Format::Json));
        assert_eq!(c.seed, Some(3));
    }

    #[test]
    fn rejects_unknown_and_nonpositive() {
        assert!(Config::parse(r#"{"colour":1}"#).is_err());
        assert!(Config::parse(r#"{"tolerances":{"tol":1}}"#).is_err());
        assert!(Config::parse(r#"{"tolerances":{"cmp_eps":-1}}"#).is_err());
        assert!(Config::parse(r#"{"seed":-1}"#).is_err());
    }
}
