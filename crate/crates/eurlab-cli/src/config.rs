//! Run configuration shared by every subcommand, and the `# key=value`
//! metadata block that makes each output file self-describing and
//! reproducible.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OutputFormat::Csv => write!(f, "csv"),
            OutputFormat::Json => write!(f, "json"),
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Everything that determines a run. Identical configs produce byte-identical
/// outputs: all sampling is seeded and single-threaded, and floats print with
/// their shortest round-trip representation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub dim: usize,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub preset: Option<String>,
    pub samples: usize,
    pub seed: u64,
    pub s_grid: usize,
    pub out: String,
    pub format: OutputFormat,
    pub bound_offset: f64,
}

impl RunConfig {
    /// Leading comment block carried by every CSV output.
    pub fn metadata_block(&self, extra: &[(&str, String)]) -> String {
        let mut lines = vec![format!("# eurlab {}", self.command)];
        lines.push(format!("# command={}", self.command));
        lines.push(format!("# dim={}", self.dim));
        if let Some(g) = self.gamma {
            lines.push(format!("# gamma={g}"));
        }
        if let Some(a) = self.alpha {
            lines.push(format!("# alpha={a}"));
        }
        if let Some(p) = &self.preset {
            lines.push(format!("# preset={p}"));
        }
        lines.push(format!("# samples={}", self.samples));
        lines.push(format!("# seed={}", self.seed));
        lines.push(format!("# s_grid={}", self.s_grid));
        lines.push(format!("# out={}", self.out));
        lines.push(format!("# format={}", self.format));
        lines.push(format!("# bound_offset={}", self.bound_offset));
        for (key, value) in extra {
            lines.push(format!("# {key}={value}"));
        }
        lines.join("\n") + "\n"
    }

    /// Rebuild a config from the metadata block of an output file.
    pub fn from_metadata(text: &str) -> Result<Self, String> {
        let mut map = BTreeMap::new();
        for line in text.lines() {
            let Some(rest) = line.strip_prefix("# ") else {
                continue;
            };
            if let Some((key, value)) = rest.split_once('=') {
                map.insert(key.to_string(), value.to_string());
            }
        }
        let get = |key: &str| {
            map.get(key)
                .cloned()
                .ok_or_else(|| format!("metadata key `{key}` missing"))
        };
        let parse_f64 = |key: &str| -> Result<Option<f64>, String> {
            map.get(key)
                .map(|v| v.parse::<f64>().map_err(|e| format!("{key}: {e}")))
                .transpose()
        };
        Ok(RunConfig {
            command: get("command")?,
            dim: get("dim")?.parse().map_err(|e| format!("dim: {e}"))?,
            gamma: parse_f64("gamma")?,
            alpha: parse_f64("alpha")?,
            preset: map.get("preset").cloned(),
            samples: get("samples")?
                .parse()
                .map_err(|e| format!("samples: {e}"))?,
            seed: get("seed")?.parse().map_err(|e| format!("seed: {e}"))?,
            s_grid: get("s_grid")?.parse().map_err(|e| format!("s_grid: {e}"))?,
            out: get("out")?,
            format: get("format")?.parse()?,
            bound_offset: get("bound_offset")?
                .parse()
                .map_err(|e| format!("bound_offset: {e}"))?,
        })
    }
}
