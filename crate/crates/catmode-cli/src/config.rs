//! Run configuration: built-in defaults, the `CATMODE_QUAD_PANELS`
//! environment override, an optional flat `key = value` config file,
//! and command-line flags, in that order of precedence (later wins).

use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct Settings {
    pub b: f64,
    pub h: f64,
    pub length: f64,
    pub mass: f64,
    pub gravity: f64,
    pub basis_size: usize,
    pub panels: usize,
    pub order: usize,
    pub samples: usize,
    pub links: usize,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

/// The optional-valued layer that flags and config files both fill.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub b: Option<f64>,
    pub h: Option<f64>,
    pub length: Option<f64>,
    pub mass: Option<f64>,
    pub gravity: Option<f64>,
    pub basis_size: Option<usize>,
    pub panels: Option<usize>,
    pub order: Option<usize>,
    pub samples: Option<usize>,
    pub links: Option<usize>,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
}

impl Overrides {
    fn apply(&mut self, other: &Overrides) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() {
                    self.$field = other.$field.clone();
                })*
            };
        }
        take!(b, h, length, mass, gravity, basis_size, panels, order, samples, links, format, output);
    }
}

/// Parse a flat config file: one `key = value` per line, `#` comments.
/// Keys mirror the long flag names.
pub fn parse_config_file(path: &Path) -> Result<Overrides, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut over = Overrides::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |e: &dyn std::fmt::Display| format!("line {}: bad {key}: {e}", lineno + 1);
        match key {
            "b" => over.b = Some(value.parse().map_err(|e| bad(&e))?),
            "h" => over.h = Some(value.parse().map_err(|e| bad(&e))?),
            "length" => over.length = Some(value.parse().map_err(|e| bad(&e))?),
            "mass" => over.mass = Some(value.parse().map_err(|e| bad(&e))?),
            "gravity" => over.gravity = Some(value.parse().map_err(|e| bad(&e))?),
            "N" => over.basis_size = Some(value.parse().map_err(|e| bad(&e))?),
            "panels" => over.panels = Some(value.parse().map_err(|e| bad(&e))?),
            "order" => over.order = Some(value.parse().map_err(|e| bad(&e))?),
            "samples" => over.samples = Some(value.parse().map_err(|e| bad(&e))?),
            "links" => over.links = Some(value.parse().map_err(|e| bad(&e))?),
            "format" => {
                over.format = Some(match value {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    other => return Err(format!("line {}: unknown format {other}", lineno + 1)),
                })
            }
            "output" => over.output = Some(PathBuf::from(value)),
            other => return Err(format!("line {}: unknown key {other}", lineno + 1)),
        }
    }
    Ok(over)
}

/// Merge defaults ← environment ← config file ← flags.
pub fn resolve(
    config_path: Option<&Path>,
    flags: &Overrides,
) -> Result<Settings, String> {
    let mut layered = Overrides::default();
    if let Some(path) = config_path {
        layered.apply(&parse_config_file(path)?);
    }
    layered.apply(flags);

    let env_panels = match std::env::var("CATMODE_QUAD_PANELS") {
        Ok(text) => Some(
            text.parse::<usize>()
                .map_err(|e| format!("bad CATMODE_QUAD_PANELS={text}: {e}"))?,
        ),
        Err(_) => None,
    };

    let b = layered
        .b
        .ok_or_else(|| "missing required parameter: --b (or b= in config)".to_string())?;
    Ok(Settings {
        b,
        h: layered.h.unwrap_or(0.0),
        length: layered.length.unwrap_or(1.0),
        mass: layered.mass.unwrap_or(1.0),
        gravity: layered.gravity.unwrap_or(1.0),
        basis_size: layered.basis_size.unwrap_or(4),
        panels: layered
            .panels
            .or(env_panels)
            .unwrap_or(catmode::quadrature::DEFAULT_PANELS),
        order: layered
            .order
            .unwrap_or(catmode::quadrature::DEFAULT_NODES_PER_PANEL),
        samples: layered.samples.unwrap_or(401),
        links: layered.links.unwrap_or(200),
        format: layered.format.unwrap_or(OutputFormat::Json),
        output: layered.output,
    })
}

impl Settings {
    pub fn geometry(&self) -> Result<catmode::equilibrium::SpanGeometry, catmode::Error> {
        catmode::equilibrium::SpanGeometry::with_all(
            self.b,
            self.h,
            self.length,
            self.mass,
            self.gravity,
        )
    }

    pub fn rule(&self) -> Result<catmode::quadrature::QuadratureRule, catmode::Error> {
        catmode::quadrature::QuadratureRule::new(self.panels, self.order)
    }
}
