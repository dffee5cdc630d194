use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "testlab", version, about = "Static testability analysis for Java classes")]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Metric manifest file; the built-in manifest is used otherwise.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    /// Text file of `key = value` lines supplying any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Log progress to standard error (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure every class of a Java project.
    Extract(ExtractArgs),
    /// Turn coverage reports into testability labels.
    Label(LabelArgs),
    /// Build a training/test dataset from features and labels.
    Prepare(PrepareArgs),
    /// Fit the voting ensemble.
    Train(TrainArgs),
    /// Score a model on a dataset split.
    Eval(EvalArgs),
    /// Estimate the testability of project classes.
    Predict(PredictArgs),
    /// Permutation importance and correlation report.
    Importance(ImportanceArgs),
    /// Reusability, functionality, extendibility and modularity.
    Quality(QualityArgs),
    /// Run the whole pipeline on the bundled sample project.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub project: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the manifest in use to this file.
    #[arg(long)]
    pub manifest_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    #[arg(long)]
    pub coverage: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// `source = target` column renames for foreign report layouts.
    #[arg(long)]
    pub mapping: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long, default_value = "DS1")]
    pub variant: String,
    /// Output directory for dataset.csv, scaler.json and drop_report.txt.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0.7)]
    pub train_fraction: f64,
    #[arg(long, default_value_t = 20)]
    pub lof_k: usize,
    #[arg(long, default_value_t = 1.5)]
    pub lof_threshold: f64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Scaler written by `prepare`; defaults to scaler.json beside the dataset.
    #[arg(long)]
    pub scaler: Option<PathBuf>,
    /// Grid file (JSON), or `full` / `best` for the built-in grids.
    #[arg(long)]
    pub grid: Option<String>,
    /// Where to write the cross-validation table when a grid is searched.
    #[arg(long)]
    pub tuning_report: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    /// `test` or `train`.
    #[arg(long, default_value = "test")]
    pub split: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub project: PathBuf,
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    pub class: Option<String>,
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImportanceArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub repeats: usize,
    #[arg(long, default_value_t = 15)]
    pub top: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct QualityArgs {
    #[arg(long)]
    pub project: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, default_value = "testlab-demo")]
    pub out: PathBuf,
}

/// Flags spelled out in `argv`, for deciding which config entries apply.
fn present_flags(argv: &[String]) -> Vec<String> {
    argv.iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect()
}

/// Location of `--config` in raw arguments, before full parsing.
pub fn config_path(argv: &[String]) -> Option<PathBuf> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if let Some(v) = a.strip_prefix("--config=") {
            Some(PathBuf::from(v))
        } else if a == "--config" {
            argv.get(i + 1).map(PathBuf::from)
        } else {
            None
        }
    })
}

#[derive(Debug, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub reason: String,
}

/// Appends `--key value` for each config entry not already given on the
/// command line. `true` becomes a bare flag and `false` is dropped.
pub fn apply_config(argv: &[String], text: &str) -> Result<Vec<String>, ConfigError> {
    let present = present_flags(argv);
    let mut out = argv.to_vec();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError { line: i + 1, reason: format!("expected `key = value`, found `{line}`") })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if key.is_empty() {
            return Err(ConfigError { line: i + 1, reason: "empty key".into() });
        }
        if key == "config" || present.contains(&key) {
            continue;
        }
        match value {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => {
                out.push(format!("--{key}"));
                out.push(value.to_string());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn config_fills_missing_flags_only() {
        let a = argv("testlab train --seed 3 --config c.txt");
        let text = "# comment\nseed = 9\ndataset = d.csv\nout=model.json\n";
        let expanded = apply_config(&a, text).unwrap();
        assert_eq!(expanded, argv("testlab train --seed 3 --config c.txt --dataset d.csv --out model.json"));
    }

    #[test]
    fn booleans_and_underscores() {
        let expanded = apply_config(&argv("testlab predict"), "all = true\nlof_k = 5\nverbose = false").unwrap();
        assert_eq!(expanded, argv("testlab predict --all --lof-k 5"));
    }

    #[test]
    fn malformed_line_is_reported() {
        let err = apply_config(&argv("testlab"), "\nseed 4").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn finds_config_path() {
        assert_eq!(config_path(&argv("testlab demo --config x.cfg")), Some(PathBuf::from("x.cfg")));
        assert_eq!(config_path(&argv("testlab --config=y.cfg demo")), Some(PathBuf::from("y.cfg")));
        assert_eq!(config_path(&argv("testlab demo")), None);
    }

    #[test]
    fn parses_subcommands() {
        use clap::Parser;
        let cli = Cli::try_parse_from(argv("testlab --seed 5 quality --project p --out q.csv")).unwrap();
        assert_eq!(cli.seed, 5);
        assert!(matches!(cli.command, Command::Quality(_)));
        assert!(Cli::try_parse_from(argv("testlab predict --model m --project p")).is_err());
    }
}
