//! Command-line arguments. A parsed [`RunConfig`] is echoed verbatim in
//! every emitted record.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[command(
    name = "symseq",
    version,
    about = "Norms, Köthe duals and Schur multipliers on finite symmetric sequence spaces"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Override the number of starts of the search budget.
    #[arg(long, global = true)]
    pub starts: Option<usize>,
    /// Override the number of iterations per start.
    #[arg(long, global = true)]
    pub iters: Option<usize>,
    /// Output format; `triangle-growth` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// |x|_E.
    Norm {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        vector: VecSource,
    },
    /// |y|_{E^x}, the Köthe dual norm of E.
    Dualnorm {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        vector: VecSource,
        /// Skip closed forms.
        #[arg(long)]
        force_numeric: bool,
    },
    /// |x|_{E^F}, the generalized Köthe dual norm.
    Gendualnorm {
        /// `E,F`.
        #[arg(long)]
        pair: String,
        #[command(flatten)]
        vector: VecSource,
        #[arg(long)]
        force_numeric: bool,
    },
    /// |A|_{E->F}.
    Opnorm {
        #[arg(long)]
        pair: String,
        #[command(flatten)]
        matrix: MatSource,
        #[arg(long)]
        force_numeric: bool,
    },
    /// Schur-multiplier norm |M|_{(E,F)}.
    Multnorm {
        #[arg(long)]
        pair: String,
        #[command(flatten)]
        matrix: MatSource,
        /// Random test matrices for the sampled lower bound.
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// gamma_2(M) with primal and dual certificates.
    Gamma2 {
        #[command(flatten)]
        matrix: MatSource,
    },
    /// Lozanovskii split of u, or the l_p split of z when --p is given.
    Factorize {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        vector: VecSource,
        #[arg(long)]
        p: Option<f64>,
        /// Allowed excess of the norm product.
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
    /// Multiplier norms of the main triangle projection with a log fit.
    TriangleGrowth {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value_t = GrowthModeArg::Gamma2)]
        mode: GrowthModeArg,
        /// Exponents for `--mode ratio`.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        random_signs: usize,
    },
    /// Injective, projective or gamma_2* norm of a tensor in E (x) F.
    TensorNorm {
        #[arg(long)]
        pair: String,
        #[command(flatten)]
        matrix: MatSource,
        #[arg(long, value_enum)]
        norm: TensorNormArg,
    },
    /// Embedding audit of a multiplier, or the matrix-norm axiom audit.
    Audit {
        #[arg(long, value_enum)]
        kind: AuditKind,
        #[arg(long)]
        pair: String,
        /// Multiplier for the embedding audit.
        #[command(flatten)]
        matrix: OptMatSource,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        /// Tensor norm for the axiom audit.
        #[arg(long, value_enum, default_value_t = TensorNormArg::Injective)]
        norm: TensorNormArg,
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Runs every job of a manifest and prints one summary.
    Batch {
        #[arg(long)]
        manifest: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::Dualnorm { .. } => "dualnorm",
            Command::Gendualnorm { .. } => "gendualnorm",
            Command::Opnorm { .. } => "opnorm",
            Command::Multnorm { .. } => "multnorm",
            Command::Gamma2 { .. } => "gamma2",
            Command::Factorize { .. } => "factorize",
            Command::TriangleGrowth { .. } => "triangle-growth",
            Command::TensorNorm { .. } => "tensor-norm",
            Command::Audit { .. } => "audit",
            Command::Batch { .. } => "batch",
        }
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[group(required = true, multiple = false)]
pub struct VecSource {
    /// Inline entries, e.g. `3,4`.
    #[arg(long = "vec", allow_hyphen_values = true)]
    pub inline: Option<String>,
    /// JSON array or CSV file.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[group(required = true, multiple = false)]
pub struct MatSource {
    /// JSON 2-D array or row-major CSV file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Inline rows, e.g. `1,2;3,4`.
    #[arg(long, allow_hyphen_values = true)]
    pub rows: Option<String>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[group(required = false, multiple = false)]
pub struct OptMatSource {
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub rows: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthModeArg {
    Gamma2,
    Ratio,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorNormArg {
    Injective,
    Projective,
    Gamma2Star,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditKind {
    Embedding,
    Axioms,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        RunConfig::command().debug_assert();
    }

    #[test]
    fn defaults_and_globals() {
        let c = RunConfig::try_parse_from(["symseq", "norm", "--space", "lp:2", "--vec", "-3,4"])
            .unwrap();
        assert_eq!(c.seed, 0);
        assert_eq!(c.format, None);
        match &c.command {
            Command::Norm { vector, .. } => assert_eq!(vector.inline.as_deref(), Some("-3,4")),
            other => panic!("{other:?}"),
        }
        let c = RunConfig::try_parse_from([
            "symseq",
            "triangle-growth",
            "--sizes",
            "2,4,8",
            "--seed",
            "7",
            "--format",
            "json",
        ])
        .unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.format, Some(Format::Json));
    }

    #[test]
    fn required_sources() {
        assert!(RunConfig::try_parse_from(["symseq", "norm", "--space", "lp:2"]).is_err());
        assert!(RunConfig::try_parse_from([
            "symseq", "gamma2", "--rows", "1", "--matrix", "m.csv"
        ])
        .is_err());
    }
}
