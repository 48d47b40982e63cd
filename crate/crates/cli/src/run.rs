//! Executes one [`RunConfig`] and packages the result as a [`Record`].

use serde::{Deserialize, Serialize};

use symseq_core::kothe::{
    generalized_dual_norm, lozanovskii_factorize, lp_factorize, DualNormQuery, FactorizationCert,
};
use symseq_core::opnorm::{opnorm_estimate_with, OpnormOptions};
use symseq_core::schur::{
    embedding_audit, gamma2_norm, multiplier_lower_bound, EmbeddingAudit, MultiplierReport,
    GAMMA2_BUDGET,
};
use symseq_core::seqspace::{kothe_dual_norm_with, norm, DualOptions};
use symseq_core::tensor::{
    gamma2_star_upper, injective_norm, matrix_norm_axiom_audit, projective_norm_bounds, AxiomAudit,
    TensorElem, TensorNorm,
};
use symseq_core::triangle::{growth_experiment, GrowthCurve, GrowthMode};
use symseq_core::{Budget, Exponent, Mat, NormBounds, SpaceSpec};

use crate::config::{
    AuditKind, Command, GrowthModeArg, MatSource, OptMatSource, RunConfig, TensorNormArg, VecSource,
};
use crate::error::CliError;
use crate::input::{parse_list, parse_rows, read_matrix, read_vector};
use crate::spec::{parse_pair, parse_space};

pub const SCHEMA: u32 = 1;

/// Exit status for results carrying numerical flags.
pub const EXIT_FLAGGED: u8 = 2;
/// Exit status for input errors.
pub const EXIT_INPUT: u8 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub schema: u32,
    pub command: String,
    pub config: RunConfig,
    /// Canonical text of every space involved.
    pub spaces: Vec<String>,
    /// Budget actually used, if the command takes one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
    pub result: Output,
    pub exit: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Output {
    Value {
        value: f64,
    },
    Bounds {
        bounds: NormBounds,
    },
    Multiplier {
        route: MultiplierRoute,
        report: MultiplierReport,
    },
    Factorization {
        ratio: f64,
        cert: FactorizationCert,
    },
    Growth {
        curve: GrowthCurve,
    },
    Upper {
        #[serde(with = "symseq_core::serde_ext")]
        upper: f64,
    },
    Embedding {
        audit: EmbeddingAudit,
    },
    Axioms {
        audit: AxiomAudit,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierRoute {
    Gamma2,
    Sampled,
}

impl Output {
    fn flagged(&self) -> bool {
        match self {
            Output::Bounds { bounds } => bounds.has_flags(),
            Output::Multiplier { report, .. } => report.bounds.has_flags(),
            Output::Growth { curve } => !curve.under_resolved.is_empty(),
            _ => false,
        }
    }
}

fn budget(cfg: &RunConfig, default: Budget) -> Budget {
    Budget::new(
        cfg.starts.unwrap_or(default.starts),
        cfg.iters.unwrap_or(default.iters),
    )
}

fn space(text: &str) -> Result<SpaceSpec, CliError> {
    parse_space(text).map_err(|e| CliError::spec("--space", e))
}

fn pair(text: &str) -> Result<(SpaceSpec, SpaceSpec), CliError> {
    parse_pair(text).map_err(|e| CliError::spec("--pair", e))
}

fn exponent(flag: &str, v: Option<f64>) -> Result<Exponent, CliError> {
    let v = v.ok_or_else(|| CliError::Usage(format!("{flag} is required")))?;
    Ok(Exponent::new(v)?)
}

fn vector(src: &VecSource) -> Result<Vec<f64>, CliError> {
    match (&src.inline, &src.input) {
        (Some(t), _) => parse_list(t).map_err(|e| CliError::spec("--vec", e)),
        (None, Some(p)) => read_vector(p),
        (None, None) => Err(CliError::Usage(
            "a vector is required (--vec or --input)".into(),
        )),
    }
}

fn matrix(src: &MatSource) -> Result<Mat, CliError> {
    opt_matrix(&OptMatSource {
        matrix: src.matrix.clone(),
        rows: src.rows.clone(),
    })
}

fn opt_matrix(src: &OptMatSource) -> Result<Mat, CliError> {
    match (&src.rows, &src.matrix) {
        (Some(t), _) => parse_rows(t).map_err(|e| CliError::spec("--rows", e)),
        (None, Some(p)) => read_matrix(p),
        (None, None) => Err(CliError::Usage(
            "a matrix is required (--matrix or --rows)".into(),
        )),
    }
}

/// Runs a single (non-batch) command.
pub fn execute(cfg: &RunConfig) -> Result<Record, CliError> {
    let seed = cfg.seed;
    let mut spaces = Vec::new();
    let mut used = None;
    let result = match &cfg.command {
        Command::Norm {
            space: s,
            vector: v,
        } => {
            let e = space(s)?;
            spaces.push(e.to_string());
            Output::Value {
                value: norm(&e, &vector(v)?)?,
            }
        }
        Command::Dualnorm {
            space: s,
            vector: v,
            force_numeric,
        } => {
            let e = space(s)?;
            spaces.push(e.to_string());
            let b = budget(cfg, Budget::DUAL);
            used = Some(b);
            let opts = DualOptions {
                budget: b,
                seed,
                force_numeric: *force_numeric,
            };
            Output::Bounds {
                bounds: kothe_dual_norm_with(&e, &vector(v)?, &opts)?,
            }
        }
        Command::Gendualnorm {
            pair: p,
            vector: v,
            force_numeric,
        } => {
            let (e, f) = pair(p)?;
            spaces.extend([e.to_string(), f.to_string()]);
            let b = budget(cfg, Budget::DUAL);
            used = Some(b);
            let mut q = DualNormQuery::new(e, f, vector(v)?);
            q.budget = b;
            q.seed = seed;
            q.force_numeric = *force_numeric;
            Output::Bounds {
                bounds: generalized_dual_norm(&q)?,
            }
        }
        Command::Opnorm {
            pair: p,
            matrix: m,
            force_numeric,
        } => {
            let (e, f) = pair(p)?;
            spaces.extend([e.to_string(), f.to_string()]);
            let b = budget(cfg, Budget::OPNORM);
            used = Some(b);
            let opts = OpnormOptions {
                budget: b,
                seed,
                force_numeric: *force_numeric,
            };
            Output::Bounds {
                bounds: opnorm_estimate_with(&matrix(m)?, &e, &f, &opts)?,
            }
        }
        Command::Multnorm {
            pair: p,
            matrix: m,
            trials,
        } => {
            let (e, f) = pair(p)?;
            spaces.extend([e.to_string(), f.to_string()]);
            let m = matrix(m)?;
            if e.is_lp(2.0) && f.is_lp(2.0) {
                let b = budget(cfg, GAMMA2_BUDGET);
                used = Some(b);
                Output::Multiplier {
                    route: MultiplierRoute::Gamma2,
                    report: gamma2_norm(&m, b)?,
                }
            } else {
                Output::Multiplier {
                    route: MultiplierRoute::Sampled,
                    report: multiplier_lower_bound(&m, &e, &f, *trials, seed)?,
                }
            }
        }
        Command::Gamma2 { matrix: m } => {
            let b = budget(cfg, GAMMA2_BUDGET);
            used = Some(b);
            Output::Multiplier {
                route: MultiplierRoute::Gamma2,
                report: gamma2_norm(&matrix(m)?, b)?,
            }
        }
        Command::Factorize {
            space: s,
            vector: v,
            p,
            eps,
        } => {
            let e = space(s)?;
            spaces.push(e.to_string());
            let u = vector(v)?;
            let cert = match p {
                Some(p) => lp_factorize(&e, Exponent::new(*p)?, &u, *eps, seed)?,
                None => lozanovskii_factorize(&e, &u, *eps, seed)?,
            };
            Output::Factorization {
                ratio: cert.ratio(),
                cert,
            }
        }
        Command::TriangleGrowth {
            sizes,
            mode,
            p,
            q,
            random_signs,
        } => {
            let (mode, default) = match mode {
                GrowthModeArg::Gamma2 => (GrowthMode::Gamma2, GAMMA2_BUDGET),
                GrowthModeArg::Ratio => {
                    let (p, q) = (Exponent::new(*p)?, Exponent::new(*q)?);
                    spaces.extend([
                        SpaceSpec::lp_exp(p).to_string(),
                        SpaceSpec::lp_exp(q).to_string(),
                    ]);
                    let mode = GrowthMode::RatioPq {
                        p,
                        q,
                        random_signs: *random_signs,
                    };
                    (mode, Budget::OPNORM)
                }
            };
            let b = budget(cfg, default);
            used = Some(b);
            Output::Growth {
                curve: growth_experiment(sizes, mode, b, seed)?,
            }
        }
        Command::TensorNorm {
            pair: p,
            matrix: m,
            norm: which,
        } => {
            let (e, f) = pair(p)?;
            spaces.extend([e.to_string(), f.to_string()]);
            let b = budget(cfg, Budget::OPNORM);
            used = Some(b);
            let u = TensorElem::new(matrix(m)?, e, f)?;
            match which {
                TensorNormArg::Injective => Output::Bounds {
                    bounds: injective_norm(&u, b, seed)?,
                },
                TensorNormArg::Projective => Output::Bounds {
                    bounds: projective_norm_bounds(&u, b, seed)?,
                },
                TensorNormArg::Gamma2Star => Output::Upper {
                    upper: gamma2_star_upper(&u, b, seed)?,
                },
            }
        }
        Command::Audit {
            kind,
            pair: p,
            matrix: m,
            p: pe,
            q: qe,
            norm: which,
            trials,
        } => {
            let (e, f) = pair(p)?;
            spaces.extend([e.to_string(), f.to_string()]);
            match kind {
                AuditKind::Embedding => {
                    let (pe, qe) = (exponent("--p", *pe)?, exponent("--q", *qe)?);
                    let audit = embedding_audit(&opt_matrix(m)?, &e, &f, pe, qe, *trials, seed)?;
                    Output::Embedding { audit }
                }
                AuditKind::Axioms => {
                    let which = match which {
                        TensorNormArg::Injective => TensorNorm::Injective,
                        TensorNormArg::Projective => TensorNorm::Projective,
                        TensorNormArg::Gamma2Star => {
                            return Err(CliError::Usage(
                                "the axiom audit covers the injective and projective norms".into(),
                            ))
                        }
                    };
                    Output::Axioms {
                        audit: matrix_norm_axiom_audit(which, &e, &f, *trials, seed)?,
                    }
                }
            }
        }
        Command::Batch { .. } => {
            return Err(CliError::Usage("batch jobs cannot be nested".into()));
        }
    };
    let exit = if result.flagged() { EXIT_FLAGGED } else { 0 };
    Ok(Record {
        schema: SCHEMA,
        command: cfg.command.name().to_string(),
        config: cfg.clone(),
        spaces,
        budget: used,
        result,
        exit,
    })
}
