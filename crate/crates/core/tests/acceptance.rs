//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion does.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use symseq_core::kothe::{
    closed_form_dual_exponent, generalized_dual_norm, lozanovskii_factorize, lp_factorize,
    DualNormQuery,
};
use symseq_core::opnorm::{
    norm_1_to_e, norm_e_to_inf, opnorm_estimate_with, transpose_duality_pair, OpnormOptions,
};
use symseq_core::schur::{
    embedding_audit, gamma2_norm, multiplier_lower_bound, multiplier_norm_extreme,
    MultiplierReport, GAMMA2_BUDGET, PSD_TOL,
};
use symseq_core::seqspace::{kothe_dual_norm_with, norm, DualOptions};
use symseq_core::tensor::{
    injective_norm, matrix_norm_axiom_audit, projective_norm_bounds, TensorElem, TensorNorm,
};
use symseq_core::triangle::{growth_experiment, lower_triangular_ones, GrowthMode};
use symseq_core::{linalg, Budget, Exponent, Mat, OrliczFn, SpaceSpec, WeightSeq};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_mat(r: &mut ChaCha8Rng, m: usize, n: usize) -> Mat {
    let data = (0..m * n)
        .map(|_| r.sample::<f64, _>(StandardNormal))
        .collect();
    Mat::new(m, n, data).unwrap()
}

fn gaussian_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect()
}

fn lp(p: f64) -> SpaceSpec {
    SpaceSpec::lp(p).unwrap()
}

fn ex(p: f64) -> Exponent {
    Exponent::new(p).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let opts = OpnormOptions {
        budget: Budget::OPNORM,
        seed: 0,
        force_numeric: true,
    };
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let a = gaussian_mat(&mut r, 8, 8);
        for p in [1.5, 2.0, 3.0] {
            let e = lp(p);
            let col = norm_1_to_e(&a, &e).map_err(|x| x.to_string())?;
            let num = opnorm_estimate_with(&a, &SpaceSpec::l1(), &e, &opts).unwrap();
            let d = rel(num.lower, col);
            worst = worst.max(d);
            check(d <= 1e-6, || {
                format!("matrix {k}, p={p}: 1->E {} vs {col}", num.lower)
            })?;
            let row = norm_e_to_inf(&a, &e).unwrap();
            let num = opnorm_estimate_with(&a, &e, &SpaceSpec::linf(), &opts).unwrap();
            let d = rel(num.lower, row.lower);
            worst = worst.max(d);
            check(d <= 1e-6 && num.lower <= row.upper * (1.0 + 1e-12), || {
                format!("matrix {k}, p={p}: E->inf {} vs {}", num.lower, row.lower)
            })?;
        }
    }
    Ok(format!("worst relative difference {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for (p, q) in [(4.0, 2.0), (2.0, 2.0), (2.0, 3.0), (f64::INFINITY, 2.0)] {
        let (pe, qe) = (ex(p), ex(q));
        let exact_exp = closed_form_dual_exponent(pe, qe);
        for k in 0..25 {
            let n = r.random_range(1..=10);
            let x = gaussian_vec(&mut r, n);
            let mut query = DualNormQuery::new(lp(p), lp(q), x.clone());
            query.force_numeric = true;
            query.seed = k;
            let b = generalized_dual_norm(&query).unwrap();
            let exact = norm(&SpaceSpec::lp_exp(exact_exp), &x).unwrap();
            let d = rel(b.lower, exact);
            worst = worst.max(d);
            check(d <= 1e-3, || {
                format!("(p,r)=({p},{q}) vector {k}: {} vs {exact}", b.lower)
            })?;
        }
    }
    Ok(format!("worst relative difference {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let pairs = [
        (lp(1.5), lp(3.0)),
        (lp(2.0), lp(2.0)),
        (lp(1.0), lp(f64::INFINITY)),
    ];
    let mut widest: f64 = 0.0;
    for k in 0..25 {
        let a = gaussian_mat(&mut r, 6, 6);
        for (e, f) in &pairs {
            let (d, t) = transpose_duality_pair(&a, e, f, Budget::new(16, 300), k).unwrap();
            widest = widest.max(d.gap()).max(t.gap());
            check(d.overlaps(&t, 1e-3), || {
                format!(
                    "matrix {k} ({e},{f}): [{}, {}] vs [{}, {}]",
                    d.lower, d.upper, t.lower, t.upper
                )
            })?;
        }
    }
    Ok(format!(
        "all intervals overlap, widest relative gap {widest:.2e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..20 {
        let m = gaussian_mat(&mut r, 4, 4);
        let ext = multiplier_norm_extreme(&m);
        let max = m.data().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        check(ext == max, || format!("matrix {k}: extreme {ext} vs {max}"))?;
        for p in [2.0, 4.0] {
            let rep = multiplier_lower_bound(&m, &SpaceSpec::l1(), &lp(p), 8, k).unwrap();
            worst = worst.max(rep.bounds.lower - ext);
            check(rep.bounds.lower <= ext + 1e-6, || {
                format!("matrix {k}, E=l{p}: lower {} above {ext}", rep.bounds.lower)
            })?;
        }
    }
    Ok(format!(
        "largest excess of sampled (1,E) bound over sup|m_ij|: {worst:.1e}"
    ))
}

fn cert_ok(m: &Mat, rep: &MultiplierReport) -> Result<(), String> {
    let c = rep.certificate.as_ref().ok_or("missing certificate")?;
    check(c.reconstruction_error <= 1e-7, || {
        format!("reconstruction {}", c.reconstruction_error)
    })?;
    check(
        (c.reconstruction_against(m) - c.reconstruction_error).abs() <= 1e-15,
        || "reconstruction not reproducible".into(),
    )?;
    check(c.value >= rep.bounds.lower - 1e-6, || {
        format!("value {} below lower", c.value)
    })?;
    check(
        (c.recompute_value() - c.value).abs() <= 1e-12 * c.value.max(1.0),
        || "value not reproducible".into(),
    )?;
    check(c.min_eigenvalue >= -PSD_TOL, || {
        format!("eigenvalue {}", c.min_eigenvalue)
    })?;
    check(rep.bounds.lower >= m.max_abs() - 1e-9, || {
        "below entry floor".into()
    })
}

fn criterion_5() -> Outcome {
    for n in [1, 2, 4, 8, 16, 32] {
        for (name, m) in [("identity", Mat::identity(n)), ("ones", Mat::ones(n, n))] {
            let rep = gamma2_norm(&m, GAMMA2_BUDGET).unwrap();
            check(
                (rep.bounds.lower - 1.0).abs() <= 1e-6 && (rep.bounds.upper - 1.0).abs() <= 1e-6,
                || format!("{name} {n}: [{}, {}]", rep.bounds.lower, rep.bounds.upper),
            )?;
            cert_ok(&m, &rep).map_err(|e| format!("{name} {n}: {e}"))?;
        }
    }
    let oracle = 2.0 / 3f64.sqrt();
    let t2 = lower_triangular_ones(2).transpose();
    let rep = gamma2_norm(&t2, GAMMA2_BUDGET).unwrap();
    check(
        rel(rep.bounds.lower, oracle) <= 1e-4 && rel(rep.bounds.upper, oracle) <= 1e-4,
        || {
            format!(
                "2x2 triangle [{}, {}] vs {oracle}",
                rep.bounds.lower, rep.bounds.upper
            )
        },
    )?;
    cert_ok(&t2, &rep)?;
    let mut r = rng(5);
    let mut worst_gap: f64 = 0.0;
    let mut cases: Vec<(String, Mat)> = [2, 4, 8, 16, 32, 64]
        .iter()
        .map(|&n| (format!("triangle {n}"), lower_triangular_ones(n)))
        .collect();
    for n in [5, 12, 24, 64] {
        cases.push((format!("gaussian {n}"), gaussian_mat(&mut r, n, n)));
    }
    for (name, m) in &cases {
        let rep = gamma2_norm(m, GAMMA2_BUDGET).unwrap();
        worst_gap = worst_gap.max(rep.bounds.gap());
        check(rep.bounds.gap() <= 1e-2, || {
            format!("{name}: gap {}", rep.bounds.gap())
        })?;
        cert_ok(m, &rep).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!(
        "identity/ones exact, 2x2 = {:.10}, worst gap {worst_gap:.1e}",
        rep.bounds.lower
    ))
}

fn criterion_6() -> Outcome {
    let c = growth_experiment(&[2, 4, 8, 16, 32, 64], GrowthMode::Gamma2, GAMMA2_BUDGET, 0)
        .map_err(|e| e.to_string())?;
    check(c.values.windows(2).all(|w| w[1] > w[0]), || {
        format!("not increasing: {:?}", c.values)
    })?;
    check(c.fit.1 > 0.0 && c.r_squared >= 0.98, || {
        format!("fit b={} r2={}", c.fit.1, c.r_squared)
    })?;
    Ok(format!(
        "a={:.4} b={:.4} r2={:.5}",
        c.fit.0, c.fit.1, c.r_squared
    ))
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for p in [2.0, 3.0] {
        let e = lp(p);
        for k in 0..20 {
            let n = r.random_range(1..=12);
            let u = gaussian_vec(&mut r, n);
            let c = lozanovskii_factorize(&e, &u, 0.05, k).map_err(|x| x.to_string())?;
            worst = worst.max(c.ratio());
            check(c.ratio() <= 1.05 && c.ratio() >= 1.0 - 1e-9, || {
                format!("E=l{p} u {k}: ratio {}", c.ratio())
            })?;
            check(c.product_error <= 1e-9 * c.reference_norm.max(1.0), || {
                format!("E=l{p} u {k}: product error {}", c.product_error)
            })?;
            let z = gaussian_vec(&mut r, n);
            let c = lp_factorize(&e, ex(1.5), &z, 0.05, k).map_err(|x| x.to_string())?;
            worst = worst.max(c.ratio());
            check(c.ratio() <= 1.05 && c.ratio() >= 1.0 - 1e-9, || {
                format!("E=l{p} z {k}: l1.5 ratio {}", c.ratio())
            })?;
        }
    }
    Ok(format!("worst norm-product ratio {worst:.6}"))
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let b = Budget::new(8, 200);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let (m, n) = (r.random_range(1..=6), r.random_range(1..=6));
        let a = gaussian_mat(&mut r, m, n);
        let d = linalg::svd(&a);
        let u = TensorElem::new(a, SpaceSpec::l2(), SpaceSpec::l2()).unwrap();
        let eps = injective_norm(&u, b, k).unwrap();
        let pi = projective_norm_bounds(&u, b, k).unwrap();
        let de = rel(eps.lower, d.largest()).max(rel(eps.upper, d.largest()));
        let dp = rel(pi.lower, d.nuclear()).max(rel(pi.upper, d.nuclear()));
        worst = worst.max(de).max(dp);
        check(de <= 1e-4 && dp <= 1e-4, || {
            format!("sample {k}: eps {de:.1e}, pi {dp:.1e}")
        })?;
        check(eps.lower <= pi.upper + 1e-6, || {
            format!("sample {k}: eps above pi")
        })?;
    }
    for (e, f) in [(lp(3.0), lp(1.5)), (lp(1.0), lp(4.0))] {
        for k in 0..5 {
            let a = gaussian_mat(&mut r, 4, 3);
            let u = TensorElem::new(a, e.clone(), f.clone()).unwrap();
            let eps = injective_norm(&u, b, k).unwrap();
            let pi = projective_norm_bounds(&u, b, k).unwrap();
            check(eps.lower <= pi.upper + 1e-6, || {
                format!("({e},{f}) sample {k}: eps above pi")
            })?;
        }
    }
    let audit = matrix_norm_axiom_audit(
        TensorNorm::Injective,
        &SpaceSpec::l2(),
        &SpaceSpec::l2(),
        20,
        8,
    )
    .unwrap();
    check(audit.pass, || {
        format!("axiom audit failed: {:?}", audit.checks)
    })?;
    Ok(format!(
        "worst oracle deviation {worst:.1e}, axioms (i)-(v) pass"
    ))
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let ol = SpaceSpec::orlicz_lorentz(
        OrliczFn::power(2.0).unwrap(),
        WeightSeq::harmonic(5).unwrap(),
    )
    .unwrap();
    let spaces = [lp(1.5), lp(3.0), ol];
    let opts = DualOptions {
        budget: Budget::DUAL,
        seed: 0,
        force_numeric: true,
    };
    let mut worst: f64 = 0.0;
    for s in &spaces {
        let dual = SpaceSpec::kothe_dual(s.clone()).numeric(Budget::NESTED);
        for k in 0..4 {
            let n = r.random_range(1..=5);
            let x = gaussian_vec(&mut r, n);
            let b = kothe_dual_norm_with(&dual, &x, &opts).unwrap();
            let exact = norm(s, &x).unwrap();
            let d = rel(b.lower, exact);
            worst = worst.max(d);
            check(d <= 0.02, || {
                format!("{s} vector {k}: {} vs {exact}", b.lower)
            })?;
        }
    }
    Ok(format!("worst relative deviation {worst:.1e}"))
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let (p, q) = (ex(4.0), ex(4.0 / 3.0));
    let (e, f) = (SpaceSpec::lp_exp(p), SpaceSpec::lp_exp(q));
    let mut worst: f64 = 0.0;
    for k in 0..30 {
        let m = gaussian_mat(&mut r, 4, 4);
        let a = embedding_audit(&m, &e, &f, p, q, 4, k).unwrap();
        worst = worst.max(a.ratio);
        check(!a.violation, || {
            format!("multiplier {k}: ratio {}", a.ratio)
        })?;
    }
    Ok(format!("largest ratio {worst:.6}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "closed-form operator norms",
            criterion_1,
            Duration::from_secs(10),
        ),
        (
            "generalized Köthe dual closed forms",
            criterion_2,
            Duration::from_secs(30),
        ),
        ("transpose duality", criterion_3, Duration::from_secs(60)),
        ("multiplier extremes", criterion_4, Duration::from_secs(20)),
        ("gamma_2 solver", criterion_5, Duration::from_secs(120)),
        ("triangle log-growth", criterion_6, Duration::from_secs(600)),
        (
            "factorization certificates",
            criterion_7,
            Duration::from_secs(60),
        ),
        ("tensor-norm oracles", criterion_8, Duration::from_secs(60)),
        (
            "second-dual identities",
            criterion_9,
            Duration::from_secs(120),
        ),
        ("embedding audit", criterion_10, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let out = match out {
            Ok(msg) if took > *limit => Err(format!("{msg}; took {took:.2?} > {limit:?}")),
            other => other,
        };
        match out {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({took:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({took:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
