//! One function per subcommand. Each builds its records (in parallel where
//! the rows are independent) and writes them in input order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tmq_core::diffract::{approximant_density_fast, Wave};
use tmq_core::quadfield::prime_record;
use tmq_core::rareclass::{fractal_profile_with, rarefied_vector, DEFAULT_RESOLUTION};
use tmq_core::spectrum::{class_invariance_check, classify, growth_regime, normalize_wavevector, ClassifyOptions};
use tmq_core::tmcore::{digit_sum, format_rational, point, tm_sign};
use tmq_core::arith::{is_prime, odd_primes_up_to};

use crate::args::{Command, WeightKind};
use crate::config::{GridSpec, RunConfig};
use crate::grid::{parse_grid, parse_grid_items, parse_sizes};
use crate::output::{sig12, write_records, write_table};
use crate::weights::WeightSeq;
use crate::{CliError, Result};

pub fn run(command: &Command, cfg: &RunConfig) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match command {
        Command::Sequence => sequence(cfg),
        Command::Diffract(_) => diffract(cfg),
        Command::ClassifyPrimes => classify_primes(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Profile(_) => profile(cfg),
        Command::Rarefy(_) => rarefy(cfg),
        Command::Marcinkiewicz(_) => marcinkiewicz(cfg),
    })
}

fn require_grid(cfg: &RunConfig, command: &str) -> Result<GridSpec> {
    cfg.grid
        .clone()
        .ok_or_else(|| CliError::Usage(format!("{command} needs --grid")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub n: u64,
    pub s: u32,
    pub eta: i8,
    pub f: String,
}

pub fn sequence(cfg: &RunConfig) -> Result<()> {
    let n_max = cfg.limit.unwrap_or(16);
    let rows: Vec<SequenceRow> = (0..n_max.max(1))
        .map(|n| {
            let f = point(n as i64, &cfg.params);
            SequenceRow {
                n,
                s: digit_sum(n),
                eta: tm_sign(n),
                f: format_rational(&f),
            }
        })
        .collect();
    write_records(cfg.format, cfg.out.as_deref(), &rows, &["n", "s", "eta", "f"])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffractRow {
    pub q: String,
    pub k: Option<f64>,
    pub l: u64,
    pub nu: Option<f64>,
    pub alpha: Option<f64>,
}

pub fn diffract(cfg: &RunConfig) -> Result<()> {
    let grid = parse_grid(&require_grid(cfg, "diffract")?)?;
    let sizes = match &cfg.sizes {
        Some(s) => parse_sizes(s)?,
        None => {
            let h = cfg.horizon.unwrap_or(10);
            if h > 63 {
                return Err(CliError::Usage("horizon must be at most 63".into()));
            }
            (1..=h).map(|j| 1u64 << j).collect()
        }
    };
    let cells: Vec<(usize, u64)> = (0..grid.len())
        .flat_map(|i| sizes.iter().map(move |&l| (i, l)))
        .collect();
    let rows: Vec<DiffractRow> = cells
        .par_iter()
        .map(|&(i, l)| {
            let q = &grid[i];
            let wave = Wave::Exact(q.clone());
            let nu = approximant_density_fast(l, &wave, &cfg.params);
            let alpha = (l >= 2 && nu > 0.0).then(|| nu.ln() / (l as f64).ln());
            DiffractRow {
                q: format_rational(q),
                k: sig12(wave.k(&cfg.params)),
                l,
                nu: sig12(nu),
                alpha: alpha.and_then(sig12),
            }
        })
        .collect();
    write_records(cfg.format, cfg.out.as_deref(), &rows, &["q", "k", "l", "nu", "alpha"])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeRow {
    pub p: u64,
    pub s: u64,
    pub class: String,
    pub h: Option<u64>,
    pub epsilon: Option<String>,
    pub beta: Option<f64>,
    pub regime: String,
}

pub fn classify_primes(cfg: &RunConfig) -> Result<()> {
    let limit = cfg.limit.unwrap_or(200);
    if limit < 3 {
        return Err(CliError::Usage("--limit must be at least 3".into()));
    }
    let primes = odd_primes_up_to(limit);
    let rows: Vec<Result<PrimeRow>> = primes
        .par_iter()
        .map(|&p| {
            let rec = prime_record(p)?;
            let regime = growth_regime(2.0 * rec.beta - 1.0)?;
            Ok(PrimeRow {
                p,
                s: rec.s,
                class: rec.class.name().to_string(),
                h: rec.h,
                epsilon: rec.epsilon.as_ref().map(|e| e.to_string()),
                beta: sig12(rec.beta),
                regime: regime.name().to_string(),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    write_records(
        cfg.format,
        cfg.out.as_deref(),
        &rows,
        &["p", "s", "class", "h", "epsilon", "beta", "regime"],
    )
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub q: String,
    pub p: Option<u64>,
    pub h: Option<u32>,
    pub t: Option<i64>,
    pub verdict: Option<String>,
    pub alpha: Option<f64>,
    pub kappa_eta_re: Option<f64>,
    pub kappa_eta_im: Option<f64>,
    pub kappa_eta_abs: Option<f64>,
    pub fitted_alpha: Option<f64>,
    pub flags: String,
    pub error: Option<String>,
}

fn spectrum_row(q: &tmq_core::Rational, cfg: &RunConfig, opts: &ClassifyOptions) -> tmq_core::Result<SpectrumRow> {
    let nw = normalize_wavevector(q)?;
    let v = classify(q, &cfg.params, opts)?;
    Ok(SpectrumRow {
        q: format_rational(q),
        p: Some(nw.p),
        h: Some(nw.h),
        t: Some(nw.t),
        verdict: Some(v.kind.name().to_string()),
        alpha: v.alpha.and_then(sig12),
        kappa_eta_re: sig12(v.kappa_eta.re),
        kappa_eta_im: sig12(v.kappa_eta.im),
        kappa_eta_abs: sig12(v.kappa_eta.norm()),
        fitted_alpha: v.diagnostics.fitted_alpha.and_then(sig12),
        flags: v.flags.names().join(";"),
        error: None,
    })
}

pub fn spectrum(cfg: &RunConfig) -> Result<()> {
    let items = parse_grid_items(&require_grid(cfg, "spectrum")?)?;
    let horizon = cfg.horizon.unwrap_or(24);
    if horizon > 62 {
        return Err(CliError::Usage("horizon must be at most 62".into()));
    }
    let opts = ClassifyOptions {
        fit_horizon: (horizon > 0).then_some(horizon),
    };
    let rows: Vec<SpectrumRow> = items
        .par_iter()
        .map(|(text, value)| {
            let failed = |msg: String| SpectrumRow {
                q: text.clone(),
                error: Some(msg),
                ..Default::default()
            };
            match value {
                Ok(q) => spectrum_row(q, cfg, &opts).unwrap_or_else(|e| failed(e.to_string())),
                Err(e) => failed(e.to_string()),
            }
        })
        .collect();
    write_records(
        cfg.format,
        cfg.out.as_deref(),
        &rows,
        &[
            "q",
            "p",
            "h",
            "t",
            "verdict",
            "alpha",
            "kappa_eta_re",
            "kappa_eta_im",
            "kappa_eta_abs",
            "fitted_alpha",
            "flags",
            "error",
        ],
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: u64,
    pub x: Option<f64>,
    pub raw: Option<f64>,
    pub psi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub p: u64,
    pub j: u64,
    pub beta: Option<f64>,
    pub psi_inf: Option<f64>,
    pub psi_sup: Option<f64>,
    pub raw_inf: Option<f64>,
    pub raw_sup: Option<f64>,
    pub samples: Vec<ProfileRow>,
}

pub fn profile(cfg: &RunConfig) -> Result<()> {
    let p = cfg.p.unwrap_or(3);
    let j = cfg.j.unwrap_or(0);
    let horizon = cfg.horizon.unwrap_or(24);
    let resolution = cfg.resolution.unwrap_or(DEFAULT_RESOLUTION);
    if p < 3 || !is_prime(p) {
        return Err(tmq_core::Error::NotOddPrime(p).into());
    }
    let prof = fractal_profile_with(p, j, horizon, resolution)?;
    let samples: Vec<ProfileRow> = prof
        .samples
        .iter()
        .map(|s| ProfileRow {
            n: s.n,
            x: sig12(s.x),
            raw: sig12(s.raw),
            psi: sig12(s.psi),
        })
        .collect();
    let doc = ProfileDoc {
        p,
        j,
        beta: sig12(prof.exponents.beta),
        psi_inf: sig12(prof.bounds.0),
        psi_sup: sig12(prof.bounds.1),
        raw_inf: sig12(prof.raw_bounds.0),
        raw_sup: sig12(prof.raw_bounds.1),
        samples,
    };
    eprintln!(
        "p={p} j={j} beta={:.6} psi in [{:.6}, {:.6}] (empirical over {} samples)",
        prof.exponents.beta,
        prof.bounds.0,
        prof.bounds.1,
        prof.samples.len()
    );
    match cfg.format {
        crate::args::Format::Json => write_table(cfg.format, cfg.out.as_deref(), &[], &[], &doc),
        crate::args::Format::Csv => {
            write_records(cfg.format, cfg.out.as_deref(), &doc.samples, &["n", "x", "raw", "psi"])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RarefyRow {
    pub n: u64,
    pub sums: Vec<i64>,
}

pub fn rarefy(cfg: &RunConfig) -> Result<()> {
    let p = cfg.p.unwrap_or(3);
    let ns: Vec<u64> = match &cfg.grid {
        Some(g) => parse_grid(g)?
            .iter()
            .map(|q| {
                let bad = || CliError::Usage(format!("{} is not a non-negative integer", format_rational(q)));
                if !q.is_integer() {
                    return Err(bad());
                }
                q.numer().to_string().parse::<u64>().map_err(|_| bad())
            })
            .collect::<Result<_>>()?,
        None => (0..=cfg.limit.unwrap_or(16)).collect(),
    };
    let rows: Vec<Result<RarefyRow>> = ns
        .par_iter()
        .map(|&n| {
            let v = rarefied_vector(p, n)?;
            Ok(RarefyRow {
                n,
                sums: v.entries().to_vec(),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut header = vec!["n".to_string()];
    header.extend((0..p).map(|j| format!("s{j}")));
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| std::iter::once(r.n.to_string()).chain(r.sums.iter().map(i64::to_string)).collect())
        .collect();
    write_table(cfg.format, cfg.out.as_deref(), &header, &table, &rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarcinkiewiczRow {
    pub q: String,
    pub horizon: u64,
    pub intensity1: Option<f64>,
    pub intensity2: Option<f64>,
    pub norm1: Option<f64>,
    pub norm2: Option<f64>,
    pub norm_diff: Option<f64>,
    pub gap: Option<f64>,
    pub bound_holds: bool,
}

pub fn marcinkiewicz(cfg: &RunConfig) -> Result<()> {
    let grid = match &cfg.grid {
        Some(g) => parse_grid(g)?,
        None => vec![tmq_core::Rational::from_integer(0.into())],
    };
    let h = cfg.horizon.unwrap_or(16);
    if !(1..=30).contains(&h) {
        return Err(CliError::Usage("marcinkiewicz needs 1 <= horizon <= 30".into()));
    }
    let len = 1u64 << h;
    let w1 = WeightSeq::new(cfg.weights.unwrap_or(WeightKind::Unit), cfg.seed, len);
    let w2 = WeightSeq::new(cfg.compare.unwrap_or(WeightKind::FlipSquares), cfg.seed, len);
    let reports: Vec<Result<(String, tmq_core::spectrum::InvarianceReport)>> = grid
        .par_iter()
        .map(|q| {
            let rep = class_invariance_check(&w1, &w2, &Wave::Exact(q.clone()), &cfg.params, len)?;
            Ok((format_rational(q), rep))
        })
        .collect();
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut all_hold = true;
    for (q, rep) in &reports {
        let tol = tmq_core::spectrum::INTENSITY_TOLERANCE;
        all_hold &= rep.bound_holds && rep.gap_bound_holds;
        for r in &rep.rows {
            let holds = r.intensity1 <= r.norm1 * r.norm1 + tol
                && r.intensity2 <= r.norm2 * r.norm2 + tol
                && r.gap <= (r.norm1 + r.norm2) * r.norm_diff + tol;
            rows.push(MarcinkiewiczRow {
                q: q.clone(),
                horizon: r.horizon,
                intensity1: sig12(r.intensity1),
                intensity2: sig12(r.intensity2),
                norm1: sig12(r.norm1),
                norm2: sig12(r.norm2),
                norm_diff: sig12(r.norm_diff),
                gap: sig12(r.gap),
                bound_holds: holds,
            });
        }
    }
    write_records(
        cfg.format,
        cfg.out.as_deref(),
        &rows,
        &[
            "q",
            "horizon",
            "intensity1",
            "intensity2",
            "norm1",
            "norm2",
            "norm_diff",
            "gap",
            "bound_holds",
        ],
    )?;
    if !all_hold {
        return Err(CliError::Numerical("intensity bound I <= |w|^2 violated".into()));
    }
    Ok(())
}
