use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lab::{
    power_threshold, BoundVariant, EnsembleSpec, InequalityReport, LemmaCheck,
};
use crate::profiles::Profile;
use crate::solver::{energy_e0, evolve, SolverConfig, Trajectory, WaveState};
use crate::spectral::{gevrey_norm, lp_norm, make_grid, GevreyIndex, Grid};
use crate::tracker::{
    decay_exponent, estimators_disagree, fit_decay, radius_by_slope, theoretical_bound,
    EnergyProbe, Estimator, RadiusEntry, RadiusSeries,
};

use super::config::{ExperimentConfig, Kind};
use super::output::{read_csv, sha256_file, write_atomic, Cell, OutputSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Record of one run: config echo, version, timing and output checksums.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub version: String,
    pub kind: String,
    pub config: BTreeMap<String, String>,
    pub seed_offset: u64,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub outputs: Vec<OutputRecord>,
    /// Scalar results worth reading without opening the CSV files.
    pub summary: BTreeMap<String, f64>,
    pub flags: Vec<String>,
}

pub const MANIFEST_NAME: &str = "manifest.json";

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

#[derive(Default)]
struct Findings {
    summary: BTreeMap<String, f64>,
    flags: Vec<String>,
}

/// Run the pipeline for `config.kind`, writing CSV files and `manifest.json`
/// into `out_dir`. On failure every file this run wrote is removed.
pub fn run(config: &ExperimentConfig, out_dir: &Path, seed_offset: u64) -> Result<RunManifest> {
    let started = unix_now();
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut outputs = OutputSet::default();
    let result = dispatch(config, out_dir, seed_offset, &mut outputs)
        .and_then(|findings| finish(config, out_dir, seed_offset, started, &outputs, findings));
    if result.is_err() {
        outputs.discard();
        let _ = std::fs::remove_file(out_dir.join(MANIFEST_NAME));
    }
    result
}

fn finish(
    config: &ExperimentConfig,
    out_dir: &Path,
    seed_offset: u64,
    started: f64,
    outputs: &OutputSet,
    findings: Findings,
) -> Result<RunManifest> {
    let records = outputs
        .files
        .iter()
        .map(|p| {
            let bytes = std::fs::metadata(p)
                .map_err(|source| Error::Io {
                    path: p.clone(),
                    source,
                })?
                .len();
            Ok(OutputRecord {
                file: p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
                sha256: sha256_file(p)?,
                bytes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = RunManifest {
        version: crate::VERSION.to_string(),
        kind: config.kind.name().to_string(),
        config: config.values().iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        seed_offset,
        started_unix: started,
        finished_unix: unix_now(),
        outputs: records,
        summary: findings.summary,
        flags: findings.flags,
    };
    let json = serde_json::to_vec_pretty(&manifest).map_err(|e| Error::Io {
        path: out_dir.join(MANIFEST_NAME),
        source: e.into(),
    })?;
    write_atomic(&out_dir.join(MANIFEST_NAME), &json)?;
    Ok(manifest)
}

fn dispatch(config: &ExperimentConfig, dir: &Path, seed_offset: u64, out: &mut OutputSet) -> Result<Findings> {
    match config.kind {
        Kind::VerifyLemmas => verify_lemmas(config, dir, seed_offset, out),
        Kind::Simulate => simulate(config, dir, out),
        Kind::TrackRadius => track_radius(config, dir, out),
        Kind::FitDecay => fit(config, dir, out),
        Kind::Convergence => convergence(config, dir, out),
    }
}

fn need_f(c: &ExperimentConfig, key: &str) -> Result<f64> {
    c.float(key)
        .ok_or_else(|| Error::invalid(format!("config lacks `{key}`")))
}

fn need_u(c: &ExperimentConfig, key: &str) -> Result<usize> {
    c.usize(key)
        .ok_or_else(|| Error::invalid(format!("config lacks `{key}`")))
}

fn grid_of(c: &ExperimentConfig) -> Result<std::sync::Arc<Grid>> {
    make_grid(need_u(c, "d")?, need_f(c, "L")?, need_u(c, "N")?)
}

fn profile_of(c: &ExperimentConfig) -> Result<Profile> {
    let amplitude = need_f(c, "amplitude")?;
    Ok(match c.str("profile").unwrap_or("gaussian") {
        "gaussian" => Profile::Gaussian {
            amplitude,
            width: need_f(c, "width")?,
        },
        "sech" => Profile::Sech {
            amplitude,
            radius: need_f(c, "radius")?,
        },
        "poisson" => Profile::Poisson {
            amplitude,
            radius: need_f(c, "radius")?,
        },
        other => return Err(Error::invalid(format!("unknown profile {other:?}"))),
    })
}

fn solver_of(c: &ExperimentConfig) -> Result<SolverConfig> {
    SolverConfig::new(need_u(c, "p")? as u32, need_f(c, "dt")?)
}

fn initial_state(c: &ExperimentConfig) -> Result<WaveState> {
    Ok(WaveState::at_rest(profile_of(c)?.sample(grid_of(c)?)))
}

fn run_trajectory(c: &ExperimentConfig, record_every: usize) -> Result<Trajectory> {
    evolve(&initial_state(c)?, need_f(c, "T")?, &solver_of(c)?, record_every)
}

fn relative_drift(e: f64, e0: f64) -> f64 {
    if e0 == 0.0 {
        (e - e0).abs()
    } else {
        (e - e0).abs() / e0
    }
}

fn simulate(c: &ExperimentConfig, dir: &Path, out: &mut OutputSet) -> Result<Findings> {
    let tr = run_trajectory(c, need_u(c, "record_every")?)?;
    let cfg = tr.config;
    let e0 = energy_e0(&tr.states[0], &cfg);
    let mut rows = Vec::with_capacity(tr.len());
    let mut drift: f64 = 0.0;
    for s in &tr.states {
        let e = energy_e0(s, &cfg);
        drift = drift.max(relative_drift(e, e0));
        rows.push(vec![
            s.time.into(),
            e.into(),
            gevrey_norm(&s.u, GevreyIndex::L2)?.into(),
            lp_norm(&s.u, f64::INFINITY)?.into(),
        ]);
    }
    out.emit(dir, "trajectory.csv", &["t", "E0", "l2_u", "sup_u"], &rows)?;
    let mut f = Findings::default();
    f.summary.insert("max_relative_E0_drift".into(), drift);
    Ok(f)
}

fn convergence(c: &ExperimentConfig, dir: &Path, out: &mut OutputSet) -> Result<Findings> {
    let levels = need_u(c, "levels")?;
    let t_final = need_f(c, "T")?;
    let base = solver_of(c)?;
    let init = initial_state(c)?;
    let mut finals = Vec::with_capacity(levels);
    let mut drifts = Vec::with_capacity(levels);
    for k in 0..levels {
        let cfg = SolverConfig {
            dt: base.dt / (1u64 << k) as f64,
            ..base
        };
        let steps = (t_final / cfg.dt).ceil().max(1.0) as usize;
        let tr = evolve(&init, t_final, &cfg, steps)?;
        let e0 = energy_e0(&tr.states[0], &cfg);
        let last = tr.last().expect("trajectory holds the final state").clone();
        drifts.push(relative_drift(energy_e0(&last, &cfg), e0));
        finals.push((cfg.dt, last));
    }
    let mut rows = Vec::with_capacity(levels);
    let mut increments = Vec::new();
    for k in 0..levels {
        let inc = match finals.get(k + 1) {
            Some((_, next)) => finals[k].1.sup_distance(next)?,
            None => f64::NAN,
        };
        increments.push(inc);
        rows.push(vec![finals[k].0.into(), drifts[k].into(), inc.into()]);
    }
    out.emit(dir, "convergence.csv", &["dt", "E0_drift", "increment"], &rows)?;
    let mut f = Findings::default();
    if levels >= 3 && increments[1] > 0.0 {
        f.summary.insert("increment_ratio".into(), increments[0] / increments[1]);
    }
    if drifts.len() >= 2 && drifts[1] > 0.0 {
        f.summary.insert("drift_ratio".into(), drifts[0] / drifts[1]);
    }
    Ok(f)
}

/// `min_t sigma*(t) (1+t)^q` over entries with a positive radius.
pub fn bound_constant(series: &RadiusSeries, q: f64) -> f64 {
    series
        .entries()
        .iter()
        .filter(|e| e.sigma_star > 0.0)
        .map(|e| e.sigma_star * (1.0 + e.time).powf(q))
        .fold(f64::INFINITY, f64::min)
}

/// Radius estimates from both estimators along a trajectory.
pub struct RadiusTrack {
    pub energy: RadiusSeries,
    pub slope: Vec<f64>,
    pub e0: Vec<f64>,
    pub constant: f64,
    pub bound: Vec<f64>,
}

pub fn track(
    tr: &Trajectory,
    sigma_max: f64,
    tol: f64,
    band: (f64, f64),
    sigma0: f64,
    eps: Option<f64>,
) -> Result<RadiusTrack> {
    let d = tr.states[0].grid().dim();
    let p = tr.config.p;
    let probe = EnergyProbe::new(tr)?;
    let energy = probe.radius_series(sigma_max, tol)?;
    let slope = tr
        .states
        .iter()
        .map(|s| radius_by_slope(&s.u, band).unwrap_or(f64::NAN))
        .collect();
    let e0 = tr.states.iter().map(|s| energy_e0(s, &tr.config)).collect();
    let q = decay_exponent(p, d, eps)?;
    let constant = bound_constant(&energy, q);
    let bound = tr
        .states
        .iter()
        .map(|s| {
            if constant.is_finite() && constant > 0.0 {
                theoretical_bound(s.time, p, d, sigma0, constant, eps)
            } else {
                Ok(0.0)
            }
        })
        .collect::<Result<_>>()?;
    Ok(RadiusTrack {
        energy,
        slope,
        e0,
        constant,
        bound,
    })
}

fn track_radius(c: &ExperimentConfig, dir: &Path, out: &mut OutputSet) -> Result<Findings> {
    let tr = run_trajectory(c, need_u(c, "record_every")?)?;
    let band = (need_f(c, "slope_lo")?, need_f(c, "slope_hi")?);
    let eps = c.float("eps");
    let t = track(&tr, need_f(c, "sigma_max")?, need_f(c, "tol")?, band, need_f(c, "sigma0")?, eps)?;
    let mut rows = Vec::with_capacity(tr.len());
    let mut flags = Vec::new();
    for (i, e) in t.energy.entries().iter().enumerate() {
        if !e.saturated && t.slope[i].is_finite() && estimators_disagree(e.sigma_star, t.slope[i]) {
            flags.push(format!("estimators disagree at t = {}", e.time));
        }
        rows.push(vec![
            e.time.into(),
            e.sigma_star.into(),
            t.slope[i].into(),
            t.e0[i].into(),
            t.bound[i].into(),
        ]);
    }
    out.emit(dir, "radius.csv", &["t", "sigma_energy", "sigma_slope", "E0", "bound"], &rows)?;
    let mut f = Findings {
        flags,
        ..Findings::default()
    };
    f.summary.insert("bound_constant".into(), t.constant);
    f.summary.insert(
        "saturated_records".into(),
        t.energy.entries().iter().filter(|e| e.saturated).count() as f64,
    );
    Ok(f)
}

fn fit(c: &ExperimentConfig, dir: &Path, out: &mut OutputSet) -> Result<Findings> {
    let input = PathBuf::from(c.str("input").unwrap_or_default());
    let input = if input.is_relative() && !input.exists() {
        dir.join(&input)
    } else {
        input
    };
    let column = c.str("column").unwrap_or("sigma_energy");
    let (header, rows) = read_csv(&input)?;
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::invalid(format!("{}: no column `{name}`", input.display())))
    };
    let (ti, si) = (col("t")?, col(column)?);
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| Error::invalid(format!("{}: bad number {s:?}", input.display())))
    };
    let mut entries = Vec::with_capacity(rows.len());
    for r in &rows {
        let sigma_star = parse(&r[si])?;
        if !sigma_star.is_finite() {
            continue;
        }
        entries.push(RadiusEntry {
            time: parse(&r[ti])?,
            sigma_star,
            estimator: if column == "sigma_slope" {
                Estimator::Slope
            } else {
                Estimator::Energy
            },
            saturated: false,
        });
    }
    // saturation is not stored in the CSV; a run of identical leading values marks it
    if let Some(top) = entries.first().map(|e| e.sigma_star) {
        let plateau = entries.iter().take_while(|e| e.sigma_star == top).count();
        if plateau < entries.len() {
            for e in &mut entries[..plateau] {
                e.saturated = true;
            }
        }
    }
    let series = RadiusSeries::from_entries(entries)?;
    let window = (need_f(c, "t_min")?, need_f(c, "t_max")?);
    let fit = fit_decay(&series, window)?;
    out.emit(
        dir,
        "fit.csv",
        &["exponent", "exponent_stderr", "log_constant", "residual", "t_min", "t_max"],
        &[vec![
            fit.exponent.into(),
            fit.exponent_stderr.into(),
            fit.log_constant.into(),
            fit.residual.into(),
            window.0.into(),
            window.1.into(),
        ]],
    )?;
    let mut f = Findings::default();
    f.summary.insert("exponent".into(), fit.exponent);
    f.summary.insert("exponent_stderr".into(), fit.exponent_stderr);
    Ok(f)
}

fn lemma_row(name: &str, seed: u64, r: &InequalityReport) -> Vec<Cell> {
    let param = |k: &str| Cell::Float(r.params.get(k).copied().unwrap_or(f64::NAN));
    vec![
        name.into(),
        seed.into(),
        param("sigma"),
        param("s"),
        param("theta"),
        r.lhs.into(),
        r.rhs.into(),
        r.ratio.into(),
    ]
}

/// The lemma checks run by `verify-lemmas`, with the names used in the CSV.
pub fn lemma_suite(c: &ExperimentConfig) -> Result<Vec<(String, LemmaCheck)>> {
    let d = need_u(c, "d")?;
    let p = need_u(c, "p")? as u32;
    let sigma = need_f(c, "sigma")?;
    let theta = need_f(c, "theta")?;
    let s = c.float("s").unwrap_or_else(|| power_threshold(d, p).max(0.5));
    let ps = c.float("product_s").unwrap_or(d as f64 / 4.0 + 0.125);
    let mut suite = vec![
        (
            "embedding".to_string(),
            LemmaCheck::Embedding {
                from: GevreyIndex::new(sigma.max(1e-3), s)?,
                to: GevreyIndex::new(0.5 * sigma.max(1e-3), s + 1.0)?,
            },
        ),
        (
            "product".to_string(),
            LemmaCheck::Product {
                s0: 0.0,
                s1: ps,
                s2: ps,
            },
        ),
        (
            "power".to_string(),
            LemmaCheck::Power {
                index: GevreyIndex::new(sigma, s)?,
                p,
            },
        ),
    ];
    let variants: &[BoundVariant] = if d == 1 {
        &[BoundVariant::Statement]
    } else {
        &BoundVariant::ALL
    };
    for &variant in variants {
        let name = if d == 1 {
            "commutator".to_string()
        } else {
            format!("commutator-{}", variant.name())
        };
        suite.push((name, LemmaCheck::Commutator { sigma, p, theta, variant }));
    }
    Ok(suite)
}

fn verify_lemmas(c: &ExperimentConfig, dir: &Path, seed_offset: u64, out: &mut OutputSet) -> Result<Findings> {
    let mut spec = EnsembleSpec::new(
        grid_of(c)?,
        need_f(c, "decay_sigma")?,
        need_f(c, "band_limit")?,
        need_f(c, "amplitude")?,
        0,
    )?;
    if c.bool("real") == Some(true) {
        spec = spec.real();
    }
    let first = c.int("first_seed").unwrap_or(0).wrapping_add(seed_offset);
    let count = need_u(c, "samples")?;
    let mut rows = Vec::new();
    let mut f = Findings::default();
    for (name, check) in lemma_suite(c)? {
        let summary = crate::lab::run_ensemble(&check, &spec, first, count)?;
        for (i, r) in summary.reports.iter().enumerate() {
            rows.push(lemma_row(&name, first.wrapping_add(i as u64), r));
        }
        f.summary.insert(format!("max_ratio_{name}"), summary.max_ratio);
    }
    out.emit(
        dir,
        "lemmas.csv",
        &["lemma", "seed", "sigma", "s", "theta", "lhs", "rhs", "ratio"],
        &rows,
    )?;
    Ok(f)
}
