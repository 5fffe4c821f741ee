//! Subcommand implementations, independent of argument parsing.

use std::path::{Path, PathBuf};

use ksharp_core::diagnostics::{energy, ik, mass, momentum};
use ksharp_core::model::{coefficients_from_scales, scales_from_coefficients, DimensionalForm};
use ksharp_core::simulate::{self, mollify, stable_dt, RunOptions, RunOutcome, RunStatus};
use ksharp_core::travwave::kdv_soliton;
use ksharp_core::{Grid, HierarchyParams, Peakompacton, Scheme, State};

use crate::error::{CliError, CliResult};
use crate::formats::{
    self, DiagnosticsDoc, InvariantRow, MollificationDoc, ParamsDoc, ProfileDoc, ProfileHeader, SnapshotDoc,
    StatusDoc,
};
use crate::manifest::{FileFormat, InitialCondition, RunManifest};

/// Environment variable that replaces `outputs.dir`.
pub const OUT_DIR_ENV: &str = "KSHARP_OUT_DIR";

/// Half-width of the profile window in units of `ξ0`.
pub const PROFILE_WINDOW: f64 = 1.2;

/// Output directory after applying the environment override.
pub fn resolve_out_dir(configured: &str) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from(configured),
    }
}

pub struct ProfileData {
    pub header: ProfileHeader,
    pub xi: Vec<f64>,
    pub u: Vec<f64>,
}

/// Samples the traveling wave on `samples` equispaced points over
/// `[−1.2 ξ0, 1.2 ξ0]`.
pub fn profile(n: u32, m: u32, c: f64, samples: usize) -> CliResult<ProfileData> {
    if samples < 2 {
        return Err(CliError::Invalid(format!("samples must be at least 2, got {samples}")));
    }
    let p = HierarchyParams::new(n, m)?;
    let wave = Peakompacton::build(p, c)?;
    let half = PROFILE_WINDOW * wave.xi0();
    let last = (samples - 1) as f64;
    let xi: Vec<f64> = (0..samples)
        .map(|i| {
            if i + 1 == samples {
                half
            } else {
                -half + 2.0 * half * i as f64 / last
            }
        })
        .collect();
    let u = xi.iter().map(|&x| wave.profile(x)).collect();
    Ok(ProfileData {
        header: ProfileHeader {
            n,
            m,
            c,
            u_max: wave.u_max(),
            xi0: wave.xi0(),
            kappa: wave.kappa(),
            gamma: wave.gamma_coef(),
            samples,
        },
        xi,
        u,
    })
}

pub fn write_profile(data: &ProfileData, path: &Path, format: FileFormat) -> CliResult<()> {
    match format {
        FileFormat::Csv => formats::write_profile_csv(path, &data.xi, &data.u),
        FileFormat::Json => formats::write_profile_json(
            path,
            &ProfileDoc {
                header: data.header,
                xi: data.xi.clone(),
                u: data.u.clone(),
            },
        ),
    }
}

pub struct ScaleReport {
    pub scales: DimensionalForm,
    /// Largest relative error of `(ε, δ)` after mapping the scales back.
    pub round_trip_error: f64,
}

pub fn scale(epsilon: f64, delta: f64, n: u32, m: u32, vee: f64) -> CliResult<ScaleReport> {
    let p = HierarchyParams::new(n, m)?;
    let scales = scales_from_coefficients(epsilon, delta, p, vee)?;
    let (e, d) = coefficients_from_scales(&scales, p)?;
    let round_trip_error = ((e - epsilon) / epsilon).abs().max(((d - delta) / delta).abs());
    Ok(ScaleReport {
        scales,
        round_trip_error,
    })
}

impl ScaleReport {
    pub fn render(&self) -> String {
        let s = &self.scales;
        format!(
            "ell = {}\ntau = {}\nV = {}\nround-trip (epsilon, delta) = ({}, {}) max relative error = {:e}\n",
            formats::fmt_f64(s.ell),
            formats::fmt_f64(s.tau),
            formats::fmt_f64(s.vee),
            formats::fmt_f64(s.epsilon),
            formats::fmt_f64(s.delta),
            self.round_trip_error
        )
    }
}

/// `M, P, H` and the requested `I_k` for every stored time.
pub fn invariants(path: &Path, n: u32, m: u32, orders: &[u32], scheme: Scheme) -> CliResult<Vec<InvariantRow>> {
    let p = HierarchyParams::new(n, m)?;
    if orders.contains(&0) {
        return Err(CliError::Invalid("I_k needs k >= 1".into()));
    }
    let snaps = formats::read_snapshots(path)?;
    let grid = snaps.grid;
    snaps
        .times
        .iter()
        .zip(snaps.fields)
        .map(|(&t, values)| {
            if values.iter().any(|v| !v.is_finite()) {
                return Err(CliError::malformed(path, format!("non-finite value at t = {t}")));
            }
            let s = State::new(t, values);
            Ok(InvariantRow {
                t,
                mass: mass(&s, &grid),
                momentum: momentum(&s, &grid),
                energy: energy(&s, &grid, p, scheme)?,
                ik: orders.iter().map(|&k| ik(&s, &grid, k)).collect::<Result<_, _>>()?,
            })
        })
        .collect()
}

/// Initial samples and the mollification report, if any.
pub fn initial_state(manifest: &RunManifest, p: HierarchyParams, grid: &Grid) -> CliResult<(State, Option<MollificationDoc>)> {
    let c = manifest.params.c;
    let (values, moll) = match manifest.initial {
        InitialCondition::Zero => (vec![0.0; grid.npoints()], None),
        InitialCondition::KdvSoliton { x0 } => (grid.sample(|x| kdv_soliton(c, grid.periodic_offset(x, x0))), None),
        InitialCondition::Gaussian { amplitude, width, x0 } => (
            grid.sample(|x| {
                let d = grid.periodic_offset(x, x0) / width;
                amplitude * (-0.5 * d * d).exp()
            }),
            None,
        ),
        InitialCondition::Peakompacton {
            x0,
            mollify: smooth,
            mollify_width,
        } => {
            let wave = Peakompacton::build(p, c)?;
            let raw = grid.sample(|x| wave.profile(grid.periodic_offset(x, x0)));
            if smooth {
                let width = mollify_width * grid.spacing();
                let m = mollify(&raw, grid, width);
                let report = MollificationDoc {
                    width,
                    max_change: m.max_change,
                    l2_change: m.l2_change,
                };
                (m.values, Some(report))
            } else {
                (raw, None)
            }
        }
    };
    Ok((State::new(0.0, values), moll))
}

pub struct SimulationReport {
    /// Manifest with the time step filled in.
    pub resolved: RunManifest,
    pub outcome: RunOutcome,
    pub mollification: Option<MollificationDoc>,
    pub files: Vec<PathBuf>,
    pub out_dir: PathBuf,
    /// Wall-clock time of the integration; not recorded for deterministic
    /// manifests.
    pub elapsed: Option<std::time::Duration>,
}

impl SimulationReport {
    pub fn summary(&self) -> String {
        let d = self.outcome.record.drift();
        let mut s = String::new();
        let status = match &self.outcome.status {
            RunStatus::Completed => "completed".to_owned(),
            RunStatus::BlowUp { time, reason } => format!("blow-up ({reason:?}) at t = {time}"),
        };
        s.push_str(&format!(
            "status: {status}; steps = {}; dt = {}\n",
            self.outcome.steps,
            formats::fmt_f64(self.resolved.solver.dt.unwrap_or(f64::NAN))
        ));
        if let Some(m) = &self.mollification {
            s.push_str(&format!(
                "mollification: width = {:e}, max change = {:e}, L2 change = {:e}\n",
                m.width, m.max_change, m.l2_change
            ));
        }
        s.push_str(&format!(
            "drift |dM/M0| = {:e}  |dP/P0| = {:e}  |dH/H0| = {:e}\n",
            d.mass, d.momentum, d.energy
        ));
        for (k, v) in &d.ik {
            s.push_str(&format!("drift |dI_{k}/I_{k}(0)| = {v:e}\n"));
        }
        if let Some(e) = self.elapsed {
            s.push_str(&format!("elapsed: {:.3} s\n", e.as_secs_f64()));
        }
        for f in &self.files {
            s.push_str(&format!("wrote {}\n", f.display()));
        }
        s
    }
}

/// Runs the manifest and writes manifest, snapshot and diagnostics files.
///
/// Outputs are written even when the run blows up; the caller decides how
/// to report [`RunStatus::BlowUp`].
pub fn simulate(manifest: &RunManifest) -> CliResult<SimulationReport> {
    let v = manifest.validate()?;
    let (initial, mollification) = initial_state(manifest, v.params, &v.grid)?;
    let mut resolved = manifest.clone();
    let dt = match manifest.solver.dt {
        Some(dt) => dt,
        None => stable_dt(&initial, &v.grid, v.params, v.config.scheme, manifest.solver.dt_coefficient)?,
    };
    resolved.solver.dt = Some(dt);
    let config = ksharp_core::SolverConfig { dt, ..v.config };

    let outputs = &manifest.outputs;
    let options = RunOptions {
        t_end: manifest.t_end,
        sample_every: outputs.sample_every,
        observe_every: if outputs.snapshot_every == 0 {
            usize::MAX
        } else {
            outputs.snapshot_every
        },
        ik_orders: outputs.ik_orders.clone(),
    };
    let mut times = Vec::new();
    let mut fields = Vec::new();
    let mut collect = |s: &State, _: &Grid| {
        times.push(s.time);
        fields.push(s.values.clone());
    };
    let started = std::time::Instant::now();
    let outcome = simulate::run(&initial, v.params, &v.grid, &config, &options, &mut [&mut collect])?;
    let elapsed = (!manifest.deterministic).then(|| started.elapsed());
    if outcome.status != RunStatus::Completed && times.last() != Some(&outcome.final_state.time) {
        times.push(outcome.final_state.time);
        fields.push(outcome.final_state.values.clone());
    }

    let out_dir = resolve_out_dir(&outputs.dir);
    let name = |stem: &str, ext: &str| out_dir.join(format!("{}{stem}.{ext}", outputs.prefix));
    let params = ParamsDoc {
        n: manifest.params.n,
        m: manifest.params.m,
        c: manifest.params.c,
    };
    let mut files = Vec::new();

    let manifest_path = name("manifest", "json");
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
    std::fs::write(&manifest_path, resolved.to_json()).map_err(|e| CliError::io(&manifest_path, e))?;
    files.push(manifest_path);

    let snap_path = name("snapshots", outputs.snapshot_format.extension());
    match outputs.snapshot_format {
        FileFormat::Csv => formats::write_snapshots_csv(&snap_path, &v.grid, &times, &fields)?,
        FileFormat::Json => formats::write_snapshots_json(
            &snap_path,
            &SnapshotDoc {
                grid: (&v.grid).into(),
                params,
                times,
                fields,
            },
        )?,
    }
    files.push(snap_path);

    let diag_path = name("diagnostics", outputs.diagnostics_format.extension());
    match outputs.diagnostics_format {
        FileFormat::Csv => formats::write_diagnostics_csv(&diag_path, &outcome.record)?,
        FileFormat::Json => {
            let status = match outcome.status {
                RunStatus::Completed => StatusDoc::Completed,
                RunStatus::BlowUp { .. } => StatusDoc::BlowUp,
            };
            let doc = DiagnosticsDoc::new(&outcome.record, params, status, mollification);
            formats::write_diagnostics_json(&diag_path, &doc)?
        }
    }
    files.push(diag_path);

    Ok(SimulationReport {
        resolved,
        outcome,
        mollification,
        files,
        out_dir,
        elapsed,
    })
}
