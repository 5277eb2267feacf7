use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sphint::mesh_io::load_mesh;
use sphint::sph_demo::{
    builtin_params, kinetic_energy, run_scene, Particle, Scene, SceneParams, SphError, SphSolver, SCENE_NAMES,
};

use crate::{output, CliError};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// acute_drop, acute_nodrop, ortho_drop, ortho_nodrop, obtuse_drop or obtuse_nodrop.
    #[arg(long)]
    scene: String,
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    /// Directory for snapshots and the run summary.
    #[arg(short, long)]
    output: PathBuf,
    /// Parameter file; mesh paths inside are relative to it. The bundled scenes when absent.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Steps between snapshots; the scene's cadence when absent.
    #[arg(long)]
    every: Option<usize>,
    /// JSON snapshots and summary instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Serialize)]
struct ParticleRecord {
    x: f64,
    y: f64,
    vx: f64,
    vy: f64,
    density: f64,
    pressure: f64,
}

#[derive(Debug, Serialize)]
struct Snapshot {
    step: usize,
    time: f64,
    kinetic_energy: f64,
    particles: Vec<ParticleRecord>,
}

#[derive(Debug, Serialize)]
struct EnergyRecord {
    step: usize,
    time: f64,
    dt: f64,
    kinetic_energy: f64,
    divergence_iterations: usize,
    density_iterations: usize,
    density_residual: f64,
    penetrations: usize,
}

#[derive(Debug, Serialize)]
struct Summary {
    scene: String,
    particles: usize,
    steps: usize,
    time: f64,
    penetrations: usize,
    max_density_error: f64,
    final_density_error: f64,
    max_impulse_imbalance: f64,
    max_iterations: usize,
    final_kinetic_energy: f64,
    /// Mean kinetic energy of the last eighth over the eighth before it.
    settling_ratio: Option<f64>,
}

fn records(particles: &[Particle]) -> Vec<ParticleRecord> {
    particles
        .iter()
        .map(|p| ParticleRecord {
            x: p.position.x,
            y: p.position.y,
            vx: p.velocity[0],
            vy: p.velocity[1],
            density: p.density,
            pressure: p.pressure,
        })
        .collect()
}

fn write_snapshot(dir: &Path, name: &str, json: bool, step: usize, time: f64, particles: &[Particle]) -> Result<(), CliError> {
    let ext = if json { "json" } else { "csv" };
    let w = output::open(Some(&dir.join(format!("{name}.{ext}"))))?;
    if json {
        output::write_json(
            w,
            &Snapshot {
                step,
                time,
                kinetic_energy: kinetic_energy(particles),
                particles: records(particles),
            },
        )
    } else {
        output::write_csv(w, &records(particles))
    }
}

fn sph_error(e: SphError) -> CliError {
    match e {
        SphError::UnknownScene(_) => CliError::Usage(e.to_string()),
        SphError::Diverged { .. } | SphError::Cfl { .. } | SphError::Integration(_) => CliError::Numerical(e.to_string()),
        SphError::InvalidParameter(_) | SphError::Params(_) | SphError::Mesh(_) => CliError::Data(e.to_string()),
    }
}

fn load_scene(a: &Args) -> Result<(Scene, SphSolver, usize), CliError> {
    let (params, base) = match &a.params {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
            let params = SceneParams::parse(&text).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
            (params, Some(p.parent().unwrap_or(Path::new(".")).to_path_buf()))
        }
        None => {
            if !SCENE_NAMES.contains(&a.scene.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown scene `{}` (one of {})",
                    a.scene,
                    SCENE_NAMES.join(", ")
                )));
            }
            (builtin_params(), None)
        }
    };
    let config = params.scene(&a.scene).map_err(sph_error)?;
    let solver = SphSolver::new(params.solver.clone()).map_err(sph_error)?;
    let scene = match base {
        Some(dir) => {
            let path = dir.join(&config.mesh);
            let mesh = load_mesh(&path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            Scene::new(&a.scene, mesh, config, &solver).map_err(sph_error)?
        }
        None => Scene::builtin(&a.scene, &solver).map_err(sph_error)?,
    };
    Ok((scene, solver, a.every.unwrap_or(config.snapshot_every)))
}

pub fn run(a: Args) -> Result<(), CliError> {
    if a.every == Some(0) {
        return Err(CliError::Usage("--every must be at least 1".into()));
    }
    let (mut scene, solver, every) = load_scene(&a)?;
    fs::create_dir_all(&a.output).map_err(|e| CliError::Data(format!("{}: {e}", a.output.display())))?;
    let dir = a.output.as_path();
    write_snapshot(dir, "snapshot_000000", a.json, 0, 0.0, &scene.particles)?;

    let mut energy = Vec::with_capacity(a.steps);
    let mut time = 0.0;
    let mut io_error = None;
    let result = run_scene(&mut scene, &solver, a.steps, |step, particles, report| {
        time += report.dt;
        energy.push(EnergyRecord {
            step,
            time,
            dt: report.dt,
            kinetic_energy: kinetic_energy(particles),
            divergence_iterations: report.divergence.0,
            density_iterations: report.density.0,
            density_residual: report.density.1,
            penetrations: report.penetrations,
        });
        if step % every == 0 || step == a.steps {
            if let Err(e) = write_snapshot(dir, &format!("snapshot_{step:06}"), a.json, step, time, particles) {
                io_error = Some(e);
                return Err(SphError::InvalidParameter("snapshot could not be written".into()));
            }
        }
        Ok(())
    });
    if let Some(e) = io_error {
        return Err(e);
    }
    output::write_csv(output::open(Some(&dir.join("energy.csv")))?, &energy)?;
    let summary = match result {
        Ok(s) => s,
        Err(e) => {
            write_snapshot(dir, "diagnostic", a.json, energy.len(), time, &scene.particles)?;
            return Err(sph_error(e));
        }
    };
    let report = Summary {
        scene: scene.name.clone(),
        particles: summary.particles,
        steps: summary.steps,
        time: summary.time,
        penetrations: summary.penetrations,
        max_density_error: summary.max_density_error,
        final_density_error: summary.final_density_error,
        max_impulse_imbalance: summary.max_impulse_imbalance,
        max_iterations: summary.max_iterations,
        final_kinetic_energy: summary.kinetic_energy.last().copied().unwrap_or(0.0),
        settling_ratio: summary.settling_ratio(),
    };
    if a.json {
        output::write_json(output::open(Some(&dir.join("summary.json")))?, &report)?;
    } else {
        output::write_csv(output::open(Some(&dir.join("summary.csv")))?, &[&report])?;
    }
    eprintln!(
        "{}: {} particles, {} steps, {} penetrations, max density error {:.2e}, final {:.2e}",
        report.scene, report.particles, report.steps, report.penetrations, report.max_density_error, report.final_density_error
    );
    Ok(())
}
