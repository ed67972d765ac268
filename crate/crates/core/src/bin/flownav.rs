use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use flownav::flow::{write_flo2, Algorithm};
use flownav::fuzzy::{ControllerModel, ModelId};
use flownav::pnm::{write_pgm, write_ppm};
use flownav::sim::{calibrate_scale, metrics, Simulation, TrajectoryLog};
use flownav::world::{bundled_scenario, load_scenario, Scenario};
use flownav::{Error, Result};

/// Optic-flow corridor navigation simulator.
#[derive(Parser)]
#[command(name = "flownav", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the closed loop and write a trajectory CSV.
    Run {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
        #[arg(long)]
        controller: Option<ModelId>,
        #[arg(long)]
        flow: Option<Algorithm>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        dump_frames: bool,
        #[arg(long)]
        dump_flow: bool,
    },
    /// Compute the flow scale factor for a scenario.
    Calibrate {
        scenario: String,
        /// Store the result as `scale_factor` in the scenario file.
        #[arg(long)]
        write: bool,
    },
    /// Recompute metrics from a trajectory CSV.
    Metrics { log: PathBuf, scenario: String },
    /// Print the resolved controller and its membership tables.
    DumpController { scenario: String },
}

fn resolve(name: &str) -> Result<Scenario> {
    if !Path::new(name).exists() {
        if let Some(s) = bundled_scenario(name) {
            return s;
        }
    }
    load_scenario(name)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_err(path, e))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: e,
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    scenario: &str,
    controller: Option<ModelId>,
    flow: Option<Algorithm>,
    steps: Option<usize>,
    seed: Option<u64>,
    out: &Path,
    dump_frames: bool,
    dump_flow: bool,
) -> Result<()> {
    let Scenario { scene, mut config } = resolve(scenario)?;
    if let Some(c) = controller {
        config.controller.model = c;
    }
    if let Some(f) = flow {
        config.flow.algorithm = f;
    }
    if let Some(n) = steps {
        config.steps = n;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    config.dump.frames |= dump_frames;
    config.dump.flow |= dump_flow;
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;

    let mut sim = Simulation::new(&scene, &config)?;
    let mut dump_error: Option<Error> = None;
    while !sim.is_finished() {
        sim.step_full(
            |_| {},
            |view| {
                if dump_error.is_some() {
                    return;
                }
                let result = (|| -> Result<()> {
                    if config.dump.frames {
                        let p = out.join(format!("frame_{:06}.pgm", view.step));
                        write_pgm(create(&p)?, view.gray).map_err(|e| io_err(&p, e))?;
                        let p = out.join(format!("color_{:06}.ppm", view.step));
                        write_ppm(create(&p)?, view.color).map_err(|e| io_err(&p, e))?;
                    }
                    if let (true, Some(flow)) = (config.dump.flow, view.flow) {
                        let p = out.join(format!("flow_{:06}.flo2", view.step));
                        write_flo2(create(&p)?, flow).map_err(|e| io_err(&p, e))?;
                    }
                    Ok(())
                })();
                dump_error = result.err();
            },
        )?;
        if let Some(e) = dump_error.take() {
            return Err(e);
        }
    }

    let path = out.join("trajectory.csv");
    let mut w = create(&path)?;
    sim.log().write_csv(&mut w).map_err(|e| io_err(&path, e))?;
    w.flush().map_err(|e| io_err(&path, e))?;
    let report = metrics(sim.log(), &config.metrics);
    println!("scale_factor = {:.8e}", sim.scale_factor());
    print!("{report}");
    Ok(())
}

/// Sets `scale_factor` inside the `[sim]` section, keeping everything else.
fn with_scale_factor(text: &str, factor: f64) -> String {
    let entry = format!("scale_factor = {factor}");
    let mut out = Vec::new();
    let mut in_sim = false;
    let mut has_sim = false;
    let mut done = false;
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            if in_sim && !done {
                out.push(entry.clone());
                done = true;
            }
            in_sim = trimmed.split('#').next().unwrap_or("").trim() == "[sim]";
            has_sim |= in_sim;
        } else if in_sim && trimmed.split('=').next().unwrap_or("").trim() == "scale_factor" {
            if !done {
                out.push(entry.clone());
                done = true;
            }
            continue;
        }
        out.push(line.to_string());
    }
    if !done {
        if !has_sim {
            out.push(String::new());
            out.push("[sim]".into());
        }
        out.push(entry);
    }
    out.join("\n") + "\n"
}

fn calibrate(scenario: &str, write: bool) -> Result<()> {
    let Scenario { scene, config } = resolve(scenario)?;
    let factor = calibrate_scale(&scene, &config, config.controller.cruise_speed)?;
    println!("scale_factor = {factor}");
    if write {
        let path = Path::new(scenario);
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        fs::write(path, with_scale_factor(&text, factor)).map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

fn metrics_cmd(log: &Path, scenario: &str) -> Result<()> {
    let Scenario { config, .. } = resolve(scenario)?;
    let file = File::open(log).map_err(|e| io_err(log, e))?;
    let log = TrajectoryLog::read_csv(BufReader::new(file))?;
    print!("{}", metrics(&log, &config.metrics));
    Ok(())
}

fn dump_controller(scenario: &str) -> Result<()> {
    let Scenario { config, .. } = resolve(scenario)?;
    print!("{}", ControllerModel::new(config.controller)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match &cli.command {
        Command::Run {
            scenario,
            controller,
            flow,
            steps,
            seed,
            out,
            dump_frames,
            dump_flow,
        } => run(
            scenario,
            *controller,
            *flow,
            *steps,
            *seed,
            out,
            *dump_frames,
            *dump_flow,
        ),
        Command::Calibrate { scenario, write } => calibrate(scenario, *write),
        Command::Metrics { log, scenario } => metrics_cmd(log, scenario),
        Command::DumpController { scenario } => dump_controller(scenario),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::with_scale_factor;

    #[test]
    fn scale_factor_inserted_and_replaced() {
        let t = with_scale_factor("[sim]\nsteps = 3\n[metrics]\n", 1.5);
        assert_eq!(t, "[sim]\nsteps = 3\nscale_factor = 1.5\n[metrics]\n");
        let t = with_scale_factor(&t, 2.0);
        assert_eq!(t, "[sim]\nsteps = 3\nscale_factor = 2\n[metrics]\n");
        let t = with_scale_factor("[robot]\n", 2.0);
        assert_eq!(t, "[robot]\n\n[sim]\nscale_factor = 2\n");
    }
}
