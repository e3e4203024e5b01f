use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use direct_shaping_cli::{load_config, run_experiment, CliError, Command, ExperimentConfig};

/// Data shaping codecs and their analysis.
#[derive(Debug, Parser)]
#[command(name = "dshape", version)]
struct Args {
    /// Command to run; optional when --config names one.
    #[arg(long, value_enum)]
    cmd: Option<Command>,
    /// Config file or a previous run's manifest.json.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    upper: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    #[arg(long = "cost-model")]
    cost_model: Option<String>,
    /// Word distribution, e.g. "0.4,0.3,0.2,0.1".
    #[arg(long = "p", visible_alias = "P")]
    p: Option<String>,
    #[arg(long)]
    costs: Option<String>,
    #[arg(long)]
    checkpoints: Option<String>,
    /// Monte Carlo study: pair1d, pair2d or corpus.
    #[arg(long)]
    study: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    ne: Option<String>,
    #[arg(long)]
    nd: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long = "max-iter")]
    max_iter: Option<String>,
    #[arg(long = "seq-len")]
    seq_len: Option<String>,
    #[arg(long)]
    t0: Option<String>,
    #[arg(long)]
    cer: Option<String>,
    #[arg(long = "cer-max")]
    cer_max: Option<String>,
    #[arg(long = "data-bits")]
    data_bits: Option<String>,
    #[arg(long)]
    pair: Option<String>,
    #[arg(long)]
    mlc: bool,
    #[arg(long)]
    parity: bool,
}

impl Args {
    fn params(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("input", &self.input),
            ("upper", &self.upper),
            ("m", &self.m),
            ("rho", &self.rho),
            ("trials", &self.trials),
            ("t-grid", &self.t_grid),
            ("cost-model", &self.cost_model),
            ("p", &self.p),
            ("costs", &self.costs),
            ("checkpoints", &self.checkpoints),
            ("study", &self.study),
            ("n", &self.n),
            ("ne", &self.ne),
            ("nd", &self.nd),
            ("l", &self.l),
            ("tol", &self.tol),
            ("max-iter", &self.max_iter),
            ("seq-len", &self.seq_len),
            ("t0", &self.t0),
            ("cer", &self.cer),
            ("cer-max", &self.cer_max),
            ("data-bits", &self.data_bits),
            ("pair", &self.pair),
        ];
        let mut map: BTreeMap<String, String> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        for (k, on) in [("mlc", self.mlc), ("parity", self.parity)] {
            if on {
                map.insert(k.to_string(), "true".to_string());
            }
        }
        map
    }

    fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let params = self.params();
        let mut config = match &self.config {
            Some(path) => {
                let mut c = load_config(path)?;
                // command-line values override the file
                c.params.extend(params);
                if let Some(cmd) = self.cmd {
                    if cmd != c.command {
                        return Err(CliError::config("cmd", format!("config file is for `{}`", c.command.name())));
                    }
                }
                c
            }
            None => ExperimentConfig {
                command: self.cmd.ok_or_else(|| CliError::config("cmd", "required without --config"))?,
                params,
                seed: 0,
                out_path: PathBuf::from("out"),
            },
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = self.out {
            config.out_path = out;
        }
        Ok(config)
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = args.into_config().and_then(|c| run_experiment(&c));
    match result {
        Ok(report) => {
            for p in &report.outputs {
                println!("{}", p.display());
            }
            println!("{}", report.manifest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("dshape: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
