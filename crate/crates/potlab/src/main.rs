use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use potlab::cli::RunConfig;

fn main() -> ExitCode {
    let cfg = RunConfig::parse();

    #[cfg(feature = "parallel")]
    if let Ok(v) = std::env::var("POTLAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .ok();
        }
    }

    let result = match &cfg.out {
        Some(path) => match std::fs::File::create(path) {
            Ok(mut f) => potlab::cli::run(&cfg, &mut f),
            Err(e) => Err(e.into()),
        },
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let r = potlab::cli::run(&cfg, &mut lock);
            lock.flush().ok();
            r
        }
    };

    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
