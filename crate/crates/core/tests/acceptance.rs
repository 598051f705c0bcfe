use std::process::ExitCode;

use ccalg::verify::{run_suite, Goldens, Options};

fn main() -> ExitCode {
    let reports = match run_suite(&Goldens::bundled(), &Options::default()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance suite could not start: {e}");
            return ExitCode::FAILURE;
        }
    };
    for r in &reports {
        println!("{}", r.render());
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} of {} criteria passed", reports.len() - failed, reports.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
