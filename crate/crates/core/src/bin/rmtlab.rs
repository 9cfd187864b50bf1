use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr();
    ExitCode::from(rmtlab::cli::main_with(std::env::args(), &mut out, &mut err).code())
}
