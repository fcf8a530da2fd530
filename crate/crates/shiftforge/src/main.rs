use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = shiftforge::cli::main_with(std::env::args(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
