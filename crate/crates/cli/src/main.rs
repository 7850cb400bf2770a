use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = freeset_lab::run(std::env::args().collect());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    ExitCode::from(out.code as u8)
}
