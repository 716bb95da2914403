use std::process::ExitCode;

fn main() -> ExitCode {
    let out = tdl_cli::run_command(std::env::args().skip(1));
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}
