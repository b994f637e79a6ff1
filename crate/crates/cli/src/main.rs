use std::io::Write;

fn main() {
    let outcome = opalg_cli::dispatch(std::env::args_os().skip(1));
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(outcome.code);
}
