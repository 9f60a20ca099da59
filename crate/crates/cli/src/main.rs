use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (report, cli) = match cobarkit::run_args(std::env::args_os().skip(1)) {
        Ok(v) => v,
        Err(e) => e.exit(),
    };
    let text = cobarkit::render(&report, &cli);
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
