use std::io::Write;

fn main() {
    let result = fdp_noise::cli::run(std::env::args_os());
    // Tolerate closed pipes (e.g. `... | head`) instead of panicking.
    if !result.summary.is_empty() {
        if result.exit_code == 1 {
            let _ = writeln!(std::io::stderr(), "{}", result.summary);
        } else {
            let _ = writeln!(std::io::stdout(), "{}", result.summary);
        }
    }
    std::process::exit(result.exit_code);
}
