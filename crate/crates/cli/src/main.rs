use clap::Parser;
use outerprod_cli::{dispatch, exit, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { exit::INPUT } else { exit::OK });
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = dispatch(&cli.command, &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
