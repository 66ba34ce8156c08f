use clap::Parser;

fn main() {
    let cli = addbasis_cli::Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = addbasis_cli::run(cli, &mut out, &mut std::io::stderr());
    std::process::exit(code);
}
