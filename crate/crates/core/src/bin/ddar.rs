use clap::Parser;

fn main() {
    let cli = ddar::cli::Cli::parse();
    let code = ddar::cli::run(cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
