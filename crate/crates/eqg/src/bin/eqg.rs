use clap::Parser;

fn main() {
    let cli = eqg::cli::Cli::parse();
    std::process::exit(eqg::cli::run(&cli));
}
