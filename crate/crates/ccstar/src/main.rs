use clap::Parser;

fn main() {
    let cli = ccstar::cli::Cli::parse();
    std::process::exit(ccstar::cli::run(&cli));
}
