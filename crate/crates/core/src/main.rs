use clap::Parser;

fn main() {
    let cli = zerodensity::cli::Cli::parse();
    std::process::exit(zerodensity::cli::run(cli));
}
