use clap::Parser;

fn main() {
    let cli = rank1lab_cli::Cli::parse();
    std::process::exit(rank1lab_cli::run(cli));
}
