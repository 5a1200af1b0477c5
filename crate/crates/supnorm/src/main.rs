use clap::Parser;

fn main() {
    let cli = supnorm::cli::Cli::parse();
    std::process::exit(supnorm::execute(&cli));
}
