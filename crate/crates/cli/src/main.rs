use clap::Parser;

fn main() {
    let cli = qtele_cli::Cli::parse();
    std::process::exit(qtele_cli::run(&cli));
}
