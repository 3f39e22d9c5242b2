use clap::Parser;

fn main() {
    let cli = qsixj::cli::Cli::parse();
    std::process::exit(qsixj::cli::run(cli));
}
