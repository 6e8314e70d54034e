use clap::Parser;

fn main() {
    let cli = chernoff_sbm::Cli::parse();
    if let Err(e) = chernoff_sbm::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
