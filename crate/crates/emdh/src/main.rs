use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("EMDH_LOG", "warn")).init();
    let cli = emdh::cli::Cli::parse();
    std::process::exit(emdh::cli::run(cli));
}
