fn main() {
    std::process::exit(rootclust_cli::run_cli(std::env::args_os()));
}
