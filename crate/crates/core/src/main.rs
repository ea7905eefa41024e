fn main() {
    std::process::exit(zlrr::cli::run_cli(std::env::args_os()));
}
