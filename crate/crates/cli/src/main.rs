fn main() {
    std::process::exit(torspec_cli::run(std::env::args_os()));
}
