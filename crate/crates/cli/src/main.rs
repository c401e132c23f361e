fn main() {
    std::process::exit(gravred_cli::run(std::env::args_os()));
}
