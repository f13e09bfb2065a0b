fn main() {
    std::process::exit(eqmanna::cli::run(std::env::args_os()));
}
