fn main() {
    std::process::exit(robinlab::cli::run(std::env::args_os()));
}
