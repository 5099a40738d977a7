fn main() {
    std::process::exit(arithdyn::cli::run(std::env::args_os()));
}
