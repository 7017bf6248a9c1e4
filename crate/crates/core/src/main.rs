fn main() {
    std::process::exit(ccenum::cli::run(std::env::args_os()));
}
