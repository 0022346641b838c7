fn main() {
    std::process::exit(hlito::cli::run(std::env::args_os().collect()));
}
