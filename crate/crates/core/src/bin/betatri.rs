fn main() {
    std::process::exit(betatri::cli::run(std::env::args_os()));
}
