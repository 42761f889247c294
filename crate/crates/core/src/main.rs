fn main() {
    std::process::exit(euclid_companion::cli::run(std::env::args_os()));
}
