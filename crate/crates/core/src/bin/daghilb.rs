fn main() {
    std::process::exit(daghilb::cli::run(std::env::args_os()));
}
