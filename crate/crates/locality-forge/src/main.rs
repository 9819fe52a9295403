fn main() {
    std::process::exit(locality_forge::cli::run(std::env::args_os()));
}
