fn main() {
    std::process::exit(dhgpart::cli::run(std::env::args_os()));
}
