fn main() {
    std::process::exit(minkowski_embed::cli::run(std::env::args_os()));
}
