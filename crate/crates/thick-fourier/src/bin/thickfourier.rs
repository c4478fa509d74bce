fn main() {
    std::process::exit(thick_fourier::cli::run(std::env::args()));
}
