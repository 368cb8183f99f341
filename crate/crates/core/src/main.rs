fn main() {
    std::process::exit(kg_spectra::cli::run(std::env::args_os()));
}
