fn main() {
    std::process::exit(sublevel_barcodes::cli::run(std::env::args_os()));
}
