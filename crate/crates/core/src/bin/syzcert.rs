fn main() {
    std::process::exit(syzygy_cert::cli::run(std::env::args_os()));
}
