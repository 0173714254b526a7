fn main() {
    std::process::exit(v2xcalib::cli::cli_dispatch(std::env::args_os()));
}
