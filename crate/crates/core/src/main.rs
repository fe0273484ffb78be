fn main() {
    std::process::exit(mvmnl::cli::cli_main(std::env::args_os()));
}
