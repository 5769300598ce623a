fn main() {
    std::process::exit(isofield::cli::parse_and_dispatch(std::env::args_os()));
}
