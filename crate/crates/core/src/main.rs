fn main() {
    std::process::exit(shiprrt::cli::run(std::env::args_os()));
}
