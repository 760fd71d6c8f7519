fn main() {
    std::process::exit(dspc::cli::run(std::env::args_os()));
}
