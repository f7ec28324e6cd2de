fn main() {
    std::process::exit(compact_hydrogen::cli::run(std::env::args_os()).code());
}
