fn main() {
    std::process::exit(noisyvqe_cli::run(std::env::args_os()));
}
