fn main() {
    std::process::exit(fmres_cli::run(std::env::args_os()));
}
