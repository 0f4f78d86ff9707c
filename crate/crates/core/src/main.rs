fn main() {
    std::process::exit(sta_coupler::cli::main_with_args(std::env::args_os()));
}
