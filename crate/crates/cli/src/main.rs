fn main() {
    std::process::exit(surfcalc_cli::run(std::env::args_os()));
}
