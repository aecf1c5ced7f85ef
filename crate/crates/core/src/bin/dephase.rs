fn main() {
    std::process::exit(dephase::cli::main_with(std::env::args_os()));
}
