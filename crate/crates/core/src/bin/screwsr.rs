fn main() {
    std::process::exit(screwsr::cli::main_entry());
}
