fn main() {
    std::process::exit(snest::cli::main());
}
