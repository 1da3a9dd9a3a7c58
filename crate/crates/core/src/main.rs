fn main() {
    std::process::exit(pseudoae::cli::main());
}
