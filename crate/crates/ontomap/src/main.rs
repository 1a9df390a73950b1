fn main() {
    std::process::exit(ontomap::cli::main());
}
