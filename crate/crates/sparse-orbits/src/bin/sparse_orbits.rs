fn main() {
    std::process::exit(sparse_orbits::cli::main());
}
