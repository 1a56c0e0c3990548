fn main() {
    std::process::exit(jacobi_dirac::cli::main());
}
