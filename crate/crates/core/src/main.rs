fn main() -> std::process::ExitCode {
    stacky::cli::main()
}
