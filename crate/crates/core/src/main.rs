fn main() -> std::process::ExitCode {
    ifsp::cli::main()
}
