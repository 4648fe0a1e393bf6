fn main() -> std::process::ExitCode {
    lotforge::cli::main()
}
