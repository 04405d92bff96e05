fn main() -> std::process::ExitCode {
    dfcw::cli::main()
}
