fn main() -> std::process::ExitCode {
    hyperarakelov::cli::main()
}
