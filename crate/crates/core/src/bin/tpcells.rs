fn main() -> std::process::ExitCode {
    tpcells::cli::main_with_args()
}
