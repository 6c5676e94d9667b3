fn main() -> std::process::ExitCode {
    amplify_cli::main_entry()
}
