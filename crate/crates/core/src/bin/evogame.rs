fn main() -> std::process::ExitCode {
    evogame::harness::cli::main(std::env::args_os())
}
