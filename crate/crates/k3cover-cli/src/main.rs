fn main() {
    std::process::exit(k3cover_cli::run_command(&std::env::args().collect::<Vec<_>>()[1..]));
}
