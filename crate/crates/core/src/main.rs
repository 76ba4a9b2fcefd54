fn main() -> std::process::ExitCode {
    ofdm_mfsk::cli::main()
}
