use std::process::ExitCode;

fn main() -> ExitCode {
    qudit_conv::cli::main()
}
