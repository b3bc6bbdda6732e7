// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    let inv = match spoo::cli::parse_args(std::env::args_os()) {
        Ok(inv) => inv,
        Err(e) => {
            let code = if e.use_stderr() { spoo::cli::EXIT_CONFIG } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    env_logger::Builder::new()
        .filter_level(inv.log_level())
        .format_target(false)
        .format_timestamp(None)
        .init();
    std::process::exit(spoo::cli::run(&inv));
}
