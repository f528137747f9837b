use clap::Parser;

use discrim::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(payload) => {
            print!("{payload}");
        }
        Err(failure) => {
            let mut text = serde_json::to_string_pretty(&failure.diagnostic).expect("serializable");
            text.push('\n');
            print!("{text}");
            std::process::exit(failure.code);
        }
    }
}
