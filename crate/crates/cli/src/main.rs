use grainstone_cli::{main_with, Fault};

#[cfg(feature = "fault-injection")]
fn fault() -> Option<Fault> {
    let node = std::env::var("GRAINSTONE_INJECT_FAULT").ok()?;
    match node.parse() {
        Ok(node) => Some(Fault { node }),
        Err(_) => {
            eprintln!("ignoring GRAINSTONE_INJECT_FAULT={node:?}: not a node id");
            None
        }
    }
}

#[cfg(not(feature = "fault-injection"))]
fn fault() -> Option<Fault> {
    None
}

fn main() {
    std::process::exit(main_with(std::env::args_os(), fault()));
}
