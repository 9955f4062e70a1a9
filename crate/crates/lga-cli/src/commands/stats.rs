use std::path::Path;

use crate::error::CliError;
use crate::util::{load_fsa, stats_object};

pub fn run(path: &Path, json: bool) -> Result<(), CliError> {
    let a = load_fsa(path)?;
    let object = stats_object(&a);
    if json {
        println!("{}", serde_json::Value::Object(object));
        return Ok(());
    }
    for (key, value) in &object {
        match value {
            serde_json::Value::Null => println!("{key}: unbounded"),
            serde_json::Value::Bool(b) => println!("{key}: {}", if *b { "yes" } else { "no" }),
            other => println!("{key}: {other}"),
        }
    }
    Ok(())
}
