//! Writes the compiled-in registry as JSON. The repo-root
//! requirements.json is produced by exactly this.

use pq_assure_core::registry::{builtin_registry, save_registry, validate_registry};
use std::path::PathBuf;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "requirements.json".to_string());
    let registry = builtin_registry();
    let report = validate_registry(&registry);
    assert!(report.is_clean(), "{:?}", report.violations);
    save_registry(&registry, &PathBuf::from(&path)).unwrap();
    println!("wrote {path}");
}
