#![no_main]

use ep4_core::io::{read_graph, write_graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(lm) = read_graph(text) {
        // Anything accepted must survive the canonical writer.
        let out = write_graph(&lm);
        let back = read_graph(&out).expect("canonical output parses");
        assert_eq!(write_graph(&back), out);
    }
});
