#![no_main]

use ep4_core::certificate::verify_certificate;
use ep4_core::io::{read_certificate, read_graph};
use libfuzzer_sys::fuzz_target;

const K4: &str = r#"{"vertices":[0,1,2,3],"edges":[[0,1],[0,2],[0,3],[1,2],[2,3],[3,1]]}"#;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let lm = read_graph(K4).unwrap();
    if let Ok(cert) = read_certificate(&lm, text) {
        let _ = verify_certificate(&lm.map, &cert);
    }
});
