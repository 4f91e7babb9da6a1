use std::path::PathBuf;

use dlal::stdlib::{self, load_corpus, write_corpus};

fn shipped() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/stdlib")
}

/// Set `DLAL_WRITE_CORPUS=1` to regenerate the directory.
#[test]
fn shipped_corpus_matches_stdlib() {
    let all = stdlib::all();
    if std::env::var_os("DLAL_WRITE_CORPUS").is_some() {
        write_corpus(&shipped(), &all).unwrap();
    }
    let loaded = load_corpus(&shipped()).unwrap();
    assert_eq!(loaded.len(), all.len());
    for p in &loaded {
        p.verify().unwrap_or_else(|e| panic!("{}: {e}", p.name));
        let orig = all.iter().find(|q| q.name == p.name).unwrap();
        assert!(p.term.alpha_eq(&orig.term), "{}", p.name);
        assert_eq!(p.certificate, orig.certificate, "{}", p.name);
        assert_eq!(p.lal_certificate, orig.lal_certificate, "{}", p.name);
    }
}
