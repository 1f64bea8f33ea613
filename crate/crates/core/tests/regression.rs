use sigmaint::regression::{corpus_dir, load_corpus, run_corpus};

#[test]
fn corpus_is_complete() {
    let cases = load_corpus(&corpus_dir()).unwrap();
    assert!(cases.len() >= 10);
    assert!(cases.iter().all(|c| c.file.expect.is_some()), "every corpus file carries an expectation");
}

#[test]
fn whole_corpus_reproduces() {
    let summary = run_corpus().unwrap();
    println!("{summary}");
    assert!(summary.all_passed(), "{summary}");
}
