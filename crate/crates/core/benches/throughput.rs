use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use sinspell::eval::eval_detection_with;
use sinspell::lexc::{compile, parse_lexc};
use sinspell::miner::mine_many;
use sinspell::text::segment_lossy;
use sinspell::{data, Confusions, Dictionary, Execution, Suggester};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fixtures() -> (Dictionary, Confusions, Vec<String>) {
    let out = compile(&parse_lexc(data::NOUNS_LEXC).unwrap()).unwrap();
    let (dict, _) = Dictionary::load(&out.aff, &out.dic).unwrap();
    let confusions = Confusions::parse(data::CONFUSIONS).unwrap();
    let words: Vec<String> = dict.expand_all(1_000_000).unwrap().into_iter().collect();
    (dict, confusions, words)
}

/// Deterministic misspellings: first confusable grapheme swapped, or a
/// grapheme dropped when none is confusable.
fn misspell(words: &[String], confusions: &Confusions) -> Vec<String> {
    words
        .iter()
        .map(|w| {
            let g = segment_lossy(w);
            match g.iter().enumerate().find_map(|(i, x)| confusions.variants(x).first().map(|v| (i, v.0.clone()))) {
                Some((i, v)) => g[..i].concat() + &v + &g[i + 1..].concat(),
                None => g[..g.len() - 1].concat(),
            }
        })
        .filter(|w| !w.is_empty())
        .collect()
}

fn suggestions(c: &mut Criterion) {
    let (dict, confusions, words) = fixtures();
    let queries = misspell(&words, &confusions);
    let mut group = c.benchmark_group("suggest_many");
    group.sample_size(10);
    group.throughput(Throughput::Elements(queries.len() as u64));
    for (name, mode) in MODES {
        let s = Suggester::new(&dict, &confusions).with_execution(mode);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| s.suggest_many(&queries, 10)));
    }
    group.finish();
}

fn detection(c: &mut Criterion) {
    let (dict, confusions, words) = fixtures();
    let wrong = misspell(&words, &confusions);
    let correct: Vec<String> = words.iter().cycle().take(20_000).cloned().collect();
    let mut group = c.benchmark_group("eval_detection");
    group.throughput(Throughput::Elements((correct.len() + wrong.len()) as u64));
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| eval_detection_with(&dict, &correct, &wrong, mode))
        });
    }
    group.finish();
}

fn mining(c: &mut Criterion) {
    let (_, confusions, words) = fixtures();
    let wrong = misspell(&words, &confusions);
    let docs: Vec<(String, String)> = (0..64)
        .map(|d| {
            let (mut o, mut k) = (String::new(), String::new());
            for s in 0..40 {
                for j in 0..8 {
                    let i = (d * 331 + s * 17 + j) % words.len();
                    let pick = if j == 3 { &wrong[i % wrong.len()] } else { &words[i] };
                    o.push_str(pick);
                    o.push(' ');
                    k.push_str(&words[if j == 3 { i % wrong.len() } else { i }]);
                    k.push(' ');
                }
                o.push_str(".\n");
                k.push_str(".\n");
            }
            (o, k)
        })
        .collect();
    let mut group = c.benchmark_group("mine_many");
    group.throughput(Throughput::Elements(docs.len() as u64));
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| mine_many(&docs, mode)));
    }
    group.finish();
}

criterion_group!(benches, suggestions, detection, mining);
criterion_main!(benches);
