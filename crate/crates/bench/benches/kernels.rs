use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use tvkit::eval::ppmc;
use tvkit::features::{extract_mfcc, segment_matrix, znormalize, MfccConfig};
use tvkit::geometry::{circle_polyline_distance, circumcircle, point_polyline_distance, Circle, Point};
use tvkit::tract::{compute_tv_track, TvConfig};
use tvkit_bench::{clip, polyline, signals, utterance};

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("geometry");
    group.bench_function("circumcircle", |b| {
        let (p, q, r) = (Point::new(-40.0, -3.0), Point::new(-30.0, 2.0), Point::new(-20.0, 0.5));
        b.iter(|| circumcircle(black_box(p), black_box(q), black_box(r)))
    });
    for n in [16usize, 64, 256] {
        let poly = polyline(n);
        let circle = Circle::new(Point::new(-(n as f64) / 2.0, -20.0), 12.0).unwrap();
        group.bench_with_input(BenchmarkId::new("circle_polyline", n), &poly, |b, poly| {
            b.iter(|| circle_polyline_distance(black_box(&circle), black_box(poly), 0.05))
        });
        group.bench_with_input(BenchmarkId::new("point_polyline", n), &poly, |b, poly| {
            b.iter(|| point_polyline_distance(black_box(Point::new(-3.0, 2.0)), black_box(poly), 0.05))
        });
    }
    group.finish();
}

fn tract(c: &mut Criterion) {
    let (epal, utt) = utterance(5.0);
    let cfg = TvConfig::default();
    let mut group = c.benchmark_group("tract");
    group.throughput(Throughput::Elements(utt.pellets.len() as u64));
    group.bench_function("compute_tv_track_5s", |b| {
        b.iter(|| compute_tv_track(black_box(&utt.pellets), &epal, &cfg).unwrap())
    });
    group.finish();
}

fn features(c: &mut Criterion) {
    let audio = clip(2.0);
    let cfg = MfccConfig::default();
    let mut group = c.benchmark_group("features");
    group.throughput(Throughput::Elements(audio.samples().len() as u64));
    group.bench_function("mfcc_2s", |b| b.iter(|| extract_mfcc(black_box(&audio), &cfg).unwrap()));
    let m = extract_mfcc(&clip(30.0), &cfg).unwrap();
    group.bench_function("znorm_segment_30s", |b| {
        b.iter(|| segment_matrix(&znormalize(black_box(&m)).unwrap()).unwrap())
    });
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval");
    for n in [1_000usize, 100_000] {
        let (x, y) = signals(n);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("ppmc", n), &(x, y), |b, (x, y)| {
            b.iter(|| ppmc(black_box(x), black_box(y)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, geometry, tract, features, evaluation);
criterion_main!(benches);
