use std::fs;

use potlab::game::GameShape;
use potlab::hodge::{
    cache_file_name, load_or_build, CacheSource, DecompositionOperators, OperatorCache, ShapeLimits,
};

fn shape(a: &[usize]) -> GameShape {
    GameShape::new(a.to_vec()).unwrap()
}

#[test]
fn second_instance_loads_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let s = shape(&[3, 4]);
    let first = OperatorCache::<f64>::with_dir(dir.path());
    let (a, src) = first.get_with_source(&s).unwrap();
    assert_eq!(src, CacheSource::Computed);
    let (_, src) = first.get_with_source(&s).unwrap();
    assert_eq!(src, CacheSource::Memory);
    assert!(dir.path().join("ops_v1_2x3-4.bin").exists());

    let second = OperatorCache::<f64>::with_dir(dir.path());
    let (b, src) = second.get_with_source(&s).unwrap();
    assert_eq!(src, CacheSource::Disk);
    assert_eq!(a.laplacian_pinv().data(), b.laplacian_pinv().data());
    let st = second.stats();
    assert_eq!((st.disk_loads, st.computed), (1, 0));
}

#[test]
fn corrupt_files_are_recomputed_and_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let s = shape(&[2, 2, 3]);
    let limits = ShapeLimits::default();
    let (fresh, _) = load_or_build::<f64>(&s, dir.path(), limits).unwrap();
    let path = dir.path().join(cache_file_name::<f64>(&s));
    let good = fs::read(&path).unwrap();

    let mut flipped = good.clone();
    let last = flipped.len() - 1;
    flipped[last] ^= 0xff;
    let damaged: [Vec<u8>; 3] = [flipped, good[..good.len() / 2].to_vec(), b"not a cache".to_vec()];
    for bytes in damaged {
        fs::write(&path, &bytes).unwrap();
        let (ops, src) = load_or_build::<f64>(&s, dir.path(), limits).unwrap();
        assert_eq!(src, CacheSource::Recomputed);
        assert_eq!(ops.laplacian_pinv().data(), fresh.laplacian_pinv().data());
        assert_eq!(fs::read(&path).unwrap(), good);
        assert_eq!(load_or_build::<f64>(&s, dir.path(), limits).unwrap().1, CacheSource::Disk);
    }
}

#[test]
fn precision_and_shape_get_separate_files() {
    let dir = tempfile::tempdir().unwrap();
    let s = shape(&[2, 3]);
    OperatorCache::<f64>::with_dir(dir.path()).get(&s).unwrap();
    OperatorCache::<f32>::with_dir(dir.path()).get(&s).unwrap();
    OperatorCache::<f64>::with_dir(dir.path()).get(&shape(&[3, 2])).unwrap();
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["ops_v1_2x2-3.bin", "ops_v1_2x2-3.f32.bin", "ops_v1_2x3-2.bin"]);
}

#[test]
fn shapes_beyond_the_ceiling_are_refused() {
    let big = shape(&[8, 8, 8, 8]);
    assert!(OperatorCache::<f64>::in_memory().get(&big).is_err());
    assert!(DecompositionOperators::<f64>::build(&big).is_err());
    let ceiling = [shape(&[12, 12, 12]), shape(&[7, 7, 7, 7])];
    for s in &ceiling {
        assert!(ShapeLimits::default().check(s).is_ok());
    }
}

#[test]
fn concurrent_requests_build_once() {
    let cache = OperatorCache::<f64>::in_memory();
    let s = shape(&[4, 4]);
    std::thread::scope(|scope| {
        for _ in 0..8 {
            scope.spawn(|| cache.get(&s).unwrap());
        }
    });
    let st = cache.stats();
    assert_eq!(st.computed, 1);
    assert_eq!(st.memory_hits, 7);
}
