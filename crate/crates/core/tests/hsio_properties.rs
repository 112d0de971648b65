use hsrmamba::hsio::{
    decode_cube, degrade, encode_cube, extract_patches, load_cube, save_cube, synth_cube, HsiCube,
    SampleType, SynthProfile,
};
use hsrmamba::{Rng, Tensor};
use proptest::prelude::*;

fn cube(seed: u64, h: usize, w: usize, b: usize) -> HsiCube {
    let mut rng = Rng::new(seed);
    HsiCube::new(Tensor::from_fn(&[h, w, b], |_| rng.unit())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encode_decode_roundtrip(seed in any::<u64>(), (h, w, b) in (1usize..9, 1usize..9, 1usize..9)) {
        let c = cube(seed, h, w, b);
        prop_assert_eq!(&decode_cube(&encode_cube(&c, SampleType::F64).unwrap()).unwrap(), &c);
        let narrow = decode_cube(&encode_cube(&c, SampleType::F32).unwrap()).unwrap();
        prop_assert_eq!(&decode_cube(&encode_cube(&narrow, SampleType::F32).unwrap()).unwrap(), &narrow);
    }

    #[test]
    fn patch_count_formula(
        (h, w) in (1usize..40, 1usize..40),
        patch in 1usize..20,
        stride in 1usize..20,
    ) {
        prop_assume!(patch <= h && patch <= w);
        let c = cube(0, h, w, 1);
        let n = ((h - patch) / stride + 1) * ((w - patch) / stride + 1);
        prop_assert_eq!(extract_patches(&c, patch, stride).unwrap().len(), n);
    }

    #[test]
    fn synth_degrade_pipeline_is_reproducible(seed in any::<u64>(), s in prop::sample::select(vec![2usize, 4])) {
        let run = || {
            let hr = synth_cube(&mut Rng::new(seed), 16, 16, 4, SynthProfile::Mixtures { materials: 2 }).unwrap();
            degrade(&hr, s).unwrap()
        };
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn file_roundtrip_and_atomic_overwrite() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.hsc");
    let a = cube(1, 6, 5, 3);
    save_cube(&path, &a, SampleType::F64).unwrap();
    let b = cube(2, 4, 4, 2);
    save_cube(&path, &b, SampleType::F64).unwrap();
    assert_eq!(load_cube(&path).unwrap(), b);
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);
}
