use std::path::Path;

use wavemark::attacks::Attack;
use wavemark::codec::{
    embed, extract, extract_with, read_side_info, Decoder, EmbedParams, SideInfo, Watermark,
};
use wavemark::image_io::{read_pgm, write_pgm};
use wavemark::metrics::{ber, psnr};
use wavemark::{Error, Image};

fn camera() -> Image {
    read_pgm(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/covers/camera.pgm")).unwrap()
}

#[test]
fn files_round_trip_through_disk() {
    let cover = camera();
    let wm = Watermark::random(256, 11).unwrap();
    let marked = embed(&cover, &wm, &EmbedParams::default()).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let img_path = dir.path().join("w.pgm");
    let side_path = dir.path().join("w.wmsi");
    write_pgm(&marked.image, &img_path).unwrap();
    marked.side_info.write(&side_path).unwrap();

    let side = read_side_info(&side_path).unwrap();
    assert_eq!(side, marked.side_info);
    assert_eq!(std::fs::metadata(&side_path).unwrap().len(), 36 + 33 * 4096);
    let bits = extract(&read_pgm(&img_path).unwrap(), &side).unwrap();
    assert_eq!(bits, wm.bits());
}

#[test]
fn psnr_lands_on_target() {
    let cover = camera();
    let wm = Watermark::random(128, 3).unwrap();
    for target in [38.0, 45.0, 52.0] {
        let params = EmbedParams {
            target_psnr: Some(target),
            ..EmbedParams::default()
        };
        let marked = embed(&cover, &wm, &params).unwrap();
        let p = psnr(&cover, &marked.image).unwrap();
        assert!((p - target).abs() <= 0.1, "target {target} got {p}");
    }
}

#[test]
fn majority_no_worse_than_approximation_under_jpeg() {
    let cover = camera();
    let wm = Watermark::random(128, 4).unwrap();
    let marked = embed(&cover, &wm, &EmbedParams::default()).unwrap();
    let attacked = Attack::Jpeg { quality: 20 }
        .apply(&marked.image, 0)
        .unwrap();
    let m = ber(
        wm.bits(),
        &extract_with(&attacked, &marked.side_info, Decoder::Majority).unwrap(),
    )
    .unwrap();
    let a = ber(
        wm.bits(),
        &extract_with(&attacked, &marked.side_info, Decoder::ApproximationOnly).unwrap(),
    )
    .unwrap();
    assert!(m <= a, "majority {m} approximation {a}");
}

#[test]
fn side_info_must_match_image() {
    let cover = camera();
    let wm = Watermark::random(64, 0).unwrap();
    let marked = embed(&cover, &wm, &EmbedParams::default()).unwrap();
    let small = Image::filled(256, 256, 0).unwrap();
    assert!(matches!(
        extract(&small, &marked.side_info),
        Err(Error::Dimensions(_))
    ));

    let mut bytes = marked.side_info.to_bytes();
    bytes.truncate(bytes.len() - 5);
    assert!(matches!(
        SideInfo::from_bytes(&bytes),
        Err(Error::Truncated { .. })
    ));
}

#[test]
fn message_longer_than_block_count_is_rejected() {
    let cover = Image::filled(64, 64, 100).unwrap();
    let wm = Watermark::random(65, 0).unwrap();
    assert!(embed(&cover, &wm, &EmbedParams::default()).is_err());
}
