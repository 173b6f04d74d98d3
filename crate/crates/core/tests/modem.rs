mod common;

use afsk_tnc::afsk::{demodulate, measure_tone_frequencies, modulate, AudioBuffer, ModemConfig};
use afsk_tnc::ax25::build_frame;
use afsk_tnc::channel::{apply_channel, frame_success_rate, ChannelSpec, GaussianNoise};
use afsk_tnc::hdlc::{
    add_flags, bytes_to_bits_lsb_first, nrzi_encode, stuff_bits, BitStream, Framed, FramingConfig,
};
use afsk_tnc::pipeline::{decode_audio, encode_audio, LinkConfig};
use common::{golden_frame, random_frame};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn noise_generator_matches_fixture() {
    let fixture = include_str!("fixtures/noise_seed42.txt");
    let mut noise = GaussianNoise::new(42);
    let mut n = 0;
    for line in fixture.lines().filter(|l| !l.starts_with('#')) {
        let expected: f64 = line.parse().unwrap();
        assert_eq!(noise.next_deviate(), expected);
        n += 1;
    }
    assert_eq!(n, 16);
}

fn frame_stream(
    count: usize,
    link: &LinkConfig,
    rng: &mut ChaCha8Rng,
) -> (Vec<Vec<u8>>, AudioBuffer) {
    let mut audio = AudioBuffer::silence(480, link.modem.sample_rate);
    let mut wires = Vec::new();
    for _ in 0..count {
        let (enc, burst) = encode_audio(&random_frame(rng), link).unwrap();
        wires.push(enc.bytes.to_wire());
        audio.append(&burst);
        audio.append(&AudioBuffer::silence(240, link.modem.sample_rate));
    }
    (wires, audio)
}

#[test]
fn hundred_frames_survive_one_percent_skew() {
    let link = LinkConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let (wires, audio) = frame_stream(100, &link, &mut rng);
    for ppm in [10_000.0, -10_000.0] {
        let spec = ChannelSpec {
            rate_skew_ppm: ppm,
            ..Default::default()
        };
        let (skewed, _) = apply_channel(&audio, &spec).unwrap();
        let decoded: Vec<Vec<u8>> = decode_audio(&skewed, &link.modem)
            .unwrap()
            .into_iter()
            .map(|d| d.raw)
            .collect();
        assert_eq!(decoded, wires, "skew {ppm} ppm");
    }
}

#[test]
fn forty_db_snr_decodes() {
    let link = LinkConfig::default();
    let (enc, audio) = encode_audio(&golden_frame(), &link).unwrap();
    let (noisy, _) = apply_channel(&audio, &ChannelSpec::with_snr(40.0, 5)).unwrap();
    let decoded = decode_audio(&noisy, &link.modem).unwrap();
    assert_eq!(decoded[0].raw, enc.bytes.to_wire());
}

#[test]
fn gain_and_dc_offset_tolerated() {
    let link = LinkConfig::default();
    let (_, audio) = encode_audio(&golden_frame(), &link).unwrap();
    let spec = ChannelSpec {
        gain: 0.2,
        dc_offset: 0.3,
        snr_db: Some(20.0),
        seed: 3,
        ..Default::default()
    };
    let (impaired, report) = apply_channel(&audio, &spec).unwrap();
    assert_eq!(report.clipped, 0);
    assert_eq!(
        decode_audio(&impaired, &link.modem).unwrap()[0]
            .parsed
            .frame,
        golden_frame()
    );
}

#[test]
fn success_rate_extremes() {
    let link = LinkConfig::default();
    let frame = golden_frame();
    let identity = frame_success_rate(&frame, &link, &ChannelSpec::default(), 100).unwrap();
    assert_eq!(identity, 1.0);
    let forty = frame_success_rate(&frame, &link, &ChannelSpec::with_snr(40.0, 9), 100).unwrap();
    assert!(forty >= 0.99, "{forty}");
    let awful = frame_success_rate(&frame, &link, &ChannelSpec::with_snr(-20.0, 9), 100).unwrap();
    assert_eq!(awful, 0.0);
    assert!(frame_success_rate(&frame, &link, &ChannelSpec::default(), 0).is_err());
}

#[test]
fn success_rate_is_deterministic() {
    let link = LinkConfig::default();
    let spec = ChannelSpec::with_snr(-1.0, 77);
    let a = frame_success_rate(&golden_frame(), &link, &spec, 40).unwrap();
    let b = frame_success_rate(&golden_frame(), &link, &spec, 40).unwrap();
    assert_eq!(a, b);
}

#[test]
fn frames_sharing_a_flag_decode_from_audio() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = build_frame(&random_frame(&mut rng)).unwrap().to_wire();
    let b = build_frame(&random_frame(&mut rng)).unwrap().to_wire();
    let mut bits = add_flags(
        &stuff_bits(&bytes_to_bits_lsb_first(&a)),
        &FramingConfig::new(25, 1).unwrap(),
    )
    .into_bits();
    bits.extend(
        add_flags(
            &stuff_bits(&bytes_to_bits_lsb_first(&b)),
            &FramingConfig::new(1, 2).unwrap(),
        )
        .into_bits()
        .split_off(8),
    );
    let levels = nrzi_encode(&BitStream::<Framed>::from_bits(bits), true);
    let cfg = ModemConfig::default();
    let audio = modulate(&levels, &cfg).unwrap();
    let raws: Vec<Vec<u8>> = decode_audio(&audio, &cfg)
        .unwrap()
        .into_iter()
        .map(|d| d.raw)
        .collect();
    assert_eq!(raws, vec![a, b]);
}

#[test]
fn demodulated_levels_match_modulated() {
    let link = LinkConfig::default();
    for rate in [8000, 11_025, 22_050, 44_100, 48_000] {
        let link = LinkConfig {
            modem: ModemConfig::with_sample_rate(rate),
            ..link
        };
        let (enc, audio) = encode_audio(&golden_frame(), &link).unwrap();
        assert_eq!(
            demodulate(&audio, &link.modem).unwrap(),
            enc.levels,
            "{rate} Hz"
        );
    }
}

#[test]
fn tones_of_an_encoded_packet() {
    // Long alternating runs, at least 10 symbols of each tone.
    let cfg = ModemConfig::with_sample_rate(44_100);
    let levels = BitStream::from_bits((0..2400).map(|i| (i / 40) % 2 == 1).collect());
    let (mark, space) = measure_tone_frequencies(&modulate(&levels, &cfg).unwrap()).unwrap();
    assert!((mark - 1200.0).abs() <= 10.0, "{mark}");
    assert!((space - 2200.0).abs() <= 10.0, "{space}");
}
