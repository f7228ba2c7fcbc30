//! Properties of the thirteen transforms, checked with independent oracles.

use std::f64::consts::{PI, TAU};

use eegaug::augment::*;
use eegaug::dsp::{periodogram, Axis, SplineConfig};
use eegaug::ndarray::Array2;
use eegaug::{derive_stream, EegWindow, Error, Montage};
use proptest::prelude::*;

fn random_window(c: usize, t: usize, sfreq: f64, seed: u64) -> EegWindow {
    let mut rng = derive_stream(seed, 99, 0);
    let data = Array2::from_shape_fn((c, t), |_| rng.normal());
    EegWindow::new(data, sfreq, 0).unwrap()
}

fn sine(f: f64, n: usize, sfreq: f64) -> Vec<f64> {
    (0..n).map(|i| (TAU * f * i as f64 / sfreq).sin()).collect()
}

fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

fn periodograms_match(a: &EegWindow, b: &EegWindow, rel: f64) -> bool {
    (0..a.n_channels()).all(|c| {
        let pa = periodogram(&a.row(c), a.sfreq()).unwrap();
        let pb = periodogram(&b.row(c), b.sfreq()).unwrap();
        let scale = pa.power.iter().cloned().fold(0.0, f64::max);
        pa.power
            .iter()
            .zip(&pb.power)
            .all(|(x, y)| (x - y).abs() <= rel * x.abs().max(scale * 1e-6))
    })
}

fn permuted(w: &EegWindow, perm: &[usize]) -> EegWindow {
    let src = w.data();
    let data = Array2::from_shape_fn(src.dim(), |(c, t)| src[(perm[c], t)]);
    EegWindow::new(data, w.sfreq(), w.label()).unwrap()
}

fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[test]
fn time_reverse_example() {
    let w = EegWindow::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]], 1.0, 0).unwrap();
    let r = time_reverse(&w);
    assert_eq!(r.row(0), vec![3.0, 2.0, 1.0]);
    assert_eq!(r.row(1), vec![6.0, 5.0, 4.0]);
}

#[test]
fn sign_flip_example() {
    let w = EegWindow::from_rows(&[vec![1.0, -2.0]], 1.0, 0).unwrap();
    assert_eq!(sign_flip(&w).row(0), vec![-1.0, 2.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reverse_and_flip_are_spectrum_preserving_involutions(
        c in 1usize..5, t in 2usize..400, seed in any::<u64>()
    ) {
        let w = random_window(c, t, 100.0, seed);
        prop_assert_eq!(&time_reverse(&time_reverse(&w)), &w);
        prop_assert_eq!(&sign_flip(&sign_flip(&w)), &w);
        prop_assert!(periodograms_match(&w, &time_reverse(&w), 1e-9));
        prop_assert!(periodograms_match(&w, &sign_flip(&w), 1e-9));
    }

    #[test]
    fn surrogate_preserves_dft_magnitudes(
        c in 1usize..4, t in 3usize..300, phase in 0.0f64..(2.0 * PI - 1e-9), seed in any::<u64>()
    ) {
        let w = random_window(c, t, 100.0, seed);
        for mode in [ChannelMode::Independent, ChannelMode::Shared] {
            let p = SurrogateParams { max_phase: phase, channel_mode: mode };
            let out = ft_surrogate(&w, &p, &mut derive_stream(seed, 0, 0)).unwrap();
            prop_assert!(periodograms_match(&w, &out, 1e-9));
            let e_in: f64 = w.data().iter().map(|v| v * v).sum();
            let e_out: f64 = out.data().iter().map(|v| v * v).sum();
            prop_assert!((e_in - e_out).abs() <= 1e-9 * e_in);
        }
    }

    #[test]
    fn mask_stays_in_unit_interval(
        sfreq in 10.0f64..500.0, t_cut in 0.0f64..5.0, len in 0.0f64..3.0, lambda in 0.1f64..200.0
    ) {
        for m in time_mask(600, sfreq, t_cut, len, lambda) {
            prop_assert!(m > 0.0 || len > 0.0);
            prop_assert!(m >= 0.0 && m < 1.0 + 1e-9);
        }
    }

    #[test]
    fn dropout_zeroes_or_keeps_rows(c in 1usize..10, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let w = random_window(c, 16, 50.0, seed);
        let out = channels_dropout(&w, p, &mut derive_stream(seed, 1, 0)).unwrap();
        for ch in 0..c {
            let row = out.row(ch);
            prop_assert!(row == w.row(ch) || row.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn shuffle_permutes_rows(c in 1usize..10, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let w = random_window(c, 8, 50.0, seed);
        let out = channels_shuffle(&w, p, &mut derive_stream(seed, 2, 0)).unwrap();
        let mut used = vec![false; c];
        for ch in 0..c {
            let src = (0..c).find(|&s| !used[s] && out.row(ch) == w.row(s));
            prop_assert!(src.is_some());
            used[src.unwrap()] = true;
        }
    }

    #[test]
    fn time_transforms_commute_with_channel_permutation(
        c in 2usize..6, seed in any::<u64>(), rot in 0usize..6
    ) {
        let w = random_window(c, 200, 100.0, seed);
        let perm: Vec<usize> = (0..c).map(|i| (i + rot) % c).collect();
        let pw = permuted(&w, &perm);
        prop_assert_eq!(time_reverse(&pw), permuted(&time_reverse(&w), &perm));
        prop_assert_eq!(sign_flip(&pw), permuted(&sign_flip(&w), &perm));
        let mask = TimeMaskParams::new(0.5);
        let a = smooth_time_mask(&pw, &mask, &mut derive_stream(seed, 3, 0)).unwrap();
        let b = smooth_time_mask(&w, &mask, &mut derive_stream(seed, 3, 0)).unwrap();
        prop_assert_eq!(a, permuted(&b, &perm));
        // The noise field is drawn independently of the data, so the added
        // perturbation is the same matrix for both inputs.
        let na = gaussian_noise(&pw, 0.3, &mut derive_stream(seed, 4, 0)).unwrap();
        let nb = gaussian_noise(&w, 0.3, &mut derive_stream(seed, 4, 0)).unwrap();
        let ea = na.data() - pw.data();
        let eb = nb.data() - w.data();
        prop_assert!(max_abs(&(&ea - &eb)) < 1e-12);
    }

    #[test]
    fn rotation_is_linear(seed in any::<u64>(), alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let m = Montage::standard_first(12).unwrap();
        let x = random_window(12, 20, 100.0, seed);
        let y = random_window(12, 20, 100.0, seed ^ 1);
        let mix = EegWindow::new(x.data() * alpha + y.data() * beta, 100.0, 0).unwrap();
        let rot = |w: &EegWindow| {
            sensors_rotation(w, &m, Axis::Y, 12.0, &mut derive_stream(seed, 5, 0)).unwrap()
        };
        let lhs = rot(&mix);
        let rhs = rot(&x).data() * alpha + rot(&y).data() * beta;
        prop_assert!(max_abs(&(lhs.data() - &rhs)) < 1e-9);
    }
}

#[test]
fn zero_noise_is_identity() {
    let w = random_window(3, 50, 100.0, 1);
    assert_eq!(gaussian_noise(&w, 0.0, &mut derive_stream(0, 0, 0)).unwrap(), w);
    assert!(matches!(
        gaussian_noise(&w, -0.1, &mut derive_stream(0, 0, 0)),
        Err(Error::Param(_))
    ));
}

#[test]
fn sleep_sigma_noise_variance() {
    let w = EegWindow::new(Array2::zeros((2, 3000)), 100.0, 0).unwrap();
    let out = gaussian_noise(&w, 0.12, &mut derive_stream(7, 0, 0)).unwrap();
    let n = 6000.0;
    let mean = out.data().sum() / n;
    let var = out.data().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((0.0137..=0.0151).contains(&var), "{var}");
}

#[test]
fn noise_moments_at_one_million_samples() {
    let w = EegWindow::new(Array2::zeros((10, 100_000)), 100.0, 0).unwrap();
    let sigma = 0.5;
    let out = gaussian_noise(&w, sigma, &mut derive_stream(3, 0, 0)).unwrap();
    let n = 1e6;
    let mean = out.data().sum() / n;
    let var = out.data().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    // 99% normal interval for the mean and chi-square interval for the variance.
    assert!(mean.abs() < 2.576 * sigma / n.sqrt(), "{mean}");
    let half = 2.576 * sigma * sigma * (2.0 / n).sqrt();
    assert!((var - sigma * sigma).abs() < half, "{var}");
}

#[test]
fn noise_is_reproducible() {
    let w = random_window(2, 64, 100.0, 2);
    let a = gaussian_noise(&w, 0.2, &mut derive_stream(5, 17, 1)).unwrap();
    let b = gaussian_noise(&w, 0.2, &mut derive_stream(5, 17, 1)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn zero_length_mask_with_sharp_transition_is_identity() {
    let (sfreq, n) = (100.0, 500);
    let lambda = 8.0 * sfreq;
    let w = random_window(2, n, sfreq, 4);
    let p = TimeMaskParams { mask_len: 0.0, temperature: Some(lambda) };
    // Put the cut between samples so no sample sits on the crossing.
    let out = smooth_time_mask_at(&w, &p, 2.005).unwrap();
    let scale = max_abs(w.data());
    assert!(max_abs(&(out.data() - w.data())) < 1e-3 * scale);
}

#[test]
fn two_second_mask_on_a_thirty_second_window() {
    let sfreq = 250.0;
    let n = 30 * 250;
    let w = random_window(2, n, sfreq, 6);
    let p = TimeMaskParams::new(2.0);
    let lambda = p.temperature_for(sfreq);
    let t_cut = 10.0;
    let out = smooth_time_mask_at(&w, &p, t_cut).unwrap();
    let margin = 3.0 / lambda;
    let mean_abs = |x: &EegWindow, keep: &dyn Fn(f64) -> bool| {
        let mut s = 0.0;
        let mut k = 0;
        for c in 0..2 {
            for (i, v) in x.row(c).iter().enumerate() {
                if keep(i as f64 / sfreq) {
                    s += v.abs();
                    k += 1;
                }
            }
        }
        s / k as f64
    };
    let interior = |t: f64| t > t_cut + margin && t < t_cut + 2.0 - margin;
    assert!(mean_abs(&out, &interior) <= 1e-3 * mean_abs(&w, &|_| true));
    for c in 0..2 {
        let (a, b) = (w.row(c), out.row(c));
        for i in 0..n {
            let t = i as f64 / sfreq;
            if t < t_cut - margin || t > t_cut + 2.0 + margin {
                assert!((a[i] - b[i]).abs() <= 0.05 * a[i].abs());
            }
        }
    }
}

#[test]
fn mask_longer_than_window_is_rejected() {
    let w = random_window(1, 100, 100.0, 0);
    let r = smooth_time_mask(&w, &TimeMaskParams::new(1.5), &mut derive_stream(0, 0, 0));
    assert!(matches!(r, Err(Error::Param(_))));
}

#[test]
fn zero_frequency_shift_round_trips() {
    for t in [256, 1000, 1021] {
        let w = random_window(3, t, 128.0, t as u64);
        let p = FreqShiftParams { max_shift: 0.0 };
        let out = frequency_shift(&w, &p, &mut derive_stream(0, 0, 0)).unwrap();
        assert!(max_abs(&(out.data() - w.data())) < 1e-6 * max_abs(w.data()));
    }
}

#[test]
fn forced_shift_moves_the_peak() {
    let (n, sfreq) = (1024, 128.0);
    let w = EegWindow::from_rows(&[sine(10.0, n, sfreq)], sfreq, 0).unwrap();
    let out = shift_by(&w, 2.0).unwrap();
    let p = periodogram(&out.row(0), sfreq).unwrap();
    assert!((p.peak_frequency() - 12.0).abs() <= p.bin_width());
}

#[test]
fn sleep_shift_keeps_peak_within_support() {
    let (n, sfreq) = (1280, 128.0);
    let w = EegWindow::from_rows(&[sine(12.0, n, sfreq)], sfreq, 0).unwrap();
    let p = FreqShiftParams { max_shift: 0.3 };
    for i in 0..1000 {
        let out = frequency_shift(&w, &p, &mut derive_stream(1, i, 0)).unwrap();
        let f = periodogram(&out.row(0), sfreq).unwrap().peak_frequency();
        assert!((11.7 - 1e-9..=12.3 + 1e-9).contains(&f), "{f}");
    }
}

#[test]
fn shift_must_stay_below_quarter_rate() {
    let w = random_window(1, 64, 100.0, 0);
    let p = FreqShiftParams { max_shift: 25.0 };
    assert!(matches!(
        frequency_shift(&w, &p, &mut derive_stream(0, 0, 0)),
        Err(Error::Param(_))
    ));
}

#[test]
fn zero_phase_surrogate_is_identity() {
    let w = random_window(3, 301, 100.0, 8);
    let p = SurrogateParams { max_phase: 0.0, channel_mode: ChannelMode::Independent };
    let out = ft_surrogate(&w, &p, &mut derive_stream(0, 0, 0)).unwrap();
    assert!(max_abs(&(out.data() - w.data())) < 1e-9);
}

#[test]
fn surrogate_channel_modes() {
    let row = random_window(1, 256, 100.0, 3).row(0);
    let w = EegWindow::from_rows(&[row.clone(), row], 100.0, 0).unwrap();
    let shared = SurrogateParams { max_phase: 0.9 * PI, channel_mode: ChannelMode::Shared };
    let out = ft_surrogate(&w, &shared, &mut derive_stream(0, 0, 0)).unwrap();
    assert_eq!(out.row(0), out.row(1));
    let indep = SurrogateParams { max_phase: 0.9 * PI, channel_mode: ChannelMode::Independent };
    let out = ft_surrogate(&w, &indep, &mut derive_stream(0, 0, 0)).unwrap();
    assert_ne!(out.row(0), out.row(1));
}

#[test]
fn bandstop_attenuates_a_tone_at_the_forced_center() {
    // 6000 samples lift the T/3 tap cap above the design length for 0.4 Hz.
    let (n, sfreq) = (6000, 100.0);
    let w = EegWindow::from_rows(&[sine(20.0, n, sfreq)], sfreq, 0).unwrap();
    let out = bandstop_at(&w, 20.0, 0.4).unwrap();
    let edge = n / 3;
    let before = rms(&w.row(0)[edge..n - edge]);
    let after = rms(&out.row(0)[edge..n - edge]);
    assert!(20.0 * (after / before).log10() <= -25.0, "{after} vs {before}");
}

#[test]
fn bandstop_passes_a_distant_tone() {
    let (n, sfreq) = (6000, 100.0);
    let w = EegWindow::from_rows(&[sine(35.0, n, sfreq)], sfreq, 0).unwrap();
    let out = bandstop_at(&w, 20.0, 0.4).unwrap();
    let change = (rms(&out.row(0)) / rms(&w.row(0)) - 1.0).abs();
    assert!(change < 0.05, "{change}");
}

#[test]
fn bandstop_center_is_clamped_at_the_edges() {
    let w = random_window(2, 300, 100.0, 1);
    let p = BandstopParams { width: 0.4 };
    let (lo, hi) = p.center_range(100.0).unwrap();
    assert!(bandstop_at(&w, lo, 0.4).is_ok());
    assert!(bandstop_at(&w, hi, 0.4).is_ok());
    for i in 0..200 {
        assert!(bandstop_filter(&w, &p, &mut derive_stream(2, i, 0)).is_ok());
    }
}

#[test]
fn symmetry_swaps_hemispheres() {
    let m = Montage::from_names(&["C3", "C4", "Cz"]);
    let w =EegWindow::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]], 1.0, 0).unwrap();
    let out = channels_symmetry(&w, &m).unwrap();
    assert_eq!(out.row(0), vec![2.0, 2.0]);
    assert_eq!(out.row(1), vec![1.0, 1.0]);
    assert_eq!(out.row(2), vec![3.0, 3.0]);
    assert_eq!(channels_symmetry(&out, &m).unwrap(), w);
}

#[test]
fn symmetry_on_22_channels_is_disjoint_transpositions() {
    let m = Montage::standard_first(22).unwrap();
    let perm = m.pairing().unwrap().permutation(22);
    for (i, &j) in perm.iter().enumerate() {
        assert_eq!(perm[j], i);
    }
    let w = random_window(22, 10, 10.0, 0);
    let twice = channels_symmetry(&channels_symmetry(&w, &m).unwrap(), &m).unwrap();
    assert_eq!(twice, w);
}

#[test]
fn dropout_extremes() {
    let w = random_window(5, 20, 10.0, 0);
    assert_eq!(channels_dropout(&w, 0.0, &mut derive_stream(0, 0, 0)).unwrap(), w);
    let all = channels_dropout(&w, 1.0, &mut derive_stream(0, 0, 0)).unwrap();
    assert!(all.data().iter().all(|&v| v == 0.0));
    assert_eq!(channels_shuffle(&w, 0.0, &mut derive_stream(0, 0, 0)).unwrap(), w);
}

fn dipole_window(m: &Montage, t: usize) -> EegWindow {
    let pos = m.positions().unwrap();
    let data = Array2::from_shape_fn((pos.len(), t), |(c, i)| {
        let p = pos[c];
        (0.3 * p[0] - 0.5 * p[1] + 0.8 * p[2]) * (1.0 + 0.1 * i as f64)
    });
    EegWindow::new(data, 100.0, 0).unwrap()
}

#[test]
fn rotation_reproduces_constant_potential() {
    let m = Montage::standard_first(22).unwrap();
    let w = EegWindow::new(Array2::from_elem((22, 4), 2.0), 100.0, 0).unwrap();
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        let out = rotate_sensors_by(&w, &m, axis, 17.0, SplineConfig::default()).unwrap();
        assert!(out.data().iter().all(|v| (v - 2.0).abs() < 1e-6));
    }
}

#[test]
fn rotation_round_trip_on_a_dipole_field() {
    let m = Montage::standard_first(22).unwrap();
    let w = dipole_window(&m, 5);
    let cfg = SplineConfig::default();
    let there = rotate_sensors_by(&w, &m, Axis::Y, 12.0, cfg).unwrap();
    let back = rotate_sensors_by(&there, &m, Axis::Y, -12.0, cfg).unwrap();
    let err = (back.data() - w.data()).mapv(|v| v * v).mean().unwrap().sqrt();
    let sig = w.data().mapv(|v| v * v).mean().unwrap().sqrt();
    assert!(err < 0.05 * sig, "{err} vs {sig}");
}

#[test]
fn rotation_error_shrinks_with_the_angle() {
    let m = Montage::standard_first(22).unwrap();
    let w = dipole_window(&m, 3);
    let mut last = f64::INFINITY;
    for deg in [30.0, 20.0, 10.0, 5.0, 2.0, 0.0] {
        let out = rotate_sensors_by(&w, &m, Axis::Z, deg, SplineConfig::default()).unwrap();
        let e = max_abs(&(out.data() - w.data()));
        assert!(e <= last, "{deg}: {e} > {last}");
        last = e;
    }
}

#[test]
fn rotation_needs_positions() {
    let m = Montage::from_names(&["A", "B", "C"]);
    let w = random_window(3, 10, 10.0, 0);
    let r = sensors_rotation(&w, &m, Axis::X, 10.0, &mut derive_stream(0, 0, 0));
    assert!(matches!(r, Err(Error::MissingPositions(_))));
}
