//! Binary PPM spectrogram images.

use crate::stft::Spectrogram;

pub const GAMMA: f64 = 100.0;

/// One column per frame, one row per bin, low frequencies at the bottom,
/// grey level `255 * ln(1 + g v) / ln(1 + g vmax)`.
pub fn render_spectrogram_ppm(spec: &Spectrogram) -> Vec<u8> {
    let width = spec.frames.len();
    let height = spec.bins();
    let vmax = spec.frames.iter().flatten().cloned().fold(0.0, f64::max);
    let denom = (1.0 + GAMMA * vmax).ln();
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(width * height * 3);
    for row in 0..height {
        let bin = height - 1 - row;
        for frame in &spec.frames {
            let g = if vmax > 0.0 {
                (255.0 * (1.0 + GAMMA * frame[bin].max(0.0)).ln() / denom).round() as u8
            } else {
                0
            };
            out.extend_from_slice(&[g, g, g]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(frames: Vec<Vec<f64>>) -> Spectrogram {
        Spectrogram {
            frames,
            frame_hop: 2,
            window_size: 4,
            sample_rate: 8000,
        }
    }

    fn pixels(img: &[u8]) -> &[u8] {
        let mut newlines = 0;
        let start = img
            .iter()
            .position(|&b| {
                if b == b'\n' {
                    newlines += 1;
                }
                newlines == 3
            })
            .unwrap();
        &img[start + 1..]
    }

    #[test]
    fn zeros_are_black() {
        let img = render_spectrogram_ppm(&spec(vec![vec![0.0; 3]; 5]));
        assert!(img.starts_with(b"P6\n5 3\n255\n"));
        let px = pixels(&img);
        assert_eq!(px.len(), 5 * 3 * 3);
        assert!(px.iter().all(|&b| b == 0));
    }

    #[test]
    fn impulse_lights_one_pixel_per_column() {
        let frames = vec![vec![0.0, 0.0, 2.0]; 4];
        let img = render_spectrogram_ppm(&spec(frames));
        let px = pixels(&img);
        for col in 0..4 {
            let lit: Vec<usize> = (0..3).filter(|&row| px[(row * 4 + col) * 3] != 0).collect();
            // bin 2 is the highest bin, so it sits on the top row
            assert_eq!(lit, vec![0]);
            assert_eq!(px[col * 3], 255);
        }
    }
}
