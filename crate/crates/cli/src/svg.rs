//! Presentational SVG output: braid diagrams (strand real parts against path
//! time, crossing markers) and heat maps of the Beltrami modulus on a grid
//! sample. No verdict logic lives here.

use holomotion::report::TracksExport;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

/// Braid diagram of one generator's tracks.
pub fn braid_diagram(tracks: &TracksExport, title: &str) -> String {
    let (w, h) = (640.0, 360.0);
    let (left, right, top, bottom) = (50.0, 20.0, 30.0, 30.0);
    let mut re_min = f64::INFINITY;
    let mut re_max = f64::NEG_INFINITY;
    for strand in &tracks.strands {
        for &(re, _) in strand {
            re_min = re_min.min(re);
            re_max = re_max.max(re);
        }
    }
    if re_max - re_min < 1e-9 {
        re_max = re_min + 1.0;
    }
    let pad = 0.05 * (re_max - re_min);
    re_min -= pad;
    re_max += pad;
    let x_of = |t: f64| lerp(left, w - right, t);
    let y_of = |re: f64| lerp(h - bottom, top, (re - re_min) / (re_max - re_min));

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"18\" font-family=\"monospace\" font-size=\"13\">{title}</text>\n",
        left
    ));
    out.push_str(&format!(
        "<rect x=\"{left}\" y=\"{top}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#ccc\"/>\n",
        w - left - right,
        h - top - bottom
    ));
    for (i, strand) in tracks.strands.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for (k, &(re, _)) in strand.iter().enumerate() {
            let t = tracks.times[k];
            points.push_str(&format!("{:.2},{:.2} ", x_of(t), y_of(re)));
        }
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.trim_end()
        ));
        let y0 = y_of(strand[0].0);
        out.push_str(&format!(
            "<text x=\"6\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" fill=\"{color}\">{i}</text>\n",
            y0 + 4.0
        ));
    }
    for c in &tracks.crossings {
        // mark at the crossing time, at the height of the first involved strand
        let (a, _) = c.strands;
        let re = interp_re(tracks, a, c.t);
        let fill = if c.sign > 0 { "#000" } else { "#fff" };
        out.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{fill}\" stroke=\"#000\"/>\n",
            x_of(c.t),
            y_of(re)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn interp_re(tracks: &TracksExport, strand: usize, t: f64) -> f64 {
    let times = &tracks.times;
    let track = &tracks.strands[strand];
    let idx = times.partition_point(|&x| x < t);
    if idx == 0 {
        return track[0].0;
    }
    if idx >= times.len() {
        return track[times.len() - 1].0;
    }
    let (t0, t1) = (times[idx - 1], times[idx]);
    let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
    lerp(track[idx - 1].0, track[idx].0, w)
}

/// Grayscale heat map of `|mu|` (Beltrami modulus estimate) on one grid
/// sample, from the stored image array.
pub fn beltrami_heatmap(
    images: &[(f64, f64)],
    nx: usize,
    ny: usize,
    step: f64,
    parameter: (f64, f64),
) -> String {
    let at = |i: usize, j: usize| {
        let (re, im) = images[j * nx + i];
        num_complex::Complex64::new(re, im)
    };
    let mut mu = vec![0.0f64; nx * ny];
    let mut mu_max = 0.0f64;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let fx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * step);
            let fy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * step);
            let fz = (fx - num_complex::Complex64::new(0.0, 1.0) * fy) / 2.0;
            let fzbar = (fx + num_complex::Complex64::new(0.0, 1.0) * fy) / 2.0;
            let v = if fz.norm() > 1e-12 {
                (fzbar / fz).norm()
            } else {
                0.0
            };
            mu[j * nx + i] = v;
            mu_max = mu_max.max(v);
        }
    }
    let cell = (520.0 / nx as f64).max(1.0);
    let w = cell * nx as f64 + 40.0;
    let h = cell * ny as f64 + 60.0;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" \
         viewBox=\"0 0 {w:.0} {h:.0}\">\n"
    ));
    out.push_str(&format!(
        "<text x=\"20\" y=\"18\" font-family=\"monospace\" font-size=\"13\">|mu| at parameter \
         {:.4}+{:.4}i (max {:.3e})</text>\n",
        parameter.0, parameter.1, mu_max
    ));
    let denom = if mu_max > 0.0 { mu_max } else { 1.0 };
    for j in 0..ny {
        for i in 0..nx {
            let v = mu[j * nx + i] / denom;
            let shade = (255.0 * (1.0 - v)).round() as u8;
            out.push_str(&format!(
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" \
                 fill=\"rgb({shade},{shade},{shade})\"/>\n",
                20.0 + i as f64 * cell,
                30.0 + (ny - 1 - j) as f64 * cell,
                cell,
                cell
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}
