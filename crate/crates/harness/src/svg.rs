//! Static SVG chart emission — plain text generation, no plotting crate.
//!
//! Two chart shapes cover every report: grouped bars (solid for train,
//! hatched for held-out metrics) and a log-y line chart for the runtime
//! scaling comparison.

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 180.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 90.0;

const PALETTE: [&str; 5] = ["#4878cf", "#ee854a", "#6acc65", "#d65f5f", "#956cb4"];

pub struct Bar {
    pub label: String,
    pub value: f64,
    pub hatched: bool,
    /// Palette index.
    pub color: usize,
}

pub struct BarGroup {
    pub label: String,
    pub bars: Vec<Bar>,
}

pub struct LineSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(title: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    ));
    s.push('\n');
    s.push_str("<defs>");
    for (i, color) in PALETTE.iter().enumerate() {
        s.push_str(&format!(
            r#"<pattern id="hatch{i}" patternUnits="userSpaceOnUse" width="6" height="6" patternTransform="rotate(45)"><rect width="6" height="6" fill="{color}" fill-opacity="0.35"/><line x1="0" y1="0" x2="0" y2="6" stroke="{color}" stroke-width="2.5"/></pattern>"#
        ));
    }
    s.push_str("</defs>\n");
    s.push_str(&format!(
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/><text x="{x}" y="28" font-size="17" font-family="sans-serif" text-anchor="middle">{t}</text>"#,
        x = WIDTH / 2.0,
        t = esc(title)
    ));
    s.push('\n');
    s
}

fn nice_ceil(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(v.log10().floor());
    let normalized = v / mag;
    let nice = if normalized <= 1.0 {
        1.0
    } else if normalized <= 2.0 {
        2.0
    } else if normalized <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

/// Grouped bar chart. One `<rect class="bar">` per bar; hatched bars use a
/// diagonal pattern fill.
pub fn grouped_bar_chart(title: &str, y_label: &str, groups: &[BarGroup]) -> String {
    let mut s = header(title);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let y_max = nice_ceil(
        groups
            .iter()
            .flat_map(|g| g.bars.iter().map(|b| b.value))
            .fold(0.0f64, f64::max),
    );

    // Axes and y ticks.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    s.push_str(&format!(
        r#"<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#,
        x1 = x0 + plot_w
    ));
    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let y = y0 - plot_h * i as f64 / 5.0;
        s.push_str(&format!(
            r#"<line x1="{xa}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/><text x="{xt}" y="{yt}" font-size="11" font-family="sans-serif" text-anchor="end">{v:.3}</text>"#,
            xa = x0 - 5.0,
            xt = x0 - 8.0,
            yt = y + 4.0
        ));
    }
    s.push_str(&format!(
        r#"<text x="18" y="{y}" font-size="13" font-family="sans-serif" transform="rotate(-90 18 {y})" text-anchor="middle">{l}</text>"#,
        y = MARGIN_TOP + plot_h / 2.0,
        l = esc(y_label)
    ));

    // Bars.
    let n_groups = groups.len().max(1) as f64;
    let group_w = plot_w / n_groups;
    let mut legend: Vec<(String, usize, bool)> = Vec::new();
    for (gi, group) in groups.iter().enumerate() {
        let n_bars = group.bars.len().max(1) as f64;
        let bar_w = (group_w * 0.8) / n_bars;
        for (bi, bar) in group.bars.iter().enumerate() {
            let x = x0 + gi as f64 * group_w + group_w * 0.1 + bi as f64 * bar_w;
            let h = if y_max > 0.0 {
                (bar.value.max(0.0) / y_max) * plot_h
            } else {
                0.0
            };
            let fill = if bar.hatched {
                format!("url(#hatch{})", bar.color % PALETTE.len())
            } else {
                PALETTE[bar.color % PALETTE.len()].to_string()
            };
            s.push_str(&format!(
                r#"<rect class="bar" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}" stroke="black" stroke-width="0.5"><title>{t}</title></rect>"#,
                y = y0 - h,
                w = bar_w * 0.92,
                t = esc(&format!("{} {}: {:.5}", group.label, bar.label, bar.value)),
            ));
            if !legend.iter().any(|(l, c, ht)| *l == bar.label && *c == bar.color && *ht == bar.hatched) {
                legend.push((bar.label.clone(), bar.color, bar.hatched));
            }
        }
        // Group label, angled to fit.
        let lx = x0 + (gi as f64 + 0.5) * group_w;
        s.push_str(&format!(
            r#"<text x="{lx:.1}" y="{ly:.1}" font-size="10" font-family="sans-serif" text-anchor="end" transform="rotate(-30 {lx:.1} {ly:.1})">{t}</text>"#,
            ly = y0 + 16.0,
            t = esc(&group.label)
        ));
    }

    // Legend.
    for (i, (label, color, hatched)) in legend.iter().enumerate() {
        let lx = WIDTH - MARGIN_RIGHT + 16.0;
        let ly = MARGIN_TOP + 10.0 + i as f64 * 22.0;
        let fill = if *hatched {
            format!("url(#hatch{})", color % PALETTE.len())
        } else {
            PALETTE[color % PALETTE.len()].to_string()
        };
        s.push_str(&format!(
            r#"<rect x="{lx}" y="{ly}" width="16" height="12" fill="{fill}" stroke="black" stroke-width="0.5"/><text x="{tx}" y="{ty}" font-size="12" font-family="sans-serif">{t}</text>"#,
            tx = lx + 22.0,
            ty = ly + 10.0,
            t = esc(label)
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// Log-y line chart with markers; y values must be positive.
pub fn log_line_chart(title: &str, x_label: &str, y_label: &str, series: &[LineSeries]) -> String {
    let mut s = header(title);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;

    let all_points: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|sr| sr.points.iter().copied())
        .filter(|(_, y)| *y > 0.0)
        .collect();
    let (x_min, x_max) = all_points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (x, _)| {
            (lo.min(*x), hi.max(*x))
        });
    let (y_min, y_max) = all_points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, y)| {
            (lo.min(*y), hi.max(*y))
        });
    let (ld, lu) = (y_min.log10().floor(), y_max.log10().ceil());
    let (ld, lu) = if lu - ld < 1.0 { (ld, ld + 1.0) } else { (ld, lu) };
    let x_span = (x_max - x_min).max(1e-9);

    let sx = |x: f64| x0 + (x - x_min) / x_span * plot_w;
    let sy = |y: f64| y0 - (y.log10() - ld) / (lu - ld) * plot_h;

    s.push_str(&format!(
        r#"<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#,
        x1 = x0 + plot_w
    ));
    let mut decade = ld;
    while decade <= lu {
        let y = y0 - (decade - ld) / (lu - ld) * plot_h;
        s.push_str(&format!(
            r#"<line x1="{xa}" y1="{y:.1}" x2="{xb}" y2="{y:.1}" stroke="{grid}" stroke-dasharray="3,3"/><text x="{xt}" y="{yt:.1}" font-size="11" font-family="sans-serif" text-anchor="end">1e{decade:.0}</text>"#,
            xa = x0,
            xb = x0 + plot_w,
            grid = "#cccccc",
            xt = x0 - 8.0,
            yt = y + 4.0
        ));
        decade += 1.0;
    }
    let x_ticks = ((x_max - x_min).round() as usize).clamp(1, 10);
    for i in 0..=x_ticks {
        let x = x_min + x_span * i as f64 / x_ticks as f64;
        s.push_str(&format!(
            r#"<text x="{px:.1}" y="{py:.1}" font-size="11" font-family="sans-serif" text-anchor="middle">{x:.0}</text>"#,
            px = sx(x),
            py = y0 + 18.0
        ));
    }
    s.push_str(&format!(
        r#"<text x="{x}" y="{y}" font-size="13" font-family="sans-serif" text-anchor="middle">{t}</text>"#,
        x = x0 + plot_w / 2.0,
        y = y0 + 42.0,
        t = esc(x_label)
    ));
    s.push_str(&format!(
        r#"<text x="18" y="{y}" font-size="13" font-family="sans-serif" transform="rotate(-90 18 {y})" text-anchor="middle">{t}</text>"#,
        y = MARGIN_TOP + plot_h / 2.0,
        t = esc(y_label)
    ));

    for (si, sr) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let pts: Vec<(f64, f64)> = sr
            .points
            .iter()
            .filter(|(_, y)| *y > 0.0)
            .map(|&(x, y)| (sx(x), sy(y)))
            .collect();
        if pts.is_empty() {
            continue;
        }
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
        s.push_str(&format!(
            r#"<polyline class="series" points="{p}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            p = path.join(" ")
        ));
        for (x, y) in &pts {
            s.push_str(&format!(
                r#"<circle cx="{x:.1}" cy="{y:.1}" r="3.5" fill="{color}"/>"#
            ));
        }
        let lx = WIDTH - MARGIN_RIGHT + 16.0;
        let ly = MARGIN_TOP + 10.0 + si as f64 * 22.0;
        s.push_str(&format!(
            r#"<line x1="{lx}" y1="{cy}" x2="{x2}" y2="{cy}" stroke="{color}" stroke-width="2"/><text x="{tx}" y="{ty}" font-size="12" font-family="sans-serif">{t}</text>"#,
            cy = ly + 6.0,
            x2 = lx + 16.0,
            tx = lx + 22.0,
            ty = ly + 10.0,
            t = esc(&sr.label)
        ));
    }
    s.push_str("</svg>\n");
    s
}
