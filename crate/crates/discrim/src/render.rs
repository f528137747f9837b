//! Presentation-only SVG rendering of a planar line arrangement in a chosen
//! affine chart. All geometry is computed exactly first; only the final
//! layout coordinates drop to floats.

use discrim_core::planar::{chart_matrix_t, incidence_stats, line_to_affine, projective_lines};
use discrim_core::{Arrangement, ProjectiveFlat, Scalar};

#[derive(Debug)]
pub struct RenderError(pub String);

fn to_f64(s: &Scalar) -> f64 {
    let (a, b) = s.components();
    let rat = |r: &num_rational::BigRational| {
        let n: f64 = r.numer().to_string().parse().unwrap_or(0.0);
        let d: f64 = r.denom().to_string().parse().unwrap_or(1.0);
        n / d
    };
    let d = match s {
        Scalar::Quadratic { d, .. } => (*d as f64).sqrt(),
        _ => 0.0,
    };
    rat(&a) + rat(&b) * d
}

/// Render the arrangement's lines (affine input or trace) in the chart that
/// sends the labeled line to infinity; with no chart, affine inputs use the
/// standard chart.
pub fn render_svg(arr: &Arrangement, chart_label: Option<&str>) -> Result<String, RenderError> {
    let lines = projective_lines(arr).map_err(|e| RenderError(e.to_string()))?;
    let labels: Vec<String> = arr.hyperplanes().iter().map(|h| h.label.clone()).collect();
    let infinity = match chart_label {
        Some(label) => {
            let idx = labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| RenderError(format!("no line labeled {label:?}")))?;
            lines[idx].clone()
        }
        None => ProjectiveFlat::new(&[Scalar::zero(), Scalar::zero(), Scalar::one()]),
    };
    let mt = chart_matrix_t(&infinity);
    let mut affine: Vec<(usize, [f64; 3])> = Vec::new();
    for (i, l) in lines.iter().enumerate() {
        if *l == infinity {
            continue;
        }
        match line_to_affine(&mt, l) {
            Some((normal, offset)) => {
                affine.push((i, [to_f64(&normal[0]), to_f64(&normal[1]), to_f64(&offset)]))
            }
            None => continue,
        }
    }
    // exact census drives the marked points
    let stats = incidence_stats(&lines).map_err(|e| RenderError(e.to_string()))?;
    let mut pts: Vec<(f64, f64, usize)> = Vec::new();
    for p in &stats.points {
        let c = p.point.coeffs();
        let hom: Vec<Scalar> = {
            // transform the point into the chart: x' = M x, with M = (M^T)^T
            let mut out = Vec::new();
            for r in 0..3 {
                let mut acc = Scalar::zero();
                for k in 0..3 {
                    // row r of M = column r of M^T
                    acc = &acc + &(&mt[(k, r)] * &c[k]);
                }
                out.push(acc);
            }
            out
        };
        if hom[2].is_zero() {
            continue;
        }
        let x = to_f64(&(&hom[0] / &hom[2]));
        let y = to_f64(&(&hom[1] / &hom[2]));
        pts.push((x, y, p.lines.len()));
    }
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
    for &(x, y, _) in &pts {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let margin = 0.2 * ((hi_x - lo_x).max(hi_y - lo_y)).max(1.0);
    lo_x -= margin;
    hi_x += margin;
    lo_y -= margin;
    hi_y += margin;
    let size = 720.0;
    let scale = size / (hi_x - lo_x).max(hi_y - lo_y);
    let px = |x: f64| (x - lo_x) * scale + 40.0;
    let py = |y: f64| size + 40.0 - (y - lo_y) * scale;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
        size + 80.0
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (i, [a, b, c]) in &affine {
        // a x + b y = c clipped to the viewbox
        let mut ends: Vec<(f64, f64)> = Vec::new();
        for x in [lo_x, hi_x] {
            if b.abs() > 1e-12 {
                let y = (c - a * x) / b;
                if (lo_y..=hi_y).contains(&y) {
                    ends.push((x, y));
                }
            }
        }
        for y in [lo_y, hi_y] {
            if a.abs() > 1e-12 {
                let x = (c - b * y) / a;
                if (lo_x..=hi_x).contains(&x) {
                    ends.push((x, y));
                }
            }
        }
        ends.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-9 && (p.1 - q.1).abs() < 1e-9);
        if ends.len() >= 2 {
            let (x1, y1) = ends[0];
            let (x2, y2) = ends[ends.len() - 1];
            svg.push_str(&format!(
                "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#336\" stroke-width=\"1.2\"/>\n",
                px(x1), py(y1), px(x2), py(y2)
            ));
            let lx = px(x1) + 0.08 * (px(x2) - px(x1));
            let ly = py(y1) + 0.08 * (py(y2) - py(y1));
            svg.push_str(&format!(
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#336\">{}</text>\n",
                lx, ly, labels[*i]
            ));
        }
    }
    for &(x, y, mult) in &pts {
        if mult < 2 {
            continue;
        }
        let r = 2.5 + 1.5 * (mult as f64 - 2.0);
        let fill = if mult == 2 { "#999" } else { "#c33" };
        svg.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.1}\" fill=\"{}\"/>\n",
            px(x),
            py(y),
            r,
            fill
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_the_six_line_fixture() {
        let arr = Arrangement::from_int_lines(
            2,
            &[
                (vec![-2, 2], -1),
                (vec![-3, 4], 0),
                (vec![0, 6], 9),
                (vec![2, 4], 4),
                (vec![3, 2], 0),
                (vec![-1, 2], 0),
            ],
        );
        let svg = render_svg(&arr, None).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.matches("<line").count() >= 6);
        let with_chart = render_svg(&arr, Some("l3")).unwrap();
        assert!(with_chart.matches("<line").count() >= 5);
        assert!(render_svg(&arr, Some("nope")).is_err());
    }
}
