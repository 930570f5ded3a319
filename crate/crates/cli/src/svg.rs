//! Minimal SVG writer that tracks the extent of what it draws.

use std::fmt::Write;

use num_complex::Complex64;

/// Shapes are given in model coordinates with `y` up; the output flips
/// `y` and sizes the view box to the drawn geometry.
pub struct Svg {
    body: String,
    lo: Complex64,
    hi: Complex64,
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

impl Svg {
    pub fn new() -> Self {
        Svg {
            body: String::new(),
            lo: Complex64::new(f64::INFINITY, f64::INFINITY),
            hi: Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn cover(&mut self, p: Complex64, pad: f64) {
        self.lo = Complex64::new(self.lo.re.min(p.re - pad), self.lo.im.min(p.im - pad));
        self.hi = Complex64::new(self.hi.re.max(p.re + pad), self.hi.im.max(p.im + pad));
    }

    fn points_attr(&mut self, pts: &[Complex64]) -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            self.cover(*p, 0.0);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{},{}", num(p.re), num(-p.im));
        }
        s
    }

    pub fn polyline(&mut self, pts: &[Complex64], stroke: &str, width: f64) {
        let attr = self.points_attr(pts);
        let _ = writeln!(
            self.body,
            r#"<polyline points="{attr}" fill="none" stroke="{stroke}" stroke-width="{}" vector-effect="non-scaling-stroke"/>"#,
            num(width)
        );
    }

    pub fn polygon(&mut self, pts: &[Complex64], fill: &str) {
        let attr = self.points_attr(pts);
        let _ = writeln!(self.body, r#"<polygon points="{attr}" fill="{fill}" stroke="none"/>"#);
    }

    pub fn circle(&mut self, center: Complex64, r: f64, stroke: &str, width: f64) {
        self.cover(center, r);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{stroke}" stroke-width="{}" vector-effect="non-scaling-stroke"/>"#,
            num(center.re),
            num(-center.im),
            num(r),
            num(width)
        );
    }

    pub fn dot(&mut self, center: Complex64, r: f64, fill: &str) {
        self.cover(center, r);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
            num(center.re),
            num(-center.im),
            num(r)
        );
    }

    pub fn line(&mut self, a: Complex64, b: Complex64, stroke: &str, width: f64) {
        self.cover(a, 0.0);
        self.cover(b, 0.0);
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}" vector-effect="non-scaling-stroke"/>"#,
            num(a.re),
            num(-a.im),
            num(b.re),
            num(-b.im),
            num(width)
        );
    }

    /// Shaft from `a` to `b` with a filled head of length `head` at `b`.
    pub fn arrow(&mut self, a: Complex64, b: Complex64, head: f64, color: &str, width: f64) {
        self.line(a, b, color, width);
        let d = b - a;
        if d.norm() == 0.0 {
            return;
        }
        let u = d / d.norm();
        let h = head.min(0.5 * d.norm());
        let n = Complex64::i() * u;
        self.polygon(&[b, b - h * u + 0.4 * h * n, b - h * u - 0.4 * h * n], color);
    }

    /// Text anchored at its lower left corner; `size` is in model units.
    pub fn text(&mut self, at: Complex64, size: f64, text: &str) {
        self.cover(at, 0.0);
        self.cover(at + Complex64::new(0.6 * size * text.chars().count() as f64, size), 0.0);
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="{}" font-family="sans-serif">{}</text>"#,
            num(at.re),
            num(-at.im),
            num(size),
            escape(text)
        );
    }

    /// The document, with a margin of `margin` times the larger extent.
    pub fn finish(&self, margin: f64) -> String {
        let (lo, hi) = if self.lo.re.is_finite() {
            (self.lo, self.hi)
        } else {
            (Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0))
        };
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
        let pad = margin * span;
        let (x, y) = (lo.re - pad, -hi.im - pad);
        let (w, h) = (hi.re - lo.re + 2.0 * pad, hi.im - lo.im + 2.0 * pad);
        let px = 800.0;
        let (pw, ph) = if w >= h { (px, px * h / w) } else { (px * w / h, px) };
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"{:.0}\" height=\"{:.0}\">\n<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n{}</svg>\n",
            num(x),
            num(y),
            num(w),
            num(h),
            pw,
            ph,
            num(x),
            num(y),
            num(w),
            num(h),
            self.body
        )
    }
}
