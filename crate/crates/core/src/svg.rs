//! Minimal deterministic SVG text builder.

use std::fmt::Write;

/// Escapes text content and attribute values.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Formats a coordinate with two decimals, normalising `-0.00`.
pub fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

pub struct SvgDoc {
    body: String,
    view_box: (f64, f64, f64, f64),
    style: String,
    defs: String,
}

impl SvgDoc {
    pub fn new(min_x: f64, min_y: f64, width: f64, height: f64) -> Self {
        SvgDoc {
            body: String::new(),
            view_box: (min_x, min_y, width, height),
            style: String::new(),
            defs: String::new(),
        }
    }

    pub fn style(&mut self, css: &str) {
        self.style.push_str(css);
    }

    pub fn def(&mut self, raw: &str) {
        self.defs.push_str(raw);
        self.defs.push('\n');
    }

    /// Appends a raw element line; callers escape their own attribute values.
    pub fn push(&mut self, element: impl AsRef<str>) {
        self.body.push_str("  ");
        self.body.push_str(element.as_ref());
        self.body.push('\n');
    }

    pub fn text(&mut self, class: &str, x: f64, y: f64, content: &str) {
        self.push(format!(
            r#"<text class="{class}" x="{}" y="{}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
            num(x),
            num(y),
            escape(content)
        ));
    }

    pub fn finish(self) -> String {
        let (x, y, w, h) = self.view_box;
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="{}" height="{}">"#,
            num(x),
            num(y),
            num(w),
            num(h),
            num(w),
            num(h)
        );
        if !self.style.is_empty() {
            let _ = writeln!(out, "  <style>{}</style>", self.style);
        }
        if !self.defs.is_empty() {
            out.push_str("  <defs>\n");
            out.push_str(&self.defs);
            out.push_str("  </defs>\n");
        }
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}
